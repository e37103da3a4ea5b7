"""Seeded random instances and a small fixed corpus of categories."""

from __future__ import annotations

import os
import random
from typing import Optional

from .cellcore import Comp, Gen, Generator, Polygraph, Unit
from .fincat import (FiniteCategory, chain_poset, cyclic_group, discrete_category, monoid_category,
                     poset_category, symmetric_group_s3, terminal_category)
from .slices import FunctorToBase

SEED_ENV = "POLYHOM_SEED"


def base_seed(default: int = 20240601) -> int:
    value = os.environ.get(SEED_ENV)
    return int(value) if value else default


def rng_for(index: int, salt: str = "") -> random.Random:
    """Independent generator for the index-th instance of a suite."""
    return random.Random(f"{base_seed()}:{salt}:{index}")


def random_poset(rng: random.Random, n: int, density: float = 0.4, top: bool = False) -> FiniteCategory:
    """A random order on 0..n-1 refining the natural order; with ``top`` the
    last element is above everything."""
    rel = {(i, i) for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density or (top and j == n - 1):
                rel.add((i, j))
    changed = True
    while changed:
        changed = False
        for (x, y) in list(rel):
            for (y2, z) in list(rel):
                if y == y2 and (x, z) not in rel:
                    rel.add((x, z))
                    changed = True
    return poset_category(range(n), lambda x, y: (x, y) in rel)


def random_transformation_monoid(rng: random.Random, size: int = 3, gens: int = 2,
                                 limit: int = 8) -> Optional[FiniteCategory]:
    """Monoid of maps {0..size-1} generated by random maps; None if it has
    more than ``limit`` elements."""
    ident = tuple(range(size))
    generators = [tuple(rng.randrange(size) for _ in range(size)) for _ in range(gens)]
    elems = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for f in frontier:
            for g in generators:
                h = tuple(g[f[i]] for i in range(size))
                if h not in elems:
                    elems.append(h)
                    nxt.append(h)
                    if len(elems) > limit:
                        return None
        frontier = nxt
    names = ["".join(map(str, e)) for e in elems]
    index = {e: i for i, e in enumerate(elems)}
    # table[i][j] = e_i o e_j
    table = [[names[index[tuple(g[f[k]] for k in range(size))]] for f in elems] for g in elems]
    return monoid_category(names, table, names[0])


def random_free_over_poset(rng: random.Random, base: FiniteCategory, max_gens: int = 8,
                           max_dim: int = 2) -> FunctorToBase:
    """A random free X of dimension <= max_dim with at most ``max_gens``
    generators, and a functor X -> base (base must be a poset category)."""
    objs = list(base.objects)
    n0 = rng.randint(1, min(3, max_gens))
    images0 = {f"x{i}": rng.choice(objs) for i in range(n0)}
    gens = [Generator(x, 0) for x in images0]
    budget = max_gens - n0
    n1 = rng.randint(0, budget) if max_dim >= 1 else 0
    images1 = {}
    edges = []  # (name, src, tgt)
    for i in range(n1):
        x = rng.choice(list(images0))
        ys = [y for y in images0 if base.hom(images0[x], images0[y])]
        y = rng.choice(ys)
        name = f"u{i}"
        images1[name] = base.hom(images0[x], images0[y])[0]
        edges.append((name, x, y))
        gens.append(Generator(name, 1, Gen(x, 0), Gen(y, 0)))
    budget -= n1
    if max_dim >= 2 and budget > 0:
        paths = _short_paths(list(images0), edges, 2)
        by_ends: dict = {}
        for start, end, path in paths:
            by_ends.setdefault((start, end), []).append(path)
        pairs = [(k, v) for k, v in by_ends.items() if v]
        for i in range(rng.randint(0, budget)):
            (start, _), candidates = rng.choice(pairs)
            gens.append(Generator(f"a{i}", 2, _path_expr(start, rng.choice(candidates)),
                                  _path_expr(start, rng.choice(candidates))))
    return FunctorToBase(Polygraph(gens), base, images0, images1)


def _short_paths(vertices, edges, length):
    out = [(v, v, ()) for v in vertices]
    layer = list(out)
    for _ in range(length):
        nxt = []
        for start, end, path in layer:
            for name, x, y in edges:
                if x == end:
                    nxt.append((start, y, path + (name,)))
        out += nxt
        layer = nxt
    return out


def _path_expr(start, path):
    if not path:
        return Unit(Gen(start, 0), 1)
    e = Gen(path[0], 1)
    for name in path[1:]:
        e = Comp(0, Gen(name, 1), e)
    return e


def random_category(rng: random.Random) -> FiniteCategory:
    """A random poset or small transformation monoid."""
    while True:
        if rng.random() < 0.6:
            return random_poset(rng, rng.randint(1, 5), rng.uniform(0.2, 0.7))
        m = random_transformation_monoid(rng, 3, rng.randint(1, 2), limit=8)
        if m is not None:
            return m


def _cat(objects, morphisms, identities, composition):
    return FiniteCategory(objects, morphisms, identities, composition)


def small_category_corpus() -> dict[str, FiniteCategory]:
    """Named categories with at most 3 objects and 8 morphisms."""
    corpus = {
        "terminal": terminal_category(),
        "discrete2": discrete_category(["a", "b"]),
        "discrete3": discrete_category(["a", "b", "c"]),
        "arrow": chain_poset(1),
        "chain2": chain_poset(2),
        "span": poset_category(["l", "m", "r"], lambda x, y: x == y or (x == "m" and y != "m")),
        "cospan": poset_category(["l", "m", "r"], lambda x, y: x == y or (y == "m" and x != "m")),
        "parallel": _cat(["0", "1"], {"i0": ("0", "0"), "i1": ("1", "1"), "f": ("0", "1"), "g": ("0", "1")},
                         {"0": "i0", "1": "i1"}, {}),
        "idempotent": monoid_category(["1", "e"], [["1", "e"], ["e", "e"]], "1"),
        "retract": _cat(["0", "1"],
                        {"i0": ("0", "0"), "i1": ("1", "1"), "s": ("0", "1"), "r": ("1", "0"), "e": ("1", "1")},
                        {"0": "i0", "1": "i1"},
                        {("r", "s"): "i0", ("s", "r"): "e", ("e", "s"): "s", ("r", "e"): "r",
                         ("e", "e"): "e"}),
        "arrow_with_loop": _cat(["0", "1"],
                                {"i0": ("0", "0"), "i1": ("1", "1"), "t": ("1", "1"), "f": ("0", "1"),
                                 "tf": ("0", "1")},
                                {"0": "i0", "1": "i1"},
                                {("t", "t"): "i1", ("t", "f"): "tf", ("t", "tf"): "f"}),
    }
    for m in (2, 3, 4):
        els, table, unit = cyclic_group(m)
        corpus[f"Z{m}"] = monoid_category([str(e) for e in els], [[str(x) for x in row] for row in table],
                                          str(unit))
    els, table, unit = symmetric_group_s3()
    name = lambda p: "".join(map(str, p))
    corpus["S3"] = monoid_category([name(e) for e in els], [[name(x) for x in row] for row in table], name(unit))
    corpus["two_loops_z2"] = _cat(
        ["0", "1"], {"i0": ("0", "0"), "i1": ("1", "1"), "n0": ("0", "0"), "n1": ("1", "1")},
        {"0": "i0", "1": "i1"}, {("n0", "n0"): "i0", ("n1", "n1"): "i1"})
    return corpus

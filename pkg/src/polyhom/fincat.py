"""Finite 1- and 2-categories given by tables, their nerves and normalized chains.

Objects, morphisms and 2-cells may be any hashable values; the JSON formats
use strings.  Composition is written ``compose(g, f) = g o f``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .cellcore import Comp, Gen, Generator, Polygraph, Unit
from .homalg import ChainComplex, IntMatrix


class CategoryError(ValueError):
    pass


def _label(x) -> str:
    if isinstance(x, tuple):
        return "(" + ",".join(_label(y) for y in x) + ")"
    return str(x)


class FiniteCategory:
    def __init__(self, objects: Iterable, morphisms: Mapping, identities: Mapping,
                 composition: Mapping, check: bool = True):
        self.objects = list(objects)
        self.morphisms = list(morphisms)
        self.src = {m: st[0] for m, st in morphisms.items()}
        self.tgt = {m: st[1] for m, st in morphisms.items()}
        self.identity = dict(identities)
        self.comp = dict(composition)
        # composites with identities may be omitted from the table
        for m in self.morphisms:
            for x, i in self.identity.items():
                if self.tgt[m] == x:
                    self.comp.setdefault((i, m), m)
                if self.src[m] == x:
                    self.comp.setdefault((m, i), m)
        self._hom: dict = {}
        for m in self.morphisms:
            self._hom.setdefault((self.src[m], self.tgt[m]), []).append(m)
        self._out: dict = {}
        for m in self.morphisms:
            self._out.setdefault(self.src[m], []).append(m)
        if check:
            problems = self.validate()
            if problems:
                raise CategoryError("invalid category:\n" + "\n".join(problems[:20]))

    def __repr__(self):
        return f"FiniteCategory({len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def hom(self, x, y) -> list:
        return self._hom.get((x, y), [])

    def outgoing(self, x) -> list:
        return self._out.get(x, [])

    def compose(self, g, f):
        try:
            return self.comp[g, f]
        except KeyError:
            if self.tgt.get(f) != self.src.get(g):
                raise CategoryError(f"{_label(g)} o {_label(f)} is not composable") from None
            raise CategoryError(f"composite {_label(g)} o {_label(f)} missing from table") from None

    def compose_path(self, path: Sequence, start) -> object:
        """Composite of morphisms listed in traversal order, starting at ``start``."""
        out = self.identity[start]
        for m in path:
            out = self.compose(m, out)
        return out

    def is_identity(self, m) -> bool:
        return self.identity.get(self.src[m]) == m

    def validate(self) -> list[str]:
        problems = []
        obs = set(self.objects)
        if len(obs) != len(self.objects):
            problems.append("duplicate objects")
        for m in self.morphisms:
            if self.src[m] not in obs or self.tgt[m] not in obs:
                problems.append(f"morphism {_label(m)} has an unknown endpoint")
        for x in self.objects:
            i = self.identity.get(x)
            if i is None or i not in self.src or self.src[i] != x or self.tgt[i] != x:
                problems.append(f"object {_label(x)} lacks a proper identity")
        if problems:
            return problems
        for (g, f), h in self.comp.items():
            if g not in self.src or f not in self.src:
                problems.append(f"composition entry {_label(g)} o {_label(f)} uses unknown morphisms")
            elif self.tgt[f] != self.src[g]:
                problems.append(f"composition entry {_label(g)} o {_label(f)} is not composable")
            elif h not in self.src or self.src[h] != self.src[f] or self.tgt[h] != self.tgt[g]:
                problems.append(f"{_label(g)} o {_label(f)} = {_label(h)} has wrong endpoints")
        for f in self.morphisms:
            for g in self.outgoing(self.tgt[f]):
                if (g, f) not in self.comp:
                    problems.append(f"composite {_label(g)} o {_label(f)} missing")
        if problems:
            return problems
        for f in self.morphisms:
            if self.comp[self.identity[self.tgt[f]], f] != f or self.comp[f, self.identity[self.src[f]]] != f:
                problems.append(f"unit law fails at {_label(f)}")
            for g in self.outgoing(self.tgt[f]):
                gf = self.comp[g, f]
                for h in self.outgoing(self.tgt[g]):
                    if self.comp[h, gf] != self.comp[self.comp[h, g], f]:
                        problems.append(f"associativity fails at {_label(h)}, {_label(g)}, {_label(f)}")
        return problems

    def as_2category(self) -> "Finite2Category":
        """The same category with identity 2-cells only."""
        return Finite2Category(
            self,
            cells2={m: (m, m) for m in self.morphisms},
            identities2={m: m for m in self.morphisms},
            vertical={(m, m): m for m in self.morphisms},
            horizontal=dict(self.comp),
        )

    def to_json(self) -> dict:
        return {
            "objects": [_label(x) for x in self.objects],
            "morphisms": [{"name": _label(m), "src": _label(self.src[m]), "tgt": _label(self.tgt[m])}
                          for m in self.morphisms],
            "identities": {_label(x): _label(i) for x, i in self.identity.items()},
            "composition": {f"{_label(g)}∘{_label(f)}": _label(h) for (g, f), h in self.comp.items()},
        }


@dataclass
class Functor:
    source: FiniteCategory
    target: FiniteCategory
    on_objects: dict
    on_morphisms: dict

    def __call__(self, m):
        return self.on_morphisms[m]

    def validate(self) -> list[str]:
        problems = []
        for x in self.source.objects:
            if self.on_objects.get(x) not in self.target.identity:
                problems.append(f"object {_label(x)} not sent to an object")
        for m in self.source.morphisms:
            fm = self.on_morphisms.get(m)
            if fm not in self.target.src:
                problems.append(f"morphism {_label(m)} not sent to a morphism")
            elif (self.target.src[fm], self.target.tgt[fm]) != (
                    self.on_objects.get(self.source.src[m]), self.on_objects.get(self.source.tgt[m])):
                problems.append(f"morphism {_label(m)}: endpoints not preserved")
        if problems:
            return problems
        for x in self.source.objects:
            if self.on_morphisms[self.source.identity[x]] != self.target.identity[self.on_objects[x]]:
                problems.append(f"identity of {_label(x)} not preserved")
        for (g, f), h in self.source.comp.items():
            if self.on_morphisms[h] != self.target.compose(self.on_morphisms[g], self.on_morphisms[f]):
                problems.append(f"composite {_label(g)} o {_label(f)} not preserved")
        return problems

    def is_isomorphism(self) -> bool:
        if self.validate():
            return False
        obs = [self.on_objects[x] for x in self.source.objects]
        mors = [self.on_morphisms[m] for m in self.source.morphisms]
        return (len(set(obs)) == len(obs) == len(self.target.objects)
                and len(set(mors)) == len(mors) == len(self.target.morphisms))

    def then(self, other: "Functor") -> "Functor":
        return Functor(self.source, other.target,
                       {x: other.on_objects[y] for x, y in self.on_objects.items()},
                       {m: other.on_morphisms[n] for m, n in self.on_morphisms.items()})


def identity_functor(c: FiniteCategory) -> Functor:
    return Functor(c, c, {x: x for x in c.objects}, {m: m for m in c.morphisms})


# -- standard categories -----------------------------------------------------

def poset_category(elements: Sequence, leq) -> FiniteCategory:
    """Category of a finite poset; the morphism x -> y is named ``(x, y)``."""
    elements = list(elements)
    mors = {(x, y): (x, y) for x in elements for y in elements if leq(x, y)}
    comp = {((y, z), (x, y)): (x, z) for (x, y) in mors for (y2, z) in mors if y2 == y}
    return FiniteCategory(elements, mors, {x: (x, x) for x in elements}, comp)


def chain_poset(n: int) -> FiniteCategory:
    """The ordinal [n] = {0 < 1 < ... < n}."""
    return poset_category(range(n + 1), lambda x, y: x <= y)


def terminal_category() -> FiniteCategory:
    return FiniteCategory(["*"], {"id": ("*", "*")}, {"*": "id"}, {})


def discrete_category(objects: Sequence) -> FiniteCategory:
    return FiniteCategory(objects, {("id", x): (x, x) for x in objects},
                          {x: ("id", x) for x in objects}, {})


def monoid_category(elements: Sequence, table: Sequence[Sequence], unit, obj="*") -> FiniteCategory:
    """One-object category; ``table[i][j]`` is elements[i] * elements[j] = e_i o e_j."""
    elements = list(elements)
    comp = {(g, f): table[i][j] for i, g in enumerate(elements) for j, f in enumerate(elements)}
    return FiniteCategory([obj], {e: (obj, obj) for e in elements}, {obj: unit}, comp)


def cyclic_group(m: int) -> tuple[list[int], list[list[int]], int]:
    els = list(range(m))
    return els, [[(a + b) % m for b in els] for a in els], 0


def symmetric_group_s3() -> tuple[list, list[list], tuple]:
    els = sorted(itertools.permutations(range(3)))
    table = [[tuple(a[b[i]] for i in range(3)) for b in els] for a in els]
    return els, table, (0, 1, 2)


def find_terminal(c: FiniteCategory):
    """An object receiving exactly one morphism from every object, or None."""
    for t in c.objects:
        if all(len(c.hom(x, t)) == 1 for x in c.objects):
            return t
    return None


# -- 2-categories ------------------------------------------------------------

class Finite2Category:
    """A 2-category: an underlying 1-category plus 2-cell tables.

    ``vertical[(b, a)]`` is b *_1 a (a first), ``horizontal[(b, a)]`` is b *_0 a.
    """

    def __init__(self, base: FiniteCategory, cells2: Mapping, identities2: Mapping,
                 vertical: Mapping, horizontal: Mapping, check: bool = True):
        self.base = base
        self.cells2 = list(cells2)
        self.src2 = {c: st[0] for c, st in cells2.items()}
        self.tgt2 = {c: st[1] for c, st in cells2.items()}
        self.id2 = dict(identities2)
        self.vert = dict(vertical)
        self.horiz = dict(horizontal)
        for a in self.cells2:
            self.vert.setdefault((self.id2.get(self.tgt2[a]), a), a)
            self.vert.setdefault((a, self.id2.get(self.src2[a])), a)
            s, t = self.s0(a), self.t0(a)
            self.horiz.setdefault((self.id2.get(base.identity.get(t)), a), a)
            self.horiz.setdefault((a, self.id2.get(base.identity.get(s))), a)
        for f in base.morphisms:
            for g in base.outgoing(base.tgt[f]):
                if f in self.id2 and g in self.id2:
                    self.horiz.setdefault((self.id2[g], self.id2[f]), self.id2.get(base.compose(g, f)))
        self._by_boundary: dict = {}
        for a in self.cells2:
            self._by_boundary.setdefault((self.src2[a], self.tgt2[a]), []).append(a)
        if check:
            problems = self.validate()
            if problems:
                raise CategoryError("invalid 2-category:\n" + "\n".join(problems[:20]))

    def __repr__(self):
        return f"Finite2Category({len(self.base.objects)}, {len(self.base.morphisms)}, {len(self.cells2)})"

    def s0(self, a):
        return self.base.src[self.src2[a]]

    def t0(self, a):
        return self.base.tgt[self.src2[a]]

    def cells_between(self, f, g) -> list:
        return self._by_boundary.get((f, g), [])

    def validate(self) -> list[str]:
        b = self.base
        problems = []
        for a in self.cells2:
            f, g = self.src2[a], self.tgt2[a]
            if f not in b.src or g not in b.src:
                problems.append(f"2-cell {_label(a)} has unknown boundary")
            elif (b.src[f], b.tgt[f]) != (b.src[g], b.tgt[g]):
                problems.append(f"2-cell {_label(a)}: source and target not parallel")
        for f in b.morphisms:
            i = self.id2.get(f)
            if i not in self.src2 or self.src2[i] != f or self.tgt2[i] != f:
                problems.append(f"1-cell {_label(f)} lacks an identity 2-cell")
        if problems:
            return problems
        for (y, x), z in self.vert.items():
            if x not in self.src2 or y not in self.src2 or self.tgt2[x] != self.src2[y]:
                problems.append(f"vertical entry {_label(y)} *1 {_label(x)} not composable")
            elif z not in self.src2 or (self.src2[z], self.tgt2[z]) != (self.src2[x], self.tgt2[y]):
                problems.append(f"vertical {_label(y)} *1 {_label(x)} has wrong boundary")
        for (y, x), z in self.horiz.items():
            if x not in self.src2 or y not in self.src2 or self.t0(x) != self.s0(y):
                problems.append(f"horizontal entry {_label(y)} *0 {_label(x)} not composable")
            elif z not in self.src2 or (self.src2[z], self.tgt2[z]) != (
                    b.compose(self.src2[y], self.src2[x]), b.compose(self.tgt2[y], self.tgt2[x])):
                problems.append(f"horizontal {_label(y)} *0 {_label(x)} has wrong boundary")
        if problems:
            return problems
        cells = self.cells2
        for x in cells:
            for y in cells:
                if self.tgt2[x] == self.src2[y] and (y, x) not in self.vert:
                    problems.append(f"vertical composite {_label(y)} *1 {_label(x)} missing")
                if self.t0(x) == self.s0(y) and (y, x) not in self.horiz:
                    problems.append(f"horizontal composite {_label(y)} *0 {_label(x)} missing")
        if problems:
            return problems
        for f, i in self.id2.items():
            for g, j in self.id2.items():
                if b.tgt[f] == b.src[g] and self.horiz[j, i] != self.id2[b.compose(g, f)]:
                    problems.append(f"identity 2-cells do not compose horizontally at {_label(g)}, {_label(f)}")
        for x in cells:
            for y in cells:
                if self.tgt2[x] == self.src2[y]:
                    for z in cells:
                        if self.tgt2[y] == self.src2[z] and \
                                self.vert[z, self.vert[y, x]] != self.vert[self.vert[z, y], x]:
                            problems.append("vertical composition not associative")
                if self.t0(x) == self.s0(y):
                    for z in cells:
                        if self.t0(y) == self.s0(z) and \
                                self.horiz[z, self.horiz[y, x]] != self.horiz[self.horiz[z, y], x]:
                            problems.append("horizontal composition not associative")
        # interchange: (x *1 y) *0 (z *1 w) = (x *0 z) *1 (y *0 w)
        for y, x in self.vert:
            for w, z in self.vert:
                if self.t0(z) == self.s0(x):
                    lhs = self.horiz[self.vert[x, y], self.vert[z, w]]
                    rhs = self.vert[self.horiz[x, z], self.horiz[y, w]]
                    if lhs != rhs:
                        problems.append(f"interchange fails for {_label(x)}, {_label(y)}, {_label(z)}, {_label(w)}")
        return problems


def delooping(elements: Sequence, table: Sequence[Sequence], unit, n: int):
    """B^n G for a finite group G given by its multiplication table, n in {1, 2}."""
    elements = list(elements)
    pos = {e: i for i, e in enumerate(elements)}
    op = lambda a, b: table[pos[a]][pos[b]]
    for a in elements:
        if op(unit, a) != a or op(a, unit) != a:
            raise CategoryError(f"{a!r}: unit law fails")
        if not any(op(a, b) == unit for b in elements):
            raise CategoryError(f"{a!r} has no inverse")
        for b in elements:
            if op(a, b) not in pos:
                raise CategoryError("table is not closed")
            for c in elements:
                if op(op(a, b), c) != op(a, op(b, c)):
                    raise CategoryError("table is not associative")
    if n == 1:
        return monoid_category(elements, table, unit)
    if n != 2:
        raise CategoryError("delooping is implemented for n = 1, 2")
    if any(op(a, b) != op(b, a) for a in elements for b in elements):
        raise CategoryError("B^2 G needs an abelian group (Eckmann-Hilton)")
    base = FiniteCategory(["*"], {"1": ("*", "*")}, {"*": "1"}, {})
    comp = {(b, a): op(b, a) for a in elements for b in elements}
    return Finite2Category(base, {a: ("1", "1") for a in elements}, {"1": unit}, comp, dict(comp))


# -- simplicial truncations --------------------------------------------------

@dataclass
class NerveTruncation:
    """Simplices in degrees 0..D with face indices and degeneracy flags.

    ``faces[n][j][i]`` is the index in degree n-1 of the i-th face of simplex j.
    """

    simplices: list[list] = field(default_factory=list)
    faces: list[list[tuple[int, ...]]] = field(default_factory=list)
    degenerate: list[list[bool]] = field(default_factory=list)
    vertices: list[list[tuple]] = field(default_factory=list)

    @property
    def max_dim(self) -> int:
        return len(self.simplices) - 1

    def count(self, n: int) -> int:
        return len(self.simplices[n])

    def nondegenerate(self, n: int) -> list[int]:
        return [j for j, d in enumerate(self.degenerate[n]) if not d]

    def label(self, n: int, j: int) -> str:
        return _label(self.simplices[n][j])


def check_simplicial_identities(nerve: NerveTruncation) -> list[str]:
    """d_i d_j = d_{j-1} d_i for i < j on every stored simplex."""
    problems = []
    for n in range(2, nerve.max_dim + 1):
        for k, fs in enumerate(nerve.faces[n]):
            for j in range(n + 1):
                for i in range(j):
                    if nerve.faces[n - 1][fs[j]][i] != nerve.faces[n - 1][fs[i]][j - 1]:
                        problems.append(f"d{i} d{j} != d{j - 1} d{i} on {nerve.label(n, k)}")
    return problems


def classical_nerve(c: FiniteCategory, max_dim: int) -> NerveTruncation:
    """Composable chains x0 -f1-> x1 -> ... -fn-> xn, for n <= max_dim."""
    nerve = NerveTruncation()
    nerve.simplices.append(list(c.objects))
    nerve.faces.append([()] * len(c.objects))
    nerve.degenerate.append([False] * len(c.objects))
    nerve.vertices.append([(x,) for x in c.objects])
    index = [{x: i for i, x in enumerate(c.objects)}]
    for n in range(1, max_dim + 1):
        if n == 1:
            simplices = [(m,) for m in c.morphisms]
        else:
            simplices = [s + (m,) for s in nerve.simplices[n - 1] for m in c.outgoing(c.tgt[s[-1]])]
        index.append({s: i for i, s in enumerate(simplices)})
        faces = []
        for s in simplices:
            if n == 1:
                fs = (c.tgt[s[0]], c.src[s[0]])
            else:
                fs = tuple(s[1:] if i == 0 else s[:-1] if i == n else
                           s[:i - 1] + (c.compose(s[i], s[i - 1]),) + s[i + 1:] for i in range(n + 1))
            faces.append(tuple(index[n - 1][f] for f in fs))
        nerve.simplices.append(simplices)
        nerve.faces.append(faces)
        nerve.degenerate.append([any(c.is_identity(m) for m in s) for s in simplices])
        nerve.vertices.append([(c.src[s[0]],) + tuple(c.tgt[m] for m in s) for s in simplices])
    return nerve


def normalized_chains(nerve: NerveTruncation) -> ChainComplex:
    """Chains on nondegenerate simplices with d = sum (-1)^i d_i; faces that are
    degenerate are dropped.  Certified below the truncation degree."""
    basis = [nerve.nondegenerate(n) for n in range(nerve.max_dim + 1)]
    pos = [{j: i for i, j in enumerate(b)} for b in basis]
    diffs = []
    for n in range(1, nerve.max_dim + 1):
        d = IntMatrix(len(basis[n - 1]), len(basis[n]))
        for col, j in enumerate(basis[n]):
            for i, f in enumerate(nerve.faces[n][j]):
                row = pos[n - 1].get(f)
                if row is not None:
                    d[row, col] += -1 if i % 2 else 1
        diffs.append(d)
    labels = [[nerve.label(n, j) for j in b] for n, b in enumerate(basis)]
    return ChainComplex([len(b) for b in basis], diffs, labels, nerve.max_dim)


def unnormalized_chains(nerve: NerveTruncation) -> ChainComplex:
    """Chains on all simplices (the Moore complex)."""
    diffs = []
    for n in range(1, nerve.max_dim + 1):
        d = IntMatrix(nerve.count(n - 1), nerve.count(n))
        for j, fs in enumerate(nerve.faces[n]):
            for i, f in enumerate(fs):
                d[f, j] += -1 if i % 2 else 1
        diffs.append(d)
    labels = [[nerve.label(n, j) for j in range(nerve.count(n))] for n in range(nerve.max_dim + 1)]
    return ChainComplex([nerve.count(n) for n in range(nerve.max_dim + 1)], diffs, labels, nerve.max_dim)


# -- orientals and the Street nerve ------------------------------------------

def oriental_name(seq: Sequence[int]) -> str:
    return "<" + "".join(map(str, seq)) + ">"


def oriental_sequences(n: int) -> list[tuple[int, ...]]:
    return [s for k in range(1, n + 2) for s in itertools.combinations(range(n + 1), k)]


def oriental(n: int) -> Polygraph:
    """The n-th oriental for n <= 3; generators are increasing sequences."""
    if not 0 <= n <= 3:
        raise CategoryError(f"orientals are hard-coded up to dimension 3, asked for {n}")
    g = lambda *seq: Gen(oriental_name(seq), len(seq) - 1)
    gens = []
    for seq in oriental_sequences(n):
        name, d = oriental_name(seq), len(seq) - 1
        if d == 0:
            gens.append(Generator(name, 0))
        elif d == 1:
            i, j = seq
            gens.append(Generator(name, 1, g(i), g(j)))
        elif d == 2:
            i, j, k = seq
            gens.append(Generator(name, 2, g(i, k), Comp(0, g(j, k), g(i, j))))
        else:
            gens.append(Generator(
                name, 3,
                Comp(1, Comp(0, g(2, 3), g(0, 1, 2)), g(0, 2, 3)),
                Comp(1, Comp(0, g(1, 2, 3), g(0, 1)), g(0, 1, 3)),
            ))
    return Polygraph(gens)


def _evaluate(c2: Finite2Category, p: Polygraph, e, assign: Mapping[str, tuple]):
    """Value (dim, cell) of a cell expression in c2, or None if some composite
    is undefined there."""
    if isinstance(e, Gen):
        return assign[e.name]
    if e.dim > 2:
        raise CategoryError("cannot evaluate cells above dimension 2 in a 2-category")
    if isinstance(e, Unit):
        v = _evaluate(c2, p, e.base, assign)
        return None if v is None else _lift(c2, v, e.to_dim)
    left = _evaluate(c2, p, e.left, assign)
    right = _evaluate(c2, p, e.right, assign)
    if left is None or right is None:
        return None
    n = e.dim
    x, y = _lift(c2, left, n)[1], _lift(c2, right, n)[1]
    if n == 1:
        z = c2.base.comp.get((x, y))
        return None if z is None else (1, z)
    table = c2.horiz if e.k == 0 else c2.vert
    z = table.get((x, y))
    return None if z is None else (2, z)


def _lift(c2: Finite2Category, value, n: int):
    d, x = value
    if d < 1 <= n:
        x, d = c2.base.identity[x], 1
    if d < 2 <= n:
        x, d = c2.id2[x], 2
    return (d, x)


def _street_simplices(c2: Finite2Category, n: int) -> list[tuple]:
    """All omega-functors O_n -> c2, as tuples of cells in generator order
    (dimension <= 2 generators; the 3-cell image is forced to be a unit)."""
    o = oriental(n)
    gens = o.generators()
    low = [g for g in gens if g.dim <= 2]
    out = []
    assign: dict = {}

    def candidates(g):
        if g.dim == 0:
            return [(0, x) for x in c2.base.objects]
        src = _evaluate(c2, o, g.source, assign)
        tgt = _evaluate(c2, o, g.target, assign)
        if src is None or tgt is None:
            return []
        if g.dim == 1:
            return [(1, m) for m in c2.base.hom(src[1], tgt[1])]
        return [(2, a) for a in c2.cells_between(src[1], tgt[1])]

    def coherent():
        for g in gens:
            if g.dim == 3:
                src = _evaluate(c2, o, g.source, assign)
                tgt = _evaluate(c2, o, g.target, assign)
                if src is None or src != tgt:
                    return False
        return True

    def extend(i):
        if i == len(low):
            if coherent():
                out.append(tuple(assign[g.name][1] for g in low))
            return
        g = low[i]
        for v in candidates(g):
            assign[g.name] = v
            extend(i + 1)
        assign.pop(g.name, None)

    extend(0)
    return out


def street_nerve(c2: Finite2Category, max_dim: int) -> NerveTruncation:
    """Nerve [n] -> Hom(O_n, c2) for n <= max_dim <= 3."""
    if max_dim > 3:
        raise CategoryError("the Street nerve is implemented up to degree 3")
    seqs = {n: [s for s in oriental_sequences(n) if len(s) <= 3] for n in range(max_dim + 1)}
    nerve = NerveTruncation()
    index = []
    nerve_maps_prev = []
    for n in range(max_dim + 1):
        simplices = _street_simplices(c2, n)
        # degree 0 simplices are plain objects
        keys = [s[0] for s in simplices] if n == 0 else simplices
        index.append({k: i for i, k in enumerate(keys)})
        as_map = [dict(zip(seqs[n], s)) for s in simplices]
        faces = []
        if n > 0:
            for y in as_map:
                fs = []
                for i in range(n + 1):
                    shift = lambda seq: tuple(k if k < i else k + 1 for k in seq)
                    face = tuple(y[shift(seq)] for seq in seqs[n - 1])
                    fs.append(index[n - 1][face[0] if n == 1 else face])
                faces.append(tuple(fs))
        else:
            faces = [()] * len(keys)
        degenerate = [False] * len(keys)
        if n > 0:
            for y in nerve_maps_prev:
                for j in range(n):
                    key = _degeneracy(c2, y, j, seqs[n])
                    degenerate[index[n][key]] = True
        nerve.simplices.append(keys)
        nerve.faces.append(faces)
        nerve.degenerate.append(degenerate)
        nerve.vertices.append([tuple(y[(i,)] for i in range(n + 1)) for y in as_map])
        nerve_maps_prev = as_map
    return nerve


def _degeneracy(c2: Finite2Category, y: Mapping, j: int, seqs_n) -> tuple:
    """s_j of an (n-1)-simplex given as {sequence: cell}."""
    out = []
    for seq in seqs_n:
        col = tuple(k if k <= j else k - 1 for k in seq)
        if len(set(col)) == len(col):
            out.append(y[col])
        elif len(seq) == 2:
            out.append(c2.base.identity[y[(col[0],)]])
        else:
            edge = (col[0], col[2])
            out.append(c2.id2[y[edge]])
    return out[0] if len(seqs_n) == 1 else tuple(out)


def classical_to_street(nerve_key, n: int, c: FiniteCategory):
    """The Street simplex of a 1-category corresponding to a classical simplex."""
    if n == 0:
        return nerve_key
    seqs = [s for s in oriental_sequences(n) if len(s) <= 3]
    verts = [c.src[nerve_key[0]]] + [c.tgt[m] for m in nerve_key]
    out = []
    for seq in seqs:
        if len(seq) == 1:
            out.append(verts[seq[0]])
        else:
            i, j = seq[0], seq[-1]
            m = c.compose_path(nerve_key[i:j], verts[i])
            out.append(m)
    return tuple(out)


# -- JSON formats ------------------------------------------------------------

def _split_comp_key(key: str) -> tuple[str, str]:
    if "∘" not in key:
        raise CategoryError(f"composition key {key!r} must look like 'g∘f'")
    g, f = key.split("∘", 1)
    return g.strip(), f.strip()


def category_from_json(obj: dict) -> FiniteCategory:
    if "monoid" in obj:
        m = obj["monoid"]
        return monoid_category(m["elements"], m["table"], m["unit"], m.get("object", "*"))
    if "poset" in obj:
        p = obj["poset"]
        rel = {(x, y) for x, y in p.get("relations", [])}
        els = p["elements"]
        leq = _transitive_closure(els, rel)
        return poset_category(els, lambda x, y: (x, y) in leq)
    try:
        mors = {m["name"]: (m["src"], m["tgt"]) for m in obj["morphisms"]}
        comp = {_split_comp_key(k): v for k, v in obj.get("composition", {}).items()}
        return FiniteCategory(obj["objects"], mors, obj["identities"], comp)
    except KeyError as e:
        raise CategoryError(f"category JSON lacks {e}") from None


def _transitive_closure(els, rel) -> set:
    leq = {(x, x) for x in els} | set(rel)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(leq):
            for (c, d) in list(leq):
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
    return leq


def two_category_from_json(obj: dict) -> Finite2Category:
    if "delooping" in obj:
        d = obj["delooping"]
        g = d["group"]
        res = delooping(g["elements"], g["table"], g["unit"], d.get("n", 2))
        return res if isinstance(res, Finite2Category) else res.as_2category()
    base = category_from_json(obj)
    if "cells2" not in obj:
        return base.as_2category()
    cells = {c["name"]: (c["src"], c["tgt"]) for c in obj["cells2"]}
    vert = {_split_comp_key(k): v for k, v in obj.get("vertical", {}).items()}
    horiz = {_split_comp_key(k): v for k, v in obj.get("horizontal", {}).items()}
    return Finite2Category(base, cells, obj["identities2"], vert, horiz)

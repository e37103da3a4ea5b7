"""Slices of free omega-categories over a 1-category, their colimit, discrete
Conduché functors and the Grothendieck construction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from scipy.cluster.hierarchy import DisjointSet

from .cellcore import (CellExpr, Comp, Gen, Generator, Polygraph, Unit, rename,
                       to_text, validate_polygraph)
from .fincat import CategoryError, FiniteCategory, Functor, _label, identity_functor


class SliceError(ValueError):
    pass


@dataclass
class FunctorToBase:
    """An omega-functor from a free X to a 1-category A, given on generators of
    dimension 0 and 1 (higher generators go to units)."""

    polygraph: Polygraph
    base: FiniteCategory
    images0: dict
    images1: dict

    def validate(self) -> list[str]:
        p, a = self.polygraph, self.base
        problems = [f"polygraph: {msg}" for msg in validate_polygraph(p).problems]
        if problems:
            return problems
        for g in p.generators(0):
            if self.images0.get(g.name) not in a.identity:
                problems.append(f"0-generator {g.name!r} has no object image")
        for g in p.generators(1):
            m = self.images1.get(g.name)
            if m not in a.src:
                problems.append(f"1-generator {g.name!r} has no morphism image")
            elif (a.src[m], a.tgt[m]) != (self.images0.get(g.source.name), self.images0.get(g.target.name)):
                problems.append(f"1-generator {g.name!r}: image {_label(m)} has the wrong endpoints")
        if problems:
            return problems
        for g in p.generators():
            if g.dim >= 2:
                ms, mt = self.on_one_cell(p.s(g.source, 1)), self.on_one_cell(p.t(g.target, 1))
                if ms != mt:
                    problems.append(f"generator {g.name!r}: boundary 1-cells map to "
                                    f"{_label(ms)} and {_label(mt)}")
        return problems

    def check(self) -> "FunctorToBase":
        problems = self.validate()
        if problems:
            raise SliceError("invalid functor:\n" + "\n".join(problems))
        return self

    def on_object(self, name: str):
        return self.images0[name]

    def on_one_cell(self, e: CellExpr):
        """Image in A of a 1-cell expression."""
        start, path, _ = self.polygraph.path(e)
        return self.base.compose_path([self.images1[g] for g in path], self.images0[start])

    def shadow(self, e: CellExpr):
        """Image in A of the 1-dimensional shadow of a cell of dimension >= 1."""
        return self.on_one_cell(self.polygraph.s(e, 1))

    def anchors(self, g: Generator, a) -> list:
        """Morphisms f(t0 g) -> a of A."""
        start = self.images0[self.polygraph.t0(Gen(g.name, g.dim))]
        return self.base.hom(start, a)


def slice_name(g: str, p) -> str:
    return f"{g}@{_label(p)}"


@dataclass
class Slice:
    """X/a as a polygraph, together with the pair behind each generator."""

    obj: object
    polygraph: Polygraph
    pairs: dict  # slice generator name -> (generator of X, anchor)
    names: dict  # (generator of X, anchor) -> slice generator name


def _anchor(f: FunctorToBase, e: CellExpr, p, names: Mapping) -> CellExpr:
    """Lift a cell of X whose 0-target is anchored by p to a cell of the slice."""
    if isinstance(e, Gen):
        return Gen(names[e.name, p], e.dim)
    if isinstance(e, Unit):
        return Unit(_anchor(f, e.base, p, names), e.to_dim)
    if e.k >= 1:
        return Comp(e.k, _anchor(f, e.left, p, names), _anchor(f, e.right, p, names))
    # x *_0 y: y ends where x starts, so its anchor is p after the image of x
    q = f.base.compose(p, f.shadow(e.left))
    return Comp(0, _anchor(f, e.left, p, names), _anchor(f, e.right, q, names))


def slice_polygraph(f: FunctorToBase, a, check: bool = True) -> Slice:
    """Generators (g, p) for g generating X and p : f(t0 g) -> a."""
    if check:
        f.check()
    if a not in f.base.identity:
        raise SliceError(f"{a!r} is not an object of the base")
    x = f.polygraph
    names, pairs = {}, {}
    order = []
    for g in x.generators():
        for p in f.anchors(g, a):
            n = slice_name(g.name, p)
            names[g.name, p] = n
            pairs[n] = (g.name, p)
            order.append((g, p, n))
    gens = []
    for g, p, n in order:
        if g.dim == 0:
            gens.append(Generator(n, 0))
        elif g.dim == 1:
            # the source 0-cell is anchored through the image of g itself
            q = f.base.compose(p, f.images1[g.name])
            gens.append(Generator(n, 1, Gen(names[g.source.name, q], 0), Gen(names[g.target.name, p], 0)))
        else:
            gens.append(Generator(n, g.dim, _anchor(f, g.source, p, names), _anchor(f, g.target, p, names)))
    return Slice(a, Polygraph(gens, x.truncation), pairs, names)


def slice_map(f: FunctorToBase, beta, src: Optional[Slice] = None, tgt: Optional[Slice] = None) -> dict:
    """Generator map X/a -> X/a' induced by beta : a -> a', (g, p) |-> (g, beta o p)."""
    a, b = f.base.src[beta], f.base.tgt[beta]
    src = src or slice_polygraph(f, a, check=False)
    tgt = tgt or slice_polygraph(f, b, check=False)
    return {n: tgt.names[g, f.base.compose(beta, p)] for n, (g, p) in src.pairs.items()}


def map_commutes_with_boundaries(src: Polygraph, tgt: Polygraph, mapping: Mapping[str, str]) -> list[str]:
    """A generator-to-generator map is an omega-functor iff it carries every
    boundary expression to the boundary expression of the image."""
    problems = []
    for g in src.generators():
        h = tgt.generator(mapping[g.name])
        if h.dim != g.dim:
            problems.append(f"{g.name} -> {h.name} changes dimension")
        elif g.dim > 0:
            for side, e, e2 in (("source", g.source, h.source), ("target", g.target, h.target)):
                if rename(e, mapping) != e2:
                    problems.append(f"{side} of {g.name}: {to_text(rename(e, mapping))} != {to_text(e2)}")
    return problems


def slice_category(c: FiniteCategory, a) -> tuple[FiniteCategory, Functor]:
    """The category A/a and its projection to A.

    Objects are the morphisms p : b -> a; a morphism (h, p, q) : p -> q
    satisfies q o h = p.
    """
    objs = [p for p in c.morphisms if c.tgt[p] == a]
    mors = {}
    for p in objs:
        for q in objs:
            for h in c.hom(c.src[p], c.src[q]):
                if c.compose(q, h) == p:
                    mors[(h, p, q)] = (p, q)
    comp = {}
    for (h, p, q) in mors:
        for (k, q2, r) in mors:
            if q2 == q:
                comp[(k, q, r), (h, p, q)] = (c.compose(k, h), p, r)
    ids = {p: (c.identity[c.src[p]], p, p) for p in objs}
    sl = FiniteCategory(objs, mors, ids, comp)
    proj = Functor(sl, c, {p: c.src[p] for p in objs}, {m: m[0] for m in mors})
    return sl, proj


@dataclass
class ReassemblyReport:
    classes: dict = field(default_factory=dict)  # representative name -> generator of X
    polygraph: Optional[Polygraph] = None
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def reassemble(f: FunctorToBase, check: bool = True) -> ReassemblyReport:
    """Glue the slices X/a along the maps X/beta and compare the result with X."""
    if check:
        f.check()
    a_cat, x = f.base, f.polygraph
    slices = {a: slice_polygraph(f, a, check=False) for a in a_cat.objects}
    uf = DisjointSet(n for s in slices.values() for n in s.pairs)
    for beta in a_cat.morphisms:
        src, tgt = slices[a_cat.src[beta]], slices[a_cat.tgt[beta]]
        for n, m in slice_map(f, beta, src, tgt).items():
            uf.merge(n, m)
    report = ReassemblyReport()
    # preferred representative: the pair (g, identity of f(t0 g))
    rep = {}
    for s in slices.values():
        for n, (g, p) in s.pairs.items():
            if a_cat.is_identity(p):
                root = uf[n]
                if root in rep:
                    report.problems.append(f"classes of {rep[root]} and {n} coincide")
                rep[root] = n
    cls = {}
    for s in slices.values():
        for n, (g, p) in s.pairs.items():
            r = rep.get(uf[n])
            if r is None:
                report.problems.append(f"class of {n} has no identity-anchored member")
                continue
            cls[n] = r
    if report.problems:
        return report
    all_pairs = {n: pr for s in slices.values() for n, pr in s.pairs.items()}
    for n, r in cls.items():
        if all_pairs[r][0] != all_pairs[n][0]:
            report.problems.append(f"{n} and {r} are glued but lie over different generators")
    report.classes = {r: all_pairs[r][0] for r in sorted(set(cls.values()), key=str)}
    # boundaries of the colimit, checked to be independent of the class member
    boundary = {}
    for s in slices.values():
        for gen in s.polygraph.generators():
            r = cls[gen.name]
            if gen.dim == 0:
                boundary.setdefault(r, (0, None, None))
                continue
            b = (gen.dim, rename(gen.source, cls), rename(gen.target, cls))
            if boundary.setdefault(r, b) != b:
                report.problems.append(f"boundary of class {r} depends on the representative {gen.name}")
    order = {g.name: i for i, g in enumerate(x.generators())}
    reps = sorted(boundary, key=lambda r: order[all_pairs[r][0]])
    colim = Polygraph([Generator(r, *boundary[r]) for r in reps], x.truncation)
    report.polygraph = colim
    # the comparison map (g, p) |-> g must be an isomorphism of polygraphs
    to_x = {r: all_pairs[r][0] for r in reps}
    if sorted(to_x.values(), key=order.get) != [g.name for g in x.generators()]:
        report.problems.append("classes are not in bijection with the generators of X")
    else:
        report.problems += map_commutes_with_boundaries(colim, x, to_x)
    return report


# -- discrete Conduché functors ----------------------------------------------

@dataclass
class ConducheResult:
    ok: bool
    counterexample: Optional[dict] = None

    def __bool__(self):
        return self.ok


def conduche_check(u: Functor) -> ConducheResult:
    """Every factorization of u(x) lifts to a unique factorization of x."""
    c, d = u.source, u.target
    problems = u.validate()
    if problems:
        raise CategoryError("not a functor:\n" + "\n".join(problems))
    factorizations = {}
    for y2 in d.morphisms:
        for y1 in d.outgoing(d.tgt[y2]):
            factorizations.setdefault(d.compose(y1, y2), []).append((y1, y2))
    lifts = {}
    for x2 in c.morphisms:
        for x1 in c.outgoing(c.tgt[x2]):
            key = (c.compose(x1, x2), u(x1), u(x2))
            lifts[key] = lifts.get(key, 0) + 1
    for x in c.morphisms:
        for y1, y2 in factorizations.get(u(x), []):
            n = lifts.get((x, y1, y2), 0)
            if n != 1:
                return ConducheResult(False, {"morphism": _label(x), "factorization": [_label(y1), _label(y2)],
                                              "lifts": n})
    return ConducheResult(True)


# -- Grothendieck construction -----------------------------------------------

@dataclass
class Diagram:
    """A functor d : A -> Cat given by fibers and transition functors."""

    base: FiniteCategory
    fibers: dict
    transitions: dict  # morphism of A -> Functor d(src) -> d(tgt)

    def validate(self) -> list[str]:
        a = self.base
        problems = []
        for beta in a.morphisms:
            t = self.transitions.get(beta)
            if t is None:
                problems.append(f"no transition for {_label(beta)}")
                continue
            if t.source is not self.fibers[a.src[beta]] or t.target is not self.fibers[a.tgt[beta]]:
                problems.append(f"transition for {_label(beta)} has the wrong fibers")
                continue
            problems += [f"transition {_label(beta)}: {m}" for m in t.validate()]
        if problems:
            return problems
        for x, i in a.identity.items():
            t = self.transitions[i]
            if t.on_objects != {o: o for o in t.source.objects} or \
                    t.on_morphisms != {m: m for m in t.source.morphisms}:
                problems.append(f"identity of {_label(x)} does not act as the identity")
        for f in a.morphisms:
            for g in a.outgoing(a.tgt[f]):
                tf, tg, tgf = self.transitions[f], self.transitions[g], self.transitions[a.compose(g, f)]
                comp = tf.then(tg)
                if comp.on_objects != tgf.on_objects or comp.on_morphisms != tgf.on_morphisms:
                    problems.append(f"d({_label(g)} o {_label(f)}) != d({_label(g)}) o d({_label(f)})")
        return problems


@dataclass
class GrothendieckResult:
    total: FiniteCategory
    projection: Functor
    to_colimit: Optional[Functor]
    colimit: Optional[FiniteCategory]


def grothendieck(d: Diagram, with_colimit: bool = True) -> GrothendieckResult:
    """Objects (a, x); morphisms (beta, phi) with phi : d(beta)(x) -> x'."""
    problems = d.validate()
    if problems:
        raise CategoryError("diagram is not a functor:\n" + "\n".join(problems))
    a = d.base
    objs = [(o, x) for o in a.objects for x in d.fibers[o].objects]
    mors = {}
    for beta in a.morphisms:
        s, t = a.src[beta], a.tgt[beta]
        tr, fib = d.transitions[beta], d.fibers[t]
        for x in d.fibers[s].objects:
            for phi in fib.morphisms:
                if fib.src[phi] == tr.on_objects[x]:
                    mors[(beta, x, phi)] = ((s, x), (t, fib.tgt[phi]))
    comp = {}
    for (beta, x, phi), (_, (t, y)) in mors.items():
        for gamma in a.outgoing(t):
            tr, fib = d.transitions[gamma], d.fibers[a.tgt[gamma]]
            for psi in fib.outgoing(tr.on_objects[y]):
                comp[(gamma, y, psi), (beta, x, phi)] = (
                    a.compose(gamma, beta), x, fib.compose(psi, tr(phi)))
    ids = {(o, x): (a.identity[o], x, d.fibers[o].identity[x]) for (o, x) in objs}
    total = FiniteCategory(objs, mors, ids, comp)
    proj = Functor(total, a, {ox: ox[0] for ox in objs}, {m: m[0] for m in mors})
    colim, to_colim = None, None
    if with_colimit:
        colim, to_colim = colimit_of_categories(d, total)
    return GrothendieckResult(total, proj, to_colim, colim)


def colimit_of_categories(d: Diagram, total: Optional[FiniteCategory] = None):
    """Colimit of a diagram of finite categories, when every composite in the
    colimit is already witnessed inside some fiber.

    Objects and morphisms are glued with union-find along the transitions and
    then the composition table is closed under congruence.  Returns the
    colimit and, if ``total`` is given, the canonical functor from the
    Grothendieck construction.
    """
    a = d.base
    obj = DisjointSet((o, x) for o in a.objects for x in d.fibers[o].objects)
    mor = DisjointSet((o, m) for o in a.objects for m in d.fibers[o].morphisms)
    for beta in a.morphisms:
        s, t = a.src[beta], a.tgt[beta]
        tr = d.transitions[beta]
        for x, y in tr.on_objects.items():
            obj.merge((s, x), (t, y))
        for m, n in tr.on_morphisms.items():
            mor.merge((s, m), (t, n))
    changed = True
    while changed:
        changed = False
        table = {}
        for o in a.objects:
            fib = d.fibers[o]
            for (g, f), h in fib.comp.items():
                key = (mor[o, g], mor[o, f])
                prev = table.setdefault(key, (o, h))
                if not mor.connected(prev, (o, h)):
                    mor.merge(prev, (o, h))
                    changed = True

    def obj_of(o, x):
        return obj[o, x]

    def mor_of(o, m):
        return mor[o, m]

    src, tgt = {}, {}
    for o in a.objects:
        fib = d.fibers[o]
        for m in fib.morphisms:
            r = mor_of(o, m)
            st = (obj_of(o, fib.src[m]), obj_of(o, fib.tgt[m]))
            if src.setdefault(r, st[0]) != st[0] or tgt.setdefault(r, st[1]) != st[1]:
                raise CategoryError("gluing identified morphisms with different endpoints")
    comp = {}
    for o in a.objects:
        for (g, f), h in d.fibers[o].comp.items():
            comp[mor_of(o, g), mor_of(o, f)] = mor_of(o, h)
    ids = {}
    for o in a.objects:
        for x, i in d.fibers[o].identity.items():
            ids[obj_of(o, x)] = mor_of(o, i)
    objects = sorted(set(ids), key=_label)
    for f in src:
        for g in src:
            if tgt[f] == src[g] and (g, f) not in comp:
                raise CategoryError(
                    f"colimit needs a free composite {_label(g)} o {_label(f)}; not computable here")
    colim = FiniteCategory(objects, {m: (src[m], tgt[m]) for m in sorted(src, key=_label)}, ids, comp)
    to_colim = None
    if total is not None:
        to_colim = Functor(total, colim,
                           {(o, x): obj_of(o, x) for (o, x) in total.objects},
                           {m: mor_of(total.tgt[m][0], m[2]) for m in total.morphisms})
    return colim, to_colim


def constant_diagram(base: FiniteCategory, fiber: FiniteCategory) -> Diagram:
    ident = identity_functor(fiber)
    return Diagram(base, {o: fiber for o in base.objects}, {m: ident for m in base.morphisms})


def slice_diagram(base: FiniteCategory) -> tuple[Diagram, dict]:
    """a |-> A/a with A/beta : (h, p, q) |-> (h, beta p, beta q).  Also returns
    the projections A/a -> A."""
    fibers, projections = {}, {}
    for o in base.objects:
        fibers[o], projections[o] = slice_category(base, o)
    trans = {}
    for beta in base.morphisms:
        s, t = base.src[beta], base.tgt[beta]
        trans[beta] = Functor(
            fibers[s], fibers[t],
            {p: base.compose(beta, p) for p in fibers[s].objects},
            {(h, p, q): (h, base.compose(beta, p), base.compose(beta, q)) for (h, p, q) in fibers[s].morphisms},
        )
    return Diagram(base, fibers, trans), projections


# -- morphisms of functors over the base ------------------------------------

def slice_of_morphism(g: Mapping[str, str], fx: FunctorToBase, fy: FunctorToBase, sx: Slice, sy: Slice) -> dict:
    """Generator map X/a -> Y/a induced by a generator map g : X -> Y over A."""
    return {n: sy.names[g[h], p] for n, (h, p) in sx.pairs.items()}

"""Polygraphs and the calculus of cell expressions in free omega-categories.

A cell expression is an immutable tree built from generators, unit lifts and
k-compositions.  ``Comp(k, x, y)`` stands for ``x *_k y``: the right operand
comes first, so for 1-cells it reads like ordinary composition ``x o y``.
Operands of unequal dimensions are implicitly lifted through units.

Equality of cells in a free omega-category is not decided here.  Cells of
dimension 0 and 1 are compared exactly (names and paths); higher cells are
compared through necessary conditions (linearizations in every degree).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union


class CellError(ValueError):
    """Malformed cell expression or polygraph data."""


SOURCE = "source"
TARGET = "target"
_SIDES = (SOURCE, TARGET)


@dataclass(frozen=True)
class Gen:
    name: str
    dim: int

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise CellError(f"generator name must be a nonempty string, got {self.name!r}")
        if self.dim < 0:
            raise CellError(f"generator {self.name} has negative dimension")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Unit:
    base: "CellExpr"
    to_dim: int
    dim: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.to_dim <= self.base.dim:
            raise CellError(
                f"unit {to_text(self)} must raise dimension: "
                f"base has dimension {self.base.dim}, requested {self.to_dim}"
            )
        object.__setattr__(self, "dim", self.to_dim)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Comp:
    k: int
    left: "CellExpr"
    right: "CellExpr"
    dim: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.k < 0 or self.k >= min(self.left.dim, self.right.dim):
            raise CellError(
                f"composite {to_text(self)}: need k < min(dims) but k={self.k}, "
                f"dims are {self.left.dim} and {self.right.dim}"
            )
        object.__setattr__(self, "dim", max(self.left.dim, self.right.dim))

    def __str__(self):
        return to_text(self)


CellExpr = Union[Gen, Unit, Comp]


def dim(e: CellExpr) -> int:
    return e.dim


def unit(base: CellExpr, to_dim: int) -> CellExpr:
    """``1^(to_dim)_base``, with ``1^(n)_x = x`` when ``n == dim x``."""
    if to_dim == base.dim:
        return base
    return Unit(base, to_dim)


def compose(k: int, *cells: CellExpr) -> CellExpr:
    """Right-nested ``c1 *_k c2 *_k ... *_k cn``."""
    if not cells:
        raise CellError("compose needs at least one cell")
    out = cells[-1]
    for c in reversed(cells[:-1]):
        out = Comp(k, c, out)
    return out


def generators_in(e: CellExpr) -> Iterator[Gen]:
    if isinstance(e, Gen):
        yield e
    elif isinstance(e, Unit):
        yield from generators_in(e.base)
    else:
        yield from generators_in(e.left)
        yield from generators_in(e.right)


def rename(e: CellExpr, mapping: Mapping[str, str]) -> CellExpr:
    """Substitute generator names (dimensions are kept)."""
    if isinstance(e, Gen):
        return Gen(mapping.get(e.name, e.name), e.dim)
    if isinstance(e, Unit):
        return Unit(rename(e.base, mapping), e.to_dim)
    return Comp(e.k, rename(e.left, mapping), rename(e.right, mapping))


# -- text grammar ------------------------------------------------------------

# "*k" is an operator only as a whole token, so "*" itself can name a generator
_TOKEN = re.compile(r"\s*(?:(\*\d+)(?![^\s(),])|([(),])|([^\s(),]+))")


def to_text(e: CellExpr) -> str:
    if isinstance(e, Gen):
        return e.name
    if isinstance(e, Unit):
        return f"id({to_text(e.base)},{e.to_dim})"
    return f"({to_text(e.left)} *{e.k} {to_text(e.right)})"


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise CellError(f"cannot tokenize expression at {text[pos:]!r}")
        tokens.append(m.group(m.lastindex))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


def parse_expr(text: str, dims: Mapping[str, int]) -> CellExpr:
    """Parse ``a``, ``id(e,n)`` and ``(e1 *k e2)``; parentheses are mandatory.

    ``dims`` maps generator names to their dimensions (a :class:`Polygraph`
    works).
    """
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise CellError(f"expected {expected or 'a token'} in {text!r}, got {tok!r}")
        pos += 1
        return tok

    def expr():
        tok = peek()
        if tok == "(":
            take("(")
            left = expr()
            op = take()
            if not op.startswith("*"):
                raise CellError(f"expected '*k' in {text!r}, got {op!r}")
            right = expr()
            take(")")
            return Comp(int(op[1:]), left, right)
        if tok == "id" and pos + 1 < len(tokens) and tokens[pos + 1] == "(":
            take("id")
            take("(")
            base = expr()
            take(",")
            n = take()
            take(")")
            if not n.isdigit():
                raise CellError(f"unit dimension must be a natural number, got {n!r}")
            return Unit(base, int(n))
        name = take()
        if name in "(),":
            raise CellError(f"unexpected {name!r} in {text!r}")
        if name not in dims:
            raise CellError(f"unknown generator {name!r}")
        return Gen(name, dims[name])

    result = expr()
    if pos != len(tokens):
        raise CellError(f"trailing input in {text!r}: {tokens[pos:]}")
    return result


# -- JSON encoding -----------------------------------------------------------

def expr_to_json(e: CellExpr) -> dict:
    if isinstance(e, Gen):
        return {"gen": e.name}
    if isinstance(e, Unit):
        return {"unit": {"base": expr_to_json(e.base), "dim": e.to_dim}}
    return {"comp": {"k": e.k, "left": expr_to_json(e.left), "right": expr_to_json(e.right)}}


def expr_from_json(obj, dims: Mapping[str, int]) -> CellExpr:
    if isinstance(obj, str):
        return parse_expr(obj, dims)
    if not isinstance(obj, dict) or len(obj) != 1:
        raise CellError(f"bad expression object: {obj!r}")
    (tag, body), = obj.items()
    if tag == "gen":
        if body not in dims:
            raise CellError(f"unknown generator {body!r}")
        return Gen(body, dims[body])
    if tag == "unit":
        return Unit(expr_from_json(body["base"], dims), int(body["dim"]))
    if tag == "comp":
        return Comp(int(body["k"]), expr_from_json(body["left"], dims),
                    expr_from_json(body["right"], dims))
    raise CellError(f"unknown expression tag {tag!r}")


# -- polygraphs --------------------------------------------------------------

@dataclass(frozen=True)
class Generator:
    name: str
    dim: int
    source: Optional[CellExpr] = None
    target: Optional[CellExpr] = None

    def boundary(self, side: str) -> CellExpr:
        return self.source if side == SOURCE else self.target


class Polygraph:
    """Graded set of generating cells presenting a free omega-category.

    ``truncation`` records that generators above that dimension were not
    supplied (e.g. a resolution cut off at depth 3); ``None`` means the
    polygraph is complete.
    """

    def __init__(self, generators: Iterable[Generator] = (), truncation: Optional[int] = None):
        self._gens: dict[str, Generator] = {}
        for g in generators:
            if g.name in self._gens:
                raise CellError(f"duplicate generator name {g.name!r}")
            self._gens[g.name] = g
        self.truncation = truncation
        self._cache: dict = {}

    def __contains__(self, name) -> bool:
        return name in self._gens

    def __getitem__(self, name: str) -> int:
        # Mapping[str, int] of dimensions, used by the parsers.
        return self._gens[name].dim

    def __iter__(self):
        return iter(self._gens)

    def __len__(self):
        return len(self._gens)

    def __repr__(self):
        counts = [len(self.generators(n)) for n in range(self.max_dim + 1)]
        return f"Polygraph(counts={counts}, truncation={self.truncation})"

    def generator(self, name: str) -> Generator:
        try:
            return self._gens[name]
        except KeyError:
            raise CellError(f"unknown generator {name!r}") from None

    def generators(self, n: Optional[int] = None) -> list[Generator]:
        """Generators in (dimension, insertion) order, optionally of one dimension."""
        gens = sorted(self._gens.values(), key=lambda g: g.dim)  # stable
        if n is None:
            return gens
        return [g for g in gens if g.dim == n]

    @property
    def max_dim(self) -> int:
        return max((g.dim for g in self._gens.values()), default=-1)

    def gen(self, name: str) -> Gen:
        return Gen(name, self.generator(name).dim)

    # -- globular structure ---------------------------------------------------

    def boundary(self, e: CellExpr, side: str) -> CellExpr:
        if side not in _SIDES:
            raise ValueError(f"side must be {SOURCE!r} or {TARGET!r}")
        if e.dim == 0:
            raise CellError(f"0-cell {to_text(e)} has no {side}")
        key = ("b", e, side)
        if key in self._cache:
            return self._cache[key]
        if isinstance(e, Gen):
            g = self.generator(e.name)
            if g.dim != e.dim:
                raise CellError(f"{e.name} has dimension {g.dim}, expression says {e.dim}")
            out = g.boundary(side)
        elif isinstance(e, Unit):
            out = unit(e.base, e.to_dim - 1)
        else:
            n = e.dim
            if e.k == n - 1:
                out = self.boundary(e.right if side == SOURCE else e.left, side)
            else:
                left = self.boundary(e.left, side) if e.left.dim == n else e.left
                right = self.boundary(e.right, side) if e.right.dim == n else e.right
                out = Comp(e.k, left, right)
        self._cache[key] = out
        return out

    def source(self, e: CellExpr) -> CellExpr:
        return self.boundary(e, SOURCE)

    def target(self, e: CellExpr) -> CellExpr:
        return self.boundary(e, TARGET)

    def iterated_boundary(self, e: CellExpr, k: int, side: str) -> CellExpr:
        if k < 0 or k > e.dim:
            raise CellError(f"cannot take the {k}-{side} of a {e.dim}-cell")
        while e.dim > k:
            e = self.boundary(e, side)
        return e

    def s(self, e: CellExpr, k: int) -> CellExpr:
        return self.iterated_boundary(e, k, SOURCE)

    def t(self, e: CellExpr, k: int) -> CellExpr:
        return self.iterated_boundary(e, k, TARGET)

    def t0(self, e: CellExpr) -> str:
        """Name of the 0-target (a 0-cell is its own 0-target)."""
        c = self.t(e, 0)
        assert isinstance(c, Gen)
        return c.name

    def s0(self, e: CellExpr) -> str:
        c = self.s(e, 0)
        assert isinstance(c, Gen)
        return c.name

    def path(self, e: CellExpr) -> tuple[str, tuple[str, ...], str]:
        """Exact normal form of a 1-cell: (0-source, generator path in order, 0-target)."""
        if e.dim != 1:
            raise CellError(f"path() needs a 1-cell, got dimension {e.dim}")
        return (self.s0(e), self._path(e), self.t0(e))

    def _path(self, e: CellExpr) -> tuple[str, ...]:
        if isinstance(e, Gen):
            return (e.name,)
        if isinstance(e, Unit):
            return ()
        return self._path(e.right) + self._path(e.left)

    # -- linearization --------------------------------------------------------

    def linearize(self, e: CellExpr) -> dict[str, int]:
        """Class of ``e`` in the free abelian group on the generators of its dimension."""
        counts = Counter()
        self._linearize(e, e.dim, counts)
        return {k: v for k, v in counts.items() if v}

    def _linearize(self, e: CellExpr, n: int, acc: Counter):
        if e.dim < n or isinstance(e, Unit):
            return
        if isinstance(e, Gen):
            acc[e.name] += 1
        else:
            self._linearize(e.left, n, acc)
            self._linearize(e.right, n, acc)

    # -- necessary equality ---------------------------------------------------

    def cells_agree(self, x: CellExpr, y: CellExpr) -> Optional[str]:
        """Return ``None`` when x and y pass every equality test we can decide,
        otherwise a description of the first difference."""
        if x.dim != y.dim:
            return f"dimensions differ: {to_text(x)} has {x.dim}, {to_text(y)} has {y.dim}"
        if x.dim == 0:
            return None if x == y else f"0-cells {to_text(x)} != {to_text(y)}"
        if x.dim == 1:
            px, py = self.path(x), self.path(y)
            return None if px == py else f"1-cells {to_text(x)} and {to_text(y)} differ as paths"
        if self.linearize(x) != self.linearize(y):
            return f"{to_text(x)} and {to_text(y)} have different linearizations"
        for side in _SIDES:
            why = self.cells_agree(self.boundary(x, side), self.boundary(y, side))
            if why:
                return why
        return None

    def check_expr(self, e: CellExpr) -> list[str]:
        """Problems with a single expression over this polygraph."""
        problems = []
        for g in generators_in(e):
            if g.name not in self._gens:
                problems.append(f"unknown generator {g.name!r} in {to_text(e)}")
            elif self._gens[g.name].dim != g.dim:
                problems.append(f"generator {g.name!r} used with dimension {g.dim}")
        if problems:
            return problems
        self._check_composable(e, problems)
        return problems

    def _check_composable(self, e: CellExpr, problems: list[str]):
        if isinstance(e, Unit):
            self._check_composable(e.base, problems)
        elif isinstance(e, Comp):
            self._check_composable(e.left, problems)
            self._check_composable(e.right, problems)
            if problems:
                return
            why = self.cells_agree(self.s(e.left, e.k), self.t(e.right, e.k))
            if why:
                problems.append(f"in {to_text(e)}: operands not {e.k}-composable ({why})")


@dataclass
class ValidationReport:
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(f"- {p}" for p in self.problems)


def validate_polygraph(p: Polygraph) -> ValidationReport:
    report = ValidationReport()
    out = report.problems
    for g in p.generators():
        where = f"generator {g.name!r} (dim {g.dim})"
        if g.dim == 0:
            if g.source is not None or g.target is not None:
                out.append(f"{where}: 0-generators have no source or target")
            continue
        if g.source is None or g.target is None:
            out.append(f"{where}: missing source or target")
            continue
        bad = False
        for side in _SIDES:
            e = g.boundary(side)
            if e.dim != g.dim - 1:
                out.append(f"{where}: {side} {to_text(e)} has dimension {e.dim}, expected {g.dim - 1}")
                bad = True
                continue
            probs = p.check_expr(e)
            out.extend(f"{where}: {side}: {msg}" for msg in probs)
            bad = bad or bool(probs)
        if bad or g.dim < 2:
            continue
        for side in _SIDES:
            why = p.cells_agree(p.boundary(g.source, side), p.boundary(g.target, side))
            if why:
                out.append(f"{where}: source and target are not parallel ({side}s: {why})")
    if p.truncation is not None and p.max_dim > p.truncation:
        out.append(f"generators above the declared truncation {p.truncation}")
    return report


def check_valid(p: Polygraph) -> Polygraph:
    report = validate_polygraph(p)
    if not report:
        raise CellError(f"invalid polygraph:\n{report}")
    return p


# -- JSON polygraph format ---------------------------------------------------

def polygraph_from_json(obj: dict) -> Polygraph:
    if not isinstance(obj, dict) or "generators" not in obj:
        raise CellError("polygraph JSON needs a 'generators' list")
    raw = obj["generators"]
    dims = {}
    for item in raw:
        name, d = item.get("name"), item.get("dim")
        if not isinstance(name, str) or not isinstance(d, int):
            raise CellError(f"bad generator entry {item!r}")
        if name in dims:
            raise CellError(f"duplicate generator name {name!r}")
        dims[name] = d
    gens = []
    for item in raw:
        src = item.get("source")
        tgt = item.get("target")
        gens.append(Generator(
            item["name"], item["dim"],
            None if src is None else expr_from_json(src, dims),
            None if tgt is None else expr_from_json(tgt, dims),
        ))
    return Polygraph(gens, truncation=obj.get("truncation"))


def polygraph_to_json(p: Polygraph) -> dict:
    out = {"generators": [
        {"name": g.name, "dim": g.dim,
         "source": None if g.source is None else expr_to_json(g.source),
         "target": None if g.target is None else expr_to_json(g.target)}
        for g in p.generators()
    ]}
    if p.truncation is not None:
        out["truncation"] = p.truncation
    return out


# -- globes and spheres ------------------------------------------------------

def _pole(k: int, sign: str) -> str:
    return f"e{k}{sign}"


def _globular_pairs(top: int) -> list[Generator]:
    gens = []
    for k in range(top + 1):
        for sign in "-+":
            if k == 0:
                gens.append(Generator(_pole(0, sign), 0))
            else:
                gens.append(Generator(_pole(k, sign), k,
                                      Gen(_pole(k - 1, "-"), k - 1), Gen(_pole(k - 1, "+"), k - 1)))
    return gens


def globe(n: int) -> Polygraph:
    """The n-globe: two generators in each dimension below n, one in dimension n."""
    if n < 0:
        raise CellError("globe(n) needs n >= 0")
    gens = _globular_pairs(n - 1)
    if n == 0:
        gens.append(Generator("e0", 0))
    else:
        gens.append(Generator(f"e{n}", n, Gen(_pole(n - 1, "-"), n - 1), Gen(_pole(n - 1, "+"), n - 1)))
    return Polygraph(gens)


def sphere(n: int) -> Polygraph:
    """The n-sphere; ``sphere(-1)`` is empty."""
    if n < -1:
        raise CellError("sphere(n) needs n >= -1")
    return Polygraph(_globular_pairs(n))


def sphere_inclusion(n: int) -> dict[str, str]:
    """Generator map of the boundary inclusion sphere(n-1) -> globe(n)."""
    return {g.name: g.name for g in sphere(n - 1).generators()}

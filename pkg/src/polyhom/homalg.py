"""Exact integer linear algebra: Smith normal form, chain complexes, homology."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence


class TruncationError(ValueError):
    """A homology degree was requested that the truncated data cannot certify."""


class IntMatrix:
    """Dense matrix of Python integers with an explicit shape (so 0 x n is fine)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Optional[Sequence[Sequence[int]]] = None):
        self.rows, self.cols = rows, cols
        if data is None:
            self.data = [[0] * cols for _ in range(rows)]
        else:
            self.data = [list(map(int, r)) for r in data]
            if len(self.data) != rows or any(len(r) != cols for r in self.data):
                raise ValueError(f"data does not have shape {rows}x{cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count of an empty matrix must be given")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        m = cls(n, n)
        for i in range(n):
            m.data[i][i] = 1
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, self.data)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __setitem__(self, ij, value):
        i, j = ij
        self.data[i][j] = value

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __repr__(self):
        return f"IntMatrix({self.rows}, {self.cols}, {self.data})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = IntMatrix(self.rows, other.cols)
        cols = list(zip(*other.data)) if other.rows else [()] * other.cols
        for i, row in enumerate(self.data):
            out.data[i] = [sum(a * b for a, b in zip(row, col)) for col in cols]
        return out

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, [list(c) for c in zip(*self.data)] if self.rows else
                         [[] for _ in range(self.cols)])

    def det(self) -> int:
        """Bareiss fraction-free determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [row[:] for row in self.data]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def to_list(self) -> list[list[int]]:
        return [row[:] for row in self.data]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (S, U, V) with U @ m @ V == S, U and V unimodular and S diagonal,
    nonnegative, with each diagonal entry dividing the next."""
    rows, cols = m.shape
    a = m.copy().data
    u = IntMatrix.identity(rows).data
    v = IntMatrix.identity(cols).data

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row dst += q * row src
        if q:
            a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):
        if q:
            for row in a:
                row[dst] += q * row[src]
            for row in v:
                row[dst] += q * row[src]

    t = 0
    while t < min(rows, cols):
        # pivot of minimal absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                # a smaller remainder exists in row or column t: make it the pivot
                cands = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
                _, i, j = min(cands)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            # row and column clean; enforce divisibility on the rest of the block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return IntMatrix(rows, cols, a), IntMatrix(rows, rows, u), IntMatrix(cols, cols, v)


def invariant_factors(m: IntMatrix) -> list[int]:
    """Nonzero diagonal of the Smith normal form."""
    s, _, _ = smith_normal_form(m)
    return [s[i, i] for i in range(min(s.shape)) if s[i, i]]


def rank(m: IntMatrix) -> int:
    return len(invariant_factors(m))


@dataclass(frozen=True)
class HomologyGroup:
    """Z^free_rank plus the cyclic groups Z/d for d in torsion."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0 or any(d < 2 for d in self.torsion):
            raise ValueError(f"bad homology group data {self.free_rank}, {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def parse(cls, text: str) -> "HomologyGroup":
        """Inverse of ``str``: ``0``, ``Z``, ``Z^2``, ``Z/2``, ``Z+Z/2+Z/4``."""
        text = text.replace(" ", "")
        if text == "0":
            return cls()
        rank, tors = 0, []
        for part in text.split("+"):
            if part == "Z":
                rank += 1
            elif part.startswith("Z^"):
                rank += int(part[2:])
            elif part.startswith("Z/"):
                tors.append(int(part[2:]))
            else:
                raise ValueError(f"cannot parse homology group {text!r}")
        return cls(rank, tuple(sorted(tors)))

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return "+".join(parts) or "0"

    def to_json(self, degree: int) -> dict:
        return {"degree": degree, "free_rank": self.free_rank, "torsion": list(self.torsion)}


@dataclass
class ChainComplex:
    """Chain complex of free abelian groups in degrees 0..len(ranks)-1.

    ``differentials[n-1]`` is d_n : C_n -> C_{n-1}, a ranks[n-1] x ranks[n]
    matrix.  ``valid_below`` marks a truncated complex: homology is only
    certified in degrees strictly below it.
    """

    ranks: list[int]
    differentials: list[IntMatrix]
    labels: Optional[list[list[str]]] = None
    valid_below: Optional[int] = None

    def __post_init__(self):
        if len(self.differentials) != max(len(self.ranks) - 1, 0):
            raise ValueError(f"{len(self.ranks)} degrees need {len(self.ranks) - 1} differentials, "
                             f"got {len(self.differentials)}")
        for n, d in enumerate(self.differentials, start=1):
            if d.shape != (self.ranks[n - 1], self.ranks[n]):
                raise ValueError(f"d_{n} has shape {d.shape}, expected "
                                 f"{(self.ranks[n - 1], self.ranks[n])}")
        if self.labels is not None:
            if [len(x) for x in self.labels] != list(self.ranks):
                raise ValueError("labels do not match ranks")

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def d(self, n: int) -> IntMatrix:
        """d_n, with zero maps outside the stored range."""
        if 1 <= n <= self.top:
            return self.differentials[n - 1]
        lo = self.ranks[n - 1] if 1 <= n <= self.top + 1 else 0
        hi = self.ranks[n] if 0 <= n <= self.top else 0
        return IntMatrix(lo, hi)

    def to_json(self) -> dict:
        out = {
            "ranks": list(self.ranks),
            "differentials": [d.to_list() for d in self.differentials],
            "labels": self.labels if self.labels is not None else
            [[str(i) for i in range(r)] for r in self.ranks],
        }
        if self.valid_below is not None:
            out["valid_below"] = self.valid_below
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ChainComplex":
        ranks = [int(r) for r in obj["ranks"]]
        diffs = [IntMatrix.from_rows(rows, ranks[n]) if len(rows) == ranks[n - 1]
                 else _bad_shape(n) for n, rows in enumerate(obj["differentials"], start=1)]
        return cls(ranks, diffs, obj.get("labels"), obj.get("valid_below"))


def _bad_shape(n):
    raise ValueError(f"d_{n} has the wrong number of rows")


def verify_complex(c: ChainComplex) -> bool:
    """True iff every composite d_n d_{n+1} vanishes."""
    for n in range(1, c.top):
        if not (c.d(n) @ c.d(n + 1)).is_zero():
            return False
    return True


def homology(c: ChainComplex, n: int, force: bool = False) -> HomologyGroup:
    """H_n of ``c``.  Degrees at or above ``c.valid_below`` are refused unless
    ``force`` is set."""
    if n < 0 or n > c.top:
        raise IndexError(f"degree {n} outside 0..{c.top}")
    if c.valid_below is not None and n >= c.valid_below and not force:
        raise TruncationError(
            f"complex is truncated: H_{n} is not determined (certified below {c.valid_below})")
    incoming = invariant_factors(c.d(n + 1))
    outgoing = rank(c.d(n))
    return HomologyGroup(
        c.ranks[n] - outgoing - len(incoming),
        tuple(x for x in incoming if x > 1),
    )


def homology_all(c: ChainComplex, up_to: Optional[int] = None, force: bool = False) -> list[HomologyGroup]:
    if up_to is None:
        up_to = c.top if c.valid_below is None or force else min(c.top, c.valid_below - 1)
    return [homology(c, n, force) for n in range(up_to + 1)]


def format_homology(groups: Sequence[HomologyGroup]) -> str:
    return " ".join(f"H{n}={g}" for n, g in enumerate(groups))

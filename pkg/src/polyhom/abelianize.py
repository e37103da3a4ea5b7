"""The abelianization functor on free omega-categories and polygraphic homology."""

from __future__ import annotations

from typing import Mapping, Optional

from .cellcore import CellError, Gen, Generator, Polygraph, Unit, validate_polygraph
from .homalg import ChainComplex, HomologyGroup, IntMatrix, TruncationError, homology


def lambda_complex(p: Polygraph, check: bool = True) -> ChainComplex:
    """Chain complex with basis the generators in each degree and d(g) = t(g) - s(g).

    If ``p`` is truncated at dimension T the complex stops at degree T and is
    only certified below it.
    """
    if check:
        report = validate_polygraph(p)
        if not report:
            raise CellError(f"invalid polygraph:\n{report}")
    top = p.max_dim if p.truncation is None else p.truncation
    top = max(top, 0)
    labels = [[g.name for g in p.generators(n)] for n in range(top + 1)]
    index = [{name: i for i, name in enumerate(row)} for row in labels]
    diffs = []
    for n in range(1, top + 1):
        d = IntMatrix(len(labels[n - 1]), len(labels[n]))
        for j, g in enumerate(p.generators(n)):
            for name, c in p.linearize(g.target).items():
                d[index[n - 1][name], j] += c
            for name, c in p.linearize(g.source).items():
                d[index[n - 1][name], j] -= c
        diffs.append(d)
    return ChainComplex([len(x) for x in labels], diffs, labels, p.truncation)


def polygraphic_homology(p: Polygraph, up_to: int, check: bool = True) -> list[HomologyGroup]:
    """H_0..H_up_to of the abelianization of ``p``.

    ``p`` is trusted to be a polygraphic resolution; when it is truncated at
    dimension T only degrees below T can be reported.
    """
    if p.truncation is not None and up_to >= p.truncation:
        raise TruncationError(
            f"resolution is truncated at dimension {p.truncation}: "
            f"H_{up_to} needs generators of dimension {up_to + 1}")
    c = lambda_complex(p, check)
    out = []
    for n in range(up_to + 1):
        out.append(homology(c, n) if n <= c.top else HomologyGroup())
    return out


def relabel_permutation(c: ChainComplex, mapping: Mapping[str, str], other: ChainComplex) -> Optional[str]:
    """Check that renaming basis labels of ``c`` by ``mapping`` turns it into
    ``other`` (same differentials up to the induced permutation).  Returns a
    description of the first mismatch or None."""
    if c.ranks != other.ranks:
        return f"ranks differ: {c.ranks} vs {other.ranks}"
    pos = [{name: i for i, name in enumerate(row)} for row in other.labels]
    for n in range(1, c.top + 1):
        d, e = c.d(n), other.d(n)
        for j, cj in enumerate(c.labels[n]):
            for i, ci in enumerate(c.labels[n - 1]):
                if d[i, j] != e[pos[n - 1][mapping.get(ci, ci)], pos[n][mapping.get(cj, cj)]]:
                    return f"d_{n} differs at ({ci}, {cj})"
    return None


def b2n_polygraph() -> Polygraph:
    """One 0-cell and one 2-cell from the unit 1-cell to itself: a free
    omega-category presenting the double delooping of the natural numbers."""
    star = Gen("*", 0)
    loop = Unit(star, 1)
    return Polygraph([Generator("*", 0), Generator("c", 2, loop, loop)])

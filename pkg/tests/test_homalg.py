
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyhom.abelianize import lambda_complex
from polyhom.cellcore import sphere
from polyhom.homalg import (ChainComplex, HomologyGroup, IntMatrix, TruncationError, format_homology, homology,
                            homology_all, invariant_factors, rank, smith_normal_form, verify_complex)
from polyhom.samples import rng_for

from .oracles import homology_by_oracle, invariant_factors_by_minors, laplace_det, rational_rank

entries = st.integers(-9, 9)


def matrices(max_rows=6, max_cols=6):
    return st.integers(0, max_rows).flatmap(
        lambda r: st.integers(0 if r else 1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r)
            .map(lambda rows: IntMatrix(r, c, rows))))


def check_snf(m: IntMatrix):
    s, u, v = smith_normal_form(m)
    assert u @ m @ v == s
    assert abs(u.det()) == 1 and abs(v.det()) == 1
    diag = []
    for i in range(s.rows):
        for j in range(s.cols):
            if i != j:
                assert s[i, j] == 0
            elif s[i, i]:
                diag.append(s[i, i])
    assert all(x > 0 for x in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    # nonzero entries come first
    full = [s[i, i] for i in range(min(s.shape))]
    assert full == diag + [0] * (len(full) - len(diag))


def test_snf_examples():
    assert smith_normal_form(IntMatrix.from_rows([[0]]))[0] == IntMatrix.from_rows([[0]])
    assert smith_normal_form(IntMatrix.from_rows([[2, 1], [1, 2]]))[0] == IntMatrix.from_rows([[1, 0], [0, 3]])
    assert smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 4]]))[0] == IntMatrix.from_rows([[2, 0], [0, 4]])
    assert smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]]))[0] == IntMatrix.from_rows([[1, 0], [0, 6]])


def test_snf_examples_against_minors():
    assert invariant_factors_by_minors([[2, 1], [1, 2]], 2) == [1, 3]
    assert invariant_factors_by_minors([[2, 0], [0, 4]], 2) == [2, 4]


def test_snf_empty_shapes():
    for shape in ((0, 3), (3, 0), (0, 0)):
        s, u, v = smith_normal_form(IntMatrix(*shape))
        assert s.shape == shape and u.shape == (shape[0],) * 2 and v.shape == (shape[1],) * 2


def test_snf_thousand_seeded_instances():
    for i in range(1000):
        rng = rng_for(i, "snf")
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        check_snf(IntMatrix(r, c, [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]))


@settings(max_examples=300)
@given(matrices())
def test_snf_postconditions(m):
    check_snf(m)


@settings(max_examples=150)
@given(matrices(4, 4))
def test_invariant_factors_match_minors(m):
    assert invariant_factors(m) == invariant_factors_by_minors(m.to_list(), m.cols)


@settings(max_examples=150)
@given(matrices())
def test_rank_matches_rational_rank(m):
    assert rank(m) == rational_rank(m.to_list(), m.cols)


@settings(max_examples=100)
@given(matrices(5, 5).filter(lambda m: m.rows == m.cols))
def test_bareiss_matches_laplace(m):
    assert m.det() == laplace_det(m.to_list())


def test_multiplication_by_two():
    c = ChainComplex([1, 1], [IntMatrix.from_rows([[2]])])
    assert homology(c, 0) == HomologyGroup(0, (2,))
    assert homology(c, 1) == HomologyGroup()


def test_verify_complex_examples():
    zero = ChainComplex([1, 1, 1], [IntMatrix(1, 1), IntMatrix(1, 1)])
    assert verify_complex(zero)
    bad = ChainComplex([1, 1, 1], [IntMatrix.from_rows([[1]]), IntMatrix.from_rows([[1]])])
    assert not verify_complex(bad)


def test_circle():
    c = lambda_complex(sphere(1))
    assert c.d(1) == IntMatrix.from_rows([[-1, -1], [1, 1]])
    assert homology_all(c) == [HomologyGroup(1), HomologyGroup(1)]


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        ChainComplex([1, 2], [IntMatrix(2, 1)])


def test_truncated_complex_refuses_top_degree():
    c = ChainComplex([1, 1, 1], [IntMatrix(1, 1), IntMatrix(1, 1)], valid_below=2)
    with pytest.raises(TruncationError):
        homology(c, 2)
    assert homology(c, 2, force=True) == HomologyGroup(1)
    assert len(homology_all(c)) == 2


def test_homology_group_text():
    for text in ("0", "Z", "Z^3", "Z/2", "Z^2+Z/2+Z/4"):
        assert str(HomologyGroup.parse(text)) == text
    assert format_homology([HomologyGroup(1), HomologyGroup(0, (2,)), HomologyGroup()]) == "H0=Z H1=Z/2 H2=0"
    with pytest.raises(ValueError):
        HomologyGroup(0, (2, 3))


def test_chain_complex_json_round_trip():
    c = lambda_complex(sphere(2))
    again = ChainComplex.from_json(c.to_json())
    assert again == c


def _random_unimodular(rng, n):
    """A product of elementary matrices together with its inverse."""
    m, inv = IntMatrix.identity(n), IntMatrix.identity(n)
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        q = rng.randint(-2, 2)
        e, e_inv = IntMatrix.identity(n), IntMatrix.identity(n)
        e[i, j], e_inv[i, j] = q, -q
        m, inv = e @ m, inv @ e_inv
    return m, inv


def _random_complex(rng):
    """Random complex with d d = 0, built as d_n = A_n P_n with P_n B_n = 0."""
    ranks = [rng.randint(1, 4) for _ in range(4)]
    diffs = []
    for n in range(1, 4):
        d = IntMatrix(ranks[n - 1], ranks[n], [[rng.randint(-3, 3) for _ in range(ranks[n])]
                                              for _ in range(ranks[n - 1])])
        if diffs:
            # columns of d are integer combinations of a kernel basis of the previous map
            prev = diffs[-1]
            d = IntMatrix(ranks[n - 1], ranks[n])
            s, u, v = smith_normal_form(prev)
            r = rank(prev)
            kernel = [[v[i, j] for i in range(v.rows)] for j in range(r, v.cols)]
            for col in range(ranks[n]):
                coeffs = [rng.randint(-2, 2) * rng.choice([1, 1, 2]) for _ in kernel]
                for i in range(ranks[n - 1]):
                    d[i, col] = sum(c * vec[i] for c, vec in zip(coeffs, kernel))
        diffs.append(d)
    return ChainComplex(ranks, diffs)


@pytest.mark.parametrize("seed", range(40))
def test_homology_invariant_under_change_of_basis(seed):
    rng = rng_for(seed, "basis")
    c = _random_complex(rng)
    assert verify_complex(c)
    changes = [_random_unimodular(rng, r) for r in c.ranks]
    diffs = [changes[n - 1][0] @ c.d(n) @ changes[n][1] for n in range(1, c.top + 1)]
    c2 = ChainComplex(c.ranks, diffs)
    assert verify_complex(c2)
    for n in range(c.top + 1):
        h = homology(c, n)
        assert homology(c2, n) == h
        assert h.free_rank + len(h.torsion) <= c.ranks[n]
        assert (h.free_rank, h.torsion) == homology_by_oracle(c.ranks, c.differentials, n)

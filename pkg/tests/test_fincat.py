import itertools

import pytest

from polyhom.abelianize import lambda_complex
from polyhom.cellcore import validate_polygraph
from polyhom.fincat import (CategoryError, FiniteCategory, Finite2Category, category_from_json, chain_poset,
                            check_simplicial_identities, classical_nerve, classical_to_street, cyclic_group,
                            delooping, discrete_category, find_terminal, monoid_category, normalized_chains,
                            oriental, oriental_name, street_nerve, symmetric_group_s3,
                            terminal_category, two_category_from_json, unnormalized_chains)
from polyhom.homalg import HomologyGroup, homology_all, verify_complex
from polyhom.samples import random_category, random_poset, rng_for, small_category_corpus
from polyhom.slices import slice_category

Z, ZERO = HomologyGroup(1), HomologyGroup()


def z2():
    els, table, unit = cyclic_group(2)
    return monoid_category(els, table, unit)


def test_category_validation_catches_bad_tables():
    with pytest.raises(CategoryError):
        # a o a is missing
        FiniteCategory(["*"], {"1": ("*", "*"), "a": ("*", "*")}, {"*": "1"}, {})
    with pytest.raises(CategoryError):
        # not associative: a(ab) = a b... pick a table violating it
        monoid_category(["1", "a", "b"], [["1", "a", "b"], ["a", "b", "1"], ["b", "b", "b"]], "1")


def test_terminal_nerve():
    n = classical_nerve(terminal_category(), 3)
    assert [n.count(k) for k in range(4)] == [1, 1, 1, 1]
    assert [len(n.nondegenerate(k)) for k in range(4)] == [1, 0, 0, 0]
    assert homology_all(normalized_chains(n)) == [Z, ZERO, ZERO]


def test_z2_nerve():
    n = classical_nerve(z2(), 3)
    assert [n.count(k) for k in range(4)] == [1, 2, 4, 8]
    c = normalized_chains(n)
    assert c.ranks == [1, 1, 1, 1]
    assert homology_all(c) == [Z, HomologyGroup(0, (2,)), ZERO]
    assert homology_all(unnormalized_chains(n)) == homology_all(c)


def test_arrow_nerve():
    n = classical_nerve(chain_poset(1), 2)
    assert [len(n.nondegenerate(k)) for k in range(3)] == [2, 1, 0]
    assert homology_all(normalized_chains(n)) == [Z, ZERO]


@pytest.mark.parametrize("name", sorted(small_category_corpus()))
def test_normalized_and_unnormalized_chains_agree(name):
    n = classical_nerve(small_category_corpus()[name], 4)
    assert check_simplicial_identities(n) == []
    c, k = normalized_chains(n), unnormalized_chains(n)
    assert verify_complex(c) and verify_complex(k)
    assert homology_all(c) == homology_all(k)


def test_known_group_homology():
    for m, tors in ((3, 3), (4, 4)):
        els, table, unit = cyclic_group(m)
        c = normalized_chains(classical_nerve(monoid_category(els, table, unit), 3))
        assert homology_all(c) == [Z, HomologyGroup(0, (tors,)), ZERO]
    els, table, unit = symmetric_group_s3()
    c = normalized_chains(classical_nerve(monoid_category(els, table, unit), 3))
    assert homology_all(c) == [Z, HomologyGroup(0, (2,)), ZERO]


def test_orientals():
    o1 = oriental(1)
    assert [g.name for g in o1.generators()] == ["<0>", "<1>", "<01>"]
    for n in range(4):
        assert validate_polygraph(oriental(n)).ok
    with pytest.raises(CategoryError):
        oriental(4)
    c = lambda_complex(oriental(3))
    top = c.labels[3].index("<0123>")
    d3 = {c.labels[2][i]: c.d(3)[i, top] for i in range(c.ranks[2])}
    assert d3 == {"<012>": -1, "<013>": 1, "<023>": -1, "<123>": 1}


@pytest.mark.parametrize("n", range(4))
def test_lambda_of_oriental_is_normalized_chains_of_simplex(n):
    lam = lambda_complex(oriental(n))
    nerve = classical_nerve(chain_poset(n), n)
    kap = normalized_chains(nerve)
    # nondegenerate simplex (i0 < ... < ik) <-> <i0...ik>
    names = [[oriental_name(nerve.vertices[k][j]) for j in nerve.nondegenerate(k)] for k in range(n + 1)]
    assert lam.ranks == kap.ranks
    for k in range(1, n + 1):
        for col, cname in enumerate(names[k]):
            for row, rname in enumerate(names[k - 1]):
                i, j = lam.labels[k - 1].index(rname), lam.labels[k].index(cname)
                assert lam.d(k)[i, j] == kap.d(k)[row, col], (k, rname, cname)


@pytest.mark.parametrize("seed", range(20))
def test_posets_with_top_are_acyclic(seed):
    rng = rng_for(seed, "top")
    c = random_poset(rng, rng.randint(1, 6), rng.uniform(0.1, 0.8), top=True)
    assert find_terminal(c) is not None
    assert homology_all(normalized_chains(classical_nerve(c, 4))) == [Z, ZERO, ZERO, ZERO]


def test_find_terminal():
    assert find_terminal(chain_poset(1)) == 1
    assert find_terminal(discrete_category(["a", "b"])) is None


@pytest.mark.parametrize("seed", range(10))
def test_identity_is_terminal_in_slices(seed):
    c = random_category(rng_for(seed, "slice-terminal"))
    for a in c.objects:
        sl, _ = slice_category(c, a)
        assert find_terminal(sl) == c.identity[a]


def test_deloopings():
    els, table, unit = cyclic_group(2)
    one = delooping(els, table, unit, 1)
    assert len(one.morphisms) == 2
    two = delooping(els, table, unit, 2)
    assert isinstance(two, Finite2Category)
    assert two.validate() == []
    els, table, unit = symmetric_group_s3()
    with pytest.raises(CategoryError):
        delooping(els, table, unit, 2)


def test_b2_z2_street_nerve():
    els, table, unit = cyclic_group(2)
    n = street_nerve(delooping(els, table, unit, 2), 3)
    assert [n.count(k) for k in range(4)] == [1, 1, 2, 8]
    assert check_simplicial_identities(n) == []
    assert homology_all(normalized_chains(n)) == [Z, ZERO, HomologyGroup(0, (2,))]


def test_b2_z2_count_by_brute_force():
    """3-simplices are Z/2 labels on the four triangles with one cocycle equation."""
    count = sum(1 for lab in itertools.product((0, 1), repeat=4)
                if (lab[0] + lab[2]) % 2 == (lab[1] + lab[3]) % 2)
    assert count == 8


@pytest.mark.parametrize("name", sorted(small_category_corpus()))
def test_street_nerve_matches_classical(name):
    c = small_category_corpus()[name]
    classical, street = classical_nerve(c, 3), street_nerve(c.as_2category(), 3)
    assert check_simplicial_identities(street) == []
    image_prev = []
    for n in range(4):
        assert classical.count(n) == street.count(n)
        index = {k: j for j, k in enumerate(street.simplices[n])}
        image = [index[classical_to_street(k, n, c)] for k in classical.simplices[n]]
        assert sorted(image) == list(range(street.count(n)))
        assert [street.degenerate[n][j] for j in image] == classical.degenerate[n]
        if n:
            for j, fs in enumerate(classical.faces[n]):
                assert tuple(image_prev[f] for f in fs) == street.faces[n][image[j]]
        image_prev = image


def test_category_json_formats():
    c = category_from_json({"poset": {"elements": ["a", "b", "c"], "relations": [["a", "b"], ["b", "c"]]}})
    assert len(c.morphisms) == 6
    m = category_from_json({"monoid": {"elements": ["1", "a"], "table": [["1", "a"], ["a", "1"]], "unit": "1"}})
    again = category_from_json(m.to_json())
    assert again.objects == m.objects and set(again.morphisms) == set(m.morphisms)
    assert again.comp == m.comp
    b2 = two_category_from_json({"delooping": {"group": {"elements": [0, 1], "table": [[0, 1], [1, 0]],
                                                          "unit": 0}, "n": 2}})
    assert len(b2.cells2) == 2

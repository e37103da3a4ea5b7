"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in the
terminal summary) or ``python3 -m tests.test_acceptance`` from the repository
root.
"""

import time
from contextlib import contextmanager

from polyhom.abelianize import b2n_polygraph, lambda_complex, polygraphic_homology
from polyhom.cellcore import Gen, globe, sphere
from polyhom.cli import compare
from polyhom.fincat import (FiniteCategory, Functor, chain_poset, check_simplicial_identities, classical_nerve,
                            classical_to_street, cyclic_group, delooping, find_terminal, normalized_chains,
                            oriental, oriental_name, street_nerve)
from polyhom.homalg import HomologyGroup, IntMatrix, homology_all, smith_normal_form, verify_complex
from polyhom.rewrite import parse_srs, resolution_polygraph
from polyhom.samples import (random_category, random_free_over_poset, random_poset, rng_for,
                             small_category_corpus)
from polyhom.slices import (conduche_check, constant_diagram, grothendieck, reassemble, slice_category,
                            slice_diagram, slice_polygraph)

from .conftest import ACCEPTANCE_LINES

Z, ZERO = HomologyGroup(1), HomologyGroup()

# complexes built by the criteria, re-checked for d o d = 0 in criterion 8
BUILT_COMPLEXES = []


@contextmanager
def criterion(number: int, title: str, budget: float):
    start = time.perf_counter()
    status, detail = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if elapsed < budget:
            status = "PASS"
        else:
            detail = f" (over the {budget:g} s budget)"
    except AssertionError as e:
        detail = f" ({e})" if str(e) else ""
        raise
    finally:
        elapsed = time.perf_counter() - start
        line = f"{status} criterion {number}: {title} [{elapsed:.2f} s]{detail}"
        print(line, flush=True)
        ACCEPTANCE_LINES.append(line)
    assert status == "PASS", line


def test_criterion_1_b2n_counterexample():
    with criterion(1, "polygraphic homology of B2N is Z, 0, Z", 1.0):
        p = b2n_polygraph()
        c = lambda_complex(p)
        BUILT_COMPLEXES.append(c)
        assert polygraphic_homology(p, 2) == [Z, ZERO, Z]


def test_criterion_2_resolution_matches_nerve():
    cases = {
        "letters: a\nrule: aa -> 1": [Z, HomologyGroup(0, (2,)), ZERO],
        "letters: a\nrule: aaa -> 1": [Z, HomologyGroup(0, (3,)), ZERO],
        "letters: a\n": [Z, Z, ZERO],
    }
    with criterion(2, "compare passes in degrees 0-2 for Z/2, Z/3 and the free monoid", 10.0):
        for text, expected in cases.items():
            report = compare("srs", text, text.splitlines()[-1], up_to=2)
            assert report.passed, text
            assert [d.pol for d in report.degrees] == expected
            assert [d.nerve for d in report.degrees] == expected
            BUILT_COMPLEXES.append(lambda_complex(resolution_polygraph(parse_srs(text))))


def test_criterion_3_orientals_against_simplices():
    with criterion(3, "lambda(O_n) equals normalized chains of [n] for n <= 3", 1.0):
        for n in range(4):
            lam = lambda_complex(oriental(n))
            nerve = classical_nerve(chain_poset(n), n)
            kap = normalized_chains(nerve)
            BUILT_COMPLEXES.extend([lam, kap])
            names = [[oriental_name(nerve.vertices[k][j]) for j in nerve.nondegenerate(k)]
                     for k in range(n + 1)]
            assert lam.ranks == kap.ranks
            for k in range(n + 1):
                assert sorted(names[k]) == sorted(lam.labels[k])
            for k in range(1, n + 1):
                for col, cname in enumerate(names[k]):
                    for row, rname in enumerate(names[k - 1]):
                        i, j = lam.labels[k - 1].index(rname), lam.labels[k].index(cname)
                        assert lam.d(k)[i, j] == kap.d(k)[row, col], f"n={n} d{k}[{rname},{cname}]"
        lam2 = lambda_complex(oriental(2))
        col = lam2.labels[2].index("<012>")
        d2 = {lam2.labels[1][i]: lam2.d(2)[i, col] for i in range(3)}
        assert d2 == {"<01>": 1, "<02>": -1, "<12>": 1}


def test_criterion_4_contractibility():
    with criterion(4, "globes and posets with a top element are acyclic", 30.0):
        for n in range(6):
            c = lambda_complex(globe(n))
            BUILT_COMPLEXES.append(c)
            assert homology_all(c) == [Z] + [ZERO] * n
        for seed in range(20):
            rng = rng_for(seed, "acceptance-top")
            a = random_poset(rng, rng.randint(1, 6), rng.uniform(0.1, 0.8), top=True)
            assert find_terminal(a) is not None
            c = normalized_chains(classical_nerve(a, 4))
            BUILT_COMPLEXES.append(c)
            assert homology_all(c, 3) == [Z, ZERO, ZERO, ZERO], f"seed {seed}"


def test_criterion_5_slices():
    with criterion(5, "100 random slice instances reassemble, match the basis formula, project Conduche", 60.0):
        for seed in range(100):
            rng = rng_for(seed, "acceptance-slices")
            base = random_poset(rng, rng.randint(1, 5), rng.uniform(0.2, 0.7))
            f = random_free_over_poset(rng, base, max_gens=8, max_dim=2)
            x = f.polygraph
            report = reassemble(f)
            assert report.ok, f"seed {seed}: {report.problems}"
            for a in base.objects:
                s = slice_polygraph(f, a, check=False)
                for n in range(x.max_dim + 1):
                    expected = sum(len(base.hom(f.images0[x.t0(Gen(g.name, g.dim))], a)) for g in x.generators(n))
                    assert len(s.polygraph.generators(n)) == expected, f"seed {seed}"
                _, proj = slice_category(base, a)
                assert conduche_check(proj).ok, f"seed {seed}, object {a}"


def _check_slice_identification(a: FiniteCategory):
    """For d = A/-: colim d is A, and the two functors from the Grothendieck
    construction to A are related by the natural transformation (a, p) |-> p."""
    d, _ = slice_diagram(a)
    res = grothendieck(d)
    total, colim = res.total, res.colimit
    assert len(total.objects) == len(a.morphisms)
    # phi : colim -> A, class of (x, p) |-> src p, class of (x, (h, p, q)) |-> h
    obj_of, mor_of = {}, {}
    for (x, p) in total.objects:
        obj_of.setdefault(res.to_colimit.on_objects[(x, p)], set()).add(a.src[p])
    for m in total.morphisms:
        mor_of.setdefault(res.to_colimit.on_morphisms[m], set()).add(m[2][0])
    assert all(len(v) == 1 for v in obj_of.values()) and all(len(v) == 1 for v in mor_of.values())
    phi = Functor(colim, a, {k: next(iter(v)) for k, v in obj_of.items()},
                  {k: next(iter(v)) for k, v in mor_of.items()})
    assert phi.validate() == [] and phi.is_isomorphism()
    via_colim = res.to_colimit.then(phi)
    assert via_colim.validate() == [] and res.projection.validate() == []
    for m in total.morphisms:
        (_, p), (_, q) = total.src[m], total.tgt[m]
        assert a.compose(res.projection(m), p) == a.compose(q, via_colim(m))


def test_criterion_6_grothendieck():
    with criterion(6, "integral of the constant point is A; slice diagram identifications", 10.0):
        point = FiniteCategory(["*"], {"id": ("*", "*")}, {"*": "id"}, {})
        bases = [chain_poset(1)] + [random_category(rng_for(seed, "acceptance-groth")) for seed in range(10)]
        for a in bases[1:]:
            res = grothendieck(constant_diagram(a, point))
            assert res.projection.is_isomorphism()
            assert len(res.total.objects) == len(a.objects) and len(res.total.morphisms) == len(a.morphisms)
        for a in bases:
            _check_slice_identification(a)
        res = grothendieck(slice_diagram(chain_poset(1))[0])
        assert len(res.total.objects) == 3
        assert (len(res.colimit.objects), len(res.colimit.morphisms)) == (2, 3)


def _street_agrees(c: FiniteCategory):
    classical, street = classical_nerve(c, 3), street_nerve(c.as_2category(), 3)
    assert check_simplicial_identities(street) == []
    previous = None
    for n in range(4):
        assert classical.count(n) == street.count(n)
        index = {k: j for j, k in enumerate(street.simplices[n])}
        image = [index[classical_to_street(k, n, c)] for k in classical.simplices[n]]
        assert sorted(image) == list(range(street.count(n)))
        assert [street.degenerate[n][j] for j in image] == classical.degenerate[n]
        if n:
            for j, fs in enumerate(classical.faces[n]):
                assert tuple(previous[f] for f in fs) == street.faces[n][image[j]]
        previous = image


def test_criterion_7_street_nerve():
    with criterion(7, "Street nerve agrees with the classical nerve; B2(Z/2) counts and H2", 30.0):
        corpus = list(small_category_corpus().values())
        for seed in range(30):
            c = random_category(rng_for(seed, "acceptance-street"))
            if len(c.objects) <= 3 and len(c.morphisms) <= 8:
                corpus.append(c)
        for c in corpus:
            assert len(c.objects) <= 3 and len(c.morphisms) <= 8
            _street_agrees(c)
        els, table, unit = cyclic_group(2)
        n = street_nerve(delooping(els, table, unit, 2), 3)
        assert (n.count(2), n.count(3)) == (2, 8)
        c = normalized_chains(n)
        BUILT_COMPLEXES.append(c)
        assert homology_all(c)[2] == HomologyGroup(0, (2,))


def test_criterion_8_algebra_kernel():
    with criterion(8, "1000 random Smith normal forms; d o d = 0 on every constructed complex", 30.0):
        for i in range(1000):
            rng = rng_for(i, "acceptance-snf")
            r, c = rng.randint(1, 6), rng.randint(1, 6)
            m = IntMatrix(r, c, [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)])
            s, u, v = smith_normal_form(m)
            assert u @ m @ v == s
            assert abs(u.det()) == 1 and abs(v.det()) == 1
            diag = [s[k, k] for k in range(min(r, c))]
            assert all(s[a, b] == 0 for a in range(r) for b in range(c) if a != b)
            nonzero = [x for x in diag if x]
            assert diag == nonzero + [0] * (len(diag) - len(nonzero)) and all(x > 0 for x in nonzero)
            assert all(y % x == 0 for x, y in zip(nonzero, nonzero[1:]))
        complexes = list(BUILT_COMPLEXES)
        complexes += [lambda_complex(sphere(n)) for n in range(6)]
        for seed in range(30):
            rng = rng_for(seed, "acceptance-dd")
            complexes.append(lambda_complex(random_free_over_poset(rng, random_poset(rng, 4)).polygraph))
        for c in small_category_corpus().values():
            complexes.append(normalized_chains(classical_nerve(c, 4)))
        assert all(verify_complex(c) for c in complexes)


if __name__ == "__main__":
    import sys
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except Exception:  # the FAIL line is already printed
                failed += 1
    sys.exit(1 if failed else 0)

"""String rewriting systems and the low-dimensional part of the polygraphic
resolution of the monoid they present."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .cellcore import Comp, Gen, Generator, Polygraph, Unit, compose
from .fincat import FiniteCategory, NerveTruncation, monoid_category

Word = tuple[str, ...]
STAR = "*"


class RewriteError(ValueError):
    pass


class SRSSyntaxError(RewriteError):
    """Malformed rewriting system text."""


class BoundError(RewriteError):
    """The monoid has more normal forms than the requested length bound allows."""


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Word
    name: str


@dataclass(frozen=True)
class Redex:
    rule: int
    position: int


@dataclass(frozen=True)
class CriticalBranching:
    word: Word
    left: Redex
    right: Redex
    left_reduct: Word
    right_reduct: Word
    name: str = ""


class StringRewritingSystem:
    def __init__(self, alphabet: Sequence[str], rules: Sequence[tuple], names: Optional[Sequence[str]] = None):
        self.alphabet = list(alphabet)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise RewriteError("repeated letters in the alphabet")
        self._rank = {a: i for i, a in enumerate(self.alphabet)}
        self.rules: list[Rule] = []
        seen = set()
        for i, (lhs, rhs) in enumerate(rules):
            lhs, rhs = tuple(lhs), tuple(rhs)
            name = names[i] if names else f"r{i}"
            for w in (lhs, rhs):
                bad = [x for x in w if x not in self._rank]
                if bad:
                    raise RewriteError(f"rule {name}: unknown letters {bad}")
            if not lhs:
                raise RewriteError(f"rule {name} has an empty left-hand side")
            if lhs in seen:
                raise RewriteError(f"two rules share the left-hand side {''.join(lhs)}")
            if not self.shortlex_less(rhs, lhs):
                raise RewriteError(f"rule {name} does not decrease the shortlex order")
            seen.add(lhs)
            self.rules.append(Rule(lhs, rhs, name))

    def __repr__(self):
        rules = ", ".join(f"{word_str(r.lhs)}->{word_str(r.rhs)}" for r in self.rules)
        return f"SRS([{' '.join(self.alphabet)}], {{{rules}}})"

    def shortlex_less(self, u: Word, v: Word) -> bool:
        return (len(u), [self._rank[x] for x in u]) < (len(v), [self._rank[x] for x in v])

    def redexes(self, w: Word) -> list[Redex]:
        out = []
        for pos in range(len(w)):
            for i, r in enumerate(self.rules):
                if w[pos:pos + len(r.lhs)] == r.lhs:
                    out.append(Redex(i, pos))
        return out

    def apply(self, w: Word, redex: Redex) -> Word:
        r = self.rules[redex.rule]
        pos = redex.position
        if w[pos:pos + len(r.lhs)] != r.lhs:
            raise RewriteError(f"no redex for {r.name} at position {pos}")
        return w[:pos] + r.rhs + w[pos + len(r.lhs):]

    def step(self, w: Word) -> Optional[Redex]:
        """Leftmost-outermost redex: earliest start, then longest left-hand side."""
        best = None
        for rx in self.redexes(w):
            if best is None:
                best = rx
            elif rx.position == best.position and \
                    len(self.rules[rx.rule].lhs) > len(self.rules[best.rule].lhs):
                best = rx
            elif rx.position > best.position:
                break
        return best

    def normalize(self, w: Sequence[str]) -> tuple[Word, list[Redex]]:
        w = tuple(w)
        trace = []
        while (rx := self.step(w)) is not None:
            trace.append(rx)
            w = self.apply(w, rx)
        return w, trace

    def normal_form(self, w: Sequence[str]) -> Word:
        return self.normalize(w)[0]

    def to_json(self) -> dict:
        return {"letters": self.alphabet,
                "rules": [{"name": r.name, "lhs": word_str(r.lhs), "rhs": word_str(r.rhs)} for r in self.rules]}


def word_str(w: Word) -> str:
    if not w:
        return "1"
    if all(len(x) == 1 for x in w):
        return "".join(w)
    return " ".join(w)


def parse_word(text: str, alphabet: Sequence[str]) -> Word:
    """``1`` is the empty word; letters may be space separated, and tokens made
    of single-character letters are split into characters."""
    out = []
    for tok in text.split():
        if tok == "1" and "1" not in alphabet:
            continue
        if tok in alphabet:
            out.append(tok)
        elif all(ch in alphabet for ch in tok):
            out.extend(tok)
        else:
            raise SRSSyntaxError(f"cannot read {tok!r} over the alphabet {alphabet}")
    return tuple(out)


def parse_srs(text: str) -> StringRewritingSystem:
    """Text format: ``letters: a b`` then ``rule: aa -> 1`` lines (or JSON)."""
    stripped = text.strip()
    if stripped.startswith("{"):
        return srs_from_json(json.loads(stripped))
    letters, rules, names = None, [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        key = key.strip()
        if key == "letters":
            letters = rest.split()
        elif key == "rule" or key.startswith("rule "):
            if letters is None:
                raise SRSSyntaxError(f"line {lineno}: rules must follow the letters line")
            lhs, arrow, rhs = rest.partition("->")
            if not arrow:
                raise SRSSyntaxError(f"line {lineno}: expected 'lhs -> rhs'")
            rules.append((parse_word(lhs, letters), parse_word(rhs, letters)))
            names.append(key[5:].strip() or f"r{len(names)}")
        else:
            raise SRSSyntaxError(f"line {lineno}: unknown directive {key!r}")
    if letters is None:
        raise SRSSyntaxError("missing 'letters:' line")
    return StringRewritingSystem(letters, rules, names)


def srs_from_json(obj: dict) -> StringRewritingSystem:
    letters = obj["letters"]
    rules, names = [], []
    for i, r in enumerate(obj.get("rules", [])):
        if isinstance(r, dict):
            rules.append((parse_word(r["lhs"], letters), parse_word(r["rhs"], letters)))
            names.append(r.get("name", f"r{i}"))
        else:
            rules.append((parse_word(r[0], letters), parse_word(r[1], letters)))
            names.append(f"r{i}")
    return StringRewritingSystem(letters, rules, names)


# -- critical branchings -----------------------------------------------------

def critical_branchings(srs: StringRewritingSystem) -> list[CriticalBranching]:
    """Overlap and inclusion branchings, one per unordered pair of redexes."""
    found = {}
    rules = srs.rules
    for i, ri in enumerate(rules):
        for j, rj in enumerate(rules):
            # rj strictly inside ri
            for q in range(len(ri.lhs) - len(rj.lhs) + 1):
                if (i, q) != (j, 0) and ri.lhs[q:q + len(rj.lhs)] == rj.lhs:
                    found.setdefault((ri.lhs, Redex(i, 0), Redex(j, q)), None)
            # proper overlap: suffix of ri is a prefix of rj
            for k in range(1, min(len(ri.lhs), len(rj.lhs))):
                if ri.lhs[-k:] == rj.lhs[:k]:
                    w = ri.lhs + rj.lhs[k:]
                    found.setdefault((w, Redex(i, 0), Redex(j, len(ri.lhs) - k)), None)
    out = []
    keys = sorted(found, key=lambda t: (len(t[0]), t[0], t[1].position, t[1].rule, t[2].position, t[2].rule))
    seen = set()
    for w, a, b in keys:
        key = (w, frozenset((a, b)))
        if key in seen:
            continue
        seen.add(key)
        out.append(CriticalBranching(w, a, b, srs.apply(w, a), srs.apply(w, b), f"c{len(out)}"))
    return out


def non_confluent_branching(srs: StringRewritingSystem) -> Optional[CriticalBranching]:
    for cb in critical_branchings(srs):
        if srs.normal_form(cb.left_reduct) != srs.normal_form(cb.right_reduct):
            return cb
    return None


def is_convergent(srs: StringRewritingSystem) -> bool:
    """Terminating by construction; locally confluent iff every critical
    branching closes."""
    return non_confluent_branching(srs) is None


# -- resolution --------------------------------------------------------------

def word_cell(w: Word) -> "Gen | Unit | Comp":
    """The 1-cell x1 *0 x2 *0 ... *0 xn (so x1 o ... o xn); the empty word is
    the unit on the base point."""
    if not w:
        return Unit(Gen(STAR, 0), 1)
    return compose(0, *(Gen(x, 1) for x in w))


def rewrite_step_cell(srs: StringRewritingSystem, w: Word, rx: Redex):
    """The whiskered 2-cell u *0 r *0 v for w = u lhs v."""
    r = srs.rules[rx.rule]
    u, v = w[:rx.position], w[rx.position + len(r.lhs):]
    parts = ([word_cell(u)] if u else []) + [Gen(r.name, 2)] + ([word_cell(v)] if v else [])
    return compose(0, *parts)


def path_cell(srs: StringRewritingSystem, w: Word, steps: Sequence[Redex]):
    """The 2-cell s_m *1 ... *1 s_1 of a reduction sequence starting at w."""
    cells = []
    for rx in steps:
        cells.append(rewrite_step_cell(srs, w, rx))
        w = srs.apply(w, rx)
    if not cells:
        return Unit(word_cell(w), 2)
    return compose(1, *reversed(cells))


def branching_paths(srs: StringRewritingSystem, cb: CriticalBranching) -> tuple[list[Redex], list[Redex]]:
    """Both reduction sequences of a branching: the first step, then leftmost-outermost."""
    left = [cb.left] + srs.normalize(cb.left_reduct)[1]
    right = [cb.right] + srs.normalize(cb.right_reduct)[1]
    return left, right


def resolution_polygraph(srs: StringRewritingSystem, depth: int = 3) -> Polygraph:
    """One 0-cell, the letters, the rules and (depth 3) the critical branchings.

    The result is a resolution truncated at ``depth``: homology is certified
    in degrees below ``depth``.
    """
    if not 1 <= depth <= 3:
        raise RewriteError("resolution depth must be 1, 2 or 3")
    if depth >= 3:
        bad = non_confluent_branching(srs)
        if bad is not None:
            raise RewriteError(f"system is not confluent: {word_str(bad.word)} reduces to "
                               f"{word_str(srs.normal_form(bad.left_reduct))} and "
                               f"{word_str(srs.normal_form(bad.right_reduct))}")
    star = Gen(STAR, 0)
    gens = [Generator(STAR, 0)]
    gens += [Generator(x, 1, star, star) for x in srs.alphabet]
    if depth >= 2:
        gens += [Generator(r.name, 2, word_cell(r.lhs), word_cell(r.rhs)) for r in srs.rules]
    if depth >= 3:
        for cb in critical_branchings(srs):
            left, right = branching_paths(srs, cb)
            # source is the path through the right redex, so d(c) = left path - right path
            gens.append(Generator(cb.name, 3, path_cell(srs, cb.word, right), path_cell(srs, cb.word, left)))
    return Polygraph(gens, truncation=depth)


def rule_multiset(srs: StringRewritingSystem, steps: Sequence[Redex]) -> Counter:
    return Counter(srs.rules[rx.rule].name for rx in steps)


# -- the presented monoid ----------------------------------------------------

def normal_forms(srs: StringRewritingSystem, bound: int) -> list[Word]:
    """All normal forms, by breadth-first extension; BoundError past ``bound``."""
    found = [()]
    seen = {()}
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for x in srs.alphabet:
                v = srs.normal_form(w + (x,))
                if v in seen:
                    continue
                if len(v) > bound:
                    raise BoundError(f"normal form {word_str(v)} is longer than the bound {bound}; "
                                     f"the monoid may be infinite")
                seen.add(v)
                found.append(v)
                nxt.append(v)
        frontier = nxt
    return sorted(found, key=lambda w: (len(w), [srs.alphabet.index(x) for x in w]))


def monoid_from_srs(srs: StringRewritingSystem, bound: int) -> FiniteCategory:
    """The presented monoid as a one-object category; morphisms are normal forms
    written as strings, the unit is ``1``."""
    forms = normal_forms(srs, bound)
    names = [word_str(w) for w in forms]
    table = [[word_str(srs.normal_form(u + v)) for v in forms] for u in forms]
    return monoid_category(names, table, "1")


def filtered_monoid_nerve(srs: StringRewritingSystem, max_dim: int, length: int) -> NerveTruncation:
    """Nerve of the presented monoid restricted to simplices whose normal forms
    have total length <= ``length``.

    Rules never lengthen words, so faces stay inside the filtration and this is
    a simplicial subset; for a finite monoid and a large enough ``length`` it is
    the whole truncated nerve.
    """
    elems = [()]
    frontier = [()]
    seen = {()}
    while frontier:
        nxt = []
        for w in frontier:
            for x in srs.alphabet:
                v = srs.normal_form(w + (x,))
                if v not in seen and len(v) <= length:
                    seen.add(v)
                    elems.append(v)
                    nxt.append(v)
        frontier = nxt
    nerve = NerveTruncation()
    nerve.simplices.append([STAR])
    nerve.faces.append([()])
    nerve.degenerate.append([False])
    nerve.vertices.append([(STAR,)])
    index = [{STAR: 0}]
    prev = [()]
    for n in range(1, max_dim + 1):
        simplices = [s + (m,) for s in prev for m in elems
                     if sum(map(len, s)) + len(m) <= length]
        idx = {s: i for i, s in enumerate(simplices)}
        faces = []
        for s in simplices:
            if n == 1:
                faces.append((0, 0))
                continue
            fs = []
            for i in range(n + 1):
                if i == 0:
                    f = s[1:]
                elif i == n:
                    f = s[:-1]
                else:
                    f = s[:i - 1] + (srs.normal_form(s[i - 1] + s[i]),) + s[i + 1:]
                fs.append(index[n - 1][f])
            faces.append(tuple(fs))
        nerve.simplices.append([tuple(word_str(m) for m in s) for s in simplices])
        nerve.faces.append(faces)
        nerve.degenerate.append([any(len(m) == 0 for m in s) for s in simplices])
        nerve.vertices.append([(STAR,) * (n + 1)] * len(simplices))
        index.append(idx)
        prev = simplices
    return nerve

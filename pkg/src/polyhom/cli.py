"""Command-line interface: ``polyhom <command> FILE [options]``.

Exit codes: 0 success or match, 1 mismatch (comparison or failed check),
2 validation failure, 3 parse error, 4 truncation or capability error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .abelianize import b2n_polygraph, lambda_complex, polygraphic_homology
from .cellcore import (CellError, Polygraph, globe, polygraph_from_json, polygraph_to_json, sphere,
                       to_text, validate_polygraph)
from .fincat import (CategoryError, FiniteCategory, Functor, _label, category_from_json, classical_nerve,
                     normalized_chains, oriental, street_nerve, two_category_from_json)
from .homalg import HomologyGroup, TruncationError, format_homology, homology_all
from .rewrite import (BoundError, RewriteError, SRSSyntaxError, StringRewritingSystem, filtered_monoid_nerve,
                      is_convergent, monoid_from_srs, parse_srs, resolution_polygraph)
from .slices import (Diagram, FunctorToBase, SliceError, conduche_check, constant_diagram, grothendieck,
                     reassemble, slice_category, slice_diagram, slice_polygraph)

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_PARSE, EXIT_TRUNCATION = 0, 1, 2, 3, 4


class ParseError(ValueError):
    pass


# -- input loading -----------------------------------------------------------

BUILTINS = {
    "globe": globe,
    "sphere": sphere,
    "oriental": oriental,
}


def _builtin(token: str) -> Optional[Polygraph]:
    if token == "b2n":
        return b2n_polygraph()
    name, _, arg = token.partition(":")
    if name in BUILTINS and arg.lstrip("-").isdigit():
        return BUILTINS[name](int(arg))
    return None


def load_input(path: str):
    """Return (kind, raw) where raw is the decoded JSON object or SRS text.

    ``path`` may also name a built-in polygraph: ``globe:N``, ``sphere:N``,
    ``oriental:N`` or ``b2n``.
    """
    p = Path(path)
    if not p.exists():
        built = _builtin(path)
        if built is not None:
            return "polygraph", built
        raise ParseError(f"no such file: {path}")
    text = p.read_text(encoding="utf-8")
    if not text.lstrip().startswith("{"):
        body = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        if next((ln for ln in body if ln), "").startswith("letters"):
            return "srs", text
        raise ParseError(f"{path}: neither JSON nor a rewriting system")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: malformed JSON: {e}") from None
    return detect_kind(obj), obj


def detect_kind(obj) -> str:
    if not isinstance(obj, dict):
        raise ParseError("top-level JSON value must be an object")
    if "generators" in obj:
        return "polygraph"
    if "letters" in obj:
        return "srs"
    if "polygraph" in obj and "base" in obj:
        return "functor_to_base"
    if "base" in obj and ({"fibers", "constant", "slices"} & obj.keys()):
        return "diagram"
    if "functor" in obj:
        return "functor"
    if "category" in obj and "resolution" in obj:
        return "category_with_resolution"
    if "delooping" in obj or "cells2" in obj:
        return "2category"
    if {"monoid", "poset", "objects"} & obj.keys():
        return "category"
    raise ParseError("unrecognized input format")


def _structural(fn, *args):
    """Run a JSON-to-object converter, mapping structural errors to ParseError."""
    try:
        return fn(*args)
    except (KeyError, TypeError, AttributeError) as e:
        raise ParseError(f"malformed input: missing or ill-typed field {e}") from None


def as_polygraph(kind, raw) -> Polygraph:
    if isinstance(raw, Polygraph):
        return raw
    if kind == "polygraph":
        return _structural(polygraph_from_json, raw)
    if kind == "srs":
        return resolution_polygraph(as_srs(kind, raw))
    raise ParseError(f"expected a polygraph, got a {kind}")


def as_srs(kind, raw) -> StringRewritingSystem:
    if kind != "srs":
        raise ParseError(f"expected a rewriting system, got a {kind}")
    if isinstance(raw, str):
        return parse_srs(raw)
    return _structural(lambda o: parse_srs(json.dumps(o)), raw)


def as_category(kind, raw, bound: int = 64) -> FiniteCategory:
    if kind == "category":
        return _structural(category_from_json, raw)
    if kind == "srs":
        return monoid_from_srs(as_srs(kind, raw), bound)
    raise ParseError(f"expected a category, got a {kind}")


def functor_to_base_from_json(obj: dict) -> FunctorToBase:
    base = category_from_json(obj["base"])
    names = {_label(m): m for m in base.morphisms}
    onames = {_label(x): x for x in base.objects}
    images0 = {g: onames.get(x, x) for g, x in obj["images0"].items()}
    images1 = {g: names.get(m, m) for g, m in obj.get("images1", {}).items()}
    return FunctorToBase(polygraph_from_json(obj["polygraph"]), base, images0, images1)


def functor_table(source: FiniteCategory, target: FiniteCategory, table: dict) -> Functor:
    onames = {_label(x): x for x in target.objects}
    mnames = {_label(m): m for m in target.morphisms}
    so = {_label(x): x for x in source.objects}
    sm = {_label(m): m for m in source.morphisms}
    return Functor(source, target,
                   {so[k]: onames.get(v, v) for k, v in table["objects"].items()},
                   {sm[k]: mnames.get(v, v) for k, v in table["morphisms"].items()})


def diagram_from_json(obj: dict) -> Diagram:
    base = category_from_json(obj["base"])
    if "constant" in obj:
        return constant_diagram(base, category_from_json(obj["constant"]))
    if obj.get("slices"):
        return slice_diagram(base)[0]
    onames = {_label(x): x for x in base.objects}
    mnames = {_label(m): m for m in base.morphisms}
    fibers = {onames[k]: category_from_json(v) for k, v in obj["fibers"].items()}
    trans = {}
    for k, table in obj["transitions"].items():
        beta = mnames[k]
        trans[beta] = functor_table(fibers[base.src[beta]], fibers[base.tgt[beta]], table)
    return Diagram(base, fibers, trans)


# -- comparison report -------------------------------------------------------

@dataclass
class DegreeComparison:
    degree: int
    pol: HomologyGroup
    nerve: Optional[HomologyGroup]

    @property
    def verdict(self) -> str:
        if self.nerve is None:
            return "N/A"
        return "EQUAL" if self.pol == self.nerve else "DIFFER"


@dataclass
class ComparisonReport:
    inputs: dict
    degrees: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    timings: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return all(d.verdict != "DIFFER" for d in self.degrees)

    def to_json(self) -> dict:
        out = {
            "inputs": self.inputs,
            "degrees": [{"degree": d.degree, "pol": d.pol.to_json(d.degree),
                         "nerve": None if d.nerve is None else d.nerve.to_json(d.degree),
                         "verdict": d.verdict} for d in self.degrees],
            "notes": list(self.notes),
            "verdict": "PASS" if self.passed else "FAIL",
        }
        if self.timings is not None:
            out["timings"] = self.timings
        return out

    def render(self) -> str:
        lines = [f"input: {self.inputs.get('path')} ({self.inputs.get('kind')})"]
        lines.append(f"{'degree':<8}{'H_pol':<14}{'H_nerve':<14}verdict")
        for d in self.degrees:
            lines.append(f"{d.degree:<8}{str(d.pol):<14}{'-' if d.nerve is None else str(d.nerve):<14}{d.verdict}")
        lines += [f"note: {n}" for n in self.notes]
        if self.timings is not None:
            lines.append("timings: " + " ".join(f"{k}={v:.3f}s" for k, v in self.timings.items()))
        lines.append("verdict: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def compare(kind, raw, path: str, up_to: int = 2, pol_only: bool = False, length: int = 6,
            timings: bool = False) -> ComparisonReport:
    """Polygraphic homology of a resolution against homology of the nerve."""
    report = ComparisonReport({"path": path, "kind": kind, "up_to": up_to})
    clock = {}
    t0 = time.perf_counter()
    if kind == "srs":
        srs = as_srs(kind, raw)
        resolution = resolution_polygraph(srs, 3)
    elif kind == "category_with_resolution":
        resolution = _structural(polygraph_from_json, raw["resolution"])
    elif kind == "polygraph":
        resolution = as_polygraph(kind, raw)
    else:
        raise ParseError(f"compare expects a rewriting system or a category with a resolution, got a {kind}")
    pol = polygraphic_homology(resolution, up_to)
    clock["polygraphic"] = time.perf_counter() - t0

    nerve_groups = None
    t0 = time.perf_counter()
    if pol_only or kind == "polygraph":
        report.notes.append("nerve side not computed: out of desk scale for this input "
                            "(the nerve of B2N is a K(Z,2) with infinitely many simplices)"
                            if kind == "polygraph" else "nerve side skipped (--pol-only)")
    elif kind == "srs":
        try:
            cat = monoid_from_srs(srs, bound=max(16, length))
            chains = normalized_chains(classical_nerve(cat, up_to + 1))
            report.notes.append(f"nerve of the presented monoid ({len(cat.morphisms)} elements), "
                                f"truncated at degree {up_to + 1}")
        except BoundError:
            chains = normalized_chains(filtered_monoid_nerve(srs, up_to + 1, length))
            report.notes.append(f"infinite monoid: nerve restricted to chains of total normal-form "
                                f"length <= {length}")
        nerve_groups = homology_all(chains, up_to)
    else:
        cat = _structural(category_from_json, raw["category"])
        nerve_groups = homology_all(normalized_chains(classical_nerve(cat, up_to + 1)), up_to)
    clock["nerve"] = time.perf_counter() - t0
    for n, g in enumerate(pol):
        report.degrees.append(DegreeComparison(n, g, None if nerve_groups is None else nerve_groups[n]))
    if timings:
        report.timings = clock
    return report


# -- commands ----------------------------------------------------------------

def _emit(args, human: str, payload) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(human)


def cmd_validate(args) -> int:
    kind, raw = load_input(args.path)
    problems: list[str] = []
    summary = kind
    if kind in ("polygraph",):
        p = as_polygraph(kind, raw)
        problems = validate_polygraph(p).problems
        summary = f"polygraph with {len(p.generators())} generators, max dimension {p.max_dim}"
    elif kind == "srs":
        srs = as_srs(kind, raw)
        summary = f"rewriting system with {len(srs.rules)} rules, " + \
                  ("convergent" if is_convergent(srs) else "not confluent")
    elif kind == "category":
        c = as_category(kind, raw)
        summary = f"category with {len(c.objects)} objects and {len(c.morphisms)} morphisms"
    elif kind == "2category":
        c2 = _structural(two_category_from_json, raw)
        summary = f"2-category with {len(c2.cells2)} 2-cells"
    elif kind == "functor_to_base":
        f = _structural(functor_to_base_from_json, raw)
        problems = f.validate()
        summary = "functor to a 1-category"
    elif kind == "diagram":
        d = _structural(diagram_from_json, raw)
        problems = d.validate()
        summary = f"diagram over {len(d.base.objects)} objects"
    elif kind == "functor":
        u = _load_functor(raw)
        problems = u.validate()
        summary = "functor"
    else:
        raise ParseError(f"cannot validate a {kind}")
    _emit(args, "\n".join(["invalid: " + summary] + [f"- {p}" for p in problems]) if problems
          else "valid: " + summary, {"kind": kind, "valid": not problems, "problems": problems})
    return EXIT_INVALID if problems else EXIT_OK


def cmd_lambda_homology(args) -> int:
    kind, raw = load_input(args.path)
    p = as_polygraph(kind, raw)
    groups = polygraphic_homology(p, args.up_to)
    payload = {"complex": lambda_complex(p, check=False).to_json(),
               "homology": [g.to_json(n) for n, g in enumerate(groups)]}
    _emit(args, format_homology(groups), payload)
    return EXIT_OK


def cmd_nerve_homology(args) -> int:
    kind, raw = load_input(args.path)
    c = as_category(kind, raw)
    chains = normalized_chains(classical_nerve(c, args.max_dim))
    groups = homology_all(chains)
    _emit(args, format_homology(groups),
          {"complex": chains.to_json(), "homology": [g.to_json(n) for n, g in enumerate(groups)]})
    return EXIT_OK


def cmd_street_nerve(args) -> int:
    kind, raw = load_input(args.path)
    if kind == "category":
        c2 = as_category(kind, raw).as_2category()
    elif kind == "2category":
        c2 = _structural(two_category_from_json, raw)
    else:
        raise ParseError(f"street-nerve expects a 2-category, got a {kind}")
    if args.max_dim > 3:
        raise CategoryError("the Street nerve is implemented up to degree 3")
    nerve = street_nerve(c2, args.max_dim)
    chains = normalized_chains(nerve)
    groups = homology_all(chains)
    counts = [nerve.count(n) for n in range(nerve.max_dim + 1)]
    nondeg = [len(nerve.nondegenerate(n)) for n in range(nerve.max_dim + 1)]
    human = "\n".join([f"simplices: {' '.join(map(str, counts))}",
                       f"nondegenerate: {' '.join(map(str, nondeg))}",
                       format_homology(groups)])
    _emit(args, human, {"simplices": counts, "nondegenerate": nondeg,
                        "homology": [g.to_json(n) for n, g in enumerate(groups)]})
    return EXIT_OK


def _find_object(c: FiniteCategory, label: str):
    for x in c.objects:
        if _label(x) == label:
            return x
    raise SliceError(f"no object {label!r} in the base")


def cmd_slice(args) -> int:
    kind, raw = load_input(args.path)
    if kind != "functor_to_base":
        raise ParseError(f"slice expects a functor to a 1-category, got a {kind}")
    f = _structural(functor_to_base_from_json, raw)
    s = slice_polygraph(f, _find_object(f.base, args.at))
    lines = [f"slice over {args.at}: {len(s.polygraph.generators())} generators"]
    for g in s.polygraph.generators():
        if g.dim == 0:
            lines.append(f"  {g.name} (dim 0)")
        else:
            lines.append(f"  {g.name} (dim {g.dim}): {to_text(g.source)} -> {to_text(g.target)}")
    _emit(args, "\n".join(lines), polygraph_to_json(s.polygraph))
    return EXIT_OK


def cmd_reassemble(args) -> int:
    kind, raw = load_input(args.path)
    if kind != "functor_to_base":
        raise ParseError(f"reassemble expects a functor to a 1-category, got a {kind}")
    f = _structural(functor_to_base_from_json, raw)
    rep = reassemble(f)
    lines = [("isomorphic" if rep.ok else "NOT isomorphic") + f": {len(rep.classes)} classes"]
    lines += [f"  {rep_name} -> {g}" for rep_name, g in sorted(rep.classes.items())]
    lines += [f"- {p}" for p in rep.problems]
    _emit(args, "\n".join(lines), {"ok": rep.ok, "classes": rep.classes, "problems": rep.problems})
    return EXIT_OK if rep.ok else EXIT_MISMATCH


def _load_functor(raw) -> Functor:
    def build(obj):
        src, tgt = category_from_json(obj["source"]), category_from_json(obj["target"])
        return functor_table(src, tgt, obj["functor"])
    return _structural(build, raw)


def cmd_conduche(args) -> int:
    """A functor file is checked directly; a category file checks every
    projection A/a -> A."""
    kind, raw = load_input(args.path)
    if kind == "functor":
        checks = [("functor", _load_functor(raw))]
    else:
        c = as_category(kind, raw)
        checks = [(f"pi_{_label(a)}", slice_category(c, a)[1]) for a in c.objects]
    results = []
    for name, u in checks:
        r = conduche_check(u)
        results.append({"functor": name, "conduche": r.ok, "counterexample": r.counterexample})
    lines = []
    for r in results:
        line = f"{r['functor']}: {'discrete Conduché' if r['conduche'] else 'NOT discrete Conduché'}"
        if r["counterexample"]:
            line += f" (counterexample {r['counterexample']})"
        lines.append(line)
    _emit(args, "\n".join(lines), results)
    return EXIT_OK if all(r["conduche"] for r in results) else EXIT_MISMATCH


def cmd_grothendieck(args) -> int:
    kind, raw = load_input(args.path)
    if kind != "diagram":
        raise ParseError(f"grothendieck expects a diagram, got a {kind}")
    d = _structural(diagram_from_json, raw)
    res = grothendieck(d, with_colimit=True)
    total = res.total
    lines = [f"total category: {len(total.objects)} objects, {len(total.morphisms)} morphisms"]
    lines.append(f"projection to the base: functor {'valid' if not res.projection.validate() else 'INVALID'}")
    if res.colimit is not None:
        lines.append(f"colimit: {len(res.colimit.objects)} objects, {len(res.colimit.morphisms)} morphisms")
    payload = {"total": total.to_json(),
               "colimit": None if res.colimit is None else res.colimit.to_json()}
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_resolve(args) -> int:
    kind, raw = load_input(args.path)
    srs = as_srs(kind, raw)
    p = resolution_polygraph(srs, args.depth)
    lines = [f"resolution truncated at dimension {p.truncation}: " +
             ", ".join(f"{len(p.generators(n))} cells of dim {n}" for n in range(p.truncation + 1))]
    for g in p.generators():
        if g.dim >= 2:
            lines.append(f"  {g.name} (dim {g.dim}): {to_text(g.source)} -> {to_text(g.target)}")
    _emit(args, "\n".join(lines), polygraph_to_json(p))
    return EXIT_OK


def cmd_compare(args) -> int:
    kind, raw = load_input(args.path)
    report = compare(kind, raw, args.path, args.up_to, args.pol_only, args.length, args.timings)
    _emit(args, report.render(), report.to_json())
    return EXIT_OK if report.passed else EXIT_MISMATCH


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyhom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("path", help="input file, or globe:N / sphere:N / oriental:N / b2n")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=fn)
        return p

    add("validate", cmd_validate, "parse and validate any supported input")
    add("lambda-homology", cmd_lambda_homology, "homology of the abelianization of a polygraph") \
        .add_argument("--up-to", type=int, default=2)
    add("nerve-homology", cmd_nerve_homology, "homology of the normalized nerve of a category") \
        .add_argument("--max-dim", type=int, default=4)
    add("street-nerve", cmd_street_nerve, "Street nerve of a 2-category (degree <= 3)") \
        .add_argument("--max-dim", type=int, default=3)
    add("slice", cmd_slice, "slice of a free omega-category over an object").add_argument("--at", required=True)
    add("reassemble", cmd_reassemble, "glue the slices and compare with the input")
    add("conduche", cmd_conduche, "discrete Conduché check")
    add("grothendieck", cmd_grothendieck, "Grothendieck construction of a diagram of categories")
    add("resolve", cmd_resolve, "truncated resolution of the monoid presented by a rewriting system") \
        .add_argument("--depth", type=int, default=3)
    p = add("compare", cmd_compare, "polygraphic homology against nerve homology")
    p.add_argument("--up-to", type=int, default=2)
    p.add_argument("--pol-only", action="store_true", help="skip the nerve side")
    p.add_argument("--length", type=int, default=6,
                   help="normal-form length filtration for infinite monoids")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, SRSSyntaxError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except TruncationError as e:
        print(f"truncation error: {e}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (CellError, CategoryError, SliceError, RewriteError) as e:
        msg = str(e)
        if "implemented up to" in msg or "hard-coded up to" in msg:
            print(f"unsupported: {msg}", file=sys.stderr)
            return EXIT_TRUNCATION
        print(f"invalid input: {msg}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

"""``tropfan`` command line: JSON in, canonical JSON out, summaries on stderr."""

from __future__ import annotations

import argparse
import sys
from typing import Any, Sequence

from . import classify1d as c1
from . import classify2d as c2
from .errors import ParseError, SchemaError, TropfanError
from .fan import WeightedFan, check_balanced, validate
from .fixtures import DEFAULT_SEED, run_all
from .io import dumps, fan_to_json, function_to_json, parse_file
from .trop import TRFunction, cycle_of, intersection_number, product, stable_intersect

EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 1, 2


class Finding(Exception):
    """A computation finished with a negative answer; the payload is still emitted."""

    def __init__(self, payload: Any, summary: str):
        super().__init__(summary)
        self.payload = payload


def _load(path: str, kind: type | None, args) -> Any:
    x = parse_file(path, normalize_rays=args.normalize_rays)
    if kind is tuple and not isinstance(x, tuple):
        raise ParseError(f"{path}: expected a pair document with T1 and T2")
    if kind not in (None, tuple) and not isinstance(x, kind):
        raise ParseError(f"{path}: expected a {'fan' if kind is WeightedFan else 'TR function'} document")
    return x


def _cycle_json(X) -> Any:
    c = cycle_of(X)
    if isinstance(c, dict):
        return [{"ray": list(r), "weight": w} for r, w in sorted(c.items())]
    return c


# --- subcommands ---------------------------------------------------------------


def cmd_validate(args) -> tuple[Any, str]:
    F = _load(args.fan, WeightedFan, args)
    diags = [{"axiom": d.axiom, "cones": [list(c) for c in d.cones], "message": d.message} for d in validate(F)]
    payload = {"valid": not diags, "diagnostics": diags}
    if diags:
        raise Finding(payload, f"invalid fan: {len(diags)} violation(s), first: {diags[0]['message']}")
    return payload, f"valid {F.dim}-dimensional fan with {len(F.rays)} rays"


def cmd_balance(args) -> tuple[Any, str]:
    F = _load(args.fan, WeightedFan, args)
    rep = check_balanced(F)
    payload = {
        "balanced": rep.balanced,
        "failures": [list(f) for f in rep.failures],
        "residuals": [{"face": list(k), "sum": list(v)} for k, v in sorted(rep.residuals.items())],
    }
    if not rep.balanced:
        raise Finding(payload, f"unbalanced at {len(rep.failures)} face(s)")
    return payload, "balanced"


def cmd_product(args) -> tuple[Any, str]:
    F = _load(args.fan, WeightedFan, args)
    Ts = [_load(p, TRFunction, args) for p in args.function]
    if len(Ts) == 1:
        T = Ts[0]
        X = stable_intersect(F, T, seed=args.seed) if args.stable else product(T, F)
        if F.dim == 1:
            return {"weight": X.weight}, f"degree {X.weight}"
        return {"cycle": _cycle_json(X)}, f"1-cycle with {len(cycle_of(X))} rays"
    if len(Ts) != F.dim:
        raise ParseError(f"{len(Ts)} functions given for a {F.dim}-dimensional fan", field="function")
    d = intersection_number(Ts, F)
    return {"degree": d}, f"intersection number {d}"


def cmd_classify_1d(args) -> tuple[Any, str]:
    F = _load(args.fan, WeightedFan, args)
    gals = c1.find_galleries(F)
    P = c1.canonical_partition(F, gals)
    payload: dict[str, Any] = {
        "galleries": [{"rays": [g.a, g.b], "functional": list(g.l)} for g in gals],
        "classes": [list(c) for c in P.classes],
        "nongallery": list(P.nongallery),
        "m_max": [function_to_json(c1.m_max(F, c[0], P)) for c in P.classes],
    }
    if P.classes:
        model = c1.minimal_model(F, P)
        payload["pi_F"] = [list(r) for r in model.matrix]
        payload["image"] = fan_to_json(model.image)
    else:
        raise Finding(payload, "no galleries: the curve is not regular")
    return payload, f"{len(gals)} galleries, {len(P.classes)} classes, {len(P.nongallery)} non-gallery rays"


def cmd_minimal_model(args) -> tuple[Any, str]:
    F = _load(args.fan, WeightedFan, args)
    model = c1.minimal_model(F)
    bs = c1.is_bergman_sum(model.image)
    payload = {
        "matrix": [list(r) for r in model.matrix],
        "image": fan_to_json(model.image),
        "class_blocks": [list(b) for b in model.class_blocks],
        "bergman_sum": bs.ok,
    }
    return payload, f"model in R^{len(model.matrix)}; Bergman sum: {bs.ok}"


def _pair(args) -> c2.ConventionPair:
    T1, T2 = _load(args.pair, tuple, args)
    return c2.choose_convention_pair(T1, T2)


def _pair_json(P: c2.ConventionPair) -> dict:
    return {"T1": function_to_json(P.T1), "T2": function_to_json(P.T2)}


def cmd_enumerate_planes(args) -> tuple[Any, str]:
    P = _pair(args)
    pool = c2.certified_planes(P)
    if args.all_candidates:
        pool = c2._dedupe(c2._all_raw(P))
    if args.profile:
        c2.matches_profile((0, 0, 0), args.profile)  # syntax check
        pool = [c for c in pool if c2.matches_profile(c.profile, args.profile)]
    payload = {"pair": _pair_json(P), "candidates": [c.to_json() for c in pool]}
    return payload, f"{len(pool)} plane(s)"


def cmd_assemble(args) -> tuple[Any, str]:
    P = _pair(args)
    res = c2.assemble_strongly_regular(P, args.max_planes, max_subsets=args.max_subsets)

    def cyc(c: c2.AssembledCycle) -> dict:
        return {
            "fan": fan_to_json(c.fan),
            "planes": list(c.planes),
            "profile": list(c.profile),
            "plane_profiles": [list(p) for p in c.plane_profiles],
            "coverage": [{"facet": list(f), "binomials": list(b)} for f, b in c.coverage],
        }

    payload = {
        "pair": _pair_json(P),
        "planes": [c.to_json() for c in res.planes],
        "binomials": [
            {"l": list(b.l), "h": list(b.h)} for b in c2.binomials_of(P.T1) + c2.binomials_of(P.T2)
        ],
        "cycles": [cyc(c) for c in res.cycles],
        "hodge_counterexamples": [cyc(c) for c in res.hodge_counterexamples],
        "subsets_searched": res.subsets_searched,
        "balanced_found": res.balanced_found,
    }
    return payload, (
        f"{len(res.cycles)} strongly regular cycle(s), {len(res.hodge_counterexamples)} Hodge-index "
        f"counterexample(s) from {res.subsets_searched} plane subsets"
    )


def cmd_verify_paper(args) -> tuple[Any, str]:
    results = run_all(args.seed)
    payload = {"seed": args.seed, "fixtures": [r.to_json() for r in results]}
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}" for r in results]
    for r in results:
        if not r.passed:
            lines.append(f"      {r.name}: computed {dumps(r.computed)}, expected {dumps(r.expected)}")
    summary = "\n".join(lines)
    if not all(r.passed for r in results):
        raise Finding(payload, summary)
    return payload, summary


# --- plumbing -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for generic shifts")
    common.add_argument("--normalize-rays", action="store_true", help="replace non-primitive rays by primitive ones")
    common.add_argument("--output", "-o", help="write JSON here instead of stdout")

    p = argparse.ArgumentParser(prog="tropfan", description="Exact computations with tropical fans.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check the fan axioms")
    s.add_argument("fan")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("balance", parents=[common], help="check the balancing condition")
    s.add_argument("fan")
    s.set_defaults(func=cmd_balance)

    s = sub.add_parser("product", parents=[common], help="intersect a fan with TR functions")
    s.add_argument("fan")
    s.add_argument("function", nargs="+")
    s.add_argument("--stable", action="store_true", help="use a certified generic shift")
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("classify-1d", parents=[common], help="galleries and classes of a curve")
    s.add_argument("fan")
    s.set_defaults(func=cmd_classify_1d)

    s = sub.add_parser("minimal-model", parents=[common], help="projection onto a Bergman sum")
    s.add_argument("fan")
    s.set_defaults(func=cmd_minimal_model)

    s = sub.add_parser("enumerate-planes", parents=[common], help="planes with a given profile")
    s.add_argument("pair")
    s.add_argument("--profile", help="pattern such as 0,1,0 or 1,1,<=1")
    s.add_argument("--all-candidates", action="store_true", help="skip the certification filters")
    s.set_defaults(func=cmd_enumerate_planes)

    s = sub.add_parser("assemble", parents=[common], help="strongly regular 2-cycles from certified planes")
    s.add_argument("pair")
    s.add_argument("--max-planes", type=int, default=2)
    s.add_argument("--max-subsets", type=int, default=50_000)
    s.set_defaults(func=cmd_assemble)

    s = sub.add_parser("verify-paper", parents=[common], help="run the bundled worked examples")
    s.set_defaults(func=cmd_verify_paper)
    return p


def _emit(payload: Any, args) -> None:
    text = dumps(payload) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, summary = args.func(args)
    except Finding as f:
        _emit(f.payload, args)
        print(str(f), file=sys.stderr)
        return EXIT_FINDING
    except (ParseError, SchemaError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except TropfanError as e:
        _emit({"error": type(e).__name__, "message": str(e)}, args)
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FINDING
    _emit(payload, args)
    print(summary, file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

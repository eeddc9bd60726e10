"""Command-line front end.

Subcommands: check-channel, enumerate, put, audit.  Exit codes:
0 success, 2 input/parse problems, 3 a cap was exceeded, 4 solution
methods disagreed, 5 an audit found a violating channel.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from . import applications as apps
from .channels import PrivacyLevel, as_level
from .decision import bayes_optimal_risk, linear_coefficients, minimax_risk
from .errors import (
    AuditFailureError,
    DimensionCapError,
    LdpPutError,
    MethodDisagreementError,
)
from .groups import FiniteAlphabet, cyclic_group, symmetric_group
from .invariant import subset_orbits
from .ldp_geometry import (
    DEFAULT_ENUM_CAP_M,
    canonical_weight,
    enumerate_polytope_vertices,
    is_maximal,
)
from .invariant import enumerate_invariant_vertices
from .put_solver import (
    BAYES_TRAITS,
    MINIMAX_TRAITS,
    put_by_lp,
    put_by_vertex_enumeration,
    put_transitive_closed_form,
    random_channel_audit,
)
from .rationals import as_fraction, format_fraction
from .serialize import (
    channel_from_json,
    group_from_json,
    maximality_certificate,
    problem_from_json,
    weights_to_json,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_DISAGREE = 4
EXIT_AUDIT = 5

METHODS = ("closed", "transitive", "vertex", "vertex_full", "lp")


def _enum_cap() -> int:
    raw = os.environ.get("LDPPUT_CAP_M")
    if raw is None:
        return DEFAULT_ENUM_CAP_M
    try:
        return int(raw)
    except ValueError as exc:
        raise SystemExit(f"LDPPUT_CAP_M must be an integer, got {raw!r}") from exc


def _parse_level(args) -> tuple[PrivacyLevel, dict | None]:
    """Resolve --t / --epsilon into an exact level, noting any approximation."""
    if args.t is not None and args.epsilon is not None:
        raise ValueError("give either --t or --epsilon, not both")
    if args.t is not None:
        return as_level(args.t), None
    if args.epsilon is not None:
        level, bound = PrivacyLevel.from_epsilon(float(args.epsilon))
        note = {"epsilon": float(args.epsilon), "t": format_fraction(level.t),
                "approximation_bound": bound}
        return level, note
    raise ValueError("a privacy level is required: --t p/q or --epsilon x")


def _parse_group(spec: str | None, alphabet: FiniteAlphabet):
    if spec is None:
        return None
    if spec == "sym":
        return symmetric_group(alphabet)
    if spec == "cyclic":
        return cyclic_group(alphabet)
    if spec.startswith("file:"):
        with open(spec[5:], encoding="utf-8") as fh:
            return group_from_json(json.load(fh))
    raise ValueError(f"group must be 'sym', 'cyclic', or 'file:PATH', got {spec!r}")


def _emit(data, args) -> None:
    if getattr(args, "format", "json") == "csv":
        text = _to_csv(data)
    else:
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _to_csv(data) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    if isinstance(data, dict) and "results" in data:
        writer.writerow(apps.CSV_HEADER)
        for row in data["results"]:
            writer.writerow([data.get("task", "custom"), data.get("m", ""),
                             data.get("gamma", ""), data.get("t", ""),
                             row["method"], row["value"], row.get("winner", ""),
                             row["certificate"]])
    elif isinstance(data, dict) and "vertices" in data:
        writer.writerow(["index", "support", "weights"])
        for i, v in enumerate(data["vertices"]):
            writer.writerow([i, " ".join(map(str, v["support"])),
                             " ".join(v["weights"])])
    else:
        for key, value in sorted(data.items()):
            writer.writerow([key, value])
    return buf.getvalue()


def cmd_check_channel(args) -> int:
    with open(args.channel, encoding="utf-8") as fh:
        channel = channel_from_json(json.load(fh))
    level, note = _parse_level(args)
    report = maximality_certificate(channel, level)
    if report["verdict"]:
        report["canonical_weights"] = weights_to_json(canonical_weight(channel, level))
    if note:
        report["level_note"] = note
    _emit(report, args)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    level, note = _parse_level(args)
    alphabet = FiniteAlphabet.of_size(args.m)
    group = _parse_group(args.group, alphabet)
    data = {"m": args.m, "t": format_fraction(level.t)}
    if note:
        data["level_note"] = note
    if group is not None and group.order > 1:
        vertices = enumerate_invariant_vertices(group, level)
        data["group"] = args.group
        data["vertices"] = [
            {"orbits": [{"representative": o.representative,
                         "size": o.size,
                         "subset_size": o.subset_size,
                         "weight": format_fraction(w)}
                        for o, w in zip(v.orbits, v.values) if w],
             }
            for v in vertices
        ]
    else:
        vertices = enumerate_polytope_vertices(alphabet, level, cap=_enum_cap())
        data["vertices"] = [weights_to_json(v) for v in vertices]
    data["count"] = len(data["vertices"])
    _emit(data, args)
    return EXIT_OK


def _format_value(value) -> str:
    return format_fraction(value) if isinstance(value, Fraction) else repr(float(value))


def _winner_label(weights) -> str:
    if hasattr(weights, "orbits"):
        for orbit, w in zip(weights.orbits, weights.values):
            if w:
                return f"orbit(rep={orbit.representative},k={orbit.subset_size})"
        return "none"
    support = weights.support
    return "support(" + ",".join(map(str, support)) + ")"


def _ht_results(args, level) -> list[dict]:
    m, gamma = args.m, as_fraction(args.gamma)
    problem, prior = apps.ht_problem(m, gamma)
    alphabet = problem.input_alphabet
    group = _parse_group(args.group, alphabet) or symmetric_group(alphabet)
    objective = lambda q: bayes_optimal_risk(problem, prior, q)[0]
    wanted = _methods(args)
    results = []
    for method in wanted:
        if method == "closed":
            results.append({"method": "closed_form",
                            "value": apps.ht_put_closed_form(m, gamma, level),
                            "winner": "k=1", "certificate": "exact"})
        elif method == "transitive":
            res = put_transitive_closed_form(
                lambda orbit, w: apps.ht_subset_risk(m, gamma, level, orbit.subset_size),
                group, level, traits=BAYES_TRAITS)
            results.append(_result_entry(res))
        elif method == "vertex":
            res = put_by_vertex_enumeration(objective, alphabet, level, group=group,
                                            traits=BAYES_TRAITS)
            results.append(_result_entry(res))
        elif method == "vertex_full":
            res = put_by_vertex_enumeration(objective, alphabet, level,
                                            traits=BAYES_TRAITS, cap=_enum_cap())
            results.append(_result_entry(res))
        elif method == "lp":
            u = linear_coefficients("bayes", alphabet, level, problem=problem,
                                    prior=prior)
            res = put_by_lp(u, alphabet, level, cap=_enum_cap())
            results.append(_result_entry(res))
    return results


def _cardioid_results(args, level) -> list[dict]:
    m, gamma = args.m, as_fraction(args.gamma)
    spec = apps.CardioidSpec.build(m, gamma, level)
    alphabet = FiniteAlphabet.of_size(m)
    group = _parse_group(args.group, alphabet) or cyclic_group(alphabet)
    wanted = [w for w in _methods(args) if w in ("closed", "transitive")]
    results = []
    for method in wanted:
        if method == "closed":
            best_k = max(range(1, m),
                         key=lambda k: math.sin(math.pi * k / m)
                         / (k * float(level.t) + m - k))
            results.append({"method": "closed_form",
                            "value": apps.cardioid_put_closed_form(spec),
                            "winner": f"k={best_k}", "certificate": "exact"})
        elif method == "transitive":
            res = put_transitive_closed_form(
                lambda orbit, w: apps.cardioid_orbit_risk(spec, orbit.representative),
                group, level, traits=BAYES_TRAITS)
            results.append(_result_entry(res))
    return results


def _result_entry(res) -> dict:
    return {"method": res.method, "value": res.value,
            "winner": _winner_label(res.argmin_weights),
            "certificate": res.certificate}


def _format_results(results: list[dict]) -> list[dict]:
    return [{**row, "value": _format_value(row["value"])} for row in results]


def _methods(args) -> list[str]:
    raw = args.method or "all"
    if raw == "all":
        return list(METHODS)
    wanted = [w.strip() for w in raw.split(",") if w.strip()]
    for w in wanted:
        if w not in METHODS:
            raise ValueError(f"method must be one of {METHODS} or 'all', got {w!r}")
    return wanted


def _check_agreement(results: list[dict], tolerance: float) -> None:
    values = [Fraction(row["value"]) if isinstance(row["value"], Fraction)
              else Fraction(float(row["value"])) for row in results]
    lo, hi = min(values), max(values)
    if float(hi - lo) > tolerance:
        raise MethodDisagreementError(
            f"methods disagree: spread {float(hi - lo)} exceeds {tolerance}")


def cmd_put(args) -> int:
    level, note = _parse_level(args)
    if args.problem:
        data = _custom_put(args, level)
    elif args.task in ("ht", "cardioid"):
        if args.m is None:
            raise ValueError("--m is required with --task")
        results = _ht_results(args, level) if args.task == "ht" \
            else _cardioid_results(args, level)
        _check_agreement(results, args.tolerance)
        data = {"task": args.task, "m": args.m,
                "gamma": format_fraction(as_fraction(args.gamma)),
                "t": format_fraction(level.t),
                "results": _format_results(results), "agreement": True}
    else:
        raise ValueError("put needs --task ht|cardioid or --problem FILE")
    if note:
        data["level_note"] = note
    _emit(data, args)
    return EXIT_OK


def _custom_put(args, level) -> dict:
    with open(args.problem, encoding="utf-8") as fh:
        problem, prior = problem_from_json(json.load(fh))
    alphabet = problem.input_alphabet
    group = _parse_group(args.group, alphabet)
    results = []
    if prior is not None:
        objective = lambda q: bayes_optimal_risk(problem, prior, q)[0]
        res = put_by_vertex_enumeration(objective, alphabet, level, group=group,
                                        traits=BAYES_TRAITS, cap=_enum_cap())
        results.append(_result_entry(res))
        u = linear_coefficients("bayes", alphabet, level, problem=problem, prior=prior)
        res_lp = put_by_lp(u, alphabet, level, group=group, cap=_enum_cap())
        results.append(_result_entry(res_lp))
        _check_agreement(results, args.tolerance)
        kind = "bayes"
    else:
        objective = lambda q: minimax_risk(problem, q)[0]
        res = put_by_vertex_enumeration(objective, alphabet, level, group=group,
                                        traits=MINIMAX_TRAITS, cap=_enum_cap())
        results.append(_result_entry(res))
        kind = "minimax"
    return {"task": "custom", "risk": kind, "m": alphabet.size,
            "t": format_fraction(level.t), "results": _format_results(results),
            "agreement": True}


def cmd_audit(args) -> int:
    level, note = _parse_level(args)
    m, gamma = args.m, as_fraction(args.gamma)
    alphabet = FiniteAlphabet.of_size(m)
    if args.task == "ht":
        problem, prior = apps.ht_problem(m, gamma)
        objective = lambda q: bayes_optimal_risk(problem, prior, q)[0]
        u = linear_coefficients("bayes", alphabet, level, problem=problem, prior=prior)
        baseline = put_by_lp(u, alphabet, level, cap=_enum_cap()).value
        tolerance = as_fraction(args.tolerance) if args.tolerance else 0
    elif args.task == "cardioid":
        spec = apps.CardioidSpec.build(m, gamma, level)
        objective = lambda q: apps.cardioid_bayes_risk(spec, q)
        baseline = apps.cardioid_put_closed_form(spec)
        tolerance = float(args.tolerance) if args.tolerance else 1e-9
    else:
        raise ValueError("audit needs --task ht|cardioid")
    data = {"task": args.task, "m": m, "gamma": format_fraction(gamma),
            "t": format_fraction(level.t), "samples": args.samples,
            "seed": args.seed}
    if note:
        data["level_note"] = note
    try:
        report = random_channel_audit(objective, alphabet, level,
                                      samples=args.samples, seed=args.seed,
                                      baseline_value=baseline,
                                      tolerance=tolerance, cap=_enum_cap())
    except AuditFailureError as exc:
        data["passed"] = False
        data["violation"] = str(exc)
        data["gap"] = _format_value(exc.gap)
        data["channel"] = exc.channel_json
        _emit(data, args)
        return EXIT_AUDIT
    data["passed"] = report.passed
    data["min_gap"] = _format_value(report.min_gap) if report.min_gap is not None else None
    _emit(data, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldpput",
        description="Exact privacy-utility trade-offs for local differential privacy.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_level_args(p):
        p.add_argument("--t", help="privacy bound t = e^epsilon as an exact rational p/q")
        p.add_argument("--epsilon", help="privacy budget; converted to a nearby rational t")

    def add_io_args(p):
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p_check = sub.add_parser("check-channel", help="privacy and maximality report")
    p_check.add_argument("channel", help="channel JSON file")
    add_level_args(p_check)
    add_io_args(p_check)
    p_check.set_defaults(func=cmd_check_channel)

    p_enum = sub.add_parser("enumerate", help="list all optimal-channel weight vertices")
    p_enum.add_argument("--m", type=int, required=True)
    add_level_args(p_enum)
    p_enum.add_argument("--group", help="sym, cyclic, or file:PATH")
    add_io_args(p_enum)
    p_enum.set_defaults(func=cmd_enumerate)

    p_put = sub.add_parser("put", help="compute a privacy-utility trade-off")
    p_put.add_argument("--task", choices=("ht", "cardioid"))
    p_put.add_argument("--problem", help="custom decision problem JSON")
    p_put.add_argument("--m", type=int)
    p_put.add_argument("--gamma", default="1")
    add_level_args(p_put)
    p_put.add_argument("--group", help="sym, cyclic, or file:PATH")
    p_put.add_argument("--method", help="comma list of: " + ",".join(METHODS) + ", or all")
    p_put.add_argument("--tolerance", type=float, default=1e-9,
                       help="allowed spread between methods")
    add_io_args(p_put)
    p_put.set_defaults(func=cmd_put)

    p_audit = sub.add_parser("audit", help="random channels must not beat the optimum")
    p_audit.add_argument("--task", choices=("ht", "cardioid"), required=True)
    p_audit.add_argument("--m", type=int, required=True)
    p_audit.add_argument("--gamma", default="1")
    add_level_args(p_audit)
    p_audit.add_argument("--samples", type=int, default=100)
    p_audit.add_argument("--seed", default="0")
    p_audit.add_argument("--tolerance", default=None)
    add_io_args(p_audit)
    p_audit.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DimensionCapError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except MethodDisagreementError as exc:
        print(f"method disagreement: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except (OSError, json.JSONDecodeError, KeyError, ValueError, TypeError,
            LdpPutError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

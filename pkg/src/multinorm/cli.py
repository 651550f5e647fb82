"""Command-line interface.

Every command builds a JSON-ready dictionary first; the human-readable
output is rendered from it.  Exit codes: 0 success, 1 internal error or
failed verification, 2 invalid input, 3 size cap exceeded.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path
from typing import Any, Callable

from . import abgroup
from .engine import assemble, assemble_designated
from .cyclic import sha_cyclic
from .oracle import CapExceeded, Caps, resolve_with_oracle, sha_oracle, verify_thm11
from .oracle.bar import cohomology
from .oracle.lattices import build_Shat, build_TK, build_TL, regular_lattice, trivial_lattice
from .scenario import (
    ScenarioError,
    base_change_to_F,
    faithful_quotient,
    p_part,
    parse_cyclic,
    parse_scenario,
    scenario_to_document,
    to_table_scenario,
)
from .suites import SUITES, run_all

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
_SEVERITY = {EXIT_OK: 0, EXIT_INPUT: 1, EXIT_CAP: 2, EXIT_INTERNAL: 3}


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc


def _caps(args) -> Caps:
    return Caps.with_order(args.cap) if args.cap else Caps()


def _nested(value: Any) -> bool:
    if isinstance(value, dict):
        return any(isinstance(v, (dict, list)) for v in value.values())
    return isinstance(value, list) and any(isinstance(v, dict) for v in value)


def _render(obj: Any, indent: int = 0) -> list[str]:
    pad = " " * indent
    if isinstance(obj, list):
        lines = []
        for item in obj:
            lines.append(f"{pad}-")
            lines.extend(_render(item, indent + 2))
        return lines
    if not isinstance(obj, dict):
        return [pad + json.dumps(obj)]
    width = max((len(k) for k in obj), default=0)
    lines = []
    for key in sorted(obj):
        value = obj[key]
        if _nested(value):
            lines.append(f"{pad}{key}:")
            lines.extend(_render(value, indent + 2))
        else:
            lines.append(f"{pad}{key.ljust(width)}  {json.dumps(value, sort_keys=True)}")
    return lines


def _emit(obj: Any, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    out.write((dumps(obj) if as_json else "\n".join(_render(obj))) + "\n")


# --- compute ---------------------------------------------------------------


def _compute_one(text: str, args) -> tuple[dict, int]:
    scenario = parse_scenario(text)
    caps = _caps(args)
    report = None
    if scenario.is_abelian:
        if args.designate:
            report = assemble_designated(scenario, args.designate, paranoid=args.paranoid)
        else:
            report = assemble(scenario, paranoid=args.paranoid)
    elif not (args.oracle or args.oracle_check):
        raise ScenarioError("the engine handles abelian groups only; rerun with --oracle for a table group")
    if args.oracle or report is None:
        report = resolve_with_oracle(scenario, report, caps=caps)
    out = report.to_dict()
    code = EXIT_OK
    if args.oracle_check:
        designated = report.designation if scenario.is_abelian else args.designate
        engine_report = report if report.certificate != "oracle" else None
        records = verify_thm11(scenario, designated, caps=caps, engine_report=engine_report)
        out = {"report": out, "verification": records}
        if any(r["verdict"] != "pass" for r in records):
            code = EXIT_INTERNAL
    return out, code


def _guard(fn: Callable[[], tuple[Any, int]]) -> tuple[Any, int]:
    try:
        return fn()
    except ScenarioError as exc:
        return {"error": str(exc), "kind": "input"}, EXIT_INPUT
    except CapExceeded as exc:
        return {"error": str(exc), "kind": "cap", "required": exc.required}, EXIT_CAP
    except Exception as exc:  # noqa: BLE001 - reported as an internal failure
        return {"error": f"{type(exc).__name__}: {exc}", "kind": "internal"}, EXIT_INTERNAL


def cmd_compute(args) -> int:
    path = Path(args.path)
    if not path.is_dir():
        result, code = _guard(lambda: _compute_one(_read(args.path), args))
        _finish(result, code, args)
        return code
    files = sorted(path.glob("*.json"))
    if not files:
        raise ScenarioError(f"no .json scenario files in {path}")
    results, worst = {}, EXIT_OK
    for f in files:
        result, code = _guard(lambda: _compute_one(_read(str(f)), args))
        if args.out_dir:
            target = Path(args.out_dir)
            target.mkdir(parents=True, exist_ok=True)
            (target / f"{f.stem}.report.json").write_text(dumps(result) + "\n", encoding="utf-8")
        results[f.name] = {"exit": code, "result": result}
        if _SEVERITY[code] > _SEVERITY[worst]:
            worst = code
    if not args.out_dir:
        _emit(results, args.json)
    return worst


def _finish(result: dict, code: int, args) -> None:
    if "error" in result and code != EXIT_OK:
        print(f"error: {result['error']}", file=sys.stderr)
        if getattr(args, "json", False):
            _emit(result, True)
        return
    _emit(result, getattr(args, "json", False))


# --- other commands --------------------------------------------------------


def cmd_cyclic(args) -> int:
    def run():
        cs = parse_cyclic(_read(args.path))
        return sha_cyclic(cs, paranoid=args.paranoid).to_dict(), EXIT_OK

    result, code = _guard(run)
    _finish(result, code, args)
    return code


def cmd_reduce(args) -> int:
    def run():
        scenario = parse_scenario(_read(args.path))
        if args.prime is not None:
            reduced = faithful_quotient(p_part(scenario, args.prime))
        else:
            reduced = base_change_to_F(scenario, args.designate)
        document = scenario_to_document(reduced)
        parse_scenario(document)
        return document, EXIT_OK

    result, code = _guard(run)
    if code != EXIT_OK:
        _finish(result, code, args)
        return code
    if args.output:
        Path(args.output).write_text(dumps(result) + "\n", encoding="utf-8")
    else:
        print(dumps(result))
    return code


def cmd_tamagawa(args) -> int:
    def run():
        scenario = parse_scenario(_read(args.path))
        report = assemble(scenario) if scenario.is_abelian else None
        if args.oracle or report is None:
            report = resolve_with_oracle(scenario, report, caps=_caps(args))
        tau = report.to_dict()["tamagawa"]
        return {"tamagawa": tau if tau is not None else "unavailable", "status": report.status}, EXIT_OK

    result, code = _guard(run)
    if code == EXIT_OK and not args.json:
        tau = result["tamagawa"]
        print(tau if isinstance(tau, str) else f"{tau['num']}/{tau['den']}")
        return code
    _finish(result, code, args)
    return code


_MODULES = ("Z", "Z[G]", "torus", "k-torus", "selmer")


def cmd_oracle(args) -> int:
    def run():
        scenario = parse_scenario(_read(args.path))
        caps = _caps(args)
        caps.check(scenario.group.order, 0, args.degree)
        T, _ = to_table_scenario(scenario)
        G = T.group
        if args.module == "Z":
            M = trivial_lattice(G)
        elif args.module == "Z[G]":
            M = regular_lattice(G)
        elif args.module == "torus":
            M = build_TL(G, [f.subgroup for f in T.factors], caps=caps)
        elif args.module == "k-torus":
            M = build_TK(G, [f.subgroup for f in T.k_factors], caps=caps)
        else:
            M = build_Shat(
                G, [f.subgroup for f in T.k_factors], [f.subgroup for f in T.kprime_factors], caps=caps
            ).Shat.lattice
        H = cohomology(G, M.action, args.degree, caps=caps)
        out = {"module": args.module, "degree": args.degree, "rank": M.rank}
        if args.degree == 0:
            out["free_rank"] = H.free_rank
        else:
            out["cohomology"] = list(H.group.invariant_factors)
            out["sha"] = list(sha_oracle(T, M, args.degree, caps=caps).invariant_factors)
        return out, EXIT_OK

    result, code = _guard(run)
    _finish(result, code, args)
    return code


def _suite_table(results) -> list[str]:
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        verdict = "PASS" if r.ok else "FAIL"
        lines.append(f"{verdict}  {r.name.ljust(width)}  {r.cases:>7} cases  {r.seconds:7.2f} s")
        lines.extend(f"      {msg}" for msg in r.failures[:5])
    return lines


def _run_suites(names, args) -> int:
    results = run_all(max_order=args.cap or 8, seed=args.seed, names=names)
    if args.json:
        print(dumps([r.to_dict() for r in results]))
    else:
        print("\n".join(_suite_table(results)))
    return EXIT_OK if all(r.ok for r in results) else EXIT_INTERNAL


def cmd_verify(args) -> int:
    if args.suite:
        return _run_suites(args.suite, args)
    if not args.path:
        raise ScenarioError("give a scenario file or at least one --suite")

    def run():
        scenario = parse_scenario(_read(args.path))
        records = verify_thm11(scenario, args.designate, caps=_caps(args) if args.cap else Caps(max_rank=200))
        return {"verification": records}, (
            EXIT_OK if all(r["verdict"] == "pass" for r in records) else EXIT_INTERNAL
        )

    result, code = _guard(run)
    _finish(result, code, args)
    return code


@contextlib.contextmanager
def _fault(kind: str | None):
    """Deliberately break a kernel so that the self-test can be seen to fail."""
    if kind != "snf":
        yield
        return
    original = abgroup.snf

    def corrupted(M, **kwargs):
        U, D, V = original(M, **kwargs)
        D = D.copy()
        for i in reversed(range(min(D.shape))):
            if D[i, i]:
                D[i, i] *= 2
                break
        return U, D, V

    abgroup.snf = corrupted
    try:
        yield
    finally:
        abgroup.snf = original


def cmd_selftest(args) -> int:
    with _fault(args.inject_fault):
        return _run_suites(None, args)


# --- parser ----------------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _prime(text: str) -> int:
    value = int(text)
    if value < 2 or any(value % d == 0 for d in range(2, int(value**0.5) + 1)):
        raise argparse.ArgumentTypeError(f"{text} is not a prime")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multinorm",
        description="Tate-Shafarevich groups of multinorm-one tori from Galois data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, cap_help="largest group order the oracle may handle"):
        p.add_argument("--json", action="store_true", help="print JSON instead of a table")
        p.add_argument("--cap", type=_positive, help=cap_help)

    p = sub.add_parser("compute", help="Tate-Shafarevich group of a scenario file or directory")
    p.add_argument("path")
    common(p)
    p.add_argument("--oracle-check", action="store_true", help="also compare with the cohomology oracle")
    p.add_argument("--oracle", action="store_true", help="resolve inconclusive bounds with the oracle")
    p.add_argument("--paranoid", action="store_true", help="re-verify fast paths by enumeration")
    p.add_argument("--designate", metavar="NAME", help="use this factor as the distinguished field")
    p.add_argument("--out-dir", help="for a directory: write one report file per scenario here")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("cyclic", help="run the congruence engine on raw cyclic data")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.add_argument("--paranoid", action="store_true")
    p.set_defaults(func=cmd_cyclic)

    p = sub.add_parser("reduce", help="write the p-part or the base change of a scenario")
    p.add_argument("path")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--prime", type=_prime)
    group.add_argument("--base-change", action="store_true")
    p.add_argument("--designate", metavar="NAME")
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("tamagawa", help="print the Tamagawa number")
    p.add_argument("path")
    common(p)
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_tamagawa)

    p = sub.add_parser("oracle", help="raw cohomology of a lattice attached to a scenario")
    p.add_argument("path")
    p.add_argument("--degree", "-q", type=int, required=True)
    p.add_argument("--module", choices=_MODULES, default="torus")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="engine-versus-oracle records for a scenario, or named suites")
    p.add_argument("path", nargs="?")
    p.add_argument("--suite", action="append", choices=list(SUITES))
    p.add_argument("--designate", metavar="NAME")
    p.add_argument("--seed", type=int, default=0)
    common(p, cap_help="oracle cap for a file; corpus group-order bound for suites")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", help="run every suite on the exhaustive small corpus")
    common(p, cap_help="largest group order in the corpora (default 8)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-fault", choices=["snf"], help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "degree", 0) is not None and getattr(args, "degree", 0) < 0:
        parser.error("--degree must be nonnegative")
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())

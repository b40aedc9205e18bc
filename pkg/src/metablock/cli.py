"""Command-line front end.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 usage or
validation error.  Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from . import checks, fusion, invariants, proofs, structure
from .core import GroupParams, oracle_cap, x_gen, y_gen
from .errors import InternalInvariantError, InvalidInputError, ResourceLimitError, UnsupportedParametersError
from .report import Check, ReportRecord, to_csv, to_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _params(args: argparse.Namespace) -> GroupParams:
    l = args.m - 1 if args.l is None else args.l
    return GroupParams(args.p, args.m, args.n, l, allow_bigint=True)


def _add_group_flags(parser: argparse.ArgumentParser, need_e: bool = False) -> None:
    parser.add_argument("--p", type=int, required=True)
    parser.add_argument("--m", type=int, required=True)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--l", type=int, default=None, help="defaults to m - 1")
    if need_e:
        parser.add_argument("--e", type=int, required=True, help="inertial index, divides p - 1")


def _subgroup_line(name: str, sub: structure.Subgroup) -> str:
    gens = ", ".join(f"x^{g.a} y^{g.b}" for g in sub.generators) or "1"
    line = f"{name} = <{gens}>  order {sub.order}"
    if sub.cyclic_decomposition is not None:
        line += "  " + " x ".join(f"C{c}" for c in sub.cyclic_decomposition)
    return line


def cmd_structure(args: argparse.Namespace) -> int:
    P = _params(args)
    derived = structure.derived_subgroup(P)
    z = structure.center(P)
    data: dict = {
        "params": {k: str(v) for k, v in zip("pmnl", P.as_tuple())},
        "order": str(P.order),
        "derived": {"order": str(derived.order), "generators": [list(map(str, g)) for g in derived.generators]},
        "center": {"order": str(z.order), "decomposition": [str(c) for c in z.cyclic_decomposition]},
    }
    if P.minimal_nonabelian:
        data["class_count"] = str(structure.k_of_D(P))
        data["k_of_D"] = str(structure.k_of_D(P))
        data["irr_degrees"] = {str(d): str(c) for d, c in structure.irr_degree_multiset(P).items()}
    elif P.order <= oracle_cap():
        data["class_count"] = str(len(structure.oracle_classes(P)))
    verdict = None
    if args.oracle:
        structure.derived_subgroup(P, oracle=True)
        structure.center(P, oracle=True)
        structure.centralizer(x_gen(P), P, oracle=True)
        structure.centralizer(y_gen(P), P, oracle=True)
        oracle_classes = structure.oracle_classes(P)
        ok = True
        if P.minimal_nonabelian:
            closed = structure.conjugacy_classes(P, with_members=True)
            ok = structure.class_partition(closed) == structure.class_partition(oracle_classes)
        verdict = "OK" if ok else "MISMATCH"
        data["oracle"] = verdict
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        print(f"D{P}  |D| = {P.order}")
        print(_subgroup_line("D'", derived))
        print(_subgroup_line("Z(D)", z))
        if "class_count" in data:
            print(f"class count = {data['class_count']}")
        if P.minimal_nonabelian:
            print(f"k(D) = {data['k_of_D']}")
            print("irreducible degrees: " + ", ".join(f"{d} x{c}" for d, c in structure.irr_degree_multiset(P).items()))
        if verdict is not None:
            print(f"closed-form = oracle: {verdict}")
    return EXIT_OK if verdict in (None, "OK") else EXIT_FAIL


def build_record(P: GroupParams, e: int) -> ReportRecord:
    start = time.perf_counter_ns()
    inv = invariants.invariants_reduction(P, e)
    report = invariants.bounds_check(P, inv)
    items = [Check(f"bounds.{name}", ok) for name, ok in report.checks().items()]
    ratio_ok, kd_ok = invariants.malle_navarro_check(P, e)
    lo, hi = invariants.l_bounds(e)
    items += [
        Check("malle_navarro.k_over_k0", ratio_ok),
        Check("malle_navarro.k_le_kD", kd_ok),
        Check("l_bounds", lo <= inv.l <= hi, f"{lo}..{hi}"),
        Check("ledger_plus_e", fusion.subsection_ledger(P, e).k_minus_l + e == inv.k),
    ]
    return ReportRecord(
        params={"p": P.p, "m": P.m, "n": P.n, "l": P.l, "e": e},
        invariants=inv.as_dict(),
        checks=tuple(items),
        provenance=invariants.provenance(P, e),
        timing_ns=time.perf_counter_ns() - start,
    )


def cmd_invariants(args: argparse.Namespace) -> int:
    P = _params(args)
    record = build_record(P, args.e)
    if args.format == "json":
        print(record.to_json())
    elif args.format == "csv":
        sys.stdout.write(to_csv([record]))
    else:
        print(to_text(record))
    return EXIT_OK if record.all_pass else EXIT_FAIL


def cmd_fusion(args: argparse.Namespace) -> int:
    P = _params(args)
    F = fusion.make_fusion(P, args.e)
    focal = fusion.focal_subgroup(P, F, oracle=args.oracle)
    data: dict = {
        "e": str(F.e),
        "r": str(F.r),
        "primitive_root": str(F.primitive_root),
        "focal_order": str(focal.order),
    }
    if P.minimal_nonabelian:
        ledger = fusion.subsection_ledger(P, args.e)
        data["fixed_classes"] = str(P.p**P.n)
        data["orbit_split_count"] = str(fusion.orbit_split_count(P, args.e))
        data["k_minus_l"] = str(ledger.k_minus_l)
    listing = None
    if args.list or (args.oracle and P.minimal_nonabelian):
        classes = fusion.f_classes(P, F)
        listing = [(fc.representative, len(fc.d_classes)) for fc in classes]
        data["f_classes"] = [{"representative": [str(r.a), str(r.b)], "orbit_length": str(k)} for r, k in listing]
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        print(f"D{P}  e={F.e}  alpha: x -> x^{F.r}  (primitive root {F.primitive_root})")
        print(f"focal subgroup order {focal.order}" + ("  [oracle OK]" if args.oracle else ""))
        if P.minimal_nonabelian:
            print(f"alpha-fixed D-classes: {data['fixed_classes']}")
            print(f"orbits of length e: {data['orbit_split_count']}")
            print(f"k(B) - l(B) = {data['k_minus_l']}")
        if listing is not None and args.list:
            for rep, length in listing:
                print(f"  x^{rep.a} y^{rep.b}  orbit length {length}")
    return EXIT_OK


def _print_sweep(result: checks.SweepResult, fmt: str) -> None:
    summary = result.summary()
    failure = result.first_failure()
    if fmt == "json":
        out = {
            "ok": result.ok,
            "total": str(len(result.results)),
            "summary": {name: {"pass": str(a), "fail": str(b)} for name, (a, b) in summary.items()},
            "first_failure": None
            if failure is None
            else {"name": failure.name, "params": [None if v is None else str(v) for v in failure.params], "detail": failure.detail},
        }
        print(json.dumps(out, indent=2))
        return
    width = max((len(n) for n in summary), default=10)
    print(f"{'check':<{width}}  {'pass':>7}  {'fail':>5}")
    for name, (a, b) in summary.items():
        print(f"{name:<{width}}  {a:>7}  {b:>5}")
    print(f"total checks: {len(result.results)}")
    if failure is not None:
        p, m, n, l, e = failure.params
        print(f"FAIL {failure.name} at (p={p}, m={m}, n={n}, l={l}, e={e}) {failure.detail}".rstrip())
    else:
        print("all checks passed")


def cmd_verify(args: argparse.Namespace) -> int:
    if args.sweep is None:
        primes, m_max, n_max = list(checks.DEFAULT_PRIMES), checks.DEFAULT_M_MAX, checks.DEFAULT_N_MAX
    else:
        p_max, m_max, n_max = args.sweep
        if p_max < 3 or m_max < 2 or n_max < 1:
            raise InvalidInputError("sweep bounds need pmax >= 3, mmax >= 2, nmax >= 1")
        primes = checks.sweep_primes(p_max)
    if args.jobs < 1:
        raise InvalidInputError("--jobs must be positive")
    points = checks.grid(primes, m_max, n_max)
    result = checks.run_sweep(points, skip_oracle=args.skip_oracle, jobs=args.jobs)
    _print_sweep(result, args.format)
    print(f"{len(points)} grid points in {result.elapsed:.2f}s", file=sys.stderr)
    return EXIT_OK if result.ok else EXIT_FAIL


def cmd_replay(args: argparse.Namespace) -> int:
    which = args.which
    certs: list[tuple[str, proofs.Certificate | None]] = []
    screened: dict[int, proofs.Certificate | None] = {}
    if which in ("amc", "k2"):
        if None in (args.p, args.m, args.n, args.e):
            raise InvalidInputError(f"--which {which} needs --p, --m, --n and --e")
        P = _params(args)
        fn = proofs.replay_amc if which == "amc" else proofs.replay_k2
        certs.append((f"{which} {P} e={args.e}", fn(P, args.e)))
    elif which == "p5":
        certs += [(f"p5 k1={c.parameters['k1']}", c) for c in proofs.p5_height_screen()]
    elif which == "primes":
        lo, hi = args.range or (5, 31)
        screened = proofs.screen_primes(lo, hi)
        certs += [(f"primes p={p}", c) for p, c in screened.items()]
    else:
        if args.p is None and args.range is None:
            raise InvalidInputError("--which two-squares needs --p or --range")
        if args.p is not None:
            ps = [args.p]
        else:
            ps = [p for p in checks.sweep_primes(args.range[1]) if p >= args.range[0]]
        certs += [(f"two-squares p={p}", proofs.two_squares_screen(p)) for p in ps]
    if args.format == "json":
        print(json.dumps([{"label": label, "certificate": None if c is None else c.to_dict()} for label, c in certs], indent=2))
    else:
        for label, c in certs:
            if c is None:
                print(f"{label}: not applicable (screen needs p >= 7)")
                continue
            tail = f" witness={c.witness}" if c.witness is not None else ""
            print(f"{label}: {c.kind} verified={c.verified}{tail}")
            for key, value in c.checked_values.items():
                print(f"    {key} = {value}")
        if which == "primes":
            infeasible = sorted(p for p, c in screened.items() if c is not None and c.kind == proofs.INFEASIBLE)
            print("infeasible: {" + ", ".join(map(str, infeasible)) + "}")
    ok = all(c.verified for _, c in certs if c is not None)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_oracle(args: argparse.Namespace) -> int:
    P = _params(args)
    cap = oracle_cap() if args.cap is None else args.cap
    if P.order > cap:
        raise ResourceLimitError(f"|D| = {P.order} exceeds the oracle cap {cap}")
    results = checks.point_results(P.as_tuple(), cap=cap)
    if args.e is not None:
        fusion.check_inertial_index(P.p, args.e)
        results = [r for r in results if r.params[4] in (None, args.e)]
    for r in results:
        e = "-" if r.params[4] is None else r.params[4]
        print(f"[{'ok' if r.passed else 'FAIL'}] e={e} {r.name}" + (f"  {r.detail}" if r.detail else ""))
    ok = all(r.passed for r in results)
    print("oracle agrees with closed forms" if ok else "oracle MISMATCH")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metablock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("structure", help="subgroups, classes and degrees of D")
    _add_group_flags(s)
    s.add_argument("--oracle", action="store_true", help="cross-check by brute force")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_structure)

    s = sub.add_parser("invariants", help="block invariants with bound checks")
    _add_group_flags(s, need_e=True)
    s.add_argument("--format", choices=("text", "json", "csv"), default="text")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("fusion", help="inertial automorphism, focal subgroup, F-classes")
    _add_group_flags(s, need_e=True)
    s.add_argument("--oracle", action="store_true")
    s.add_argument("--list", action="store_true", help="list F-class representatives")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_fusion)

    s = sub.add_parser("verify", help="run every property over a parameter grid")
    s.add_argument("--sweep", type=int, nargs=3, metavar=("PMAX", "MMAX", "NMAX"))
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--skip-oracle", action="store_true")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("replay", help="print proof certificates")
    s.add_argument("--which", required=True, choices=("amc", "k2", "p5", "primes", "two-squares"))
    s.add_argument("--p", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--l", type=int, default=None)
    s.add_argument("--e", type=int)
    s.add_argument("--range", type=int, nargs=2, metavar=("LO", "HI"))
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_replay)

    s = sub.add_parser("oracle", help="brute-force cross-check of one group")
    _add_group_flags(s)
    s.add_argument("--e", type=int, default=None, help="restrict fusion checks to one e")
    s.add_argument("--cap", type=int, default=None, help="override the size cap")
    s.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with exit 2
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InvalidInputError, UnsupportedParametersError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalInvariantError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

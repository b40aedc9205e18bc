"""Property checks over a parameter grid.

A grid point is ``(p, m, n, l)``; inertial indices ``e | p - 1`` are looped
inside the point.  Formula checks run everywhere, oracle checks only where
``|D|`` fits under the oracle cap.  Any exception inside a check counts as a
failure of that check.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from sympy import divisors, primerange
from sympy.ntheory import n_order

from . import fusion, invariants, oracle, proofs, structure
from .core import GroupParams, element_order, oracle_cap, twist_order, x_gen, y_gen
from .errors import MetablockError

DEFAULT_PRIMES = (3, 5, 7, 11, 13)
DEFAULT_M_MAX = 6
DEFAULT_N_MAX = 6


@dataclass(frozen=True)
class CheckResult:
    name: str
    params: tuple[int, int, int, int, int | None]
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class SweepResult:
    results: tuple[CheckResult, ...]
    elapsed: float

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def first_failure(self) -> CheckResult | None:
        return next((r for r in self.results if not r.passed), None)

    def summary(self) -> dict[str, tuple[int, int]]:
        """``name -> (passed, failed)``, names sorted."""
        table: dict[str, list[int]] = {}
        for r in self.results:
            row = table.setdefault(r.name, [0, 0])
            row[0 if r.passed else 1] += 1
        return {name: (row[0], row[1]) for name, row in sorted(table.items())}


def grid(primes: Iterable[int], m_max: int, n_max: int, minimal_only: bool = False) -> list[tuple[int, int, int, int]]:
    points = []
    for p in primes:
        for m in range(2, m_max + 1):
            for n in range(1, n_max + 1):
                lows = [m - 1] if minimal_only else range(max(1, m - n), m)
                points += [(p, m, n, l) for l in lows]
    return sorted(points)


def sweep_primes(p_max: int) -> list[int]:
    return list(primerange(3, p_max + 1))


class _Collector:
    def __init__(self, params: tuple[int, int, int, int, int | None]):
        self.params = params
        self.results: list[CheckResult] = []

    def check(self, name: str, fn: Callable[[], object]) -> None:
        try:
            value = fn()
        except (MetablockError, ArithmeticError, ValueError) as exc:
            self.results.append(CheckResult(name, self.params, False, f"{type(exc).__name__}: {exc}"))
            return
        if isinstance(value, tuple):
            passed, detail = bool(value[0]), str(value[1])
        else:
            passed, detail = bool(value), ""
        self.results.append(CheckResult(name, self.params, passed, detail))


def _structure_checks(P: GroupParams, use_oracle: bool) -> list[CheckResult]:
    p, m, n, l = P.as_tuple()
    c = _Collector((p, m, n, l, None))
    c.check("core.twist_order", lambda: twist_order(P) == p ** (m - l))
    c.check(
        "structure.center_order",
        lambda: structure.center(P).order == p**l * p ** (n - m + l),
    )
    c.check(
        "structure.derived_index",
        lambda: structure.derived_subgroup(P).order * p ** (n + l) == P.order,
    )
    if P.minimal_nonabelian:
        def k_of_d() -> bool:
            z = structure.center(P).order
            return structure.k_of_D(P) == z + (P.order - z) // p

        def degrees() -> bool:
            deg = structure.irr_degree_multiset(P)
            return (
                sum(mult * d * d for d, mult in deg.items()) == P.order
                and sum(deg.values()) == structure.k_of_D(P)
            )

        c.check("structure.k_of_D", k_of_d)
        c.check("structure.degree_squares", degrees)
    if use_oracle:
        c.check("core.associativity", lambda: oracle.associativity(P))
        c.check("core.inverses", lambda: oracle.inverses_ok(P))
        c.check(
            "core.generator_orders",
            lambda: element_order(x_gen(P), P) == P.mod_x and element_order(y_gen(P), P) == P.mod_y,
        )
        c.check("structure.derived_oracle", lambda: structure.derived_subgroup(P, oracle=True) is not None)
        c.check("structure.center_oracle", lambda: structure.center(P, oracle=True) is not None)
        c.check("structure.centralizer_x", lambda: structure.centralizer(x_gen(P), P, oracle=True) is not None)
        c.check("structure.centralizer_y", lambda: structure.centralizer(y_gen(P), P, oracle=True) is not None)
        classes = None

        def partition() -> tuple[bool, str]:
            nonlocal classes
            classes = structure.oracle_classes(P)
            sizes = [k.size for k in classes]
            z = structure.center(P).order
            ok = sum(sizes) == P.order and sizes.count(1) == z
            ok = ok and all(s in {p**i for i in range(m - l + 1)} for s in sizes)
            if P.minimal_nonabelian:
                closed = structure.conjugacy_classes(P, with_members=True)
                ok = ok and structure.class_partition(closed) == structure.class_partition(classes)
                ok = ok and len(classes) == structure.k_of_D(P) == p ** (n + m - 3) * (p * p + p - 1)
            return ok, f"{len(classes)} classes"

        c.check("structure.class_partition", partition)
    return c.results


def _fusion_checks(P: GroupParams, e: int, use_oracle: bool) -> list[CheckResult]:
    p, m, n, l = P.as_tuple()
    c = _Collector((p, m, n, l, e))
    c.check("fusion.alpha_order", lambda: n_order(fusion.make_fusion(P, e).r, P.mod_x) == e)
    if P.minimal_nonabelian:
        inv_holder: dict[str, invariants.InvariantSet] = {}

        def inv() -> invariants.InvariantSet:
            if "v" not in inv_holder:
                inv_holder["v"] = invariants.invariants_reduction(P, e)
            return inv_holder["v"]

        c.check("fusion.orbit_split_integral", lambda: fusion.orbit_split_count(P, e) * e == structure.k_of_D(P) - p**n)
        c.check("fusion.ledger_plus_e_is_k", lambda: fusion.subsection_ledger(P, e).k_minus_l + e == inv().k)

        def bounds() -> tuple[bool, str]:
            report = invariants.bounds_check(P, inv())
            return report.all_pass, ",".join(report.failures())

        c.check("invariants.bounds", bounds)
        c.check("invariants.k0_divisible", lambda: inv().k0 % p**n == 0 and invariants.k0_amc(P, e) == inv().k0)
        c.check("invariants.k1_divisible", lambda: inv().k1 % p ** (n - 1) == 0)
        c.check("invariants.l_in_bounds", lambda: invariants.l_bounds(e)[0] <= inv().l <= invariants.l_bounds(e)[1])
        c.check("invariants.malle_navarro", lambda: all(invariants.malle_navarro_check(P, e)))
        c.check("invariants.sum_of_heights", lambda: inv().k0 + inv().k1 == inv().k)
        if m == 2 and n == 1:
            c.check(
                "invariants.galois_orbit_total",
                lambda: sum(a * b for a, b in invariants.galois_orbit_structure(p, e)) == inv().k,
            )
        if n == 1:
            c.check(
                "invariants.k_minus_l_n1",
                lambda: invariants.k_minus_l_n1(P, e) == fusion.subsection_ledger(P, e).k_minus_l,
            )
        if e == 1:
            c.check(
                "invariants.nilpotent_matches_D",
                lambda: inv().k == structure.k_of_D(P) and inv().k0 == p ** (n + l),
            )
        if p == 3 and e == 2:
            c.check("invariants.p3_closed_form", lambda: _same(inv(), invariants.invariants_p3(m, n)))
        if p == 5 and m == 2:
            c.check("invariants.p5_closed_form", lambda: _same(inv(), invariants.invariants_p5(n, e)))
        if p in invariants.SMALL_PRIMES_E2 and m == 2 and e == 2:
            c.check("invariants.small_prime_closed_form", lambda: _same(inv(), invariants.invariants_small_prime_e2(p, n)))
        c.check("proofs.replay_amc", lambda: proofs.replay_amc(P, e).verified)
        c.check("proofs.replay_k2", lambda: proofs.replay_k2(P, e).verified)
    if use_oracle:
        F = fusion.make_fusion(P, e)
        c.check("fusion.alpha_homomorphism", lambda: oracle.alpha_is_homomorphism(P, F.r))
        c.check("fusion.alpha_outer_order", lambda: fusion.outer_order(P, F) == e)
        c.check("fusion.focal_oracle", lambda: fusion.focal_subgroup(P, F, oracle=True) is not None)
        if P.minimal_nonabelian:
            c.check("fusion.census", lambda: _census(P, F))
            c.check(
                "fusion.ledger_enumerated",
                lambda: fusion.subsection_ledger(P, e, enumerate_classes=True).k_minus_l
                == fusion.subsection_ledger(P, e).k_minus_l,
            )
    return c.results


def _same(a: invariants.InvariantSet, b: invariants.InvariantSet) -> bool:
    return a.as_dict() == b.as_dict()


def census_counts(P: GroupParams, F: fusion.FusionData, mode: str = "closed_form") -> tuple[int, dict[int, int]]:
    """``(number of alpha-fixed D-classes, {orbit length: count} for the rest)``."""
    fixed = 0
    lengths: dict[int, int] = {}
    for fc in fusion.f_classes(P, F, mode=mode):
        if len(fc.d_classes) == 1:
            fixed += 1
        else:
            lengths[len(fc.d_classes)] = lengths.get(len(fc.d_classes), 0) + 1
    return fixed, lengths


def _census(P: GroupParams, F: fusion.FusionData) -> tuple[bool, str]:
    e, p, n = F.e, P.p, P.n
    fixed, lengths = census_counts(P, F)
    fixed_o, lengths_o = census_counts(P, F, mode="oracle")
    split = fusion.orbit_split_count(P, e)
    if e == 1:
        ok = fixed == structure.k_of_D(P) and not lengths
    else:
        ok = fixed == p**n and lengths == {e: split}
    ok = ok and (fixed, lengths) == (fixed_o, lengths_o)
    alt = _second_primitive_root(P)
    if alt is not None:
        ok = ok and census_counts(P, fusion.make_fusion(P, e, root=alt)) == (fixed, lengths)
    return ok, f"fixed={fixed} orbits={lengths}"


def _second_primitive_root(P: GroupParams) -> int | None:
    phi = P.mod_x // P.p * (P.p - 1)
    least = fusion.make_fusion(P, 1).primitive_root
    for g in range(least + 1, P.mod_x):
        if g % P.p and n_order(g, P.mod_x) == phi:
            return g
    return None


def point_results(point: tuple[int, int, int, int], skip_oracle: bool = False, cap: int | None = None) -> list[CheckResult]:
    p, m, n, l = point
    P = GroupParams(p, m, n, l, allow_bigint=True)
    limit = oracle_cap() if cap is None else cap
    use_oracle = not skip_oracle and P.order <= limit
    results = _structure_checks(P, use_oracle)
    for e in divisors(p - 1):
        results += _fusion_checks(P, int(e), use_oracle)
    return results


def _point_task(args: tuple[tuple[int, int, int, int], bool, int | None]) -> list[CheckResult]:
    return point_results(*args)


def run_sweep(
    points: Iterable[tuple[int, int, int, int]],
    skip_oracle: bool = False,
    jobs: int = 1,
    cap: int | None = None,
) -> SweepResult:
    start = time.perf_counter()
    tasks = [(pt, skip_oracle, cap) for pt in sorted(points)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_point_task, tasks))
    else:
        chunks = [_point_task(t) for t in tasks]
    results = [r for chunk in chunks for r in chunk]
    results.sort(key=lambda r: (r.params[:4], -1 if r.params[4] is None else r.params[4], r.name))
    return SweepResult(tuple(results), time.perf_counter() - start)


def iter_failures(result: SweepResult) -> Iterator[CheckResult]:
    return (r for r in result.results if not r.passed)

"""Closed-form block invariants and the inequalities they must satisfy.

The inertial index ``e`` is always an explicit argument.  Rational-looking
expressions are evaluated as an integer numerator followed by an exact
division; where a bound genuinely involves negative powers of ``p`` it is
evaluated with :class:`fractions.Fraction` and flagged in the report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import GroupParams
from .errors import InternalInvariantError, InvalidInputError, UnsupportedParametersError
from .fusion import check_inertial_index, exact_div
from .structure import k_of_D

PROVED = "proved"
EXTRAPOLATED = "extrapolated"
SMALL_PRIMES_E2 = (7, 11, 13, 17, 23, 29)


@dataclass(frozen=True)
class InvariantSet:
    k: int
    k0: int
    k1: int
    l: int
    e: int
    source: str = "reduction_formula"

    def __post_init__(self) -> None:
        if self.k != self.k0 + self.k1:
            raise InternalInvariantError(f"k = {self.k} but k0 + k1 = {self.k0 + self.k1}")

    @property
    def heights(self) -> tuple[int, ...]:
        """``(k_0, k_1)``; every higher ``k_i`` is zero."""
        return (self.k0, self.k1)

    def as_dict(self) -> dict[str, int]:
        return {"k": self.k, "k0": self.k0, "k1": self.k1, "l": self.l, "e": self.e}


@dataclass(frozen=True)
class BoundsReport:
    k_lower: bool
    k_upper: bool
    k0_lower: bool
    k0_upper: bool
    weighted_height_sum: bool
    l_at_least_e: bool
    e_divides_p_minus_1: bool
    p_n_divides_k0: bool
    higher_heights_divisible: bool
    heights_vanish_above: bool
    heights_sum_to_k: bool
    # bounds whose closed form contains a negative power of p
    fractional_terms: tuple[str, ...] = field(default=())

    def checks(self) -> dict[str, bool]:
        return {name: value for name, value in vars(self).items() if isinstance(value, bool)}

    @property
    def all_pass(self) -> bool:
        return all(self.checks().values())

    def failures(self) -> list[str]:
        return [name for name, ok in self.checks().items() if not ok]


def _require_minimal(P: GroupParams) -> None:
    if not P.minimal_nonabelian:
        raise UnsupportedParametersError(f"formula needs l = m - 1, got D{P}")


def _pow(p: int, k: int) -> Fraction:
    return Fraction(p) ** k


def k0_amc(P: GroupParams, e: int) -> int:
    """Height-zero count ``((p^(m-1) - 1)/e + e) p^n``."""
    _require_minimal(P)
    check_inertial_index(P.p, e)
    p = P.p
    return (exact_div(p ** (P.m - 1) - 1, e, "k0") + e) * p**P.n


def invariants_reduction(P: GroupParams, e: int) -> InvariantSet:
    _require_minimal(P)
    check_inertial_index(P.p, e)
    p, m, n = P.p, P.m, P.n
    k0 = k0_amc(P, e)
    k1 = exact_div((p ** (m - 1) - p ** (m - 2)) * p ** (n - 1), e, "k1")
    k = (exact_div(p**m + p ** (m - 1) - p ** (m - 2) - p, e, "k") + e * p) * p ** (n - 1)
    return InvariantSet(k=k, k0=k0, k1=k1, l=e, e=e)


def invariants_p3(m: int, n: int) -> InvariantSet:
    """Non-nilpotent 3-blocks (e = 2), written in base 3."""
    if m < 2 or n < 1:
        raise InvalidInputError("need m >= 2 and n >= 1")
    k0 = exact_div(3 ** (m - 2) + 1, 2) * 3 ** (n + 1)
    k1 = 3 ** (m + n - 3)
    k = exact_div((11 * 3 ** (m - 2) + 9) * 3 ** (n - 1), 2)
    return InvariantSet(k=k, k0=k0, k1=k1, l=2, e=2, source="p3_closed_form")


def invariants_p5(n: int, e: int) -> InvariantSet:
    """5-blocks with defect group ``C_25 x| C_(5^n)``."""
    check_inertial_index(5, e)
    if n < 1:
        raise InvalidInputError("need n >= 1")
    k0 = (4 // e + e) * 5**n
    k1 = 4 // e * 5 ** (n - 1)
    k = (24 // e + 5 * e) * 5 ** (n - 1)
    return InvariantSet(k=k, k0=k0, k1=k1, l=e, e=e, source="p5_closed_form")


def invariants_small_prime_e2(p: int, n: int) -> InvariantSet:
    """``C_(p^2) x| C_(p^n)`` with ``e = 2`` for the primes the screen settles."""
    if p not in SMALL_PRIMES_E2:
        raise InvalidInputError(f"p must be one of {SMALL_PRIMES_E2}")
    if n < 1:
        raise InvalidInputError("need n >= 1")
    k0 = exact_div(p + 3, 2) * p**n
    k1 = exact_div(p - 1, 2) * p ** (n - 1)
    k = exact_div((p * p + 4 * p - 1) * p ** (n - 1), 2)
    return InvariantSet(k=k, k0=k0, k1=k1, l=2, e=2, source="small_prime_e2_closed_form")


def provenance(P: GroupParams, e: int) -> str:
    """``"proved"`` where the formulas are theorems, else ``"extrapolated"``."""
    if not P.minimal_nonabelian:
        return EXTRAPOLATED
    if e == 1:  # nilpotent: invariants of D itself
        return PROVED
    if P.p == 3:
        return PROVED
    if P.p == 5 and P.m == 2:
        return PROVED
    if P.p in SMALL_PRIMES_E2 and P.m == 2 and e == 2:
        return PROVED
    return EXTRAPOLATED


def bounds_check(P: GroupParams, inv: InvariantSet, heights: list[int] | tuple[int, ...] | None = None) -> BoundsReport:
    """Evaluate every general inequality and divisibility for ``inv``.

    Valid for any ``0 < l < m``.  ``heights`` is the vector ``(k_0, k_1, ...)``;
    it defaults to ``inv.heights``.
    """
    p, m, n, l = P.p, P.m, P.n, P.l
    e = inv.e
    ks = list(inv.heights if heights is None else heights)
    fractional = []

    base = Fraction(p**l - 1, e) + e
    k_lo_exp = 2 * l - m - 1
    if k_lo_exp < 0:
        fractional.append("k_lower")
    k_lo = (Fraction(p**l + p ** (l - 1) - 1, e) - _pow(p, k_lo_exp) / e + e) * p**n
    if n < 2 or n + m - l - 2 < 0:
        fractional.append("k_upper")
    k_hi = base * (_pow(p, n + m - l - 2) + p**n - _pow(p, n - 2))

    weighted = sum(p ** (2 * i) * k for i, k in enumerate(ks))
    div_exp = n - m + l  # >= 0 by m - l <= n
    return BoundsReport(
        k_lower=k_lo <= inv.k,
        k_upper=inv.k <= k_hi,
        k0_lower=2 * p**n <= inv.k0,
        k0_upper=inv.k0 <= base * p**n,
        weighted_height_sum=weighted <= base * p ** (n + m - l),
        l_at_least_e=inv.l >= e,
        e_divides_p_minus_1=(p - 1) % e == 0,
        p_n_divides_k0=inv.k0 % p**n == 0,
        higher_heights_divisible=all(k % p**div_exp == 0 for k in ks[1:]),
        heights_vanish_above=all(k == 0 for i, k in enumerate(ks) if i > 2 * (m - l)),
        heights_sum_to_k=sum(ks) == inv.k,
        fractional_terms=tuple(fractional),
    )


def k_minus_l_n1(P: GroupParams, e: int) -> int:
    """``k(B) - l(B)`` when ``n = 1``."""
    _require_minimal(P)
    if P.n != 1:
        raise InvalidInputError(f"needs n = 1, got n = {P.n}")
    check_inertial_index(P.p, e)
    p, m = P.p, P.m
    return exact_div(p**m + p ** (m - 1) - p ** (m - 2) - p, e, "k - l") + e * (p - 1)


def l_bounds(e: int) -> tuple[int, int]:
    """Range ``e <= l(B) <= 2e - 1`` for the number of Brauer characters.

    For ``p = 5``, ``e = 4`` a sharper argument gives ``l(B) <= 6``; only the
    general endpoints are returned here.
    """
    if e < 1:
        raise InvalidInputError("e must be positive")
    return (e, 2 * e - 1)


def k0_l1_p3(m: int, n: int) -> int:
    """Height-zero count for ``p = 3``, ``l = 1`` and ``2 <= m <= n + 1``."""
    if not 2 <= m <= n + 1:
        raise InvalidInputError(f"need 2 <= m <= n + 1, got m={m}, n={n}")
    return 3 ** (n + 1)


def galois_orbit_structure(p: int, e: int) -> list[tuple[int, int]]:
    """``(orbit length, number of orbits)`` of p-conjugate characters for ``|D| = p^3``."""
    check_inertial_index(p, e)
    q = (p - 1) // e
    structure = [(p - 1, q + e), (q, 2), (1, e)]
    P = GroupParams(p, 2, 1, 1)
    total = sum(length * count for length, count in structure)
    if total != invariants_reduction(P, e).k:
        raise InternalInvariantError(f"orbit structure totals {total}, not k(B), for p={p}, e={e}")
    return structure


def malle_navarro_check(P: GroupParams, e: int) -> tuple[bool, bool]:
    """``(k/k0 <= p, k <= k(D))``, compared in integers."""
    inv = invariants_reduction(P, e)
    return (inv.k <= P.p * inv.k0, inv.k <= k_of_D(P))

"""Replays of the arithmetic behind the structural results.

Each routine returns a :class:`Certificate` that echoes every value it
evaluated, so a report can be audited without rerunning anything.
Diophantine screens are plain bounded enumeration; the bounds come from the
target value and are recorded in the certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Any, Literal, Sequence

from sympy import isprime

from .core import GroupParams, element, x_gen
from .errors import InvalidInputError, UnsupportedParametersError
from .fusion import check_inertial_index
from .structure import centralizer

CONTRADICTION = "contradiction"
INFEASIBLE = "infeasible"
FEASIBLE = "feasible_witness"
RESIDUE = "residue_screen"


@dataclass(frozen=True)
class Certificate:
    kind: str
    parameters: dict[str, Any]
    verified: bool
    witness: tuple[int, ...] | None = None
    checked_values: dict[str, Any] = field(default_factory=dict)
    search_box: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        def enc(v: Any) -> Any:
            if isinstance(v, bool) or v is None:
                return v
            if isinstance(v, (int, Fraction)):
                return str(v)
            if isinstance(v, dict):
                return {k: enc(w) for k, w in v.items()}
            if isinstance(v, (list, tuple)):
                return [enc(w) for w in v]
            return v

        return {
            "kind": self.kind,
            "verified": self.verified,
            "parameters": enc(self.parameters),
            "witness": enc(self.witness),
            "checked_values": enc(self.checked_values),
            "search_box": enc(self.search_box),
        }


def _minimal_params(P: GroupParams, e: int) -> dict[str, int]:
    if not P.minimal_nonabelian:
        raise UnsupportedParametersError(f"needs l = m - 1, got D{P}")
    check_inertial_index(P.p, e)
    return {"p": P.p, "m": P.m, "n": P.n, "l": P.l, "e": e}


def replay_amc(P: GroupParams, e: int) -> Certificate:
    """If ``k0`` fell one multiple of ``p^n`` short of its upper bound, the
    weighted height sum would be squeezed between ``L`` and ``U`` with ``U < L``.
    """
    params = _minimal_params(P, e)
    p, m, n = P.p, P.m, P.n
    pn = p**n
    L = (Fraction(p**m - 1, e) + p * p + e - 1) * pn
    U = (Fraction(p**m - p, e) + p * e) * pn
    U_prime = (Fraction(p**m - 1, e) + p * p) * pn
    # L splits as the assumed k0 plus p^2 times the forced k1
    assumed_k0 = (Fraction(p ** (m - 1) - 1, e) + e - 1) * pn
    forced_k1 = Fraction(p ** (m - 2) - Fraction(p) ** (m - 3), e) + 1
    split = assumed_k0 + forced_k1 * p ** (n + 2)
    values = {
        "L": L,
        "U": U,
        "U_prime": U_prime,
        "L_split": split,
        "L_split_matches": split == L,
        "U_lt_U_prime": U < U_prime,
        "U_lt_L": U < L,
    }
    ok = split == L and U < U_prime and U < L and all(v.denominator == 1 for v in (L, U, U_prime))
    return Certificate(CONTRADICTION, params, ok, checked_values=values)


def replay_k2(P: GroupParams, e: int) -> Certificate:
    """Characters of height two or more would force ``p^(n+3) - p^(n+1) <= M <= p^(n+2)``."""
    params = _minimal_params(P, e)
    p, m, n = P.p, P.m, P.n
    pn = p**n
    M = (Fraction(1 - p, e) + e * (p - 1)) * pn
    lower = p ** (n + 3) - p ** (n + 1)
    upper = p ** (n + 2)
    # M is what remains of the two sides of the weighted height-sum chain
    base = Fraction(p ** (m - 1) - 1, e) + e
    lhs = base * pn + (Fraction(p ** (m - 1) - p ** (m - 2), e) - 1) * p ** (n + 1) + p ** (n + 3)
    rhs = base * p ** (n + 1)
    residual = rhs - lhs + p ** (n + 3) - p ** (n + 1)
    values = {
        "M": M,
        "p^(n+3)-p^(n+1)": lower,
        "p^(n+2)": upper,
        "chain_reduces_to_M": residual == M,
        "M_le_upper": M <= upper,
        "lower_gt_upper": lower > upper,
    }
    ok = residual == M and M <= upper and lower > upper
    return Certificate(CONTRADICTION, params, ok, checked_values=values)


def dynkin_a_form(v: Sequence[int]) -> int:
    """Quadratic form of the Dynkin diagram ``A_k``: ``sum v_i^2 - sum v_i v_(i+1)``."""
    if len(v) == 0:
        raise InvalidInputError("vector must be non-empty")
    return sum(a * a for a in v) - sum(a * b for a, b in zip(v, v[1:]))


def p5_height_screen() -> list[Certificate]:
    """Orbit counts ``(alpha, beta, gamma)`` of entries ``+-1, +-2, +-3`` among five
    orbits, against ``alpha + 4 beta + 9 gamma + 5 k1 = 25`` for ``k1 = 1, 2, 3``."""
    certs = []
    for k1 in (1, 2, 3):
        target = 25 - 5 * k1
        box = {"alpha": (0, 5), "beta": (0, 5), "gamma": (0, 5), "alpha+beta+gamma": 5}
        witness = None
        tried = 0
        for alpha, beta, gamma in product(range(6), repeat=3):
            if alpha + beta + gamma != 5:
                continue
            tried += 1
            if alpha + 4 * beta + 9 * gamma == target:
                witness = (alpha, beta, gamma)
                break
        values = {"k1": k1, "rhs": target, "reduced_rhs": 20 - 5 * k1, "candidates_tried": tried}
        if witness is None:
            certs.append(Certificate(INFEASIBLE, {"k1": k1}, tried == 21, checked_values=values, search_box=box))
        else:
            a, b, g = witness
            values["evaluated"] = a + 4 * b + 9 * g + 5 * k1
            certs.append(
                Certificate(FEASIBLE, {"k1": k1}, values["evaluated"] == 25, witness=witness, checked_values=values, search_box=box)
            )
    return certs


def _solve_coin_sum(target: int, coins: list[int]) -> tuple[tuple[int, ...] | None, int]:
    """First non-negative ``r`` with ``sum r_i coins_i = target`` in lexicographic order."""
    nodes = 0

    def rec(i: int, remaining: int, acc: list[int]) -> tuple[int, ...] | None:
        nonlocal nodes
        nodes += 1
        if i == len(coins):
            return tuple(acc) if remaining == 0 else None
        for r in range(remaining // coins[i] + 1):
            found = rec(i + 1, remaining - r * coins[i], acc + [r])
            if found is not None:
                return found
        return None

    return rec(0, target, []), nodes


def prime_screen(p: int) -> Certificate:
    """Search ``sum_(i>=2) r_i (i^2 - 1) = (p - 3)/2`` over ``r_i >= 0``.

    Only defined for ``p >= 7``; ``p = 5`` is settled by the separate
    five-orbit screen.
    """
    if not (isinstance(p, int) and p >= 7 and isprime(p)):
        raise InvalidInputError("prime_screen needs a prime p >= 7")
    target = (p - 3) // 2
    coins = []
    i = 2
    while i * i - 1 <= target:
        coins.append(i * i - 1)
        i += 1
    box = {"i_range": (2, i - 1), "r_i_max": {str(c + 1): target // c for c in coins}}
    witness, nodes = _solve_coin_sum(target, coins)
    values = {"target": target, "coins": coins, "nodes_searched": nodes}
    if witness is None:
        return Certificate(INFEASIBLE, {"p": p}, True, checked_values=values, search_box=box)
    values["evaluated"] = sum(r * c for r, c in zip(witness, coins))
    # witness is indexed from i = 2
    return Certificate(FEASIBLE, {"p": p}, values["evaluated"] == target, witness=witness, checked_values=values, search_box=box)


def screen_primes(lo: int, hi: int) -> dict[int, Certificate | None]:
    """``prime_screen`` over the odd primes in ``[lo, hi]``; ``None`` where undefined."""
    out: dict[int, Certificate | None] = {}
    for p in range(max(lo, 3), hi + 1):
        if p % 2 and isprime(p):
            out[p] = prime_screen(p) if p >= 7 else None
    return out


def two_squares_screen(p: int) -> Certificate:
    """Whether ``a^2 + b^2 = 0 (mod p)`` has a solution with ``a, b`` nonzero.

    Dividing by ``a`` reduces every pair to ``(1, b)`` with ``b^2 = -1``, so
    the exhaustive search runs over the ``p - 1`` residues ``b``.
    """
    if not (isinstance(p, int) and p > 2 and isprime(p)):
        raise InvalidInputError("p must be an odd prime")
    if p > 10**4:
        raise InvalidInputError("exhaustive residue search is limited to p <= 10^4")
    roots = [b for b in range(1, p) if (b * b + 1) % p == 0]
    values = {"residues_searched": p - 1, "sqrt_minus_one": roots[:1]}
    box = {"b": (1, p - 1)}
    if not roots:
        return Certificate(INFEASIBLE, {"p": p}, True, checked_values=values, search_box=box)
    witness = (1, roots[0])
    # prefer an honest two-square decomposition p = a^2 + b^2 when it exists
    for a in range(1, isqrt(p // 2) + 1):
        b = isqrt(p - a * a)
        if a * a + b * b == p:
            witness = (a, b)
            break
    a, b = witness
    values["witness_sum"] = a * a + b * b
    ok = (a * a + b * b) % p == 0 and a % p != 0 and b % p != 0
    return Certificate(FEASIBLE, {"p": p}, ok, witness=witness, checked_values=values, search_box=box)


def orthogonality_budget(P: GroupParams, target: Literal["x", "x^p"]) -> int:
    """``|C_D(z)|`` for ``z = x`` or ``z = x^p``, the squared-norm budget of the
    column of generalized decomposition numbers at ``z`` when ``n = 1``."""
    if not P.minimal_nonabelian or P.n != 1:
        raise InvalidInputError(f"budget is only anchored for l = m - 1 and n = 1, got D{P}")
    if target == "x":
        z = x_gen(P)
    elif target == "x^p":
        z = element(P.p, 0, P)
    else:
        raise InvalidInputError(f"target must be 'x' or 'x^p', got {target!r}")
    return centralizer(z, P).order

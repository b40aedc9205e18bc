"""Normal-form arithmetic in the split metacyclic group

    D = <x, y | x^(p^m) = y^(p^n) = 1, y x y^-1 = x^(1 + p^l)>.

Every element is stored as the pair ``(a, b)`` standing for ``x^a y^b`` with
``0 <= a < p^m`` and ``0 <= b < p^n``.  Moving ``y^b`` past ``x^c`` gives
``y^b x^c = x^(c * r^b) y^b`` where ``r = 1 + p^l``, which is all the
multiplication needs.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, NamedTuple

from sympy import isprime

from .errors import InvalidInputError, ResourceLimitError

INT64_LIMIT = 2**63
DEFAULT_ORACLE_CAP = 3**8
ORACLE_CAP_ENV = "METABLOCK_ORACLE_CAP"


def oracle_cap() -> int:
    """Largest group order brute-force routines will enumerate."""
    raw = os.environ.get(ORACLE_CAP_ENV)
    if raw is None:
        return DEFAULT_ORACLE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InvalidInputError(f"{ORACLE_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise InvalidInputError(f"{ORACLE_CAP_ENV} must be positive")
    return cap


@dataclass(frozen=True)
class GroupParams:
    """Parameters ``(p, m, n, l)`` of the split metacyclic group D.

    ``allow_bigint`` lifts the 2^63 ceiling on |D|; Python integers are exact
    either way, the ceiling only mirrors fixed-width deployments.
    """

    p: int
    m: int
    n: int
    l: int
    allow_bigint: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        for name in ("p", "m", "n", "l"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise InvalidInputError(f"{name} must be an integer, got {value!r}")
        if self.p < 3 or not isprime(self.p):
            raise InvalidInputError("p must be an odd prime")
        if self.m < 2:
            raise InvalidInputError("m must be at least 2")
        if self.n < 1:
            raise InvalidInputError("n must be at least 1")
        if not 0 < self.l < self.m:
            raise InvalidInputError("l must satisfy 0 < l < m")
        if self.m - self.l > self.n:
            raise InvalidInputError("m - l must not exceed n")
        if not self.allow_bigint and self.p ** (self.m + self.n) > INT64_LIMIT:
            raise InvalidInputError(
                f"|D| = {self.p}^{self.m + self.n} exceeds 2^63; pass allow_bigint=True"
            )

    @classmethod
    def minimal(cls, p: int, m: int, n: int, allow_bigint: bool = False) -> GroupParams:
        """The minimal non-abelian member of the family (l = m - 1)."""
        return cls(p, m, n, m - 1, allow_bigint=allow_bigint)

    @property
    def minimal_nonabelian(self) -> bool:
        return self.l == self.m - 1

    @cached_property
    def mod_x(self) -> int:
        return self.p**self.m

    @cached_property
    def mod_y(self) -> int:
        return self.p**self.n

    @cached_property
    def order(self) -> int:
        return self.mod_x * self.mod_y

    @cached_property
    def r(self) -> int:
        """Exponent by which y acts on x."""
        return 1 + self.p**self.l

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.p, self.m, self.n, self.l)

    def __str__(self) -> str:
        return f"(p={self.p}, m={self.m}, n={self.n}, l={self.l})"


class Element(NamedTuple):
    """Normal form ``x^a y^b``; tuple order is the lexicographic order used for representatives."""

    a: int
    b: int


IDENTITY = Element(0, 0)


def x_gen(P: GroupParams) -> Element:
    return Element(1 % P.mod_x, 0)


def y_gen(P: GroupParams) -> Element:
    return Element(0, 1 % P.mod_y)


def element(a: int, b: int, P: GroupParams) -> Element:
    """Reduce arbitrary exponents to normal form."""
    return Element(a % P.mod_x, b % P.mod_y)


def check_element(g: Element, P: GroupParams) -> None:
    if not (0 <= g[0] < P.mod_x and 0 <= g[1] < P.mod_y):
        raise InvalidInputError(f"{tuple(g)} is not a normal form for D{P}")


def twist(b: int, P: GroupParams) -> int:
    """``(1 + p^l)^b mod p^m``, the exponent y^b applies to x."""
    return pow(P.r, b, P.mod_x)


def _mul(g: tuple[int, int], h: tuple[int, int], P: GroupParams) -> Element:
    return Element((g[0] + h[0] * pow(P.r, g[1], P.mod_x)) % P.mod_x, (g[1] + h[1]) % P.mod_y)


def _inv(g: tuple[int, int], P: GroupParams) -> Element:
    # (x^a y^b)^-1 = y^-b x^-a = x^(-a r^-b) y^-b
    b = (-g[1]) % P.mod_y
    return Element((-g[0] * pow(P.r, b, P.mod_x)) % P.mod_x, b)


def multiply(g: Element, h: Element, P: GroupParams) -> Element:
    check_element(g, P)
    check_element(h, P)
    return _mul(g, h, P)


def inverse(g: Element, P: GroupParams) -> Element:
    check_element(g, P)
    return _inv(g, P)


def power(g: Element, k: int, P: GroupParams) -> Element:
    """``g^k`` by repeated squaring; negative ``k`` inverts first."""
    check_element(g, P)
    if k < 0:
        g, k = _inv(g, P), -k
    result = IDENTITY
    base = Element(*g)
    while k:
        if k & 1:
            result = _mul(result, base, P)
        base = _mul(base, base, P)
        k >>= 1
    return result


def element_order(g: Element, P: GroupParams) -> int:
    check_element(g, P)
    order = 1
    current = Element(*g)
    # orders are powers of p, so only p-th powers need checking
    while current != IDENTITY:
        current = power(current, P.p, P)
        order *= P.p
    return order


def conjugate(g: Element, h: Element, P: GroupParams) -> Element:
    """``h g h^-1`` in normal form."""
    check_element(g, P)
    check_element(h, P)
    return _mul(_mul(h, g, P), _inv(h, P), P)


def conjugate_by_y(g: Element, P: GroupParams) -> Element:
    return Element(g[0] * P.r % P.mod_x, g[1])


def conjugate_by_x(g: Element, P: GroupParams) -> Element:
    return Element((g[0] + 1 - twist(g[1], P)) % P.mod_x, g[1])


def commutator(g: Element, h: Element, P: GroupParams) -> Element:
    """``g h g^-1 h^-1``."""
    return _mul(_mul(g, h, P), _mul(_inv(g, P), _inv(h, P), P), P)


def elements(P: GroupParams) -> Iterator[Element]:
    """All of D in lexicographic order."""
    for a in range(P.mod_x):
        for b in range(P.mod_y):
            yield Element(a, b)


def require_enumerable(P: GroupParams, cap: int | None = None) -> None:
    limit = oracle_cap() if cap is None else cap
    if P.order > limit:
        raise ResourceLimitError(f"|D| = {P.order} exceeds the oracle cap {limit}")


def random_element(P: GroupParams, rng: random.Random) -> Element:
    return Element(rng.randrange(P.mod_x), rng.randrange(P.mod_y))


def twist_order(P: GroupParams) -> int:
    """Multiplicative order of ``1 + p^l`` modulo ``p^m``; equals ``p^(m-l)``."""
    order, value = 1, P.r % P.mod_x
    while value != 1:
        value = pow(value, P.p, P.mod_x)
        order *= P.p
    return order

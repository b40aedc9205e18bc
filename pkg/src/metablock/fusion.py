"""The controlled fusion system with ``Out_F(D) = <alpha>``.

``alpha`` fixes ``y`` and sends ``x`` to ``x^r`` where ``r`` has multiplicative
order ``e`` modulo ``p^m``.  Everything here is determined by ``(P, e)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from sympy.ntheory import n_order, primitive_root

from .core import (
    IDENTITY,
    Element,
    GroupParams,
    _inv,
    _mul,
    conjugate_by_x,
    conjugate_by_y,
    elements,
    require_enumerable,
    x_gen,
    y_gen,
)
from .errors import InternalInvariantError, InvalidInputError, UnsupportedParametersError
from .structure import (
    ConjClass,
    Subgroup,
    conjugacy_classes,
    derived_subgroup,
    generate,
    k_of_D,
)


@dataclass(frozen=True)
class FusionData:
    e: int
    r: int
    primitive_root: int

    @property
    def nilpotent(self) -> bool:
        return self.e == 1


def exact_div(num: int, den: int, what: str = "quotient") -> int:
    """Integer division that refuses to round."""
    q, rem = divmod(num, den)
    if rem:
        raise InternalInvariantError(f"{what}: {num} is not divisible by {den}")
    return q


def check_inertial_index(p: int, e: int) -> None:
    if not isinstance(e, int) or e < 1 or (p - 1) % e:
        raise InvalidInputError(f"e must be a positive divisor of p - 1 = {p - 1}, got {e}")


def make_fusion(P: GroupParams, e: int, root: int | None = None) -> FusionData:
    """Canonical ``alpha``: ``r = g^(phi(p^m) / e)`` for the least primitive root ``g``.

    ``root`` substitutes another primitive root, which must give the same counts.
    """
    check_inertial_index(P.p, e)
    mod = P.mod_x
    g = primitive_root(mod) if root is None else root
    phi = mod // P.p * (P.p - 1)
    if n_order(g, mod) != phi:
        raise InvalidInputError(f"{g} is not a primitive root modulo {mod}")
    r = pow(g, phi // e, mod)
    if n_order(r, mod) != e:
        raise InternalInvariantError(f"r = {r} does not have order {e} modulo {mod}")
    return FusionData(e, r, g)


def apply_alpha(g: Element, P: GroupParams, F: FusionData, times: int = 1) -> Element:
    return Element(g[0] * pow(F.r, times, P.mod_x) % P.mod_x, g[1])


def is_inner_action(images: tuple[Element, Element], P: GroupParams) -> bool:
    """Whether some ``h`` in D sends ``(x, y)`` to ``images`` by conjugation."""
    x, y = x_gen(P), y_gen(P)
    for h in elements(P):
        hi = _inv(h, P)
        if _mul(_mul(h, x, P), hi, P) == images[0] and _mul(_mul(h, y, P), hi, P) == images[1]:
            return True
    return False


def outer_order(P: GroupParams, F: FusionData) -> int:
    """Order of ``alpha`` in Out(D), by comparison with every inner automorphism."""
    require_enumerable(P)
    x, y = x_gen(P), y_gen(P)
    inner = set()
    for h in elements(P):
        hi = _inv(h, P)
        inner.add((_mul(_mul(h, x, P), hi, P), _mul(_mul(h, y, P), hi, P)))
    j = 1
    while (apply_alpha(x, P, F, j), apply_alpha(y, P, F, j)) not in inner:
        j += 1
    return j


def focal_subgroup(P: GroupParams, F: FusionData, oracle: bool = False) -> Subgroup:
    """``D'`` for nilpotent fusion, ``<x>`` otherwise.

    The oracle generates ``<f(a) a^-1>`` with ``f`` ranging over conjugation
    by ``x``, by ``y`` and ``alpha``; these generate ``Aut_F(D)``, and since F
    is controlled every ``Aut_F(Q)`` is a restriction of it.
    """
    if F.e == 1:
        sub = derived_subgroup(P)
    else:
        sub = Subgroup((x_gen(P),), P.mod_x, (P.mod_x,))
    if oracle:
        require_enumerable(P)
        found = generate(oracle_focal_generators(P, F), P)
        if found != sub.elements(P):
            raise InternalInvariantError(
                f"focal subgroup mismatch for D{P}, e={F.e}: oracle order {len(found)}, closed form {sub.order}"
            )
    return sub


def oracle_focal_generators(P: GroupParams, F: FusionData, all_inner: bool = False) -> set[Element]:
    maps = [lambda g: conjugate_by_x(g, P), lambda g: conjugate_by_y(g, P), lambda g: apply_alpha(g, P, F)]
    if all_inner:
        for h in elements(P):
            hi = _inv(h, P)
            maps.append(lambda g, h=h, hi=hi: _mul(_mul(h, g, P), hi, P))
    gens = set()
    for a in elements(P):
        ai = _inv(a, P)
        for f in maps:
            gens.add(_mul(f(a), ai, P))
    return gens


class FClass(NamedTuple):
    representative: Element
    d_classes: tuple[ConjClass, ...]


def f_classes(P: GroupParams, F: FusionData, mode: str | None = None) -> list[FClass]:
    """D-classes grouped into ``<alpha>``-orbits.

    Representatives: powers of ``y`` first in exponent order, then the
    lexicographically least element of each remaining orbit.
    """
    if mode is None:
        mode = "closed_form" if P.minimal_nonabelian else "oracle"
    classes = conjugacy_classes(P, mode=mode, with_members=True)
    owner: dict[Element, int] = {}
    for idx, c in enumerate(classes):
        for g in c.members:
            owner[g] = idx
    seen: set[int] = set()
    orbits: list[FClass] = []
    for idx, c in enumerate(classes):
        if idx in seen:
            continue
        orbit = [idx]
        seen.add(idx)
        nxt = owner[apply_alpha(c.representative, P, F)]
        while nxt != idx:
            orbit.append(nxt)
            seen.add(nxt)
            nxt = owner[apply_alpha(classes[nxt].representative, P, F)]
        members = tuple(sorted((classes[i] for i in orbit), key=lambda k: k.representative))
        orbits.append(FClass(members[0].representative, members))

    def key(fc: FClass) -> tuple[int, Element]:
        ys = [g for c in fc.d_classes for g in c.members if g[0] == 0]
        return (0, Element(0, ys[0][1])) if ys else (1, fc.representative)

    keyed = sorted((key(fc), fc) for fc in orbits)
    return [FClass(k[1], fc.d_classes) for k, fc in keyed]


def meets_y(fc: FClass) -> bool:
    return any(g[0] == 0 for c in fc.d_classes for g in c.members)


def orbit_split_count(P: GroupParams, e: int) -> int:
    """Number of length-``e`` orbits on the D-classes avoiding ``<y>``."""
    _require_minimal(P)
    check_inertial_index(P.p, e)
    p, s = P.p, P.n + P.m
    # p^(n+m-3) (p^2 + p - p^(3-m) - 1), with p^(n+m-3) p^(3-m) = p^n
    numerator = p ** (s - 1) + p ** (s - 2) - p**P.n - p ** (s - 3)
    if numerator != k_of_D(P) - p**P.n:
        raise InternalInvariantError("orbit count numerator disagrees with k(D) - p^n")
    return exact_div(numerator, e, "orbit split count")


class LedgerEntry(NamedTuple):
    label: str
    representative: Element | None
    count: int
    l_bu: int


@dataclass(frozen=True)
class SubsectionLedger:
    k_minus_l: int
    breakdown: tuple[LedgerEntry, ...]


def subsection_ledger(P: GroupParams, e: int, enumerate_classes: bool = False) -> SubsectionLedger:
    """``k(B) - l(B)`` as a sum of ``l(b_u)`` over nontrivial F-class representatives.

    ``l(b_u) = e`` for ``u`` a nontrivial power of ``y`` and ``1`` for the
    representatives of the free orbits.  The default breakdown aggregates the
    two kinds; ``enumerate_classes=True`` lists every representative (needs the
    class enumeration to fit in memory).
    """
    _require_minimal(P)
    check_inertial_index(P.p, e)
    p, n, m = P.p, P.n, P.m
    if enumerate_classes:
        F = make_fusion(P, e)
        entries = []
        for fc in f_classes(P, F):
            if fc.representative == IDENTITY:
                continue
            if meets_y(fc):
                entries.append(LedgerEntry("y-power", fc.representative, 1, e))
            else:
                entries.append(LedgerEntry("free-orbit", fc.representative, 1, 1))
        breakdown = tuple(entries)
    else:
        breakdown = (
            LedgerEntry("y-power", None, p**n - 1, e),
            LedgerEntry("free-orbit", None, orbit_split_count(P, e), 1),
        )
    total = sum(entry.count * entry.l_bu for entry in breakdown)
    s = n + m
    # ((p^(m-1) + p^(m-2) - p^(m-3) - 1) / e + e) p^n - e, kept integral
    closed = exact_div(p ** (s - 1) + p ** (s - 2) - p ** (s - 3) - p**n, e, "subsection ledger") + e * p**n - e
    if total != closed:
        raise InternalInvariantError(f"subsection ledger {total} differs from closed form {closed} for D{P}, e={e}")
    return SubsectionLedger(total, breakdown)


def _require_minimal(P: GroupParams) -> None:
    if not P.minimal_nonabelian:
        raise UnsupportedParametersError(f"only l = m - 1 is supported, got D{P}")

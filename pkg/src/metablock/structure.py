"""Structural subgroups and conjugacy classes of D.

Closed forms are the default; ``oracle=True`` (or ``mode="oracle"``) rebuilds
the same object by brute force from the multiplication alone and raises
:class:`InternalInvariantError` if the two disagree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Literal

from .core import (
    IDENTITY,
    Element,
    GroupParams,
    _inv,
    _mul,
    check_element,
    commutator,
    element,
    element_order,
    elements,
    oracle_cap,
    require_enumerable,
    twist,
    x_gen,
    y_gen,
)
from .errors import InternalInvariantError, UnsupportedParametersError


@dataclass(frozen=True)
class Subgroup:
    generators: tuple[Element, ...]
    order: int
    # None for non-abelian subgroups; trivial factors are kept as given
    cyclic_decomposition: tuple[int, ...] | None = None

    @property
    def abelian_invariants(self) -> tuple[int, ...] | None:
        if self.cyclic_decomposition is None:
            return None
        return tuple(sorted((c for c in self.cyclic_decomposition if c > 1), reverse=True))

    def elements(self, P: GroupParams) -> frozenset[Element]:
        return generate(self.generators, P)


@dataclass(frozen=True)
class ConjClass:
    representative: Element
    size: int
    members: tuple[Element, ...] | None = None


def _closure(basis: list[Element], P: GroupParams) -> set[Element]:
    seen = {IDENTITY}
    queue = deque([IDENTITY])
    while queue:
        g = queue.popleft()
        for s in basis:
            h = _mul(g, s, P)
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return seen


def generate(gens: Iterable[Element], P: GroupParams) -> frozenset[Element]:
    """Subgroup generated by ``gens`` via breadth-first closure.

    Generators already inside the running closure are skipped, so the BFS only
    ever runs over a short basis even when thousands of generators are given.
    """
    members: set[Element] = {IDENTITY}
    basis: list[Element] = []
    for g in gens:
        check_element(g, P)
        if g in members:
            continue
        basis.append(Element(*g))
        members = _closure(basis, P)
    return frozenset(members)


def abelian_invariants_of(members: Iterable[Element], P: GroupParams) -> tuple[int, ...]:
    """Invariants of an abelian p-subgroup given by its elements.

    Uses ``|{g : g^(p^k) = 1}| = p^(sum_i min(e_i, k))``.
    """
    orders: dict[int, int] = {}
    for g in members:
        o = element_order(g, P)
        orders[o] = orders.get(o, 0) + 1
    top = _log_p(max(orders), P.p)
    exps = []
    for k in range(1, top + 1):
        exps.append(_log_p(sum(c for o, c in orders.items() if o <= P.p**k), P.p))
    # exps[k-1] = sum_i min(e_i, k); its increments count factors with e_i >= k
    at_least = [exps[i] - (exps[i - 1] if i else 0) for i in range(len(exps))]
    invariants: list[int] = []
    for k, count in enumerate(at_least):
        nxt = at_least[k + 1] if k + 1 < len(at_least) else 0
        invariants += [P.p ** (k + 1)] * (count - nxt)
    return tuple(sorted(invariants, reverse=True))


def _log_p(value: int, p: int) -> int:
    k = 0
    while value > 1:
        if value % p:
            raise InternalInvariantError(f"{value} is not a power of {p}")
        value //= p
        k += 1
    return k


def _is_abelian(gens: Iterable[Element], P: GroupParams) -> bool:
    gens = list(gens)
    return all(_mul(g, h, P) == _mul(h, g, P) for g in gens for h in gens)


def derived_subgroup(P: GroupParams, oracle: bool = False) -> Subgroup:
    """``D' = <x^(p^l)>``, cyclic of order ``p^(m-l)``."""
    gen = element(P.p**P.l, 0, P)
    sub = Subgroup((gen,), P.p ** (P.m - P.l), (P.p ** (P.m - P.l),))
    if oracle:
        require_enumerable(P)
        # commutators [g, s] with s a generator already generate D'
        comms = [commutator(g, s, P) for g in elements(P) for s in (x_gen(P), y_gen(P))]
        _assert_same(generate(comms, P), sub, P, "derived subgroup")
    return sub


def brute_derived_subgroup(P: GroupParams) -> frozenset[Element]:
    """All pairwise commutators; quadratic, meant for small test groups."""
    require_enumerable(P)
    group = list(elements(P))
    return generate({commutator(g, h, P) for g in group for h in group}, P)


def center(P: GroupParams, oracle: bool = False) -> Subgroup:
    """``Z(D) = <x^(p^(m-l))> x <y^(p^(m-l))>``."""
    k = P.m - P.l
    gx = element(P.p**k, 0, P)
    gy = element(0, P.p**k, P)
    decomposition = (P.p**P.l, P.p ** (P.n - k))
    gens = tuple(g for g in (gx, gy) if g != IDENTITY)
    sub = Subgroup(gens, P.p**P.l * P.p ** (P.n - k), decomposition)
    if oracle:
        require_enumerable(P)
        x, y = x_gen(P), y_gen(P)
        found = frozenset(
            g for g in elements(P) if _mul(g, x, P) == _mul(x, g, P) and _mul(g, y, P) == _mul(y, g, P)
        )
        _assert_same(found, sub, P, "center")
        if abelian_invariants_of(found, P) != sub.abelian_invariants:
            raise InternalInvariantError(f"center decomposition mismatch for D{P}")
    return sub


def centralizer(u: Element, P: GroupParams, oracle: bool = False) -> Subgroup:
    """``C_D(u)`` without enumerating D.

    ``x^c y^d`` centralizes ``u = x^a y^b`` iff ``a (r^d - 1) = c (r^b - 1)`` mod p^m.
    The ``d`` admitting a solution form a subgroup ``p^k Z / p^n Z``; the ``c``
    with ``c (r^b - 1) = 0`` give the kernel ``<x^(p^m / g)>``, ``g = gcd(r^b - 1, p^m)``.
    """
    check_element(u, P)
    a, b = u
    mod = P.mod_x
    B = (twist(b, P) - 1) % mod
    g = gcd(B, mod)
    kernel_gen = element(mod // g, 0, P)
    gens = [kernel_gen]
    step = None
    for k in range(P.n + 1):
        d = P.p**k % P.mod_y if k < P.n else 0
        A = a * (twist(d, P) - 1) % mod
        if A % g == 0:
            step = P.p**k
            if d:
                # solve c * B = A mod p^m
                c = (A // g) * pow(B // g, -1, mod // g) % (mod // g) if B else 0
                gens.append(Element(c, d))
            break
    assert step is not None  # d = 0 always solves
    order = g * (P.mod_y // step)
    gens = tuple(s for s in gens if s != IDENTITY)
    decomposition = None
    if _is_abelian(gens, P) and order <= oracle_cap():
        decomposition = abelian_invariants_of(generate(gens, P), P)
    sub = Subgroup(gens, order, decomposition)
    if oracle:
        require_enumerable(P)
        found = frozenset(h for h in elements(P) if _mul(h, u, P) == _mul(u, h, P))
        _assert_same(found, sub, P, f"centralizer of {tuple(u)}")
    return sub


def _assert_same(found: frozenset[Element], sub: Subgroup, P: GroupParams, what: str) -> None:
    if len(found) != sub.order or found != sub.elements(P):
        raise InternalInvariantError(f"{what} mismatch for D{P}: oracle order {len(found)}, closed form {sub.order}")


def _require_minimal(P: GroupParams, what: str) -> None:
    if not P.minimal_nonabelian:
        raise UnsupportedParametersError(f"{what} is only available for l = m - 1, got D{P}")


def _closed_form_classes(P: GroupParams, with_members: bool) -> list[ConjClass]:
    # l = m - 1: x^a y^b is central iff p | a and p | b; otherwise its class
    # is the coset {x^(a + t p^(m-1)) y^b : 0 <= t < p}
    p, top = P.p, P.p ** (P.m - 1)
    classes = []
    for a in range(P.mod_x):
        for b in range(P.mod_y):
            if a % p == 0 and b % p == 0:
                rep = Element(a, b)
                classes.append(ConjClass(rep, 1, (rep,) if with_members else None))
            elif a < top:
                rep = Element(a, b)
                members = tuple(Element(a + t * top, b) for t in range(p)) if with_members else None
                classes.append(ConjClass(rep, p, members))
    classes.sort(key=lambda c: c.representative)
    return classes


def oracle_classes(P: GroupParams, cap: int | None = None) -> list[ConjClass]:
    """Class partition from conjugation by x and y, closed under repetition."""
    require_enumerable(P, cap)
    x, y = x_gen(P), y_gen(P)
    xi, yi = _inv(x, P), _inv(y, P)
    seen: set[Element] = set()
    classes = []
    for g in elements(P):
        if g in seen:
            continue
        orbit = {g}
        queue = deque([g])
        while queue:
            h = queue.popleft()
            for s, si in ((x, xi), (y, yi)):
                c = _mul(_mul(s, h, P), si, P)
                if c not in orbit:
                    orbit.add(c)
                    queue.append(c)
        seen |= orbit
        members = tuple(sorted(orbit))
        classes.append(ConjClass(members[0], len(members), members))
    return classes


def conjugacy_classes(
    P: GroupParams,
    mode: Literal["closed_form", "oracle"] = "closed_form",
    cap: int | None = None,
    with_members: bool = False,
) -> list[ConjClass]:
    """Classes of D sorted by their lexicographically least member."""
    if mode == "oracle":
        return oracle_classes(P, cap)
    if mode != "closed_form":
        raise ValueError(f"unknown mode {mode!r}")
    _require_minimal(P, "closed-form class enumeration")
    return _closed_form_classes(P, with_members)


def class_partition(classes: Iterable[ConjClass]) -> frozenset[frozenset[Element]]:
    return frozenset(frozenset(c.members) for c in classes)


def k_of_D(P: GroupParams) -> int:
    """Number of conjugacy classes, ``|Z| + (|D| - |Z|) / p``."""
    _require_minimal(P, "k(D)")
    p, s = P.p, P.n + P.m
    return p ** (s - 1) + p ** (s - 2) - p ** (s - 3)


def irr_degree_multiset(P: GroupParams) -> dict[int, int]:
    """Irreducible character degrees of D with multiplicities."""
    _require_minimal(P, "the degree multiset")
    p, s = P.p, P.n + P.m
    linear = p ** (s - 1)  # |D : D'|
    degrees = {1: linear, p: p ** (s - 2) - p ** (s - 3)}
    if sum(mult * deg**2 for deg, mult in degrees.items()) != P.order:
        raise InternalInvariantError(f"sum of squared degrees differs from |D| for D{P}")
    return degrees

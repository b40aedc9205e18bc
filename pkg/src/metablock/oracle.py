"""Vectorized brute-force checks over the whole group.

Elements are indexed as ``a * p^n + b``.  All arrays are int64; the oracle cap
keeps every intermediate product far below 2^63.
"""

from __future__ import annotations

import numpy as np

from .core import GroupParams, require_enumerable


def _twist_table(P: GroupParams) -> np.ndarray:
    return np.array([pow(P.r, b, P.mod_x) for b in range(P.mod_y)], dtype=np.int64)


def _split(P: GroupParams) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(P.order, dtype=np.int64)
    return idx // P.mod_y, idx % P.mod_y


def _mul_idx(a1, b1, a2, b2, P: GroupParams, twist: np.ndarray) -> np.ndarray:
    a = (a1 + a2 * twist[b1]) % P.mod_x
    b = (b1 + b2) % P.mod_y
    return a * P.mod_y + b


def cayley_table(P: GroupParams) -> np.ndarray:
    """Full table ``T[i, j] = index(g_i g_j)``; quadratic memory."""
    require_enumerable(P)
    twist = _twist_table(P)
    a, b = _split(P)
    return _mul_idx(a[:, None], b[:, None], a[None, :], b[None, :], P, twist)


def associativity_triples(P: GroupParams) -> bool:
    """Every triple, ``|D|^3`` work; only for tiny groups."""
    T = cayley_table(P)
    for i in range(P.order):
        if not np.array_equal(T[T[i]], T[i][T]):
            return False
    return True


def associativity_light(P: GroupParams) -> bool:
    """Light's test: ``(g s) h = g (s h)`` for all ``g, h`` and ``s`` in ``{x, y}``.

    The set of ``s`` satisfying this for all ``g, h`` is closed under
    multiplication, so containing the generators makes it all of D.
    """
    T = cayley_table(P)
    for s in (P.mod_y, 1):  # indices of x and y
        if not np.array_equal(T[T[:, s], :], T[:, T[s, :]]):
            return False
    return True


def associativity_sampled(P: GroupParams, samples: int = 100_000, seed: int = 0) -> bool:
    require_enumerable(P)
    rng = np.random.default_rng(seed)
    twist = _twist_table(P)
    g, h, k = (rng.integers(0, P.order, samples) for _ in range(3))
    ga, gb = g // P.mod_y, g % P.mod_y
    ha, hb = h // P.mod_y, h % P.mod_y
    ka, kb = k // P.mod_y, k % P.mod_y
    gh = _mul_idx(ga, gb, ha, hb, P, twist)
    left = _mul_idx(gh // P.mod_y, gh % P.mod_y, ka, kb, P, twist)
    hk = _mul_idx(ha, hb, ka, kb, P, twist)
    right = _mul_idx(ga, gb, hk // P.mod_y, hk % P.mod_y, P, twist)
    return bool(np.array_equal(left, right))


def associativity(P: GroupParams, exhaustive_limit: int = 729, samples: int = 100_000) -> bool:
    if P.order <= exhaustive_limit:
        return associativity_light(P)
    seed = ((P.p * 101 + P.m) * 101 + P.n) * 101 + P.l
    return associativity_sampled(P, samples, seed=seed)


def inverses_ok(P: GroupParams) -> bool:
    """``g g^-1 = 1`` for every ``g``, with the inverse computed independently."""
    require_enumerable(P)
    twist = _twist_table(P)
    a, b = _split(P)
    ib = (-b) % P.mod_y
    ia = (-a * twist[ib]) % P.mod_x
    return bool(np.all(_mul_idx(a, b, ia, ib, P, twist) == 0))


def alpha_is_homomorphism(P: GroupParams, r: int, all_pairs: bool = False) -> bool:
    """``alpha(g s) = alpha(g) alpha(s)`` for every ``g`` and ``s`` in ``{x, y}``,
    plus bijectivity.

    Every element is a positive word in the generators, so the generator
    identity extends to all pairs by induction on word length.  ``all_pairs``
    checks the ``|D|^2`` pairs directly instead.
    """
    require_enumerable(P)
    twist = _twist_table(P)
    a, b = _split(P)
    alpha_a = a * r % P.mod_x
    image = alpha_a * P.mod_y + b
    if np.unique(image).size != P.order:
        return False
    if all_pairs:
        ha, hb = a[None, :], b[None, :]
        ga, gb = a[:, None], b[:, None]
        alpha_ha = alpha_a[None, :]
        alpha_ga = alpha_a[:, None]
    else:
        ha, hb = np.array([[1 % P.mod_x, 0]]), np.array([[0, 1 % P.mod_y]])
        alpha_ha = ha * r % P.mod_x
        ga, gb, alpha_ga = a[:, None], b[:, None], alpha_a[:, None]
    prod = _mul_idx(ga, gb, ha, hb, P, twist)
    lhs = (prod // P.mod_y) * r % P.mod_x * P.mod_y + prod % P.mod_y
    rhs = _mul_idx(alpha_ga, gb, alpha_ha, hb, P, twist)
    return bool(np.array_equal(lhs, rhs))

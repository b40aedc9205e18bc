import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import primerange

from metablock.core import GroupParams
from metablock.errors import InvalidInputError, UnsupportedParametersError
from metablock.proofs import (
    CONTRADICTION,
    FEASIBLE,
    INFEASIBLE,
    dynkin_a_form,
    orthogonality_budget,
    p5_height_screen,
    prime_screen,
    replay_amc,
    replay_k2,
    screen_primes,
    two_squares_screen,
)


class TestReplayAMC:
    @pytest.mark.parametrize("P, e, L, U", [((3, 2, 1, 1), 2, 42, 27), ((5, 2, 1, 1), 4, 170, 125), ((3, 2, 1, 1), 1, 51, 27)])
    def test_examples(self, P, e, L, U):
        cert = replay_amc(GroupParams(*P), e)
        assert cert.kind == CONTRADICTION and cert.verified
        vals = cert.checked_values
        assert (vals["L"], vals["U"]) == (L, U)
        assert vals["U"] < vals["U_prime"] and vals["L_split"] == L

    def test_needs_minimal(self):
        with pytest.raises(UnsupportedParametersError):
            replay_amc(GroupParams(3, 3, 2, 1), 2)

    def test_serializes_integers_as_strings(self, D27):
        d = replay_amc(D27, 2).to_dict()
        assert d["checked_values"]["L"] == "42" and d["verified"] is True


class TestReplayK2:
    @pytest.mark.parametrize(
        "P, e, M, lower, upper",
        [((3, 2, 1, 1), 2, 9, 72, 27), ((5, 2, 1, 1), 4, 75, 600, 125), ((7, 2, 1, 1), 6, 245, 2352, 343)],
    )
    def test_examples(self, P, e, M, lower, upper):
        cert = replay_k2(GroupParams(*P), e)
        vals = cert.checked_values
        assert cert.verified
        assert (vals["M"], vals["p^(n+3)-p^(n+1)"], vals["p^(n+2)"]) == (M, lower, upper)
        assert vals["chain_reduces_to_M"] and vals["M_le_upper"] and vals["lower_gt_upper"]


class TestDynkin:
    def test_examples(self):
        assert dynkin_a_form([0, 0, 0]) == 0
        for k in range(1, 8):
            for i in range(k):
                assert dynkin_a_form([int(j == i) for j in range(k)]) == 1
        for k in range(1, 21):
            assert dynkin_a_form([1] * k) == 1

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            dynkin_a_form([])

    @settings(max_examples=300)
    @given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=30))
    def test_positive_definite(self, v):
        q = dynkin_a_form(v)
        # 2q = v_1^2 + v_k^2 + sum (v_i - v_(i+1))^2
        assert 2 * q == v[0] ** 2 + v[-1] ** 2 + sum((a - b) ** 2 for a, b in zip(v, v[1:]))
        assert (q > 0) == any(v)


class TestP5Screen:
    def test_verdicts(self):
        certs = {c.parameters["k1"]: c for c in p5_height_screen()}
        assert certs[1].kind == FEASIBLE and certs[1].witness == (0, 5, 0)
        assert certs[2].kind == INFEASIBLE and certs[3].kind == INFEASIBLE
        assert all(c.verified for c in certs.values())
        assert certs[2].checked_values["candidates_tried"] == 21


class TestPrimeScreen:
    def test_examples(self):
        assert prime_screen(7).kind == INFEASIBLE
        assert prime_screen(7).checked_values["target"] == 2
        assert prime_screen(29).kind == INFEASIBLE
        cert = prime_screen(19)
        assert cert.kind == FEASIBLE and cert.witness == (0, 1) and cert.verified

    def test_range(self):
        screened = screen_primes(5, 31)
        assert screened[5] is None
        infeasible = {p for p, c in screened.items() if c is not None and c.kind == INFEASIBLE}
        assert infeasible == {7, 11, 13, 17, 23, 29}
        assert screened[31].witness == (2, 1)

    @pytest.mark.parametrize("p", [5, 9, 2, 4])
    def test_domain(self, p):
        with pytest.raises(InvalidInputError):
            prime_screen(p)

    @pytest.mark.parametrize("p", list(primerange(7, 200)))
    def test_against_reachability(self, p):
        target = (p - 3) // 2
        reach = {0}
        for _ in range(target):
            reach |= {s + i * i - 1 for s in reach for i in range(2, 20) if s + i * i - 1 <= target}
        assert (prime_screen(p).kind == FEASIBLE) == (target in reach)


class TestTwoSquares:
    def test_examples(self):
        assert two_squares_screen(3).kind == INFEASIBLE
        cert = two_squares_screen(5)
        assert cert.kind == FEASIBLE and cert.witness == (1, 2)
        assert two_squares_screen(13).witness == (2, 3)

    @pytest.mark.parametrize("p", list(primerange(3, 200)))
    def test_against_all_pairs(self, p):
        found = any((a * a + b * b) % p == 0 for a in range(1, p) for b in range(1, p))
        cert = two_squares_screen(p)
        assert (cert.kind == FEASIBLE) == found == (p % 4 == 1)
        assert cert.verified

    @pytest.mark.parametrize("p", [2, 9, 10007])
    def test_domain(self, p):
        with pytest.raises(InvalidInputError):
            two_squares_screen(p)


class TestOrthogonalityBudget:
    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_p3(self, m):
        assert orthogonality_budget(GroupParams(3, m, 1, m - 1), "x^p") == 3 ** (m + 1)

    def test_examples(self, D27, D125):
        assert orthogonality_budget(D125, "x^p") == 125
        assert orthogonality_budget(D27, "x^p") == 27
        assert orthogonality_budget(D27, "x") == 9

    def test_unsupported(self, D27):
        with pytest.raises(InvalidInputError):
            orthogonality_budget(GroupParams(3, 2, 2, 1), "x")
        with pytest.raises(InvalidInputError):
            orthogonality_budget(D27, "y")


def test_random_replays_on_grid():
    rng = random.Random(7)
    for _ in range(200):
        p = rng.choice([3, 5, 7, 11, 13, 17, 19, 23, 29, 31])
        m = rng.randint(2, 8)
        n = rng.randint(m - 1, 8)
        e = rng.choice([d for d in range(1, p) if (p - 1) % d == 0])
        P = GroupParams(p, m, n, m - 1, allow_bigint=True)
        assert replay_amc(P, e).verified and replay_k2(P, e).verified

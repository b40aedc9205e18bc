import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metablock.core import IDENTITY, Element, GroupParams, multiply, x_gen, y_gen
from metablock.errors import ResourceLimitError, UnsupportedParametersError
from metablock.structure import (
    abelian_invariants_of,
    brute_derived_subgroup,
    center,
    centralizer,
    class_partition,
    conjugacy_classes,
    derived_subgroup,
    generate,
    irr_degree_multiset,
    k_of_D,
    oracle_classes,
)

SMALL = [
    GroupParams(3, 2, 1, 1),
    GroupParams(3, 2, 2, 1),
    GroupParams(3, 3, 1, 2),
    GroupParams(3, 3, 2, 1),
    GroupParams(3, 3, 2, 2),
    GroupParams(5, 2, 1, 1),
    GroupParams(5, 3, 2, 1),
]


class TestDerived:
    def test_examples(self, D27, D243):
        d = derived_subgroup(D27)
        assert d.generators == ((3, 0),) and d.order == 3
        d = derived_subgroup(D243)
        assert d.generators == ((9, 0),) and d.order == 3

    def test_oracle_order(self):
        assert derived_subgroup(GroupParams(5, 3, 2, 1), oracle=True).order == 25

    @pytest.mark.parametrize("P", SMALL[:5], ids=str)
    def test_all_pairs(self, P):
        assert brute_derived_subgroup(P) == derived_subgroup(P).elements(P)


class TestCenter:
    def test_examples(self, D27, D243):
        z = center(D27, oracle=True)
        assert z.order == 3 and z.cyclic_decomposition == (3, 1)
        z = center(D243, oracle=True)
        assert z.order == 27 and z.cyclic_decomposition == (9, 3)
        assert center(GroupParams(5, 2, 2, 1), oracle=True).order == 25

    def test_no_trivial_generators(self, D27):
        assert IDENTITY not in center(D27).generators


class TestCentralizer:
    def test_examples(self, D27):
        assert centralizer(IDENTITY, D27, oracle=True).order == 27
        assert centralizer(Element(0, 1), D27, oracle=True).order == 9
        assert centralizer(Element(3, 0), D27, oracle=True).order == 27

    @pytest.mark.parametrize("P", SMALL[:6], ids=str)
    def test_every_element(self, P):
        from metablock.core import elements

        for u in elements(P):
            centralizer(u, P, oracle=True)

    def test_large_group_without_enumeration(self):
        P = GroupParams(31, 8, 8, 7, allow_bigint=True)
        assert centralizer(x_gen(P), P).order == 31**8 * 31**7
        assert centralizer(y_gen(P), P).order == 31**7 * 31**8


class TestClasses:
    @pytest.mark.parametrize("P, count", [((3, 2, 1, 1), 11), ((5, 2, 1, 1), 29), ((3, 3, 2, 2), 99)])
    def test_counts(self, P, count):
        P = GroupParams(*P)
        assert len(conjugacy_classes(P)) == count
        assert len(conjugacy_classes(P, mode="oracle")) == count
        assert k_of_D(P) == count

    def test_k_of_D_oracle(self):
        P = GroupParams(3, 4, 2, 3)
        assert k_of_D(P) == 297 == len(oracle_classes(P))

    @pytest.mark.parametrize("P", [P for P in SMALL if P.minimal_nonabelian], ids=str)
    def test_partition_matches_oracle(self, P):
        closed = conjugacy_classes(P, with_members=True)
        oracle = conjugacy_classes(P, mode="oracle")
        assert class_partition(closed) == class_partition(oracle)
        assert [c.representative for c in closed] == [c.representative for c in oracle]

    def test_sorted_representatives(self, D243):
        reps = [c.representative for c in conjugacy_classes(D243)]
        assert reps == sorted(reps)

    def test_closed_form_refuses_general_l(self):
        with pytest.raises(UnsupportedParametersError):
            conjugacy_classes(GroupParams(3, 3, 2, 1))
        with pytest.raises(UnsupportedParametersError):
            k_of_D(GroupParams(3, 3, 2, 1))

    def test_oracle_cap(self):
        with pytest.raises(ResourceLimitError):
            conjugacy_classes(GroupParams(3, 5, 4, 4), mode="oracle")
        assert len(conjugacy_classes(GroupParams(3, 2, 1, 1), mode="oracle", cap=27)) == 11

    def test_unknown_mode(self, D27):
        with pytest.raises(ValueError):
            conjugacy_classes(D27, mode="guess")


class TestDegrees:
    @pytest.mark.parametrize(
        "P, expected",
        [((3, 2, 1, 1), {1: 9, 3: 2}), ((5, 2, 1, 1), {1: 25, 5: 4}), ((3, 3, 1, 2), {1: 27, 3: 6})],
    )
    def test_examples(self, P, expected):
        P = GroupParams(*P)
        deg = irr_degree_multiset(P)
        assert deg == expected
        assert sum(m * d * d for d, m in deg.items()) == P.order
        assert sum(deg.values()) == len(oracle_classes(P))


class TestHelpers:
    def test_generate(self, D27):
        assert len(generate([x_gen(D27)], D27)) == 9
        assert len(generate([x_gen(D27), y_gen(D27)], D27)) == 27
        assert generate([], D27) == {IDENTITY}

    def test_abelian_invariants(self, D243):
        assert abelian_invariants_of(center(D243).elements(D243), D243) == (9, 3)
        assert abelian_invariants_of(generate([x_gen(D243)], D243), D243) == (27,)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_centralizer_contains_commuting_element(P, data):
    u = Element(data.draw(st.integers(0, P.mod_x - 1)), data.draw(st.integers(0, P.mod_y - 1)))
    members = centralizer(u, P).elements(P)
    assert u in members
    assert all(multiply(h, u, P) == multiply(u, h, P) for h in members)
    assert P.order % len(members) == 0

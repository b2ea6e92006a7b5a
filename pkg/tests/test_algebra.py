import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ghdist.algebra import (
    AlgebraError,
    Interval,
    PartialAlgebra,
    Postmeasure,
    algebra_from_json,
    algebra_to_json,
    cardinality,
    check_partial_algebra,
    check_postmeasure,
    compose_metric,
    find_order_embedding,
    minkowski_sum,
    powerset_algebra,
    sup_algebra,
    sup_of,
)
from ghdist.audit import audit_distance
from ghdist.metric import FiniteMetricSpace, hausdorff
from ghdist.svmetric import hausdorff_sv_metric, sup_postmeasure, symmetric_difference_sv

F = frozenset
SUP_CARRIER = [{0}, {1}, {2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}, {4}]


class TestPowersetAlgebra:
    def test_full_power_set(self):
        alg = powerset_algebra("xy")
        assert len(alg.elements) == 4
        rep = check_partial_algebra(alg)
        assert {v.axiom for v in rep.violations} == {"strict_join"}

    def test_strict_join_fails_for_union(self):
        # {x} < {x,y} and {y} < {x,y}, but both joins are {x,y}
        alg = powerset_algebra("xy")
        rep = check_partial_algebra(alg)
        x, y, xy = "{x}", "{y}", "{x,y}"
        assert (x, xy, y, xy) in [v.witness for v in rep.by_axiom("strict_join")]

    def test_one_point_power_set_fully_clean(self):
        assert check_partial_algebra(powerset_algebra("x")).ok

    def test_degenerate(self):
        alg = powerset_algebra("xy", [set()])
        assert alg.elements == [F()]
        assert check_partial_algebra(alg).ok

    def test_not_union_closed(self):
        with pytest.raises(AlgebraError, match="not closed"):
            powerset_algebra("xy", [set(), {"x"}, {"y"}])

    def test_missing_empty_set(self):
        with pytest.raises(AlgebraError):
            powerset_algebra("xy", [{"x"}])

    def test_three_points_clean_except_strict_join(self):
        rep = check_partial_algebra(powerset_algebra("xyz"))
        assert {v.axiom for v in rep.violations} == {"strict_join"}
        for axiom in ("reflexive", "transitive", "zero", "closure", "commutative", "monotone_join"):
            assert rep.checked[axiom] > 0 and not rep.by_axiom(axiom)

    def test_strict_order_is_proper_inclusion(self):
        alg = powerset_algebra("xyz")
        for a, b in itertools.product(alg.elements, repeat=2):
            assert alg.lt(a, b) == (a < b)


class TestSupAlgebra:
    def test_example_carrier_valid(self):
        alg = sup_algebra(SUP_CARRIER)
        assert check_partial_algebra(alg).ok

    def test_singleton_join(self):
        assert minkowski_sum(F({1}), F({2})) == F({3})

    def test_preorder_equivalence(self):
        alg = sup_algebra(SUP_CARRIER)
        a, b = F({1, 2}), F({2})
        assert alg.leq(a, b) and alg.leq(b, a) and alg.eq(a, b) and a != b

    def test_needs_zero(self):
        with pytest.raises(AlgebraError):
            sup_algebra([{1}, {2}])

    def test_rejects_negative_values(self):
        with pytest.raises(AlgebraError):
            sup_algebra([{0}, {-1}])

    def test_interval_zero(self):
        alg = sup_algebra([Interval(0), Interval(2)])
        assert alg.zero == Interval(0)
        assert minkowski_sum(Interval(1), Interval(2)) == Interval(3)

    def test_mixed_elements_rejected(self):
        with pytest.raises(AlgebraError):
            minkowski_sum(Interval(1), F({2}))

    @given(st.lists(st.frozensets(st.integers(0, 6), min_size=1, max_size=3), min_size=1, max_size=6))
    def test_sup_strictly_monotone(self, sets):
        alg = sup_algebra([{0}] + [set(s) for s in sets])
        pm = sup_postmeasure(alg)
        for a, b in itertools.product(alg.elements, repeat=2):
            if sup_of(a) < sup_of(b):
                assert alg.lt(a, b) and pm(a) < pm(b)


class TestCheckPartialAlgebra:
    def test_set_difference_join_not_commutative(self):
        elems = [F(c) for r in range(3) for c in itertools.combinations("xy", r)]
        alg = PartialAlgebra(elems, lambda a, b: a <= b, lambda a, b: a - b, F())
        rep = check_partial_algebra(alg)
        assert rep.by_axiom("commutative")

    def test_single_element(self):
        alg = PartialAlgebra([0], lambda a, b: True, lambda a, b: 0, 0)
        assert check_partial_algebra(alg).ok

    def test_bad_zero_reported(self):
        alg = PartialAlgebra([0, 1], lambda a, b: a >= b, lambda a, b: max(a, b), 0)
        assert check_partial_algebra(alg).by_axiom("zero")


class TestPostmeasure:
    def test_cardinality_on_power_set(self):
        pm = Postmeasure(powerset_algebra("xyz"), cardinality, "card")
        assert check_postmeasure(pm).ok

    def test_sup_on_sup_algebra(self):
        assert check_postmeasure(sup_postmeasure(sup_algebra(SUP_CARRIER))).ok

    def test_constant_fails_faithfulness(self):
        pm = Postmeasure(powerset_algebra("xy"), lambda e: 1, "one")
        rep = check_postmeasure(pm)
        assert [v.axiom for v in rep.violations] == ["faithfulness"]

    def test_non_subadditive(self):
        pm = Postmeasure(powerset_algebra("xy"), lambda e: len(e) ** 2, "square")
        assert check_postmeasure(pm).by_axiom("subadditive")


class TestCompose:
    def test_sup_of_dsv_is_hausdorff(self):
        X = FiniteMetricSpace.line([0, 1, 2, 3])
        sets = X.all_subsets()
        d = hausdorff_sv_metric(sets)
        comp = compose_metric(sup_postmeasure(d.algebra), d)
        for A, B in itertools.product(sets, repeat=2):
            assert comp(A, B) == hausdorff(A, B)

    @pytest.mark.parametrize("Z", ["x", "xy", "xyz", "wxyz"])
    def test_counting_symmetric_difference(self, Z):
        d = symmetric_difference_sv(Z)
        comp = compose_metric(Postmeasure(d.algebra, cardinality, "card"), d)
        assert audit_distance(comp, d.carrier).ok

    def test_self_distance_zero(self):
        d = symmetric_difference_sv("xyz")
        comp = compose_metric(Postmeasure(d.algebra, cardinality), d)
        assert all(comp(a, a) == 0 for a in d.carrier)

    def test_value_outside_algebra(self):
        d = symmetric_difference_sv("xy")
        alg = powerset_algebra("xy", [set(), {"x"}])
        comp = compose_metric(Postmeasure(alg, cardinality), d)
        with pytest.raises(AlgebraError):
            comp(F("x"), F("y"))


class TestOrderEmbedding:
    def test_chain_embeds(self):
        alg = sup_algebra(SUP_CARRIER)
        f = find_order_embedding(alg)
        E = alg.elements
        for i, j in itertools.product(range(len(E)), repeat=2):
            if alg.lt(E[i], E[j]):
                assert f[i] < f[j]

    def test_sup_algebra_additive_embedding(self):
        assert find_order_embedding(sup_algebra([{0}, {1}, {2}, {3}]), additive=True) is not None

    def test_power_set_has_no_additive_chain_embedding(self):
        # {x} and {y} are incomparable, yet an injective real map must order them;
        # with {x} + {x} = {x} additivity forces f({x}) = 0 = f(empty).
        assert find_order_embedding(powerset_algebra("xy"), additive=True) is None


class TestJson:
    def test_builtin_round_trip(self):
        obj = {"elements": [[0], [1], [2], [1, 2]], "leq": "builtin:sup", "join": "builtin:minkowski", "eq": "builtin:sup", "zero": 0}
        alg = algebra_from_json(obj)
        assert alg.leq(F({1, 2}), F({2}))

    def test_tabular_round_trip(self):
        alg = powerset_algebra("xy")
        obj = json.loads(json.dumps(algebra_to_json(alg)))
        back = algebra_from_json(obj)
        assert len(back.elements) == 4
        assert {v.axiom for v in check_partial_algebra(back).violations} == {"strict_join"}

    def test_tabular_missing_element(self):
        with pytest.raises(AlgebraError):
            algebra_from_json({"elements": [0, 1], "leq": [[0, 0], [0, 1], [1, 1]], "join": [[0, 1], [1, 2]], "zero": 0})

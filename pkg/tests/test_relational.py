import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghdist.audit import UndefinedDistance, audit_distance
from ghdist.metric import FiniteMetricSpace, hausdorff
from ghdist.relational import (
    Relation,
    canonical_RH,
    check_lr_chain_condition,
    check_selection,
    check_ti_criterion,
    closest_pairs,
    complete_supersets,
    cur_distance,
    full_relation,
    intersect_selections,
    is_complete,
    is_directed_family,
    is_intersection_complete,
    lr_distance,
    nearest_complete,
    nearest_point,
    parse_selection,
    threshold_selection,
    ur_distance,
)

from strategies import space_with_sets, spaces

LINE = FiniteMetricSpace.line([0, 1, 2, 3])
SUBSETS = LINE.all_subsets()


def S(*idx):
    return LINE.subset(idx)


def diagonal_or(sel):
    """Wrap a selection so R(A, A) is the diagonal."""

    def wrapped(A, B):
        if A == B:
            return Relation(A, B, frozenset((a, a) for a in A))
        return sel(A, B)

    wrapped.__name__ = getattr(sel, "__name__", "sel")
    return wrapped


class TestCompleteness:
    def test_full_is_complete(self):
        assert is_complete(full_relation(S(0, 1), S(2, 3)))

    def test_empty_not_complete(self):
        assert not is_complete(Relation(S(0), S(1), frozenset()))

    def test_rh_example_complete(self):
        R = canonical_RH(S(0, 1), S(2, 3))
        assert is_complete(R)

    def test_complete_is_intersection_complete(self):
        assert is_intersection_complete(full_relation(S(0, 1), S(2, 3)))

    def test_empty_on_two_by_two(self):
        R = Relation(S(0, 1), S(2, 3), frozenset())
        assert is_intersection_complete(R)
        supersets = list(complete_supersets(R))
        assert frozenset.intersection(*supersets) == frozenset()

    def test_empty_on_one_by_one(self):
        assert not is_intersection_complete(Relation(S(0), S(1), frozenset()))

    @settings(max_examples=200)
    @given(st.integers(1, 3), st.integers(1, 3), st.data())
    def test_pairwise_criterion_matches_brute_force(self, nA, nB, data):
        X = FiniteMetricSpace.line(list(range(nA + nB)))
        A, B = X.subset(range(nA)), X.subset(range(nA, nA + nB))
        cells = list(itertools.product(A, B))
        pairs = data.draw(st.frozensets(st.sampled_from(cells)))
        R = Relation(A, B, pairs)
        sups = list(complete_supersets(R))
        brute = bool(sups) and frozenset.intersection(*sups) == pairs
        assert is_intersection_complete(R) == brute

    def test_bad_pair_rejected(self):
        with pytest.raises(ValueError):
            Relation(S(0), S(1), frozenset({(1, 0)}))

    def test_matrix_round_trip(self):
        R = canonical_RH(S(0, 1), S(2, 3))
        assert Relation.from_matrix(R.A, R.B, R.matrix()) == R


class TestUpperRelational:
    def test_rh_recovers_hausdorff(self):
        assert ur_distance(canonical_RH, S(0, 1), S(2, 3)) == 2

    def test_diagonal_zero(self):
        assert ur_distance(canonical_RH, S(1, 2), S(1, 2)) == 0

    def test_full_relation_max_pair(self):
        assert ur_distance(full_relation, S(0, 1), S(2, 3)) == 3

    def test_empty_selection_undefined(self):
        with pytest.raises(UndefinedDistance):
            ur_distance(threshold_selection(0), S(0), S(3))

    def test_rh_pairs(self):
        assert canonical_RH(S(0, 1), S(2, 3)).pairs == {(0, 2), (1, 2), (1, 3)}

    def test_rh_contains_diagonal(self):
        assert {(a, a) for a in (0, 2)} <= canonical_RH(S(0, 2), S(0, 2)).pairs

    def test_rh_single_pair(self):
        assert canonical_RH(S(0), S(3)).pairs == {(0, 3)}

    @settings(max_examples=150)
    @given(space_with_sets(count=2))
    def test_rh_identity(self, data):
        X, A, B = data
        R = canonical_RH(A, B)
        assert ur_distance(canonical_RH, A, B) == hausdorff(A, B)
        assert is_complete(R) and is_intersection_complete(R)


class TestTICriterion:
    def test_rh_clean(self):
        assert check_ti_criterion(canonical_RH, SUBSETS).ok

    def test_closest_pairs_violates(self):
        rep = check_ti_criterion(closest_pairs, SUBSETS)
        assert not rep.ok
        assert len(rep.violations[0].witness) == 4

    def test_closest_pairs_gap_breaks_triangle(self):
        A, B, C = S(0), S(3), S(0, 3)
        assert ur_distance(closest_pairs, A, B) > ur_distance(closest_pairs, A, C) + ur_distance(closest_pairs, C, B)

    def test_all_equal_triple(self):
        A = S(1, 2)
        assert check_ti_criterion(canonical_RH, [A, A, A]).ok

    @settings(max_examples=25, deadline=None)
    @given(spaces(1, 3), st.sampled_from(["rh", "complete", "full", "closest"]))
    def test_ti_pass_implies_clean_triangle(self, X, name):
        sel = diagonal_or(parse_selection(name))
        sets = X.all_subsets()
        if check_ti_criterion(sel, sets).ok:
            rep = audit_distance(lambda A, B: ur_distance(sel, A, B), sets)
            assert not rep.by_axiom("triangle")

    def test_selection_shape(self):
        assert check_selection(canonical_RH, SUBSETS).ok
        assert not check_selection(full_relation, SUBSETS).ok
        assert check_selection(full_relation, SUBSETS, kind="lr").ok


class TestCollective:
    def test_all_complete_example(self):
        assert cur_distance("all_complete", S(0, 1), S(2, 3)) == 2

    def test_all_complete_diagonal(self):
        assert cur_distance("all_complete", S(1, 3), S(1, 3)) == 0

    def test_single_member_family(self):
        assert cur_distance([full_relation], S(0, 1), S(2, 3)) == 3

    def test_empty_family(self):
        with pytest.raises(ValueError):
            cur_distance([], S(0), S(1))

    def test_enumeration_matches_threshold(self):
        for A, B in itertools.product(SUBSETS, repeat=2):
            e = cur_distance("all_complete", A, B, method="enumerate")
            t = cur_distance("all_complete", A, B, method="threshold")
            assert e == t == hausdorff(A, B)

    @settings(max_examples=100)
    @given(space_with_sets(count=2))
    def test_cur_identity(self, data):
        X, A, B = data
        assert cur_distance("all_complete", A, B) == hausdorff(A, B)

    def test_directed_family_of_ti_selections(self):
        fam = [canonical_RH, intersect_selections(canonical_RH, nearest_complete)]
        fam = [diagonal_or(s) for s in fam]
        assert is_directed_family(fam, SUBSETS)
        for s in fam:
            assert check_ti_criterion(s, SUBSETS).ok
        rep = audit_distance(lambda A, B: cur_distance(fam, A, B), SUBSETS)
        assert not rep.by_axiom("triangle")

    def test_non_directed_family_detected(self):
        lo = lambda A, B: Relation(A, B, frozenset({(min(A.members), min(B.members))}))
        hi = lambda A, B: Relation(A, B, frozenset({(max(A.members), max(B.members))}))
        assert is_directed_family([lo], SUBSETS)
        assert not is_directed_family([lo, hi], SUBSETS)


class TestLowerRelational:
    def test_complete_selection_recovers(self):
        assert lr_distance(nearest_complete, S(0, 1), S(2, 3)) == 2

    def test_single_pair(self):
        sel = lambda A, B: Relation(A, B, frozenset({(0, 3)}))
        assert lr_distance(sel, S(0, 1), S(2, 3)) == 3

    def test_restricted_domain_range(self):
        sel = lambda A, B: Relation(A, B, frozenset({(1, 2)}))
        assert lr_distance(sel, S(0, 1), S(2, 3)) == 1

    def test_empty_undefined(self):
        with pytest.raises(UndefinedDistance):
            lr_distance(threshold_selection(0), S(0), S(3))

    def test_chain_condition_complete(self):
        assert check_lr_chain_condition(nearest_complete, SUBSETS).ok

    def test_chain_condition_nearest_point_fails(self):
        rep = check_lr_chain_condition(nearest_point, SUBSETS)
        assert not rep.ok
        assert len(rep.violations[0].witness) == 3

    def test_chain_condition_two_sets(self):
        assert check_lr_chain_condition(nearest_point, SUBSETS[:2]).ok

    @settings(max_examples=100)
    @given(space_with_sets(count=2))
    def test_complete_selection_identity(self, data):
        X, A, B = data
        for sel in (nearest_complete, full_relation, canonical_RH):
            assert lr_distance(sel, A, B) == hausdorff(A, B)


class TestParsing:
    def test_named(self):
        assert parse_selection("rh") is canonical_RH

    def test_threshold(self):
        assert parse_selection("threshold:1")(S(0, 1), S(2, 3)).pairs == {(1, 2)}

    def test_custom(self):
        table = {"0,1|2,3": [[0, 3]]}
        sel = parse_selection("custom:" + json.dumps(table))
        assert sel(S(0, 1), S(2, 3)).pairs == {(0, 3)}
        assert sel(S(1), S(1)).pairs == {(1, 1)}
        assert sel(S(0), S(1)).pairs == frozenset()

    def test_unknown(self):
        with pytest.raises(ValueError):
            parse_selection("bogus")

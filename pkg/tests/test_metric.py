import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.sparse.csgraph import floyd_warshall

from ghdist.metric import (
    FORMULATIONS,
    FiniteMetricSpace,
    MetricError,
    PointSet,
    closed_neighborhood,
    default_tolerance,
    dist_point_set,
    hausdorff,
    pseudometric_quotient,
    quasimetric_to_metric,
    semimetric_to_pseudometric,
    uniform_metric,
)

from strategies import integer_spaces, space_with_sets, spaces, subset_of

LINE = FiniteMetricSpace.line([0, 1, 2, 3])


def S(*idx):
    return LINE.subset(idx)


class TestConstruction:
    def test_line_space(self):
        assert LINE.dmat[0][3] == 3
        assert LINE.points == (0, 1, 2, 3)

    @pytest.mark.parametrize(
        "dmat",
        [
            [[0, 1], [2, 0]],  # asymmetric
            [[1, 1], [1, 0]],  # nonzero diagonal
            [[0, 0], [0, 0]],  # distinct points at 0
            [[0, 1, 5], [1, 0, 1], [5, 1, 0]],  # triangle
        ],
    )
    def test_rejects_non_metrics(self, dmat):
        with pytest.raises(MetricError):
            FiniteMetricSpace(list(range(len(dmat))), dmat)

    def test_rejects_size_mismatch(self):
        with pytest.raises(MetricError):
            FiniteMetricSpace([0, 1, 2], [[0, 1], [1, 0]])

    def test_semimetric_constructor_repairs_triangle(self):
        X = FiniteMetricSpace.from_semimetric("abc", [[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        assert X.dmat[0][2] == 2

    def test_from_coords_metrics(self):
        pts = [(0, 0), (3, 4)]
        assert FiniteMetricSpace.from_coords(pts, "euclidean").dmat[0][1] == 5.0
        assert FiniteMetricSpace.from_coords(pts, "manhattan").dmat[0][1] == 7
        assert FiniteMetricSpace.from_coords(pts, "chebyshev").dmat[0][1] == 4

    def test_empty_point_set_rejected(self):
        with pytest.raises(MetricError):
            LINE.subset([])

    def test_out_of_range_point_set_rejected(self):
        with pytest.raises(MetricError):
            LINE.subset([7])

    def test_point_sets_compare_by_space(self):
        other = FiniteMetricSpace.line([0, 1, 2, 3])
        assert S(0, 1) == S(1, 0)
        assert S(0, 1) != other.subset([0, 1])

    def test_all_subsets_count(self):
        assert len(LINE.all_subsets()) == 15
        assert len(LINE.all_subsets(2)) == 10


class TestDistPointSet:
    def test_min_over_set(self):
        assert dist_point_set(0, S(2, 3)) == 2

    def test_member_is_zero(self):
        assert dist_point_set(2, S(2, 3)) == 0

    def test_between_two(self):
        assert dist_point_set(1, S(0, 2)) == 1

    def test_index_out_of_range(self):
        with pytest.raises(MetricError):
            dist_point_set(9, S(0))


class TestClosedNeighborhood:
    def test_radius_one(self):
        assert closed_neighborhood(S(0), 1) == S(0, 1)

    def test_radius_zero_is_identity(self):
        assert closed_neighborhood(S(1, 3), 0) == S(1, 3)

    def test_covers_line(self):
        assert closed_neighborhood(S(1, 2), 1) == S(0, 1, 2, 3)

    def test_negative_radius(self):
        with pytest.raises(ValueError):
            closed_neighborhood(S(0), -1)

    @given(space_with_sets(count=1), st.integers(0, 10), st.integers(0, 10))
    def test_monotone_in_radius(self, data, r1, r2):
        X, A = data
        lo, hi = sorted((r1, r2))
        assert closed_neighborhood(A, lo).members <= closed_neighborhood(A, hi).members


class TestHausdorff:
    @pytest.mark.parametrize("formulation", FORMULATIONS)
    def test_disjoint_halves(self, formulation):
        assert hausdorff(S(0, 1), S(2, 3), formulation) == 2

    @pytest.mark.parametrize("formulation", FORMULATIONS)
    def test_identical(self, formulation):
        assert hausdorff(S(1, 2), S(1, 2), formulation) == 0

    @pytest.mark.parametrize("formulation", FORMULATIONS)
    def test_endpoints(self, formulation):
        assert hausdorff(S(0), S(3), formulation) == 3

    def test_unknown_formulation(self):
        with pytest.raises(ValueError):
            hausdorff(S(0), S(1), "median")

    def test_mismatched_spaces(self):
        with pytest.raises(MetricError):
            hausdorff(S(0), FiniteMetricSpace.line([0, 1]).subset([0]))

    def test_exact_with_fractions(self):
        X = FiniteMetricSpace.line([Fraction(0), Fraction(1, 3), Fraction(1)])
        v = hausdorff(X.subset([0]), X.subset([1, 2]))
        assert v == 1 and isinstance(v, (int, Fraction))

    @settings(max_examples=150)
    @given(space_with_sets(count=2))
    def test_four_formulations_agree(self, data):
        X, A, B = data
        vals = [hausdorff(A, B, f) for f in FORMULATIONS]
        tol = 1e-12 if any(isinstance(v, float) for v in vals) else 0
        assert max(vals) - min(vals) <= tol

    @settings(max_examples=100)
    @given(space_with_sets(count=2))
    def test_covering_at_dh(self, data):
        X, A, B = data
        dH = hausdorff(A, B)
        tol = default_tolerance(dH)
        union = A.members | B.members
        assert union <= closed_neighborhood(A, dH + tol).members
        assert union <= closed_neighborhood(B, dH + tol).members


class TestUniformMetric:
    def test_shift(self):
        assert uniform_metric((0, 1), (2, 3), LINE) == 2

    def test_same_map(self):
        assert uniform_metric((0, 2), (0, 2), LINE) == 0

    def test_one_coordinate(self):
        assert uniform_metric((0, 0), (0, 3), LINE) == 3

    def test_mapping_inputs(self):
        assert uniform_metric({"y1": 0, "y2": 1}, {"y1": 3, "y2": 1}, LINE) == 3

    def test_mismatched_index_sets(self):
        with pytest.raises(MetricError):
            uniform_metric((0, 1), (0,), LINE)


class TestConversions:
    def test_shortcut_through_chain(self):
        out = semimetric_to_pseudometric([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        assert out[0][2] == 2

    def test_metric_unchanged(self):
        assert semimetric_to_pseudometric(LINE.dmat) == [list(r) for r in LINE.dmat]

    def test_two_points(self):
        assert semimetric_to_pseudometric([[0, 7], [7, 0]])[0][1] == 7

    def test_asymmetric_rejected(self):
        with pytest.raises(MetricError):
            semimetric_to_pseudometric([[0, 1], [2, 0]])

    def test_quasimetric_max(self):
        assert quasimetric_to_metric([[0, 1], [3, 0]], "max")[0][1] == 3

    def test_quasimetric_sum(self):
        assert quasimetric_to_metric([[0, 1], [3, 0]], "sum")[0][1] == 4

    def test_quasimetric_symmetric_unchanged(self):
        assert quasimetric_to_metric(LINE.dmat, "max") == [list(r) for r in LINE.dmat]

    def test_quasimetric_triangle_violation(self):
        with pytest.raises(MetricError):
            quasimetric_to_metric([[0, 1, 9], [1, 0, 1], [1, 1, 0]])

    def test_quotient_merges_zero_classes(self):
        classes, dm = pseudometric_quotient([[0, 0, 2], [0, 0, 2], [2, 2, 0]])
        assert classes == [[0, 1], [2]]
        assert dm == [[0, 2], [2, 0]]

    @settings(max_examples=100)
    @given(st.integers(2, 6).flatmap(lambda n: st.lists(st.integers(1, 20), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2).map(lambda v: (n, v))))
    def test_pseudometric_bounds_and_triangle(self, data):
        n, vals = data
        ds = [[0] * n for _ in range(n)]
        for (i, j), v in zip(itertools.combinations(range(n), 2), vals):
            ds[i][j] = ds[j][i] = v
        out = semimetric_to_pseudometric(ds)
        oracle = floyd_warshall(np.array(ds, dtype=float), directed=False)
        assert np.allclose(np.array(out, dtype=float), oracle)
        for i, j, k in itertools.product(range(n), repeat=3):
            assert out[i][j] <= ds[i][j]
            assert out[i][j] <= out[i][k] + out[k][j]

    @given(integer_spaces(2, 5), st.integers(0, 3))
    def test_quasimetric_output_is_metric(self, X, bump):
        n = len(X)
        dq = [[X.dmat[i][j] + (bump if i < j else 0) for j in range(n)] for i in range(n)]
        for mode in ("max", "sum"):
            FiniteMetricSpace(list(range(n)), quasimetric_to_metric(dq, mode))

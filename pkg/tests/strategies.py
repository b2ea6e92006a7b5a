"""Hypothesis strategies for small finite metric spaces."""
import itertools

from hypothesis import strategies as st

from ghdist.metric import FiniteMetricSpace


@st.composite
def integer_spaces(draw, min_n=1, max_n=5):
    """Integer distances in [k, 2k]: always a metric."""
    n = draw(st.integers(min_n, max_n))
    k = draw(st.integers(1, 6))
    D = [[0] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        D[i][j] = D[j][i] = draw(st.integers(k, 2 * k))
    return FiniteMetricSpace(list(range(n)), D)


@st.composite
def line_spaces(draw, min_n=1, max_n=5, span=12):
    pos = draw(st.lists(st.integers(0, span), min_size=min_n, max_size=max_n, unique=True))
    return FiniteMetricSpace.line(sorted(pos))


@st.composite
def planar_spaces(draw, min_n=1, max_n=5):
    pts = draw(
        st.lists(
            st.tuples(st.integers(0, 20), st.integers(0, 20)), min_size=min_n, max_size=max_n, unique=True
        )
    )
    return FiniteMetricSpace.from_coords([(x / 4, y / 4) for x, y in pts])


def spaces(min_n=1, max_n=5):
    return st.one_of(integer_spaces(min_n, max_n), line_spaces(min_n, max_n), planar_spaces(min_n, max_n))


@st.composite
def subset_of(draw, space):
    n = len(space)
    members = draw(st.frozensets(st.integers(0, n - 1), min_size=1, max_size=n))
    return space.subset(members)


@st.composite
def space_with_sets(draw, count=2, min_n=1, max_n=5):
    X = draw(spaces(min_n, max_n))
    return (X, *[draw(subset_of(X)) for _ in range(count)])


@st.composite
def indexed_sets(draw, count=2, min_n=1, max_n=5, max_y=3, weighted=False):
    """A space and ``count`` maps from a shared index space into it."""
    from ghdist.integral import DiscreteMeasureSpace, IndexedSet

    X = draw(spaces(min_n, max_n))
    m = draw(st.integers(1, max_y))
    if weighted:
        Y = DiscreteMeasureSpace(tuple(range(m)), tuple(draw(st.integers(1, 4)) for _ in range(m)))
    else:
        Y = DiscreteMeasureSpace.counting(m)
    maps = [
        IndexedSet(X, Y, draw(st.lists(st.integers(0, len(X) - 1), min_size=m, max_size=m)))
        for _ in range(count)
    ]
    return (X, *maps)

from fractions import Fraction
from itertools import combinations

from hypothesis import given
from hypothesis import strategies as st

from cvxgeo.simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, find_feasible, solve_lp
from oracles import _solve

small = st.integers(-4, 4)


def dot(u, v):
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def test_simple_optimum():
    # min -x1 - x2  s.t.  x1 + 2 x2 + s1 = 4,  3 x1 + x2 + s2 = 6
    res = solve_lp([-1, -1, 0, 0], [[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6])
    assert res.status == OPTIMAL
    assert res.x[:2] == (Fraction(8, 5), Fraction(6, 5))
    assert res.value == Fraction(-14, 5)


def test_unbounded():
    res = solve_lp([-1, 0], [[1, -1]], [1])
    assert res.status == UNBOUNDED


def test_infeasible_certificate():
    A, b = [[1, 1], [1, 1]], [1, 2]
    res = find_feasible(A, b)
    assert res.status == INFEASIBLE and not res.feasible
    y = res.farkas
    assert dot(y, b) > 0
    assert all(dot(y, [row[j] for row in A]) <= 0 for j in range(2))


def test_negative_rhs_is_normalised():
    res = find_feasible([[-1, 0], [0, 1]], [-3, 2])
    assert res.feasible and res.x == (3, 2)


def _best_basic(c, A, b):
    """Minimum over basic feasible solutions (independent column sets of any size up to ``m``)."""
    m, n = len(A), len(c)
    best = Fraction(0) if all(v == 0 for v in b) else None
    for cols in (cols for k in range(1, m + 1) for cols in combinations(range(n), k)):
        sol = _solve([[Fraction(A[i][j]) for j in cols] for i in range(m)], [Fraction(v) for v in b])
        if sol is None or any(v < 0 for v in sol):
            continue
        val = dot([c[j] for j in cols], sol)
        best = val if best is None or val < best else best
    return best


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_matches_basic_solution_enumeration(m, n, data):
    A = [[data.draw(small) for _ in range(n)] for _ in range(m)]
    b = [data.draw(small) for _ in range(m)]
    c = [data.draw(small) for _ in range(n)]
    # a bounding row sum(x) + s = 10 keeps every instance bounded
    A2 = [row + [0] for row in A] + [[1] * n + [1]]
    b2 = b + [10]
    c2 = c + [0]
    res = solve_lp(c2, A2, b2)
    best = _best_basic(c2, A2, b2)
    if res.status == INFEASIBLE:
        assert best is None
        y = res.farkas
        assert dot(y, b2) > 0
        assert all(dot(y, [row[j] for row in A2]) <= 0 for j in range(n + 1))
    else:
        assert res.status == OPTIMAL
        assert res.value == best
        assert all(v >= 0 for v in res.x)
        assert all(dot(row, res.x) == rhs for row, rhs in zip(A2, b2))

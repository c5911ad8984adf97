import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slopekit import newton
from slopekit.linalg import IntegerMatrix, char_poly
from slopekit.newton import NewtonPolygon, count_slope, lower_hull, newton_polygon, slope_multiplicities
from slopekit.valuation import vp

from oracles import lower_envelope

PRIMES = st.sampled_from([2, 3, 5, 7])


def test_diag_example():
    P = newton_polygon(char_poly(IntegerMatrix.diag([1, 2, 4])), 2)
    assert P.vertices == ((0, 0), (1, 0), (2, 1), (3, 3))
    assert slope_multiplicities(P) == {0: 1, 1: 1, 2: 1}


def test_fractional_slope():
    # X^2 - 2: both roots have valuation 1/2
    P = newton_polygon([1, 0, -2], 2)
    assert slope_multiplicities(P) == {Fraction(1, 2): 2}
    assert count_slope(P, "1/2") == 2 and count_slope(P, 0) == 0


def test_kernel_multiplicity():
    P = newton_polygon([1, -3, 0, 0], 3)
    assert P.kernel_multiplicity == 2
    assert slope_multiplicities(P) == {1: 1}
    P = newton_polygon([1, 0, 0], 3)
    assert P.kernel_multiplicity == 2 and P.segments == ()


def test_collinear_points_dropped():
    assert lower_hull([(0, 0), (1, 1), (2, 2)]) == [(0, 0), (2, 2)]


def test_leading_zero_rejected():
    with pytest.raises(ValueError):
        newton_polygon([0, 1], 3)


def test_csv():
    P = newton_polygon([1, -6, 8], 2)
    assert P.points_csv() == "index,valuation\n0,0\n1,1\n2,3\n"
    assert P.vertices_csv().splitlines()[0] == "index,valuation"


def test_conservation_violation_detected():
    with pytest.raises(AssertionError):
        NewtonPolygon(points=((0, 0), (2, 1)), vertices=((0, 0), (2, 1)), degree=3, kernel_multiplicity=0)


def test_conservation_counter_increments():
    before = newton.conservation_checks
    newton_polygon([1, 2, 3], 3)
    assert newton.conservation_checks == before + 1


coeff_lists = st.lists(st.integers(-(10**12), 10**12), min_size=1, max_size=9).map(lambda c: [1] + c)


@settings(max_examples=300, deadline=None)
@given(coeff_lists, PRIMES)
def test_hull_matches_brute_force(coeffs, p):
    P = newton_polygon(coeffs, p)
    env = lower_envelope(list(P.points))
    for x, v in env.items():
        assert P.value_at(x) == v
    # every point lies on or above the polygon
    for x, y in P.points:
        assert P.value_at(x) <= y


@settings(max_examples=300, deadline=None)
@given(coeff_lists, PRIMES)
def test_slope_invariants(coeffs, p):
    P = newton_polygon(coeffs, p)
    slopes = [s for s, _ in P.segments]
    assert slopes == sorted(set(slopes))
    assert sum(slope_multiplicities(P).values()) + P.kernel_multiplicity == P.degree
    last = max(i for i, c in enumerate(coeffs) if c)
    assert sum(s * m for s, m in slope_multiplicities(P).items()) == vp(coeffs[last], p)


def test_triangular_oracle():
    rng = random.Random(4)
    for _ in range(50):
        p = rng.choice([2, 3, 5])
        t = rng.randint(1, 8)
        diag_v = [rng.randint(0, 6) for _ in range(t)]
        rows = [[0] * t for _ in range(t)]
        for i in range(t):
            unit = rng.choice([u for u in range(1, 3 * p) if u % p])
            rows[i][i] = p ** diag_v[i] * unit
            for j in range(i + 1, t):
                rows[i][j] = rng.randint(-(10**6), 10**6)
        P = newton_polygon(char_poly(IntegerMatrix.from_rows(rows)), p)
        assert Counter(slope_multiplicities(P)) == Counter(diag_v)

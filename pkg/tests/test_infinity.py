import random
from fractions import Fraction

import mpmath
import pytest

from pencils.infinity import (
    PointAtInfinity,
    Shear,
    admissible_shear,
    branches_at_infinity,
    critical_values_at_infinity,
    homogenize,
    local_germ,
    points_at_infinity,
)
from pencils.parser import parse_poly
from pencils.pencil import analyze
from pencils.puiseux import PreconditionError, local_order

from corpus import SUBMERSION_K1, SUBMERSION_K2, H_corpus, apply_linear, univariate_from_H
from oracle import match_sets_mp, numeric_critical_values

P = parse_poly
TIGHT = mpmath.mpf(10) ** -25


def test_homogenize():
    assert str(homogenize(P("x^2-2*x*y+y"))) == "X^2 - 2*X*Y + Y*Z"
    assert str(homogenize(P("x"))) == "X"
    F = homogenize(P("x^3+y+1"))
    assert str(F) == "X^3 + Y*Z^2 + Z^3"
    assert F.dehomogenize() == P("x^3+y+1")
    with pytest.raises(PreconditionError):
        homogenize(P("7"))


def test_univariate_polynomial_has_one_point():
    shear, points = points_at_infinity(P("x^3-3*x"))
    assert shear.name == "identity"
    assert points == [PointAtInfinity(0, 3, True)]


def test_shear_selection():
    assert admissible_shear(P("x^2-y^3"))[0].name == "swap x<->y"
    shear, g = admissible_shear(P("x*y-1"))
    assert shear.name == "y -> y + 1*x" and g == P("x^2+x*y-1")
    shear, points = points_at_infinity(P("x*y-1"))
    assert sorted((p.a, p.multiplicity) for p in points) == [(-1, 1), (0, 1)]


def test_multiplicities_add_up_to_the_degree():
    for text in ["x^4+y^4-1", "(x^2+1)*y^3-x", SUBMERSION_K2, "x^2*y^2+x+y"]:
        f = P(text)
        shear, points = points_at_infinity(f)
        assert sum(p.multiplicity for p in points) == f.total_degree
        for p in points:
            g = local_germ(f, p, shear)
            assert local_order(g) == p.multiplicity


def test_local_germs():
    assert local_germ(P("x^2"), PointAtInfinity(0, 2, True)) == P("x^2")
    assert local_germ(P("x*(x-2)"), PointAtInfinity(0, 2, True)) == P("x^2-2*x*y")


def test_irrational_points_are_numeric():
    _, points = points_at_infinity(P("x^2 - 2*y^2 + x"))
    assert all(not p.exact for p in points)
    assert sorted(float(mpmath.re(p.a)) for p in points) == pytest.approx([-2**0.5, 2**0.5])


def test_univariate_critical_values():
    rep = critical_values_at_infinity(P("x^3-3*x"))
    assert match_sets_mp(rep.critical_values, [2, -2], TIGHT)
    assert rep.branch_count == 3 and rep.bound_ok
    assert rep.zero_status == "undetermined"


@pytest.mark.parametrize("text", ["y^2-x^3", "y-x^2", "x", "x^5+y^2+x*y"])
def test_one_branch_at_infinity_has_no_critical_values(text):
    rep = critical_values_at_infinity(P(text))
    assert rep.branch_count == 1 and rep.critical_values == []


def test_submersion_with_four_values():
    rep = critical_values_at_infinity(P(SUBMERSION_K2))
    assert len(rep.critical_values) == 4 and rep.branch_count == 5
    assert match_sets_mp(rep.critical_values, [-2, 1, 2, 5], TIGHT)
    assert branches_at_infinity(P(SUBMERSION_K2)) == 5
    # odd k: 2k values still, the branch count is not pinned down
    rep = critical_values_at_infinity(P(SUBMERSION_K1))
    assert len(rep.critical_values) == 2 and rep.bound_ok


@pytest.mark.parametrize("k", range(5))
def test_univariate_family(k):
    coeffs = H_corpus(5, seed=9)[k]
    f = univariate_from_H(coeffs)
    expected = [v for v in numeric_critical_values(coeffs) if abs(v) > 1e-40]
    rep = critical_values_at_infinity(f)
    assert match_sets_mp(rep.critical_values, expected, TIGHT)
    assert rep.branch_count == len(coeffs) - 1


@pytest.mark.parametrize("text", ["x^3-3*x", SUBMERSION_K1, "x*y-1", "x^2*y-1"])
def test_invariance_under_linear_changes(text):
    f = P(text)
    base = critical_values_at_infinity(f)
    rng = random.Random(3)
    for _ in range(2):
        A = ((1, rng.choice((-2, -1, 1, 2))), (0, 1))
        moved = critical_values_at_infinity(apply_linear(f, A))
        assert moved.branch_count == base.branch_count
        assert match_sets_mp(moved.critical_values, base.critical_values, TIGHT)


def test_hyperbola_degenerates_only_at_zero():
    rep = critical_values_at_infinity(P("x*y-1"))
    assert rep.branch_count == 2 and rep.critical_values == []


def test_report_json():
    data = critical_values_at_infinity(P("x^3-3*x")).to_json()
    assert set(data) >= {"degree", "shear", "points", "critical_values_at_infinity", "branch_count", "bound_ok"}
    assert data["points"][0]["a"] == "0" and data["points"][0]["mult"] == 3

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pencils import config
from pencils.uni import RootFindingError, UniPoly, critical_values, root_clusters, uni_roots

from oracle import match_sets_mp

TOL = mpmath.mpf(10) ** -30


def poly(*coeffs):
    return UniPoly(list(coeffs))


def test_roots_with_multiplicity():
    roots = uni_roots(poly(0, 0, 0, -4, 1))
    assert sorted(round(float(r.real)) for r in roots) == [0, 0, 0, 4]


def test_roots_of_z2_plus_1():
    assert match_sets_mp(uni_roots(poly(1, 0, 1)), [1j, -1j], TOL)


def test_roots_of_cubic_from_tree_example():
    s3 = mpmath.sqrt(3)
    assert match_sets_mp(uni_roots(poly(0, 12, 0, -4)), [0, s3, -s3], TOL)


def test_clusters_recover_multiplicities():
    p = UniPoly.from_roots([2] * 3 + [-1] * 4 + [1j] * 2)
    clusters = dict((complex(r), m) for r, m in root_clusters(p))
    assert sorted(clusters.values()) == [2, 3, 4]
    assert all(abs(r - mpmath.mpc(2)) < TOL for r, m in root_clusters(p) if m == 3)


def test_full_multiplicity_cluster_is_exact():
    (r, m), = root_clusters(poly(1, -4, 6, -4, 1))
    assert m == 4 and abs(r - 1) < TOL


def test_critical_values_examples():
    assert match_sets_mp(critical_values(poly(0, 0, 0, -4, 1)), [0, -27], TOL)
    assert critical_values(poly(3, 2)) == []
    assert match_sets_mp(critical_values(poly(0, -2, 1)), [-1], TOL)


def test_root_finding_requires_degree():
    with pytest.raises(ValueError):
        root_clusters(poly(5))


def test_iteration_cap_reports_residuals():
    with pytest.raises(RootFindingError) as err:
        root_clusters(UniPoly.from_roots([1, 2, 3, 4, 5, 6]), maxiter=1)
    assert err.value.residuals


def test_precision_is_configurable():
    with config.configured(precision=80):
        r = uni_roots(poly(-2, 0, 1))
        assert mpmath.mp.prec == 80
    assert match_sets_mp(r, [mpmath.sqrt(2), -mpmath.sqrt(2)], mpmath.mpf(2) ** -35)


gauss = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).map(lambda t: complex(*t) / 2)


@settings(max_examples=60, deadline=None)
@given(st.lists(gauss, min_size=1, max_size=7))
def test_root_count_and_residuals(roots):
    p = UniPoly.from_roots(roots, lead=3)
    found = uni_roots(p)
    assert len(found) == p.degree
    tol = config.tolerance()
    for r in found:
        assert abs(p(r)) <= tol * p.magnitude_at(r) * 10 ** 6 or any(
            abs(r - q) < mpmath.mpf(10) ** -20 for q in roots
        )
    assert match_sets_mp(set(complex(r) for r in found), set(roots), mpmath.mpf(10) ** -12)


@settings(max_examples=40, deadline=None)
@given(st.lists(gauss, min_size=2, max_size=5, unique=True))
def test_simple_roots_are_polished_to_full_accuracy(roots):
    p = UniPoly.from_roots(roots)
    for r, m in root_clusters(p):
        assert m == 1
        assert min(abs(r - q) for q in roots) < mpmath.mpf(10) ** -30

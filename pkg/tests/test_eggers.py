import mpmath
import pytest

from pencils.eggers import (
    DivisibilityError,
    child_count_mismatches,
    compute_G,
    conjugate_F_relation_check,
    sibling_conjugacy_check,
    t_count,
)
from pencils.parser import parse_poly
from pencils.pencil import analyze
from pencils.uni import UniPoly

from corpus import FOUR_BRANCHES, TWO_CUSPS, branch_corpus

CONJUGATE_BALLS = "(x^2-y^3)^2-4*x*y^5-y^7"


def test_example_classes_are_singletons():
    eg = analyze(parse_poly(FOUR_BRANCHES)).eggers
    assert all(len(c.members) == 1 for c in eg.classes)
    assert eg.leaf_count == 4
    finite = [c for c in eg.classes if c.finite]
    assert [(c.n, c.t) for c in finite] == [(1, 2), (1, 3)]


def test_cusp_class():
    eg = analyze(parse_poly("x^2-y^3")).eggers
    (c,) = [c for c in eg.classes if c.finite]
    assert (c.N, c.n, c.t) == (1, 2, 1)
    assert c.G.degree == 1 and abs(c.G.coeffs[0] + 1) < 1e-60 and abs(c.G.coeffs[1] - 1) < 1e-60
    assert eg.leaf_count == 1


def test_two_cusps_share_one_ball():
    eg = analyze(parse_poly(TWO_CUSPS)).eggers
    finite = [c for c in eg.classes if c.finite]
    assert len(finite) == 1 and finite[0].t == 2
    assert eg.leaf_count == 2


def test_conjugate_balls_form_one_class():
    an = analyze(parse_poly(CONJUGATE_BALLS))
    eg = an.eggers
    top = [c for c in eg.classes if c.finite and len(c.members) == 2]
    assert len(top) == 1 and top[0].n == 2 and top[0].G is None
    assert eg.leaf_count == 1
    assert conjugate_F_relation_check(eg, top[0].index).get("skipped")


def test_compute_G():
    F = UniPoly([0, 0, -2, 0, 1])
    G = compute_G(F, 2)
    assert [complex(c) for c in G.coeffs] == [0, -2, 1]
    assert compute_G(F, 1) is F
    with pytest.raises(DivisibilityError):
        compute_G(UniPoly([1, 1, 1]), 2)


def test_t_count():
    assert t_count(UniPoly.from_roots([0, 0, 0, 4])) == 2
    assert t_count(UniPoly([5])) == 0


def test_relation_check_is_vacuous_for_singletons():
    eg = analyze(parse_poly("x^2-y^3")).eggers
    assert all(conjugate_F_relation_check(eg, c.index)["ok"] for c in eg.classes)


def test_conjugate_F_relation_for_integer_q():
    # two conjugate height-5/2 balls inside the branch x^2 = y^3 + ...; q is an integer there
    f = parse_poly("(x^2-y^3)^2 - 4*y^8")
    eg = analyze(f).eggers
    multi = [c for c in eg.classes if c.finite and len(c.members) > 1]
    for c in multi:
        report = conjugate_F_relation_check(eg, c.index)
        assert report["ok"], report


@pytest.mark.parametrize("k", range(15))
def test_class_properties_on_random_products(k):
    f, parts = branch_corpus(15, seed=11)[k]
    an = analyze(f)
    eg = an.eggers
    tree = an.tree
    assert eg.leaf_count == len({a.cycle for a in an.alphas}) == len(parts)
    for c in eg.classes:
        nodes = [tree.nodes[i] for i in c.members]
        assert len({b.height for b in nodes}) == 1
        assert len({b.q for b in nodes}) == 1
    assert not sibling_conjugacy_check(eg)
    assert not child_count_mismatches(eg)
    for c in eg.classes:
        assert conjugate_F_relation_check(eg, c.index)["ok"]

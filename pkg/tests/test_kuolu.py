import random
from fractions import Fraction

import mpmath
import pytest
import sympy

from pencils.kuolu import (
    TreeError,
    build_tree,
    compute_FB,
    initial_polynomial,
    q_monotonicity_violations,
    verify_derivative_lemma,
)
from pencils.parser import parse_poly
from pencils.pencil import analyze
from pencils.series import INF, FractionalPowerSeries, contact_order, leading_eval
from pencils.uni import UniPoly

from corpus import FOUR_BRANCHES, branch_corpus
from oracle import initial_form

y = sympy.Symbol("y")
TOL = mpmath.mpf(10) ** -30


def close_poly(F, coeffs, tol=TOL):
    target = UniPoly(coeffs)
    return F.degree == target.degree and (F - target).coefficient_scale() <= tol


def exact(*terms):
    return FractionalPowerSeries(tuple((Fraction(e), mpmath.mpc(c)) for e, c in terms), INF)


def test_example_tree_structure():
    an = analyze(parse_poly(FOUR_BRANCHES))
    finite = an.tree.finite_nodes
    assert [(b.height, len(b.members)) for b in finite] == [(2, 4), (3, 3)]
    assert len(an.tree.leaves) == 4
    assert finite[1].parent == finite[0].index


def test_example_F_B_and_q():
    an = analyze(parse_poly(FOUR_BRANCHES))
    b1, b2 = an.tree.finite_nodes
    assert close_poly(b1.F, [0, 0, 0, -4, 1]) and b1.q == 8
    assert close_poly(b2.F, [0, 12, 0, -4]) and b2.q == 11


def test_F_B_against_symbolic_expansion():
    for text in [FOUR_BRANCHES, "x^2-y^3", "(x^2-y^3)*(x^2-4*y^3)", "x^2-y^2"]:
        an = analyze(parse_poly(text))
        for b in an.tree.finite_nodes:
            stem = sum(complex(c) * y**sympy.Rational(e.numerator, e.denominator)
                       for e, c in b.stem.terms) if b.stem.terms else 0
            F, q = initial_form(text, stem, b.height)
            assert q == b.q
            expected = [complex(c) for c in reversed(F.all_coeffs())]
            assert close_poly(b.F, expected, mpmath.mpf(10) ** -12)


def test_tree_of_three_lines():
    tree = build_tree([exact(), exact((1, 1)), exact((1, 2))])
    (root,) = tree.finite_nodes
    assert root.height == 1 and len(root.children) == 3


def test_single_root_tree_is_a_leaf():
    tree = build_tree([exact((1, 5))])
    assert len(tree.nodes) == 1 and not tree.nodes[0].finite


def test_unseparated_roots_are_rejected():
    a = FractionalPowerSeries(((Fraction(1), mpmath.mpc(1)),), Fraction(2))
    b = FractionalPowerSeries(((Fraction(1), mpmath.mpc(1)),), Fraction(3))
    with pytest.raises(TreeError):
        build_tree([a, b])


def test_two_lines_node():
    an = analyze(parse_poly("x^2 - y^2"))
    (b,) = an.tree.finite_nodes
    assert b.height == 1 and b.q == 2 and close_poly(b.F, [-1, 0, 1])
    (p,) = an.placements
    assert p.node == b.index and abs(p.lc) < TOL


def test_example_derivative_root_placement():
    an = analyze(parse_poly(FOUR_BRANCHES))
    b1, b2 = an.tree.finite_nodes
    where = sorted((p.node, round(float(p.lc.real), 20)) for p in an.placements)
    assert where == [(b1.index, 3.0), (b2.index, -1.0), (b2.index, 1.0)]


def test_example_derivative_lemma():
    an = analyze(parse_poly(FOUR_BRANCHES))
    report = verify_derivative_lemma(an.tree, an.betas, an.repeated)
    assert all(r["ok"] for r in report)
    by_height = {r["height"]: sorted(round(float(v.real), 12) for v in r["expected"]) for r in report}
    assert by_height == {2: [0.0, 0.0, 3.0], 3: [-1.0, 1.0]}


def test_initial_polynomial_cross_check():
    f = parse_poly(FOUR_BRANCHES)
    F, q = initial_polynomial(f, exact(), Fraction(3))
    assert q == 11 and close_poly(F, [0, 12, 0, -4])


def test_repeated_roots_sit_on_their_leaf():
    an = analyze(parse_poly("(x-y)^2*(x+y)"))
    repeated = [p for p in an.placements if p.repeated]
    assert len(repeated) == 1
    assert not an.tree.nodes[repeated[0].node].finite
    assert all(r["ok"] for r in verify_derivative_lemma(an.tree, an.betas, an.repeated))


@pytest.mark.parametrize("k", range(15))
def test_tree_invariants_on_random_products(k):
    f, _ = branch_corpus(15, seed=11)[k]
    an = analyze(f)
    tree = an.tree
    assert not q_monotonicity_violations(tree)
    assert all(r["ok"] for r in verify_derivative_lemma(tree, an.betas, an.repeated))
    rng = random.Random(k)
    for b in tree.finite_nodes:
        # heights increase and deg F_B counts members with multiplicity
        for c in b.children:
            assert tree.nodes[c].height > b.height
        assert b.F.degree == tree.multiplicity(b.index)
        # stems and members
        for i in b.members:
            assert contact_order(tree.roots[i], b.stem) >= b.height
        # spot check of the defining expansion at random z
        for _ in range(3):
            z = mpmath.mpc(rng.uniform(-2, 2), rng.uniform(-2, 2))
            value = b.F(z)
            if abs(value) < 1e-6:
                continue
            lead = leading_eval(f, b.stem.plus_term(b.height, z))
            assert lead.exponent == b.q
            assert abs(lead.coefficient - value) <= mpmath.mpf(10) ** -30 * max(1, abs(value))
    # placements: F_B(lc) != 0 and F_B'(lc) = 0, with the witnessing pair of roots
    for p in an.placements:
        if p.repeated:
            continue
        b = tree.nodes[p.node]
        assert abs(b.F(p.lc)) > 1e-20
        dF = b.F.derivative()
        assert abs(dF(p.lc)) <= mpmath.mpf(10) ** -30 * max(1, dF.magnitude_at(p.lc))
        beta = an.betas[p.beta_index]
        orders = {i: contact_order(beta, tree.roots[i]) for i in b.members}
        pairs = [(i, j) for i in b.members for j in b.members if i < j
                 and orders[i] == orders[j] == contact_order(tree.roots[i], tree.roots[j]) == b.height]
        assert pairs

"""Acceptance criteria, one check per criterion.

Each check returns ``(ok, detail)``; the pytest wrappers print one
PASS/FAIL line per criterion and then assert.  Run the file directly
(``python tests/test_acceptance.py``) to get just the summary lines.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pencils import config  # noqa: E402
from pencils.infinity import branches_at_infinity, critical_values_at_infinity  # noqa: E402
from pencils.kuolu import q_monotonicity_violations, verify_derivative_lemma  # noqa: E402
from pencils.parser import parse_poly  # noqa: E402
from pencils.pencil import (  # noqa: E402
    NoWitnessError,
    bound_check,
    certify_special_value,
    pencil_analysis,
    special_values,
    special_values_all_M,
)
from pencils.uni import UniPoly  # noqa: E402

from corpus import (  # noqa: E402
    FOUR_BRANCHES,
    TWO_CUSPS,
    SUBMERSION_K1,
    SUBMERSION_K2,
    H_corpus,
    apply_linear,
    branch_corpus,
    homogeneous_from_H,
    random_unimodular,
    univariate_from_H,
)
from oracle import match_sets_mp, numeric_critical_values  # noqa: E402

P = parse_poly


def tol(exp):
    return mpmath.mpf(10) ** -exp


def nonzero(values):
    return [v for v in values if abs(v) > tol(40)]


def poly_close(F, coeffs, eps):
    target = UniPoly(coeffs)
    return F.degree == target.degree and (F - target).coefficient_scale() <= eps


def criterion_1():
    start = time.perf_counter()
    an = pencil_analysis(P(FOUR_BRANCHES))
    nodes = an.tree.finite_nodes
    shape = (len(nodes) == 2
             and nodes[0].height == 2 and poly_close(nodes[0].F, [0, 0, 0, -4, 1], tol(30))
             and nodes[1].height == 3 and poly_close(nodes[1].F, [0, 12, 0, -4], tol(30)))
    qs = [b.q for b in nodes] == [8, 11]
    spectrum, other = special_values_all_M(an)
    values = (sorted(spectrum) == [8, 11] and not other
              and match_sets_mp(spectrum[8].values, [-27], tol(30))
              and match_sets_mp(spectrum[11].values, [8, -8], tol(30))
              and all(not special_values(an, M).values for M in range(1, 16) if M not in (8, 11)))
    elapsed = time.perf_counter() - start
    ok = shape and qs and values and elapsed < 5
    return ok, f"tree={shape} q={qs} values={values} in {elapsed:.2f}s (< 5s)"


def criterion_2():
    start = time.perf_counter()
    bad = []
    for k, (f, _) in enumerate(branch_corpus(50)):
        an = pencil_analysis(f)
        report = verify_derivative_lemma(an.tree, an.betas, an.repeated, tol=tol(20))
        if not all(r["ok"] for r in report):
            bad.append(k)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    return ok, f"{50 - len(bad)}/50 corpus entries match at every node in {elapsed:.1f}s (< 120s)"


def criterion_3():
    bad = []
    rows = 0
    for k, (f, _) in enumerate(branch_corpus(50)):
        report = bound_check(pencil_analysis(f))
        rows += len(report["rows"])
        if not all(len_ok(r) for r in report["rows"]):
            bad.append(k)
    rep = special_values(P(TWO_CUSPS), 6)
    sharp = match_sets_mp(rep.values, [4, -2.25], tol(30)) and rep.d == 2 and rep.claim1_sum == 2
    ok = not bad and sharp
    return ok, f"chain holds for {rows} (f, M) rows, violations {bad}; two cusps give 2 = d values: {sharp}"


def len_ok(row):
    return row["values"] <= row["claim1"] <= row["d"]


def criterion_4():
    bad = []
    corpus = H_corpus(20)
    for k, coeffs in enumerate(corpus):
        f = homogeneous_from_H(coeffs)
        got = special_values(f, len(coeffs) - 1).values
        if not match_sets_mp(got, nonzero(numeric_critical_values(coeffs)), tol(20)):
            bad.append(k)
    return not bad, f"{len(corpus) - len(bad)}/{len(corpus)} of y^d H(x/y) match the critical values of H"


def criterion_5():
    trees = [pencil_analysis(f).tree for f, _ in branch_corpus(50)]
    trees += [pencil_analysis(P(t)).tree for t in (FOUR_BRANCHES, TWO_CUSPS, "(x^2-y^3)^2-4*x*y^5-y^7")]
    trees += [pencil_analysis(homogeneous_from_H(c)).tree for c in H_corpus(20)]
    violations = sum(len(q_monotonicity_violations(t)) for t in trees)
    return violations == 0, f"{violations} violations over {len(trees)} trees"


def criterion_6():
    start = time.perf_counter()
    bad = []
    family = H_corpus(10, seed=16, degrees=(2, 5))
    for coeffs in family:
        rep = critical_values_at_infinity(univariate_from_H(coeffs))
        if not match_sets_mp(rep.critical_values, nonzero(numeric_critical_values(coeffs)), tol(20)):
            bad.append(coeffs)
    submersion = critical_values_at_infinity(P(SUBMERSION_K2))
    b = submersion.branch_count == 5 and len(submersion.critical_values) == 4 and submersion.bound_ok
    cusp = critical_values_at_infinity(P("y^2-x^3"))
    c = cusp.branch_count == 1 and not cusp.critical_values and branches_at_infinity(P("y^2-x^3")) == 1
    elapsed = time.perf_counter() - start
    ok = not bad and b and c and elapsed < 60
    return ok, (f"(a) {len(family) - len(bad)}/{len(family)} H(x) (b) {len(submersion.critical_values)} values, "
                f"{submersion.branch_count} branches (c) {cusp.branch_count} branch, "
                f"{len(cusp.critical_values)} values; {elapsed:.1f}s (< 60s)")


def _closure(an, rng, decoys):
    """Every value certified; no decoy certified."""
    spectrum, _ = special_values_all_M(an)
    for M, rep in spectrum.items():
        for t0 in rep.values:
            try:
                _, _, lead = certify_special_value(an, M, t0)
            except NoWitnessError:
                return False
            if lead.exponent != M:
                return False
    for _ in range(decoys):
        if not spectrum:
            break
        M = rng.choice(sorted(spectrum))
        t0 = mpmath.mpc(rng.randint(-30, 30), rng.randint(-3, 3)) / rng.choice((1, 2, 3, 7))
        if any(abs(t0 - v) < tol(10) for v in spectrum[M].values):
            continue
        try:
            certify_special_value(an, M, t0)
            return False
        except NoWitnessError:
            pass
    return True


def criterion_7():
    rng = random.Random(7)
    germs = [P(FOUR_BRANCHES), P(TWO_CUSPS)] + [f for f, _ in branch_corpus(50)]
    germs += [homogeneous_from_H(c) for c in H_corpus(20)]
    bad = [k for k, f in enumerate(germs) if not _closure(pencil_analysis(f), rng, 10)]
    return not bad, f"{len(germs) - len(bad)}/{len(germs)} germs closed under certification with 10 decoys each"


def criterion_8():
    rng = random.Random(8)
    cases = [(FOUR_BRANCHES, 8), (FOUR_BRANCHES, 11), (TWO_CUSPS, 6)]
    bad = []
    for k in range(10):
        A = random_unimodular(rng)
        text, M = cases[k % len(cases)]
        f = P(text)
        before = special_values(f, M).values
        after = special_values(apply_linear(f, A), M, l=apply_linear(P("y"), A)).values
        if not match_sets_mp(after, before, tol(18)):
            bad.append(("special", text, A))
    for k, text in enumerate(["x^3-3*x", SUBMERSION_K1, "x^2*y-x"]):
        base = critical_values_at_infinity(P(text))
        for _ in range(2):
            A = random_unimodular(rng)
            moved = critical_values_at_infinity(apply_linear(P(text), A))
            if moved.branch_count != base.branch_count or not match_sets_mp(
                    moved.critical_values, base.critical_values, tol(18)):
                bad.append(("crit-inf", text, A))
    return not bad, f"10 special-value changes and 6 crit-inf changes, mismatches {bad}"


CRITERIA = [
    (1, "four-branch germ: tree, q and special values", criterion_1),
    (2, "derivative lemma on 50 random products", criterion_2),
    (3, "special value bound and its sharpness", criterion_3),
    (4, "homogeneous family against critical values of H", criterion_4),
    (5, "q strictly increases along chains", criterion_5),
    (6, "critical values and branches at infinity", criterion_6),
    (7, "certification closure with decoys", criterion_7),
    (8, "invariance under unimodular changes", criterion_8),
]


def _report(number, title, check):
    with config.configured(config.RunConfig()):
        start = time.perf_counter()
        ok, detail = check()
        elapsed = time.perf_counter() - start
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}: {detail} [{elapsed:.1f}s]"
    return ok, line


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check, capsys):
    ok, line = _report(number, title, check)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    mpmath.mp.prec = config.DEFAULT_PRECISION
    results = [_report(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)

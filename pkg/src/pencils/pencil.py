"""Special values of pencils ``f - t*l**M`` with ``l = 0`` smooth.

After a coordinate change taking ``l`` to ``y``, the nonzero special values
for a given ``M`` are the nonzero critical values of ``F_B`` over the
finite-height nodes ``B`` of the Kuo-Lu tree with ``q(B) = M``.  Each value
is certified independently by a root ``beta`` of ``f_x'`` with
``f(beta(y), y) = t0 * y**M + ...``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import config
from .eggers import EggersTree, conjugacy_classes, nonzero_critical_values
from .kuolu import KuoLuTree, annotate, build_tree, place_derivative_roots
from .poly import BivarPoly, X, Y, gcd
from .puiseux import PreconditionError, RootSystem, expand_germ, local_order
from .series import INF, TruncationError, contact_order, leading_eval
from .uni import cluster_values, to_mpc

__all__ = [
    "GermAnalysis",
    "SpecialValuesReport",
    "NoWitnessError",
    "analyze",
    "pencil_analysis",
    "normalize_l",
    "special_values",
    "special_values_all_M",
    "certify_special_value",
    "bound_check",
    "zero_special_value_irreducible",
    "beta_values",
    "certificate_crosscheck",
]


class NoWitnessError(ArithmeticError):
    """No root of ``f_x'`` realizes the claimed special value."""


VALUE_TOL = mpmath.mpf(10) ** -20


def _close(a, b, tol=VALUE_TOL):
    return abs(a - b) <= tol * max(1, abs(a), abs(b))


@dataclass
class GermAnalysis:
    """Roots, annotated Kuo-Lu tree and Eggers tree of ``f`` at ``(center, 0)``."""

    f: BivarPoly
    center: object
    system: RootSystem
    tree: KuoLuTree
    eggers: EggersTree
    repeated: tuple = ()

    @property
    def alphas(self):
        return self.tree.roots

    @property
    def betas(self):
        return self.system.roots("fx")

    @property
    def placements(self):
        return self.tree.placements

    @property
    def d(self):
        return self.eggers.leaf_count

    @property
    def polar_invariants(self):
        return sorted({b.q for b in self.tree.finite_nodes})

    def nodes_with_q(self, M):
        return [b for b in self.tree.finite_nodes if b.q == M]

    def refresh_beta(self, j):
        """Re-expand the factor of beta ``j`` to a higher order; returns the new series or None."""
        old = self.betas[j]
        if not self.system.refine_factor(old.factor):
            return None
        for b in self.betas:
            if b.factor == old.factor:
                try:
                    if contact_order(b, old) >= old.trunc:
                        return b
                except TruncationError:
                    return b
        return None


@config.precise
def _analyze(f, center, max_order):
    p = local_order(f, center)
    if p is None:
        raise PreconditionError("y divides f (f(x, 0) = 0); apply a coordinate change first")
    if p == 0:
        raise PreconditionError("f does not vanish at the base point")
    system = expand_germ(f, center, max_order)
    alphas = system.roots("f")
    tree = annotate(build_tree(alphas), f, center)
    repeated = tuple((i, a.mult - 1) for i, a in enumerate(alphas) if a.mult > 1)
    placements = place_derivative_roots(tree, system.roots("fx"), repeated)
    from dataclasses import replace

    tree = replace(tree, placements=tuple(placements))
    return GermAnalysis(f, center, system, tree, conjugacy_classes(tree), repeated)


@functools.lru_cache(maxsize=64)
def _analyze_cached(f, center_key, center, max_order, cfg):
    with config.configured(cfg):
        return _analyze(f, center, max_order)


def analyze(f, center=0, max_order=None) -> GermAnalysis:
    """Full local analysis of ``f`` at ``(center, 0)`` (cached per configuration)."""
    if isinstance(f, GermAnalysis):
        return f
    key = (str(to_mpc(center)) if center != 0 else "0")
    return _analyze_cached(f, key, center, max_order, config.current())


# -- coordinate normalization --------------------------------------------------


def _lowest_order(f):
    return min((i + j for i, j in f.terms), default=None)


def normalize_l(f: BivarPoly, l: BivarPoly, order_cap=None) -> BivarPoly:
    """``f o Phi`` for a local diffeomorphism ``Phi`` with ``l o Phi = y``.

    A linear ``l`` gives an exact linear change; otherwise ``y' = l(x, y)``
    is inverted as a power series up to total degree ``order_cap`` and the
    result is truncated there.
    """
    if l.coeff(0, 0) != 0:
        raise PreconditionError("l must vanish at the origin")
    a, b = l.coeff(1, 0), l.coeff(0, 1)
    if a == 0 and b == 0:
        raise PreconditionError("l = 0 is not smooth at the origin")
    if b == 0:
        f, l = f.swap(), l.swap()
        a, b = b, a
    if l.total_degree == 1:
        return f.compose(X, (Y - X * a) / b)
    if order_cap is None:
        raise ValueError("a nonlinear l needs an order_cap")
    cap = int(order_cap)
    psi = Y / b
    rest = l - X * a - Y * b
    for _ in range(cap + 1):
        nxt = ((Y - X * a - rest.compose(X, psi, truncate=cap)) / b).truncate_total(cap)
        if nxt == psi:
            break
        psi = nxt
    return f.compose(X, psi, truncate=cap)


def _min_root_order(an):
    orders = [a.terms[0][0] for a in an.alphas if a.terms]
    return min(orders, default=Fraction(1))


def pencil_analysis(f, l=None, M=None, max_order=None):
    """Analysis of the pencil germ after moving ``l`` to ``y``."""
    if l is None or l == Y:
        return analyze(f, 0, max_order)
    if l.total_degree == 1 or (l.coeff(1, 0) == 0 and l.coeff(0, 1) == 0):
        return analyze(normalize_l(f, l), 0, max_order)
    cap = 2 * max(f.total_degree, 2) + 2 * (M or 0)
    previous = None
    for _ in range(8):
        g = normalize_l(f, l, cap)
        an = analyze(g, 0, max_order)
        need = max([b.q for b in an.tree.finite_nodes] + [Fraction(M or 0)])
        reach = cap * min(Fraction(1), _min_root_order(an))
        spectrum = [(b.height, b.q) for b in an.tree.finite_nodes]
        if reach > need and spectrum == previous:
            return an
        previous = spectrum
        cap *= 2
    raise PreconditionError("order_cap escalation did not stabilize")


# -- special values --------------------------------------------------------------


@dataclass
class SpecialValuesReport:
    M: int
    values: list
    per_node: dict
    d: int
    claim1_sum: int
    certificates: list = field(default_factory=list)
    zero_status: object = "unknown"

    @property
    def bound_ok(self):
        return len(self.values) <= self.claim1_sum <= self.d

    def to_json(self):
        from .export import complex_json, rational_json

        return {
            "M": self.M,
            "values": [complex_json(v) for v in self.values],
            "bound": {"d": self.d, "claim1": self.claim1_sum, "ok": self.bound_ok},
            "certificates": [
                {"value": complex_json(t), "beta": j, "exponent": rational_json(e)}
                for t, j, e in self.certificates
            ],
            "zero_status": self.zero_status,
        }


def _class_sum(an, M):
    return sum(c.t or 0 for c in an.eggers.classes_with_q(M))


@config.precise
def _certificate(an, j, t0, M):
    beta = an.betas[j]
    for _ in range(4):
        try:
            lead = leading_eval(an.f, beta, an.center)
            break
        except TruncationError:
            beta = an.refresh_beta(j)
            if beta is None:
                return None
    else:
        return None
    if lead.exponent == M and _close(lead.coefficient, t0):
        return (lead.coefficient, lead.exponent)
    return None


@config.precise
def special_values(f, M: int, l=None, certify=True, max_order=None) -> SpecialValuesReport:
    """Nonzero special values of ``f - t*l**M`` (``l = y`` by default)."""
    an = f if isinstance(f, GermAnalysis) else pencil_analysis(f, l, M, max_order)
    M = int(M)
    per_node = {}
    seen = set()
    for b in an.nodes_with_q(M):
        cls = an.eggers.class_of[b.index]
        if cls in seen:
            continue
        seen.add(cls)
        per_node[b.index] = nonzero_critical_values(b.F)
    values = cluster_values([v for vs in per_node.values() for v in vs], VALUE_TOL)
    certificates = []
    if certify:
        for t0 in values:
            for pl in an.placements:
                if pl.repeated or an.tree.nodes[pl.node].q != M:
                    continue
                F = an.tree.nodes[pl.node].F
                if not _close(F(pl.lc), t0):
                    continue
                cert = _certificate(an, pl.beta_index, t0, M)
                if cert is not None:
                    certificates.append((t0, pl.beta_index, cert[1]))
                    break
    zero = "unknown"
    if len({a.cycle for a in an.alphas}) == 1:
        zero = any(b.q > M for b in an.tree.finite_nodes)
    return SpecialValuesReport(M, values, per_node, an.d, _class_sum(an, M), certificates, zero)


@config.precise
def special_values_all_M(f, l=None, max_order=None):
    """``({M: report}, non_integer_q)`` over the integer polar invariants."""
    an = f if isinstance(f, GermAnalysis) else pencil_analysis(f, l, None, max_order)
    out = {}
    other = []
    for q in an.polar_invariants:
        if Fraction(q).denominator == 1:
            out[int(q)] = special_values(an, int(q))
        else:
            other.append(q)
    return out, other


@config.precise
def certify_special_value(f, M: int, t0, l=None, max_order=None, tol=VALUE_TOL):
    """A root ``beta`` of ``f_x'`` with ``f(beta(y), y) = t0*y**M + ...``.

    Returns ``(beta_index, beta, leading_term)``; raises :class:`NoWitnessError`.
    """
    an = f if isinstance(f, GermAnalysis) else pencil_analysis(f, l, M, max_order)
    t0 = to_mpc(t0)
    for j in range(len(an.betas)):
        beta = an.betas[j]
        lead = None
        for _ in range(4):
            try:
                lead = leading_eval(an.f, beta, an.center)
                break
            except TruncationError:
                beta = an.refresh_beta(j)
                if beta is None:
                    break
        if lead is None:
            continue
        if lead.exponent == M and abs(lead.coefficient - t0) <= tol * max(1, abs(t0)):
            return j, beta, lead
    raise NoWitnessError(f"{mpmath.nstr(t0, 15)} is not a special value for M = {M}")


@config.precise
def bound_check(f, l=None, max_order=None):
    """Per integer ``M``: ``|values| <= sum_{E_M} t([B]) <= d`` plus the leaf audit of ``E'``."""
    an = f if isinstance(f, GermAnalysis) else pencil_analysis(f, l, None, max_order)
    eg = an.eggers
    rows = []
    for q in an.polar_invariants:
        if Fraction(q).denominator != 1:
            continue
        M = int(q)
        rep = special_values(an, M, certify=False)
        em = [c.index for c in eg.classes_with_q(M)]
        ancestors = set()
        for k in em:
            p = eg.classes[k].parent
            while p is not None:
                ancestors.add(p)
                p = eg.classes[p].parent
        antichain = not (ancestors & set(em))
        children = {c for k in em for c in eg.classes[k].children}
        sub = set(em) | children | ancestors
        sub_leaves = {k for k in sub if not (set(eg.classes[k].children) & sub)}
        per_class = []
        corollary_ok = True
        for k in em:
            c = eg.classes[k]
            F = an.tree.nodes[c.members[0]].F
            count = len(nonzero_critical_values(F))
            per_class.append({"class": k, "t": c.t, "nonzero_critical_values": count})
            corollary_ok = corollary_ok and count <= c.t
        rows.append({
            "M": M,
            "values": len(rep.values),
            "claim1": rep.claim1_sum,
            "d": an.d,
            "antichain": antichain,
            "leaf_audit": sub_leaves == children,
            "corollary": corollary_ok,
            "classes": per_class,
            "ok": rep.bound_ok and antichain and sub_leaves == children and corollary_ok,
        })
    return {"d": an.d, "rows": rows, "ok": all(r["ok"] for r in rows)}


def zero_special_value_irreducible(f, M: int, l=None, max_order=None) -> bool:
    """For an irreducible germ: is ``t = 0`` special (some ``q(B) > M``)?"""
    an = f if isinstance(f, GermAnalysis) else pencil_analysis(f, l, M, max_order)
    if len({a.cycle for a in an.alphas}) != 1:
        raise PreconditionError("f is reducible as a germ")
    return any(b.q > M for b in an.tree.finite_nodes)


@config.precise
def beta_values(f, l=None, max_order=None):
    """``[(beta_index, LeadingTerm or None)]``: ``f(beta(y), y)`` for every root of ``f_x'`` off ``f``."""
    an = f if isinstance(f, GermAnalysis) else pencil_analysis(f, l, None, max_order)
    out = []
    for j in range(len(an.betas)):
        beta, lead = an.betas[j], None
        for _ in range(4):
            try:
                lead = leading_eval(an.f, beta, an.center)
                break
            except TruncationError:
                beta = an.refresh_beta(j)
                if beta is None:
                    break
        out.append((j, lead))
    return out


@config.precise
def certificate_crosscheck(f, l=None, max_order=None):
    """Tree-side special values against the values ``f(beta)`` realizes, in both directions.

    Every reported value must have a witness, and every nonzero leading
    term ``t0 * y**M`` of some ``f(beta)`` with integer ``M`` must be reported
    for that ``M``.
    """
    an = f if isinstance(f, GermAnalysis) else pencil_analysis(f, l, None, max_order)
    reports, _ = special_values_all_M(an)
    missing_witness = [(M, t) for M, r in reports.items() for t in r.values
                       if not any(_close(t, c[0]) for c in r.certificates)]
    unreported = []
    undecided = []
    for j, lead in beta_values(an):
        if lead is None:
            undecided.append(j)
            continue
        if lead.is_zero or Fraction(lead.exponent).denominator != 1:
            continue
        M = int(lead.exponent)
        values = reports[M].values if M in reports else special_values(an, M, certify=False).values
        if not any(_close(lead.coefficient, t) for t in values):
            unreported.append((j, M, lead.coefficient))
    return {
        "missing_witness": missing_witness,
        "unreported": unreported,
        "undecided": undecided,
        "ok": not missing_witness and not unreported and not undecided,
    }

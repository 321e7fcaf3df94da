"""Kuo-Lu tree model of a plane curve germ.

The nodes are the pseudo-balls ``B(alpha_i, O(alpha_i, alpha_j))`` built from
the Newton-Puiseux roots of ``f``; each finite-height node carries the
polynomial ``F_B`` and exponent ``q(B)`` read off from the lowest-order term
of ``f(lambda_B(y) + z*y**h(B), y)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction

import mpmath

from . import config
from .series import (
    INF,
    FractionalPowerSeries,
    TaylorTable,
    TruncationError,
    coefficients_close,
    contact_order,
    leading_eval,
)
from .uni import UniPoly, root_clusters, snap_axes

__all__ = [
    "PseudoBall",
    "KuoLuTree",
    "DerivativeRootPlacement",
    "TreeError",
    "build_tree",
    "compute_FB",
    "initial_polynomial",
    "annotate",
    "place_derivative_roots",
    "verify_derivative_lemma",
    "q_monotonicity_violations",
]


class TreeError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PseudoBall:
    """A node of the tree; ``stem`` is ``lambda_B`` and ``support`` the ``c`` with parent ``_|_c`` self."""

    index: int
    height: object
    stem: FractionalPowerSeries
    members: tuple
    parent: int | None = None
    children: tuple = ()
    support: object = None
    F: UniPoly | None = None
    q: object = None

    @property
    def finite(self):
        return self.height != INF


@dataclass(frozen=True)
class DerivativeRootPlacement:
    beta_index: int
    node: int
    lc: object
    repeated: bool = False


@dataclass(frozen=True)
class KuoLuTree:
    nodes: tuple
    roots: tuple
    root: int = 0
    placements: tuple = ()

    def node(self, i) -> PseudoBall:
        return self.nodes[i]

    @property
    def finite_nodes(self):
        return [b for b in self.nodes if b.finite]

    @property
    def leaves(self):
        return [b for b in self.nodes if not b.children]

    def multiplicity(self, node):
        return sum(self.roots[i].mult for i in self.nodes[node].members)

    def lc(self, node, series):
        """``lc_B(series)``: its coefficient of ``y**h(B)``."""
        return series.coefficient(self.nodes[node].height)

    def path_to(self, node):
        out = [node]
        while self.nodes[out[-1]].parent is not None:
            out.append(self.nodes[out[-1]].parent)
        return out[::-1]

    def contains(self, node, series):
        b = self.nodes[node]
        rep = self.roots[b.members[0]]
        if b.height == INF:
            return contact_order(series, rep) == INF
        return contact_order(series, rep) >= b.height


def _group_by(values):
    groups = []
    for idx, v in values:
        for g in groups:
            w = g[0]
            if (v == 0 and w == 0) or (v != 0 and w != 0 and coefficients_close(v, w)):
                g[1].append(idx)
                break
        else:
            groups.append((v, [idx]))
    return groups


def build_tree(roots) -> KuoLuTree:
    """Inclusion tree of the pseudo-balls spanned by pairs of ``roots``."""
    roots = tuple(roots)
    if not roots:
        raise TreeError("no roots")
    n = len(roots)
    contact = {}
    for i in range(n):
        for j in range(i + 1, n):
            try:
                contact[i, j] = contact[j, i] = contact_order(roots[i], roots[j])
            except TruncationError as exc:
                raise TreeError(f"roots {i} and {j} are not separated") from exc
    nodes = []

    def make(members, parent, support):
        idx = len(nodes)
        nodes.append(None)
        if len(members) == 1:
            nodes[idx] = PseudoBall(idx, INF, roots[members[0]], tuple(members), parent, (), support)
            return idx
        h = min(contact[i, j] for i in members for j in members if i < j)
        stem = roots[members[0]].stem(h)
        kids = []
        for c, group in _group_by([(i, roots[i].coefficient(h)) for i in members]):
            kids.append(make(group, idx, c))
        nodes[idx] = PseudoBall(idx, h, stem, tuple(members), parent, tuple(kids), support)
        return idx

    make(list(range(n)), None, None)
    return KuoLuTree(tuple(nodes), roots)


def _sample_z(rng, scale):
    return mpmath.mpc(rng.uniform(-1, 1), rng.uniform(-1, 1)) * scale


def _clean(F, tol):
    scale = F.coefficient_scale()
    return UniPoly([0 if abs(c) <= tol * scale else snap_axes(c, tol) for c in F.coeffs])


@config.precise
def compute_FB(tree: KuoLuTree, node: int, f, center=0, seed=None):
    """``(F_B, q(B))`` for a finite-height node.

    ``F_B`` is ``C * prod(z - lc_B(alpha_i))`` over members with multiplicity,
    where ``C`` and ``q(B)`` come from the lowest-order term of
    ``f(lambda_B + z*y**h, y)`` at one generic ``z``.
    """
    b = tree.nodes[node]
    if not b.finite:
        raise TreeError("F_B is defined only for finite heights")
    lcs = []
    for i in b.members:
        lcs += [tree.roots[i].coefficient(b.height)] * tree.roots[i].mult
    monic = UniPoly.from_roots(lcs)
    seed = config.current().seed if seed is None else seed
    rng = random.Random(seed * 1000003 + node)
    scale = 1 + max(abs(c) for c in lcs)
    tol = config.tolerance()
    for _ in range(32):
        z = _sample_z(rng, scale)
        prod = monic(z)
        if abs(prod) <= tol * monic.magnitude_at(z) or abs(prod) < mpmath.mpf(10) ** -6 * scale ** len(lcs):
            continue
        lead = leading_eval(f, b.stem.plus_term(b.height, z), center)
        if lead.is_zero:
            continue
        return _clean(monic.scale(lead.coefficient / prod), tol), lead.exponent
    raise TreeError(f"no generic sample found for node {node}")


@config.precise
def initial_polynomial(f, stem, h, center=0):
    """``(F, q)`` with ``f(stem + z*y**h, y) = F(z) y**q + ...``, expanded symbolically in z."""
    full = INF
    cutoff = Fraction(max(f.degree_y, 1) + 1) * 2
    while True:
        table = TaylorTable.from_poly(f, center, cutoff).shift_series(stem)
        bounds = [table.lower_bound(i) + i * h for i in range(table.degree + 1)]
        q = min(bounds)
        known = [table.row_order(i) is not None and table.row_order(i) + i * h == q
                 for i in range(table.degree + 1)]
        if any(known) and q < cutoff:
            coeffs = [table.vals[i].get(q - i * h, 0) if known[i] else 0
                      for i in range(table.degree + 1)]
            return UniPoly(coeffs), q
        if not table.pruned:
            raise TreeError("f vanishes identically along the family")
        cutoff *= 2
        if cutoff > 10**4:
            raise TreeError("initial polynomial not found")


@config.precise
def annotate(tree: KuoLuTree, f, center=0, seed=None) -> KuoLuTree:
    """Attach ``F_B`` and ``q(B)`` to every node (``q = inf`` on leaves)."""
    nodes = []
    for b in tree.nodes:
        if b.finite:
            F, q = compute_FB(tree, b.index, f, center, seed)
            nodes.append(replace(b, F=F, q=q))
        else:
            nodes.append(replace(b, q=INF))
    return replace(tree, nodes=tuple(nodes))


def place_derivative_roots(tree: KuoLuTree, betas, repeated=()):
    """Where each root of ``f_x'`` leaves the tree.

    ``betas`` are roots of ``f_x'`` that are not roots of ``f``; ``repeated``
    lists ``(alpha_index, count)`` for roots of ``f`` of multiplicity
    ``count + 1``, which are also roots of ``f_x'`` and sit on their leaf.
    """
    placements = []
    for j, beta in enumerate(betas):
        try:
            h = max(contact_order(beta, a) for a in tree.roots)
        except TruncationError as exc:
            raise TreeError(f"beta {j} is not separated from the roots of f") from exc
        node = tree.root
        while True:
            b = tree.nodes[node]
            if b.height == h:
                break
            if b.height > h:
                raise TreeError(f"beta {j} has no leaving node")
            c = beta.coefficient(b.height)
            nxt = [k for k in b.children
                   if (c == 0 and tree.nodes[k].support == 0)
                   or (c != 0 and tree.nodes[k].support != 0
                       and coefficients_close(c, tree.nodes[k].support))]
            if len(nxt) != 1:
                raise TreeError(f"beta {j} does not follow a child of node {node}")
            node = nxt[0]
        placements.append(DerivativeRootPlacement(j, node, beta.coefficient(h)))
    leaf_of = {b.members[0]: b.index for b in tree.nodes if not b.finite}
    for k, (alpha, count) in enumerate(repeated):
        for _ in range(count):
            placements.append(
                DerivativeRootPlacement(len(betas) + k, leaf_of[alpha], None, True)
            )
    return placements


def _match_multisets(found, expected):
    """Greedy nearest matching; returns the largest relative deviation or inf on count mismatch."""
    if len(found) != len(expected):
        return mpmath.inf
    pool = list(expected)
    worst = mpmath.mpf(0)
    for r in found:
        k = min(range(len(pool)), key=lambda i: abs(pool[i] - r))
        worst = max(worst, abs(pool[k] - r) / (1 + abs(pool[k])))
        pool.pop(k)
    return worst


@config.precise
def verify_derivative_lemma(tree: KuoLuTree, betas, repeated=(), tol=mpmath.mpf(10) ** -20):
    """Compare the roots of ``F_B'`` with ``{lc_B(beta) : beta in B}`` at every finite node."""
    report = []
    for b in tree.finite_nodes:
        expected = []
        for beta in betas:
            if tree.contains(b.index, beta):
                expected += [beta.coefficient(b.height)] * beta.mult
        for alpha, count in repeated:
            if alpha in b.members:
                expected += [tree.roots[alpha].coefficient(b.height)] * count
        d = b.F.derivative()
        found = [r for r, m in root_clusters(d) for _ in range(m)] if d.degree >= 1 else []
        dev = _match_multisets(found, expected)
        report.append({
            "node": b.index,
            "height": b.height,
            "expected": expected,
            "found": found,
            "max_deviation": dev,
            "ok": dev <= tol,
        })
    return report


def q_monotonicity_violations(tree: KuoLuTree):
    """Parent/child pairs of finite height where ``q`` fails to increase."""
    return [
        (b.parent, b.index)
        for b in tree.finite_nodes
        if b.parent is not None and not tree.nodes[b.parent].q < b.q
    ]

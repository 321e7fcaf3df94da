"""Eggers tree: the Kuo-Lu tree modulo conjugation of Newton-Puiseux roots."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import config
from .kuolu import KuoLuTree
from .series import INF, coefficients_close
from .uni import UniPoly, critical_values, root_clusters

__all__ = [
    "EggersClass",
    "EggersTree",
    "DivisibilityError",
    "conjugacy_classes",
    "compute_G",
    "t_count",
    "conjugate_F_relation_check",
    "sibling_conjugacy_check",
    "child_count_mismatches",
]


class DivisibilityError(ArithmeticError):
    """``F_B`` has a monomial whose degree is not a multiple of ``n``."""


def _is_integer(q):
    return q != INF and Fraction(q).denominator == 1


@dataclass(frozen=True)
class EggersClass:
    index: int
    members: tuple
    height: object
    q: object
    N: int | None = None
    n: int | None = None
    G: UniPoly | None = None
    t: int | None = None
    parent: int | None = None
    children: tuple = ()

    @property
    def finite(self):
        return self.height != INF


@dataclass(frozen=True)
class EggersTree:
    classes: tuple
    class_of: dict
    tree: KuoLuTree

    @property
    def leaves(self):
        return [c for c in self.classes if not c.children]

    @property
    def leaf_count(self):
        return len(self.leaves)

    def classes_with_q(self, M):
        return [c for c in self.classes if c.finite and c.q == M]


def stem_index(stem):
    n = 1
    for e, _ in stem.terms:
        n = n * e.denominator // math.gcd(n, e.denominator)
    return n


def _n_of(height, N):
    return (Fraction(height) * N).denominator


@config.precise
def compute_G(F: UniPoly, n: int, tol=None):
    """``G`` with ``F(z) = G(z**n)``; raises :class:`DivisibilityError` otherwise."""
    if n == 1:
        return F
    tol = config.tolerance() if tol is None else tol
    scale = F.coefficient_scale()
    for k, c in enumerate(F.coeffs):
        if k % n and abs(c) > tol * scale:
            raise DivisibilityError(f"F_B has a z^{k} term but n = {n}")
    return UniPoly([F.coeffs[k] for k in range(0, F.degree + 1, n)])


def t_count(G: UniPoly):
    """Number of distinct roots of ``G``."""
    if G.degree < 1:
        return 0
    return len(root_clusters(G))


@config.precise
def conjugacy_classes(tree: KuoLuTree) -> EggersTree:
    """Group nodes of equal height that meet a common conjugacy cycle."""
    nodes = tree.nodes
    parent = list(range(len(nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    cycles = [frozenset(tree.roots[i].cycle for i in b.members) for b in nodes]
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            if nodes[a].height == nodes[b].height and cycles[a] & cycles[b]:
                parent[find(a)] = find(b)
    order = []
    for b in nodes:
        r = find(b.index)
        if r not in order:
            order.append(r)
    class_of = {b.index: order.index(find(b.index)) for b in nodes}
    members = [tuple(b.index for b in nodes if class_of[b.index] == k) for k in range(len(order))]
    classes = []
    for k, mem in enumerate(members):
        first = nodes[mem[0]]
        par = None if first.parent is None else class_of[first.parent]
        kids = sorted({class_of[c] for m in mem for c in nodes[m].children})
        N = n = G = t = None
        if first.finite:
            N = stem_index(first.stem)
            n = _n_of(first.height, N)
            if first.q is not None and _is_integer(first.q):
                G = compute_G(first.F, n)
                t = t_count(G)
        classes.append(EggersClass(k, mem, first.height, first.q, N, n, G, t, par, tuple(kids)))
    return EggersTree(tuple(classes), class_of, tree)


def _common_denominator(tree, nodes):
    d = 1
    for b in nodes:
        for e in [b.height] + [e for e, _ in b.stem.terms]:
            d = d * Fraction(e).denominator // math.gcd(d, Fraction(e).denominator)
    for i in nodes[0].members:
        d = d * tree.roots[i].index // math.gcd(d, tree.roots[i].index)
    return d


@config.precise
def conjugate_F_relation_check(eggers: EggersTree, cls: int, tol=mpmath.mpf(10) ** -20):
    """Check ``F_{B'}(theta**(h*D) z) = F_B(z)`` for every pair of members of an integer-q class."""
    c = eggers.classes[cls]
    tree = eggers.tree
    report = {"class": cls, "pairs": [], "ok": True}
    if len(c.members) < 2 or not c.finite:
        return report
    if not _is_integer(c.q):
        report["skipped"] = "q is not an integer"
        return report
    base = tree.nodes[c.members[0]]
    for other in c.members[1:]:
        bar = tree.nodes[other]
        D = _common_denominator(tree, [base, bar])
        ks = [k for k in range(D) if _stems_match(base.stem.conjugate(k, D), bar.stem)]
        nh = int(base.height * D)
        worst = mpmath.mpf(0)
        for k in ks:
            theta = mpmath.expjpi(mpmath.mpf(2 * k * nh % (2 * D)) / D)
            rotated = UniPoly([a * theta**j for j, a in enumerate(bar.F.coeffs)])
            diff = (rotated - base.F).coefficient_scale() / max(base.F.coefficient_scale(), 1)
            worst = max(worst, diff)
        ok = bool(ks) and worst <= tol
        report["pairs"].append({"nodes": (base.index, other), "theta_powers": ks,
                                "D": D, "max_deviation": worst, "ok": ok})
        report["ok"] = report["ok"] and ok
    return report


def _stems_match(a, b):
    da, db = dict(a.terms), dict(b.terms)
    if set(da) != set(db):
        return False
    return all(coefficients_close(da[e], db[e]) for e in da)


@config.precise
def sibling_conjugacy_check(eggers: EggersTree):
    """Children ``B _|_c1 B1`` and ``B _|_c2 B2`` share a class iff ``c1**n == c2**n``."""
    tree = eggers.tree
    failures = []
    for cls in eggers.classes:
        if not cls.finite:
            continue
        for m in cls.members:
            kids = tree.nodes[m].children
            for a in range(len(kids)):
                for b in range(a + 1, len(kids)):
                    ca, cb = tree.nodes[kids[a]].support, tree.nodes[kids[b]].support
                    pa, pb = ca**cls.n, cb**cls.n
                    same_power = (pa == 0 and pb == 0) or (
                        pa != 0 and pb != 0 and coefficients_close(pa, pb, mpmath.mpf(10) ** -20))
                    same_class = eggers.class_of[kids[a]] == eggers.class_of[kids[b]]
                    if same_power != same_class:
                        failures.append((m, kids[a], kids[b]))
    return failures


def child_count_mismatches(eggers: EggersTree):
    """Classes whose root count ``t`` differs from their number of children in ``E(f)``."""
    return [c.index for c in eggers.classes if c.t is not None and c.t != len(c.children)]


@config.precise
def nonzero_critical_values(F: UniPoly):
    return [v for v in critical_values(F) if v != 0]

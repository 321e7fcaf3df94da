"""Newton-Puiseux expansion with conjugacy-cycle tracking.

Roots are computed factor by factor on the squarefree decomposition of the
input, by the classical Newton polygon iteration run on a
:class:`~pencils.series.TaylorTable`.  Each factor is expanded modulo
``y**K``; a root ``alpha`` of the factor ``g`` is then known below
``K - ord g_x(alpha)``, and ``K`` is doubled whenever two roots are not
yet told apart.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import config
from .poly import BivarPoly, exact_quotient, gcd, squarefree_decompose
from .series import (
    INF,
    FractionalPowerSeries,
    TaylorTable,
    TruncationError,
    contact_order,
    leading_eval,
)
from .uni import UniPoly, root_clusters, to_mpc

__all__ = [
    "PreconditionError",
    "SeparationError",
    "local_order",
    "newton_puiseux",
    "RootSystem",
    "expand_germ",
    "default_max_order",
]

log = logging.getLogger(__name__)


class PreconditionError(ValueError):
    """The input germ does not meet the hypotheses of the expansion."""


class SeparationError(ArithmeticError):
    """``max_order`` was reached before all roots were told apart."""


class _NeedMore(Exception):
    pass


START_CUTOFF = 8


def default_max_order(f):
    return Fraction(4 * (max(f.degree_x, 1) * max(f.degree_y, 1) + 1))


@config.precise
def local_order(g: BivarPoly, center=0):
    """Multiplicity of ``center`` as a root of ``g(x, 0)``; None if ``g(x, 0) == 0``."""
    row = {i: c for (i, j), c in g.terms.items() if j == 0}
    if not row:
        return None
    if center == 0:
        return min(row)
    poly = UniPoly([row.get(i, 0) for i in range(max(row) + 1)])
    a = to_mpc(center)
    tol = config.tolerance()
    k = 0
    while True:
        if abs(poly(a)) > tol * poly.magnitude_at(a) or poly.degree == 0:
            return k
        poly = poly.derivative().scale(mpmath.mpf(1) / (k + 1))
        k += 1


def _lower_hull(points):
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _nth_roots(w, n):
    base = mpmath.root(w, n)
    return [base * mpmath.expjpi(mpmath.mpf(2 * j) / n) for j in range(n)]


def _expand_factor(g, center, p, cutoff):
    """Roots of ``g`` of positive order at ``center`` modulo ``y**cutoff``.

    Returns ``[(terms, trunc), ...]`` with one entry per root (``p`` total).
    """
    table = TaylorTable.from_poly(g, center, cutoff)
    out = []
    stack = [(table, p, Fraction(0), ())]
    while stack:
        table, r, last, terms = stack.pop()
        while r == 1:
            low1 = table.lowest(1)
            if low1 is None:
                raise _NeedMore
            low0 = table.lowest(0)
            if low0 is None:
                trunc = INF if not table.pruned else cutoff - low1[0]
                if trunc <= last:
                    raise _NeedMore
                out.append((terms, trunc))
                r = 0
                break
            s = low0[0] - low1[0]
            if s <= last:
                raise _NeedMore
            c = -low0[1] / low1[1]
            terms = terms + ((s, c),)
            last = s
            table = table.shift(c, s).trim(1, s)
        if r == 0:
            continue
        points = [(i, table.row_order(i)) for i in range(r + 1) if table.row_order(i) is not None]
        if not points or points[-1][0] != r:
            raise _NeedMore
        i0 = points[0][0]
        if i0 > 0:
            if table.pruned:
                raise _NeedMore
            if i0 > 1:
                raise ArithmeticError("numerically repeated root in a squarefree factor")
            out.append((terms, INF))
        hull = _lower_hull(points)
        found = i0
        for (ia, ea), (ib, eb) in zip(hull, hull[1:]):
            s = Fraction(ea - eb) / (ib - ia)
            if s <= last:
                raise _NeedMore
            entries = {}
            for i in range(ia, ib + 1):
                v = table.vals[i].get(ea - (i - ia) * s) if i < len(table.vals) else None
                if v is not None:
                    entries[i - ia] = v
            step = 0
            for k in entries:
                step = math.gcd(step, k)
            q = UniPoly([entries.get(k * step, 0) for k in range((ib - ia) // step + 1)])
            count = 0
            for w, m in root_clusters(q):
                for c in _nth_roots(w, step):
                    stack.append((table.shift(c, s).trim(m, s), m, s, terms + ((s, c),)))
                    count += m
            if count != ib - ia:
                raise ArithmeticError("edge polynomial lost roots")
            found += count
        if found != r:
            raise ArithmeticError("Newton polygon does not account for all roots")
    return out


def _agree(a, b):
    try:
        return contact_order(a, b) == INF
    except TruncationError:
        return True


def _try_exact(g, center, terms):
    """Promote a finished root to an exact one when it solves ``g`` identically."""
    if len(terms) > 8:
        return False
    s = FractionalPowerSeries(tuple(terms), INF)
    top = max((e for e, _ in terms), default=Fraction(0))
    if g.degree_y + g.degree_x * top > 400:
        return False
    try:
        return leading_eval(g, s, center).is_zero
    except TruncationError:
        return False


@dataclass
class _Factor:
    poly: BivarPoly
    mult: int
    tag: str
    index: int
    p: int
    center: object
    cutoff: Fraction = Fraction(0)
    cap: Fraction = Fraction(0)
    raw: list = field(default_factory=list)

    def compute(self):
        while True:
            try:
                raw = _expand_factor(self.poly, self.center, self.p, self.cutoff)
                break
            except _NeedMore:
                if self.cutoff >= self.cap:
                    raise SeparationError(
                        f"roots of factor {self.poly} not separated below y^{self.cutoff}"
                    ) from None
                self.cutoff = min(self.cap, 2 * self.cutoff)
        self.raw = [
            (terms, INF if trunc != INF and _try_exact(self.poly, self.center, terms) else trunc)
            for terms, trunc in raw
        ]

    def refine(self):
        if self.cutoff >= self.cap:
            return False
        self.cutoff = min(self.cap, 2 * self.cutoff)
        self.compute()
        return True


def _cycles(series):
    """Partition indices of ``series`` (one factor) into conjugation orbits."""
    cycle = [None] * len(series)
    groups = []
    for i, s in enumerate(series):
        if cycle[i] is not None:
            continue
        n = s.index
        orbit = [i]
        cycle[i] = len(groups)
        for k in range(1, n):
            image = s.conjugate(k, n)
            match = [j for j, t in enumerate(series) if cycle[j] is None and _agree(image, t)]
            if len(match) != 1:
                raise ArithmeticError("conjugates of a root do not match the computed roots")
            cycle[match[0]] = len(groups)
            orbit.append(match[0])
        groups.append(orbit)
    return groups


class RootSystem:
    """Jointly separated Newton-Puiseux roots of several squarefree factors.

    ``groups`` maps a tag (for instance ``"f"`` and ``"fx"``) to a list of
    ``(factor, multiplicity)``.  All roots, across tags, are expanded until
    every pair has a decided contact order.
    """

    def __init__(self, groups, center=0, max_order=None, separation_goal=True):
        self.center = center
        self.factors = []
        polys = [g for members in groups.values() for g, _ in members]
        if max_order is None:
            max_order = max((default_max_order(g) for g in polys), default=Fraction(4))
        self.max_order = Fraction(max_order)
        for tag, members in groups.items():
            for g, m in members:
                p = local_order(g, center)
                if p is None:
                    raise PreconditionError(
                        f"factor {g} vanishes on y = 0; apply a coordinate change first"
                    )
                if p == 0:
                    continue
                start = Fraction(START_CUTOFF)
                cap = Fraction(p + 1) * self.max_order + g.degree_y + 1
                fac = _Factor(g, m, tag, len(self.factors), p, center, min(start, cap), cap)
                self.factors.append(fac)
        for fac in self.factors:
            fac.compute()
        self.separation_goal = separation_goal
        if separation_goal:
            self._separate()
        self._assemble()

    def _all(self):
        return [
            (fac, FractionalPowerSeries(tuple(terms), trunc))
            for fac in self.factors
            for terms, trunc in fac.raw
        ]

    def _separate(self):
        while True:
            items = self._all()
            stuck = None
            for a in range(len(items)):
                for b in range(a + 1, len(items)):
                    try:
                        contact_order(items[a][1], items[b][1])
                    except TruncationError:
                        stuck = (items[a], items[b])
                        break
                if stuck:
                    break
            if stuck is None:
                return
            (fa, sa), (fb, sb) = stuck
            first, second = (fa, fb) if sa.trunc <= sb.trunc else (fb, fa)
            if not (first.refine() or second.refine()):
                raise SeparationError(
                    f"roots agree beyond max_order={self.max_order}: {sa} / {sb}"
                )

    def _assemble(self):
        self.series = {}
        next_cycle = 0
        for fac in self.factors:
            plain = [FractionalPowerSeries(tuple(t), tr) for t, tr in fac.raw]
            orbits = _cycles(plain) if self.separation_goal else [[i] for i in range(len(plain))]
            cyc = {}
            for orbit in orbits:
                for i in orbit:
                    cyc[i] = next_cycle
                next_cycle += 1
            for i, s in enumerate(plain):
                self.series.setdefault(fac.tag, []).append(
                    s.with_meta(cycle=cyc[i], mult=fac.mult, factor=fac.index)
                )

    def roots(self, tag):
        return list(self.series.get(tag, []))

    def refine_factor(self, index):
        """Double the cutoff of one factor (keeping separation); False at the cap."""
        ok = self.factors[index].refine()
        if ok:
            if self.separation_goal:
                self._separate()
            self._assemble()
        return ok


def _x_factors(f):
    if f.is_zero():
        raise PreconditionError("the zero polynomial has no Newton-Puiseux roots")
    return [(g, m) for g, m in squarefree_decompose(f) if g.degree_x > 0]


@config.precise
def newton_puiseux(f: BivarPoly, separation_goal=True, max_order=None, center=0):
    """Newton-Puiseux roots of ``f`` at ``(center, 0)``, one entry per distinct root.

    The multiplicity of each root is carried in ``mult``; their sum is
    ``ord f(x, 0)``.  Raises :class:`PreconditionError` when ``y`` divides
    ``f`` or ``f`` does not vanish at the point.
    """
    p = local_order(f, center)
    if p is None:
        raise PreconditionError("y divides f (f(x, 0) = 0); apply a coordinate change first")
    if p == 0:
        raise PreconditionError("f does not vanish at the base point")
    system = RootSystem({"f": _x_factors(f)}, center, max_order, separation_goal)
    return system.roots("f")


def derivative_split(f: BivarPoly):
    """``(h, repeated)``: ``f_x' = common * h`` with ``common = gcd(f, f_x')``.

    The roots of ``f_x'`` are the roots of ``h`` together with every root of
    ``f`` of multiplicity ``m > 1``, repeated ``m - 1`` times.
    """
    fx = f.partial_x()
    if fx.is_zero():
        return BivarPoly.const(1)
    common = gcd(f, fx)
    return exact_quotient(fx, common)


@config.precise
def expand_germ(f: BivarPoly, center=0, max_order=None):
    """Roots of ``f`` and of ``f_x'`` at ``(center, 0)``, jointly separated.

    Returns the :class:`RootSystem`; its ``"f"`` roots are the alphas and its
    ``"fx"`` roots are the betas that are not roots of ``f``.
    """
    p = local_order(f, center)
    if p is None:
        raise PreconditionError("y divides f (f(x, 0) = 0); apply a coordinate change first")
    if p == 0:
        raise PreconditionError("f does not vanish at the base point")
    groups = {"f": _x_factors(f)}
    h = derivative_split(f)
    if h.degree_x > 0:
        groups["fx"] = [(g, m) for g, m in squarefree_decompose(h) if g.degree_x > 0]
    if max_order is None:
        max_order = default_max_order(f)
    return RootSystem(groups, center, max_order)

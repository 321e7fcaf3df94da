"""Critical values and branches at infinity of a polynomial ``f(x, y)``.

With ``F(X, Y, Z) = Z**d * f(X/Z, Y/Z)`` and coordinates chosen so that
``y`` does not divide the top form ``f_d``, the points at infinity are
``(a : 1 : 0)`` with ``f_d(a, 1) = 0``.  Near such a point the curves
``f = t`` read ``P(X, Z) - t*Z**d = 0`` with ``P(X, Z) = F(X, 1, Z)``, an
Ephraim pencil centred at ``(a, 0)``; its nonzero special values are the
nonzero critical values at infinity contributed by that point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import config
from .pencil import SpecialValuesReport, analyze, special_values
from .poly import BivarPoly, X, Y, squarefree_decompose
from .puiseux import PreconditionError
from .uni import UniPoly, cluster_values, root_clusters, to_mpc

__all__ = [
    "HomogenizedPoly",
    "Shear",
    "PointAtInfinity",
    "InfinityReport",
    "homogenize",
    "admissible_shear",
    "points_at_infinity",
    "local_germ",
    "critical_values_at_infinity",
    "branches_at_infinity",
]


@dataclass(frozen=True)
class HomogenizedPoly:
    """``F(X, Y, Z)`` as a map ``(i, j, k) -> coefficient``."""

    terms: dict
    degree: int

    def __call__(self, X_, Y_, Z_):
        return sum(c * X_**i * Y_**j * Z_**k for (i, j, k), c in self.terms.items())

    def dehomogenize(self):
        """``F(X, Y, 1)``."""
        out = {}
        for (i, j, k), c in self.terms.items():
            out[i, j] = out.get((i, j), 0) + c
        return BivarPoly(out)

    def affine_at_y(self):
        """``P(X, Z) = F(X, 1, Z)`` as a polynomial in ``(x, y) = (X, Z)``."""
        out = {}
        for (i, j, k), c in self.terms.items():
            out[i, k] = out.get((i, k), 0) + c
        return BivarPoly(out)

    def __str__(self):
        parts = []
        for (i, j, k), c in sorted(self.terms.items(), key=lambda t: (-t[0][0], -t[0][1])):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in (("X", i), ("Y", j), ("Z", k)) if e)
            coef = "" if c == 1 else ("-" if c == -1 else f"{c}*")
            parts.append(f"{coef}{mono}" if mono else str(c))
        return " + ".join(parts).replace("+ -", "- ")


def homogenize(f: BivarPoly) -> HomogenizedPoly:
    if f.is_constant():
        raise PreconditionError("f must be nonconstant")
    d = f.total_degree
    return HomogenizedPoly({(i, j, d - i - j): c for (i, j), c in f.terms.items()}, d)


@dataclass(frozen=True)
class Shear:
    """A linear change of coordinates applied before the analysis at infinity."""

    name: str
    matrix: tuple

    def apply(self, f: BivarPoly) -> BivarPoly:
        (a, b), (c, d) = self.matrix
        return f.compose(X * a + Y * b, X * c + Y * d)

    def to_json(self):
        return {"name": self.name, "matrix": [list(r) for r in self.matrix]}


def _shear_candidates(limit):
    yield Shear("identity", ((1, 0), (0, 1)))
    yield Shear("swap x<->y", ((0, 1), (1, 0)))
    for k in range(1, limit + 1):
        yield Shear(f"y -> y + {k}*x", ((1, 0), (k, 1)))


def admissible_shear(f: BivarPoly):
    """First change from a fixed family after which ``y`` does not divide ``f_d``."""
    d = f.total_degree
    for shear in _shear_candidates(d + 1):
        top = shear.apply(f.homogeneous_part(d))
        if top.coeff(d, 0) != 0:
            return shear, shear.apply(f)
    raise ArithmeticError("no admissible shear found")


@dataclass(frozen=True)
class PointAtInfinity:
    """The point ``(a : 1 : 0)`` in sheared coordinates."""

    a: object
    multiplicity: int
    exact: bool = False

    def to_json(self):
        from .export import complex_json, rational_json

        return {"a": rational_json(self.a) if self.exact else complex_json(self.a),
                "mult": self.multiplicity}


@config.precise
def points_at_infinity(f: BivarPoly):
    """``(shear, points)``: the roots of the sheared ``f_d(x, 1)`` with multiplicities."""
    shear, g = admissible_shear(f)
    d = g.total_degree
    top = BivarPoly({(i, 0): c for (i, j), c in g.homogeneous_part(d).terms.items()})
    points = []
    for factor, m in squarefree_decompose(top):
        for piece in _rational_factors(factor):
            if piece.degree_x == 1:
                a = -piece.coeff(0, 0) / piece.coeff(1, 0)
                points.append(PointAtInfinity(a, m, True))
                continue
            uni = UniPoly([piece.coeff(i, 0) for i in range(piece.degree_x + 1)])
            for r, k in root_clusters(uni):
                points.append(PointAtInfinity(r, m * k))
    points.sort(key=lambda p: (float(mpmath.re(to_mpc(p.a))), float(mpmath.im(to_mpc(p.a)))))
    if sum(p.multiplicity for p in points) != d:
        raise ArithmeticError("point multiplicities do not add up to the degree")
    return shear, points


def _rational_factors(factor: BivarPoly):
    """Irreducible factors over Q of a univariate polynomial in x, linear ones exact."""
    if factor.degree_x < 1:
        return []
    _, pieces = factor.to_sympy().factor_list()
    return [BivarPoly.from_sympy(p) for p, _ in pieces if p.degree() >= 1]


def _drop_roundoff(P: BivarPoly, point: PointAtInfinity) -> BivarPoly:
    """Zero the ``x**i`` coefficients, ``i < mult``, that vanish at an inexact root."""
    return BivarPoly({(i, j): c for (i, j), c in P.terms.items()
                      if j > 0 or i >= point.multiplicity})


def _germ_input(g: BivarPoly, point: PointAtInfinity):
    """``(P, center)`` for the local analysis; rational points are shifted exactly."""
    P = homogenize(g).affine_at_y()
    if point.exact:
        return (P.shift_x(point.a) if point.a != 0 else P), 0
    return P, point.a


def local_germ(f: BivarPoly, point: PointAtInfinity, shear=None) -> BivarPoly:
    """``g(u, v) = F(u + a, 1, v)`` written in ``(x, y)``; the local pencil is ``g - t*y**d``."""
    g = (shear or admissible_shear(f)[0]).apply(f)
    P = homogenize(g).affine_at_y()
    if point.exact:
        return P.shift_x(point.a)
    return _drop_roundoff(P.shift_x(to_mpc(point.a)), point)


@dataclass
class PointReport:
    point: PointAtInfinity
    branches: int
    special: SpecialValuesReport


@dataclass
class InfinityReport:
    degree: int
    shear: Shear
    points: list
    critical_values: list
    branch_count: int
    zero_status: str = "undetermined"
    errors: dict = field(default_factory=dict)

    @property
    def bound_ok(self):
        return len(self.critical_values) <= self.branch_count

    def to_json(self):
        from .export import complex_json

        return {
            "degree": self.degree,
            "shear": self.shear.to_json(),
            "points": [
                {**p.point.to_json(), "branches": p.branches,
                 "special_values": [complex_json(v) for v in p.special.values]}
                for p in self.points
            ],
            "critical_values_at_infinity": [complex_json(v) for v in self.critical_values],
            "branch_count": self.branch_count,
            "bound_ok": self.bound_ok,
            "zero_status": self.zero_status,
        }


def _cycle_count(an):
    return len({a.cycle for a in an.alphas})


@config.precise
def critical_values_at_infinity(f: BivarPoly, max_order=None) -> InfinityReport:
    shear, points = points_at_infinity(f)
    g = shear.apply(f)
    d = g.total_degree
    reports = []
    for point in points:
        P, center = _germ_input(g, point)
        try:
            an = analyze(P, center, max_order)
            rep = special_values(an, d)
        except (ArithmeticError, PreconditionError) as exc:
            raise type(exc)(f"at the point at infinity a = {point.a}: {exc}") from exc
        reports.append(PointReport(point, _cycle_count(an), rep))
    values = cluster_values([v for r in reports for v in r.special.values])
    return InfinityReport(d, shear, reports, values, sum(r.branches for r in reports))


@config.precise
def branches_at_infinity(f: BivarPoly, max_order=None) -> int:
    """Number of branches of ``f = 0`` at infinity (cycles of the local germs, no multiplicity)."""
    shear, points = points_at_infinity(f)
    g = shear.apply(f)
    total = 0
    for point in points:
        P, center = _germ_input(g, point)
        total += _cycle_count(analyze(P, center, max_order))
    return total

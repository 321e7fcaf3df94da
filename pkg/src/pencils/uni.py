"""Univariate complex polynomials and an Aberth-Ehrlich root finder."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import config

__all__ = [
    "UniPoly",
    "RootFindingError",
    "to_mpc",
    "uni_roots",
    "root_clusters",
    "critical_points",
    "critical_values",
    "cluster_values",
]


class RootFindingError(ArithmeticError):
    """The simultaneous iteration did not converge; ``residuals`` lists |p(z)|."""

    def __init__(self, message, residuals=()):
        super().__init__(message)
        self.residuals = list(residuals)


def to_mpc(c):
    if isinstance(c, Fraction):
        return mpmath.mpc(mpmath.mpf(c.numerator) / c.denominator)
    return mpmath.mpc(c)


@dataclass(frozen=True)
class UniPoly:
    """Polynomial ``sum(coeffs[k] * z**k)`` with complex coefficients, lowest first."""

    coeffs: tuple

    def __init__(self, coeffs=()):
        cs = [to_mpc(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_roots(cls, roots, lead=1):
        cs = [to_mpc(lead)]
        for r in roots:
            r = to_mpc(r)
            nxt = [mpmath.mpc(0)] * (len(cs) + 1)
            for k, c in enumerate(cs):
                nxt[k + 1] += c
                nxt[k] -= r * c
            cs = nxt
        return cls(cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else mpmath.mpc(0)

    def is_zero(self):
        return not self.coeffs

    def __call__(self, z):
        acc = mpmath.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self):
        return UniPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def scale(self, s):
        return UniPoly([c * s for c in self.coeffs])

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly([u - v for u, v in zip(a, b)])

    def compose_power(self, n):
        """``p(z**n)``."""
        cs = [mpmath.mpc(0)] * (n * self.degree + 1)
        for k, c in enumerate(self.coeffs):
            cs[n * k] = c
        return UniPoly(cs)

    def coefficient_scale(self):
        return max((abs(c) for c in self.coeffs), default=mpmath.mpf(0))

    def magnitude_at(self, z):
        """``sum(|c_k| |z|**k)``, the natural scale of ``p(z)``."""
        r = abs(z)
        acc = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * r + abs(c)
        return acc

    def close_to(self, other, tol):
        diff = (self - other).coefficient_scale()
        return diff <= tol * max(self.coefficient_scale(), other.coefficient_scale(), 1)

    def __str__(self):
        return render(self)


def _fmt(c, digits=12):
    c = mpmath.mpc(c)
    if abs(c.imag) <= 1e-30 * max(abs(c.real), 1):
        return mpmath.nstr(c.real, digits)
    if abs(c.real) <= 1e-30 * max(abs(c.imag), 1):
        return mpmath.nstr(c.imag, digits) + "i"
    return f"({mpmath.nstr(c.real, digits)}{'+' if c.imag >= 0 else '-'}{mpmath.nstr(abs(c.imag), digits)}i)"


def render(p, var="z", digits=12):
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        coef = _fmt(c, digits)
        if mono and coef == "1":
            coef = ""
        elif mono and coef == "-1":
            coef = "-"
        elif mono:
            coef += "*"
        parts.append(coef + mono)
    return " + ".join(parts).replace("+ -", "- ")


def _initial_guesses(coeffs):
    n = len(coeffs) - 1
    lead = abs(coeffs[-1])
    radius = mpmath.mpf(0)
    for k in range(n):
        if coeffs[k] != 0:
            radius = max(radius, (abs(coeffs[k]) / lead) ** (mpmath.mpf(1) / (n - k)))
    if radius == 0:
        radius = mpmath.mpf(1)
    offset = mpmath.mpf(2) / 5
    return [
        radius * mpmath.expj(2 * mpmath.pi * k / n + offset) for k in range(n)
    ]


def _eval_with_derivative(coeffs, z):
    p = mpmath.mpc(0)
    dp = mpmath.mpc(0)
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _aberth(coeffs, maxiter):
    n = len(coeffs) - 1
    if n == 1:
        return [-coeffs[0] / coeffs[1]], 0
    z = _initial_guesses(coeffs)
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec + 4) * (n + 1)
    abscoeffs = [abs(c) for c in coeffs]
    settled = [False] * n
    for iteration in range(1, maxiter + 1):
        for k in range(n):
            if settled[k]:
                continue
            p, dp = _eval_with_derivative(coeffs, z[k])
            r = abs(z[k])
            scale = mpmath.mpf(0)
            for a in reversed(abscoeffs):
                scale = scale * r + a
            if abs(p) <= eps * scale:
                settled[k] = True
                continue
            if dp == 0:
                z[k] += mpmath.mpf(2) ** (-mpmath.mp.prec // 4) * (1 + r)
                continue
            ratio = p / dp
            s = mpmath.mpc(0)
            for j in range(n):
                if j != k:
                    d = z[k] - z[j]
                    if d != 0:
                        s += 1 / d
            step = ratio / (1 - ratio * s)
            z[k] -= step
            if abs(step) <= eps * (1 + abs(z[k])):
                settled[k] = True
        if all(settled):
            return z, iteration
    residuals = [abs(_eval_with_derivative(coeffs, w)[0]) for w in z]
    raise RootFindingError(f"no convergence after {maxiter} iterations", residuals)


def _cluster(points, radius):
    """Single-linkage clustering; returns lists of indices."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = 1 + max(abs(points[i]), abs(points[j]))
            if abs(points[i] - points[j]) <= radius * scale:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _polish(coeffs, z, mult, steps=6):
    poly = UniPoly(coeffs)
    for _ in range(mult - 1):
        poly = poly.derivative()
    d = poly.derivative()
    for _ in range(steps):
        dv = d(z)
        if dv == 0:
            break
        step = poly(z) / dv
        z -= step
        if abs(step) <= mpmath.mpf(2) ** (-mpmath.mp.prec) * (1 + abs(z)):
            break
    return z


def _sort_key(z):
    return (float(mpmath.nint(z.real * 10**12)), float(mpmath.nint(z.imag * 10**12)))


@config.precise
def root_clusters(p: UniPoly, tol=None, maxiter=config.MAX_ITERATIONS):
    """Distinct roots of ``p`` with multiplicities, as ``[(root, mult), ...]``.

    Roots that agree to within ``max(tol, 2**(-prec/(2*deg)))`` relative
    are merged; the merged root is the cluster centroid polished by Newton
    steps on the ``(mult-1)``-th derivative.
    """
    if p.degree < 1:
        raise ValueError("root finding needs degree >= 1")
    tol = config.tolerance() if tol is None else mpmath.mpf(tol)
    coeffs = list(p.coeffs)
    zeros = 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        zeros += 1
    out = [(mpmath.mpc(0), zeros)] if zeros else []
    if len(coeffs) == 1:
        return out
    prec = mpmath.mp.prec
    with mpmath.workprec(prec + 32):
        z, _ = _aberth(coeffs, maxiter)
        n = len(coeffs) - 1
        radius = max(tol, mpmath.mpf(2) ** (-mpmath.mpf(prec) / (2 * n)))
        for group in _cluster(z, radius):
            mult = len(group)
            centre = mpmath.fsum(z[i] for i in group) / mult
            centre = _polish(coeffs, centre, mult)
            out.append((centre, mult))
    out = [(+r, m) for r, m in out]
    poly = UniPoly(coeffs)
    for r, m in out:
        if r == 0:
            continue
        probe = poly
        for _ in range(m - 1):
            probe = probe.derivative()
        if abs(probe(r)) > tol * probe.magnitude_at(r):
            raise RootFindingError("root failed the residual check", [abs(poly(r))])
    out.sort(key=lambda rm: _sort_key(rm[0]))
    return out


def uni_roots(p: UniPoly, tol=None, maxiter=config.MAX_ITERATIONS):
    """All complex roots of ``p`` repeated according to multiplicity."""
    return [r for r, m in root_clusters(p, tol, maxiter) for _ in range(m)]


def cluster_values(values, tol=None):
    """Deduplicate complex values that agree within ``tol`` relative to ``max(1, |v|)``."""
    tol = config.tolerance() if tol is None else mpmath.mpf(tol)
    out = []
    for v in values:
        if not any(abs(v - w) <= tol * max(1, abs(v), abs(w)) for w in out):
            out.append(v)
    out.sort(key=_sort_key)
    return out


@config.precise
def critical_points(p: UniPoly, tol=None):
    """Distinct roots of ``p'`` with their multiplicities."""
    d = p.derivative()
    if d.degree < 1:
        return []
    return root_clusters(d, tol)


@config.precise
def critical_values(p: UniPoly, tol=None):
    """The set ``{p(z) : p'(z) = 0}``, deduplicated within ``tol``."""
    tol_ = config.tolerance() if tol is None else mpmath.mpf(tol)
    values = []
    for z, _ in critical_points(p, tol):
        v = p(z)
        values.append(mpmath.mpc(0) if abs(v) <= tol_ * p.magnitude_at(z) else snap_axes(v, tol_))
    return cluster_values(values, tol)


def snap_axes(v, tol=None):
    """Zero a real or imaginary part that is negligible against ``|v|``."""
    tol = config.tolerance() if tol is None else tol
    v = to_mpc(v)
    re, im = v.real, v.imag
    if abs(im) <= tol * abs(v):
        im = 0
    if abs(re) <= tol * abs(v):
        re = 0
    return mpmath.mpc(re, im)

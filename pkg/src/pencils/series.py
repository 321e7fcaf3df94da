"""Truncated fractional power series and substitution into polynomials.

A :class:`FractionalPowerSeries` is a finite prefix ``sum(c_k * y**e_k)``
(rational exponents) of a Newton-Puiseux root together with ``trunc``:
every term of exponent below ``trunc`` is known, so ``trunc == inf``
means the prefix *is* the series.

:class:`TaylorTable` is the workhorse behind both the Newton-Puiseux
expansion and :func:`leading_eval`.  It stores ``g(x', y) = f(phi(y) + x', y)``
as rows ``A_i(y)`` (the coefficient of ``x'**i``), each a sparse map from
rational exponent to coefficient, keeping only exponents below a y-adic
cutoff ``K``.  Alongside each coefficient it keeps the sum of absolute
values of the products that formed it; a coefficient small against that
magnitude is numerically zero and is dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb

import mpmath

from . import config
from .uni import to_mpc

__all__ = [
    "INF",
    "FractionalPowerSeries",
    "LeadingTerm",
    "TaylorTable",
    "TruncationError",
    "contact_order",
    "series_order",
    "series_initial",
    "leading_eval",
    "coefficients_close",
]

INF = math.inf


class TruncationError(ArithmeticError):
    """A result depends on terms beyond the known truncation."""


def coefficients_close(a, b, tol=None):
    tol = config.tolerance() if tol is None else tol
    return abs(a - b) <= tol * max(abs(a), abs(b))


def _fmt_exp(e):
    return str(e.numerator) if e.denominator == 1 else f"({e.numerator}/{e.denominator})"


@dataclass(frozen=True)
class FractionalPowerSeries:
    """A Newton-Puiseux root ``x = sum(c * y**e)`` known below ``trunc``.

    ``cycle`` names the conjugacy cycle (local branch) and ``mult`` is the
    multiplicity inherited from the squarefree factor the root solves.
    """

    terms: tuple = ()
    trunc: object = INF
    cycle: int = 0
    mult: int = 1
    factor: int = 0
    label: str = ""

    def __post_init__(self):
        exps = [e for e, _ in self.terms]
        if any(b <= a for a, b in zip(exps, exps[1:])):
            raise ValueError("exponents must be strictly increasing")
        if exps and (exps[0] < 0 or exps[-1] >= self.trunc):
            raise ValueError("exponents must lie in [0, trunc)")

    @property
    def index(self):
        """Smallest N with the known prefix a series in ``y**(1/N)``."""
        n = 1
        for e, _ in self.terms:
            n = n * e.denominator // math.gcd(n, e.denominator)
        return n

    denom = index

    @property
    def exact(self):
        return self.trunc == INF

    def coefficient(self, e):
        if e >= self.trunc:
            raise TruncationError(f"coefficient of y^{e} is beyond the truncation {self.trunc}")
        for ex, c in self.terms:
            if ex == e:
                return c
        return mpmath.mpc(0)

    def stem(self, h):
        """The terms with exponent below ``h`` (the series ``lambda_B``), as an exact series."""
        if h > self.trunc:
            raise TruncationError(f"stem below {h} needs terms beyond {self.trunc}")
        return FractionalPowerSeries(tuple((e, c) for e, c in self.terms if e < h), INF)

    def plus_term(self, e, c):
        """Exact series ``self + c*y**e``; ``e`` must exceed every exponent present."""
        if self.terms and e <= self.terms[-1][0]:
            raise ValueError("new exponent must exceed the existing ones")
        return FractionalPowerSeries(self.terms + ((Fraction(e), to_mpc(c)),), INF)

    def conjugate(self, k, D):
        """Apply ``y**(1/D) -> theta**k * y**(1/D)`` with ``theta = exp(2*pi*i/D)``."""
        out = []
        for e, c in self.terms:
            n = e * D
            if n.denominator != 1:
                raise ValueError(f"exponent {e} is not a multiple of 1/{D}")
            out.append((e, c * mpmath.expjpi(mpmath.mpf(2 * k * int(n) % (2 * D)) / D)))
        return replace(self, terms=tuple(out))

    def with_meta(self, **kw):
        return replace(self, **kw)

    def __str__(self):
        return render_series(self)

    def to_json(self):
        from .export import series_json

        return series_json(self)


def render_series(s, digits=12):
    from .uni import _fmt

    if not s.terms:
        body = "0"
    else:
        body = " + ".join(
            f"{_fmt(c, digits)}" if e == 0 else f"{_fmt(c, digits)} * y^{_fmt_exp(e)}"
            for e, c in s.terms
        )
    if s.trunc != INF:
        body += f" + O(y^{_fmt_exp(Fraction(s.trunc))})"
    return body


@dataclass(frozen=True)
class LeadingTerm:
    """``coefficient * y**exponent``; the zero result has exponent ``inf``."""

    coefficient: object
    exponent: object

    @property
    def is_zero(self):
        return self.exponent == INF


def series_order(s: FractionalPowerSeries):
    """``ord s``; ``inf`` for the zero series."""
    if s.terms:
        return s.terms[0][0]
    if s.exact:
        return INF
    raise TruncationError("order is beyond the truncation")


def series_initial(s: FractionalPowerSeries) -> LeadingTerm:
    if s.terms:
        return LeadingTerm(s.terms[0][1], s.terms[0][0])
    if s.exact:
        return LeadingTerm(mpmath.mpc(0), INF)
    raise TruncationError("initial part is beyond the truncation")


def contact_order(a: FractionalPowerSeries, b: FractionalPowerSeries, tol=None):
    """``O(a, b) = ord(a - b)``; raises :class:`TruncationError` when undecided."""
    limit = min(a.trunc, b.trunc)
    da, db = dict(a.terms), dict(b.terms)
    for e in sorted(set(da) | set(db)):
        if e >= limit:
            break
        ca, cb = da.get(e, 0), db.get(e, 0)
        if ca == 0 or cb == 0 or not coefficients_close(ca, cb, tol):
            return e
    if limit == INF:
        return INF
    raise TruncationError(f"series agree up to the truncation {limit}")


# -- substitution engine -------------------------------------------------------


@dataclass
class TaylorTable:
    """Rows ``A_i`` of ``g(x', y) = sum(A_i(y) x'**i)`` modulo ``y**cutoff``."""

    vals: list
    mags: list
    cutoff: object = INF
    pruned: bool = False

    @classmethod
    def from_poly(cls, f, center=0, cutoff=INF):
        n = max(f.degree_x, 0)
        vals = [dict() for _ in range(n + 1)]
        mags = [dict() for _ in range(n + 1)]
        pruned = False
        for (i, j), c in f.terms.items():
            e = Fraction(j)
            if e >= cutoff:
                pruned = True
                continue
            c = to_mpc(c)
            vals[i][e] = c
            mags[i][e] = abs(c)
        table = cls(vals, mags, cutoff, pruned)
        if center != 0:
            table = table.shift(to_mpc(center), Fraction(0))
        return table

    @property
    def degree(self):
        return len(self.vals) - 1

    def row_order(self, i):
        """Lowest exponent in row ``i``; None when the row is empty."""
        if i >= len(self.vals) or not self.vals[i]:
            return None
        return min(self.vals[i])

    def lowest(self, i):
        e = self.row_order(i)
        return None if e is None else (e, self.vals[i][e])

    def lower_bound(self, i):
        """A certified lower bound for the order of row ``i``."""
        e = self.row_order(i)
        if e is not None:
            return e
        return self.cutoff if self.pruned else INF

    def shift(self, c, s):
        """The table of ``g(c*y**s + x', y)``."""
        c = to_mpc(c)
        s = Fraction(s)
        n = self.degree
        cutoff = self.cutoff
        pruned = self.pruned
        cpow = [mpmath.mpc(1)]
        apow = [mpmath.mpf(1)]
        absc = abs(c)
        for _ in range(n):
            cpow.append(cpow[-1] * c)
            apow.append(apow[-1] * absc)
        vals = [dict() for _ in range(n + 1)]
        mags = [dict() for _ in range(n + 1)]
        for i in range(n + 1):
            row_v, row_m = self.vals[i], self.mags[i]
            if not row_v:
                continue
            for k in range(i + 1):
                m = i - k
                if m and c == 0:
                    continue
                b = comb(i, k)
                fv = b * cpow[m]
                fm = b * apow[m]
                de = m * s
                tv, tm = vals[k], mags[k]
                for e, v in row_v.items():
                    e2 = e + de
                    if e2 >= cutoff:
                        pruned = True
                        continue
                    if e2 in tv:
                        tv[e2] += fv * v
                        tm[e2] += fm * row_m[e]
                    else:
                        tv[e2] = fv * v
                        tm[e2] = fm * row_m[e]
        tol = config.tolerance()
        for tv, tm in zip(vals, mags):
            for e in [e for e, v in tv.items() if abs(v) <= tol * tm[e]]:
                del tv[e]
                del tm[e]
        return TaylorTable(vals, mags, cutoff, pruned)

    def trim(self, r, last):
        """Drop entries that cannot reach rows ``0..r`` below the cutoff.

        Valid once every further substitution has exponent above ``last``:
        an entry of row ``i > r`` at exponent ``e`` only feeds row ``k <= r``
        at exponents ``>= e + (i - r)*last``.
        """
        if self.cutoff == INF or last <= 0:
            return self
        pruned = self.pruned
        vals, mags = list(self.vals), list(self.mags)
        for i in range(r + 1, len(vals)):
            limit = self.cutoff - (i - r) * last
            if any(e >= limit for e in vals[i]):
                pruned = True
                vals[i] = {e: v for e, v in vals[i].items() if e < limit}
                mags[i] = {e: mags[i][e] for e in vals[i]}
        while len(vals) > r + 1 and not vals[-1]:
            vals.pop()
            mags.pop()
        return TaylorTable(vals, mags, self.cutoff, pruned)

    def shift_series(self, s: FractionalPowerSeries):
        table = self
        for e, c in s.terms:
            table = table.shift(c, e)
        return table


def _full_cutoff(f, gamma, center):
    """A cutoff above every exponent of ``f(center + gamma(y), y)``."""
    top = max((e for e, _ in gamma.terms), default=Fraction(0))
    return Fraction(max(f.degree_y, 0)) + max(f.degree_x, 0) * top + 1


@config.precise
def leading_eval(f, gamma: FractionalPowerSeries, center=0) -> LeadingTerm:
    """Lowest-order term of ``f(center + gamma(y), y)``.

    When ``gamma`` is truncated, the unknown tail ``delta`` (of order at least
    ``gamma.trunc``) can only change terms of order at least
    ``min_i(ord d^i f(gamma)/i! + i*trunc)``; the result must lie strictly
    below that bound or :class:`TruncationError` is raised.
    """
    full = _full_cutoff(f, gamma, center)
    cutoff = min(full, Fraction(max(f.degree_y, 1) + 1))
    while True:
        table = TaylorTable.from_poly(f, center, cutoff if cutoff < full else INF)
        tail = gamma.trunc
        for e, c in gamma.terms:
            if e >= table.cutoff:
                # terms from here on only touch row 0 at or above the cutoff
                tail = min(tail, e)
                break
            table = table.shift(c, e).trim(0, e)
        if tail == INF:
            bound = INF
        else:
            bound = min(
                (table.lower_bound(i) + i * tail for i in range(1, table.degree + 1)),
                default=INF,
            )
        limited = tail == gamma.trunc or cutoff >= full
        low = table.lowest(0)
        if low is not None:
            e, v = low
            if e < bound:
                return LeadingTerm(v, e)
            if limited:
                raise TruncationError(
                    f"leading exponent {e} is not below the tail bound {bound}"
                )
        elif not table.pruned and tail == gamma.trunc:
            if bound == INF:
                return LeadingTerm(mpmath.mpc(0), INF)
            raise TruncationError("value vanishes to the known order")
        elif cutoff >= full or (limited and bound <= cutoff):
            raise TruncationError("value vanishes to the known order")
        cutoff = min(full, 2 * cutoff)

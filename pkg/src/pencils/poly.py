"""Bivariate polynomials with exact rational or big-complex coefficients.

A :class:`BivarPoly` maps exponent pairs ``(i, j)`` (the monomial
``x**i * y**j``) to nonzero coefficients.  Coefficients are either
:class:`fractions.Fraction` (the exact kind used for all user input) or
``mpmath.mpc`` (the kind produced by substituting algebraic constants such
as points at infinity).  The two kinds may be mixed; any arithmetic that
touches an ``mpc`` yields ``mpc`` coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from types import MappingProxyType

import mpmath
import sympy

__all__ = [
    "BivarPoly",
    "X",
    "Y",
    "gcd",
    "exact_quotient",
    "squarefree_decompose",
    "partial_x",
    "partial_y",
]


def _coerce(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, (mpmath.mpc, mpmath.mpf, complex, float)):
        return mpmath.mpc(c)
    if isinstance(c, sympy.Rational):
        return Fraction(int(c.p), int(c.q))
    raise TypeError(f"unsupported coefficient {c!r}")


class BivarPoly:
    """Immutable sparse polynomial in ``x`` and ``y``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        for (i, j), c in dict(terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            c = _coerce(c)
            if c != 0:
                clean[(int(i), int(j))] = c
        self._terms = clean
        self._hash = None

    # -- construction -------------------------------------------------------

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i, j, c=1):
        return cls({(i, j): c})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def coeff(self, i, j):
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(k == (0, 0) for k in self._terms)

    @property
    def is_rational(self):
        return all(isinstance(c, Fraction) for c in self._terms.values())

    @property
    def degree_x(self):
        return max((i for i, _ in self._terms), default=-1)

    @property
    def degree_y(self):
        return max((j for _, j in self._terms), default=-1)

    @property
    def total_degree(self):
        return max((i + j for i, j in self._terms), default=-1)

    def homogeneous_part(self, k):
        return BivarPoly({e: c for e, c in self._terms.items() if sum(e) == k})

    def x_coefficients(self):
        """List ``A`` with ``self == sum(A[i](y) * x**i)``; ``A[i]`` maps j to coefficient."""
        out = [dict() for _ in range(self.degree_x + 1)]
        for (i, j), c in self._terms.items():
            out[i][j] = c
        return out

    def order_in_x_at_zero(self):
        """``ord f(x, 0)``: the lowest power of x in ``f(x, 0)``, or None if it vanishes."""
        return min((i for i, j in self._terms if j == 0), default=None)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return BivarPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        out = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                e = (i1 + i2, j1 + j2)
                out[e] = out.get(e, 0) + c1 * c2
        return BivarPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_poly(other)
        if not other.is_constant():
            raise TypeError("division only by a constant")
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        c = other.coeff(0, 0)
        return BivarPoly({e: v / c for e, v in self._terms.items()})

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = BivarPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BivarPoly.const(other)
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset((e, c if isinstance(c, Fraction) else complex(c))
                                        for e, c in self._terms.items()))
        return self._hash

    # -- calculus and substitution -----------------------------------------

    def partial_x(self):
        return BivarPoly({(i - 1, j): i * c for (i, j), c in self._terms.items() if i})

    def partial_y(self):
        return BivarPoly({(i, j - 1): j * c for (i, j), c in self._terms.items() if j})

    def __call__(self, x, y):
        return sum((c * x**i * y**j for (i, j), c in self._terms.items()), Fraction(0))

    def compose(self, xsub, ysub, truncate=None):
        """``f(xsub, ysub)`` with both substitutions bivariate polynomials.

        With ``truncate`` set, all terms of total degree above it are dropped
        after every multiplication.
        """
        xsub, ysub = _as_poly(xsub), _as_poly(ysub)
        cut = (lambda p: p.truncate_total(truncate)) if truncate is not None else (lambda p: p)
        xpow, ypow = [BivarPoly.const(1)], [BivarPoly.const(1)]
        for _ in range(max(self.degree_x, 0)):
            xpow.append(cut(xpow[-1] * xsub))
        for _ in range(max(self.degree_y, 0)):
            ypow.append(cut(ypow[-1] * ysub))
        total = BivarPoly()
        for (i, j), c in self._terms.items():
            total = total + cut(xpow[i] * ypow[j]) * c
        return cut(total)

    def shift_x(self, a):
        """``f(x + a, y)`` computed by binomial expansion."""
        out = {}
        for (i, j), c in self._terms.items():
            for k in range(i + 1):
                e = (k, j)
                out[e] = out.get(e, 0) + c * comb(i, k) * a ** (i - k)
        return BivarPoly(out)

    def swap(self):
        return BivarPoly({(j, i): c for (i, j), c in self._terms.items()})

    def truncate_total(self, n):
        return BivarPoly({e: c for e, c in self._terms.items() if sum(e) <= n})

    def scale(self, c):
        return BivarPoly({e: v * c for e, v in self._terms.items()})

    def primitive_monic(self):
        """Divide by the leading coefficient in lexicographic order."""
        if self.is_zero():
            return self
        lead = self._terms[max(self._terms)]
        return self.scale(1 / lead)

    # -- rendering ----------------------------------------------------------

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"BivarPoly({to_text(self)!r})"

    # -- sympy bridge -------------------------------------------------------

    def to_sympy(self):
        if not self.is_rational:
            raise TypeError("only rational polynomials convert to sympy")
        x, y = sympy.symbols("x y")
        data = {e: sympy.Rational(c.numerator, c.denominator) for e, c in self._terms.items()}
        if not data:
            return sympy.Poly(0, x, y, domain="QQ")
        return sympy.Poly.from_dict(data, x, y, domain="QQ")

    @classmethod
    def from_sympy(cls, p):
        x, y = sympy.symbols("x y")
        p = sympy.Poly(p, x, y)
        return cls({e: _coerce(sympy.Rational(c)) for e, c in p.as_dict().items()})


X = BivarPoly.monomial(1, 0)
Y = BivarPoly.monomial(0, 1)


def _as_poly(v):
    if isinstance(v, BivarPoly):
        return v
    return BivarPoly.const(v)


def _coeff_text(c):
    if isinstance(c, Fraction):
        return str(c)
    re, im = mpmath.nstr(c.real, 20), mpmath.nstr(c.imag, 20)
    return f"({re}{'+' if c.imag >= 0 else '-'}{mpmath.nstr(abs(c.imag), 20)}*i)" if c.imag else re


def to_text(f):
    """Render ``f`` in the input grammar (exact for rational coefficients)."""
    if f.is_zero():
        return "0"
    pieces = []
    for (i, j) in sorted(f.terms, key=lambda e: (-(e[0] + e[1]), -e[0])):
        c = f.terms[(i, j)]
        negative = isinstance(c, Fraction) and c < 0
        mag = -c if negative else c
        mono = "*".join(
            v if k == 1 else f"{v}^{k}" for v, k in (("x", i), ("y", j)) if k
        )
        if not mono:
            body = _coeff_text(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_coeff_text(mag)}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def partial_x(f: BivarPoly) -> BivarPoly:
    return f.partial_x()


def partial_y(f: BivarPoly) -> BivarPoly:
    return f.partial_y()


def gcd(f: BivarPoly, g: BivarPoly) -> BivarPoly:
    """Exact gcd over Q, normalized by :meth:`BivarPoly.primitive_monic`."""
    if f.is_zero():
        return g.primitive_monic()
    if g.is_zero():
        return f.primitive_monic()
    return BivarPoly.from_sympy(sympy.gcd(f.to_sympy(), g.to_sympy())).primitive_monic()


def exact_quotient(f: BivarPoly, g: BivarPoly) -> BivarPoly:
    q, r = sympy.div(f.to_sympy(), g.to_sympy())
    if not r.is_zero:
        raise ArithmeticError("division is not exact")
    return BivarPoly.from_sympy(q)


def squarefree_decompose(f: BivarPoly) -> list[tuple[BivarPoly, int]]:
    """Pairwise coprime squarefree factors with multiplicities.

    The product of ``g**m`` over the result equals ``f`` up to a nonzero
    rational constant.  Constant factors are omitted.
    """
    if f.is_zero():
        raise ValueError("cannot decompose the zero polynomial")
    _, factors = sympy.sqf_list(f.to_sympy())
    out = [(BivarPoly.from_sympy(g).primitive_monic(), int(m)) for g, m in factors]
    return sorted(out, key=lambda gm: (gm[1], to_text(gm[0])))

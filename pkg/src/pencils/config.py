"""Working precision and tolerance settings shared by the numeric routines."""

from __future__ import annotations

import functools
from contextlib import contextmanager
from dataclasses import dataclass, replace

import mpmath

DEFAULT_PRECISION = 256
MAX_ITERATIONS = 1000


@dataclass(frozen=True)
class RunConfig:
    """Numeric knobs for one analysis run.

    ``tol`` is the relative threshold below which a computed coefficient is
    treated as zero and two values are treated as equal.  When left as None
    it is derived from the precision as ``2**(-precision/2)``.
    """

    precision: int = DEFAULT_PRECISION
    tol: float | None = None
    max_order: object = None
    seed: int = 20240531
    format: str = "text"

    def __post_init__(self):
        if self.precision < 64:
            raise ValueError("precision must be at least 64 bits")
        if self.tol is not None and not 0 < self.tol < 1:
            raise ValueError("tolerance must lie in (0, 1)")

    @property
    def tolerance(self):
        if self.tol is None:
            return mpmath.mpf(2) ** (-(self.precision // 2))
        return mpmath.mpf(self.tol)


_current = RunConfig()


def current() -> RunConfig:
    return _current


def tolerance():
    """The relative zero/equality tolerance of the active configuration."""
    return _current.tolerance


@contextmanager
def configured(config: RunConfig | None = None, **changes):
    """Temporarily install ``config`` (or the current one with ``changes``)."""
    global _current
    saved = _current
    _current = replace(config or saved, **changes)
    try:
        with mpmath.workprec(_current.precision):
            yield _current
    finally:
        _current = saved


def precise(func):
    """Run ``func`` at the working precision of the active configuration."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        if mpmath.mp.prec == _current.precision:
            return func(*args, **kwargs)
        with mpmath.workprec(_current.precision):
            return func(*args, **kwargs)

    return wrapper

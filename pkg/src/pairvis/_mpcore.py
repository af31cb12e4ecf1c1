"""Shared extended-precision helpers.

Several contracts in this package sit below double-precision resolution
(complementarity sums within 1e-20 of 1, epsilon bounds of order e^{-100}).
Scalar closed forms are therefore evaluated with mpmath at 50 significant
digits and rounded exactly once at the float boundary.
"""

from __future__ import annotations

import mpmath

DPS = 50


_LOG10_E = 0.4342944819032518


def workdps(params=None) -> mpmath.ctx_base.StandardBaseContext:
    """Context manager selecting the package-wide working precision.

    When ``params`` is given, the precision is raised so that quantities of
    order e^{-2a(h1^2+h2^2)} — the smallest scale appearing in the closed
    forms — stay comfortably above the cancellation noise of 1 - V^2 - D^2.
    """
    dps = DPS
    if params is not None:
        scale = 2.0 * params.a * (params.h1 * params.h1 + params.h2 * params.h2)
        dps = max(DPS, 30 + int(scale * _LOG10_E))
    return mpmath.workdps(dps)


def mpf(x) -> mpmath.mpf:
    return mpmath.mpf(x)


def trig2(xi) -> tuple[mpmath.mpf, mpmath.mpf]:
    """(cos 2xi, sin 2xi) at working precision."""
    two_xi = 2 * mpmath.mpf(xi)
    return mpmath.cos(two_xi), mpmath.sin(two_xi)


def slit_exponentials(a, h1, h2) -> tuple[mpmath.mpf, mpmath.mpf]:
    """(e^{-2a h1^2}, e^{-2a h2^2}); mpmath never underflows these."""
    a, h1, h2 = mpmath.mpf(a), mpmath.mpf(h1), mpmath.mpf(h2)
    return mpmath.exp(-2 * a * h1 * h1), mpmath.exp(-2 * a * h2 * h2)


def b2(a, h1, h2, xi) -> mpmath.mpf:
    """Squared normalization constant, extended precision."""
    e1, e2 = slit_exponentials(a, h1, h2)
    c2, _ = trig2(xi)
    return 2 / (1 + e1 * e2 + (e1 + e2) * c2)

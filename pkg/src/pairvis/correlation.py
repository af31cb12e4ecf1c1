"""Second moments, correlation coefficients, and complementarity sums.

Closed-form covariances and variances in both bases, the normalized
correlation measures R (position) and S (wavenumber), and the four
complementarity sums.  The wavenumber covariance decays like
e^{-2a(h1^2+h2^2)} and underflows float64 almost immediately, so its
magnitude is reported as log10|rho| with the sign carried separately; the
normalized S stays O(1) because the decaying factor cancels in the ratio.

All scalars are evaluated in extended precision and rounded once to float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np

from . import _mpcore
from .state import Axis, SetupParams, normalization_b2
from .visibility import single_particle_v_mp

PI = math.pi

__all__ = [
    "CorrelationReport",
    "MomentSet",
    "PracticalityDiagnostic",
    "complementarity_sums",
    "marginal_k1_mixed",
    "moments_k",
    "moments_x",
    "normalized_r",
    "normalized_s",
    "practicality_diagnostic",
    "rho_k_log10_abs",
    "rho_k_sign",
    "rho_x",
]


@dataclass(frozen=True)
class MomentSet:
    """First and second moments of one basis (means vanish by symmetry)."""

    basis: Axis
    mean1: float
    mean2: float
    cov: float
    var1: float
    var2: float


def _moments_x_mp(params: SetupParams):
    a = mpmath.mpf(params.a)
    h1 = mpmath.mpf(params.h1)
    h2 = mpmath.mpf(params.h2)
    c2, s2 = _mpcore.trig2(params.xi)
    e1, e2 = _mpcore.slit_exponentials(params.a, params.h1, params.h2)
    b2 = _mpcore.b2(params.a, params.h1, params.h2, params.xi)
    cov = b2 / 2 * h1 * h2 * s2
    var1 = b2 / (8 * a) * (e1 * e2 + e1 * c2 + (1 + 4 * a * h1 * h1) * (1 + e2 * c2))
    var2 = b2 / (8 * a) * (e1 * e2 + e2 * c2 + (1 + 4 * a * h2 * h2) * (1 + e1 * c2))
    return cov, var1, var2


def _moments_k_mp(params: SetupParams):
    a = mpmath.mpf(params.a)
    h1 = mpmath.mpf(params.h1)
    h2 = mpmath.mpf(params.h2)
    c2, s2 = _mpcore.trig2(params.xi)
    e1, e2 = _mpcore.slit_exponentials(params.a, params.h1, params.h2)
    b2 = _mpcore.b2(params.a, params.h1, params.h2, params.xi)
    cov = -2 * a * a * b2 * e1 * e2 * h1 * h2 * s2
    var1 = a * b2 / 2 * (1 + e2 * c2 + e1 * (1 - 4 * a * h1 * h1) * (e2 + c2))
    var2 = a * b2 / 2 * (1 + e1 * c2 + e2 * (1 - 4 * a * h2 * h2) * (e1 + c2))
    return cov, var1, var2


def moments_x(params: SetupParams) -> MomentSet:
    with _mpcore.workdps():
        cov, var1, var2 = _moments_x_mp(params)
        return MomentSet(Axis.POSITION, 0.0, 0.0, float(cov), float(var1), float(var2))


def moments_k(params: SetupParams) -> MomentSet:
    """Wavenumber moments; note ``cov`` may underflow to 0.0 as a float.

    Use :func:`rho_k_log10_abs` / :func:`rho_k_sign` for the magnitude.
    """
    with _mpcore.workdps():
        cov, var1, var2 = _moments_k_mp(params)
        return MomentSet(Axis.WAVENUMBER, 0.0, 0.0, float(cov), float(var1), float(var2))


def _rho_x_mp(params: SetupParams):
    cov, var1, var2 = _moments_x_mp(params)
    return cov / mpmath.sqrt(var1 * var2)


def _rho_k_mp(params: SetupParams):
    cov, var1, var2 = _moments_k_mp(params)
    return cov / mpmath.sqrt(var1 * var2)


def rho_x(params: SetupParams) -> float:
    with _mpcore.workdps():
        return float(_rho_x_mp(params))


def rho_k_log10_abs(params: SetupParams) -> Optional[float]:
    """log10 |rho(k1,k2)|, or None when the correlation is exactly zero."""
    with _mpcore.workdps():
        rho = _rho_k_mp(params)
        if rho == 0:
            return None
        return float(mpmath.log10(abs(rho)))


def rho_k_sign(params: SetupParams) -> int:
    with _mpcore.workdps():
        rho = _rho_k_mp(params)
        return int(mpmath.sign(rho))


def _normalized_r_mp(params: SetupParams):
    ref = params.with_xi(PI / 4.0)
    return abs(_rho_x_mp(params)) / abs(_rho_x_mp(ref))


def _normalized_s_mp(params: SetupParams):
    ref = params.with_xi(PI / 4.0)
    return abs(_rho_k_mp(params)) / abs(_rho_k_mp(ref))


def normalized_r(params: SetupParams) -> float:
    """Position correlation normalized to the maximally entangled angle."""
    with _mpcore.workdps():
        return float(_normalized_r_mp(params))


def normalized_s(params: SetupParams) -> float:
    """Wavenumber correlation normalized to the maximally entangled angle."""
    with _mpcore.workdps():
        return float(_normalized_s_mp(params))


def marginal_k1_mixed(params: SetupParams, k1) -> np.ndarray:
    """First-subsystem wavenumber marginal obtained from the mixed basis.

    Closed form of ∫ |psi(k1, x2)|^2 dx2.  Algebraically this equals the
    joint-wavenumber marginal -- the no-communication statement: measuring
    position or wavenumber on the second subsystem cannot alter the first
    subsystem's distribution -- but the expression is assembled from the
    mixed-basis branch weights rather than the joint-density braces.
    """
    k = np.asarray(k1, dtype=float)
    a, h1, h2 = params.a, params.h1, params.h2
    b2 = normalization_b2(params)
    e2 = math.exp(-2.0 * a * h2 * h2)
    cx2 = math.cos(params.xi) ** 2
    sx2 = math.sin(params.xi) ** 2
    pref = b2 * np.exp(-k * k / (2.0 * a)) / math.sqrt(2.0 * a * PI)
    ck = np.cos(h1 * k)
    sk = np.sin(h1 * k)
    return pref * (ck * ck * cx2 * (1.0 + e2) + sk * sk * sx2 * (1.0 - e2))


@dataclass(frozen=True)
class PracticalityDiagnostic:
    """Whether the wavenumber correlation is experimentally detectable at all."""

    rho_k_pi4_log10_abs: Optional[float]
    floor: float
    flagged: bool


def practicality_diagnostic(params: SetupParams, floor: float = 1e-15) -> PracticalityDiagnostic:
    """Flag parameter sets whose |rho_k| at xi = pi/4 falls below ``floor``."""
    if floor < 0:
        raise ValueError("floor must be non-negative")
    with _mpcore.workdps():
        rho = _rho_k_mp(params.with_xi(PI / 4.0))
        mag = abs(rho)
        log10_abs = None if mag == 0 else float(mpmath.log10(mag))
        flagged = bool(mag < floor)
    return PracticalityDiagnostic(rho_k_pi4_log10_abs=log10_abs, floor=floor, flagged=flagged)


@dataclass(frozen=True)
class CorrelationReport:
    """Correlation measures plus the four complementarity sums."""

    params: SetupParams
    rho_x: float
    rho_k_log10_abs: Optional[float]
    rho_k_sign: int
    R: float
    S: float
    V2_plus_R2: float
    V2_plus_S2: float
    rhox2_plus_V2: float
    rhok2_plus_V2: float
    detectability_flag: bool

    def to_dict(self) -> dict:
        p = self.params
        return {
            "a": p.a,
            "h1": p.h1,
            "h2": p.h2,
            "xi": p.xi,
            "rho_x": self.rho_x,
            "rho_k_log10_abs": self.rho_k_log10_abs,
            "rho_k_sign": self.rho_k_sign,
            "R": self.R,
            "S": self.S,
            "V2_plus_R2": self.V2_plus_R2,
            "V2_plus_S2": self.V2_plus_S2,
            "rhox2_plus_V2": self.rhox2_plus_V2,
            "rhok2_plus_V2": self.rhok2_plus_V2,
            "detectability_flag": self.detectability_flag,
        }


def complementarity_sums(params: SetupParams, floor: float = 1e-15) -> CorrelationReport:
    """Evaluate V^2 + R^2, V^2 + S^2, rho_x^2 + V^2 and rho_k^2 + V^2.

    The sums approach 1 (or cos^2 2xi for the unnormalized rho_k sum) with
    corrections of order e^{-a}; they are formed at extended precision so the
    float results are the correctly rounded mathematical values rather than
    artifacts of sin^2 + cos^2 != 1 in binary64.
    """
    with _mpcore.workdps():
        v = single_particle_v_mp(params)
        rx = _rho_x_mp(params)
        rk = _rho_k_mp(params)
        r = _normalized_r_mp(params)
        s = _normalized_s_mp(params)
        mag = abs(_rho_k_mp(params.with_xi(PI / 4.0)))
        report = CorrelationReport(
            params=params,
            rho_x=float(rx),
            rho_k_log10_abs=None if rk == 0 else float(mpmath.log10(abs(rk))),
            rho_k_sign=int(mpmath.sign(rk)),
            R=float(r),
            S=float(s),
            V2_plus_R2=float(v * v + r * r),
            V2_plus_S2=float(v * v + s * s),
            rhox2_plus_V2=float(rx * rx + v * v),
            rhok2_plus_V2=float(rk * rk + v * v),
            detectability_flag=bool(mag < floor),
        )
    return report

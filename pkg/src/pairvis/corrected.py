"""Indirect (corrected-distribution) route to two-particle visibility.

The corrected density removes the single-particle fringe structure from the
joint wavenumber density and restores the xi-independent background:

    P_bar = |psi|^2 - P(k1; xi) P(k2; xi) + [added term]

where the added term is the product of the maximally entangled (xi = pi/4)
marginal shapes.  Two coefficient conventions exist for it: the default
``"b4_xi"`` weights the added product with B^4(xi) (the form used by the
diagonal-slice expression below); ``"b4_pi4"`` uses the literal product of
xi = pi/4 marginals, i.e. B^4(pi/4).

Along the slit-weighted diagonals the corrected slice admits three envelopes
(env-, env+, env0).  The alternative visibility F is the best contrast among
the active pair: (env+, env-) for distinct slit separations, (env0, env-) for
equal ones.  After phase pinning the envelope ratio is s-independent (every
brace term shares the same Gaussian profile), so the contrast is evaluated
from the pinned constants; the first pin point is still reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import mpmath
import numpy as np

from . import _mpcore
from .density import density_at
from .radon import marginal_k1, marginal_k2
from .state import KK, SetupParams, normalization_b2

PI = math.pi

__all__ = [
    "CorrectedReport",
    "CorrectedSliceEnvelopes",
    "corrected_density",
    "corrected_envelopes",
    "corrected_f",
    "corrected_slice_spm",
    "slice_envelope_crossover",
]

_CONVENTIONS = ("b4_xi", "b4_pi4")


def _check_convention(convention: str) -> None:
    if convention not in _CONVENTIONS:
        raise ValueError(f"convention must be one of {_CONVENTIONS}, got {convention!r}")


def corrected_density(params: SetupParams, k1, k2, convention: str = "b4_xi") -> np.ndarray:
    """Corrected joint wavenumber distribution (compositional route)."""
    _check_convention(convention)
    base = density_at(params, KK, k1, k2)
    sub = marginal_k1(params, k1) * marginal_k2(params, k2)
    pi4 = params.with_xi(PI / 4.0)
    add = marginal_k1(pi4, k1) * marginal_k2(pi4, k2)
    if convention == "b4_xi":
        ratio = normalization_b2(params) / normalization_b2(pi4)
        add = add * (ratio * ratio)
    return base - sub + add


def corrected_slice_spm(params: SetupParams, sign: int, s, convention: str = "b4_xi") -> np.ndarray:
    """Corrected density along the s+/s- diagonal at zero transverse offset.

    Independent of :func:`corrected_density`: evaluated from the explicit
    diagonal-slice expression with phases alpha = s h1^2/sqrt(H),
    beta = s h2^2/sqrt(H), H = h1^2 + h2^2.
    """
    _check_convention(convention)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    s_arr = np.asarray(s, dtype=float)
    a, h1, h2 = params.a, params.h1, params.h2
    hh1, hh2 = h1 * h1, h2 * h2
    rh = math.sqrt(hh1 + hh2)
    alpha = s_arr * hh1 / rh
    beta = s_arr * hh2 / rh
    b2 = normalization_b2(params)
    b4 = b2 * b2
    b4_add = b4 if convention == "b4_xi" else normalization_b2(params.with_xi(PI / 4.0)) ** 2
    c2 = math.cos(2.0 * params.xi)
    cx = math.cos(params.xi)
    sx = math.sin(params.xi)
    e1 = math.exp(-2.0 * a * hh1)
    e2 = math.exp(-2.0 * a * hh2)
    t1 = b2 * (np.cos(alpha) * np.cos(beta) * cx - sign * np.sin(alpha) * np.sin(beta) * sx) ** 2
    t2 = -(b4 / 8.0) * (1.0 + e2 * c2 + (c2 + e2) * np.cos(2.0 * alpha)) * (
        1.0 + e1 * c2 + (c2 + e1) * np.cos(2.0 * beta)
    )
    t3 = (b4_add / 8.0) * (1.0 + e2 * np.cos(2.0 * alpha)) * (1.0 + e1 * np.cos(2.0 * beta))
    return (1.0 / (a * PI)) * np.exp(-s_arr * s_arr / (2.0 * a)) * (t1 + t2 + t3)


def _pinned_constant_mp(params: SetupParams, sign: int, which: str, convention: str):
    """Brace constant of the corrected slice after phase pinning.

    Substitutions (applied to every alpha/beta occurrence):
      env-: alpha -> pi/4, beta -> pi/4
      env+: alpha -> pi/4, beta -> -pi/4
      env0: alpha -> pi/2, beta -> pi/2
    """
    xi = mpmath.mpf(params.xi)
    cx, sx = mpmath.cos(xi), mpmath.sin(xi)
    c2, _ = _mpcore.trig2(params.xi)
    e1, e2 = _mpcore.slit_exponentials(params.a, params.h1, params.h2)
    b2 = _mpcore.b2(params.a, params.h1, params.h2, params.xi)
    b4 = b2 * b2
    if convention == "b4_xi":
        b4_add = b4
    else:
        b4_add = _mpcore.b2(params.a, params.h1, params.h2, PI / 4.0) ** 2
    if which == "minus":
        bracket = (cx - sign * sx) / 2
        c2a = c2b = mpmath.mpf(0)
    elif which == "plus":
        bracket = (cx + sign * sx) / 2
        c2a = c2b = mpmath.mpf(0)
    elif which == "zero":
        bracket = -sign * sx
        c2a = c2b = mpmath.mpf(-1)
    else:
        raise ValueError(which)
    return (
        b2 * bracket * bracket
        - (b4 / 8) * (1 + e2 * c2 + (c2 + e2) * c2a) * (1 + e1 * c2 + (c2 + e1) * c2b)
        + (b4_add / 8) * (1 + e2 * c2a) * (1 + e1 * c2b)
    )


def _slits_equal(params: SetupParams) -> bool:
    return abs(params.h1 - params.h2) <= 1e-12 * max(params.h1, params.h2)


@dataclass
class CorrectedSliceEnvelopes:
    """The three pinned envelopes of a corrected diagonal slice."""

    sign: int
    convention: str
    env_minus: Callable[[np.ndarray], np.ndarray]
    env_plus: Callable[[np.ndarray], np.ndarray]
    env_zero: Callable[[np.ndarray], np.ndarray]
    active_pair: str  # "plus_minus" or "zero_minus"
    _k_minus: object = field(repr=False, default=None)
    _k_plus: object = field(repr=False, default=None)
    _k_zero: object = field(repr=False, default=None)


def corrected_envelopes(
    params: SetupParams, sign: int, convention: str = "b4_xi"
) -> CorrectedSliceEnvelopes:
    _check_convention(convention)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    with _mpcore.workdps():
        k_minus = _pinned_constant_mp(params, sign, "minus", convention)
        k_plus = _pinned_constant_mp(params, sign, "plus", convention)
        k_zero = _pinned_constant_mp(params, sign, "zero", convention)
        km_f, kp_f, k0_f = float(k_minus), float(k_plus), float(k_zero)
    a = params.a

    def _pref(s: np.ndarray) -> np.ndarray:
        s_arr = np.asarray(s, dtype=float)
        return (1.0 / (a * PI)) * np.exp(-s_arr * s_arr / (2.0 * a))

    return CorrectedSliceEnvelopes(
        sign=sign,
        convention=convention,
        env_minus=lambda s: _pref(s) * km_f,
        env_plus=lambda s: _pref(s) * kp_f,
        env_zero=lambda s: _pref(s) * k0_f,
        active_pair="zero_minus" if _slits_equal(params) else "plus_minus",
        _k_minus=k_minus,
        _k_plus=k_plus,
        _k_zero=k_zero,
    )


@dataclass(frozen=True)
class CorrectedReport:
    """Indirect-method scalars; ``F`` is the best corrected-slice contrast."""

    params: SetupParams
    v_splus: float
    v_sminus: float
    F: float
    equality_mode: bool
    convention: str
    pin_s: float  # first pin point of the dominant phase (envelope touch location)

    def to_dict(self) -> dict:
        p = self.params
        return {
            "a": p.a,
            "h1": p.h1,
            "h2": p.h2,
            "xi": p.xi,
            "F": self.F,
            "v_splus": self.v_splus,
            "v_sminus": self.v_sminus,
            "equality_mode": self.equality_mode,
            "convention": self.convention,
        }


def _corrected_vis_mp(params: SetupParams, sign: int, convention: str, equal: bool):
    k_minus = _pinned_constant_mp(params, sign, "minus", convention)
    k_other = _pinned_constant_mp(params, sign, "zero" if equal else "plus", convention)
    denom = k_other + k_minus
    if denom == 0:
        return mpmath.mpf(0)
    return abs(k_other - k_minus) / denom


def corrected_f_mp(params: SetupParams, convention: str = "b4_xi"):
    equal = _slits_equal(params)
    vp = _corrected_vis_mp(params, 1, convention, equal)
    vm = _corrected_vis_mp(params, -1, convention, equal)
    return vp, vm, max(vp, vm)


def corrected_f(params: SetupParams, convention: str = "b4_xi") -> CorrectedReport:
    _check_convention(convention)
    equal = _slits_equal(params)
    with _mpcore.workdps():
        vp, vm, f = corrected_f_mp(params, convention)
        vp_f, vm_f, f_f = float(vp), float(vm), float(f)
    hh_max = max(params.h1, params.h2) ** 2
    rh = math.sqrt(params.h1 ** 2 + params.h2 ** 2)
    pin_s = (PI / 4.0) * rh / hh_max
    return CorrectedReport(
        params=params,
        v_splus=vp_f,
        v_sminus=vm_f,
        F=f_f,
        equality_mode=equal,
        convention=convention,
        pin_s=pin_s,
    )


def slice_envelope_crossover(
    params: SetupParams,
    sign: int,
    s_axis: Optional[np.ndarray] = None,
    convention: str = "b4_xi",
) -> Optional[float]:
    """Largest |s| at which the slice still exceeds env0 (diagnostic).

    For distinct slit separations the corrected slice leaves the (env0, env-)
    band in its tails and is bounded by (env+, env-) instead; this reports
    where that happens, or None if the slice never exceeds env0.
    """
    if s_axis is None:
        half = 10.0 * math.sqrt(params.a)
        s_axis = np.linspace(-half, half, 4001)
    s_arr = np.asarray(s_axis, dtype=float)
    env = corrected_envelopes(params, sign, convention)
    slice_vals = corrected_slice_spm(params, sign, s_arr, convention)
    excess = slice_vals - env.env_zero(s_arr)
    scale = float(np.max(np.abs(slice_vals))) or 1.0
    mask = excess > 1e-12 * scale
    if not bool(np.any(mask)):
        return None
    return float(np.max(np.abs(s_arr[mask])))

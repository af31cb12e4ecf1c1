"""Self-check suite behind the ``validate`` CLI command.

Each check compares an independent pair of routes (closed form vs quadrature,
or two distinct closed-form paths) and reports its worst deviation against a
tolerance.  The quick variant trims the parameter lattice so the whole suite
runs in a few seconds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from . import corrected, correlation, density, radon, visibility
from .state import KK, KX, XK, XX, SetupParams, decomposition_residual

PI = math.pi

__all__ = ["CheckResult", "run_validation"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float
    passed: bool
    seconds: float


_XI_GRID = (0.0, PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0, 3.0 * PI / 4.0)


def _lattice(quick: bool) -> list[SetupParams]:
    a_values = (2.0, 30.0) if quick else (2.0, 5.0, 10.0, 30.0)
    h_values = ((1.0, 2.0),) if quick else ((1.0, 1.0), (1.0, 2.0), (2.0, 2.0))
    xi_values = (0.3, PI / 4.0) if quick else _XI_GRID
    return [
        SetupParams(a, h1, h2, xi)
        for a in a_values
        for (h1, h2) in h_values
        for xi in xi_values
    ]


def _check(name: str, tol: float, dev_fn: Callable[[], float]) -> CheckResult:
    start = time.perf_counter()
    try:
        dev = dev_fn()
    except density.QuadratureError:
        # an unsatisfiable quadrature tolerance is a failed check, not a crash
        dev = math.inf
    elapsed = time.perf_counter() - start
    return CheckResult(name, dev, tol, dev <= tol, elapsed)


def _normalization_dev(params_list: Iterable[SetupParams], tol_quad: float) -> float:
    worst = 0.0
    for params in params_list:
        for basis in (XX, KK, KX, XK):
            mass = density.normalization_mass(params, basis, tol=tol_quad)
            worst = max(worst, abs(mass - 1.0))
    return worst


def _decomposition_dev(params_list: Iterable[SetupParams], n: int = 100_000) -> float:
    rng = np.random.default_rng(20260826)
    worst = 0.0
    for params in params_list:
        for basis in (XX, KK):
            (lo1, hi1), (lo2, hi2) = density.basis_domains(params, basis)
            u = rng.uniform(lo1, hi1, n)
            v = rng.uniform(lo2, hi2, n)
            worst = max(worst, float(np.max(decomposition_residual(params, basis, u, v))))
    return worst


def _radon_dev(params_list: Iterable[SetupParams], tol_quad: float, n_s: int = 51) -> float:
    worst = 0.0
    for params in params_list:
        s = np.linspace(-6.0 * math.sqrt(params.a), 6.0 * math.sqrt(params.a), n_s)
        pairs = [
            (radon.RadonAngle.k1(), radon.marginal_k1(params, s)),
            (radon.RadonAngle.k2(), radon.marginal_k2(params, s)),
            (radon.RadonAngle.kplus(), radon.marginal_kpm(params, 1, s)),
            (radon.RadonAngle.kminus(), radon.marginal_kpm(params, -1, s)),
            (radon.RadonAngle.splus(params), radon.marginal_spm(params, 1, s)),
            (radon.RadonAngle.sminus(params), radon.marginal_spm(params, -1, s)),
        ]
        for angle, closed in pairs:
            numeric = radon.radon_numeric(params, angle, s, tol=tol_quad)
            worst = max(worst, float(np.max(np.abs(numeric.values - closed))))
    return worst


def _moment_dev(params_list: Iterable[SetupParams], tol_quad: float) -> float:
    """Relative deviation of closed-form moments vs 2d quadrature.

    Restricted to the moments float64 quadrature can actually resolve: the
    position basis and the wavenumber variances.  The wavenumber covariance
    shrinks below the float64 cancellation floor and has a dedicated
    extended-precision oracle in the test suite.
    """
    worst = 0.0
    for params in params_list:
        for basis, moments in ((XX, correlation.moments_x(params)), (KK, correlation.moments_k(params))):
            ub, vb = density.basis_domains(params, basis)
            hints = density.basis_panel_hints(params, basis)

            def quad(weight: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
                return density.quadrature_2d(
                    lambda u, v: weight(u, v) * density.density_at(params, basis, u, v),
                    ub,
                    vb,
                    tol=tol_quad,
                    min_panels=hints,
                )

            checks = [(moments.var1, quad(lambda u, v: u * u)), (moments.var2, quad(lambda u, v: v * v))]
            if basis is XX:
                checks.append((moments.cov, quad(lambda u, v: u * v)))
            for closed, numeric in checks:
                worst = max(worst, abs(numeric - closed) / max(abs(closed), 1e-30))
    return worst


def _epsilon_bound_dev(params_list: Iterable[SetupParams]) -> float:
    # positive means the guarantee |epsilon| < bound is violated
    worst = -math.inf
    for params in params_list:
        eps, bound = visibility.epsilon_and_bound(params)
        worst = max(worst, abs(eps) - bound)
    return max(worst, 0.0)


def _no_communication_dev(params_list: Iterable[SetupParams]) -> float:
    worst = 0.0
    for params in params_list:
        k = np.linspace(-8.0 * math.sqrt(params.a), 8.0 * math.sqrt(params.a), 401)
        worst = max(
            worst,
            float(np.max(np.abs(correlation.marginal_k1_mixed(params, k) - radon.marginal_k1(params, k)))),
        )
    return worst


def _pin_dev(params_list: Iterable[SetupParams]) -> float:
    worst = 0.0
    for params in params_list:
        for obs in ("k1", "k2", "k+", "k-", "s+", "s-"):
            result = visibility.envelope_pin_check(params, obs)
            if result.simultaneous and result.max_deviation is not None:
                worst = max(worst, result.max_deviation)
    return worst


def _corrected_identity_dev(params_list: Iterable[SetupParams]) -> float:
    worst = 0.0
    for params in params_list:
        s = np.linspace(-6.0 * math.sqrt(params.a), 6.0 * math.sqrt(params.a), 301)
        phi = radon.splus_angle(params)
        for sign, angle in ((1, phi), (-1, -phi)):
            k1 = s * math.cos(angle)
            k2 = s * math.sin(angle)
            assembled = corrected.corrected_density(params, k1, k2)
            direct = corrected.corrected_slice_spm(params, sign, s)
            worst = max(worst, float(np.max(np.abs(assembled - direct))))
    return worst


def run_validation(quick: bool = False, tol_quad: float = 1e-9) -> list[CheckResult]:
    lattice = _lattice(quick)
    small = lattice[:: max(1, len(lattice) // 6)]
    return [
        _check("normalization_all_bases", 1e-8, lambda: _normalization_dev(small if quick else lattice, tol_quad)),
        _check("decomposition_residual", 1e-12, lambda: _decomposition_dev(small)),
        _check("radon_closed_vs_numeric", 1e-8, lambda: _radon_dev(small, min(tol_quad, 1e-10))),
        _check("moment_quadrature", 1e-8, lambda: _moment_dev(small, tol_quad)),
        _check("epsilon_within_bound", 0.0, lambda: _epsilon_bound_dev(lattice)),
        _check("no_communication_identity", 1e-12, lambda: _no_communication_dev(lattice)),
        _check("envelope_pin_points", 1e-12, lambda: _pin_dev(lattice)),
        _check("corrected_slice_identity", 1e-10, lambda: _corrected_identity_dev(small)),
    ]

"""Joint probability densities, default domains, and the quadrature oracle.

The quadrature here is the brute-force side of every dual-route check in the
package: composite Gauss-Legendre panels, refined by doubling the panel count
until two successive estimates agree within the requested tolerance.  Panel
widths are chosen from the physics (fastest fringe frequency on wavenumber
axes, Gaussian peak width on position axes) so the first estimate is already
resolved and the doubling acts as verification.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .state import (
    KK,
    Axis,
    BasisPair,
    SetupParams,
    psi,
)

PI = math.pi

__all__ = [
    "Density2D",
    "Grid2D",
    "QuadratureError",
    "basis_domains",
    "basis_panel_hints",
    "default_domain",
    "default_grid",
    "density_at",
    "gauss_panels",
    "integrate_1d",
    "integrate_1d_batch",
    "normalization_mass",
    "quadrature_2d",
]


# refinement stops (with a QuadratureError) once a doubling would exceed these
# node counts; an unsatisfiable tolerance then fails fast instead of exhausting
# memory on ever-finer grids
_MAX_NODES_1D = 1 << 19
_MAX_NODES_2D = 1 << 28


class QuadratureError(RuntimeError):
    """Composite quadrature failed to converge to the requested tolerance."""


def density_at(params: SetupParams, basis: BasisPair, u, v) -> np.ndarray:
    """|psi|^2 at the given coordinates (vectorized)."""
    amp = psi(params, basis, u, v)
    return amp.real * amp.real + amp.imag * amp.imag


def default_domain(params: SetupParams, axis: Axis, subsystem: int = 1) -> tuple[float, float]:
    """Symmetric truncation interval with sub-1e-18 tail mass.

    Position axes extend ten peak widths past the outer slit; wavenumber axes
    span ten standard deviations of the e^{-k^2/2a} envelope.
    """
    if subsystem not in (1, 2):
        raise ValueError(f"subsystem must be 1 or 2, got {subsystem!r}")
    h = params.h1 if subsystem == 1 else params.h2
    if axis is Axis.POSITION:
        half = h + 10.0 / (2.0 * math.sqrt(params.a))
    else:
        half = 10.0 * math.sqrt(params.a)
    return (-half, half)


def basis_domains(
    params: SetupParams, basis: BasisPair
) -> tuple[tuple[float, float], tuple[float, float]]:
    return (
        default_domain(params, basis.first, subsystem=1),
        default_domain(params, basis.second, subsystem=2),
    )


def _axis_panels(params: SetupParams, axis: Axis, h: float, lo: float, hi: float) -> int:
    width = hi - lo
    if axis is Axis.WAVENUMBER:
        # |psi|^2 oscillates like cos(2hk); an eighth of that half-period per
        # panel keeps per-panel phase below pi/4.
        panel_width = min(PI / (8.0 * h), math.sqrt(params.a) / 4.0)
    else:
        # quarter of the slit-peak standard deviation 1/(2 sqrt(a))
        panel_width = 1.0 / (8.0 * math.sqrt(params.a))
    return max(8, int(math.ceil(width / panel_width)))


def basis_panel_hints(params: SetupParams, basis: BasisPair) -> tuple[int, int]:
    """Initial panel counts resolving the integrand on each axis."""
    (u_lo, u_hi), (v_lo, v_hi) = basis_domains(params, basis)
    pu = _axis_panels(params, basis.first, params.h1, u_lo, u_hi)
    pv = _axis_panels(params, basis.second, params.h2, v_lo, v_hi)
    return pu, pv


@lru_cache(maxsize=None)
def _leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def gauss_panels(lo: float, hi: float, n_panels: int, order: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of composite Gauss-Legendre on equal panels."""
    if n_panels < 1:
        raise ValueError("n_panels must be >= 1")
    x, w = _leggauss(order)
    edges = np.linspace(lo, hi, n_panels + 1)
    centers = 0.5 * (edges[:-1] + edges[1:])
    halves = 0.5 * (edges[1:] - edges[:-1])
    nodes = (centers[:, None] + halves[:, None] * x[None, :]).ravel()
    weights = (halves[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate_1d(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    min_panels: int = 8,
    order: int = 6,
    max_doublings: int = 12,
) -> float:
    """Integrate a scalar function, doubling panels until two estimates agree."""
    panels = max(1, int(min_panels))
    prev: Optional[float] = None
    for _ in range(max_doublings + 1):
        if panels * order > _MAX_NODES_1D:
            break
        x, w = gauss_panels(lo, hi, panels, order)
        cur = float(np.asarray(f(x), dtype=float) @ w)
        if prev is not None and abs(cur - prev) <= tol:
            return cur
        prev = cur
        panels *= 2
    raise QuadratureError(
        f"1d quadrature did not converge to tol={tol:g} within {max_doublings} doublings"
    )


def integrate_1d_batch(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    min_panels: int = 8,
    order: int = 6,
    max_doublings: int = 12,
) -> np.ndarray:
    """Vectorized variant: ``f(x)`` returns shape (..., len(x)); converges on max deviation."""
    panels = max(1, int(min_panels))
    prev: Optional[np.ndarray] = None
    for _ in range(max_doublings + 1):
        if panels * order > _MAX_NODES_1D:
            break
        x, w = gauss_panels(lo, hi, panels, order)
        cur = np.asarray(f(x), dtype=float) @ w
        if prev is not None and float(np.max(np.abs(cur - prev))) <= tol:
            return cur
        prev = cur
        panels *= 2
    raise QuadratureError(
        f"batched 1d quadrature did not converge to tol={tol:g} within {max_doublings} doublings"
    )


def _eval_2d(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    xu: np.ndarray,
    wu: np.ndarray,
    xv: np.ndarray,
    wv: np.ndarray,
    row_chunk: int,
) -> float:
    partials = []
    for i in range(0, len(xv), row_chunk):
        vs = xv[i : i + row_chunk]
        block = np.asarray(f(xu[None, :], vs[:, None]), dtype=float)
        partials.append(block @ wu)
    return float(np.concatenate(partials) @ wv)


def quadrature_2d(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    u_bounds: tuple[float, float],
    v_bounds: tuple[float, float],
    tol: float = 1e-9,
    min_panels: tuple[int, int] = (8, 8),
    order: int = 4,
    max_doublings: int = 8,
    row_chunk: int = 512,
) -> float:
    """Double integral over a rectangle by tensor-product composite Gauss-Legendre.

    Raises :class:`QuadratureError` if successive refinements never agree
    within ``tol`` -- an explicit oracle failure rather than a silent bad value.
    """
    pu, pv = (max(1, int(p)) for p in min_panels)
    prev: Optional[float] = None
    for _ in range(max_doublings + 1):
        if pu * order * pv * order > _MAX_NODES_2D:
            break
        xu, wu = gauss_panels(*u_bounds, pu, order)
        xv, wv = gauss_panels(*v_bounds, pv, order)
        cur = _eval_2d(f, xu, wu, xv, wv, row_chunk)
        if prev is not None and abs(cur - prev) <= tol:
            return cur
        prev = cur
        pu *= 2
        pv *= 2
    raise QuadratureError(
        f"2d quadrature did not converge to tol={tol:g} within {max_doublings} doublings"
    )


def normalization_mass(params: SetupParams, basis: BasisPair = KK, tol: float = 1e-9) -> float:
    """Total probability mass of |psi|^2 over the default domain (quadrature oracle)."""
    ub, vb = basis_domains(params, basis)
    hints = basis_panel_hints(params, basis)
    return quadrature_2d(
        lambda u, v: density_at(params, basis, u, v), ub, vb, tol=tol, min_panels=hints
    )


@dataclass(frozen=True)
class Grid2D:
    """Uniform rectangular evaluation grid (inclusive endpoints)."""

    u_min: float
    u_max: float
    v_min: float
    v_max: float
    n_u: int
    n_v: int

    def __post_init__(self) -> None:
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise ValueError("grid bounds must satisfy min < max on both axes")
        if self.n_u < 2 or self.n_v < 2:
            raise ValueError("grids need at least 2 points per axis")

    def u_axis(self) -> np.ndarray:
        return np.linspace(self.u_min, self.u_max, self.n_u)

    def v_axis(self) -> np.ndarray:
        return np.linspace(self.v_min, self.v_max, self.n_v)


def default_grid(params: SetupParams, basis: BasisPair, n_u: int = 512, n_v: int = 512) -> Grid2D:
    (u_lo, u_hi), (v_lo, v_hi) = basis_domains(params, basis)
    return Grid2D(u_lo, u_hi, v_lo, v_hi, n_u, n_v)


@dataclass
class Density2D:
    """Density values sampled on a :class:`Grid2D`; ``values[i, j]`` is at (u_i, v_j)."""

    grid: Grid2D
    basis: BasisPair
    params: SetupParams
    values: np.ndarray

    @classmethod
    def evaluate(
        cls,
        params: SetupParams,
        basis: BasisPair,
        grid: Grid2D,
        fn: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None,
    ) -> "Density2D":
        u = grid.u_axis()[:, None]
        v = grid.v_axis()[None, :]
        if fn is None:
            values = density_at(params, basis, u, v)
        else:
            values = np.asarray(fn(u, v), dtype=float)
        return cls(grid=grid, basis=basis, params=params, values=values)

    def mass(self) -> float:
        """Trapezoid-rule mass over the grid (diagnostic, not the oracle)."""
        inner = np.trapezoid(self.values, self.grid.v_axis(), axis=1)
        return float(np.trapezoid(inner, self.grid.u_axis()))

    def to_csv_text(self) -> str:
        u = self.grid.u_axis()
        v = self.grid.v_axis()
        lines = ["u,v,value"]
        for i in range(self.grid.n_u):
            row = self.values[i]
            ui = u[i]
            for j in range(self.grid.n_v):
                lines.append(f"{ui:.17g},{v[j]:.17g},{row[j]:.17g}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        g = self.grid
        return {
            "grid": {
                "u_min": g.u_min,
                "u_max": g.u_max,
                "v_min": g.v_min,
                "v_max": g.v_max,
                "n_u": g.n_u,
                "n_v": g.n_v,
            },
            "basis": self.basis.token,
            "params": {
                "a": self.params.a,
                "h1": self.params.h1,
                "h2": self.params.h2,
                "xi": self.params.xi,
            },
            "values": self.values.tolist(),
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json_dict()) + "\n"

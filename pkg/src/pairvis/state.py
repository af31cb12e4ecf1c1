"""Partially entangled bipartite Gaussian state for paired double slits.

The wavefunction describes two subsystems passing Gaussian double slits with
half-separations ``h1`` and ``h2`` and common squeezing ``a = 1/(4 sigma^2)``.
The entanglement angle ``xi`` mixes the correlated branch (slits +h1,+h2 and
-h1,-h2) with the anti-correlated one; ``xi`` is periodic with period pi and
is stored canonically in ``[0, pi)``.

All evaluators are overflow-safe: products of growing exponentials
(``cosh``/``sinh`` of arguments proportional to ``a``) are refactored into
sums of decaying shifted Gaussians before anything is exponentiated.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

PI = math.pi

__all__ = [
    "Axis",
    "BasisPair",
    "ParameterDomainError",
    "SecondSlitRescaling",
    "SetupParams",
    "UnsupportedBasisError",
    "XX",
    "KK",
    "KX",
    "XK",
    "decomposition_residual",
    "normalization_b2",
    "psi",
    "psi_entangled",
    "psi_separable",
    "rescale_second_subsystem",
]


class ParameterDomainError(ValueError):
    """Setup parameters outside their physical domain."""


class UnsupportedBasisError(ValueError):
    """The requested operation is not defined for this basis pair."""


class Axis(enum.Enum):
    POSITION = "x"
    WAVENUMBER = "k"


@dataclass(frozen=True)
class BasisPair:
    """Which representation each subsystem is expressed in."""

    first: Axis
    second: Axis

    @classmethod
    def from_token(cls, token: str) -> "BasisPair":
        try:
            return _BASIS_TOKENS[token]
        except KeyError:
            raise UnsupportedBasisError(
                f"unknown basis token {token!r}; expected one of {sorted(_BASIS_TOKENS)}"
            ) from None

    @property
    def token(self) -> str:
        return self.first.value + self.second.value

    @property
    def is_mixed(self) -> bool:
        return self.first is not self.second


XX = BasisPair(Axis.POSITION, Axis.POSITION)
KK = BasisPair(Axis.WAVENUMBER, Axis.WAVENUMBER)
KX = BasisPair(Axis.WAVENUMBER, Axis.POSITION)
XK = BasisPair(Axis.POSITION, Axis.WAVENUMBER)

_BASIS_TOKENS = {"xx": XX, "kk": KK, "kx": KX, "xk": XK}


@dataclass(frozen=True)
class SetupParams:
    """Squeezing ``a``, slit half-separations ``h1``/``h2``, entanglement angle ``xi``."""

    a: float
    h1: float
    h2: float
    xi: float = 0.0

    def __post_init__(self) -> None:
        for name in ("a", "h1", "h2"):
            try:
                value = float(getattr(self, name))
            except (TypeError, ValueError):
                raise ParameterDomainError(f"{name} must be a real number") from None
            if not math.isfinite(value) or value <= 0.0:
                raise ParameterDomainError(
                    f"{name} must be a positive finite real, got {getattr(self, name)!r}"
                )
            object.__setattr__(self, name, value)
        try:
            xi = float(self.xi)
        except (TypeError, ValueError):
            raise ParameterDomainError("xi must be a real number") from None
        if not math.isfinite(xi):
            raise ParameterDomainError(f"xi must be finite, got {self.xi!r}")
        xi = math.fmod(xi, PI)
        if xi < 0.0:
            xi += PI
        # A tiny negative remainder can round up to exactly pi; the state is
        # pi-periodic in xi, so fold that endpoint back to 0 to keep [0, pi).
        if xi >= PI:
            xi = 0.0
        object.__setattr__(self, "xi", xi)

    @property
    def regime_warning(self) -> bool:
        """True outside the narrow-slit regime the closed forms are tuned for."""
        return self.a < 2.0 or self.h1 < 1.0 or self.h2 < 1.0

    def swapped(self) -> "SetupParams":
        """Exchange the roles of the two subsystems."""
        return SetupParams(self.a, self.h2, self.h1, self.xi)

    def with_xi(self, xi: float) -> "SetupParams":
        return SetupParams(self.a, self.h1, self.h2, xi)


def normalization_b2(params: SetupParams) -> float:
    """Squared normalization constant B^2.

    Always positive; at most 2 when cos 2xi >= 0, and bounded above by
    ``2 / ((1 - e^{-2a h1^2}) (1 - e^{-2a h2^2}))`` in general.

    Evaluated as ``2 / (1 + e^{-2a(h1^2+h2^2)} + (e^{-2a h1^2} + e^{-2a h2^2}) cos 2xi)``,
    which only ever exponentiates negative arguments.
    """
    a, h1, h2 = params.a, params.h1, params.h2
    c2 = math.cos(2.0 * params.xi)
    denom = (
        1.0
        + math.exp(-2.0 * a * (h1 * h1 + h2 * h2))
        + (math.exp(-2.0 * a * h1 * h1) + math.exp(-2.0 * a * h2 * h2)) * c2
    )
    return 2.0 / denom


def _shifted_gaussians(a: float, h: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.exp(-a * (x - h) ** 2), np.exp(-a * (x + h) ** 2)


def psi_entangled(params: SetupParams, basis: BasisPair, u, v) -> np.ndarray:
    """Amplitude written as a superposition of correlated/anti-correlated branches.

    Position basis: four shifted Gaussians weighted by cos(pi/4 - xi) on the
    correlated pair and sin(pi/4 - xi) on the anti-correlated pair.
    Wavenumber basis: the corresponding two-cosine form.
    """
    if basis.is_mixed:
        raise UnsupportedBasisError("branch decomposition is defined for pure bases only")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    a, h1, h2 = params.a, params.h1, params.h2
    b = math.sqrt(normalization_b2(params))
    cp = math.cos(PI / 4.0 - params.xi)
    sp = math.sin(PI / 4.0 - params.xi)
    if basis.first is Axis.POSITION:
        g1m, g1p = _shifted_gaussians(a, h1, u)
        g2m, g2p = _shifted_gaussians(a, h2, v)
        pref = math.sqrt(a / (2.0 * PI)) * b
        return pref * ((g1m * g2m + g1p * g2p) * cp + (g1m * g2p + g1p * g2m) * sp)
    env = np.exp(-(u * u + v * v) / (4.0 * a))
    pref = b / math.sqrt(2.0 * a * PI)
    return pref * env * (np.cos(h1 * u + h2 * v) * cp + np.cos(h1 * u - h2 * v) * sp)


def psi_separable(params: SetupParams, basis: BasisPair, u, v) -> np.ndarray:
    """Amplitude written as cos(xi) * even x even + sin(xi) * odd x odd.

    Algebraically identical to :func:`psi_entangled`; kept as an independent
    code path so the two decompositions can be cross-checked numerically.
    """
    if basis.is_mixed:
        raise UnsupportedBasisError("branch decomposition is defined for pure bases only")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    a, h1, h2 = params.a, params.h1, params.h2
    b = math.sqrt(normalization_b2(params))
    cx = math.cos(params.xi)
    sx = math.sin(params.xi)
    if basis.first is Axis.POSITION:
        # e^{-a(h^2+x^2)} cosh(2ahx) = (e^{-a(x-h)^2} + e^{-a(x+h)^2}) / 2 and
        # likewise for sinh with a minus sign, so the cosh*cosh / sinh*sinh
        # products become sums/differences of shifted Gaussians.
        g1m, g1p = _shifted_gaussians(a, h1, u)
        g2m, g2p = _shifted_gaussians(a, h2, v)
        pref = math.sqrt(a / PI) * b / 2.0
        return pref * ((g1m + g1p) * (g2m + g2p) * cx + (g1m - g1p) * (g2m - g2p) * sx)
    env = np.exp(-(u * u + v * v) / (4.0 * a))
    pref = b / math.sqrt(a * PI)
    return pref * env * (np.cos(h1 * u) * np.cos(h2 * v) * cx - np.sin(h1 * u) * np.sin(h2 * v) * sx)


def _psi_mixed(params: SetupParams, k1, x2) -> np.ndarray:
    """Amplitude with the first subsystem in wavenumber and the second in position."""
    k1 = np.asarray(k1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    a, h1, h2 = params.a, params.h1, params.h2
    b = math.sqrt(normalization_b2(params))
    g2m, g2p = _shifted_gaussians(a, h2, x2)
    envk = np.exp(-k1 * k1 / (4.0 * a))
    pref = math.sqrt(2.0 / PI) * b / 2.0
    re = pref * envk * np.cos(h1 * k1) * (g2m + g2p) * math.cos(params.xi)
    im = -pref * envk * np.sin(h1 * k1) * (g2m - g2p) * math.sin(params.xi)
    return re + 1j * im


def psi(params: SetupParams, basis: BasisPair, u, v) -> np.ndarray:
    """Normalized amplitude in any of the four basis pairs.

    Pure bases return a complex array with exactly zero imaginary part; the
    mixed bases are genuinely complex.  The (position, wavenumber) pair is
    obtained from the (wavenumber, position) formula by exchanging subsystem
    roles, using the symmetry of the state under 1 <-> 2 with h1 <-> h2.
    """
    if not basis.is_mixed:
        return psi_entangled(params, basis, u, v) + 0j
    if basis is KX or basis == KX:
        return _psi_mixed(params, u, v)
    return _psi_mixed(params.swapped(), v, u)


def decomposition_residual(params: SetupParams, basis: BasisPair, u, v) -> np.ndarray:
    """|psi_entangled - psi_separable|; zero up to roundoff for pure bases."""
    return np.abs(psi_entangled(params, basis, u, v) - psi_separable(params, basis, u, v))


@dataclass(frozen=True)
class SecondSlitRescaling:
    """Standard-form parameters for a state whose second slit has squeezing ``b``.

    ``standard`` shares the first subsystem's squeezing ``a``; the second
    subsystem's coordinate is stretched so the differently squeezed Gaussians
    take the common-``a`` form.  ``scale`` is sqrt(b/a): standard coordinates
    are ``scale`` times physical ones.
    """

    standard: SetupParams
    scale: float

    def to_standard(self, x2_physical):
        return np.asarray(x2_physical, dtype=float) * self.scale

    def to_physical(self, x2_standard):
        return np.asarray(x2_standard, dtype=float) / self.scale

    @property
    def jacobian(self) -> float:
        """d(physical)/d(standard) for the second coordinate."""
        return 1.0 / self.scale


def rescale_second_subsystem(params: SetupParams, b: float) -> SecondSlitRescaling:
    """Map a state with second-slit squeezing ``b`` onto the common-``a`` form.

    ``params.h2`` is the physical half-separation of the second slit; the
    returned standard parameters carry ``h2 * sqrt(b/a)``.  With ``b = a`` the
    map is the identity.
    """
    try:
        b = float(b)
    except (TypeError, ValueError):
        raise ParameterDomainError("b must be a real number") from None
    if not math.isfinite(b) or b <= 0.0:
        raise ParameterDomainError(f"b must be a positive finite real, got {b!r}")
    scale = math.sqrt(b / params.a)
    standard = SetupParams(params.a, params.h1, params.h2 * scale, params.xi)
    return SecondSlitRescaling(standard=standard, scale=scale)

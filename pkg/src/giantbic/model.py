"""Lattice model: two giant atoms, two legs each, on a coupled-resonator waveguide.

Single-excitation couplings in momentum space (hbar = 1)::

    omega_k = omega_c - 2 xi cos k
    g_ik    = (2 g / sqrt(N_c)) cos(k n_i / 2) exp(-i k (x_i + n_i / 2))

Atom ``i`` touches the chain at sites ``x_i`` and ``x_i + n_i``.  Positions and
separations are floats; integer values reproduce a physical lattice.

All functions broadcast over numpy arrays of momenta.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidDiscretizationError, InvalidParameterError, OutOfBandError

__all__ = [
    "ModelParams",
    "Geometry",
    "channel_sign",
    "build_momentum_grid",
    "dispersion",
    "form_factor",
    "coupling_amplitude",
    "propagation_phase",
    "interference_factor",
    "effective_bell_coupling",
    "resonant_wavevector",
]


@dataclass(frozen=True)
class ModelParams:
    """Energy scales and discretization of the waveguide.

    ``eta`` defaults to five mean level spacings, ``5 * 4 xi / N_c``.
    ``g = 0`` is accepted (decoupled atoms) even though the physics of
    interest needs ``g > 0``.
    """

    xi: float = 1.0
    omega_c: float = 0.0
    g: float = 0.1
    Omega: float = 0.0
    N_c: int = 2004
    eta: float | None = field(default=None)

    def __post_init__(self):
        if not self.xi > 0:
            raise InvalidParameterError(f"hopping xi must be positive, got {self.xi}")
        if self.g < 0:
            raise InvalidParameterError(f"coupling g must be non-negative, got {self.g}")
        if int(self.N_c) != self.N_c or self.N_c < 2 or self.N_c % 2:
            raise InvalidDiscretizationError(f"N_c must be a positive even integer, got {self.N_c}")
        object.__setattr__(self, "N_c", int(self.N_c))
        if self.eta is None:
            object.__setattr__(self, "eta", 5.0 * 4.0 * self.xi / self.N_c)
        if not self.eta > 0:
            raise InvalidParameterError(f"broadening eta must be positive, got {self.eta}")
        if not abs(self.Omega - self.omega_c) < 2.0 * self.xi:
            raise OutOfBandError(
                f"Omega={self.Omega} lies outside the open band "
                f"({self.omega_c - 2 * self.xi}, {self.omega_c + 2 * self.xi})"
            )
        if np.isclose(self.k_star, np.pi / 2, rtol=0, atol=1e-12) and self.N_c % 4:
            raise InvalidDiscretizationError(
                f"k* = pi/2 needs N_c divisible by 4 to resolve +-k* on the grid, got {self.N_c}"
            )

    @property
    def k_star(self) -> float:
        """Resonant wave vector of the bare atomic frequency."""
        return float(resonant_wavevector(self.Omega, self))

    def replace(self, **changes) -> "ModelParams":
        if "N_c" in changes and "eta" not in changes:
            changes["eta"] = None
        return replace(self, **changes)


@dataclass(frozen=True)
class Geometry:
    """Connection-point layout of the two giant atoms (lattice-site units)."""

    x1: float = 0.0
    x2: float = 2.0
    n1: float = 2.0
    n2: float = 2.0

    def __post_init__(self):
        if not (self.n1 > 0 and self.n2 > 0):
            raise InvalidParameterError(f"separations must be positive, got n1={self.n1}, n2={self.n2}")

    @property
    def dx(self) -> float:
        return self.x2 - self.x1

    @property
    def dn(self) -> float:
        return self.n2 - self.n1

    @property
    def lam(self) -> float:
        """Ratio of intra-atom connection lengths n1/n2."""
        return self.n1 / self.n2

    def replace(self, **changes) -> "Geometry":
        return replace(self, **changes)

    @classmethod
    def from_ratio(cls, lam: float, theta: float, k_star: float, n2: float = 2.0, x1: float = 0.0) -> "Geometry":
        """Geometry with ``n1 = lam * n2`` and ``dx = theta / k_star``."""
        return cls(x1=x1, x2=x1 + theta / k_star, n1=lam * n2, n2=n2)


def channel_sign(channel) -> int:
    """Map ``'+'``/``'-'``/``+1``/``-1`` (and ``'plus'``/``'minus'``) onto +1/-1."""
    if channel in ("+", "plus", 1):
        return 1
    if channel in ("-", "minus", -1):
        return -1
    raise ValueError(f"channel must be '+' or '-', got {channel!r}")


def build_momentum_grid(N_c: int) -> np.ndarray:
    """Uniform grid ``k_m = -pi + 2 pi m / N_c``, ``m = 1..N_c`` covering (-pi, pi].

    Computed as ``pi * (2m - N_c) / N_c`` so that rational grid points such as
    +-pi/2 come out bit-exact.
    """
    if int(N_c) != N_c or N_c < 2 or N_c % 2:
        raise InvalidDiscretizationError(f"N_c must be a positive even integer, got {N_c}")
    N_c = int(N_c)
    m = np.arange(1, N_c + 1)
    return np.pi * ((2 * m - N_c) / N_c)


def dispersion(k, p: ModelParams):
    return p.omega_c - 2.0 * p.xi * np.cos(k)


def form_factor(k, n):
    return np.cos(np.multiply(k, n) / 2.0)


def coupling_amplitude(atom_index: int, k, p: ModelParams, geom: Geometry):
    """Complex coupling ``g_ik`` of atom 1 or 2 to mode ``k``."""
    if atom_index == 1:
        x, n = geom.x1, geom.n1
    elif atom_index == 2:
        x, n = geom.x2, geom.n2
    else:
        raise ValueError(f"atom_index must be 1 or 2, got {atom_index}")
    k = np.asarray(k, dtype=float)
    return (2.0 * p.g / np.sqrt(p.N_c)) * form_factor(k, n) * np.exp(-1j * k * (x + n / 2.0))


def propagation_phase(k, geom: Geometry):
    return np.multiply(k, geom.dx + geom.dn / 2.0)


def interference_factor(k, channel, geom: Geometry):
    """``|A_{k,n1} +- A_{k,n2} exp(i Phi_k)|**2``, expanded in real arithmetic."""
    s = channel_sign(channel)
    a1 = form_factor(k, geom.n1)
    a2 = form_factor(k, geom.n2)
    return a1 * a1 + a2 * a2 + 2.0 * s * a1 * a2 * np.cos(propagation_phase(k, geom))


def effective_bell_coupling(k, channel, p: ModelParams, geom: Geometry):
    """``W_k^+- = (g_1k +- g_2k) / sqrt(2)``; ``|W|**2 = (2 g**2 / N_c) f_k^+-``."""
    s = channel_sign(channel)
    return (coupling_amplitude(1, k, p, geom) + s * coupling_amplitude(2, k, p, geom)) / np.sqrt(2.0)


def resonant_wavevector(E, p: ModelParams):
    """``k(E) = arccos((omega_c - E) / (2 xi))`` in (0, pi); raises outside the open band."""
    arg = (p.omega_c - np.asarray(E, dtype=float)) / (2.0 * p.xi)
    if np.any(np.abs(arg) >= 1.0):
        raise OutOfBandError(f"energy {E} has no propagating mode (band is omega_c +- 2 xi)")
    return np.arccos(arg)

"""Channel self-energies, decay rates and the search for bound states in the continuum.

The discrete self-energy of Bell channel ``+-`` is

    Sigma(E) = (2 g**2 / N_c) sum_k f_k / (E - omega_k + i eta)

with ``Delta = Re Sigma`` (Lamb shift) and ``Gamma = -2 Im Sigma`` (decay rate).
Taking ``Gamma`` from the imaginary part keeps the Lorentzian numerator
``2 eta`` and reproduces the continuum golden-rule rate

    Gamma(Omega) = 2 g**2 f_{k(Omega)} / (xi |sin k(Omega)|)

as ``N_c -> infinity``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .entanglement import bic_state
from .model import (
    Geometry,
    ModelParams,
    build_momentum_grid,
    channel_sign,
    coupling_amplitude,
    dispersion,
    interference_factor,
    resonant_wavevector,
)

__all__ = [
    "ChannelSelfEnergy",
    "BicSolution",
    "RobustCheck",
    "self_energy",
    "self_energy_values",
    "lamb_shift",
    "decay_rate_continuum",
    "robust_bic_check",
    "find_bic",
    "on_shell_dark_state",
    "BIC_THRESHOLD",
    "BAND_EDGE_MARGIN",
]

BIC_THRESHOLD = 1e-8  # residual on-shell rate, units of xi
BAND_EDGE_MARGIN = 1e-3  # units of xi
ROOT_MESH = 2001
ROOT_XTOL = 1e-12  # units of xi
# k n / pi tolerance for the robust flag at a root; eta broadening moves roots
# by O(g^2 eta^2) (5e-7 at the defaults), far below any residual-rate effect
ROOT_ROBUST_TOL = 1e-5


@dataclass(frozen=True)
class ChannelSelfEnergy:
    E: float
    sigma: complex
    delta: float
    gamma: float
    channel: str


@dataclass(frozen=True)
class BicSolution:
    """In-band root of ``E - Omega - Delta(E) = 0`` whose on-shell rate vanishes.

    ``amplitudes`` are the normalized atomic amplitudes ``(c1, c2)``.
    ``band_edge`` flags roots within :data:`BAND_EDGE_MARGIN` of the band
    edges, where ``1/|sin k|`` diverges.
    """

    channel: str
    energy: float
    residual_gamma: float
    amplitudes: tuple[complex, complex]
    k_star: float
    robust: bool
    band_edge: bool = False


class RobustCheck(NamedTuple):
    holds: bool
    ell: int | None


def _grid(p: ModelParams, grid):
    return build_momentum_grid(p.N_c) if grid is None else np.asarray(grid, dtype=float)


def self_energy_values(E, channel, p: ModelParams, geom: Geometry, grid=None, chunk: int = 256) -> np.ndarray:
    """Vectorized ``Sigma_+-(E)`` over an array of probe energies."""
    k = _grid(p, grid)
    weight = (2.0 * p.g**2 / p.N_c) * interference_factor(k, channel, geom)
    w = dispersion(k, p)
    E = np.atleast_1d(np.asarray(E, dtype=float))
    out = np.empty(E.shape, dtype=complex)
    flat_E, flat_out = E.ravel(), out.reshape(-1)
    for start in range(0, flat_E.size, chunk):
        block = flat_E[start:start + chunk, None]
        flat_out[start:start + chunk] = np.sum(weight / (block - w + 1j * p.eta), axis=1)
    return out


def self_energy(E: float, channel, p: ModelParams, geom: Geometry, grid=None) -> ChannelSelfEnergy:
    sigma = complex(self_energy_values(E, channel, p, geom, grid)[0])
    return ChannelSelfEnergy(
        E=float(E),
        sigma=sigma,
        delta=sigma.real,
        gamma=-2.0 * sigma.imag,
        channel="+" if channel_sign(channel) > 0 else "-",
    )


def lamb_shift(E, channel, p: ModelParams, geom: Geometry, grid=None):
    """Real part of the discrete self-energy (scalar in, scalar out)."""
    values = self_energy_values(E, channel, p, geom, grid).real
    return float(values[0]) if np.ndim(E) == 0 else values


def decay_rate_continuum(Omega_probe, channel, p: ModelParams, geom: Geometry):
    """Golden-rule rate ``2 g**2 f_{k(Omega)} / (xi |sin k(Omega)|)``.

    Raises :class:`~giantbic.errors.OutOfBandError` outside the open band.
    """
    k = resonant_wavevector(Omega_probe, p)
    rate = 2.0 * p.g**2 * interference_factor(k, channel, geom) / (p.xi * np.abs(np.sin(k)))
    return float(rate) if np.ndim(rate) == 0 else rate


def robust_bic_check(k_star: float, n: float, tol: float = 1e-9) -> RobustCheck:
    """Is ``k_star * n`` an odd multiple of pi?  Returns the matched ``ell``."""
    if not 0.0 < k_star < np.pi:
        raise ValueError(f"k_star must lie in (0, pi), got {k_star}")
    m = k_star * n / np.pi
    ell = int(np.round((m - 1.0) / 2.0))
    if abs(m - (2 * ell + 1)) <= tol:
        return RobustCheck(True, ell)
    return RobustCheck(False, None)


def on_shell_dark_state(k_star: float, p: ModelParams, geom: Geometry, rtol: float = 1e-9):
    """Atomic amplitudes with ``c1 g_1k* + c2 g_2k* = 0`` at both ``k = +-k_star``.

    Returns ``None`` when only the trivial solution exists.  When every
    coupling vanishes on shell, any state is dark and the ratio-parametrized
    family ``(1, -lam e^{-i k* dx})`` is returned.
    """
    ks = np.array([k_star, -k_star])
    m = np.conj(np.column_stack([coupling_amplitude(1, ks, p, geom), coupling_amplitude(2, ks, p, geom)]))
    scale = 2.0 * p.g / np.sqrt(p.N_c)
    if scale == 0.0 or np.max(np.abs(m)) <= rtol * scale:
        psi = bic_state(geom.lam, k_star * geom.dx)
        return complex(psi[1]), complex(psi[2])
    _, s, vh = np.linalg.svd(m)
    if s[-1] > rtol * scale:
        return None
    c = vh[-1].conj()
    if abs(c[0]) > 0:
        c = c * np.exp(-1j * np.angle(c[0]))
    return complex(c[0]), complex(c[1])


def _brackets(h: np.ndarray, E: np.ndarray):
    roots, brackets = [], []
    for j in range(len(E) - 1):
        if h[j] == 0.0:
            roots.append(float(E[j]))
        elif h[j] * h[j + 1] < 0.0:
            brackets.append((float(E[j]), float(E[j + 1])))
    if h[-1] == 0.0:
        roots.append(float(E[-1]))
    return roots, brackets


def find_bic(
    channel,
    p: ModelParams,
    geom: Geometry,
    grid=None,
    *,
    threshold: float = BIC_THRESHOLD,
    mesh: int = ROOT_MESH,
) -> list[BicSolution]:
    """All in-band BICs of one Bell channel, sorted by residual rate.

    Roots of ``E - Omega - Delta(E)`` are bracketed on a ``mesh``-point scan of
    the band and refined to ``1e-12 xi``.  The residual is the on-shell rate at
    the root; the eta-broadened sum cannot be used for it because its
    Lorentzian tails leave a floor of order ``g**2 eta`` even for an exact BIC.
    """
    k = _grid(p, grid)
    sign = channel_sign(channel)
    label = "+" if sign > 0 else "-"
    lo, hi = p.omega_c - 2.0 * p.xi, p.omega_c + 2.0 * p.xi
    E = np.linspace(lo, hi, mesh)

    def h(e):
        return e - p.Omega - self_energy_values(e, sign, p, geom, k).real

    hv = h(E)
    roots, brackets = _brackets(hv, E)
    for a, b in brackets:
        roots.append(brentq(lambda e: float(h(e)[0]), a, b, xtol=ROOT_XTOL * p.xi, rtol=4 * np.finfo(float).eps))

    found = []
    for root in sorted(roots):
        if not lo < root < hi:
            continue
        kr = float(resonant_wavevector(root, p))
        residual = decay_rate_continuum(root, sign, p, geom)
        if not residual < threshold * p.xi:
            continue
        robust = all(robust_bic_check(kr, n, ROOT_ROBUST_TOL).holds for n in (geom.n1, geom.n2))
        if robust:
            psi = bic_state(geom.lam, kr * geom.dx)
            amps = (complex(psi[1]), complex(psi[2]))
        else:
            amps = (complex(1 / np.sqrt(2)), complex(sign / np.sqrt(2)))
        found.append(BicSolution(
            channel=label,
            energy=float(root),
            residual_gamma=float(residual),
            amplitudes=amps,
            k_star=kr,
            robust=robust,
            band_edge=min(root - lo, hi - root) < BAND_EDGE_MARGIN * p.xi,
        ))
    found.sort(key=lambda s: s.residual_gamma)
    return found

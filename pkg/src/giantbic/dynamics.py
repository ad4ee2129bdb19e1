"""Single-excitation dynamics: exact diagonalization, Volterra memory kernels, Markov limit.

Three engines propagate the atomic amplitudes:

* :func:`evolve_ed` diagonalizes the ``(N_c + 2)``-dimensional single-excitation
  Hamiltonian once and evaluates ``exp(-iHt)`` spectrally at every output time.
* :func:`evolve_volterra` integrates one Bell channel of

      dc/dt = -int_0^t K(tau) c(t - tau) dtau,
      K(tau) = sum_k |W_k|**2 exp(i (Omega - omega_k) tau)

  in the interaction picture.  :func:`evolve_volterra_coupled` keeps the 2x2
  kernel matrix, which matters when ``n1 != n2``: the two Bell channels then
  share the cross kernel ``sum_k W_k^+ conj(W_k^-) ...`` and do not evolve
  independently.
* :func:`markov_amplitude` is the golden-rule exponential.

ED amplitudes are in the lab frame; ``Trajectory.rotated(Omega)`` moves them
to the interaction picture used by the other two engines.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .entanglement import bell_transform, bic_state, concurrence_from_bell, inverse_bell_transform
from .errors import AlignmentError, InvalidGridError, InvalidStateError, NumericalBackendError
from .model import (
    Geometry,
    ModelParams,
    build_momentum_grid,
    channel_sign,
    coupling_amplitude,
    dispersion,
    effective_bell_coupling,
)
from .spectral import decay_rate_continuum

__all__ = [
    "SingleExcitationState",
    "Eigensystem",
    "Trajectory",
    "ChannelTrajectory",
    "KernelTable",
    "build_hamiltonian",
    "diagonalize",
    "evolve_ed",
    "memory_kernel",
    "kernel_table",
    "evolve_volterra",
    "evolve_volterra_coupled",
    "markov_amplitude",
    "markov_trajectory",
    "concurrence_trajectory",
    "detuned_case",
    "DETUNINGS",
]


@dataclass(frozen=True)
class SingleExcitationState:
    """``c1 |e,g,0> + c2 |g,e,0> + sum_k phi_k |g,g,1_k>``."""

    c1: complex
    c2: complex
    phi_k: np.ndarray

    @classmethod
    def atomic(cls, c1: complex, c2: complex, N_c: int) -> "SingleExcitationState":
        """State with an empty waveguide."""
        return cls(complex(c1), complex(c2), np.zeros(N_c, dtype=complex))

    @classmethod
    def from_vector(cls, v) -> "SingleExcitationState":
        v = np.asarray(v, dtype=complex)
        return cls(complex(v[0]), complex(v[1]), v[2:].copy())

    def to_vector(self) -> np.ndarray:
        return np.concatenate([[self.c1, self.c2], np.asarray(self.phi_k, dtype=complex)])

    @property
    def norm(self) -> float:
        return float(abs(self.c1) ** 2 + abs(self.c2) ** 2 + np.sum(np.abs(self.phi_k) ** 2))


@dataclass(frozen=True)
class Eigensystem:
    """Immutable ``H = V diag(E) V^dagger``; safe to share across threads."""

    energies: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class Trajectory:
    """Atomic amplitudes on an output time grid (units ``1/xi``)."""

    times: np.ndarray
    c1: np.ndarray
    c2: np.ndarray

    def __post_init__(self):
        if self.times.ndim != 1 or np.any(np.diff(self.times) <= 0):
            raise InvalidGridError("trajectory times must be strictly increasing")

    @property
    def c_plus(self) -> np.ndarray:
        return bell_transform(self.c1, self.c2)[0]

    @property
    def c_minus(self) -> np.ndarray:
        return bell_transform(self.c1, self.c2)[1]

    @property
    def concurrence(self) -> np.ndarray:
        return 2.0 * np.abs(self.c1 * np.conj(self.c2))

    @property
    def norm_leak(self) -> np.ndarray:
        return 1.0 - np.abs(self.c1) ** 2 - np.abs(self.c2) ** 2

    def rotated(self, frequency: float) -> "Trajectory":
        """Multiply amplitudes by ``exp(+i frequency t)`` (lab -> interaction picture)."""
        ph = np.exp(1j * frequency * self.times)
        return Trajectory(self.times, self.c1 * ph, self.c2 * ph)

    def channel(self, channel) -> "ChannelTrajectory":
        s = channel_sign(channel)
        return ChannelTrajectory("+" if s > 0 else "-", self.times, self.c_plus if s > 0 else self.c_minus)


@dataclass(frozen=True)
class ChannelTrajectory:
    channel: str
    times: np.ndarray
    amplitude: np.ndarray


@dataclass(frozen=True)
class KernelTable:
    """Memory kernel sampled at ``tau_j = j dt``.

    ``values`` has shape ``(n,)`` for a single channel or ``(n, 2, 2)`` for
    the Bell-basis kernel matrix (order ``+, -``).
    """

    channel: str
    dt: float
    values: np.ndarray


def _grid(p: ModelParams, grid):
    return build_momentum_grid(p.N_c) if grid is None else np.asarray(grid, dtype=float)


def build_hamiltonian(p: ModelParams, geom: Geometry, grid=None) -> np.ndarray:
    """Single-excitation block in the basis ``|e,g,0>, |g,e,0>, |g,g,1_k>...``."""
    k = _grid(p, grid)
    n = k.size
    H = np.zeros((n + 2, n + 2), dtype=complex)
    H[0, 0] = H[1, 1] = p.Omega
    H[np.arange(2, n + 2), np.arange(2, n + 2)] = dispersion(k, p)
    g1 = coupling_amplitude(1, k, p, geom)
    g2 = coupling_amplitude(2, k, p, geom)
    H[0, 2:] = g1
    H[1, 2:] = g2
    H[2:, 0] = g1.conj()
    H[2:, 1] = g2.conj()
    return H


def diagonalize(H: np.ndarray) -> Eigensystem:
    try:
        E, V = la.eigh(H, driver="evr", check_finite=True)
    except (la.LinAlgError, ValueError) as exc:
        raise NumericalBackendError(f"eigendecomposition failed: {exc}") from exc
    return Eigensystem(E, V)


def evolve_ed(H, initial, times, *, full_states: bool = False, chunk: int = 256):
    """Exact propagation ``sum_j v_j exp(-i E_j t) <v_j|initial>`` (lab frame).

    ``H`` may be a Hamiltonian or a precomputed :class:`Eigensystem`.  With
    ``full_states=True`` the full state vectors are returned alongside the
    trajectory as an array of shape ``(len(times), N_c + 2)``.
    """
    eig = H if isinstance(H, Eigensystem) else diagonalize(np.asarray(H))
    psi0 = initial.to_vector() if isinstance(initial, SingleExcitationState) else np.asarray(initial, dtype=complex)
    if abs(np.vdot(psi0, psi0).real - 1.0) > 1e-10:
        raise InvalidStateError("initial state must be normalized")
    times = np.asarray(times, dtype=float)
    overlaps = eig.vectors.conj().T @ psi0
    atoms = np.empty((times.size, 2), dtype=complex)
    states = np.empty((times.size, psi0.size), dtype=complex) if full_states else None
    for start in range(0, times.size, chunk):
        block = np.exp(-1j * np.outer(times[start:start + chunk], eig.energies)) * overlaps
        atoms[start:start + chunk] = block @ eig.vectors[:2].T
        if full_states:
            states[start:start + chunk] = block @ eig.vectors.T
    traj = Trajectory(times, atoms[:, 0].copy(), atoms[:, 1].copy())
    return (traj, states) if full_states else traj


def _kernel_sum(tau: np.ndarray, detuning: np.ndarray, weights: np.ndarray, chunk: int = 512) -> np.ndarray:
    """``sum_k weights[k, ...] exp(i detuning_k tau)`` for every ``tau``, in blocks of ``chunk``."""
    out = np.empty((tau.size,) + weights.shape[1:], dtype=complex)
    flat_w = weights.reshape(weights.shape[0], -1)
    flat_out = out.reshape(tau.size, -1)
    for start in range(0, tau.size, chunk):
        block = tau[start:start + chunk]
        flat_out[start:start + chunk] = np.exp(1j * np.multiply.outer(block, detuning)) @ flat_w
    return out


def memory_kernel(tau, channel, p: ModelParams, geom: Geometry, grid=None):
    """``K(tau) = sum_k |W_k|**2 exp(i (Omega - omega_k) tau)`` by direct summation."""
    k = _grid(p, grid)
    weight = np.abs(effective_bell_coupling(k, channel, p, geom)) ** 2
    tau_arr = np.atleast_1d(np.asarray(tau, dtype=float))
    out = _kernel_sum(tau_arr, p.Omega - dispersion(k, p), weight)
    return complex(out[0]) if np.ndim(tau) == 0 else out.reshape(np.shape(tau))


def kernel_table(channel, n_steps: int, dt: float, p: ModelParams, geom: Geometry, grid=None) -> KernelTable:
    """Kernel on ``tau = 0, dt, ..., n_steps*dt``.

    ``channel='both'`` returns the 2x2 Bell-basis matrix
    ``K_ab(tau) = sum_k W^a_k conj(W^b_k) exp(i (Omega - omega_k) tau)``.
    """
    k = _grid(p, grid)
    tau = dt * np.arange(n_steps + 1)
    detuning = p.Omega - dispersion(k, p)
    if channel == "both":
        W = np.stack([effective_bell_coupling(k, s, p, geom) for s in (1, -1)], axis=1)
        pair = W[:, :, None] * W.conj()[:, None, :]
        return KernelTable("both", dt, _kernel_sum(tau, detuning, pair))
    s = channel_sign(channel)
    weight = np.abs(effective_bell_coupling(k, s, p, geom)) ** 2
    return KernelTable("+" if s > 0 else "-", dt, _kernel_sum(tau, detuning, weight))


def _check_time_grid(t_max: float, dt: float) -> int:
    if not dt > 0:
        raise InvalidGridError(f"dt must be positive, got {dt}")
    if not t_max >= 0:
        raise InvalidGridError(f"t_max must be non-negative, got {t_max}")
    return int(round(t_max / dt))


def _solve_volterra(K: np.ndarray, c0: np.ndarray, dt: float) -> np.ndarray:
    """Trapezoidal product integration of ``c' = -int_0^t K(tau) c(t - tau) dtau``.

    ``K`` has shape ``(n+1, m, m)``, ``c0`` shape ``(m,)``.  The convolution
    uses trapezoid weights and the step is the trapezoidal rule in time; the
    equation is linear, so the implicit endpoint term is solved exactly
    (an ``m x m`` solve) instead of by a predictor pass.  Second order.
    """
    n = K.shape[0] - 1
    m = c0.size
    c = np.zeros((n + 1, m), dtype=complex)
    c[0] = c0
    F = np.zeros(m, dtype=complex)  # F_0 = 0
    lhs = np.eye(m) + 0.25 * dt * dt * K[0]
    for i in range(n):
        # S = sum_{j=1}^{i} K_j c_{i+1-j} + K_{i+1} c_0 / 2
        S = 0.5 * K[i + 1] @ c[0]
        if i > 0:
            S = S + np.einsum("jab,jb->a", K[1:i + 1], c[i:0:-1])
        rhs = c[i] + 0.5 * dt * F - 0.5 * dt * dt * S
        c[i + 1] = np.linalg.solve(lhs, rhs)
        F = -dt * (0.5 * K[0] @ c[i + 1] + S)
    return c


def evolve_volterra(channel, c0: complex, t_max: float, dt: float, p: ModelParams, geom: Geometry,
                    grid=None, *, kernel: KernelTable | None = None) -> ChannelTrajectory:
    """One Bell channel of the memory-kernel equation, interaction picture."""
    n = _check_time_grid(t_max, dt)
    if kernel is None:
        kernel = kernel_table(channel, n, dt, p, geom, grid)
    K = np.asarray(kernel.values)[: n + 1, None, None]
    c = _solve_volterra(K, np.array([c0], dtype=complex), dt)[:, 0]
    return ChannelTrajectory(kernel.channel, dt * np.arange(n + 1), c)


def evolve_volterra_coupled(c1: complex, c2: complex, t_max: float, dt: float, p: ModelParams,
                            geom: Geometry, grid=None) -> Trajectory:
    """Both Bell channels with the full 2x2 kernel; returns atomic amplitudes."""
    n = _check_time_grid(t_max, dt)
    table = kernel_table("both", n, dt, p, geom, grid)
    cb0 = np.array(bell_transform(c1, c2), dtype=complex)
    cb = _solve_volterra(table.values, cb0, dt)
    a1, a2 = inverse_bell_transform(cb[:, 0], cb[:, 1])
    return Trajectory(dt * np.arange(n + 1), a1, a2)


def markov_amplitude(t, channel, c0: complex, p: ModelParams, geom: Geometry, lamb_shift: float = 0.0):
    """``c0 exp(-(Gamma/2 + i lamb_shift) t)`` with the golden-rule rate at ``Omega``."""
    gamma = decay_rate_continuum(p.Omega, channel, p, geom)
    return c0 * np.exp(-(0.5 * gamma + 1j * lamb_shift) * np.asarray(t, dtype=float))


def markov_trajectory(c1: complex, c2: complex, times, p: ModelParams, geom: Geometry) -> Trajectory:
    cp, cm = bell_transform(c1, c2)
    times = np.asarray(times, dtype=float)
    a1, a2 = inverse_bell_transform(markov_amplitude(times, 1, cp, p, geom),
                                    markov_amplitude(times, -1, cm, p, geom))
    return Trajectory(times, np.asarray(a1, dtype=complex), np.asarray(a2, dtype=complex))


def concurrence_trajectory(traj_plus: ChannelTrajectory, traj_minus: ChannelTrajectory) -> np.ndarray:
    if traj_plus.times.shape != traj_minus.times.shape or np.any(traj_plus.times != traj_minus.times):
        raise AlignmentError("channel trajectories are on different time grids")
    return concurrence_from_bell(traj_plus.amplitude, traj_minus.amplitude)


DETUNINGS = ("lambda", "theta", "kstar")


def detuned_case(kind: str | None, p: ModelParams, geom: Geometry, factor: float = 1.1):
    """Perturbed configuration for the robustness study.

    Starting from an ideal configuration whose BIC is the initial state, one
    quantity is scaled by ``factor``:

    * ``'lambda'``: ``n1 -> factor * n1`` (``n2`` fixed);
    * ``'theta'``:  ``dx -> factor * dx``;
    * ``'kstar'``:  ``k* -> factor * k*`` with ``Omega`` moved to
      ``omega_c - 2 xi cos(factor k*)``; the initial-state phase uses the
      detuned ``k*``.

    Returns ``(params, geometry, (c1, c2))``; the initial amplitudes are those
    of the ideal BIC except for the ``'kstar'`` phase.
    """
    k0 = p.k_star
    psi = bic_state(geom.lam, k0 * geom.dx)
    if kind is None:
        return p, geom, (complex(psi[1]), complex(psi[2]))
    if kind == "lambda":
        geom = geom.replace(n1=factor * geom.n1)
    elif kind == "theta":
        geom = geom.replace(x2=geom.x1 + factor * geom.dx)
    elif kind == "kstar":
        k1 = factor * k0
        p = p.replace(Omega=p.omega_c - 2.0 * p.xi * np.cos(k1))
        psi = bic_state(geom.lam, k1 * geom.dx)
    else:
        raise ValueError(f"unknown detuning {kind!r}; expected one of {DETUNINGS}")
    return p, geom, (complex(psi[1]), complex(psi[2]))

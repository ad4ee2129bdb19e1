"""Two-qubit states of the atom pair and their entanglement.

Basis ordering everywhere: ``|ee>, |eg>, |ge>, |gg>`` (indices 0..3).
Pure states are length-4 complex arrays, density matrices 4x4 arrays.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidStateError

__all__ = [
    "SIGMA_YY",
    "bic_state",
    "phi_state",
    "concurrence_closed_form",
    "wootters_concurrence",
    "reduced_atomic_density",
    "fidelity_to_phi",
    "fidelity_closed_form",
    "best_phi",
    "bell_transform",
    "inverse_bell_transform",
    "concurrence_from_bell",
]

_SY = np.array([[0.0, -1j], [1j, 0.0]])
SIGMA_YY = np.kron(_SY, _SY)

_NORM_TOL = 1e-10


def bic_state(lam: float, phi_kstar: float) -> np.ndarray:
    """``(|eg> - lam e^{-i phi_kstar} |ge>) / sqrt(1 + lam**2)``."""
    if not (np.isfinite(lam) and lam >= 0):
        raise ValueError(f"lam must be finite and non-negative, got {lam}")
    psi = np.zeros(4, dtype=complex)
    psi[1] = 1.0
    psi[2] = -lam * np.exp(-1j * phi_kstar)
    return psi / np.sqrt(1.0 + lam * lam)


def phi_state(varphi: float) -> np.ndarray:
    """Maximally entangled ``(|eg> + e^{i varphi} |ge>) / sqrt(2)``."""
    psi = np.zeros(4, dtype=complex)
    psi[1] = 1.0
    psi[2] = np.exp(1j * varphi)
    return psi / np.sqrt(2.0)


def concurrence_closed_form(lam):
    lam = np.abs(lam)
    return 2.0 * lam / (1.0 + lam * lam)


def _check_density(rho: np.ndarray) -> None:
    if rho.shape != (4, 4):
        raise InvalidStateError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise InvalidStateError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > 1e-12:
        raise InvalidStateError(f"density matrix trace is {np.trace(rho).real}, expected 1")
    if np.linalg.eigvalsh(rho)[0] < -_NORM_TOL:
        raise InvalidStateError("density matrix is not positive semidefinite")


def wootters_concurrence(rho) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are square roots of the eigenvalues of ``rho @ rho_tilde``,
    which equal the eigenvalues of ``sqrt(sqrt(rho) rho_tilde sqrt(rho))``
    without forming any matrix square root.
    """
    rho = np.asarray(rho, dtype=complex)
    _check_density(rho)
    rho_tilde = SIGMA_YY @ rho.conj() @ SIGMA_YY
    product = rho @ rho_tilde
    ev = np.linalg.eigvals(product).real
    # rounding noise scales with ||rho rho~||, which is tiny for nearly
    # separable pure states; never clamp harder than 1e-14
    floor = min(1e-14, 64 * np.finfo(float).eps * np.linalg.norm(product, 2))
    ev[ev < floor] = 0.0
    lam = np.sort(np.sqrt(ev))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def reduced_atomic_density(c1: complex, c2: complex) -> np.ndarray:
    """Atomic state after tracing out a single-excitation field.

    The missing weight ``1 - |c1|**2 - |c2|**2`` sits on ``|gg><gg|``.
    """
    leak = 1.0 - abs(c1) ** 2 - abs(c2) ** 2
    if leak < -_NORM_TOL:
        raise InvalidStateError(f"|c1|^2 + |c2|^2 = {1 - leak} exceeds 1")
    psi = np.array([0.0, c1, c2, 0.0], dtype=complex)
    rho = np.outer(psi, psi.conj())
    rho[3, 3] = max(leak, 0.0)
    return rho / np.trace(rho).real


def fidelity_to_phi(state, varphi: float) -> float:
    """``|<Phi(varphi)|state>|**2`` by direct overlap."""
    state = np.asarray(state, dtype=complex)
    return float(abs(np.vdot(phi_state(varphi), state)) ** 2)


def fidelity_closed_form(lam: float, phi_kstar: float, varphi: float):
    """``[1 - C(lam) cos(phi_kstar + varphi)] / 2``, the overlap of a BIC state with ``Phi``."""
    return 0.5 * (1.0 - concurrence_closed_form(lam) * np.cos(phi_kstar + varphi))


def best_phi(c1: complex, c2: complex) -> float:
    """Phase ``varphi`` in [0, 2 pi) maximizing the overlap with ``Phi(varphi)``."""
    return float(np.mod(np.angle(c2) - np.angle(c1), 2 * np.pi))


def bell_transform(c1, c2):
    """``(c+, c-) = ((c1 + c2)/sqrt 2, (c1 - c2)/sqrt 2)``."""
    r = 1.0 / np.sqrt(2.0)
    return (np.add(c1, c2) * r, np.subtract(c1, c2) * r)


def inverse_bell_transform(c_plus, c_minus):
    r = 1.0 / np.sqrt(2.0)
    return (np.add(c_plus, c_minus) * r, np.subtract(c_plus, c_minus) * r)


def concurrence_from_bell(c_plus, c_minus):
    """``| |c+|**2 - |c-|**2 + 2i Im(c- conj(c+)) |``, equal to ``2 |c1 conj(c2)|``."""
    c_plus = np.asarray(c_plus, dtype=complex)
    c_minus = np.asarray(c_minus, dtype=complex)
    val = np.abs(
        np.abs(c_plus) ** 2 - np.abs(c_minus) ** 2 + 2j * np.imag(c_minus * np.conj(c_plus))
    )
    return float(val) if val.ndim == 0 else val

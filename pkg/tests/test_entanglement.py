import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from giantbic import (
    bell_transform,
    bic_state,
    concurrence_closed_form,
    concurrence_from_bell,
    fidelity_closed_form,
    fidelity_to_phi,
    inverse_bell_transform,
    reduced_atomic_density,
    wootters_concurrence,
)
from giantbic.entanglement import SIGMA_YY, best_phi, phi_state
from giantbic.errors import InvalidStateError

finite = dict(allow_nan=False, allow_infinity=False)
amps = st.complex_numbers(max_magnitude=1.0, **finite)
phases = st.floats(-10.0, 10.0, **finite)
ratios = st.floats(0.0, 50.0, **finite)

PSI_PLUS = np.array([0, 1, 1, 0]) / np.sqrt(2)
PSI_MINUS = np.array([0, 1, -1, 0]) / np.sqrt(2)


def r_matrix_concurrence(rho):
    """Textbook route: eigenvalues of R = sqrt(sqrt(rho) rho~ sqrt(rho))."""
    s = scipy.linalg.sqrtm(rho)
    r = scipy.linalg.sqrtm(s @ SIGMA_YY @ rho.conj() @ SIGMA_YY @ s)
    lam = np.sort(np.linalg.eigvals(r).real)[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def projector(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


class TestStates:
    def test_bic_limits(self):
        np.testing.assert_allclose(bic_state(0.0, 0.3), [0, 1, 0, 0])
        np.testing.assert_allclose(bic_state(1.0, np.pi), PSI_PLUS, atol=1e-16)
        np.testing.assert_allclose(bic_state(1.0, 0.0), PSI_MINUS, atol=1e-16)

    @given(ratios, phases)
    def test_normalized(self, lam, phi):
        psi = bic_state(lam, phi)
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-14)
        assert psi[0] == 0 and psi[3] == 0

    def test_negative_ratio(self):
        with pytest.raises(ValueError):
            bic_state(-1.0, 0.0)


class TestConcurrence:
    @pytest.mark.parametrize("lam, value", [(1.0, 1.0), (0.0, 0.0), (1 / 3, 0.6), (10.0, 20 / 101), (0.5, 0.8)])
    def test_closed_form(self, lam, value):
        assert concurrence_closed_form(lam) == pytest.approx(value, abs=1e-15)

    def test_third_by_wootters(self):
        for phi in (0.0, 1.0, 4.0):
            assert wootters_concurrence(projector(bic_state(1 / 3, phi))) == pytest.approx(0.6, abs=1e-12)

    def test_wootters_examples(self):
        assert wootters_concurrence(projector(PSI_PLUS)) == pytest.approx(1.0, abs=1e-12)
        assert wootters_concurrence(projector([0, 1, 0, 0])) == 0.0
        assert wootters_concurrence(projector(bic_state(0.5, 1.2))) == pytest.approx(0.8, abs=1e-12)
        assert wootters_concurrence(np.eye(4) / 4) == 0.0

    def test_werner_state(self):
        # p |Psi-><Psi-| + (1-p) I/4 has C = max(0, (3p - 1)/2)
        for p in (0.2, 1 / 3, 0.6, 0.9):
            rho = p * projector(PSI_MINUS) + (1 - p) * np.eye(4) / 4
            assert wootters_concurrence(rho) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-12)

    def test_matches_r_matrix_oracle_on_mixed_states(self, rng):
        for _ in range(200):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            w = rng.uniform(0, 1, 4) ** 3
            rho = a @ np.diag(w) @ a.conj().T
            rho /= np.trace(rho).real
            rho = (rho + rho.conj().T) / 2
            assert wootters_concurrence(rho) == pytest.approx(r_matrix_concurrence(rho), abs=1e-7)

    def test_rejects_bad_input(self):
        with pytest.raises(InvalidStateError):
            wootters_concurrence(np.eye(3) / 3)
        with pytest.raises(InvalidStateError):
            wootters_concurrence(np.diag([1.2, -0.2, 0, 0]))
        with pytest.raises(InvalidStateError):
            wootters_concurrence(np.eye(4))
        bad = np.eye(4) / 4 + 0j
        bad[0, 1] = 0.1
        with pytest.raises(InvalidStateError):
            wootters_concurrence(bad)

    @given(ratios, phases)
    def test_closed_form_agrees(self, lam, phi):
        c = wootters_concurrence(projector(bic_state(lam, phi)))
        assert c == pytest.approx(concurrence_closed_form(lam), abs=1e-10)

    @given(st.floats(1e-3, 1e3, **finite))
    def test_inversion_symmetry(self, lam):
        assert concurrence_closed_form(lam) == pytest.approx(concurrence_closed_form(1 / lam), abs=1e-12)

    @given(ratios, phases, phases)
    def test_phase_independent(self, lam, a, b):
        ca = wootters_concurrence(projector(bic_state(lam, a)))
        cb = wootters_concurrence(projector(bic_state(lam, b)))
        assert ca == pytest.approx(cb, abs=1e-12)


class TestReducedDensity:
    def test_examples(self):
        np.testing.assert_allclose(reduced_atomic_density(1, 0), projector([0, 1, 0, 0]))
        np.testing.assert_allclose(reduced_atomic_density(0, 0), projector([0, 0, 0, 1]))
        rho = reduced_atomic_density(0.6, 0.6j)
        assert wootters_concurrence(rho) == pytest.approx(0.72, abs=1e-12)
        assert r_matrix_concurrence(rho) == pytest.approx(0.72, abs=1e-7)

    def test_excess_norm(self):
        with pytest.raises(InvalidStateError):
            reduced_atomic_density(0.9, 0.9)

    @given(amps, amps)
    def test_concurrence_is_twice_coherence(self, c1, c2):
        scale = max(1.0, np.hypot(abs(c1), abs(c2)))
        c1, c2 = c1 / scale, c2 / scale
        rho = reduced_atomic_density(c1, c2)
        assert wootters_concurrence(rho) == pytest.approx(2 * abs(c1 * np.conj(c2)), abs=1e-9)


class TestFidelity:
    def test_examples(self):
        assert fidelity_to_phi(phi_state(0.7), 0.7) == pytest.approx(1.0)
        assert fidelity_to_phi(bic_state(1.0, np.pi), 0.0) == pytest.approx(1.0)
        assert fidelity_to_phi(bic_state(1.0, 0.0), 0.0) == pytest.approx(0.0, abs=1e-16)
        assert fidelity_to_phi(bic_state(0.0, 0.0), 1.3) == pytest.approx(0.5)

    @given(ratios, phases, phases)
    def test_closed_form_matches_overlap(self, lam, phik, varphi):
        direct = fidelity_to_phi(bic_state(lam, phik), varphi)
        assert fidelity_closed_form(lam, phik, varphi) == pytest.approx(direct, abs=1e-12)
        c = concurrence_closed_form(lam)
        assert (1 - c) / 2 - 1e-12 <= direct <= (1 + c) / 2 + 1e-12

    @given(phases)
    def test_maximal_condition(self, phi0):
        # F = 1 at varphi = pi - phi0, and a fidelity-one state is maximally entangled
        psi = bic_state(1.0, phi0)
        assert fidelity_to_phi(psi, np.pi - phi0) == pytest.approx(1.0, abs=1e-12)
        assert wootters_concurrence(projector(psi)) == pytest.approx(1.0, abs=1e-12)

    @given(amps, amps)
    def test_best_phi(self, c1, c2):
        if abs(c1) < 1e-6 or abs(c2) < 1e-6:
            return
        norm = np.hypot(abs(c1), abs(c2))
        psi = np.array([0, c1, c2, 0]) / norm
        best = fidelity_to_phi(psi, best_phi(c1, c2))
        for varphi in np.linspace(0, 2 * np.pi, 37):
            assert fidelity_to_phi(psi, varphi) <= best + 1e-12


class TestBell:
    def test_examples(self):
        np.testing.assert_allclose(bell_transform(1, 0), (1 / np.sqrt(2), 1 / np.sqrt(2)))
        np.testing.assert_allclose(bell_transform(1 / np.sqrt(2), 1 / np.sqrt(2)), (1, 0), atol=1e-16)
        assert concurrence_from_bell(1, 0) == pytest.approx(1.0)
        assert concurrence_from_bell(1 / np.sqrt(2), 1 / np.sqrt(2)) == pytest.approx(0.0, abs=1e-16)
        assert concurrence_from_bell(0.6, 0.3j) == pytest.approx(0.45, abs=1e-15)

    @given(amps, amps)
    def test_identity(self, cp, cm):
        c1, c2 = inverse_bell_transform(cp, cm)
        assert concurrence_from_bell(cp, cm) == pytest.approx(2 * abs(c1 * np.conj(c2)), abs=1e-12)

    @given(amps, amps)
    def test_round_trip(self, c1, c2):
        back = inverse_bell_transform(*bell_transform(c1, c2))
        assert back[0] == pytest.approx(c1, abs=1e-15) and back[1] == pytest.approx(c2, abs=1e-15)

    def test_vectorized(self, rng):
        cp = rng.normal(size=50) + 1j * rng.normal(size=50)
        cm = rng.normal(size=50) + 1j * rng.normal(size=50)
        vec = concurrence_from_bell(cp, cm)
        assert vec.shape == (50,)
        assert vec[7] == pytest.approx(concurrence_from_bell(cp[7], cm[7]))

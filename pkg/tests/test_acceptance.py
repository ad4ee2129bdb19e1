"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a ``[PASS]``/``[FAIL]`` line that is repeated in the
terminal summary under "acceptance criteria".
"""
import time

import numpy as np
import pytest
import scipy.linalg as la

from giantbic import (
    Geometry,
    ModelParams,
    SingleExcitationState,
    bell_transform,
    bic_state,
    build_hamiltonian,
    concurrence_closed_form,
    decay_rate_continuum,
    detuned_case,
    evolve_ed,
    evolve_volterra_coupled,
    find_bic,
    fidelity_to_phi,
    interference_factor,
    self_energy,
    wootters_concurrence,
)
from giantbic import cli

pytestmark = pytest.mark.acceptance


def ed_trajectory(p, geom, c1, c2, times, eig=None):
    H = eig if eig is not None else build_hamiltonian(p, geom)
    return evolve_ed(H, SingleExcitationState.atomic(c1, c2, p.N_c), times).rotated(p.Omega)


def test_concurrence_law(criterion):
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    lam = rng.uniform(0, 50, 1000)
    phi = rng.uniform(0, 2 * np.pi, 1000)
    err = 0.0
    for l, f in zip(lam, phi):
        psi = bic_state(l, f)
        err = max(err, abs(wootters_concurrence(np.outer(psi, psi.conj())) - concurrence_closed_form(l)))
    elapsed = time.perf_counter() - start
    sym = np.max(np.abs(concurrence_closed_form(lam[lam > 0]) - concurrence_closed_form(1 / lam[lam > 0])))
    c1 = concurrence_closed_form(1.0)
    ok = err <= 1e-10 and abs(c1 - 1) <= 1e-12 and sym <= 1e-12 and elapsed < 1.0
    criterion(1, "concurrence law", ok, f"max err {err:.1e}, C(1)={c1}, symmetry {sym:.1e}, {elapsed:.2f}s")


def test_fidelity_bounds(criterion):
    from scipy.optimize import minimize_scalar

    start = time.perf_counter()
    worst = 0.0
    phi_k = 0.37
    grid = np.linspace(0, 2 * np.pi, 73)
    for lam in (0.1, 0.5, 1.0, 2.0, 10.0):
        psi = bic_state(lam, phi_k)
        C = concurrence_closed_form(lam)
        for sign, bound in ((1, (1 - C) / 2), (-1, (1 + C) / 2)):
            f = lambda v: sign * fidelity_to_phi(psi, v)
            j = int(np.argmin([f(v) for v in grid]))
            res = minimize_scalar(f, bounds=(grid[max(j - 1, 0)], grid[min(j + 1, 72)]), method="bounded",
                                  options={"xatol": 1e-10})
            worst = max(worst, abs(sign * res.fun - bound))
    elapsed = time.perf_counter() - start
    criterion(2, "fidelity bounds", worst <= 1e-10 and elapsed < 1.0, f"max err {worst:.1e}, {elapsed:.2f}s")


def test_rate_consistency(criterion, reference_params):
    rng = np.random.default_rng(3)
    p = reference_params
    start = time.perf_counter()
    worst, count = 0.0, 0
    while count < 50:
        geom = Geometry(x1=0, x2=int(rng.integers(-3, 4)), n1=int(rng.integers(1, 5)), n2=int(rng.integers(1, 5)))
        ch = "+-"[int(rng.integers(2))]
        if interference_factor(p.k_star, ch, geom) <= 0.1:
            continue
        discrete = self_energy(p.Omega, ch, p, geom).gamma
        exact = decay_rate_continuum(p.Omega, ch, p, geom)
        worst = max(worst, abs(discrete - exact) / exact)
        count += 1
    elapsed = time.perf_counter() - start
    criterion(3, "rate consistency", worst < 0.02 and elapsed < 10.0,
              f"worst relative error {100 * worst:.2f}% over 50 geometries, {elapsed:.1f}s")


@pytest.fixture(scope="module")
def robust_bic_runs(reference_params):
    """ED eigenspace at omega_c and find_bic residuals for 20 random separations."""
    p = reference_params
    rng = np.random.default_rng(4)
    pool = [d for d in range(-20, 21) if abs(d) != 1]
    runs = []
    start = time.perf_counter()
    for dx in rng.choice(pool, 20):
        geom = Geometry(x1=0, x2=int(dx), n1=2, n2=2)
        E, V = la.eigh(build_hamiltonian(p, geom), driver="evr", subset_by_value=(p.omega_c - 1e-8, p.omega_c + 1e-8))
        # the eigenspace is degenerate; take the member with the most atomic weight
        atomic = la.svdvals(V[:2]) if V.shape[1] else np.zeros(1)
        weight = 1.0 - atomic[0] ** 2
        residual = min(s.residual_gamma for ch in "+-" for s in find_bic(ch, p, geom))
        runs.append((int(dx), E, weight, residual))
    return runs, time.perf_counter() - start


def test_robust_bic(criterion, robust_bic_runs):
    runs, elapsed = robust_bic_runs
    has_eig = all(E.size > 0 and np.min(np.abs(E)) < 1e-8 for _, E, _, _ in runs)
    max_weight = max(w for _, _, w, _ in runs)
    max_res = max(r for *_, r in runs)
    ok = has_eig and max_weight < 1e-4 and max_res < 1e-10 and elapsed < 120
    criterion(4, "robust BIC", ok,
              f"eigenvalue at omega_c: {has_eig}; max photonic weight {max_weight:.3e} (limit 1e-4); "
              f"max residual {max_res:.1e}; {elapsed:.0f}s")


def test_robust_bic_photon_is_bound_dressing(robust_bic_runs, reference_params):
    # each atom's BIC carries a bound photon g c_i / xi on the site between its
    # legs.  Its overlap 2/N_c with the decoupled k = +-pi/2 modes can be
    # projected out inside the degenerate eigenspace, once per atom for odd dx
    # and coherently (twice) for even dx.
    g2, xi2, n = reference_params.g ** 2, reference_params.xi ** 2, reference_params.N_c
    runs, _ = robust_bic_runs
    for dx, _, weight, _ in runs:
        b = g2 * (1 - (4 if dx % 2 == 0 else 2) / n)
        expected = 0.0 if dx == 0 else b / (xi2 + b)
        assert weight == pytest.approx(expected, abs=1e-10), dx


def test_long_lived_entanglement(criterion, reference_params, ideal_geometry, ideal_eigensystem):
    c1, c2 = detuned_case(None, reference_params, ideal_geometry)[2]
    times = np.linspace(0, 400, 801)
    C = ed_trajectory(reference_params, ideal_geometry, c1, c2, times, ideal_eigensystem).concurrence
    criterion(5, "long-lived entanglement", np.min(C) >= 0.95, f"min C over xi t <= 400: {np.min(C):.4f}")


def test_robustness_hierarchy(criterion, reference_params, ideal_geometry):
    final = {}
    for kind in ("lambda", "theta", "kstar"):
        p, geom, (c1, c2) = detuned_case(kind, reference_params, ideal_geometry)
        final[kind] = float(ed_trajectory(p, geom, c1, c2, [0.0, 400.0]).concurrence[-1])
    ok = final["lambda"] < 0.4 and final["theta"] > final["lambda"] and final["kstar"] > final["lambda"]
    criterion(6, "robustness hierarchy", ok,
              ", ".join(f"C_{k}(400)={v:.4f}" for k, v in final.items()))


def test_markov_window(criterion, reference_params):
    geom = Geometry(x1=0, x2=0, n1=1, n2=1)
    gamma = decay_rate_continuum(reference_params.Omega, "+", reference_params, geom)
    times = np.linspace(0, 100, 401)
    r = 1 / np.sqrt(2)
    C = ed_trajectory(reference_params, geom, r, r, times).concurrence
    dev = np.max(np.abs(C - C[0] * np.exp(-gamma * times)))
    ok = dev <= 0.05 and abs(gamma - 0.04) < 1e-12
    criterion(7, "Markov validity window", ok, f"Gamma+={gamma:.6f}, max deviation {dev:.4f}")


def test_engine_equivalence(criterion, reference_params):
    rng = np.random.default_rng(8)
    p = reference_params
    start = time.perf_counter()
    worst = 0.0
    for _ in range(5):
        geom = Geometry(x1=0, x2=rng.uniform(-4, 4), n1=rng.uniform(0.5, 4), n2=rng.uniform(0.5, 4))
        c = rng.normal(size=2) + 1j * rng.normal(size=2)
        c1, c2 = c / np.linalg.norm(c)
        vt = evolve_volterra_coupled(c1, c2, 100.0, 0.02, p, geom)
        ed = ed_trajectory(p, geom, c1, c2, vt.times)
        for a, b in zip(bell_transform(ed.c1, ed.c2), bell_transform(vt.c1, vt.c2)):
            worst = max(worst, float(np.max(np.abs(a - b))))
    elapsed = time.perf_counter() - start
    criterion(8, "engine equivalence", worst <= 1e-3 and elapsed < 300,
              f"max |ED - Volterra| {worst:.1e} over 5 geometries, {elapsed:.0f}s")


def test_parity_effect(criterion, reference_params):
    thetas = np.linspace(0, 2 * np.pi, 180, endpoint=False)
    lambdas = np.linspace(0.02, 2.0, 100)
    rings = np.array(cli.rates_map(lambdas, thetas, 2.0, np.pi / 2, reference_params)).reshape(100, 180, 6)
    var = max(np.max(np.var(rings[:, :, 4], axis=1)), np.max(np.var(rings[:, :, 5], axis=1)))
    gp = np.array(cli.rates_map([1.0], thetas, 1.0, np.pi / 2, reference_params))[:, 4]
    spread = gp.max() - gp.min()
    criterion(9, "parity effect", var < 1e-12 and spread > 0,
              f"n2=2 max theta-variance {var:.1e}; n2=1 spread at lambda=1 {spread:.4f}")


def test_determinism(criterion, tmp_path):
    commands = {
        "concurrence-map": [],
        "fidelity-map": [],
        "rates-map": ["--set", "rates_map.lambda_count=40"],
    }
    same = {}
    for name, extra in commands.items():
        blobs = []
        for run, workers in enumerate((1, 1, 2)):
            out = tmp_path / f"{name}-{run}.dsv"
            assert cli.main([name, "--workers", str(workers), "--out", str(out), *extra]) == 0
            blobs.append(out.read_bytes())
        same[name] = blobs[0] == blobs[1] == blobs[2]
    criterion(10, "determinism", all(same.values()),
              ", ".join(f"{k}: {'identical' if v else 'DIFFERENT'}" for k, v in same.items()))

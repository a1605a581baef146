"""Acceptance suite: one test and one printed PASS/FAIL line per criterion.

Random draws use a fixed seed.  Metrics are taken in the unimodular gauge
(c1 fixed so that det rho = 1) wherever an absolute finite-difference
tolerance is applied; the relations are linear in rho so this only removes
an overall scale that would otherwise dominate the roundoff.
"""
import sys
import time

import numpy as np
import pytest

from dysonspin.cli import main
from dysonspin.dyson import (DysonSpec, dyson_map, hermitian_counterpart, match_constants, metric,
                             metric_closed_form, metric_determinant, printed_component_report,
                             quasi_hermiticity_residual, target_hamiltonian)
from dysonspin.ermakov import EPConstantsABC, EPSolution, constraint_residual, ep_residual
from dysonspin.evolution import (closed_form_state, eigenstate, energy_expectation_check,
                                 map_state, metric_inner_product, normalization, rk4_propagate)
from dysonspin.linalg import max_norm, phase_align, time_derivative
from dysonspin.spin import (HALF, ONE, SPINS, ModelParams, closed_form_spectrum, hamiltonian,
                            level_labels)

SEED = 20240611


def report(n, passed, detail, elapsed, limit):
    status = "PASS" if passed and elapsed < limit else "FAIL"
    line = f"criterion {n:2d}: {status}  {detail}  [{elapsed:.2f}s < {limit:g}s]"
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()
    return status == "PASS"


def draws(n, rng, spins=SPINS):
    """n random parameter points per spin."""
    out = []
    for s in spins:
        for _ in range(n):
            p = ModelParams(s, rng.uniform(-0.6, 0.6), rng.uniform(0, 2))
            out.append(DysonSpec.unimodular(p, rng.uniform(-1, 1), rng.uniform(-1, 1)))
    return out


def test_criterion_01_spectrum():
    t0 = time.perf_counter()
    worst, min_im = 0.0, np.inf
    for s in SPINS:
        for g in (-0.95, -0.5, 0.0, 0.5, 0.95):
            p = ModelParams(s, g, 1.0)
            num = np.sort_complex(np.linalg.eigvals(hamiltonian(p)))
            closed = np.sort_complex(closed_form_spectrum(p).energies.astype(complex))
            worst = max(worst, np.abs(num - closed).max())
        vals = np.linalg.eigvals(hamiltonian(ModelParams(s, 1.5, 1.0)))
        pair = max(np.min(np.abs(vals - np.conj(v))) for v in vals)
        worst = max(worst, pair)
        # odd dimension: one level is its own conjugate and stays real
        min_im = min(min_im, np.sort(np.abs(vals.imag))[len(vals) % 2:].min())
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and min_im > 1e-3
    assert report(1, ok, f"max |E_closed - E_num| = {worst:.1e}; gamma=1.5 min |Im| = {min_im:.3f}",
                  elapsed, 1.0)


def test_criterion_02_ermakov_pinney():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    grid = np.linspace(0, 20, 401)
    worst_c, worst_s = 0.0, 0.0
    for s in SPINS:
        for _ in range(20):
            p = ModelParams(s, rng.uniform(-0.9, 0.9))
            sol = EPSolution.for_model(p, *rng.uniform(-2, 2, size=2))
            worst_c = max(worst_c, constraint_residual(sol, grid).max())
            worst_s = max(worst_s, ep_residual(EPConstantsABC.from_solution(sol), sol.freq, grid).max())
    elapsed = time.perf_counter() - t0
    ok = worst_c <= 1e-9 and worst_s <= 1e-9
    assert report(2, ok, f"constraint {worst_c:.1e}; Ermakov-Pinney sigma {worst_s:.1e}", elapsed, 1.0)


def test_criterion_03_dyson_relation():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 3)
    times = np.linspace(0, 10, 21)
    worst_d, worst_t, corrected = 0.0, 0.0, set()
    for spec in draws(10, rng):
        for t in times:
            h = hermitian_counterpart(spec, t, 1e-5)
            p = spec.params
            literal = -0.5 * (p.omega * np.eye(p.dim) + spec.chi(t) * _z(p))
            worst_d = max(worst_d, max_norm(h - target_hamiltonian(spec, t)))
            worst_t = max(worst_t, max_norm(h - literal))
        rows, printed, fixed = printed_component_report(spec, 3.0)
        if spec.spin == SPINS[2]:
            assert printed > 1e-3 and fixed <= 1e-6
            corrected.update(i for i, *_ in rows)
    elapsed = time.perf_counter() - t0
    ok = worst_d <= 1e-6 and worst_t <= 1e-6 and corrected
    assert report(3, ok, f"Dyson residual {worst_d:.1e}; target-form {worst_t:.1e}; "
                         f"spin-3/2 corrected components {sorted(corrected)}", elapsed, 5.0)


def _z(p):
    # S_z of the target form, sigma_z for spin 1/2
    return np.diag([1.0, -1.0]) if p.spin == HALF else np.diag(np.arange(p.dim)[::-1] - (p.dim - 1) / 2)


def test_criterion_04_quasi_hermiticity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 4)
    times = np.linspace(0, 10, 11)
    worst_eta, worst_b = 0.0, 0.0
    for spec in draws(10, rng):
        H = hamiltonian(spec.params)
        for t in times:
            worst_eta = max(worst_eta, quasi_hermiticity_residual(H, lambda u: metric(spec, u), t, 1e-5))
    for s, nb in ((HALF, 4), (ONE, 9)):
        for _ in range(10):
            p = ModelParams(s, rng.uniform(-0.6, 0.6), rng.uniform(0, 2))
            b = rng.uniform(-1, 1, size=nb)
            rho = lambda u: metric_closed_form(s, b, p, u)
            for t in times:
                worst_b = max(worst_b, quasi_hermiticity_residual(hamiltonian(p), rho, t, 1e-5))
    elapsed = time.perf_counter() - t0
    ok = worst_eta <= 1e-6 and worst_b <= 1e-6
    assert report(4, ok, f"rho = eta^2: {worst_eta:.1e}; closed form, arbitrary b: {worst_b:.1e}",
                  elapsed, 5.0)


def test_criterion_05_route_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    for spec in draws(10, rng, spins=(HALF, ONE)):
        b = match_constants(spec)
        for t in np.linspace(0, 10, 21):
            diff = metric(spec, t) - metric_closed_form(spec.spin, b, spec.params, t)
            worst = max(worst, max_norm(diff))
    elapsed = time.perf_counter() - t0
    assert report(5, worst <= 1e-10, f"max ||eta^2 - rho_closed(b)|| = {worst:.1e}", elapsed, 2.0)


def test_criterion_06_determinants():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 6)
    worst_rel, worst_drift = 0.0, 0.0
    for s in SPINS:
        for _ in range(10):
            p = ModelParams(s, rng.uniform(-0.8, 0.8), rng.uniform(0, 2))
            spec = DysonSpec.build(p, rng.uniform(0.5, 1.5), *rng.uniform(-1.5, 1.5, size=2))
            dets = np.array([np.linalg.det(metric(spec, t)).real for t in np.linspace(0, 10, 11)])
            d0 = metric_determinant(spec)
            worst_rel = max(worst_rel, np.abs(dets / d0 - 1).max())
            worst_drift = max(worst_drift, np.ptp(dets) / abs(d0))
    elapsed = time.perf_counter() - t0
    ok = worst_rel <= 1e-10 and worst_drift <= 1e-10
    assert report(6, ok, f"closed vs numeric {worst_rel:.1e}; time drift {worst_drift:.1e}",
                  elapsed, 1.0)


def test_criterion_07_unitarity_and_overlaps():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 7)
    times = np.linspace(0, 10, 11)
    worst_n, worst_dt, worst_lit, worst_fix = 0.0, 0.0, 0.0, 0.0
    for spec in draws(4, rng):
        p = spec.params
        if p.spin == HALF:
            r = np.sqrt(p.freq ** 2 + spec.ep.c2 ** 2 + spec.ep.c3 ** 2)
            g, c2, c3 = p.gamma, spec.ep.c2, spec.ep.c3
        if p.spin in (HALF, ONE):
            for k in level_labels(p.spin):
                for t in times:
                    psi = eigenstate(spec, k, t)
                    worst_n = max(worst_n, abs(normalization(spec, k)
                                               * metric_inner_product(psi, psi, metric(spec, t)).real - 1))
        coeffs = {k: rng.normal() + 1j * rng.normal() for k in level_labels(p.spin)}
        psi0 = closed_form_state(p, coeffs, 0.0)
        scale = 1 / metric_inner_product(psi0, psi0, metric(spec, 0.0)).real
        norm = lambda u: scale * metric_inner_product(closed_form_state(p, coeffs, u),
                                                      closed_form_state(p, coeffs, u), metric(spec, u)).real
        worst_dt = max(worst_dt, max(abs(time_derivative(norm, t, 1e-5)) for t in times))
        if p.spin == HALF:
            for t in times:
                phi = {k: map_state(spec, eigenstate(spec, k, t), t, True, k) for k in (1, -1)}
                for k in (1, -1):
                    ov = np.vdot(phi[k], phi[-k])
                    worst_lit = max(worst_lit, abs(ov - g * (k * c3 + 1j * c2) / r))
                    worst_fix = max(worst_fix, abs(ov + g * (c3 + k * 1j * c2) / r))
    elapsed = time.perf_counter() - t0
    attainable = worst_n <= 1e-9 and worst_dt <= 1e-6 and worst_fix <= 1e-9
    ok = attainable and worst_lit <= 1e-9
    report(7, ok, f"N<Psi|rho Psi> - 1: {worst_n:.1e}; d/dt norm {worst_dt:.1e}; "
                  f"overlap vs printed formula {worst_lit:.1e}; vs conjugate-symmetric "
                  f"-gamma(c3 +/- i c2)/sqrt(...) {worst_fix:.1e}", elapsed, 2.0)
    assert attainable and elapsed < 2.0
    if worst_lit > 1e-9:
        pytest.xfail("printed overlap gamma(+/-c3 + i c2)/sqrt(...) is not conjugate symmetric "
                     "and cannot hold for both signs")


def test_criterion_08_energy_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 8)
    worst3, worst2 = 0.0, 0.0
    for spec in draws(10, rng):
        t = rng.uniform(0, 10)
        for k in level_labels(spec.spin):
            chk = energy_expectation_check(spec, k, t, 1e-5)
            worst2 = max(worst2, abs(chk.lhs - chk.rhs))
            if spec.spin == HALF:
                worst3 = max(worst3, abs(chk.lhs - chk.closed), abs(chk.rhs - chk.closed))
    elapsed = time.perf_counter() - t0
    ok = worst2 <= 1e-6 and worst3 <= 1e-6
    assert report(8, ok, f"lhs = rhs {worst2:.1e}; spin-1/2 closed form {worst3:.1e}", elapsed, 2.0)


def test_criterion_09_propagation():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 9)
    grid = np.linspace(0, 10, 10001)
    worst = 0.0
    for spec in draws(1, rng):
        p = spec.params
        coeffs = {k: rng.normal() + 1j * rng.normal() for k in level_labels(p.spin)}
        psi0 = closed_form_state(p, coeffs, 0.0)
        psi0 = psi0 / np.sqrt(metric_inner_product(psi0, psi0, metric(spec, 0.0)).real)
        psi_T = rk4_propagate(hamiltonian(p), psi0, grid).final
        phi_T = rk4_propagate(lambda t: target_hamiltonian(spec, t), dyson_map(spec, 0.0) @ psi0, grid).final
        mapped = dyson_map(spec, 10.0) @ psi_T
        worst = max(worst, np.abs(phase_align(phi_T, mapped) - mapped).max())
    elapsed = time.perf_counter() - t0
    assert report(9, worst <= 1e-6, f"sup |phi_RK4(T) - eta(T) Psi_RK4(T)| = {worst:.1e}", elapsed, 5.0)


def test_criterion_10_full_verify(capsys):
    t0 = time.perf_counter()
    codes = []
    for s in SPINS:
        codes.append(main(["verify", "--spin", str(s), "--gamma", "0.6", "--omega", "1",
                           "--c1", "1", "--c2", "1", "--c3", "0"]))
    capsys.readouterr()
    elapsed = time.perf_counter() - t0
    assert report(10, codes == [0, 0, 0], f"verify exit codes {codes} for spins 1/2, 1, 3/2",
                  elapsed, 30.0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))

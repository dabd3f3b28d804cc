"""Protocol-level checks against analytic sector oracles.

The noiseless entangling dynamics conserves total excitation number, so runs
starting from one excitation live in a tiny sector that can be solved
exactly with an independent matrix exponential.  Those sector solutions are
the oracles for the full-model comparisons below.
"""

import math

import numpy as np
import pytest
import scipy.linalg

from dotbus.dynamics import NoiseSpec
from dotbus.hamiltonians import ModelParams, analytic_u
from dotbus.protocols import (
    decoherence_sweep,
    dispersive_validity,
    epr_generation,
    epr_target,
    gate_time_t0,
    selective_coupling_check,
)

G_PAPER = 2 * math.pi * 100e6       # coupling, rad/s
TAU_PAPER = 10 * G_PAPER
GAMMA_PAPER = 2 * math.pi * 0.2e6
GAMMA_PHI_PAPER = 2 * math.pi * 0.5e6


def paper_model(cutoff=5):
    return ModelParams.uniform(2, G_PAPER, TAU_PAPER, photon_cutoff=cutoff)


def sector_oracle_two_qubits(g, tau, t):
    """Exact one-excitation amplitudes (|10>, |01>, photon) of the full model.

    Independent route: 3x3 static-frame Hamiltonian, scipy matrix
    exponential, then the frame phases.
    """
    h = np.array([[tau, 0, g], [0, tau, g], [g, g, 0]], dtype=complex)
    frame = np.diag(np.exp(1j * np.array([tau, tau, 0.0]) * t))
    return frame @ scipy.linalg.expm(-1j * h * t) @ np.array([1, 0, 0], dtype=complex)


class TestGateTime:
    def test_reference_point(self):
        lam = 2 * math.pi * 10e6
        assert gate_time_t0(lam) == pytest.approx(12.5e-9, rel=1e-12)

    def test_inverse_scaling(self):
        assert gate_time_t0(2.0) == pytest.approx(gate_time_t0(1.0) / 2)

    def test_slow_gate(self):
        assert gate_time_t0(2 * math.pi * 1e6) == pytest.approx(125e-9, rel=1e-12)

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            gate_time_t0(0.0)


class TestEprGeneration:
    def test_noiseless_is_exact(self):
        report = epr_generation(paper_model(), NoiseSpec.none(2))
        assert report.fidelity > 1 - 1e-8
        assert report.concurrence > 1 - 1e-8
        assert report.error_d == pytest.approx(1 - report.fidelity, abs=1e-12)

    def test_noiseless_matches_closed_form(self):
        report = epr_generation(paper_model(), NoiseSpec.none(2))
        lam = paper_model().lam
        psi = analytic_u(lam, report.t0) @ np.array([0, 1, 0, 0], dtype=complex)
        closed_form = float(abs(np.vdot(epr_target().amplitudes, psi)) ** 2)
        assert abs(report.fidelity - closed_form) < 1e-8

    def test_reference_operating_point(self):
        noise = NoiseSpec.uniform(2, GAMMA_PAPER, GAMMA_PHI_PAPER)
        report = epr_generation(paper_model(), noise)
        assert report.error_d < 0.05

    def test_heavy_dephasing_limit(self):
        # gphi * t0 >> 1: dephasing freezes the exchange (Zeno pinning at
        # |10>) and kills the off-diagonal, so the target overlap settles at
        # 1/2 up to a residual coherence of order lambda / gphi.
        noise = NoiseSpec.uniform(2, 0.0, 2 * math.pi * 2e9)
        report = epr_generation(paper_model(), noise)
        assert report.fidelity == pytest.approx(0.5, abs=0.05)
        assert report.concurrence < 0.1

    def test_error_monotone_in_each_rate(self):
        base = paper_model()
        rates = [2 * math.pi * f for f in (0.0, 0.25e6, 0.5e6, 0.75e6, 1e6)]
        d_relax = [
            epr_generation(base, NoiseSpec.uniform(2, r, GAMMA_PHI_PAPER)).error_d
            for r in rates
        ]
        d_dephase = [
            epr_generation(base, NoiseSpec.uniform(2, GAMMA_PAPER, r)).error_d
            for r in rates
        ]
        assert all(a < b for a, b in zip(d_relax, d_relax[1:]))
        assert all(a < b for a, b in zip(d_dephase, d_dephase[1:]))

    def test_concurrence_nonincreasing_in_noise(self):
        base = paper_model()
        rates = [2 * math.pi * f for f in (0.0, 0.25e6, 0.5e6, 0.75e6, 1e6)]
        conc = [
            epr_generation(base, NoiseSpec.uniform(2, r, r)).concurrence for r in rates
        ]
        assert all(a >= b for a, b in zip(conc, conc[1:]))

    def test_wrong_qubit_count_rejected(self):
        with pytest.raises(ValueError):
            epr_generation(ModelParams.uniform(3, G_PAPER, TAU_PAPER), NoiseSpec.none(2))


class TestDispersiveValidity:
    @pytest.mark.parametrize("ratio", [5.0, 10.0, 20.0, 50.0, 100.0])
    def test_matches_sector_oracle(self, ratio):
        g = 1.0
        tau = ratio * g
        p = ModelParams.uniform(2, g, tau, photon_cutoff=5)
        report = dispersive_validity(p)
        t0 = gate_time_t0(g * g / tau)
        amps = sector_oracle_two_qubits(g, tau, t0)
        target = np.exp(-1j * math.pi / 4) * np.array([1, -1j, 0]) / math.sqrt(2)
        oracle_fid = float(abs(np.vdot(target, amps)) ** 2)
        assert report.fidelity_full_vs_effective == pytest.approx(oracle_fid, abs=1e-9)

    def test_reference_detuning(self):
        report = dispersive_validity(paper_model())
        assert report.fidelity_full_vs_effective >= 0.95
        assert report.max_cavity_occupation < report.cavity_bound
        assert report.cutoff_shift < 1e-6

    def test_cavity_stays_nearly_empty(self):
        # Exact bound from the one-excitation sector: the symmetric qubit
        # state Rabi-oscillates against the photon with generalized frequency
        # sqrt(tau^2 + 8 g^2), so occupation never exceeds 4g^2/(tau^2 + 8g^2).
        g, tau = 1.0, 10.0
        report = dispersive_validity(ModelParams.uniform(2, g, tau))
        exact_peak = 4 * g**2 / (tau**2 + 8 * g**2)
        assert report.max_cavity_occupation <= exact_peak + 1e-9
        assert report.max_cavity_occupation == pytest.approx(exact_peak, rel=1e-3)

    def test_below_threshold_rejected(self):
        with pytest.raises(ValueError):
            dispersive_validity(ModelParams.uniform(2, 1.0, 3.0))


class TestSelectiveCoupling:
    def test_decoupled_spectator_is_untouched(self):
        p = ModelParams(3, (1.0, 1.0, 0.0), (10.0, 10.0, 10.0), photon_cutoff=4)
        report = selective_coupling_check(p, spectator_ratio=10.0)
        assert report.spectator_max_deviation == pytest.approx(0.0, abs=1e-20)
        assert report.active_pair_fidelity > 0.95

    def test_inverse_square_scaling_of_worst_excursion(self):
        p = ModelParams.uniform(3, 1.0, 10.0, photon_cutoff=4)
        dev10 = selective_coupling_check(p, spectator_ratio=10.0).spectator_max_deviation
        dev20 = selective_coupling_check(p, spectator_ratio=20.0).spectator_max_deviation
        ratio = dev10 / dev20
        assert 2.0 < ratio < 8.0  # (tau_spec/tau_active)^2 = 4, within factor 2

    def test_active_pair_reaches_target(self):
        p = ModelParams.uniform(3, 1.0, 10.0, photon_cutoff=4)
        report = selective_coupling_check(p, spectator_ratio=10.0)
        assert report.active_pair_fidelity > 0.95

    def test_matches_sector_oracle(self):
        # Independent 4x4 one-excitation solution with the spectator included.
        g, tau, ratio = 1.0, 10.0, 10.0
        p = ModelParams.uniform(3, g, tau, photon_cutoff=4)
        report = selective_coupling_check(p, spectator_ratio=ratio, samples=400)
        t0 = gate_time_t0(g * g / tau)
        h = np.diag([tau, tau, ratio * tau, 0.0]).astype(complex)
        for i in range(3):
            h[i, 3] = h[3, i] = g
        frame = np.diag(np.exp(1j * np.array([tau, tau, ratio * tau, 0.0]) * t0))
        amps = frame @ scipy.linalg.expm(-1j * h * t0) @ np.array([1, 0, 0, 0], complex)
        assert report.spectator_final_deviation == pytest.approx(
            abs(amps[2]) ** 2, abs=1e-10
        )

    def test_requires_spectator(self):
        with pytest.raises(ValueError):
            selective_coupling_check(paper_model())


class TestDecoherenceSweep:
    def make_axes(self):
        return (
            2 * math.pi * np.linspace(0, 1e6, 4),
            2 * math.pi * np.linspace(0, 1e6, 3),
        )

    def test_noiseless_corner(self):
        gamma, gamma_phi = self.make_axes()
        sweep = decoherence_sweep(paper_model(), gamma, gamma_phi)
        assert sweep.error_grid[0, 0] < 1e-6

    def test_entrywise_monotone(self):
        gamma, gamma_phi = self.make_axes()
        grid = decoherence_sweep(paper_model(), gamma, gamma_phi).error_grid
        assert np.all(np.diff(grid, axis=0) >= 0)
        assert np.all(np.diff(grid, axis=1) >= 0)

    def test_deterministic_across_thread_counts(self):
        gamma, gamma_phi = self.make_axes()
        a = decoherence_sweep(paper_model(), gamma, gamma_phi, threads=1)
        b = decoherence_sweep(paper_model(), gamma, gamma_phi, threads=3)
        assert np.array_equal(a.error_grid, b.error_grid)

    def test_empty_axis_rejected(self):
        with pytest.raises(ValueError):
            decoherence_sweep(paper_model(), [], [0.0])

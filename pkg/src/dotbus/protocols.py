"""Experiment-level routines composed from the lower modules.

Covers entangled-pair generation under noise, validation of the dispersive
effective model against the full qubit-cavity dynamics, spectator decoupling
checks, and the two-axis decoherence sweep of the generation error.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import (
    DensityMatrix,
    HilbertSpace,
    PureState,
    concurrence,
    expm_propagator,
    fidelity,
    partial_trace,
)
from .dynamics import (
    NoiseSpec,
    SimResult,
    TimeGrid,
    default_step_count,
    error_probability,
    integrate_lindblad,
)
from .hamiltonians import (
    ModelParams,
    h_effective,
    h_reduced_two_qubit,
    rotating_frame_generator,
    static_frame_hamiltonian,
)

TWO_QUBIT_SPACE = HilbertSpace((2, 2))
MIN_EPR_STEPS = 256


def gate_time_t0(lam: float) -> float:
    """Entangling time pi / (4 lambda): a quarter of the full exchange period."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    return math.pi / (4.0 * lam)


def epr_target() -> PureState:
    """(|10> - i|01>)/sqrt(2) in the reduced basis {|00>, |10>, |01>, |11>}."""
    return PureState(TWO_QUBIT_SPACE, np.array([0, 1, -1j, 0]) / math.sqrt(2))


@dataclass(frozen=True, eq=False)
class EprReport:
    t0: float
    fidelity: float
    error_d: float
    concurrence: float
    result: SimResult


def _epr_grid(lam: float, noise: NoiseSpec, steps: int | None) -> TimeGrid:
    t0 = gate_time_t0(lam)
    if steps is None:
        steps = max(MIN_EPR_STEPS, default_step_count(t0, 2.0 * lam, noise.total_rate))
    return TimeGrid(0.0, t0, steps)


def epr_generation(
    p: ModelParams,
    noise: NoiseSpec,
    steps: int | None = None,
    record_every: int | None = None,
) -> EprReport:
    """Evolve |10> under the vacuum-sector Hamiltonian with noise for t0.

    Reports fidelity against the entangled target, the error probability
    D = 1 - fidelity, and the Wootters concurrence of the final state.
    """
    if p.n_qubits != 2:
        raise ValueError("entangled-pair generation targets exactly two qubits")
    if noise.n_qubits != 2:
        raise ValueError("noise spec must cover two qubits")
    lam = p.lam
    h20 = h_reduced_two_qubit(lam)
    grid = _epr_grid(lam, noise, steps)
    if record_every is None:
        record_every = grid.steps
    psi0 = np.zeros(4, dtype=complex)
    psi0[1] = 1.0  # |10>
    rho0 = PureState(TWO_QUBIT_SPACE, psi0).density_matrix()
    result = integrate_lindblad(h20, rho0, noise, grid, record_every=record_every)
    rho_final = DensityMatrix(TWO_QUBIT_SPACE, result.final)
    target = epr_target()
    fid = fidelity(rho_final, target)
    return EprReport(
        t0=grid.t_end,
        fidelity=fid,
        error_d=error_probability(rho_final, target),
        concurrence=concurrence(rho_final),
        result=result,
    )


def _frame_trajectory(p: ModelParams, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Exact states of the time-dependent interaction at the given times.

    Diagonalizes the equivalent static-frame Hamiltonian once, then applies
    the frame phases; returns an array of shape (len(times), dim).
    """
    h = static_frame_hamiltonian(p)
    evals, evecs = np.linalg.eigh(h)
    c0 = evecs.conj().T @ psi0
    a_diag = np.real(np.diag(rotating_frame_generator(p)))
    # (dim, nt) phases for both the propagation and the frame rotation
    prop = evecs @ (np.exp(-1j * np.outer(evals, times)) * c0[:, None])
    frame = np.exp(1j * np.outer(a_diag, times))
    return (frame * prop).T


def _full_initial_state(p: ModelParams, excited: int) -> np.ndarray:
    """|0..1..0> x |vacuum> with qubit ``excited`` flipped, full-space index."""
    dim_cav = p.photon_cutoff + 1
    idx = dim_cav * 2 ** (p.n_qubits - 1 - excited)
    psi = np.zeros(p.space.dim, dtype=complex)
    psi[idx] = 1.0
    return psi


@dataclass(frozen=True, eq=False)
class DispersiveReport:
    tau_over_g: float
    fidelity_full_vs_effective: float
    infidelity: float
    max_cavity_occupation: float
    cavity_bound: float
    cutoff_shift: float


def _cavity_occupation(p: ModelParams, states: np.ndarray) -> np.ndarray:
    dim_cav = p.photon_cutoff + 1
    probs = np.abs(states.reshape(states.shape[0], -1, dim_cav)) ** 2
    return probs.sum(axis=1) @ np.arange(dim_cav, dtype=float)


def dispersive_validity(p: ModelParams, samples: int = 400) -> DispersiveReport:
    """Compare the full qubit-cavity dynamics against the effective model.

    Propagates |10> x |vacuum> for the entangling time under both, traces the
    cavity, and reports the overlap of the final qubit states plus the peak
    cavity occupation of the full run.  ``cutoff_shift`` is the change of the
    reduced final state when the photon cutoff is raised by one.
    """
    if p.n_qubits != 2:
        raise ValueError("dispersive validation is a two-qubit comparison")
    g, tau = p.couplings_g[0], p.detunings_tau[0]
    t0 = gate_time_t0(p.lam)
    times = np.linspace(0.0, t0, samples + 1)

    def reduced_final(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
        psi0 = _full_initial_state(params, excited=0)
        states = _frame_trajectory(params, psi0, times)
        rho = partial_trace(
            PureState(params.space, states[-1]).density_matrix(), keep=(0, 1)
        )
        return rho.matrix, _cavity_occupation(params, states)

    rho_full, occupation = reduced_final(p)
    p_next = ModelParams(
        p.n_qubits, p.couplings_g, p.detunings_tau, p.photon_cutoff + 1,
        p.dispersive_threshold,
    )
    rho_next, _ = reduced_final(p_next)
    cutoff_shift = float(np.max(np.abs(rho_full - rho_next)))

    # Effective evolution conserves photon number, so the vacuum block stays pure.
    psi0 = _full_initial_state(p, excited=0)
    psi_eff = expm_propagator(h_effective(p), t0) @ psi0
    dim_cav = p.photon_cutoff + 1
    blocks = psi_eff.reshape(4, dim_cav)
    leakage = float(np.linalg.norm(blocks[:, 1:]))
    if leakage > 1e-10:
        raise RuntimeError(f"effective evolution leaked {leakage:.3g} out of the vacuum sector")
    phi_eff = blocks[:, 0]
    fid = float(np.real(phi_eff.conj() @ rho_full @ phi_eff))

    return DispersiveReport(
        tau_over_g=tau / g,
        fidelity_full_vs_effective=fid,
        infidelity=1.0 - fid,
        max_cavity_occupation=float(np.max(occupation)),
        cavity_bound=4.0 * (g / tau) ** 2,
        cutoff_shift=cutoff_shift,
    )


@dataclass(frozen=True, eq=False)
class SelectiveCouplingReport:
    spectator_ratio: float
    spectator_max_deviation: float
    spectator_final_deviation: float
    active_pair_fidelity: float


def selective_coupling_check(
    p: ModelParams,
    active: tuple[int, int] = (0, 1),
    spectator_ratio: float = 10.0,
    samples: int = 400,
) -> SelectiveCouplingReport:
    """Run the entangler on two target qubits while spectators sit far detuned.

    Spectators keep their coupling but are parked at ``spectator_ratio`` times
    the active detuning.  The report carries how far any spectator strays from
    its ground state (both the worst excursion over the run and the final
    value) and the fidelity of the active pair against the entangled target.
    """
    if p.n_qubits < 3:
        raise ValueError("selective-coupling check needs at least one spectator qubit")
    if len(set(active)) != 2:
        raise ValueError("exactly two distinct active qubits required")
    g, tau_active = p.couplings_g[0], p.detunings_tau[0]
    detunings = tuple(
        tau_active if j in active else spectator_ratio * tau_active
        for j in range(p.n_qubits)
    )
    full = ModelParams(p.n_qubits, p.couplings_g, detunings, p.photon_cutoff,
                       p.dispersive_threshold)
    t0 = gate_time_t0(g * g / tau_active)
    times = np.linspace(0.0, t0, samples + 1)
    psi0 = _full_initial_state(full, excited=active[0])
    states = _frame_trajectory(full, psi0, times)

    dim_cav = p.photon_cutoff + 1
    spectators = [j for j in range(p.n_qubits) if j not in active]
    probs = np.abs(states.reshape(len(times), *([2] * p.n_qubits), dim_cav)) ** 2
    excitation = np.zeros(len(times))
    for j in spectators:
        excitation += probs.sum(axis=tuple(k for k in range(1, p.n_qubits + 2)
                                           if k != j + 1))[:, 1]

    rho_active = partial_trace(
        PureState(full.space, states[-1]).density_matrix(), keep=tuple(sorted(active))
    )
    # partial_trace orders the pair (slow, fast); map the entangled target to match:
    # |q_a1 q_a2> with a1 the slower index -> (|10> - i|01>)/sqrt2 = [0, -i, 1, 0]/sqrt2.
    target = PureState(TWO_QUBIT_SPACE, np.array([0, -1j, 1, 0]) / math.sqrt(2))
    if active[0] > active[1]:
        target = PureState(TWO_QUBIT_SPACE, np.array([0, 1, -1j, 0]) / math.sqrt(2))
    fid_active = fidelity(rho_active, target)

    return SelectiveCouplingReport(
        spectator_ratio=spectator_ratio,
        spectator_max_deviation=float(np.max(excitation)),
        spectator_final_deviation=float(excitation[-1]),
        active_pair_fidelity=fid_active,
    )


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Error-probability grid over relaxation and dephasing axes.

    ``error_grid[i, j]`` is the generation error at relaxation rate
    ``gamma_axis[i]`` and dephasing rate ``gamma_phi_axis[j]``.
    """

    gamma_axis: np.ndarray
    gamma_phi_axis: np.ndarray
    error_grid: np.ndarray
    params: ModelParams

    def __post_init__(self):
        if self.error_grid.shape != (len(self.gamma_axis), len(self.gamma_phi_axis)):
            raise ValueError("grid shape does not match axes")
        if np.any(self.error_grid < 0) or np.any(self.error_grid > 1):
            raise ValueError("error probabilities must lie in [0, 1]")


def decoherence_sweep(
    p: ModelParams,
    gamma_axis,
    gamma_phi_axis,
    threads: int | None = None,
) -> SweepResult:
    """Generation error D over a (gamma, gamma_phi) grid.

    Every grid point shares the same step count (sized for the largest rates)
    so the output is a pure function of the inputs, independent of thread
    count and scheduling order.
    """
    gamma_axis = np.asarray(gamma_axis, dtype=float)
    gamma_phi_axis = np.asarray(gamma_phi_axis, dtype=float)
    if gamma_axis.size == 0 or gamma_phi_axis.size == 0:
        raise ValueError("sweep axes must be nonempty")
    if np.any(gamma_axis < 0) or np.any(gamma_phi_axis < 0):
        raise ValueError("noise rates must be nonnegative")

    lam = p.lam
    t0 = gate_time_t0(lam)
    worst = NoiseSpec.uniform(2, float(np.max(gamma_axis)), float(np.max(gamma_phi_axis)))
    steps = max(MIN_EPR_STEPS, default_step_count(t0, 2.0 * lam, worst.total_rate))

    points = [(i, j) for i in range(gamma_axis.size) for j in range(gamma_phi_axis.size)]

    def run(point):
        i, j = point
        noise = NoiseSpec.uniform(2, gamma_axis[i], gamma_phi_axis[j])
        return epr_generation(p, noise, steps=steps).error_d

    if threads is None:
        threads = min(32, os.cpu_count() or 1)
    grid = np.empty((gamma_axis.size, gamma_phi_axis.size))
    if threads <= 1:
        values = map(run, points)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(run, points))
    for (i, j), d in zip(points, values):
        grid[i, j] = d
    return SweepResult(gamma_axis, gamma_phi_axis, grid, p)

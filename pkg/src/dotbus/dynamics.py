"""Time-evolution engines: Schrodinger RK4 and a dense Lindblad integrator.

Both integrators use fixed-step classical 4th-order Runge-Kutta.  Nothing is
renormalized along the way: norm and trace drift are measured diagnostics,
and a run whose diagnostics leave tolerance is rejected loudly rather than
silently patched up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .algebra import DensityMatrix, PureState, fidelity, hermiticity_defect
from .hamiltonians import reduced_basis_op
from .algebra import SIGMA_MINUS, SIGMA_Z

STABILITY_LIMIT = 0.1        # max allowed dt * ||generator||
NORM_DRIFT_TOL = 1e-6
TRACE_DRIFT_TOL = 1e-8
HERM_DRIFT_TOL = 1e-10
MIN_EIG_TOL = -1e-8


class DiagnosticError(RuntimeError):
    """A run violated its numerical health checks (norm/trace/positivity)."""


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    steps: int

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.steps < 1:
            raise ValueError("steps must be at least 1")

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / self.steps


@dataclass(frozen=True)
class NoiseSpec:
    """Per-qubit relaxation and pure-dephasing rates, rad/s."""

    relaxation: tuple[float, ...]
    dephasing: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "relaxation", tuple(float(g) for g in self.relaxation))
        object.__setattr__(self, "dephasing", tuple(float(g) for g in self.dephasing))
        if len(self.relaxation) != len(self.dephasing):
            raise ValueError("relaxation and dephasing lists must have equal length")
        if any(g < 0 for g in self.relaxation + self.dephasing):
            raise ValueError("noise rates must be nonnegative")

    @property
    def n_qubits(self) -> int:
        return len(self.relaxation)

    @property
    def total_rate(self) -> float:
        return sum(self.relaxation) + sum(self.dephasing)

    @classmethod
    def uniform(cls, n_qubits: int, gamma: float, gamma_phi: float) -> "NoiseSpec":
        return cls((gamma,) * n_qubits, (gamma_phi,) * n_qubits)

    @classmethod
    def none(cls, n_qubits: int) -> "NoiseSpec":
        return cls.uniform(n_qubits, 0.0, 0.0)


@dataclass(frozen=True, eq=False)
class SimResult:
    """Recorded trajectory: snapshot times, raw state arrays, health diagnostics.

    ``states`` holds bare complex arrays (vectors for wavefunction runs,
    matrices for density-matrix runs); wrap in PureState/DensityMatrix at the
    point of use.  Diagnostics are parallel arrays, one entry per snapshot.
    """

    times: np.ndarray
    states: list
    diagnostics: dict

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def default_step_count(duration: float, h_norm: float, rate_sum: float = 0.0) -> int:
    """Fixed-step default: 40 steps per unit of generator action."""
    return max(1, math.ceil(40.0 * duration * max(h_norm, rate_sum)))


def _check_stability(dt: float, scale: float, duration: float) -> None:
    if dt * scale >= STABILITY_LIMIT:
        needed = math.ceil(duration * scale / (STABILITY_LIMIT * 0.5)) + 1
        raise ValueError(
            f"step size too large: dt*||H|| = {dt * scale:.3g} >= {STABILITY_LIMIT}; "
            f"use at least {needed} steps"
        )


def propagate_schrodinger(
    h_of_t: Callable[[float], np.ndarray],
    psi0: PureState,
    grid: TimeGrid,
    record_every: int = 1,
) -> SimResult:
    """RK4 integration of d psi/dt = -i H(t) psi.

    No renormalization is applied; the recorded norm drift must stay below
    1e-6 over the whole run or the result is rejected.
    """
    dt = grid.dt
    duration = grid.t_end - grid.t_start
    sample_ts = np.linspace(grid.t_start, grid.t_end, 9)
    h_scale = max(np.linalg.norm(h_of_t(t), 2) for t in sample_ts)
    _check_stability(dt, h_scale, duration)

    psi = psi0.amplitudes.copy()
    times = [grid.t_start]
    states = [psi.copy()]
    drifts = [0.0]

    h_left = h_of_t(grid.t_start)
    for step in range(grid.steps):
        t = grid.t_start + step * dt
        h_mid = h_of_t(t + 0.5 * dt)
        h_right = h_of_t(t + dt)
        k1 = -1j * (h_left @ psi)
        k2 = -1j * (h_mid @ (psi + 0.5 * dt * k1))
        k3 = -1j * (h_mid @ (psi + 0.5 * dt * k2))
        k4 = -1j * (h_right @ (psi + dt * k3))
        psi = psi + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        h_left = h_right
        if (step + 1) % record_every == 0 or step == grid.steps - 1:
            times.append(t + dt)
            states.append(psi.copy())
            drifts.append(abs(np.linalg.norm(psi) - 1.0))

    result = SimResult(np.array(times), states, {"norm_drift": np.array(drifts)})
    worst = float(np.max(result.diagnostics["norm_drift"]))
    if worst > NORM_DRIFT_TOL:
        raise DiagnosticError(f"norm drift {worst:.3g} exceeds {NORM_DRIFT_TOL}")
    return result


@lru_cache(maxsize=8)
def _qubit_channel_ops(n_qubits: int):
    """(sigma_z_i, sigma_i^-) pairs in the reduced qubit basis."""
    return tuple(
        (reduced_basis_op(SIGMA_Z, j, n_qubits), reduced_basis_op(SIGMA_MINUS, j, n_qubits))
        for j in range(n_qubits)
    )


def _channels(noise: NoiseSpec):
    """(rate, jump operator) list for the master equation exactly as modeled.

    Dephasing enters as (gamma_phi/2) D[sigma_z] (identical to the
    sigma_z rho sigma_z - rho form since sigma_z^2 = 1) and relaxation as
    (gamma/4) D[sigma^-].  The gamma/4 prefactor is deliberate; converting to
    the common gamma/2 convention means doubling the relaxation rates.
    """
    ops = _qubit_channel_ops(noise.n_qubits)
    out = []
    for (sz, sm), g_phi, g_rel in zip(ops, noise.dephasing, noise.relaxation):
        if g_phi:
            out.append((g_phi / 2.0, sz))
        if g_rel:
            out.append((g_rel / 4.0, sm))
    return out


def lindblad_rhs(rho: np.ndarray, h_eff: np.ndarray, noise: NoiseSpec) -> np.ndarray:
    """Right-hand side of the two-qubit master equation.

    d rho/dt = -i[H, rho]
             + sum_i (gamma_phi_i / 2) (sigma_zi rho sigma_zi - rho)
             + sum_i (gamma_i / 4) (sigma_i^- rho sigma_i^+
                                    - {sigma_i^+ sigma_i^-, rho} / 2)
    """
    rho = np.asarray(rho, dtype=complex)
    h_eff = np.asarray(h_eff, dtype=complex)
    dim = 2 ** noise.n_qubits
    if rho.shape != (dim, dim) or h_eff.shape != (dim, dim):
        raise ValueError(
            f"expected {dim}x{dim} operators for {noise.n_qubits} qubits, "
            f"got rho {rho.shape} and H {h_eff.shape}"
        )
    drho = -1j * (h_eff @ rho - rho @ h_eff)
    for rate, l_op in _channels(noise):
        ld = l_op.conj().T
        ldl = ld @ l_op
        drho += rate * (l_op @ rho @ ld - 0.5 * (ldl @ rho + rho @ ldl))
    return drho


def build_liouvillian(h_eff: np.ndarray, noise: NoiseSpec) -> np.ndarray:
    """Same generator as `lindblad_rhs`, as a d^2 x d^2 matrix on row-major vec(rho)."""
    h_eff = np.asarray(h_eff, dtype=complex)
    d = h_eff.shape[0]
    eye = np.eye(d, dtype=complex)
    liou = -1j * (np.kron(h_eff, eye) - np.kron(eye, h_eff.T))
    for rate, l_op in _channels(noise):
        ld = l_op.conj().T
        ldl = ld @ l_op
        liou += rate * (
            np.kron(l_op, l_op.conj())
            - 0.5 * (np.kron(ldl, eye) + np.kron(eye, ldl.T))
        )
    return liou


def integrate_lindblad(
    h_eff: np.ndarray,
    rho0: DensityMatrix,
    noise: NoiseSpec,
    grid: TimeGrid,
    record_every: int = 1,
) -> SimResult:
    """RK4 integration of the master equation, with per-snapshot health checks.

    Internally steps the vectorized generator (one matrix, four matvecs per
    step); `lindblad_rhs` defines the same map element-wise.  Any snapshot
    with |trace - 1| > 1e-8, hermiticity defect > 1e-10 or an eigenvalue
    below -1e-8 aborts the run with DiagnosticError.
    """
    h_eff = np.asarray(h_eff, dtype=complex)
    d = h_eff.shape[0]
    dt = grid.dt
    duration = grid.t_end - grid.t_start
    scale = np.linalg.norm(h_eff, 2) + noise.total_rate
    _check_stability(dt, scale, duration)

    liou = build_liouvillian(h_eff, noise)
    vec = rho0.matrix.reshape(-1).astype(complex)

    times = [grid.t_start]
    states = [vec.reshape(d, d).copy()]
    trace_dev = [abs(np.trace(states[0]).real - 1.0)]
    herm_dev = [hermiticity_defect(states[0])]
    min_eigs = [float(np.linalg.eigvalsh(states[0])[0])]

    def check(idx: int) -> None:
        breaches = []
        if trace_dev[idx] > TRACE_DRIFT_TOL:
            breaches.append(f"|trace-1| = {trace_dev[idx]:.3g}")
        if herm_dev[idx] > HERM_DRIFT_TOL:
            breaches.append(f"hermiticity defect = {herm_dev[idx]:.3g}")
        if min_eigs[idx] < MIN_EIG_TOL:
            breaches.append(f"min eigenvalue = {min_eigs[idx]:.3g}")
        if breaches:
            raise DiagnosticError(
                f"density-matrix diagnostics failed at t = {times[idx]:.6g}: "
                + "; ".join(breaches)
            )

    check(0)
    for step in range(grid.steps):
        k1 = liou @ vec
        k2 = liou @ (vec + 0.5 * dt * k1)
        k3 = liou @ (vec + 0.5 * dt * k2)
        k4 = liou @ (vec + dt * k3)
        vec = vec + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if (step + 1) % record_every == 0 or step == grid.steps - 1:
            rho = vec.reshape(d, d).copy()
            times.append(grid.t_start + (step + 1) * dt)
            states.append(rho)
            trace_dev.append(abs(np.trace(rho).real - 1.0))
            herm_dev.append(hermiticity_defect(rho))
            min_eigs.append(float(np.linalg.eigvalsh(rho)[0]))
            check(len(times) - 1)

    return SimResult(
        np.array(times),
        states,
        {
            "trace_dev": np.array(trace_dev),
            "herm_dev": np.array(herm_dev),
            "min_eig": np.array(min_eigs),
        },
    )


def error_probability(rho_final: DensityMatrix, target: PureState) -> float:
    """1 - <target| rho |target>, the infidelity with the intended pure state."""
    return 1.0 - fidelity(rho_final, target)

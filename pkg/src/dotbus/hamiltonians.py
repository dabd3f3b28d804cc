"""Hamiltonian builders for n double-dot qubits coupled to a resonator mode.

Full-space operators live on the tensor order [qubit 1, ..., qubit n,
cavity] with standard row-major Kronecker products (qubit 1 is the slowest
index).  The reduced two-qubit builders use the basis order {|00>, |10>,
|01>, |11>} (first label = qubit 1, which is therefore the *fastest* bit in
that 4-dimensional space); `reduced_basis_op` handles the bookkeeping.

hbar = 1 throughout: all matrix elements are angular frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    HilbertSpace,
    SIGMA_MINUS,
    SIGMA_PLUS,
    NUMBER_OP,
    embed,
    identity,
    kron_all,
)
from .device import DotParams, HBAR

DEFAULT_PHOTON_CUTOFF = 5
DEFAULT_DISPERSIVE_THRESHOLD = 5.0


@dataclass(frozen=True)
class ModelParams:
    """Simulation-level parameters: couplings, detunings, cutoff, qubit count.

    Couplings may be zero (a decoupled qubit); detunings may be zero (resonant
    operation) but the dispersive machinery then refuses to run.
    """

    n_qubits: int
    couplings_g: tuple[float, ...]
    detunings_tau: tuple[float, ...]
    photon_cutoff: int = DEFAULT_PHOTON_CUTOFF
    dispersive_threshold: float = DEFAULT_DISPERSIVE_THRESHOLD

    def __post_init__(self):
        object.__setattr__(self, "couplings_g", tuple(float(g) for g in self.couplings_g))
        object.__setattr__(self, "detunings_tau", tuple(float(t) for t in self.detunings_tau))
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be at least 1")
        if len(self.couplings_g) != self.n_qubits or len(self.detunings_tau) != self.n_qubits:
            raise ValueError("couplings_g and detunings_tau must have length n_qubits")
        if any(g < 0 for g in self.couplings_g):
            raise ValueError("couplings must be nonnegative")
        if self.photon_cutoff < 1:
            raise ValueError("photon_cutoff must be at least 1")

    @classmethod
    def uniform(cls, n_qubits: int, g: float, tau: float,
                photon_cutoff: int = DEFAULT_PHOTON_CUTOFF) -> "ModelParams":
        return cls(n_qubits, (g,) * n_qubits, (tau,) * n_qubits, photon_cutoff)

    @property
    def identical(self) -> bool:
        return len(set(self.couplings_g)) == 1 and len(set(self.detunings_tau)) == 1

    @property
    def is_dispersive(self) -> bool:
        return all(
            g > 0 and abs(tau) / g >= self.dispersive_threshold
            for g, tau in zip(self.couplings_g, self.detunings_tau)
        )

    @property
    def lam(self) -> float:
        """Effective qubit-qubit exchange rate g^2/tau (identical parameters only)."""
        if not self.identical:
            raise ValueError("lambda = g^2/tau is defined only for identical couplings and detunings")
        g, tau = self.couplings_g[0], self.detunings_tau[0]
        if tau == 0:
            raise ValueError("lambda is undefined at zero detuning")
        return g * g / tau

    @property
    def space(self) -> HilbertSpace:
        return HilbertSpace((2,) * self.n_qubits + (self.photon_cutoff + 1,))


def destroy(cutoff_n: int) -> np.ndarray:
    """Truncated annihilation operator on a (N+1)-dimensional Fock space."""
    return np.diag(np.sqrt(np.arange(1, cutoff_n + 1, dtype=float)), k=1).astype(complex)


def h_cavity(omega: float, cutoff_n: int) -> np.ndarray:
    """Free cavity Hamiltonian omega * a^dagger a, diagonal diag(0, w, ..., N w)."""
    if cutoff_n < 1:
        raise ValueError("cutoff must be at least 1")
    return np.diag(omega * np.arange(cutoff_n + 1, dtype=float)).astype(complex)


def h_double_dot(dot: DotParams) -> np.ndarray:
    """Three-level double-dot Hamiltonian in rad/s.

    Ordered basis {(1,1)T0, (1,1)S, (0,2)S}: diagonal (E_T, E_S, -eps) with
    tunneling T_C mixing the two singlets.  DotParams carries joules; the
    matrix is returned divided by hbar.
    """
    h = np.zeros((3, 3), dtype=complex)
    h[0, 0] = dot.triplet_energy
    h[1, 1] = dot.singlet_energy
    h[2, 2] = -dot.bias_epsilon
    h[1, 2] = h[2, 1] = dot.tunneling
    return h / HBAR


def _qubit_cavity_ops(p: ModelParams):
    """Per-qubit raising operators a^dagger sigma_j^- on the full space, plus a^dagger a."""
    space = p.space
    n_cav = p.n_qubits
    a = destroy(p.photon_cutoff)
    adag_full = embed(a.conj().T, n_cav, space)
    raising = [adag_full @ embed(SIGMA_MINUS, j, space) for j in range(p.n_qubits)]
    return raising, embed(a.conj().T @ a, n_cav, space)


def h_interaction(t: float, p: ModelParams) -> np.ndarray:
    """Time-dependent exchange coupling between each qubit and the cavity mode.

    sum_j g_j (e^{-i tau_j t} a^dagger sigma_j^- + e^{+i tau_j t} a sigma_j^+);
    Hermitian at every t.  At t = 0 with one qubit this is the plain
    Jaynes-Cummings interaction g (a sigma^+ + a^dagger sigma^-).
    """
    raising, _ = _qubit_cavity_ops(p)
    h = np.zeros((p.space.dim, p.space.dim), dtype=complex)
    for g, tau, r in zip(p.couplings_g, p.detunings_tau, raising):
        term = g * np.exp(-1j * tau * t) * r
        h += term + term.conj().T
    return h


def h_effective(p: ModelParams) -> np.ndarray:
    """Second-order dispersive Hamiltonian on n qubits + cavity.

    lambda * sum_{i,j} (sigma_j^+ sigma_i^- a a^dagger - sigma_j^- sigma_i^+
    a^dagger a), written out literally including the i = j terms, which
    produce the single-qubit Stark/Lamb diagonal shifts.  Requires identical
    couplings/detunings and a dispersive ratio above the configured threshold.
    """
    if not p.identical:
        raise ValueError("effective Hamiltonian assumes identical couplings and detunings")
    if not p.is_dispersive:
        raise ValueError(
            f"detuning/coupling ratio below dispersive threshold {p.dispersive_threshold}"
        )
    lam = p.lam
    space = p.space
    a = destroy(p.photon_cutoff)
    a_adag = embed(a @ a.conj().T, p.n_qubits, space)
    adag_a = embed(a.conj().T @ a, p.n_qubits, space)
    sp = [embed(SIGMA_PLUS, j, space) for j in range(p.n_qubits)]
    sm = [embed(SIGMA_MINUS, j, space) for j in range(p.n_qubits)]
    h = np.zeros((space.dim, space.dim), dtype=complex)
    for j in range(p.n_qubits):
        for i in range(p.n_qubits):
            h += sp[j] @ sm[i] @ a_adag - sm[j] @ sp[i] @ adag_a
    return lam * h


def total_excitation(p: ModelParams) -> np.ndarray:
    """Conserved excitation number sum_j sigma_j^+ sigma_j^- + a^dagger a."""
    space = p.space
    n = embed(destroy(p.photon_cutoff).conj().T @ destroy(p.photon_cutoff), p.n_qubits, space)
    for j in range(p.n_qubits):
        n += embed(NUMBER_OP, j, space)
    return n


def reduced_basis_op(op: np.ndarray, qubit: int, n_qubits: int = 2) -> np.ndarray:
    """Single-qubit operator in the reduced basis where qubit 1 is the fastest bit.

    Basis order for two qubits: {|00>, |10>, |01>, |11>} with labels
    |q1 q2>.  ``qubit`` is 0-based.
    """
    if not 0 <= qubit < n_qubits:
        raise ValueError(f"qubit index {qubit} out of range")
    factors = [identity(2)] * n_qubits
    factors[n_qubits - 1 - qubit] = np.asarray(op, dtype=complex)
    return kron_all(*factors)


def h_reduced_two_qubit(lam: float) -> np.ndarray:
    """Vacuum-sector two-qubit Hamiltonian in the basis {|00>, |10>, |01>, |11>}.

    diag(0, lam, lam, 2 lam) plus a lam exchange coupling |10> <-> |01>.
    """
    sp1 = reduced_basis_op(SIGMA_PLUS, 0)
    sm1 = reduced_basis_op(SIGMA_MINUS, 0)
    sp2 = reduced_basis_op(SIGMA_PLUS, 1)
    sm2 = reduced_basis_op(SIGMA_MINUS, 1)
    return lam * (sp1 @ sm1 + sp2 @ sm2 + sp1 @ sm2 + sm1 @ sp2)


def analytic_u(lam: float, t: float) -> np.ndarray:
    """Closed-form propagator of the reduced two-qubit Hamiltonian.

    Basis {|00>, |10>, |01>, |11>}.  The central block is a phase-dressed
    excitation swap; the doubly excited entry is the unitary phase
    e^{-2 i lam t} (a published /2 on that entry fails unitarity and is
    treated as a typo; the exponential oracle confirms this value).
    """
    z = np.exp(-2j * lam * t)
    u = np.zeros((4, 4), dtype=complex)
    u[0, 0] = 1.0
    u[1, 1] = u[2, 2] = (z + 1.0) / 2.0
    u[1, 2] = u[2, 1] = (z - 1.0) / 2.0
    u[3, 3] = z
    return u


def rotating_frame_generator(p: ModelParams) -> np.ndarray:
    """Diagonal generator A = sum_j tau_j sigma_j^+ sigma_j^- of the frame rotation."""
    space = p.space
    a = np.zeros((space.dim, space.dim), dtype=complex)
    for j, tau in enumerate(p.detunings_tau):
        a += tau * embed(NUMBER_OP, j, space)
    return a


def static_frame_hamiltonian(p: ModelParams) -> np.ndarray:
    """Time-independent Hamiltonian A + V equivalent to the rotating interaction.

    The explicit time dependence of `h_interaction` is a frame artifact:
    H(t) = e^{iAt} V e^{-iAt} with A the diagonal detuning generator and
    V = sum_j g_j (a sigma_j^+ + a^dagger sigma_j^-).  The exact propagator
    therefore factorizes as U(t) = e^{iAt} e^{-i(A+V)t}.
    """
    raising, _ = _qubit_cavity_ops(p)
    h = rotating_frame_generator(p)
    for g, r in zip(p.couplings_g, raising):
        h += g * (r + r.conj().T)
    return h


def interaction_propagator(p: ModelParams, t: float) -> np.ndarray:
    """Exact propagator of the time-dependent interaction, via the static frame."""
    from .algebra import expm_propagator

    a_diag = np.real(np.diag(rotating_frame_generator(p)))
    frame = np.exp(1j * a_diag * t)
    return frame[:, None] * expm_propagator(static_frame_hamiltonian(p), t)

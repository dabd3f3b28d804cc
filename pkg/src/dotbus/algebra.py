"""Dense complex linear algebra on composite Hilbert spaces.

Everything downstream (Hamiltonian builders, propagators, protocol-level
reports) is written against the handful of primitives in this module:
Kronecker products, operator embedding, Hermitian matrix exponentials,
partial traces, fidelities and the Wootters concurrence.  All operators are
plain dense complex ``numpy`` arrays; dimensions stay small (a few hundred
at most), so no sparse machinery is used anywhere.

Conventions: hbar = 1, energies are angular frequencies (rad/s), times are
seconds.  Qubit basis |0> = (1, 0), |1> = (0, 1), sigma^+ = |1><0|.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-9
TRACE_TOL = 1e-9
EIG_FLOOR = -1e-9

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)   # |1><0|
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
NUMBER_OP = SIGMA_PLUS @ SIGMA_MINUS                     # diag(0, 1)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def hermiticity_defect(a: np.ndarray) -> float:
    """max |A - A^dagger|, the amount by which A fails to be Hermitian."""
    return float(np.max(np.abs(a - a.conj().T)))


@dataclass(frozen=True)
class HilbertSpace:
    """Ordered tensor factorization of a composite space.

    ``dims`` lists the subsystem dimensions, e.g. (2, 2, 6) for two qubits
    and a cavity truncated at five photons.
    """

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"subsystem dimensions must be positive, got {self.dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return prod(self.dims)

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector over an explicit HilbertSpace."""

    space: HilbertSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1).copy()
        if amps.size != self.space.dim:
            raise ValueError(
                f"amplitude vector has length {amps.size}, space dimension is {self.space.dim}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: ||psi|| = {norm!r}")
        object.__setattr__(self, "amplitudes", amps)

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(self.space, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Valid density operator: Hermitian, unit trace, positive semidefinite."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex).copy()
        d = self.space.dim
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match space dimension {d}")
        if hermiticity_defect(mat) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian within tolerance")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        min_eig = float(np.linalg.eigvalsh(mat)[0])
        if min_eig < EIG_FLOOR:
            raise ValueError(f"density matrix has negative eigenvalue {min_eig!r}")
        object.__setattr__(self, "matrix", mat)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*ops: np.ndarray) -> np.ndarray:
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def embed(op: np.ndarray, at: int, space: HilbertSpace) -> np.ndarray:
    """Lift ``op`` acting on subsystem ``at`` to the full space.

    Identity on every other factor; subsystem order follows ``space.dims``.
    """
    op = np.asarray(op, dtype=complex)
    if not 0 <= at < space.n_subsystems:
        raise ValueError(f"subsystem index {at} out of range for {space.dims}")
    d = space.dims[at]
    if op.shape != (d, d):
        raise ValueError(
            f"operator shape {op.shape} does not match subsystem {at} dimension {d}"
        )
    factors = [identity(dim) if i != at else op for i, dim in enumerate(space.dims)]
    return kron_all(*factors)


def expm_propagator(h: np.ndarray, t: float) -> np.ndarray:
    """Unitary exp(-i t H) of a Hermitian generator, via eigendecomposition.

    Exact up to the eigensolver, which is preferable to a truncated series
    for Hermitian input.  Raises if ``h`` is not Hermitian within 1e-10.
    """
    h = np.asarray(h, dtype=complex)
    if hermiticity_defect(h) > HERMITIAN_TOL:
        raise ValueError("generator is not Hermitian within tolerance")
    evals, evecs = np.linalg.eigh(h)
    phases = np.exp(-1j * evals * t)
    return (evecs * phases) @ evecs.conj().T


def _partial_trace_matrix(mat: np.ndarray, dims: tuple[int, ...], keep: tuple[int, ...]) -> np.ndarray:
    n = len(dims)
    reshaped = mat.reshape(dims + dims)
    remaining = list(dims)
    for idx in sorted(set(range(n)) - set(keep), reverse=True):
        reshaped = np.trace(reshaped, axis1=idx, axis2=idx + len(remaining))
        del remaining[idx]
    d = prod(remaining)
    return reshaped.reshape(d, d)


def partial_trace(rho: DensityMatrix, keep: tuple[int, ...] | list[int] | set[int]) -> DensityMatrix:
    """Trace out every subsystem not in ``keep``; preserves trace and Hermiticity."""
    keep = tuple(sorted(set(int(k) for k in keep)))
    if not keep:
        raise ValueError("keep set must be nonempty")
    if any(k < 0 or k >= rho.space.n_subsystems for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {rho.space.dims}")
    reduced = _partial_trace_matrix(rho.matrix, rho.space.dims, keep)
    reduced = 0.5 * (reduced + reduced.conj().T)  # scrub roundoff asymmetry
    return DensityMatrix(HilbertSpace(tuple(rho.space.dims[k] for k in keep)), reduced)


def fidelity(state: PureState | DensityMatrix, target: PureState) -> float:
    """<target| rho |target>, or |<target|psi>|^2 for a pure input."""
    if isinstance(state, PureState):
        if state.space.dim != target.space.dim:
            raise ValueError("state and target dimensions differ")
        return float(abs(np.vdot(target.amplitudes, state.amplitudes)) ** 2)
    if isinstance(state, DensityMatrix):
        if state.space.dim != target.space.dim:
            raise ValueError("state and target dimensions differ")
        v = target.amplitudes
        return float(np.real(v.conj() @ state.matrix @ v))
    raise TypeError(f"unsupported state type {type(state)!r}")


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    C = max(0, l1 - l2 - l3 - l4) with l_i the square roots of the
    eigenvalues of rho (sy x sy) rho* (sy x sy), sorted descending.
    Eigenvalues above -1e-9 are clipped to zero (numerical noise); anything
    more negative is rejected.
    """
    if rho.space.dim != 4:
        raise ValueError("concurrence is defined for a 4-dimensional two-qubit state")
    yy = kron(SIGMA_Y, SIGMA_Y)
    r = rho.matrix @ yy @ rho.matrix.conj() @ yy
    evals = np.linalg.eigvals(r).real
    if np.min(evals) < EIG_FLOOR:
        raise ValueError(f"spin-flipped product has eigenvalue {np.min(evals)!r} below tolerance")
    lams = np.sqrt(np.clip(evals, 0.0, None))
    lams.sort()
    c = lams[-1] - lams[-2] - lams[-3] - lams[-4]
    return float(max(0.0, c))

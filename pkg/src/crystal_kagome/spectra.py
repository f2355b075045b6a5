"""Truncated Hilbert space, sparse Hamiltonian matrix and spectra."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceFailure
from .lattice import LatticeState, Window, partition_to_state
from .operators import CouplingParams, hamiltonian_action
from .partitions import PlanePartition, enumerate_partitions, macmahon_coeffs

DENSE_CUTOFF = 512
EIG_TOL = 1e-10
EIG_MAXITER = 10_000


def worker_count() -> int:
    """Thread cap from ``CRYSTAL_KAGOME_THREADS`` (default: CPU count)."""
    env = os.environ.get("CRYSTAL_KAGOME_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class TruncatedBasis:
    """Plane partitions with at most ``n_max`` boxes, grouped by box count.

    The lattice window is sized for ``n_max + 1`` boxes so creation images of
    the top level stay representable before being truncated away.
    """

    n_max: int
    states: tuple[PlanePartition, ...]
    level_sizes: tuple[int, ...]
    window: Window
    lattice_states: tuple[LatticeState, ...]

    def __len__(self) -> int:
        return len(self.states)

    @cached_property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.lattice_states)}

    def level_of(self, i: int) -> int:
        return len(self.states[i])


def build_basis(n_max: int) -> TruncatedBasis:
    """Concatenate :func:`enumerate_partitions` for 0..``n_max`` boxes."""
    levels = [enumerate_partitions(n) for n in range(n_max + 1)]
    states = tuple(pp for level in levels for pp in level)
    window = Window.for_boxes(n_max + 1)
    lattice = tuple(partition_to_state(pp, window) for pp in states)
    return TruncatedBasis(n_max, states, tuple(len(lv) for lv in levels), window, lattice)


@dataclass(frozen=True)
class SparseOperatorMatrix:
    """Real square matrix in coordinate form, entries sorted by (row, col)."""

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    def to_scipy(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.vals, (self.rows, self.cols)), shape=(self.dim, self.dim))

    def to_dense(self) -> np.ndarray:
        return self.to_scipy().toarray()

    def to_coo_text(self) -> str:
        lines = [f"{r} {c} {v:.17g}" for r, c, v in zip(self.rows, self.cols, self.vals)]
        return "\n".join(lines) + ("\n" if lines else "")

    def to_json(self) -> str:
        return json.dumps({
            "dim": int(self.dim),
            "entries": [[int(r), int(c), float(v)] for r, c, v in zip(self.rows, self.cols, self.vals)],
        })


def build_hamiltonian(basis: TruncatedBasis, params: CouplingParams) -> SparseOperatorMatrix:
    """Hamiltonian matrix on ``basis``; images beyond the truncation are dropped."""
    index = basis.index

    def row_entries(j: int) -> list[tuple[int, int, float]]:
        out = []
        for state, amp in hamiltonian_action(basis.lattice_states[j], params).items():
            i = index.get(state)
            if i is not None:
                out.append((i, j, float(amp)))
        return out

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        chunks = list(pool.map(row_entries, range(len(basis))))
    entries = sorted(e for chunk in chunks for e in chunk)
    if entries:
        rows, cols, vals = (np.array(x) for x in zip(*entries))
    else:
        rows = cols = np.zeros(0, dtype=int)
        vals = np.zeros(0)
    return SparseOperatorMatrix(len(basis), rows.astype(int), cols.astype(int), vals.astype(float))


def ground_state_residual(n_max: int, q: float, J: float = 1.0, V: float | None = None) -> float:
    """Max ``|H v|`` over levels below ``n_max`` for ``v = q^(boxes/2)``.

    ``V`` defaults to ``J``, the point where ``v`` is an exact zero mode.
    """
    params = CouplingParams(J=J, V=J if V is None else V, q=q)
    basis = build_basis(n_max)
    H = build_hamiltonian(basis, params).to_scipy()
    v = np.array([q ** (len(pp) / 2) for pp in basis.states])
    hv = H @ v
    interior = np.array([len(pp) < n_max for pp in basis.states])
    return float(np.max(np.abs(hv[interior]))) if interior.any() else 0.0


def lowest_eigenvalues(matrix: SparseOperatorMatrix | np.ndarray | sp.spmatrix, k: int,
                       method: str = "auto") -> list[float]:
    """The ``k`` smallest eigenvalues in ascending order.

    Parameters
    ----------
    method : {"auto", "dense", "iterative"}
        ``auto`` uses dense diagonalization below 512 states.

    Raises
    ------
    ConvergenceFailure
        If the Lanczos solver fails to converge.
    """
    if isinstance(matrix, SparseOperatorMatrix):
        A = matrix.to_scipy()
    else:
        A = sp.csr_matrix(matrix)
    n = A.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must lie in [1, {n}]")
    if method == "auto":
        method = "dense" if n < DENSE_CUTOFF else "iterative"
    if method == "iterative" and k >= n - 1:
        method = "dense"
    if method == "dense":
        return [float(x) for x in np.linalg.eigvalsh(A.toarray())[:k]]
    try:
        vals = spla.eigsh(A, k=k, which="SA", tol=EIG_TOL, maxiter=EIG_MAXITER,
                          return_eigenvectors=False)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceFailure(
            f"eigsh converged {len(exc.eigenvalues)} of {k} eigenvalues "
            f"after {EIG_MAXITER} iterations") from exc
    return sorted(float(x) for x in vals)


def quantum_partition_function(n_max: int, params: CouplingParams, beta: float) -> float:
    """``Tr exp(-beta H)`` on the truncated space, by full diagonalization."""
    H = build_hamiltonian(build_basis(n_max), params).to_dense()
    energies = np.linalg.eigvalsh(H)
    return float(np.sum(np.exp(-beta * energies)))


def macmahon_norm(n_max: int, q: float) -> tuple[float, float]:
    """Squared norm of the truncated zero mode and the matching series value."""
    basis = build_basis(n_max)
    direct = sum(q ** len(pp) for pp in basis.states)
    series = sum(c * q ** n for n, c in enumerate(macmahon_coeffs(n_max).coeffs))
    return float(direct), float(series)

"""Lax operators, transfer matrices and the commutation-relation toolkit.

Index conventions
-----------------
* Auxiliary (X) occupation: 0 = empty, 1 = occupied.
* A Y pair ``(first, second)`` has index ``first + 2 * second``, giving the
  order (empty-empty, first, second, both).
* The fundamental Lax matrix acts on ``aux (x) pair`` with flat index
  ``4 * aux + pair``; entries are ``L[out, in]``.
* A row of ``M`` pairs is indexed by ``sum_s bit_s * 2**s`` over slots
  ``s = 0 .. 2M-1``; pair ``j`` covers slots ``2j`` and ``2j + 1``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import BeyondBound, DimensionMismatch, NoSolution, SingularParameters
from .hexagons import BY_POSITIONS, LABELS, WeightTable

MAX_COLUMNS = 6
KERNEL_RTOL = 1e-8

Offset = Literal["even", "odd"]
Rules = Literal["kagome", "vertical"]

# 5x5 physical block: outgoing (first, second; aux) and incoming (aux; first, second)
PHYSICAL_OUT = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1))
PHYSICAL_IN = ((0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 0, 1))
# adjoint basis: empty, first occupied, second occupied
ADJOINT_PAIRS = ((0, 0), (1, 0), (0, 1))


def hexagon_label(in1: int, in2: int, aux_in: int, aux_out: int, out1: int, out2: int) -> str | None:
    """Class label of a Lax matrix element, ``None`` if forbidden.

    ``in1, in2`` is the incoming pair, ``aux_in``/``aux_out`` the incoming and
    outgoing auxiliary and ``out1, out2`` the outgoing pair.
    """
    occ = frozenset(p for p, v in zip(range(1, 7), (in1, in2, aux_in, aux_out, out1, out2)) if v)
    cls = BY_POSITIONS.get(occ)
    return None if cls is None else cls.label


def _pair(first: int, second: int) -> int:
    return first + 2 * second


@dataclass(frozen=True)
class LaxMatrix:
    """A Lax operator in either the 8x8 fundamental or the 6x6 adjoint layout."""

    layout: Literal["fundamental8", "adjoint6"]
    entries: np.ndarray

    def physical_block(self) -> np.ndarray:
        """The 5x5 block of the fundamental layout in the physical row/column order."""
        if self.layout != "fundamental8":
            raise ValueError("physical block exists only for the fundamental layout")
        rows = [4 * b + _pair(n1, n2) for n1, n2, b in PHYSICAL_OUT]
        cols = [4 * a + _pair(m1, m2) for a, m1, m2 in PHYSICAL_IN]
        return self.entries[np.ix_(rows, cols)]

    def block(self, aux_in: int, aux_out: int) -> np.ndarray:
        """3x3 block for the given incoming and outgoing auxiliary occupation (adjoint layout)."""
        if self.layout != "adjoint6":
            raise ValueError("blocks exist only for the adjoint layout")
        return self.entries[3 * aux_in:3 * aux_in + 3, 3 * aux_out:3 * aux_out + 3]


def _label_matrix_fundamental() -> list[tuple[int, int, str]]:
    out = []
    for a, m1, m2, b, n1, n2 in itertools.product((0, 1), repeat=6):
        lb = hexagon_label(m1, m2, a, b, n1, n2)
        if lb is not None:
            out.append((4 * b + _pair(n1, n2), 4 * a + _pair(m1, m2), lb))
    return out


FUNDAMENTAL_LABELS = _label_matrix_fundamental()


def lax_fundamental(table: WeightTable) -> LaxMatrix:
    """8x8 Lax matrix ``L[4*aux_out + pair_out, 4*aux_in + pair_in]`` holding the class weights."""
    L = np.zeros((8, 8), dtype=complex)
    for row, col, lb in FUNDAMENTAL_LABELS:
        L[row, col] = table[lb]
    return LaxMatrix("fundamental8", L)


def lax_adjoint(table: WeightTable) -> LaxMatrix:
    """6x6 Lax matrix as a 2x2 array of 3x3 blocks.

    Block ``(aux_in, aux_out)`` has entries
    ``[N, M] = <N| L |M>`` over the pair basis (empty, first, second).
    """
    L = np.zeros((6, 6), dtype=complex)
    for aux_in, aux_out in itertools.product((0, 1), repeat=2):
        for N, (n1, n2) in enumerate(ADJOINT_PAIRS):
            for M, (m1, m2) in enumerate(ADJOINT_PAIRS):
                lb = hexagon_label(m1, m2, aux_in, aux_out, n1, n2)
                if lb is not None:
                    L[3 * aux_in + N, 3 * aux_out + M] = table[lb]
    return LaxMatrix("adjoint6", L)


# -- transfer and monodromy ---------------------------------------------------

@dataclass(frozen=True)
class TransferMatrix:
    M: int
    offset: Offset
    rules: Rules
    entries: np.ndarray

    def to_json(self) -> str:
        return json.dumps(complex_matrix_to_json(self.entries))


def _check_columns(M: int) -> None:
    if M < 1:
        raise ValueError("M must be positive")
    if M > MAX_COLUMNS:
        raise BeyondBound(f"M={M} exceeds {MAX_COLUMNS} columns")


def monodromy(table: WeightTable, M: int) -> np.ndarray:
    """Untraced row product, shape ``(2, 2, 4**M, 4**M)`` indexed ``[aux_out, aux_in, out, in]``.

    The auxiliary particle enters at pair 0 and leaves after pair ``M - 1``.
    """
    _check_columns(M)
    L4 = lax_fundamental(table).entries.reshape(2, 4, 2, 4)
    T = np.eye(2, dtype=complex).reshape(2, 2, 1, 1)
    for _ in range(M):
        T = np.einsum("bqcp,caQP->baqQpP", L4, T)
        d = T.shape[2] * T.shape[3]
        T = T.reshape(2, 2, d, d)
    return T


def monodromy_operator(T: np.ndarray) -> np.ndarray:
    """Monodromy as a square matrix on ``aux (x) row`` with aux most significant."""
    d = T.shape[2]
    return T.transpose(0, 2, 1, 3).reshape(2 * d, 2 * d)


def _slot_permutation(M: int) -> np.ndarray:
    """Map a row index to the pair-basis index read with pairs ``(2j+1, 2j+2)``."""
    n = 2 * M
    idx = np.arange(4 ** M)
    out = np.zeros_like(idx)
    for j in range(M):
        s1, s2 = (2 * j + 1) % n, (2 * j + 2) % n
        out += (((idx >> s1) & 1) + 2 * ((idx >> s2) & 1)) << (2 * j)
    return out


def shift_operator(M: int) -> np.ndarray:
    """Permutation matrix moving the occupation of slot ``s`` to slot ``s + 1``."""
    n = 2 * M
    dim = 4 ** M
    S = np.zeros((dim, dim))
    for x in range(dim):
        y = 0
        for s in range(n):
            if (x >> s) & 1:
                y |= 1 << ((s + 1) % n)
        S[y, x] = 1
    return S


def transfer_matrix(table: WeightTable, M: int, offset: Offset = "even",
                    rules: Rules = "vertical") -> TransferMatrix:
    """Auxiliary trace of the ``M``-fold row product.

    Even rows pair slots ``(2j, 2j+1)``; odd rows pair ``(2j+1, 2j+2)``
    cyclically. Vertical rules make both offsets equivalent, so the even
    matrix is returned for either.
    """
    if offset not in ("even", "odd") or rules not in ("kagome", "vertical"):
        raise ValueError("offset must be even/odd and rules kagome/vertical")
    T = monodromy(table, M)
    t = np.einsum("aaQP->QP", T)
    if offset == "odd" and rules == "kagome":
        p = _slot_permutation(M)
        t = t[np.ix_(p, p)]
    return TransferMatrix(M, offset, rules, t)


def commutator_norm(A: np.ndarray, B: np.ndarray) -> float:
    return float(np.linalg.norm(A @ B - B @ A))


# -- R matrices ---------------------------------------------------------------

@dataclass(frozen=True)
class RMatrix:
    """4x4 matrix ``R[2*out1 + out2, 2*in1 + in2]`` on two auxiliary spaces.

    Stored in crossing (braid) form: the relation reads
    ``R L1(u) L2(v) = L1(v) L2(u) R``, so the identity solves it at ``u = v``.
    Composing with the swap of the two auxiliary factors gives the
    exchange form ``R' L1(u) L2(v) = L2(v) L1(u) R'``.
    """

    entries: np.ndarray
    kernel_dim: int = 1
    singular_values: tuple = field(default=())

    @property
    def ambiguous(self) -> bool:
        return self.kernel_dim > 1

    def to_json(self) -> str:
        return json.dumps(complex_matrix_to_json(self.entries))


def normalize_r(R: np.ndarray) -> np.ndarray:
    """Unit Frobenius norm with the first nonzero entry real and positive."""
    R = np.asarray(R, dtype=complex)
    R = R / np.linalg.norm(R)
    flat = R.ravel()
    nz = np.flatnonzero(np.abs(flat) > 1e-12)
    if nz.size:
        R = R * (abs(flat[nz[0]]) / flat[nz[0]])
    return R


def _two_aux(L: np.ndarray, slot: int, q_dim: int) -> np.ndarray:
    """Embed an operator on ``aux (x) Q`` into ``aux1 (x) aux2 (x) Q`` acting on ``slot``."""
    L4 = L.reshape(2, q_dim, 2, q_dim)
    eye = np.eye(2)
    if slot == 1:
        big = np.einsum("aqbp,cd->acqbdp", L4, eye)
    else:
        big = np.einsum("aqbp,cd->caqdbp", L4, eye)
    return big.reshape(4 * q_dim, 4 * q_dim)


def _fcr_products(Wu: WeightTable, Wv: WeightTable) -> tuple[np.ndarray, np.ndarray]:
    Lu = lax_fundamental(Wu).entries
    Lv = lax_fundamental(Wv).entries
    return (_two_aux(Lu, 1, 4) @ _two_aux(Lv, 2, 4),
            _two_aux(Lv, 1, 4) @ _two_aux(Lu, 2, 4))


def _relation_residual(R: np.ndarray, left: np.ndarray, right: np.ndarray) -> float:
    q_dim = left.shape[0] // 4
    Rq = np.kron(R, np.eye(q_dim))
    return float(np.linalg.norm(Rq @ left - right @ Rq))


def fcr_residual(R: RMatrix | np.ndarray, Wu: WeightTable, Wv: WeightTable) -> float:
    """Frobenius norm of ``R L1(u) L2(v) - L1(v) L2(u) R`` on ``aux1 (x) aux2 (x) pair``."""
    R = R.entries if isinstance(R, RMatrix) else np.asarray(R)
    left, right = _fcr_products(Wu, Wv)
    return _relation_residual(R, left, right)


def _linear_map(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Matrix of ``R -> (R (x) 1) left - right (R (x) 1)`` on the 16 entries of ``R``."""
    q_dim = left.shape[0] // 4
    eye = np.eye(q_dim)
    cols = []
    for k in range(16):
        E = np.zeros(16)
        E[k] = 1.0
        Rq = np.kron(E.reshape(4, 4), eye)
        cols.append((Rq @ left - right @ Rq).ravel())
    return np.array(cols).T


def solve_R(Wu: WeightTable, Wv: WeightTable) -> RMatrix:
    """Solve the local commutation relation for ``R``.

    The relation is linear in ``R``; its kernel is read off the singular
    value decomposition. Singular values below ``1e-8`` times the largest
    count as zero. When the kernel has several directions the projection of
    the identity onto it is returned if nonzero, otherwise the last singular
    vector; ``kernel_dim`` reports the ambiguity.

    Raises
    ------
    NoSolution
        If no singular value falls below the threshold.
    """
    left, right = _fcr_products(Wu, Wv)
    A = _linear_map(left, right)
    _, s, Vh = np.linalg.svd(A)
    thresh = KERNEL_RTOL * s[0] if s[0] > 0 else np.inf
    kdim = int(np.sum(s < thresh)) if s[0] > 0 else 16
    if kdim == 0:
        raise NoSolution(f"smallest singular value {s[-1]:.3e} above threshold {thresh:.3e}")
    basis = Vh[16 - kdim:].conj()
    vec = basis[-1]
    if kdim > 1:
        ident = np.eye(4).ravel()
        proj = basis.T @ (basis.conj() @ ident)
        if np.linalg.norm(proj) > 1e-6:
            vec = proj
    return RMatrix(normalize_r(vec.reshape(4, 4)), kdim, tuple(float(x) for x in s))


def rtt_residual(R: RMatrix | np.ndarray, Tu: np.ndarray, Tv: np.ndarray) -> float:
    """Frobenius norm of ``R T1(u) T2(v) - T1(v) T2(u) R`` for two monodromies.

    Raises
    ------
    DimensionMismatch
        If the monodromies differ in shape or ``R`` is not 4x4.
    """
    R = R.entries if isinstance(R, RMatrix) else np.asarray(R)
    if R.shape != (4, 4):
        raise DimensionMismatch(f"R must be 4x4, got {R.shape}")
    if Tu.shape != Tv.shape or Tu.ndim != 4 or Tu.shape[:2] != (2, 2):
        raise DimensionMismatch(f"monodromy shapes {Tu.shape} and {Tv.shape} are incompatible")
    d = Tu.shape[2]
    T1 = _two_aux(monodromy_operator(Tu), 1, d)
    T2 = _two_aux(monodromy_operator(Tv), 2, d)
    T1v = _two_aux(monodromy_operator(Tv), 1, d)
    T2u = _two_aux(monodromy_operator(Tu), 2, d)
    return _relation_residual(R, T1 @ T2, T1v @ T2u)


# -- descendant weights -------------------------------------------------------

def _vertex(a1, b1, b2, c_in, c_out) -> np.ndarray:
    """2x2 (aux) by 2x2 (single Y site) vertex, ``[2*aux_out + y_out, 2*aux_in + y_in]``.

    ``c_in`` moves a particle from the auxiliary line into the Y site,
    ``c_out`` moves it from the Y site onto the auxiliary line. The
    doubly-occupied weight is zero.
    """
    v = np.zeros((4, 4), dtype=complex)
    v[0, 0] = a1
    v[1, 1] = b1
    v[2, 2] = b2
    v[1, 2] = c_in
    v[2, 1] = c_out
    return v


def descendant_weights(u: complex, anisotropy: complex) -> WeightTable:
    """Integrable weights built from two degenerate six-vertex vertices.

    Each hexagon is factored into a left vertex (auxiliary line crossing the
    first Y site) and a right vertex (crossing the second Y site), joined by
    an internal auxiliary bond. Both vertices use trigonometric six-vertex
    weights ``a = sinh(u + h)``, ``b = sinh(u)``, ``c = sinh(h)`` in a
    degenerate limit: the doubly-occupied vertex vanishes, the weight of an
    auxiliary particle passing an empty site equals ``a``, and particles only
    move forward, the left vertex emitting onto the bond and the right vertex
    absorbing from it. The doubly-occupied pair sector is projected out; it
    does not mix with the physical sector, so the projection preserves the
    local commutation relation. Weights are normalized by ``a``.

    Raises
    ------
    SingularParameters
        If ``sinh(u + h)`` vanishes (pole) or ``sinh(h)`` vanishes (no hopping).
    """
    h = complex(anisotropy)
    u = complex(u)
    a = np.sinh(u + h)
    c = np.sinh(h)
    if abs(a) < 1e-12:
        raise SingularParameters(f"sinh(u + h) vanishes at u={u}, anisotropy={h}")
    if abs(c) < 1e-12:
        raise SingularParameters(f"sinh(h) vanishes at anisotropy={h}; the model has no hopping")
    b = np.sinh(u) / a
    c = c / a
    left = _vertex(1.0, b, 1.0, 0.0, c)
    right = _vertex(1.0, b, 1.0, c, 0.0)
    weights = {}
    for lb in LABELS:
        occ = {int(d) for d in lb.partition("_")[2]}
        m1, m2, al, be, n1, n2 = (int(p in occ) for p in range(1, 7))
        w = 0j
        for g in (0, 1):
            w += left[2 * g + n1, 2 * al + m1] * right[2 * be + n2, 2 * g + m2]
        weights[lb] = w
    return WeightTable(weights)


# -- serialization ------------------------------------------------------------

def complex_matrix_to_json(A: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(A, dtype=complex)]


def complex_matrix_from_json(data) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data])

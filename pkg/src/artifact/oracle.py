"""Dense complex-matrix ground truth for small registers.

Qubit 1 (index 0) is the leftmost Kronecker factor, so it is the most
significant bit of a basis-state index.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import f2core
from .pauli import PauliOperator

MAX_DENSE = 12
MAX_SWEEP = 8

_S2 = 1 / np.sqrt(2)
GATES_1Q = {
    "I": np.eye(2, dtype=complex),
    "H": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "P": np.diag([1, 1j]).astype(complex),
    "Pdg": np.diag([1, -1j]).astype(complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex),
    "Tdg": np.diag([1, np.exp(-1j * np.pi / 4)]).astype(complex),
}
GATES_2Q = {
    "CX": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}


class OracleSizeError(ValueError):
    pass


def _cap(n: int, cap: int = MAX_DENSE) -> None:
    if n > cap:
        raise OracleSizeError(f"dense oracle limited to {cap} qubits, got {n}")


def apply_gate(M: np.ndarray, gate, n: int) -> np.ndarray:
    """Left-multiply the ``2^n x K`` matrix ``M`` by ``gate`` embedded in ``n`` qubits."""
    name = gate.name
    K = M.shape[1]
    T = M.reshape([2] * n + [K])
    if name == "PERM":
        dest = list(gate.params)
        # Output axis dest[i] receives input axis i.
        order = [0] * n
        for i, d in enumerate(dest):
            order[d] = i
        return np.transpose(T, order + [n]).reshape(1 << n, K).copy()
    qs = list(gate.qubits)
    if name in GATES_1Q:
        G = GATES_1Q[name]
    elif name in GATES_2Q:
        G = GATES_2Q[name]
    else:
        raise ValueError(f"unknown gate {name!r}")
    m = len(qs)
    Gt = G.reshape([2] * (2 * m))
    out = np.tensordot(Gt, T, axes=(list(range(m, 2 * m)), qs))
    # tensordot puts the gate's output axes first; move them back.
    rest = [ax for ax in range(n) if ax not in qs]
    perm = [0] * n
    for pos, q in enumerate(qs):
        perm[q] = pos
    for pos, ax in enumerate(rest):
        perm[ax] = m + pos
    out = np.transpose(out, perm + [n])
    return out.reshape(1 << n, K)


def gate_unitary(gate, n: int) -> np.ndarray:
    _cap(n)
    return apply_gate(np.eye(1 << n, dtype=complex), gate, n)


def circuit_unitary(circuit, n: int | None = None) -> np.ndarray:
    """Product of gate matrices, first gate rightmost."""
    n = circuit.n if n is None else n
    _cap(n)
    U = np.eye(1 << n, dtype=complex)
    for g in circuit.gates:
        U = apply_gate(U, g, n)
    return U


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    _cap(p.n)
    return p.to_matrix()


def diagonal_bits(n: int) -> np.ndarray:
    """Row ``v`` holds the bits of basis index ``v``, qubit 1 first."""
    idx = np.arange(1 << n)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.int64)


def qfd_diagonal(R, ell: int) -> np.ndarray:
    """Diagonal of ``tau_R`` at level ``ell``: entries ``xi^(v R v^T)``."""
    R = np.asarray(R, dtype=np.int64)
    n = R.shape[0]
    _cap(n)
    V = diagonal_bits(n)
    expo = np.einsum("vi,ij,vj->v", V, R, V)
    return np.exp(2j * np.pi * expo / (1 << ell))


def qfd_unitary(R, ell: int) -> np.ndarray:
    return np.diag(qfd_diagonal(R, ell))


def transversal_powers_unitary(t) -> np.ndarray:
    """``T^{t_1} (x) ... (x) T^{t_n}`` as a dense diagonal matrix."""
    t = np.asarray(t, dtype=np.int64)
    n = t.size
    _cap(n)
    V = diagonal_bits(n)
    return np.diag(np.exp(2j * np.pi * (V @ t) / 8))


def z_rotation_unitary(n: int, theta: float) -> np.ndarray:
    """Transversal ``exp(-i theta Z)`` on ``n`` qubits."""
    _cap(n)
    V = diagonal_bits(n)
    z = 1 - 2 * V
    return np.diag(np.exp(-1j * theta * z.sum(axis=1)))


def conjugate_dense(U: np.ndarray, p: PauliOperator, tol: float = 1e-10) -> dict:
    """Pauli-basis decomposition of ``U p U^dagger``.

    Returns ``{(a_bits, b_bits): coefficient}`` in the ``E(a, b)`` basis with
    coefficients ``Tr(E(a,b) M) / 2^n``.
    """
    n = p.n
    _cap(n, MAX_SWEEP)
    M = U @ p.to_matrix() @ U.conj().T
    return pauli_decompose(M, n, tol)


_BASIS_CACHE: dict[int, tuple[list, np.ndarray]] = {}


def _pauli_basis(n: int) -> tuple[list, np.ndarray]:
    """Keys and stacked matrices of every Hermitian ``E(a, b)`` on ``n`` qubits."""
    if n not in _BASIS_CACHE:
        keys, mats = [], []
        for bits in itertools.product((0, 1), repeat=2 * n):
            a, b = bits[:n], bits[n:]
            keys.append((tuple(a), tuple(b)))
            mats.append(PauliOperator(np.array(a), np.array(b)).to_matrix())
        _BASIS_CACHE[n] = (keys, np.array(mats))
    return _BASIS_CACHE[n]


def pauli_decompose(M: np.ndarray, n: int, tol: float = 1e-10) -> dict:
    _cap(n, MAX_SWEEP)
    keys, mats = _pauli_basis(n)
    # Tr(E M) for every basis element at once.
    coeffs = np.einsum("kij,ji->k", mats, M) / (1 << n)
    return {key: complex(c) for key, c in zip(keys, coeffs) if abs(c) > tol}


def pauli_sum_matrix(terms: dict, n: int) -> np.ndarray:
    M = np.zeros((1 << n, 1 << n), dtype=complex)
    for (a, b), c in terms.items():
        M += c * PauliOperator(np.array(a), np.array(b)).to_matrix()
    return M


def code_projector(code) -> np.ndarray:
    """``prod_i (I + nu_i E_i) / 2`` over the stabilizer generators."""
    _cap(code.n)
    N = 1 << code.n
    P = np.eye(N, dtype=complex)
    for g in code.generators:
        P = P @ (np.eye(N) + g.to_matrix()) / 2
    return P


def code_projector_sum(code) -> np.ndarray:
    """Character-sum form ``2^-r sum_{s in S} s``."""
    from .pauli import product

    _cap(code.n)
    N = 1 << code.n
    P = np.zeros((N, N), dtype=complex)
    r = code.r
    for mask in range(1 << r):
        elem = product([g for j, g in enumerate(code.generators) if mask >> j & 1], n=code.n)
        P += elem.to_matrix()
    return P / (1 << r)


def check_projector_invariance(U: np.ndarray, code, tol: float = 1e-9) -> bool:
    _cap(code.n, MAX_SWEEP)
    P = code_projector(code)
    return float(np.linalg.norm(U @ P @ U.conj().T - P)) < tol


def induces_symplectic(U: np.ndarray, F: np.ndarray, n: int, tol: float = 1e-10) -> bool:
    """Whether ``U E(x) U^dagger = +-E(x F)`` for every basis row ``x``."""
    for i in range(2 * n):
        x = np.zeros(2 * n, dtype=np.uint8)
        x[i] = 1
        y = f2core.vecmat(x, F)
        A = U @ PauliOperator.from_vector(x).to_matrix() @ U.conj().T
        B = PauliOperator.from_vector(y).to_matrix()
        if not (np.abs(A - B).max() < tol or np.abs(A + B).max() < tol):
            return False
    return True

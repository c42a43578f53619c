"""Quadratic form diagonal gates ``tau_R = diag(xi^{v R v^T})``.

Here ``xi = exp(2 pi i / 2^ell)``. All arithmetic is exact and works on
integer exponents of ``xi``. Basis states are indexed with qubit 1 as the
most significant bit, matching :mod:`artifact.oracle`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliOperator

MAX_ELL = 8


class QfdError(ValueError):
    pass


def _bits(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.int64)


def canonical_R(R, ell: int) -> np.ndarray:
    """Reduce the diagonal mod ``2^ell`` and the off-diagonal mod ``2^(ell-1)``."""
    R = np.array(R, dtype=np.int64)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise QfdError(f"R must be square, got shape {R.shape}")
    if not np.array_equal(R, R.T):
        raise QfdError("R must be symmetric")
    if ell < 0:
        raise QfdError("level must be non-negative")
    off = 1 << (ell - 1) if ell >= 1 else 1
    out = R % off
    d = np.diag(R) % (1 << ell)
    np.fill_diagonal(out, d)
    return out


@dataclass(frozen=True, eq=False)
class QfdGate:
    """``tau_R^(ell)`` with ``R`` held in canonical form."""

    ell: int
    R: np.ndarray

    def __post_init__(self):
        if self.ell < 0:
            raise QfdError("level must be non-negative")
        object.__setattr__(self, "R", canonical_R(self.R, self.ell))
        self.R.setflags(write=False)

    @classmethod
    def zero(cls, n: int, ell: int) -> "QfdGate":
        return cls(ell, np.zeros((n, n), dtype=np.int64))

    @property
    def n(self) -> int:
        return self.R.shape[0]

    def exponents(self) -> np.ndarray:
        """``v R v^T mod 2^ell`` for every basis index ``v``."""
        V = _bits(self.n)
        return np.einsum("vi,ij,vj->v", V, self.R, V) % (1 << self.ell)

    def diagonal(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.exponents() / (1 << self.ell))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QfdGate):
            return NotImplemented
        return self.ell == other.ell and np.array_equal(self.R, other.R)

    def __hash__(self) -> int:
        return hash((self.ell, self.R.tobytes()))

    def __repr__(self) -> str:
        return f"QfdGate(ell={self.ell}, R={self.R.tolist()})"

    def to_json(self) -> dict:
        return {"ell": int(self.ell), "R": self.R.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "QfdGate":
        return cls(int(obj["ell"]), np.array(obj["R"], dtype=np.int64))


def D(x) -> np.ndarray:
    """Diagonal matrix with ``x`` on the diagonal."""
    return np.diag(np.asarray(x, dtype=np.int64).reshape(-1))


def eta(v, R, w) -> int:
    """``[(v + w) - (v * w)] R (v * w)^T`` over the integers."""
    v = np.asarray(v, dtype=np.int64)
    w = np.asarray(w, dtype=np.int64)
    R = np.asarray(R, dtype=np.int64)
    vw = v * w
    return int((v + w - vw) @ R @ vw)


def _split(x) -> tuple[np.ndarray, np.ndarray]:
    """Lowest two binary digits of an integer vector."""
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    return x % 2, (x // 2) % 2


def q_exponent(v, R, a, b, ell: int) -> int:
    """Exponent ``q^(ell-1)(v; R, a, b)`` of the conjugation phase, mod ``2^ell``."""
    if ell < 2:
        raise QfdError("conjugation formulas need ell >= 2")
    v = np.asarray(v, dtype=np.int64)
    R = np.asarray(R, dtype=np.int64)
    a0, a1 = _split(a)
    b0, b1 = _split(b)
    val = ((1 - (1 << (ell - 2))) * int(a0 @ R @ a0)
           + (1 << (ell - 1)) * int(a0 @ b1 + b0 @ a1)
           + (2 + (1 << (ell - 1))) * int(v @ R @ a0)
           - 4 * eta(v, R, a0))
    return val % (1 << ell)


def phi(R, a, b, ell: int) -> int:
    """Global phase exponent of the conjugation, mod ``2^ell``."""
    if ell < 2:
        raise QfdError("conjugation formulas need ell >= 2")
    R = np.asarray(R, dtype=np.int64)
    a0, a1 = _split(a)
    b0, b1 = _split(b)
    val = (1 - (1 << (ell - 2))) * int(a0 @ R @ a0) + (1 << (ell - 1)) * int(a0 @ b1 + b0 @ a1)
    return val % (1 << ell)


def r_tilde(R, a, ell: int) -> np.ndarray:
    """Residual symmetric matrix at level ``ell - 1`` (canonical form)."""
    if ell < 2:
        raise QfdError("conjugation formulas need ell >= 2")
    R = np.asarray(R, dtype=np.int64)
    a0, _ = _split(a)
    abar = 1 - a0
    a0R = a0 @ R
    Rt = ((1 + (1 << (ell - 2))) * D(a0R)
          - (D(abar) @ R @ D(a0) + D(a0) @ R @ D(abar) + 2 * D(a0R * a0)))
    return canonical_R(Rt, ell - 1)


def composition_offset(R, a, b, c, d, ell: int) -> int:
    """Constant ``k`` with ``q(v+c0; a, b) + q(v; c, d) = q(v; a+c, b+d) + k``.

    The offset collects the phase of ``E(a, b) E(c, d)`` and the signs that
    appear when the integer vectors ``a0 + c0`` and ``b0 + a0 R`` are reduced
    mod 2 inside a Hermitian Pauli. It does not depend on ``v``.
    """
    if ell < 2:
        raise QfdError("conjugation formulas need ell >= 2")
    R = np.asarray(R, dtype=np.int64)
    a, b, c, d = (np.asarray(x, dtype=np.int64).reshape(-1) for x in (a, b, c, d))
    a0, b0, c0, d0 = a % 2, b % 2, c % 2, d % 2
    u = (a + c) % 2
    beta = b0 + a0 @ R
    delta = d0 + c0 @ R
    gamma = (b + d) % 2 + u @ R
    k = int(b @ c - a @ d + u @ gamma - a0 @ beta - c0 @ delta + 2 * ((beta % 2) @ c0))
    return (k << (ell - 2)) % (1 << ell)


@dataclass(frozen=True)
class QfdConjugation:
    """``g P g^dagger = xi^phase * pauli_image * tau_residual`` (Pauli on the left)."""

    ell: int
    phase_exponent: int
    pauli_image: PauliOperator
    residual: QfdGate

    def q_values(self) -> np.ndarray:
        """``phase + 2 v R~ v^T mod 2^ell`` for every basis index."""
        V = _bits(self.residual.n)
        quad = np.einsum("vi,ij,vj->v", V, self.residual.R, V)
        return (self.phase_exponent + 2 * quad) % (1 << self.ell)

    def matrix(self) -> np.ndarray:
        xi = np.exp(2j * np.pi / (1 << self.ell))
        scal = xi ** self.phase_exponent
        return scal * self.pauli_image.to_matrix() @ np.diag(self.residual.diagonal())


def conjugate_vectors(g: QfdGate, a, b) -> QfdConjugation:
    """Conjugate the generalised ``E(a, b)`` for integer vectors ``a, b``."""
    ell = g.ell
    if ell < 2:
        raise QfdError("conjugation formulas need ell >= 2")
    a = np.asarray(a, dtype=np.int64).reshape(-1)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if a.size != g.n or b.size != g.n:
        raise QfdError("Pauli length does not match the gate")
    a0, _ = _split(a)
    b0, _ = _split(b)
    image = PauliOperator.from_integer_vectors(a0, b0 + a0 @ g.R)
    return QfdConjugation(ell, phi(g.R, a, b, ell), image, QfdGate(ell - 1, r_tilde(g.R, a, ell)))


def conjugate(g: QfdGate, p: PauliOperator) -> QfdConjugation:
    """Conjugate ``p = i^kappa E(a, b)``; the factor ``i^kappa`` joins the phase."""
    c = conjugate_vectors(g, p.a, p.b)
    extra = (p.kappa % 4) << (g.ell - 2)
    return QfdConjugation(c.ell, (c.phase_exponent + extra) % (1 << g.ell), c.pauli_image, c.residual)


def compose(g1: QfdGate, g2: QfdGate) -> QfdGate:
    if g1.ell != g2.ell or g1.n != g2.n:
        raise QfdError("compose needs gates of equal level and size")
    return QfdGate(g1.ell, g1.R + g2.R)


def tensor(g1: QfdGate, g2: QfdGate) -> QfdGate:
    """``g1 (x) g2`` at the level of ``g1``; ``g2`` may sit at a lower level."""
    if g2.ell > g1.ell:
        raise QfdError("second factor must not exceed the level of the first")
    n1, n2 = g1.n, g2.n
    R = np.zeros((n1 + n2, n1 + n2), dtype=np.int64)
    R[:n1, :n1] = g1.R
    R[n1:, n1:] = (1 << (g1.ell - g2.ell)) * g2.R
    return QfdGate(g1.ell, R)


def raise_level(g: QfdGate, ell: int) -> QfdGate:
    """The same unitary written at a higher level."""
    if ell < g.ell:
        raise QfdError("cannot lower the level")
    return QfdGate(ell, g.R * (1 << (ell - g.ell)))


@dataclass(frozen=True)
class Cyclotomic:
    """``2^(-half/2) * sum_k counts[k] xi^k`` with ``xi = exp(2 pi i / 2^ell)``."""

    ell: int
    counts: tuple
    half: int

    def to_complex(self) -> complex:
        k = np.arange(len(self.counts))
        xi = np.exp(2j * np.pi * k / (1 << self.ell))
        return complex(np.dot(np.array(self.counts, dtype=float), xi) / 2 ** (self.half / 2))

    def is_zero(self, tol: float = 1e-12) -> bool:
        return abs(self.to_complex()) < tol


MAX_COEFF_QUBITS = 16


def pauli_coefficients(g: QfdGate, max_n: int = MAX_COEFF_QUBITS) -> dict:
    """``c_{R,x} = 2^(-n/2) sum_v (-1)^(v.x) xi^(v R v^T)`` for every ``x``.

    Keys are ``x`` as tuples of bits (qubit 1 first). Then
    ``tau_R = 2^(-n/2) sum_x c_{R,x} E(0, x)``.
    """
    n = g.n
    if n > max_n:
        raise QfdError(f"coefficient sum limited to {max_n} qubits")
    if g.ell < 1:
        raise QfdError("coefficients need ell >= 1")
    V = _bits(n)
    ex = g.exponents()
    M = 1 << g.ell
    out = {}
    for x in V:
        # (-1) = xi^(M/2), so each sign folds into the exponent.
        e = (ex + ((V @ x) % 2) * (M // 2)) % M
        counts = np.bincount(e, minlength=M)
        out[tuple(int(t) for t in x)] = Cyclotomic(g.ell, tuple(int(c) for c in counts), n)
    return out


@dataclass(frozen=True)
class DiagonalFit:
    """Outcome of :func:`from_diagonal`."""

    status: str  # "qfd", "not QFD" or "not QFD within cap"
    gate: QfdGate | None = None
    mismatch: int | None = None

    @property
    def ok(self) -> bool:
        return self.status == "qfd"


def from_diagonal(exponents, ell: int, cap: int = MAX_ELL) -> DiagonalFit:
    """Find ``R`` with ``v R v^T = k_v mod 2^ell`` for diagonal entries ``xi^{k_v}``.

    The entry at ``v = 0`` is treated as a global phase and subtracted.
    Off-diagonal entries are read from weight-two indices; when one of them
    needs an odd value of ``2 R_ij`` the whole problem moves up one level.
    A failed check on the remaining indices proves no ``R`` exists at any
    level, because the solution is unique once the level is fixed.
    """
    k = np.asarray(exponents, dtype=np.int64).reshape(-1)
    N = k.size
    n = N.bit_length() - 1
    if N == 0 or (1 << n) != N:
        raise QfdError("need 2^n diagonal exponents")
    if ell < 1:
        raise QfdError("level must be at least 1")
    if ell > cap:
        return DiagonalFit("not QFD within cap")
    k = (k - k[0]) % (1 << ell)

    def idx(*qs):
        return sum(1 << (n - 1 - q) for q in qs)

    while True:
        M = 1 << ell
        R = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            R[i, i] = k[idx(i)] % M
        odd = False
        for i in range(n):
            for j in range(i + 1, n):
                t = int(k[idx(i, j)] - R[i, i] - R[j, j]) % M
                if t % 2:
                    odd = True
                    break
                R[i, j] = R[j, i] = t // 2
            if odd:
                break
        if odd:
            if ell + 1 > cap:
                return DiagonalFit("not QFD within cap")
            k = 2 * k
            ell += 1
            continue
        g = QfdGate(ell, R)
        bad = np.nonzero(g.exponents() != k % M)[0]
        if bad.size:
            return DiagonalFit("not QFD", mismatch=int(bad[0]))
        return DiagonalFit("qfd", g)


def standard_gate(name: str) -> QfdGate:
    """Level-3 representations of common single- and two-qubit diagonals."""
    table = {
        "I": [[0]], "T": [[1]], "P": [[2]], "S": [[2]], "TZ": [[5]], "Z": [[4]],
        "Pdg": [[6]], "Tdg": [[7]], "TdgZ": [[3]],
        "CZ": [[0, 2], [2, 0]], "CP": [[0, 1], [1, 0]],
    }
    if name not in table:
        raise QfdError(f"unknown standard gate {name!r}")
    return QfdGate(3, np.array(table[name], dtype=np.int64))

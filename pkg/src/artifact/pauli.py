"""Exact n-qubit Pauli arithmetic with phases tracked as powers of i.

A :class:`PauliOperator` stores ``i**kappa * E(a, b)`` where ``a, b`` are binary
vectors and ``E(a, b) = i**(a.b) X^a Z^b`` is Hermitian. Phases never pass
through floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .f2core import as_f2_vec

_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LETTER.items()}
_PREFIX = {"": 0, "+": 0, "-": 2, "+i": 1, "i": 1, "-i": 3}


class PauliParseError(ValueError):
    def __init__(self, message: str, column: int | None = None):
        super().__init__(message if column is None else f"column {column}: {message}")
        self.column = column


def symplectic_inner(x, y) -> int:
    """Symplectic form <x, y> = x_a.y_b + x_b.y_a mod 2 on [a|b] row vectors."""
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    y = np.asarray(y, dtype=np.int64).reshape(-1)
    n = x.size // 2
    return int((x[:n] @ y[n:] + x[n:] @ y[:n]) % 2)


def symplectic_gram(rows) -> np.ndarray:
    """Matrix of pairwise symplectic inner products of the given rows."""
    m = np.asarray(rows, dtype=np.int64)
    n = m.shape[1] // 2
    omega_rows = np.hstack([m[:, n:], m[:, :n]])
    return ((m @ omega_rows.T) % 2).astype(np.uint8)


@dataclass(frozen=True)
class PauliOperator:
    """``i**kappa * E(a, b)`` on ``len(a)`` qubits."""

    a: np.ndarray = field(compare=False)
    b: np.ndarray = field(compare=False)
    kappa: int = 0

    def __post_init__(self):
        a = as_f2_vec(self.a)
        b = as_f2_vec(self.b)
        if a.shape != b.shape:
            raise ValueError("X and Z parts must have equal length")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "kappa", int(self.kappa) % 4)

    @classmethod
    def from_integer_vectors(cls, a, b, kappa: int = 0) -> "PauliOperator":
        """Build ``i**kappa E(a, b)`` for integer vectors, reducing to binary.

        Uses ``E(a, b) = i**(a.b - a0.b0) E(a0, b0)`` where ``a0, b0`` are the
        entries reduced mod 2.
        """
        a = np.asarray(a, dtype=np.int64).reshape(-1)
        b = np.asarray(b, dtype=np.int64).reshape(-1)
        a0 = a % 2
        b0 = b % 2
        # D(a, b) = X^a Z^b; X^a = X^{a0} and Z^b = Z^{b0} exactly, so
        # E(a, b) = i^{a.b} D(a0, b0) = i^{a.b - a0.b0} E(a0, b0).
        shift = int(a @ b - a0 @ b0)
        return cls(a0, b0, kappa + shift)

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        z = np.zeros(n, dtype=np.uint8)
        return cls(z, z.copy(), 0)

    @classmethod
    def from_vector(cls, v, kappa: int = 0) -> "PauliOperator":
        v = as_f2_vec(v)
        n = v.size // 2
        return cls(v[:n], v[n:], kappa)

    @classmethod
    def parse(cls, text: str) -> "PauliOperator":
        return parse_pauli(text)

    @property
    def n(self) -> int:
        return int(self.a.size)

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.a, self.b])

    @property
    def is_hermitian(self) -> bool:
        return self.kappa % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise ValueError("operator is not Hermitian")
        return 1 if self.kappa == 0 else -1

    def weight(self) -> int:
        return int(np.count_nonzero(self.a | self.b))

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __neg__(self) -> "PauliOperator":
        return PauliOperator(self.a, self.b, self.kappa + 2)

    def scale(self, power_of_i: int) -> "PauliOperator":
        return PauliOperator(self.a, self.b, self.kappa + power_of_i)

    def commutes_with(self, other: "PauliOperator") -> bool:
        return symplectic_inner(self.vector, other.vector) == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return (
            self.kappa == other.kappa
            and np.array_equal(self.a, other.a)
            and np.array_equal(self.b, other.b)
        )

    def __hash__(self) -> int:
        return hash((self.kappa, self.a.tobytes(), self.b.tobytes()))

    def equal_up_to_phase(self, other: "PauliOperator") -> bool:
        return np.array_equal(self.a, other.a) and np.array_equal(self.b, other.b)

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliOperator({format_pauli(self)!r})"

    def to_matrix(self) -> np.ndarray:
        """Dense matrix, qubit 1 as the leftmost Kronecker factor."""
        single = {
            "I": np.eye(2, dtype=complex),
            "X": np.array([[0, 1], [1, 0]], dtype=complex),
            "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
            "Z": np.array([[1, 0], [0, -1]], dtype=complex),
        }
        m = np.array([[1.0 + 0j]])
        for ai, bi in zip(self.a, self.b):
            m = np.kron(m, single[_LETTER[(int(ai), int(bi))]])
        return (1j ** self.kappa) * m


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Exact product using ``E(a,b) E(c,d) = i^(b.c - a.d) E(a+c, b+d)``."""
    if p.n != q.n:
        raise ValueError("operators act on different numbers of qubits")
    a, b = p.a.astype(np.int64), p.b.astype(np.int64)
    c, d = q.a.astype(np.int64), q.b.astype(np.int64)
    expo = int(b @ c - a @ d)
    return PauliOperator.from_integer_vectors(a + c, b + d, p.kappa + q.kappa + expo)


def product(ops, n: int | None = None) -> PauliOperator:
    ops = list(ops)
    if not ops:
        if n is None:
            raise ValueError("empty product needs n")
        return PauliOperator.identity(n)
    out = ops[0]
    for op in ops[1:]:
        out = out * op
    return out


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    return p.commutes_with(q)


def format_pauli(p: PauliOperator) -> str:
    prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[p.kappa]
    return prefix + "".join(_LETTER[(int(x), int(z))] for x, z in zip(p.a, p.b))


_PAULI_RE = re.compile(r"^\s*([+-]?i?)\s*([IXYZ]+)\s*$")


def parse_pauli(text: str) -> PauliOperator:
    """Parse strings such as ``+XZZXI``, ``-iYY`` or ``ZIZ``.

    Each ``Y`` stands for ``E(1, 1)`` (so ``"Y" == E(1,1)`` with no extra phase).
    """
    m = _PAULI_RE.match(text)
    if not m:
        for col, ch in enumerate(text, 1):
            if ch not in "+-i IXYZ\t":
                raise PauliParseError(f"unexpected character {ch!r}", col)
        raise PauliParseError(f"malformed Pauli string {text!r}")
    kappa = _PREFIX[m.group(1)]
    letters = m.group(2)
    a = np.array([_BITS[ch][0] for ch in letters], dtype=np.uint8)
    b = np.array([_BITS[ch][1] for ch in letters], dtype=np.uint8)
    return PauliOperator(a, b, kappa)


def single_qubit(n: int, qubit: int, letter: str) -> PauliOperator:
    """Pauli ``letter`` on 0-based ``qubit`` of an ``n``-qubit register."""
    a = np.zeros(n, dtype=np.uint8)
    b = np.zeros(n, dtype=np.uint8)
    a[qubit], b[qubit] = _BITS[letter]
    return PauliOperator(a, b, 0)


@dataclass(frozen=True)
class Root8Scalar:
    """Exact scalar ``exp(i pi k / 4) / 2^(half / 2)``."""

    k: int
    half: int = 0

    def __post_init__(self):
        object.__setattr__(self, "k", int(self.k) % 8)
        if self.half < 0:
            raise ValueError("half must be non-negative")

    def __complex__(self) -> complex:
        return complex(np.exp(1j * np.pi * self.k / 4) / np.sqrt(2.0) ** self.half)

    def __mul__(self, other: "Root8Scalar") -> "Root8Scalar":
        return Root8Scalar(self.k + other.k, self.half + other.half)

    def __str__(self) -> str:
        unit = {0: "", 2: "i", 4: "-", 6: "-i"}.get(self.k, f"w^{self.k}")
        return unit + (f"2^-{self.half}/2" if self.half else "1")


@dataclass
class PauliSum:
    """Linear combination of Hermitian ``E(a, b)`` terms.

    Coefficients are :class:`Root8Scalar` values (exact) or Python complex
    numbers. Adding a term whose ``(a, b)`` already appears merges the two
    coefficients, falling back to floating point when exact addition is not
    representable.
    """

    n: int
    terms: dict = field(default_factory=dict)

    def add(self, coeff, p: PauliOperator) -> None:
        if p.n != self.n:
            raise ValueError("term acts on the wrong number of qubits")
        if p.kappa:
            coeff = _times_i_power(coeff, p.kappa)
            p = PauliOperator(p.a, p.b, 0)
        key = (p.a.tobytes(), p.b.tobytes())
        if key in self.terms:
            old, _ = self.terms[key]
            total = complex(old) + complex(coeff)
            if abs(total) < 1e-15:
                del self.terms[key]
            else:
                self.terms[key] = (total, p)
        else:
            self.terms[key] = (coeff, p)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        """``(coefficient, operator)`` pairs sorted by the operator vector."""
        return [self.terms[k] for k in sorted(self.terms)]

    def to_dict(self) -> dict:
        """``{(a_tuple, b_tuple): complex}`` in the layout used by the dense oracle."""
        return {
            (tuple(int(x) for x in p.a), tuple(int(x) for x in p.b)): complex(c)
            for c, p in self.terms.values()
        }

    def to_matrix(self) -> np.ndarray:
        out = np.zeros((1 << self.n, 1 << self.n), dtype=complex)
        for c, p in self.terms.values():
            out += complex(c) * p.to_matrix()
        return out

    def __str__(self) -> str:
        return " + ".join(f"({c}) {format_pauli(p)[1:]}" for c, p in self.items())


def _times_i_power(coeff, kappa: int):
    if isinstance(coeff, Root8Scalar):
        return Root8Scalar(coeff.k + 2 * kappa, coeff.half)
    return complex(coeff) * (1j ** kappa)

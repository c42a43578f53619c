"""Reed-Muller codes and the quantum Reed-Muller family.

Evaluation points are the integers ``0..2^m-1``; variable ``x_j`` at point
``i`` is bit ``j-1`` of ``i`` (so ``x_1`` is the least significant bit).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from . import f2core
from .stabilizer import StabilizerCode, css_construct


class RMError(ValueError):
    pass


def monomial(m: int, variables) -> np.ndarray:
    """Indicator vector ``d`` of the monomial ``prod_{j in variables} x_j`` (1-based)."""
    d = np.zeros(m, dtype=np.uint8)
    for j in variables:
        if not 1 <= j <= m:
            raise RMError(f"variable x{j} out of range 1..{m}")
        d[j - 1] = 1
    return d


def monomials(m: int, degree: int) -> list[tuple[int, ...]]:
    """Degree-``degree`` monomials as variable tuples in lexicographic order."""
    return list(itertools.combinations(range(1, m + 1), degree))


def ev(d) -> np.ndarray:
    """Evaluation vector of the monomial with indicator ``d``."""
    d = np.asarray(d, dtype=np.int64)
    m = d.size
    pts = np.arange(1 << m)
    bits = (pts[:, None] >> np.arange(m)) & 1
    return np.all(bits[:, d.astype(bool)] == 1, axis=1).astype(np.uint8)


def rm_monomials(r: int, m: int) -> list[tuple[int, ...]]:
    """All monomials of degree at most ``r``: by degree, then lexicographically."""
    if not 0 <= r <= m:
        raise RMError(f"need 0 <= r <= m, got r={r}, m={m}")
    out = []
    for deg in range(r + 1):
        out.extend(monomials(m, deg))
    return out


def rm_generator(r: int, m: int) -> np.ndarray:
    return np.array([ev(monomial(m, mon)) for mon in rm_monomials(r, m)], dtype=np.uint8)


def min_distance(G) -> int:
    """Minimum nonzero weight by enumeration (dimension at most 24)."""
    words = f2core.span(f2core.row_basis(G))
    w = words.sum(axis=1)
    return int(w[w > 0].min())


def qrm_construct(r: int, m: int) -> StabilizerCode:
    """QRM(r, m): ``C2 = RM(r-1, m)``, ``C1 = RM(r, m)``.

    Logical X generators are the degree-``r`` monomials and logical Z
    generators the complementary degree-``(m-r)`` monomials, which pair to the
    identity matrix.
    """
    if not (1 <= r and 2 * r <= m):
        raise RMError(f"need 1 <= r <= m/2, got r={r}, m={m}")
    C1 = rm_generator(r, m)
    C2 = rm_generator(r - 1, m)
    mons = monomials(m, r)
    GX = np.array([ev(monomial(m, mon)) for mon in mons], dtype=np.uint8)
    full = set(range(1, m + 1))
    GZ = np.array([ev(monomial(m, sorted(full - set(mon)))) for mon in mons], dtype=np.uint8)
    # C1 dual is RM(m-r-1, m), generated directly by monomials.
    z_gen = rm_generator(m - r - 1, m)
    return css_construct(C1, C2, z_gen=z_gen, coset_gen=GX, z_coset_gen=GZ, name=f"QRM({r},{m})")


def qrm_parameters(r: int, m: int) -> tuple[int, int, int]:
    return 1 << m, comb(m, r), 1 << min(r, m - r)


@dataclass
class LogicalGatePoly:
    """``q(v)`` as a sum of products over logical qubits.

    ``terms`` holds tuples of logical-qubit indices (0-based, following the
    order of ``monomials(m, r)``); ``labels`` names each logical qubit by its
    monomial.
    """

    r: int
    m: int
    terms: list[tuple[int, ...]]
    labels: list[tuple[int, ...]]

    def __len__(self) -> int:
        return len(self.terms)

    def evaluate(self, v) -> int:
        v = np.asarray(v, dtype=np.int64)
        return int(sum(int(np.prod(v[list(t)])) for t in self.terms) % 2)

    def evaluate_all(self) -> np.ndarray:
        """``q`` on every logical basis index; logical qubit ``j`` is bit ``j``."""
        k = len(self.labels)
        idx = np.arange(1 << k, dtype=np.int64)
        out = np.zeros(1 << k, dtype=np.int64)
        for t in self.terms:
            mask = 0
            for j in t:
                mask |= 1 << j
            out ^= ((idx & mask) == mask).astype(np.int64)
        return out

    def format(self, style: str = "index") -> str:
        parts = []
        for t in self.terms:
            if style == "monomial":
                parts.append(" ".join("v_{" + "".join(f"x{j}" for j in self.labels[i]) + "}" for i in t))
            else:
                parts.append(" ".join(f"v{i + 1}" for i in t))
        return " + ".join(parts)


def partition_count(r: int, m: int) -> int:
    if r <= 0 or m % r:
        raise RMError("r must divide m")
    b = m // r
    return factorial(m) // (factorial(r) ** b * factorial(b))


def qrm_logical_action(r: int, m: int) -> LogicalGatePoly:
    """Partition polynomial: one term per split of ``x_1..x_m`` into blocks of size ``r``.

    For ``r >= 2`` the coset weights satisfy ``w = 2^(m/r - 1) q mod 2^(m/r)``
    exactly. For ``r = 1`` the weights give ``q`` evaluated on the complemented
    logical index, which matches up to a logical X correction and a global sign.
    """
    if r <= 0 or m % r:
        raise RMError(f"r must divide m, got r={r}, m={m}")
    if 2 * r > m:
        raise RMError(f"need r <= m/2, got r={r}, m={m}")
    labels = monomials(m, r)
    index = {mon: i for i, mon in enumerate(labels)}
    terms = []

    def rec(remaining: tuple[int, ...], acc: list[int]):
        if not remaining:
            terms.append(tuple(sorted(acc)))
            return
        first = remaining[0]
        for rest in itertools.combinations(remaining[1:], r - 1):
            block = (first,) + rest
            left = tuple(x for x in remaining if x not in block)
            rec(left, acc + [index[block]])

    rec(tuple(range(1, m + 1)), [])
    terms.sort()
    return LogicalGatePoly(r, m, terms, labels)


@dataclass
class ResidueReport:
    constant: bool
    residue: int
    weights_mod: np.ndarray


def coset_weight_residue(code: StabilizerCode, v, modulus: int) -> ResidueReport:
    """Weights mod ``modulus`` over the coset ``v G_{C1/C2} + C2``."""
    css = code.css
    if css is None:
        raise RMError("coset residues need a CSS code")
    v = f2core.as_f2_vec(v)
    x = f2core.vecmat(v, css.coset_gen) if v.size else np.zeros(code.n, np.uint8)
    C2 = css.C2_gen
    if C2.shape[0] > 24:
        raise RMError("C2 too large to enumerate")
    words = f2core.span(C2) ^ x
    w = words.sum(axis=1) % modulus
    return ResidueReport(bool(np.all(w == w[0])), int(w[0]), w)


def all_coset_residues(code: StabilizerCode, modulus: int) -> tuple[bool, np.ndarray]:
    """Residue for every logical basis index (logical qubit ``j`` is bit ``j``).

    Uses packed 64-bit words for codes of length at most 64 and reports
    whether every coset had a constant residue.
    """
    css = code.css
    k = css.coset_gen.shape[0]
    n = code.n
    C2 = f2core.span(css.C2_gen)
    cos = f2core.span(css.coset_gen)
    if n <= 64:
        c2p = f2core.pack_rows(C2)
        cosp = f2core.pack_rows(cos)
        constant = True
        out = np.zeros(1 << k, dtype=np.int64)
        chunk = max(1, (1 << 20) // max(1, c2p.size))
        for s in range(0, cosp.size, chunk):
            block = cosp[s: s + chunk, None] ^ c2p[None, :]
            w = np.bitwise_count(block).astype(np.int64) % modulus
            constant &= bool(np.all(w == w[:, :1]))
            out[s: s + chunk] = w[:, 0]
        return constant, out
    constant = True
    out = np.zeros(1 << k, dtype=np.int64)
    for i, x in enumerate(cos):
        w = ((C2 ^ x).sum(axis=1)) % modulus
        constant &= bool(np.all(w == w[0]))
        out[i] = w[0]
    return constant, out

"""The binary symplectic group and Clifford circuits built from it.

Row-vector convention throughout: a Clifford ``g`` with symplectic image ``F``
maps ``E(x)`` to ``+-E(x F)``. A circuit ``[g1, g2, ...]`` applies ``g1`` first
and has image ``F_{g1} F_{g2} ...``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import f2core
from .f2core import F2Error, as_f2, as_f2_vec, matmul
from .pauli import PauliOperator, single_qubit, symplectic_inner


class SymplecticError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Basic matrices


def omega(n: int) -> np.ndarray:
    z = np.zeros((n, n), dtype=np.uint8)
    i = np.eye(n, dtype=np.uint8)
    return np.block([[z, i], [i, z]])


def is_symplectic(F) -> bool:
    F = np.asarray(F)
    if F.ndim != 2 or F.shape[0] != F.shape[1] or F.shape[0] % 2:
        return False
    n = F.shape[0] // 2
    return bool(np.array_equal(matmul(matmul(F, omega(n)), F.T), omega(n)))


def transvection(h) -> np.ndarray:
    """``F_h = I + Omega h^T h`` so that ``x F_h = x + <x,h> h``."""
    h = as_f2_vec(h).astype(np.int64)
    m = h.size
    n = m // 2
    oh = np.concatenate([h[n:], h[:n]])
    return ((np.eye(m, dtype=np.int64) + np.outer(oh, h)) % 2).astype(np.uint8)


def mat_LQ(Q) -> np.ndarray:
    Q = as_f2(Q)
    n = Q.shape[0]
    z = np.zeros((n, n), dtype=np.uint8)
    return np.block([[Q, z], [z, f2core.inverse(Q).T]])


def mat_TR(R) -> np.ndarray:
    R = as_f2(R)
    if not np.array_equal(R, R.T):
        raise SymplecticError("T_R needs a symmetric R")
    n = R.shape[0]
    i = np.eye(n, dtype=np.uint8)
    z = np.zeros((n, n), dtype=np.uint8)
    return np.block([[i, R], [z, i]])


def mat_Gk(n: int, k: int) -> np.ndarray:
    """Partial Hadamard: swaps the X and Z coordinates of the first ``k`` qubits."""
    d = np.zeros(n, dtype=np.uint8)
    d[:k] = 1
    Ik = np.diag(d)
    Imk = np.diag(1 - d)
    return np.block([[Imk, Ik], [Ik, Imk]])


# ---------------------------------------------------------------------------
# One solution via transvections


def _lex_min_w(constraints: list[tuple[np.ndarray, int]], m: int) -> np.ndarray:
    """Lexicographically smallest ``w`` with ``<c, w> = t`` for each ``(c, t)``."""
    n = m // 2
    rows = [np.concatenate([c[n:], c[:n]]) for c, _ in constraints]
    rhs = [t for _, t in constraints]
    w = f2core.lex_min_solution(np.array(rows, dtype=np.uint8), np.array(rhs, dtype=np.uint8))
    if w is None:
        raise SymplecticError("no auxiliary vector exists; the system is incompatible")
    return w


def map_vector(x, y) -> np.ndarray:
    """Product of at most two transvections sending ``x`` to ``y``."""
    return find_symplectic([x], [y])


def find_symplectic(xs: Sequence, ys: Sequence, n: int | None = None) -> np.ndarray:
    """One symplectic ``F`` with ``x_i F = y_i`` for every pair.

    Requires ``<x_i, x_j> = <y_i, y_j>`` for all ``i, j``. The auxiliary vector
    of the two-transvection step is the lexicographically smallest valid one.
    """
    xs = [as_f2_vec(x) for x in xs]
    ys = [as_f2_vec(y) for y in ys]
    if len(xs) != len(ys):
        raise SymplecticError("xs and ys differ in length")
    if not xs:
        if n is None:
            raise SymplecticError("empty system needs n")
        return np.eye(2 * n, dtype=np.uint8)
    m = xs[0].size
    if n is not None and m != 2 * n:
        raise SymplecticError("vector length does not match n")
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if symplectic_inner(xs[i], xs[j]) != symplectic_inner(ys[i], ys[j]):
                raise SymplecticError(
                    f"incompatible system: <x{i},x{j}> differs from <y{i},y{j}>"
                )
    if f2core.rank(np.array(xs)) != len(xs):
        raise SymplecticError("incompatible system: xs are linearly dependent")
    F = np.eye(m, dtype=np.uint8)
    for i, (x, y) in enumerate(zip(xs, ys)):
        xt = f2core.vecmat(x, F)
        if np.array_equal(xt, y):
            continue
        if symplectic_inner(xt, y) == 1:
            F = matmul(F, transvection(xt ^ y))
            continue
        cons = [(xt, 1), (y, 1)]
        cons += [(ys[j], symplectic_inner(ys[j], y)) for j in range(i)]
        w = _lex_min_w(cons, m)
        F = matmul(matmul(F, transvection(w ^ y)), transvection(xt ^ w))
    return F


# ---------------------------------------------------------------------------
# Symplectic Gram-Schmidt with fixed slots


def symplectic_gram_schmidt(
    vectors=None, n: int | None = None, fixed: dict | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Complete a symplectic basis ``(u_1..u_n, v_1..v_n)``.

    Either pass ``vectors`` (placed into slots by pairing greedily: each
    unplaced vector takes the next ``u`` slot and the first later vector with
    inner product 1 becomes its ``v`` partner) or pass ``fixed``, a mapping
    from ``("u", i)`` / ``("v", i)`` (0-based) to vectors that must occupy those
    slots. Empty slots are filled in slot order ``u_0, v_0, u_1, ...`` with the
    lexicographically smallest vector meeting the pairing conditions.

    Returns ``(U, V)`` as ``n x 2n`` arrays.
    """
    if fixed is None:
        if vectors is None:
            raise SymplecticError("provide vectors or fixed slots")
        vecs = [as_f2_vec(v) for v in vectors]
        if not vecs:
            if n is None:
                raise SymplecticError("empty input needs n")
        else:
            n = vecs[0].size // 2
        fixed = _greedy_slots(vecs)
    else:
        fixed = {k: as_f2_vec(v) for k, v in fixed.items()}
        if n is None:
            n = next(iter(fixed.values())).size // 2
    slots: dict[tuple[str, int], np.ndarray] = dict(fixed)
    for key, vec in slots.items():
        if key[0] not in ("u", "v") or not 0 <= key[1] < n or vec.size != 2 * n:
            raise SymplecticError(f"bad slot {key}")
    keys = list(slots)
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            ka, kb = keys[a], keys[b]
            want = int(ka[1] == kb[1] and ka[0] != kb[0])
            if symplectic_inner(slots[ka], slots[kb]) != want:
                raise SymplecticError(f"fixed vectors in slots {ka} and {kb} are not symplectic partners as required")
    for i in range(n):
        for side in ("u", "v"):
            if (side, i) in slots:
                continue
            other = "v" if side == "u" else "u"
            cons = []
            for (s, j), vec in slots.items():
                cons.append((vec, int(j == i and s == other)))
            if any(t for _, t in cons):
                w = _lex_min_w(cons, 2 * n)
            else:
                w = _independent_isotropic(slots, n)
            slots[(side, i)] = w
    U = np.array([slots[("u", i)] for i in range(n)], dtype=np.uint8)
    V = np.array([slots[("v", i)] for i in range(n)], dtype=np.uint8)
    return U, V


def _independent_isotropic(slots, n):
    """First kernel basis vector orthogonal to all filled slots and outside their span."""
    filled = list(slots.values())
    if filled:
        rows = np.array([np.concatenate([v[n:], v[:n]]) for v in filled], dtype=np.uint8)
        candidates = f2core.nullspace(rows)
    else:
        candidates = np.eye(2 * n, dtype=np.uint8)
    for w in candidates:
        if f2core.rank(np.array(filled + [w])) == len(filled) + 1:
            return w
    raise SymplecticError("could not complete the symplectic basis")


def _greedy_slots(vecs: list[np.ndarray]) -> dict:
    if f2core.rank(np.array(vecs)) != len(vecs):
        raise SymplecticError("input vectors are linearly dependent")
    slots = {}
    used = [False] * len(vecs)
    slot = 0
    for a, va in enumerate(vecs):
        if used[a]:
            continue
        used[a] = True
        slots[("u", slot)] = va
        for b in range(a + 1, len(vecs)):
            if not used[b] and symplectic_inner(va, vecs[b]) == 1:
                used[b] = True
                slots[("v", slot)] = vecs[b]
                break
        slot += 1
    # Later vectors must still be orthogonal to earlier pairs; orthogonalise
    # the remaining ones against completed pairs when needed.
    keys = list(slots)
    for x in range(len(keys)):
        for y in range(x + 1, len(keys)):
            kx, ky = keys[x], keys[y]
            want = int(kx[1] == ky[1] and kx[0] != ky[0])
            if symplectic_inner(slots[kx], slots[ky]) != want:
                return _orthogonalised_slots(vecs)
    return slots


def _orthogonalised_slots(vecs: list[np.ndarray]) -> dict:
    """Classical symplectic Gram-Schmidt; vectors keep their span, not their values."""
    rest = [v.copy() for v in vecs]
    slots = {}
    slot = 0
    while rest:
        u = rest.pop(0)
        partner = None
        for idx, w in enumerate(rest):
            if symplectic_inner(u, w) == 1:
                partner = rest.pop(idx)
                break
        slots[("u", slot)] = u
        if partner is not None:
            slots[("v", slot)] = partner
        new_rest = []
        for w in rest:
            if partner is not None:
                w = w ^ (symplectic_inner(w, partner) * u) ^ (symplectic_inner(w, u) * partner)
            else:
                if symplectic_inner(w, u):
                    raise SymplecticError("cannot orthogonalise input vectors")
            new_rest.append(w.astype(np.uint8))
        rest = new_rest
        slot += 1
    return slots


# ---------------------------------------------------------------------------
# All solutions


def enumerate_symplectic(
    U,
    V,
    I: Iterable[int],
    J: Iterable[int],
    u_images=None,
    v_images=None,
    limit: int | None = None,
) -> list[np.ndarray]:
    """All symplectic ``F`` with ``U[i] F = u_images[i]`` (i in I), ``V[j] F = v_images[j]`` (j in J).

    ``U`` and ``V`` hold a symplectic basis as rows. ``u_images`` and
    ``v_images`` are sequences aligned with the sorted ``I`` and ``J``. The
    result has ``2**(a(a+1)/2)`` members where ``a = |not I| + |not J|``;
    ``limit`` truncates the list (keeping deterministic order).
    """
    U = as_f2(U)
    V = as_f2(V)
    n = U.shape[0]
    I = sorted(int(i) for i in I)
    J = sorted(int(j) for j in J)
    u_images = [as_f2_vec(x) for x in (u_images if u_images is not None else [])]
    v_images = [as_f2_vec(x) for x in (v_images if v_images is not None else [])]
    if len(u_images) != len(I) or len(v_images) != len(J):
        raise SymplecticError("image lists must align with I and J")
    basis = np.vstack([U, V])
    if not is_symplectic(basis):
        raise SymplecticError("U, V do not form a symplectic basis")
    if not I and not J:
        return _all_symplectic_small(n, limit)
    both_free = sorted(set(range(n)) - set(I) - set(J))
    if both_free:
        raise SymplecticError(
            f"basis pairs {both_free} have neither vector constrained; the closed-form "
            "count only covers systems where every pair has at least one fixed vector"
        )
    xs = [U[i] for i in I] + [V[j] for j in J]
    ys = list(u_images) + list(v_images)
    F0 = find_symplectic(xs, ys)
    A = matmul(basis, F0)
    Ainv = f2core.inverse(A)
    Ibar = [i for i in range(n) if i not in I]
    Jbar = [j for j in range(n) if j not in J]
    IJ = sorted(set(Ibar) | set(Jbar))
    m = len(IJ)
    alpha = len(Ibar) + len(Jbar)
    if alpha == 0:
        return [F0]
    Bas = np.vstack([A[IJ], A[[n + x for x in IJ]]])
    sub = f2core.span(Bas)
    fixed = [p for p, x in enumerate(IJ) if x in I] + [m + p for p, x in enumerate(IJ) if x in J]
    free = [p for p in range(2 * m) if p not in fixed]
    nI = len(Ibar)

    def ip_matrix(vectors, others):
        half = vectors.shape[1] // 2
        sw = np.hstack([others[:, half:], others[:, :half]]).astype(np.int64)
        return ((vectors.astype(np.int64) @ sw.T) % 2).astype(np.uint8)

    ips = ip_matrix(sub, Bas[fixed]) if fixed else np.zeros((sub.shape[0], 0), np.uint8)
    choices = []
    for i, ind in enumerate(free):
        h = np.zeros(len(fixed), dtype=np.uint8)
        partner = ind + m if i < nI else ind - m
        if partner in fixed:
            h[fixed.index(partner)] = 1
        mask = np.all(ips == h, axis=1)
        choices.append(sub[mask])
    total_bits = alpha * (alpha + 1) // 2
    count = 1 << total_bits
    if limit is not None:
        count = min(count, limit)
    free_rows = Ibar + [n + j for j in Jbar]
    out = []
    for ell in range(count):
        bits = [(ell >> (total_bits - 1 - t)) & 1 for t in range(total_bits)]
        W = np.zeros((alpha, 2 * n), dtype=np.uint8)
        pos = 0
        for i in range(alpha):
            nb = alpha - i
            idx = 0
            for t in range(nb):
                idx = (idx << 1) | bits[pos + t]
            pos += nb
            cand = choices[i]
            if i > 0:
                target = np.zeros(alpha, dtype=np.uint8)
                if i >= nI:
                    partner = free[i] - m
                    if partner in free:
                        target[free.index(partner)] = 1
                mask = np.all(ip_matrix(cand, W) == target, axis=1)
                cand = cand[mask]
            if cand.shape[0] != 1 << nb:
                raise SymplecticError("inconsistent constraints: unexpected choice count")
            W[i] = cand[idx]
        Bl = A.copy()
        Bl[free_rows] = W
        out.append(matmul(F0, matmul(Ainv, Bl)))
    return out


def _all_symplectic_small(n: int, limit: int | None = None) -> list[np.ndarray]:
    if n > 3:
        raise SymplecticError("an unconstrained system is only enumerated for n <= 3")
    out = []
    for F in _iter_group(n):
        out.append(F)
        if limit is not None and len(out) >= limit:
            break
    return out


def _iter_group(n: int):
    """Yield every element of Sp(2n, F2) by choosing image pairs one at a time."""
    m = 2 * n
    allvec = f2core.span(np.eye(m, dtype=np.uint8))

    def rec(rows):
        if len(rows) == m:
            r = np.array(rows, dtype=np.uint8)
            yield np.vstack([r[0::2], r[1::2]])
            return
        if rows:
            arr = np.array(rows, dtype=np.int64)
            sw = np.hstack([arr[:, n:], arr[:, :n]])
            ok = np.all((allvec.astype(np.int64) @ sw.T) % 2 == 0, axis=1)
        else:
            ok = np.ones(allvec.shape[0], dtype=bool)
        cand_u = allvec[ok]
        base_rank = len(rows)
        for u in cand_u:
            if f2core.rank(np.array(rows + [u])) != base_rank + 1:
                continue
            ip = (allvec[:, n:].astype(np.int64) @ u[:n] + allvec[:, :n].astype(np.int64) @ u[n:]) % 2
            for v in allvec[ok & (ip == 1)]:
                yield from rec(rows + [u, v])

    yield from rec([])


def brute_force_group(n: int) -> list[np.ndarray]:
    """Every element of Sp(2n, F2) by exhaustive scan (n <= 2)."""
    m = 2 * n
    if m * m > 16:
        raise SymplecticError("exhaustive scan only supported for n <= 2")
    idx = np.arange(1 << (m * m), dtype=np.int64)
    bits = ((idx[:, None] >> np.arange(m * m - 1, -1, -1)) & 1).reshape(-1, m, m)
    Om = omega(n).astype(np.int64)
    prod = np.einsum("kij,jl,kml->kim", bits, Om, bits) % 2
    ok = np.all(prod == Om, axis=(1, 2))
    return [b.astype(np.uint8) for b in bits[ok]]


def symplectic_group_order(n: int) -> int:
    out = 2 ** (n * n)
    for j in range(1, n + 1):
        out *= 4**j - 1
    return out


# ---------------------------------------------------------------------------
# Decomposition into elementary factors


@dataclass(frozen=True)
class ElementaryFactor:
    kind: str  # "Omega", "LQ", "TR", "Gk"
    n: int
    data: np.ndarray | None = field(default=None, compare=False)
    t: int = 0

    def matrix(self) -> np.ndarray:
        if self.kind == "Omega":
            return omega(self.n)
        if self.kind == "LQ":
            return mat_LQ(self.data)
        if self.kind == "TR":
            return mat_TR(self.data)
        if self.kind == "Gk":
            return mat_Gk(self.n, self.t)
        raise SymplecticError(f"unknown factor kind {self.kind}")

    def is_identity(self) -> bool:
        if self.kind == "LQ":
            return bool(np.array_equal(self.data, np.eye(self.n, dtype=np.uint8)))
        if self.kind == "TR":
            return not self.data.any()
        if self.kind == "Gk":
            return self.t == 0
        return False


def decompose(F) -> list[ElementaryFactor]:
    """Factor ``F = L_{Q1} Omega T_{R1} G_k T_{R2} L_{Q2}`` with ``k = rank(A)``."""
    F = as_f2(F)
    if not is_symplectic(F):
        raise SymplecticError("matrix is not symplectic")
    n = F.shape[0] // 2
    A, B = F[:n, :n], F[:n, n:]
    red = f2core.rref(A)
    k = red.rank
    Mr = red.T
    nonpiv = [c for c in range(n) if c not in red.pivots]
    N = np.zeros((n, n), dtype=np.uint8)
    N[:k] = red.R[:k]
    for r, c in enumerate(nonpiv):
        N[k + r, c] = 1
    Mc = f2core.inverse(N)
    Bp = matmul(matmul(Mr, B), N.T)  # Mc^{-T} = N^T
    B11, B12, B22 = Bp[:k, :k], Bp[:k, k:], Bp[k:, k:]
    B22inv = f2core.inverse(B22) if n > k else np.zeros((0, 0), np.uint8)
    M2 = np.eye(n, dtype=np.uint8)
    if n > k:
        M2[:k, k:] = matmul(B12, B22inv)
        M2[k:, k:] = B22inv
    M = matmul(M2, Mr)
    R2 = np.zeros((n, n), dtype=np.uint8)
    R2[:k, :k] = B11
    Fp = matmul(matmul(matmul(matmul(mat_LQ(M), F), mat_LQ(Mc)), mat_TR(R2)), matmul(mat_Gk(n, k), omega(n)))
    C = Fp[n:, :n]
    Q1 = f2core.inverse(M)
    return [
        ElementaryFactor("LQ", n, Q1),
        ElementaryFactor("Omega", n),
        ElementaryFactor("TR", n, C),
        ElementaryFactor("Gk", n, t=k),
        ElementaryFactor("TR", n, R2),
        ElementaryFactor("LQ", n, N),
    ]


def recompose(factors: Sequence[ElementaryFactor]) -> np.ndarray:
    n = factors[0].n
    out = np.eye(2 * n, dtype=np.uint8)
    for f in factors:
        out = matmul(out, f.matrix())
    return out


# ---------------------------------------------------------------------------
# Circuits


_ONE_QUBIT = {"H", "P", "Pdg", "X", "Y", "Z", "T", "Tdg"}
_TWO_QUBIT = {"CX", "CZ", "SWAP"}


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    params: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        d = {"gate": self.name, "qubits": list(self.qubits)}
        if self.params is not None:
            d["perm"] = list(self.params)
        return d

    def __str__(self) -> str:
        labels = [q + 1 for q in (self.params if self.name == "PERM" else self.qubits)]
        if self.name != "PERM" and all(q < 10 for q in labels):
            return self.name + "".join(str(q) for q in labels)
        return self.name + "(" + ",".join(str(q) for q in labels) + ")"


@dataclass
class Circuit:
    """Ordered gate list on ``n`` qubits; list order is application order.

    Qubits are 0-based in code and JSON, 1-based in the text rendering.
    """

    n: int
    gates: list[Gate] = field(default_factory=list)

    def append(self, name: str, *qubits: int, params=None) -> "Circuit":
        self.gates.append(Gate(name, tuple(int(q) for q in qubits), None if params is None else tuple(params)))
        return self

    def extend(self, other: "Circuit") -> "Circuit":
        self.gates.extend(other.gates)
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def as_tuples(self) -> list[tuple[str, tuple[int, ...]]]:
        return [(g.name, g.qubits) for g in self.gates]

    def two_qubit_count(self) -> int:
        return sum(1 for g in self.gates if g.name in _TWO_QUBIT)

    def depth(self) -> int:
        """Number of layers when each gate waits for all of its qubits.

        PERM gates are treated as free wire relabelling and do not add depth.
        """
        level = [0] * self.n
        for g in self.gates:
            if g.name == "PERM":
                perm = g.params
                new = [0] * self.n
                for src, dst in enumerate(perm):
                    new[dst] = level[src]
                level = new
                continue
            d = max(level[q] for q in g.qubits) + 1
            for q in g.qubits:
                level[q] = d
        return max(level, default=0)

    def cost(self) -> tuple[int, int]:
        return (self.two_qubit_count(), self.depth())

    def symplectic(self) -> np.ndarray:
        F = np.eye(2 * self.n, dtype=np.uint8)
        for g in self.gates:
            F = matmul(F, gate_symplectic(g, self.n))
        return F

    def to_json(self) -> list[dict]:
        return [g.to_json() for g in self.gates]

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data, n: int) -> "Circuit":
        c = cls(n)
        for item in data:
            name = item["gate"]
            qubits = [int(q) for q in item.get("qubits", [])]
            params = item.get("perm")
            if any(not 0 <= q < n for q in qubits):
                raise ValueError(f"gate {name} uses a qubit outside 0..{n - 1}")
            if name not in _ONE_QUBIT | _TWO_QUBIT | {"PERM"}:
                raise ValueError(f"unknown gate {name!r}")
            c.append(name, *qubits, params=params)
        return c

    def __str__(self) -> str:
        return " ".join(str(g) for g in self.gates) if self.gates else "(identity)"

    def simplified(self) -> "Circuit":
        """Cancel adjacent self-inverse pairs acting on the same qubits."""
        out: list[Gate] = []
        last: dict[int, int] = {}
        selfinv = {"H", "X", "Y", "Z", "CX", "CZ", "SWAP"}
        for g in self.gates:
            if g.name in selfinv and g.qubits:
                idxs = {last.get(q, -1) for q in g.qubits}
                if len(idxs) == 1:
                    j = idxs.pop()
                    if j >= 0 and out[j] is not None and out[j].name == g.name and _same_support(out[j], g):
                        out[j] = None
                        for q in g.qubits:
                            last[q] = _previous_touch(out, q, j)
                        continue
            out.append(g)
            touched = range(self.n) if g.name == "PERM" else g.qubits
            for q in touched:
                last[q] = len(out) - 1
        return Circuit(self.n, [g for g in out if g is not None])


def _same_support(a: Gate, b: Gate) -> bool:
    if a.name in ("CZ", "SWAP"):
        return set(a.qubits) == set(b.qubits)
    return a.qubits == b.qubits


def _previous_touch(out, q, before):
    for j in range(before - 1, -1, -1):
        g = out[j]
        if g is not None and (g.name == "PERM" or q in g.qubits):
            return j
    return -1


def gate_symplectic(g: Gate, n: int) -> np.ndarray:
    I = np.eye(2 * n, dtype=np.uint8)
    name = g.name
    if name in ("X", "Y", "Z"):
        return I
    if name == "H":
        q = g.qubits[0]
        F = I.copy()
        F[[q, n + q]] = F[[n + q, q]]
        return F
    if name in ("P", "Pdg"):
        R = np.zeros((n, n), dtype=np.uint8)
        R[g.qubits[0], g.qubits[0]] = 1
        return mat_TR(R)
    if name == "CZ":
        a, b = g.qubits
        R = np.zeros((n, n), dtype=np.uint8)
        R[a, b] = R[b, a] = 1
        return mat_TR(R)
    if name == "CX":
        c, t = g.qubits
        Q = np.eye(n, dtype=np.uint8)
        Q[c, t] = 1
        return mat_LQ(Q)
    if name == "SWAP":
        a, b = g.qubits
        perm = list(range(n))
        perm[a], perm[b] = b, a
        return mat_LQ(f2core.perm_matrix(perm))
    if name == "PERM":
        return mat_LQ(f2core.perm_matrix(g.params))
    raise SymplecticError(f"gate {name} is not Clifford")


# ---------------------------------------------------------------------------
# Exact conjugation of Pauli operators by Clifford circuits


def _local_images(name: str) -> list[PauliOperator]:
    """Images of X_1..X_m, Z_1..Z_m under the local gate (m = 1 or 2)."""
    def X(q, m=1):
        return single_qubit(m, q, "X")

    def Z(q, m=1):
        return single_qubit(m, q, "Z")

    if name == "H":
        return [Z(0), X(0)]
    if name == "P":
        return [single_qubit(1, 0, "Y"), Z(0)]
    if name == "Pdg":
        return [-single_qubit(1, 0, "Y"), Z(0)]
    if name == "X":
        return [X(0), -Z(0)]
    if name == "Z":
        return [-X(0), Z(0)]
    if name == "Y":
        return [-X(0), -Z(0)]
    x0, x1, z0, z1 = X(0, 2), X(1, 2), Z(0, 2), Z(1, 2)
    if name == "CX":
        return [x0 * x1, x1, z0, z0 * z1]
    if name == "CZ":
        return [x0 * z1, z0 * x1, z0, z1]
    if name == "SWAP":
        return [x1, x0, z1, z0]
    raise SymplecticError(f"gate {name} is not a supported Clifford gate")


_TABLES: dict[str, dict[tuple, PauliOperator]] = {}


def _local_table(name: str) -> dict[tuple, PauliOperator]:
    if name in _TABLES:
        return _TABLES[name]
    imgs = _local_images(name)
    m = len(imgs) // 2
    table = {}
    for code in range(1 << (2 * m)):
        bits = [(code >> t) & 1 for t in range(2 * m)]
        a, b = bits[:m], bits[m:]
        out = PauliOperator.identity(m).scale(int(np.dot(a, b)))
        for j in range(m):
            if a[j]:
                out = out * imgs[j]
        for j in range(m):
            if b[j]:
                out = out * imgs[m + j]
        table[tuple(bits)] = out
    _TABLES[name] = table
    return table


def conjugate_by_gate(p: PauliOperator, g: Gate) -> PauliOperator:
    """``U p U^dagger`` for the Clifford gate ``g``, with exact phase."""
    if g.name == "PERM":
        dest = np.asarray(g.params)
        a = np.zeros_like(p.a)
        b = np.zeros_like(p.b)
        a[dest] = p.a
        b[dest] = p.b
        return PauliOperator(a, b, p.kappa)
    table = _local_table(g.name)
    qs = list(g.qubits)
    key = tuple(int(p.a[q]) for q in qs) + tuple(int(p.b[q]) for q in qs)
    loc = table[key]
    a = p.a.copy()
    b = p.b.copy()
    a[qs] = loc.a
    b[qs] = loc.b
    # E factorises over qubits, so only the local phase changes.
    return PauliOperator(a, b, p.kappa + loc.kappa)


def conjugate_by_circuit(p: PauliOperator, circuit: "Circuit") -> PauliOperator:
    for g in circuit.gates:
        p = conjugate_by_gate(p, g)
    return p


def factor_to_circuit(f: ElementaryFactor, n: int | None = None) -> Circuit:
    n = f.n if n is None else n
    c = Circuit(n)
    if f.kind == "Omega":
        for q in range(n):
            c.append("H", q)
    elif f.kind == "Gk":
        for q in range(f.t):
            c.append("H", q)
    elif f.kind == "TR":
        R = as_f2(f.data)
        if not np.array_equal(R, R.T):
            raise SymplecticError("R must be symmetric")
        for i in range(n):
            if R[i, i]:
                c.append("P", i)
            for j in range(i + 1, n):
                if R[i, j]:
                    c.append("CZ", i, j)
    elif f.kind == "LQ":
        c.extend(_lq_circuit(as_f2(f.data)))
    else:
        raise SymplecticError(f"unknown factor kind {f.kind}")
    return c


def _lq_circuit(Q: np.ndarray) -> Circuit:
    # P Q = L U, so Q = P^T L U and L_Q = L_{P^T} L_L L_U.
    n = Q.shape[0]
    perm, L, U = f2core.lu_decompose(Q)
    c = Circuit(n)
    dest = [0] * n
    for i, p in enumerate(perm):
        dest[p] = i
    if dest != list(range(n)):
        c.append("PERM", *[q for q in range(n) if dest[q] != q], params=dest)
    # L = C_1 C_2 ... C_n with C_i = I + (strict lower column i) e_i^T.
    for i in range(n):
        for j in range(i + 1, n):
            if L[j, i]:
                c.append("CX", j, i)
    # U = C'_n ... C'_1 with C'_i = I + (strict upper column i) e_i^T.
    for i in range(n - 1, -1, -1):
        for j in range(i):
            if U[j, i]:
                c.append("CX", j, i)
    return c


def circuit_from_factors(factors: Sequence[ElementaryFactor], simplify: bool = True) -> Circuit:
    n = factors[0].n
    c = Circuit(n)
    for f in factors:
        if f.is_identity():
            continue
        c.extend(factor_to_circuit(f, n))
    return c.simplified() if simplify else c


def circuit_for(F) -> tuple[list[ElementaryFactor], Circuit]:
    factors = decompose(F)
    return factors, circuit_from_factors(factors)


def random_symplectic(n: int, rng: np.random.Generator, steps: int | None = None) -> np.ndarray:
    """Product of random transvections (not uniform, but covers the group)."""
    steps = 4 * n + 2 if steps is None else steps
    F = np.eye(2 * n, dtype=np.uint8)
    for _ in range(steps):
        h = rng.integers(0, 2, size=2 * n, dtype=np.uint8)
        F = matmul(F, transvection(h))
    return F


__all__ = [
    "Circuit",
    "CircuitParseError",
    "ElementaryFactor",
    "F2Error",
    "Gate",
    "SymplecticError",
    "brute_force_group",
    "circuit_for",
    "circuit_from_factors",
    "decompose",
    "enumerate_symplectic",
    "factor_to_circuit",
    "find_symplectic",
    "gate_symplectic",
    "is_symplectic",
    "map_vector",
    "omega",
    "parse_circuit",
    "random_symplectic",
    "recompose",
    "symplectic_gram_schmidt",
    "transvection",
]


class CircuitParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


_GATE_TOKEN = re.compile(r"(PERM|Pdg|Tdg|SWAP|CX|CZ|H|P|X|Y|Z|T)(\([0-9,\s]+\)|[0-9]+)")


def parse_circuit(text: str, n: int) -> Circuit:
    """Parse a circuit as JSON (0-based) or as text such as ``P2 CZ26 P6``.

    In the text form qubits are 1-based. Single digits may be run together
    (``CZ26``); larger labels use parentheses (``CZ(10,11)``). A permutation
    is written ``PERM(d1,...,dn)`` with 1-based destinations.
    """
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            return Circuit.from_json(json.loads(stripped), n)
        except (ValueError, KeyError, TypeError) as exc:
            raise CircuitParseError(f"bad JSON circuit: {exc}", 1) from None
    c = Circuit(n)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _GATE_TOKEN.match(line, pos)
            if not m:
                raise CircuitParseError(f"cannot parse gate at {line[pos:pos + 8]!r}", lineno, pos + 1)
            name, arg = m.group(1), m.group(2)
            if arg.startswith("("):
                labels = [int(x) for x in arg[1:-1].replace(" ", "").split(",") if x]
            else:
                labels = [int(ch) for ch in arg]
            qs = [q - 1 for q in labels]
            if any(not 0 <= q < n for q in qs):
                raise CircuitParseError(f"qubit label outside 1..{n}", lineno, pos + 1)
            want = n if name == "PERM" else (2 if name in _TWO_QUBIT else 1)
            if len(qs) != want:
                raise CircuitParseError(f"{name} expects {want} qubit labels, got {len(qs)}", lineno, pos + 1)
            if name == "PERM":
                if sorted(qs) != list(range(n)):
                    raise CircuitParseError("PERM needs a permutation of all qubits", lineno, pos + 1)
                c.append("PERM", params=qs)
            else:
                if len(set(qs)) != len(qs):
                    raise CircuitParseError(f"{name} repeats a qubit", lineno, pos + 1)
                c.append(name, *qs)
            pos = m.end()
    return c

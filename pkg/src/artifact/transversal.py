"""Transversal T, T/T-dagger patterns and finer transversal Z-rotations.

Conventions
-----------
* ``T = diag(1, exp(i pi/4))`` and a pattern ``t`` in ``Z_8^n`` applies
  ``T^{t_j}`` to qubit ``j``.
* The level-``ell`` rotation is ``diag(1, exp(2 pi i / 2^ell))`` on every
  qubit, so ``ell = 3`` is transversal T.
* Stabilizer elements are grouped by their X-part ``a``. Everything the
  checks need about a group is the set ``Z_a`` of Z-type stabilizers inside
  the support of ``a`` (or of ``a * t'`` for a pattern) together with their
  signs.

Two independent routes decide each group:

1. The structural route: even support, dual containment of the punctured
   space ``Z~_a`` and the sign prescription on a self-dual subcode ``A_a``.
2. The coset-weight route: with ``eps_z = (-1)^{c.z}`` on ``Z~_a`` the
   level-``ell`` conditions hold exactly when ``2^ell`` divides
   ``m - 2 w(u)`` for every ``u`` in ``c + (Z~_a)^perp`` (``m = |supp|``).
   This is the Walsh-Hadamard transform of the trigonometric sums.

Whenever both routes run they must agree; a disagreement raises
:class:`ConsistencyError`.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import f2core
from .pauli import PauliOperator, PauliSum, Root8Scalar, product
from .stabilizer import CodeError, StabilizerCode

MAX_GROUP_RANK = 20
MAX_ENUM_DIM = 24
CROSS_CHECK_DIM = 16
FLOAT_MAX_SUPPORT = 20
MAX_CONJ_SUPPORT = 20


class TransversalError(ValueError):
    """Input outside what the checks support (sizes, patterns, levels)."""


class ConsistencyError(RuntimeError):
    """Two exact decision routes disagreed; this indicates a bug."""


# ---------------------------------------------------------------------------
# Patterns
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TransversalPattern:
    """Per-qubit powers of T, entries in ``0..7``."""

    t: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=np.int64).reshape(-1)
        if t.size and (t.min() < 0 or t.max() > 7):
            raise TransversalError("pattern entries must lie in 0..7")
        object.__setattr__(self, "t", t)

    @classmethod
    def parse(cls, text: str) -> "TransversalPattern":
        digits = [ch for ch in text if not ch.isspace() and ch != ","]
        for col, ch in enumerate(digits, 1):
            if ch not in "01234567":
                raise TransversalError(f"column {col}: pattern digit {ch!r} not in 0..7")
        if not digits:
            raise TransversalError("empty pattern")
        return cls(np.array([int(ch) for ch in digits]))

    @classmethod
    def all_ones(cls, n: int) -> "TransversalPattern":
        return cls(np.ones(n, dtype=np.int64))

    @classmethod
    def from_parts(cls, t1, t7) -> "TransversalPattern":
        """``t = t1 + 7 t7`` with disjoint binary supports."""
        t1 = f2core.as_f2_vec(t1).astype(np.int64)
        t7 = f2core.as_f2_vec(t7).astype(np.int64)
        if t1.size != t7.size:
            raise TransversalError("t1 and t7 have different lengths")
        if np.any(t1 & t7):
            raise TransversalError("t1 and t7 must have disjoint supports")
        return cls(t1 + 7 * t7)

    @property
    def n(self) -> int:
        return int(self.t.size)

    def part(self, j: int) -> np.ndarray:
        return (self.t == j).astype(np.uint8)

    @property
    def is_restricted(self) -> bool:
        return bool(np.all(np.isin(self.t, (0, 1, 7))))

    @property
    def t_prime(self) -> np.ndarray:
        return self.part(1) | self.part(7)

    def tilde(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(t1 + t5, t2 + t6, t3 + t7)``."""
        p = self.part
        return p(1) | p(5), p(2) | p(6), p(3) | p(7)

    def __str__(self) -> str:
        return "".join(str(int(x)) for x in self.t)


# ---------------------------------------------------------------------------
# Conjugation of Paulis
# ---------------------------------------------------------------------------


def _subsets(support: np.ndarray, n: int):
    w = support.size
    if w > MAX_CONJ_SUPPORT:
        raise TransversalError(f"support {w} too large to expand (limit {MAX_CONJ_SUPPORT})")
    for mask in range(1 << w):
        y = np.zeros(n, dtype=np.uint8)
        if mask:
            sel = [support[j] for j in range(w) if mask >> j & 1]
            y[sel] = 1
        yield y


def conj_transversal_T(P: PauliOperator, n: int | None = None) -> PauliSum:
    """``T^{(x)n} P T^{dagger (x)n}`` as an exact Pauli sum.

    For ``P = i^kappa E(a, b)`` the image is
    ``i^kappa 2^{-w(a)/2} sum_{y <= a} (-1)^{b.y} E(a, b + y)``.
    """
    n = P.n if n is None else n
    if n != P.n:
        raise TransversalError("register size does not match the Pauli")
    a, b = P.a, P.b
    supp = np.nonzero(a)[0]
    half = int(supp.size)
    out = PauliSum(n)
    for y in _subsets(supp, n):
        s = int(b.astype(np.int64) @ y) % 2
        out.add(Root8Scalar(4 * s + 2 * P.kappa, half), PauliOperator(a, b ^ y))
    return out


def conj_pattern(P: PauliOperator, t: TransversalPattern) -> PauliSum:
    """Image of ``P`` under ``T^{t_1} (x) ... (x) T^{t_n}`` for arbitrary powers.

    With ``t1~ = t1 + t5``, ``t2~ = t2 + t6`` and ``t3~ = t3 + t7`` the image of
    ``E(a, b)`` is ``(-1)^{a.(t3+t4+t5+t6)} 2^{-w(a*(t1~+t3~))/2}`` times the
    sum of ``(-1)^{(b + t3~).z} E(a, b + z)`` over ``a*t2~ <= z <= a*(t1~+t2~+t3~)``.
    """
    if t.n != P.n:
        raise TransversalError("pattern length does not match the Pauli")
    n = P.n
    a, b = P.a, P.b
    t1, t2, t3 = t.tilde()
    sign_vec = t.part(3) | t.part(4) | t.part(5) | t.part(6)
    pre = int(a.astype(np.int64) @ sign_vec) % 2
    fixed = a & t2
    free = np.nonzero(a & (t1 | t3))[0]
    half = int(free.size)
    bt = (b ^ t3).astype(np.int64)
    out = PauliSum(n)
    for y in _subsets(free, n):
        z = fixed ^ y
        s = (int(bt @ z) + pre) % 2
        out.add(Root8Scalar(4 * s + 2 * P.kappa, half), PauliOperator(a, b ^ z))
    return out


# ---------------------------------------------------------------------------
# Signed Z-type subgroups
# ---------------------------------------------------------------------------
#
# A signed space is a uint8 matrix whose rows are [z | e]: a vector z and
# the bit e with (-1)^e the sign of E(0, z) in the stabilizer. Z-type
# Paulis multiply without phases, so XOR of augmented rows stays valid.


def _signed_rref(aug: np.ndarray) -> np.ndarray:
    """Row-reduce ``[z | e]`` rows on the vector columns, dropping zero rows."""
    aug = f2core.as_f2(aug)
    m = aug.shape[1] - 1
    if aug.shape[0] == 0:
        return aug
    res = f2core.rref(aug, columns=list(range(m)))
    R = res.R
    tail = R[res.rank:]
    if tail.size and tail[:, m].any():
        raise CodeError("stabilizer group contains -I")
    return R[: res.rank].copy()


def _pivots(rows: np.ndarray) -> list[int]:
    return [int(np.nonzero(r[:-1])[0][0]) for r in rows]


def _reduce(rows: np.ndarray, pivots: list[int], v_aug: np.ndarray) -> np.ndarray:
    out = v_aug.copy()
    for r, p in zip(rows, pivots):
        if out[p]:
            out ^= r
    return out


def z_subgroup(code: StabilizerCode) -> np.ndarray:
    """Signed RREF basis ``[z | e]`` of the pure Z-type stabilizers."""
    n = code.n
    S = code.stabilizer_matrix()
    if S.shape[0] == 0:
        return np.zeros((0, n + 1), dtype=np.uint8)
    A = S[:, :n]
    lam = f2core.nullspace(A.T) if A.any() else f2core.identity(S.shape[0])
    rows = []
    for coeffs in lam:
        p = product([g for g, c in zip(code.generators, coeffs) if c], n=n)
        if p.a.any() or p.kappa % 2:
            raise CodeError("internal: Z-type product has X part or imaginary phase")
        rows.append(np.concatenate([p.b, [p.kappa // 2]]).astype(np.uint8))
    if not rows:
        return np.zeros((0, n + 1), dtype=np.uint8)
    return _signed_rref(np.array(rows, dtype=np.uint8))


def x_parts(code: StabilizerCode) -> np.ndarray:
    """RREF basis of the X-parts of all stabilizer elements."""
    n = code.n
    S = code.stabilizer_matrix()
    if S.shape[0] == 0:
        return np.zeros((0, n), dtype=np.uint8)
    return f2core.row_basis(S[:, :n]) if S[:, :n].any() else np.zeros((0, n), dtype=np.uint8)


def _restricted(zspace: np.ndarray, support: np.ndarray, n: int) -> np.ndarray:
    """Signed basis of ``{z in Z_S : z <= support}``, punctured to ``support``."""
    m = support.size
    if zspace.shape[0] == 0:
        return np.zeros((0, m + 1), dtype=np.uint8)
    inside = np.zeros(n, dtype=bool)
    inside[support] = True
    outside = np.nonzero(~inside)[0]
    if outside.size:
        lam = f2core.nullspace(zspace[:, outside].T)
    else:
        lam = f2core.identity(zspace.shape[0])
    if lam.shape[0] == 0:
        return np.zeros((0, m + 1), dtype=np.uint8)
    full = f2core.matmul(lam, zspace)
    cols = np.concatenate([support, [n]])
    return _signed_rref(full[:, cols])


def _target_bits(v: np.ndarray, t7: np.ndarray | None) -> int:
    """Bit ``h`` with ``(-1)^h = i^{w(v)} (-1)^{t7.v}`` for even-weight ``v``."""
    w = int(v.sum())
    h = (w // 2) % 2
    if t7 is not None:
        h ^= int(v.astype(np.int64) @ t7) % 2
    return h


def _defect(v_aug: np.ndarray, t7: np.ndarray | None) -> int:
    """1 when the sign of ``v`` differs from the prescription."""
    return int(v_aug[-1]) ^ _target_bits(v_aug[:-1], t7)


# ---------------------------------------------------------------------------
# Packed coset enumeration
# ---------------------------------------------------------------------------


def _pack(rows: np.ndarray) -> np.ndarray:
    """Pack rows of bits into ``(r, words)`` uint64 arrays."""
    rows = f2core.as_f2(rows) if rows.size else rows.reshape(rows.shape[0], -1)
    r, m = rows.shape
    words = max(1, (m + 63) // 64)
    out = np.zeros((r, words), dtype=np.uint64)
    for w in range(words):
        chunk = rows[:, 64 * w: 64 * (w + 1)]
        if chunk.shape[1]:
            out[:, w] = f2core.pack_rows(chunk) if r else 0
    return out


def coset_weights(offset, basis) -> np.ndarray:
    """Hamming weights of every vector in ``offset + rowspace(basis)``.

    ``basis`` must have independent rows (at most :data:`MAX_ENUM_DIM`).
    """
    basis = np.asarray(basis, dtype=np.uint8)
    offset = f2core.as_f2_vec(offset)
    d = basis.shape[0]
    if d > MAX_ENUM_DIM:
        raise TransversalError(f"refusing to enumerate 2^{d} coset vectors")
    B = _pack(basis) if d else np.zeros((0, _pack(offset[None, :]).shape[1]), np.uint64)
    cur = _pack(offset[None, :])
    for j in range(d):
        cur = np.concatenate([cur, cur ^ B[j]], axis=0)
    return np.bitwise_count(cur).sum(axis=1).astype(np.int64)


# ---------------------------------------------------------------------------
# Per-group analysis
# ---------------------------------------------------------------------------


@dataclass
class GroupReport:
    """Checks for the stabilizer elements sharing one X-part ``a``."""

    a: np.ndarray
    support: np.ndarray
    even_weight: bool
    z_dim: int
    dual_dim: int
    dual_contained: bool
    necessary_signs_ok: bool | None
    selfdual_basis: np.ndarray | None
    sufficient_signs_ok: bool | None
    violations: list = field(default_factory=list)
    coset_weight_ok: bool | None = None

    @property
    def m(self) -> int:
        return int(self.support.size)

    @property
    def passed(self) -> bool:
        if self.m == 0:
            return True
        return bool(self.even_weight and self.dual_contained and self.sufficient_signs_ok)

    def to_json(self) -> dict:
        bits = lambda v: "".join(str(int(x)) for x in v)  # noqa: E731
        return {
            "a": bits(self.a),
            "support_weight": self.m,
            "even_weight": self.even_weight,
            "z_dim": self.z_dim,
            "dual_dim": self.dual_dim,
            "dual_contained": self.dual_contained,
            "necessary_signs_ok": self.necessary_signs_ok,
            "sufficient_signs_ok": self.sufficient_signs_ok,
            "selfdual_basis": None if self.selfdual_basis is None else [bits(r) for r in self.selfdual_basis],
            "violations": [bits(v) for v in self.violations],
            "coset_weight_ok": self.coset_weight_ok,
            "passed": self.passed,
        }


def _complement(sub: np.ndarray, sup: np.ndarray) -> list[np.ndarray]:
    """Signed representatives of ``rowspace(sup) / rowspace(sub)``, in ``sup`` order."""
    span = _signed_rref(sub) if sub.shape[0] else sub
    reps = []
    for row in sup:
        red = _reduce(span, _pivots(span), row) if span.shape[0] else row.copy()
        if red[:-1].any():
            reps.append(red)
            span = _signed_rref(np.vstack([span, red[None, :]]))
    return reps


def _pick_singular(Q: list[np.ndarray], t7) -> tuple[int, ...]:
    """Combination of ``Q`` with the right sign, searching singles, pairs, triples.

    When the restricted sign form has a singular vector at all, one appears
    among these combinations. Falls back to ``(0,)`` otherwise.
    """
    d = len(Q)
    for size in (1, 2, 3):
        for combo in itertools.combinations(range(d), size):
            v = Q[combo[0]].copy()
            for j in combo[1:]:
                v ^= Q[j]
            if _defect(v, t7) == 0:
                return combo
    return (0,)


def _selfdual_extension(dual_aug: list[np.ndarray], Q: list[np.ndarray], m: int, t7):
    """Greedy self-orthogonal enlargement of ``(Z~)^perp`` inside ``Z~``.

    ``Q`` spans ``Z~`` modulo the dual. Each step adds a sign-compatible
    vector when one exists and restricts the remaining representatives to
    its orthogonal complement.
    """
    A = [r.copy() for r in dual_aug]
    Q = [q.copy() for q in Q]
    while len(A) < m // 2:
        if not Q:
            raise ConsistencyError("self-dual enlargement ran out of candidates")
        combo = _pick_singular(Q, t7)
        v = Q[combo[0]].copy()
        for j in combo[1:]:
            v ^= Q[j]
        A.append(v)
        rest = [q for i, q in enumerate(Q) if i != combo[0]]
        ip = [int(q[:-1].astype(np.int64) @ v[:-1]) % 2 for q in rest]
        if 1 not in ip:
            raise ConsistencyError("degenerate quotient during self-dual enlargement")
        p = ip.index(1)
        pivot = rest[p]
        Q = [q ^ pivot if ipq else q for i, (q, ipq) in enumerate(zip(rest, ip)) if i != p]
    return A


def _character_offset(Zt: np.ndarray, m: int) -> np.ndarray:
    """A vector ``c`` with ``(-1)^{c.z}`` equal to the sign of each ``z``."""
    if Zt.shape[0] == 0:
        return np.zeros(m, dtype=np.uint8)
    sol = f2core.solve_affine(Zt[:, :-1], Zt[:, -1])
    if sol.particular is None:
        raise ConsistencyError("Z-type signs are not a character")
    return sol.particular


def _analyse_group(a, zspace, n, t_prime, t7, cross_check: bool = True) -> GroupReport:
    a = f2core.as_f2_vec(a)
    s = a & t_prime
    support = np.nonzero(s)[0]
    m = int(support.size)
    if m == 0:
        return GroupReport(a, support, True, 0, 0, True, True, np.zeros((0, n), np.uint8), True)
    even = m % 2 == 0
    t7p = None if t7 is None else t7[support].astype(np.int64)
    Zt = _restricted(zspace, support, n)
    dz = Zt.shape[0]
    dual = f2core.nullspace(Zt[:, :-1]) if dz else f2core.identity(m)
    dual_dim = dual.shape[0]
    piv = _pivots(Zt) if dz else []
    dual_aug = []
    contained = True
    for u in dual:
        red = _reduce(Zt, piv, np.concatenate([u, [0]]).astype(np.uint8))
        if red[:-1].any():
            contained = False
            break
        # red = [0 | e(u)] after eliminating u; its sign bit is e(u).
        dual_aug.append(np.concatenate([u, [red[-1]]]).astype(np.uint8))
    necessary = None
    A_full = None
    sufficient = None
    violations = []
    if contained:
        necessary = all(_defect(u, t7p) == 0 for u in dual_aug)
        if even:
            Q = _complement(np.array(dual_aug) if dual_aug else np.zeros((0, m + 1), np.uint8), Zt)
            A = _selfdual_extension(dual_aug, Q, m, t7p)
            A_full = np.zeros((len(A), n), dtype=np.uint8)
            for i, row in enumerate(A):
                A_full[i, support] = row[:-1]
                if _defect(row, t7p):
                    violations.append(A_full[i].copy())
            sufficient = not violations
    report = GroupReport(a, support, even, dz, dual_dim, contained, necessary, A_full, sufficient, violations)
    if cross_check and dual_dim <= CROSS_CHECK_DIM:
        c = _character_offset(Zt, m)
        if t7p is not None:
            c = c ^ t7p.astype(np.uint8)
        w = coset_weights(c, dual)
        report.coset_weight_ok = bool(np.all((m - 2 * w) % 8 == 0))
        if report.coset_weight_ok != report.passed:
            raise ConsistencyError(
                f"structural and coset-weight verdicts differ for X-part {a.tolist()}"
            )
        if report.passed and not necessary:
            raise ConsistencyError("necessary sign condition failed on a passing group")
    return report


def _group_vectors(code: StabilizerCode) -> np.ndarray:
    B = x_parts(code)
    if B.shape[0] > MAX_GROUP_RANK:
        raise TransversalError(f"2^{B.shape[0]} distinct X-parts exceed the enumeration limit")
    if B.shape[0] == 0:
        return np.zeros((0, code.n), dtype=np.uint8)
    return f2core.span(B)[1:]


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


@dataclass
class TransversalVerdict:
    """Outcome of a transversal T or T-pattern check."""

    supported: bool
    pattern: str
    groups: list[GroupReport]
    pauli_correction: PauliOperator | None
    notes: list[str] = field(default_factory=list)

    @property
    def necessary_signs_ok(self) -> bool:
        return all(g.necessary_signs_ok is not False for g in self.groups)

    def failing_groups(self) -> list[GroupReport]:
        return [g for g in self.groups if not g.passed]

    def to_json(self) -> dict:
        return {
            "supported": self.supported,
            "pattern": self.pattern,
            "necessary_signs_ok": self.necessary_signs_ok,
            "pauli_correction": None if self.pauli_correction is None else str(self.pauli_correction),
            "groups": [g.to_json() for g in self.groups],
            "notes": list(self.notes),
        }


def flip_z_signs(code: StabilizerCode, x) -> StabilizerCode:
    """Conjugate every generator by ``E(x, 0)``."""
    x = f2core.as_f2_vec(x)
    gens = []
    for g in code.generators:
        flip = int(x.astype(np.int64) @ g.b.astype(np.int64)) % 2
        gens.append(PauliOperator(g.a, g.b, g.kappa + 2 * flip))
    return StabilizerCode(code.n, gens, list(code.logical_x), list(code.logical_z), css=code.css, name=code.name)


def _run_groups(code: StabilizerCode, t_prime, t7, cross_check: bool) -> list[GroupReport]:
    zspace = z_subgroup(code)
    return [_analyse_group(a, zspace, code.n, t_prime, t7, cross_check) for a in _group_vectors(code)]


def check_pattern(code: StabilizerCode, t: TransversalPattern, cross_check: bool = True) -> TransversalVerdict:
    """Whether ``T^{(x)t}`` with ``t`` in ``{0,1,7}^n`` preserves the code space.

    Each group needs an even ``|a * t'|``, a punctured Z-space that contains
    its dual, and Z-signs ``i^{w(z) + 2 t7.z}`` on a self-dual subcode. When
    only the signs fail, ``pauli_correction`` holds the X-type Pauli ``E(x, 0)``
    such that ``E(x,0) T^{(x)t} E(x,0)`` preserves the code.
    """
    if t.n != code.n:
        raise TransversalError(f"pattern has length {t.n} but the code has {code.n} qubits")
    if not t.is_restricted:
        raise TransversalError("support checks are defined only for patterns over {0, 1, 7}")
    t_prime = t.t_prime
    t7 = t.part(7)
    t7_arg = t7 if t7.any() else None
    groups = _run_groups(code, t_prime, t7_arg, cross_check)
    supported = all(g.passed for g in groups)
    notes = []
    correction = None
    if supported:
        correction = PauliOperator.identity(code.n)
    elif all(g.even_weight and g.dual_contained for g in groups):
        rows, rhs = [], []
        for g in groups:
            if g.m == 0:
                continue
            for v in g.selfdual_basis:
                rows.append(v)
                rhs.append(int(any(np.array_equal(v, w) for w in g.violations)))
        x = f2core.lex_min_solution(np.array(rows), np.array(rhs)) if rows else None
        if x is not None:
            fixed = flip_z_signs(code, x)
            again = _run_groups(fixed, t_prime, t7_arg, cross_check)
            if all(g.passed for g in again):
                correction = PauliOperator(x, np.zeros(code.n, dtype=np.uint8))
                notes.append("code space preserved after conjugating by the X-type correction")
        if correction is None:
            notes.append("no X-type correction found for the chosen self-dual subcodes")
    return TransversalVerdict(supported, str(t), groups, correction, notes)


def check_transversal_T(code: StabilizerCode, cross_check: bool = True) -> TransversalVerdict:
    """Whether transversal T preserves the code space (see :func:`check_pattern`)."""
    return check_pattern(code, TransversalPattern.all_ones(code.n), cross_check)


# ---------------------------------------------------------------------------
# Finer Z-rotations
# ---------------------------------------------------------------------------


@dataclass
class ZRotationGroup:
    a: np.ndarray
    m: int
    first_sum: complex | None
    sec_power: float
    max_cancel: float | None
    float_ok: bool | None
    exact_ok: bool
    method: str

    @property
    def passed(self) -> bool:
        return self.exact_ok

    def to_json(self) -> dict:
        return {
            "a": "".join(str(int(x)) for x in self.a),
            "support_weight": self.m,
            "first_sum": None if self.first_sum is None else [self.first_sum.real, self.first_sum.imag],
            "sec_power": self.sec_power,
            "max_cancel": self.max_cancel,
            "float_ok": self.float_ok,
            "exact_ok": self.exact_ok,
            "method": self.method,
        }


@dataclass
class ZRotationVerdict:
    supported: bool
    ell: int
    groups: list[ZRotationGroup]

    def to_json(self) -> dict:
        return {"supported": self.supported, "ell": self.ell, "groups": [g.to_json() for g in self.groups]}


def _fwht(x: np.ndarray) -> np.ndarray:
    x = x.astype(complex).copy()
    n = x.size
    h = 1
    while h < n:
        y = x.reshape(-1, 2, h)
        a = y[:, 0, :].copy()
        b = y[:, 1, :]
        y[:, 0, :] = a + b
        y[:, 1, :] = a - b
        x = y.reshape(n)
        h *= 2
    return x


def trig_sums(Zt: np.ndarray, m: int, ell: int) -> tuple[complex, float, float]:
    """Evaluate the two level-``ell`` sums for a punctured signed space.

    Returns ``(first_sum, sec^m, max |second sum| over y outside Z~)``. The
    second sums for all ``y`` are obtained at once as a Walsh-Hadamard
    convolution of ``eps 1_Z`` with ``(i tan)^{w(.)}``.
    """
    if m > FLOAT_MAX_SUPPORT:
        raise TransversalError(f"support {m} too large for direct trigonometric sums")
    theta = 2 * np.pi / (1 << ell)
    tval = 1j * np.tan(theta)
    size = 1 << m
    idx = np.arange(size)
    popc = np.bitwise_count(idx.astype(np.uint64)).astype(np.int64)
    g = tval ** popc
    E = np.zeros(size, dtype=complex)
    words = coset_words(Zt, m)
    E[words[:, 0].astype(np.int64)] = 1 - 2 * words[:, 1].astype(np.int64)
    f = _fwht(_fwht(E) * _fwht(g)) / size
    inZ = np.zeros(size, dtype=bool)
    inZ[words[:, 0].astype(np.int64)] = True
    outside = np.abs(f[~inZ])
    return complex(f[0]), float((1 / np.cos(theta)) ** m), float(outside.max()) if outside.size else 0.0


def coset_words(Zt: np.ndarray, m: int) -> np.ndarray:
    """All ``(packed vector, sign bit)`` pairs of a signed space with ``m <= 63``."""
    d = Zt.shape[0]
    if d > MAX_ENUM_DIM:
        raise TransversalError(f"refusing to enumerate 2^{d} vectors")
    vec = f2core.pack_rows(Zt[:, :-1]) if d else np.zeros(0, np.uint64)
    sgn = Zt[:, -1].astype(np.uint64) if d else np.zeros(0, np.uint64)
    cur = np.zeros((1, 2), dtype=np.uint64)
    for j in range(d):
        nxt = cur.copy()
        nxt[:, 0] ^= vec[j]
        nxt[:, 1] ^= sgn[j]
        cur = np.concatenate([cur, nxt], axis=0)
    return cur


def check_z_rotation(code: StabilizerCode, ell: int, tol: float = 1e-9) -> ZRotationVerdict:
    """Whether transversal ``diag(1, exp(2 pi i/2^ell))`` preserves the code space.

    For supports up to :data:`FLOAT_MAX_SUPPORT` the trigonometric sums are
    evaluated in floating point; the exact coset-weight criterion runs on
    every group (or the structural route at ``ell = 3`` when the dual is too
    large to enumerate) and the two must agree.
    """
    if ell < 3:
        raise TransversalError("ell must be at least 3 (tan(2 pi/2^ell) is undefined or zero below)")
    n = code.n
    zspace = z_subgroup(code)
    ones = np.ones(n, dtype=np.uint8)
    out = []
    for a in _group_vectors(code):
        support = np.nonzero(a)[0]
        m = int(support.size)
        Zt = _restricted(zspace, support, n)
        dual = f2core.nullspace(Zt[:, :-1]) if Zt.shape[0] else f2core.identity(m)
        if dual.shape[0] <= MAX_ENUM_DIM:
            c = _character_offset(Zt, m)
            w = coset_weights(c, dual)
            exact = bool(np.all((m - 2 * w) % (1 << ell) == 0))
            method = "coset-weight"
        elif ell == 3:
            exact = _analyse_group(a, zspace, n, ones, None, cross_check=False).passed
            method = "structural"
        else:
            raise TransversalError(f"dual of dimension {dual.shape[0]} too large to enumerate")
        first = mx = None
        float_ok = None
        sec = float((1 / np.cos(2 * np.pi / (1 << ell))) ** m)
        if m <= FLOAT_MAX_SUPPORT:
            first, sec, mx = trig_sums(Zt, m, ell)
            float_ok = abs(first - sec) <= tol * max(1.0, sec) and mx <= tol * max(1.0, sec)
            if float_ok != exact:
                raise ConsistencyError(f"trigonometric and coset-weight verdicts differ for {a.tolist()}")
        out.append(ZRotationGroup(a, m, first, sec, mx, float_ok, exact, method))
    return ZRotationVerdict(all(g.passed for g in out), ell, out)


def selfdual_divisibility(C, ell: int) -> bool:
    """Whether ``2^ell`` divides ``m - 2 w(v)`` for every codeword of a self-dual code."""
    G = f2core.row_basis(C)
    m = G.shape[1]
    if m % 2 or G.shape[0] != m // 2 or f2core.matmul(G, G.T).any():
        raise TransversalError("generator does not define a self-dual code")
    w = coset_weights(np.zeros(m, dtype=np.uint8), G)
    return bool(np.all((m - 2 * w) % (1 << ell) == 0))


# ---------------------------------------------------------------------------
# Classical predicates
# ---------------------------------------------------------------------------


def is_triorthogonal(G) -> bool:
    """Every pair and every triple of distinct rows overlaps in an even number of positions."""
    G = np.asarray(G, dtype=np.int64)
    if G.ndim != 2 or G.shape[0] < 2:
        return True
    r = G.shape[0]
    pairs = G @ G.T
    iu = np.triu_indices(r, 1)
    if np.any(pairs[iu] % 2):
        return False
    for i in range(r):
        for j in range(i + 1, r):
            prod = G[i] * G[j]
            if np.any((G[j + 1:] @ prod) % 2):
                return False
    return True


@dataclass
class CssTReport:
    holds: bool
    witness: np.ndarray | None = None
    reason: str = ""


def is_css_t(C1, C2) -> CssTReport:
    """Whether every ``x`` in ``C2`` has even weight and a self-dual code of ``C1^perp`` on its support."""
    C1 = f2core.row_basis(C1)
    n = C1.shape[1]
    C2 = np.asarray(C2, dtype=np.uint8).reshape(-1, n)
    C2 = f2core.row_basis(C2) if C2.shape[0] and C2.any() else np.zeros((0, n), np.uint8)
    for row in C2:
        if not f2core.in_rowspace(C1, row):
            raise TransversalError("C2 is not contained in C1")
    if C2.shape[0] > MAX_ENUM_DIM:
        raise TransversalError(f"C2 of dimension {C2.shape[0]} too large to enumerate")
    z = f2core.dual_basis(C1) if C1.shape[0] else f2core.identity(n)
    zspace = _signed_rref(np.hstack([z, np.zeros((z.shape[0], 1), np.uint8)])) if z.shape[0] else np.zeros((0, n + 1), np.uint8)
    words = f2core.span(C2) if C2.shape[0] else np.zeros((1, n), np.uint8)
    for x in words[1:]:
        supp = np.nonzero(x)[0]
        if supp.size % 2:
            return CssTReport(False, x, "odd weight")
        Zt = _restricted(zspace, supp, n)
        if 2 * Zt.shape[0] < supp.size:
            return CssTReport(False, x, "restricted dual code too small")
        dual = f2core.nullspace(Zt[:, :-1]) if Zt.shape[0] else f2core.identity(supp.size)
        if Zt.shape[0] and f2core.rank(np.vstack([Zt[:, :-1], dual])) != Zt.shape[0]:
            return CssTReport(False, x, "restricted dual code does not contain its dual")
    return CssTReport(True)


def lemma_selfdual_conditions(G) -> tuple[bool, bool, bool]:
    """The three equivalent statements for an even code ``C`` of length ``m``.

    Returns ``(C contains its dual, C has a self-dual subcode of dimension
    m/2, every y outside C splits C evenly by inner product)``. The second
    item is decided by the greedy enlargement, the third by enumeration.
    """
    G = f2core.row_basis(G)
    k, m = G.shape
    if m % 2 or np.any(G.sum(axis=1) % 2):
        raise TransversalError("need an even-length code with even-weight generators")
    dual = f2core.nullspace(G)
    first = f2core.rank(np.vstack([G, dual])) == k if dual.shape[0] else True
    second = False
    if first:
        aug = np.hstack([G, np.zeros((k, 1), np.uint8)])
        dual_aug = [np.concatenate([u, [0]]).astype(np.uint8) for u in dual]
        Q = _complement(np.array(dual_aug) if dual_aug else np.zeros((0, m + 1), np.uint8), aug)
        try:
            # Signs are irrelevant here: every representative is acceptable.
            A = _selfdual_extension_any(dual_aug, Q, m)
            second = len(A) == m // 2
        except ConsistencyError:
            second = False
    if m > MAX_ENUM_DIM:
        raise TransversalError("length too large for the splitting test")
    words = f2core.span(G).astype(np.int64)
    inC = set(f2core.pack_rows(words).tolist())
    third = True
    ys = f2core.span(f2core.identity(m)).astype(np.int64)
    for y, key in zip(ys, f2core.pack_rows(ys).tolist()):
        if key in inC:
            continue
        ones = int(((words @ y) % 2).sum())
        if 2 * ones != words.shape[0]:
            third = False
            break
    return bool(first), bool(second), third


def _selfdual_extension_any(dual_aug, Q, m):
    A = [r.copy() for r in dual_aug]
    Q = [q.copy() for q in Q]
    while len(A) < m // 2:
        if not Q:
            raise ConsistencyError("ran out of candidates")
        v = Q[0]
        A.append(v)
        rest = Q[1:]
        ip = [int(q[:-1].astype(np.int64) @ v[:-1]) % 2 for q in rest]
        if 1 not in ip:
            raise ConsistencyError("degenerate quotient")
        p = ip.index(1)
        pivot = rest[p]
        Q = [q ^ pivot if b else q for i, (q, b) in enumerate(zip(rest, ip)) if i != p]
    return A


def drop_b_block(code: StabilizerCode, d: int | None = None) -> StabilizerCode:
    """CSS code keeping the X-parts of all stabilizers and the pure Z-type subgroup.

    Generators are ``[A 0; C 0; 0 D]`` from ``[A B; C 0; 0 D]``; Z-type signs
    are preserved and X-type signs are set to ``+``. The distance guarantee
    only holds for non-degenerate codes, so passing the distance ``d`` of a
    degenerate code emits a warning.
    """
    n = code.n
    if d is not None and not is_nondegenerate(code, d):
        warnings.warn(
            "code is degenerate: the CSS part keeps the transversal property but its "
            "distance is only bounded by the minimum weight of the Z-type part",
            stacklevel=2,
        )
    X = x_parts(code)
    Z = z_subgroup(code)
    zero = np.zeros(n, dtype=np.uint8)
    gens = [PauliOperator(x, zero) for x in X]
    gens += [PauliOperator(zero, z[:-1], 2 * int(z[-1])) for z in Z]
    return StabilizerCode(n, gens, name=f"{code.name} (CSS part)" if code.name else "")


def is_nondegenerate(code: StabilizerCode, d: int) -> bool:
    """Whether every nontrivial stabilizer element has weight at least ``d``."""
    if code.r > MAX_ENUM_DIM:
        raise TransversalError("too many generators to enumerate")
    S = code.stabilizer_matrix()
    words = f2core.span(S)[1:]
    n = code.n
    wt = (words[:, :n] | words[:, n:]).sum(axis=1)
    return bool(np.all(wt >= d))


# ---------------------------------------------------------------------------
# Logical action
# ---------------------------------------------------------------------------


def _css_of(code):
    if not isinstance(code, StabilizerCode) or code.css is None:
        raise TransversalError("a CSS code with coset generators is required")
    return code.css


@dataclass
class LogicalIdentityReport:
    holds: bool
    failing: str | None
    weight_criterion: bool

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        return {"holds": self.holds, "failing": self.failing, "weight_criterion": self.weight_criterion}


def _odd_triple(rows_a, rows_b, rows_c):
    for (i, x), (j, y), (k, z) in itertools.product(enumerate(rows_a), enumerate(rows_b), enumerate(rows_c)):
        if int((x & y & z).sum()) % 2:
            return i, j, k
    return None


def check_logical_identity(code: StabilizerCode) -> LogicalIdentityReport:
    """Whether transversal T acts as the logical identity on a CSS-T code.

    Each of the four membership conditions ``i^{w(u)} E(0, u) in S`` ranges
    over a whole group of vectors ``u``. The sign defect
    ``h(u)`` (``(-1)^h = eps_u i^{-w(u)}``) satisfies
    ``h(u + u') = h(u) + h(u') + u.u'``, so each condition reduces to
    checks on generator products plus even overlaps of pairs and triples.
    """
    css = _css_of(code)
    zspace = z_subgroup(code)
    piv = _pivots(zspace) if zspace.shape[0] else []
    X = css.coset_gen
    C2 = css.C2_gen if css.C2_gen.size else np.zeros((0, code.n), np.uint8)

    def member(u) -> str | None:
        aug = np.concatenate([u, [0]]).astype(np.uint8)
        red = _reduce(zspace, piv, aug) if zspace.shape[0] else aug
        if red[:-1].any():
            return "not a Z-type stabilizer"
        if int(u.sum()) % 2:
            return "odd weight"
        if int(red[-1]) != _target_bits(u, None):
            return "wrong sign"
        return None

    def bits(v):
        return "".join(str(int(b)) for b in v)

    failing = None
    # Condition 1: x itself.
    for i, x in enumerate(X):
        why = member(x)
        if why:
            failing = f"condition 1: x{i + 1}={bits(x)} {why}"
            break
    if failing is None:
        for i, j in itertools.combinations(range(X.shape[0]), 2):
            if int((X[i] & X[j]).sum()) % 2:
                failing = f"condition 1: x{i + 1}.x{j + 1} is odd"
                break
    checks = [("condition 2", X, C2), ("condition 3", X, X), ("condition 4", C2, C2)]
    for label, L, R in checks:
        if failing is not None:
            break
        for (i, x), (j, y) in itertools.product(enumerate(L), enumerate(R)):
            why = member(x & y)
            if why:
                failing = f"{label}: product of rows {i + 1} and {j + 1} {why}"
                break
        if failing is None:
            hit = _odd_triple(L, R, R) or _odd_triple(L, L, R)
            if hit:
                failing = f"{label}: rows {tuple(h + 1 for h in hit)} overlap oddly"
    holds = failing is None
    return LogicalIdentityReport(holds, failing, _weight_identity_criterion(code, zspace))


def _weight_identity_criterion(code: StabilizerCode, zspace) -> bool:
    """Weights of ``s + C1`` are constant mod 8, ``s`` the Z-sign offset.

    Expands ``w(s + sum lam_i g_i)`` as a multilinear polynomial over the
    integers and requires every non-constant coefficient to vanish mod 8.
    """
    css = code.css
    n = code.n
    s = _character_offset(zspace, n) if zspace.shape[0] else np.zeros(n, np.uint8)
    G = np.vstack([css.coset_gen, css.C2_gen]) if css.C2_gen.size else css.coset_gen
    G = G.astype(np.int64)
    s = s.astype(np.int64)
    r = G.shape[0]
    for i in range(r):
        if (int(G[i].sum()) - 2 * int((s * G[i]).sum())) % 8:
            return False
    for i, j in itertools.combinations(range(r), 2):
        p = G[i] * G[j]
        if (int(p.sum()) - 2 * int((s * p).sum())) % 4:
            return False
    for i, j in itertools.combinations(range(r), 2):
        p = G[i] * G[j]
        if np.any((G[j + 1:] @ p) % 2):
            return False
    return True


@dataclass
class LogicalTReport:
    holds: bool
    triorthogonal: bool
    weight_condition: bool
    method: str
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "triorthogonal": self.triorthogonal,
            "weight_condition": self.weight_condition,
            "method": self.method,
            "witness": self.witness,
        }


def check_logical_transversal_T(code: StabilizerCode) -> LogicalTReport:
    """Whether physical transversal T realises logical transversal T with no correction.

    Requires ``G1 = [G_{C1/C2}; G2]`` to be triorthogonal and
    ``w(x + a) = w(c) (mod 8)`` for ``x = sum c_i x_i`` and ``a`` in ``C2``.
    The weight condition is enumerated when ``dim C1`` is at most
    :data:`MAX_ENUM_DIM` and otherwise decided by the equivalent conditions on
    single, pair and triple overlaps of the rows of ``G1``.
    """
    css = _css_of(code)
    X = css.coset_gen
    C2 = css.C2_gen if css.C2_gen.size else np.zeros((0, code.n), np.uint8)
    G1 = np.vstack([X, C2])
    k = X.shape[0]
    tri = is_triorthogonal(G1)
    poly_ok, poly_witness = _logical_t_polynomial(G1, k)
    if G1.shape[0] <= MAX_ENUM_DIM:
        w = coset_weights(np.zeros(code.n, np.uint8), G1)
        idx = np.arange(w.size, dtype=np.uint64)
        cw = np.bitwise_count(idx & np.uint64((1 << k) - 1)).astype(np.int64)
        bad = np.nonzero((w - cw) % 8)[0]
        weight_ok = bad.size == 0
        witness = None if weight_ok else f"combination index {int(bad[0])} has weight {int(w[bad[0]])}"
        method = "enumeration"
        if weight_ok != poly_ok:
            raise ConsistencyError("enumerated and polynomial weight conditions differ")
    else:
        weight_ok, witness, method = poly_ok, poly_witness, "polynomial"
    return LogicalTReport(bool(tri and weight_ok), tri, bool(weight_ok), method, witness)


def _logical_t_polynomial(G1: np.ndarray, k: int) -> tuple[bool, str | None]:
    G = G1.astype(np.int64)
    r = G.shape[0]
    for i in range(r):
        want = 1 if i < k else 0
        if (int(G[i].sum()) - want) % 8:
            return False, f"row {i + 1} has weight {int(G[i].sum())}"
    for i, j in itertools.combinations(range(r), 2):
        if int((G[i] * G[j]).sum()) % 4:
            return False, f"rows {i + 1},{j + 1} overlap in {int((G[i] * G[j]).sum())} positions"
    for i, j in itertools.combinations(range(r), 2):
        p = G[i] * G[j]
        tri = (G[j + 1:] @ p) % 2
        if tri.any():
            kk = j + 1 + int(np.nonzero(tri)[0][0])
            return False, f"rows {i + 1},{j + 1},{kk + 1} overlap oddly"
    return True, None


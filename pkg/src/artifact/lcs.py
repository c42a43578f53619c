"""Logical Clifford synthesis: every physical Clifford circuit realising a logical Clifford.

The pipeline turns a target map on logical Paulis into linear constraints on a
symplectic matrix, enumerates all solutions, converts each into a circuit and
repairs signs with a Pauli correction.
"""

from __future__ import annotations

import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import f2core
from .f2core import as_f2_vec, matmul
from .pauli import PauliOperator, product, symplectic_gram, symplectic_inner
from .stabilizer import StabilizerCode, check_normalizes
from .symplectic import (
    Circuit,
    ElementaryFactor,
    SymplecticError,
    circuit_from_factors,
    conjugate_by_circuit,
    decompose,
    enumerate_symplectic,
    find_symplectic,
    symplectic_gram_schmidt,
)

DEFAULT_MAX_SOLUTIONS = 1 << 16


class TargetError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Logical targets


@dataclass
class LogicalTarget:
    """Images of the logical generators, written as Paulis on the ``k`` logical qubits.

    ``images_x[i]`` is the image of logical X on qubit ``i`` and similarly for Z.
    """

    k: int
    images_x: list[PauliOperator]
    images_z: list[PauliOperator]
    name: str = ""

    def __post_init__(self):
        if len(self.images_x) != self.k or len(self.images_z) != self.k:
            raise TargetError("target must give an image for every logical X and Z")
        for p in self.images_x + self.images_z:
            if p.n != self.k:
                raise TargetError(f"image {p} does not act on {self.k} logical qubits")
            if not p.is_hermitian:
                raise TargetError(f"image {p} is not Hermitian")
        rows = np.array([p.vector for p in self.images_x + self.images_z], dtype=np.uint8)
        k = self.k
        want = np.zeros((2 * k, 2 * k), dtype=np.uint8)
        want[:k, k:] = np.eye(k, dtype=np.uint8)
        want[k:, :k] = np.eye(k, dtype=np.uint8)
        if k and not np.array_equal(symplectic_gram(rows), want):
            raise TargetError("target images do not preserve the logical commutation relations")

    @classmethod
    def identity(cls, k: int) -> "LogicalTarget":
        return cls(k, [_lp(k, "X", i) for i in range(k)], [_lp(k, "Z", i) for i in range(k)], "identity")


def _lp(k: int, letter: str, i: int) -> PauliOperator:
    a = np.zeros(k, dtype=np.uint8)
    b = np.zeros(k, dtype=np.uint8)
    if letter in "XY":
        a[i] = 1
    if letter in "ZY":
        b[i] = 1
    return PauliOperator(a, b)


def named_target(name: str, k: int) -> LogicalTarget:
    """Standard logical Cliffords by name (qubit labels are 1-based).

    Accepted forms: ``P1``/``phase1``, ``H1``/``hadamard1``, ``CZ12``/``cz1,2``,
    ``CNOT21``/``cx2,1`` (control first), ``SWAP12`` and ``identity``.
    """
    key = name.strip().lower().replace(" ", "").replace("_", ",").replace("-", ",")
    if key in ("i", "id", "identity"):
        return LogicalTarget.identity(k)
    m = re.fullmatch(r"(p|s|phase|h|hadamard|pdg|sdg)(\d+)", key)
    if m:
        q = int(m.group(2)) - 1
        _check_q(q, k, name)
        ix = [_lp(k, "X", i) for i in range(k)]
        iz = [_lp(k, "Z", i) for i in range(k)]
        kind = m.group(1)
        if kind in ("p", "s", "phase"):
            ix[q] = _lp(k, "Y", q)
        elif kind in ("pdg", "sdg"):
            ix[q] = -_lp(k, "Y", q)
        else:
            ix[q], iz[q] = _lp(k, "Z", q), _lp(k, "X", q)
        return LogicalTarget(k, ix, iz, name)
    m = re.fullmatch(r"(cz|cnot|cx|swap)(\d)(\d)", key) or re.fullmatch(r"(cz|cnot|cx|swap)(\d+),(\d+)", key)
    if m:
        c, t = int(m.group(2)) - 1, int(m.group(3)) - 1
        _check_q(c, k, name)
        _check_q(t, k, name)
        if c == t:
            raise TargetError(f"{name}: qubits must differ")
        ix = [_lp(k, "X", i) for i in range(k)]
        iz = [_lp(k, "Z", i) for i in range(k)]
        kind = m.group(1)
        if kind == "cz":
            ix[c] = ix[c] * _lp(k, "Z", t)
            ix[t] = ix[t] * _lp(k, "Z", c)
        elif kind == "swap":
            ix[c], ix[t] = ix[t], ix[c]
            iz[c], iz[t] = iz[t], iz[c]
        else:
            ix[c] = ix[c] * _lp(k, "X", t)
            iz[t] = iz[t] * _lp(k, "Z", c)
        return LogicalTarget(k, ix, iz, name)
    raise TargetError(f"unknown target name {name!r}")


def _check_q(q: int, k: int, name: str) -> None:
    if not 0 <= q < k:
        raise TargetError(f"{name}: logical qubit {q + 1} out of range 1..{k}")


_TOKEN = re.compile(r"^([XYZ])bar(\d+)$")


def _parse_rhs(expr: str, k: int, lineno: int) -> PauliOperator:
    expr = expr.strip()
    kappa = 0
    m = re.match(r"^([+-]?)(i?)\s*(\*?)\s*", expr)
    sign, imag = m.group(1), m.group(2)
    body = expr[m.end():]
    if imag and body and not body.startswith(("X", "Y", "Z", "I")):
        raise TargetError(f"line {lineno}: cannot parse {expr!r}")
    kappa = (2 if sign == "-" else 0) + (1 if imag else 0)
    factors = [f.strip() for f in body.split("*")] if body else []
    out = PauliOperator.identity(k).scale(kappa)
    for f in factors:
        if f == "I":
            continue
        t = _TOKEN.match(f)
        if not t:
            raise TargetError(f"line {lineno}: bad factor {f!r}; use Xbar<i>, Ybar<i>, Zbar<i>")
        q = int(t.group(2)) - 1
        if not 0 <= q < k:
            raise TargetError(f"line {lineno}: logical qubit {q + 1} out of range 1..{k}")
        out = out * _lp(k, t.group(1), q)
    return out


def parse_target(text: str, k: int, name: str = "") -> LogicalTarget:
    """Parse lines like ``Xbar1 -> Ybar1`` or ``Zbar2 -> -Zbar1*Zbar2``.

    Generators that are not mentioned map to themselves.
    """
    ix = [_lp(k, "X", i) for i in range(k)]
    iz = [_lp(k, "Z", i) for i in range(k)]
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise TargetError(f"line {lineno}: expected 'lhs -> rhs'")
        lhs, rhs = (s.strip() for s in line.split("->", 1))
        t = _TOKEN.match(lhs)
        if not t or t.group(1) == "Y":
            raise TargetError(f"line {lineno}: left side must be Xbar<i> or Zbar<i>")
        q = int(t.group(2)) - 1
        if not 0 <= q < k:
            raise TargetError(f"line {lineno}: logical qubit {q + 1} out of range 1..{k}")
        if (t.group(1), q) in seen:
            raise TargetError(f"line {lineno}: {lhs} assigned twice")
        seen.add((t.group(1), q))
        img = _parse_rhs(rhs, k, lineno)
        if not img.is_hermitian:
            raise TargetError(f"line {lineno}: image {rhs!r} is not Hermitian")
        (ix if t.group(1) == "X" else iz)[q] = img
    return LogicalTarget(k, ix, iz, name)


def resolve_target(spec: str, k: int) -> LogicalTarget:
    """A target name, a file path, or inline mini-language text."""
    if os.path.exists(spec):
        with open(spec) as fh:
            return parse_target(fh.read(), k, name=os.path.basename(spec))
    if "->" in spec:
        return parse_target(spec.replace(";", "\n"), k)
    return named_target(spec, k)


def logical_to_physical(code: StabilizerCode, p: PauliOperator) -> PauliOperator:
    """Physical operator for the logical Pauli ``i^kappa E(alpha, beta)``."""
    if p.n != code.k:
        raise TargetError("logical operator size does not match k")
    kappa = p.kappa + int(p.a.astype(np.int64) @ p.b.astype(np.int64))
    facs = [code.logical_x[i] for i in range(code.k) if p.a[i]]
    facs += [code.logical_z[i] for i in range(code.k) if p.b[i]]
    return product(facs, n=code.n).scale(kappa)


# ---------------------------------------------------------------------------
# Constraint assembly


@dataclass
class ConstraintSystem:
    """Symplectic basis ``(U, V)`` and image constraints for synthesis.

    ``u`` slots hold the logical X operators followed by the stabilizer
    generators; ``v`` slots hold the logical Z operators followed by a
    completion. All ``u`` slots and the first ``k`` ``v`` slots are
    constrained.
    """

    U: np.ndarray
    V: np.ndarray
    I: list[int]
    J: list[int]
    u_images: list[np.ndarray]
    v_images: list[np.ndarray]
    expected: list[tuple[PauliOperator, PauliOperator]]

    @property
    def rows(self) -> list[tuple[np.ndarray, np.ndarray]]:
        out = [(self.U[i], y) for i, y in zip(self.I, self.u_images)]
        out += [(self.V[j], y) for j, y in zip(self.J, self.v_images)]
        return out

    @property
    def alpha(self) -> int:
        n = self.U.shape[0]
        return (n - len(self.I)) + (n - len(self.J))


def assemble_constraints(
    code: StabilizerCode, target: LogicalTarget, stabilizer_images=None
) -> ConstraintSystem:
    """Linear constraints for ``target`` on ``code``.

    By default every stabilizer generator must map to itself. Passing
    ``stabilizer_images`` (vectors in the stabilizer row space) imposes a
    normalizing map instead.
    """
    n, k, r = code.n, code.k, code.r
    if target.k != k:
        raise TargetError(f"target acts on {target.k} logical qubits, code has {k}")
    if len(code.logical_x) != k:
        raise TargetError("code has no logical operators; supply them explicitly")
    fixed = {}
    for i in range(k):
        fixed[("u", i)] = code.logical_x[i].vector
        fixed[("v", i)] = code.logical_z[i].vector
    for j, g in enumerate(code.generators):
        fixed[("u", k + j)] = g.vector
    U, V = symplectic_gram_schmidt(n=n, fixed=fixed)
    expected = []
    u_images = []
    v_images = []
    for i in range(k):
        img = logical_to_physical(code, target.images_x[i])
        expected.append((code.logical_x[i], img))
        u_images.append(img.vector)
    S = code.stabilizer_matrix()
    for j, g in enumerate(code.generators):
        if stabilizer_images is None:
            im = g.vector
            expected.append((g, g))
        else:
            im = as_f2_vec(stabilizer_images[j])
            if not f2core.in_rowspace(S, im):
                raise TargetError(f"stabilizer image {j} is not in the stabilizer group")
        u_images.append(im)
    for i in range(k):
        img = logical_to_physical(code, target.images_z[i])
        expected.append((code.logical_z[i], img))
        v_images.append(img.vector)
    return ConstraintSystem(U, V, list(range(n)), list(range(k)), u_images, v_images, expected)


# ---------------------------------------------------------------------------
# Synthesis


@dataclass
class SynthesisResult:
    index: int
    F: np.ndarray
    factors: list[ElementaryFactor]
    circuit: Circuit
    pauli_correction: PauliOperator
    verified: dict = field(default_factory=dict)

    @property
    def cost(self) -> tuple[int, int]:
        return self.circuit.cost()

    def full_circuit(self) -> Circuit:
        """The circuit followed by the Pauli correction as X/Y/Z gates."""
        c = Circuit(self.circuit.n, list(self.circuit.gates))
        for q, (x, z) in enumerate(zip(self.pauli_correction.a, self.pauli_correction.b)):
            if x and z:
                c.append("Y", q)
            elif x:
                c.append("X", q)
            elif z:
                c.append("Z", q)
        return c

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "F": self.F.astype(int).tolist(),
            "circuit": self.circuit.to_json(),
            "pauli_correction": str(self.pauli_correction),
            "two_qubit_gates": self.cost[0],
            "depth": self.cost[1],
            "verified": self.verified,
        }


def fix_signs(code: StabilizerCode, circuit: Circuit, target: LogicalTarget | None = None,
              expected=None) -> PauliOperator:
    """Pauli ``E(c, d)`` to apply after ``circuit`` so that every sign matches.

    ``expected`` is a list of ``(operator, wanted image)`` pairs; by default it
    is built from ``target`` with stabilizers fixed.
    """
    if expected is None:
        if target is None:
            raise TargetError("fix_signs needs a target or explicit expectations")
        expected = assemble_constraints(code, target).expected
    rows = []
    flips = []
    for op, want in expected:
        got = conjugate_by_circuit(op, circuit)
        if not got.equal_up_to_phase(want):
            raise SymplecticError(f"circuit maps {op} to {got}, expected {want} up to sign")
        rows.append(want.vector)
        flips.append(int(got.kappa != want.kappa))
    n = code.n
    if not any(flips):
        return PauliOperator.identity(n)
    M = np.array([np.concatenate([r[n:], r[:n]]) for r in rows], dtype=np.uint8)
    sol = f2core.lex_min_solution(M, np.array(flips, dtype=np.uint8))
    if sol is None:
        raise SymplecticError("inconsistent sign system")
    return PauliOperator.from_vector(sol)


def verify_symbolic(circuit: Circuit, correction: PauliOperator, expected) -> dict:
    ok = True
    for op, want in expected:
        got = conjugate_by_circuit(op, circuit)
        if symplectic_inner(correction.vector, got.vector):
            got = -got
        if got != want:
            ok = False
            break
    return {"method": "symbolic", "ok": ok}


def verify_oracle(code: StabilizerCode, circuit: Circuit, correction: PauliOperator, expected,
                  tol: float = 1e-10) -> dict:
    from . import oracle

    U = oracle.circuit_unitary(circuit, code.n)
    U = correction.to_matrix() @ U
    worst = 0.0
    for op, want in expected:
        got = U @ op.to_matrix() @ U.conj().T
        worst = max(worst, float(np.abs(got - want.to_matrix()).max()))
    proj = oracle.code_projector(code)
    worst_proj = float(np.abs(U @ proj @ U.conj().T - proj).max())
    return {
        "method": "oracle",
        "ok": worst < tol and worst_proj < tol,
        "max_error": worst,
        "projector_error": worst_proj,
    }


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SYNTH_THREADS", "1")))
    except ValueError:
        return 1


def synthesize_all(
    code: StabilizerCode,
    target: LogicalTarget,
    max_solutions: int = DEFAULT_MAX_SOLUTIONS,
    verify: str = "auto",
    sort: bool = True,
    stabilizer_images=None,
) -> list[SynthesisResult]:
    """All physical realisations of ``target``, sorted by (two-qubit gates, depth).

    When the solution count ``2**(r(r+1)/2)`` exceeds ``max_solutions`` only the
    particular solution is returned. ``verify`` is ``"oracle"``, ``"symbolic"``,
    ``"none"`` or ``"auto"`` (oracle for ``n <= 10``).
    """
    sysm = assemble_constraints(code, target, stabilizer_images)
    total = 1 << (sysm.alpha * (sysm.alpha + 1) // 2)
    if total > max_solutions:
        xs = [x for x, _ in sysm.rows]
        ys = [y for _, y in sysm.rows]
        mats = [find_symplectic(xs, ys)]
    else:
        mats = enumerate_symplectic(sysm.U, sysm.V, sysm.I, sysm.J, sysm.u_images, sysm.v_images)
    if stabilizer_images is not None:
        mats = [centralize(code, F) for F in mats]
        sysm = assemble_constraints(code, target)
    expected = sysm.expected
    mode = verify
    if mode == "auto":
        mode = "oracle" if code.n <= 10 else "symbolic"

    def build(item):
        idx, F = item
        factors = decompose(F)
        circ = circuit_from_factors(factors)
        corr = fix_signs(code, circ, expected=expected)
        if mode == "oracle":
            rep = verify_oracle(code, circ, corr, expected)
        elif mode == "symbolic":
            rep = verify_symbolic(circ, corr, expected)
        else:
            rep = {"method": "none", "ok": None}
        return SynthesisResult(idx, F, factors, circ, corr, rep)

    threads = _threads()
    items = list(enumerate(mats))
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(build, items))
    else:
        results = [build(it) for it in items]
    if sort:
        results.sort(key=lambda res: (res.cost, res.index))
    return results


def synthesize(code: StabilizerCode, target: LogicalTarget, **kw) -> SynthesisResult:
    """The cheapest realisation found by :func:`synthesize_all`."""
    return synthesize_all(code, target, **kw)[0]


def centralize(code: StabilizerCode, F) -> np.ndarray:
    """Turn a normalizing solution into a centralizing one with the same logical action.

    Solves ``K (S F) = S`` for an invertible ``K``, finds ``H`` fixing the
    logical rows and sending ``S`` to ``K S``, and returns ``H F``.
    """
    verdict, witness = check_normalizes(code, F)
    if verdict == "neither":
        raise SymplecticError(f"F does not normalize the stabilizer (generator {witness})")
    if verdict == "centralizes":
        return np.array(F, dtype=np.uint8)
    S = code.stabilizer_matrix()
    Sp = matmul(S, F)
    sol = f2core.solve_affine(Sp.T, S.T)
    if not sol.consistent:
        raise SymplecticError("could not express the stabilizer in its image")
    K = sol.particular.T
    KS = matmul(K, S)
    L = code.logical_matrix()
    xs = list(L) + list(S)
    ys = list(L) + list(KS)
    H = find_symplectic(xs, ys)
    return matmul(H, F)


def logical_action(code: StabilizerCode, F) -> np.ndarray:
    """Images of the logical rows under ``F``, reduced modulo the stabilizer."""
    L = code.logical_matrix()
    img = matmul(L, F)
    S = code.stabilizer_matrix()
    out = []
    for row in img:
        out.append(_reduce_mod(row, S))
    return np.array(out, dtype=np.uint8)


def _reduce_mod(v, S):
    if S.shape[0] == 0:
        return v
    basis = f2core.row_basis(S)
    piv = f2core.rref(basis).pivots
    v = v.copy()
    for row, p in zip(basis, piv):
        if v[p]:
            v ^= row
    return v

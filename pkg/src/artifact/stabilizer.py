"""Stabilizer and CSS codes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import f2core
from .f2core import as_f2, matmul
from .pauli import PauliOperator, PauliParseError, parse_pauli, product, symplectic_gram


class CodeError(ValueError):
    pass


class CodeParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass
class StabilizerCode:
    """``r`` signed stabilizer generators plus ``k`` logical X/Z pairs."""

    n: int
    generators: list[PauliOperator]
    logical_x: list[PauliOperator] = field(default_factory=list)
    logical_z: list[PauliOperator] = field(default_factory=list)
    css: "CssCode | None" = None
    name: str = ""

    def __post_init__(self):
        self.validate()

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def k(self) -> int:
        return self.n - self.r

    @property
    def signs(self) -> list[int]:
        return [g.sign for g in self.generators]

    def stabilizer_matrix(self) -> np.ndarray:
        """``G_S`` with rows ``[c_i | d_i]``."""
        if not self.generators:
            return np.zeros((0, 2 * self.n), dtype=np.uint8)
        return np.array([g.vector for g in self.generators], dtype=np.uint8)

    def logical_matrix(self) -> np.ndarray:
        rows = [p.vector for p in self.logical_x + self.logical_z]
        if not rows:
            return np.zeros((0, 2 * self.n), dtype=np.uint8)
        return np.array(rows, dtype=np.uint8)

    def validate(self) -> None:
        n = self.n
        for g in self.generators + self.logical_x + self.logical_z:
            if g.n != n:
                raise CodeError(f"operator {g} does not act on {n} qubits")
            if not g.is_hermitian:
                raise CodeError(f"operator {g} is not Hermitian")
        S = self.stabilizer_matrix()
        if S.shape[0] and f2core.rank(S) != S.shape[0]:
            raise CodeError("stabilizer generators are not independent")
        if S.shape[0] and symplectic_gram(S).any():
            raise CodeError("stabilizer generators do not commute")
        if S.shape[0] > n:
            raise CodeError("more generators than qubits")
        if len(self.logical_x) != len(self.logical_z):
            raise CodeError("logical X and Z lists differ in length")
        if self.logical_x and len(self.logical_x) != self.k:
            raise CodeError(f"expected {self.k} logical pairs, got {len(self.logical_x)}")
        if self.logical_x:
            Lm = self.logical_matrix()
            if S.shape[0]:
                cross = symplectic_gram(np.vstack([S, Lm]))[: S.shape[0], S.shape[0]:]
                if cross.any():
                    raise CodeError("a logical operator anticommutes with a stabilizer")
            k = self.k
            gram = symplectic_gram(Lm)
            want = np.zeros((2 * k, 2 * k), dtype=np.uint8)
            want[:k, k:] = np.eye(k, dtype=np.uint8)
            want[k:, :k] = np.eye(k, dtype=np.uint8)
            if not np.array_equal(gram, want):
                raise CodeError("logical operators do not satisfy the pairing table")

    def syndrome(self, error: PauliOperator) -> np.ndarray:
        return syndrome(self, error)

    def projector(self) -> np.ndarray:
        from .oracle import code_projector

        return code_projector(self)

    def in_stabilizer_group(self, p: PauliOperator) -> bool:
        """Whether ``p`` (with its phase) is an element of the stabilizer group."""
        coeffs = stabilizer_coefficients(self, p.vector)
        if coeffs is None:
            return False
        elem = product([g for g, c in zip(self.generators, coeffs) if c], n=self.n)
        return elem == p


@dataclass
class CssCode:
    """CSS data: ``C2 <= C1`` plus coset generators with ``G_X G_Z^T = I``."""

    C1_gen: np.ndarray
    C2_gen: np.ndarray
    coset_gen: np.ndarray
    z_coset_gen: np.ndarray

    @property
    def n(self) -> int:
        return self.C1_gen.shape[1]

    @property
    def k(self) -> int:
        return self.coset_gen.shape[0]


def stabilizer_coefficients(code: StabilizerCode, v) -> np.ndarray | None:
    """Coefficients expressing ``v`` in the generator rows, or ``None``."""
    S = code.stabilizer_matrix()
    v = f2core.as_f2_vec(v)
    if S.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8) if not v.any() else None
    sol = f2core.solve_affine(S.T, v)
    return sol.particular


def syndrome(code: StabilizerCode, error: PauliOperator) -> np.ndarray:
    S = code.stabilizer_matrix().astype(np.int64)
    n = code.n
    e = error.vector.astype(np.int64)
    sw = np.concatenate([e[n:], e[:n]])
    return ((S @ sw) % 2).astype(np.uint8)


def _min_weight_rep(v: np.ndarray, sub: np.ndarray) -> np.ndarray:
    """Smallest-weight element of ``v + rowspace(sub)``, ties broken lexicographically."""
    if sub.shape[0] == 0:
        return v
    basis = f2core.row_basis(sub)
    if basis.shape[0] <= 16:
        coset = f2core.span(basis) ^ v
        w = coset.sum(axis=1)
        best = np.nonzero(w == w.min())[0]
        cands = coset[best]
        order = np.lexsort(cands.T[::-1])
        return cands[order[0]].copy()
    red = v.copy()
    piv = f2core.rref(basis).pivots
    for row, p in zip(basis, piv):
        if red[p]:
            red ^= row
    return red


def css_construct(
    C1_gen,
    C2_gen,
    x_signs=None,
    z_signs=None,
    z_gen=None,
    coset_gen=None,
    z_coset_gen=None,
    name: str = "",
) -> StabilizerCode:
    """CSS code with X-type stabilizers from ``C2`` and Z-type from ``C1``'s dual.

    ``z_gen`` optionally fixes the Z-type generator rows (they must span the
    dual of ``C1``). Coset generators default to rows of ``C1_gen`` extending
    ``C2`` and their dual partners reduced to minimum weight modulo ``C1``'s dual.
    """
    C1 = as_f2(C1_gen)
    C2 = as_f2(C2_gen) if np.asarray(C2_gen).size else np.zeros((0, C1.shape[1]), np.uint8)
    n = C1.shape[1]
    if C2.shape[1] != n:
        raise CodeError("C1 and C2 have different lengths")
    if C1.shape[0] == 0:
        raise CodeError("C1 is empty")
    C1 = f2core.row_basis(C1) if f2core.rank(C1) != C1.shape[0] else C1
    k1 = C1.shape[0]
    if C2.shape[0]:
        if f2core.rank(C2) != C2.shape[0]:
            C2 = f2core.row_basis(C2)
        for row in C2:
            if not f2core.in_rowspace(C1, row):
                raise CodeError("C2 is not contained in C1")
    k2 = C2.shape[0]
    k = k1 - k2
    if k <= 0:
        raise CodeError("degenerate CSS pair: C1 = C2 leaves no logical qubits")
    C1perp = f2core.dual_basis(C1) if z_gen is None else as_f2(z_gen)
    if z_gen is not None:
        if f2core.rank(np.vstack([C1perp, f2core.dual_basis(C1)])) != f2core.rank(f2core.dual_basis(C1)) or f2core.rank(C1perp) != n - k1:
            raise CodeError("z_gen does not span the dual of C1")
    if C2.shape[0] and C1perp.shape[0] and matmul(C2, C1perp.T).any():
        raise CodeError("X and Z generators anticommute (C2 not orthogonal to dual of C1)")
    if coset_gen is None:
        GX = f2core.extend_to_basis(C2, C1)
    else:
        GX = as_f2(coset_gen)
    if z_coset_gen is None:
        C2perp = f2core.dual_basis(C2) if C2.shape[0] else np.eye(n, dtype=np.uint8)
        Zc = f2core.extend_to_basis(C1perp, C2perp)
        if k:
            M = matmul(GX, Zc.T)
            Zc = matmul(f2core.inverse(M).T, Zc)
            Zc = np.array([_min_weight_rep(z, C1perp) for z in Zc], dtype=np.uint8)
        GZ = Zc
    else:
        GZ = as_f2(z_coset_gen)
    if k and not np.array_equal(matmul(GX, GZ.T), np.eye(k, dtype=np.uint8)):
        raise CodeError("coset generators violate G_X G_Z^T = I")
    x_signs = [1] * k2 if x_signs is None else list(x_signs)
    z_signs = [1] * C1perp.shape[0] if z_signs is None else list(z_signs)
    zero = np.zeros(n, dtype=np.uint8)
    gens = [PauliOperator(row, zero, 0 if s > 0 else 2) for row, s in zip(C2, x_signs)]
    gens += [PauliOperator(zero, row, 0 if s > 0 else 2) for row, s in zip(C1perp, z_signs)]
    css = CssCode(C1, C2, GX, GZ)
    lx, lz = logical_paulis_css(css)
    return StabilizerCode(n, gens, lx, lz, css=css, name=name)


def logical_paulis_css(css: CssCode) -> tuple[list[PauliOperator], list[PauliOperator]]:
    k = css.coset_gen.shape[0]
    if k == 0:
        return [], []
    if not np.array_equal(matmul(css.coset_gen, css.z_coset_gen.T), np.eye(k, dtype=np.uint8)):
        raise CodeError("coset generators violate G_X G_Z^T = I")
    zero = np.zeros(css.n, dtype=np.uint8)
    lx = [PauliOperator(row, zero) for row in css.coset_gen]
    lz = [PauliOperator(zero, row) for row in css.z_coset_gen]
    return lx, lz


def stabilizer_code(generators, logical_x=(), logical_z=(), name: str = "") -> StabilizerCode:
    gens = [parse_pauli(g) if isinstance(g, str) else g for g in generators]
    lx = [parse_pauli(g) if isinstance(g, str) else g for g in logical_x]
    lz = [parse_pauli(g) if isinstance(g, str) else g for g in logical_z]
    n = gens[0].n if gens else (lx[0].n if lx else 0)
    return StabilizerCode(n, gens, lx, lz, name=name)


def check_normalizes(code: StabilizerCode, F) -> tuple[str, int | None]:
    """Return ``("centralizes" | "normalizes-only" | "neither", witness)``.

    The witness is the index of the first generator that is moved (for
    normalizes-only) or mapped outside the stabilizer row space (for neither).
    """
    S = code.stabilizer_matrix()
    img = matmul(S, F) if S.shape[0] else S
    first_moved = None
    for i, (row, im) in enumerate(zip(S, img)):
        if not f2core.in_rowspace(S, im):
            return "neither", i
        if first_moved is None and not np.array_equal(row, im):
            first_moved = i
    if first_moved is None:
        return "centralizes", None
    return "normalizes-only", first_moved


def code_distance(code: StabilizerCode, max_n: int = 20) -> int | None:
    """Minimum weight of a normalizer element outside the stabilizer group.

    Enumerates weights in increasing order; returns ``None`` when ``n`` exceeds
    ``max_n``.
    """
    n = code.n
    if n > max_n or code.k == 0:
        return None
    S = code.stabilizer_matrix()
    for w in range(1, n + 1):
        for support in itertools.combinations(range(n), w):
            for letters in itertools.product((1, 2, 3), repeat=w):
                a = np.zeros(n, dtype=np.uint8)
                b = np.zeros(n, dtype=np.uint8)
                for q, l in zip(support, letters):
                    a[q] = l & 1
                    b[q] = l >> 1
                p = PauliOperator(a, b)
                if syndrome(code, p).any():
                    continue
                if S.shape[0] and f2core.in_rowspace(S, p.vector):
                    continue
                return w
    return None


# ---------------------------------------------------------------------------
# Code file format


def parse_code(text: str) -> StabilizerCode:
    """Parse a code file.

    General form::

        n r k
        <r signed Pauli strings>
        <k logical X strings>
        <k logical Z strings>

    CSS form: a line ``C1`` followed by a matrix block, then ``C2`` and a
    matrix block (``r c`` header plus 0/1 rows).
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            lines.append((lineno, body))
    if not lines:
        raise CodeParseError("empty code file")
    if lines[0][1].strip().upper() in ("C1", "CSS"):
        return _parse_css(lines)
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or not all(p.isdigit() for p in parts):
        raise CodeParseError("expected header 'n r k'", lineno, 1)
    n, r, k = (int(p) for p in parts)
    if r + k != n:
        raise CodeParseError(f"header inconsistent: r + k = {r + k} but n = {n}", lineno, 1)
    need = 1 + r + 2 * k
    if len(lines) < need:
        raise CodeParseError(f"expected {need - 1} operator lines, found {len(lines) - 1}", lines[-1][0])
    ops = []
    for lineno, body in lines[1:need]:
        try:
            p = parse_pauli(body.strip())
        except PauliParseError as exc:
            col = None if exc.column is None else exc.column + (len(body) - len(body.lstrip()))
            raise CodeParseError(str(exc).split(": ", 1)[-1], lineno, col) from None
        if p.n != n:
            raise CodeParseError(f"operator has {p.n} qubits, expected {n}", lineno, 1)
        ops.append(p)
    if len(lines) > need:
        raise CodeParseError("unexpected trailing content", lines[need][0], 1)
    try:
        return StabilizerCode(n, ops[:r], ops[r: r + k], ops[r + k:])
    except CodeError as exc:
        raise CodeParseError(str(exc)) from None


def _parse_css(lines) -> StabilizerCode:
    blocks: dict[str, str] = {}
    cur = None
    start = 0
    idx = 1 if lines[0][1].strip().upper() == "CSS" else 0
    for lineno, body in lines[idx:]:
        tag = body.strip().upper()
        if tag in ("C1", "C2"):
            cur = tag
            blocks[cur] = ""
            start = lineno
            continue
        if cur is None:
            raise CodeParseError("expected a 'C1' or 'C2' tag", lineno, 1)
        blocks[cur] += body + "\n"
    for tag in ("C1", "C2"):
        if tag not in blocks:
            raise CodeParseError(f"missing {tag} block", start)
    try:
        C1 = f2core.parse_matrix(blocks["C1"])
        C2 = f2core.parse_matrix(blocks["C2"])
        return css_construct(C1, C2)
    except (f2core.F2Error, CodeError) as exc:
        raise CodeParseError(str(exc)) from None


def format_code(code: StabilizerCode) -> str:
    out = [f"{code.n} {code.r} {code.k}"]
    out += [str(g) for g in code.generators]
    out += [str(p) for p in code.logical_x]
    out += [str(p) for p in code.logical_z]
    return "\n".join(out) + "\n"

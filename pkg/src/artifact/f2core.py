"""Linear algebra over the binary field.

Matrices are plain numpy ``uint8`` arrays holding 0/1 entries. Every routine
returns fresh arrays reduced mod 2 and never mutates its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class F2Error(ValueError):
    """Raised for singular or dimensionally inconsistent inputs."""


def as_f2(a) -> np.ndarray:
    """Coerce ``a`` to a 2-D uint8 array reduced mod 2."""
    arr = np.asarray(a)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise F2Error(f"expected a matrix, got shape {arr.shape}")
    return (np.asarray(arr, dtype=np.int64) % 2).astype(np.uint8)


def as_f2_vec(v) -> np.ndarray:
    arr = np.asarray(v, dtype=np.int64).reshape(-1)
    return (arr % 2).astype(np.uint8)


def matmul(a, b) -> np.ndarray:
    """Matrix product mod 2."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return ((a @ b) % 2).astype(np.uint8)


def vecmat(v, M) -> np.ndarray:
    """Row vector times matrix mod 2, returned as a 1-D array."""
    v = np.asarray(v, dtype=np.int64).reshape(-1)
    return ((v @ np.asarray(M, dtype=np.int64)) % 2).astype(np.uint8)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.uint8)


@dataclass
class RrefResult:
    """Reduced row echelon form ``R = T @ A`` with pivot column list."""

    R: np.ndarray
    pivots: list[int]
    T: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(a, columns=None) -> RrefResult:
    """Gauss-Jordan elimination mod 2.

    ``columns`` optionally restricts (and orders) the columns that may hold
    pivots. The returned transform ``T`` is invertible and satisfies
    ``T @ a == R`` mod 2.
    """
    R = as_f2(a).copy()
    rows, cols = R.shape
    T = identity(rows)
    order = range(cols) if columns is None else columns
    pivots: list[int] = []
    r = 0
    for c in order:
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
            T[[r, p]] = T[[p, r]]
        hits = np.nonzero(R[:, c])[0]
        hits = hits[hits != r]
        if hits.size:
            R[hits] ^= R[r]
            T[hits] ^= T[r]
        pivots.append(int(c))
        r += 1
    return RrefResult(R, pivots, T)


def rank(a) -> int:
    a = as_f2(a)
    if a.size == 0:
        return 0
    return rref(a).rank


def inverse(a) -> np.ndarray:
    """Inverse of a square matrix mod 2. Raises :class:`F2Error` if singular."""
    a = as_f2(a)
    n, m = a.shape
    if n != m:
        raise F2Error(f"inverse needs a square matrix, got {a.shape}")
    res = rref(a)
    if res.rank != n:
        raise F2Error("matrix is singular over F2")
    return res.T


def is_invertible(a) -> bool:
    a = as_f2(a)
    return a.shape[0] == a.shape[1] and rank(a) == a.shape[0]


def nullspace(a) -> np.ndarray:
    """Basis (as rows) of the right kernel ``{x : a @ x = 0}``."""
    a = as_f2(a)
    rows, cols = a.shape
    if rows == 0:
        return identity(cols)
    res = rref(a)
    free = [c for c in range(cols) if c not in set(res.pivots)]
    basis = zeros(len(free), cols)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, p in enumerate(res.pivots):
            if res.R[r, f]:
                basis[i, p] = 1
    return basis


def dual_basis(g) -> np.ndarray:
    """Generator matrix of the dual code of the row space of ``g``."""
    return nullspace(g)


def row_basis(a) -> np.ndarray:
    """Rows of the RREF spanning the row space of ``a``."""
    a = as_f2(a)
    if a.shape[0] == 0:
        return a
    res = rref(a)
    return res.R[: res.rank].copy()


def in_rowspace(a, v) -> bool:
    a = as_f2(a)
    v = as_f2_vec(v)
    if a.shape[0] == 0:
        return not v.any()
    return rank(np.vstack([a, v])) == rank(a)


def extend_to_basis(sub, sup) -> np.ndarray:
    """Rows of ``sup`` that extend a basis of ``rowspace(sub)`` to ``rowspace(sup)``.

    Rows are chosen greedily in the order they appear in ``sup``.
    """
    sub = as_f2(sub) if np.asarray(sub).size else zeros(0, as_f2(sup).shape[1])
    sup = as_f2(sup)
    chosen = []
    cur = sub
    r = rank(cur) if cur.shape[0] else 0
    for row in sup:
        cand = np.vstack([cur, row])
        rc = rank(cand)
        if rc > r:
            chosen.append(row)
            cur, r = cand, rc
    if not chosen:
        return zeros(0, sup.shape[1])
    return np.array(chosen, dtype=np.uint8)


@dataclass
class AffineSolution:
    """Solution set ``particular + span(kernel)`` of ``A @ X = B``.

    ``particular`` is ``None`` when the system is inconsistent. ``kernel``
    holds a basis of the right kernel of ``A`` as rows.
    """

    particular: np.ndarray | None
    kernel: np.ndarray

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def solve_affine(A, B) -> AffineSolution:
    """Solve ``A @ X = B`` mod 2.

    ``B`` may be a vector (one right-hand side) or a matrix whose columns are
    right-hand sides. The particular solution has the same shape as ``B``
    with ``A.shape[1]`` rows, and sets all free variables to zero.
    """
    A = as_f2(A)
    B_arr = np.asarray(B)
    vec = B_arr.ndim == 1
    Bm = as_f2(B_arr.reshape(-1, 1) if vec else B_arr)
    rows, cols = A.shape
    if Bm.shape[0] != rows:
        raise F2Error(f"shape mismatch: A is {A.shape}, B has {Bm.shape[0]} rows")
    res = rref(A)
    TB = matmul(res.T, Bm)
    kernel = nullspace(A)
    if TB[res.rank:].any():
        return AffineSolution(None, kernel)
    X = zeros(cols, Bm.shape[1])
    for r, p in enumerate(res.pivots):
        X[p] = TB[r]
    return AffineSolution(X[:, 0].copy() if vec else X, kernel)


def lex_min_solution(A, b) -> np.ndarray | None:
    """Lexicographically smallest ``x`` with ``A @ x = b``, or ``None``.

    Vectors are compared as binary words with the first coordinate most
    significant. Pivots are taken from the rightmost columns so that free
    variables sit at the most significant positions, then each free variable
    is settled greedily from the left.
    """
    A = as_f2(A)
    b = as_f2_vec(b)
    rows, cols = A.shape
    aug = np.hstack([A, b.reshape(-1, 1)])
    res = rref(aug, columns=list(range(cols - 1, -1, -1)))
    R = res.R
    piv = res.pivots
    if R[res.rank:, cols].any():
        return None
    pivrow = {p: r for r, p in enumerate(piv)}
    x = zeros(1, cols)[0]
    # Each pivot variable equals rhs + sum of the free variables in its row.
    # Free variables are decided left to right; a pivot coordinate at index p
    # depends only on free variables with index < p (pivots were chosen from
    # the right), so the greedy choice below is exact.
    for c in range(cols):
        if c in pivrow:
            r = pivrow[c]
            val = int(R[r, cols])
            for f in range(c):
                if f not in pivrow and R[r, f]:
                    val ^= int(x[f])
            x[c] = val
        else:
            x[c] = 0
    return x


def lu_decompose(q):
    """PLU factorisation of an invertible matrix: ``P @ q == L @ U``.

    Returns ``(perm, L, U)`` where ``perm`` is a list with ``P[i, perm[i]] = 1``
    (row ``i`` of ``P @ q`` is row ``perm[i]`` of ``q``), ``L`` is unit lower
    triangular and ``U`` is unit upper triangular. Pivot rows are chosen as
    the lowest available index.
    """
    q = as_f2(q)
    n = q.shape[0]
    if q.shape != (n, n):
        raise F2Error("lu_decompose needs a square matrix")
    U = q.copy()
    L = identity(n)
    perm = list(range(n))
    for c in range(n):
        nz = np.nonzero(U[c:, c])[0]
        if nz.size == 0:
            raise F2Error("matrix is singular over F2")
        p = c + int(nz[0])
        if p != c:
            U[[c, p]] = U[[p, c]]
            perm[c], perm[p] = perm[p], perm[c]
            L[[c, p], :c] = L[[p, c], :c]
        for r in range(c + 1, n):
            if U[r, c]:
                U[r] ^= U[c]
                L[r, c] = 1
    return perm, L, U


def perm_matrix(perm) -> np.ndarray:
    n = len(perm)
    P = zeros(n, n)
    P[np.arange(n), np.asarray(perm)] = 1
    return P


def weight(v) -> int:
    return int(np.count_nonzero(np.asarray(v)))


def pack_rows(a) -> np.ndarray:
    """Pack each row (at most 64 columns) into a uint64 word, column 0 as bit 0."""
    a = as_f2(a)
    if a.shape[1] > 64:
        raise F2Error("pack_rows supports at most 64 columns")
    w = np.uint64(1) << np.arange(a.shape[1], dtype=np.uint64)
    return (a.astype(np.uint64) * w).sum(axis=1, dtype=np.uint64)


def span(a) -> np.ndarray:
    """All ``2**k`` codewords of the row space of a full-rank ``a``.

    Row ``s`` of the result is the combination whose coefficient for basis
    row ``j`` is bit ``j`` of ``s``.
    """
    a = as_f2(a)
    k, n = a.shape
    if k > 24:
        raise F2Error(f"refusing to enumerate 2^{k} codewords")
    out = zeros(1 << k, n)
    for j in range(k):
        size = 1 << j
        out[size: 2 * size] = out[:size] ^ a[j]
    return out


def format_matrix(a) -> str:
    a = as_f2(a)
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    lines += [" ".join(str(int(x)) for x in row) for row in a]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    """Parse the ``"r c"`` header plus rows of 0/1 format.

    Blank lines and ``#`` comments are ignored. Rows may be written with or
    without separating spaces.
    """
    mats = parse_matrices(text)
    if len(mats) != 1:
        raise F2Error(f"expected one matrix, found {len(mats)}")
    return mats[0]


def parse_matrices(text: str) -> list[np.ndarray]:
    toks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            toks.append((lineno, line))
    mats = []
    i = 0
    while i < len(toks):
        lineno, header = toks[i]
        parts = header.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise F2Error(f"line {lineno}: expected 'rows cols' header, got {header!r}")
        r, c = int(parts[0]), int(parts[1])
        rows = []
        for j in range(r):
            if i + 1 + j >= len(toks):
                raise F2Error(f"line {lineno}: matrix truncated after {j} rows")
            ln, body = toks[i + 1 + j]
            bits = body.replace(" ", "")
            if len(bits) != c or set(bits) - {"0", "1"}:
                raise F2Error(f"line {ln}: expected {c} binary entries, got {body!r}")
            rows.append([int(ch) for ch in bits])
        mats.append(np.array(rows, dtype=np.uint8).reshape(r, c))
        i += 1 + r
    return mats

"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line."""

import contextlib
import os
import time

import numpy as np
import pytest

from artifact import codes, f2core, lcs, oracle, qfd, rm, symplectic, transversal
from artifact.pauli import PauliOperator

from conftest import ACCEPTANCE, DATA

TOL = 1e-10


@contextlib.contextmanager
def criterion(num: int):
    """Record the outcome of criterion ``num``; the body may set ``info['detail']``."""
    info = {"detail": "ok"}
    try:
        yield info
    except BaseException as exc:
        ACCEPTANCE[num] = (False, f"{type(exc).__name__}: {exc}".splitlines()[0][:200])
        print(f"FAIL criterion {num}: {ACCEPTANCE[num][1]}")
        raise
    ACCEPTANCE[num] = (True, info["detail"])
    print(f"PASS criterion {num}: {info['detail']}")


TARGETS_642 = {
    "phase1": "css642_phase1.txt",
    "cz12": "css642_cz12.txt",
    "cnot21": "css642_cnot21.txt",
    "hadamard1": "css642_hadamard1.txt",
}


def _key(F):
    return np.asarray(F, dtype=np.uint8).tobytes()


def all_paulis(n):
    for idx in range(1 << (2 * n)):
        bits = [(idx >> j) & 1 for j in range(2 * n)]
        yield PauliOperator(np.array(bits[:n], dtype=np.uint8), np.array(bits[n:], dtype=np.uint8))


# 1 ---------------------------------------------------------------------------


def test_criterion_1_642_enumeration():
    with criterion(1) as info:
        code = codes.css_642()
        times = []
        for name, fname in TARGETS_642.items():
            with open(os.path.join(DATA, fname)) as fh:
                ref = {_key(F) for F in f2core.parse_matrices(fh.read())}
            start = time.perf_counter()
            res = lcs.synthesize_all(code, lcs.named_target(name, code.k))
            elapsed = time.perf_counter() - start
            times.append(elapsed)
            assert len(res) == 8, f"{name}: {len(res)} solutions"
            assert {_key(r.F) for r in res} == ref, f"{name}: solution set differs from reference"
            assert elapsed < 5.0, f"{name}: {elapsed:.2f} s"
        info["detail"] = f"8 solutions per target, sets match reference, max {max(times):.2f} s"


# 2 ---------------------------------------------------------------------------


def test_criterion_2_513_count():
    with criterion(2) as info:
        code = codes.code_513()
        start = time.perf_counter()
        res = lcs.synthesize_all(code, lcs.named_target("hadamard1", code.k))
        elapsed = time.perf_counter() - start
        assert len(res) == 1 << (4 * 5 // 2), f"{len(res)} solutions"
        assert len({_key(r.F) for r in res}) == len(res)
        assert all(r.verified["ok"] for r in res)
        assert elapsed < 120.0, f"{elapsed:.1f} s"
        info["detail"] = f"{len(res)} distinct verified solutions in {elapsed:.1f} s"


# 3 ---------------------------------------------------------------------------


def test_criterion_3_oracle_gate():
    with criterion(3) as info:
        code = codes.css_642()
        P = oracle.code_projector(code)
        count = 0
        for name in TARGETS_642:
            target = lcs.named_target(name, code.k)
            expected = lcs.assemble_constraints(code, target).expected
            res = lcs.synthesize_all(code, target, verify="none")
            for r in res:
                U = r.pauli_correction.to_matrix() @ oracle.circuit_unitary(r.circuit, code.n)
                for op, want in expected:
                    got = U @ op.to_matrix() @ U.conj().T
                    assert np.abs(got - want.to_matrix()).max() < TOL, f"{name} #{r.index}: {op}"
                assert np.abs(U @ P @ U.conj().T - P).max() < TOL, f"{name} #{r.index}: projector"
                count += 1
            if name == "phase1":
                best = res[0].circuit.as_tuples()
                assert best == [("P", (1,)), ("CZ", (1, 5)), ("P", (5,))], f"P1 minimal circuit {best}"
        info["detail"] = f"{count} circuits pass in the 64x64 oracle; P1 minimal circuit is P2 CZ26 P6"


# 4 ---------------------------------------------------------------------------


def test_criterion_4_transversal_conjugation():
    with criterion(4) as info:
        checks = 0
        for n in (1, 2, 3):
            paulis = list(all_paulis(n))
            U_T = oracle.transversal_powers_unitary(np.ones(n, dtype=int))
            for p in paulis:
                want = oracle.conjugate_dense(U_T, p)
                got = transversal.conj_transversal_T(p).to_dict()
                _assert_same_sum(got, want, f"T on {p}")
                checks += 1
            for idx in range(8**n):
                t = np.array([(idx >> (3 * j)) & 7 for j in range(n)])
                pat = transversal.TransversalPattern(t)
                U = oracle.transversal_powers_unitary(t)
                for p in paulis:
                    want = oracle.conjugate_dense(U, p)
                    got = transversal.conj_pattern(p, pat).to_dict()
                    _assert_same_sum(got, want, f"pattern {pat} on {p}")
                    checks += 1
        info["detail"] = f"{checks} conjugations match the dense oracle"


def _assert_same_sum(got: dict, want: dict, label: str):
    keys = set(got) | set(want)
    for k in keys:
        assert abs(got.get(k, 0) - want.get(k, 0)) < TOL, f"{label}: coefficient of {k}"


# 5 ---------------------------------------------------------------------------


def test_criterion_5_verdict_table():
    with criterion(5) as info:
        accept = {
            "[[6,2,2]]": codes.css_622(),
            "[[8,3,2]]": rm.qrm_construct(1, 3),
            "[[15,1,3]]": codes.css_15_1_3(),
            "[[16,3,2]]": codes.css_16_3_2(),
            "QRM(2,6)": rm.qrm_construct(2, 6),
        }
        reject = {"[[4,2,2]]": codes.css_422()}
        dense = 0
        for label, code in list(accept.items()) + list(reject.items()):
            verdict = transversal.check_transversal_T(code)
            assert verdict.supported == (label in accept), f"{label}: verdict {verdict.supported}"
            if code.n <= 8:
                U = oracle.transversal_powers_unitary(np.ones(code.n, dtype=int))
                assert oracle.check_projector_invariance(U, code) == verdict.supported, f"{label}: dense"
                dense += 1
        ident = {
            "[[6,2,2]]": (codes.css_622(), True),
            "[[128,21,4]]": (rm.qrm_construct(2, 7), True),
            "[[15,1,3]]": (codes.css_15_1_3(), False),
        }
        for label, (code, want) in ident.items():
            rep = transversal.check_logical_identity(code)
            assert rep.holds == want, f"{label}: logical identity {rep.holds}"
            if code.n <= 8:
                U = oracle.transversal_powers_unitary(np.ones(code.n, dtype=int))
                P = oracle.code_projector(code)
                M = P @ U @ P
                scalar = np.trace(M) / np.trace(P)
                assert (np.abs(M - scalar * P).max() < TOL) == want, f"{label}: dense identity"
                dense += 1
        info["detail"] = f"6 verdicts and 3 logical-identity results as expected; {dense} dense confirmations"


# 6 ---------------------------------------------------------------------------

QRM26_TERMS = [
    (1, 10, 15), (1, 11, 14), (1, 12, 13),
    (2, 7, 15), (2, 8, 14), (2, 9, 13),
    (3, 6, 15), (3, 8, 12), (3, 9, 11),
    (4, 6, 14), (4, 7, 12), (4, 9, 10),
    (5, 6, 13), (5, 7, 11), (5, 8, 10),
]


def test_criterion_6_qrm_logical_action():
    with criterion(6) as info:
        poly = rm.qrm_logical_action(2, 6)
        got = sorted(tuple(i + 1 for i in t) for t in poly.terms)
        assert got == sorted(QRM26_TERMS), f"terms {got}"
        assert len(poly) == 15
        constant, residues = rm.all_coset_residues(rm.qrm_construct(2, 6), 8)
        assert constant, "coset weights not constant mod 8"
        q = poly.evaluate_all()
        assert residues.size == 1 << 15
        assert np.array_equal(residues, (4 * q) % 8), "residues disagree with 4 q(f)"
        counts = (rm.partition_count(2, 6), rm.partition_count(1, 3), rm.partition_count(2, 4))
        assert counts == (15, 1, 3), f"partition counts {counts}"
        info["detail"] = "15 terms match; 32768 coset residues equal 4 q(f) mod 8; partition counts 15, 1, 3"


# 7 ---------------------------------------------------------------------------


def test_criterion_7_group_order():
    with criterion(7) as info:
        start = time.perf_counter()
        sizes = [len(symplectic.brute_force_group(n)) for n in (1, 2)]
        elapsed = time.perf_counter() - start
        assert sizes == [6, 720], f"sizes {sizes}"
        assert sizes == [symplectic.symplectic_group_order(n) for n in (1, 2)]
        assert elapsed < 10.0, f"{elapsed:.1f} s"
        info["detail"] = f"|Sp(2)| = 6, |Sp(4)| = 720 in {elapsed:.2f} s"


# 8 ---------------------------------------------------------------------------


def _random_R(rng, n, ell):
    M = 1 << ell
    R = rng.integers(0, M, (n, n))
    return (R + R.T) % M


def test_criterion_8_qfd_suite():
    with criterion(8) as info:
        ccz = np.zeros(8, dtype=int)
        ccz[7] = 1
        assert qfd.from_diagonal(ccz, 1).status == "not QFD"
        fit = qfd.from_diagonal([0, 2, 2, 2], 3)
        assert fit.ok and fit.gate.ell == 3
        assert fit.gate.R.tolist() == [[2, 3], [3, 2]]

        rng = np.random.default_rng(2024)
        for _ in range(500):
            n = int(rng.integers(1, 4))
            ell = int(rng.integers(2, 5))
            g = qfd.QfdGate(ell, _random_R(rng, n, ell))
            a = rng.integers(0, 2, n, dtype=np.uint8)
            b = rng.integers(0, 2, n, dtype=np.uint8)
            p = PauliOperator(a, b, int(rng.integers(0, 4)))
            U = np.diag(g.diagonal())
            want = U @ p.to_matrix() @ U.conj().T
            got = qfd.conjugate(g, p).matrix()
            assert np.abs(got - want).max() < TOL, f"recursion fails for {g} and {p}"

        for _ in range(200):
            _lemma_draw(rng)
        info["detail"] = "CCZ rejected, diag(1,i,i,i) gives [[2,3],[3,2]]; 500 recursion and 200 lemma draws hold"


def _lemma_draw(rng):
    n = int(rng.integers(1, 4))
    ell = int(rng.integers(2, 5))
    M = 1 << ell
    R = _random_R(rng, n, ell)
    a, b, c, d, e, f = (rng.integers(-3, 5, n) for _ in range(6))
    a0, b0, c0, d0, e0 = a % 2, b % 2, c % 2, d % 2, e % 2
    V = oracle.diagonal_bits(n)

    def q(v, x, y):
        return qfd.q_exponent(v, R, x, y, ell)

    def dg(vals):
        return np.diag(np.exp(2j * np.pi * np.asarray(vals) / M))

    # (a) shifting v by e0 is conjugation by E(e0, f).
    E = PauliOperator.from_integer_vectors(e0, f).to_matrix()
    lhs = dg([q(v ^ e0, a, b) for v in V])
    rhs = E @ dg([q(v, a, b) for v in V]) @ E
    assert np.abs(lhs - rhs).max() < TOL, "property (a)"

    # (b) both composition identities, pointwise in v.
    off = qfd.composition_offset(R, a, b, c, d, ell)
    for v in V:
        left = (q(v ^ c0, a, b) + q(v, c, d)) % M
        assert left == (q(v, a, b) + q(v ^ a0, c, d)) % M, "property (b), first form"
        assert left == (q(v, a + c, b + d) + off) % M, "property (b), second form"

    # (c) reordering the conjugated pair.
    U = np.diag(qfd.QfdGate(ell, R).diagonal())
    A = U @ PauliOperator.from_integer_vectors(c, d).to_matrix() @ U.conj().T
    B = U @ PauliOperator.from_integer_vectors(a, b).to_matrix() @ U.conj().T
    Ea = PauliOperator.from_integer_vectors(a0, (b0 + a0 @ R) % 2).to_matrix()
    Ec = PauliOperator.from_integer_vectors(c0, (d0 + c0 @ R) % 2).to_matrix()
    assert np.abs(A @ B - Ea @ A @ Ea @ Ec @ B @ Ec).max() < TOL, "property (c)"


# 9 ---------------------------------------------------------------------------

FACTOR_ORDER = ["LQ", "Omega", "TR", "Gk", "TR", "LQ"]


def test_criterion_9_decomposition_round_trip():
    with criterion(9) as info:
        rng = np.random.default_rng(99)
        dense = 0
        for trial in range(1000):
            n = 1 + trial % 6
            F = symplectic.random_symplectic(n, rng)
            factors = symplectic.decompose(F)
            kinds = [fac.kind for fac in factors]
            assert kinds == FACTOR_ORDER, f"factor order {kinds}"
            assert np.array_equal(symplectic.recompose(factors), F), "recompose differs"
            circ = symplectic.circuit_from_factors(factors)
            assert np.array_equal(circ.symplectic(), F), "circuit symplectic differs"
            if n <= 5:
                U = oracle.circuit_unitary(circ, n)
                assert oracle.induces_symplectic(U, F, n), "oracle action differs"
                dense += 1
        info["detail"] = f"1000 round trips exact; {dense} circuits match in the dense oracle"


# 10 --------------------------------------------------------------------------


def test_criterion_10_cross_level():
    with criterion(10) as info:
        fixtures = {
            "[[6,4,2]]": codes.css_642(),
            "[[4,2,2]]": codes.css_422(),
            "[[6,2,2]]": codes.css_622(),
            "[[5,1,3]]": codes.code_513(),
            "[[15,1,3]]": codes.css_15_1_3(),
            "[[16,3,2]]": codes.css_16_3_2(),
            "QRM(1,3)": rm.qrm_construct(1, 3),
        }
        for label, code in fixtures.items():
            z = transversal.check_z_rotation(code, 3).supported
            t = transversal.check_transversal_T(code).supported
            assert z == t, f"{label}: rotation {z} vs T {t}"
        for r, m in [(1, 3), (1, 4), (2, 6)]:
            v = transversal.check_z_rotation(rm.qrm_construct(r, m), m // r)
            assert v.supported, f"QRM({r},{m}) rejected at level {m // r}"
        assert transversal.selfdual_divisibility(rm.rm_generator(1, 3), 3)
        info["detail"] = f"{len(fixtures)} fixtures agree; QRM(1,3)@3, (1,4)@4, (2,6)@3 accepted; RM(1,3) divisible"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))

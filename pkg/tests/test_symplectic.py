import numpy as np
import pytest

from artifact import f2core, oracle, symplectic as sp
from artifact.pauli import PauliOperator, parse_pauli, symplectic_inner
from artifact.symplectic import Circuit, CircuitParseError, SymplecticError, parse_circuit


def test_omega_and_transvection_are_symplectic():
    rng = np.random.default_rng(0)
    assert sp.is_symplectic(sp.omega(3))
    for _ in range(20):
        h = rng.integers(0, 2, 6, dtype=np.uint8)
        T = sp.transvection(h)
        assert sp.is_symplectic(T)
        assert np.array_equal(f2core.matmul(T, T), np.eye(6, dtype=np.uint8))


def test_elementary_matrices():
    Q = np.array([[1, 1], [0, 1]], dtype=np.uint8)
    R = np.array([[1, 1], [1, 0]], dtype=np.uint8)
    for M in (sp.mat_LQ(Q), sp.mat_TR(R), sp.mat_Gk(2, 1)):
        assert sp.is_symplectic(M)
    with pytest.raises(SymplecticError):
        sp.mat_TR(np.array([[0, 1], [0, 0]], dtype=np.uint8))


def test_map_vector_uses_at_most_two_transvections():
    rng = np.random.default_rng(1)
    for _ in range(100):
        x = rng.integers(0, 2, 8, dtype=np.uint8)
        y = rng.integers(0, 2, 8, dtype=np.uint8)
        if not x.any() or not y.any():
            continue
        F = sp.map_vector(x, y)
        assert sp.is_symplectic(F)
        assert np.array_equal(f2core.vecmat(x, F), y)


def test_find_symplectic_many_constraints():
    rng = np.random.default_rng(2)
    for _ in range(50):
        G = sp.random_symplectic(3, rng)
        xs = list(np.eye(6, dtype=np.uint8)[:4])
        ys = [f2core.vecmat(x, G) for x in xs]
        F = sp.find_symplectic(xs, ys)
        assert sp.is_symplectic(F)
        for x, y in zip(xs, ys):
            assert np.array_equal(f2core.vecmat(x, F), y)


def test_find_symplectic_rejects_incompatible():
    x1, x2 = parse_pauli("XI").vector, parse_pauli("ZI").vector
    y1, y2 = parse_pauli("XI").vector, parse_pauli("XI").vector
    with pytest.raises(SymplecticError):
        sp.find_symplectic([x1, x2], [y1, y2])


def test_gram_schmidt_respects_fixed_slots():
    fixed = {("u", 0): parse_pauli("XX").vector, ("v", 0): parse_pauli("ZI").vector}
    U, V = sp.symplectic_gram_schmidt(n=2, fixed=fixed)
    B = np.vstack([U, V])
    assert sp.is_symplectic(B)
    assert np.array_equal(U[0], fixed[("u", 0)]) and np.array_equal(V[0], fixed[("v", 0)])


@pytest.mark.parametrize("free", [1, 2, 3])
def test_enumeration_count(free):
    n = 3
    U = np.eye(2 * n, dtype=np.uint8)[:n]
    V = np.eye(2 * n, dtype=np.uint8)[n:]
    I = list(range(n))
    J = list(range(n - free))
    mats = sp.enumerate_symplectic(U, V, I, J, list(U), [V[j] for j in J])
    assert len(mats) == 2 ** (free * (free + 1) // 2)
    assert len({m.tobytes() for m in mats}) == len(mats)
    assert all(sp.is_symplectic(m) for m in mats)


def test_group_order_formula():
    assert sp.symplectic_group_order(1) == 6
    assert sp.symplectic_group_order(2) == 720
    assert sp.symplectic_group_order(3) == 1451520


def test_decompose_round_trip_and_circuit():
    rng = np.random.default_rng(3)
    for n in range(1, 5):
        for _ in range(10):
            F = sp.random_symplectic(n, rng)
            factors, circ = sp.circuit_for(F)
            assert np.array_equal(sp.recompose(factors), F)
            assert np.array_equal(circ.symplectic(), F)
    with pytest.raises(SymplecticError):
        sp.decompose(np.ones((2, 2), dtype=np.uint8))


@pytest.mark.parametrize("name,qubits", [("H", (0,)), ("P", (1,)), ("Pdg", (0,)), ("CX", (0, 1)), ("CX", (1, 0)), ("CZ", (0, 1)), ("SWAP", (0, 1))])
def test_gate_symplectic_matches_oracle(name, qubits):
    c = Circuit(2).append(name, *qubits)
    U = oracle.circuit_unitary(c, 2)
    assert oracle.induces_symplectic(U, c.symplectic(), 2)


def test_conjugation_tracks_signs():
    rng = np.random.default_rng(4)
    names = ["H", "P", "Pdg", "X", "Y", "Z", "CX", "CZ", "SWAP"]
    for _ in range(30):
        c = Circuit(3)
        for _ in range(6):
            g = names[rng.integers(len(names))]
            if g in ("CX", "CZ", "SWAP"):
                q = rng.choice(3, 2, replace=False)
                c.append(g, int(q[0]), int(q[1]))
            else:
                c.append(g, int(rng.integers(3)))
        U = oracle.circuit_unitary(c, 3)
        p = PauliOperator(rng.integers(0, 2, 3), rng.integers(0, 2, 3))
        img = sp.conjugate_by_circuit(p, c)
        assert np.allclose(U @ p.to_matrix() @ U.conj().T, img.to_matrix())


def test_permutation_gate():
    c = Circuit(3).append("PERM", params=(1, 2, 0))
    U = oracle.circuit_unitary(c, 3)
    assert oracle.induces_symplectic(U, c.symplectic(), 3)
    assert c.depth() == 0


def test_cost_and_simplify():
    c = Circuit(3).append("H", 0).append("H", 0).append("CZ", 0, 1).append("CZ", 1, 0).append("P", 2)
    s = c.simplified()
    assert s.as_tuples() == [("P", (2,))]
    assert c.cost() == (2, 4)


def test_parse_circuit_text_and_json():
    c = parse_circuit("P2 CZ26 P6\n", 6)
    assert c.as_tuples() == [("P", (1,)), ("CZ", (1, 5)), ("P", (5,))]
    big = parse_circuit("CZ(10,11) PERM(2,1,3,4,5,6,7,8,9,10,11)", 11)
    assert big.gates[0].qubits == (9, 10)
    assert big.gates[1].params == (1, 0, 2, 3, 4, 5, 6, 7, 8, 9, 10)
    again = parse_circuit(c.dumps(), 6)
    assert again.as_tuples() == c.as_tuples()
    assert str(c) == "P2 CZ26 P6"


@pytest.mark.parametrize("text,line,col", [("H1\nQ2", 2, 1), ("CZ11", 1, 1), ("H9", 1, 1), ("H1 CZ1", 1, 4)])
def test_parse_circuit_errors(text, line, col):
    with pytest.raises(CircuitParseError) as exc:
        parse_circuit(text, 3)
    assert (exc.value.line, exc.value.column) == (line, col)


def test_symplectic_inner_preserved():
    rng = np.random.default_rng(5)
    F = sp.random_symplectic(4, rng)
    for _ in range(20):
        x = rng.integers(0, 2, 8)
        y = rng.integers(0, 2, 8)
        assert symplectic_inner(x, y) == symplectic_inner(f2core.vecmat(x, F), f2core.vecmat(y, F))

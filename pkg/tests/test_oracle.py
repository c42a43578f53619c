import numpy as np
import pytest

from artifact import codes, oracle
from artifact.pauli import PauliOperator, parse_pauli
from artifact.symplectic import Circuit


def test_gate_unitaries_are_unitary():
    for name in ("H", "P", "T", "Tdg", "Pdg"):
        U = oracle.gate_unitary(Circuit(2).append(name, 1).gates[0], 2)
        assert np.allclose(U @ U.conj().T, np.eye(4))


def test_cx_orientation():
    U = oracle.circuit_unitary(Circuit(2).append("CX", 0, 1))
    # |10> -> |11> with qubit 1 as the most significant bit.
    assert U[3, 2] == 1 and U[2, 3] == 1


def test_pauli_decompose_round_trip():
    rng = np.random.default_rng(0)
    terms = {}
    for _ in range(5):
        a = tuple(int(x) for x in rng.integers(0, 2, 2))
        b = tuple(int(x) for x in rng.integers(0, 2, 2))
        terms[(a, b)] = complex(rng.normal(), rng.normal())
    M = oracle.pauli_sum_matrix(terms, 2)
    back = oracle.pauli_decompose(M, 2)
    for k, v in terms.items():
        assert abs(back[k] - v) < 1e-12


def test_conjugate_dense_by_hadamard():
    H = oracle.GATES_1Q["H"]
    out = oracle.conjugate_dense(H, parse_pauli("X"))
    assert set(out) == {((0,), (1,))} and abs(out[((0,), (1,))] - 1) < 1e-12


def test_projector_invariance():
    code = codes.css_422()
    assert oracle.check_projector_invariance(np.eye(16), code)
    U = oracle.transversal_powers_unitary(np.ones(4, dtype=int))
    assert not oracle.check_projector_invariance(U, code)


def test_z_rotation_unitary():
    U = oracle.z_rotation_unitary(1, np.pi / 8)
    assert np.allclose(U, np.diag([np.exp(-1j * np.pi / 8), np.exp(1j * np.pi / 8)]))


def test_size_cap():
    with pytest.raises(oracle.OracleSizeError):
        oracle.pauli_matrix(PauliOperator.identity(13))


def test_induces_symplectic_rejects_wrong_matrix():
    U = oracle.GATES_1Q["H"]
    assert oracle.induces_symplectic(U, np.array([[0, 1], [1, 0]], dtype=np.uint8), 1)
    assert not oracle.induces_symplectic(U, np.eye(2, dtype=np.uint8), 1)

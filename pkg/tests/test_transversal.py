import warnings

import numpy as np
import pytest

from artifact import codes, f2core, oracle, rm, symplectic
from artifact import transversal as tv
from artifact.pauli import PauliOperator, parse_pauli
from artifact.stabilizer import StabilizerCode
from artifact.transversal import TransversalError, TransversalPattern


def preserved(U, code):
    return oracle.check_projector_invariance(U, code)


def random_code(rng, n):
    F = symplectic.random_symplectic(n, rng)
    r = int(rng.integers(1, n + 1))
    gens = [PauliOperator.from_vector(F[i], 2 * int(rng.integers(2))) for i in range(r)]
    return StabilizerCode(n, gens)


def random_css(rng, n):
    k2 = int(rng.integers(1, n // 2 + 1))
    while True:
        X = rng.integers(0, 2, (k2, n), dtype=np.uint8)
        if f2core.rank(X) == k2:
            break
    D = f2core.nullspace(X)
    kz = int(rng.integers(1, D.shape[0] + 1))
    while True:
        Z = D[rng.permutation(D.shape[0])[:kz]]
        if f2core.rank(Z) == kz:
            break
    zero = np.zeros(n, dtype=np.uint8)
    gens = [PauliOperator(x, zero) for x in X]
    gens += [PauliOperator(zero, z, 2 * int(rng.integers(2))) for z in Z]
    return StabilizerCode(n, gens)


def test_pattern_parsing():
    t = TransversalPattern.parse("1 0 7,1")
    assert t.t.tolist() == [1, 0, 7, 1] and t.is_restricted
    assert str(TransversalPattern.from_parts([1, 0, 1], [0, 1, 0])) == "171"
    with pytest.raises(TransversalError, match="column 2"):
        TransversalPattern.parse("18")
    with pytest.raises(TransversalError):
        TransversalPattern.from_parts([1, 1], [1, 0])
    assert not TransversalPattern.parse("12").is_restricted


def test_conjugation_of_x_by_t():
    img = tv.conj_transversal_T(parse_pauli("X")).to_dict()
    assert set(img) == {((1,), (0,)), ((1,), (1,))}
    assert abs(img[((1,), (0,))] - 1 / np.sqrt(2)) < 1e-12
    assert abs(img[((1,), (1,))] - 1 / np.sqrt(2)) < 1e-12


def test_conj_pattern_matches_oracle_on_samples():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        t = rng.integers(0, 8, n)
        p = PauliOperator(rng.integers(0, 2, n), rng.integers(0, 2, n), int(rng.integers(4)))
        got = tv.conj_pattern(p, TransversalPattern(t)).to_dict()
        want = oracle.conjugate_dense(oracle.transversal_powers_unitary(t), p)
        for key in set(got) | set(want):
            assert abs(got.get(key, 0) - want.get(key, 0)) < 1e-10


@pytest.mark.parametrize(
    "make,expected",
    [
        (codes.css_622, True),
        (lambda: rm.qrm_construct(1, 3), True),
        (codes.css_15_1_3, True),
        (codes.css_16_3_2, True),
        (codes.css_422, False),
        (codes.css_642, False),
        (codes.code_513, False),
    ],
)
def test_fixture_verdicts(make, expected):
    code = make()
    v = tv.check_transversal_T(code)
    assert v.supported == expected
    if code.n <= 8:
        assert preserved(oracle.transversal_powers_unitary(np.ones(code.n, dtype=int)), code) == expected


def test_sign_correction_for_622_with_positive_signs():
    from artifact.stabilizer import css_construct

    C1 = np.array([[1, 1, 0, 0, 0, 0], [0, 0, 1, 1, 0, 0], [0, 0, 0, 0, 1, 1]], dtype=np.uint8)
    C2 = np.array([[1, 1, 1, 1, 1, 1]], dtype=np.uint8)
    code = css_construct(C1, C2)
    v = tv.check_transversal_T(code)
    assert not v.supported and v.necessary_signs_ok is not None
    assert str(v.pauli_correction) == "+IXIXIX"
    X = v.pauli_correction.to_matrix()
    U = oracle.transversal_powers_unitary(np.ones(code.n, dtype=int))
    assert not preserved(U, code)
    assert preserved(X @ U @ X, code)


def test_random_codes_agree_with_dense_oracle():
    rng = np.random.default_rng(11)
    for it in range(120):
        n = int(rng.integers(2, 7))
        code = random_code(rng, n) if it % 2 else random_css(rng, n)
        v = tv.check_transversal_T(code)
        assert v.supported == preserved(oracle.transversal_powers_unitary(np.ones(n, dtype=int)), code)
        if v.pauli_correction is not None and not v.supported:
            X = v.pauli_correction.to_matrix()
            assert preserved(X @ oracle.transversal_powers_unitary(np.ones(n, dtype=int)) @ X, code)
        t = rng.choice([0, 1, 7], n)
        vp = tv.check_pattern(code, TransversalPattern(t))
        assert vp.supported == preserved(oracle.transversal_powers_unitary(t), code)
        vz = tv.check_z_rotation(code, 4)
        assert vz.supported == preserved(oracle.qfd_unitary(np.eye(n, dtype=int), 4), code)
        assert tv.check_z_rotation(code, 3).supported == v.supported


def test_general_powers_are_rejected():
    with pytest.raises(TransversalError):
        tv.check_pattern(codes.css_422(), TransversalPattern([1, 2, 1, 2]))
    with pytest.raises(TransversalError):
        tv.check_pattern(codes.css_422(), TransversalPattern([1, 1]))


def test_z_rotation_levels():
    assert tv.check_z_rotation(rm.qrm_construct(1, 4), 4).supported
    assert not tv.check_z_rotation(rm.qrm_construct(1, 3), 4).supported
    with pytest.raises(TransversalError):
        tv.check_z_rotation(codes.css_422(), 2)


def test_selfdual_divisibility():
    G = rm.rm_generator(1, 3)
    assert tv.selfdual_divisibility(G, 3)
    assert not tv.selfdual_divisibility(G, 4)
    with pytest.raises(TransversalError):
        tv.selfdual_divisibility(np.array([[1, 1, 0, 0]], dtype=np.uint8), 2)


def test_triorthogonality():
    assert tv.is_triorthogonal(rm.rm_generator(1, 4))
    assert not tv.is_triorthogonal(rm.rm_generator(1, 3))


def test_css_t():
    css = codes.css_15_1_3().css
    assert tv.is_css_t(css.C1_gen, css.C2_gen).holds
    css = codes.css_422().css
    rep = tv.is_css_t(css.C1_gen, css.C2_gen)
    assert not rep.holds and rep.witness is not None


def test_selfdual_lemma_conditions_agree():
    for G in (rm.rm_generator(1, 3), np.array([[1, 1, 1, 1, 0, 0], [0, 0, 1, 1, 1, 1]], dtype=np.uint8)):
        first, second, third = tv.lemma_selfdual_conditions(G)
        assert first == second == third


def test_logical_identity():
    assert tv.check_logical_identity(codes.css_622()).holds
    rep = tv.check_logical_identity(codes.css_15_1_3())
    assert not rep.holds and "condition 1" in rep.failing
    assert not tv.check_logical_identity(rm.qrm_construct(2, 6)).holds


def test_logical_transversal_t():
    # The 15-qubit code realises logical T^dagger, so the exact T condition fails on weight 15.
    rep = tv.check_logical_transversal_T(codes.css_15_1_3())
    assert rep.triorthogonal and not rep.weight_condition
    assert not tv.check_logical_transversal_T(codes.css_642()).holds


def test_drop_b_block_and_degeneracy():
    code = codes.css_622()
    assert tv.is_nondegenerate(code, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        reduced = tv.drop_b_block(code, 2)
    assert reduced.n == code.n
    assert tv.check_transversal_T(reduced).supported
    # An extra qubit fixed by Z gives a weight-one stabilizer, below distance 2.
    from artifact.stabilizer import stabilizer_code

    deg = stabilizer_code(["XXXXI", "ZZZZI", "IIIIZ"])
    assert not tv.is_nondegenerate(deg, 2)
    with pytest.warns(UserWarning, match="degenerate"):
        tv.drop_b_block(deg, 2)


def test_verdict_json_is_plain():
    import json

    v = tv.check_transversal_T(codes.css_622())
    json.dumps(v.to_json())
    json.dumps(tv.check_z_rotation(codes.css_622(), 3).to_json())

import numpy as np
import pytest

from artifact import f2core, rm
from artifact.rm import RMError


@pytest.mark.parametrize("r,m", [(0, 3), (1, 3), (2, 4), (1, 5)])
def test_rm_dimension_and_distance(r, m):
    from math import comb

    G = rm.rm_generator(r, m)
    assert f2core.rank(G) == sum(comb(m, j) for j in range(r + 1))
    assert rm.min_distance(G) == 1 << (m - r)


def test_rm_dual_relation():
    G = rm.rm_generator(1, 4)
    H = rm.rm_generator(2, 4)
    assert not f2core.matmul(G, H.T).any()


def test_ev_monomial():
    assert rm.ev(rm.monomial(3, [1])).tolist() == [0, 1, 0, 1, 0, 1, 0, 1]
    assert rm.ev(rm.monomial(3, [1, 3])).tolist() == [0, 0, 0, 0, 0, 1, 0, 1]
    with pytest.raises(RMError):
        rm.monomial(3, [4])


@pytest.mark.parametrize("r,m", [(1, 3), (1, 4), (2, 4), (2, 6)])
def test_qrm_parameters(r, m):
    code = rm.qrm_construct(r, m)
    n, k, d = rm.qrm_parameters(r, m)
    assert (code.n, code.k) == (n, k)
    if n <= 16:
        from artifact.stabilizer import code_distance

        assert code_distance(code, max_n=16) == d


def test_qrm_rejects_bad_parameters():
    with pytest.raises(RMError):
        rm.qrm_construct(3, 4)
    with pytest.raises(RMError):
        rm.qrm_logical_action(2, 5)


def test_partition_counts():
    assert rm.partition_count(2, 6) == 15
    assert rm.partition_count(1, 3) == 1
    assert rm.partition_count(2, 4) == 3
    assert rm.partition_count(3, 9) == 280


def test_logical_action_small_cases():
    p = rm.qrm_logical_action(1, 3)
    assert p.terms == [(0, 1, 2)]
    assert p.format() == "v1 v2 v3"
    p = rm.qrm_logical_action(2, 4)
    assert len(p) == 3 and p.format("monomial").startswith("v_{x1x2} v_{x3x4}")


@pytest.mark.parametrize("r,m", [(2, 4), (2, 6)])
def test_residues_match_polynomial(r, m):
    code = rm.qrm_construct(r, m)
    ell = m // r
    modulus = 1 << ell
    constant, residues = rm.all_coset_residues(code, modulus)
    assert constant
    q = rm.qrm_logical_action(r, m).evaluate_all()
    assert np.array_equal(residues, (q * (modulus // 2)) % modulus)


@pytest.mark.parametrize("m", [3, 4])
def test_first_order_residues_are_complemented(m):
    # For r = 1 every nonzero coset is an affine hyperplane of weight 2^(m-1),
    # so the phase pattern is (1, -1, ..., -1): the multi-controlled Z up to
    # a logical X conjugation and a global sign.
    code = rm.qrm_construct(1, m)
    modulus = 1 << m
    constant, residues = rm.all_coset_residues(code, modulus)
    assert constant
    q = rm.qrm_logical_action(1, m).evaluate_all()
    flipped = q[::-1]
    assert np.array_equal(residues, ((1 - flipped) * (modulus // 2)) % modulus)


def test_single_coset_residue():
    code = rm.qrm_construct(1, 3)
    rep = rm.coset_weight_residue(code, [1, 1, 1], 8)
    assert rep.constant and rep.residue == 4
    assert rm.coset_weight_residue(code, [0, 0, 0], 8).residue == 0


def test_qrm26_minus_one_count():
    # Number of logical basis states picking up a -1 phase.
    assert int(rm.qrm_logical_action(2, 6).evaluate_all().sum()) == 13888

import numpy as np
import pytest

hypothesis = pytest.importorskip("hypothesis")
from hypothesis import given, settings  # noqa: E402
from hypothesis import strategies as st  # noqa: E402

from artifact import f2core, symplectic  # noqa: E402
from artifact.pauli import PauliOperator  # noqa: E402


def pauli(n):
    bits = st.lists(st.integers(0, 1), min_size=2 * n, max_size=2 * n)
    return st.builds(lambda b, k: PauliOperator(np.array(b[:n]), np.array(b[n:]), k), bits, st.integers(0, 3))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_multiplication_is_associative(data):
    n = data.draw(st.integers(1, 4))
    p, q, r = (data.draw(pauli(n)) for _ in range(3))
    assert (p * q) * r == p * (q * r)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_decomposition_round_trip(n, seed):
    F = symplectic.random_symplectic(n, np.random.default_rng(seed))
    assert np.array_equal(symplectic.recompose(symplectic.decompose(F)), F)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_rank_nullity(rows, cols, seed):
    A = np.random.default_rng(seed).integers(0, 2, (rows, cols), dtype=np.uint8)
    assert f2core.rank(A) + f2core.nullspace(A).shape[0] == cols

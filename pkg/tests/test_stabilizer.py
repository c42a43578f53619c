import os

import numpy as np
import pytest

from artifact import codes, f2core, oracle
from artifact.pauli import parse_pauli
from artifact.stabilizer import (
    CodeError,
    CodeParseError,
    check_normalizes,
    code_distance,
    css_construct,
    format_code,
    parse_code,
    stabilizer_code,
    syndrome,
)

from conftest import DATA

FIXTURES = {
    "642": (codes.css_642, 6, 4, 2),
    "422": (codes.css_422, 4, 2, 2),
    "622": (codes.css_622, 6, 2, 2),
    "513": (codes.code_513, 5, 1, 3),
    "15_1_3": (codes.css_15_1_3, 15, 1, 3),
    "16_3_2": (codes.css_16_3_2, 16, 3, 2),
}


@pytest.mark.parametrize("label", list(FIXTURES))
def test_fixture_parameters(label):
    make, n, k, d = FIXTURES[label]
    code = make()
    assert (code.n, code.k) == (n, k)
    if n <= 16:
        assert code_distance(code, max_n=16) == d


@pytest.mark.parametrize("label", ["642", "622", "513"])
def test_projector_forms_agree(label):
    code = FIXTURES[label][0]()
    P = oracle.code_projector(code)
    assert np.allclose(P, oracle.code_projector_sum(code))
    assert np.isclose(np.trace(P).real, 2 ** code.k)


def test_logical_operators_pair_correctly():
    for make, *_ in FIXTURES.values():
        code = make()
        for i, x in enumerate(code.logical_x):
            for j, z in enumerate(code.logical_z):
                assert x.commutes_with(z) == (i != j)
            for g in code.generators:
                assert x.commutes_with(g)


def test_syndrome_detects_single_errors():
    code = codes.code_513()
    seen = set()
    for q in range(5):
        for letter in "XYZ":
            s = syndrome(code, parse_pauli("I" * q + letter + "I" * (4 - q)))
            seen.add(tuple(s))
    assert len(seen) == 15 and (0, 0, 0, 0) not in seen


def test_css_construct_checks():
    C1 = np.array([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]], dtype=np.uint8)
    C2 = np.array([[1, 1, 1, 1]], dtype=np.uint8)
    code = css_construct(C1, C2)
    assert (code.n, code.k, code.r) == (4, 2, 2)
    with pytest.raises(CodeError):
        css_construct(C2, C1)
    with pytest.raises(CodeError):
        css_construct(C1, C1)


def test_stabilizer_must_commute():
    with pytest.raises(CodeError):
        stabilizer_code(["XI", "ZI"])


def test_normalizer_classification():
    code = codes.css_422()
    I = np.eye(8, dtype=np.uint8)
    assert check_normalizes(code, I) == ("centralizes", None)
    # Transversal Hadamard swaps the X- and Z-type generators.
    H = np.zeros((8, 8), dtype=np.uint8)
    H[:4, 4:] = np.eye(4, dtype=np.uint8)
    H[4:, :4] = np.eye(4, dtype=np.uint8)
    assert check_normalizes(code, H)[0] == "normalizes-only"


def test_general_file_round_trip():
    code = codes.css_642()
    again = parse_code(format_code(code))
    assert [str(g) for g in again.generators] == [str(g) for g in code.generators]
    assert [str(p) for p in again.logical_z] == [str(p) for p in code.logical_z]


def test_css_file_form():
    with open(os.path.join(DATA, "422_css.stab")) as fh:
        code = parse_code(fh.read())
    assert code.css is not None and (code.n, code.k) == (4, 2)


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("3 2 1\n+XXI\n+IZZ\n", 4, None),
        ("2 1 1\n+XX\n+XQ\n+ZZ\n", 3, 3),
        ("2 1 2\n", 1, 1),
        ("2 1 1\n+XXX\n+XI\n+ZI\n", 2, 1),
    ],
)
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(CodeParseError) as exc:
        parse_code(text)
    if line != 4:
        assert exc.value.line == line
    if col is not None:
        assert exc.value.column == col


def test_distance_skips_large_codes():
    assert code_distance(codes.css_16_3_2(), max_n=10) is None


def test_in_stabilizer_group():
    code = codes.css_422()
    assert code.in_stabilizer_group(parse_pauli("XXXX"))
    assert not code.in_stabilizer_group(parse_pauli("-XXXX"))
    assert not code.in_stabilizer_group(parse_pauli("XXII"))
    assert f2core.rank(code.stabilizer_matrix()) == 2

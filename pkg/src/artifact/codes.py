"""Small library of named codes used in examples and tests."""

from __future__ import annotations

import numpy as np

from .stabilizer import StabilizerCode, css_construct, stabilizer_code


def _rows(*words: str) -> np.ndarray:
    return np.array([[int(c) for c in w] for w in words], dtype=np.uint8)


def css_642() -> StabilizerCode:
    """[[6,4,2]]: single-parity-check code, stabilizers X^6 and Z^6."""
    C1 = _rows("110000", "101000", "100100", "100010", "100001")
    C2 = _rows("111111")
    return css_construct(
        C1,
        C2,
        coset_gen=_rows("110000", "101000", "100100", "100010"),
        z_coset_gen=_rows("010001", "001001", "000101", "000011"),
        name="[[6,4,2]]",
    )


def css_422() -> StabilizerCode:
    """[[4,2,2]] with stabilizers XXXX and ZZZZ."""
    return css_construct(
        _rows("1100", "1010", "1001"),
        _rows("1111"),
        coset_gen=_rows("1100", "1010"),
        z_coset_gen=_rows("0101", "0011"),
        name="[[4,2,2]]",
    )


def css_622() -> StabilizerCode:
    """[[6,2,2]] with X^6 and the negative pair checks -Z1Z2, -Z3Z4, -Z5Z6."""
    C1 = _rows("110000", "001100", "000011")
    C2 = _rows("111111")
    return css_construct(
        C1,
        C2,
        z_signs=[-1, -1, -1],
        z_gen=_rows("110000", "001100", "000011"),
        coset_gen=_rows("110000", "001100"),
        name="[[6,2,2]]",
    )


def code_513() -> StabilizerCode:
    """The perfect [[5,1,3]] code."""
    return stabilizer_code(
        ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"], ["XXXXX"], ["ZZZZZ"], name="[[5,1,3]]"
    )


def css_15_1_3() -> StabilizerCode:
    """[[15,1,3]]: punctured RM(1,4) over its even subcode (shortened simplex pair)."""
    from .rm import rm_generator

    G = rm_generator(1, 4)[:, 1:]
    C1 = G
    C2 = G[1:]
    return css_construct(C1, C2, coset_gen=np.ones((1, 15), dtype=np.uint8), name="[[15,1,3]]")


def css_16_3_2() -> StabilizerCode:
    """[[16,3,2]] decreasing-monomial code: C2 = <1, x1, x2>, logical X = <x3, x4, x1x2>."""
    from .rm import ev, monomial

    m = 4
    C2 = np.array([ev(monomial(m, ())), ev(monomial(m, (1,))), ev(monomial(m, (2,)))], dtype=np.uint8)
    GX = np.array([ev(monomial(m, (3,))), ev(monomial(m, (4,))), ev(monomial(m, (1, 2)))], dtype=np.uint8)
    GZ = np.array([ev(monomial(m, (1, 2, 4))), ev(monomial(m, (1, 2, 3))), ev(monomial(m, (3, 4)))], dtype=np.uint8)
    C1 = np.vstack([C2, GX])
    return css_construct(C1, C2, coset_gen=GX, z_coset_gen=GZ, name="[[16,3,2]]")


def trivial_code() -> StabilizerCode:
    """One physical qubit, no stabilizers, logical X = X and Z = Z."""
    return stabilizer_code([], ["X"], ["Z"], name="[[1,1,1]]")

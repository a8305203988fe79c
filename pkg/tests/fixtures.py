"""Matrices of the running example, written row by row; '.' is -inf, 'i' is inf."""
from maxplus_bigo.semiring import INF, NEG_INF, Omega

_CELLS = {".": NEG_INF, "0": Omega.ZERO, "1": Omega.ONE, "i": INF}


def om(text):
    return tuple(tuple(_CELLS[c] for c in row.split()) for row in text.split(";"))


E_A = om("0 . . .; . 1 . .; . . 0 .; . . . 0")
E_B = om("0 0 . .; . . 0 .; . . 0 .; . . . 1")
E_A_E_B = om("0 0 . .; . . 1 .; . . 0 .; . . . 1")
E_B_E_B = om("0 0 0 .; . . 0 .; . . 0 .; . . . 1")
E_A_STAB = om("0 . . .; . i . .; . . 0 .; . . . 0")
E_A_STAB_E_B = om("0 0 . .; . . i .; . . 0 .; . . . 1")
LOOP = om("0 0 i .; . . i .; . . 0 .; . . . 1")  # e_a# e_b e_a# e_b
LOOP_STAB = om("0 0 i .; . . i .; . . 0 .; . . . i")
LOOP_FLAT = om("0 0 1 .; . . 1 .; . . 0 .; . . . 1")

# reference beta labels along the fault path of the (a^n b a^n b)^n tree
BETA_2 = E_A_STAB
BETA_3 = E_A_STAB_E_B
BETA_4_REFERENCE = LOOP  # has inf at (q2, q3); the product rule gives 1 there
BETA_4_DERIVED = om("0 0 i .; . . 1 .; . . 0 .; . . . 1")  # e_a e_b (x) beta_3
BETA_5 = LOOP_FLAT

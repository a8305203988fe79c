"""Exact arithmetic over N_max = N u {-inf}, the four-valued semiring Omega
and its three-valued sub-semiring Omega-bar.

Matrices are plain tuples of row tuples.  Omega values are ``Omega`` members,
N_max values are Python ints or the ``MINUS_INF`` singleton.
"""
from __future__ import annotations

from enum import IntEnum
from typing import Callable, NamedTuple, Sequence, Tuple


class _MinusInfinity:
    """The absorbing bottom element of N_max.

    Compares below every integer and absorbs addition, so ``max`` and ``+``
    work on mixed int/-inf operands without special-casing.
    """

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "MINUS_INF"

    def __str__(self):
        return "-inf"

    def __reduce__(self):
        return (_MinusInfinity, ())

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("-inf")

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __add__(self, other):
        return self

    __radd__ = __add__


MINUS_INF = _MinusInfinity()


class Omega(IntEnum):
    """Elements of Omega, ordered -inf < 0 < 1 < inf."""

    NEG_INF = -1
    ZERO = 0
    ONE = 1
    INF = 2

    def __str__(self):
        return _OMEGA_NAMES[self]

    __repr__ = __str__


_OMEGA_NAMES = {Omega.NEG_INF: "-inf", Omega.ZERO: "0", Omega.ONE: "1", Omega.INF: "inf"}

NEG_INF, ZERO, ONE, INF = Omega.NEG_INF, Omega.ZERO, Omega.ONE, Omega.INF

OMEGA_VALUES = (NEG_INF, ZERO, ONE, INF)
BAR_VALUES = (NEG_INF, ZERO, ONE)

Matrix = Tuple[Tuple, ...]


# -- scalars -----------------------------------------------------------------

def omega_add(a: Omega, b: Omega) -> Omega:
    return a if a >= b else b


def omega_mul(a: Omega, b: Omega) -> Omega:
    # -inf absorbs; otherwise 0 is neutral and 1 + 1 = 1, so the sum is the max.
    if a is NEG_INF or b is NEG_INF:
        return NEG_INF
    return a if a >= b else b


def omega_stab(a: Omega) -> Omega:
    """Stabilisation of a scalar: 1 and inf become inf."""
    return INF if a >= ONE else a


def bar(x) -> Omega:
    """Project an N_max or Omega value into Omega-bar."""
    if x is MINUS_INF or x < 0:
        return NEG_INF
    if x == 0:
        return ZERO
    return ONE


def nmax_add(a, b):
    return a if a >= b else b


def nmax_mul(a, b):
    return a + b


def nmax(x):
    """Validate and normalise an N_max value (``None`` maps to -inf)."""
    if x is None or x is MINUS_INF:
        return MINUS_INF
    if isinstance(x, float) and x == float("-inf"):
        return MINUS_INF
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"not an N_max value: {x!r}")
    if x < 0:
        raise ValueError(f"finite N_max values must be >= 0, got {x}")
    return x


def is_finite(x) -> bool:
    return x is not MINUS_INF and x >= 0


class Semiring(NamedTuple):
    name: str
    add: Callable
    mul: Callable
    zero: object
    one: object


NMAX = Semiring("nmax", nmax_add, nmax_mul, MINUS_INF, 0)
OMEGA = Semiring("omega", omega_add, omega_mul, NEG_INF, ZERO)


# -- matrices ----------------------------------------------------------------

def dims(M: Matrix) -> Tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def make_matrix(rows: Sequence[Sequence]) -> Matrix:
    rows = tuple(tuple(r) for r in rows)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def identity(n: int, sr: Semiring = OMEGA) -> Matrix:
    return tuple(tuple(sr.one if i == j else sr.zero for j in range(n)) for i in range(n))


def constant(rows: int, cols: int, value) -> Matrix:
    return tuple((value,) * cols for _ in range(rows))


def _omega_dot(row, col):
    best = NEG_INF
    for a, b in zip(row, col):
        if a is NEG_INF or b is NEG_INF:
            continue
        v = a if a >= b else b
        if v > best:
            best = v
            if best is INF:
                break
    return best


def _nmax_dot(row, col):
    best = MINUS_INF
    for a, b in zip(row, col):
        if a is MINUS_INF or b is MINUS_INF:
            continue
        v = a + b
        if best is MINUS_INF or v > best:
            best = v
    return best


def mat_mul(M: Matrix, N: Matrix, sr: Semiring = OMEGA) -> Matrix:
    """Max-plus product of ``M`` and ``N`` in semiring ``sr``."""
    if not M:
        return ()
    if len(M[0]) != len(N):
        raise ValueError(f"dimension mismatch: {dims(M)} x {dims(N)}")
    cols = tuple(zip(*N))
    if sr is OMEGA:
        dot = _omega_dot
    elif sr is NMAX:
        dot = _nmax_dot
    else:
        def dot(row, col):
            acc = sr.zero
            for a, b in zip(row, col):
                acc = sr.add(acc, sr.mul(a, b))
            return acc
    return tuple(tuple(dot(row, col) for col in cols) for row in M)


def mat_power(M: Matrix, k: int, sr: Semiring = NMAX) -> Matrix:
    """``M`` to the ``k``-th power by repeated squaring (``k >= 0``)."""
    if k < 0:
        raise ValueError("negative exponent")
    result = identity(len(M), sr)
    base = M
    while k:
        if k & 1:
            result = mat_mul(result, base, sr)
        k >>= 1
        if k:
            base = mat_mul(base, base, sr)
    return result


def mat_bar(M: Matrix) -> Matrix:
    return tuple(tuple(bar(x) for x in row) for row in M)


def stab_diagonal(M: Matrix) -> Matrix:
    return tuple(
        tuple(omega_stab(x) if i == j else x for j, x in enumerate(row))
        for i, row in enumerate(M)
    )


def bar_off_diagonal(M: Matrix) -> Matrix:
    return tuple(
        tuple(x if i == j else bar(x) for j, x in enumerate(row))
        for i, row in enumerate(M)
    )


def to_omega(M: Matrix) -> Matrix:
    """Coerce a matrix of small ints (-1, 0, 1, 2) into ``Omega`` members."""
    return tuple(tuple(Omega(x) for x in row) for row in M)


def max_finite_entry(M: Matrix) -> int:
    """Largest finite entry of an N_max matrix, or 0 if there is none."""
    best = 0
    for row in M:
        for x in row:
            if x is not MINUS_INF and x > best:
                best = x
    return best


def format_matrix(M: Matrix) -> str:
    cells = [[str(x) for x in row] for row in M]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)

"""
Exact arithmetic on small integer matrices.

Handles:
- Immutable square matrices over Python's unbounded integers
- Products, powers, determinants and unimodular inverses
- Smith normal form with deterministic pivoting
- Cokernel orders, with INFINITE for singular matrices
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

from .errors import MalformedInput, NotUnimodular, verify

logger = logging.getLogger(__name__)


class _Infinite:
    """The distinguished value INFINITE: above every integer, absorbing under +."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITE"

    def __str__(self) -> str:
        return "infinite"

    def __hash__(self) -> int:
        return hash("INFINITE")

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INFINITE = _Infinite()

# A Reidemeister number or cokernel order
Count = Union[int, _Infinite]


def add_counts(*values: Count) -> Count:
    """Sum counts, INFINITE absorbing."""
    total: Count = 0
    for value in values:
        total = total + value if total is not INFINITE else INFINITE
    return total


@dataclass(frozen=True)
class IntMatrix:
    """Square matrix of unbounded integers, stored row-major."""

    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise MalformedInput(f"matrix must be square and non-empty, got {self.rows!r}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, *entries: int) -> "IntMatrix":
        """Build from row-major entries: of(a, b, c, d) is (a b; c d)."""
        n = 1
        while n * n < len(entries):
            n += 1
        if n * n != len(entries):
            raise MalformedInput(f"{len(entries)} entries do not form a square matrix")
        return cls(tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "IntMatrix":
        return cls(tuple((0,) * n for _ in range(n)))

    @classmethod
    def diag(cls, *entries: int) -> "IntMatrix":
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def entries(self) -> Tuple[int, ...]:
        return tuple(v for row in self.rows for v in row)

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.rows[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        _same_size(self, other)
        return IntMatrix(tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)
        ))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(-v for v in row) for row in self.rows))

    def __rmul__(self, scalar: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(scalar * v for v in row) for row in self.rows))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def is_scalar(self) -> bool:
        n = self.size
        return all(
            self.rows[i][j] == (self.rows[0][0] if i == j else 0)
            for i in range(n) for j in range(n)
        )

    def reduce_mod(self, m: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(v % m for v in row) for row in self.rows))

    def __str__(self) -> str:
        return "(" + "; ".join(" ".join(str(v) for v in row) for row in self.rows) + ")"


def _same_size(x: IntMatrix, y: IntMatrix) -> None:
    if x.size != y.size:
        raise MalformedInput(f"size mismatch: {x.size}x{x.size} vs {y.size}x{y.size}")


def mat_mul(x: IntMatrix, y: IntMatrix) -> IntMatrix:
    """Exact matrix product."""
    _same_size(x, y)
    columns = tuple(zip(*y.rows))
    return IntMatrix(tuple(
        tuple(sum(a * b for a, b in zip(row, col)) for col in columns) for row in x.rows
    ))


def mat_product(factors: Iterable[IntMatrix], n: int = 2) -> IntMatrix:
    """Product of a sequence of matrices, identity when empty."""
    result = IntMatrix.identity(n)
    for factor in factors:
        result = mat_mul(result, factor)
    return result


def _minor(rows: Sequence[Sequence[int]], i: int, j: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(
        tuple(v for c, v in enumerate(row) if c != j) for r, row in enumerate(rows) if r != i
    )


def _det(rows: Sequence[Sequence[int]]) -> int:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    return sum(
        (-1) ** j * rows[0][j] * _det(_minor(rows, 0, j)) for j in range(n) if rows[0][j]
    )


def mat_det(x: IntMatrix) -> int:
    """Exact determinant (cofactor expansion, sizes up to 3 in practice)."""
    return _det(x.rows)


def mat_trace(x: IntMatrix) -> int:
    return sum(x.rows[i][i] for i in range(x.size))


def is_unimodular(x: IntMatrix) -> bool:
    return mat_det(x) in (1, -1)


def inverse_unimodular(x: IntMatrix) -> IntMatrix:
    """Exact integer inverse of a matrix with determinant +-1.

    Raises:
        NotUnimodular: if |det x| != 1
    """
    det = mat_det(x)
    if det not in (1, -1):
        raise NotUnimodular(f"cannot invert {x}: determinant {det}")
    n = x.size
    if n == 1:
        return IntMatrix(((det,),))
    # adjugate scaled by 1/det = det
    inverse = IntMatrix(tuple(
        tuple(det * (-1) ** (i + j) * _det(_minor(x.rows, j, i)) for j in range(n))
        for i in range(n)
    ))
    verify(mat_mul(x, inverse) == IntMatrix.identity(n), f"inverse check failed for {x}")
    return inverse


def mat_pow(x: IntMatrix, n: int) -> IntMatrix:
    """Exact power by repeated squaring; negative n needs |det x| = 1."""
    if n < 0:
        x = inverse_unimodular(x)
        n = -n
    result = IntMatrix.identity(x.size)
    base = x
    while n:
        if n & 1:
            result = mat_mul(result, base)
        n >>= 1
        if n:
            base = mat_mul(base, base)
    return result


def is_anosov(x: IntMatrix) -> bool:
    """True iff x is a hyperbolic 2x2 matrix in GL(2,Z).

    For det = 1 this is |trace| > 2. For det = -1 the eigenvalues are
    always real with product -1, so any non-zero trace is hyperbolic;
    (1 1; 2 1) has trace 2 and eigenvalues 1 +- sqrt(2).
    """
    if x.size != 2:
        return False
    det, trace = mat_det(x), mat_trace(x)
    if det == 1:
        return abs(trace) > 2
    return det == -1 and trace != 0


@dataclass(frozen=True)
class SmithForm:
    """U * M * V = D with U, V unimodular and D diagonal, d1 | d2 | ..."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    @property
    def invariants(self) -> Tuple[int, ...]:
        return tuple(self.d.rows[i][i] for i in range(self.d.size))


def _find_pivot(a, t: int):
    """Smallest non-zero |entry| in the trailing block, row-major tie break."""
    best = None
    n = len(a)
    for i in range(t, n):
        for j in range(t, n):
            value = abs(a[i][j])
            if value and (best is None or value < best[0]):
                best = (value, i, j)
    return best


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """Smith normal form with transformation matrices.

    The pivot at each stage is the smallest non-zero absolute value of the
    remaining block, ties broken in row-major order, so U and V are the
    same on every platform.
    """
    n = m.size
    a = [list(row) for row in m.rows]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(target, source, factor):
        # row_target += factor * row_source
        for k in range(n):
            a[target][k] += factor * a[source][k]
            u[target][k] += factor * u[source][k]

    def add_col(target, source, factor):
        for k in range(n):
            a[k][target] += factor * a[k][source]
            v[k][target] += factor * v[k][source]

    for t in range(n):
        while True:
            pivot = _find_pivot(a, t)
            if pivot is None:
                break
            _, pi, pj = pivot
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            clean = True
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            offender = next(
                ((i, j) for i in range(t + 1, n) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if offender is None:
                break
            # pull the non-divisible entry into the pivot row and reduce again
            add_row(t, offender[0], 1)
        if a[t][t] < 0:
            for k in range(n):
                a[t][k] = -a[t][k]
                u[t][k] = -u[t][k]

    form = SmithForm(u=IntMatrix(u), d=IntMatrix(a), v=IntMatrix(v))
    _check_smith_form(m, form)
    return form


def _check_smith_form(m: IntMatrix, form: SmithForm) -> None:
    verify(mat_mul(mat_mul(form.u, m), form.v) == form.d, f"U*M*V != D for {m}")
    verify(all(
        form.d.rows[i][j] == 0 for i in range(m.size) for j in range(m.size) if i != j
    ), f"D is not diagonal for {m}")
    verify(is_unimodular(form.u) and is_unimodular(form.v), f"U or V not unimodular for {m}")
    invariants = form.invariants
    verify(all(d >= 0 for d in invariants), f"negative invariant factor for {m}")
    for prev, nxt in zip(invariants, invariants[1:]):
        verify(nxt == 0 if prev == 0 else nxt % prev == 0,
               f"divisibility chain broken for {m}: {invariants}")


def cokernel_order(m: IntMatrix) -> Count:
    """Order of Z^n / m(Z^n): product of Smith invariants, INFINITE if any is 0."""
    total = 1
    for d in smith_normal_form(m).invariants:
        if d == 0:
            return INFINITE
        total *= d
    return total


def parse_matrix(text: str) -> IntMatrix:
    """Parse the row-major CLI syntax "a,b;c,d" (any square size)."""
    try:
        rows = [
            [int(cell.strip()) for cell in row.split(",")]
            for row in text.strip().split(";")
        ]
        return IntMatrix(tuple(tuple(row) for row in rows))
    except (ValueError, TypeError) as e:
        raise MalformedInput(f"malformed matrix {text!r}: expected rows 'a,b;c,d' of integers") from e


def matrix_from_nested(value) -> IntMatrix:
    """Build a matrix from nested lists of ints or decimal strings."""
    if not isinstance(value, (list, tuple)) or not value:
        raise MalformedInput(f"matrix must be a non-empty list of rows, got {value!r}")
    try:
        rows = []
        for row in value:
            if not isinstance(row, (list, tuple)):
                raise TypeError(row)
            cells = []
            for cell in row:
                if isinstance(cell, bool) or not isinstance(cell, (int, str)):
                    raise TypeError(cell)
                cells.append(int(cell))
            rows.append(tuple(cells))
        return IntMatrix(tuple(rows))
    except (ValueError, TypeError) as e:
        raise MalformedInput(f"matrix entries must be integers or decimal strings: {value!r}") from e


def format_matrix(m: IntMatrix) -> list:
    """Nested lists of decimal strings, safe for JSON at any magnitude."""
    return [[str(v) for v in row] for row in m.rows]

"""Exact rational vectors and matrices.

Scalars are :class:`fractions.Fraction`.  Vectors are plain tuples of
fractions; matrices are immutable :class:`RatMatrix` objects.  Nothing in
here ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

Rational = Fraction
RatVector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Fraction:
    """Coerce ints, fractions and ``"num/den"`` strings to a Fraction.

    Floats are refused: a float has already lost the value it was meant to
    carry.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational")
        if "." in text or "e" in text.lower():
            raise ValueError(f"malformed rational {value!r}: use num/den")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rat(q: Fraction) -> str:
    """Canonical text form: ``"num/den"`` or ``"k"``."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vec(values: Iterable) -> RatVector:
    return tuple(rat(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), ZERO)


def ones(n: int) -> RatVector:
    return (ONE,) * n


def unit(n: int, i: int) -> RatVector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def is_distribution(v: Sequence[Fraction]) -> bool:
    return all(x >= 0 for x in v) and sum(v, ZERO) == 1


@dataclass(frozen=True)
class RatMatrix:
    """Dense row-major matrix of fractions."""

    entries: tuple
    rows: int = field(init=False)
    cols: int = field(init=False)

    def __init__(self, grid: Iterable[Iterable], cols: Optional[int] = None):
        data = tuple(tuple(rat(x) for x in row) for row in grid)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("ragged matrix")
        else:
            width = cols or 0
        object.__setattr__(self, "entries", data)
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", width)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([unit(n, i) for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls([[ZERO] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "RatMatrix":
        return cls([[col[i] for col in columns] for i in range(nrows)], cols=len(columns))

    def __getitem__(self, index):
        if isinstance(index, tuple):
            i, j = index
            return self.entries[i][j]
        return self.entries[index]

    def __iter__(self):
        return iter(self.entries)

    def row(self, i: int) -> RatVector:
        return self.entries[i]

    def column(self, j: int) -> RatVector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.columns(), cols=self.rows)

    @property
    def T(self) -> "RatMatrix":
        return self.transpose()

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            return mat_mul(self, other)
        return mat_vec(self, other)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError(f"dimension mismatch: {self.shape} vs {other.shape}")
        return RatMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            cols=self.cols,
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "RatMatrix":
        c = rat(c)
        return RatMatrix([[c * x for x in r] for r in self.entries], cols=self.cols)

    def row_sums(self) -> RatVector:
        return tuple(sum(r, ZERO) for r in self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for r in self.entries for x in r)

    def is_substochastic(self) -> bool:
        return self.is_nonnegative() and all(s <= 1 for s in self.row_sums())

    def is_stochastic(self) -> bool:
        return self.is_nonnegative() and all(s == 1 for s in self.row_sums())

    def is_binary(self) -> bool:
        return all(x in (0, 1) for r in self.entries for x in r)

    def is_binary_column(self) -> bool:
        return self.cols == 1 and self.is_binary()

    def to_strings(self) -> list:
        return [[format_rat(x) for x in r] for r in self.entries]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rat(x) for x in r) for r in self.entries)
        return f"RatMatrix[{body}]"


def mat_mul(A: RatMatrix, B: RatMatrix) -> RatMatrix:
    if A.cols != B.rows:
        raise ValueError(f"dimension mismatch: {A.shape} @ {B.shape}")
    bcols = B.columns()
    return RatMatrix(
        [[sum((a * b for a, b in zip(r, c)), ZERO) for c in bcols] for r in A.entries],
        cols=B.cols,
    )


def mat_vec(A: RatMatrix, v: Sequence[Fraction]) -> RatVector:
    if A.cols != len(v):
        raise ValueError(f"dimension mismatch: {A.shape} @ vector of length {len(v)}")
    return tuple(dot(r, v) for r in A.entries)


def vec_mat(v: Sequence[Fraction], A: RatMatrix) -> RatVector:
    if A.rows != len(v):
        raise ValueError(f"dimension mismatch: vector of length {len(v)} @ {A.shape}")
    return tuple(dot(v, c) for c in A.columns())


def block_diag(A: RatMatrix, B: RatMatrix) -> RatMatrix:
    rows = [list(r) + [ZERO] * B.cols for r in A.entries]
    rows += [[ZERO] * A.cols + list(r) for r in B.entries]
    return RatMatrix(rows, cols=A.cols + B.cols)


def rank(M) -> int:
    """Rank over Q by Bareiss fraction-free elimination.

    Rows are first cleared of denominators so that the elimination runs on
    integers and every intermediate value is an exact minor.
    """
    grid = M.entries if isinstance(M, RatMatrix) else tuple(tuple(rat(x) for x in r) for r in M)
    if not grid or not grid[0]:
        return 0
    work = []
    for r in grid:
        den = lcm(*(x.denominator for x in r))
        work.append([int(x * den) for x in r])
    nrows, ncols = len(work), len(work[0])
    prev = 1
    rk = 0
    for col in range(ncols):
        if rk == nrows:
            break
        pivot = next((i for i in range(rk, nrows) if work[i][col] != 0), None)
        if pivot is None:
            continue
        work[rk], work[pivot] = work[pivot], work[rk]
        p = work[rk][col]
        for i in range(rk + 1, nrows):
            for j in range(col + 1, ncols):
                work[i][j] = (p * work[i][j] - work[i][col] * work[rk][j]) // prev
            work[i][col] = 0
        prev = p
        rk += 1
    return rk


def solve_linear(columns: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> Optional[RatVector]:
    """Find c with sum(c[i] * columns[i]) == target, or None.

    Free variables are set to zero, so the answer is the basic solution
    picked by the pivot order.
    """
    n = len(target)
    k = len(columns)
    for c in columns:
        if len(c) != n:
            raise ValueError("all vectors must have the same length")
    # augmented system, one row per coordinate
    aug = [[rat(columns[j][i]) for j in range(k)] + [rat(target[i])] for i in range(n)]
    pivots = []
    r = 0
    for col in range(k):
        p = next((i for i in range(r, n) if aug[i][col] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][col]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    if any(aug[i][k] != 0 for i in range(r, n)):
        return None
    coeffs = [ZERO] * k
    for i, col in enumerate(pivots):
        coeffs[col] = aug[i][k]
    return tuple(coeffs)


def in_span(v: Sequence, basis: Sequence[Sequence]) -> Optional[RatVector]:
    """Coefficients expressing ``v`` in ``basis``; None if ``v`` is independent."""
    v = vec(v)
    basis = [vec(b) for b in basis]
    if not basis:
        return () if all(x == 0 for x in v) else None
    return solve_linear(basis, v)


@dataclass(frozen=True)
class FeasibilityProblem:
    """Equalities ``row . x == rhs`` over the probability simplex."""

    nvars: int
    constraints: tuple = ()

    def __post_init__(self):
        cons = tuple((vec(row), rat(rhs)) for row, rhs in self.constraints)
        for row, _ in cons:
            if len(row) != self.nvars:
                raise ValueError(f"constraint row of length {len(row)} for {self.nvars} variables")
        object.__setattr__(self, "constraints", cons)

    def residuals(self, x: Sequence[Fraction]) -> RatVector:
        return tuple(dot(row, x) - rhs for row, rhs in self.constraints)


def feasible_distribution(problem: FeasibilityProblem) -> Optional[RatVector]:
    """Phase-one simplex over exact rationals with Bland's rule.

    Returns a vertex of ``{x >= 0, sum(x) == 1, A x == b}`` or None when the
    set is empty.
    """
    n = problem.nvars
    if n == 0:
        return None
    rows = [list(row) for row, _ in problem.constraints] + [[ONE] * n]
    rhs = [b for _, b in problem.constraints] + [ONE]
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    m = len(rows)
    width = n + m
    # tableau rows: [x..., artificial..., rhs]
    tab = [rows[i] + [ONE if k == i else ZERO for k in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    # reduced costs of the phase-one objective sum(artificials)
    obj = [-sum((tab[i][j] for i in range(m)), ZERO) for j in range(n)] + [ZERO] * m
    obj.append(-sum(rhs, ZERO))

    while True:
        entering = next((j for j in range(width) if obj[j] < 0), None)
        if entering is None:
            break
        leaving = None
        best = None
        for i in range(m):
            a = tab[i][entering]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:
            # cannot happen in phase one: the objective is bounded below by 0
            raise ArithmeticError("unbounded phase-one problem")
        pv = tab[leaving][entering]
        tab[leaving] = [x / pv for x in tab[leaving]]
        for i in range(m):
            if i != leaving and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[leaving])]
        f = obj[entering]
        obj = [a - f * b for a, b in zip(obj, tab[leaving])]
        basis[leaving] = entering

    if obj[-1] != 0:
        return None
    x = [ZERO] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tab[i][-1]
    return tuple(x)


def convex_membership(target: Sequence, others: Sequence[Sequence]) -> Optional[RatVector]:
    """Weights writing ``target`` as a convex combination of ``others``."""
    target = vec(target)
    others = [vec(o) for o in others]
    if not others:
        raise ValueError("need at least one candidate vector")
    for o in others:
        if len(o) != len(target):
            raise ValueError("all vectors must have the same length")
    cons = [(tuple(o[k] for o in others), target[k]) for k in range(len(target))]
    return feasible_distribution(FeasibilityProblem(len(others), tuple(cons)))


def is_permutation_matrix(M: RatMatrix) -> bool:
    if not M.is_square() or not M.is_binary():
        return False
    return all(s == 1 for s in M.row_sums()) and all(s == 1 for s in M.T.row_sums())

"""Dimension-guarded matrices over exact scalars.

A :class:`GuardedMatrix` stores its shape next to a flat, row-major tuple of
entries. The shape guard ``mat_guard(m, n, M)`` is enforced at construction
and every binary operation checks that the shapes of its operands fit before
touching any entry.

Entries are Python ``int`` (the carrier) or ``fractions.Fraction`` (used only
by the characteristic-polynomial computation). Floats are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, EmptyMatrixSet, GuardError, NegativeEntry, NonSquareMatrix


def _check_scalar(x):
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise GuardError(f"matrix entries must be int or Fraction, got {type(x).__name__}")
    return x


@dataclass(frozen=True)
class GuardedMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise GuardError(f"negative shape {self.rows}x{self.cols}")
        entries = tuple(_check_scalar(x) for x in self.entries)
        if len(entries) != self.rows * self.cols:
            raise GuardError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> GuardedMatrix:
        rows = [list(r) for r in rows]
        m = len(rows)
        n = len(rows[0]) if rows else 0
        for i, r in enumerate(rows):
            if len(r) != n:
                raise GuardError(f"row {i} has length {len(r)}, expected {n}")
        return cls(m, n, tuple(x for r in rows for x in r))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: tuple[int, int]):
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index {index} outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def indices(self) -> Iterable[tuple[int, int]]:
        for i in range(self.rows):
            for j in range(self.cols):
                yield (i, j)

    def max_entry(self):
        return max(self.entries, default=0)

    def __add__(self, other):
        return add(self, other)

    def __matmul__(self, other):
        return mul(self, other)

    def __mul__(self, other):
        if isinstance(other, GuardedMatrix):
            return mul(self, other)
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    def __neg__(self):
        return scale(-1, self)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.to_rows()) + "]"


def matrix(rows: Sequence[Sequence]) -> GuardedMatrix:
    """Shorthand for :meth:`GuardedMatrix.from_rows`."""
    return GuardedMatrix.from_rows(rows)


def mat_guard(m: int, n: int, M: GuardedMatrix) -> bool:
    return (
        isinstance(M, GuardedMatrix)
        and M.rows == m
        and M.cols == n
        and len(M.entries) == m * n
    )


def zeros(m: int, n: int | None = None) -> GuardedMatrix:
    n = m if n is None else n
    return GuardedMatrix(m, n, (0,) * (m * n))


def identity(n: int) -> GuardedMatrix:
    if n < 1:
        raise GuardError(f"identity needs n >= 1, got {n}")
    return GuardedMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))


def _same_shape(op, M, N):
    if M.shape != N.shape:
        raise DimensionMismatch(op, M.shape, N.shape)


def _require_square(op, M):
    if not M.is_square:
        raise NonSquareMatrix(op, M.shape)


def require_nonnegative(op: str, M: GuardedMatrix) -> None:
    for idx, x in zip(M.indices(), M.entries):
        if x < 0:
            raise NegativeEntry(op, idx, x)


def add(M: GuardedMatrix, N: GuardedMatrix) -> GuardedMatrix:
    _same_shape("add", M, N)
    return GuardedMatrix(M.rows, M.cols, tuple(a + b for a, b in zip(M.entries, N.entries)))


def scale(c, M: GuardedMatrix) -> GuardedMatrix:
    return GuardedMatrix(M.rows, M.cols, tuple(c * x for x in M.entries))


def mul(M: GuardedMatrix, N: GuardedMatrix) -> GuardedMatrix:
    if M.cols != N.rows:
        raise DimensionMismatch("mul", M.shape, N.shape)
    p = M.cols
    cols = [N.entries[j::N.cols] for j in range(N.cols)] if N.cols else []
    out = []
    for i in range(M.rows):
        r = M.entries[i * p:(i + 1) * p]
        for c in cols:
            out.append(sum(a * b for a, b in zip(r, c)))
    return GuardedMatrix(M.rows, N.cols, tuple(out))


def power(M: GuardedMatrix, k: int) -> GuardedMatrix:
    _require_square("power", M)
    if k < 0:
        raise GuardError(f"power: negative exponent {k}")
    result = identity(M.rows) if M.rows else M
    base = M
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def pointwise_max(ms: Iterable[GuardedMatrix]) -> GuardedMatrix:
    ms = list(ms)
    if not ms:
        raise EmptyMatrixSet("pointwise_max of an empty set")
    first = ms[0]
    for N in ms[1:]:
        _same_shape("pointwise_max", first, N)
    return GuardedMatrix(first.rows, first.cols, tuple(max(xs) for xs in zip(*(M.entries for M in ms))))


def geq(M: GuardedMatrix, N: GuardedMatrix) -> bool:
    _same_shape("geq", M, N)
    _require_square("geq", M)
    return all(a >= b for a, b in zip(M.entries, N.entries))


def gt(M: GuardedMatrix, N: GuardedMatrix) -> bool:
    """Strict at the upper-left entry, weak everywhere else."""
    _same_shape("gt", M, N)
    _require_square("gt", M)
    if M.rows == 0:
        return False
    return M.entries[0] > N.entries[0] and geq(M, N)


def linear_norm(M: GuardedMatrix):
    """Sum of all entries; defined on nonnegative matrices only."""
    require_nonnegative("linear_norm", M)
    return sum(M.entries)


def is_upper_triangular(M: GuardedMatrix) -> bool:
    return all(M[i, j] == 0 for i, j in M.indices() if i > j)

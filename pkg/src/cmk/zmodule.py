"""Exact integer linear algebra over Z.

Matrices hold Python ints, so nothing overflows no matter how large the
intermediate Smith form entries get.  A matrix with ``rows`` rows and
``cols`` columns is read as a map Z^cols -> Z^rows acting on column vectors.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError, OracleBudgetError

DEFAULT_ORACLE_BUDGET = 10**6


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InputError(f"negative matrix shape {self.rows}x{self.cols}")
        entries = tuple(self.entries)
        if len(entries) != self.rows * self.cols:
            raise InputError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(entries)}"
            )
        for x in entries:
            if isinstance(x, bool) or not isinstance(x, int):
                raise InputError(f"matrix entry {x!r} is not an integer")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None):
        """Build from a list of rows.  ``cols`` is required only when there are no rows."""
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise InputError("cannot infer column count of a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise InputError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int):
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise InputError("column length does not match row count")
        return cls(rows, len(columns),
                   tuple(columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None):
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = v
        return cls.from_rows(out, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix(self.cols, self.rows,
                             tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = [other.column(j) for j in range(other.cols)]
        return IntegerMatrix(self.rows, other.cols, tuple(
            sum(a * b for a, b in zip(self.row(i), c))
            for i in range(self.rows) for c in cols
        ))

    def __neg__(self) -> IntegerMatrix:
        return IntegerMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def delete_rows(self, indices: Iterable[int]) -> IntegerMatrix:
        drop = set(indices)
        return IntegerMatrix.from_rows(
            [self.row(i) for i in range(self.rows) if i not in drop], self.cols)

    def select_rows(self, indices: Sequence[int]) -> IntegerMatrix:
        return IntegerMatrix.from_rows([self.row(i) for i in indices], self.cols)

    def select_columns(self, indices: Sequence[int]) -> IntegerMatrix:
        return IntegerMatrix.from_columns([self.column(j) for j in indices], self.rows)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def digest(self) -> str:
        """Short content hash, stable across runs and platforms."""
        payload = json.dumps([self.rows, self.cols, list(self.entries)], separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def __str__(self):
        if not self.rows or not self.cols:
            return f"<empty {self.rows}x{self.cols} matrix>"
        width = max(len(str(x)) for x in self.entries)
        return "\n".join("[" + " ".join(str(x).rjust(width) for x in self.row(i)) + "]"
                         for i in range(self.rows))


@dataclass(frozen=True)
class SNFDecomposition:
    """``U @ M @ V == D`` with U, V unimodular and D in Smith form."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        """Nonzero diagonal entries d_1 | d_2 | ... | d_r."""
        out = []
        for i in range(min(self.D.rows, self.D.cols)):
            if self.D[i, i] == 0:
                break
            out.append(self.D[i, i])
        return tuple(out)

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _gcd_chain_ok(values: Sequence[int]) -> bool:
    return all(b % a == 0 for a, b in zip(values, values[1:]))


@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^free_rank plus Z/d_1 + ... + Z/d_k with 2 <= d_1 | d_2 | ... | d_k."""

    free_rank: int
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        factors = tuple(self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        if self.free_rank < 0:
            raise InputError("free rank must be nonnegative")
        if any(d < 2 for d in factors) or not _gcd_chain_ok(factors):
            raise InputError(f"invariant factors {list(factors)} are not canonical")

    @classmethod
    def from_orders(cls, orders: Iterable[int], free_rank: int = 0) -> FGAbelianGroup:
        """Canonical form of Z^free_rank + sum of Z/n for n in ``orders``.

        An order of 0 contributes a free summand, an order of 1 nothing.
        """
        finite = []
        for n in orders:
            n = abs(n)
            if n == 0:
                free_rank += 1
            elif n > 1:
                finite.append(n)
        factors = smith_normal_form(IntegerMatrix.diagonal(finite)).diagonal if finite else ()
        return cls(free_rank, tuple(d for d in factors if d > 1))

    @classmethod
    def trivial(cls) -> FGAbelianGroup:
        return cls(0, ())

    @classmethod
    def free(cls, rank: int) -> FGAbelianGroup:
        return cls(rank, ())

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def torsion_order(self) -> int:
        return math.prod(self.invariant_factors)

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "invariant_factors": list(self.invariant_factors)}

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct sum of cyclic groups Z/n, one per entry of ``cyclic_orders``.

    The orders need not form an invariant-factor chain; :meth:`canonical`
    produces that form.  Compare groups up to isomorphism with
    :meth:`is_isomorphic` or by comparing canonical forms.
    """

    cyclic_orders: tuple[int, ...] = ()

    def __post_init__(self):
        orders = tuple(self.cyclic_orders)
        object.__setattr__(self, "cyclic_orders", orders)
        for n in orders:
            if isinstance(n, bool) or not isinstance(n, int) or n < 2:
                raise InputError(f"cyclic order {n!r} must be an integer >= 2")

    @classmethod
    def of(cls, *orders: int) -> FiniteAbelianGroup:
        """Like the constructor but silently drops trivial factors Z/1."""
        return cls(tuple(n for n in orders if n != 1))

    @property
    def order(self) -> int:
        return math.prod(self.cyclic_orders)

    def is_trivial(self) -> bool:
        return not self.cyclic_orders

    def canonical(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(FGAbelianGroup.from_orders(self.cyclic_orders).invariant_factors)

    def is_isomorphic(self, other: FiniteAbelianGroup) -> bool:
        return self.canonical() == other.canonical()

    def direct_sum(self, other: FiniteAbelianGroup) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(self.cyclic_orders + other.cyclic_orders)

    def quotient_by_multiple(self, d: int) -> FiniteAbelianGroup:
        """A / dA."""
        return FiniteAbelianGroup.of(*(math.gcd(d, n) for n in self.cyclic_orders))

    def to_fg(self) -> FGAbelianGroup:
        return FGAbelianGroup.from_orders(self.cyclic_orders)

    def to_dict(self) -> dict:
        return {"order": self.order, "invariant_factors": list(self.canonical().cyclic_orders)}

    def __str__(self):
        return " + ".join(f"Z/{n}" for n in self.cyclic_orders) or "0"


# -- Smith normal form -------------------------------------------------------

def smith_normal_form(M: IntegerMatrix) -> SNFDecomposition:
    m, n = M.rows, M.cols
    A = M.to_rows()
    U = IntegerMatrix.identity(m).to_rows()
    V = IntegerMatrix.identity(n).to_rows()

    # Row ops act on A and U, column ops on A and V; U.M.V == A throughout.
    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for R in (A, V):
            for r in R:
                r[j], r[k] = r[k], r[j]

    def add_row(dst, src, c):
        for R in (A, U):
            R[dst] = [x + c * y for x, y in zip(R[dst], R[src])]

    def add_col(dst, src, c):
        for R in (A, V):
            for r in R:
                r[dst] += c * r[src]

    for t in range(min(m, n)):
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            # Bring the smallest nonzero entry of row t / column t to (t, t).
            best = None
            for i in range(t, m):
                if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                    best = (abs(A[i][t]), i, None)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), None, j)
            if best[1] is not None:
                swap_rows(t, best[1])
            else:
                swap_cols(t, best[2])
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            if any(A[i][t] for i in range(t + 1, m)) or any(A[t][j] for j in range(t + 1, n)):
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]

    return SNFDecomposition(IntegerMatrix.from_rows(U, m),
                            IntegerMatrix.from_rows(A, n),
                            IntegerMatrix.from_rows(V, n))


def rank(M: IntegerMatrix) -> int:
    return smith_normal_form(M).rank


def determinant(M: IntegerMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if M.rows != M.cols:
        raise InputError(f"determinant of non-square {M.rows}x{M.cols} matrix")
    n = M.rows
    if n == 0:
        return 1
    A = M.to_rows()
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def cokernel(M: IntegerMatrix) -> FGAbelianGroup:
    """Z^rows / (column span of M), in canonical form."""
    d = smith_normal_form(M).diagonal
    return FGAbelianGroup(M.rows - len(d), tuple(x for x in d if x > 1))


# -- lattices ----------------------------------------------------------------

def _hermite_rows(vectors: Iterable[Sequence[int]], dim: int) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by ``vectors``.

    Pivots are positive, entries above each pivot lie in [0, pivot), zero
    rows are dropped.  Equal lattices give identical output.
    """
    A = [list(v) for v in vectors if any(v)]
    r = 0
    for col in range(dim):
        if r == len(A):
            break
        while True:
            nonzero = [i for i in range(r, len(A)) if A[i][col]]
            if not nonzero:
                break
            k = min(nonzero, key=lambda i: abs(A[i][col]))
            A[r], A[k] = A[k], A[r]
            if len(nonzero) == 1:
                break
            p = A[r][col]
            for i in range(r + 1, len(A)):
                if A[i][col]:
                    q = A[i][col] // p
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
        if r == len(A) or A[r][col] == 0:
            continue
        if A[r][col] < 0:
            A[r] = [-x for x in A[r]]
        p = A[r][col]
        for i in range(r):
            q = A[i][col] // p
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
        r += 1
    return [row for row in A[:r]]


def image_lattice(M: IntegerMatrix) -> IntegerMatrix:
    """Column Hermite basis of the column span of M (rows x rank)."""
    basis = _hermite_rows(M.columns(), M.rows)
    return IntegerMatrix.from_columns(basis, M.rows)


def kernel_lattice(M: IntegerMatrix) -> IntegerMatrix:
    """Columns form a Z-basis of {x : Mx = 0}, in column Hermite form."""
    snf = smith_normal_form(M)
    free = [snf.V.column(j) for j in range(snf.rank, M.cols)]
    return IntegerMatrix.from_columns(_hermite_rows(free, M.cols), M.cols)


def same_lattice(A: IntegerMatrix, B: IntegerMatrix) -> bool:
    """Whether the column spans of A and B coincide (same ambient dimension)."""
    if A.rows != B.rows:
        raise InputError("lattices live in different ambient dimensions")
    return image_lattice(A) == image_lattice(B)


@dataclass(frozen=True)
class Exactness:
    """Outcome of :func:`is_exact_at`; truthy iff exact."""

    exact: bool
    diagnostic: str

    def __bool__(self):
        return self.exact


def is_exact_at(f: IntegerMatrix, g: IntegerMatrix) -> Exactness:
    """Check exactness of Z^a --f--> Z^b --g--> Z^c at the middle term."""
    if f.rows != g.cols:
        raise InputError(
            f"cannot compose: f has target Z^{f.rows} but g has source Z^{g.cols}")
    if not (g @ f).is_zero():
        return Exactness(False, "composite g.f is not zero")
    ker = kernel_lattice(g)
    im = image_lattice(f)
    if ker != im:
        return Exactness(False, f"ker g (rank {ker.cols}) differs from im f (rank {im.cols})"
                         if ker.cols != im.cols else
                         "ker g and im f have equal rank but im f has finite index "
                         f"{_index(ker, im)} in ker g")
    return Exactness(True, "exact")


def _index(outer: IntegerMatrix, inner: IntegerMatrix) -> int:
    # Both Hermite bases of full-rank sublattices of the same rank; the index is
    # the ratio of their Gram determinants' square roots.
    g_out = determinant(outer.transpose() @ outer)
    g_in = determinant(inner.transpose() @ inner)
    return math.isqrt(g_in // g_out)


# -- coefficient cokernels ---------------------------------------------------

def cokernel_with_coefficients(M: IntegerMatrix, A: FiniteAbelianGroup) -> FiniteAbelianGroup:
    """Cokernel of M tensor id_A : A^cols -> A^rows, canonical form."""
    d = smith_normal_form(M).diagonal
    orders = []
    for di in d:
        orders.extend(math.gcd(di, n) for n in A.cyclic_orders)
    orders.extend(A.cyclic_orders * (M.rows - len(d)))
    return FiniteAbelianGroup.of(*orders).canonical()


def oracle_budget() -> int:
    raw = os.environ.get("CMK_ORACLE_BUDGET")
    if raw is None:
        return DEFAULT_ORACLE_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"CMK_ORACLE_BUDGET={raw!r} is not an integer") from None
    if value < 1:
        raise InputError("CMK_ORACLE_BUDGET must be positive")
    return value


def prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def brute_force_cokernel(M: IntegerMatrix, A: FiniteAbelianGroup,
                         budget: int | None = None) -> FiniteAbelianGroup:
    """Cokernel of M tensor id_A by exhaustive enumeration.

    Test oracle: shares no code with the Smith form route.  Every element of
    A^cols is pushed through M to get the image H; the quotient's structure is
    then read off from how many elements of A^rows each prime power p^k sends
    into H.
    """
    budget = oracle_budget() if budget is None else budget
    size = A.order
    if max(size ** M.rows, size ** M.cols) > budget:
        raise OracleBudgetError(
            f"enumeration of |A|^{max(M.rows, M.cols)} = {size ** max(M.rows, M.cols)} "
            f"tuples exceeds budget {budget}")

    mods = A.cyclic_orders
    k = len(mods)
    source = list(itertools.product(*[range(n) for n in mods * M.cols]))
    image = set()
    for x in source:
        y = []
        for r in range(M.rows):
            for c in range(k):
                y.append(sum(M[r, j] * x[j * k + c] for j in range(M.cols)) % mods[c])
        image.add(tuple(y))

    target_mods = mods * M.rows
    quotient_order = size ** M.rows // len(image)
    targets = list(itertools.product(*[range(n) for n in target_mods]))

    elementary = []
    for p in prime_factors(quotient_order):
        p_part = 1
        while quotient_order % (p_part * p) == 0:
            p_part *= p
        # |Q[p^j]| = p^(sum_i min(j, e_i)); successive differences count e_i >= j.
        killed_logs = [0]
        j = 0
        while p ** killed_logs[-1] < p_part:
            j += 1
            pj = p ** j
            hits = sum(1 for x in targets
                       if tuple(pj * v % n for v, n in zip(x, target_mods)) in image)
            killed = hits // len(image)
            killed_logs.append(_exact_log(killed, p))
        at_least = [killed_logs[j] - killed_logs[j - 1] for j in range(1, len(killed_logs))]
        at_least.append(0)
        for e in range(1, len(at_least)):
            elementary.extend([p ** e] * (at_least[e - 1] - at_least[e]))
    return _invariant_factors_from_elementary(elementary)


def _exact_log(n: int, p: int) -> int:
    e = 0
    while n > 1:
        if n % p:
            raise ArithmeticError(f"{n} is not a power of {p}")
        n //= p
        e += 1
    return e


def _invariant_factors_from_elementary(prime_powers: Iterable[int]) -> FiniteAbelianGroup:
    by_prime: dict[int, list[int]] = {}
    for q in prime_powers:
        by_prime.setdefault(prime_factors(q)[0], []).append(q)
    longest = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * longest
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            factors[i] *= q
    return FiniteAbelianGroup(tuple(reversed(factors)))

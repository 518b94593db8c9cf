"""Matrices with polynomial entries, column-initial minors, nilpotent exp.

The determinant workhorse is `column_minor`: expansion along the last column
with memoization keyed by row subsets, so that the nested leading minors of a
fixed row family share all their subproblems.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import CoefficientRing, Polynomial, RingMismatchError


class MinorSpec:
    """Rows a_1,...,a_k in a significant order; columns are always 1..k.

    Indices are 1-based, matching the usual determinant notation
    det(a_1,...,a_k | 1,...,k).
    """

    def __init__(self, rows):
        rows = tuple(rows)
        if not rows:
            raise ValueError("empty row list")
        if len(set(rows)) != len(rows):
            raise ValueError(f"repeated rows in {rows}")
        self.rows = rows

    @property
    def k(self):
        return len(self.rows)

    def validate(self, matrix):
        for a in self.rows:
            if not 1 <= a <= matrix.nrows:
                raise IndexError(f"row {a} out of range for {matrix.nrows} rows")
        if self.k > matrix.ncols:
            raise IndexError(f"{self.k} columns requested, matrix has {matrix.ncols}")

    def __repr__(self):
        return f"MinorSpec({self.rows})"

    def __eq__(self, other):
        return isinstance(other, MinorSpec) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)


class PolyMatrix:
    """Dense matrix whose entries all share one coefficient ring."""

    def __init__(self, ring, entries):
        self.ring = ring
        self.entries = []
        ncols = None
        for row in entries:
            row = [self._coerce(e) for e in row]
            if ncols is None:
                ncols = len(row)
            elif len(row) != ncols:
                raise ValueError("ragged rows")
            self.entries.append(row)
        if not self.entries or ncols == 0:
            raise ValueError("empty matrix")
        self.nrows = len(self.entries)
        self.ncols = ncols

    def _coerce(self, e):
        if isinstance(e, Polynomial):
            if e.ring != self.ring:
                raise RingMismatchError(f"{e.ring} vs {self.ring}")
            return e
        return Polynomial.constant(self.ring, e)

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, ring, nrows, ncols=None):
        ncols = ncols or nrows
        return cls(ring, [[0] * ncols for _ in range(nrows)])

    @classmethod
    def permutation_matrix(cls, ring, sigma):
        """P with 1 at (sigma(i), i), 1-based: P e_i = e_{sigma(i)}."""
        n = len(sigma)
        if sorted(sigma) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {sigma}")
        entries = [[0] * n for _ in range(n)]
        for i, s in enumerate(sigma, start=1):
            entries[s - 1][i - 1] = 1
        return cls(ring, entries)

    @classmethod
    def anti_identity(cls, ring, n):
        return cls.permutation_matrix(ring, [n + 1 - i for i in range(1, n + 1)])

    def __getitem__(self, ij):
        i, j = ij  # 1-based
        return self.entries[i - 1][j - 1]

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            if self.ring != other.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            zero = Polynomial.zero(self.ring)
            out = []
            for i in range(self.nrows):
                row = []
                for j in range(other.ncols):
                    acc = zero
                    for k in range(self.ncols):
                        a = self.entries[i][k]
                        b = other.entries[k][j]
                        if a.is_zero() or b.is_zero():
                            continue
                        acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return PolyMatrix(self.ring, out)
        # scalar
        return PolyMatrix(
            self.ring, [[e * other for e in row] for row in self.entries]
        )

    def __add__(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return PolyMatrix(
            self.ring,
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ],
        )

    def __sub__(self, other):
        return self + (other * (-1))

    def transpose(self):
        return PolyMatrix(
            self.ring,
            [[self.entries[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
        )

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.ring == other.ring
            and self.entries == other.entries
        )

    def is_zero(self):
        return all(e.is_zero() for row in self.entries for e in row)

    def substitute(self, assignment):
        return PolyMatrix(
            self.ring,
            [[e.substitute(assignment) for e in row] for row in self.entries],
        )

    def evaluate(self, point):
        """Numeric matrix (list of lists of ring elements) at a point."""
        return [[e.evaluate(point) for e in row] for row in self.entries]

    def to_strings(self):
        return [[str(e) for e in row] for row in self.entries]

    def __repr__(self):
        return f"PolyMatrix({self.nrows}x{self.ncols})"


def column_minor(matrix, spec, memo=None):
    """det of the submatrix on spec.rows (in the listed order) and columns 1..k.

    Expansion along the last column, memoized on frozen row sets, so the
    leading minors det(A | 1..j), j <= k, of one row family cost a single pass.
    """
    if not isinstance(spec, MinorSpec):
        spec = MinorSpec(spec)
    spec.validate(matrix)
    sign = _permutation_sign_to_sorted(spec.rows)
    if memo is None:
        memo = {}
    value = _minor_sorted(matrix, tuple(sorted(spec.rows)), memo)
    return value if sign == 1 else -value


def _permutation_sign_to_sorted(rows):
    rows = list(rows)
    sign = 1
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if rows[i] > rows[j]:
                sign = -sign
    return sign


def _minor_sorted(matrix, rows, memo):
    """det of submatrix with strictly increasing `rows` and columns 1..len(rows)."""
    cached = memo.get(rows)
    if cached is not None:
        return cached
    k = len(rows)
    if k == 1:
        result = matrix[rows[0], 1]
    else:
        acc = Polynomial.zero(matrix.ring)
        for i, r in enumerate(rows):
            entry = matrix[r, k]
            if entry.is_zero():
                continue
            sub = _minor_sorted(matrix, rows[:i] + rows[i + 1 :], memo)
            term = entry * sub
            if (i + k) % 2:  # (-1)^{i+k} with i 0-based, column index k
                acc = acc + term
            else:
                acc = acc - term
        result = acc
    memo[rows] = result
    return result


def leibniz_determinant(matrix, rows=None, cols=None):
    """Brute-force Leibniz sum; the independent oracle for column_minor."""
    rows = list(rows) if rows else list(range(1, matrix.nrows + 1))
    cols = list(cols) if cols else list(range(1, len(rows) + 1))
    if len(rows) != len(cols):
        raise ValueError("non-square")
    from itertools import permutations

    total = Polynomial.zero(matrix.ring)
    for perm in permutations(range(len(rows))):
        sign = _permutation_sign_to_sorted([p + 1 for p in perm])
        prod = Polynomial.one(matrix.ring)
        for i, p in enumerate(perm):
            prod = prod * matrix[rows[i], cols[p]]
        total = total + (prod if sign == 1 else -prod)
    return total


def determinant(matrix):
    if matrix.nrows != matrix.ncols:
        raise ValueError("non-square")
    memo = {}
    return column_minor(matrix, MinorSpec(range(1, matrix.nrows + 1)), memo)


def is_nilpotent(matrix, max_power=None):
    """Verify X^m = 0 for some m <= nrows by repeated multiplication."""
    if matrix.nrows != matrix.ncols:
        raise ValueError("non-square")
    limit = max_power or matrix.nrows
    power = matrix
    for _ in range(limit):
        if power.is_zero():
            return True
        power = power * matrix
    return power.is_zero()


def exp_nilpotent(matrix, t):
    """I + tX + t^2 X^2/2! + ... for nilpotent X; division must be exact.

    `t` is a variable id.  Raises if X is not nilpotent or some factorial
    fails to divide exactly in the ring.
    """
    if not is_nilpotent(matrix):
        raise ValueError("matrix is not nilpotent")
    ring = matrix.ring
    tvar = Polynomial.variable(ring, t)
    result = PolyMatrix.identity(ring, matrix.nrows)
    power = PolyMatrix.identity(ring, matrix.nrows)
    tpow = Polynomial.one(ring)
    factorial = 1
    for m in range(1, matrix.nrows + 1):
        power = power * matrix
        if power.is_zero():
            break
        factorial *= m
        tpow = tpow * tvar
        scaled = PolyMatrix(
            ring,
            [[_exact_divide(e, factorial, ring) for e in row] for row in power.entries],
        )
        result = result + scaled * tpow
    return result


def _exact_divide(poly, divisor, ring):
    out = []
    for mono, c in poly.terms.items():
        if ring.kind == CoefficientRing.RATIONALS:
            out.append((mono, c / divisor))
        elif ring.kind == CoefficientRing.MOD:
            inv = _mod_inverse(divisor % ring.p, ring.p)
            if inv is None:
                raise ArithmeticError(
                    f"factorial {divisor} not invertible mod {ring.p}"
                )
            out.append((mono, c * inv))
        else:
            q, r = divmod(c, divisor)
            if r:
                raise ArithmeticError(f"{c} not exactly divisible by {divisor}")
            out.append((mono, q))
    return Polynomial(ring, out)


def _mod_inverse(a, p):
    a %= p
    if a == 0:
        return None
    return pow(a, p - 2, p)


def rational_matrix_rank(rows):
    """Rank of a numeric matrix (lists of ints/Fractions), exact elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def rational_nullspace(rows, ncols):
    """Nullspace basis of a numeric constraint matrix, exact over Q."""
    m = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -m[r][f]
        basis.append(vec)
    return basis

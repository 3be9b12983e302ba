"""Truncated formal power series and exact square matrices.

A TruncSeries is a list of coefficients c_0..c_N in one formal variable z,
carried to an explicit truncation order N.  Coefficients may live in any
ring that implements +, -, *, is_zero(), zero_like(), one_like() and (where
an operation needs it) inverse(): Gaussian rationals, square matrices over
them, or noncommutative polynomials.  Binary operations between series of
different orders truncate to the smaller order.
"""

from __future__ import annotations

from .errors import DomainError
from .scalars import GQ_ONE, GQ_ZERO, GaussianRational


class TruncSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise DomainError("a truncated series needs at least order 0")
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("TruncSeries is immutable")

    @property
    def order(self):
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value, order):
        """The series value + 0*z + ... + 0*z^order."""
        zero = value.zero_like()
        return cls((value,) + (zero,) * order)

    @classmethod
    def variable(cls, order, one=GQ_ONE):
        """The series z, to the requested order (>= 1)."""
        if order < 1:
            raise DomainError("the variable needs order >= 1")
        zero = one.zero_like()
        return cls((zero, one) + (zero,) * (order - 1))

    def coeff(self, k):
        return self.coeffs[k]

    def truncated(self, order):
        if order > self.order:
            raise DomainError("cannot extend a truncated series")
        return TruncSeries(self.coeffs[: order + 1])

    def valuation(self):
        """Index of the first nonzero coefficient; None for the zero series."""
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k
        return None

    def is_zero(self):
        return self.valuation() is None

    # -- arithmetic -----------------------------------------------------

    def _common_order(self, other):
        return min(self.order, other.order)

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        n = self._common_order(other)
        return TruncSeries(
            tuple(self.coeffs[k] + other.coeffs[k] for k in range(n + 1))
        )

    def __sub__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        n = self._common_order(other)
        return TruncSeries(
            tuple(self.coeffs[k] - other.coeffs[k] for k in range(n + 1))
        )

    def __neg__(self):
        return TruncSeries(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        """Cauchy product, truncated to the smaller order."""
        if not isinstance(other, TruncSeries):
            return NotImplemented
        n = self._common_order(other)
        out = []
        for k in range(n + 1):
            acc = None
            for j in range(k + 1):
                a = self.coeffs[j]
                b = other.coeffs[k - j]
                if a.is_zero() or b.is_zero():
                    continue
                term = a * b
                acc = term if acc is None else acc + term
            if acc is None:
                acc = self.coeffs[0].zero_like() * other.coeffs[0].zero_like()
            out.append(acc)
        return TruncSeries(tuple(out))

    def scale(self, scalar):
        """Multiply every coefficient by a fixed ring element (on the left)."""
        return TruncSeries(tuple(scalar * c for c in self.coeffs))

    def shift(self, k=1):
        """Multiply by z^k, dropping whatever overflows the order."""
        if k < 0:
            raise DomainError("negative shift")
        zero = self.coeffs[0].zero_like()
        kept = self.coeffs[: len(self.coeffs) - k]
        return TruncSeries((zero,) * k + kept)

    def map(self, fn):
        return TruncSeries(tuple(fn(c) for c in self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def agrees_with(self, other, order=None):
        """Coefficientwise equality up to the smaller (or given) order."""
        n = self._common_order(other)
        if order is not None:
            n = min(n, order)
        return all(self.coeffs[k] == other.coeffs[k] for k in range(n + 1))

    # -- the three structural operations ---------------------------------

    def inverse(self):
        """Multiplicative inverse; needs an invertible constant term.

        Solved coefficient by coefficient: d_0 = c_0^{-1} and
        d_n = -c_0^{-1} * sum_{k>=1} c_k d_{n-k}.  For matrix coefficients
        this produces the two-sided inverse because c_0 is.
        """
        c0 = self.coeffs[0]
        try:
            c0_inv = c0.inverse()
        except DomainError:
            raise DomainError("series inverse needs invertible constant term")
        out = [c0_inv]
        for n in range(1, self.order + 1):
            acc = None
            for k in range(1, n + 1):
                c = self.coeffs[k]
                if c.is_zero():
                    continue
                term = c * out[n - k]
                acc = term if acc is None else acc + term
            if acc is None:
                out.append(c0.zero_like())
            else:
                out.append(-(c0_inv * acc))
        return TruncSeries(tuple(out))

    def compose(self, inner):
        """sum_k c_k * inner^k for an inner series with zero constant term.

        The outer series must have scalar (GaussianRational) coefficients;
        the inner may be scalar- or matrix-valued.
        """
        if not inner.coeffs[0].is_zero():
            raise DomainError("composition needs inner constant term zero")
        one = inner.coeffs[0].one_like()
        order = inner.order
        power = TruncSeries.constant(one, order)
        acc = power.scale(self.coeffs[0])
        for k in range(1, self.order + 1):
            power = power * inner
            if power.is_zero():
                break
            c = self.coeffs[k]
            if not c.is_zero():
                acc = acc + power.scale(c)
        return acc

    def compose_shifted(self, inner):
        """sum_{k>=1} c_k * inner^{k-1} (inner constant term must be zero).

        This is the application of a shifted transform: when the stored
        coefficients are Boolean cumulants b_k at z^k, the result is
        sum_k b_k W^{k-1} for a matrix argument W.
        """
        if not inner.coeffs[0].is_zero():
            raise DomainError("shifted composition needs inner constant term zero")
        one = inner.coeffs[0].one_like()
        order = inner.order
        if self.order < 1:
            return TruncSeries.constant(one.zero_like(), order)
        power = TruncSeries.constant(one, order)
        acc = power.scale(self.coeffs[1])
        for k in range(2, self.order + 1):
            power = power * inner
            if power.is_zero():
                break
            c = self.coeffs[k]
            if not c.is_zero():
                acc = acc + power.scale(c)
        return acc

    def revert(self):
        """Compositional inverse g with self(g(z)) = z + O(z^{N+1}).

        Requires c_0 = 0 and c_1 invertible, scalar coefficients only.
        Solved triangularly: the z^n condition is linear in g_n because
        g_n enters sum_k c_k g^k only through the k = 1 term.
        """
        if not self.coeffs[0].is_zero():
            raise DomainError("reversion needs zero constant term")
        n = self.order
        if n < 1 or self.coeffs[1].is_zero():
            raise DomainError("reversion needs an invertible linear term")
        c1_inv = self.coeffs[1].inverse()
        zero = self.coeffs[0].zero_like()
        g = [zero, c1_inv]
        for m in range(2, n + 1):
            # evaluate sum_{k>=2} c_k * (g so far)^k at z^m; g_m unknown yet
            partial = TruncSeries(tuple(g) + (zero,) * (m - len(g) + 1))
            acc = zero
            power = partial * partial
            for k in range(2, m + 1):
                c = self.coeffs[k]
                if not c.is_zero():
                    acc = acc + c * power.coeffs[m]
                power = power * partial
            g.append(-(c1_inv * acc))
        return TruncSeries(tuple(g))

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append("(%s)*z" % c)
            else:
                parts.append("(%s)*z^%d" % (c, k))
        if not parts:
            return "0 + O(z^%d)" % (self.order + 1)
        return " + ".join(parts) + " + O(z^%d)" % (self.order + 1)

    def __repr__(self):
        return "TruncSeries(%r)" % (self.coeffs,)


class SquareMatrix:
    """A dense square matrix over any of the package's exact rings."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DomainError("matrix must be square")
        if n == 0:
            raise DomainError("empty matrix")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("SquareMatrix is immutable")

    @property
    def n(self):
        return len(self.rows)

    @classmethod
    def identity(cls, n, one=GQ_ONE):
        zero = one.zero_like()
        return cls(
            tuple(
                tuple(one if i == j else zero for j in range(n))
                for i in range(n)
            )
        )

    @classmethod
    def zeros(cls, n, zero=GQ_ZERO):
        return cls(((zero,) * n,) * n)

    def entry(self, i, j):
        return self.rows[i][j]

    def is_zero(self):
        return all(e.is_zero() for row in self.rows for e in row)

    def zero_like(self):
        z = self.rows[0][0].zero_like()
        return SquareMatrix.zeros(self.n, z)

    def one_like(self):
        return SquareMatrix.identity(self.n, self.rows[0][0].one_like())

    def map(self, fn):
        return SquareMatrix(tuple(tuple(fn(e) for e in row) for row in self.rows))

    def __add__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return SquareMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __sub__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return SquareMatrix(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __neg__(self):
        return self.map(lambda e: -e)

    def __mul__(self, other):
        if isinstance(other, SquareMatrix):
            n = self.n
            if other.n != n:
                raise DomainError("matrix size mismatch")
            cols = tuple(zip(*other.rows))
            out = []
            for row in self.rows:
                out_row = []
                for col in cols:
                    acc = None
                    for a, b in zip(row, col):
                        if a.is_zero() or b.is_zero():
                            continue
                        term = a * b
                        acc = term if acc is None else acc + term
                    if acc is None:
                        acc = row[0].zero_like() * col[0].zero_like()
                    out_row.append(acc)
                out.append(tuple(out_row))
            return SquareMatrix(tuple(out))
        # scalar from the right
        return self.map(lambda e: e * other)

    def __rmul__(self, other):
        # scalar from the left
        return self.map(lambda e: other * e)

    def scale(self, scalar):
        return self.map(lambda e: scalar * e)

    def transpose(self):
        return SquareMatrix(tuple(zip(*self.rows)))

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def inverse(self):
        """Exact inverse by Gaussian elimination, first nonzero pivot.

        Entries must support inverse(); raises DomainError when singular.
        """
        n = self.n
        zero = self.rows[0][0].zero_like()
        one = self.rows[0][0].one_like()
        work = [list(row) for row in self.rows]
        aug = [
            [one if i == j else zero for j in range(n)] for i in range(n)
        ]
        for col in range(n):
            pivot_row = None
            for r in range(col, n):
                if not work[r][col].is_zero():
                    pivot_row = r
                    break
            if pivot_row is None:
                raise DomainError("matrix is singular")
            if pivot_row != col:
                work[col], work[pivot_row] = work[pivot_row], work[col]
                aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
            pivot_inv = work[col][col].inverse()
            work[col] = [pivot_inv * e for e in work[col]]
            aug[col] = [pivot_inv * e for e in aug[col]]
            for r in range(n):
                if r == col:
                    continue
                factor = work[r][col]
                if factor.is_zero():
                    continue
                work[r] = [
                    e - factor * p for e, p in zip(work[r], work[col])
                ]
                aug[r] = [e - factor * p for e, p in zip(aug[r], aug[col])]
        return SquareMatrix(tuple(tuple(row) for row in aug))

    def apply_bilinear(self, left, right):
        """left^T * self * right for plain sequences of entries."""
        acc = None
        for i, row in enumerate(self.rows):
            li = left[i]
            if li.is_zero():
                continue
            for j, e in enumerate(row):
                rj = right[j]
                if rj.is_zero() or e.is_zero():
                    continue
                term = li * e * rj
                acc = term if acc is None else acc + term
        if acc is None:
            acc = self.rows[0][0].zero_like()
        return acc

    def __str__(self):
        return "[" + "; ".join(
            " ".join(str(e) for e in row) for row in self.rows
        ) + "]"

    __repr__ = __str__

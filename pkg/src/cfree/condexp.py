"""Free and quasi-conditional expectations onto the X-algebra.

Two word-level computations and their resolvent-level counterparts:

* efree_full / efree_rec: the psi-preserving conditional expectation
  E[W] onto polynomials in X, for X free from Y under psi.  The full
  formula sums over chains of x-runs weighted by Boolean cumulants of
  the gaps; the recursion peels the word with y-gated block functionals
  and the bimodule property.  Both produce the same polynomial.

* rqce: the right quasi-conditional expectation adapted to the pair
  (phi, psi).  It is phi-preserving and a right module map over the
  X-algebra, but deliberately not a left one; the failure of left
  modularity is what carries the second state.

The recursion used for both maps is a single uniform rule.  Writing
beta for the y-gated (resp. x-gated) block Boolean functional and
stripping one leading x by the one-sided module property:

    rqce[W]  = beta^phi_y(W)
             + sum_{W=UxV, U nonempty} beta^phi_y(U) rqce[xV]
             + sum_{W=UyV, U nonempty} beta^phi_x(U) (rqce - E)[yV]
             + [W starts with x] * x E[W']        (W = xW')

    E[W]     = same with phi replaced by psi; the x-gated difference
               term then cancels identically and drops out.

The gating makes every coefficient vanish unless the prefix starts and
ends with the right letter, so each surviving term strictly shortens
the word and the recursion terminates.

Resolvent forms apply the maps coefficientwise to the matrix resolvent
(I - z(AX + BY))^{-1} without touching any word: the subordination
blocks of the fixed-point engine already carry the answer.
"""

from __future__ import annotations

import itertools

from .engine import resolvent_series, solve_fixed_point
from .errors import DomainError, LimitError
from .ncpoly import NCPolynomial, block_factorize
from .series import SquareMatrix, TruncSeries
from .twostate import multilinear_boolean, partial_block_boolean

__all__ = [
    "CondExpResult",
    "efree_full",
    "efree_rec",
    "rqce",
    "efree_resolvent",
    "rqce_resolvent",
]

DEFAULT_GUARD = 10


class CondExpResult:
    """A conditional expectation value plus how it was computed.

    source is one of "full-formula", "recursive", "resolvent".  The
    polynomial is always supported on powers of x alone.
    """

    __slots__ = ("poly", "source")

    def __init__(self, poly, source):
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "source", source)

    def __setattr__(self, name, value):
        raise AttributeError("CondExpResult is immutable")

    def __eq__(self, other):
        if not isinstance(other, CondExpResult):
            return NotImplemented
        return self.poly == other.poly and self.source == other.source

    def __hash__(self):
        return hash((self.poly, self.source))

    def __repr__(self):
        return "CondExpResult(%r, %r)" % (self.poly, self.source)


def _checked_word(w, guard):
    if any(c not in "xy" for c in w):
        raise DomainError("words are over the letters x and y, got %r" % (w,))
    if len(w) > guard:
        raise LimitError(
            "word of length %d exceeds the guard %d; pass guard= to raise it"
            % (len(w), guard)
        )
    return w


def efree_full(spec, w, guard=DEFAULT_GUARD):
    """E[W] by direct summation over chains of x-runs.

    The word x^{a_0} y^{b_1} x^{a_1} ... y^{b_n} x^{a_n} contributes,
    for every chain 0 = i_0 < ... < i_{p+1} = n through the y-runs, the
    monomial given by concatenating the selected x-runs, weighted by the
    product of Boolean psi-cumulants of the skipped segments.
    """
    w = _checked_word(w, guard)
    if "y" not in w:
        return CondExpResult(NCPolynomial.word(w), "full-formula")
    runs_x = []
    runs_y = []
    blocks = block_factorize(w)
    if blocks[0][0] == "y":
        runs_x.append(0)
    for letter, count in blocks:
        (runs_x if letter == "x" else runs_y).append(count)
    if blocks[-1][0] == "y":
        runs_x.append(0)
    n = len(runs_y)
    out = NCPolynomial.zero()
    for p in range(n):
        for chain in itertools.combinations(range(1, n), p):
            points = (0,) + chain + (n,)
            weight = None
            for j in range(len(points) - 1):
                s, t = points[j], points[j + 1]
                args = []
                for r in range(s, t):
                    if r > s:
                        args.append("x" * runs_x[r])
                    args.append("y" * runs_y[r])
                factor = multilinear_boolean(spec, "psi", args)
                weight = factor if weight is None else weight * factor
                if weight.is_zero():
                    break
            if weight is None or weight.is_zero():
                continue
            kept = runs_x[0] + sum(runs_x[i] for i in chain) + runs_x[n]
            out = out + NCPolynomial.word("x" * kept, weight)
    return CondExpResult(out, "full-formula")


def _efree(spec, w, memo):
    if "y" not in w:
        return NCPolynomial.word(w)
    got = memo.get(w)
    if got is not None:
        return got
    if w[0] == "x":
        out = NCPolynomial.letter("x") * _efree(spec, w[1:], memo)
    else:
        out = NCPolynomial.zero()
        head = partial_block_boolean(spec, "psi", "y", w)
        if not head.is_zero():
            out = out + NCPolynomial.scalar(head)
        for k in range(1, len(w)):
            if w[k] != "x":
                continue
            coeff = partial_block_boolean(spec, "psi", "y", w[:k])
            if not coeff.is_zero():
                out = out + coeff * _efree(spec, w[k:], memo)
    memo[w] = out
    return out


def efree_rec(spec, w, guard=DEFAULT_GUARD):
    """E[W] by the peeling recursion; agrees with efree_full."""
    w = _checked_word(w, guard)
    return CondExpResult(_efree(spec, w, {}), "recursive")


def _rqce(spec, w, rmemo, ememo):
    if "y" not in w:
        return NCPolynomial.word(w)
    got = rmemo.get(w)
    if got is not None:
        return got
    out = NCPolynomial.zero()
    head = partial_block_boolean(spec, "phi", "y", w)
    if not head.is_zero():
        out = out + NCPolynomial.scalar(head)
    for k in range(1, len(w)):
        if w[k] == "x":
            coeff = partial_block_boolean(spec, "phi", "y", w[:k])
            if not coeff.is_zero():
                out = out + coeff * _rqce(spec, w[k:], rmemo, ememo)
        else:
            coeff = partial_block_boolean(spec, "phi", "x", w[:k])
            if not coeff.is_zero():
                diff = _rqce(spec, w[k:], rmemo, ememo) - _efree(
                    spec, w[k:], ememo
                )
                out = out + coeff * diff
    if w[0] == "x":
        out = out + NCPolynomial.letter("x") * _efree(spec, w[1:], ememo)
    rmemo[w] = out
    return out


def rqce(spec, w, guard=DEFAULT_GUARD):
    """Right quasi-conditional expectation of a word onto the X-algebra."""
    w = _checked_word(w, guard)
    return CondExpResult(_rqce(spec, w, {}, {}), "recursive")


def _lift_entries(series):
    """Scalar-matrix series -> the same series with polynomial entries."""
    return series.map(lambda mat: mat.map(NCPolynomial.scalar))


def _z_times_poly(series, order):
    zero = series.coeffs[0].zero_like()
    return TruncSeries(((zero,) + series.coeffs)[: order + 1])


def _efree_resolvent_factor(st):
    """(I - z A X - z B F_Y)^{-1} at the state's order."""
    order = st.order
    x = NCPolynomial.letter("x")
    ax = st.a.map(lambda mat: mat.map(lambda c: c * x))
    bf = _lift_entries(st.b * st.f_y)
    ident = TruncSeries.constant(
        SquareMatrix.identity(st.n, NCPolynomial.one()), order
    )
    return (ident - _z_times_poly(ax + bf, order)).inverse()


def efree_resolvent(spec, a, b, order):
    """E applied to (I - z(AX + BY))^{-1}, as a matrix series over C<x>.

    Equal to the coefficientwise conditional expectation of the word
    resolvent; computed instead from the solved subordination block F_Y
    as (I - zAX - zBF_Y)^{-1}.
    """
    st = solve_fixed_point(spec, a, b, order)
    return _efree_resolvent_factor(st)


def rqce_resolvent(spec, a, b, order):
    """rqce applied to (I - z(AX + BY))^{-1}, as a matrix series over C<x>.

    The product form
        M^phi(z) (I - zAF^phi_X - zBF_Y) (I - zAX - zBF_Y)^{-1}
    whose middle factor inverts phi applied entrywise to the free
    conditional expectation of the resolvent.
    """
    st = solve_fixed_point(spec, a, b, order)
    order = st.order
    first = _lift_entries(st.m_phi)
    mixed = (st.a * st.f_x_phi) + (st.b * st.f_y)
    ident = TruncSeries.constant(SquareMatrix.identity(st.n), order)
    middle = _lift_entries(ident - _z_times_poly(mixed, order))
    return first * middle * _efree_resolvent_factor(st)

"""Matrix fixed-point engine for sums A(z) X + B(z) Y.

Given a two-state spec and square matrix coefficients A, B (constant or
polynomial in z), the engine solves the coupled subordination system

    H_X = (I - z A F_X)^{-1}        F_X  = etat^psi_X(z H_Y A)
    H_Y = (I - z B F_Y)^{-1}        F_Y  = etat^psi_Y(z H_X B)
                                    F^phi_X = etat^phi_X(z H_Y A)
                                    F^phi_Y = etat^phi_Y(z H_X B)

where etat is the shifted Boolean cumulant transform of the appropriate
marginal, applied to a matrix argument.  The moment transforms of the sum
come out as matrix geometric series in the solved blocks:

    M^phi(z) = (I - z A F^phi_X - z B F^phi_Y)^{-1}
    M^psi(z) = (I - z A F_X    - z B F_Y   )^{-1}

Everything is exact: the system is triangular order by order, so a fixed
number of Jacobi sweeps settles every coefficient, and one further sweep is
run as a certificate that the result is an honest fixed point.

Order bookkeeping: with target order N, the six subordination blocks are
carried at order N-1 (their z^N coefficients would need cumulants of order
N+1, which a spec of order N does not hold) and the two moment transforms
at order N.  A spec of order >= N is exactly enough.
"""

from __future__ import annotations

from .errors import DomainError, InternalError
from .linearize import linearize
from .ncpoly import NCPolynomial, parse_poly
from .scalars import GQ_ONE, GaussianRational
from .series import SquareMatrix, TruncSeries
from .cumulants import MomentSeq

__all__ = [
    "EngineState",
    "resolvent_series",
    "solve_fixed_point",
    "mgf",
    "phi_resolvents",
    "poly_distribution",
]


def _coerce_matrix(mat):
    if isinstance(mat, SquareMatrix):
        return mat
    rows = tuple(
        tuple(
            e if isinstance(e, GaussianRational) else GaussianRational(e)
            for e in row
        )
        for row in mat
    )
    return SquareMatrix(rows)


def _as_matrix_series(coeffs, order):
    """Normalize A to a TruncSeries of SquareMatrix at the given order.

    Accepts a single matrix (constant in z, SquareMatrix or rows of
    scalars), a sequence of matrices (coefficient of z^k at position k),
    or a ready-made series.  Top coefficients beyond the order are
    dropped only if they are zero.
    """
    if isinstance(coeffs, SquareMatrix):
        return TruncSeries.constant(coeffs, order), coeffs.n
    if isinstance(coeffs, TruncSeries):
        stack = coeffs.coeffs
    else:
        stack = tuple(coeffs)
        if stack and not isinstance(stack[0], SquareMatrix):
            first = tuple(stack[0])
            if first and isinstance(first[0], (list, tuple)):
                stack = tuple(_coerce_matrix(m) for m in stack)
            else:
                mat = _coerce_matrix(stack)
                return TruncSeries.constant(mat, order), mat.n
    if not stack:
        raise DomainError("matrix coefficient stack is empty")
    n = stack[0].n
    for mat in stack:
        if not isinstance(mat, SquareMatrix) or mat.n != n:
            raise DomainError("matrix coefficients must be square and same size")
    for mat in stack[order + 1 :]:
        if not mat.is_zero():
            raise DomainError("matrix coefficients exceed the requested order")
    zero = SquareMatrix.zeros(n)
    padded = stack[: order + 1] + (zero,) * (order + 1 - len(stack))
    return TruncSeries(padded), n


def _z_times(series, order):
    """z * series, extended (not wrapped) and truncated to the order."""
    zero = series.coeffs[0].zero_like()
    return TruncSeries(((zero,) + series.coeffs)[: order + 1])


def resolvent_series(a, b, order):
    """(I - z (A(z) X + B(z) Y))^{-1} as a matrix series over C<X,Y>.

    Coefficients of the result are matrices with noncommutative polynomial
    entries; the z^k coefficient collects every word of the expansion that
    carries total z-weight k.
    """
    a_s, n = _as_matrix_series(a, order)
    b_s, nb = _as_matrix_series(b, order)
    if nb != n:
        raise DomainError("A and B must have the same size")
    x = NCPolynomial.letter("x")
    y = NCPolynomial.letter("y")
    lifted = []
    for k in range(order + 1):
        am = a_s.coeff(k).map(lambda c: c * x)
        bm = b_s.coeff(k).map(lambda c: c * y)
        lifted.append(am + bm)
    l_series = TruncSeries(lifted)
    ident = TruncSeries.constant(SquareMatrix.identity(n, NCPolynomial.one()), order)
    return (ident - l_series.shift(1)).inverse()


class EngineState:
    """Solved fixed point: the six subordination blocks plus both MGFs.

    The blocks h_x, h_y, f_x, f_y, f_x_phi, f_y_phi share one truncation
    order (N-1 for a target order N); m_phi and m_psi sit at order N.
    Instances are immutable once built.
    """

    __slots__ = (
        "spec",
        "order",
        "n",
        "a",
        "b",
        "h_x",
        "h_y",
        "f_x",
        "f_y",
        "f_x_phi",
        "f_y_phi",
        "m_phi",
        "m_psi",
    )

    def __init__(self, **fields):
        for name in self.__slots__:
            object.__setattr__(self, name, fields[name])

    def __setattr__(self, name, value):
        raise AttributeError("EngineState is immutable")

    def mgf(self, which="phi"):
        if which == "phi":
            return self.m_phi
        if which == "psi":
            return self.m_psi
        raise DomainError("which must be 'phi' or 'psi'")

    def corner(self, u, v, which="phi"):
        """Scalar series u^t M(z) v for coefficient vectors u, v."""
        u = tuple(
            e if isinstance(e, GaussianRational) else GaussianRational(e)
            for e in u
        )
        v = tuple(
            e if isinstance(e, GaussianRational) else GaussianRational(e)
            for e in v
        )
        return self.mgf(which).map(lambda mat: mat.apply_bilinear(u, v))


def _sweep(spec, a_s, b_s, ident, h_x, h_y, f_x, f_y):
    """One Jacobi update of the six blocks from the previous iterate."""
    arg_x = (h_y * a_s).shift(1)
    arg_y = (h_x * b_s).shift(1)
    new = (
        (ident - (a_s * f_x).shift(1)).inverse(),
        (ident - (b_s * f_y).shift(1)).inverse(),
        spec.eta("x", "psi").compose_shifted(arg_x),
        spec.eta("y", "psi").compose_shifted(arg_y),
        spec.eta("x", "phi").compose_shifted(arg_x),
        spec.eta("y", "phi").compose_shifted(arg_y),
    )
    return new


def solve_fixed_point(spec, a, b, order):
    """Solve the subordination system for A X + B Y at the given order.

    A and B may be constant matrices, stacks of z-coefficients, or matrix
    series; they must be square and of equal size.  Needs spec.order >=
    order.  Runs order+1 Jacobi sweeps, then one certification sweep that
    must be a no-op; anything else raises InternalError.
    """
    if order < 0:
        raise DomainError("order must be >= 0")
    if spec.order < order:
        raise DomainError(
            "engine order %d exceeds spec order %d" % (order, spec.order)
        )
    sub = max(order - 1, 0)
    a_s, n = _as_matrix_series(a, sub)
    b_s, nb = _as_matrix_series(b, sub)
    if nb != n:
        raise DomainError("A and B must have the same size")

    ident = TruncSeries.constant(SquareMatrix.identity(n), sub)
    zero = TruncSeries.constant(SquareMatrix.zeros(n), sub)
    blocks = (ident, ident, zero, zero, zero, zero)
    for _ in range(order + 1):
        h_x, h_y, f_x, f_y = blocks[0], blocks[1], blocks[2], blocks[3]
        updated = _sweep(spec, a_s, b_s, ident, h_x, h_y, f_x, f_y)
        blocks = updated
    check = _sweep(spec, a_s, b_s, ident, blocks[0], blocks[1], blocks[2], blocks[3])
    if check != blocks:
        raise InternalError(
            "subordination fixed point failed to stabilize after %d sweeps"
            % (order + 2)
        )
    h_x, h_y, f_x, f_y, f_x_phi, f_y_phi = blocks

    def transform(fx, fy):
        term = _z_times((a_s * fx) + (b_s * fy), order)
        full_ident = TruncSeries.constant(SquareMatrix.identity(n), order)
        return (full_ident - term).inverse()

    return EngineState(
        spec=spec,
        order=order,
        n=n,
        a=a_s,
        b=b_s,
        h_x=h_x,
        h_y=h_y,
        f_x=f_x,
        f_y=f_y,
        f_x_phi=f_x_phi,
        f_y_phi=f_y_phi,
        m_phi=transform(f_x_phi, f_y_phi),
        m_psi=transform(f_x, f_y),
    )


def mgf(state, which="phi"):
    """Moment transform of the solved sum in the requested state."""
    return state.mgf(which)


def phi_resolvents(state):
    """The phi analogues (I - z A F^phi_X)^{-1}, (I - z B F^phi_Y)^{-1}.

    Not part of the fixed point; exposed for identity checks.
    """
    sub = state.h_x.order
    ident = TruncSeries.constant(SquareMatrix.identity(state.n), sub)
    hx = (ident - (state.a * state.f_x_phi).shift(1)).inverse()
    hy = (ident - (state.b * state.f_y_phi).shift(1)).inverse()
    return hx, hy


def poly_distribution(spec, p, state="psi", order=None):
    """Moments of a polynomial P(X, Y) in the requested state, exactly.

    Linearizes P to a matrix pencil, solves the fixed point at order
    deg(P) * order, and reads the moments off the corner of the moment
    transform.  P must have zero constant term (a constant only shifts
    the distribution; remove it and add it back).  Needs spec.order >=
    deg(P) * order.
    """
    if isinstance(p, str):
        p = parse_poly(p)
    if order is None:
        raise DomainError("poly_distribution needs an explicit order")
    if state not in ("phi", "psi"):
        raise DomainError("state must be 'phi' or 'psi'")
    if order < 0:
        raise DomainError("order must be >= 0")
    lin = linearize(p)
    eng_order = lin.m * order
    if spec.order < eng_order:
        raise DomainError(
            "degree-%d polynomial at order %d needs spec order >= %d, have %d"
            % (lin.m, order, eng_order, spec.order)
        )
    st = solve_fixed_point(spec, lin.a_coeffs, lin.b_coeffs, eng_order)
    corner = st.corner(lin.u, lin.v, state)
    if not corner.coeff(0) == GQ_ONE:
        raise InternalError("corner series does not start at 1")
    for k in range(1, eng_order + 1):
        if k % lin.m and not corner.coeff(k).is_zero():
            raise InternalError(
                "corner series has weight at z^%d, not a multiple of %d"
                % (k, lin.m)
            )
    values = tuple(corner.coeff(lin.m * k) for k in range(1, order + 1))
    return MomentSeq(values, state)

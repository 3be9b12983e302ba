"""Multiplicative convolution: subordination for products X Y.

The two subordination series are coupled through the shifted Boolean
transforms of the opposite letters,

    omega_X(z) = z etat^psi_Y(omega_Y(z)),
    omega_Y(z) = z etat^psi_X(omega_X(z)),

and carry the whole product theory: M^psi of XY is M^psi_X composed
with omega_X, the Boolean transform of XY in either state factors as
eta^st_X(omega_X) * eta^st_Y(omega_Y) pointwise in the shifted picture,
and the phi-transform of the product is the geometric series in that
factored symbol.  The fixed point is triangular order by order, exactly
as in the additive engine, so finitely many sweeps settle it and one
extra sweep certifies it.

sigma_transform computes the multiplicative symbol of a single pair of
marginals: the shifted phi-Boolean transform reparametrized by the
compositional inverse of the psi-Boolean transform.  Its defining
property, checked in the tests, is multiplicativity over the product.
"""

from __future__ import annotations

from .cumulants import boolean_from_moments, eta_series
from .errors import DomainError, InternalError
from .scalars import GQ_ONE, GQ_ZERO
from .series import TruncSeries

__all__ = [
    "SubordinationPair",
    "subordination_pair",
    "mgf_product_phi",
    "sigma_transform",
]


class SubordinationPair:
    """The two solved subordination series, both with zero constant term."""

    __slots__ = ("omega_x", "omega_y")

    def __init__(self, omega_x, omega_y):
        object.__setattr__(self, "omega_x", omega_x)
        object.__setattr__(self, "omega_y", omega_y)

    def __setattr__(self, name, value):
        raise AttributeError("SubordinationPair is immutable")

    @property
    def order(self):
        return self.omega_x.order

    def __eq__(self, other):
        if not isinstance(other, SubordinationPair):
            return NotImplemented
        return self.omega_x == other.omega_x and self.omega_y == other.omega_y

    def __repr__(self):
        return "SubordinationPair(%r, %r)" % (self.omega_x, self.omega_y)


def _advance(eta, omega_other, order):
    """z * etat(omega_other), truncated to the order."""
    if order == 0:
        return TruncSeries.constant(GQ_ZERO, 0)
    t = eta.compose_shifted(omega_other)
    return TruncSeries((GQ_ZERO,) + t.truncated(order - 1).coeffs)


def subordination_pair(spec, order):
    """Solve the coupled subordination fixed point at the given order.

    Needs spec.order >= order.  Runs order+1 Jacobi sweeps plus one
    certification sweep that must leave the pair unchanged.
    """
    if order < 0:
        raise DomainError("order must be >= 0")
    if spec.order < order:
        raise DomainError(
            "subordination order %d exceeds spec order %d" % (order, spec.order)
        )
    eta_x = spec.eta("x", "psi")
    eta_y = spec.eta("y", "psi")
    omega_x = TruncSeries.constant(GQ_ZERO, order)
    omega_y = omega_x
    for _ in range(order + 1):
        omega_x, omega_y = (
            _advance(eta_y, omega_y, order),
            _advance(eta_x, omega_x, order),
        )
    again = (_advance(eta_y, omega_y, order), _advance(eta_x, omega_x, order))
    if again != (omega_x, omega_y):
        raise InternalError(
            "subordination fixed point failed to stabilize after %d sweeps"
            % (order + 2)
        )
    return SubordinationPair(omega_x, omega_y)


def mgf_product_phi(spec, order):
    """Moment series of the product XY in the state phi.

    The geometric series in z * etat^phi_X(omega_X) * etat^phi_Y(omega_Y);
    its coefficients are exactly phi((XY)^n).
    """
    pair = subordination_pair(spec, order)
    if order == 0:
        return TruncSeries.constant(GQ_ONE, 0)
    tx = spec.eta("x", "phi").compose_shifted(pair.omega_x).truncated(order - 1)
    ty = spec.eta("y", "phi").compose_shifted(pair.omega_y).truncated(order - 1)
    symbol = TruncSeries((GQ_ZERO,) + (tx * ty).coeffs)
    return (TruncSeries.constant(GQ_ONE, order) - symbol).inverse()


def sigma_transform(marginal, order):
    """The multiplicative symbol of a (phi, psi) pair of marginals.

    marginal is a pair (phi_moments, psi_moments).  The result is the
    shifted phi-Boolean transform composed with the compositional
    inverse of the psi-Boolean transform, a series of order one less
    than requested (its top coefficient would need cumulants past the
    marginals' order).  The psi-mean must be nonzero for the inverse
    to exist.
    """
    phi_m, psi_m = marginal
    if order < 1:
        raise DomainError("sigma transform needs order >= 1")
    if phi_m.order < order or psi_m.order < order:
        raise DomainError(
            "sigma transform at order %d needs marginals of that order" % order
        )
    if psi_m.moment(1).is_zero():
        raise DomainError("sigma transform needs a nonzero psi-mean")
    eta_psi = eta_series(boolean_from_moments(psi_m), order)
    eta_phi = eta_series(boolean_from_moments(phi_m), order)
    inverse = eta_psi.revert()
    return eta_phi.compose_shifted(inverse).truncated(order - 1)

"""Product subordination and the multiplicative symbol, vs the oracle.

Oracle values are always psi((xy)^n) / phi((xy)^n) computed by direct
word-moment evaluation; the generating-function side must reproduce
them exactly.
"""

import random
from fractions import Fraction

import pytest

from cfree.condexp import efree_rec, rqce
from cfree.cumulants import (
    MomentSeq,
    boolean_from_moments,
    eta_series,
    eta_tilde_series,
)
from cfree.errors import DomainError
from cfree.multiplicative import (
    SubordinationPair,
    mgf_product_phi,
    sigma_transform,
    subordination_pair,
)
from cfree.ncpoly import NCPolynomial
from cfree.scalars import GQ_ONE, GQ_ZERO
from cfree.series import TruncSeries
from cfree.twostate import (
    TwoStateSpec,
    point_mass_moments,
    random_spec,
    semicircle_moments,
)


def nonzero_mean_spec(seed, order):
    rng = random.Random(seed)
    while True:
        s = random_spec(rng, order)
        if not s.moment("psi", "x").is_zero() and not s.moment(
            "psi", "y"
        ).is_zero():
            return s


def product_moments(spec, state, count, guard=None):
    return MomentSeq(
        tuple(
            spec.moment(state, "xy" * n, guard=guard)
            for n in range(1, count + 1)
        ),
        state,
    )


def test_point_mass_is_a_unit():
    pm = point_mass_moments(1, 6)
    spec = TwoStateSpec(6, pm, pm)
    pair = subordination_pair(spec, 6)
    z = TruncSeries.variable(6)
    assert pair.omega_x == z and pair.omega_y == z
    geometric = (TruncSeries.constant(GQ_ONE, 6) - z).inverse()
    assert mgf_product_phi(spec, 6) == geometric


def test_unit_against_semicircle():
    """X a point mass at 1 leaves Y's distribution untouched."""
    pm = point_mass_moments(1, 8)
    sc = semicircle_moments(1, 8)
    spec = TwoStateSpec(8, pm, sc)
    pair = subordination_pair(spec, 8)
    assert pair.omega_y == TruncSeries.variable(8)
    mp = mgf_product_phi(spec, 8)
    assert mp == spec.marginal("y", "phi").series()


def test_residual_identities_hold():
    spec = nonzero_mean_spec(3, 8)
    pair = subordination_pair(spec, 8)
    adv_x = spec.eta("y", "psi").compose_shifted(pair.omega_y)
    adv_y = spec.eta("x", "psi").compose_shifted(pair.omega_x)
    assert pair.omega_x == TruncSeries(
        (GQ_ZERO,) + adv_x.truncated(7).coeffs
    )
    assert pair.omega_y == TruncSeries(
        (GQ_ZERO,) + adv_y.truncated(7).coeffs
    )
    assert pair.omega_x.coeff(0).is_zero()
    assert pair == SubordinationPair(pair.omega_x, pair.omega_y)


def test_psi_mgf_composition_vs_oracle():
    for seed in (3, 11):
        spec = nonzero_mean_spec(seed, 12)
        pair = subordination_pair(spec, 6)
        lhs = spec.marginal("x", "psi").series().compose(pair.omega_x)
        for n in range(7):
            assert lhs.coeff(n) == spec.moment("psi", "xy" * n)


def test_phi_mgf_vs_oracle():
    for seed in (5, 13):
        spec = nonzero_mean_spec(seed, 12)
        mp = mgf_product_phi(spec, 6)
        for n in range(7):
            assert mp.coeff(n) == spec.moment("phi", "xy" * n)


def test_eta_identities_order_eight():
    """Boolean transform of XY: both compositions, both factorizations."""
    spec = nonzero_mean_spec(7, 16)
    pair = subordination_pair(spec, 8)
    psi_m = product_moments(spec, "psi", 8, guard=16)
    eta_xy = eta_series(boolean_from_moments(psi_m), 8)
    assert eta_xy.agrees_with(spec.eta("x", "psi").compose(pair.omega_x), 8)
    assert eta_xy.agrees_with(spec.eta("y", "psi").compose(pair.omega_y), 8)
    for state in ("psi", "phi"):
        m = product_moments(spec, state, 8, guard=16)
        etat_xy = eta_tilde_series(boolean_from_moments(m))
        tx = spec.eta("x", state).compose_shifted(pair.omega_x).truncated(7)
        ty = spec.eta("y", state).compose_shifted(pair.omega_y).truncated(7)
        assert etat_xy == tx * ty


def test_sigma_is_multiplicative():
    for seed in (3, 19, 23):
        spec = nonzero_mean_spec(seed, 14)
        sx = sigma_transform(
            (spec.marginal("x", "phi"), spec.marginal("x", "psi")), 7
        )
        sy = sigma_transform(
            (spec.marginal("y", "phi"), spec.marginal("y", "psi")), 7
        )
        sxy = sigma_transform(
            (product_moments(spec, "phi", 7), product_moments(spec, "psi", 7)),
            7,
        )
        assert sxy == (sx * sy).truncated(6)


def test_sigma_unit_and_errors():
    pm_psi = point_mass_moments(1, 6)
    pm_phi = point_mass_moments(1, 6, "phi")
    assert sigma_transform((pm_phi, pm_psi), 6) == TruncSeries.constant(
        GQ_ONE, 5
    )
    sc = semicircle_moments(1, 6)  # mean zero
    with pytest.raises(DomainError):
        sigma_transform((pm_phi, sc), 6)
    with pytest.raises(DomainError):
        sigma_transform((pm_phi, pm_psi), 0)
    with pytest.raises(DomainError):
        sigma_transform((pm_phi, pm_psi), 7)
    assert sigma_transform((pm_phi, pm_psi), 4).order == 3


def test_product_resolvent_conditional_expectation():
    """E applied to (1 - zXY)^{-1} is the geometric series in omega_X x."""
    spec = random_spec(random.Random(9), 10)
    K = 5
    pair = subordination_pair(spec, K)
    x = NCPolynomial.letter("x")
    ident = TruncSeries.constant(NCPolynomial.one(), K)
    geom = (ident - pair.omega_x.map(lambda c: c * x)).inverse()
    for n in range(K + 1):
        assert efree_rec(spec, "xy" * n).poly == geom.coeff(n)


def test_product_resolvent_quasi_expectation():
    """rqce of (1 - zXY)^{-1}: scalar prefactor times the geometric series.

    The prefactor is (1 - etat^phi_X(om_X) om_X) over the phi symbol
    denominator (1 - z etat^phi_X(om_X) etat^phi_Y(om_Y))."""
    spec = random_spec(random.Random(9), 10)
    K = 5
    pair = subordination_pair(spec, K)
    x = NCPolynomial.letter("x")
    ident = TruncSeries.constant(NCPolynomial.one(), K)
    geom = (ident - pair.omega_x.map(lambda c: c * x)).inverse()
    tx = spec.eta("x", "phi").compose_shifted(pair.omega_x)
    ty = spec.eta("y", "phi").compose_shifted(pair.omega_y)
    num = TruncSeries.constant(GQ_ONE, K) - tx * pair.omega_x
    den = TruncSeries.constant(GQ_ONE, K) - TruncSeries(
        (GQ_ZERO,) + (tx * ty).truncated(K - 1).coeffs
    )
    s = num * den.inverse()
    for n in range(K + 1):
        expected = NCPolynomial.zero()
        for j in range(n + 1):
            expected = expected + s.coeff(j) * geom.coeff(n - j)
        assert rqce(spec, "xy" * n).poly == expected


def test_order_and_spec_bounds():
    spec = nonzero_mean_spec(3, 6)
    with pytest.raises(DomainError):
        subordination_pair(spec, 7)
    pair0 = subordination_pair(spec, 0)
    assert pair0.omega_x.is_zero() and pair0.order == 0
    assert mgf_product_phi(spec, 0) == TruncSeries.constant(GQ_ONE, 0)

"""Moment and cumulant sequences of a single variable, and conversions.

Conversions are triangular recursions on the defining summation formulas:
a length-n identity is solved for its top term, so every map here is exact
and is its own inverse witness.  Partition-indexed sums (irreducible
expansions, products-as-entries) delegate enumeration to the partitions
module.
"""

from __future__ import annotations

from .errors import DomainError
from .partitions import (
    enumerate_interval,
    enumerate_irreducible,
    outer_inner,
)
from .scalars import GQ_ONE, GQ_ZERO, GaussianRational
from .series import TruncSeries

MOMENT_STATES = ("psi", "phi")
CUMULANT_KINDS = ("boolean-psi", "boolean-phi", "free-psi", "cfree")


def _coerce_values(values):
    out = []
    for v in values:
        if isinstance(v, int):
            v = GaussianRational(v)
        if not isinstance(v, GaussianRational):
            raise DomainError("sequence entries must be rational scalars")
        out.append(v)
    return tuple(out)


class MomentSeq:
    """Moments m_1..m_N of one variable under a named state."""

    __slots__ = ("state", "values")

    def __init__(self, values, state="psi"):
        if state not in MOMENT_STATES:
            raise DomainError("unknown state tag %r" % (state,))
        object.__setattr__(self, "state", state)
        object.__setattr__(self, "values", _coerce_values(values))

    def __setattr__(self, name, value):
        raise AttributeError("MomentSeq is immutable")

    @property
    def order(self):
        return len(self.values)

    def moment(self, k):
        """m_k, with m_0 = 1."""
        if k == 0:
            return GQ_ONE
        if not 1 <= k <= self.order:
            raise DomainError("moment index %d outside declared order" % k)
        return self.values[k - 1]

    def series(self):
        """The moment generating function 1 + m_1 z + ... + m_N z^N."""
        return TruncSeries((GQ_ONE,) + self.values)

    def __eq__(self, other):
        if not isinstance(other, MomentSeq):
            return NotImplemented
        return self.state == other.state and self.values == other.values

    def __hash__(self):
        return hash((self.state, self.values))

    def __repr__(self):
        return "MomentSeq(%r, state=%r)" % (list(self.values), self.state)


class CumulantSeq:
    """Cumulants c_1..c_N with a kind tag fixing their meaning."""

    __slots__ = ("kind", "values")

    def __init__(self, values, kind):
        if kind not in CUMULANT_KINDS:
            raise DomainError("unknown cumulant kind %r" % (kind,))
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "values", _coerce_values(values))

    def __setattr__(self, name, value):
        raise AttributeError("CumulantSeq is immutable")

    @property
    def order(self):
        return len(self.values)

    def value(self, k):
        if not 1 <= k <= self.order:
            raise DomainError("cumulant index %d outside declared order" % k)
        return self.values[k - 1]

    def __eq__(self, other):
        if not isinstance(other, CumulantSeq):
            return NotImplemented
        return self.kind == other.kind and self.values == other.values

    def __hash__(self):
        return hash((self.kind, self.values))

    def __repr__(self):
        return "CumulantSeq(%r, kind=%r)" % (list(self.values), self.kind)


def eta_series(boolean, order=None):
    """eta(z) = sum beta_k z^k as a series with zero constant term."""
    order = boolean.order if order is None else order
    if order > boolean.order:
        raise DomainError("eta requested beyond available cumulants")
    return TruncSeries([GQ_ZERO] + [boolean.value(k) for k in range(1, order + 1)])


def eta_tilde_series(boolean, order=None):
    """eta~(w) = sum beta_k w^{k-1}, the shifted transform.

    Exact to order N-1 when N cumulants are known; asking for more raises.
    """
    order = boolean.order - 1 if order is None else order
    if order + 1 > boolean.order:
        raise DomainError("eta~ requested beyond available cumulants")
    return TruncSeries([boolean.value(k) for k in range(1, order + 2)])


def _boolean_kind(state):
    return "boolean-psi" if state == "psi" else "boolean-phi"


def boolean_from_moments(m):
    """Deconcatenation recursion: m_n = sum_j beta_j m_{n-j}."""
    beta = []
    for n in range(1, m.order + 1):
        value = m.moment(n)
        for j in range(1, n):
            value = value - beta[j - 1] * m.moment(n - j)
        beta.append(value)
    return CumulantSeq(beta, _boolean_kind(m.state))


def moments_from_boolean(beta, state=None):
    if state is None:
        state = "phi" if beta.kind == "boolean-phi" else "psi"
    moments = []
    for n in range(1, beta.order + 1):
        value = beta.value(n)
        for j in range(1, n):
            prev = moments[n - j - 1] if n - j >= 1 else GQ_ONE
            value = value + beta.value(j) * prev
        moments.append(value)
    return MomentSeq(moments, state)


def _series_power_coeff(series_list, k, index):
    """[z^index] of the product of k copies from a coefficient list."""
    acc = TruncSeries.constant(GQ_ONE, index)
    base = TruncSeries(series_list[: index + 1])
    for _ in range(k):
        acc = acc * base
    return acc.coeff(index)


def moments_from_free(r, state="psi"):
    """m_n = sum_k r_k [z^{n-k}] M(z)^k, solved upward in n."""
    mom = [GQ_ONE]
    for n in range(1, r.order + 1):
        value = GQ_ZERO
        for k in range(1, n + 1):
            value = value + r.value(k) * _series_power_coeff(mom, k, n - k)
        mom.append(value)
    return MomentSeq(mom[1:], state)


def free_from_moments(m):
    """Invert the free moment-cumulant recursion triangularly."""
    mom = [GQ_ONE] + list(m.values)
    r = []
    for n in range(1, m.order + 1):
        value = m.moment(n)
        for k in range(1, n):
            value = value - r[k - 1] * _series_power_coeff(mom, k, n - k)
        r.append(value)
    return CumulantSeq(r, "free-psi")


def _mixed_power_coeff(psi_mom, phi_mom, k, index):
    """[z^index] of M_psi^{k-1} * M_phi from coefficient lists."""
    acc = TruncSeries(phi_mom[: index + 1])
    base = TruncSeries(psi_mom[: index + 1])
    for _ in range(k - 1):
        acc = acc * base
    return acc.coeff(index)


def phi_moments_from_cfree(cfree, r_psi):
    """m^phi_n = sum_k rc_k [z^{n-k}] (M_psi^{k-1} M_phi), upward in n.

    Outer blocks carry the c-free cumulants, nestings inside them only see
    the psi data; the generating-function form of that weighting is the
    mixed power above.
    """
    if cfree.order != r_psi.order:
        raise DomainError("cumulant orders differ")
    psi_mom = [GQ_ONE] + list(moments_from_free(r_psi).values)
    phi_mom = [GQ_ONE]
    for n in range(1, cfree.order + 1):
        value = GQ_ZERO
        for k in range(1, n + 1):
            value = value + cfree.value(k) * _mixed_power_coeff(
                psi_mom, phi_mom, k, n - k
            )
        phi_mom.append(value)
    return MomentSeq(phi_mom[1:], "phi")


def cfree_from_two_moments(m_phi, r_psi):
    """Solve the c-free recursion for the top cumulant at each order."""
    if m_phi.order != r_psi.order:
        raise DomainError("orders differ")
    psi_mom = [GQ_ONE] + list(moments_from_free(r_psi).values)
    phi_mom = [GQ_ONE] + list(m_phi.values)
    rc = []
    for n in range(1, m_phi.order + 1):
        value = m_phi.moment(n)
        for k in range(1, n):
            value = value - rc[k - 1] * _mixed_power_coeff(
                psi_mom, phi_mom, k, n - k
            )
        rc.append(value)
    return CumulantSeq(rc, "cfree")


def partition_weight(p, seq):
    """prod over blocks V of seq_{|V|} for a single cumulant sequence."""
    value = GQ_ONE
    for block in p.blocks:
        value = value * seq.value(len(block))
    return value


def partition_weight_outer_inner(p, outer_seq, inner_seq):
    """Outer blocks weighted by one sequence, inner blocks by the other."""
    outer, inner = outer_inner(p)
    value = GQ_ONE
    for block in outer:
        value = value * outer_seq.value(len(block))
    for block in inner:
        value = value * inner_seq.value(len(block))
    return value


def boolean_from_free_irr(r, cfree=None):
    """beta_n as a sum over irreducible noncrossing partitions.

    With one argument this is the single-state identity beta_n =
    sum_{pi irreducible} r_pi.  With a c-free sequence supplied, the
    unique outer block takes the c-free weight and the result is the
    phi-Boolean sequence.
    """
    beta = []
    for n in range(1, r.order + 1):
        total = GQ_ZERO
        for p in enumerate_irreducible(n):
            if cfree is None:
                total = total + partition_weight(p, r)
            else:
                total = total + partition_weight_outer_inner(p, cfree, r)
        beta.append(total)
    kind = "boolean-psi" if cfree is None else "boolean-phi"
    return CumulantSeq(beta, kind)


def partitioned_functional(fn, p, args):
    """prod over blocks of a multilinear functional on restricted args."""
    if len(args) != p.n:
        raise DomainError("argument count differs from ground set")
    value = GQ_ONE
    for block in p.blocks:
        value = value * fn(tuple(args[i - 1] for i in block))
    return value


def _cut_set(p):
    """Positions k with a block boundary between k and k+1 (intervals only)."""
    if not p.is_interval():
        raise DomainError("expected an interval partition")
    return {b[-1] for b in p.blocks} - {p.n}


def boolean_products_join(beta, rho, args):
    """Products-as-entries via the interval-lattice join condition.

    beta_m(prod_1, ..., prod_m) = sum of beta_pi over interval partitions
    pi of the letters whose cuts avoid every cut of rho.
    """
    forbidden = _cut_set(rho)
    if len(args) != rho.n:
        raise DomainError("argument count differs from ground set")
    total = GQ_ZERO
    for p in enumerate_interval(rho.n):
        if _cut_set(p) & forbidden:
            continue
        total = total + partitioned_functional(beta, p, args)
    return total


def boolean_products_recursive(beta, rho, args):
    """Products-as-entries by splitting off the leftmost cumulant block."""
    _cut_set(rho)
    if len(args) != rho.n:
        raise DomainError("argument count differs from ground set")
    ends = [b[-1] for b in rho.blocks]

    def rec(atoms, ends):
        total = beta(tuple(atoms))
        prev = 0
        for k, dk in enumerate(ends):
            for j in range(prev + 1, dk):
                left = beta(tuple(atoms[:j]))
                rest = rec(atoms[j:], [e - j for e in ends[k:]])
                total = total + left * rest
            prev = dk
        return total

    return rec(list(args), ends)


def boolean_products(beta, rho, args, method="recursive"):
    if method == "recursive":
        return boolean_products_recursive(beta, rho, args)
    if method == "join":
        return boolean_products_join(beta, rho, args)
    raise DomainError("unknown method %r" % (method,))

"""Ground truth for joint (psi, phi)-moments of two c-free variables.

A TwoStateSpec holds marginal moment sequences for the letters x and y
under both states and derives their cumulant sequences once.  Joint word
moments are colored noncrossing partition sums, evaluated here by a
first-block recursion instead of literal enumeration:

    psi(w) = sum over chains 0 = b_1 < ... < b_k of positions carrying
             w[0], of r_k * prod psi(gap between consecutive b_i)
             * psi(tail after b_k),

because the block containing position 0 splits the word into enclosed
gaps (independent, fully nested) and a free tail.  The phi version is the
same chain sum with the outer block weighted by the c-free cumulant and
the tail recursed under phi, since everything inside a gap is nested and
keeps psi weights.  Tests replay literal enumeration against this.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .cumulants import (
    CumulantSeq,
    MomentSeq,
    boolean_from_moments,
    cfree_from_two_moments,
    eta_series,
    eta_tilde_series,
    free_from_moments,
)
from .errors import DomainError, LimitError, ParseError
from .ncpoly import ALPHABET, NCPolynomial, block_factorize, check_word
from .partitions import (
    ENUMERATION_GUARD,
    enumerate_nc,
    enumerate_nc_colored,
    is_ll,
    is_vnrp,
    outer_inner,
)
from .scalars import GQ_ONE, GQ_ZERO, GaussianRational, parse_gaussian

STATES = ("psi", "phi")


class TwoStateSpec:
    """Marginal data of x and y plus memoized joint moment evaluation."""

    __slots__ = (
        "order",
        "_psi",
        "_phi",
        "_beta",
        "_r_psi",
        "_r_cfree",
        "_psi_memo",
        "_phi_memo",
        "_chain_memo",
    )

    def __init__(self, order, x_psi, y_psi, x_phi=None, y_phi=None):
        if order < 1:
            raise DomainError("spec order must be at least 1")
        psi = {"x": x_psi, "y": y_psi}
        phi = {
            "x": x_phi if x_phi is not None else MomentSeq(x_psi.values, "phi"),
            "y": y_phi if y_phi is not None else MomentSeq(y_psi.values, "phi"),
        }
        for letter in ALPHABET:
            if psi[letter].order != order or phi[letter].order != order:
                raise DomainError("marginal orders must equal the spec order")
            if psi[letter].state != "psi" or phi[letter].state != "phi":
                raise DomainError("marginal state tags are inconsistent")
        beta = {}
        r_psi = {}
        r_cfree = {}
        for letter in ALPHABET:
            beta[letter, "psi"] = boolean_from_moments(psi[letter])
            beta[letter, "phi"] = boolean_from_moments(phi[letter])
            r_psi[letter] = free_from_moments(psi[letter])
            r_cfree[letter] = cfree_from_two_moments(phi[letter], r_psi[letter])
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_psi", psi)
        object.__setattr__(self, "_phi", phi)
        object.__setattr__(self, "_beta", beta)
        object.__setattr__(self, "_r_psi", r_psi)
        object.__setattr__(self, "_r_cfree", r_cfree)
        object.__setattr__(self, "_psi_memo", {"": GQ_ONE})
        object.__setattr__(self, "_phi_memo", {"": GQ_ONE})
        object.__setattr__(self, "_chain_memo", {})

    def __setattr__(self, name, value):
        raise AttributeError("TwoStateSpec is immutable")

    # -- marginal data -------------------------------------------------------

    def marginal(self, letter, state="psi"):
        check_word(letter)
        return (self._psi if state == "psi" else self._phi)[letter]

    def boolean_cumulants(self, letter, state="psi"):
        check_word(letter)
        return self._beta[letter, state]

    def free_cumulants(self, letter):
        check_word(letter)
        return self._r_psi[letter]

    def cfree_cumulants(self, letter):
        check_word(letter)
        return self._r_cfree[letter]

    def eta(self, letter, state="psi", order=None):
        return eta_series(self.boolean_cumulants(letter, state), order)

    def eta_tilde(self, letter, state="psi", order=None):
        return eta_tilde_series(self.boolean_cumulants(letter, state), order)

    # -- joint moments --------------------------------------------------------

    def _chains(self, word):
        """For each chain end: (tail start, chain sums indexed by length).

        chain[t][k-1] sums prod of gap psi-moments over all chains of k
        positions of letter word[0] starting at 0 and ending at the t-th
        occurrence.
        """
        hit = self._chain_memo.get(word)
        if hit is not None:
            return hit
        letter = word[0]
        positions = [j for j, ch in enumerate(word) if ch == letter]
        rows = []
        for t, j in enumerate(positions):
            row = [GQ_ONE if j == 0 else GQ_ZERO]
            for k in range(2, t + 2):
                acc = GQ_ZERO
                for s in range(k - 2, t):
                    prev = rows[s][k - 2]
                    if prev.is_zero():
                        continue
                    gap = self._psi_word(word[positions[s] + 1 : j])
                    acc = acc + prev * gap
                row.append(acc)
            rows.append(row)
        result = [(j + 1, rows[t]) for t, j in enumerate(positions)]
        self._chain_memo[word] = result
        return result

    def _psi_word(self, word):
        value = self._psi_memo.get(word)
        if value is not None:
            return value
        r = self._r_psi[word[0]]
        total = GQ_ZERO
        for tail_start, chain in self._chains(word):
            tail = self._psi_word(word[tail_start:])
            if tail.is_zero():
                continue
            for k, weight in enumerate(chain, start=1):
                if not weight.is_zero():
                    total = total + weight * r.value(k) * tail
        self._psi_memo[word] = total
        return total

    def _phi_word(self, word):
        value = self._phi_memo.get(word)
        if value is not None:
            return value
        rc = self._r_cfree[word[0]]
        total = GQ_ZERO
        for tail_start, chain in self._chains(word):
            tail = self._phi_word(word[tail_start:])
            if tail.is_zero():
                continue
            for k, weight in enumerate(chain, start=1):
                if not weight.is_zero():
                    total = total + weight * rc.value(k) * tail
        self._phi_memo[word] = total
        return total

    def moment(self, state, word, guard=None):
        if state not in STATES:
            raise DomainError("unknown state %r" % (state,))
        check_word(word)
        limit = ENUMERATION_GUARD if guard is None else guard
        if len(word) > limit:
            raise LimitError(
                "word length %d exceeds guard %d" % (len(word), limit)
            )
        if len(word) > self.order:
            raise DomainError(
                "word length %d exceeds spec order %d" % (len(word), self.order)
            )
        return self._psi_word(word) if state == "psi" else self._phi_word(word)

    def psi_moment(self, word, guard=None):
        return self.moment("psi", word, guard)

    def phi_moment(self, word, guard=None):
        return self.moment("phi", word, guard)

    def poly_moment(self, state, poly, guard=None):
        """Linear extension of the word moment to polynomials."""
        if isinstance(poly, str):
            poly = NCPolynomial.word(poly)
        total = GQ_ZERO
        for word, coeff in poly.terms.items():
            total = total + coeff * self.moment(state, word, guard)
        return total


# ---------------------------------------------------------------------------
# cumulant functionals evaluated against a spec
# ---------------------------------------------------------------------------


def multilinear_boolean(spec, state, args):
    """beta_n(a_1, ..., a_n) by the deconcatenation recursion."""
    args = [NCPolynomial.word(a) if isinstance(a, str) else a for a in args]
    n = len(args)
    if n == 0:
        raise DomainError("Boolean cumulant of no arguments")
    prefix = []
    products = [NCPolynomial.one()]
    for a in args:
        products.append(products[-1] * a)
    for k in range(1, n + 1):
        value = spec.poly_moment(state, products[k])
        for j in range(1, k):
            suffix = NCPolynomial.one()
            for a in args[j:k]:
                suffix = suffix * a
            value = value - prefix[j - 1] * spec.poly_moment(state, suffix)
        prefix.append(value)
    return prefix[n - 1]


def _multi_free(spec, args, memo):
    hit = memo.get(args)
    if hit is not None:
        return hit
    n = len(args)
    product = NCPolynomial.one()
    for a in args:
        product = product * a
    value = spec.poly_moment("psi", product)
    for p in enumerate_nc(n):
        if p.num_blocks() == 1:
            continue
        term = GQ_ONE
        for block in p.blocks:
            term = term * _multi_free(
                spec, tuple(args[i - 1] for i in block), memo
            )
            if term.is_zero():
                break
        value = value - term
    memo[args] = value
    return value


def multilinear_free(spec, args):
    """r_n(a_1, ..., a_n): top coefficient of the noncrossing moment sum."""
    args = tuple(
        NCPolynomial.word(a) if isinstance(a, str) else a for a in args
    )
    if not args:
        raise DomainError("free cumulant of no arguments")
    return _multi_free(spec, args, {})


def _multi_cfree(spec, args, free_memo, cfree_memo):
    hit = cfree_memo.get(args)
    if hit is not None:
        return hit
    n = len(args)
    product = NCPolynomial.one()
    for a in args:
        product = product * a
    value = spec.poly_moment("phi", product)
    for p in enumerate_nc(n):
        if p.num_blocks() == 1:
            continue
        outer, inner = outer_inner(p)
        term = GQ_ONE
        for block in outer:
            term = term * _multi_cfree(
                spec, tuple(args[i - 1] for i in block), free_memo, cfree_memo
            )
        for block in inner:
            term = term * _multi_free(
                spec, tuple(args[i - 1] for i in block), free_memo
            )
        value = value - term
    cfree_memo[args] = value
    return value


def multilinear_cfree(spec, args):
    """r^{phi,psi}_n(a_1, ..., a_n): outer blocks c-free, inner blocks free."""
    args = tuple(
        NCPolynomial.word(a) if isinstance(a, str) else a for a in args
    )
    if not args:
        raise DomainError("c-free cumulant of no arguments")
    return _multi_cfree(spec, args, {}, {})


def block_boolean(spec, state, word):
    """Boolean cumulant of the maximal single-letter runs of the word."""
    check_word(word)
    if word == "":
        return GQ_ONE
    runs = [NCPolynomial.word(ch * k) for ch, k in block_factorize(word)]
    return multilinear_boolean(spec, state, runs)


def partial_block_boolean(spec, state, letter, word):
    """block_boolean on words framed by the letter, zero otherwise."""
    check_word(letter)
    check_word(word)
    if word == "":
        return GQ_ONE
    if word[0] != letter or word[-1] != letter:
        return GQ_ZERO
    return block_boolean(spec, state, word)


def letterwise_boolean(spec, state, word):
    """Boolean cumulant with the individual letters as entries."""
    check_word(word)
    if word == "":
        return GQ_ONE
    return multilinear_boolean(spec, state, list(word))


def partial_letterwise_boolean(spec, state, letter, word):
    check_word(letter)
    check_word(word)
    if word == "":
        return GQ_ONE
    if word[0] != letter or word[-1] != letter:
        return GQ_ZERO
    return letterwise_boolean(spec, state, word)


def block_boolean_poly(spec, state, poly, partial=None):
    """Linear extension over a polynomial's monomials."""
    total = GQ_ZERO
    for word, coeff in poly.terms.items():
        if partial is None:
            value = block_boolean(spec, state, word)
        else:
            value = partial_block_boolean(spec, state, partial, word)
        total = total + coeff * value
    return total


def letterwise_boolean_poly(spec, state, poly, partial=None):
    total = GQ_ZERO
    for word, coeff in poly.terms.items():
        if partial is None:
            value = letterwise_boolean(spec, state, word)
        else:
            value = partial_letterwise_boolean(spec, state, partial, word)
        total = total + coeff * value
    return total


def nested_two_state_boolean(spec, p, args, method="direct"):
    """Outer blocks under phi, inner under psi; or the ll-refinement sum."""
    args = tuple(
        NCPolynomial.word(a) if isinstance(a, str) else a for a in args
    )
    if len(args) != p.n:
        raise DomainError("argument count differs from ground set")
    if method == "direct":
        outer, inner = outer_inner(p)
        value = GQ_ONE
        for block in outer:
            value = value * multilinear_boolean(
                spec, "phi", [args[i - 1] for i in block]
            )
        for block in inner:
            value = value * multilinear_boolean(
                spec, "psi", [args[i - 1] for i in block]
            )
        return value
    if method == "refinement":
        free_memo = {}
        cfree_memo = {}
        total = GQ_ZERO
        for rho in enumerate_nc(p.n):
            if not is_ll(rho, p):
                continue
            outer, inner = outer_inner(rho)
            term = GQ_ONE
            for block in outer:
                term = term * _multi_cfree(
                    spec,
                    tuple(args[i - 1] for i in block),
                    free_memo,
                    cfree_memo,
                )
            for block in inner:
                term = term * _multi_free(
                    spec, tuple(args[i - 1] for i in block), free_memo
                )
            total = total + term
        return total
    raise DomainError("unknown method %r" % (method,))


def vnrp_boolean_phi(spec, args, colors):
    """beta^phi_n(a_1..a_n) as the VNRP sum over irreducible colored
    partitions, each weighted outer-phi / inner-psi."""
    args = tuple(
        NCPolynomial.word(a) if isinstance(a, str) else a for a in args
    )
    colors = tuple(colors)
    if len(args) != len(colors):
        raise DomainError("one color per argument required")
    total = GQ_ZERO
    for p in enumerate_nc_colored(colors):
        if not p.is_irreducible() or not is_vnrp(p, colors):
            continue
        total = total + nested_two_state_boolean(spec, p, args, "direct")
    return total


# ---------------------------------------------------------------------------
# construction helpers
# ---------------------------------------------------------------------------


def semicircle_moments(variance, order, state="psi"):
    """Even moments Catalan_k * v^k, odd moments zero."""
    if isinstance(variance, int):
        variance = GaussianRational(variance)
    values = []
    power = GQ_ONE
    for n in range(1, order + 1):
        if n % 2:
            values.append(GQ_ZERO)
        else:
            k = n // 2
            power = power * variance
            values.append(GaussianRational(math.comb(n, k) // (k + 1)) * power)
    return MomentSeq(values, state)


def atom_moments(pairs, order, state="psi"):
    """Moments of a finite atomic measure given as (value, weight) pairs."""
    pairs = [
        (
            GaussianRational(v) if isinstance(v, int) else v,
            GaussianRational(w) if isinstance(w, int) else w,
        )
        for v, w in pairs
    ]
    total = GQ_ZERO
    for _, w in pairs:
        total = total + w
    if total != GQ_ONE:
        raise DomainError("atom weights must sum to 1")
    values = []
    powers = [GQ_ONE] * len(pairs)
    for _ in range(order):
        powers = [p * v for p, (v, _) in zip(powers, pairs)]
        m = GQ_ZERO
        for p, (_, w) in zip(powers, pairs):
            m = m + w * p
        values.append(m)
    return MomentSeq(values, state)


def point_mass_moments(value, order, state="psi"):
    return atom_moments([(value, GQ_ONE)], order, state)


def random_spec(rng, order, distinct_phi=True, span=4):
    """Small random rational marginals; phi defaults to new sequences."""

    def seq(state):
        return MomentSeq(
            [
                GaussianRational(
                    Fraction(rng.randint(-span, span), rng.randint(1, 3))
                )
                for _ in range(order)
            ],
            state,
        )

    return TwoStateSpec(
        order,
        seq("psi"),
        seq("psi"),
        seq("phi") if distinct_phi else None,
        seq("phi") if distinct_phi else None,
    )


# ---------------------------------------------------------------------------
# JSON input
#
#   {"x": {"psi": DIST, "phi": DIST?}, "y": {...}, "order": N}
#   DIST = {"kind": "moments", "moments": ["0", "1", ...]}
#        | {"kind": "semicircle", "variance": "1"}
#        | {"kind": "atoms", "atoms": [{"value": "-1", "weight": "1/2"}, ...]}
# ---------------------------------------------------------------------------


def _json_scalar(value, what):
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError("%s must be an exact rational string" % what)
    if isinstance(value, int):
        return GaussianRational(value)
    if isinstance(value, str):
        return parse_gaussian(value)
    raise ParseError("%s must be an exact rational string" % what)


def dist_moments(dist, order, state):
    if not isinstance(dist, dict):
        raise ParseError("distribution must be an object")
    kind = dist.get("kind")
    if kind == "moments":
        raw = dist.get("moments")
        if not isinstance(raw, list):
            raise ParseError("moments distribution needs a 'moments' list")
        values = [_json_scalar(v, "moment") for v in raw]
        if len(values) < order:
            raise ParseError(
                "need %d moments, got %d" % (order, len(values))
            )
        return MomentSeq(values[:order], state)
    if kind == "semicircle":
        variance = _json_scalar(dist.get("variance", "1"), "variance")
        return semicircle_moments(variance, order, state)
    if kind == "atoms":
        raw = dist.get("atoms")
        if not isinstance(raw, list) or not raw:
            raise ParseError("atoms distribution needs a nonempty 'atoms' list")
        pairs = []
        for entry in raw:
            if not isinstance(entry, dict):
                raise ParseError("each atom must be an object")
            pairs.append(
                (
                    _json_scalar(entry.get("value"), "atom value"),
                    _json_scalar(entry.get("weight"), "atom weight"),
                )
            )
        try:
            return atom_moments(pairs, order, state)
        except DomainError as exc:
            raise ParseError(str(exc)) from None
    raise ParseError("unknown distribution kind %r" % (kind,))


def spec_from_json(data):
    if not isinstance(data, dict):
        raise ParseError("spec must be a JSON object")
    order = data.get("order")
    if not isinstance(order, int) or isinstance(order, bool) or order < 1:
        raise ParseError("spec needs a positive integer 'order'")
    seqs = {}
    for letter in ALPHABET:
        entry = data.get(letter)
        if not isinstance(entry, dict) or "psi" not in entry:
            raise ParseError("spec needs %r with at least a 'psi' entry" % letter)
        seqs[letter, "psi"] = dist_moments(entry["psi"], order, "psi")
        if "phi" in entry:
            seqs[letter, "phi"] = dist_moments(entry["phi"], order, "phi")
        else:
            seqs[letter, "phi"] = None
    return TwoStateSpec(
        order,
        seqs["x", "psi"],
        seqs["y", "psi"],
        seqs["x", "phi"],
        seqs["y", "phi"],
    )


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------


def _det(rows):
    rows = [list(r) for r in rows]
    n = len(rows)
    det = Fraction(1)
    for col in range(n):
        pivot = next(
            (r for r in range(col, n) if rows[r][col] != 0), None
        )
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, n):
            factor = Fraction(rows[r][col], 1) / rows[col][col]
            for c in range(col, n):
                rows[r][c] -= factor * rows[col][c]
    return det


def hankel_warnings(spec):
    """Non-fatal positivity diagnostics for the four marginal sequences."""
    notes = []
    for letter in ALPHABET:
        for state in STATES:
            seq = spec.marginal(letter, state)
            if any(m.im for m in seq.values):
                notes.append(
                    "%s moments of %s are not real" % (state, letter)
                )
                continue
            moments = [Fraction(1)] + [m.re for m in seq.values]
            size = (len(moments) + 1) // 2
            for k in range(1, size + 1):
                rows = [
                    [moments[i + j] for j in range(k)] for i in range(k)
                ]
                if _det(rows) < 0:
                    notes.append(
                        "%s moments of %s fail positivity at Hankel size %d"
                        % (state, letter, k)
                    )
                    break
    return notes

"""Linearizations: realize (1 - z^m P)^{-1} as a corner of a matrix resolvent.

The automaton states are the proper prefixes of the monomials of P (the
root is the empty word).  Reading a monomial walks up the trie through
unit edges and returns to the root by a completion edge carrying the
monomial's coefficient times z^{m-k}, so that every root-to-root segment
of length k contributes its monomial with total z-weight exactly z^m.
Summing over closed paths then gives

    u^t (I - z(A(z)X + B(z)Y))^{-1} v  =  sum_j z^{mj} P^j,

with A collecting the x-labeled edge weights at (source, target) and B
the y-labeled ones, and u = v = the root coordinate vector.
"""

from __future__ import annotations

from .errors import DomainError, ParseError
from .ncpoly import NCPolynomial
from .scalars import GQ_ONE, GQ_ZERO, GaussianRational, format_gaussian, parse_gaussian
from .series import SquareMatrix, TruncSeries


class Linearization:
    """Matrices A(z), B(z) as z-coefficient lists, plus the corner vectors."""

    __slots__ = ("n", "m", "a_coeffs", "b_coeffs", "u", "v")

    def __init__(self, n, m, a_coeffs, b_coeffs, u, v):
        a_coeffs = tuple(a_coeffs)
        b_coeffs = tuple(b_coeffs)
        for mat in a_coeffs + b_coeffs:
            if mat.n != n:
                raise DomainError("matrix size differs from state count")
        if len(u) != n or len(v) != n:
            raise DomainError("corner vectors must have one entry per state")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "a_coeffs", a_coeffs)
        object.__setattr__(self, "b_coeffs", b_coeffs)
        object.__setattr__(self, "u", tuple(u))
        object.__setattr__(self, "v", tuple(v))

    def __setattr__(self, name, value):
        raise AttributeError("Linearization is immutable")

    def letter_matrix_series(self, letter, order):
        """A(z) or B(z) as a scalar-matrix series padded to the order."""
        coeffs = self.a_coeffs if letter == "x" else self.b_coeffs
        zero = SquareMatrix.zeros(self.n)
        out = [coeffs[k] if k < len(coeffs) else zero for k in range(order + 1)]
        return TruncSeries(out)

    def l_series(self, order):
        """L(z) = A(z)X + B(z)Y with polynomial entries."""
        x = NCPolynomial.letter("x")
        y = NCPolynomial.letter("y")
        zero = SquareMatrix.zeros(self.n, NCPolynomial.zero())
        out = []
        for k in range(order + 1):
            mat = zero
            if k < len(self.a_coeffs):
                mat = mat + self.a_coeffs[k].map(lambda c: c * x)
            if k < len(self.b_coeffs):
                mat = mat + self.b_coeffs[k].map(lambda c: c * y)
            out.append(mat)
        return TruncSeries(out)

    def resolvent_corner(self, order):
        """u^t (I - zL)^{-1} v as a polynomial-coefficient series."""
        ident = SquareMatrix.identity(self.n, NCPolynomial.one())
        l = self.l_series(order)
        inner = TruncSeries.constant(ident, order) - l.shift(1)
        resolvent = inner.inverse()
        u = [NCPolynomial.word("", c) for c in self.u]
        v = [NCPolynomial.word("", c) for c in self.v]
        return resolvent.map(lambda mat: mat.apply_bilinear(u, v))


def linearize(p):
    """Prefix-trie linearization of a polynomial with zero constant term."""
    if not isinstance(p, NCPolynomial) or p.is_zero():
        raise DomainError("cannot linearize the zero polynomial")
    if not p.constant_coefficient().is_zero():
        raise DomainError(
            "constant terms only translate the distribution; shift them off"
        )
    m = p.degree()
    words = p.words()
    states = {"": 0}
    for word in words:
        for k in range(1, len(word)):
            states.setdefault(word[:k], len(states))
    n = len(states)

    a_entries = {}
    b_entries = {}
    unit_seen = set()

    def add(letter, src, dst, power, weight):
        table = a_entries if letter == "x" else b_entries
        key = (power, src, dst)
        table[key] = table.get(key, GQ_ZERO) + weight

    for word in words:
        coeff = p.terms[word]
        length = len(word)
        for k in range(1, length):
            src = states[word[: k - 1]]
            dst = states[word[:k]]
            letter = word[k - 1]
            if (src, dst, letter) not in unit_seen:
                unit_seen.add((src, dst, letter))
                add(letter, src, dst, 0, GQ_ONE)
        src = states[word[: length - 1]]
        add(word[-1], src, 0, m - length, coeff)

    max_power = max(
        (key[0] for table in (a_entries, b_entries) for key in table),
        default=0,
    )

    def build(table):
        out = []
        for power in range(max_power + 1):
            rows = [[GQ_ZERO] * n for _ in range(n)]
            for (pw, i, j), w in table.items():
                if pw == power:
                    rows[i][j] = w
            out.append(SquareMatrix(tuple(tuple(r) for r in rows)))
        return out

    unit = [GQ_ONE] + [GQ_ZERO] * (n - 1)
    return Linearization(n, m, build(a_entries), build(b_entries), unit, unit)


class VerifyResult:
    """Outcome of a linearization check; falsy when any order mismatched."""

    __slots__ = ("ok", "first_mismatch")

    def __init__(self, ok, first_mismatch=None):
        object.__setattr__(self, "ok", ok)
        object.__setattr__(self, "first_mismatch", first_mismatch)

    def __setattr__(self, name, value):
        raise AttributeError("VerifyResult is immutable")

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "VerifyResult(ok)"
        return "VerifyResult(mismatch at z^%d)" % self.first_mismatch


def geometric_corner(p, m, order):
    """sum_j z^{mj} P^j truncated: the target of every linearization."""
    zero = NCPolynomial.zero()
    coeffs = [zero] * (order + 1)
    power = NCPolynomial.one()
    j = 0
    while j * m <= order:
        coeffs[j * m] = power
        power = power * p
        j += 1
    return TruncSeries(coeffs)


def verify_linearization(lin, p, order):
    """Expand both sides to the given order and compare exactly."""
    lhs = geometric_corner(p, lin.m, order)
    rhs = lin.resolvent_corner(order)
    for k in range(order + 1):
        if lhs.coeff(k) != rhs.coeff(k):
            return VerifyResult(False, k)
    return VerifyResult(True)


# ---------------------------------------------------------------------------
# JSON form: matrices as nested arrays of z-coefficient string lists
# ---------------------------------------------------------------------------


def _matrix_stack_to_json(coeffs, n):
    powers = len(coeffs)
    return [
        [
            [format_gaussian(coeffs[p].entry(i, j)) for p in range(powers)]
            for j in range(n)
        ]
        for i in range(n)
    ]


def linearization_to_json(lin):
    return {
        "n": lin.n,
        "m": lin.m,
        "a": _matrix_stack_to_json(lin.a_coeffs, lin.n),
        "b": _matrix_stack_to_json(lin.b_coeffs, lin.n),
        "u": [format_gaussian(c) for c in lin.u],
        "v": [format_gaussian(c) for c in lin.v],
    }


def _scalar_from_json(value, what):
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError("%s must be an exact rational string" % what)
    if isinstance(value, int):
        return GaussianRational(value)
    if isinstance(value, str):
        return parse_gaussian(value)
    raise ParseError("%s must be an exact rational string" % what)


def _matrix_stack_from_json(data, n, what):
    if not isinstance(data, list) or len(data) != n:
        raise ParseError("%s must be an %dx%d nested array" % (what, n, n))
    powers = 1
    parsed = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError("%s row %d has wrong length" % (what, i))
        prow = []
        for j, cell in enumerate(row):
            if isinstance(cell, list):
                entry = [_scalar_from_json(c, what) for c in cell]
            else:
                entry = [_scalar_from_json(cell, what)]
            powers = max(powers, len(entry))
            prow.append(entry)
        parsed.append(prow)
    out = []
    for power in range(powers):
        rows = tuple(
            tuple(
                parsed[i][j][power] if power < len(parsed[i][j]) else GQ_ZERO
                for j in range(n)
            )
            for i in range(n)
        )
        out.append(SquareMatrix(rows))
    return out


def linearization_from_json(data):
    if not isinstance(data, dict):
        raise ParseError("linearization must be a JSON object")
    n = data.get("n")
    m = data.get("m")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("linearization needs a positive integer 'n'")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ParseError("linearization needs a positive integer 'm'")
    a = _matrix_stack_from_json(data.get("a"), n, "matrix a")
    b = _matrix_stack_from_json(data.get("b"), n, "matrix b")
    u = data.get("u")
    v = data.get("v")
    if not isinstance(u, list) or not isinstance(v, list):
        raise ParseError("linearization needs 'u' and 'v' vectors")
    u = [_scalar_from_json(c, "vector u") for c in u]
    v = [_scalar_from_json(c, "vector v") for c in v]
    try:
        return Linearization(n, m, a, b, u, v)
    except DomainError as exc:
        raise ParseError(str(exc)) from None

import random
from fractions import Fraction

import pytest

from cfree.errors import DomainError, ParseError
from cfree.ncpoly import (
    NCPolynomial,
    TensorPoly,
    amplified_diff,
    block_factorize,
    format_poly,
    free_diff,
    ldelta,
    lift_left,
    lift_right,
    odot,
    parse_poly,
    partial_diff,
    rdelta,
)
from cfree.scalars import GQ_I, GQ_ONE, GQ_ZERO, gq
from cfree.series import SquareMatrix

X = NCPolynomial.letter("x")
Y = NCPolynomial.letter("y")
ONE = NCPolynomial.one()


def rand_poly(rng, max_deg=4, max_terms=5):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        w = "".join(rng.choice("xy") for _ in range(rng.randint(0, max_deg)))
        terms[w] = gq(rng.randint(-5, 5), rng.randint(-2, 2))
    return NCPolynomial(terms)


def tensor_right(p):
    """1 (x) p."""
    return TensorPoly(2, {("", w): c for w, c in p.terms.items()})


def tensor_left(p):
    """p (x) 1."""
    return TensorPoly(2, {(w, ""): c for w, c in p.terms.items()})


# -- algebra --------------------------------------------------------------


def test_ring_basics():
    p = (X + Y) ** 2
    assert p == X * X + X * Y + Y * X + Y * Y
    assert p.degree() == 2
    assert (X * Y - Y * X).coeff("xy") == GQ_ONE
    assert (X - X).is_zero()
    assert NCPolynomial.zero().degree() == -1
    assert (X * Y).letters_used() == {"x", "y"}
    assert ONE.is_constant()


def test_noncommutativity():
    assert X * Y != Y * X
    comm = X * Y - Y * X
    assert comm.coeff("yx") == -GQ_ONE
    assert (comm * comm).coeff("xyxy") == GQ_ONE
    assert (comm * comm).coeff("xyyx") == -GQ_ONE


def test_scalar_action():
    p = 2 * X + X * Y
    assert p.coeff("x") == gq(2)
    assert (p * Fraction(1, 2)).coeff("xy") == gq(Fraction(1, 2))
    assert (GQ_I * X).star() == -GQ_I * X


def test_pow():
    assert X ** 0 == ONE
    assert X ** 3 == NCPolynomial.word("xxx")
    assert ((X + Y) ** 3).coeff("xyx") == GQ_ONE
    with pytest.raises(DomainError):
        X ** -1


def test_star():
    p = GQ_I * X * Y + gq(2) * Y
    q = p.star()
    assert q == -GQ_I * Y * X + gq(2) * Y
    assert q.star() == p
    rng = random.Random(23)
    for _ in range(30):
        a = rand_poly(rng)
        b = rand_poly(rng)
        assert (a * b).star() == b.star() * a.star()
        assert (a + b).star() == a.star() + b.star()


def test_constant_inverse():
    assert NCPolynomial.scalar(gq(2)).inverse() == NCPolynomial.scalar(
        gq(Fraction(1, 2))
    )
    with pytest.raises(DomainError):
        X.inverse()
    with pytest.raises(DomainError):
        NCPolynomial.zero().inverse()


def test_apply_linear():
    p = X * Y + gq(3) * X
    total = p.apply_linear(lambda w: gq(len(w)))
    assert total == gq(2) + gq(3) * gq(1)


def test_block_factorize():
    assert block_factorize("xxxyyx") == [("x", 3), ("y", 2), ("x", 1)]
    assert block_factorize("x") == [("x", 1)]
    assert block_factorize("") == []


# -- parsing and printing -------------------------------------------------


def test_parse_examples():
    assert parse_poly("(x+y)^2") == (X + Y) ** 2
    assert parse_poly("x*y - y*x") == X * Y - Y * X
    assert parse_poly("i*(x*y - y*x)").coeff("xy") == GQ_I
    assert parse_poly("1/2*x + 3*y^2") == NCPolynomial(
        {"x": gq(Fraction(1, 2)), "yy": gq(3)}
    )
    assert parse_poly("-x") == -X
    assert parse_poly("2 - x*y") == NCPolynomial({"": gq(2), "xy": gq(-1)})
    assert parse_poly("x^2*y") == NCPolynomial.word("xxy")


def test_parse_errors_carry_offsets():
    with pytest.raises(ParseError, match="byte"):
        parse_poly("x + * y")
    with pytest.raises(ParseError):
        parse_poly("(x + y")
    with pytest.raises(ParseError):
        parse_poly("x y")
    with pytest.raises(ParseError):
        parse_poly("z + 1")
    with pytest.raises(ParseError):
        parse_poly("")
    with pytest.raises(ParseError):
        parse_poly("x^")


def test_format_round_trip():
    rng = random.Random(31)
    for _ in range(60):
        p = rand_poly(rng)
        assert parse_poly(format_poly(p)) == p
    assert format_poly(NCPolynomial.zero()) == "0"
    assert format_poly(X * X * X * Y * Y) == "x^3*y^2"


# -- derivations ----------------------------------------------------------


def test_free_diff_frozen():
    d = free_diff(X ** 3, "x")
    assert d == TensorPoly(
        2, {("", "xx"): GQ_ONE, ("x", "x"): GQ_ONE, ("xx", ""): GQ_ONE}
    )
    assert free_diff(X, "x") == TensorPoly.one()
    assert free_diff(Y * X * Y, "x") == TensorPoly(2, {("y", "y"): GQ_ONE})
    assert free_diff(Y, "x").is_zero()
    assert free_diff(ONE, "x").is_zero()


def test_partial_diff_iterated():
    d2 = partial_diff(X ** 2, "x", 2)
    assert d2 == TensorPoly(3, {("", "", ""): GQ_ONE})
    d2 = partial_diff(X ** 3, "x", 2)
    assert d2 == TensorPoly(
        3,
        {
            ("", "", "x"): GQ_ONE,
            ("", "x", ""): GQ_ONE,
            ("x", "", ""): GQ_ONE,
        },
    )
    assert partial_diff(X ** 2, "x") == free_diff(X ** 2, "x")
    with pytest.raises(DomainError):
        partial_diff(X, "x", 0)


def test_deconcatenations_frozen():
    assert rdelta(X ** 2, "x") == TensorPoly(
        2, {("", "xx"): GQ_ONE, ("x", "x"): GQ_ONE}
    )
    assert ldelta(X ** 2, "x") == TensorPoly(
        2, {("x", "x"): GQ_ONE, ("xx", ""): GQ_ONE}
    )
    assert rdelta(Y * X * Y, "x") == TensorPoly(2, {("y", "xy"): GQ_ONE})
    assert ldelta(Y * X * Y, "x") == TensorPoly(2, {("yx", "y"): GQ_ONE})


def test_counit_slot_recovers_letter_initial_part():
    # keeping only tensors with empty first slot recovers the x-initial part
    rng = random.Random(41)
    for _ in range(30):
        p = rand_poly(rng)
        d = rdelta(p, "x")
        left = {w: c for (u, w), c in d.terms.items() if u == ""}
        expect = {w: c for w, c in p.terms.items() if w.startswith("x")}
        assert left == expect


def test_leibniz():
    rng = random.Random(43)
    for _ in range(30):
        p = rand_poly(rng, max_deg=3)
        q = rand_poly(rng, max_deg=3)
        for letter in "xy":
            lhs = free_diff(p * q, letter)
            rhs = free_diff(p, letter) * tensor_right(q) + tensor_left(
                p
            ) * free_diff(q, letter)
            assert lhs == rhs


def test_coassociativity_on_monomials():
    d = partial_diff(X ** 4, "x", 3)
    assert d.arity == 4
    # compositions of 4 - 3 = 1 over 4 slots
    assert set(d.terms) == {
        ("x", "", "", ""),
        ("", "x", "", ""),
        ("", "", "x", ""),
        ("", "", "", "x"),
    }
    assert all(c == GQ_ONE for c in d.terms.values())


def test_tensor_product_componentwise():
    a = TensorPoly(2, {("x", "y"): GQ_ONE})
    b = TensorPoly(2, {("y", "x"): gq(2)})
    assert a * b == TensorPoly(2, {("xy", "yx"): gq(2)})
    assert a + (-a) == TensorPoly.zero()
    assert TensorPoly.one() * a == a


def test_component_apply():
    d = free_diff(X ** 3, "x")
    total = d.component_apply([lambda w: gq(len(w) + 1)] * 2)
    # slots (0,2),(1,1),(2,0): 1*3 + 2*2 + 3*1
    assert total == gq(10)


def test_amplified_diff_and_odot():
    p = X * Y
    q = Y
    m = SquareMatrix(((p, q), (q, p)))
    d = amplified_diff(m, "x")
    assert d.entry(0, 0) == TensorPoly(2, {("", "y"): GQ_ONE})
    assert d.entry(0, 1).is_zero()
    with pytest.raises(DomainError):
        amplified_diff(m, "x", which="sideways")

    a = SquareMatrix(((X,),))
    b = SquareMatrix(((Y,),))
    assert odot(a, b).entry(0, 0) == TensorPoly(2, {("x", "y"): GQ_ONE})
    assert lift_left(a).entry(0, 0) == TensorPoly(2, {("x", ""): GQ_ONE})
    assert lift_right(b).entry(0, 0) == TensorPoly(2, {("", "y"): GQ_ONE})


def test_matrix_leibniz():
    rng = random.Random(47)
    for _ in range(10):
        a = SquareMatrix(
            tuple(tuple(rand_poly(rng, 2, 2) for _ in range(2)) for _ in range(2))
        )
        b = SquareMatrix(
            tuple(tuple(rand_poly(rng, 2, 2) for _ in range(2)) for _ in range(2))
        )
        lhs = amplified_diff(a * b, "x")
        rhs = amplified_diff(a, "x") * lift_right(b) + lift_left(
            a
        ) * amplified_diff(b, "x")
        assert lhs == rhs

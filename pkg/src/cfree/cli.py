"""Command-line front end.

Subcommands map one-to-one onto the library: moments (distribution of a
polynomial under either state), cumulants (Boolean, free or c-free
sequences of a marginal), condexp (E or rqce of a word, or the corner
series of a linearized resolvent), denoise (L2 projection plus optional
weighted-state distributions), sigma (the multiplicative symbol and its
multiplicativity residual), partitions (debug enumerations), verify
(built-in self-check suites).

Output is deterministic: JSON with keys in fixed order and every
rational printed as a string; CSV is offered only for single scalar
series; the pretty format is for humans and not stable.  Exit codes:
0 success, 2 usage or parse error, 3 domain or resource-limit error,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .condexp import efree_rec, efree_resolvent, rqce, rqce_resolvent
from .cumulants import (
    MomentSeq,
    boolean_from_moments,
    cfree_from_two_moments,
    free_from_moments,
)
from .denoise import distributions_of_poly, l2_project, weighted_state
from .engine import poly_distribution
from .errors import CFreeError, ParseError
from .linearize import linearize, verify_linearization
from .multiplicative import mgf_product_phi, sigma_transform
from .ncpoly import NCPolynomial, parse_poly
from .partitions import (
    enumerate_interval,
    enumerate_irreducible,
    enumerate_nc,
    enumerate_nc_colored,
    is_ll,
    vnrp_closure,
)
from .scalars import GQ_ONE
from .series import TruncSeries
from .twostate import (
    multilinear_boolean,
    point_mass_moments,
    random_spec,
    spec_from_json,
    vnrp_boolean_phi,
)

__all__ = ["main"]


def _dump(payload):
    return json.dumps(payload, separators=(",", ":"))


def _strings(values):
    return [str(v) for v in values]


def _poly_terms(p):
    return [[w, str(p.terms[w])] for w in p.words()]


def _load_spec(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError("cannot read spec file: %s" % exc) from None
    except json.JSONDecodeError as exc:
        raise ParseError("spec file is not valid JSON: %s" % exc) from None
    return spec_from_json(data)


def _render_series(key, label, values, fmt):
    if fmt == "csv":
        lines = ["n,value"]
        lines.extend("%d,%s" % (n + 1, v) for n, v in enumerate(values))
        return "\n".join(lines)
    if fmt == "pretty":
        return "%s: %s" % (label, ", ".join(values) if values else "(empty)")
    return _dump({key: values})


# -- subcommand handlers ------------------------------------------------------


def _cmd_moments(args):
    spec = _load_spec(args.spec)
    seq = poly_distribution(spec, args.poly, args.state, args.order)
    values = _strings(seq.values)
    label = "%s moments of %s to order %d" % (args.state, args.poly, args.order)
    return 0, _render_series("moments", label, values, args.format)


def _cmd_cumulants(args):
    spec = _load_spec(args.spec)
    if args.kind == "boolean":
        state = args.state or "psi"
        seq = boolean_from_moments(spec.marginal(args.letter, state))
    elif args.state is not None:
        raise ParseError("--state applies only to Boolean cumulants")
    elif args.kind == "free":
        seq = free_from_moments(spec.marginal(args.letter, "psi"))
    else:
        seq = cfree_from_two_moments(
            spec.marginal(args.letter, "phi"),
            free_from_moments(spec.marginal(args.letter, "psi")),
        )
    values = _strings(seq.values)
    label = "%s cumulants of %s" % (seq.kind, args.letter)
    if args.format == "json":
        return 0, _dump({"kind": seq.kind, "values": values})
    return 0, _render_series("values", label, values, args.format)


def _resolvent_corner(spec, poly_text, state, order):
    lin = linearize(parse_poly(poly_text))
    if state == "psi":
        series = efree_resolvent(spec, lin.a_coeffs, lin.b_coeffs, order)
    else:
        series = rqce_resolvent(spec, lin.a_coeffs, lin.b_coeffs, order)
    u = [NCPolynomial.word("", c) for c in lin.u]
    v = [NCPolynomial.word("", c) for c in lin.v]
    return series.map(lambda mat: mat.apply_bilinear(u, v))


def _cmd_condexp(args):
    spec = _load_spec(args.spec)
    if args.word is not None:
        if args.poly is not None:
            raise ParseError("--poly belongs to --resolvent mode")
        fn = efree_rec if args.state == "psi" else rqce
        if args.guard is not None:
            result = fn(spec, args.word, guard=args.guard)
        else:
            result = fn(spec, args.word)
        return 0, _dump(
            {"source": result.source, "terms": _poly_terms(result.poly)}
        )
    if args.poly is None or args.order is None:
        raise ParseError("--resolvent needs both --poly and --order")
    corner = _resolvent_corner(spec, args.poly, args.state, args.order)
    return 0, _dump(
        {"series": [_poly_terms(corner.coeff(k)) for k in range(args.order + 1)]}
    )


def _cmd_denoise(args):
    spec = _load_spec(args.spec)
    result = l2_project(spec, args.target, args.poly, args.degree)
    payload = {
        "coefficients": _strings(result.coefficients),
        "rank": result.rank,
        "residuals": _strings(result.residuals),
    }
    if args.weight is not None:
        if args.order is None:
            raise ParseError("--weight needs --order for the distributions")
        ws = weighted_state(
            spec.marginal("x", "psi"),
            spec.marginal("y", "psi"),
            args.weight,
            args.order,
        )
        deg = parse_poly(args.poly).degree()
        count = args.order // deg if deg > 0 else 0
        phi_m, psi_m = distributions_of_poly(ws, args.poly, count)
        payload["normalization"] = str(ws.normalization)
        payload["phi_moments"] = _strings(phi_m.values)
        payload["psi_moments"] = _strings(psi_m.values)
    return 0, _dump(payload)


def _product_marginals(spec, order):
    phi_series = mgf_product_phi(spec, order)
    phi = MomentSeq([phi_series.coeff(n) for n in range(1, order + 1)], "phi")
    psi = MomentSeq(
        [
            spec.moment("psi", "xy" * n, guard=2 * order)
            for n in range(1, order + 1)
        ],
        "psi",
    )
    return phi, psi


def _sigma_payload(spec, order):
    s_x = sigma_transform(
        (spec.marginal("x", "phi"), spec.marginal("x", "psi")), order
    )
    s_y = sigma_transform(
        (spec.marginal("y", "phi"), spec.marginal("y", "psi")), order
    )
    s_xy = sigma_transform(_product_marginals(spec, order), order)
    residual = s_xy - s_x * s_y
    return {
        "sigma_x": _strings(s_x.coeffs),
        "sigma_y": _strings(s_y.coeffs),
        "sigma_xy": _strings(s_xy.coeffs),
        "residual": _strings(residual.coeffs),
    }


def _cmd_sigma(args):
    spec = _load_spec(args.spec)
    return 0, _dump(_sigma_payload(spec, args.order))


def _cmd_partitions(args):
    if args.enumerate == "colored":
        if args.colors is None:
            raise ParseError("--enumerate colored needs --colors")
        items = enumerate_nc_colored(args.colors)
    else:
        if args.n is None:
            raise ParseError("--enumerate %s needs --n" % args.enumerate)
        fn = {
            "nc": enumerate_nc,
            "interval": enumerate_interval,
            "irreducible": enumerate_irreducible,
        }[args.enumerate]
        items = fn(args.n)
    blocks = [[list(b) for b in p.blocks] for p in items]
    return 0, _dump({"count": len(blocks), "items": blocks})


# -- self-check suites --------------------------------------------------------


def _alternating(start, n):
    other = "y" if start == "x" else "x"
    return "".join(start if i % 2 == 0 else other for i in range(n))


def _suite_vnrp():
    checks, failures = 0, []
    rng = random.Random(17)
    for n in range(1, 5):
        colorings = {"x" * n, _alternating("x", n)}
        colorings.add("".join(rng.choice("xy") for _ in range(n)))
        for colors in sorted(colorings):
            compatible = enumerate_nc_colored(colors)
            for sigma in compatible:
                closed = vnrp_closure(sigma, colors)
                ups = [rho for rho in compatible if is_ll(sigma, rho)]
                maximal = [
                    rho
                    for rho in ups
                    if all(rho == t or not is_ll(rho, t) for t in ups)
                ]
                checks += 1
                if maximal != [closed]:
                    failures.append(
                        "closure is not the unique maximal element over %s"
                        % colors
                    )
    for seed in (3, 5):
        spec = random_spec(random.Random(seed), 6)
        for n in range(1, 6):
            for start in "xy":
                word = _alternating(start, n)
                args = tuple(word)
                checks += 1
                if vnrp_boolean_phi(spec, args, args) != multilinear_boolean(
                    spec, "phi", args
                ):
                    failures.append(
                        "partition sum differs from direct cumulant on %s"
                        % word
                    )
    return checks, failures


def _suite_sigma():
    checks, failures = 0, []
    for seed in (3, 19):
        rng = random.Random(seed)
        while True:
            spec = random_spec(rng, 10)
            if not spec.moment("psi", "x").is_zero() and not spec.moment(
                "psi", "y"
            ).is_zero():
                break
        payload = _sigma_payload(spec, 5)
        checks += 1
        if any(v != "0" for v in payload["residual"]):
            failures.append("multiplicativity residual nonzero, seed %d" % seed)
    unit = (
        point_mass_moments(1, 5, "phi"),
        point_mass_moments(1, 5, "psi"),
    )
    checks += 1
    if sigma_transform(unit, 5) != TruncSeries.constant(GQ_ONE, 4):
        failures.append("point mass does not give the constant symbol")
    return checks, failures


def _suite_linearization():
    checks, failures = 0, []
    fixed = [
        "x + y",
        "x*y",
        "x*y + y*x",
        "x^2 + y^2",
        "i*(x*y - y*x)",
        "(1/2)*x^3 - x*y*x + i*y",
    ]
    rng = random.Random(23)
    pool = ["1", "-1", "i", "1/2", "1+i"]
    for _ in range(4):
        terms = []
        for _ in range(rng.randint(2, 4)):
            word = "".join(
                rng.choice("xy") for _ in range(rng.randint(1, 3))
            )
            terms.append("(%s)*%s" % (rng.choice(pool), "*".join(word)))
        fixed.append(" + ".join(terms))
    for text in fixed:
        p = parse_poly(text)
        checks += 1
        if not verify_linearization(linearize(p), p, 8).ok:
            failures.append("resolvent corner mismatch for %s" % text)
    return checks, failures


def _suite_engine():
    checks, failures = 0, []
    for seed in (7, 11):
        spec = random_spec(random.Random(seed), 8)
        for text, count in (("x + y", 6), ("x*y", 4)):
            p = parse_poly(text)
            for state in ("phi", "psi"):
                got = poly_distribution(spec, p, state, count)
                power = NCPolynomial.one()
                expected = []
                for _ in range(count):
                    power = power * p
                    expected.append(spec.poly_moment(state, power))
                checks += 1
                if list(got.values) != expected:
                    failures.append(
                        "engine disagrees with the oracle on %s (%s)"
                        % (text, state)
                    )
    return checks, failures


_SUITES = {
    "vnrp": _suite_vnrp,
    "sigma": _suite_sigma,
    "linearization": _suite_linearization,
    "engine": _suite_engine,
}


def _cmd_verify(args):
    suite = _SUITES.get(args.suite)
    if suite is None:
        raise ParseError(
            "unknown verify suite %r (choose from %s)"
            % (args.suite, ", ".join(sorted(_SUITES)))
        )
    checks, failures = suite()
    status = "pass" if not failures else "fail"
    text = _dump(
        {
            "suite": args.suite,
            "checks": checks,
            "failures": failures,
            "status": status,
        }
    )
    return (0 if not failures else 4), text


# -- parser -------------------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="cfree",
        description="exact distributions of polynomials in c-free variables",
    )
    sub = parser.add_subparsers(dest="command", metavar="subcommand")
    sub.required = True

    p = sub.add_parser(
        "moments", help="distribution of a polynomial under one state"
    )
    p.add_argument("--poly", required=True, help="polynomial in x and y")
    p.add_argument("--spec", required=True, help="two-state spec JSON file")
    p.add_argument("--state", choices=("psi", "phi"), default="psi")
    p.add_argument("--order", type=int, required=True)
    p.add_argument(
        "--format", choices=("json", "csv", "pretty"), default="json"
    )
    p.set_defaults(handler=_cmd_moments)

    p = sub.add_parser("cumulants", help="cumulant sequence of a marginal")
    p.add_argument("--spec", required=True)
    p.add_argument("--letter", choices=("x", "y"), required=True)
    p.add_argument(
        "--kind", choices=("boolean", "free", "cfree"), required=True
    )
    p.add_argument(
        "--state",
        choices=("psi", "phi"),
        default=None,
        help="state for Boolean cumulants (default psi)",
    )
    p.add_argument(
        "--format", choices=("json", "csv", "pretty"), default="json"
    )
    p.set_defaults(handler=_cmd_cumulants)

    p = sub.add_parser(
        "condexp",
        help="free or quasi-conditional expectation onto the x-algebra",
    )
    p.add_argument("--spec", required=True)
    p.add_argument(
        "--state",
        choices=("psi", "phi"),
        required=True,
        help="psi gives E, phi gives rqce",
    )
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--word", help="word over the letters x and y")
    mode.add_argument(
        "--resolvent",
        action="store_true",
        help="corner series of the linearized resolvent of --poly",
    )
    p.add_argument("--poly", help="polynomial for --resolvent mode")
    p.add_argument("--order", type=int, help="series order for --resolvent")
    p.add_argument("--guard", type=int, help="raise the word-length guard")
    p.set_defaults(handler=_cmd_condexp)

    p = sub.add_parser(
        "denoise", help="L2 projection of a signal polynomial onto P-powers"
    )
    p.add_argument("--poly", required=True, help="the observable P(x, y)")
    p.add_argument("--target", required=True, help="signal polynomial in x")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--weight", help="weight polynomial in x for the tilted state")
    p.add_argument(
        "--order",
        type=int,
        help="order of the weighted-state distributions (with --weight)",
    )
    p.set_defaults(handler=_cmd_denoise)

    p = sub.add_parser(
        "sigma", help="multiplicative symbols and their product residual"
    )
    p.add_argument("--spec", required=True)
    p.add_argument(
        "--order",
        type=int,
        required=True,
        help="symbol order; the spec must cover twice this",
    )
    p.set_defaults(handler=_cmd_sigma)

    p = sub.add_parser("partitions", help="debug partition enumerations")
    p.add_argument(
        "--enumerate",
        choices=("nc", "interval", "irreducible", "colored"),
        required=True,
    )
    p.add_argument("--n", type=int)
    p.add_argument("--colors", help="color word for --enumerate colored")
    p.set_defaults(handler=_cmd_partitions)

    p = sub.add_parser("verify", help="run a built-in self-check suite")
    p.add_argument("suite", help="one of: %s" % ", ".join(sorted(_SUITES)))
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None):
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    try:
        code, text = args.handler(args)
    except CFreeError as exc:
        print("cfree: %s" % exc, file=sys.stderr)
        return exc.exit_code
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

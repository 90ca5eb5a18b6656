"""Command-line front end: ``betaflow <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (for example a system that
is not of finite type) and 2 on a usage error, including parameters outside
the admissible region.
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import operator
import os
import sys
from fractions import Fraction

from . import correspondence, kneading, oracles, sft, survivor, winning
from .errors import BetaflowError, InvalidParams
from .itinerary import LOWER, UPPER, Params, apply_map, expansion
from .numerics import (DEFAULT_PRECISION, Approx, AlgebraicReal, FieldElement, format_element,
                       format_poly, max_real_root_in)
from .words import EPWord, is_balanced

PRECISION_ENV = "BETAFLOW_PRECISION"


class UsageError(Exception):
    pass


def _precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return DEFAULT_PRECISION
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV} must be an integer, got {raw!r}")
    if value < 16:
        raise UsageError(f"{PRECISION_ENV} must be at least 16")
    return value


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}")


def parse_beta(text: str):
    """``poly:c0,c1,...[@lo:hi]``, ``rat:p/q``, ``dec:x`` or a bare rational."""
    if text.startswith("poly:"):
        body = text[5:]
        lo, hi = Fraction(1), Fraction(2)
        if "@" in body:
            body, interval = body.split("@", 1)
            try:
                lo_s, hi_s = interval.split(":")
            except ValueError:
                raise UsageError("interval must be written @lo:hi")
            lo, hi = _fraction(lo_s), _fraction(hi_s)
        try:
            coeffs = tuple(int(c) for c in body.split(","))
        except ValueError:
            raise UsageError(f"polynomial coefficients must be integers: {body!r}")
        # constant term first; a list that only has a root when read with the
        # leading coefficient first is accepted in that order as well
        for order in (coeffs, coeffs[::-1]):
            try:
                return max_real_root_in(order, lo, hi)
            except BetaflowError:
                continue
        raise UsageError(f"polynomial {body!r} has no real root in ({lo}, {hi})")
    if text.startswith("rat:"):
        return _fraction(text[4:])
    if text.startswith("dec:"):
        try:
            return Approx(float(text[4:]), 0, _precision())
        except ValueError:
            raise UsageError(f"not a decimal: {text!r}")
    return _fraction(text)


_BINARY = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def _evaluate(node, b):
    if isinstance(node, ast.Expression):
        return _evaluate(node.body, b)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return Fraction(str(node.value))
    if isinstance(node, ast.Name) and node.id in ("b", "beta"):
        return b
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _evaluate(node.operand, b)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.BinOp) and type(node.op) in _BINARY:
        left, right = _evaluate(node.left, b), _evaluate(node.right, b)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(right, Fraction) and right.denominator == 1):
                raise UsageError("exponents must be integers")
            right = int(right)
        return _BINARY[type(node.op)](left, right)
    raise UsageError(f"unsupported expression element: {ast.dump(node)[:40]}")


def parse_alpha(text: str, beta_scalar):
    """A rational, or ``expr:<formula in b>`` evaluated in the field of beta."""
    if text.startswith("expr:"):
        try:
            tree = ast.parse(text[5:].replace("^", "**"), mode="eval")
        except SyntaxError:
            raise UsageError(f"cannot parse expression {text[5:]!r}")
        return _evaluate(tree, beta_scalar)
    if text.startswith("rat:"):
        text = text[4:]
    return _fraction(text)


def build_params(beta_text: str, alpha_text: str) -> Params:
    beta = parse_beta(beta_text)
    base = Params(beta, 0, validate=False)
    alpha = parse_alpha(alpha_text, base.beta)
    try:
        return Params(beta, alpha)
    except InvalidParams as exc:
        raise UsageError(str(exc))


def parse_word(text: str) -> EPWord:
    try:
        return EPWord.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc))


# ---------------------------------------------------------------- rendering

def scalar_json(x) -> dict:
    out = {"decimal": round(float(x), 12)}
    if isinstance(x, FieldElement):
        out["exact"] = format_element(x)
    elif isinstance(x, Fraction):
        out["exact"] = str(x)
    return out


def algebraic_json(x: AlgebraicReal) -> dict:
    # rounded outwards to 15 places so the text does not depend on how far
    # earlier work happened to refine the root
    tight = x.refine(Fraction(1, 10 ** 16))
    scale = 10 ** 15
    lo = Fraction(math.floor(tight.lo * scale), scale)
    hi = Fraction(math.ceil(tight.hi * scale), scale)
    return {"minpoly": format_poly(x.minpoly), "minpoly_coeffs": list(x.minpoly),
            "interval": [_decimal(lo), _decimal(hi)], "decimal": round(float(x), 12)}


def _decimal(q: Fraction, places: int = 15) -> str:
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, frac = divmod(q.numerator * 10 ** places // q.denominator, 10 ** places)
    return f"{sign}{whole}.{frac:0{places}d}"


def beta_json(params: Params) -> dict:
    real = params.beta_real
    if real is not None:
        return algebraic_json(real)
    return scalar_json(params.beta)


def _emit(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# ----------------------------------------------------------------- commands

def cmd_expand(args, out):
    params = build_params(args.beta, args.alpha)
    x = params.scalar(_fraction(args.x)) if args.x is not None else params.scalar(1)
    variant = UPPER if args.variant == "upper" else LOWER
    word = expansion(params, x, variant, args.steps)
    out.write(f"{word}\n")


def cmd_kneading(args, out):
    params = build_params(args.beta, args.alpha)
    pair = kneading.kneading_invariants(params, args.steps, require_period=params.exact)
    certified = isinstance(pair.lower, EPWord) and isinstance(pair.upper, EPWord)
    top = expansion(params, 1, LOWER, args.steps)
    bottom = expansion(params, 0, UPPER, args.steps)
    out.write(_emit({
        "beta": beta_json(params), "alpha": scalar_json(params.alpha),
        "lower": str(pair.lower), "upper": str(pair.upper),
        "tau_minus_of_1": str(top), "tau_plus_of_0": str(bottom),
        "critical_point": scalar_json(params.p),
        "image_of_1": scalar_json(apply_map(params, params.scalar(1))),
        "is_sft": kneading.is_sft(params, args.steps),
        "balanced_tau_minus_of_1": is_balanced(top) if isinstance(top, EPWord) else None,
        "valid": str(kneading.validate_kneading_pair(pair.lower, pair.upper)) if certified else None,
    }) + "\n")


def cmd_solve(args, out):
    if args.parry is not None:
        if args.lower or args.upper:
            raise UsageError("--parry cannot be combined with --lower/--upper")
        beta = kneading.solve_parry_beta(parse_word(args.parry))
        out.write(_emit({"word": args.parry, "beta": algebraic_json(beta),
                         "parry_polynomial": format_poly(kneading.parry_polynomial(parse_word(args.parry)))}) + "\n")
        return 0
    if not (args.lower and args.upper):
        raise UsageError("give --lower and --upper, or --parry")
    lower, upper = parse_word(args.lower), parse_word(args.upper)
    check = kneading.validate_kneading_pair(lower, upper)
    if not check:
        out.write(_emit({"validation": str(check), "detail": check.detail}) + "\n")
        return 1
    params = kneading.system_from_kneading_pair(lower, upper)
    body = {"validation": str(check), "beta": beta_json(params), "alpha": scalar_json(params.alpha),
            "kneading_polynomial": format_poly(kneading.kneading_polynomial(lower, upper))}
    if lower.is_periodic and upper.is_periodic:
        system = sft.compile(params)
        body["markov_polynomial"] = format_poly(sft.characteristic_polynomial(system))
    out.write(_emit(body) + "\n")


def cmd_conjugate(args, out):
    params = build_params(args.beta, args.alpha)
    hole = correspondence.to_hole_system(params)
    body = {"beta_prime": algebraic_json(hole.beta_prime), "hole_word": str(hole.hole_word),
            "hole_t": scalar_json(hole.hole_t)}
    if args.x is not None:
        variant = UPPER if args.variant == "upper" else LOWER
        x = parse_alpha(args.x, params.beta)
        body["image"] = scalar_json(correspondence.conjugacy_image(params, x, variant))
    if args.xi is not None:
        xi = parse_word(args.xi)
        greedy = params.beta_real if params.beta_real is not None else params.beta
        body["membership"] = {"xi": str(xi), "B": correspondence.membership_B(greedy, xi),
                              "A": str(correspondence.membership_A(greedy, xi)),
                              "rho": scalar_json(correspondence.rho_inf(greedy))}
    out.write(_emit(body) + "\n")


def cmd_sft(args, out):
    params = build_params(args.beta, args.alpha)
    system = sft.compile(params)
    if args.emit == "dot":
        out.write(sft.emit_dot(system))
    elif args.emit == "csv":
        out.write(sft.emit_csv(system))
    else:
        body = sft.describe(system)
        body["perron_root"] = algebraic_json(sft.perron_root(system))
        body["characteristic_polynomial"] = format_poly(sft.characteristic_polynomial(system))
        body["transitivity"] = str(sft.transitivity_report(system))
        out.write(_emit(body) + "\n")


def cmd_sweep(args, out):
    params = build_params(args.beta, args.alpha)
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    rows = survivor.dimension_sweep(params, args.samples, args.depth, args.max_lyndon)
    text = survivor.sweep_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if args.plot_script:
            with open(args.plot_script, "w", encoding="utf-8") as fh:
                fh.write(plot_script(args.out))
    else:
        out.write(text)


def plot_script(csv_path: str) -> str:
    return (
        "# Plots the staircase written by `betaflow sweep`; needs matplotlib.\n"
        "import csv\nimport matplotlib.pyplot as plt\n\n"
        f"rows = list(csv.DictReader(open({csv_path!r})))\n"
        "t = [float(r['t']) for r in rows if r['eta_kneading']]\n"
        "eta = [float(r['eta_kneading']) for r in rows if r['eta_kneading']]\n"
        "plt.step(t, eta, where='post')\nplt.xlabel('t')\nplt.ylabel('dimension')\nplt.show()\n"
    )


def cmd_bifurcation(args, out):
    params = build_params(args.beta, args.alpha)
    t = parse_alpha(args.t, params.beta)
    variant = UPPER if args.variant == "upper" else LOWER
    status = survivor.in_bifurcation_set(params, t, args.depth, variant)
    word = expansion(params, params.scalar(t), variant, args.depth)
    body = {"t": scalar_json(params.scalar(t)), "status": str(status), "word": str(word),
            "variant": args.variant}
    if args.critical:
        body["critical_hole"] = scalar_json(survivor.critical_hole(params))
    out.write(_emit(body) + "\n")


def cmd_approx(args, out):
    params = build_params(args.beta, args.alpha)
    items = correspondence.approximants(params, args.n)
    out.write("k,beta,beta_minpoly,alpha,lower,upper,agreement\n")
    for k, item in enumerate(items, start=1):
        real = item.params.beta_real
        poly = format_poly(real.minpoly) if real is not None else ""
        out.write(f"{k},{float(item.params.beta):.12f},{poly},{float(item.params.alpha):.12f},"
                  f"{item.lower},{item.upper},{item.agreement}\n")


def cmd_winning(args, out):
    params = build_params(args.beta, args.alpha)
    gamma = _fraction(args.gamma)
    if not 0 < gamma < 1:
        raise UsageError("--gamma must lie strictly between 0 and 1")
    report = winning.winning_report(params, _fraction(args.xi), gamma, args.depth)
    body = report.as_dict()
    ok = report.passed
    if args.bounds_depth:
        bounds = winning.check_cylinder_bounds(sft.compile(params), args.bounds_depth)
        body["cylinder_bounds"] = {"depth": bounds.depth, "checked": bounds.checked,
                                   "violations": len(bounds.violations)}
        ok = ok and bounds.passed
    out.write(_emit(body) + "\n")
    return 0 if ok else 1


def cmd_oracle(args, out):
    params = build_params(args.beta, args.alpha)
    if args.kind == "language":
        if args.n > 20:
            raise UsageError("-n is limited to 20")
        counts = oracles.language_counts(params, args.n)
        out.write("n,count\n" + "".join(f"{i},{c}\n" for i, c in enumerate(counts, start=1)))
    elif args.kind == "box":
        value = oracles.box_counting_dim(params, _fraction(args.t), args.grid, args.steps)
        out.write(_emit({"t": args.t, "grid": args.grid, "dimension": round(value, 12)}) + "\n")
    else:
        value = oracles.escape_fraction(params, _fraction(args.t), args.samples, args.steps, args.seed)
        out.write(_emit({"t": args.t, "samples": args.samples, "steps": args.steps, "seed": args.seed,
                         "escape_fraction": value}) + "\n")


# ------------------------------------------------------------------- parser

def _system_args(p, alpha_default="0"):
    p.add_argument("--beta", required=True, help="poly:c0,c1,...[@lo:hi] | rat:p/q | dec:x | p/q")
    p.add_argument("--alpha", default=alpha_default, help="rational or expr:<formula in b>")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="betaflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="symbolic expansion of a point")
    _system_args(p)
    p.add_argument("--x", default=None)
    p.add_argument("--variant", choices=("upper", "lower"), default="upper")
    p.add_argument("--steps", type=int, default=500)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("kneading", help="kneading invariants and finite-type test")
    _system_args(p)
    p.add_argument("--steps", type=int, default=500)
    p.set_defaults(func=cmd_kneading)

    p = sub.add_parser("solve", help="recover (beta, alpha) from a kneading pair")
    p.add_argument("--lower", default=None)
    p.add_argument("--upper", default=None)
    p.add_argument("--parry", default=None, help="quasi-greedy expansion of 1; prints its base")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("conjugate", help="greedy base and hole of the conjugate system")
    _system_args(p)
    p.add_argument("--x", default=None, help="rational or expr:; its image under the conjugacy")
    p.add_argument("--variant", choices=("upper", "lower"), default="upper")
    p.add_argument("--xi", default=None, help="word tested for the two membership notions over beta")
    p.set_defaults(func=cmd_conjugate)

    p = sub.add_parser("sft", help="Markov partition and adjacency matrix")
    _system_args(p)
    p.add_argument("--emit", choices=("json", "dot", "csv"), default="json")
    p.set_defaults(func=cmd_sft)

    p = sub.add_parser("sweep", help="dimension of survivor sets over a grid of holes")
    _system_args(p)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--depth", type=int, default=30)
    p.add_argument("--max-lyndon", type=int, default=24)
    p.add_argument("--out", default=None)
    p.add_argument("--plot-script", default=None, help="also write a matplotlib script here")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bifurcation", help="membership of a hole in the bifurcation set")
    _system_args(p)
    p.add_argument("--t", required=True)
    p.add_argument("--depth", type=int, default=500)
    p.add_argument("--variant", choices=("upper", "lower"), default="upper")
    p.add_argument("--critical", action="store_true", help="also print the critical hole")
    p.set_defaults(func=cmd_bifurcation)

    p = sub.add_parser("approx-sft", help="finite-type approximations from inside")
    _system_args(p)
    p.add_argument("-n", type=int, default=3)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("winning", help="finite-depth geometric condition report")
    _system_args(p)
    p.add_argument("--xi", default="0")
    p.add_argument("--gamma", default="1/2")
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--bounds-depth", type=int, default=0, help="also check cylinder length bounds")
    p.set_defaults(func=cmd_winning)

    p = sub.add_parser("oracle", help="brute-force and Monte Carlo cross-checks")
    p.add_argument("kind", choices=("language", "box", "escape"))
    _system_args(p)
    p.add_argument("-n", type=int, default=12)
    p.add_argument("--t", default="0")
    p.add_argument("--grid", type=int, default=2 ** 18)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)
    return parser


_MODULE_OF = {"expand": "itinerary", "kneading": "kneading", "solve": "kneading",
              "conjugate": "correspondence", "sft": "sft", "sweep": "survivor",
              "bifurcation": "survivor", "approx-sft": "correspondence", "winning": "winning",
              "oracle": "oracles"}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "steps", 0) is None and args.command == "oracle":
        args.steps = 1000 if args.kind == "escape" else None
    try:
        status = args.func(args, out)
    except UsageError as exc:
        err.write(f"betaflow {args.command}: usage error: {exc}\n")
        return 2
    except BetaflowError as exc:
        err.write(f"betaflow {args.command}: {_MODULE_OF[args.command]}.{exc.code}: {exc}\n")
        return 1
    return int(status or 0)


def main(argv=None) -> None:
    sys.exit(run(argv))

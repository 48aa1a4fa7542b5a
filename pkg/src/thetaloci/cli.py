"""Command-line interface: one subcommand per library operation, a JSON
payload in, a single JSON document out.

Usage::

    thetaloci <command> '<json payload>' [--tol 1e-12] [--rank-tol 1e-8] ...
    echo '<json payload>' | thetaloci <command> -

Exit status is 0 on success, 2 for invalid input and 3 when a numerical
procedure fails on valid input; in both failure cases the document is
``{"error": {"code": ..., "message": ..., "details": {...}}}``.
"""

import argparse
import json
import math
import sys

import jsonschema
import numpy as np

from . import constructors, loci, modforms, probes
from .characteristics import Characteristic, act, enumerate_chars
from .core import (
    Tolerance,
    matrix_from_json,
    matrix_to_json,
    numerical_rank,
    random_siegel,
    symplectic_action,
    symplectic_from_json,
    validate_siegel,
)
from .errors import NumericalError, ValidationError
from .schemas import COMMANDS, SCHEMAS
from .theta import multi_indices, theta_jet, theta_tau_derivative, truncation_radius

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3


class _CliError(Exception):
    def __init__(self, status, code, message, details=None):
        super().__init__(message)
        self.status, self.code, self.details = status, code, details or {}


# JSON output ----------------------------------------------------------------


def _fmt_float(x):
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    return s if any(ch in s for ch in ".en") else s + ".0"


def dumps(obj):
    """Compact JSON with floats at 17 significant digits; key order is
    insertion order, so output is a pure function of the input."""
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps([obj.real, obj.imag])
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


# payload decoding -----------------------------------------------------------


def _tau(obj):
    return validate_siegel(matrix_from_json(obj))


def _vec(obj):
    return np.array([complex(re, im) for re, im in obj])


def _char(obj):
    return Characteristic.from_json(obj)


def _chars(objs):
    return [_char(c) for c in objs]


def _mult(m):
    return "above_cap" if m is loci.ABOVE_CAP else m


def _need(payload, *keys):
    for key in keys:
        if key not in payload:
            raise ValidationError(f"payload needs '{key}'")


# handlers -------------------------------------------------------------------


def _eval(p, opts):
    char, tau = _char(p["char"]), _tau(p["tau"])
    z = _vec(p["z"]) if "z" in p else None
    plan = truncation_radius(tau, z, 0, opts.tol, opts.radius_cap)
    jet = theta_jet(char, tau, z, 0, opts.tol, opts.radius_cap)
    return {"value": jet.value, "radius": plan.radius, "tail_bound": plan.tail_bound}


def _jet(p, opts):
    char, tau = _char(p["char"]), _tau(p["tau"])
    z = _vec(p["z"]) if "z" in p else None
    jet = theta_jet(char, tau, z, p["order"], opts.tol, opts.radius_cap)
    return {"order": jet.order, "tensors": [
        {"order": h, "indices": [list(t) for t in multi_indices(tau.g, h)],
         "values": list(jet.tensors[h])}
        for h in range(jet.order + 1)]}


def _tau_deriv(p, opts):
    char, tau = _char(p["char"]), _tau(p["tau"])
    return {"value": theta_tau_derivative(char, tau, p["i"], p["j"], opts.tol, opts.radius_cap)}


def _chars_cmd(p, opts):
    chars = enumerate_chars(p["g"], p.get("which", "all"))
    return {"count": len(chars), "chars": [dict(c.to_json(), parity=c.parity) for c in chars]}


def _act(p, opts):
    sigma, char = symplectic_from_json(p["sigma"]), _char(p["char"])
    new = act(sigma, char)
    out = {"char": new.to_json(), "parity": new.parity}
    if "tau" in p:
        out["tau"] = symplectic_action(sigma, _tau(p["tau"])).to_json()
    return out


def _d_form(p, opts):
    return {"value": modforms.D_form(_chars(p["chars"]), _tau(p["tau"]), opts.tol, opts.radius_cap)}


def _d2_form(p, opts):
    return {"value": modforms.D2_form(_chars(p["chars"]), _tau(p["tau"]), opts.tol,
                                      opts.radius_cap)}


def _matrix_out(res, opts):
    return {"chars": [c.to_json() for c in res.chars], "matrix": matrix_to_json(res.M),
            "rank": numerical_rank(res.M, opts.tolerance)}


def _grad_matrix(p, opts):
    return _matrix_out(modforms.gradient_matrix(_tau(p["tau"]), opts.tol, opts.radius_cap), opts)


def _even_matrix(p, opts):
    return _matrix_out(modforms.even_jet_matrix(_tau(p["tau"]), opts.tol, opts.radius_cap), opts)


def _membership(p, opts):
    tau, locus = _tau(p["tau"]), p["locus"]
    kw = dict(tol=opts.tolerance, engine_tol=opts.tol, radius_cap=opts.radius_cap)
    if locus == "in_A_k":
        _need(p, "char", "k")
        char = _char(p["char"])
        return {"locus": locus, "char": char.to_json(), "k": p["k"],
                "value": loci.in_A_k(tau, char, p["k"], **kw)}
    if locus == "dk_theta_null":
        _need(p, "k")
        return loci.dk_theta_null_witnesses(tau, p["k"], opts.max_order, **kw).to_json()
    fn = {"theta_null": loci.theta_null_witnesses, "d_theta_null": loci.d_theta_null_witnesses,
          "d2_theta_null": loci.d2_theta_null_witnesses}[locus]
    return fn(tau, **kw).to_json()


def _multiplicity(p, opts):
    tau = _tau(p["tau"])
    if ("z" in p) == ("char" in p):
        raise ValidationError("give exactly one of 'z' and 'char'")
    kw = dict(tol=opts.tolerance, engine_tol=opts.tol, radius_cap=opts.radius_cap)
    if "char" in p:
        m = loci.char_multiplicity(tau, _char(p["char"]), opts.max_order, **kw)
    else:
        m = loci.multiplicity_at(tau, _vec(p["z"]), opts.max_order, **kw)
    return {"mult": _mult(m), "max_order": opts.max_order}


def _sample(p, opts):
    kind = p["kind"]
    lambdas = list(_vec(p["lambdas"])) if "lambdas" in p else None
    if kind == "thetanull_times_elliptics":
        _need(p, "g", "k")
        return constructors.thetanull_times_elliptics(p["g"], p["k"], lambdas,
                                                      tol=opts.tolerance).to_json()
    if kind == "decomposable_singular":
        _need(p, "g")
        return constructors.decomposable_singular_sample(p["g"], lambdas).to_json()
    if kind == "elliptic_product":
        _need(p, "lambdas")
        parts = [validate_siegel([[lam]]) for lam in lambdas]
        tau = constructors.block_diagonal(parts)
        z = np.array([constructors.elliptic_theta_zero(lam) for lam in lambdas])
        g = len(lambdas)
        return constructors.SamplePoint(tau, z, Characteristic.ones(g), g,
                                        f"elliptic_product(g={g})").to_json()
    if kind == "theta_divisor_point":
        _need(p, "tau")
        tau = _tau(p["tau"])
        start = _vec(p["start"]) if "start" in p else None
        direction = _vec(p["direction"]) if "direction" in p else None
        pt = constructors.theta_divisor_point(tau, start, direction, opts.tol,
                                              radius_cap=opts.radius_cap)
        return {"z": pt.z, "t": pt.t, "residual": pt.residual, "two_torsion": pt.two_torsion,
                "nearest_char": pt.nearest_char.to_json(), "torsion_distance": pt.torsion_distance}
    if kind == "theta_null_point":
        _need(p, "tau", "char")
        char = _char(p["char"])
        tau = constructors.theta_null_point(char, _tau(p["tau"]), opts.tol,
                                            radius_cap=opts.radius_cap)
        return constructors.SamplePoint(tau, None, char, None, "theta_null_point").to_json()
    _need(p, "g")
    tau = random_siegel(np.random.default_rng(opts.seed), p["g"])
    return {"tau": tau.to_json(), "seed": opts.seed}


def _probe(p, opts):
    lambdas = list(_vec(p["lambdas"])) if "lambdas" in p else None
    res = probes.default_probe(p["kind"], p["g"], p.get("k"), lambdas, opts.tolerance, opts.tol,
                               opts.radius_cap)
    return res.to_json()


def _fj_ratio(p, opts):
    res = probes.fj_leading_ratio(_char(p["char"]), _tau(p["tau"]), _vec(p["z"]), p["t"],
                                  opts.tolerance, opts.tol, opts.radius_cap)
    return res.to_json()


HANDLERS = {
    "eval": _eval, "jet": _jet, "tau-deriv": _tau_deriv, "chars": _chars_cmd, "act": _act,
    "d-form": _d_form, "d2-form": _d2_form, "grad-matrix": _grad_matrix,
    "even-matrix": _even_matrix, "membership": _membership, "multiplicity": _multiplicity,
    "sample": _sample, "probe": _probe, "fj-ratio": _fj_ratio,
}
assert tuple(HANDLERS) == COMMANDS


# argument parsing -----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(EXIT_INVALID, "usage", message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-12,
                        help="absolute accuracy of every theta value and derivative")
    common.add_argument("--zero-tol", type=float, default=1e-10,
                        help="scaled residual below which a jet entry counts as zero")
    common.add_argument("--rank-tol", type=float, default=1e-8,
                        help="relative singular-value threshold for ranks")
    common.add_argument("--max-order", type=int, default=6, help="multiplicity cap")
    common.add_argument("--radius-cap", type=int, default=200, help="largest lattice box radius")
    common.add_argument("--seed", type=int, default=0, help="seed for the random sample kind")
    parser = _Parser(prog="thetaloci", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("payload", help="JSON object, or '-' to read it from standard input")
    return parser


def _load_payload(text, command):
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _CliError(EXIT_INVALID, "bad_json", str(exc)) from None
    try:
        jsonschema.validate(payload, SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        raise _CliError(EXIT_INVALID, "schema", exc.message,
                        {"path": [str(x) for x in exc.absolute_path]}) from None
    return payload


def run(argv=None, stdin=None, stdout=None):
    """Execute one command; returns the exit status."""
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    try:
        opts = build_parser().parse_args(argv)
        if not (opts.tol > 0 and opts.zero_tol > 0 and opts.rank_tol > 0):
            raise ValidationError("tolerances must be positive")
        if not 0 <= opts.max_order <= 6:
            raise ValidationError("--max-order must be in [0, 6]")
        if opts.radius_cap < 1:
            raise ValidationError("--radius-cap must be >= 1")
        opts.tolerance = Tolerance(opts.zero_tol, opts.rank_tol)
        text = stdin.read() if opts.payload == "-" else opts.payload
        payload = _load_payload(text, opts.command)
        result = HANDLERS[opts.command](payload, opts)
        stdout.write(dumps(result) + "\n")
        return EXIT_OK
    except _CliError as exc:
        status, code, msg, details = exc.status, exc.code, str(exc), exc.details
    except ValidationError as exc:
        status, code, msg, details = EXIT_INVALID, exc.code, str(exc), exc.details()
    except NumericalError as exc:
        status, code, msg, details = EXIT_NUMERIC, exc.code, str(exc), exc.details()
    except (np.linalg.LinAlgError, OverflowError, FloatingPointError) as exc:
        status, code, msg, details = EXIT_NUMERIC, "numerical", str(exc), {}
    stdout.write(dumps({"error": {"code": code, "message": msg, "details": details}}) + "\n")
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

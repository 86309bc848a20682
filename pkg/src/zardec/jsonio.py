"""JSON parsing and serialization for problems, fans, divisors and
b-divisor expressions.

Rationals travel as "p/q" or "p" strings (integers are also accepted on
input); emission always uses strings so round-trips are exact.
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction

from .bdiv import BDiv, Closure, Max, Min, PolytopeNef, Scale, Sum
from .exact import Polytope, as_fraction, primitive_vector
from .fan import Fan


class InputFormatError(ValueError):
    pass


def parse_rat(x) -> Fraction:
    try:
        return as_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputFormatError(f"bad rational {x!r}") from exc


def rat_str(x) -> str:
    return str(as_fraction(x))


def rat_list(xs):
    return [rat_str(x) for x in xs]


def parse_rat_list(xs):
    if not isinstance(xs, list):
        raise InputFormatError(f"expected a list of rationals, got {xs!r}")
    return [parse_rat(x) for x in xs]


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc


def fan_from_json(obj) -> Fan:
    if not isinstance(obj, dict) or "rays" not in obj or "cones" not in obj:
        raise InputFormatError("fan file needs 'rays' and 'cones'")
    rays = []
    for r in obj["rays"]:
        try:
            vec = tuple(int(c) for c in r)
        except (TypeError, ValueError) as exc:
            raise InputFormatError(f"bad ray {r!r}") from exc
        if all(c == 0 for c in vec):
            raise InputFormatError("zero vector cannot be a ray")
        prim, g = primitive_vector(vec)
        if g != 1:
            print(f"warning: reducing non-primitive ray {vec} to {prim}",
                  file=sys.stderr)
        rays.append(prim)
    if not rays:
        raise InputFormatError("fan has no rays")
    dim = len(rays[0])
    try:
        return Fan(dim, rays, [tuple(c) for c in obj["cones"]])
    except ValueError as exc:
        raise InputFormatError(str(exc)) from exc


def fan_to_json(fan: Fan):
    return {"rays": [list(r) for r in fan.rays],
            "cones": [list(c) for c in fan.cones]}


def divisor_from_json(obj, fan: Fan):
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise InputFormatError("divisor file needs 'coeffs'")
    coeffs = parse_rat_list(obj["coeffs"])
    if len(coeffs) != len(fan.rays):
        raise InputFormatError(
            f"divisor has {len(coeffs)} coefficients, fan has {len(fan.rays)} rays")
    return tuple(coeffs)


def surface_problem_from_json(obj):
    for key in ("curves", "matrix", "divisor"):
        if key not in obj:
            raise InputFormatError(f"surface problem needs '{key}'")
    curves = list(obj["curves"])
    if len(set(curves)) != len(curves):
        raise InputFormatError("curve names must be unique")
    matrix = [parse_rat_list(row) for row in obj["matrix"]]
    divisor = parse_rat_list(obj["divisor"])
    if len(divisor) != len(curves):
        raise InputFormatError("divisor length does not match curve count")
    return curves, matrix, divisor


def bdiv_from_json(obj, base_dir=".") -> BDiv:
    """Parse a b-divisor expression tree.

    Closure leaves take an inline fan object or a path to a fan file
    (resolved against the expression file's directory).
    """
    if not isinstance(obj, dict) or "op" not in obj:
        raise InputFormatError("b-divisor node needs an 'op'")
    op = obj["op"]
    if op == "closure":
        fan_field = obj.get("fan")
        if isinstance(fan_field, str):
            fan = fan_from_json(load_json(os.path.join(base_dir, fan_field)))
        else:
            fan = fan_from_json(fan_field)
        return Closure(fan, divisor_from_json({"coeffs": obj["coeffs"]}, fan))
    if op == "polytope-nef":
        verts = [tuple(parse_rat(c) for c in v) for v in obj["vertices"]]
        if not verts:
            raise InputFormatError("polytope-nef needs at least one vertex")
        scale = parse_rat(obj.get("scale", "1"))
        return PolytopeNef(Polytope.from_points(verts), scale)
    if op == "scale":
        return Scale(parse_rat(obj["factor"]),
                     bdiv_from_json(obj["arg"], base_dir))
    if op in ("sum", "max", "min"):
        args = tuple(bdiv_from_json(a, base_dir) for a in obj["args"])
        if not args:
            raise InputFormatError(f"'{op}' needs at least one argument")
        return {"sum": Sum, "max": Max, "min": Min}[op](args)
    raise InputFormatError(f"unknown b-divisor op {op!r}")


def bdiv_to_json(b: BDiv):
    """Serialize an expression with all fans inlined (round-trip exact)."""
    if isinstance(b, Closure):
        return {"op": "closure", "fan": fan_to_json(b.fan),
                "coeffs": rat_list(b.coeffs)}
    if isinstance(b, PolytopeNef):
        return {"op": "polytope-nef",
                "vertices": [rat_list(v) for v in b.polytope.vertices()],
                "scale": rat_str(b.scale)}
    if isinstance(b, Scale):
        return {"op": "scale", "factor": rat_str(b.factor),
                "arg": bdiv_to_json(b.arg)}
    if isinstance(b, Sum):
        return {"op": "sum", "args": [bdiv_to_json(t) for t in b.terms]}
    if isinstance(b, Max):
        return {"op": "max", "args": [bdiv_to_json(t) for t in b.args]}
    if isinstance(b, Min):
        return {"op": "min", "args": [bdiv_to_json(t) for t in b.args]}
    raise TypeError(f"not a b-divisor: {b!r}")


def dump(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"

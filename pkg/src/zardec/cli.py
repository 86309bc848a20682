"""Command-line front end.

Every command reads JSON problem files, emits a single JSON document on
stdout (diagnostics go to stderr) and exits 0 on success, 2 on input
errors, 3 on geometry errors, 4 on unsupported modes.  Every emitted
document embeds its problem and flags, so ``zardec verify`` can rebuild
it from scratch and compare.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .bdiv import (
    Closure,
    NoSectionsError,
    NotBigError,
    NotNefError,
    UnboundedSectionSpaceError,
    global_sections,
    max_nef,
    mobile_part,
    positive_part_exact,
    separate_all,
    verify_decomposition,
)
from .fan import FanError, NonSmoothError, is_big, is_effective, validate_fan
from .jsonio import (
    InputFormatError,
    bdiv_from_json,
    bdiv_to_json,
    divisor_from_json,
    dump,
    fan_from_json,
    fan_to_json,
    load_json,
    rat_list,
    rat_str,
    surface_problem_from_json,
)
from .surface import (
    InvalidGeometryError,
    NonEffectiveInputError,
    SurfaceModel,
    maximality_oracle,
    verify_certificate,
    zariski_decompose,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_GEOMETRY = 3
EXIT_UNSUPPORTED = 4


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


# ---------------------------------------------------------------------------
# payload builders (pure: same inputs, same document)


def surface_payload(problem):
    curves, matrix, divisor = problem
    model = SurfaceModel(curves, matrix)
    for w in model.warnings:
        _warn(w)
    dec = zariski_decompose(model, divisor)
    verified = verify_certificate(model, divisor, dec)
    oracle = maximality_oracle(model, divisor)
    oracle_agrees = oracle == dec.positive
    payload = {
        "kind": "surface-certificate",
        "problem": {
            "curves": list(curves),
            "matrix": [rat_list(row) for row in matrix],
            "divisor": rat_list(divisor),
        },
        "P": rat_list(dec.positive),
        "N": rat_list(dec.negative),
        "support": [curves[i] for i in dec.support],
        "checks": {
            "nef_products": rat_list(dec.certificate["nef_products"]),
            "orthogonality": {curves[i]: rat_str(v)
                              for i, v in dec.certificate["orthogonality"].items()},
            "support_negative_definite":
                dec.certificate["support_negative_definite"],
            "oracle_agrees": oracle_agrees,
            "verified": verified,
        },
    }
    return payload, EXIT_OK if (verified and oracle_agrees) else EXIT_GEOMETRY


def separation_payload(fan, d1, d2):
    report = separate_all(fan, d1, d2)
    ok = report.invariants_hold()
    payload = {
        "kind": "separation-report",
        "problem": {"fan": fan_to_json(fan),
                    "d1": rat_list(d1), "d2": rat_list(d2)},
        "initial_bad_pairs": report.initial_bad_pairs,
        "steps": [{
            "pair": list(s.pair),
            "excesses": [rat_str(s.excess_1), rat_str(s.excess_2)],
            "weights": [s.weight_a, s.weight_b],
            "w": list(s.subdivision_vector),
            "g": s.primitivity_divisor,
            "exceptional_index": s.exceptional_index,
            "exceptional_type": s.exceptional_type,
            "bad_pairs_after": s.bad_pairs_after,
        } for s in report.steps],
        "final_fan": fan_to_json(report.final_fan),
        "pullbacks": {"d1": rat_list(report.d1), "d2": rat_list(report.d2)},
        "checks": {"invariants_hold": ok},
    }
    return payload, EXIT_OK if ok else EXIT_GEOMETRY


def max_nef_payload(fan, d1, d2, strategy, probe_box):
    b1, b2 = Closure(fan, d1), Closure(fan, d2)
    result = max_nef(b1, b2, strategy=strategy, check=True,
                     probe_box=probe_box)
    payload = {
        "kind": "max-nef-result",
        "problem": {"fan": fan_to_json(fan),
                    "d1": rat_list(d1), "d2": rat_list(d2),
                    "strategy": strategy, "probe_box": probe_box},
        "vertices": [rat_list(v) for v in result.polytope.vertices()],
        "ray_values": rat_list(result.value_at(r) for r in fan.rays),
        "checks": {"strategies_agree": True},
    }
    return payload, EXIT_OK


def positive_part_payload(fan, divisor, kmax, exact, verify, probe_box):
    if not is_effective(divisor):
        raise NonEffectiveInputError("positive-part needs an effective divisor")
    big = is_big(fan, divisor)
    if exact and not big:
        raise NotBigError("--exact requested on a non-big divisor")
    closure = Closure(fan, divisor)

    mk_table = {}
    section_equality = {}
    exact_part = None
    if exact:
        exact_part = positive_part_exact(fan, divisor)
    for k in range(1, kmax + 1):
        try:
            mob = mobile_part(fan, divisor, k)
        except NoSectionsError:
            mk_table[str(k)] = None
            section_equality[str(k)] = None
            continue
        mk_table[str(k)] = rat_list(mob.value_at(r) for r in fan.rays)
        reference = exact_part if exact else mob
        section_equality[str(k)] = (
            global_sections(reference, k) == global_sections(closure, k))

    payload = {
        "kind": "positive-part-report",
        "problem": {"fan": fan_to_json(fan), "divisor": rat_list(divisor),
                    "kmax": kmax, "exact": exact, "verify": verify,
                    "probe_box": probe_box},
        "big": big,
        "mk_table": mk_table,
        "section_equality": section_equality,
    }
    ok = all(v is not False for v in section_equality.values())
    if exact:
        payload["exact"] = {
            "vertices": [rat_list(v) for v in exact_part.polytope.vertices()],
            "ray_values": rat_list(exact_part.value_at(r) for r in fan.rays),
            "negative_ray_values": rat_list(
                (closure - exact_part).value_at(r) for r in fan.rays),
        }
    if verify:
        target = exact_part if exact else None
        if target is None:
            _warn("--verify without --exact checks the largest mobile part")
            best = None
            for k in range(kmax, 0, -1):
                try:
                    best = mobile_part(fan, divisor, k)
                    break
                except NoSectionsError:
                    continue
            target = best
        if target is None:
            payload["verify"] = None
        else:
            report = verify_decomposition(fan, divisor, target, kmax,
                                          probe_box=probe_box)
            payload["verify"] = {
                "section_equality": {str(k): v for k, v in
                                     report["section_equality"].items()},
                "negative_effective": report["negative_effective"],
                "maximality": report["maximality"],
                "leaf_nef": report["leaf_nef"],
                "failures": report["failures"],
                "ok": report["ok"],
            }
            # the mobile part is a lower bound, not the maximum itself:
            # only exact mode must pass maximality
            if exact:
                ok = ok and report["ok"]
            else:
                ok = ok and report["negative_effective"] and report["leaf_nef"]
    return payload, EXIT_OK if ok else EXIT_GEOMETRY


def sections_payload(bdiv_expr, expr_json, k):
    points = global_sections(bdiv_expr, k)
    payload = {
        "kind": "sections-result",
        "problem": {"bdiv": expr_json, "k": k},
        "points": [list(p) for p in points],
        "count": len(points),
    }
    return payload, EXIT_OK


# ---------------------------------------------------------------------------
# command handlers


def cmd_surface(args):
    problem = surface_problem_from_json(load_json(args.problem))
    return surface_payload(problem)


def _load_fan_divisors(fan_path, divisor_paths):
    fan = fan_from_json(load_json(fan_path))
    ok, problems = validate_fan(fan, deep=True)
    if not ok:
        raise InputFormatError("invalid fan: " + "; ".join(problems))
    divs = [divisor_from_json(load_json(p), fan) for p in divisor_paths]
    return fan, divs


def cmd_separate(args):
    fan, (d1, d2) = _load_fan_divisors(args.fan, [args.d1, args.d2])
    return separation_payload(fan, d1, d2)


def cmd_max_nef(args):
    fan, (d1, d2) = _load_fan_divisors(args.fan, [args.d1, args.d2])
    return max_nef_payload(fan, d1, d2, args.strategy, args.probe_box)


def cmd_positive_part(args):
    fan, (divisor,) = _load_fan_divisors(args.fan, [args.divisor])
    return positive_part_payload(fan, divisor, args.k, args.exact,
                                 args.verify, args.probe_box)


def cmd_sections(args):
    if args.bdiv:
        expr_json = load_json(args.bdiv)
        expr = bdiv_from_json(expr_json, os.path.dirname(args.bdiv) or ".")
        resolved = bdiv_to_json(expr)
    else:
        if not (args.fan and args.divisor):
            raise InputFormatError("sections needs --bdiv or --fan with --divisor")
        fan, (divisor,) = _load_fan_divisors(args.fan, [args.divisor])
        expr = Closure(fan, divisor)
        resolved = bdiv_to_json(expr)
    return sections_payload(expr, resolved, args.k)


_REBUILDERS = {}


def _rebuild_surface(doc):
    prob = doc["problem"]
    problem = surface_problem_from_json(prob)
    return surface_payload(problem)[0]


def _rebuild_separation(doc):
    prob = doc["problem"]
    fan = fan_from_json(prob["fan"])
    d1 = divisor_from_json({"coeffs": prob["d1"]}, fan)
    d2 = divisor_from_json({"coeffs": prob["d2"]}, fan)
    return separation_payload(fan, d1, d2)[0]


def _rebuild_max_nef(doc):
    prob = doc["problem"]
    fan = fan_from_json(prob["fan"])
    d1 = divisor_from_json({"coeffs": prob["d1"]}, fan)
    d2 = divisor_from_json({"coeffs": prob["d2"]}, fan)
    return max_nef_payload(fan, d1, d2, prob["strategy"], prob["probe_box"])[0]


def _rebuild_positive_part(doc):
    prob = doc["problem"]
    fan = fan_from_json(prob["fan"])
    divisor = divisor_from_json({"coeffs": prob["divisor"]}, fan)
    return positive_part_payload(fan, divisor, prob["kmax"], prob["exact"],
                                 prob["verify"], prob["probe_box"])[0]


def _rebuild_sections(doc):
    prob = doc["problem"]
    expr = bdiv_from_json(prob["bdiv"])
    return sections_payload(expr, prob["bdiv"], prob["k"])[0]


_REBUILDERS.update({
    "surface-certificate": _rebuild_surface,
    "separation-report": _rebuild_separation,
    "max-nef-result": _rebuild_max_nef,
    "positive-part-report": _rebuild_positive_part,
    "sections-result": _rebuild_sections,
})


def cmd_verify(args):
    doc = load_json(args.certificate)
    kind = doc.get("kind")
    rebuild = _REBUILDERS.get(kind)
    if rebuild is None:
        raise InputFormatError(f"cannot verify documents of kind {kind!r}")
    recomputed = rebuild(doc)
    ok = recomputed == doc
    payload = {
        "kind": "verification",
        "target": kind,
        "ok": ok,
    }
    if not ok:
        mismatched = sorted(
            key for key in set(doc) | set(recomputed)
            if doc.get(key) != recomputed.get(key))
        payload["mismatched_fields"] = mismatched
    return payload, EXIT_OK if ok else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------


def _parser():
    p = argparse.ArgumentParser(
        prog="zardec",
        description="Exact Zariski decompositions: surfaces and toric "
                    "b-divisor towers.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("surface", help="decompose a divisor on an abstract surface")
    sp.add_argument("problem", help="surface problem JSON file")
    sp.set_defaults(handler=cmd_surface)

    sp = sub.add_parser("separate", help="run the separating-blow-up loop")
    sp.add_argument("fan")
    sp.add_argument("d1")
    sp.add_argument("d2")
    sp.set_defaults(handler=cmd_separate)

    sp = sub.add_parser("max-nef", help="maximum of two nef divisors as a polytope")
    sp.add_argument("fan")
    sp.add_argument("d1")
    sp.add_argument("d2")
    sp.add_argument("--strategy", choices=["hull", "separation"], default="hull")
    sp.add_argument("--probe-box", type=int, default=5)
    sp.set_defaults(handler=cmd_max_nef)

    sp = sub.add_parser("positive-part",
                        help="positive part: exact polytope (big) or mobile-part table")
    sp.add_argument("fan")
    sp.add_argument("divisor")
    sp.add_argument("--k", type=int, default=5, help="largest multiple to tabulate")
    sp.add_argument("--exact", action="store_true")
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--probe-box", type=int, default=3)
    sp.set_defaults(handler=cmd_positive_part)

    sp = sub.add_parser("sections", help="lattice points of a section space")
    sp.add_argument("--fan")
    sp.add_argument("--divisor")
    sp.add_argument("--bdiv", help="b-divisor expression JSON file")
    sp.add_argument("--k", type=int, default=1)
    sp.set_defaults(handler=cmd_sections)

    sp = sub.add_parser("verify", help="recompute an emitted document and compare")
    sp.add_argument("certificate")
    sp.set_defaults(handler=cmd_verify)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        payload, code = args.handler(args)
    except NotBigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (InvalidGeometryError, NotNefError, NonSmoothError,
            UnboundedSectionSpaceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except (InputFormatError, NonEffectiveInputError, FanError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(dump(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Batch command line interface.

Exit status: 0 when every check passes, 1 when a mathematical check fails
(the report carries a witness), 2 for input or usage errors, 3 when a search
or size budget is exceeded.
"""
import argparse
import json
import sys

import numpy as np

from .bar import DEFAULT_SIZE_BUDGET, augmentation_equivalence, bar, structure_violations
from . import hochschild as hh
from .bimodule import check_free_tensor_iso, regular, tensor_over_A, unit_axiom_instance
from .chains import homology, normalized_chains
from .errors import BudgetExceeded, CheckFailed, SegalHHError
from .io import bimodule_to_dict, dumps, load, sset_to_dict
from .monoid import canonical, centre, monoid_violations, nerve
from .segal import check_2monoid, check_segal, double_nerve, nerve_segal_object, nerve_strict_check
from .simplicial import pushout_product, validate_identities

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
STATUS = {EXIT_OK: "ok", EXIT_FAILED: "check_failed", EXIT_INPUT: "input_error", EXIT_BUDGET: "budget_exceeded"}


class InputError(Exception):
    pass


def _expect(path, *kinds):
    kind, obj = load(path)
    if kind not in kinds:
        raise InputError(f"{path}: expected {' or '.join(kinds)}, got {kind}")
    return obj


def _monoid(path):
    M = _expect(path, "monoid")
    bad = monoid_violations(M.table, M.identity)
    if bad:
        raise CheckFailed("not a monoid", bad)
    return M


def _canon(M):
    """Relabel so the identity is 0; reports are stated in canonical labels."""
    return canonical(M)[0]


# ---------------------------------------------------------------- commands

def cmd_validate(args):
    kind, obj = load(args.input)
    if kind == "monoid":
        bad = monoid_violations(obj.table, obj.identity)
        if bad:
            raise CheckFailed("not a monoid", bad)
        return {"kind": "monoid", "order": obj.order, "valid": True}, True
    if kind == "sset":
        rep = validate_identities(obj)
        return {"kind": "simplicial_set", "sizes": list(obj.sizes), **rep.to_dict()}, rep.clean
    if kind == "bimodule":
        return {"kind": "bimodule", "size": obj.size, "valid": True}, True
    if kind == "segal":
        bad = obj.outer_violations()
        return {"kind": "segal_object", "valid": not bad, "violations": bad[:5]}, not bad
    if kind == "map":
        bad = obj.violations()
        return {"kind": "simplicial_map", "valid": not bad, "violations": bad[:5]}, not bad
    raise InputError(f"cannot validate {kind}")


def cmd_centre(args):
    A = _canon(_monoid(args.input))
    Z = centre(A)
    return {"order": A.order, "centre": list(Z.elements), "closed": Z.closed,
            "contains_identity": Z.contains_identity}, Z.closed and Z.contains_identity


def cmd_nerve(args):
    A = _canon(_monoid(args.input))
    X = nerve(A, args.trunc)
    return {"sizes": list(X.sizes), "simplicial_set": sset_to_dict(X)}, True


def cmd_homology(args):
    kind, obj = load(args.input)
    if kind == "monoid":
        X = nerve(_canon(obj), args.degree + 1)
    elif kind == "sset":
        X = obj
        rep = validate_identities(X)
        if not rep.clean:
            raise CheckFailed("simplicial identities fail", rep.violations[:3])
    else:
        raise InputError("homology needs a monoid table or a simplicial set")
    C = normalized_chains(X, min(args.degree + 1, X.trunc_degree))
    groups = [dict(degree=n, group=str(homology(C, n)), **homology(C, n).to_dict())
              for n in range(min(args.degree, C.top) + 1)]
    return {"chain_ranks": list(C.ranks), "homology": groups}, True


def cmd_tensor(args):
    M = _expect(args.left, "bimodule")
    N = _expect(args.right, "bimodule")
    T = tensor_over_A(M, N)
    return {"size": T.bimodule.size, "pairs": M.size * N.size, "classes": [int(x) for x in T.labels],
            "bimodule": bimodule_to_dict(T.bimodule)}, True


def cmd_free_tensor_iso(args):
    A = _canon(_monoid(args.input))
    rep = check_free_tensor_iso(A, args.x, args.y)
    return rep.to_dict(), rep.ok


def _target(args, A):
    if getattr(args, "bimodule", None):
        B = _expect(args.bimodule, "bimodule")
        if not B.monoid.same_table(A):
            raise InputError("bimodule is over a different monoid")
        return B
    return regular(A)


def cmd_bar(args):
    A = _monoid(args.input)
    if not args.bimodule:
        A = _canon(A)
    R = bar(A, _target(args, A), args.trunc, args.size_budget)
    bad = structure_violations(R)
    return {"sizes": R.sizes(), "target_size": R.target.size, "checks_passed": not bad,
            "violations": bad[:5]}, not bad


def cmd_augmentation_check(args):
    A = _monoid(args.input)
    if not args.bimodule:
        A = _canon(A)
    R = bar(A, _target(args, A), args.trunc, args.size_budget)
    degree = args.trunc - 1 if args.degree is None else args.degree
    rep = augmentation_equivalence(R, degree)
    return {"sizes": R.sizes(), **rep.to_dict()}, rep.equivalent


def cmd_unit_axiom(args):
    A = _canon(_monoid(args.input))
    R = bar(A, regular(A), args.trunc, args.size_budget)
    rep = unit_axiom_instance(R.diagonal, R.augmentation, args.x, args.degree)
    return rep.to_dict(), rep.equivalent


def cmd_pushout_product(args):
    f = _expect(args.left, "map")
    g = _expect(args.right, "map")
    for name, h in (("first", f), ("second", g)):
        bad = h.violations()
        if bad:
            raise CheckFailed(f"{name} input is not a simplicial map", bad[:3])
    rep = pushout_product(f, g)
    return rep.to_dict(), rep.injective


def _hh_result(A, args):
    H = hh.hh_pi0(A, args.trunc, args.budget, args.size_budget)
    C = hh.centre_comparison(A, args.trunc, args.budget, hh=H)
    out = H.to_dict()
    out.update({"centre": C.centre, "evaluation": C.evaluation,
                "checks": {**H.checks, **C.checks}, "counterexample": C.counterexample})
    return H, C, out


def cmd_hh_pi0(args):
    A = _canon(_monoid(args.input))
    H, C, out = _hh_result(A, args)
    return out, H.ok and C.ok


def cmd_centre_compare(args):
    A = _canon(_monoid(args.input))
    _, C, _ = _hh_result(A, args)
    return C.to_dict(), C.ok


def cmd_eckmann_hilton(args):
    A = _canon(_monoid(args.input))
    H = hh.hh_pi0(A, args.trunc, args.budget, args.size_budget)
    rep = hh.eckmann_hilton_report(A, hh=H)
    return rep.to_dict(), rep.ok


def cmd_segal_check(args):
    kind, obj = load(args.input)
    if kind == "monoid":
        A = _canon(obj)
        bad = monoid_violations(A.table, A.identity)
        if bad:
            raise CheckFailed("not a monoid", bad)
        if args.mode == "strict":
            rep = nerve_strict_check(A, args.trunc)
            return rep.to_dict(), rep.ok
        X = nerve_segal_object(A, args.trunc, inner=(args.degree or 0) + 1)
    elif kind == "segal":
        X = obj
    else:
        raise InputError("segal-check needs a monoid table or a Segal object")
    rep = check_segal(X, args.mode, args.degree)
    return rep.to_dict(), rep.ok


def cmd_two_monoid_check(args):
    A = _canon(_monoid(args.input))
    rep = check_2monoid(double_nerve(A, args.trunc), args.mode, args.degree)
    return rep.to_dict(), rep.ok


COMMANDS = {
    "validate": (cmd_validate, "validate a monoid table, simplicial set, map, bimodule or Segal object"),
    "centre": (cmd_centre, "centre of a monoid"),
    "nerve": (cmd_nerve, "truncated nerve of a monoid"),
    "homology": (cmd_homology, "integral homology of a simplicial set or of a monoid's nerve"),
    "tensor": (cmd_tensor, "tensor product of two bimodules over their monoid"),
    "free-tensor-iso": (cmd_free_tensor_iso, "check F(X) (x)_A F(Y) = F(X x A x Y)"),
    "bar": (cmd_bar, "build and check the bar resolution"),
    "augmentation-check": (cmd_augmentation_check, "augmentation of the bar resolution is an equivalence"),
    "unit-axiom": (cmd_unit_axiom, "resolution tensored with F(X) is equivalent to F(X)"),
    "pushout-product": (cmd_pushout_product, "pushout-corner map of two monomorphisms"),
    "hh-pi0": (cmd_hh_pi0, "components of derived endomorphisms with both products"),
    "centre-compare": (cmd_centre_compare, "compare the components with the centre"),
    "eckmann-hilton": (cmd_eckmann_hilton, "the two products agree and commute"),
    "segal-check": (cmd_segal_check, "Segal conditions for a nerve or a Segal object"),
    "two-monoid-check": (cmd_two_monoid_check, "Segal conditions for the double nerve in both directions"),
}


def build_parser():
    p = argparse.ArgumentParser(prog="segalhh", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        s = sub.add_parser(name, help=help_text)
        if name in ("tensor", "pushout-product"):
            s.add_argument("left")
            s.add_argument("right")
        else:
            s.add_argument("input")
        s.add_argument("--trunc", type=int, default=3 if name in ("hh-pi0", "centre-compare", "eckmann-hilton",
                                                                    "segal-check") else 2)
        s.add_argument("--degree", type=int, default=None)
        s.add_argument("--budget", type=int, default=hh.DEFAULT_NODE_BUDGET, help="search nodes")
        s.add_argument("--size-budget", type=int, default=DEFAULT_SIZE_BUDGET,
                       help="elements in the bar resolution")
        s.add_argument("--mode", choices=("strict", "surrogate"), default="strict")
        s.add_argument("--format", choices=("json", "text"), default="json")
        s.add_argument("--out", default=None)
        s.add_argument("--bimodule", default=None)
        s.add_argument("--x", type=int, default=1, help="size of the first generating set")
        s.add_argument("--y", type=int, default=1, help="size of the second generating set")
    return p


def _inputs(args):
    keys = ("input", "left", "right", "bimodule", "trunc", "degree", "budget", "size_budget", "mode", "x", "y")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    return obj


def run(args):
    """Run one command; returns ``(exit_code, report)``."""
    handler = COMMANDS[args.command][0]
    result, error = None, None
    try:
        if args.trunc < 0 or args.budget <= 0 or args.size_budget <= 0:
            raise InputError("budgets must be positive and truncation non-negative")
        result, ok = handler(args)
        code = EXIT_OK if ok else EXIT_FAILED
    except CheckFailed as exc:
        code, error = EXIT_FAILED, {"kind": "check_failed", "message": str(exc), "witness": _plain(exc.witness)}
    except BudgetExceeded as exc:
        code, error = EXIT_BUDGET, {"kind": "budget_exceeded", "message": str(exc), "required": exc.required}
    except (InputError, SegalHHError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        code, error = EXIT_INPUT, {"kind": type(exc).__name__, "message": str(exc)}
    report = {"command": args.command, "status": STATUS[code], "ok": code == EXIT_OK, "exit_code": code,
              "inputs": _inputs(args), "result": _plain(result), "error": _plain(error)}
    return code, report


def format_text(report):
    lines = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else k, obj[k])
        elif isinstance(obj, list) and obj and all(isinstance(v, (dict, list)) for v in obj) and len(obj) <= 12:
            for i, v in enumerate(obj):
                walk(f"{prefix}[{i}]", v)
        else:
            lines.append(f"{prefix}: {json.dumps(obj, sort_keys=True)}")

    walk("", report)
    return "\n".join(lines) + "\n"


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    code, report = run(args)
    text = dumps(report) if args.format == "json" else format_text(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

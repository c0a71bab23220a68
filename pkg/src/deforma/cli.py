"""Command-line entry point: ``deforma <command> <file> [flags]``.

``<file>`` is a JSON problem file or the name of a built-in fixture.  Exit
codes: 0 success, 1 validation failure, 2 blocked by an obstruction (or no
equivalence found), 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import io
from .actions import validate_action
from .complexes import (
    coalgebra_hochschild_complex,
    cohomology,
    hochschild_complex,
)
from .defcomplex import SplitCochain, build_theory, cup
from .deformation import (
    DeformationSeries,
    conjugate,
    equivalence_greedy,
    extend_order,
    integrate,
    rigidity_certificate,
    trivialize,
    validate_automorphism,
    validate_deformation,
)
from .errors import DeformaError, InvalidStructure, NotACocycle, NotValidated, ParseError
from .fixtures import FIXTURES, fixture
from .structures import BicomoduleData, BimoduleData

EXIT_OK, EXIT_INVALID, EXIT_BLOCKED, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _strs(v):
    return [str(x) for x in v]


# ---------------------------------------------------------------------------
# loading


def load_problem(ref, lax_unit=False):
    """Read a problem file, or build one from a fixture name."""
    lax = True if lax_unit else None
    if os.path.exists(ref):
        return io.load(ref, lax)
    if ref in FIXTURES:
        doc = io.structure_to_dict(fixture(ref))
        doc["name"] = ref
        return io.parse_problem(doc, lax)
    raise UsageError(f"{ref!r} is neither a file nor a fixture (fixtures: {', '.join(sorted(FIXTURES))})")


def _n_max(problem, args, need=0):
    return max(problem.options.get("n_max", 4), need, 2)


def _max_dim(problem, args):
    return args.max_dim if args.max_dim is not None else problem.options.get("max_dim")


def _theory(problem, args, need=0):
    return build_theory(problem.structure, n_max=_n_max(problem, args, need), max_dim=_max_dim(problem, args))


def _order(problem, args):
    return args.to if args.to is not None else problem.options.get("order", 4)


def _pick(block, name, what):
    if not block:
        raise UsageError(f"the file has no {what} blocks")
    if name is None:
        name = sorted(block)[0]
    if name not in block:
        raise UsageError(f"no {what} named {name!r} (have: {', '.join(sorted(block))})")
    return name, block[name]


def _series(theory, problem, name, trivial_order=None):
    """A named deformation block; without any blocks, optionally the trivial series."""
    if not problem.deformations and name is None and trivial_order is not None:
        return "trivial", DeformationSeries.trivial(theory, trivial_order)
    name, raw = _pick(problem.deformations, name, "deformation")
    return name, io.parse_series(theory, raw, f"deformations.{name}")


def _h2_block(obs):
    return {
        "order_from": obs.order_from,
        "ob": io.cochain_to_dict(2, obs.cochain.vector),
        "is_coboundary": obs.is_coboundary,
        "h2_class": None if obs.h2_class is None else _strs(obs.h2_class),
    }


# ---------------------------------------------------------------------------
# commands; each returns (exit code, report dict, text lines)


def cmd_validate(problem, args):
    s = problem.structure
    try:
        rep = validate_action(s)
    except InvalidStructure as exc:
        rep = exc.report
    doc = {"command": "validate", "kind": s.kind.value, "structure": rep.to_dict()}
    lines = [f"{s.kind.value} structure: {'valid' if rep.ok else 'INVALID'}"]
    lines += _report_lines(rep)
    ok = rep.ok
    if ok and (problem.deformations or problem.automorphisms):
        theory = _theory(problem, args)
        defs = {}
        for name in sorted(problem.deformations):
            series = io.parse_series(theory, problem.deformations[name], f"deformations.{name}")
            r = validate_deformation(series)
            defs[name] = r.to_dict()
            ok &= r.ok
            lines.append(f"deformation {name}: {'valid' if r.ok else 'INVALID'}")
            lines += _report_lines(r)
        autos = {}
        for name in sorted(problem.automorphisms):
            phi = io.parse_automorphism(theory, problem.automorphisms[name], f"automorphisms.{name}")
            r = validate_automorphism(phi, s.carrier)
            autos[name] = r.to_dict()
            ok &= r.ok
            lines.append(f"automorphism {name}: {'valid' if r.ok else 'INVALID'}")
            lines += _report_lines(r)
        doc["deformations"], doc["automorphisms"] = defs, autos
    doc["ok"] = ok
    return (EXIT_OK if ok else EXIT_INVALID), doc, lines


def _report_lines(rep):
    failed = {f.axiom for f in rep.failures}
    lines = [f"  PASS {a}" for a in rep.checked if a not in failed]
    lines += [f"  FAIL {f.describe()}" for f in rep.failures]
    return lines


def _cohomology_complex(problem, args, n_max):
    s = problem.structure
    which = args.which
    if which == "def":
        return _theory(problem, args, n_max).complex
    max_dim = _max_dim(problem, args)
    if which == "hochschild":
        if not s.kind.algebra_carrier:
            raise UsageError("--which hochschild needs an algebra A; use cohochschild")
        return hochschild_complex(s.carrier, BimoduleData.regular(s.carrier), n_max, max_dim)
    if s.kind.algebra_carrier:
        raise UsageError("--which cohochschild needs a coalgebra A; use hochschild")
    return coalgebra_hochschild_complex(s.carrier, BicomoduleData.regular(s.carrier), n_max, max_dim)


def cmd_cohomology(problem, args):
    validate_action(problem.structure).raise_if_failed()
    if args.degree is not None and args.degree < 0:
        raise UsageError("--degree must be non-negative")
    top = args.degree + 1 if args.degree is not None else _n_max(problem, args)
    cx = _cohomology_complex(problem, args, max(top, _n_max(problem, args)))
    degrees = [args.degree] if args.degree is not None else list(range(cx.n_max))
    groups = [cohomology(cx, n).to_dict() for n in degrees]
    name = {"def": "H^n(F)", "hochschild": "H^n_h(A,A)", "cohochschild": "H^n_c(A,A)"}[args.which]
    doc = {"command": "cohomology", "which": args.which, "dims": list(cx.dims), "groups": groups}
    lines = [f"{args.which} complex, cochain dims {list(cx.dims)}"]
    for g in groups:
        n = g["degree"]
        lines.append(
            f"{name.replace('n', str(n), 1)}: dim {g['dim_H']}"
            f" (ker {g['dim_kernel']}, im {g['dim_image_in']}, cochains {g['dim_cochains']})"
        )
        for r in g["representatives"]:
            lines.append("  rep " + " ".join(r))
    return EXIT_OK, doc, lines


def _split_operand(theory, problem, name):
    if name == "base":
        return theory.base_cochain()
    _, raw = _pick(problem.cochains, name, "cochain")
    n, vec = io.parse_cochain(theory, raw, f"cochains.{name}")
    if n < 1:
        raise UsageError(f"cochain {name!r} has degree {n}; the cup pairing starts in degree 1")
    return theory.split(n, vec)


def cmd_cup(problem, args):
    theory = _theory(problem, args)
    f = _split_operand(theory, problem, args.f)
    g = _split_operand(theory, problem, args.g)
    fg = cup(theory, f, g)
    doc = {"command": "cup", "f": args.f, "g": args.g, "result": io.cochain_to_dict(fg.degree, fg.vector)}
    lines = [f"{args.f} cup {args.g}: degree {fg.degree}"]
    lines += [f"  [{i}] {c}" for i, c in doc["result"]["entries"]]
    return EXIT_OK, doc, lines


def cmd_extend(problem, args):
    theory = _theory(problem, args)
    name, series = _series(theory, problem, args.deformation, trivial_order=1)
    if not series.validated:
        return EXIT_INVALID, {"command": "extend", "deformation": name, "ok": False}, [f"{name}: not a deformation"]
    target = _order(problem, args)
    steps = []
    lines = [f"extending {name} from order {series.order} to {target}"]
    while series.order < target:
        res = extend_order(series)
        steps.append({"to": series.order + 1, "ok": res.ok, "solution_space_dim": res.solution_space_dim})
        if not res.ok:
            doc = {
                "command": "extend",
                "deformation": name,
                "ok": False,
                "steps": steps,
                "series": io.series_to_dict(series),
                "obstruction": _h2_block(res.obstruction),
            }
            lines.append(f"order {series.order + 1}: OBSTRUCTED, class {_strs(res.obstruction.h2_class)}")
            return EXIT_BLOCKED, doc, lines
        series = res.series
        lines.append(f"order {series.order}: ok (solution space dim {res.solution_space_dim})")
    doc = {"command": "extend", "deformation": name, "ok": True, "steps": steps, "series": io.series_to_dict(series)}
    return EXIT_OK, doc, lines


def cmd_integrate(problem, args):
    theory = _theory(problem, args)
    name, raw = _pick(problem.cochains, args.cocycle, "cochain")
    n, vec = io.parse_cochain(theory, raw, f"cochains.{name}")
    if n != 1:
        raise UsageError(f"cochain {name!r} has degree {n}; integrate needs a 1-cochain")
    target = _order(problem, args)
    res = integrate(theory, SplitCochain.one(vec), target)
    doc = {
        "command": "integrate",
        "cocycle": name,
        "ok": res.ok,
        "reached_order": res.reached_order,
        "series": io.series_to_dict(res.series),
    }
    if res.ok:
        return EXIT_OK, doc, [f"{name} integrates to order {target}"]
    doc["obstruction"] = _h2_block(res.obstruction)
    lines = [
        f"{name} reaches order {res.reached_order}; obstructed at order {res.reached_order + 1}",
        f"  H^2 class {_strs(res.obstruction.h2_class)}",
    ]
    return EXIT_BLOCKED, doc, lines


def cmd_trivialize(problem, args):
    theory = _theory(problem, args)
    name, series = _series(theory, problem, args.deformation, trivial_order=_order(problem, args))
    if not series.validated:
        return EXIT_INVALID, {"command": "trivialize", "deformation": name, "ok": False}, [f"{name}: not a deformation"]
    res = trivialize(series, args.to)
    doc = {
        "command": "trivialize",
        "deformation": name,
        "ok": res.ok,
        "automorphism": io.automorphism_to_dict(res.automorphism),
        "series": io.series_to_dict(res.series),
    }
    if res.ok:
        return EXIT_OK, doc, [f"{name} is equivalent to the undeformed action mod t^{res.series.order + 1}"]
    doc["blocked_order"] = res.blocked_order
    doc["reason"] = res.reason
    doc["h1_class"] = None if res.h1_class is None else _strs(res.h1_class)
    doc["h2_class"] = None if res.h2_class is None else _strs(res.h2_class)
    cls = res.h1_class if res.h1_class is not None else res.h2_class
    lines = [f"{name}: blocked at order {res.blocked_order}: {res.reason}", f"  class {_strs(cls)}"]
    return EXIT_BLOCKED, doc, lines


def cmd_rigidity(problem, args):
    theory = _theory(problem, args)
    rep = rigidity_certificate(theory)
    doc = {"command": "rigidity", **rep.to_dict()}
    lines = [
        f"{rep.verdict}",
        f"  dim H^1(F) = {rep.h1_dim}",
        f"  dim {rep.carrier_group} = {rep.h2_carrier_dim}",
    ]
    if rep.verdict != "CERTIFIED-RIGID":
        lines.append("  (the criterion is sufficient only)")
    return EXIT_OK, doc, lines


def cmd_equivalent(problem, args):
    theory = _theory(problem, args)
    n1, d1 = _series(theory, problem, args.d1)
    n2, d2 = _series(theory, problem, args.d2)
    for n, d in ((n1, d1), (n2, d2)):
        if not d.validated:
            return EXIT_INVALID, {"command": "equivalent", "ok": False}, [f"{n}: not a deformation"]
    res = equivalence_greedy(d1, d2, args.to)
    doc = {"command": "equivalent", "d1": n1, "d2": n2, "found": res.found, "note": res.note}
    if res.found:
        doc["automorphism"] = io.automorphism_to_dict(res.automorphism)
        check = conjugate(d1.truncate(res.automorphism.order), res.automorphism)
        doc["verified"] = check == d2.truncate(res.automorphism.order)
        return EXIT_OK, doc, [f"{n1} ~ {n2}: witness found and verified by conjugation"]
    doc["failed_order"] = res.failed_order
    return EXIT_BLOCKED, doc, [f"no witness found at order {res.failed_order}", f"  ({res.note})"]


COMMANDS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "cup": cmd_cup,
    "extend": cmd_extend,
    "integrate": cmd_integrate,
    "trivialize": cmd_trivialize,
    "rigidity": cmd_rigidity,
    "equivalent": cmd_equivalent,
}


def build_parser():
    p = _Parser(prog="deforma", description="Deformations of Hopf (co)module (co)algebra structures.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="problem file or fixture name")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--max-dim", type=int, default=None, help="cap on cochain space dimensions")
    common.add_argument("--lax-unit", action="store_true", help="skip the rho(1) = 1 (x) 1 check")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("validate", parents=[common], help="check every axiom")
    c = sub.add_parser("cohomology", parents=[common], help="cohomology dimensions and representatives")
    c.add_argument("--degree", type=int, default=None)
    c.add_argument("--which", choices=("def", "hochschild", "cohochschild"), default="def")
    c = sub.add_parser("cup", parents=[common], help="cup product of two cochain blocks")
    c.add_argument("--f", default="f", help="cochain block name, or 'base'")
    c.add_argument("--g", default="g", help="cochain block name, or 'base'")
    for name, help_ in (("extend", "extend a deformation order by order"), ("trivialize", "conjugate a deformation away")):
        c = sub.add_parser(name, parents=[common], help=help_)
        c.add_argument("--deformation", default=None)
        c.add_argument("--to", type=int, default=None)
    c = sub.add_parser("integrate", parents=[common], help="integrate a 1-cocycle")
    c.add_argument("--cocycle", default=None)
    c.add_argument("--to", type=int, default=None)
    sub.add_parser("rigidity", parents=[common], help="sufficient rigidity criterion")
    c = sub.add_parser("equivalent", parents=[common], help="greedy equivalence search")
    c.add_argument("d1")
    c.add_argument("d2")
    c.add_argument("--to", type=int, default=None)
    return p


def run(argv):
    """Run a command; returns (exit code, stdout text)."""
    args = build_parser().parse_args(argv)
    if getattr(args, "to", None) is not None and args.to < 0:
        return EXIT_USAGE, "error: --to must be non-negative\n"
    try:
        problem = load_problem(args.file, args.lax_unit)
        code, doc, lines = COMMANDS[args.command](problem, args)
    except (UsageError, ParseError) as exc:
        return EXIT_USAGE, f"error: {exc}\n"
    except InvalidStructure as exc:
        doc = {"command": args.command, "ok": False, "error": str(exc)}
        if exc.report is not None:
            doc["report"] = exc.report.to_dict()
        lines = [f"invalid input: {exc}"]
        code = EXIT_INVALID
    except (NotValidated, NotACocycle) as exc:
        doc = {"command": args.command, "ok": False, "error": str(exc)}
        lines = [f"error: {exc}"]
        code = EXIT_INVALID
    except DeformaError as exc:
        return EXIT_USAGE, f"error: {type(exc).__name__}: {exc}\n"
    if args.json:
        return code, io.dumps({"schema": io.SCHEMA, **doc})
    return code, "\n".join(lines) + "\n"


def main(argv=None):
    code, out = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if code != EXIT_USAGE else sys.stderr
    stream.write(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

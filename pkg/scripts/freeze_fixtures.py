"""Write the fixture files under fixtures/ with oracle-frozen expectations.

Expected cohomology dimensions come from the independent oracle in
tests/oracle.py, never from the package's own complexes.  The negative files
are seeded mutations of the fixtures that the validators must reject.  The
files under fixtures/regression/ carry deformation and cochain blocks, and
their recorded CLI reports (``*.golden.json``) are regression values taken
from the package itself.

    python3 scripts/freeze_fixtures.py
"""

from __future__ import annotations

import os
import sys

import numpy as np

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "tests"))

import oracle  # noqa: E402
from helpers import EXTRA  # noqa: E402

from deforma import io  # noqa: E402
from deforma.cli import run  # noqa: E402
from deforma.defcomplex import build_theory  # noqa: E402
from deforma.deformation import DeformationSeries, complete_automorphism, conjugate  # noqa: E402
from deforma.actions import validate_action  # noqa: E402
from deforma.fixtures import FIXTURES, MAIN_FIXTURES, fixture  # noqa: E402
from deforma.linalg import GF  # noqa: E402

PROVENANCE = "independent oracle (tests/oracle.py)"
SEED = 20240601


def expected_block(doc):
    out = {"provenance": PROVENANCE, "valid": True, "def_cohomology": oracle.def_cohomology(doc)}
    key = "hochschild" if doc["A"]["type"] == "algebra" else "cohochschild"
    out[key] = oracle.hochschild_cohomology(doc)
    h1, h2 = out["def_cohomology"][1], out[key][2]
    out["rigidity"] = "CERTIFIED-RIGID" if h1 == 0 and h2 == 0 else "INCONCLUSIVE"
    return out


def write(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(io.dumps(doc))


def mutate(s, rng):
    """Perturb one coefficient of the (co)action until the validators object."""
    doc = io.structure_to_dict(s)
    triples = doc["action"]["map"]
    hd, a = doc["H"]["dim"], doc["A"]["dim"]
    bounds = (hd, a, a) if s.kind.is_module else (a, hd, a)
    while True:
        key = tuple(int(rng.integers(b)) for b in bounds)
        mutated = [list(t) for t in triples]
        hit = [t for t in mutated if tuple(t[:3]) == key]
        if hit:
            hit[0][3] = str(s.field(hit[0][3]) + 1)
        else:
            mutated.append([*key, "1"])
        candidate = dict(doc, action={"kind": doc["action"]["kind"], "map": mutated})
        rep = validate_action(io.parse_problem(candidate).structure)
        if not rep.ok:
            return candidate, key, sorted({f.axiom for f in rep.failures})


def _unit(n, k, F):
    v = np.zeros(n, dtype=object)
    v[k] = F.one
    return v


def regression_problems():
    """(file name, problem doc, list of CLI argument lists)."""
    out = []

    s = fixture("c2-sign-ma")
    th = build_theory(s)
    doc = io.structure_to_dict(s)
    doc["name"] = "c2-sign-ma-integrate"
    # Z^1 = 0 here, so the only cocycle to pin is zero
    doc["cochains"] = {"l1": io.cochain_to_dict(1, np.zeros(th.one_cochain_dim, dtype=object))}
    out.append((doc, [["integrate", "--cocycle", "l1", "--to", "4"], ["extend", "--to", "4"]]))

    s = fixture("trivial-ma", GF(2))
    th = build_theory(s)
    doc = io.structure_to_dict(s)
    doc["name"] = "gf2-trivial-ma-obstructed"
    l1 = _unit(th.one_cochain_dim, 3, th.field)
    g = _unit(th.one_cochain_dim, 7, th.field)
    doc["cochains"] = {"l1": io.cochain_to_dict(1, l1), "g": io.cochain_to_dict(1, g)}
    doc["deformations"] = {
        "a_trivial": io.series_to_dict(DeformationSeries.trivial(th, 1)),
        "h1": io.series_to_dict(DeformationSeries.create(th, [th.base_cochain().comp0, l1])),
    }
    out.append((doc, [
        ["integrate", "--cocycle", "l1", "--to", "3"],
        ["extend", "--deformation", "h1", "--to", "2"],
        ["trivialize", "--deformation", "h1"],
        ["equivalent", "a_trivial", "h1"],
        ["cup", "--f", "l1", "--g", "g"],
        ["cohomology", "--degree", "2"],
    ]))

    s = fixture("sweedler-h4-ma")
    th = build_theory(s)
    doc = io.structure_to_dict(s)
    doc["name"] = "sweedler-h4-ma-conjugate"
    phi = complete_automorphism(th, th.f0_basis.vectors[0], 1, 3).automorphism
    triv = DeformationSeries.trivial(th, 3)
    doc["deformations"] = {"a_trivial": io.series_to_dict(triv), "conj": io.series_to_dict(conjugate(triv, phi))}
    doc["automorphisms"] = {"phi": io.automorphism_to_dict(phi)}
    out.append((doc, [
        ["validate"],
        ["trivialize", "--deformation", "conj"],
        ["equivalent", "a_trivial", "conj"],
        ["cup", "--f", "base", "--g", "base"],
        ["rigidity"],
    ]))
    return out


def write_regression():
    base = os.path.join(ROOT, "fixtures", "regression")
    for doc, commands in regression_problems():
        path = os.path.join(base, f"{doc['name']}.json")
        write(path, doc)
        golden = {}
        for argv in commands:
            code, text = run([argv[0], path, "--json"] + argv[1:])
            golden[" ".join(argv)] = {"exit": code, "report": text}
        write(os.path.join(base, f"{doc['name']}.golden.json"), golden)
        print(doc["name"], {k: v["exit"] for k, v in golden.items()})


def main():
    names = sorted(FIXTURES) + sorted(EXTRA)
    for name in names:
        s = EXTRA[name]() if name in EXTRA else fixture(name)
        doc = io.structure_to_dict(s)
        doc["name"] = name
        doc["expected"] = expected_block(doc)
        write(os.path.join(ROOT, "fixtures", f"{name}.json"), doc)
        print(name, doc["expected"]["def_cohomology"])
    rng = np.random.default_rng(SEED)
    for name in MAIN_FIXTURES:
        doc, key, failed = mutate(fixture(name), rng)
        doc["name"] = f"{name}-mutated"
        doc["expected"] = {
            "provenance": f"seeded mutation of {name} (seed {SEED}) at action entry {list(key)}",
            "valid": False,
            "failed_axioms": failed,
        }
        write(os.path.join(ROOT, "fixtures", "negative", f"{name}-mutated.json"), doc)
        print(doc["name"], key, failed)
    write_regression()


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Regenerates the corpus: inputs, expected outputs and manifest.json.

Run from the workspace root after `cargo build -p torocob-cli`:

    python3 crates/cli/corpus/generate.py

Each case states its intended exit code; generation stops if the binary
disagrees, so a regenerated corpus never records unintended behaviour.
"""

import copy
import json
import os
import subprocess
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.abspath(os.path.join(HERE, "..", "..", ".."))
BIN = os.environ.get("TOROCOB", os.path.join(ROOT, "target", "debug", "torocob"))
V = {"torocob-schema": "1"}


def canonical(obj):
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write(rel, obj):
    path = os.path.join(HERE, rel)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(obj if isinstance(obj, str) else canonical(obj))


def vec(*xs):
    return [str(x) for x in xs]


def data(builder, char, n=2, **extra):
    doc = dict(V, kind="data", builder=builder, char={"n": str(n), "assignment": {k: vec(*v) for k, v in char.items()}})
    doc.update(extra)
    return doc


def polygon(sides):
    return {"builder": "polygon", "sides": str(sides)}


def edges(vs):
    return {f"c0.e{i}": v for i, v in enumerate(vs)}


EYE = {"builder": "eye"}

INPUTS = {
    "inputs/eye.json": data(EYE, edges([(1, 0), (0, 1)])),
    "inputs/eye-orbifold.json": data(EYE, edges([(1, 0), (1, 2)])),
    "inputs/bad-eye.json": data(EYE, edges([(1, 0), (2, 0)])),
    "inputs/abstract-eye.json": data(EYE, edges([(1, 0), (0, 1)]), bundle="abstract"),
    "inputs/square.json": data(polygon(4), edges([(1, 0), (0, 1), (1, 0), (0, 1)])),
    "inputs/square-moved.json": data(polygon(4), edges([(1, 1), (1, 0), (-1, -1), (1, 0)])),
    "inputs/triangle.json": data(polygon(3), edges([(1, 0), (0, 1), (-1, -1)])),
    "inputs/hexagon.json": data(polygon(6), edges([(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)])),
    "inputs/disc.json": data({"builder": "disc"}, {"c0": (1, 2)}),
    "inputs/annulus.json": data({"builder": "surface", "genus": "0", "cycles": vec(0, 0)}, {"c0": (1, 0), "c1": (0, 1)}),
    "inputs/torus-with-eye.json": data(
        {"builder": "surface", "genus": "1", "cycles": vec(2)}, edges([(1, 0), (1, 2)])
    ),
    "inputs/prism.json": data(
        {"builder": "product", "of": polygon(3)},
        {"c0.e0*I": (1, 0, 0), "c0.e1*I": (0, 1, 0), "c0.e2*I": (-1, -1, 0), "bottom": (0, 0, 1), "top": (0, 0, -1)},
        n=3,
    ),
    "inputs/no-version.json": {"kind": "data", "builder": EYE, "char": {"n": "2", "assignment": {}}},
    "inputs/wrong-version.json": dict(data(EYE, edges([(1, 0), (0, 1)])), **{"torocob-schema": "2"}),
    "inputs/malformed.json": '{"torocob-schema": "1", "kind": "data", ',
    "inputs/base-and-builder.json": dict(
        data(EYE, edges([(1, 0), (0, 1)])),
        base={"dim": "2", "facets": [], "faces": []},
    ),
    "inputs/construct-eye.json": dict(V, kind="construct", builder=EYE),
    "inputs/construct-simplex-cut.json": dict(V, kind="construct", builder={"builder": "simplex", "dim": "3"}, cut="vertices"),
    "inputs/construct-eye-bottom.json": dict(V, kind="construct", builder=EYE, cut="bottom"),
    "inputs/construct-bad-cycle.json": dict(V, kind="construct", builder={"builder": "surface", "genus": "0", "cycles": vec(1)}),
    "inputs/construct-unknown.json": dict(V, kind="construct", builder={"builder": "torus-knot"}),
    "inputs/simplex3.json": dict(V, kind="simple-base", builder={"builder": "simplex", "dim": "3"}),
    "inputs/cube3.json": dict(V, kind="simple-base", builder={"builder": "cube", "dim": "3"}),
    "inputs/simplex3-clash.json": dict(
        V, kind="simple-base", builder={"builder": "simplex", "dim": "3"}, seed={"f0": vec(1, 1), "f1": vec(2, 2)}
    ),
    "inputs/segment.json": dict(V, kind="simple-base", builder={"builder": "simplex", "dim": "1"}),
    "inputs/fan-bounds.json": dict(V, kind="fan", vectors=[vec(1, 0), vec(0, 1), vec(-1, 2), vec(0, -1)]),
    "inputs/fan-unknown.json": dict(V, kind="fan", vectors=[vec(1, 0), vec(1, 1), vec(-1, 2), vec(0, -1)]),
    "inputs/fan-degenerate.json": dict(V, kind="fan", vectors=[vec(1, 0), vec(2, 0), vec(-1, 2), vec(0, -1)]),
    "inputs/fan-three.json": dict(V, kind="fan", vectors=[vec(1, 0), vec(0, 1), vec(-1, -1)]),
    "inputs/interval.json": dict(V, kind="interval", u=vec(1, 0), v=vec(-1, 5)),
    "inputs/interval-dependent.json": dict(V, kind="interval", u=vec(1, 0), v=vec(-2, 0)),
    "inputs/interval-missing.json": dict(V, kind="interval", u=vec(1, 0)),
    "inputs/equiv-square.json": dict(V, kind="manifest", left="square.json", right="square-moved.json"),
    "inputs/equiv-eye.json": dict(V, kind="manifest", left="eye.json", right="eye-orbifold.json"),
    "inputs/equiv-abstract.json": dict(V, kind="manifest", left="eye.json", right="abstract-eye.json"),
    "inputs/equiv-missing.json": dict(V, kind="manifest", left="eye.json", right="nowhere.json"),
}

# (name, command, input, flags, intended exit); `None` input means produced below
CASES = [
    ("validate-eye", "validate", "inputs/eye.json", [], 0),
    ("validate-orbifold", "validate", "inputs/eye-orbifold.json", [], 0),
    ("validate-bad-eye", "validate", "inputs/bad-eye.json", [], 1),
    ("validate-malformed", "validate", "inputs/malformed.json", [], 2),
    ("validate-no-version", "validate", "inputs/no-version.json", [], 2),
    ("validate-wrong-version", "validate", "inputs/wrong-version.json", [], 2),
    ("validate-base-and-builder", "validate", "inputs/base-and-builder.json", [], 2),
    ("local-groups-orbifold", "local-groups", "inputs/eye-orbifold.json", [], 0),
    ("local-groups-bad-eye", "local-groups", "inputs/bad-eye.json", [], 1),
    ("local-groups-bad-eye-report", "local-groups", "inputs/bad-eye.json", ["--emit-report"], 1),
    ("local-groups-wrong-kind", "local-groups", "inputs/fan-bounds.json", [], 2),
    ("construct-eye", "construct", "inputs/construct-eye.json", [], 0),
    ("construct-simplex-cut", "construct", "inputs/construct-simplex-cut.json", [], 0),
    ("construct-eye-bottom", "construct", "inputs/construct-eye-bottom.json", [], 0),
    ("construct-bad-cycle", "construct", "inputs/construct-bad-cycle.json", [], 1),
    ("construct-unknown", "construct", "inputs/construct-unknown.json", [], 2),
    ("cobordism-eye", "cobordism", "inputs/eye.json", [], 0),
    ("cobordism-square", "cobordism", "inputs/square.json", [], 0),
    ("cobordism-triangle", "cobordism", "inputs/triangle.json", [], 0),
    ("cobordism-hexagon", "cobordism", "inputs/hexagon.json", [], 0),
    ("cobordism-prism", "cobordism", "inputs/prism.json", [], 0),
    ("cobordism-eye-abstract", "cobordism", "inputs/eye.json", ["--bundle", "abstract"], 0),
    ("cobordism-bad-eye", "cobordism", "inputs/bad-eye.json", [], 1),
    ("cobordism-bad-eye-report", "cobordism", "inputs/bad-eye.json", ["--emit-report"], 1),
    ("cobordism-malformed", "cobordism", "inputs/malformed.json", [], 2),
    ("null-cobordism-disc", "null-cobordism", "inputs/disc.json", [], 0),
    ("null-cobordism-annulus", "null-cobordism", "inputs/annulus.json", [], 0),
    ("null-cobordism-eye", "null-cobordism", "inputs/eye.json", [], 1),
    ("null-cobordism-wrong-version", "null-cobordism", "inputs/wrong-version.json", [], 2),
    ("vertex-cut-simplex3", "vertex-cut-relation", "inputs/simplex3.json", [], 0),
    ("vertex-cut-cube3", "vertex-cut-relation", "inputs/cube3.json", [], 0),
    ("vertex-cut-clash", "vertex-cut-relation", "inputs/simplex3-clash.json", [], 1),
    ("vertex-cut-segment", "vertex-cut-relation", "inputs/segment.json", [], 1),
    ("vertex-cut-wrong-kind", "vertex-cut-relation", "inputs/eye.json", [], 2),
    ("boundary-eye", "boundary", None, [], 0),
    ("boundary-dependent", "boundary", None, [], 1),
    ("boundary-wrong-kind", "boundary", "inputs/eye.json", [], 2),
    ("equiv-square", "equiv", "inputs/equiv-square.json", [], 0),
    ("equiv-eye", "equiv", "inputs/equiv-eye.json", [], 0),
    ("equiv-abstract", "equiv", "inputs/equiv-abstract.json", [], 1),
    ("equiv-missing", "equiv", "inputs/equiv-missing.json", [], 2),
    ("decompose-torus-with-eye", "decompose-2d", "inputs/torus-with-eye.json", [], 0),
    ("decompose-annulus", "decompose-2d", "inputs/annulus.json", [], 0),
    ("decompose-bad-eye", "decompose-2d", "inputs/bad-eye.json", [], 1),
    ("decompose-malformed", "decompose-2d", "inputs/malformed.json", [], 2),
    ("hirzebruch-bounds", "hirzebruch", "inputs/fan-bounds.json", [], 0),
    ("hirzebruch-unknown", "hirzebruch", "inputs/fan-unknown.json", [], 0),
    ("hirzebruch-degenerate", "hirzebruch", "inputs/fan-degenerate.json", [], 1),
    ("hirzebruch-three", "hirzebruch", "inputs/fan-three.json", [], 2),
    ("lens-interval", "lens", "inputs/interval.json", [], 0),
    ("lens-dependent", "lens", "inputs/interval-dependent.json", [], 1),
    ("lens-missing", "lens", "inputs/interval-missing.json", [], 2),
    ("verify-eye-certificate", "verify", "expected/cobordism-eye.json", [], 0),
    ("verify-tampered-certificate", "verify", None, [], 1),
    ("verify-wrong-kind", "verify", "inputs/eye.json", [], 2),
]


def run(command, rel, flags):
    proc = subprocess.run([BIN, command, os.path.join(HERE, rel)] + flags, capture_output=True)
    return proc.returncode, proc.stdout.decode("utf-8")


def derived_inputs():
    """Inputs built from earlier outputs."""
    with open(os.path.join(HERE, "expected", "cobordism-eye.json"), encoding="utf-8") as f:
        cert = json.load(f)
    w = cert["certificate"]["w"]
    write("inputs/eye-marked.json", dict(V, kind="marked", marked=w["marked"], rs=w["rs"]))
    bad = copy.deepcopy(w)
    bad["rs"]["assignment"]["bottom"] = vec(1, 0)
    write("inputs/eye-marked-dependent.json", dict(V, kind="marked", marked=bad["marked"], rs=bad["rs"]))
    tampered = copy.deepcopy(cert)
    tampered["certificate"]["boundary"][0]["char"]["assignment"]["bottom"] = vec(1, -3)
    write("inputs/tampered-certificate.json", tampered)


DERIVED = {
    "boundary-eye": "inputs/eye-marked.json",
    "boundary-dependent": "inputs/eye-marked-dependent.json",
    "verify-tampered-certificate": "inputs/tampered-certificate.json",
}


def main():
    for rel, obj in INPUTS.items():
        write(rel, obj)
    cases = []
    derived_done = False
    for name, command, rel, flags, intended in CASES:
        if rel is None:
            if not derived_done:
                derived_inputs()
                derived_done = True
            rel = DERIVED[name]
        code, out = run(command, rel, flags)
        if code != intended:
            sys.exit(f"{name}: exit {code}, intended {intended}")
        case = {"name": name, "command": command, "input": rel, "exit": str(code)}
        if flags:
            case["flags"] = flags
        if out:
            write(f"expected/{name}.json", out)
            case["expected"] = f"expected/{name}.json"
        cases.append(case)
    write("manifest.json", dict(V, kind="corpus", cases=cases))
    print(f"{len(cases)} cases written")


if __name__ == "__main__":
    main()

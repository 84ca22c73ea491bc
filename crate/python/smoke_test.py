#!/usr/bin/env python3
"""Smoke test for the eqgen_py extension module.

Build the module first, then run this script:

    cargo build -p eqgen-py
    python3 python/smoke_test.py
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path

WORKSPACE = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        WORKSPACE / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libeqgen_py.so", "libeqgen_py.dylib", "eqgen_py.dll")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("eqgen_py cdylib not found; run `cargo build -p eqgen-py` first")
    stage = Path(tempfile.mkdtemp(prefix="eqgen_py_"))
    suffix = ".pyd" if built.suffix == ".dll" else ".so"
    shutil.copy2(built, stage / f"eqgen_py{suffix}")
    sys.path.insert(0, str(stage))
    import eqgen_py

    return eqgen_py


def main():
    eqgen_py = load_module()

    # Hashing matches the reference MD5 vectors.
    assert eqgen_py.md5_hex("") == "d41d8cd98f00b204e9800998ecf8427e"
    assert eqgen_py.md5_hex("abc") == "900150983cd24fb0d6963f7d28e17f72"

    # The truth-table oracle, in both operator spellings.
    assert eqgen_py.equivalent("p | (p & q)", "p")
    assert eqgen_py.equivalent("¬(p ∧ q)", "!p | !q")
    assert not eqgen_py.equivalent("p", "!p")

    # Rendering is minimal-parentheses and canonical.
    assert eqgen_py.canonical("((p) | (T)) & (p)") == "(p ∨ T) ∧ p"
    assert eqgen_py.canonical("p | T", "latex") == "p \\vee T"

    # The law table carries 19 categorized rules.
    laws = eqgen_py.law_table()
    assert len(laws) == 19
    assert {category for (_, _, category, _) in laws} == {"easy", "median", "hard"}

    # Question generation is deterministic, salted, and sound.
    first = json.loads(eqgen_py.generate_question("20230042"))
    again = json.loads(eqgen_py.generate_question("20230042"))
    assert first == again
    for field in ("student_key", "digest_hex", "lhs_ascii", "rhs_ascii", "latex", "trace", "stats"):
        assert field in first, field
    assert eqgen_py.equivalent(first["lhs_ascii"], first["rhs_ascii"])

    salted = json.loads(eqgen_py.generate_question("20230042", salt="term-1"))
    assert salted["digest_hex"] != first["digest_hex"]

    harder = json.loads(
        eqgen_py.generate_question("20230042", config_text="min_leaf_count = 6\n")
    )
    assert harder["stats"]["left_leaves"] >= 6

    try:
        eqgen_py.generate_question("x", config_text="max_lawz = 1\n")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown config key was accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()

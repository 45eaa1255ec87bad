"""Smoke test for the signed_kl_py extension.

Builds the extension with cargo unless SIGNED_KL_PY_LIB points at an existing
shared library, loads it, and exercises each exported type once.
"""

import importlib.util
import os
import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    lib = os.environ.get("SIGNED_KL_PY_LIB")
    if lib is None:
        subprocess.run(
            ["cargo", "build", "--release", "-p", "signed-kl-python", "--features", "extension-module"],
            cwd=ROOT,
            check=True,
        )
        suffix = {"darwin": "dylib", "win32": "dll"}.get(sys.platform, "so")
        prefix = "" if sys.platform == "win32" else "lib"
        lib = ROOT / "target" / "release" / f"{prefix}signed_kl_py.{suffix}"
    spec = importlib.util.spec_from_file_location("signed_kl_py", lib)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    skl = load()

    b2 = skl.RootSystem("B2", [2])
    assert b2.rank == 2 and b2.noncompact == [2]
    assert b2.positive_roots() == [[1, 0], [0, 1], [1, 1], [1, 2]]
    assert not b2.is_compact([0, 1]) and b2.is_compact([1, 0])

    a3 = skl.WeylGroup(skl.RootSystem("A3"))
    assert a3.order == 24 and a3.length(a3.longest()) == 6
    assert a3.bruhat_leq("2", "2132")
    kl = skl.KLTable(a3)
    assert kl.polynomial("2", "2132") == [1, 1]
    assert kl.polynomial("12", "e") == []

    table = skl.SignedKLTable(skl.RootSystem("A1", [1]))
    assert table.elements() == ["e", "1"]
    assert table.polynomial("1", "e") == [-1]

    assert skl.epsilon_hyperplane(skl.RootSystem("G2", [1]), [1, 0], 1, "1") == -1
    assert skl.verify_main_theorem(skl.RootSystem("B2", [1])) == (True, 64, 0)

    chs = skl.signature_character(skl.RootSystem("A1", [1]), "3/2", 4)
    assert [c for _, c in chs] == [1, -1, -1, -1, -1]

    assert skl.jantzen_signature_split([(1, 0), (1, 0)]) == ((2, 0), (1, 1))

    try:
        skl.RootSystem("Q7")
    except ValueError:
        pass
    else:
        raise AssertionError("bad label accepted")

    print("signed_kl_py smoke test: ok")


if __name__ == "__main__":
    main()

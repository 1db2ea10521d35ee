"""Smoke test for the `inertia` extension module.

Uses an installed module if there is one (`maturin develop`), otherwise the
shared library from `cargo build -p inertia-py --features extension-module`.
"""

import importlib.util
import json
import pathlib
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[3]


def load():
    try:
        import inertia

        return inertia
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libinertia.so"
        if lib.exists():
            tmp = pathlib.Path(tempfile.mkdtemp()) / "inertia.so"
            tmp.write_bytes(lib.read_bytes())
            spec = importlib.util.spec_from_file_location("inertia", tmp)
            mod = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    sys.exit("build the extension first: cargo build -p inertia-py --features extension-module")


def main():
    inertia = load()

    comps = inertia.sigma("y^2*z - x^3 + x*z^2", ["0", "1", "0"])
    assert comps == ["x*y*z", "x^3 - x*z^2", "y*z^2"], comps

    code, report = inertia.run("certify", json.dumps({"abstract": True, "generators": 3, "max_len": 10}))
    report = json.loads(report)
    assert code == 0, report
    assert report["certificate"]["words_checked"] == 1536
    assert report["status"] == "certified"

    code, report = inertia.run("curve-check", json.dumps({"curve": {"form": "y^2*z - x^3"}}))
    assert code == 2
    assert json.loads(report)["counterexample"]["witness"] == ["0/1", "0/1", "1/1"]

    try:
        inertia.run("certify", "{ not json")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed config accepted")

    print(f"inertia {inertia.__version__}: ok")


if __name__ == "__main__":
    main()

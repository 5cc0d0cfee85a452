import io
import subprocess
import sys

import pytest

from phoml.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, bundled_dir, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_check_bundled_scripts():
    code, out, _ = call("check", "examples/sec3_2.phoml")
    assert code == EXIT_OK
    assert "OK" in out and "NORMALIZE normal-canonical steps=3" in out
    code, out, _ = call("check", str(bundled_dir() / "sec3_1.phoml"))
    assert code == EXIT_OK
    assert "f x => f y" in out and "f y => f x" in out


def test_normalize_with_trace():
    code, out, _ = call("normalize", "examples/sec3_2.phoml", "--name", "output", "--trace")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[-1] == r"\m:bot => bot. \n:bot => bot. (ref(bot) =>* ref(bot))^- m"
    assert lines[-2] == "status=normal-canonical steps=3"
    for rule in ("ref-lam-app", "beta-tri", "univ-minus"):
        assert any(line.endswith(rule) for line in lines), rule
    assert "[1] cong-minus ref-lam-app" in lines


def test_normalize_fuel():
    code, out, _ = call("normalize", "examples/sec3_2.phoml", "--name", "output", "--fuel", "1")
    assert code == EXIT_OK and "status=fuel-exhausted steps=1" in out


def test_type_error_exits_one(tmp_path):
    f = tmp_path / "bad.phoml"
    f.write_text("assume x : Omega\ncheck ref(x) : x =[Omega] bot\n")
    code, out, err = call("check", str(f))
    assert code == EXIT_FAIL
    assert err.startswith("ERROR NotConvertible at bad.phoml:2:")


def test_parse_error_exits_two(tmp_path):
    f = tmp_path / "bad.phoml"
    f.write_text("check ref(bot : bot\n")
    code, _, err = call("check", str(f))
    assert code == EXIT_USAGE and err.startswith("PARSE ERROR bad.phoml:1:")


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["check"],
    ["check", "no/such/file.phoml"],
    ["normalize", "examples/sec3_2.phoml"],
    ["normalize", "examples/sec3_2.phoml", "--name", "missing"],
    ["check", "examples/sec3_2.phoml", "--fuel", "0"],
    ["props", "--suite", "no-such-suite", "--cases", "1"],
    ["props", "--profile", "huge"],
])
def test_usage_errors_exit_two(argv):
    assert call(*argv)[0] == EXIT_USAGE


def test_props_suite():
    code, out, _ = call("props", "--suite", "diamond", "--cases", "10")
    assert code == EXIT_OK
    assert out.strip() == "PROP diamond cases=10 failures=0"
    code, out, _ = call("props", "--suite", "roundtrip", "--cases", "5", "--seed", "123456789012")
    assert code == EXIT_OK


def test_examples_match_goldens():
    code, out, err = call("examples")
    assert code == EXIT_OK, err
    assert out.splitlines() == ["OK sec3_1.phoml directives=2", "OK sec3_2.phoml directives=8"]


def test_goldens_are_byte_stable():
    from phoml.cli import directive_outputs
    from phoml.frontend.script import parse
    for name in ("sec3_1", "sec3_2"):
        text = (bundled_dir() / f"{name}.phoml").read_text()
        first = directive_outputs(parse(text, f"{name}.phoml"))
        second = directive_outputs(parse(text, f"{name}.phoml"))
        assert first == second
        for fname, body in first:
            assert (bundled_dir() / "golden" / name / fname).read_text() == body


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "phoml.cli", "check", "examples/sec3_1.phoml"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.count("OK ") == 2

"""CLI tests: exit codes, certified digits, determinism, rendering, verify."""
import io
import json
import re
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

from qx.cli import main

GOLDEN = sorted(Path(__file__).parent.glob("golden/*.json"))
CORPUS = Path(__file__).parent / "corpus"


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def test_compile_ok_and_exit_zero():
    code, out, _ = run(["compile", str(CORPUS / "01_square_rectangle.qdx")])
    assert code == 0
    cert = json.loads(out)
    assert cert["emits"]["m"]["expr"] == "4"
    assert cert["emits"]["m"]["verdict"]["status"] == "rational"


def test_exit_code_2_missing_file():
    code, _, err = run(["compile", "/nonexistent/nowhere.qdx"])
    assert code == 2 and "cannot read" in err


def test_exit_code_3_syntax(tmp_path):
    bad = tmp_path / "bad.qdx"
    bad.write_text("let a = seg(2) emit a;\n")
    code, _, err = run(["compile", str(bad)])
    assert code == 3 and "expected" in err


def test_exit_code_4_semantic_with_json_span(tmp_path):
    bad = tmp_path / "unbound.qdx"
    bad.write_text("let a = seg(2);\nemit zz;\n")
    code, _, err = run(["compile", str(bad), "--json"])
    assert code == 4
    payload = json.loads(err)
    assert payload["error"]["line"] == 2


def test_exit_code_5_domain(tmp_path):
    bad = tmp_path / "neg.qdx"
    bad.write_text("let a = seg(2);\nlet b = meanprop(a, a);\nlet c = fourthprop(a, a, a);\nemit c;\n")
    # domain error: arcsin out of range via eval instead
    code, _, err = run(["eval", "arcsin_over_pi(2)"])
    assert code == 5


def test_eval_certified_digits():
    code, out, _ = run(["eval", "sin_pi(2/5)", "--precision", "20"])
    assert code == 0
    # mpmath dps=60 oracle: 0.95105651629515357211643933...
    assert out.strip() == "0.95105651629515357211"


def test_eval_ln_minus_one():
    code, out, _ = run(["eval", "ln(-1)", "--precision", "12"])
    assert code == 0
    assert re.fullmatch(r"0(\.0+)? \+ 3\.141592653589i", out.strip())


def test_eval_clavius_probe():
    code, out, _ = run(["eval", "clavius_x(20)", "--precision", "8"])
    assert code == 0
    assert out.strip().startswith("0.63661977")


def test_compile_determinism():
    path = str(CORPUS / "07_trisect_right.qdx")
    _, out1, _ = run(["compile", path])
    _, out2, _ = run(["compile", path])
    assert out1 == out2


def test_render_structure_and_determinism(tmp_path):
    out1 = tmp_path / "a.svg"
    out2 = tmp_path / "b.svg"
    path = str(CORPUS / "01_square_rectangle.qdx")
    assert run(["render", path, "--out", str(out1)])[0] == 0
    assert run(["render", path, "--out", str(out2)])[0] == 0
    svg = out1.read_text()
    assert svg == out2.read_text()
    assert svg.count("<line") >= 3
    assert 'class="circle"' in svg


def test_render_bad_out_path():
    path = str(CORPUS / "01_square_rectangle.qdx")
    code, _, err = run(["render", path, "--out", "/nonexistent-dir/x.svg"])
    assert code == 2


def test_render_quadratrix_overlay_satisfies_equation(tmp_path):
    import math
    out = tmp_path / "q.svg"
    path = str(CORPUS / "01_square_rectangle.qdx")
    assert run(["render", path, "--out", str(out), "--with-curve", "quadratrix"])[0] == 0
    svg = out.read_text()
    m = re.search(r'class="curve quadratrix"[^>]*points="([^"]+)"', svg)
    assert m
    pts = [tuple(map(float, pair.split(","))) for pair in m.group(1).split()]
    assert len(pts) >= 2 * 640
    for x, y in pts[:: len(pts) // 97]:
        assert abs(y - x * math.tan(math.pi * y / 2)) < 1e-6


def test_ladder_cli_gs_case():
    code, out, _ = run(["ladder", "pow(-1, sqrt(2))", "--reduce", "--ascend"])
    assert code == 0
    cert = json.loads(out)
    assert cert["ascent"]["degree"] == 1
    assert cert["ascent"]["conditional"] is True
    assert cert["ascent"]["crosschecks"][0]["rule"] == "gelfond-schneider"


def test_ladder_cli_log_and_rational():
    code, out, _ = run(["ladder", "log(3; -1)"])
    cert = json.loads(out)
    assert [r["kind"] for r in cert["ladder"]["rungs"]] == ["exponential-algebraic"]
    code, out, _ = run(["ladder", "5/7", "--reduce", "--ascend"])
    cert = json.loads(out)
    assert cert["ladder"]["rungs"] == []
    assert cert["ascent"]["degree"] == 0


def test_reduce_alias():
    code, out, _ = run(["reduce", "pow(-1, sqrt(2))"])
    assert code == 0
    assert "reduced" in json.loads(out)


def test_report_determinism():
    _, out1, _ = run(["report", "spiral", "--kmax", "8"])
    _, out2, _ = run(["report", "spiral", "--kmax", "8"])
    assert out1 == out2
    rep = json.loads(out1)
    assert rep["discrepancy"]["factor_between_readings"] == "2.000000"


def test_verify_golden_certificates():
    assert GOLDEN, "golden certificates must ship with the tests"
    for path in GOLDEN:
        code, out, err = run(["verify", str(path)])
        assert code == 0, (path.name, err)


def test_verify_rejects_tampered_certificate(tmp_path):
    src = json.loads((Path(__file__).parent / "golden" / "classify_sin_2pi5.json").read_text())
    src["subject"]["verdict"]["status"] = "rational"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(src))
    code, _, err = run(["verify", str(bad)])
    assert code == 1 and "FAIL" in err


def test_eval_syntax_error_exit_3():
    code, _, err = run(["eval", "sin_pi(2/5"])
    assert code == 3
    code, _, err = run(["eval", "nosuchfn(3)"])
    assert code == 3


def test_classify_polyroot_low_precision_sound():
    code, out, _ = run(["classify", "polyroot(-2, 0, 0, 1; 1, 2)", "--json"])
    assert code == 0
    cert = json.loads(out)
    assert cert["subject"]["decimal"].startswith("1.2599210498")
    assert cert["subject"]["verdict"]["status"] == "algebraic"


def test_subprocess_determinism_across_hash_seeds(tmp_path):
    import subprocess
    import sys
    path = str(CORPUS / "10_general_anglesect.qdx")
    outs = []
    for seed in ("1", "31337"):
        proc = subprocess.run(
            [sys.executable, "-m", "qx.cli", "compile", path],
            capture_output=True, text=True,
            env={"PATH": "/usr/bin:/bin", "PYTHONHASHSEED": seed},
        )
        assert proc.returncode == 0, proc.stderr
        outs.append(proc.stdout)
    assert outs[0] == outs[1]


def test_render_spiral_overlay(tmp_path):
    out = tmp_path / "s.svg"
    path = str(CORPUS / "01_square_rectangle.qdx")
    assert run(["render", path, "--out", str(out), "--with-curve", "spiral"])[0] == 0
    svg = out.read_text()
    assert 'class="curve spiral"' in svg


def test_compile_domain_error_exit_5(tmp_path):
    prog = tmp_path / "miss.qdx"
    prog.write_text(
        "let o = point(0, 0);\nlet u = point(1, 0);\nlet c = circle(o, u);\n"
        "let v = point(3, 0);\nlet w = point(3, 1);\nlet l = line(v, w);\n"
        "let p = intersect(l, c);\nemit p;\n")
    code, _, err = run(["compile", str(prog)])
    assert code == 5 and "7:" in err  # span of the offending statement


def test_render_anglesector_program(tmp_path):
    out = tmp_path / "a.svg"
    assert run(["render", str(CORPUS / "10_general_anglesect.qdx"),
                "--out", str(out)])[0] == 0
    assert 'class="point"' in out.read_text()

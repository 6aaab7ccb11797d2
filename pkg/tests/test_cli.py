import io
import re
import subprocess
import sys
from fractions import Fraction

import pytest

from mspkit import bernd, cli
from mspkit.cli import fmt, report_bundle, run


def _run(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def _sections(text):
    found = re.findall(r"== (\w+) ==\n(.*?)(?=\n== |\Z)", text, re.S)
    return {name: body.strip().splitlines()[-1] for name, body in found}


def test_fmt_twelve_digits():
    assert fmt(Fraction(1, 3)) == "0.333333333333"
    assert fmt(48.4184536) == "48.4184536"


def test_certify_and_verify(tmp_path):
    path = tmp_path / "h.mspcert"
    code, text = _run("certify", "--fn", "h", "--a", "5/2", "--b", "3", "--slope", "20", "--out", str(path))
    assert code == 0 and "VALID" in text and "points" in text
    code, text = _run("verify", str(path))
    assert code == 0 and text.strip() == "VALID"


def test_verify_recomputes_bounds(tmp_path):
    path = tmp_path / "h.mspcert"
    _run("certify", "--fn", "h", "--a", "5/2", "--b", "3", "--slope", "20", "--out", str(path))
    lines = path.read_text().splitlines()
    # recorded lower bounds are hints only, so inflating one changes nothing
    t, ell = lines[-3].split()
    lines[-3] = f"{t} {int(ell.split('*')[0]) * 4}*2^{ell.split('^')[1]}"
    path.write_text("\n".join(lines) + "\n")
    assert _run("verify", str(path)) == (0, "VALID\n")
    # dropping a point breaks the chain
    del lines[-3]
    k = next(i for i, x in enumerate(lines) if x.startswith("points:"))
    lines[k] = f"points: {int(lines[k].split()[1]) - 1}"
    path.write_text("\n".join(lines) + "\n")
    code, text = _run("verify", str(path))
    assert code == 1 and text.startswith("INVALID") and "gap" in text
    path.write_text("garbage\n")
    assert _run("verify", str(path))[0] == 1
    assert _run("verify", str(tmp_path / "missing"))[0] == 1


def test_certify_rejects_non_dyadic():
    code, text = _run("certify", "--fn", "h", "--a", "1/3", "--b", "3", "--slope", "20")
    assert code == 2
    assert "not dyadic" in text
    suggested = Fraction(text.split("(")[-1].split(")")[0])
    assert suggested < Fraction(1, 3) and Fraction(1, 3) - suggested < Fraction(1, 2**63)
    code, text = _run("certify", "--fn", "h", "--a", "5/2", "--b", "16/5", "--slope", "20")
    assert code == 2 and "--b" in text


def test_certify_usage_errors():
    assert _run("certify", "--fn", "nope", "--a", "1", "--b", "2", "--slope", "1")[0] == 2
    assert _run("certify", "--fn", "h", "--a", "1", "--b", "2", "--slope", "20", "--prec", "8")[0] == 2
    assert _run("certify", "--fn", "h", "--a", "1", "--b", "2", "--slope", "20", "--fraction", "2")[0] == 2
    assert _run("certify", "--fn", "h")[0] == 2


def test_certify_failure_exit_code():
    # u(3) < 0, so the very first point fails
    code, text = _run("certify", "--fn", "u", "--a", "2", "--b", "3", "--slope", "20")
    assert code == 1 and text.startswith("FAIL")


def test_dk():
    code, text = _run("dk", "--max", "32")
    assert code == 0
    assert text.strip().splitlines()[-1] == "max r = 177/256  min s = 89/128  ALL POSITIVE"
    assert _run("dk", "--max", "0")[0] == 2
    assert _run("dk", "--max", "1")[1].strip().endswith("min s = none  ALL POSITIVE")


def test_lemmas():
    code, text = _run("lemmas")
    assert code == 0
    assert text.count("PASS") == 3 and "0.392976" in text


def test_poisson():
    code, text = _run("poisson", "--r", "0.883", "--phi", "1")
    assert code == 0
    diff = float(text.strip().splitlines()[-1].split("=")[1])
    assert diff < 1e-6
    assert _run("poisson", "--r", "1", "--phi", "1")[0] == 2


def test_scan():
    code, text = _run("scan", "--r-grid", "1/10:9/10:1/10", "--phi-grid", "1/10:31/10:1/10")
    assert code == 0 and "violations: 0" in text and "points: 279" in text
    assert _run("scan", "--r-grid", "1/2:1/2:1/10", "--phi-grid", "0:1:1/2")[0] == 2
    assert _run("scan", "--r-grid", "nonsense", "--phi-grid", "0:1:1/2")[0] == 2


def test_report_requires_seed():
    assert _run("report")[0] == 2


def test_report_clean(clean_report):
    text, ok = clean_report
    assert ok
    sections = _sections(text)
    assert list(sections) == ["lemmas", "dk", "certificate", "flett", "scan", "poisson", "rearrangement", "summary"]
    assert all(v == "PASS" for v in sections.values())


@pytest.mark.slow
def test_report_deterministic(clean_report):
    assert report_bundle(7)[0] == clean_report[0]


@pytest.mark.slow
def test_report_isolates_bernoulli_fault(monkeypatch, clean_report):
    real = bernd.bernoulli
    monkeypatch.setattr(bernd, "bernoulli", lambda n: -real(n) if n == 6 else real(n))
    text, ok = report_bundle(7)
    assert not ok
    sections = _sections(text)
    clean = _sections(clean_report[0])
    assert sections["dk"] == "FAIL"
    assert {k: v for k, v in sections.items() if k not in ("dk", "summary")} == {
        k: v for k, v in clean.items() if k not in ("dk", "summary")
    }


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mspkit", "dk", "--max", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "ALL POSITIVE" in proc.stdout


def test_sections_registry():
    assert [name for name, _ in cli.SECTIONS][:2] == ["lemmas", "dk"]

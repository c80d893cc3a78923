import csv
import json
import math
import subprocess
import sys

import pytest

from metaconf import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    lines = text.splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    body = list(csv.reader(ln for ln in lines if not ln.startswith("#")))
    return header, body[0], body[1:]


# -- eval -----------------------------------------------------------------------

def test_eval_origin_is_one(capsys):
    code, out, _ = run(capsys, "eval", "--kernel", "meta1d-reg", "--delta", "0.22", "--gamma", "0.33",
                       "--mu", "1", "--t", "1", "--r", "0")
    assert code == 0 and out == "1.0\n"


def test_eval_mismatched_rapidities(capsys):
    code, out, err = run(capsys, "eval", "--kernel", "meta1d-reg", "--delta", "0.22", "--gamma", "0.33",
                         "--gamma2", "0.5", "--t", "1", "--r", "0.3")
    assert code == 0 and float(out) == 0.0 and err.strip()


def test_eval_singular_point(capsys):
    code, out, err = run(capsys, "eval", "--kernel", "meta1d-holo", "--delta", "0.22", "--gamma", "0.33",
                         "--t", "-0.6", "--r", "0.6")
    assert code == 3 and out.strip() == "nan" and err


def test_eval_two_dimensional_polar(capsys):
    code, out, _ = run(capsys, "eval", "--kernel", "meta2d-reg", "--delta", "0.25", "--gamma-par", "0.25",
                       "--gamma-perp", "0", "--t", "1", "--r", "0")
    assert code == 0 and float(out) == 1.0


@pytest.mark.parametrize("argv", [
    ["eval"],
    ["eval", "--kernel", "nope", "--delta", "0.2", "--gamma", "0.3", "--t", "1"],
    ["eval", "--kernel", "meta1d-reg", "--delta", "0.2", "--t", "1"],
    ["eval", "--kernel", "meta1d-reg", "--delta", "x"],
    ["eval", "--kernel", "meta1d-reg", "--delta", "0.2", "--gamma", "0.3", "--grid", "0:1"],
    ["figure", "fig9"],
    ["verify", "everything"],
    ["bogus"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_eval_grid_reproduces_regularized_surface(capsys):
    code, out, _ = run(capsys, "eval", "--kernel", "meta1d-reg", "--delta", "0.22", "--gamma", "0.33",
                       "--grid=-1:1:21", "--t-grid=-1:1:21")
    assert code == 0
    header, cols, rows = read_csv(out)
    assert cols == ["t", "r", "re", "im", "singular"]
    assert len(rows) == 20 * 21 and all(float(r[0]) != 0 for r in rows)
    for t, r, re, im, sing in rows:
        t, r, re = float(t), float(r), float(re)
        want = abs(t) ** -0.44 * (1 + abs(r / t)) ** -0.66
        assert re == pytest.approx(want, rel=1e-12) and float(im) == 0 and sing == "0"


def test_parse_grid():
    assert list(cli.parse_grid("1:100:3:log")) == pytest.approx([1, 10, 100])
    assert list(cli.parse_grid("0:1:3")) == [0, 0.5, 1]
    for bad in ("1:2", "1:2:3:lin", "0:1:3:log", "a:1:3", "0:1:0"):
        with pytest.raises(cli.UsageError):
            cli.parse_grid(bad)


def test_float_format_round_trips():
    x = 0.1 + 0.2
    assert float(cli.fmt(x)) == x and cli.fmt(True) == "1"


# -- figure -----------------------------------------------------------------------

def test_fig2_columns_and_angles(capsys):
    code, out, _ = run(capsys, "figure", "fig2", "--grid", "1:1e3:7:log")
    header, cols, rows = read_csv(out)
    assert code == 0 and cols == ["phi_deg", "r", "C"]
    assert header[0].startswith("# metaconf ") and header[1].startswith("# config: ")
    assert json.loads(header[1][len("# config: "):])["which"] == "fig2"
    assert sorted({float(r[0]) for r in rows}) == [0, 30, 60, 90] and len(rows) == 28


def test_fig00cd_singular_near_point_six(capsys):
    _, out, _ = run(capsys, "figure", "fig00cd")
    _, cols, rows = read_csv(out)
    assert cols == ["r", "holo_re", "holo_im", "holo_abs", "holo_singular", "reg"]
    flagged = [float(r[0]) for r in rows if r[4] == "1"]
    assert flagged and all(abs(x - 0.6) <= 0.005 for x in flagged)
    finite_abs = [float(r[3]) for r in rows if r[4] == "0"]
    near = max(a for a, r in zip(finite_abs, rows) if abs(float(r[0]) - 0.6) < 0.02)
    assert near > 10 * min(finite_abs)
    assert max(float(r[5]) for r in rows) == pytest.approx(0.6 ** -0.44, rel=1e-12)


def test_fig3_monotone_decreasing(capsys):
    _, out, _ = run(capsys, "figure", "fig3")
    _, _, rows = read_csv(out)
    for phi in (0, 30, 60, 90):
        vals = [float(r[2]) for r in rows if float(r[0]) == phi]
        assert all(b < a for a, b in zip(vals, vals[1:]))


def test_figure_svg_and_json(capsys, tmp_path):
    target = tmp_path / "fig2.svg"
    assert run(capsys, "figure", "fig2", "--format", "svg", "--out", str(target))[0] == 0
    svg = target.read_text()
    assert svg.startswith("<svg") and svg.count("<polyline") == 4
    code, out, _ = run(capsys, "figure", "fig00b", "--format", "json", "--grid=-1:1:5", "--t-grid=-1:1:4")
    doc = json.loads(out)
    assert doc["columns"] == ["t", "r", "re", "im", "singular"] and len(doc["rows"]) == 20


@pytest.mark.parametrize("which", cli.FIGURES)
def test_figure_byte_identical(capsys, tmp_path, which):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run(capsys, "figure", which, "--out", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert not list(tmp_path.glob(".metaconf-*"))


# -- config ---------------------------------------------------------------------

def test_config_file_with_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"kernel": "meta1d-reg", "delta": 0.22, "gamma": 0.33, "t": 2.0, "r": 0.0}))
    _, out, _ = run(capsys, "eval", "--config", str(cfg))
    assert float(out) == pytest.approx(2 ** -0.44, rel=1e-15)
    _, out, _ = run(capsys, "eval", "--config", str(cfg), "--t", "1")
    assert float(out) == 1.0


def test_config_rejects_unknown_keys(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"kernal": "meta1d-reg"}))
    assert run(capsys, "eval", "--config", str(cfg))[0] == 2
    assert run(capsys, "eval", "--config", str(tmp_path / "missing.json"))[0] == 2


def test_stamp_round_trip():
    args = cli.build_parser().parse_args(["eval", "--kernel", "meta2d-reg", "--delta", "0.25", "--out", "x.csv"])
    cfg = cli.RunConfig.from_sources(args)
    d = json.loads(cfg.stamp())
    assert "out" not in d and d["kernel"] == "meta2d-reg" and d["seed"] == 0
    assert cli.RunConfig(**d, out="x.csv") == cfg


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("METACONF_SEED", "7")
    cfg = cli.RunConfig.from_sources(cli.build_parser().parse_args(["verify", "lie"]))
    assert cfg.seed == 7


# -- verify -----------------------------------------------------------------------

def test_verify_lie_schema(capsys):
    code, out, _ = run(capsys, "verify", "lie")
    doc = json.loads(out)
    assert code == 0 and doc["suite"] == "lie" and doc["summary"]["pass"] is True
    for c in doc["cases"]:
        assert set(c) >= {"id", "params", "observed", "expected", "tolerance", "pass"}


def test_verify_hardy_proposition_cases(capsys):
    _, out, _ = run(capsys, "verify", "hardy")
    cases = [c for c in json.loads(out)["cases"] if c["id"].startswith("proposition/nu=")]
    assert len(cases) >= 9 and all(c["pass"] for c in cases)


def test_verify_byte_identical(capsys, tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        assert run(capsys, "verify", "ward", "--out", str(tmp_path / name))[0] == 0
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "metaconf", "eval", "--kernel", "cga-reg", "--delta", "0.2",
                           "--gamma", "0.5", "--t", "1", "--r", "0"], capture_output=True, text=True)
    assert proc.returncode == 0 and float(proc.stdout) == 1.0

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from dispersion_kernel import __version__, divergence_demo, HalfSpaceGeometry
from dispersion_kernel import cli
from dispersion_kernel.cli import ConfigError, parse_config

SYSTEM = """\
[system]
omega_a = 1.0
d2_a = 1.0
gamma_a = 0.0
omega_b = 1.5
d2_b = 1.0
gamma_b = {gamma_b}
n0 = {n0}
"""

VACUUM_SWEEP = SYSTEM.format(gamma_b=0.0, n0=0.0) + """\
[task]
name = PairPotential

[sweep]
min = 0.01
max = 100
points = 50
spacing = log
units = wavelength
"""


def config(task_block, gamma_b=0.01, n0=1e-4, extra_system=""):
    return SYSTEM.format(gamma_b=gamma_b, n0=n0) + extra_system + task_block


def run_cli(args, env=None, cwd=None):
    e = dict(os.environ)
    e.update(env or {})
    return subprocess.run([sys.executable, "-m", "dispersion_kernel", *args], capture_output=True,
                          text=True, env=e, cwd=cwd)


def data_rows(text):
    return [ln for ln in text.splitlines()[2:] if ln]


def test_minimal_config():
    rc = parse_config(VACUUM_SWEEP)
    assert rc.task == "PairPotential"
    assert rc.sweep.points == 50
    assert rc.cfg.medium.n0 == 0.0
    assert rc.output_path is None and rc.output_format == "csv"


@pytest.mark.parametrize("text, key", [
    (VACUUM_SWEEP.replace("omega_b = 1.5", "omega_b = 1.5\nomega_c = 2"), "omega_c"),
    (VACUUM_SWEEP + "[plot]\ncolor = red\n", "plot"),
    (VACUUM_SWEEP.replace("n0 = 0.0\n", ""), "system.n0"),
    (VACUUM_SWEEP.replace("omega_b = 1.5", "omega_b = 1.0"), "degenerate"),
    (VACUUM_SWEEP.replace("min = 0.01", "min = 200"), "sweep.min"),
    (VACUUM_SWEEP.replace("points = 50", "points = 1"), "sweep.points"),
    (VACUUM_SWEEP.replace("points = 50", "points = 2.5"), "sweep.points"),
    (VACUUM_SWEEP.replace("spacing = log", "spacing = cubic"), "sweep.spacing"),
    (VACUUM_SWEEP.replace("d2_a = 1.0", "d2_a = one"), "system.d2_a"),
    (VACUUM_SWEEP.replace("name = PairPotential", "name = Nothing"), "task.name"),
    (VACUUM_SWEEP + "[quadrature]\nrel_tol = -1\n", "quadrature"),
    (VACUUM_SWEEP.replace("[sweep]", "[sweep]\nvariable = z0"), "sweep.variable"),
    ("not an ini file", "malformed"),
])
def test_config_errors(text, key):
    with pytest.raises(ConfigError, match=key):
        parse_config(text)


def test_degenerate_message_cites_exclusion():
    with pytest.raises(ConfigError) as exc:
        parse_config(VACUUM_SWEEP.replace("omega_b = 1.5", "omega_b = 1.0"))
    assert "system" in str(exc.value)


def test_pair_potential_csv_contract(tmp_path):
    out = tmp_path / "u.csv"
    rc = parse_config(VACUUM_SWEEP)
    summary = cli.execute(rc, str(out), threads=1)
    assert "50 points" in summary
    text = out.read_text()
    lines = text.splitlines()
    assert lines[0].startswith("#") and "natural" in lines[0]
    assert lines[1] == "R,U_total,U_resonant,U_nonresonant,err,flagged"
    rows = data_rows(text)
    assert len(rows) == 50
    R = np.array([float(r.split(",")[0]) for r in rows])
    lam = 2 * np.pi
    assert R[0] == pytest.approx(0.01 * lam, rel=1e-15)
    assert R[-1] == pytest.approx(100 * lam, rel=1e-15)
    for r in rows:
        fields = r.split(",")
        assert len(fields) == 6
        total, res, nonres = map(float, fields[1:4])
        assert total == res + nonres
        # 17 significant digits
        assert all(len(f.split("e")[0].replace("-", "").replace(".", "")) == 17
                   for f in fields[:5])


def test_json_summary_for_sweep(tmp_path):
    out = tmp_path / "u.json"
    rc = parse_config(VACUUM_SWEEP + "[output]\nformat = json-summary\n")
    cli.execute(rc, str(out), threads=2)
    doc = json.loads(out.read_text())
    assert doc["columns"][:5] == ["R", "U_total", "U_resonant", "U_nonresonant", "err"]
    assert len(doc["rows"]) == 50 and doc["version"] == __version__


def test_limit_check_json(tmp_path):
    out = tmp_path / "limits.json"
    text = config("[task]\nname = LimitCheck\n[output]\nformat = json-summary\n",
                  gamma_b=0.0, n0=0.0)
    summary = cli.execute(parse_config(text), str(out))
    assert "4/4" in summary
    doc = json.loads(out.read_text())
    assert doc["tolerance"] == 0.01 and doc["passed"] is True
    names = [r["regime"] for r in doc["regimes"]]
    assert len(names) == 4 and len(set(names)) == 4
    for r in doc["regimes"]:
        assert abs(r["ratio"] - 1) <= 0.01 and r["passed"]


def test_limit_check_csv(tmp_path):
    out = tmp_path / "limits.csv"
    cli.execute(parse_config(config("[task]\nname = LimitCheck\n")), str(out))
    lines = out.read_text().splitlines()
    assert lines[1] == "regime,R,U,U_asymptote,ratio,passed"
    assert len(lines) == 6


def test_divergence_demo_csv(tmp_path):
    text = config("""\
[task]
name = DivergenceDemo
z0 = 0.0628318530717958
[sweep]
min = 10
max = 80
points = 4
spacing = log
units = wavelength
""", extra_system="mean_free_path = 62.83185307179586\n")
    out = tmp_path / "div.csv"
    rc = parse_config(text)
    cli.execute(rc, str(out))
    rows = [list(map(float, r.split(","))) for r in data_rows(out.read_text())]
    assert len(rows) == 4
    cutoffs = [r[0] for r in rows]
    ref = divergence_demo(rc.cfg, HalfSpaceGeometry(rc.options["z0"]), cutoffs)
    for row, v, a, e in zip(rows, ref.vacuum, ref.absorbing, ref.vacuum_exact):
        assert row[1:4] == [v, a, e]
    growth = [b[1] / a[1] for a, b in zip(rows, rows[1:])]
    assert all(1.9 < g < 2.05 for g in growth)


@pytest.mark.parametrize("task, block, ncols", [
    ("PairForce", "envelope = medium\n", 4),
    ("PairForce", "envelope = exponential\nr0 = 0.5\n", 4),
    ("PlanarForce", "", 7),
    ("PlanarForce", "oracle = false\n", 6),
    ("HemisphereForce", "", 6),
])
def test_other_tasks(tmp_path, task, block, ncols):
    var = cli.SWEEP_VARIABLE[task]
    text = config(f"[task]\nname = {task}\n{block}[sweep]\nvariable = {var}\nmin = 0.01\n"
                  "max = 10\npoints = 5\nspacing = log\n")
    out = tmp_path / "o.csv"
    cli.execute(parse_config(text), str(out))
    lines = out.read_text().splitlines()
    assert lines[1].split(",")[0] == var
    rows = data_rows(out.read_text())
    assert len(rows) == 5 and all(len(r.split(",")) == ncols + 1 for r in rows)


def test_output_path_required():
    with pytest.raises(ConfigError, match="output.path"):
        cli.execute(parse_config(VACUUM_SWEEP))


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("DISPERSION_KERNEL_THREADS", "3")
    assert cli.thread_count() == 3
    monkeypatch.setenv("DISPERSION_KERNEL_THREADS", "0")
    assert cli.thread_count() >= 1
    monkeypatch.setenv("DISPERSION_KERNEL_THREADS", "-2")
    with pytest.raises(ConfigError):
        cli.thread_count()
    monkeypatch.setenv("DISPERSION_KERNEL_THREADS", "many")
    with pytest.raises(ConfigError):
        cli.thread_count()


def test_deterministic_across_threads(tmp_path):
    rc = parse_config(VACUUM_SWEEP)
    outputs = []
    for threads in (1, 4, 8, 4):
        out = tmp_path / f"u{threads}-{len(outputs)}.csv"
        cli.execute(rc, str(out), threads=threads)
        outputs.append(out.read_bytes())
    assert all(o == outputs[0] for o in outputs)


def test_atomic_write_leaves_no_temp(tmp_path):
    out = tmp_path / "a.csv"
    out.write_text("old")
    cli.write_atomic(str(out), "new\n")
    assert out.read_text() == "new\n"
    assert sorted(p.name for p in tmp_path.iterdir()) == ["a.csv"]
    with pytest.raises(cli.IoError):
        cli.write_atomic(str(tmp_path / "missing" / "b.csv"), "x")


def test_main_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.ini"
    good.write_text(VACUUM_SWEEP)
    bad = tmp_path / "bad.ini"
    bad.write_text(VACUUM_SWEEP.replace("omega_b", "omega_c"))
    out = tmp_path / "u.csv"
    assert cli.main(["run", "--config", str(good), "--output", str(out)]) == 0
    assert "PairPotential: 50 points" in capsys.readouterr().out
    assert cli.main(["run", "--config", str(bad), "--output", str(out)]) == 2
    assert "omega_c" in capsys.readouterr().err
    assert cli.main(["run", "--config", str(tmp_path / "nope.ini"), "--output", str(out)]) == 4
    assert cli.main(["run", "--config", str(good),
                     "--output", str(tmp_path / "no" / "dir" / "u.csv")]) == 4
    assert cli.main([]) == 2


def test_compute_error_exit_code(tmp_path, capsys):
    # a lossless medium has no mean free path for the exponential envelope
    text = config("[task]\nname = PairForce\nenvelope = exponential\nr0 = 1\n[sweep]\n"
                  "min = 1\nmax = 2\npoints = 2\n", gamma_b=0.0, n0=0.0)
    cfg_path = tmp_path / "c.ini"
    cfg_path.write_text(text)
    assert cli.main(["run", "--config", str(cfg_path), "--output", str(tmp_path / "x")]) == 3
    assert "ComputeError" in capsys.readouterr().err
    assert not (tmp_path / "x").exists()


def test_version_and_explain():
    r = run_cli(["--version"])
    assert r.returncode == 0 and __version__ in r.stdout
    for task in cli.TASKS:
        r = run_cli(["--explain", task])
        assert r.returncode == 0 and r.stdout.strip()
    assert run_cli(["--explain", "Nothing"]).returncode == 2


def test_subprocess_run_with_env_threads(tmp_path):
    cfg_path = tmp_path / "c.ini"
    cfg_path.write_text(VACUUM_SWEEP)
    texts = []
    for n in ("1", "8"):
        out = tmp_path / f"u{n}.csv"
        r = run_cli(["run", "--config", str(cfg_path), "--output", str(out)],
                    env={"DISPERSION_KERNEL_THREADS": n})
        assert r.returncode == 0, r.stderr
        texts.append(out.read_bytes())
    assert texts[0] == texts[1]


def test_inline_comments():
    rc = parse_config(VACUUM_SWEEP.replace("points = 50", "points = 50   ; fifty")
                      .replace("spacing = log", "spacing = log # geometric"))
    assert rc.sweep.points == 50 and rc.sweep.spacing == "log"

import csv
import io
import json
import subprocess
import sys
from decimal import Decimal

import pytest

from epdkit import __version__
from epdkit.cli import main
from epdkit.grid import GridFunction


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_zeros_csv(capsys):
    code, out, _ = run(capsys, "bessel", "zeros", "--nu", "0", "--count", "5", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 5
    assert float(rows[0]["re"]) == pytest.approx(2.404825557695773, abs=1e-13)


def test_json_report_is_deterministic(capsys):
    args = ("liouville", "chain", "--nu", "0.5", "--cutoff", "10", "--bits", "101", "--depth", "3")
    reports = []
    for _ in range(2):
        code, out, _ = run(capsys, *args)
        assert code == 0
        doc = json.loads(out)
        doc.pop("timing_s")
        reports.append(doc)
    assert reports[0] == reports[1]
    doc = reports[0]
    assert doc["version"] == __version__ and doc["command"] == "liouville chain"
    values = [Decimal(v) for v in doc["result"]["values"]]
    assert values[0] < values[1] < values[2]


def test_exit_codes(capsys):
    assert run(capsys, "foo", "bar")[0] == 1
    assert run(capsys, "bessel")[0] == 1
    assert run(capsys, "bessel", "zeros", "--nu", "-1", "--count", "3")[0] == 3
    assert run(capsys, "bessel", "zeros", "--nu", "0", "--count", "x")[0] == 2
    assert run(capsys, "snapshot", "check", "--g", "missing.grid", "--h", "missing.grid",
               "--r", "1", "--s", "2", "--alpha", "0")[0] == 2


def test_snapshot_pipeline(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(capsys, "grid", "make", "--n", "2", "--P", "16", "--kind", "random", "--kmax", "3",
               "--grid-out", "f.grid")[0] == 0
    assert run(capsys, "snapshot", "make", "--f", "f.grid", "--r", "1", "--s", "1.3",
               "--alpha", "0", "--g-out", "g.grid", "--h-out", "h.grid")[0] == 0
    code, out, _ = run(capsys, "snapshot", "reconstruct", "--g", "g.grid", "--h", "h.grid",
                       "--r", "1", "--s", "1.3", "--alpha", "0", "--floor", "auto",
                       "--f-out", "f2.grid", "--out", "report.json")
    assert code == 0 and out == ""
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["result"]["flagged"] == []
    assert set(doc["inputs"]) == {"g.grid", "h.grid"}
    f, f2 = GridFunction.load("f.grid"), GridFunction.load("f2.grid")
    assert abs(f.values - f2.values).max() <= 1e-10


def test_pole_in_propagate(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    run(capsys, "grid", "make", "--n", "3", "--P", "8", "--kind", "random", "--kmax", "2",
        "--grid-out", "f.grid")
    assert run(capsys, "epd", "propagate", "--in", "f.grid", "--t", "1", "--alpha", "-1.5")[0] == 3


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"liouville chain": {"bits": "11", "nu": "0.5"}}))
    code, out, _ = run(capsys, "--config", str(cfg), "liouville", "chain", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["theta_m"] for r in rows] == ["0.6", "0.600001"]
    cfg.write_text("[1, 2]")
    assert run(capsys, "--config", str(cfg), "liouville", "chain")[0] == 2


def test_plot_output(tmp_path, capsys):
    pytest.importorskip("matplotlib")
    figs = tmp_path / "figs"
    code, out, _ = run(capsys, "--plot", str(figs), "snapshot", "scan", "--r", "1", "--s", "2",
                       "--nu", "0.5", "--zmax", "50")
    assert code == 0
    paths = json.loads(out)["figures"]
    assert paths and all((tmp_path / "figs").joinpath(p.split("/")[-1]).exists() for p in paths)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "epdkit", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and __version__ in proc.stdout

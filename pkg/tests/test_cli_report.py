import csv
import json
import math

import pytest

from ballcover.cli_report import main

from conftest import SQUARE_TEXT


@pytest.fixture()
def disk_spec(tmp_path):
    p = tmp_path / "disk.txt"
    p.write_text("disk 0 0 1\n")
    return p


@pytest.fixture()
def square_spec(tmp_path):
    p = tmp_path / "square.txt"
    p.write_text(SQUARE_TEXT + "\n")
    return p


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


class TestVerify:
    def test_disk_passes(self, tmp_path, disk_spec, capsys):
        out = tmp_path / "out"
        code = main(["--grid", "128", "--out", str(out), "verify", str(disk_spec)])
        assert code == 0
        rows = read_csv(out / "verify.csv")
        assert rows[0][0] == "shape_id"
        assert len(rows) == 3  # header + two resolutions
        assert rows[1][0] == "disk" and rows[1][9] == "pass"
        assert rows[2][9] == "pass"
        # runtime column holds the placeholder; timings live in the sidecar
        assert rows[1][10] == "-"
        timings = read_csv(out / "verify_timings.csv")
        assert float(timings[1][2]) > 0.0
        payload = json.loads((out / "verify.json").read_text())
        assert payload["reports"][0]["verdict"] == "pass"
        assert payload["reports"][0]["ratio"] == pytest.approx(1.0, abs=0.1)
        assert (out / "verify.svg").read_text().startswith("<svg")

    def test_square_not_applicable_exits_zero(self, tmp_path, square_spec):
        out = tmp_path / "out"
        code = main(["--grid", "128", "--out", str(out), "verify", str(square_spec)])
        assert code == 0
        rows = read_csv(out / "verify.csv")
        assert rows[1][9] == "not-applicable"

    def test_outputs_deterministic(self, tmp_path, disk_spec):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert main(["--grid", "96", "--out", str(out), "verify", str(disk_spec)]) == 0
            outs.append(out)
        for fname in ("verify.csv", "verify.json", "verify.svg"):
            assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()

    def test_missing_spec_file_exit_2(self, tmp_path):
        assert main(["--out", str(tmp_path), "verify", str(tmp_path / "nope.txt")]) == 2

    def test_malformed_spec_exit_2(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("disk 0 0\n")
        assert main(["--out", str(tmp_path / "o"), "verify", str(bad)]) == 2

    def test_unbounded_spec_exit_2(self, tmp_path):
        bad = tmp_path / "half.txt"
        bad.write_text("halfplane 1 0 1\n")
        assert main(["--out", str(tmp_path / "o"), "verify", str(bad)]) == 2

    def test_bad_flags_exit_2(self, tmp_path, disk_spec):
        assert main(["--grid", "8", "--out", str(tmp_path / "o"),
                     "verify", str(disk_spec)]) == 2
        assert main(["--tolerance-c", "0.5", "--out", str(tmp_path / "o"),
                     "verify", str(disk_spec)]) == 2
        assert main(["--spacing", "-1", "--out", str(tmp_path / "o"),
                     "verify", str(disk_spec)]) == 2


class TestLemmaSweep:
    def test_sweep_clean(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["--seed", "5", "--out", str(out), "lemma-sweep",
                     "--trials", "500"])
        assert code == 0
        rows = read_csv(out / "lemma_sweep.csv")
        assert rows[0] == ["r", "r0", "alpha", "beta", "angle_CAB",
                           "angle_EOD", "identity_residual", "pi3_slack"]
        assert len(rows) == 501
        # every recorded angle stays under pi/3 with positive slack
        for row in rows[1:]:
            assert float(row[5]) < math.pi / 3
            assert float(row[7]) > 0.0

    def test_sweep_deterministic(self, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert main(["--seed", "9", "--out", str(out), "lemma-sweep",
                         "--trials", "200"]) == 0
            outs.append(out)
        assert (outs[0] / "lemma_sweep.csv").read_bytes() == \
            (outs[1] / "lemma_sweep.csv").read_bytes()

    def test_zero_trials_exit_2(self, tmp_path):
        assert main(["--out", str(tmp_path), "lemma-sweep", "--trials", "0"]) == 2


class TestTrace:
    def test_requires_rho(self, tmp_path, square_spec):
        assert main(["--out", str(tmp_path / "o"), "trace", str(square_spec)]) == 2

    def test_square_trace(self, tmp_path, square_spec, capsys):
        out = tmp_path / "out"
        code = main(["--grid", "192", "--dir-samples", "256", "--out", str(out),
                     "trace", str(square_spec), "--rho", "0.25"])
        assert code == 0
        payload = json.loads((out / "trace.json").read_text())
        assert not payload["covered"]
        assert payload["r0"] <= payload["r1"] + 4 * payload["h"]
        assert sum(payload["triangle_angles"]) == pytest.approx(math.pi, abs=1e-9)
        assert (out / "trace.svg").exists()

    def test_disk_covered_trace(self, tmp_path, disk_spec):
        out = tmp_path / "out"
        code = main(["--grid", "128", "--out", str(out),
                     "trace", str(disk_spec), "--rho", "0.9"])
        assert code == 0
        payload = json.loads((out / "trace.json").read_text())
        assert payload["covered"]


class TestCorpusSmall:
    def test_runs_and_exits_zero(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["--grid", "96", "--out", str(out), "corpus"])
        assert code == 0
        rows = read_csv(out / "corpus.csv")
        ids = {r[0] for r in rows[1:]}
        assert {"disk", "square", "stadium", "annulus", "gap-00"} <= ids
        summary = json.loads((out / "corpus_summary.json").read_text())
        assert summary["anomalies"] == []
        assert summary["entries"]["square"]["verdicts"] == \
            ["not-applicable", "not-applicable"]

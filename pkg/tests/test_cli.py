import io
import json
import math
from pathlib import Path

import numpy as np
import pytest

from gaussact.capacity import coherent_information_purified
from gaussact.cli import main
from gaussact.experiments import InputParams, SweepSpec, OptimizerSettings, combined_channel, gamma_in, nbar, run_sweep
from gaussact.records import CSV_FIELDS, ConfigError, from_csv, from_json, parse_config, record_row, to_csv, to_json

DATA = Path(__file__).parent / "data"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def parse_kv(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines())


class TestValidate:
    def test_ssy(self):
        code, text = run("validate", "--channel", "ssy-ppt")
        assert code == 0
        assert "CP: true" in text and "PPT: true" in text

    def test_lossy(self):
        code, text = run("validate", "--channel", "lossy", "--T", "0.51")
        assert code == 0
        assert "CP: true" in text and "PPT: false" in text

    def test_thermal_reports_eb(self):
        code, text = run("validate", "--channel", "thermal", "--T", "0.51", "--N", "0.01")
        assert code == 0 and "EB: false" in text

    def test_custom_invalid(self):
        code, text = run("validate", "--channel", "custom", "--file", str(DATA / "bad_amplifier.json"))
        assert code == 1 and "CP: false" in text

    def test_missing_T(self):
        assert run("validate", "--channel", "lossy")[0] == 2

    def test_unknown_flag(self):
        assert run("validate", "--channel", "lossy", "--bogus")[0] == 2

    def test_missing_file(self, tmp_path):
        assert run("validate", "--channel", "custom", "--file", str(tmp_path / "nope.json"))[0] == 3

    def test_domain_error(self):
        assert run("validate", "--channel", "lossy", "--T", "1.5")[0] == 1


class TestEval:
    def test_lossy_point(self):
        code, text = run("eval", "--T", "0.51", "--nbar", "20")
        kv = parse_kv(text)
        assert code == 0 and kv["capacity_kind"] == "exact"
        assert float(kv["gap_bits"]) == pytest.approx(float(kv["Ic_bits"]) - float(kv["capacity_bits"]), abs=1e-15)
        p = InputParams(float(kv["x"]), float(kv["y"]))
        oracle = coherent_information_purified(combined_channel("lossy", 0.51), gamma_in(p))
        assert float(kv["Ic_bits"]) == pytest.approx(oracle, abs=1e-7)
        assert nbar(p) == pytest.approx(20.0, abs=1e-9)

    def test_thermal_point(self):
        kv = parse_kv(run("eval", "--T", "0.51", "--N", "0.01", "--nbar", "5")[1])
        assert kv["channel"] == "thermal" and kv["capacity_kind"] == "upper_bound"

    def test_explicit_vacuum(self):
        code, text = run("eval", "--T", "0.51", "--x", "1", "--y", "1")
        kv = parse_kv(text)
        assert code == 0 and float(kv["nbar_in"]) == 0.0
        assert float(kv["Ic_bits"]) == pytest.approx(0.0, abs=1e-12)

    def test_needs_input(self):
        assert run("eval", "--T", "0.51")[0] == 2
        assert run("eval", "--T", "0.51", "--nbar", "1", "--x", "2")[0] == 2

    def test_bound_domain(self):
        assert run("eval", "--T", "0.4", "--N", "0.1", "--nbar", "1")[0] == 1


class TestSweepCommand:
    def test_golden_file(self, tmp_path):
        out = tmp_path / "s.csv"
        code, _ = run("sweep", "--config", str(DATA / "small_sweep.cfg"), "--output", str(out))
        assert code == 0
        got, want = from_csv(out.read_text()), from_csv((DATA / "small_sweep_golden.csv").read_text())
        assert len(got) == len(want) == 9
        for a, b in zip(got, want):
            ra, rb = record_row(a), record_row(b)
            assert ra["capacity_kind"] == rb["capacity_kind"]
            for k in ("T", "Nbar_env", "nbar_in", "Ic_bits", "capacity_bits", "gap_bits"):
                assert ra[k] == pytest.approx(rb[k], abs=1e-9)
            # oracle: golden numbers reproduced by the purification route
            ch = combined_channel("lossy", b.T)
            assert rb["Ic_bits"] == pytest.approx(coherent_information_purified(ch, gamma_in(b.params)), abs=1e-7)

    def test_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert run("sweep", "--config", str(DATA / "small_sweep.cfg"), "--output", str(path))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_header(self):
        code, text = run("sweep", "--T", "0.5", "--nbar", "1")
        assert code == 0
        assert text.splitlines()[0] == "T,Nbar_env,nbar_in,x,y,Ic_bits,capacity_bits,capacity_kind,gap_bits"

    def test_stamp(self):
        text = run("sweep", "--T", "0.5", "--nbar", "1", "--stamp")[1]
        assert text.startswith("# gaussact ")
        assert len(from_csv(text)) == 1

    def test_flags_override_config(self):
        text = run("sweep", "--config", str(DATA / "small_sweep.cfg"), "--T", "0.52", "--nbar", "2")[1]
        (rec,) = from_csv(text)
        assert rec.T == 0.52

    def test_json(self):
        code, text = run("sweep", "--T", "0.5,0.51", "--nbar", "2", "--format", "json")
        rows = json.loads(text)
        assert code == 0 and len(rows) == 2
        assert set(rows[0]) == set(CSV_FIELDS)

    def test_zero_temperature_matches_lossy(self):
        lossy = from_csv(run("sweep", "--T", "0.5,0.52", "--nbar", "1,6")[1])
        thermal = from_csv(run("sweep", "--channel", "thermal", "--N", "0", "--T", "0.5,0.52", "--nbar", "1,6")[1])
        for a, b in zip(lossy, thermal):
            assert a.gap == pytest.approx(b.gap, abs=1e-9)

    @pytest.mark.parametrize(
        "body",
        ["channel = lossy\nbogus = 1\n", "T = 0.5, abc\n", "nbar = \n", "just text\n", "T = 0.5\nT = 0.6\n", "channel = laser\n"],
    )
    def test_malformed_config(self, tmp_path, body):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(body)
        out = tmp_path / "out.csv"
        code, _ = run("sweep", "--config", str(cfg), "--output", str(out))
        assert code == 2
        assert not out.exists() and not (tmp_path / "out.csv.part").exists()

    def test_missing_config(self, tmp_path):
        assert run("sweep", "--config", str(tmp_path / "none.cfg"))[0] == 3

    def test_unwritable_output(self, tmp_path):
        assert run("sweep", "--T", "0.5", "--nbar", "1", "--output", str(tmp_path / "no" / "dir.csv"))[0] == 3


class TestThresholdCommand:
    def test_window(self):
        code, text = run("threshold", "--nbar", "10")
        kv = parse_kv(text)
        assert code == 0
        assert 0.505 <= float(kv["T_star"]) <= 0.53
        assert float(kv["gap_at_T_star"]) > 0 >= float(kv["gap_at_T_upper"])

    def test_weak_input(self):
        code, text = run("threshold", "--nbar", "1e-6")
        assert code == 1 and "no activation" in text


class TestDilateCommand:
    def test_balanced_beam_splitter(self):
        code, text = run("dilate", "--channel", "lossy", "--T", "0.5")
        assert code == 0
        rows = text.split("S:\n")[1].split("env_state:")[0].strip().splitlines()
        s = np.array([[float(v) for v in r.split()] for r in rows])
        h = np.sqrt(0.5)
        np.testing.assert_allclose(s, [[h, 0, h, 0], [0, h, 0, h], [-h, 0, h, 0], [0, -h, 0, h]], atol=1e-12)

    def test_ssy_residuals(self):
        code, text = run("dilate", "--channel", "ssy-ppt")
        kv = {k: v for k, v in (ln.split(": ", 1) for ln in text.splitlines() if ln.endswith(tuple("0123456789")) and ": " in ln)}
        assert code == 0
        assert float(kv["symplectic_residual"]) < 1e-9
        assert float(kv["reconstruction_residual"]) < 1e-9

    def test_invalid(self):
        code, _ = run("dilate", "--channel", "custom", "--file", str(DATA / "bad_amplifier.json"))
        assert code == 1


class TestRecords:
    def test_csv_round_trip(self):
        spec = SweepSpec(T_grid=(0.3, 0.51, 1.0), nbar_grid=(0.7, 3.0), N=0.01, kind="thermal",
                         settings=OptimizerSettings(16, 1e-6))
        recs = run_sweep(spec, threads=1)
        assert any(r.error for r in recs)
        back = from_csv(to_csv(recs))
        for a, b in zip(recs, back):
            ra, rb = record_row(a), record_row(b)
            for k in CSV_FIELDS:
                assert ra[k] == rb[k] or (isinstance(ra[k], float) and math.isnan(ra[k]) and math.isnan(rb[k]))

    def test_json_round_trip(self):
        recs = run_sweep(SweepSpec(T_grid=(0.5,), nbar_grid=(2.0,), settings=OptimizerSettings(16, 1e-6)))
        assert [record_row(r) for r in from_json(to_json(recs))] == [record_row(r) for r in recs]

    def test_config_comments(self):
        assert parse_config("# c\nT = 0.5  # tail\n\n", ("T",)) == {"T": "0.5"}

    def test_config_unknown(self):
        with pytest.raises(ConfigError):
            parse_config("x = 1", ("T",))

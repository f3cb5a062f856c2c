import json

import numpy as np
import pytest

from sartex import Channel, Raster, Stage, read_raster, write_raster
from sartex.cli import run


def dn_chip(tmp_path, name="chip.sarr", value=100.0):
    r = Raster(np.full((8, 8), value), Stage.DN, Channel.VV, "2021-07-01")
    path = tmp_path / name
    write_raster(r, path)
    return path


class TestUsage:
    def test_help_exits_zero(self, capsys):
        assert run(["--help"]) == 0
        assert "calibrate" in capsys.readouterr().out

    def test_subcommand_help_exits_zero(self, capsys):
        assert run(["train", "--help"]) == 0

    def test_unknown_subcommand_exits_one(self, capsys):
        assert run(["transmogrify"]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_missing_required_flag_exits_one(self, capsys):
        assert run(["train", "--kind", "forest"]) == 1

    def test_unknown_flag_exits_one(self):
        assert run(["synth", "--n", "2", "--out-dir", "x", "--frobnicate"]) == 1

    def test_no_subcommand_exits_one(self):
        assert run([]) == 1


class TestCalibrate:
    def test_dn_to_gamma0(self, tmp_path, capsys):
        src = dn_chip(tmp_path)
        dst = tmp_path / "gamma.sarr"
        rc = run(["calibrate", "--k", "-40", "--incidence", "0", str(src), str(dst)])
        assert rc == 0
        out = read_raster(dst)
        assert out.stage is Stage.GAMMA0_DB
        assert np.all(out.pixels == 0.0)  # 10*log10(100^2) - 40, no angle correction

    def test_wrong_stage_exits_two(self, tmp_path, capsys):
        src = dn_chip(tmp_path)
        dst = tmp_path / "gamma.sarr"
        run(["calibrate", "--k", "-40", "--incidence", "0", str(src), str(dst)])
        rc = run(["calibrate", "--k", "-40", "--incidence", "0", str(dst), str(tmp_path / "x.sarr")])
        assert rc == 2
        assert "calib:" in capsys.readouterr().err

    def test_missing_input_exits_two(self, tmp_path, capsys):
        rc = run(["calibrate", "--k", "-40", "--incidence", "0",
                  str(tmp_path / "absent.sarr"), str(tmp_path / "out.sarr")])
        assert rc == 2
        assert "raster:" in capsys.readouterr().err


class TestFeatures:
    def test_row_on_stdout(self, tmp_path, capsys):
        vv = Raster(np.full((8, 8), -10.0), Stage.GAMMA0_DB, Channel.VV, "2021-07-01")
        vh = Raster(np.full((8, 8), -16.0), Stage.GAMMA0_DB, Channel.VH, "2021-07-01")
        write_raster(vv, tmp_path / "vv.sarr")
        write_raster(vh, tmp_path / "vh.sarr")
        rc = run(["features", "--vv", str(tmp_path / "vv.sarr"), "--vh", str(tmp_path / "vh.sarr"),
                  "--levels", "32", "--range=-30:5", "--distance", "1", "--angles", "all"])
        assert rc == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("timestamp,vv_contrast,")
        cells = lines[1].split(",")
        assert cells[0] == "2021-07-01"
        # constant chips: contrast 0, homogeneity/asm/energy/correlation 1
        assert [float(c) for c in cells[1:7]] == [0.0, 0.0, 1.0, 1.0, 1.0, 1.0]

    def test_dn_stage_rejected_without_override(self, tmp_path, capsys):
        src = dn_chip(tmp_path, "vv.sarr")
        vh = Raster(np.full((8, 8), 50.0), Stage.DN, Channel.VH, "2021-07-01")
        write_raster(vh, tmp_path / "vh.sarr")
        args = ["features", "--vv", str(src), "--vh", str(tmp_path / "vh.sarr")]
        assert run(args) == 2
        assert "texture:" in capsys.readouterr().err
        assert run(args + ["--any-stage"]) == 0


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """synth -> train -> predict artifacts shared by the e2e tests."""
    root = tmp_path_factory.mktemp("pipeline")
    data = root / "data"
    assert run(["synth", "--n", "12", "--out-dir", str(data), "--seed", "7"]) == 0
    model = root / "model.json"
    assert run(["train", "--kind", "forest", "--trees", "25",
                "--data", str(data / "features.csv"),
                "--labels", str(data / "labels.csv"),
                "--seed", "1", "--out", str(model)]) == 0
    return root, data, model


class TestPipeline:
    def test_synth_outputs(self, pipeline):
        _, data, _ = pipeline
        chips = sorted(data.glob("*_V?.sarr"))
        assert len(chips) == 48  # 24 samples, two channels each
        assert (data / "features.csv").exists()
        assert (data / "labels.csv").exists()

    def test_predict_reports_accuracy(self, pipeline, capsys):
        root, data, model = pipeline
        out = root / "predictions.csv"
        rc = run(["predict", "--model", str(model), "--data", str(data / "features.csv"),
                  "--out", str(out)])
        assert rc == 0
        printed = capsys.readouterr().out
        assert printed.startswith("accuracy ")
        assert float(printed.split()[1]) >= 0.9
        lines = out.read_text().splitlines()
        assert lines[0] == "timestamp,label,score"
        assert len(lines) == 25

    def test_predict_without_labels_prints_rows_only(self, pipeline, tmp_path, capsys):
        root, data, model = pipeline
        from sartex import read_features_csv, write_features_csv
        X, stamps, _ = read_features_csv(data / "features.csv")
        unlabeled = tmp_path / "unlabeled.csv"
        write_features_csv(unlabeled, X, stamps)
        rc = run(["predict", "--model", str(model), "--data", str(unlabeled)])
        assert rc == 0
        out = capsys.readouterr().out
        assert out.startswith("timestamp,label,score")
        assert "accuracy" not in out

    def test_timeseries_over_synth_dir(self, pipeline):
        root, data, model = pipeline
        series = root / "series.csv"
        rc = run(["timeseries", "--dir", str(data), "--model", str(model), "--out", str(series)])
        assert rc == 0
        lines = series.read_text().splitlines()
        assert len(lines) == 25
        assert lines[0].endswith(",label,score")

    def test_rerun_is_byte_identical(self, pipeline, tmp_path):
        root, data, model = pipeline
        data2 = tmp_path / "data2"
        assert run(["synth", "--n", "12", "--out-dir", str(data2), "--seed", "7"]) == 0
        assert (data / "features.csv").read_bytes() == (data2 / "features.csv").read_bytes()
        assert (data / "labels.csv").read_bytes() == (data2 / "labels.csv").read_bytes()
        model2 = tmp_path / "model2.json"
        assert run(["train", "--kind", "forest", "--trees", "25",
                    "--data", str(data2 / "features.csv"),
                    "--labels", str(data2 / "labels.csv"),
                    "--seed", "1", "--out", str(model2)]) == 0
        assert model.read_bytes() == model2.read_bytes()

    def test_train_single_class_exits_two(self, pipeline, tmp_path, capsys):
        root, data, model = pipeline
        from sartex import read_features_csv, write_features_csv
        X, stamps, labels = read_features_csv(data / "features.csv")
        keep = labels == 0
        bad = tmp_path / "single.csv"
        write_features_csv(bad, X[keep], [s for s, k in zip(stamps, keep) if k], labels[keep])
        rc = run(["train", "--kind", "forest", "--data", str(bad), "--out", str(tmp_path / "m.json")])
        assert rc == 2
        assert "forest:" in capsys.readouterr().err

    def test_predict_with_corrupt_model_exits_two(self, pipeline, tmp_path, capsys):
        root, data, model = pipeline
        bad = tmp_path / "bad.json"
        doc = json.loads(model.read_text())
        doc["kind"] = "mystery"
        bad.write_text(json.dumps(doc))
        rc = run(["predict", "--model", str(bad), "--data", str(data / "features.csv")])
        assert rc == 2
        assert "model_io:" in capsys.readouterr().err

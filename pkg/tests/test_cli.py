"""End-to-end runs of the command-line interface via main(argv)."""

import json

import numpy as np
import pytest

import cknntda as ck
from cknntda.cli import main


def read_meta(out):
    with open(f"{out}.meta.json") as fh:
        return json.load(fh)


class TestDatagenCommand:
    def test_points_csv_and_meta(self, tmp_path, capsys):
        out = tmp_path / "eight.csv"
        assert main(["datagen", "figure-eight", "--out", str(out), "--seed", "4"]) == 0
        pts = ck.read_points_csv(out)
        assert np.array_equal(pts.points, ck.gen_figure_eight(seed=4).points)
        meta = read_meta(out)
        assert meta["subcommand"] == "datagen"
        assert meta["arguments"]["seed"] == 4
        assert meta["version"] == ck.__version__
        assert not (tmp_path / "eight.csv.labels.csv").exists()
        assert "N=120" in capsys.readouterr().out

    def test_labels_sidecar_for_labeled_sets(self, tmp_path):
        out = tmp_path / "boxes.csv"
        assert main(["datagen", "three-boxes", "--out", str(out)]) == 0
        labels = ck.read_labels_csv(f"{out}.labels.csv")
        assert np.array_equal(labels, ck.gen_three_boxes(seed=0).labels)

    def test_size_override(self, tmp_path):
        out = tmp_path / "circle.csv"
        assert main(["datagen", "circle", "--out", str(out), "--n", "33"]) == 0
        assert ck.read_points_csv(out).points.shape == (33, 2)

    def test_pattern_writes_pgm(self, tmp_path):
        out = tmp_path / "stripes.pgm"
        assert main(["datagen", "pattern-stripes", "--out", str(out)]) == 0
        img = ck.read_pgm(out)
        expected = ck.gen_pattern_image("stripes")
        assert img.shape == expected.shape == (9, 13)
        assert np.array_equal(img, np.rint(expected * 255.0) / 255.0)
        graded = tmp_path / "g.pgm"
        assert main(["datagen", "pattern-stripes", "--out", str(graded), "--gradient"]) == 0
        assert not np.array_equal(ck.read_pgm(graded), img)

    def test_unknown_name_exits_two(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["datagen", "moebius", "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2


class TestPersistCommand:
    def test_barcode_and_stable_json(self, tmp_path):
        pts_path = tmp_path / "pts.csv"
        main(["datagen", "figure-eight", "--out", str(pts_path)])
        out = tmp_path / "bars.csv"
        assert main(["persist", "--points", str(pts_path), "--out", str(out)]) == 0
        dims, births, deaths = ck.read_barcode_csv(out)
        assert set(dims.tolist()) <= {0, 1}
        finite = np.isfinite(deaths)
        assert np.all(births[finite] <= deaths[finite])
        with open(f"{out}.stable.json") as fh:
            stable = json.load(fh)
        assert stable["betti"] == [1, 2]
        assert 0.0 < stable["fraction"] <= 1.0
        assert stable["scale_kind"] == "delta"

    def test_beta_method_requires_beta(self, tmp_path):
        pts_path = tmp_path / "pts.csv"
        main(["datagen", "circle", "--out", str(pts_path), "--n", "30"])
        out = tmp_path / "bars.csv"
        rc = main(["persist", "--points", str(pts_path), "--out", str(out), "--method", "beta"])
        assert rc == 2
        rc = main(
            [
                "persist",
                "--points",
                str(pts_path),
                "--out",
                str(out),
                "--method",
                "beta",
                "--beta",
                "-1.0",
                "--m",
                "1",
            ]
        )
        assert rc == 0

    def test_simplex_cap_exits_three(self, tmp_path):
        pts_path = tmp_path / "pts.csv"
        main(["datagen", "circle", "--out", str(pts_path), "--n", "350"])
        out = tmp_path / "bars.csv"
        rc = main(["persist", "--points", str(pts_path), "--out", str(out)])
        assert rc == 3
        assert not out.exists()


class TestClusterCommand:
    def test_filtration_method_writes_labels(self, tmp_path, capsys):
        pts_path = tmp_path / "pts.csv"
        main(["datagen", "three-boxes", "--out", str(pts_path)])
        out = tmp_path / "labels.csv"
        rc = main(
            ["cluster", "--points", str(pts_path), "--out", str(out), "--clusters", "3"]
        )
        assert rc == 0
        labels = ck.read_labels_csv(out)
        assert labels.shape == (325,)
        assert "components=" in capsys.readouterr().out

    def test_knn_graph_method(self, tmp_path):
        pts_path = tmp_path / "pts.csv"
        main(["datagen", "circle", "--out", str(pts_path), "--n", "40"])
        out = tmp_path / "labels.csv"
        for method in ("knn", "knn-and"):
            assert (
                main(
                    [
                        "cluster",
                        "--points",
                        str(pts_path),
                        "--out",
                        str(out),
                        "--method",
                        method,
                        "--k",
                        "3",
                    ]
                )
                == 0
            )
            assert ck.read_labels_csv(out).shape == (40,)

    def test_clusters_flag_validation(self, tmp_path):
        pts_path = tmp_path / "pts.csv"
        main(["datagen", "circle", "--out", str(pts_path), "--n", "30"])
        out = tmp_path / "labels.csv"
        assert main(["cluster", "--points", str(pts_path), "--out", str(out)]) == 2
        rc = main(
            [
                "cluster",
                "--points",
                str(pts_path),
                "--out",
                str(out),
                "--method",
                "knn",
                "--clusters",
                "2",
            ]
        )
        assert rc == 2


class TestSpectrumCommand:
    def make_points(self, tmp_path, n=60):
        pts_path = tmp_path / "pts.csv"
        main(["datagen", "circle", "--out", str(pts_path), "--n", str(n)])
        return pts_path

    def test_eigenvalue_csv(self, tmp_path):
        pts_path = self.make_points(tmp_path)
        out = tmp_path / "spec.csv"
        rc = main(
            [
                "spectrum",
                "--points",
                str(pts_path),
                "--out",
                str(out),
                "--delta",
                "0.8",
                "--num",
                "4",
            ]
        )
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "index,eigenvalue"
        vals = np.array([float(line.split(",")[1]) for line in lines[1:]])
        assert vals.shape == (4,)
        assert np.all(np.diff(vals) >= -1e-12)
        assert vals[0] == pytest.approx(0.0, abs=1e-8)

    def test_auto_delta_and_meta(self, tmp_path):
        pts_path = self.make_points(tmp_path)
        out = tmp_path / "spec.csv"
        rc = main(
            [
                "spectrum",
                "--points",
                str(pts_path),
                "--out",
                str(out),
                "--delta",
                "auto-spectral",
            ]
        )
        assert rc == 0
        assert read_meta(out)["arguments"]["delta"] == "auto-spectral"

    def test_custom_mu(self, tmp_path):
        pts_path = self.make_points(tmp_path, n=30)
        mu_path = tmp_path / "mu.csv"
        np.savetxt(mu_path, np.full(30, 2.0))
        out = tmp_path / "spec.csv"
        argv = [
            "spectrum",
            "--points",
            str(pts_path),
            "--out",
            str(out),
            "--delta",
            "0.9",
            "--mu",
            "custom-csv",
        ]
        assert main(argv) == 2  # missing --mu-csv
        assert main(argv + ["--mu-csv", str(mu_path)]) == 0

    def test_delta_validation(self, tmp_path):
        pts_path = self.make_points(tmp_path, n=20)
        out = tmp_path / "spec.csv"
        base = ["spectrum", "--points", str(pts_path), "--out", str(out)]
        assert main(base) == 2
        assert main(base + ["--delta", "auto-sideways"]) == 2


class TestSweepCommand:
    def test_micro_sweep_outputs(self, tmp_path):
        out = tmp_path / "sweep.csv"
        rc = main(
            [
                "sweep",
                "--out",
                str(out),
                "--mode",
                "pointwise",
                "--n-list",
                "40,80",
                "--seeds",
                "1",
            ]
        )
        assert rc == 0
        records = ck.read_sweep_csv(out)
        assert {r[0] for r in records} == {40, 80}
        assert all(r[3] == "pointwise" for r in records)
        with open(f"{out}.slopes.json") as fh:
            slopes = json.load(fh)
        assert set(slopes) == {"pointwise"}
        assert slopes["pointwise"]["theory"] == pytest.approx(-1.0 / 7.0)
        assert len(slopes["pointwise"]["best_delta"]) == 2

    def test_empty_n_list_rejected(self, tmp_path):
        assert main(["sweep", "--out", str(tmp_path / "s.csv"), "--n-list", ","]) == 2
        assert main(["sweep", "--out", str(tmp_path / "s.csv"), "--seeds", "0"]) == 2


class TestTopLevel:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert ck.__version__ in capsys.readouterr().out

    def test_missing_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_missing_points_file_is_validation_error(self, tmp_path):
        rc = main(
            [
                "persist",
                "--points",
                str(tmp_path / "nope.csv"),
                "--out",
                str(tmp_path / "o.csv"),
            ]
        )
        assert rc == 2

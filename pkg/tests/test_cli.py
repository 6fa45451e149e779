"""
Tests for the gcn-lab command line
"""

import json

import pytest

from gcn_lab import __version__
from gcn_lab.cli import build_parser, main
from gcn_lab.training import RunReport


class TestParser:
    def test_version(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            build_parser().parse_args(["--version"])
        assert excinfo.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == 2
        assert "usage: gcn-lab" in capsys.readouterr().err

    def test_missing_command(self):
        assert main([]) == 2

    def test_preset_and_config_exclusive(self, toy_dir, tmp_path):
        argv = ["train", "--data", str(toy_dir), "--preset", "GCN", "--config", "x.json"]
        assert main(argv) == 2

    def test_jobs_must_be_positive(self, toy_dir, tmp_path):
        argv = ["replicate", "--data", str(toy_dir), "--preset", "GCN", "--seeds", "2",
                "--out", str(tmp_path), "--jobs", "0"]
        assert main(argv) == 2


class TestValidate:
    def test_prints_statistics(self, toy_dir, capsys):
        assert main(["validate", "--data", str(toy_dir)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("dataset toy\n")
        assert "nodes=5 edges=5 classes=2 features=5" in out
        assert "no reference statistics for this dataset" in out

    def test_missing_directory(self, tmp_path):
        assert main(["validate", "--data", str(tmp_path / "absent")]) == 1

    def test_malformed_dataset(self, toy_dir, capsys):
        (toy_dir / "labels.txt").write_text("0 0\n")
        assert main(["validate", "--data", str(toy_dir)]) == 1


class TestClusteringCommand:
    def test_writes_one_line_per_node(self, toy_dir, tmp_path):
        out = tmp_path / "cc" / "toy.txt"
        assert main(["--quiet", "cc", "--data", str(toy_dir), "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "0 1.0"
        assert lines[3:] == ["3 0.0", "4 0.0"]
        node, value = lines[2].split()
        assert node == "2" and float(value) == pytest.approx(1.0 / 3.0)


class TestTrain:
    def test_preset_report_file(self, toy_dir, tmp_path):
        out = tmp_path / "gcn.report"
        argv = ["train", "--data", str(toy_dir), "--preset", "gcn", "--seed", "0",
                "--out", str(out)]
        assert main(argv) == 0
        report = RunReport.read(out)
        assert (report.preset, report.dataset, report.seed) == ("GCN", "toy", 0)
        assert all(record.seconds is None for record in report.history)

    def test_report_to_stdout_is_deterministic(self, toy_dir, capsys):
        argv = ["--quiet", "train", "--data", str(toy_dir), "--preset", "GCN", "--seed", "4"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first
        assert json.loads(first)["seed"] == 4

    def test_config_file_with_seed_override(self, toy_dir, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({
            "model": {"layers": [{"out_dim": 8, "activation": "elu"},
                                 {"in_dim": 8, "activation": "none"}]},
            "train": {"max_epochs": 20, "seed": 1},
        }))
        out = tmp_path / "run.report"
        argv = ["train", "--data", str(toy_dir), "--config", str(config), "--seed", "5",
                "--out", str(out)]
        assert main(argv) == 0
        report = RunReport.read(out)
        assert report.seed == 5 and report.preset is None
        assert report.epochs_run <= 20

    def test_unknown_preset_lists_available(self, toy_dir, capsys):
        assert main(["train", "--data", str(toy_dir), "--preset", "nosuch"]) == 2
        err = capsys.readouterr().err
        assert "nosuch" in err and "ConvConfGCN" in err

    def test_negative_seed_is_usage_error(self, toy_dir, capsys):
        assert main(["train", "--data", str(toy_dir), "--preset", "GCN", "--seed", "-1"]) == 2
        assert "non-negative" in capsys.readouterr().err

    def test_unknown_preset_checked_before_data(self, tmp_path, capsys):
        argv = ["train", "--data", str(tmp_path / "absent"), "--preset", "nosuch"]
        assert main(argv) == 2
        assert "nosuch" in capsys.readouterr().err

    def test_invalid_config_file(self, toy_dir, tmp_path):
        config = tmp_path / "bad.json"
        config.write_text('{"model": {"layers": []}}')
        assert main(["train", "--data", str(toy_dir), "--config", str(config)]) == 2

    def test_non_finite_features_rejected(self, toy_dir):
        features = (toy_dir / "features.sparse").read_text().splitlines()
        (toy_dir / "features.sparse").write_text("\n".join(
            line.replace("1.0", "nan") for line in features) + "\n")
        assert main(["train", "--data", str(toy_dir), "--preset", "GCN"]) == 1


class TestReplicateAndTable:
    def test_replicate_then_table(self, toy_dir, tmp_path, capsys):
        out = tmp_path / "results"
        argv = ["--quiet", "replicate", "--data", str(toy_dir), "--preset", "gcn",
                "--seeds", "2", "--out", str(out), "--jobs", "1"]
        assert main(argv) == 0
        printed = capsys.readouterr().out
        assert printed.splitlines()[0].split()[0] == "preset"
        assert (out / "runs" / "GCN" / "toy" / "1.report").is_file()
        csv_lines = (out / "tables" / "GCN_toy.csv").read_text().splitlines()
        assert csv_lines[0] == "preset,dataset,mean,std,n,epoch_time,reference_mean"
        assert csv_lines[1].startswith("GCN,toy,") and csv_lines[1].endswith(",")

        table = tmp_path / "table.csv"
        assert main(["table", "--runs", str(out / "runs"), "--format", "csv",
                     "--out", str(table)]) == 0
        aggregated = table.read_text().splitlines()[1].split(",")
        expected = csv_lines[1].split(",")
        assert aggregated[:5] == expected[:5] and aggregated[6:] == expected[6:]

    def test_unknown_preset_checked_before_data(self, tmp_path):
        argv = ["replicate", "--data", str(tmp_path / "absent"), "--preset", "nosuch",
                "--seeds", "2", "--out", str(tmp_path / "out")]
        assert main(argv) == 2

    def test_single_seed_is_usage_error(self, toy_dir, tmp_path):
        argv = ["replicate", "--data", str(toy_dir), "--preset", "GCN", "--seeds", "1",
                "--out", str(tmp_path)]
        assert main(argv) == 2

    def test_table_text_format(self, toy_dir, tmp_path):
        out = tmp_path / "results"
        main(["--quiet", "replicate", "--data", str(toy_dir), "--preset", "DGCN",
              "--seeds", "2", "--out", str(out), "--jobs", "1"])
        table = tmp_path / "table.txt"
        assert main(["table", "--runs", str(out / "runs"), "--format", "text",
                     "--out", str(table)]) == 0
        lines = table.read_text().splitlines()
        assert lines[0].split()[0] == "preset"
        assert set(lines[1]) == {"-"}
        assert lines[2].split()[:2] == ["DGCN", "toy"]

    def test_table_without_runs(self, tmp_path):
        (tmp_path / "runs").mkdir()
        assert main(["table", "--runs", str(tmp_path / "runs"), "--format", "csv",
                     "--out", str(tmp_path / "t.csv")]) == 1

    def test_table_missing_runs_dir(self, tmp_path):
        assert main(["table", "--runs", str(tmp_path / "absent"), "--format", "csv",
                     "--out", str(tmp_path / "t.csv")]) == 1


class TestSweep:
    def test_two_cell_sweep(self, toy_dir, tmp_path, capsys):
        grid = tmp_path / "grid.json"
        grid.write_text(json.dumps({"activations": ["relu", "elu"], "hidden_sizes": [16],
                                    "loss_variants": ["softmax_ce"]}))
        out = tmp_path / "sweep"
        argv = ["--quiet", "sweep", "--data", str(toy_dir), "--grid", str(grid),
                "--out", str(out), "--jobs", "1"]
        assert main(argv) == 0
        printed = capsys.readouterr().out.splitlines()
        assert printed[0] == "Sweep of GCN on toy"
        lines = (out / "tables" / "sweep_GCN_toy.csv").read_text().splitlines()
        assert lines[0] == "rank,config,status,mean_val,mean,std,n,epoch_time,error"
        assert sorted(line.split(",")[1] for line in lines[1:]) == [
            "elu-h16-softmax_ce", "relu-h16-softmax_ce"
        ]
        assert (out / "runs" / "GCN-elu-h16-softmax_ce" / "toy" / "0.report").is_file()

    def test_missing_grid_file(self, toy_dir, tmp_path):
        argv = ["sweep", "--data", str(toy_dir), "--grid", str(tmp_path / "none.json"),
                "--out", str(tmp_path)]
        assert main(argv) == 1

    def test_invalid_grid(self, toy_dir, tmp_path):
        grid = tmp_path / "grid.json"
        grid.write_text('{"activations": ["relu"], "hidden_sizes": [16], '
                        '"loss_variants": ["softmax_ce"], "seeds_per_cell": 1}')
        argv = ["sweep", "--data", str(toy_dir), "--grid", str(grid), "--out", str(tmp_path)]
        assert main(argv) == 2

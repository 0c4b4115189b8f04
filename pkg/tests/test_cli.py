import csv
import json
import os

import pytest

from snnbounds.cli import (BOUNDS_CSV_FIELDS, RAD_CSV_FIELDS, ConfigError,
                           ExperimentConfig, build_parser, main,
                           parse_config_file)
from conftest import write_fake_mnist_dir


@pytest.fixture(scope="module")
def mnist_dir(tmp_path_factory):
    return write_fake_mnist_dir(str(tmp_path_factory.mktemp("fakemnist")))


def _run(argv):
    return main(argv)


def _base_args(mnist_dir, out, widths="4", seeds="0"):
    return ["--dataset", "mnist", "--mnist-dir", mnist_dir, "--out", out,
            "--widths", widths, "--seeds", seeds, "--max-epochs", "3"]


def test_config_defaults_and_validation():
    cfg = ExperimentConfig()
    assert cfg.max_epochs == 20  # mnist default
    assert ExperimentConfig(dataset="cifar10", cifar_dir="x").max_epochs == 50
    with pytest.raises(ConfigError):
        ExperimentConfig(widths=[8, 4])
    with pytest.raises(ConfigError):
        ExperimentConfig(widths=[])
    with pytest.raises(ConfigError):
        ExperimentConfig(seeds=[])
    with pytest.raises(ConfigError):
        ExperimentConfig(delta=1.5)
    with pytest.raises(ConfigError):
        ExperimentConfig(dataset="svhn")


def test_config_file_parsing(tmp_path):
    path = os.path.join(tmp_path, "exp.cfg")
    with open(path, "w") as f:
        f.write("# comment\n\nwidths = 4,8\nseeds=1\ndelta = 0.05\n")
    values = parse_config_file(path)
    assert values == {"widths": "4,8", "seeds": "1", "delta": "0.05"}
    bad = os.path.join(tmp_path, "bad.cfg")
    with open(bad, "w") as f:
        f.write("widths 4,8\n")
    with pytest.raises(ConfigError):
        parse_config_file(bad)


def test_flags_override_config_file(tmp_path, mnist_dir):
    path = os.path.join(tmp_path, "exp.cfg")
    with open(path, "w") as f:
        f.write("delta=0.5\nwidths=2,4\n")
    parser = build_parser()
    args = parser.parse_args(["train", "--config", path, "--delta", "0.1"])
    from snnbounds.cli import build_experiment_config
    cfg = build_experiment_config(args)
    assert cfg.delta == 0.1       # flag wins
    assert cfg.widths == [2, 4]   # file survives where no flag given


def test_exit_code_config_error(tmp_path):
    # mnist without --mnist-dir is a config error
    assert _run(["train", "--out", str(tmp_path)]) == 2


def test_exit_code_data_error(tmp_path):
    missing = os.path.join(tmp_path, "nope")
    rc = _run(["train", "--mnist-dir", missing, "--out", str(tmp_path)])
    assert rc == 3


def test_train_cardinality_contract(tmp_path, mnist_dir):
    out = os.path.join(tmp_path, "run")
    assert _run(["train"] + _base_args(mnist_dir, out)) == 0
    assert os.path.exists(os.path.join(out, "ckpt_mnist_s0_m4.snn"))
    manifest = json.load(open(os.path.join(out, "manifest.json")))
    assert manifest["n"] == 40 and manifest["d"] == 1024
    assert len(manifest["cells"]) == 1 and manifest["failures"] == []

    assert _run(["measure"] + _base_args(mnist_dir, out)) == 0
    with open(os.path.join(out, "measures.csv"), newline="") as f:
        mrows = list(csv.DictReader(f))
    assert len(mrows) == 1

    assert _run(["bounds"] + _base_args(mnist_dir, out)) == 0
    with open(os.path.join(out, "bounds.csv"), newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        brows = list(reader)
    assert header == BOUNDS_CSV_FIELDS
    assert len(brows) >= 14


def test_rerun_bitwise_identical(tmp_path, mnist_dir):
    outs = []
    for name in ("run_a", "run_b"):
        out = os.path.join(tmp_path, name)
        for cmd in ("train", "measure", "bounds", "figure"):
            assert _run([cmd] + _base_args(mnist_dir, out, widths="4,8")) == 0
        outs.append(out)
    for fname in ("measures.csv", "bounds.csv", "fig1b.csv", "fig3.svg",
                  "ckpt_mnist_s0_m4.snn"):
        a = open(os.path.join(outs[0], fname), "rb").read()
        b = open(os.path.join(outs[1], fname), "rb").read()
        assert a == b, fname


def test_widths_partition_bounds_rows(tmp_path, mnist_dir):
    out = os.path.join(tmp_path, "run")
    for cmd in ("train", "measure", "bounds"):
        assert _run([cmd] + _base_args(mnist_dir, out, widths="4,8")) == 0
    with open(os.path.join(out, "bounds.csv"), newline="") as f:
        rows = list(csv.DictReader(f))
    by_m = {}
    for r in rows:
        by_m.setdefault(int(r["m"]), []).append(r["method"])
    assert sorted(by_m) == [4, 8]
    # same method set for every width, no gaps
    assert set(by_m[4]) == set(by_m[8])
    assert len(by_m[4]) == len(by_m[8]) >= 14


def test_all_subcommand_emits_figures(tmp_path, mnist_dir):
    out = os.path.join(tmp_path, "run")
    assert _run(["all"] + _base_args(mnist_dir, out, widths="4,8",
                                     seeds="0,1")) == 0
    for kind in ("fig1a", "fig1b", "fig2", "fig3"):
        assert os.path.exists(os.path.join(out, f"{kind}.csv"))
        svg = open(os.path.join(out, f"{kind}.svg")).read()
        assert svg.startswith("<svg")


def test_single_figure_selection(tmp_path, mnist_dir):
    out = os.path.join(tmp_path, "run")
    for cmd in ("train", "measure", "bounds"):
        assert _run([cmd] + _base_args(mnist_dir, out)) == 0
    assert _run(["figure", "--figure", "1b"] + _base_args(mnist_dir, out)) == 0
    assert os.path.exists(os.path.join(out, "fig1b.csv"))
    assert not os.path.exists(os.path.join(out, "fig3.csv"))


def test_subsample_flag(tmp_path, mnist_dir):
    out = os.path.join(tmp_path, "run")
    assert _run(["train", "--subsample", "10"]
                + _base_args(mnist_dir, out)) == 0
    manifest = json.load(open(os.path.join(out, "manifest.json")))
    assert manifest["n"] == 10


def test_rad_subcommand(tmp_path):
    out_csv = os.path.join(tmp_path, "rad.csv")
    rc = _run(["rad", "--n", "6", "--d", "3", "--m", "3", "--rw", "1.5",
               "--rv", "1.0", "--pga-steps", "40", "--pga-restarts", "2",
               "--out-csv", out_csv])
    assert rc == 0
    with open(out_csv, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        row = next(reader)
    assert header == RAD_CSV_FIELDS
    vals = dict(zip(header, row))
    assert float(vals["estimate"]) <= float(vals["upper_bound_path"]) + 1e-12
    assert float(vals["margin"]) >= -1e-12
    assert float(vals["std_error"]) == 0.0  # n=6 runs the exhaustive mode

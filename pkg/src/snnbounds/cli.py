"""Command-line entry point: train -> measure -> bounds -> figures, plus the
tiny-instance Rademacher probe.

Subcommands: train, measure, bounds, rad, figure, all.  Every config knob is
available both as a flag and as a ``key=value`` line in a config file passed
via --config; flags win.  Exit codes: 0 success, 2 config error, 3 data error.
"""

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bounds as bounds_mod
from . import datasets as data_mod
from . import figures as fig_mod
from .linalg import fork_rng, make_rng
from .measures import (MEASURE_CSV_FIELDS, measure_report, measure_row,
                       read_measures_csv, write_measures_csv)
from .model import (Checkpoint, checkpoint_load, checkpoint_save,
                    get_activation, init_kaiming)
from .rademacher import RadConfig, mc_rad_estimate
from .trainer import TrainConfig, TrainingDiverged, sgd_train

BOUNDS_CSV_FIELDS = ["dataset", "seed", "m", "method", "value", "delta",
                     "data_dependent", "qualitative"]
RAD_CSV_FIELDS = ["n", "d", "m", "c", "R_W", "R_V", "estimate", "std_error",
                  "upper_bound_path", "upper_bound_frob", "lower_bound",
                  "margin"]

DEFAULT_TASKS = {
    "mnist": data_mod.TaskSpec("mnist", 1, 7),
    "cifar10": data_mod.TaskSpec("cifar10", 0, 1),
}


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    dataset: str = "mnist"
    mnist_dir: str = ""
    cifar_dir: str = ""
    out: str = "runs"
    widths: list = field(default_factory=lambda: [64, 128])
    seeds: list = field(default_factory=lambda: [0, 1, 2, 3, 4])
    delta: float = 0.01
    subsample: int = 0  # 0 = full dataset
    figure: str = ""
    batch_size: int = 256
    momentum: float = 0.9
    learning_rate: float = 0.001
    max_epochs: int = 0  # 0 = source default (20 MNIST / 50 CIFAR)
    target_train_error: float = 0.1
    activation: str = "relu"

    def __post_init__(self):
        if self.dataset not in DEFAULT_TASKS:
            raise ConfigError(f"unknown dataset {self.dataset!r}")
        if not self.widths or sorted(set(self.widths)) != self.widths:
            raise ConfigError("widths must be nonempty and strictly increasing")
        if not self.seeds:
            raise ConfigError("seeds must be nonempty")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError("delta must lie in (0, 1)")
        if self.max_epochs == 0:
            self.max_epochs = 20 if self.dataset == "mnist" else 50


def parse_config_file(path):
    """Flat key=value file; blank lines and '#' comments ignored."""
    values = {}
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def _int_list(text):
    try:
        return [int(v) for v in str(text).split(",") if v != ""]
    except ValueError as exc:
        raise ConfigError(f"bad integer list {text!r}") from None


def build_experiment_config(args):
    values = {}
    if getattr(args, "config", None):
        values.update(parse_config_file(args.config))
    flag_map = {
        "dataset": str, "mnist_dir": str, "cifar_dir": str, "out": str,
        "widths": _int_list, "seeds": _int_list, "delta": float,
        "subsample": int, "figure": str, "batch_size": int,
        "momentum": float, "learning_rate": float, "max_epochs": int,
        "target_train_error": float, "activation": str,
    }
    kwargs = {}
    for key, conv in flag_map.items():
        if key in values:
            kwargs[key] = conv(values[key])
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            kwargs[key] = conv(cli_val) if not isinstance(cli_val, list) else cli_val
    try:
        return ExperimentConfig(**kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None


def load_task_dataset(cfg):
    task = DEFAULT_TASKS[cfg.dataset]
    if cfg.dataset == "mnist":
        if not cfg.mnist_dir:
            raise ConfigError("--mnist-dir is required for the mnist dataset")
        raw = data_mod.load_mnist_dir(cfg.mnist_dir)
    else:
        if not cfg.cifar_dir:
            raise ConfigError("--cifar-dir is required for the cifar10 dataset")
        raw = data_mod.load_cifar_dir(cfg.cifar_dir)
    ds = data_mod.build_binary_task(raw, task)
    if cfg.subsample:
        ds = data_mod.subsample(ds, cfg.subsample, fork_rng(0, 999))
    return ds


def _ckpt_path(cfg, seed, m):
    return os.path.join(cfg.out, f"ckpt_{cfg.dataset}_s{seed}_m{m}.snn")


def cmd_train(cfg):
    ds = load_task_dataset(cfg)
    os.makedirs(cfg.out, exist_ok=True)
    failures = []
    cells = []
    for m in cfg.widths:
        for seed in cfg.seeds:
            params, snapshot = init_kaiming(
                fork_rng(seed, m), m, ds.d, 1, get_activation(cfg.activation))
            tc = TrainConfig(batch_size=cfg.batch_size, momentum=cfg.momentum,
                             learning_rate=cfg.learning_rate,
                             max_epochs=cfg.max_epochs,
                             target_train_error=cfg.target_train_error,
                             seed=seed)
            try:
                report = sgd_train(params, snapshot, ds, tc)
            except TrainingDiverged as exc:
                failures.append({"seed": seed, "m": m, "error": str(exc)})
                continue
            ck = Checkpoint(params, snapshot, seed=seed,
                            epochs=report.epochs_run,
                            final_train_error=report.final_train_error)
            checkpoint_save(ck, _ckpt_path(cfg, seed, m))
            cells.append({"seed": seed, "m": m,
                          "epochs": report.epochs_run,
                          "train_error": report.final_train_error,
                          "ramp_risk": report.final_ramp_risk,
                          "wall_time": report.wall_time})
    manifest = {
        "version": 1,
        "config": {k: getattr(cfg, k) for k in vars(cfg)},
        "dataset_name": ds.name, "n": ds.n, "d": ds.d,
        "cells": cells, "failures": failures,
    }
    with open(os.path.join(cfg.out, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
    return 0


def _iter_checkpoints(cfg):
    for m in cfg.widths:
        for seed in cfg.seeds:
            path = _ckpt_path(cfg, seed, m)
            if os.path.exists(path):
                yield seed, m, checkpoint_load(path)


def cmd_measure(cfg):
    ds = load_task_dataset(cfg)
    rows = []
    for seed, m, ck in _iter_checkpoints(cfg):
        report = measure_report(ck.params, ck.snapshot, ds)
        rows.append(measure_row(report, ds.name, seed, m))
    if not rows:
        raise data_mod.DataError(f"no checkpoints found under {cfg.out}")
    write_measures_csv(os.path.join(cfg.out, "measures.csv"), rows)
    return 0


def cmd_bounds(cfg):
    ds = load_task_dataset(cfg)
    rows = []
    for seed, m, ck in _iter_checkpoints(cfg):
        for bv in bounds_mod.all_bound_values(ck.params, ck.snapshot, ds,
                                              delta=cfg.delta):
            rows.append([ds.name, seed, m, bv.method, repr(bv.value),
                         repr(cfg.delta), bv.data_dependent, bv.qualitative])
    if not rows:
        raise data_mod.DataError(f"no checkpoints found under {cfg.out}")
    with open(os.path.join(cfg.out, "bounds.csv"), "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(BOUNDS_CSV_FIELDS)
        writer.writerows(rows)
    return 0


def cmd_figure(cfg):
    kinds = [f"fig{cfg.figure}"] if cfg.figure else list(fig_mod.FIGURE_KINDS)
    measures_path = os.path.join(cfg.out, "measures.csv")
    bounds_path = os.path.join(cfg.out, "bounds.csv")
    measure_rows = read_measures_csv(measures_path) \
        if os.path.exists(measures_path) else []
    bound_rows = []
    if os.path.exists(bounds_path):
        with open(bounds_path, newline="") as f:
            bound_rows = list(csv.DictReader(f))
    for kind in kinds:
        if kind not in fig_mod.FIGURE_KINDS:
            raise ConfigError(f"unknown figure {cfg.figure!r}")
        fig_mod.emit_figure(kind, measure_rows, bound_rows,
                            os.path.join(cfg.out, f"{kind}.csv"),
                            os.path.join(cfg.out, f"{kind}.svg"))
    return 0


def cmd_rad(args):
    """Tiny-instance Rademacher probe: MC feasible estimate vs. the bounds."""
    n, d, m = args.n, args.d, args.m
    R_W, R_V = args.rw, args.rv
    act = get_activation(args.activation)
    rng = make_rng(args.seed)
    X = rng.standard_normal((d, n))
    X /= np.linalg.norm(X, axis=0)
    _, snapshot = init_kaiming(rng, m, d, 1, act)
    W0 = np.asarray(snapshot.W0)
    cfg = RadConfig(sigma_samples=args.sigma_samples, pga_steps=args.pga_steps,
                    pga_restarts=args.pga_restarts, seed=args.seed)
    est = mc_rad_estimate(X, W0, R_W, R_V, act, c=1, cfg=cfg)
    ds = data_mod.Dataset(X, np.ones(n), name="rad_probe")
    inputs = bounds_mod.class_bound_inputs(ds, W0, act, R_W, R_V,
                                           delta=args.delta)
    upper_path = bounds_mod.rad_upper_path(inputs)
    upper_frob = bounds_mod.rad_upper_frob(inputs)
    r0 = float(np.min(np.linalg.norm(W0, axis=1)))
    lower = bounds_mod.rad_lower(inputs, r0) if R_W >= r0 else float("nan")
    row = [n, d, m, 1, R_W, R_V, est.mean, est.std_error,
           upper_path, upper_frob, lower, upper_path - est.mean]
    out = args.out_csv or "-"
    if out == "-":
        writer = csv.writer(sys.stdout)
        writer.writerow(RAD_CSV_FIELDS)
        writer.writerow(row)
    else:
        with open(out, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(RAD_CSV_FIELDS)
            writer.writerow(row)
    return 0


def _add_experiment_flags(p):
    p.add_argument("--config")
    p.add_argument("--dataset", choices=("mnist", "cifar10"))
    p.add_argument("--mnist-dir", dest="mnist_dir")
    p.add_argument("--cifar-dir", dest="cifar_dir")
    p.add_argument("--out")
    p.add_argument("--widths", type=_int_list)
    p.add_argument("--seeds", type=_int_list)
    p.add_argument("--delta", type=float)
    p.add_argument("--subsample", type=int)
    p.add_argument("--figure", choices=("1a", "1b", "2", "3"))
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--momentum", type=float)
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--max-epochs", dest="max_epochs", type=int)
    p.add_argument("--target-train-error", dest="target_train_error", type=float)
    p.add_argument("--activation", choices=("relu", "tanh", "sigmoid"))


def build_parser():
    parser = argparse.ArgumentParser(prog="snnbounds")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("train", "measure", "bounds", "figure", "all"):
        _add_experiment_flags(sub.add_parser(name))
    rad = sub.add_parser("rad")
    rad.add_argument("--n", type=int, default=8)
    rad.add_argument("--d", type=int, default=4)
    rad.add_argument("--m", type=int, default=4)
    rad.add_argument("--rw", type=float, default=1.0)
    rad.add_argument("--rv", type=float, default=1.0)
    rad.add_argument("--delta", type=float, default=0.01)
    rad.add_argument("--seed", type=int, default=0)
    rad.add_argument("--sigma-samples", dest="sigma_samples", type=int, default=200)
    rad.add_argument("--pga-steps", dest="pga_steps", type=int, default=200)
    rad.add_argument("--pga-restarts", dest="pga_restarts", type=int, default=5)
    rad.add_argument("--activation", choices=("relu", "tanh", "sigmoid"),
                     default="relu")
    rad.add_argument("--out-csv", dest="out_csv")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "rad":
            return cmd_rad(args)
        cfg = build_experiment_config(args)
        if args.command == "train":
            return cmd_train(cfg)
        if args.command == "measure":
            return cmd_measure(cfg)
        if args.command == "bounds":
            return cmd_bounds(cfg)
        if args.command == "figure":
            return cmd_figure(cfg)
        if args.command == "all":
            for step in (cmd_train, cmd_measure, cmd_bounds, cmd_figure):
                rc = step(cfg)
                if rc:
                    return rc
            return 0
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (data_mod.DataError, data_mod.ParseError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

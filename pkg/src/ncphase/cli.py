"""``ncphase run`` and ``ncphase sweep``.

Exit codes: 0 success, 2 malformed config or arguments, 3 no real gauge for
the requested noncommutative parameters, 4 output not writable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .errors import InvalidArgumentError, NoRealGaugeError
from .gaussian_core import thermal_state
from .metrics import FidelitySeries, WitnessReport, nonmarkov_witness
from .thermal_channel import composed_trajectory

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GAUGE = 3
EXIT_OUTPUT = 4

COLUMNS = ("t", "F", "dFdt", "d_Q", "d_P", "s_QQ", "s_QP", "s_PP")


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunOutput:
    config: RunConfig
    table: np.ndarray
    witness: WitnessReport

    def metadata(self) -> dict:
        return {
            "config": self.config.values,
            "rows": int(self.table.shape[0]),
            "software": {"name": "ncphase", "version": __version__},
            "witness": {
                "tol": self.witness.tol,
                "intervals": [list(iv) for iv in self.witness.intervals],
                "measure": self.witness.measure,
            },
        }


def simulate(config: RunConfig) -> RunOutput:
    """Run one trajectory; raises CLIError with the matching exit code."""
    try:
        tcfg = config.trajectory_config()
        traj = composed_trajectory(tcfg)
    except ConfigError as exc:
        raise CLIError(str(exc), EXIT_CONFIG) from None
    except NoRealGaugeError as exc:
        raise CLIError(f"{config.source}: {exc}", EXIT_GAUGE) from None
    except InvalidArgumentError as exc:
        raise CLIError(f"{config.source}: {exc}", EXIT_CONFIG) from None

    table = np.array([
        (p.t, p.fidelity, p.dfdt, p.state.d[0], p.state.d[1],
         p.state.sigma[0, 0], p.state.sigma[0, 1], p.state.sigma[1, 1])
        for p in traj
    ])
    series = FidelitySeries(table[:, 0], table[:, 1], thermal_state(tcfg.channel.m_bar))
    witness = nonmarkov_witness(series, config["witness.tol"])
    return RunOutput(config, table, witness)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def series_text(out: RunOutput, fmt: str) -> str:
    if fmt == "csv":
        rows = [",".join(COLUMNS)]
        rows += [",".join(_fmt(x) for x in row) for row in out.table]
        return "\n".join(rows) + "\n"
    data = {name: [float(x) for x in out.table[:, k]] for k, name in enumerate(COLUMNS)}
    return json.dumps({"columns": list(COLUMNS), "data": data}, indent=1) + "\n"


def _write(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc}", EXIT_OUTPUT) from None


def write_run(out: RunOutput, directory: Path, suffix: str = "") -> Path:
    fmt = out.config["output.format"]
    series_path = directory / f"series{suffix}.{fmt}"
    _write(series_path, series_text(out, fmt))
    _write(directory / f"metadata{suffix}.json", json.dumps(out.metadata(), indent=1, sort_keys=True) + "\n")
    return series_path


def _output_dir(config: RunConfig, override) -> Path:
    return Path(override) if override is not None else Path(config["output.path"])


def cmd_run(args) -> int:
    try:
        config = load_config(args.config)
    except OSError as exc:
        raise CLIError(f"cannot read config: {exc}", EXIT_CONFIG) from None
    except ConfigError as exc:
        raise CLIError(str(exc), EXIT_CONFIG) from None
    out = simulate(config)
    path = write_run(out, _output_dir(config, args.output_dir))
    print(f"wrote {path} ({out.table.shape[0]} rows, witness measure {out.witness.measure:.6g})")
    return EXIT_OK


def parse_b0_list(text: str) -> list[float]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise CLIError("--b0 needs at least one value", EXIT_CONFIG)
    try:
        values = [float(s) for s in items]
    except ValueError:
        raise CLIError(f"--b0: cannot parse {text!r} as a comma-separated list of numbers", EXIT_CONFIG) from None
    if any(not np.isfinite(v) or v < 0 for v in values):
        raise CLIError("--b0 values must be finite and nonnegative", EXIT_CONFIG)
    return values


def b0_label(b0: float) -> str:
    return format(b0, "g")


def worker_count() -> int:
    env = os.environ.get("NCPHASE_WORKERS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise CLIError(f"NCPHASE_WORKERS must be an integer, got {env!r}", EXIT_CONFIG) from None
        return max(n, 1)
    return os.cpu_count() or 1


def summary_text(b0_values, outputs) -> str:
    rows = ["b0,measure,intervals,min_dFdt"]
    for b0, out in zip(b0_values, outputs):
        rows.append(",".join([b0_label(b0), _fmt(out.witness.measure),
                              str(len(out.witness.intervals)), _fmt(out.table[:, 2].min())]))
    return "\n".join(rows) + "\n"


def cmd_sweep(args) -> int:
    b0_values = parse_b0_list(args.b0)
    try:
        base = load_config(args.config, require_nc=False)
    except OSError as exc:
        raise CLIError(f"cannot read config: {exc}", EXIT_CONFIG) from None
    except ConfigError as exc:
        raise CLIError(str(exc), EXIT_CONFIG) from None
    configs = [base.with_b0(b0) for b0 in b0_values]
    with ThreadPoolExecutor(max_workers=min(worker_count(), len(configs))) as pool:
        futures = [pool.submit(simulate, c) for c in configs]
        outputs = []
        for fut in futures:
            outputs.append(fut.result())

    directory = _output_dir(base, args.output_dir)
    for b0, out in zip(b0_values, outputs):
        write_run(out, directory, f"_b0_{b0_label(b0)}")
    _write(directory / "summary.csv", summary_text(b0_values, outputs))
    print(summary_text(b0_values, outputs), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncphase", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one trajectory")
    run.add_argument("--config", required=True)
    run.add_argument("--output-dir", default=None, help="overrides output.path")
    run.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", help="simulate one trajectory per effective field value")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--b0", required=True, help="comma-separated list, e.g. 0,0.5,1")
    sweep.add_argument("--output-dir", default=None, help="overrides output.path")
    sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"ncphase: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

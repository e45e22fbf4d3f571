"""``qmclab <experiment> --config FILE [--seed N] [--out DIR] [--trials N] [--jobs N]``

Exit codes: 0 success, 1 configuration error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Optional

from . import __version__
from ._rng import derive_seed
from .experiments import EXPERIMENTS, Experiment, Param

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "run_experiment", "main"]

TOP_LEVEL_KEYS = {"experiment", "seed", "trials", "params"}
DEFAULT_SEED = 20140601


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = "<config>"):
        self.line = line
        self.source = source
        super().__init__(message)

    def diagnostic(self) -> str:
        where = f"{self.source}:{self.line}" if self.line else self.source
        return f"{where}: {self}"


class ExperimentConfig(dict):
    """Resolved configuration: ``experiment``, ``seed``, ``trials``, ``params``."""

    def digest(self) -> str:
        blob = json.dumps(self, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _line_of(text: str, key: str) -> Optional[int]:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _coerce(name: str, value: Any, param: Param) -> Any:
    def num(v, integer):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValueError(f"{name} must be a number")
        if integer:
            if isinstance(v, float) and not v.is_integer():
                raise ValueError(f"{name} must be an integer")
            v = int(v)
        else:
            v = float(v)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
        if param.minimum is not None:
            if param.exclusive and v <= param.minimum:
                raise ValueError(f"{name} must be > {param.minimum}")
            if not param.exclusive and v < param.minimum:
                raise ValueError(f"{name} must be >= {param.minimum}")
        return v

    if param.kind in ("int", "float"):
        return num(value, param.kind == "int")
    if param.kind == "str":
        if not isinstance(value, str):
            raise ValueError(f"{name} must be a string")
        if param.choices and value not in param.choices:
            raise ValueError(f"{name} must be one of {', '.join(param.choices)}")
        return value
    if not isinstance(value, list) or not value:
        raise ValueError(f"{name} must be a non-empty list")
    if param.length is not None and len(value) != param.length:
        raise ValueError(f"{name} must have exactly {param.length} entries")
    return [num(v, param.kind == "int_list") for v in value]


def load_config(experiment: str, text: Optional[str] = None, source: str = "<config>",
                seed: Optional[int] = None, trials: Optional[int] = None) -> ExperimentConfig:
    """Parse and validate a JSON config; command-line overrides win.

    Every problem is reported as a :class:`ConfigError` carrying the line
    number of the offending key, before any sampling starts.
    """
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from "
                          f"{', '.join(sorted(EXPERIMENTS))}", source=source)
    exp = EXPERIMENTS[experiment]
    raw: dict = {}
    text = text or ""
    if text.strip():
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"invalid JSON: {e.msg}", e.lineno, source) from None
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object", 1, source)

    def fail(msg, key):
        raise ConfigError(msg, _line_of(text, key), source)

    for key in raw:
        if key not in TOP_LEVEL_KEYS:
            fail(f"unknown key {key!r}", key)
    if raw.get("experiment", experiment) != experiment:
        fail(f"config is for {raw['experiment']!r}, not {experiment!r}", "experiment")

    def integer(key, value, minimum):
        if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
            fail(f"{key} must be an integer >= {minimum}", key)
        return value

    cfg_seed = integer("seed", seed if seed is not None else raw.get("seed", DEFAULT_SEED), 0)
    if cfg_seed >= 2 ** 64:
        fail("seed must fit in 64 bits", "seed")
    cfg_trials = integer("trials", trials if trials is not None
                         else raw.get("trials", exp.default_trials), 1)

    given = raw.get("params", {})
    if not isinstance(given, dict):
        fail("params must be an object", "params")
    params = {}
    for key in given:
        if key not in exp.params:
            fail(f"unknown parameter {key!r} for {experiment}", key)
    for key, param in exp.params.items():
        try:
            params[key] = _coerce(key, given.get(key, param.default), param)
        except ValueError as e:
            fail(str(e), key)
    try:
        exp.check(params, cfg_trials)
    except ValueError as e:
        fail(str(e), "params")
    return ExperimentConfig(experiment=experiment, seed=cfg_seed, trials=cfg_trials,
                            params=params)


def _execute(args):
    name, task, seed = args
    return EXPERIMENTS[name].run(task, seed)


def _format(v: Any) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "%.17g" % v
    s = str(v)
    if any(c in s for c in ",\n\r\""):
        raise ValueError(f"value {s!r} cannot be written without quoting")
    return s


def _records(config: ExperimentConfig, jobs: int) -> list[dict]:
    exp: Experiment = EXPERIMENTS[config["experiment"]]
    tasks = exp.tasks(config["params"], config["trials"])
    work = []
    for i, task in enumerate(tasks):
        task = dict(task, params=config["params"], trials=config["trials"])
        work.append((exp.name, task, derive_seed(config["seed"], i)))
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_execute, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        results = [_execute(w) for w in work]
    records = []
    for (name, task, seed), rows in zip(work, results):
        for row in rows:
            rec = {"experiment": name, "trial": len(records), "seed": seed}
            rec.update(row)
            records.append(rec)
    return records


def _write_csv(path: Path, records: list[dict], config: ExperimentConfig) -> None:
    columns: list[str] = []
    for rec in records:
        for key in rec:
            if key not in columns:
                columns.append(key)
    lines = [f"# qmclab {__version__} config_sha256={config.digest()}", ",".join(columns)]
    for rec in records:
        lines.append(",".join(_format(rec.get(c, "")) for c in columns))
    path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def _summary_text(config: ExperimentConfig, summary: dict) -> str:
    out = [f"experiment: {config['experiment']}", f"seed: {config['seed']}",
           f"trials: {config['trials']}", f"config_sha256: {config.digest()}"]

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                walk(f"{prefix}.{k}" if prefix else str(k), v)
        elif isinstance(obj, list) and obj and isinstance(obj[0], dict):
            for i, v in enumerate(obj):
                walk(f"{prefix}[{i}]", v)
        else:
            out.append(f"{prefix}: {obj}")

    walk("", summary)
    return "\n".join(out) + "\n"


def run_experiment(config: ExperimentConfig, output_path, jobs: int = 1) -> dict:
    """Run ``config`` and write ``<experiment>.csv`` and ``<experiment>.summary.txt``.

    Returns the machine-readable summary: headline statistics plus the
    record count and output paths.
    """
    out_dir = Path(output_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = _records(config, jobs)
    exp = EXPERIMENTS[config["experiment"]]
    summary = exp.summarize(records, config["params"], config["trials"])
    csv_path = out_dir / f"{exp.name}.csv"
    txt_path = out_dir / f"{exp.name}.summary.txt"
    _write_csv(csv_path, records, config)
    txt_path.write_text(_summary_text(config, summary), encoding="utf-8")
    summary = dict(summary, records=len(records), csv=str(csv_path), summary_file=str(txt_path))
    return summary


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmclab", description=__doc__.split("\n")[0])
    parser.add_argument("experiment", help=", ".join(sorted(EXPERIMENTS)))
    parser.add_argument("--config", type=Path, help="JSON config file")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", type=Path, default=Path("."))
    parser.add_argument("--trials", type=int)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--version", action="version", version=f"qmclab {__version__}")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    source = str(args.config) if args.config else "<defaults>"
    try:
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1", source="<command line>")
        text = args.config.read_text(encoding="utf-8") if args.config else ""
        config = load_config(args.experiment, text, source, args.seed, args.trials)
    except OSError as e:
        print(f"{source}: cannot read config: {e.strerror}", file=sys.stderr)
        return 1
    except ConfigError as e:
        print(e.diagnostic(), file=sys.stderr)
        return 1
    try:
        summary = run_experiment(config, args.out, jobs=args.jobs)
    except Exception as e:  # noqa: BLE001 - any failure past validation is a runtime error
        print(f"qmclab: runtime failure in {args.experiment}: {type(e).__name__}: {e}",
              file=sys.stderr)
        return 2
    sys.stdout.write(Path(summary["summary_file"]).read_text(encoding="utf-8"))
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``verify``, ``iris`` and ``analyze``.

Exit codes: 0 success, 1 runtime or check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .data import DataError, LabelMapping, load_csv, load_iris
from .experiments import (
    ALGORITHMS,
    DEFAULT_NOISE,
    IRIS_POSITIVE,
    parse_algorithms,
    run_experiment,
    verify_examples,
    verify_theorems,
)
from .minimizers import SolverConfig
from .noise import NoiseSpecError, parse_noise_spec

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_SEED = 2**64 - 1

DEFAULTS = {
    "seed": 0,
    "trials": 10,
    "noise": list(DEFAULT_NOISE),
    "out": None,
    "format": "table",
    "algorithms": ",".join(ALGORITHMS),
    "scope": "all",
    "instances": 100,
    "data": None,
    "label_column": None,
    "positive": None,
    "negative": [],
    "restarts": SolverConfig.restarts,
    "max_iters": SolverConfig.max_iters,
}
LIST_KEYS = {"noise", "negative"}
INT_KEYS = {"seed", "trials", "instances", "restarts", "max_iters"}


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    seed: int
    trials: int
    noise: list
    out: str | None
    format: str
    algorithms: tuple
    scope: str
    instances: int
    data: str | None
    label_column: str | None
    positive: str | None
    negative: list
    restarts: int
    max_iters: int

    def solver_config(self) -> SolverConfig:
        return SolverConfig(max_iters=self.max_iters, restarts=self.restarts, seed=self.seed)


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, list keys may repeat."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if not sep or not key:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        if key in LIST_KEYS:
            out.setdefault(key, []).append(value)
        elif key in out:
            raise UsageError(f"{path}:{lineno}: duplicate key {key!r}")
        else:
            out[key] = value
    return out


def _to_int(key, value, lo=0, hi=None):
    try:
        v = int(str(value).strip(), 10)
    except ValueError:
        raise UsageError(f"{key} must be an integer, got {value!r}") from None
    if v < lo or (hi is not None and v > hi):
        bound = f">= {lo}" if hi is None else f"in [{lo}, {hi}]"
        raise UsageError(f"{key} must be {bound}, got {v}")
    return v


def resolve(args: argparse.Namespace) -> CliConfig:
    """Merge flags over the config file over defaults, then validate everything."""
    from_file = read_config_file(args.config) if args.config else {}
    merged = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None and flag != []:
            merged[key] = flag
        elif key in from_file:
            merged[key] = from_file[key]
        else:
            merged[key] = list(default) if key in LIST_KEYS else default

    merged["seed"] = _to_int("seed", merged["seed"], 0, MAX_SEED)
    merged["trials"] = _to_int("trials", merged["trials"], 1)
    merged["instances"] = _to_int("instances", merged["instances"], 1)
    merged["restarts"] = _to_int("restarts", merged["restarts"], 1)
    merged["max_iters"] = _to_int("max_iters", merged["max_iters"], 1)
    if merged["format"] not in ("csv", "table"):
        raise UsageError(f"format must be csv or table, got {merged['format']!r}")
    if merged["scope"] not in ("examples", "theorems", "all"):
        raise UsageError(f"scope must be examples, theorems or all, got {merged['scope']!r}")
    try:
        merged["algorithms"] = parse_algorithms(merged["algorithms"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    noise = []
    for text in merged["noise"]:
        try:
            noise.append(parse_noise_spec(text))
        except NoiseSpecError as exc:
            raise UsageError(str(exc)) from None
    merged["noise"] = noise

    if args.command == "analyze":
        for key in ("data", "label_column", "positive"):
            if not merged[key]:
                raise UsageError(f"analyze needs --{key.replace('_', '-')}")
    return CliConfig(command=args.command, **merged)


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", help="master seed (unsigned 64-bit, default 0)")
    shared.add_argument("--out", help="write the report here instead of stdout")
    shared.add_argument("--config", help="file of 'key = value' lines; flags take precedence")
    shared.add_argument("--restarts", help="annealing restarts for the 0-1 search")
    shared.add_argument("--max-iters", dest="max_iters", help="annealing chain length / Newton iteration cap")

    runs = argparse.ArgumentParser(add_help=False)
    runs.add_argument("--trials", help="noisy training sets per noise setting (default 10)")
    runs.add_argument("--noise", action="append", default=[], metavar="SPEC",
                      help="repeatable: none, uniform:R, cccn:RP,RN, quadrant:R1,R2,R3,R4[,auto|,CX,CY], perpoint:FILE")
    runs.add_argument("--format", help="csv or table (default table)")
    runs.add_argument("--algorithms", help="comma-separated subset of " + ",".join(ALGORITHMS))

    p = argparse.ArgumentParser(prog="noisetol", description="Label-noise tolerance of risk minimization.")
    sub = p.add_subparsers(dest="command", required=True, metavar="{verify,iris,analyze}")

    v = sub.add_parser("verify", parents=[shared], help="run worked-example and property checks")
    v.add_argument("--scope", help="examples, theorems or all (default all)")
    v.add_argument("--instances", help="random instances per property check (default 100)")

    i = sub.add_parser("iris", parents=[shared, runs], help="Iris noise-injection experiment")
    i.add_argument("--positive", help=f"Iris class taken as +1 (default {IRIS_POSITIVE})")

    a = sub.add_parser("analyze", parents=[shared, runs], help="same experiment on a user CSV")
    a.add_argument("--data", help="CSV file with a header row")
    a.add_argument("--label-column", dest="label_column", help="name of the class column")
    a.add_argument("--positive", help="label value mapped to +1")
    a.add_argument("--negative", action="append", default=[],
                   help="repeatable: label values mapped to -1 (default: the single other value)")
    return p


def _emit(text: str, out) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise RuntimeError(f"cannot write {out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def cmd_verify(cfg: CliConfig) -> int:
    solver = cfg.solver_config()
    parts = []
    ok = True
    if cfg.scope in ("examples", "all"):
        rep = verify_examples(solver)
        parts.append(rep.render())
        ok &= rep.passed
    if cfg.scope in ("theorems", "all"):
        rep = verify_theorems(solver, cfg.instances)
        parts.append(rep.render())
        ok &= rep.passed
    _emit("\n".join(parts), cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


def _report(cfg: CliConfig, data, name) -> int:
    rep = run_experiment(data, cfg.trials, cfg.seed, cfg.noise, cfg.algorithms, cfg.solver_config(), name)
    _emit(rep.to_csv() if cfg.format == "csv" else rep.to_table(), cfg.out)
    return EXIT_OK


def cmd_iris(cfg: CliConfig) -> int:
    positive = cfg.positive or IRIS_POSITIVE
    return _report(cfg, load_iris(positive), f"Iris, {positive} = +1 vs rest")


def cmd_analyze(cfg: CliConfig) -> int:
    if cfg.negative:
        data = load_csv(cfg.data, cfg.label_column, LabelMapping(cfg.positive, frozenset(cfg.negative)))
    else:
        data = load_csv(cfg.data, cfg.label_column, positive=cfg.positive)
    return _report(cfg, data, f"{Path(cfg.data).name}, {cfg.positive} = +1 vs rest")


COMMANDS = {"verify": cmd_verify, "iris": cmd_iris, "analyze": cmd_analyze}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(args)
    except UsageError as exc:
        print(f"noisetol {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[cfg.command](cfg)
    except (DataError, NoiseSpecError, RuntimeError, ValueError, OSError) as exc:
        print(f"noisetol {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

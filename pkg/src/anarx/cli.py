"""Command-line interface: benchmarking, streaming prediction, snapshots.

Subcommands
    bench     run the online protocol from a config file over a CSV series,
              emit the JSON summary and optionally the per-step CSV
    predict   stream values from stdin, one prediction per line
    snapshot  save a trained forecaster, or show/verify a saved one

Every engine error maps to its own exit code; ANARX_LOG sets verbosity
(DEBUG, INFO, WARNING, ...).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import errors
from .pipeline import load_config, load_csv, run_experiment, build_forecaster
from .snapshot import snapshot_load, snapshot_save

log = logging.getLogger("anarx")

EXIT_CODES = [
    (FileNotFoundError, 3),
    (errors.ParseError, 4),
    (errors.EmptySeries, 5),
    (errors.DegenerateRange, 6),
    (errors.InvalidRange, 7),
    (errors.InvalidOrder, 8),
    (errors.VersionMismatch, 9),
    (errors.CorruptSnapshot, 10),
    (errors.SingularCorrelation, 11),
    (errors.DimensionMismatch, 12),
    (errors.ZeroRegressor, 13),
    (errors.ZeroGain, 14),
    (errors.DegenerateActivation, 15),
    (errors.DegenerateStep, 16),
    (errors.NumericalDivergence, 17),
    (errors.AnarxError, 20),
    (ValueError, 21),
]


def _exit_code(exc: BaseException) -> int:
    for etype, code in EXIT_CODES:
        if isinstance(exc, etype):
            return code
    return 70


def _setup_logging() -> None:
    level_name = os.environ.get("ANARX_LOG", "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _column_arg(value: str | None):
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        return value


def _cmd_bench(args) -> int:
    config = load_config(args.config)
    if args.freeze_test:
        config.freeze_test = True
    series = load_csv(args.data, _column_arg(args.column))
    report = run_experiment(series, config)
    text = report.to_json()
    if args.out_json:
        with open(args.out_json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.out_csv:
        with open(args.out_csv, "w", encoding="utf-8") as fh:
            fh.write(report.steps_csv())
    print(
        f"rmse_train={report.rmse_train:.6f} rmse_test={report.rmse_test:.6f} "
        f"params={report.parameter_count} time={report.wall_time_s:.3f}s",
        file=sys.stderr,
    )
    return 0


def _cmd_predict(args) -> int:
    forecaster = snapshot_load(args.snapshot)
    learn = not args.freeze
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            value = float(line)
        except ValueError:
            raise errors.ParseError(f"stdin: non-numeric value {line!r}") from None
        pred = forecaster.step(value, learn=learn)
        print(repr(pred))
    return 0


def _cmd_snapshot_save(args) -> int:
    config = load_config(args.config)
    series = load_csv(args.data, _column_arg(args.column))
    run_len = config.train_len + config.test_len
    _, forecaster = build_forecaster(series, config)
    for k in range(run_len):
        forecaster.step(
            float(series.values[k]), learn=(k < config.train_len) or not config.freeze_test
        )
    snapshot_save(forecaster, args.out)
    print(f"snapshot written to {args.out}", file=sys.stderr)
    return 0


def _cmd_snapshot_show(args) -> int:
    forecaster = snapshot_load(args.snapshot)
    model = forecaster.model
    print(f"nodes: {model.n} ({model.nodes[0].kind})")
    print(f"training: {model.training}, learner: {model.learner_kind}, alpha: {model.alpha}")
    print(f"weighted: {forecaster.combiner is not None}")
    if forecaster.combiner is not None:
        print(f"c: {forecaster.combiner.c.tolist()}")
    print(f"scale: {forecaster.scale}")
    print("integrity: ok")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anarx",
        description="Online forecasting with additive per-lag fuzzy nodes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run the benchmark protocol")
    bench.add_argument("--config", required=True, help="flat key=value config file")
    bench.add_argument("--data", required=True, help="CSV file with the series")
    bench.add_argument("--column", default=None, help="column name or index (default: first)")
    bench.add_argument("--out-json", default=None, help="write the JSON summary here")
    bench.add_argument("--out-csv", default=None, help="write per-step records here")
    bench.add_argument(
        "--freeze-test", action="store_true", help="disable learning on the test segment"
    )
    bench.set_defaults(func=_cmd_bench)

    predict = sub.add_parser("predict", help="stream stdin values, one prediction per line")
    predict.add_argument("--snapshot", required=True, help="snapshot file to load")
    predict.add_argument("--freeze", action="store_true", help="do not learn while streaming")
    predict.set_defaults(func=_cmd_predict)

    snap = sub.add_parser("snapshot", help="save or inspect model snapshots")
    snapsub = snap.add_subparsers(dest="snapshot_command", required=True)
    save = snapsub.add_parser("save", help="train per config and save the forecaster")
    save.add_argument("--config", required=True)
    save.add_argument("--data", required=True)
    save.add_argument("--column", default=None)
    save.add_argument("--out", required=True)
    save.set_defaults(func=_cmd_snapshot_save)
    show = snapsub.add_parser("show", help="print snapshot metadata after verifying it")
    show.add_argument("--snapshot", required=True)
    show.set_defaults(func=_cmd_snapshot_show)

    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - single funnel to exit codes
        code = _exit_code(exc)
        print(f"error: {exc}", file=sys.stderr)
        log.debug("fatal error", exc_info=True)
        return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

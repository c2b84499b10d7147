"""Data ingestion, the online benchmark protocol, and report assembly.

The protocol is one pass over a series: every step first produces the
one-step-ahead prediction from state built strictly before that step,
then (unless test-time learning is frozen) updates the weights with the
revealed value. RMSE is reported separately over the training and test
segments, in the units the model was trained in.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from dataclasses import dataclass, field, fields

import numpy as np

from .combiner import CombinerState
from .errors import (
    AnarxError,
    DegenerateRange,
    DegenerateStep,
    EmptySeries,
    NumericalDivergence,
    ParseError,
)
from .model import AnarxModel, EvolutionPolicy, StructureChange, build_anarx
from .numerics import exact_sum

log = logging.getLogger("anarx")


@dataclass
class SeriesFrame:
    """An ordered univariate series with an optional time axis."""

    values: np.ndarray
    name: str = "series"
    timestamps: list | None = None

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size < 2:
            raise EmptySeries(
                f"series {self.name!r} needs at least 2 values, got {self.values.size}"
            )
        if not np.all(np.isfinite(self.values)):
            bad = int(np.flatnonzero(~np.isfinite(self.values))[0])
            raise ParseError(f"series {self.name!r} has a non-finite value at index {bad}")

    def __len__(self) -> int:
        return self.values.size


def load_csv(path, column=None) -> SeriesFrame:
    """Read one numeric column from a CSV file.

    ``column`` may be a zero-based index, a header name, or None for the
    first column. A header row is detected by the first row failing to
    parse as a number. Row numbers in errors are 1-based file lines.
    """
    with open(path, "r", newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh)]
    rows = [row for row in rows if any(cell.strip() for cell in row)]
    if not rows:
        raise EmptySeries(f"{path}: no data rows")

    start = 0
    if isinstance(column, str):
        header = [cell.strip() for cell in rows[0]]
        if column not in header:
            raise ParseError(f"{path}: column {column!r} not found in header {header}")
        idx = header.index(column)
        start = 1
        name = column
    else:
        idx = 0 if column is None else int(column)
        name = None
        try:
            float(rows[0][idx])
        except (ValueError, IndexError):
            header = [cell.strip() for cell in rows[0]]
            name = header[idx] if idx < len(header) else None
            start = 1

    values = []
    for rownum, row in enumerate(rows[start:], start=start + 1):
        if idx >= len(row):
            raise ParseError(f"{path}: row {rownum} has no column {idx}")
        cell = row[idx].strip()
        try:
            v = float(cell)
        except ValueError:
            raise ParseError(f"{path}: non-numeric cell {cell!r} at row {rownum}") from None
        if not math.isfinite(v):
            raise ParseError(f"{path}: non-finite value at row {rownum}")
        values.append(v)
    if len(values) < 2:
        raise EmptySeries(f"{path}: fewer than 2 data rows")
    return SeriesFrame(np.asarray(values), name=name or os.path.splitext(os.path.basename(str(path)))[0])


def normalize_minmax(series: SeriesFrame, fit_range=None):
    """Map values through (v - min) / (max - min), min/max over fit_range.

    ``fit_range`` is an (start, stop) index pair; None fits on the whole
    series. Values outside the fitted range map outside [0, 1] and are
    passed through unchanged. Returns (normalized frame, lo, hi).
    """
    if fit_range is None:
        fit_range = (0, len(series))
    start, stop = int(fit_range[0]), int(fit_range[1])
    segment = series.values[start:stop]
    if segment.size == 0:
        raise DegenerateRange("empty fit range")
    lo = float(segment.min())
    hi = float(segment.max())
    if hi <= lo:
        raise DegenerateRange(f"constant fit segment (min == max == {lo})")
    scaled = (series.values - lo) / (hi - lo)
    return SeriesFrame(scaled, name=series.name, timestamps=series.timestamps), lo, hi


def denormalize(values, lo: float, hi: float):
    return np.asarray(values, dtype=float) * (hi - lo) + lo


@dataclass
class RunConfig:
    """Everything needed to rerun one benchmark deterministically."""

    n_nodes: int
    h: int
    train_len: int
    test_len: int
    q: int = 2
    node_kind: str = "neo_fuzzy"
    learner: str = "rls"
    alpha: float = 1.0
    weighted: bool = False
    training: str | None = None
    normalization: str = "minmax"
    # None: off; "auto": thresholds tracking 1.5x/0.75x the long-run RMSE;
    # or an explicit EvolutionPolicy with absolute thresholds.
    evolution: EvolutionPolicy | str | None = None
    seed: int = 0
    freeze_test: bool = False
    eta_lambda: float = 0.1

    def __post_init__(self) -> None:
        if self.node_kind not in ("neo_fuzzy", "wang_mendel"):
            raise ValueError(f"unknown node_kind {self.node_kind!r}")
        if self.learner not in ("rls", "kwh", "adaptive"):
            raise ValueError(f"unknown learner {self.learner!r}")
        if self.normalization not in ("minmax", "none"):
            raise ValueError(f"unknown normalization {self.normalization!r}")
        if self.training is None:
            self.training = "independent" if self.weighted else "stacked"
        if self.training not in ("stacked", "independent"):
            raise ValueError(f"unknown training {self.training!r}")
        if isinstance(self.evolution, str) and self.evolution != "auto":
            raise ValueError(f"evolution must be None, 'auto', or a policy, got {self.evolution!r}")
        if self.n_nodes < 1 or self.h < 1 or self.q < 1:
            raise ValueError("n_nodes, h, q must be positive")
        if self.train_len < 1 or self.test_len < 0:
            raise ValueError("train_len must be positive and test_len nonnegative")
        if self.learner == "rls" and not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"rls needs alpha in (0, 1], got {self.alpha}")
        if self.learner == "adaptive" and not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"adaptive needs alpha in [0, 1], got {self.alpha}")

    def to_dict(self) -> dict:
        d = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "evolution" and isinstance(v, EvolutionPolicy):
                v = vars(v).copy()
            d[f.name] = v
        return d


@dataclass
class StepRecord:
    k: int
    y: float
    y_hat: float
    error: float
    n_active: int
    c: tuple | None = None


@dataclass
class ForecastReport:
    """Per-step records plus the summary a benchmark table needs."""

    steps: list
    rmse_train: float
    rmse_test: float
    parameter_count: int
    wall_time_s: float
    config: RunConfig
    extras: dict = field(default_factory=dict)

    def summary_dict(self) -> dict:
        return {
            "rmse_train": self.rmse_train,
            "rmse_test": self.rmse_test,
            "parameter_count": self.parameter_count,
            "wall_time_s": self.wall_time_s,
            "config": self.config.to_dict(),
            "extras": self.extras,
        }

    def to_json(self, include_wall_time: bool = True) -> str:
        d = self.summary_dict()
        if not include_wall_time:
            d.pop("wall_time_s")
        return json.dumps(d, indent=2, sort_keys=True)

    def steps_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        n_c = max((len(s.c) for s in self.steps if s.c is not None), default=0)
        header = ["k", "y", "y_hat", "error", "n_active"]
        header += [f"c_{i + 1}" for i in range(n_c)]
        writer.writerow(header)
        for s in self.steps:
            row = [s.k, repr(s.y), repr(s.y_hat), repr(s.error), s.n_active]
            if n_c:
                cvals = [repr(v) for v in (s.c or ())]
                row += cvals + [""] * (n_c - len(cvals))
            writer.writerow(row)
        return buf.getvalue()


class OnlineForecaster:
    """A trained (or training) model plus everything predict needs.

    Bundles the node pool, the optional ensemble combiner, and the
    normalization fitted on the training segment, so a stream of raw
    values can be forecast one step ahead and learned from.
    """

    def __init__(self, model: AnarxModel, combiner: CombinerState | None = None,
                 scale: tuple | None = None, meta: dict | None = None) -> None:
        self.model = model
        self.combiner = combiner
        self.scale = scale
        self.meta = meta or {}
        self.degenerate_steps = 0

    def _to_model_units(self, v: float) -> float:
        if self.scale is None:
            return float(v)
        lo, hi = self.scale
        return (float(v) - lo) / (hi - lo)

    def _to_raw_units(self, v: float) -> float:
        if self.scale is None:
            return float(v)
        lo, hi = self.scale
        return float(v) * (hi - lo) + lo

    def predict(self) -> float:
        """Model-units one-step-ahead prediction at the current position."""
        forecasts = self.model.node_forecasts()
        if self.combiner is not None:
            return self.combiner.combine(forecasts)
        return exact_sum(forecasts.tolist())

    def step(self, y_raw: float, learn: bool = True) -> float:
        """Predict the incoming raw value, then absorb it. Returns the
        prediction in raw units."""
        forecasts = self.model.node_forecasts()
        if self.combiner is not None:
            pred = self.combiner.combine(forecasts)
        else:
            pred = exact_sum(forecasts.tolist())
        y = self._to_model_units(y_raw)
        if learn:
            self.model.train_step(y)
            if self.combiner is not None:
                try:
                    self.combiner.optimal_step(forecasts, y)
                except DegenerateStep:
                    self.degenerate_steps += 1
        else:
            self.model.observe(y)
        return self._to_raw_units(pred)


def _fit_grid_range(segment: np.ndarray) -> tuple:
    lo = float(segment.min())
    hi = float(segment.max())
    if hi <= lo:
        pad = max(0.5, abs(lo) * 1e-6)
        lo -= pad
        hi += pad
    return lo, hi


def build_forecaster(series: SeriesFrame, config: RunConfig) -> tuple:
    """Prepare the model-units series and a fresh forecaster for it."""
    if config.train_len + config.test_len > len(series):
        raise ValueError(
            f"train_len + test_len = {config.train_len + config.test_len} exceeds "
            f"series length {len(series)}"
        )
    scale = None
    if config.normalization == "minmax":
        work, lo, hi = normalize_minmax(series, (0, config.train_len))
        scale = (lo, hi)
        grid_lo, grid_hi = 0.0, 1.0
    else:
        work = series
        grid_lo, grid_hi = _fit_grid_range(series.values[: config.train_len])
    model = build_anarx(
        config.n_nodes,
        config.h,
        grid_lo,
        grid_hi,
        q=config.q,
        node_kind=config.node_kind,
        mode="nar",
        training=config.training,
        learner=config.learner,
        alpha=config.alpha,
    )
    combiner = CombinerState(config.n_nodes, eta_lambda=config.eta_lambda) if config.weighted else None
    forecaster = OnlineForecaster(model, combiner, scale, meta={"config": config.to_dict()})
    return work, forecaster


def run_experiment(series: SeriesFrame, config: RunConfig) -> ForecastReport:
    """Stream the series through a fresh model per the benchmark protocol."""
    t0 = time.perf_counter()
    work, forecaster = build_forecaster(series, config)
    model = forecaster.model
    combiner = forecaster.combiner
    total = config.train_len + config.test_len
    values = work.values[:total]

    evolving = config.evolution is not None
    explicit_policy = config.evolution if isinstance(config.evolution, EvolutionPolicy) else None
    window = explicit_policy.window if explicit_policy is not None else 100
    err_window: list[float] = []
    long_run_sq = 0.0
    learned_steps = 0
    structure_events = []
    steps: list[StepRecord] = []

    for k in range(total):
        y = float(values[k])
        learn = (k < config.train_len) or not config.freeze_test
        try:
            forecasts = model.node_forecasts()
            pred = combiner.combine(forecasts) if combiner is not None else exact_sum(forecasts.tolist())
            if not math.isfinite(pred):
                # typical cause: covariance wind-up of forgetting-factor RLS
                # under locally excited regressors
                raise NumericalDivergence("prediction is no longer finite")
            err = y - pred
            if learn:
                report = model.train_step(y)
                if report.skipped:
                    log.debug("step %d skipped nodes: %s", k, report.skipped)
                if combiner is not None:
                    try:
                        combiner.optimal_step(forecasts, y)
                    except DegenerateStep:
                        forecaster.degenerate_steps += 1
            else:
                model.observe(y)
        except AnarxError as exc:
            raise type(exc)(f"step {k}: {exc}") from exc

        steps.append(
            StepRecord(
                k=k,
                y=y,
                y_hat=pred,
                error=err,
                n_active=model.n,
                c=tuple(combiner.c.tolist()) if combiner is not None else None,
            )
        )

        if evolving and learn:
            long_run_sq += err * err
            learned_steps += 1
            err_window.append(err * err)
            if len(err_window) > window:
                err_window.pop(0)
            if len(err_window) == window:
                window_rmse = math.sqrt(sum(err_window) / window)
                policy = explicit_policy
                if policy is None:
                    # auto mode: thresholds track the long-run error level
                    long_run_rmse = math.sqrt(long_run_sq / learned_steps)
                    if long_run_rmse > 0.0:
                        policy = EvolutionPolicy(
                            window=window,
                            add_threshold=1.5 * long_run_rmse,
                            remove_threshold=0.75 * long_run_rmse,
                        )
                change = model.evolve(policy, window_rmse) if policy else StructureChange.NONE
                if change is not StructureChange.NONE:
                    structure_events.append((k, change.value, model.n))
                    err_window.clear()
                    if combiner is not None:
                        if change is StructureChange.ADDED:
                            combiner.extend(1)
                        else:
                            combiner.truncate(model.n)

    errors = np.asarray([s.error for s in steps])
    rmse_train = float(np.sqrt(np.mean(errors[: config.train_len] ** 2)))
    if config.test_len:
        rmse_test = float(np.sqrt(np.mean(errors[config.train_len : total] ** 2)))
    else:
        rmse_test = 0.0
    wall = time.perf_counter() - t0

    parameter_count = model.parameter_count() + (model.n if combiner is not None else 0)
    extras = {
        "series_name": series.name,
        "degenerate_combiner_steps": forecaster.degenerate_steps,
        "structure_events": structure_events,
        "final_n": model.n,
        "normalization_lo_hi": list(forecaster.scale) if forecaster.scale else None,
        "note_parameter_count": "membership weights plus combiner weights when weighted",
    }
    log.info(
        "%s: rmse_train=%.6f rmse_test=%.6f params=%d wall=%.3fs",
        series.name,
        rmse_train,
        rmse_test,
        parameter_count,
        wall,
    )
    return ForecastReport(
        steps=steps,
        rmse_train=rmse_train,
        rmse_test=rmse_test,
        parameter_count=parameter_count,
        wall_time_s=wall,
        config=config,
        extras=extras,
    )


# -- config files ----------------------------------------------------------

_BOOL = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}

_EVOLUTION_KEYS = ("window", "add_threshold", "remove_threshold", "n_min", "n_max")


def parse_config_text(text: str) -> RunConfig:
    """Parse a flat ``key = value`` file into a RunConfig.

    Keys mirror the RunConfig field names; evolution policy fields are
    flattened as ``evolution_window`` etc., gated by ``evolution = true``.
    Lines starting with ``#`` and blank lines are ignored.
    """
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"config line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        raw[key.strip()] = value.strip()

    ints = {"n_nodes", "h", "q", "train_len", "test_len", "seed"}
    floats = {"alpha", "eta_lambda"}
    bools = {"weighted", "freeze_test"}
    kwargs: dict = {}
    evolution_kwargs: dict = {}
    evolution_on = False
    for key, value in raw.items():
        if key == "evolution":
            if value.lower() == "auto":
                evolution_on = True
            else:
                evolution_on = _parse_bool(value, key)
        elif key.startswith("evolution_"):
            sub = key[len("evolution_") :]
            if sub not in _EVOLUTION_KEYS:
                raise ParseError(f"unknown evolution key {key!r}")
            evolution_kwargs[sub] = (
                int(value) if sub in ("window", "n_min", "n_max") else float(value)
            )
        elif key in ints:
            kwargs[key] = _parse_num(int, value, key)
        elif key in floats:
            kwargs[key] = _parse_num(float, value, key)
        elif key in bools:
            kwargs[key] = _parse_bool(value, key)
        elif key in ("node_kind", "learner", "training", "normalization"):
            kwargs[key] = value
        else:
            raise ParseError(f"unknown config key {key!r}")
    if evolution_on:
        # explicit thresholds make a fixed policy; otherwise they track
        # the long-run RMSE during the run
        kwargs["evolution"] = (
            EvolutionPolicy(**evolution_kwargs) if evolution_kwargs else "auto"
        )
    try:
        return RunConfig(**kwargs)
    except TypeError as exc:
        raise ParseError(f"incomplete config: {exc}") from None


def _parse_bool(value: str, key: str) -> bool:
    v = value.lower()
    if v not in _BOOL:
        raise ParseError(f"config key {key!r}: expected boolean, got {value!r}")
    return _BOOL[v]


def _parse_num(cast, value: str, key: str):
    try:
        return cast(value)
    except ValueError:
        raise ParseError(f"config key {key!r}: bad number {value!r}") from None


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())

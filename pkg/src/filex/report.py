"""Configuration files, CSV persistence, table rendering, and SVG plots.

Config files are flat ``key = value`` text; unknown keys are rejected. CSVs
carry one row per run with floats rendered at 17 significant digits so that
parsing them back is lossless and rewriting them is byte-identical. Plots are
emitted as self-contained SVG 1.1 scatter charts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

from .core import ProcessParams
from .errors import ConfigError, CsvFormatError, InvalidInputError, UndefinedCorrelationError
from .stats import CorrelationResult, PairedSeries, kendall_tau
from .sweep import ExperimentSpec, RunRecord, SweepSpec, canonical_experiments

CSV_HEADER = "experiment,param_name,param_value,replicate,seed,entropy_bits"

# Correlation/plot orientation per swept hyperparameter: alpha sweeps are
# reported against 1/alpha, matching the sign convention of the canonical
# correlation table.
AXIS_LABELS = {"alpha": "1/alpha", "beta": "beta", "s": "S", "n": "N"}

CANONICAL_NAMES = ("alpha", "beta", "s", "n")


# -- config files -----------------------------------------------------------

def parse_config_text(text: str) -> dict[str, str]:
    """Parse a flat key=value document into an ordered mapping of raw strings."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"invalid line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"invalid line {lineno}: empty key")
        if key in entries:
            raise ConfigError(f"duplicate key: {key}")
        entries[key] = value
    return entries


def load_config(path) -> dict[str, str]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def _parse_typed(key: str, raw: str, kind: str):
    try:
        if kind == "int":
            value = int(raw)
        elif kind == "float":
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError("not finite")
        elif kind == "bool":
            if raw not in ("true", "false"):
                raise ValueError("expected 'true' or 'false'")
            value = raw == "true"
        elif kind == "mode":
            if raw not in ("reference", "fast"):
                raise ValueError("expected 'reference' or 'fast'")
            value = raw
        else:
            value = raw
    except ValueError as exc:
        raise ConfigError(f"invalid value for {key}: {raw!r} ({exc})") from None
    return value


def _take(cfg: dict[str, str], schema: dict[str, tuple[str, bool]]) -> dict:
    """Validate keys against a schema of name -> (type, required)."""
    for key in cfg:
        if key not in schema:
            raise ConfigError(f"unknown key: {key}")
    out = {}
    for key, (kind, required) in schema.items():
        if key in cfg:
            out[key] = _parse_typed(key, cfg[key], kind)
        elif required:
            raise ConfigError(f"missing key: {key}")
    return out


@dataclass(frozen=True)
class RunConfig:
    params: ProcessParams
    seed: int
    mode: str = "fast"
    show_distribution: bool = False


_RUN_SCHEMA = {
    "alpha": ("float", True),
    "beta": ("int", True),
    "s": ("int", True),
    "n": ("int", True),
    "seed": ("int", True),
    "mode": ("mode", False),
    "show_distribution": ("bool", False),
}


def run_config_from_mapping(cfg: dict[str, str]) -> RunConfig:
    values = _take(cfg, _RUN_SCHEMA)
    try:
        params = ProcessParams(values["alpha"], values["beta"], values["s"], values["n"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(
        params=params,
        seed=values["seed"],
        mode=values.get("mode", "fast"),
        show_distribution=values.get("show_distribution", False),
    )


_CANONICAL_SCHEMA = {
    "experiment": ("str", True),
    "master_seed": ("int", False),
    "replicates": ("int", False),
}

_CUSTOM_SCHEMA = {
    "name": ("str", True),
    "varied": ("str", True),
    "low": ("float", True),
    "high": ("float", True),
    "steps": ("int", True),
    "integral": ("bool", False),
    "alpha": ("float", False),
    "beta": ("int", False),
    "s": ("int", False),
    "n": ("int", False),
    "alpha_coupled_to_s": ("bool", False),
    "correlate_inverse": ("bool", False),
    "replicates": ("int", False),
    "master_seed": ("int", False),
}


def experiment_config_from_mapping(cfg: dict[str, str], seed_override: int | None = None) -> ExperimentSpec:
    """Build an ExperimentSpec from a canonical-name or explicit config."""
    if "experiment" in cfg:
        values = _take(cfg, _CANONICAL_SCHEMA)
        name = values["experiment"]
        if name not in CANONICAL_NAMES:
            raise ConfigError(f"invalid value for experiment: {name!r} (expected one of {', '.join(CANONICAL_NAMES)})")
        seed = seed_override if seed_override is not None else values.get("master_seed")
        if seed is None:
            raise ConfigError("missing key: master_seed")
        spec = next(s for s in canonical_experiments(seed) if s.name == name)
        if "replicates" in values and values["replicates"] != spec.replicates:
            spec = _with_replicates(spec, values["replicates"])
        return spec

    values = _take(cfg, _CUSTOM_SCHEMA)
    seed = seed_override if seed_override is not None else values.get("master_seed")
    if seed is None:
        raise ConfigError("missing key: master_seed")
    varied = values["varied"]
    fixed = {k: values.get(k) for k in ("alpha", "beta", "s", "n")}
    if fixed.get(varied) is not None:
        raise ConfigError(f"varied parameter {varied!r} must not also be given a fixed value")
    try:
        sweep = SweepSpec(values["low"], values["high"], values["steps"], values.get("integral", False))
        return ExperimentSpec(
            name=values["name"],
            varied=varied,
            sweep=sweep,
            alpha=fixed["alpha"],
            beta=fixed["beta"],
            s=fixed["s"],
            n=fixed["n"],
            alpha_coupled_to_s=values.get("alpha_coupled_to_s", False),
            correlate_inverse=values.get("correlate_inverse", False),
            replicates=values.get("replicates", 1),
            master_seed=seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _with_replicates(spec: ExperimentSpec, replicates: int) -> ExperimentSpec:
    return ExperimentSpec(
        name=spec.name, varied=spec.varied, sweep=spec.sweep,
        alpha=spec.alpha, beta=spec.beta, s=spec.s, n=spec.n,
        alpha_coupled_to_s=spec.alpha_coupled_to_s,
        correlate_inverse=spec.correlate_inverse,
        replicates=replicates, master_seed=spec.master_seed,
    )


# -- CSV persistence --------------------------------------------------------

def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def records_to_csv(spec: ExperimentSpec, records: Sequence[RunRecord]) -> str:
    """Render records as CSV text (deterministic, round-trip exact floats)."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            f"{r.experiment},{spec.varied},{_fmt(r.param_value)},{r.replicate},{r.seed},{_fmt(r.entropy_bits)}"
        )
    return "\n".join(lines) + "\n"


def write_records_csv(path, spec: ExperimentSpec, records: Sequence[RunRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(records_to_csv(spec, records))


@dataclass(frozen=True)
class CsvRow:
    experiment: str
    param_name: str
    param_value: float
    replicate: int
    seed: int
    entropy_bits: float


def parse_records_csv(text: str) -> list[CsvRow]:
    lines = text.splitlines()
    if not lines:
        raise CsvFormatError(1, "empty file")
    if lines[0] != CSV_HEADER:
        raise CsvFormatError(1, f"bad header, expected {CSV_HEADER!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 6:
            raise CsvFormatError(lineno, f"expected 6 fields, got {len(parts)}")
        experiment, param_name, param_value, replicate, seed, entropy = parts
        try:
            rows.append(
                CsvRow(experiment, param_name, float(param_value), int(replicate), int(seed), float(entropy))
            )
        except ValueError as exc:
            raise CsvFormatError(lineno, str(exc)) from None
    return rows


def read_records_csv(path) -> list[CsvRow]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_records_csv(fh.read())


# -- correlation table ------------------------------------------------------

def _group_rows(rows: Iterable[CsvRow]) -> dict[tuple[str, str], list[CsvRow]]:
    groups: dict[tuple[str, str], list[CsvRow]] = {}
    for row in rows:
        groups.setdefault((row.experiment, row.param_name), []).append(row)
    return groups


def correlation_table_from_rows(rows: Iterable[CsvRow]) -> list[tuple[str, str, CorrelationResult | str]]:
    """Per-experiment (name, axis label, correlation) from parsed CSV rows.

    Alpha sweeps correlate against 1/alpha. A group whose correlation is
    undefined yields a message string in place of the result.
    """
    table: list[tuple[str, str, CorrelationResult | str]] = []
    for (experiment, param_name), group in _group_rows(rows).items():
        invert = param_name == "alpha"
        label = AXIS_LABELS.get(param_name, param_name)
        xs = [1.0 / r.param_value if invert else r.param_value for r in group]
        ys = [r.entropy_bits for r in group]
        try:
            result: CorrelationResult | str = kendall_tau(PairedSeries(xs, ys))
        except (UndefinedCorrelationError, InvalidInputError) as exc:
            result = f"undefined ({exc})"
        table.append((experiment, label, result))
    return table


def render_correlation_table(table: Sequence[tuple[str, str, CorrelationResult | str]]) -> str:
    width = max([len("experiment")] + [len(name) for name, _, _ in table])
    lines = [f"{'experiment':<{width}}  {'x':<8}  {'tau':>6}  {'p_value':>9}  {'runs':>5}"]
    for name, label, result in table:
        if isinstance(result, CorrelationResult):
            lines.append(
                f"{name:<{width}}  {label:<8}  {result.tau:+6.2f}  {result.p_value:9.2e}  {result.n:5d}"
            )
        else:
            lines.append(f"{name:<{width}}  {label:<8}  {result}")
    return "\n".join(lines) + "\n"


# -- SVG scatter plots ------------------------------------------------------

@dataclass(frozen=True)
class PlotSpec:
    """Scatter plot of entropy against a swept hyperparameter."""

    points: Sequence[tuple[float, float]]
    x_label: str
    log_x: bool = True
    y_max: float = 6.0
    width: int = 640
    height: int = 440
    marker_color: str = "#e66100"
    title: str = ""

    def __post_init__(self):
        if len(self.points) == 0:
            raise InvalidInputError("plot requires at least one record")
        if self.y_max <= 0.0:
            raise InvalidInputError(f"y_max must be positive, got {self.y_max}")
        if self.log_x and any(x <= 0.0 for x, _ in self.points):
            raise InvalidInputError("log-x plot requires positive x values")


def _x_ticks(lo: float, hi: float, log_x: bool) -> list[float]:
    if log_x:
        first = math.ceil(math.log10(lo) - 1e-9)
        last = math.floor(math.log10(hi) + 1e-9)
        ticks = [10.0 ** e for e in range(first, last + 1)]
        return ticks or [lo, hi]
    span = hi - lo
    return [lo + span * i / 4 for i in range(5)] if span > 0 else [lo]


def _tick_text(value: float) -> str:
    exponent = math.log10(value) if value > 0 else 0.0
    if value > 0 and abs(exponent - round(exponent)) < 1e-9 and abs(round(exponent)) >= 3:
        return f"1e{round(exponent)}"
    return f"{value:g}"


def render_svg_scatter(spec: PlotSpec) -> str:
    """Self-contained SVG text: axes, gridlines, one circle per record."""
    left, right, top, bottom = 62.0, 16.0, 30.0, 46.0
    plot_w = spec.width - left - right
    plot_h = spec.height - top - bottom

    xs = [p[0] for p in spec.points]
    lo, hi = min(xs), max(xs)
    if spec.log_x:
        llo, lhi = math.log10(lo), math.log10(hi)
        if lhi - llo < 1e-12:
            llo, lhi = llo - 0.5, lhi + 0.5
        to_fx = lambda v: (math.log10(v) - llo) / (lhi - llo)
    else:
        if hi - lo < 1e-12:
            lo, hi = lo - 0.5, hi + 0.5
        to_fx = lambda v: (v - lo) / (hi - lo)

    def px(v: float) -> float:
        return left + to_fx(v) * plot_w

    def py(v: float) -> float:
        return top + (1.0 - v / spec.y_max) * plot_h

    out = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">'
    )
    out.append(f'<rect width="{spec.width}" height="{spec.height}" fill="white"/>')
    if spec.title:
        out.append(
            f'<text x="{spec.width / 2:.2f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{escape(spec.title)}</text>'
        )

    y_step = 1.0 if spec.y_max <= 12 else math.ceil(spec.y_max / 10)
    tick = 0.0
    while tick <= spec.y_max + 1e-9:
        y = py(min(tick, spec.y_max))
        out.append(
            f'<line x1="{left:.2f}" y1="{y:.2f}" x2="{left + plot_w:.2f}" y2="{y:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{left - 8:.2f}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_tick_text(tick)}</text>'
        )
        tick += y_step
    for tv in _x_ticks(lo, hi, spec.log_x):
        x = px(tv)
        out.append(
            f'<line x1="{x:.2f}" y1="{top:.2f}" x2="{x:.2f}" y2="{top + plot_h:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{top + plot_h + 16:.2f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_tick_text(tv)}</text>'
        )

    out.append(
        f'<rect x="{left:.2f}" y="{top:.2f}" width="{plot_w:.2f}" height="{plot_h:.2f}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    for x_val, y_val in spec.points:
        y_clamped = min(max(y_val, 0.0), spec.y_max)
        out.append(
            f'<circle cx="{px(x_val):.2f}" cy="{py(y_clamped):.2f}" r="2.5" '
            f'fill="{spec.marker_color}" fill-opacity="0.75"/>'
        )
    out.append(
        f'<text x="{left + plot_w / 2:.2f}" y="{spec.height - 10:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{escape(spec.x_label)}</text>'
    )
    out.append(
        f'<text x="16" y="{top + plot_h / 2:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 16 {top + plot_h / 2:.2f})">entropy (bits)</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg_scatter(path, spec: PlotSpec) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_svg_scatter(spec))


def plot_spec_from_rows(rows: Sequence[CsvRow], y_max: float | None = None, title: str = "") -> PlotSpec:
    """Plot input from CSV rows; alpha sweeps are plotted against 1/alpha.

    The y ceiling defaults to the smallest whole bit count covering the data
    (the CSV schema does not carry the lexicon size).
    """
    if not rows:
        raise InvalidInputError("plot requires at least one record")
    param_name = rows[0].param_name
    invert = param_name == "alpha"
    points = [
        (1.0 / r.param_value if invert else r.param_value, r.entropy_bits)
        for r in rows
    ]
    if y_max is None:
        y_max = max(1.0, math.ceil(max(r.entropy_bits for r in rows) - 1e-9))
    return PlotSpec(points=points, x_label=AXIS_LABELS.get(param_name, param_name), y_max=float(y_max), title=title)

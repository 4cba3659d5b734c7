"""Logarithmic hyperparameter sweeps and the four canonical entropy experiments.

A sweep point i of an n-step sweep from ``low`` to ``high`` takes the value
``low * (high/low) ** (i / (n - 1))``, floored when the hyperparameter is
integer-valued. Each (point, replicate) pair derives its own 64-bit seed from
the experiment's master seed, so runs are independent tasks whose results do
not depend on worker count or scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import ProcessParams, make_stream, run
from .errors import InvalidParameterError
from .stats import CorrelationResult, PairedSeries, kendall_tau, shannon_entropy_bits

VARIED_NAMES = ("alpha", "beta", "s", "n")

# Coupled alpha for lexicon-size sweeps: every symbol starts at the same
# per-symbol weight regardless of s.
ALPHA_PER_SYMBOL_COUPLING = 5e-3

REDUCED_STRIDE = 4


@dataclass(frozen=True)
class SweepSpec:
    """Inclusive logarithmic sweep definition."""

    low: float
    high: float
    steps: int
    integral: bool = False

    def __post_init__(self):
        if not (isinstance(self.steps, int) and not isinstance(self.steps, bool)):
            raise InvalidParameterError(f"steps must be an integer, got {self.steps!r}")
        if self.steps < 2:
            raise InvalidParameterError(f"steps must be >= 2, got {self.steps}")
        for name in ("low", "high"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0.0:
                raise InvalidParameterError(f"{name} must be positive and finite, got {v}")
            object.__setattr__(self, name, v)
        if self.integral and math.floor(self.low) < 1:
            raise InvalidParameterError(f"integral sweep requires floor(low) >= 1, got low={self.low}")


def log_sweep(spec: SweepSpec) -> list:
    """Evaluate the sweep; endpoints are exactly ``low`` and ``high``.

    Integral sweeps floor every value and keep duplicates.
    """
    n = spec.steps
    ratio = spec.high / spec.low
    values = [spec.low * ratio ** (i / (n - 1)) for i in range(n)]
    values[0] = spec.low
    values[-1] = spec.high
    if spec.integral:
        return [math.floor(v) for v in values]
    return values


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: a swept hyperparameter, the fixed others, and seeding.

    The varied parameter's field must be None. ``alpha_coupled_to_s`` replaces
    a fixed alpha with ``5e-3 * s`` at every point of an s sweep.
    ``correlate_inverse`` reports correlation against 1/alpha for alpha sweeps.
    """

    name: str
    varied: str
    sweep: SweepSpec
    alpha: float | None = None
    beta: int | None = None
    s: int | None = None
    n: int | None = None
    alpha_coupled_to_s: bool = False
    correlate_inverse: bool = False
    replicates: int = 1
    master_seed: int = 0

    def __post_init__(self):
        if self.varied not in VARIED_NAMES:
            raise InvalidParameterError(f"varied must be one of {VARIED_NAMES}, got {self.varied!r}")
        if getattr(self, self.varied) is not None:
            raise InvalidParameterError(f"varied parameter {self.varied!r} must not also be fixed")
        if self.alpha_coupled_to_s:
            if self.varied != "s":
                raise InvalidParameterError("alpha_coupled_to_s is only valid when varying s")
            if self.alpha is not None:
                raise InvalidParameterError("alpha must be omitted when coupled to s")
        if self.correlate_inverse and self.varied != "alpha":
            raise InvalidParameterError("correlate_inverse is only valid when varying alpha")
        for field_name in VARIED_NAMES:
            if field_name == self.varied:
                continue
            if field_name == "alpha" and self.alpha_coupled_to_s:
                continue
            if getattr(self, field_name) is None:
                raise InvalidParameterError(f"fixed parameter {field_name!r} is required")
        if not (isinstance(self.replicates, int) and not isinstance(self.replicates, bool)) or self.replicates < 1:
            raise InvalidParameterError(f"replicates must be an integer >= 1, got {self.replicates!r}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise InvalidParameterError(f"master_seed must be in [0, 2**64), got {self.master_seed}")

    def params_at(self, value) -> ProcessParams:
        """Process parameters for one sweep value of the varied hyperparameter."""
        fields = {
            "alpha": self.alpha,
            "beta": self.beta,
            "s": self.s,
            "n": self.n,
            self.varied: value,
        }
        if self.alpha_coupled_to_s:
            fields["alpha"] = ALPHA_PER_SYMBOL_COUPLING * fields["s"]
        if fields[self.varied] is None:
            raise InvalidParameterError(f"no value supplied for varied parameter {self.varied!r}")
        return ProcessParams(**fields)


@dataclass(frozen=True)
class RunRecord:
    """One completed run of an experiment."""

    experiment: str
    param_value: float
    replicate: int
    seed: int
    entropy_bits: float


def canonical_experiments(master_seed: int) -> list[ExperimentSpec]:
    """The four canonical experiments, one per hyperparameter.

    (a) alpha from 1e-4 to 1e-1 over 200 points (beta=10, s=64, n=1000),
        correlated against 1/alpha;
    (b) beta from 2**3 to 2**15 over 600 integer points (alpha=1e-3, s=64,
        n=10000);
    (c) s from 2**3 to 2**8 over 400 integer points (beta=10, n=1000) with
        alpha coupled to 5e-3 * s;
    (d) n from 1e2 to 1e6 over 400 integer points (alpha=1, beta=5, s=64).
    """
    seed = int(master_seed)
    return [
        ExperimentSpec(
            name="alpha", varied="alpha", sweep=SweepSpec(1e-4, 1e-1, 200),
            beta=10, s=64, n=1000, correlate_inverse=True, master_seed=seed,
        ),
        ExperimentSpec(
            name="beta", varied="beta", sweep=SweepSpec(2**3, 2**15, 600, integral=True),
            alpha=1e-3, s=64, n=10000, master_seed=seed,
        ),
        ExperimentSpec(
            name="s", varied="s", sweep=SweepSpec(2**3, 2**8, 400, integral=True),
            beta=10, n=1000, alpha_coupled_to_s=True, master_seed=seed,
        ),
        ExperimentSpec(
            name="n", varied="n", sweep=SweepSpec(1e2, 1e6, 400, integral=True),
            alpha=1.0, beta=5, s=64, master_seed=seed,
        ),
    ]


_MASK64 = (1 << 64) - 1


def _splitmix64(value: int) -> int:
    """One round of the SplitMix64 integer mixer."""
    z = (value + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_run_seed(master_seed: int, point_index: int, replicate: int) -> int:
    """Deterministic 64-bit seed for one (sweep point, replicate) task.

    Chains SplitMix64 over the three inputs, so the seed depends on nothing
    but them; execution order and worker count cannot change it.
    """
    h = _splitmix64(int(master_seed) & _MASK64)
    h = _splitmix64(h ^ (int(point_index) & _MASK64))
    h = _splitmix64(h ^ (int(replicate) & _MASK64))
    return h


def _entropy_task(task: tuple[ProcessParams, int, str]) -> float:
    params, seed, mode = task
    return shannon_entropy_bits(run(params, make_stream(seed), mode))


def run_experiment(
    spec: ExperimentSpec,
    mode: str = "fast",
    workers: int = 1,
    stride: int = 1,
) -> list[RunRecord]:
    """Execute every (sweep point, replicate) run and collect entropy records.

    ``stride`` keeps every stride-th sweep point (the reduced preset uses 4);
    point indices from the full sweep feed the seed derivation, so a strided
    record list is exactly a subset of the full one. Output order is (point,
    replicate) regardless of ``workers``.
    """
    if stride < 1:
        raise InvalidParameterError(f"stride must be >= 1, got {stride}")
    if workers < 1:
        raise InvalidParameterError(f"workers must be >= 1, got {workers}")
    values = log_sweep(spec.sweep)

    tasks = []
    keys = []
    for index in range(0, len(values), stride):
        value = values[index]
        try:
            params = spec.params_at(value)
        except InvalidParameterError as exc:
            raise InvalidParameterError(
                f"sweep point {index} ({spec.varied}={value!r}): {exc}"
            ) from exc
        for replicate in range(spec.replicates):
            seed = derive_run_seed(spec.master_seed, index, replicate)
            keys.append((value, replicate, seed))
            tasks.append((params, seed, mode))

    if workers == 1:
        entropies = [_entropy_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entropies = list(pool.map(_entropy_task, tasks))

    return [
        RunRecord(spec.name, float(value), replicate, seed, entropy)
        for (value, replicate, seed), entropy in zip(keys, entropies)
    ]


def correlation_series(spec: ExperimentSpec, records: Sequence[RunRecord]) -> PairedSeries:
    """Paired (x, entropy) series for one experiment's records.

    x is the swept value, or its reciprocal when the experiment correlates
    against 1/alpha.
    """
    xs = [1.0 / r.param_value if spec.correlate_inverse else r.param_value for r in records]
    ys = [r.entropy_bits for r in records]
    return PairedSeries(xs, ys)


def correlation_table(
    experiments: Iterable[tuple[ExperimentSpec, Sequence[RunRecord]]],
) -> list[tuple[str, CorrelationResult]]:
    """Kendall correlation between the swept hyperparameter and entropy."""
    return [
        (spec.name, kendall_tau(correlation_series(spec, records)))
        for spec, records in experiments
    ]

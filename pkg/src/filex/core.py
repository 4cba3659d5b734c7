"""Finite-lexicon self-reinforcing weight process.

A lexicon of ``s`` symbols starts with equal weights ``alpha / s``. Each
iteration freezes a copy of the weights, draws ``beta`` symbols i.i.d. from the
categorical distribution proportional to that frozen copy, and adds ``1/beta``
to the weight of every drawn symbol, so each iteration adds exactly one unit of
mass and the unnormalized sum after ``k`` iterations is ``alpha + k``. After
``n`` iterations the weights are normalized and returned.

Two distributionally identical samplers are provided: a reference path that
draws each symbol by inverse CDF over an indexed prefix-sum tree, and a fast
path that draws the per-iteration hit counts as a single multinomial vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, InvalidParameterError

# Deterministic uniform-variate stream. PCG64 seeded through SeedSequence:
# the same 64-bit seed always reproduces the same variate sequence.
RandomStream = np.random.Generator

_MAX_SEED = 2**64


def make_stream(seed: int) -> RandomStream:
    """Create the package's deterministic random stream from a 64-bit seed."""
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise InvalidParameterError(f"seed must be an integer, got {seed!r}")
    if not 0 <= int(seed) < _MAX_SEED:
        raise InvalidParameterError(f"seed must be in [0, 2**64), got {seed}")
    return np.random.default_rng(int(seed))


def _check_count(name: str, value, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InvalidParameterError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise InvalidParameterError(f"{name} must be >= {minimum}, got {value}")
    return value


@dataclass(frozen=True)
class ProcessParams:
    """The four process hyperparameters.

    alpha: total initial weight mass shared equally by all symbols.
    beta:  samples drawn (and 1/beta increments applied) per iteration.
    s:     lexicon size, i.e. number of weights.
    n:     number of iterations.
    """

    alpha: float
    beta: int
    s: int
    n: int

    def __post_init__(self):
        alpha = self.alpha
        if isinstance(alpha, bool) or not isinstance(alpha, (int, float, np.floating, np.integer)):
            raise InvalidParameterError(f"alpha must be a positive real, got {alpha!r}")
        alpha = float(alpha)
        if not math.isfinite(alpha) or alpha <= 0.0:
            raise InvalidParameterError(f"alpha must be positive and finite, got {alpha}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", _check_count("beta", self.beta, 1))
        object.__setattr__(self, "s", _check_count("s", self.s, 1))
        object.__setattr__(self, "n", _check_count("n", self.n, 0))


@dataclass(frozen=True)
class WeightState:
    """Unnormalized weights plus the number of completed iterations."""

    weights: np.ndarray
    iteration: int

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise InvalidInputError("weights must be a non-empty 1-d array")
        if not np.all(np.isfinite(w)) or not np.all(w > 0.0):
            raise InvalidInputError("weights must all be positive and finite")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "iteration", _check_count("iteration", self.iteration, 0))

    @property
    def total(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True)
class Distribution:
    """A normalized categorical distribution over the lexicon."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise InvalidInputError("probs must be a non-empty 1-d array")
        if not np.all(np.isfinite(p)) or not np.all(p > 0.0):
            raise InvalidInputError("probs must all be positive and finite")
        if abs(float(p.sum()) - 1.0) > 1e-12:
            raise InvalidInputError(f"probs must sum to 1 within 1e-12, got {p.sum()!r}")
        object.__setattr__(self, "probs", p)

    def __len__(self) -> int:
        return self.probs.size


class PrefixSumTree:
    """Fenwick tree over positive weights.

    Supports O(log s) point updates and O(log s) inverse-CDF draws: ``find``
    locates the smallest index whose inclusive prefix sum exceeds a target, so
    a uniform variate u maps to index i with probability weights[i] / total,
    exactly as a linear scan over running prefix sums would.
    """

    __slots__ = ("_size", "_tree", "_total", "_topbit")

    def __init__(self, weights):
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise InvalidInputError("weights must be a non-empty 1-d array")
        if not np.all(np.isfinite(w)) or not np.all(w > 0.0):
            raise InvalidInputError("weights must all be positive and finite")
        n = int(w.size)
        self._size = n
        tree = [0.0] * (n + 1)
        tree[1:] = w.tolist()
        for i in range(1, n + 1):
            j = i + (i & -i)
            if j <= n:
                tree[j] += tree[i]
        self._tree = tree
        self._total = float(w.sum())
        self._topbit = 1 << (n.bit_length() - 1)

    def __len__(self) -> int:
        return self._size

    @property
    def total(self) -> float:
        return self._total

    def add(self, index: int, delta: float) -> None:
        if not 0 <= index < self._size:
            raise InvalidInputError(f"index {index} out of range for size {self._size}")
        tree = self._tree
        i = index + 1
        n = self._size
        while i <= n:
            tree[i] += delta
            i += i & -i
        self._total += delta

    def prefix(self, count: int) -> float:
        """Sum of the first ``count`` weights."""
        if not 0 <= count <= self._size:
            raise InvalidInputError(f"count {count} out of range for size {self._size}")
        tree = self._tree
        acc = 0.0
        i = count
        while i > 0:
            acc += tree[i]
            i -= i & -i
        return acc

    def find(self, target: float) -> int:
        """Smallest index whose inclusive prefix sum exceeds ``target``."""
        tree = self._tree
        n = self._size
        pos = 0
        rem = target
        bit = self._topbit
        while bit:
            nxt = pos + bit
            if nxt <= n and tree[nxt] <= rem:
                rem -= tree[nxt]
                pos = nxt
            bit >>= 1
        # pos == size only when target >= total (u rounded up to 1.0 * total)
        return min(pos, n - 1)

    def sample(self, u: float) -> int:
        """Map one uniform variate in [0, 1) to a drawn index."""
        return self.find(u * self._total)


def sample_categorical(weights, rng: RandomStream) -> int:
    """Draw one index with probability proportional to its weight.

    Consumes exactly one uniform variate and maps it through the inverse CDF
    of the prefix sums.
    """
    return PrefixSumTree(weights).sample(rng.random())


def init_weights(params: ProcessParams) -> WeightState:
    """Starting state: all ``s`` weights equal to ``alpha / s``."""
    per_symbol = params.alpha / params.s
    if per_symbol <= 0.0:  # underflow guard for absurdly small alpha
        raise InvalidParameterError(f"alpha/s underflows to zero (alpha={params.alpha}, s={params.s})")
    return WeightState(np.full(params.s, per_symbol), 0)


def _reference_iterate(weights: np.ndarray, beta: int, rng: RandomStream, sink: list | None = None) -> np.ndarray:
    """One iteration via per-draw inverse-CDF sampling from the frozen weights.

    Building the tree from the iteration-start weights is the frozen copy: the
    beta draws all see the same distribution, while increments accumulate in a
    separate array.
    """
    tree = PrefixSumTree(weights)
    new = weights.copy()
    inc = 1.0 / beta
    for _ in range(beta):
        i = tree.sample(rng.random())
        new[i] += inc
        if sink is not None:
            sink.append(i)
    return new


def _fast_iterate(weights: np.ndarray, beta: int, rng: RandomStream) -> np.ndarray:
    """One iteration via a single multinomial draw of all beta hit counts.

    The frozen-copy draws are i.i.d., so their histogram is multinomial with
    the iteration-start probabilities; adding counts/beta reproduces the
    reference increment distribution exactly at O(s) cost per iteration.
    """
    probs = weights / weights.sum()
    counts = rng.multinomial(beta, probs)
    return weights + counts / beta


def step(state: WeightState, beta: int, rng: RandomStream) -> WeightState:
    """Advance one iteration with the reference per-draw sampler."""
    beta = _check_count("beta", beta, 1)
    return WeightState(_reference_iterate(state.weights, beta, rng), state.iteration + 1)


def step_fast(state: WeightState, beta: int, rng: RandomStream) -> WeightState:
    """Advance one iteration with the multinomial fast path."""
    beta = _check_count("beta", beta, 1)
    return WeightState(_fast_iterate(state.weights, beta, rng), state.iteration + 1)


def _normalize(weights: np.ndarray) -> Distribution:
    # The floating sum tracks alpha + n to ~1e-12 relative; dividing by it
    # keeps the output summing to 1 within a few ulp for any run length.
    return Distribution(weights / weights.sum())


def run(params: ProcessParams, rng: RandomStream, mode: str = "fast") -> Distribution:
    """Run the whole process and return the normalized final distribution.

    ``mode="reference"`` draws every symbol individually; ``mode="fast"`` draws
    per-iteration multinomial counts. Both modes apply the same iteration
    kernels as :func:`step` / :func:`step_fast`, so a run is bit-identical to
    folding the corresponding step over the initial state.
    """
    if mode not in ("reference", "fast"):
        raise InvalidParameterError(f"mode must be 'reference' or 'fast', got {mode!r}")
    w = init_weights(params).weights
    if mode == "fast":
        for _ in range(params.n):
            w = _fast_iterate(w, params.beta, rng)
    else:
        for _ in range(params.n):
            w = _reference_iterate(w, params.beta, rng, None)
    return _normalize(w)


@dataclass(frozen=True)
class TraceResult:
    """Reference run with its draw trace and (possibly rescaled) final state."""

    distribution: Distribution
    state: WeightState
    indices: np.ndarray = field(repr=False)


def run_traced(params: ProcessParams, rng: RandomStream, increment_scale: float = 1.0) -> TraceResult:
    """Reference-mode run that records every drawn index.

    ``increment_scale=c`` runs the process with initial weights ``c*alpha/s``
    and per-draw increments ``c/beta``. Because the categorical distribution
    is invariant to rescaling all weights, the draw sequence and the final
    normalized distribution are the same for every c; the common factor is
    therefore carried outside the trajectory arithmetic and materialized only
    in the returned state's weights. This makes the invariance exact: equal
    seeds give bit-identical traces and distributions for any scale.
    """
    scale = float(increment_scale)
    if not math.isfinite(scale) or scale <= 0.0:
        raise InvalidParameterError(f"increment_scale must be positive and finite, got {increment_scale!r}")
    sink: list[int] = []
    w = init_weights(params).weights
    for _ in range(params.n):
        w = _reference_iterate(w, params.beta, rng, sink)
    dist = _normalize(w)
    final = WeightState(w if scale == 1.0 else scale * w, params.n)
    return TraceResult(dist, final, np.asarray(sink, dtype=np.int64))

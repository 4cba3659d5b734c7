"""Acceptance suite: one test (or parametrized row) per numbered criterion.

Each test prints a ``[criterion N] PASS/FAIL`` line with the measured values
(visible with ``pytest -s``) and then asserts the stated tolerance. Criteria
1 and 9 encode the reference correlation targets and curve shapes for the
four canonical sweeps. The alpha and n rows of the canonical grid produce a
nearly flat entropy response (the whole transient of the n row lies below its
sweep's lower bound), so their targets are not reached by this process; the
beta and s rows reproduce within tolerance. The failing assertions are kept
at their stated windows rather than widened to fit; the assertion messages
carry the measured values.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from filex.core import ProcessParams, init_weights, make_stream, run, run_traced, step, step_fast
from filex.report import (
    correlation_table_from_rows,
    parse_records_csv,
    records_to_csv,
    render_correlation_table,
)
from filex.stats import PairedSeries, kendall_tau, shannon_entropy_bits
from filex.sweep import SweepSpec, ExperimentSpec, log_sweep, run_experiment

from conftest import MASTER_SEED, criterion_line
from oracles import (
    brute_force_tau_b,
    chi2_gof_pvalue,
    enumerate_outcome_distribution,
    recover_hit_counts,
)

TAU_TARGETS = {"alpha": -0.87, "beta": 0.95, "s": 0.77, "n": -0.53}
TAU_TOLERANCE = 0.08
REDUCED_TOLERANCE = 0.12


# -- criterion 1: correlation-table reproduction ------------------------------

@pytest.fixture(scope="module")
def canonical_correlations(canonical_records):
    """Correlations computed through the CSV + table path (cmd_table's core)."""
    rows = []
    for spec, records in canonical_records.values():
        rows.extend(parse_records_csv(records_to_csv(spec, records)))
    table = correlation_table_from_rows(rows)
    print()
    print(render_correlation_table(table))
    return {name: result for name, _, result in table}


@pytest.mark.parametrize("name", ["alpha", "beta", "s", "n"])
def test_criterion_1_canonical_tau(name, canonical_correlations):
    result = canonical_correlations[name]
    target = TAU_TARGETS[name]
    ok = abs(result.tau - target) <= TAU_TOLERANCE and result.p_value < 0.005
    criterion_line(
        f"criterion 1:{name}",
        ok,
        f"tau = {result.tau:+.4f} (target {target:+.2f} +- {TAU_TOLERANCE}), p = {result.p_value:.3e}",
    )
    assert abs(result.tau - target) <= TAU_TOLERANCE, (
        f"tau({name}) = {result.tau:+.4f}, outside {target:+.2f} +- {TAU_TOLERANCE}"
    )
    assert result.p_value < 0.005, f"p({name}) = {result.p_value:.3e} >= 0.005"


@pytest.mark.parametrize("name", ["alpha", "beta", "s", "n"])
def test_criterion_1_reduced_preset(name, canonical_records):
    # stride-4 records are exactly the reduced preset's output
    spec, records = canonical_records[name]
    reduced = records[:: 4 * spec.replicates]
    xs = [1.0 / r.param_value if spec.correlate_inverse else r.param_value for r in reduced]
    ys = [r.entropy_bits for r in reduced]
    result = kendall_tau(PairedSeries(xs, ys))
    target = TAU_TARGETS[name]
    sign_ok = math.copysign(1, result.tau) == math.copysign(1, target)
    window_ok = abs(result.tau - target) <= REDUCED_TOLERANCE
    criterion_line(
        f"criterion 1 (reduced):{name}",
        sign_ok and window_ok,
        f"tau = {result.tau:+.4f} (target {target:+.2f} +- {REDUCED_TOLERANCE})",
    )
    assert sign_ok, f"reduced tau({name}) = {result.tau:+.4f} has wrong sign vs {target:+.2f}"
    assert window_ok, f"reduced tau({name}) = {result.tau:+.4f}, outside {target:+.2f} +- {REDUCED_TOLERANCE}"


# -- criterion 2: sum law ------------------------------------------------------

def test_criterion_2_sum_law():
    rng = np.random.default_rng(MASTER_SEED)
    worst = 0.0
    for case in range(1000):
        alpha = float(10.0 ** rng.uniform(-4, 2))
        beta = int(rng.integers(1, 65))
        s = int(rng.integers(1, 257))
        n = int(rng.integers(0, 1001))
        state = init_weights(ProcessParams(alpha, beta, s, n))
        stream = make_stream(int(rng.integers(0, 2**63)))
        use_reference = case % 40 == 0  # reference spot checks; fast elsewhere
        stepper = step if use_reference else step_fast
        iterations = min(n, 60) if use_reference else n
        for k in range(1, iterations + 1):
            state = stepper(state, beta, stream)
            expected = alpha + k
            err = abs(state.total - expected) / expected
            worst = max(worst, err)
            assert err <= 1e-9, f"sum law violated at k={k} (alpha={alpha}, beta={beta}, s={s})"
    criterion_line("criterion 2", True, f"1000 parameter sets, worst relative error {worst:.2e}")


# -- criterion 3: two-color urn oracle ----------------------------------------

def test_criterion_3_polya_urn_oracle():
    params = ProcessParams(2.0, 1, 2, 2)
    rng = make_stream(MASTER_SEED + 3)
    tallies = {0.75: 0, 0.5: 0, 0.25: 0}
    trials = 300_000
    for _ in range(trials):
        tallies[float(run(params, rng, "reference").probs[0])] += 1

    entropy_of = {p: shannon_entropy_bits([p, 1 - p]) for p in tallies}
    mean_entropy = sum(entropy_of[p] * c for p, c in tallies.items()) / trials
    freqs = {p: c / trials for p, c in tallies.items()}
    ok = all(abs(f - 1 / 3) <= 0.01 for f in freqs.values()) and abs(mean_entropy - 0.8742) <= 0.005
    criterion_line(
        "criterion 3",
        ok,
        f"outcome frequencies {[round(f, 4) for f in freqs.values()]}, mean entropy {mean_entropy:.4f}",
    )
    for p, f in freqs.items():
        assert abs(f - 1 / 3) <= 0.01, f"outcome {p}: frequency {f:.4f} not 1/3 +- 0.01"
    assert abs(mean_entropy - 0.8742) <= 0.005


# -- criterion 4: fast-path equivalence ----------------------------------------

def _fast_outcome_counts(alpha, beta, s, n, samples, seed):
    params = ProcessParams(alpha, beta, s, n)
    rng = make_stream(seed)
    observed = {}
    for _ in range(samples):
        key = recover_hit_counts(run(params, rng, "fast").probs, alpha, beta, s, n)
        observed[key] = observed.get(key, 0) + 1
    return observed


def test_criterion_4_fast_path_equivalence():
    alpha = 2.0
    samples = 100_000
    worst_p = 1.0
    for s in (1, 2, 3):
        for beta in (1, 2, 3):
            for n in (0, 1, 2):
                if n == 0:
                    dist = run(ProcessParams(alpha, beta, s, n), make_stream(1), "fast")
                    assert np.ptp(dist.probs) == 0.0
                    continue
                expected = enumerate_outcome_distribution(Fraction(2), beta, s, n)
                observed = _fast_outcome_counts(alpha, beta, s, n, samples, MASTER_SEED + 40 + s * 100 + beta * 10 + n)
                p_value = chi2_gof_pvalue(observed, expected, samples)
                worst_p = min(worst_p, p_value)
                assert p_value > 0.01, f"chi-square rejects fast path at s={s}, beta={beta}, n={n}: p={p_value:.4f}"
    criterion_line("criterion 4", True, f"18 configurations, {samples} samples each, min chi2 p = {worst_p:.3f}")


# -- criterion 5: scale equivalence --------------------------------------------

def test_criterion_5_scale_equivalence():
    configs = [ProcessParams(2.0, 2, 2, 60), ProcessParams(1.0, 3, 8, 40), ProcessParams(0.25, 1, 4, 80)]
    for c in (1e-3, 7.0, 1e4):
        for params in configs:
            base = run_traced(params, make_stream(MASTER_SEED + 5))
            scaled = run_traced(params, make_stream(MASTER_SEED + 5), increment_scale=c)
            assert np.array_equal(base.indices, scaled.indices), f"index trace differs at c={c}"
            assert np.array_equal(base.distribution.probs, scaled.distribution.probs), (
                f"final distribution differs at c={c}"
            )
    criterion_line("criterion 5", True, "bit-identical traces and distributions for c in {1e-3, 7, 1e4}")


# -- criterion 6: degenerate exactness -----------------------------------------

def test_criterion_6_degenerate_exactness():
    for s in (1, 2, 3, 5, 64, 200, 256):
        dist = run(ProcessParams(0.8, 4, s, 0), make_stream(6))
        assert np.ptp(dist.probs) == 0.0, f"n=0 output not exactly uniform at s={s}"
        assert abs(shannon_entropy_bits(dist) - math.log2(s)) <= 1e-12
    for n in (0, 5, 50):
        dist = run(ProcessParams(3.0, 2, 1, n), make_stream(7))
        assert shannon_entropy_bits(dist) == 0.0
    criterion_line("criterion 6", True, "n=0 exactly uniform; s=1 entropy exactly 0")


# -- criterion 7: log-sweep exactness ------------------------------------------

def test_criterion_7_log_sweep_exactness():
    values = log_sweep(SweepSpec(1e2, 1e6, 5))
    for got, want in zip(values, [1e2, 1e3, 1e4, 1e5, 1e6]):
        assert abs(got - want) <= 1e-12 * want
    rng = np.random.default_rng(MASTER_SEED + 7)
    for _ in range(100):
        low = float(10.0 ** rng.uniform(-6, 3))
        high = low * float(10.0 ** rng.uniform(0.01, 6))
        steps = int(rng.integers(2, 500))
        spec = SweepSpec(low, high, steps)
        swept = log_sweep(spec)
        assert swept[0] == low and swept[-1] == high
        integral_spec = SweepSpec(max(low, 1.0), max(high, 2.0), steps, integral=True)
        floored = log_sweep(integral_spec)
        continuous = log_sweep(SweepSpec(integral_spec.low, integral_spec.high, steps))
        assert floored == [math.floor(v) for v in continuous]
    criterion_line("criterion 7", True, "decade sweep exact; 100 random specs with exact endpoints and floors")


# -- criterion 8: statistics oracles -------------------------------------------

def test_criterion_8_statistics_oracles():
    rng = np.random.default_rng(MASTER_SEED + 8)
    checked = 0
    while checked < 500:
        n = int(rng.integers(2, 9))
        x = rng.integers(0, 5, size=n).astype(float)
        y = rng.integers(0, 5, size=n).astype(float)
        if np.all(x == x[0]) or np.all(y == y[0]):
            continue
        assert kendall_tau(PairedSeries(x, y)).tau == brute_force_tau_b(x, y)
        checked += 1
    entropy = shannon_entropy_bits([0.75, 0.25])
    assert abs(entropy - 0.811278) <= 1e-6
    criterion_line("criterion 8", True, f"500 series match brute force exactly; H(0.75, 0.25) = {entropy:.7f}")


# -- criterion 9: canonical curve shapes ----------------------------------------

def test_criterion_9_alpha_sweep_plateau(canonical_records):
    spec, records = canonical_records["alpha"]
    at_smallest_inverse = max(records, key=lambda r: r.param_value)  # smallest 1/alpha
    entropy = at_smallest_inverse.entropy_bits
    ok = abs(entropy - 6.0) <= 0.2
    criterion_line(
        "criterion 9:alpha",
        ok,
        f"entropy at alpha={at_smallest_inverse.param_value:g} (smallest 1/alpha) = {entropy:.3f}, target 6 +- 0.2",
    )
    assert ok, f"entropy at smallest 1/alpha = {entropy:.3f}, not within 0.2 of 6"


def test_criterion_9_n_sweep_decile_shape(canonical_records):
    spec, records = canonical_records["n"]
    ys = [r.entropy_bits for r in records]
    decile = len(ys) // 10
    first = float(np.mean(ys[:decile]))
    last = float(np.mean(ys[-decile:]))
    ok = abs(first - 6.0) <= 0.2 and first > last > 0.0
    criterion_line(
        "criterion 9:n",
        ok,
        f"first-decile mean = {first:.3f} (target 6 +- 0.2), final-decile mean = {last:.3f}",
    )
    assert abs(first - 6.0) <= 0.2, f"first-decile mean entropy = {first:.3f}, not within 0.2 of 6"
    assert first > last, f"first-decile mean {first:.3f} not above final-decile mean {last:.3f}"
    assert last > 0.0


# -- criterion 10: determinism across workers -----------------------------------

def test_criterion_10_worker_determinism(tmp_path):
    spec = ExperimentSpec(
        name="determinism",
        varied="alpha",
        sweep=SweepSpec(1e-3, 1e-1, 24),
        beta=4,
        s=16,
        n=200,
        correlate_inverse=True,
        replicates=2,
        master_seed=MASTER_SEED,
    )
    texts = {}
    for workers in (1, 4):
        records = run_experiment(spec, mode="fast", workers=workers)
        texts[workers] = records_to_csv(spec, records).encode()
    again = records_to_csv(spec, run_experiment(spec, mode="fast", workers=1)).encode()
    ok = texts[1] == texts[4] == again
    criterion_line("criterion 10", ok, f"{len(texts[1])} CSV bytes identical across worker counts 1 and 4")
    assert texts[1] == texts[4]
    assert texts[1] == again


def test_criterion_10_canonical_worker_independence(canonical_records):
    # the session records were computed with pooled workers; a serial rerun of
    # the cheapest canonical row must reproduce them bit for bit
    spec, records = canonical_records["alpha"]
    serial = run_experiment(spec, mode="fast", workers=1)
    ok = serial == records
    criterion_line("criterion 10:canonical", ok, "alpha-row records identical for serial rerun")
    assert ok

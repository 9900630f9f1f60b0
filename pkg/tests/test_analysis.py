import numpy as np
import pytest

from spindigit.analysis import (
    ExperimentConfig,
    TimeSeries,
    assemble_series,
    delta_n,
    normalized_v,
    occupation_from_counts,
    series_filename,
    series_to_csv,
    time_grid,
)
from spindigit.errors import DegenerateSeriesError, ValidationError
from spindigit.models import CentralSpinSpec, IsingSpec, ferromagnetic, two_pes
from spindigit.statevector import MeasurementCounts


def make_config(**overrides):
    base = dict(
        model=CentralSpinSpec.default(2),
        initial=two_pes(0.0),
        trotter_n=1,
        times=time_grid(0.0, 2.0, 6),
        shots=2000,
        seed=5,
        model_tag="centralspinL2",
        initial_tag="2pes-phi0",
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def test_time_series_validation():
    with pytest.raises(ValidationError):
        TimeSeries([0.0, 1.0], [0.1])
    with pytest.raises(ValidationError):
        TimeSeries([0.0, 0.0], [0.1, 0.2])
    with pytest.raises(ValidationError):
        TimeSeries([0.0, 1.0], [0.1, 0.2], stderr=[0.0])


def test_occupation_from_counts_bit_order():
    # bitstrings render qubit 0 rightmost
    counts = MeasurementCounts(shots=4, histogram={"01": 2, "10": 1, "11": 1})
    assert occupation_from_counts(counts, [0]) == pytest.approx(0.75)
    assert occupation_from_counts(counts, [1]) == pytest.approx(0.5)
    assert occupation_from_counts(counts, [0, 1]) == pytest.approx(0.625)
    with pytest.raises(ValidationError):
        occupation_from_counts(counts, [])
    with pytest.raises(ValidationError):
        occupation_from_counts(counts, [2])


def test_delta_n_subtracts_time_zero():
    series = TimeSeries([0.0, 1.0, 2.0], [0.2, 0.5, 0.3])
    out = delta_n(series)
    assert out.values[0] == 0.0
    assert np.allclose(out.values, [0.0, 0.3, 0.1])
    assert out.meta["post"] == "delta_n"
    # idempotent: subtracting a zero offset changes nothing
    again = delta_n(out)
    assert np.allclose(again.values, out.values)
    with pytest.raises(ValidationError):
        delta_n(TimeSeries([0.5, 1.0], [0.1, 0.2]))


def test_normalized_v_max_and_mean():
    series = TimeSeries([0.0, 1.0, 2.0, 3.0], [0.0, 0.1, 0.4, 0.2])
    v = normalized_v(series)
    assert np.allclose(v.values, [0.0, 0.25, 1.0, 0.5])
    m = normalized_v(series, "mean")
    assert np.allclose(m.values, np.array([0.0, 0.1, 0.4, 0.2]) / 0.175)
    with pytest.raises(DegenerateSeriesError):
        normalized_v(TimeSeries([0.0, 1.0], [0.5, 0.5]))
    with pytest.raises(ValidationError):
        normalized_v(series, "median")


def test_normalized_v_affine_invariance():
    rng = np.random.default_rng(0)
    base = rng.random(8)
    base[0] = 0.0
    t = np.arange(8, dtype=float)
    v1 = normalized_v(TimeSeries(t, base)).values
    v2 = normalized_v(TimeSeries(t, 3.7 * base + 0.4)).values
    assert np.allclose(v1, v2, atol=1e-12)


def test_experiment_config_validation():
    with pytest.raises(ValidationError):
        make_config(trotter_n=0)
    with pytest.raises(ValidationError):
        make_config(shots=-1)
    with pytest.raises(ValidationError):
        make_config(times=())
    with pytest.raises(ValidationError):
        make_config(times=(0.0, 0.0, 1.0))


def test_ideal_direct_probabilities_match_oracle():
    config = make_config(shots=0)
    ideal = assemble_series(config, "ideal")
    oracle = assemble_series(config, "oracle")
    assert np.allclose(ideal.values, oracle.values, atol=1e-10)
    assert np.all(ideal.stderr == 0.0)


def test_sampled_series_is_deterministic_and_close_to_ideal():
    config = make_config(shots=4000)
    a = assemble_series(config, "ideal")
    b = assemble_series(config, "ideal")
    assert np.array_equal(a.values, b.values)
    direct = assemble_series(make_config(shots=0), "ideal")
    assert np.max(np.abs(a.values - direct.values)) < 0.05
    assert np.all(a.stderr[direct.values > 0.01] > 0)


def test_exact_backend_on_small_and_shot_validation():
    config = make_config(times=time_grid(0.0, 1.0, 4))
    exact = assemble_series(config, "exact")
    n32 = assemble_series(make_config(times=config.times, trotter_n=32, shots=0), "ideal")
    assert np.max(np.abs(exact.values - n32.values)) < 0.01
    with pytest.raises(ValidationError):
        assemble_series(make_config(shots=0), "noisy")
    with pytest.raises(ValidationError):
        assemble_series(config, "quantum")


def test_ising_series_uses_mean_occupation():
    config = ExperimentConfig(
        model=IsingSpec.chain(3, alpha=2.0),
        initial=ferromagnetic(),
        trotter_n=1,
        times=time_grid(0.0, 1.0, 4),
        shots=0,
        model_tag="chain3",
        initial_tag="ferro",
    )
    series = assemble_series(config, "ideal")
    assert series.values[0] == pytest.approx(0.0, abs=1e-12)
    assert np.all((series.values >= 0) & (series.values <= 1))
    assert series.values[1] > 0


def test_series_filename_and_csv_round_trip():
    config = make_config(shots=0, times=time_grid(0.0, 1.0, 3))
    series = assemble_series(config, "oracle")
    assert series_filename(series) == "centralspinL2_2pes-phi0_oracle_N1.csv"
    text = series_to_csv(series)
    lines = text.strip().splitlines()
    assert lines[0] == "tau,value,stderr,shots,seed"
    assert len(lines) == 4
    values = [float(line.split(",")[1]) for line in lines[1:]]
    # repr round-trip keeps every float bit-for-bit
    assert values == list(series.values)

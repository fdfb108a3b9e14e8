import logging

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from randcarpet.model import Ensemble, Pattern, generic_example, small_test_pattern
from randcarpet.sampler import (
    _draw, explicit_omega, sample_array, sample_omega, trial_seed, uniforms,
)


def test_deterministic_ensemble_is_constant():
    e = Ensemble([small_test_pattern()])
    assert sample_omega(e, 99, 50).prefix == (1,) * 50


def test_nearly_certain_symbol():
    p = small_test_pattern()
    e = Ensemble([p, p], [1 - 1e-9, 1e-9])
    assert sample_omega(e, 5, 10).prefix == (1,) * 10


def test_frequency_at_large_length():
    w = sample_array(generic_example(), 42, 10 ** 6)
    assert abs(np.mean(w == 1) - 0.5) < 0.002


def test_chi_square_law():
    p = small_test_pattern()
    weights = [0.2, 0.3, 0.5]
    e = Ensemble([p, p, p], weights)
    w = sample_array(e, 7, 10 ** 6)
    counts = np.bincount(w, minlength=4)[1:]
    assert stats.chisquare(counts, np.array(weights) * len(w)).pvalue > 1e-3


@settings(max_examples=30)
@given(st.integers(1, 2 ** 64 - 1), st.integers(1, 40), st.integers(0, 40))
def test_prefix_stable(seed, n, k):
    e = generic_example()
    assert sample_omega(e, seed, n + k).prefix[:n] == sample_omega(e, seed, n).prefix


@settings(max_examples=30)
@given(st.integers(1, 2 ** 64 - 1), st.integers(0, 30), st.integers(1, 30))
def test_windows_match_full_stream(seed, start, count):
    full = uniforms(seed, 0, start + count)
    assert np.array_equal(uniforms(seed, start, count), full[start:])


def test_extend_matches_direct_draw():
    e = generic_example()
    om = sample_omega(e, 3, 7).extend(100)
    assert om.prefix == sample_omega(e, 3, 100).prefix
    assert om.extend(5) is om


def test_explicit_prefix():
    e = generic_example()
    om = explicit_omega([2, 1, 1, 2, 1], e)
    assert om.prefix == (2, 1, 1, 2, 1) and om.explicit
    assert om.to_dict() == {"seed": "explicit", "omega": [2, 1, 1, 2, 1]}
    with pytest.raises(ValueError, match="explicit realization"):
        om.extend(6)


def test_explicit_prefix_errors():
    e = generic_example()
    with pytest.raises(ValueError, match="empty prefix"):
        explicit_omega([], e)
    with pytest.raises(ValueError, match="index out of range: 3"):
        explicit_omega([1, 3], e)


def test_ties_go_to_smaller_index():
    assert _draw([0.5, 0.5], np.array([0.5, 0.4999, 0.5001])).tolist() == [1, 1, 2]


def test_seed_zero_draws_fresh_seed(caplog):
    with caplog.at_level(logging.INFO, logger="randcarpet.sampler"):
        om = sample_omega(generic_example(), 0, 5)
    assert om.seed and str(om.seed) in caplog.text
    assert sample_omega(generic_example(), om.seed, 5) == om


def test_seed_range():
    with pytest.raises(ValueError):
        sample_omega(generic_example(), 2 ** 64, 3)
    with pytest.raises(ValueError):
        sample_omega(generic_example(), 1, 0)


def test_array_path_matches_tuple_path():
    e = generic_example()
    assert tuple(sample_array(e, 11, 200).tolist()) == sample_omega(e, 11, 200).prefix


def test_trial_seeds_distinct_and_stable():
    seeds = [trial_seed(1, t) for t in range(1000)]
    assert len(set(seeds)) == 1000
    assert seeds == [trial_seed(1, t) for t in range(1000)]
    assert trial_seed(2, 0) != seeds[0]

import json
import math

import pytest
from hypothesis import given

from randcarpet.model import (
    Ensemble, Pattern, ValidationError, ensemble_from_dict, generic_example, generic_pattern_1,
    generic_pattern_2, load_ensemble, pattern_stats, pattern_violations, save_ensemble,
    small_test_pattern, validate_ensemble, weighted_averages,
)

from conftest import ensembles


def test_small_pattern_stats():
    assert pattern_stats(small_test_pattern()) == (3, 2, 2)


def test_generic_pattern_stats():
    assert pattern_stats(generic_pattern_1()) == (20, 10, 8)
    assert pattern_stats(generic_pattern_2()) == (5, 2, 4)


def test_full_grid_stats():
    assert pattern_stats(Pattern.full(3, 5)) == (15, 3, 5)


def test_maximal_columns_lowest_index_first():
    p = Pattern(3, 4, [(0, 0), (0, 1), (2, 2), (2, 3), (1, 0)])
    assert p.maximal_columns == (0, 2)


@pytest.mark.parametrize("m, n, cells, fragment", [
    (4, 4, [(0, 0)], "n > m"),
    (5, 3, [(0, 0)], "n > m"),
    (1, 3, [(0, 0)], "m"),
    (2, 4, [], "empty cell set"),
    (2, 4, [(2, 0)], "outside"),
    (2, 4, [(0, 4)], "outside"),
])
def test_pattern_rejections(m, n, cells, fragment):
    with pytest.raises(ValidationError, match=fragment):
        Pattern(m, n, cells)


def test_duplicate_cells_rejected():
    with pytest.raises(ValidationError, match="duplicate"):
        Pattern(2, 4, [(0, 0), (0, 0)])


def test_violations_listed_without_raising():
    p = Pattern(3, 2, [(5, 5)], check=False)
    msgs = pattern_violations(p)
    assert any("n > m" in s for s in msgs)
    assert any("outside" in s for s in msgs)


def test_weights_must_sum_to_one():
    p = small_test_pattern()
    with pytest.raises(ValidationError, match="weights sum to 1.1"):
        Ensemble([p, p], [0.6, 0.5])


def test_renormalize_fixes_sum():
    p = small_test_pattern()
    e = Ensemble([p, p], [0.6, 0.5], renormalize=True)
    assert math.isclose(sum(e.weights), 1.0)


def test_weight_outside_open_interval():
    p = small_test_pattern()
    msgs = validate_ensemble(Ensemble([p, p], [1.0, 0.0], check=False))
    assert any("weight 2" in s for s in msgs)


def test_single_pattern_needs_unit_weight():
    with pytest.raises(ValidationError, match="weight exactly 1"):
        Ensemble([small_test_pattern()], [0.9])


def test_one_based_indexing():
    e = generic_example()
    assert e[1] == generic_pattern_1()
    assert e[2] == generic_pattern_2()
    with pytest.raises(IndexError):
        e[0]
    with pytest.raises(IndexError):
        e[3]


def test_generic_averages():
    a = generic_example().averages
    assert a.logm == pytest.approx(0.5 * math.log(38), abs=1e-15)
    assert a.logn == pytest.approx(0.5 * math.log(315), abs=1e-15)
    assert a.Nbar == pytest.approx(10.0, abs=1e-12)
    assert a.Bbar == pytest.approx(math.sqrt(20), abs=1e-12)
    assert a.Cbar == pytest.approx(math.sqrt(32), abs=1e-12)


def test_weighted_averages_rejects_invalid():
    p = small_test_pattern()
    with pytest.raises(ValidationError):
        weighted_averages(Ensemble([p, p], [0.7, 0.7], check=False))


def test_json_roundtrip(tmp_path):
    e = generic_example()
    path = tmp_path / "e.json"
    save_ensemble(e, path)
    assert load_ensemble(path) == e


def test_unknown_keys_rejected():
    d = generic_example().to_dict()
    d["colour"] = "red"
    with pytest.raises(ValidationError, match="colour"):
        ensemble_from_dict(d)
    d = generic_example().to_dict()
    d["patterns"][0]["extra"] = 1
    with pytest.raises(ValidationError, match="extra"):
        ensemble_from_dict(d)


@given(ensembles())
def test_stats_bounded_by_grid(e):
    for p in e.patterns:
        assert 1 <= p.C <= p.n
        assert 1 <= p.B <= p.m
        assert p.B <= p.N <= p.B * p.C
        assert sum(p.column_counts.values()) == p.N


@given(ensembles())
def test_dict_roundtrip_property(e):
    assert ensemble_from_dict(json.loads(e.to_json())) == e

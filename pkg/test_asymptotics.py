"""Asymptotic rate curves"""
from math import log2, sqrt

import numpy as np
import pandas as pd
import pytest

from modules.asymptotics import (CURVE_COLUMNS, CURVE_NAMES, INNER_12_4_6, INNER_28_14_14, INNER_28_4_14,
                                 INNER_CODES, concat_rate, curves_write, delta_grid, emit_curves, entropy,
                                 gv_rate, mrrw_special, mrrw_upper, ordering_violations, pseudo_product_rate,
                                 pseudo_product_rate_split, transfer_exponent, tvz_rate)
from modules.errors import DomainError


def test_entropy_values():
    assert entropy(0.0) == 0.0
    assert entropy(1.0) == 0.0
    assert entropy(0.5) == 1.0
    assert entropy(0.25) == pytest.approx(0.8112781244591328, abs=1e-12)


def test_entropy_is_symmetric():
    grid = np.linspace(0, 1, 101)
    assert np.allclose(entropy(grid), entropy(1 - grid), atol=1e-12)


def test_entropy_domain():
    with pytest.raises(DomainError):
        entropy(1.2)
    with pytest.raises(DomainError):
        entropy(-0.1)


def test_upper_bound_forms_agree():
    for delta in np.arange(0, 501) / 1000:
        assert mrrw_upper(float(delta), 0.5) == pytest.approx(mrrw_special(float(delta)), abs=1e-12)


def test_upper_bound_values():
    assert mrrw_upper(0.0, 0.5) == pytest.approx(1.0)
    assert mrrw_upper(0.5, 0.5) == 0.0
    assert mrrw_special(0.25) == pytest.approx(entropy(0.5 - sqrt(3) / 4))


def test_upper_bound_domain():
    with pytest.raises(DomainError):
        mrrw_upper(0.1, 1.0)
    with pytest.raises(DomainError):
        mrrw_special(0.6)


def test_inner_code_cutoffs():
    assert INNER_12_4_6.cutoff == pytest.approx(3 / 10)
    assert INNER_28_14_14.cutoff == pytest.approx(5 / 12)
    assert INNER_28_4_14.cutoff == pytest.approx(1235 / 8652)


def test_tvz_rate():
    assert tvz_rate(121, 0.2) == pytest.approx(0.7)
    assert tvz_rate(4, 0.5) == 0.0
    with pytest.raises(DomainError):
        tvz_rate(2, 0.1)


def test_concat_rate_length_normalized_lines():
    assert concat_rate(INNER_12_4_6, 0.1) == pytest.approx(log2(11) / 6 * 0.2, rel=1e-9)
    for delta in (0.0, 0.05, 0.2):
        assert concat_rate(INNER_12_4_6, delta) == pytest.approx(log2(11) / 6 * (3 / 10 - delta), rel=1e-9)
        assert concat_rate(INNER_28_14_14, delta) == pytest.approx(log2(7) / 14 * (5 / 12 - delta), rel=1e-9)
    for delta in (0.0, 0.1):
        assert concat_rate(INNER_28_4_14, delta) == pytest.approx(log2(1237) / 14 * (1235 / 8652 - delta),
                                                                  rel=1e-9)


def test_concat_rate_distance_normalized_line():
    for delta in (0.0, 0.1, 0.2, 0.29):
        expected = log2(121) / 4 * (0.3 - delta)
        assert concat_rate(INNER_12_4_6, delta, 'distance') == pytest.approx(expected, rel=1e-9)
    for inner in INNER_CODES:
        ratio = concat_rate(inner, 0.05, 'distance') / concat_rate(inner, 0.05)
        assert ratio == pytest.approx(inner.n / inner.d)


def test_concat_rate_rejects_unknown_normalization():
    with pytest.raises(DomainError):
        concat_rate(INNER_12_4_6, 0.1, 'width')


def test_concat_rate_vanishes_past_cutoff():
    for inner in INNER_CODES:
        for normalization in ('length', 'distance'):
            assert concat_rate(inner, inner.cutoff + 0.01, normalization) == 0.0
            assert concat_rate(inner, 0.0, normalization) > 0.0


def test_inner_codes_are_backed_by_references(references):
    assert all(inner.supported_by(references) for inner in INNER_CODES)


def test_pseudo_product_rate():
    assert pseudo_product_rate(0.0) == 0.5
    assert pseudo_product_rate(0.25) == 0.0
    assert pseudo_product_rate(1 / 16) == pytest.approx((1 - entropy(0.25)) ** 2 / 2)
    with pytest.raises(DomainError):
        pseudo_product_rate(0.3)


def test_pseudo_product_balanced_split():
    for delta in (0.01, 0.09, 0.2):
        root = sqrt(delta)
        assert pseudo_product_rate_split(root, root) == pytest.approx(pseudo_product_rate(delta))


def test_gv_rate():
    assert gv_rate(0.0) == 1.0
    assert gv_rate(0.5) == 0.0


def test_transfer_exponent_shrinks():
    exponents = [transfer_exponent(2, n, n // 2) for n in (10, 100, 1000)]
    assert all(e > 0 for e in exponents)
    assert exponents[0] > exponents[1] > exponents[2]


def test_delta_grid():
    assert len(delta_grid(0.0, 0.5, 0.01)) == 51
    assert delta_grid(0.0, 0.5, 0.01)[-1] == 0.5
    assert len(delta_grid(0.3, 0.2, 0.01)) == 0
    with pytest.raises(DomainError):
        delta_grid(0.0, 0.5, 0.0)


def test_curve_ordering_on_fine_grid():
    frame = emit_curves(delta_grid(0.0, 0.5, 0.001))
    assert ordering_violations(frame) == []
    assert set(frame['curve']) == set(CURVE_NAMES)


def test_lower_curves_below_gv():
    grid = delta_grid(0.0, 0.5, 0.01)
    for delta in grid:
        gv = gv_rate(float(delta))
        if delta <= 0.25:
            assert pseudo_product_rate(float(delta)) <= gv
        for inner in INNER_CODES:
            assert concat_rate(inner, float(delta)) <= gv
            assert concat_rate(inner, float(delta), 'distance') <= gv


def test_both_concatenation_scalings_are_emitted():
    frame = emit_curves([0.1], curves=['concat-12-4-6', 'concat-12-4-6-by-d'])
    rates = dict(zip(frame['curve'], frame['rate']))
    assert rates['concat-12-4-6'] == pytest.approx(log2(11) / 6 * 0.2)
    assert rates['concat-12-4-6-by-d'] == pytest.approx(3 * rates['concat-12-4-6'])
    assert {f"{inner.label}-by-d" for inner in INNER_CODES} <= set(CURVE_NAMES)


def test_emit_curves_is_sorted():
    frame = emit_curves([0.2, 0.1], curves=['gv', 'pseudo-product'])
    assert list(frame['curve']) == ['gv', 'gv', 'pseudo-product', 'pseudo-product']
    assert list(frame['delta']) == [0.1, 0.2, 0.1, 0.2]


def test_emit_curves_drops_points_outside_a_domain():
    frame = emit_curves([0.3], curves=['pseudo-product', 'gv'])
    assert list(frame['curve']) == ['gv']


def test_empty_grid():
    frame = emit_curves([])
    assert frame.empty
    assert list(frame.columns[:3]) == CURVE_COLUMNS


def test_unknown_curve():
    with pytest.raises(DomainError):
        emit_curves([0.1], curves=['nope'])


def test_curves_file(tmp_path):
    path = tmp_path / 'curves.csv'
    curves_write(emit_curves(delta_grid(0.0, 0.5, 0.1)), str(path))
    frame = pd.read_csv(path, comment='#')
    assert list(frame.columns) == CURVE_COLUMNS
    assert frame['rate'].between(0, 1).all()

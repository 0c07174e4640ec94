"""Upper bounds, the transfer bound and the exact-search oracle"""
from fractions import Fraction
from itertools import product

import pytest

from modules.bounds import (EXACT, LOWER, UPPER, bound_calculator, eb_transfer, exact_search,
                            johnson_closed_form, johnson_general, johnson_homogeneous, singleton_like,
                            tightness_conditions, tightness_construction, tightness_exact, tightness_window,
                            trivial_upper)
from modules.code_core import INFINITY, WeightProfile
from modules.errors import BoundError, SearchLimitError
from modules.tabulator import ReferenceValues


def test_trivial_upper_uses_reference_values(references):
    record = trivial_upper(2, 2, 4, 1, references)
    assert record.kind == UPPER
    assert record.value == 2
    assert trivial_upper(1, 4, 4, 2, references).value == 2


def test_trivial_upper_unknown_is_infinite():
    record = trivial_upper(3, 9, 4, 1, ReferenceValues())
    assert record.value == INFINITY
    assert 'unknown' in record.provenance


def test_johnson_homogeneous():
    record = johnson_homogeneous(2, 4, 4, 2)
    assert record.value == 12
    assert 'johnson-shrink-weight' in record.provenance
    assert johnson_homogeneous(2, 3, 2, 1).value == 9
    assert johnson_homogeneous(2, 4, 2, 2).value == 36


def test_johnson_general_agrees_on_homogeneous_profiles():
    assert johnson_general(WeightProfile.homogeneous(2, 4, 2), 4).value == 12
    assert johnson_general(WeightProfile.homogeneous(2, 3, 1), 2).value == 9


def test_johnson_general_single_block_is_constant_weight_bound():
    # A(4, 4, 2) = 2
    assert johnson_general(WeightProfile(((4, 2),)), 4).value == 2


def test_odd_distance_is_lifted():
    odd = johnson_homogeneous(2, 4, 3, 2)
    assert odd.value == johnson_homogeneous(2, 4, 4, 2).value
    assert 'lifted to 4' in odd.provenance


def test_singleton_like():
    record = singleton_like(3, 4, 10, 2)
    assert record.value == 4
    assert record.details['s'] == 2
    assert singleton_like(3, 5, 4, 1).value == 25
    assert singleton_like(2, 4, 4, 2) is None


def test_johnson_closed_form():
    record = johnson_closed_form(2, 4, 4, 2)
    assert record.value == 12
    assert record.details['i'] == 1
    assert record.details['loose'] == Fraction(64)
    assert johnson_closed_form(2, 6, 4, 2).value == 45
    assert johnson_closed_form(3, 4, 10, 2).value == 4


def test_tightness_window():
    assert tightness_window(2, 4, 4, 2) == (Fraction(1), Fraction(8))


@pytest.mark.parametrize('cell, value', [((2, 3, 2, 1), 9), ((2, 4, 2, 1), 16), ((3, 3, 4, 1), 9)])
def test_tightness_exact(cell, value):
    record = tightness_exact(*cell)
    assert record.kind == EXACT
    assert record.value == value
    assert tightness_construction(*cell).size == value


def test_tightness_needs_its_conditions():
    assert tightness_exact(2, 4, 4, 2) is None
    assert tightness_exact(2, 6, 2, 1) is None
    with pytest.raises(BoundError):
        tightness_construction(2, 4, 4, 2)


def test_tightness_exact_matches_search():
    for cell in ((2, 3, 2, 1), (3, 3, 4, 1), (2, 4, 2, 1)):
        assert exact_search(*cell).value == tightness_exact(*cell).value


def test_eb_transfer():
    assert eb_transfer(2, 2, 2, 1, 6).value == 4
    record = eb_transfer(2, 4, 4, 2, 14)
    assert record.kind == LOWER
    assert record.value == 8
    assert eb_transfer(1, 7, 4, 3, 7).value == 7


def test_exact_search_small_cells():
    assert exact_search(2, 2, 4, 1).value == 2
    assert exact_search(1, 4, 2, 2).value == 6
    record = exact_search(2, 4, 4, 2)
    assert record.kind == EXACT
    assert record.value == 12


def test_exact_search_budget_gives_lower_bound():
    record = exact_search(2, 4, 4, 2, budget=1)
    assert record.kind == LOWER
    assert 'incomplete' in record.provenance
    assert record.value <= 12


def test_exact_search_vertex_cap():
    with pytest.raises(SearchLimitError):
        exact_search(3, 8, 4, 3, vertex_cap=100)


def test_cell_report_with_search(references):
    report = bound_calculator.cell_report(2, 4, 4, 2, references=references, exact=True)
    assert report['lower'] == 12
    assert report['upper'] == 12
    assert report['exact']


def test_bound_rules_bracket_the_exact_value():
    refs = ReferenceValues.from_csv()
    for m, n, w in product((1, 2), (2, 3, 4, 5), (1, 2)):
        if w > n:
            continue
        previous = None
        for d in range(2, m * n + 1, 2):
            value = exact_search(m, n, d, w).value
            for record in bound_calculator.upper_records(m, n, d, w, refs):
                assert value <= record.value, (m, n, d, w, record.provenance)
            a_lower = refs.lower('A', 2, m * n, d, m * w)
            if a_lower is not None:
                assert eb_transfer(m, n, d, w, a_lower).value <= value
            if previous is not None:
                assert value <= previous
            previous = value


def _exact(m, n, d, w):
    record = exact_search(m, n, d, w)
    assert record.kind == EXACT
    return record.value


@pytest.mark.parametrize('m, n, d, w', [(m, n, d, w) for m, n, w in product((1, 2), (3, 4, 5), (1, 2))
                                         for d in range(2, 2 * m * w + 1, 2)])
def test_single_johnson_steps_dominate_exact_values(m, n, d, w):
    value = _exact(m, n, d, w)
    assert (n ** m * _exact(m, n - 1, d, w - 1)) // w ** m >= value
    assert (n ** m * _exact(m, n - 1, d, w)) // (n - w) ** m >= value


@pytest.mark.slow
def test_tightness_across_the_grid():
    checked = 0
    for m, n in product(range(1, 4), range(1, 10)):
        for w, d in product(range(1, n + 1), range(2, 2 * m * n + 1, 2)):
            conditions = tightness_conditions(m, n, d, w)
            if conditions is None:
                continue
            s, q = conditions
            value = tightness_exact(m, n, d, w).value
            assert value == q ** s == tightness_construction(m, n, d, w).size, (m, n, d, w)
            assert johnson_homogeneous(m, n, d, w).value >= value, (m, n, d, w)
            checked += 1
    assert checked >= 20

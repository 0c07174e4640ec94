"""Resolvable designs and their codes"""
import pytest

from modules.code_core import hamming_distance
from modules.designs import (ResolvableDesign, affine_plane, class_count_formula, design_loads,
                             design_read, design_to_mcwc, design_write, one_factorization, verify_design)
from modules.errors import DesignError


@pytest.mark.parametrize('q', [2, 3, 4, 5])
def test_affine_plane_is_resolvable(q):
    design = affine_plane(q)
    report = verify_design(design)
    assert report['valid']
    assert report['classes'] == q + 1
    assert class_count_formula(q * q, q, 2) == q + 1
    assert report['max_block_intersection'] <= 1


def test_affine_plane_of_order_two():
    assert affine_plane(2).classes == (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def test_affine_plane_needs_prime_power():
    with pytest.raises(DesignError):
        affine_plane(6)


@pytest.mark.parametrize('v', [2, 4, 6, 8, 10])
def test_one_factorization(v):
    design = one_factorization(v)
    report = verify_design(design)
    assert report['valid']
    assert report['classes'] == v - 1 == class_count_formula(v, 2, 2)


def test_one_factorization_of_four_points_matches_affine_plane():
    assert one_factorization(4).classes == affine_plane(2).classes


def test_one_factorization_needs_even_v():
    with pytest.raises(DesignError):
        one_factorization(5)


def test_design_code_from_affine_plane_of_order_two():
    result = design_to_mcwc(affine_plane(2))
    assert set(result.code.strings()) == {'11000011', '10100101', '10010110'}
    assert str(result.profile) == '4:2,4:2'
    words = result.code.words
    assert all(hamming_distance(a, b) == 4 for a in words for b in words if a != b)


def test_design_code_from_affine_plane_of_order_three():
    result = design_to_mcwc(affine_plane(3))
    assert result.size == 4
    assert str(result.profile) == ','.join(['9:3'] * 3)
    assert result.guaranteed_distance == 12
    assert result.verified_distance >= 12


def test_design_code_from_one_factorization():
    result = design_to_mcwc(one_factorization(6))
    assert result.size == 5
    assert result.guaranteed_distance == 6
    assert result.verified_distance >= 6


def test_incomplete_design_records_class_count():
    full = affine_plane(3)
    partial = ResolvableDesign(full.v, full.k, full.t, full.classes[:2], family='partial')
    report = verify_design(partial)
    assert report['packing'] and not report['valid']
    result = design_to_mcwc(partial)
    assert result.size == 2
    assert result.params['classes'] == 2
    assert result.params['complete'] is False


def test_design_with_repeated_pair_is_rejected():
    text = '# design v=4 k=2 t=2\n0,1|2,3\n0,1|2,3\n'
    design = design_loads(text)
    assert verify_design(design)['repeated_t_subsets'] > 0
    with pytest.raises(DesignError):
        design_to_mcwc(design)


def test_design_file_round_trip(tmp_path):
    design = one_factorization(6)
    path = tmp_path / 'k6.design'
    design_write(str(path), design)
    assert design_read(str(path)).classes == design.classes


def test_malformed_design_header():
    with pytest.raises(DesignError):
        design_loads('0,1|2,3\n')

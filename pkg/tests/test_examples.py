"""Small worked examples, one or two per public operation."""
from __future__ import annotations

from collections import Counter

import pytest

from reflectionlab.classical import (DoublePartition, Partition, classify_b, classify_d, classify_i2,
                                     join, signed_cycle_type)
from reflectionlab.classify import full_classification, maximal_rank_classes, parabolic_classes
from reflectionlab.engine import GroupElement, enumerate_classes, fingerprint, orbit_keys
from reflectionlab.gamma import coxeter_element
from reflectionlab.rootsys import (bds_children, cartan_type, dual, reflect, reflection_closure,
                                   simple_system)

from conftest import ambient


def by_model(rs, *vec):
    """Index of the root with the given standard-model coordinates."""
    target = tuple(vec)
    return next(i for i in range(2 * rs.N) if rs.model_coords(i) == target)


def types(subs):
    return sorted(str(cartan_type(s)) for s in subs)


# -- rootsys

def test_b2_reflection():
    rs = ambient("B", 2)
    e1, e1_minus_e2 = by_model(rs, 1, 0), by_model(rs, 1, -1)
    assert rs.model_coords(reflect(rs, e1, e1_minus_e2).index) == (-1, -1)
    assert rs.model_coords(reflect(rs, e1, e1).index) == (-1, 0)


def test_b2_closures():
    rs = ambient("B", 2)
    long_pair = [by_model(rs, 1, 1), by_model(rs, 1, -1)]
    assert len(reflection_closure(rs, long_pair)) == 2
    mixed = [by_model(rs, 1, 0), by_model(rs, 1, -1)]
    assert reflection_closure(rs, mixed) == rs.full()


def test_b2_simple_system():
    rs = ambient("B", 2)
    got = {rs.model_coords(i) for i in simple_system(rs.full())}
    assert got == {(0, 1), (1, -1)}


def test_dual():
    f4 = ambient("F", 4)
    d = dual(f4)
    assert str(d.type_label) == "F4"
    assert [c for c in d.length_class[:d.N]] == \
        [{"long": "short", "short": "long"}[c] for c in f4.length_class[:f4.N]]
    assert dual(dual(f4)).coords == f4.coords
    assert str(dual(ambient("B", 3)).type_label) == "C3"
    e6 = ambient("E", 6)
    assert dual(e6).coords == e6.coords


def test_bds_children_g2():
    assert sorted(set(types(bds_children(ambient("G", 2).full())))) == ["A1 Ã1", "A2", "G2", "Ã2"]


def test_bds_adds_nothing_in_type_a():
    rs = ambient("A", 5)
    assert bds_children(rs.full()) == {rs.full()}


@pytest.mark.slow
def test_bds_children_e8_are_affine_node_deletions():
    assert sorted(set(types(bds_children(ambient("E", 8).full())))) == \
        ["A1 A2 A5", "A1 A7", "A1 E7", "A2 E6", "A3 D5", "A4^2", "A8", "D8", "E8"]


# -- engine

def test_images_commute_with_negation():
    rs = ambient("F", 4)
    g = GroupElement.from_word(rs, [0, 2, 1, 3, 2])
    for i in range(2 * rs.N):
        assert g(rs.negate(i)) == rs.negate(g(i))


@pytest.mark.parametrize("ft, h", [(("G", 2), 6), (("B", 5), 10), (("E", 6), 12)])
def test_product_of_simple_reflections_has_coxeter_number_order(ft, h):
    rs = ambient(*ft)
    assert GroupElement.from_word(rs, range(rs.rank)).order == h


def test_identity_fingerprint():
    rs = ambient("E", 6)
    f = fingerprint(GroupElement.identity(rs))
    assert [int(x) for x in f.charpoly] == [1, -6, 15, -20, 15, -6, 1]


def _records(ft):
    return {str(r.type_label): r for r in full_classification(ambient(*ft))}


def test_f4_long_and_short_a1_squared_share_a_fingerprint():
    recs = _records(("F", 4))
    a, b = recs["A1^2"], recs["Ã1^2"]
    assert fingerprint(coxeter_element(a.subsystem)) == fingerprint(coxeter_element(b.subsystem))


def test_b5_b2_and_d2_fingerprints_differ():
    recs = _records(("B", 5))
    a, b = recs["B2"], recs["A1^2"]
    assert fingerprint(coxeter_element(a.subsystem)) != fingerprint(coxeter_element(b.subsystem))


def test_orbit_sizes():
    e6 = ambient("E", 6)
    assert len(orbit_keys(e6.subsystem([0]))) == 36


@pytest.mark.slow
def test_e8_a1_fourth_power_splits_into_two_classes():
    sizes = sorted(r.class_size for r in full_classification(ambient("E", 8))
                   if str(r.type_label) == "A1^4")
    assert sizes == [9450, 113400]


def test_class_sizes():
    assert sorted(enumerate_classes(ambient("A", 3)).sizes) == [1, 3, 6, 6, 8]
    assert len(enumerate_classes(ambient("E", 6)).sizes) == 25


# -- classify

def test_maximal_rank_classes():
    assert types(maximal_rank_classes(ambient("G", 2).full())) == ["A1 Ã1", "A2", "G2", "Ã2"]
    assert types(maximal_rank_classes(ambient("H", 4).full())) == \
        ["A1^4", "A2^2", "A4", "D4", "H3 A1", "H4", "I2(5)^2"]
    assert len(maximal_rank_classes(ambient("B", 2).full())) == 3


def test_e6_top_closure_block():
    recs = full_classification(ambient("E", 6))
    top = [r for r in recs if recs[r.closure_ref].rank == 6]
    assert sorted(str(r.type_label) for r in top) == ["A1 A5", "A2^3", "E6"]


def test_parabolic_classes_of_a3():
    labels = Counter(str(p.type_label) for p in parabolic_classes(ambient("A", 3)))
    assert labels == Counter({"∅": 1, "A1": 1, "A1^2": 1, "A2": 1, "A3": 1})


# -- classical

def test_join():
    assert join(Partition((3, 1)), Partition((2, 2))) == Partition((3, 2, 2, 1))


def test_classify_b_examples():
    recs = {str(r.param): r for r in classify_b(5)}
    assert (str(recs["2..3"].type_label), str(recs["2..3"].coxeter_class)) == ("D3 A1", "2.21")
    assert (str(recs[".5."].type_label), str(recs[".5."].coxeter_class)) == ("B5", ".5")


def test_classify_d_example():
    recs = {str(r.param): r for r in classify_d(6)}
    assert (str(recs["3.3"].type_label), str(recs["3.3"].coxeter_class)) == ("D3 A2", "3.21")


def test_classify_i2_12():
    assert len(classify_i2(12).records) == 11


def test_signed_cycle_types():
    b3, b2, b5 = ambient("B", 3), ambient("B", 2), ambient("B", 5)
    assert str(signed_cycle_type(GroupElement.identity(b3))) == "1^3."
    minus_one = GroupElement(b2, [b2.negate(i) for i in range(2 * b2.N)])
    assert str(signed_cycle_type(minus_one)) == ".1^2"
    assert signed_cycle_type(minus_one) == DoublePartition(Partition(), Partition((1, 1)))
    assert str(signed_cycle_type(GroupElement.from_word(b5, range(5)))) == ".5"


# -- gamma

def test_coxeter_element_of_empty_subsystem_is_identity():
    rs = ambient("D", 4)
    assert coxeter_element(rs.subsystem([])).is_identity()

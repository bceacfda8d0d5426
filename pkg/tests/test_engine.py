from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reflectionlab.engine import (AmbientMismatch, GroupElement, GroupTooLarge, OrbitBudgetExceeded,
                                  SearchBudgetExceeded, are_conjugate, compose, conjugate, cycle_type,
                                  enumerate_classes, fingerprint, group_elements, orbit_keys,
                                  reflection_element, subsystem_key)
from reflectionlab.rootsys import Subsystem, build_root_system, reflection_closure
from reflectionlab.scalar import mat_vec, simplify

from conftest import ambient

POOL = [("A", 4), ("B", 4), ("D", 5), ("F", 4), ("G", 2), ("H", 3), ("H", 4), ("E", 6)]

# number of conjugacy classes (standard character table sizes)
CLASS_COUNTS = {("A", 3): 5, ("A", 4): 7, ("A", 5): 11, ("B", 3): 10, ("B", 4): 20, ("D", 4): 13,
                ("D", 5): 18, ("F", 4): 25, ("G", 2): 6, ("H", 3): 10, ("H", 4): 34}
# types with |W| <= 1152
SMALL_GROUPS = [("A", 2), ("A", 3), ("A", 4), ("A", 5), ("B", 2), ("B", 3), ("B", 4), ("C", 3),
                ("C", 4), ("D", 4), ("F", 4), ("G", 2), ("H", 3)]


@st.composite
def words(draw, pool=POOL, max_size=12):
    rs = ambient(*draw(st.sampled_from(pool)))
    w = draw(st.lists(st.integers(0, rs.rank - 1), max_size=max_size))
    return rs, GroupElement.from_word(rs, w)


@settings(max_examples=50, deadline=None)
@given(words())
def test_inverse_and_identity(arg):
    rs, g = arg
    e = GroupElement.identity(rs)
    assert compose(g, g.inverse()) == e
    assert compose(e, g) == g
    assert compose(g, e) == g


@settings(max_examples=50, deadline=None)
@given(words(), st.data())
def test_element_is_determined_by_simple_root_images(arg, data):
    rs, g = arg
    h = GroupElement.from_word(rs, data.draw(st.lists(st.integers(0, rs.rank - 1), max_size=12)))
    assert (g.key == h.key) == (g == h)


@settings(max_examples=50, deadline=None)
@given(words())
def test_permutation_is_linear(arg):
    """The matrix of g sends every root to its image root."""
    rs, g = arg
    for i in range(0, 2 * rs.N, 3):
        img = tuple(simplify(x) for x in mat_vec(g.matrix, rs.coords[i]))
        assert img == rs.coords[g(i)]


@settings(max_examples=50, deadline=None)
@given(words(), st.data())
def test_fingerprint_is_a_class_invariant(arg, data):
    rs, g = arg
    w = GroupElement.from_word(rs, data.draw(st.lists(st.integers(0, rs.rank - 1), max_size=15)))
    h = conjugate(g, w)
    assert fingerprint(h) == fingerprint(g)
    assert fingerprint(h).digest == fingerprint(g).digest


@pytest.mark.slow
@pytest.mark.parametrize("ft, trials", [(("A", 5), 1000), (("B", 4), 1000), (("C", 4), 1000),
                                        (("D", 4), 1000), (("D", 5), 1000), (("F", 4), 1000),
                                        (("G", 2), 1000), (("E", 8), 1000), (("E", 6), 100),
                                        (("H", 3), 100)])
def test_fingerprint_invariance_random_trials(ft, trials):
    rs = ambient(*ft)
    rng = np.random.default_rng(7)
    for _ in range(trials):
        g = GroupElement.from_word(rs, rng.integers(rs.rank, size=12).tolist())
        w = GroupElement.from_word(rs, rng.integers(rs.rank, size=12).tolist())
        assert fingerprint(conjugate(g, w)) == fingerprint(g)


@settings(max_examples=40, deadline=None)
@given(words([("B", 4), ("D", 5), ("F", 4), ("H", 3), ("E", 6)], 10), st.data())
def test_conjugacy_witness_recovers_conjugator(arg, data):
    rs, g = arg
    w = GroupElement.from_word(rs, data.draw(st.lists(st.integers(0, rs.rank - 1), max_size=10)))
    h = conjugate(g, w)
    res = are_conjugate(g, h)
    assert res.conjugate
    v = GroupElement.from_word(rs, [rs.simple_indices[i] for i in res.word])
    assert conjugate(g, v) == h


def test_nonconjugate_is_proved_by_exhaustion():
    rs = ambient("B", 3)
    short = next(i for i in range(rs.N) if rs.length_class[i] == "short")
    long_ = next(i for i in range(rs.N) if rs.length_class[i] == "long")
    a, b = reflection_element(rs, short), reflection_element(rs, long_)
    assert not are_conjugate(a, b, check_fingerprint=False).conjugate


def test_search_budget():
    rs = ambient("E", 8)
    a = GroupElement.from_word(rs, [0, 2, 4, 6, 1, 3, 5, 7])
    b = conjugate(a, GroupElement.from_word(rs, [7, 6, 5, 4, 3, 2, 1, 0, 2, 3, 4, 5, 6, 7]))
    with pytest.raises(SearchBudgetExceeded):
        are_conjugate(a, b, budget=5)


def test_ambient_mismatch():
    other = build_root_system("A", 3)
    assert other is not ambient("A", 3)
    with pytest.raises(AmbientMismatch):
        compose(GroupElement.identity(ambient("A", 3)), GroupElement.identity(other))


def test_cycle_type():
    assert cycle_type(np.array([1, 2, 0, 3, 5, 4])) == (3, 2, 1)


@pytest.mark.parametrize("ft", [("A", 5), ("B", 4), ("D", 6), ("E", 6), ("E", 8), ("F", 4), ("H", 3), ("H", 4)])
def test_coxeter_element_order_is_coxeter_number(ft):
    rs = ambient(*ft)
    c = GroupElement.from_word(rs, rs.simple_indices)
    assert c.order == rs.type_label.coxeter_numbers[0]


@pytest.mark.parametrize("ft", sorted(CLASS_COUNTS))
def test_class_counts(ft):
    rs = ambient(*ft)
    cls = enumerate_classes(rs)
    assert len(cls.sizes) == CLASS_COUNTS[ft]
    assert sum(cls.sizes) == rs.type_label.order
    assert all(rs.type_label.order % s == 0 for s in cls.sizes)


@pytest.mark.parametrize("ft", SMALL_GROUPS)
def test_fingerprint_adequacy(ft):
    """Distinct classes have distinct fingerprints for every |W| <= 1152."""
    rs = ambient(*ft)
    assert rs.type_label.order <= 1152
    assert enumerate_classes(rs).fingerprint_adequate()


def test_group_too_large():
    with pytest.raises(GroupTooLarge):
        group_elements(ambient("E", 7), cap=10_000)


def test_orbit_of_a_root_is_its_length_class():
    rs = ambient("F", 4)
    for i in (0, rs.N - 1):
        keys = orbit_keys(Subsystem(rs, 1 << i))
        assert len(keys) == sum(1 for x in rs.length_class[: rs.N] if x == rs.length_class[i])


def test_orbit_keys_sorted_and_canonical():
    rs = ambient("D", 5)
    sub = reflection_closure(rs, [0, 2])
    keys = orbit_keys(sub)
    assert all(keys[i].tobytes() < keys[i + 1].tobytes() for i in range(len(keys) - 1))
    assert subsystem_key(sub) in {k.tobytes() for k in keys}
    w = GroupElement.from_word(rs, [1, 3, 4, 2])
    moved = Subsystem(rs, sum(1 << rs.pos(w(i)) for i in sub.members))
    assert orbit_keys(moved)[0].tobytes() == keys[0].tobytes()


def test_orbit_budget():
    rs = ambient("E", 7)
    with pytest.raises(OrbitBudgetExceeded):
        orbit_keys(reflection_closure(rs, [0, 3]), budget=50)


def test_orbit_size_divides_group_order():
    rs = ambient("H", 4)
    sub = reflection_closure(rs, [0, 1])
    n = len(orbit_keys(sub))
    assert rs.type_label.order % n == 0

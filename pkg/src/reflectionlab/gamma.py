"""Coxeter elements of reflection subgroups and the map gamma from subgroup
classes to conjugacy classes of W."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .classify import SubgroupClassRecord
from .config import EngineConfig
from .engine import (ClassFingerprint, ConjugacyClasses, GroupElement, GroupTooLarge,
                     SearchBudgetExceeded, are_conjugate, enumerate_classes, fingerprint,
                     reflection_element, compose, subsystem_key, orbit_keys)
from .rootsys import RootSystem, Subsystem, simple_system, span_closure
from .scalar import dot, mat_vec, nullspace


def coxeter_element(sub: Subsystem) -> GroupElement:
    """Product of the reflections in the simple system of ``sub``, in index order."""
    rs = sub.ambient
    c = GroupElement.identity(rs)
    for a in simple_system(sub):
        c = compose(c, reflection_element(rs, a))
    return c


def moved_roots(c: GroupElement) -> Subsystem:
    """Positive roots orthogonal to the fixed space of ``c``.

    These are the reflections of the parabolic closure of ``<c>``; the set is
    computed from ``c`` alone.
    """
    rs = c.ambient
    M = [[x - (1 if i == j else 0) for j, x in enumerate(row)] for i, row in enumerate(c.matrix)]
    fix = nullspace(M)
    gfix = [mat_vec(rs.bilinear_form, v) for v in fix]
    mask = 0
    for i in range(rs.N):
        if all(not dot(rs.coords[i], g) for g in gfix):
            mask |= 1 << i
    return Subsystem(rs, mask)


@dataclass
class CoincidencePair:
    first: int
    second: int
    word: tuple[int, ...]  # simple-reflection indices; c_second = w^-1 c_first w

    def __iter__(self):
        return iter((self.first, self.second, self.word))


@dataclass
class GammaReport:
    entries: list[tuple[int, ClassFingerprint]]
    injective: bool
    coincidence_pairs: list[CoincidencePair]
    reflection_classes: int
    surjective: Optional[bool] = None
    class_of_record: list[int] = field(default_factory=list)  # gamma classes, numbered by first record
    class_count: Optional[int] = None  # number of conjugacy classes of W, when enumerated


def reflection_orbits(rs: RootSystem) -> int:
    """Number of W-orbits on the reflections."""
    parent = list(range(rs.N))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in rs.simple_indices:
        for a, b in enumerate(rs.posrefl[s]):
            ra, rb = find(a), find(int(b))
            if ra != rb:
                parent[ra] = rb
    return len({find(x) for x in range(rs.N)})


def _moved_key(c: GroupElement) -> bytes:
    sub = moved_roots(c)
    return orbit_keys(sub)[0].tobytes() if sub.mask else b""


def gamma_map(records: list[SubgroupClassRecord], budget: Optional[int] = None,
              known_witnesses: Optional[dict] = None) -> GammaReport:
    """Attach the Coxeter class to every record and find all coincidences.

    Records are bucketed by the fingerprint of their Coxeter element together
    with the W-class of the roots it moves (both conjugation invariants of the
    element).  Inside a bucket every pair is settled by a conjugacy search, and
    each coincidence carries a verified witness.  ``known_witnesses`` maps
    (type label, class size) pairs to words found on an earlier run; they are
    re-verified before use.
    """
    if not records:
        raise ValueError("empty classification")
    rs = records[0].subsystem.ambient
    known_witnesses = known_witnesses or {}
    elems = [coxeter_element(r.subsystem) for r in records]
    fps = [fingerprint(c) for c in elems]
    for r, f in zip(records, fps):
        r.coxeter_class = f
    buckets: dict[tuple, list[int]] = {}
    for i, (c, f) in enumerate(zip(elems, fps)):
        buckets.setdefault((f, _moved_key(c)), []).append(i)
    class_of = list(range(len(records)))
    pairs: list[CoincidencePair] = []
    for members in buckets.values():
        if len(members) < 2:
            continue
        for i, j in itertools.combinations(members, 2):
            word = _cached_word(records, elems, i, j, known_witnesses)
            if word is None:
                try:
                    res = are_conjugate(elems[i], elems[j], budget=budget)
                except SearchBudgetExceeded as exc:
                    exc.pair = (i, j)
                    raise
                if not res.conjugate:
                    continue
                word = res.word
            pairs.append(CoincidencePair(i, j, tuple(word)))
            root = class_of[i]
            class_of = [root if x == class_of[j] else x for x in class_of]
    # renumber gamma classes by first occurrence
    seen: dict[int, int] = {}
    numbered = [seen.setdefault(c, len(seen)) for c in class_of]
    return GammaReport(entries=list(enumerate(fps)), injective=not pairs, coincidence_pairs=pairs,
                       reflection_classes=reflection_orbits(rs), class_of_record=numbered)


def _witness_key(records, i, j) -> str:
    a, b = records[i], records[j]
    return f"{a.type_label}|{a.class_size}|{b.type_label}|{b.class_size}"


def _cached_word(records, elems, i, j, known) -> Optional[tuple[int, ...]]:
    word = known.get(_witness_key(records, i, j))
    if word is None:
        return None
    rs = elems[i].ambient
    w = GroupElement.from_word(rs, [rs.simple_indices[g] for g in word])
    if compose(compose(w.inverse(), elems[i]), w) == elems[j]:
        return tuple(word)
    return None


def witness_cache(records: list[SubgroupClassRecord], report: GammaReport) -> dict[str, list[int]]:
    return {_witness_key(records, p.first, p.second): list(p.word) for p in report.coincidence_pairs}


def surjectivity_audit(records: list[SubgroupClassRecord], rs: RootSystem,
                       config: EngineConfig = EngineConfig(),
                       classes: Optional[ConjugacyClasses] = None) -> tuple[bool, ConjugacyClasses]:
    """Whether every conjugacy class of W contains a Coxeter element of some
    reflection subgroup, decided on exact class ids from a full enumeration."""
    if rs.type_label.order > config.class_enum_cap:
        raise GroupTooLarge(f"|W| = {rs.type_label.order} exceeds the enumeration cap {config.class_enum_cap}")
    classes = enumerate_classes(rs, cap=config.class_enum_cap) if classes is None else classes
    hit = {classes.class_id(coxeter_element(r.subsystem)) for r in records}
    return len(hit) == len(classes.sizes), classes


@dataclass
class SeparationResult:
    ok: bool
    counterexamples: list[str]

    def __bool__(self):
        return self.ok


def closure_separation_check(records: list[SubgroupClassRecord], report: GammaReport) -> SeparationResult:
    """Coxeter elements know their parabolic closure.

    For every record, the roots moved by its Coxeter element are exactly the
    roots of the span closure of the subsystem, and that set lies in the class
    of the record's closure.  Consequently confirmed coincidences share their
    closure, which is checked as well.
    """
    bad = []
    for i, r in enumerate(records):
        c = coxeter_element(r.subsystem)
        moved = moved_roots(c)
        closure = span_closure(r.subsystem.ambient, r.subsystem)
        if moved != closure:
            bad.append(f"record {i} ({r.type_label}): moved roots differ from span closure")
            continue
        key = orbit_keys(moved)[0].tobytes() if moved.mask else subsystem_key(moved)
        if key != records[r.closure_ref].canonical.key:
            bad.append(f"record {i} ({r.type_label}): closure class mismatch")
    for p in report.coincidence_pairs:
        if records[p.first].closure_ref != records[p.second].closure_ref:
            bad.append(f"coincidence {p.first}/{p.second} crosses closure blocks")
    return SeparationResult(not bad, bad)

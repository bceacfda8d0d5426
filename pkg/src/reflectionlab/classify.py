"""Conjugacy classes of reflection subgroups of a finite Coxeter group.

Every reflection subgroup has full rank in its parabolic closure, so the
classification runs over the parabolic classes and, inside each, collects the
maximal-rank reflection subsystems.  Everything is deduplicated under the
whole group W by canonical forms.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .engine import (CanonicalSubsystem, ClassFingerprint, OrbitBudgetExceeded, OrbitIndex,
                     orbit_keys)
from .rootsys import (CartanType, RootSystem, Subsystem, bds_children, cartan_type,
                      reflection_closure, simple_system)


@dataclass
class SubgroupClassRecord:
    """One W-class of reflection subgroups."""

    canonical: CanonicalSubsystem
    type_label: CartanType
    subgroup_order: int
    class_size: int
    closure_ref: int
    subsystem: Subsystem = field(repr=False, compare=False)
    coxeter_class: Optional[ClassFingerprint] = field(default=None, compare=False)

    @property
    def rank(self) -> int:
        return self.type_label.rank


class ClassificationIncomplete(RuntimeError):
    """An orbit budget ran out; ``partial`` holds the closure blocks finished so far."""

    def __init__(self, partial: list[SubgroupClassRecord], cause: OrbitBudgetExceeded):
        super().__init__(f"classification incomplete: {cause}")
        self.partial = partial
        self.cause = cause


def _bucket(sub: Subsystem, label: CartanType) -> tuple:
    return (str(label), len(sub))


def _record(sub: Subsystem, label: CartanType, canon: CanonicalSubsystem, closure_ref: int) -> SubgroupClassRecord:
    return SubgroupClassRecord(canon, label, label.order, canon.orbit_size, closure_ref, sub)


def _iter_parabolics(rs: RootSystem, index: OrbitIndex) -> Iterator[SubgroupClassRecord]:
    for size in range(rs.rank + 1):
        for subset in itertools.combinations(rs.simple_indices, size):
            sub = reflection_closure(rs, subset)
            label = cartan_type(sub)
            b = _bucket(sub, label)
            if index.find(sub, b) is not None:
                continue
            cid = index.add(sub, b)
            yield _record(sub, label, index.canonical[cid], -1)


def parabolic_classes(rs: RootSystem, index: Optional[OrbitIndex] = None) -> list[SubgroupClassRecord]:
    """One record per W-class of parabolic subgroups (closure_ref = itself)."""
    index = OrbitIndex(rs) if index is None else index
    out = list(_iter_parabolics(rs, index))
    for i, r in enumerate(out):
        r.closure_ref = i
    return out


def _bds_classes(sub: Subsystem, index: OrbitIndex) -> list[tuple[Subsystem, CartanType, int]]:
    """Iterate Borel-De Siebenthal steps from ``sub`` until no new W-class appears."""
    found, work = [], [sub]
    seen_exact = {sub.mask}
    label = cartan_type(sub)
    cid = index.find(sub, _bucket(sub, label))
    if cid is None:
        cid = index.add(sub, _bucket(sub, label))
    found.append((sub, label, cid))
    known = {cid}
    while work:
        cur = work.pop()
        for child in sorted(bds_children(cur), key=lambda s: s.mask):
            if child.mask in seen_exact:
                continue
            seen_exact.add(child.mask)
            lab = cartan_type(child)
            b = _bucket(child, lab)
            cid = index.find(child, b)
            if cid is None:
                cid = index.add(child, b)
            if cid in known:
                continue
            known.add(cid)
            found.append((child, lab, cid))
            work.append(child)
    return found


def _parabolic_canonical(sub: Subsystem, generators: list[int], budget=None) -> bytes:
    return orbit_keys(sub, generators, budget)[0].tobytes()


def _closed_full_rank(sub: Subsystem) -> list[Subsystem]:
    """All reflection-closed subsets of ``sub`` with the rank of ``sub``, one
    per orbit of the reflection group of ``sub``, grown one root at a time."""
    rs = sub.ambient
    gens = simple_system(sub, check=False)
    target = sub.rank
    members = list(sub.members)
    level = {b"": Subsystem(rs, 0)}
    for r in range(target):
        nxt: dict[bytes, Subsystem] = {}
        seen: set[int] = set()
        for cur in level.values():
            for beta in members:
                if beta in cur:
                    continue
                cand = reflection_closure(rs, cur.members + (beta,))
                if cand.mask in seen:
                    continue
                seen.add(cand.mask)
                if cand.rank != r + 1:
                    continue
                key = _parabolic_canonical(cand, gens)
                if key not in nxt:
                    nxt[key] = cand
        level = nxt
    return list(level.values())


def _h_classes(sub: Subsystem, index: OrbitIndex) -> list[tuple[Subsystem, CartanType, int]]:
    found, known = [], set()
    for cand in sorted(_closed_full_rank(sub), key=lambda s: s.mask):
        lab = cartan_type(cand)
        b = _bucket(cand, lab)
        cid = index.find(cand, b)
        if cid is None:
            cid = index.add(cand, b)
        if cid not in known:
            known.add(cid)
            found.append((cand, lab, cid))
    return found


def maximal_rank_classes(sub: Subsystem, index: Optional[OrbitIndex] = None) -> list[Subsystem]:
    """Representatives of the W-classes of reflection subsystems of ``sub``
    having the same rank as ``sub`` (``sub`` itself included)."""
    index = OrbitIndex(sub.ambient) if index is None else index
    if sub.ambient.crystallographic:
        found = _bds_classes(sub, index)
    else:
        found = _h_classes(sub, index)
    return [s for s, _, _ in found]


def _label_key(label: CartanType) -> tuple:
    # classical tables put D and B factors ahead of A; larger factors first
    return tuple((c.family in "BCD" and label.classical and -1 or 0, c.family, -c.rank, c.short, c.m or 0)
                 for c in label.components)


def _block_key(rec: SubgroupClassRecord):
    return (rec.rank, rec.subgroup_order, rec.class_size, _label_key(rec.type_label))


def full_classification(rs: RootSystem, index: Optional[OrbitIndex] = None) -> list[SubgroupClassRecord]:
    """All W-classes of reflection subgroups, grouped by parabolic closure.

    Blocks are ordered by the rank, order and class size of the closure;
    inside a block the records run by decreasing subgroup order.  ``closure_ref`` indexes the
    returned list.
    """
    index = OrbitIndex(rs) if index is None else index
    blocks: list[tuple[SubgroupClassRecord, list[SubgroupClassRecord]]] = []
    claimed: set[int] = set()
    try:
        # each closure block is finished before the next parabolic class is
        # looked for, so a budget failure keeps every completed block
        for p in _iter_parabolics(rs, index):
            found = (_bds_classes if rs.crystallographic else _h_classes)(p.subsystem, index)
            members = []
            for s, lab, cid in found:
                if cid in claimed:
                    continue
                claimed.add(cid)
                members.append(_record(s, lab, index.canonical[cid], -1))
            blocks.append((p, members))
    except OrbitBudgetExceeded as exc:
        raise ClassificationIncomplete(_assemble(blocks), exc) from exc
    return _assemble(blocks)


def _assemble(blocks) -> list[SubgroupClassRecord]:
    blocks = sorted(blocks, key=lambda pb: _block_key(pb[0]))
    out: list[SubgroupClassRecord] = []
    for p, members in blocks:
        members.sort(key=lambda r: (-r.subgroup_order, _label_key(r.type_label), r.class_size))
        head = len(out)
        out.extend(members)
        par_pos = next(i for i in range(head, len(out)) if out[i].canonical == p.canonical)
        for r in members:
            r.closure_ref = par_pos
    return out


def closure_of(rec: SubgroupClassRecord, records: list[SubgroupClassRecord]) -> SubgroupClassRecord:
    return records[rec.closure_ref]


def closure_blocks(records: list[SubgroupClassRecord]) -> list[list[int]]:
    """Record indices grouped by closure, in output order."""
    out: dict[int, list[int]] = {}
    for i, r in enumerate(records):
        out.setdefault(r.closure_ref, []).append(i)
    return list(out.values())


def all_closed_subsets(rs: RootSystem) -> set[int]:
    """Bitmasks of every reflection-closed set of positive roots.

    Each nonempty closed set is the closure of a smaller closed set and one
    more root, so growing from the empty set reaches all of them.
    """
    closed, frontier = {0}, [0]
    while frontier:
        nxt = []
        for mask in frontier:
            base = [i for i in range(rs.N) if mask >> i & 1]
            for beta in range(rs.N):
                if mask >> beta & 1:
                    continue
                m = reflection_closure(rs, base + [beta]).mask
                if m not in closed:
                    closed.add(m)
                    nxt.append(m)
        frontier = nxt
    return closed


def brute_force_classes(rs: RootSystem, limit: int = 20) -> list[CanonicalSubsystem]:
    """W-orbits on the set of all reflection-closed subsets, by exhaustive
    enumeration.  Meant as an independent check on small ambients."""
    if rs.N > limit:
        raise ValueError(f"exhaustive enumeration is limited to {limit} positive roots")
    remaining = all_closed_subsets(rs)
    out = []
    weights = 1 << np.arange(rs.N, dtype=object)
    while remaining:
        mask = min(remaining)
        keys = orbit_keys(Subsystem(rs, mask))
        bits = np.unpackbits(keys.view(np.uint8).reshape(len(keys), -1), axis=1)[:, : rs.N]
        for row in bits:
            remaining.discard(int(np.sum(weights[row.astype(bool)])))
        out.append(CanonicalSubsystem(keys[0].tobytes(), len(keys)))
    return out

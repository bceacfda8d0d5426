"""Group elements as permutations of roots, subsystem orbits with canonical
forms, conjugacy testing with witnesses, and conjugacy class enumeration.

Bulk work (orbits, searches, class enumeration) runs level by level on numpy
arrays.  Every action used here is generated by involutions, so the orbit
graphs are undirected and a level's new nodes are its neighbours minus the
current and previous levels.
"""
from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .config import EngineConfig
from .rootsys import RootSystem, Subsystem
from .scalar import charpoly, inverse, mat_vec, simplify


class AmbientMismatch(ValueError):
    pass


class OrbitBudgetExceeded(RuntimeError):
    def __init__(self, size: int, budget: int):
        super().__init__(f"orbit exceeded budget {budget} (reached {size})")
        self.size = size
        self.budget = budget


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, frontier_a: int, frontier_b: int, stored: int):
        super().__init__(f"conjugacy search unresolved: frontiers {frontier_a}/{frontier_b}, "
                         f"{stored} nodes stored")
        self.frontiers = (frontier_a, frontier_b)
        self.stored = stored


class GroupTooLarge(RuntimeError):
    pass


DEFAULT = EngineConfig()


# ---------------------------------------------------------------------------
# Elements

class GroupElement:
    """An element of W(ambient) given by its images on all 2N roots."""

    __slots__ = ("ambient", "images", "__dict__")

    def __init__(self, ambient: RootSystem, images):
        self.ambient = ambient
        arr = np.asarray(images, dtype=ambient.refl.dtype)
        arr.setflags(write=False)
        self.images = arr

    @classmethod
    def identity(cls, rs: RootSystem) -> GroupElement:
        return cls(rs, np.arange(2 * rs.N))

    @classmethod
    def from_word(cls, rs: RootSystem, word: Sequence[int]) -> GroupElement:
        """Product s_{w0} s_{w1} ... of reflections in the given positive roots."""
        g = cls.identity(rs)
        for i in word:
            g = compose(g, reflection_element(rs, i))
        return g

    def __eq__(self, other):
        return (isinstance(other, GroupElement) and other.ambient is self.ambient
                and np.array_equal(self.images, other.images))

    def __hash__(self):
        return hash(self.images.tobytes())

    def __call__(self, i: int) -> int:
        return int(self.images[i])

    def __repr__(self) -> str:
        return f"GroupElement({self.ambient!r}, order={self.order})"

    @property
    def key(self) -> bytes:
        return self.images[: self.ambient.rank].tobytes()

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(2 * self.ambient.N)))

    @cached_property
    def order(self) -> int:
        return math.lcm(*cycle_type(self.images)) if len(self.images) else 1

    @cached_property
    def matrix(self) -> list[list]:
        """Matrix on E in the simple-root basis (columns are images of simple roots)."""
        rs = self.ambient
        cols = [rs.coords[int(self.images[i])] for i in range(rs.rank)]
        return [list(row) for row in zip(*cols)]

    @cached_property
    def charpoly(self) -> tuple:
        return charpoly(self.matrix)

    def inverse(self) -> GroupElement:
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(len(self.images), dtype=inv.dtype)
        return GroupElement(self.ambient, inv)


def reflection_element(rs: RootSystem, i: int) -> GroupElement:
    return GroupElement(rs, rs.refl[rs.pos(i)])


def _check(a: GroupElement, b: GroupElement) -> None:
    if a.ambient is not b.ambient:
        raise AmbientMismatch(f"{a.ambient!r} vs {b.ambient!r}")


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """The map ``a . b`` (apply ``b`` first)."""
    _check(a, b)
    return GroupElement(a.ambient, a.images[b.images])


def order(a: GroupElement) -> int:
    return a.order


def conjugate(a: GroupElement, w: GroupElement) -> GroupElement:
    """``a^w = w^-1 a w``."""
    _check(a, w)
    return compose(compose(w.inverse(), a), w)


def cycle_type(perm: np.ndarray) -> tuple[int, ...]:
    perm = np.asarray(perm)
    seen = np.zeros(len(perm), dtype=bool)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        n, j = 0, start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            n += 1
        lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


# ---------------------------------------------------------------------------
# Fingerprints

@dataclass(frozen=True)
class ClassFingerprint:
    """Conjugation invariants of an element w.

    For every k dividing the order of w: the cycle type of w^k on each
    length class of roots and on each small W-orbit of fundamental weights.
    The weight orbits tell apart classes exchanged by diagram automorphisms
    (such as the triality-related classes of D4), which the roots alone
    cannot see.  The characteristic polynomial on E completes the record.
    """

    power_cycle_types: tuple  # ((k, (cycle type per orbit, ...)), ...)
    charpoly: tuple

    def encode(self) -> str:
        return json.dumps({"powers": [[k, [list(ct) for ct in cts]] for k, cts in self.power_cycle_types],
                           "charpoly": list(self.charpoly)}, separators=(",", ":"))

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.encode().encode()).hexdigest()[:16]

    @property
    def order(self) -> int:
        return self.power_cycle_types[-1][0]

    @property
    def root_cycle_type(self) -> tuple[int, ...]:
        """Cycle type of w on all roots."""
        return tuple(sorted((L for ct in self._root_parts() for L in ct), reverse=True))

    def _root_parts(self):
        return self.power_cycle_types[0][1][: self._n_root_parts]

    _n_root_parts: int = field(default=1, compare=False, repr=False)


def _power_cycle_type(ct: tuple[int, ...], k: int) -> tuple[int, ...]:
    out = []
    for L in ct:
        g = math.gcd(L, k)
        out.extend([L // g] * g)
    return tuple(sorted(out, reverse=True))


WEIGHT_ORBIT_LIMIT = 720


def _exact_div(x, y):
    if isinstance(x, int) and isinstance(y, int):
        return simplify(Fraction(x, y))
    return simplify(x / y)


def _weight_orbits(rs: RootSystem) -> list[tuple[list[tuple], dict]]:
    """W-orbits of fundamental weights with at most WEIGHT_ORBIT_LIMIT
    elements, in simple-root coordinates, each with a vector -> position map.
    Orbits meeting the roots or an earlier orbit are skipped."""
    cached = rs.__dict__.get("_weight_orbits")
    if cached is not None:
        return cached
    gram = rs.bilinear_form
    ginv = inverse(gram)
    orbits = []
    seen: set = set(rs.coords)
    for i in range(rs.rank):
        half = _exact_div(rs.norms[i], 2)
        start = tuple(simplify(row[i] * half) for row in ginv)
        if start in seen:
            continue
        orbit, index, frontier = [start], {start: 0}, [start]
        while frontier and len(orbit) <= WEIGHT_ORBIT_LIMIT:
            nxt = []
            for v in frontier:
                gv = mat_vec(gram, v)
                for j in range(rs.rank):
                    c = _exact_div(2 * gv[j], rs.norms[j])
                    if not c:
                        continue
                    u = tuple(simplify(x - c) if k == j else x for k, x in enumerate(v))
                    if u not in index:
                        index[u] = len(orbit)
                        orbit.append(u)
                        nxt.append(u)
            frontier = nxt
        if len(orbit) > WEIGHT_ORBIT_LIMIT:
            continue
        seen.update(orbit)
        orbits.append((orbit, index))
    rs.__dict__["_weight_orbits"] = orbits
    return orbits


def _orbit_perm(a: GroupElement, orbit, index) -> np.ndarray:
    M = a.matrix
    return np.array([index[tuple(simplify(x) for x in mat_vec(M, v))] for v in orbit], dtype=np.int64)


def fingerprint(a: GroupElement) -> ClassFingerprint:
    rs = a.ambient
    n = a.order
    parts = []
    classes = sorted(set(rs.length_class[: rs.N]))
    for lc in classes:
        sel = np.array([i for i in range(2 * rs.N) if rs.length_class[i] == lc])
        pos = np.full(2 * rs.N, -1)
        pos[sel] = np.arange(len(sel))
        parts.append(cycle_type(pos[a.images[sel]]))
    n_root = len(parts)
    for orbit, index in _weight_orbits(rs):
        parts.append(cycle_type(_orbit_perm(a, orbit, index)))
    powers = tuple((k, tuple(_power_cycle_type(ct, k) for ct in parts))
                   for k in range(1, n + 1) if n % k == 0)
    return ClassFingerprint(powers, tuple(str(c) for c in a.charpoly), n_root)


# ---------------------------------------------------------------------------
# Subsystem orbits

@dataclass(frozen=True)
class CanonicalSubsystem:
    """Lexicographically smallest member bit-vector of a W-orbit, with the orbit size."""

    key: bytes
    orbit_size: int

    def subsystem(self, rs: RootSystem) -> Subsystem:
        bits = np.unpackbits(np.frombuffer(self.key, dtype=np.uint8))[: rs.N].astype(bool)
        return Subsystem.from_bool(rs, bits)

    @property
    def hex(self) -> str:
        return self.key.hex()


def _key_width(N: int) -> int:
    return max(8, -(-N // 64) * 8)


def pack_members(rows: np.ndarray) -> np.ndarray:
    """Pack boolean member rows into fixed-width byte keys (void dtype)."""
    width = _key_width(rows.shape[1])
    packed = np.packbits(rows, axis=1)
    if packed.shape[1] < width:
        packed = np.pad(packed, ((0, 0), (0, width - packed.shape[1])))
    return np.ascontiguousarray(packed).view(f"V{width}").ravel()


def subsystem_key(sub: Subsystem) -> bytes:
    return pack_members(sub.as_bool()[None, :])[0].tobytes()


def _generator_perms(rs: RootSystem, generators) -> list[np.ndarray]:
    if generators is None:
        generators = rs.simple_indices
    return [rs.posrefl[rs.pos(int(g))] for g in generators]


def orbit_keys(sub: Subsystem, generators=None, budget: Optional[int] = None) -> np.ndarray:
    """Sorted array of member keys over the W-orbit of ``sub``."""
    rs = sub.ambient
    budget = DEFAULT.orbit_budget if budget is None else budget
    perms = _generator_perms(rs, generators)
    level = sub.as_bool()[None, :]
    level_keys = pack_members(level)
    if not perms:
        return level_keys
    prev_keys = level_keys[:0]
    chunks = [level_keys]
    total = 1
    while len(level):
        cand = np.concatenate([level[:, p] for p in perms])
        keys = pack_members(cand)
        uk, first = np.unique(keys, return_index=True)
        fresh = ~np.isin(uk, level_keys) & ~np.isin(uk, prev_keys)
        prev_keys, level_keys = level_keys, uk[fresh]
        level = cand[first[fresh]]
        total += len(level_keys)
        if total > budget:
            raise OrbitBudgetExceeded(total, budget)
        chunks.append(level_keys)
    out = np.concatenate(chunks)
    out.sort()
    return out


def subsystem_orbit(sub: Subsystem, generators=None, budget: Optional[int] = None) -> CanonicalSubsystem:
    keys = orbit_keys(sub, generators, budget)
    return CanonicalSubsystem(keys[0].tobytes(), len(keys))


class OrbitIndex:
    """Known subsystem classes with their full orbits, for membership lookups.

    Lookups only compare against classes with the same size and type label,
    so a candidate costs one binary search per plausible class.
    """

    def __init__(self, rs: RootSystem, budget: Optional[int] = None):
        self.rs = rs
        self.budget = budget
        self._buckets: dict[tuple, list[tuple[int, np.ndarray]]] = {}
        self.canonical: list[CanonicalSubsystem] = []

    def find(self, sub: Subsystem, bucket: tuple) -> Optional[int]:
        key = pack_members(sub.as_bool()[None, :])
        for cid, keys in self._buckets.get(bucket, ()):
            pos = np.searchsorted(keys, key)[0]
            if pos < len(keys) and keys[pos] == key[0]:
                return cid
        return None

    def add(self, sub: Subsystem, bucket: tuple) -> int:
        keys = orbit_keys(sub, budget=self.budget)
        cid = len(self.canonical)
        self.canonical.append(CanonicalSubsystem(keys[0].tobytes(), len(keys)))
        self._buckets.setdefault(bucket, []).append((cid, keys))
        return cid

    def drop_orbits(self, keep: set[int]) -> None:
        """Forget stored orbits of classes not in ``keep`` (canonical forms stay)."""
        for b, lst in self._buckets.items():
            self._buckets[b] = [(c, k) for c, k in lst if c in keep]


# ---------------------------------------------------------------------------
# Conjugacy search

def _elem_keys(perms: np.ndarray, rank: int) -> np.ndarray:
    simple = perms[:, :rank].astype(np.uint8 if perms.dtype == np.uint8 else np.uint16)
    if simple.dtype == np.uint16:
        simple = simple.view(np.uint8)
    width = simple.shape[1]
    pad = -width % 8
    if pad:
        simple = np.pad(simple, ((0, 0), (0, pad)))
    simple = np.ascontiguousarray(simple)
    if simple.shape[1] == 8:
        return simple.view(np.uint64).ravel()
    return simple.view(f"V{simple.shape[1]}").ravel()


@dataclass
class _Side:
    levels: list = field(default_factory=list)  # (keys, parent_pos, gen) per level
    frontier: np.ndarray = None
    visited: np.ndarray = None

    @property
    def stored(self) -> int:
        return sum(len(k) for k, _, _ in self.levels)

    def path(self, key) -> list[int]:
        """Generator word leading from the start to ``key``."""
        for depth in range(len(self.levels) - 1, -1, -1):
            keys = self.levels[depth][0]
            pos = int(np.searchsorted(keys, key))
            if pos < len(keys) and keys[pos] == key:
                break
        word = []
        while depth > 0:
            _, parent, gen = self.levels[depth]
            word.append(int(gen[pos]))
            pos = int(parent[pos])
            depth -= 1
        return word[::-1]


def _start(perm: np.ndarray, rank: int) -> _Side:
    frontier = perm[None, :].copy()
    keys = _elem_keys(frontier, rank)
    s = _Side(frontier=frontier, visited=keys.copy())
    s.levels.append((keys, np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64)))
    return s


def _expand(side: _Side, gens: list[np.ndarray], rank: int) -> np.ndarray:
    X = side.frontier
    cand = np.concatenate([s[X[:, s]] for s in gens])
    keys = _elem_keys(cand, rank)
    k = len(X)
    parent = np.tile(np.arange(k), len(gens))
    gen = np.repeat(np.arange(len(gens)), k)
    uk, first = np.unique(keys, return_index=True)
    fresh = ~np.isin(uk, side.levels[-1][0])
    if len(side.levels) > 1:
        fresh &= ~np.isin(uk, side.levels[-2][0])
    sel = first[fresh]
    side.levels.append((uk[fresh], parent[sel], gen[sel]))
    side.frontier = cand[sel]
    side.visited = np.union1d(side.visited, uk[fresh])
    return uk[fresh]


@dataclass(frozen=True)
class ConjugacyResult:
    conjugate: bool
    word: Optional[tuple[int, ...]] = None  # simple-reflection indices of the witness
    witness: Optional[GroupElement] = None

    def __iter__(self):
        yield self.conjugate
        yield self.witness

    def __bool__(self):
        return self.conjugate


def are_conjugate(a: GroupElement, b: GroupElement, budget: Optional[int] = None,
                  check_fingerprint: bool = True) -> ConjugacyResult:
    """Decide whether ``b = a^w`` for some ``w``; on success ``w`` is returned
    and has been verified.

    Bidirectional breadth-first search over conjugates by simple reflections.
    Exhausting either side proves non-conjugacy.
    """
    _check(a, b)
    rs = a.ambient
    budget = DEFAULT.search_budget if budget is None else budget
    if check_fingerprint and fingerprint(a) != fingerprint(b):
        return ConjugacyResult(False)
    if a == b:
        return ConjugacyResult(True, (), GroupElement.identity(rs))
    gens = [rs.refl[i] for i in rs.simple_indices]
    sa, sb = _start(a.images, rs.rank), _start(b.images, rs.rank)
    while True:
        side, other = (sa, sb) if len(sa.frontier) <= len(sb.frontier) else (sb, sa)
        new = _expand(side, gens, rs.rank)
        if len(new) == 0:
            return ConjugacyResult(False)
        hit = np.intersect1d(new, other.visited)
        if len(hit):
            meet = hit[0]
            u, v = sa.path(meet), sb.path(meet)
            word = tuple(u + v[::-1])
            w = GroupElement.from_word(rs, [rs.simple_indices[g] for g in word])
            if conjugate(a, w) != b:
                raise AssertionError("conjugacy witness failed verification")
            return ConjugacyResult(True, word, w)
        if sa.stored + sb.stored > budget:
            raise SearchBudgetExceeded(len(sa.frontier), len(sb.frontier), sa.stored + sb.stored)


# ---------------------------------------------------------------------------
# Whole-group enumeration

@dataclass
class ConjugacyClasses:
    """All elements of W with their conjugacy class ids."""

    ambient: RootSystem
    perms: np.ndarray       # (|W|, 2N), sorted by key
    keys: np.ndarray
    class_of: np.ndarray    # class id per element
    fingerprints: list[ClassFingerprint]
    sizes: list[int]
    representatives: list[int]

    @property
    def order(self) -> int:
        return len(self.keys)

    def element(self, i: int) -> GroupElement:
        return GroupElement(self.ambient, self.perms[i])

    def index_of(self, g: GroupElement) -> int:
        k = _elem_keys(g.images[None, :], self.ambient.rank)
        pos = int(np.searchsorted(self.keys, k)[0])
        if pos >= len(self.keys) or self.keys[pos] != k[0]:
            raise KeyError("element not found")
        return pos

    def class_id(self, g: GroupElement) -> int:
        return int(self.class_of[self.index_of(g)])

    def fingerprint_adequate(self) -> bool:
        return len(set(self.fingerprints)) == len(self.fingerprints)

    def as_list(self) -> list[tuple[ClassFingerprint, int]]:
        return list(zip(self.fingerprints, self.sizes))


def group_elements(rs: RootSystem, cap: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
    """Every element of W as a root permutation, sorted by key."""
    cap = DEFAULT.class_enum_cap if cap is None else cap
    gens = [rs.refl[i] for i in rs.simple_indices]
    level = np.arange(2 * rs.N, dtype=rs.refl.dtype)[None, :]
    level_keys = _elem_keys(level, rs.rank)
    prev_keys = level_keys[:0]
    all_perms, all_keys = [level], [level_keys]
    total = 1
    while len(level):
        cand = np.concatenate([level[:, s] for s in gens])  # x . s
        keys = _elem_keys(cand, rs.rank)
        uk, first = np.unique(keys, return_index=True)
        fresh = ~np.isin(uk, level_keys) & ~np.isin(uk, prev_keys)
        prev_keys, level_keys = level_keys, uk[fresh]
        level = cand[first[fresh]]
        total += len(level)
        if total > cap:
            raise GroupTooLarge(f"|W| exceeds enumeration cap {cap}")
        all_perms.append(level)
        all_keys.append(level_keys)
    perms = np.concatenate(all_perms)
    keys = np.concatenate(all_keys)
    order = np.argsort(keys, kind="stable")
    return perms[order], keys[order]


def enumerate_classes(rs: RootSystem, cap: Optional[int] = None, spot_checks: bool = True) -> ConjugacyClasses:
    """Conjugacy classes of W by closing every element under conjugation by
    the simple reflections."""
    perms, keys = group_elements(rs, cap)
    n = len(keys)
    rows, cols = [], []
    for i in rs.simple_indices:
        s = rs.refl[i]
        conj = s[perms[:, s]]
        j = np.searchsorted(keys, _elem_keys(conj, rs.rank))
        rows.append(np.arange(n))
        cols.append(j)
    graph = coo_matrix((np.ones(n * rs.rank, dtype=np.int8),
                        (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    ncls, labels = connected_components(graph, directed=False)
    # renumber classes by first occurrence in key order
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first)
    remap = np.empty(ncls, dtype=np.int64)
    remap[order] = np.arange(ncls)
    class_of = remap[labels]
    reps = [int(first[c]) for c in order]
    sizes = np.bincount(class_of, minlength=ncls).tolist()
    fps = [fingerprint(GroupElement(rs, perms[r])) for r in reps]
    result = ConjugacyClasses(rs, perms, keys, class_of, fps, sizes, reps)
    if spot_checks:
        rng = np.random.default_rng(0)
        for c, r in enumerate(reps):
            members = np.flatnonzero(class_of == c)
            other = int(members[rng.integers(len(members))])
            res = are_conjugate(result.element(r), result.element(other), check_fingerprint=False)
            if not res.conjugate:
                raise AssertionError(f"class {c} failed its conjugacy spot check")
    return result

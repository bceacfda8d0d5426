"""Root systems of finite Coxeter groups, closures of reflection sets, and
type recognition.

Roots are stored in the basis of simple roots, so crystallographic roots
have integer coordinates and H3/H4 roots have coordinates in Z[phi].
Positive roots come first (simple roots at indices ``0..rank-1``), the
negative of root ``i`` sits at ``i + N``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .scalar import PHI, QSqrt5, Scalar, SpanTester, dot, mat_vec, rank as _rank, sign, simplify


class UnsupportedType(ValueError):
    pass


class NotCrystallographic(ValueError):
    pass


class NotClosed(ValueError):
    pass


class UnrecognizedType(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Cartan types

_FAMILY_ORDER = {f: i for i, f in enumerate("HIABCDEFG")}


@dataclass(frozen=True, order=True)
class Component:
    """One irreducible factor; ``short`` marks the tilde decoration."""

    family: str
    rank: int
    m: Optional[int] = None
    short: bool = False

    def __str__(self) -> str:
        if self.family == "I":
            base = f"I2({self.m})"
            return ("Ĩ" + base[1:]) if self.short else base
        if self.short:
            return {"A": "Ã", "D": "D̃"}[self.family] + str(self.rank)
        return f"{self.family}{self.rank}"

    @property
    def order(self) -> int:
        """Order of the Coxeter group of this component."""
        f, n = self.family, self.rank
        if f == "A":
            return _fact(n + 1)
        if f in "BC":
            return 2 ** n * _fact(n)
        if f == "D":
            return 2 ** (n - 1) * _fact(n)
        if f == "I":
            return 2 * self.m
        return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600, ("F", 4): 1152,
                ("G", 2): 12, ("H", 3): 120, ("H", 4): 14400}[(f, n)]

    @property
    def coxeter_number(self) -> int:
        f, n = self.family, self.rank
        if f == "A":
            return n + 1
        if f in "BC":
            return 2 * n
        if f == "D":
            return 2 * (n - 1)
        if f == "I":
            return self.m
        return {("E", 6): 12, ("E", 7): 18, ("E", 8): 30, ("F", 4): 12, ("G", 2): 6,
                ("H", 3): 10, ("H", 4): 30}[(f, n)]


def _fact(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _general_key(c: Component):
    return (_FAMILY_ORDER[c.family], c.short, c.rank, c.m or 0)


def _classical_key(c: Component):
    # B_n/D_n tables list D factors first, then B (or C), then A
    return ({"D": 0, "B": 1, "C": 1, "A": 2}[c.family], c.rank)


@dataclass(frozen=True)
class CartanType:
    """Multiset of irreducible components, kept in display order."""

    components: tuple[Component, ...] = ()
    classical: bool = False

    @classmethod
    def of(cls, components: Iterable[Component], classical: bool = False) -> CartanType:
        key = _classical_key if classical else _general_key
        return cls(tuple(sorted(components, key=key)), classical)

    def __str__(self) -> str:
        if not self.components:
            return "∅"
        parts = []
        for comp, grp in itertools.groupby(self.components):
            k = len(list(grp))
            parts.append(str(comp) + (f"^{k}" if k > 1 else ""))
        return " ".join(parts)

    def __eq__(self, other):
        if not isinstance(other, CartanType):
            return NotImplemented
        return sorted(self.components, key=_general_key) == sorted(other.components, key=_general_key)

    def __hash__(self):
        return hash(tuple(sorted(self.components, key=_general_key)))

    @property
    def rank(self) -> int:
        return sum(c.rank for c in self.components)

    @property
    def order(self) -> int:
        out = 1
        for c in self.components:
            out *= c.order
        return out

    @property
    def coxeter_numbers(self) -> list[int]:
        return [c.coxeter_number for c in self.components]


# ---------------------------------------------------------------------------
# Standard models

def _e(n: int, *entries) -> list:
    v = [0] * n
    for i, x in entries:
        v[i] = x
    return v


def _model_simple_roots(family: str, n: int) -> list[list]:
    h = Fraction(1, 2)
    if family == "A":
        return [_e(n + 1, (i, 1), (i + 1, -1)) for i in range(n)]
    if family in "BCD":
        out = [_e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
        if family == "B":
            out.append(_e(n, (n - 1, 1)))
        elif family == "C":
            out.append(_e(n, (n - 1, 2)))
        else:
            out.append(_e(n, (n - 2, 1), (n - 1, 1)))
        return out
    if family == "E":
        e8 = [
            [h, -h, -h, -h, -h, -h, -h, h],
            _e(8, (0, 1), (1, 1)),
            _e(8, (0, -1), (1, 1)),
            _e(8, (1, -1), (2, 1)),
            _e(8, (2, -1), (3, 1)),
            _e(8, (3, -1), (4, 1)),
            _e(8, (4, -1), (5, 1)),
            _e(8, (5, -1), (6, 1)),
        ]
        return e8[:n]
    if family == "F":
        return [_e(4, (1, 1), (2, -1)), _e(4, (2, 1), (3, -1)), _e(4, (3, 1)), [h, -h, -h, -h]]
    if family == "G":
        return [[1, -1, 0], [-2, 1, 1]]
    raise UnsupportedType(family)


_KNOWN_COUNTS = {
    "A": lambda n: n * (n + 1),
    "B": lambda n: 2 * n * n,
    "C": lambda n: 2 * n * n,
    "D": lambda n: 2 * n * (n - 1),
    "E": lambda n: {6: 72, 7: 126, 8: 240}[n],
    "F": lambda n: 48,
    "G": lambda n: 12,
    "H": lambda n: {3: 30, 4: 120}[n],
}


def validate_type(family: str, rank: int) -> None:
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 2,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
        "H": rank in (3, 4),
    }.get(family)
    if family == "I":
        raise UnsupportedType("I2(m) has no root model here; see classical.classify_i2")
    if not ok:
        raise UnsupportedType(f"{family}{rank} is not a supported finite type")


# ---------------------------------------------------------------------------
# Root systems

@dataclass(frozen=True)
class Root:
    coords: tuple
    length_class: str
    index: int


class RootSystem:
    """A finite root system with reflection tables over its index set.

    Treat instances as immutable; every derived table is computed once in
    the constructor.
    """

    def __init__(self, family: str, rank: int, gram, coords: Sequence[tuple], model=None,
                 *, check_count: bool = True):
        self.family = family
        self.rank = rank
        self.bilinear_form = tuple(tuple(simplify(x) for x in row) for row in gram)
        self.coords = [tuple(simplify(x) for x in c) for c in coords]
        self.model = model  # columns: simple roots in the standard coordinate model
        n_roots = len(self.coords)
        self.N = n_roots // 2
        self.simple_indices = list(range(rank))
        self.crystallographic = family != "H"
        if check_count and n_roots != _KNOWN_COUNTS[family](rank):
            raise RuntimeError(f"{family}{rank}: found {n_roots} roots")
        self.index = {c: i for i, c in enumerate(self.coords)}
        N = self.N
        gv = [mat_vec(self.bilinear_form, c) for c in self.coords[:N]]
        self.norms = [simplify(dot(c, g)) for c, g in zip(self.coords[:N], gv)]
        # inner products between positive roots
        self.ip = [[simplify(dot(self.coords[a], gv[b])) for b in range(N)] for a in range(N)]
        self.ipsign = np.array([[sign(x) for x in row] for row in self.ip], dtype=np.int8)
        dtype = np.uint8 if 2 * N <= 256 else np.uint16
        refl = np.empty((N, 2 * N), dtype=dtype)
        for a in range(N):
            ca, na = self.coords[a], self.norms[a]
            for b in range(2 * N):
                ipab = self.ip[a][b] if b < N else -self.ip[a][b - N]
                if not ipab:
                    refl[a, b] = b
                    continue
                k = simplify(2 * ipab / na if isinstance(ipab, QSqrt5) or isinstance(na, QSqrt5)
                             else Fraction(2 * ipab) / na)
                img = tuple(simplify(x - k * y) for x, y in zip(self.coords[b], ca))
                refl[a, b] = self.index[img]
        refl.setflags(write=False)
        self.refl = refl
        self.posrefl = (refl[:, :N] % N).astype(np.int64)
        self.posrefl.setflags(write=False)
        distinct = sorted(set(self.norms), key=float)
        if len(distinct) == 1:
            self.length_class = ["single"] * N
        else:
            self.length_class = ["long" if x == distinct[-1] else "short" for x in self.norms]
        self.length_class = self.length_class + self.length_class

    # -- index arithmetic
    def negate(self, i: int) -> int:
        return (i + self.N) % (2 * self.N)

    def pos(self, i: int) -> int:
        return i % self.N

    def root(self, i: int) -> Root:
        return Root(self.coords[i], self.length_class[i], i)

    @property
    def roots(self) -> list[Root]:
        return [self.root(i) for i in range(2 * self.N)]

    def inner(self, i: int, j: int) -> Scalar:
        s = 1
        if i >= self.N:
            i, s = i - self.N, -s
        if j >= self.N:
            j, s = j - self.N, -s
        return self.ip[i][j] if s > 0 else -self.ip[i][j]

    def reflect(self, alpha: int | Root, beta: int | Root) -> Root:
        a = alpha.index if isinstance(alpha, Root) else alpha
        b = beta.index if isinstance(beta, Root) else beta
        return self.root(int(self.refl[self.pos(a), b]))

    def model_coords(self, i: int) -> Optional[tuple]:
        """Coordinates of root ``i`` in the standard model, if the type has one."""
        if self.model is None:
            return None
        c = self.coords[i]
        return tuple(simplify(dot(row, c)) for row in self.model)

    @cached_property
    def type_label(self) -> CartanType:
        return cartan_type(self.full())

    def full(self) -> Subsystem:
        return Subsystem(self, (1 << self.N) - 1)

    def subsystem(self, members: Iterable[int]) -> Subsystem:
        m = 0
        for i in members:
            m |= 1 << (i % self.N)
        return Subsystem(self, m)

    def __repr__(self) -> str:
        return f"RootSystem({self.family}{self.rank})"


def _gram_h(rank: int) -> list[list]:
    g = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        g[i][i] = 2
    g[0][1] = g[1][0] = -PHI
    for i in range(1, rank - 1):
        g[i][i + 1] = g[i + 1][i] = -1
    return g


def _close_roots(gram, rank: int) -> list[tuple]:
    simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    norms = [gram[i][i] for i in range(rank)]
    seen = set(simple)
    queue = list(simple)
    while queue:
        v = queue.pop()
        gv = mat_vec(gram, v)
        for i in range(rank):
            ip = gv[i]
            if not ip:
                continue
            k = simplify(2 * ip / norms[i] if isinstance(ip, QSqrt5) or isinstance(norms[i], QSqrt5)
                         else Fraction(2 * ip) / norms[i])
            w = list(v)
            w[i] = simplify(w[i] - k)
            w = tuple(w)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return list(seen)


def _height_key(c: tuple):
    return (sum(c, 0), tuple(-x for x in c))


def build_root_system(family: str, rank: int, m: Optional[int] = None) -> RootSystem:
    """Root system of the given finite type in its standard model."""
    family = family.upper()
    validate_type(family, rank)
    if family == "H":
        gram, model = _gram_h(rank), None
    else:
        simple = _model_simple_roots(family, rank)
        gram = [[dot(a, b) for b in simple] for a in simple]
        model = [list(col) for col in zip(*simple)]  # rows = model coordinates
    roots = _close_roots(gram, rank)
    positive = [c for c in roots if all(sign(x) >= 0 for x in c)]
    simple_set = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    rest = sorted((c for c in positive if c not in simple_set), key=_height_key)
    positive = simple_set + rest
    coords = positive + [tuple(simplify(-x) for x in c) for c in positive]
    return RootSystem(family, rank, gram, coords, model)


def dual(rs: RootSystem) -> RootSystem:
    """The dual system {alpha/|alpha|^2}, indexed exactly like ``rs``."""
    if not rs.crystallographic:
        raise NotCrystallographic(f"{rs!r} has no dual root system")
    n = rs.rank
    sn = [rs.norms[i] for i in range(n)]
    gram = [[simplify(Fraction(rs.bilinear_form[i][j]) / (sn[i] * sn[j])) for j in range(n)]
            for i in range(n)]
    coords = []
    for i, c in enumerate(rs.coords):
        nb = rs.norms[i % rs.N]
        coords.append(tuple(simplify(Fraction(c[j]) * sn[j] / nb) for j in range(n)))
    model = None
    if rs.model is not None:
        model = [[simplify(Fraction(row[j]) / sn[j]) for j in range(n)] for row in rs.model]
    family = {"B": "C", "C": "B"}.get(rs.family, rs.family)
    return RootSystem(family, n, gram, coords, model)


def reflect(rs: RootSystem, alpha: int | Root, beta: int | Root) -> Root:
    return rs.reflect(alpha, beta)


# ---------------------------------------------------------------------------
# Subsystems

@dataclass(frozen=True)
class Subsystem:
    """A set of positive roots of ``ambient``, stored as an int bitmask."""

    ambient: RootSystem = field(repr=False)
    mask: int

    @property
    def members(self) -> tuple[int, ...]:
        m, out, i = self.mask, [], 0
        while m:
            if m & 1:
                out.append(i)
            m >>= 1
            i += 1
        return tuple(out)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> (i % self.ambient.N) & 1)

    def __le__(self, other: Subsystem) -> bool:
        return self.mask & ~other.mask == 0

    def as_bool(self) -> np.ndarray:
        out = np.zeros(self.ambient.N, dtype=bool)
        out[list(self.members)] = True
        return out

    @classmethod
    def from_bool(cls, ambient: RootSystem, arr: np.ndarray) -> Subsystem:
        m = 0
        for i in np.flatnonzero(arr):
            m |= 1 << int(i)
        return cls(ambient, m)

    @property
    def rank(self) -> int:
        return _rank([self.ambient.coords[i] for i in self.members])

    def is_closed(self) -> bool:
        return reflection_closure(self.ambient, self.members).mask == self.mask

    def __repr__(self) -> str:
        return f"Subsystem({self.ambient!r}, {list(self.members)})"


def _close_bool(rs: RootSystem, M: np.ndarray) -> np.ndarray:
    M = M.copy()
    count = int(M.sum())
    while True:
        idx = np.flatnonzero(M)
        M[rs.posrefl[np.ix_(idx, idx)].ravel()] = True
        c = int(M.sum())
        if c == count:
            return M
        count = c


def reflection_closure(ambient: RootSystem, seed: Iterable[int] | Subsystem) -> Subsystem:
    """Smallest set containing ``seed`` that is stable under its own reflections.

    This is the reflection set of the subgroup generated by the seed
    reflections.
    """
    if isinstance(seed, Subsystem):
        seed = seed.members
    M = np.zeros(ambient.N, dtype=bool)
    M[[ambient.pos(i) for i in seed]] = True
    if not M.any():
        return Subsystem(ambient, 0)
    return Subsystem.from_bool(ambient, _close_bool(ambient, M))


def span_closure(ambient: RootSystem, sub: Subsystem) -> Subsystem:
    """All positive roots in the linear span of ``sub``: the reflections of
    the parabolic closure of the subgroup generated by ``sub``."""
    if not sub.mask:
        return sub
    tester = SpanTester([ambient.coords[i] for i in sub.members])
    if tester.dim == ambient.rank:
        return ambient.full()
    m = 0
    for i in range(ambient.N):
        if (sub.mask >> i) & 1 or tester.contains(ambient.coords[i]):
            m |= 1 << i
    return Subsystem(ambient, m)


def simple_system(sub: Subsystem, check: bool = True) -> list[int]:
    """Simple roots of ``sub`` with respect to the ambient positive system."""
    rs = sub.ambient
    if check and not sub.is_closed():
        raise NotClosed(repr(sub))
    idx = np.array(sub.members, dtype=np.int64)
    if idx.size == 0:
        return []
    # alpha is decomposable iff some other member beta has (alpha, beta) > 0
    # and s_beta(alpha) is still positive
    img = rs.refl[np.ix_(idx, idx)]
    decomp = (rs.ipsign[np.ix_(idx, idx)] > 0) & (img < rs.N)
    return [int(a) for a, d in zip(idx, decomp.any(axis=0)) if not d]


def components(sub: Subsystem, simple: Optional[list[int]] = None) -> list[list[int]]:
    """Simple roots of ``sub`` split into orthogonal connected pieces."""
    rs = sub.ambient
    simple = simple_system(sub) if simple is None else simple
    left = list(simple)
    out = []
    while left:
        comp = [left.pop(0)]
        grew = True
        while grew:
            grew = False
            for b in list(left):
                if any(rs.ip[a][b] for a in comp):
                    comp.append(b)
                    left.remove(b)
                    grew = True
        out.append(sorted(comp))
    return out


_COS2 = {Fraction(0): 2, Fraction(1, 4): 3, Fraction(1, 2): 4, Fraction(3, 4): 6}
_COS2_5 = QSqrt5(Fraction(3, 8), Fraction(1, 8))  # cos^2(pi/5)


def bond_order(rs: RootSystem, a: int, b: int) -> int:
    """Coxeter matrix entry m(a, b) for two simple roots of a subsystem."""
    ip = rs.inner(a, b)
    if not ip:
        return 2
    c2 = ip * ip / (rs.norms[rs.pos(a)] * rs.norms[rs.pos(b)]) if isinstance(ip, QSqrt5) else \
        Fraction(ip * ip) / (rs.norms[rs.pos(a)] * rs.norms[rs.pos(b)])
    c2 = simplify(c2)
    if isinstance(c2, QSqrt5):
        if c2 == _COS2_5:
            return 5
        raise UnrecognizedType(f"bond with cos^2 = {c2}")
    try:
        return _COS2[Fraction(c2)]
    except KeyError:
        raise UnrecognizedType(f"bond with cos^2 = {c2}") from None


def _identify(rs: RootSystem, comp: list[int]) -> Component:
    n = len(comp)
    if n == 1:
        return Component("A", 1)
    bonds = {}
    for a, b in itertools.combinations(comp, 2):
        m = bond_order(rs, a, b)
        if m > 2:
            bonds[(a, b)] = m
    deg = {a: 0 for a in comp}
    for a, b in bonds:
        deg[a] += 1
        deg[b] += 1
    orders = sorted(bonds.values())
    if len(bonds) != n - 1:
        raise UnrecognizedType(f"component {comp} is not a tree")
    big = [m for m in orders if m > 3]
    if not big:
        branch = [a for a in comp if deg[a] == 3]
        if not branch:
            if max(deg.values()) > 2:
                raise UnrecognizedType("bad degrees")
            return Component("A", n)
        if len(branch) > 1 or max(deg.values()) > 3:
            raise UnrecognizedType("bad branching")
        arms = sorted(_arm_length(bonds, branch[0], nb) for nb in _neighbours(bonds, branch[0]))
        if arms[:2] == [1, 1]:
            return Component("D", n)
        if arms == [1, 2, 2]:
            return Component("E", 6)
        if arms == [1, 2, 3]:
            return Component("E", 7)
        if arms == [1, 2, 4]:
            return Component("E", 8)
        raise UnrecognizedType(f"arms {arms}")
    if len(big) > 1 or max(deg.values()) > 2:
        raise UnrecognizedType("more than one multiple bond")
    m = big[0]
    (a, b), = [k for k, v in bonds.items() if v == m]
    if m == 6:
        if n == 2:
            return Component("G", 2)
        raise UnrecognizedType("G2 bond in rank > 2")
    if m == 5:
        if n == 2:
            return Component("I", 2, m=5)
        if n in (3, 4) and (deg[a] == 1 or deg[b] == 1):
            return Component("H", n)
        raise UnrecognizedType("bond 5")
    # m == 4
    if n == 2:
        return Component("B", 2)
    if deg[a] == 2 and deg[b] == 2:
        if n == 4:
            return Component("F", 4)
        raise UnrecognizedType("interior double bond")
    leaf = a if deg[a] == 1 else b
    other = b if leaf == a else a
    leaf_short = _lt(rs.norms[rs.pos(leaf)], rs.norms[rs.pos(other)])
    return Component("B" if leaf_short else "C", n)


def _lt(x, y) -> bool:
    return sign(x - y) < 0


def _neighbours(bonds, a):
    for x, y in bonds:
        if x == a:
            yield y
        elif y == a:
            yield x


def _arm_length(bonds, start, first) -> int:
    prev, cur, length = start, first, 1
    while True:
        nxt = [x for x in _neighbours(bonds, cur) if x != prev]
        if not nxt:
            return length
        prev, cur, length = cur, nxt[0], length + 1


def coordinate_blocks(sub: Subsystem) -> list[tuple[str, int]]:
    """Decompose a subsystem of a B/C/D ambient into coordinate blocks.

    Returns one ``(kind, size)`` pair per block of coordinates, where kind is
    ``"A"`` (rank size-1), ``"B"``/``"C"`` (contains an axis root) or ``"D"``
    (rank equal to the block size).  Unused coordinates are ``("A", 1)``.
    """
    rs = sub.ambient
    if rs.family not in "BCD" or rs.model is None:
        raise ValueError("coordinate blocks need a B, C or D ambient")
    n = rs.rank
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    axis = set()
    supports = []
    for i in sub.members:
        mc = rs.model_coords(i)
        supp = [k for k, x in enumerate(mc) if x]
        supports.append(supp)
        if len(supp) == 1:
            axis.add(supp[0])
        else:
            parent[find(supp[0])] = find(supp[1])
    blocks: dict[int, list[int]] = {}
    for k in range(n):
        blocks.setdefault(find(k), []).append(k)
    simple = simple_system(sub, check=False)
    out = []
    for root_, coords_ in blocks.items():
        size = len(coords_)
        cs = set(coords_)
        if cs & axis:
            kind = "C" if rs.family == "C" else "B"
        else:
            r = sum(1 for s in simple if set(k for k, x in enumerate(rs.model_coords(s)) if x) <= cs)
            kind = "D" if r == size else "A"
        out.append((kind, size))
    return out


def cartan_type(sub: Subsystem) -> CartanType:
    """Type label of a reflection-closed subsystem, with the decorations used
    by the ambient's tables (tilde for short roots in F4/G2; B/D blocks in
    classical ambients)."""
    rs = sub.ambient
    if rs.family in "BCD" and rs.model is not None:
        comps = []
        for kind, size in coordinate_blocks(sub):
            if kind == "A":
                if size > 1:
                    comps.append(Component("A", size - 1))
            else:
                comps.append(Component(kind, size))
        return CartanType.of(comps, classical=True)
    simple = simple_system(sub, check=False)
    comps = []
    for comp in components(sub, simple):
        c = _identify(rs, comp)
        if rs.family in "FG" and c.family in "AD":
            if all(rs.length_class[a] == "short" for a in comp):
                c = Component(c.family, c.rank, c.m, short=True)
        comps.append(c)
    return CartanType.of(comps)


def highest_roots(sub: Subsystem, comp: list[int]) -> list[int]:
    """Dominant roots of the irreducible component spanned by ``comp``:
    the highest root, then (if different) the highest short root."""
    rs = sub.ambient
    members = reflection_closure(rs, comp).members
    dom = [b for b in members if all(rs.ipsign[b, a] >= 0 for a in comp)]
    dom.sort(key=lambda b: float(rs.norms[b]), reverse=True)
    return dom


def bds_children(sub: Subsystem) -> set[Subsystem]:
    """One Borel-De Siebenthal step on every component of ``sub``.

    For each component the extended diagram uses the negative of the highest
    root (the step on the system itself) and of the highest short root (the
    highest root of the dual component, mapped back root-for-coroot; the two
    share indices).  Deleting one node in every possible way gives the
    children.  ``sub`` itself is always included.
    """
    rs = sub.ambient
    if not rs.crystallographic:
        raise NotCrystallographic(repr(rs))
    out = {sub}
    simple = simple_system(sub, check=False)
    for comp in components(sub, simple):
        comp_mask = reflection_closure(rs, comp).mask
        rest = sub.mask & ~comp_mask
        for theta in highest_roots(sub, comp):
            ext = comp + [theta]
            for drop in range(len(ext)):
                keep = ext[:drop] + ext[drop + 1:]
                child = reflection_closure(rs, keep)
                out.add(Subsystem(rs, rest | child.mask))
    return out

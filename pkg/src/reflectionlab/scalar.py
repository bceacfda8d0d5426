"""Exact scalars: rationals and elements of the quadratic field Q(sqrt 5).

Crystallographic root data lives in ``int``/``Fraction``; the H3/H4 data
needs ``QSqrt5``.  Everything here is exact, there is no tolerance anywhere.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

Scalar = Union[int, Fraction, "QSqrt5"]


class QSqrt5:
    """``a + b*sqrt(5)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a: Rational | int = 0, b: Rational | int = 0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def coerce(cls, x: Scalar) -> QSqrt5:
        if isinstance(x, QSqrt5):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        return NotImplemented

    def __repr__(self) -> str:
        return f"QSqrt5({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}*sqrt5"

    def __add__(self, other):
        o = QSqrt5.coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt5(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt5(-self.a, -self.b)

    def __sub__(self, other):
        o = QSqrt5.coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt5(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return QSqrt5.coerce(other) - self

    def __mul__(self, other):
        o = QSqrt5.coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt5(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> QSqrt5:
        return QSqrt5(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 5 * self.b * self.b

    def __truediv__(self, other):
        o = QSqrt5.coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt5)")
        num = self * o.conjugate()
        return QSqrt5(num.a / n, num.b / n)

    def __rtruediv__(self, other):
        return QSqrt5.coerce(other) / self

    def __eq__(self, other):
        o = QSqrt5.coerce(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with 5 b^2
        d = a * a - 5 * b * b
        return sa if d > 0 else sb

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * 5 ** 0.5


SQRT5 = QSqrt5(0, 1)
PHI = QSqrt5(Fraction(1, 2), Fraction(1, 2))


def sign(x: Scalar) -> int:
    if isinstance(x, QSqrt5):
        return x.sign()
    return (x > 0) - (x < 0)


def simplify(x: Scalar) -> Scalar:
    """Drop to a plain rational when the irrational part vanishes."""
    if isinstance(x, QSqrt5) and x.b == 0:
        x = x.a
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    s: Scalar = 0
    for x, y in zip(u, v):
        if x and y:
            s = s + x * y
    return s


def bilinear(u: Sequence[Scalar], gram: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> Scalar:
    return dot(u, mat_vec(gram, v))


def mat_vec(m: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> list:
    return [dot(row, v) for row in m]


def mat_mul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> list:
    cols = list(zip(*b))
    return [[dot(row, col) for col in cols] for row in a]


def _div(x: Scalar, y: Scalar) -> Scalar:
    if isinstance(x, int) and isinstance(y, int):
        return Fraction(x, y)
    return x / y


def row_echelon(rows: Sequence[Sequence[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form of ``rows``; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    if not m:
        return [], pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [simplify(_div(x, p)) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [simplify(x - f * y) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    return len(row_echelon(rows)[0])


class SpanTester:
    """Membership test for the span of a fixed set of vectors."""

    def __init__(self, rows: Sequence[Sequence[Scalar]]):
        self.basis, self.pivots = row_echelon(rows)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[Scalar]) -> bool:
        w = list(v)
        for row, c in zip(self.basis, self.pivots):
            if w[c]:
                f = w[c]
                w = [x - f * y for x, y in zip(w, row)]
        return not any(w)


def nullspace(m: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    """Basis of ``{x : m x = 0}``."""
    ncols = len(m[0]) if m else 0
    red, pivots = row_echelon(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x: list[Scalar] = [0] * ncols
        x[f] = 1
        for row, c in zip(red, pivots):
            x[c] = simplify(-row[f])
        basis.append(x)
    return basis


def inverse(m: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    n = len(m)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m)]
    red, pivots = row_echelon(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def charpoly(m: Sequence[Sequence[Scalar]]) -> tuple:
    """Coefficients of det(xI - m), leading coefficient first (Faddeev-LeVerrier)."""
    n = len(m)
    coeffs: list[Scalar] = [1]
    acc = [[0] * n for _ in range(n)]  # M_0 = 0
    for k in range(1, n + 1):
        # M_k = m M_{k-1} + c_{k-1} I
        prod = mat_mul(m, acc) if k > 1 else [[0] * n for _ in range(n)]
        c_prev = coeffs[-1]
        acc = [[prod[i][j] + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        am = mat_mul(m, acc)
        tr = sum((am[i][i] for i in range(n)), 0)
        coeffs.append(simplify(_div(-tr, k) if not isinstance(tr, QSqrt5) else -tr / k))
    return tuple(simplify(c) for c in coeffs)

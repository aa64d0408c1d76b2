"""Exact rational scalars, dense matrices, univariate polynomials and sparse echelon forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

Rational = Fraction

DEFAULT_DIVISOR_LIMIT = 10**12


class Singular(ArithmeticError):
    """Raised when inverting a matrix whose rank is below its dimension."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, _, den = text.partition("/")
        if den and int(den) == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# Dense matrices


@dataclass(frozen=True)
class QMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        data = tuple(tuple(as_rational(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        z = Fraction(0)
        return cls(rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "QMatrix":
        cols = [[as_rational(x) for x in c] for c in columns]
        return cls(rows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(rows)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def column(self, j: int) -> list[Fraction]:
        return [r[j] for r in self.entries]

    @property
    def T(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ocols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = []
        for r in self.entries:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(sum((a * c[k] for k, a in nz), Fraction(0)) for c in ocols))
        return QMatrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return QMatrix(self.rows, self.cols,
                       tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "QMatrix":
        c = as_rational(c)
        return QMatrix(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.entries))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "QMatrix":
        return QMatrix(r1 - r0, c1 - c0, tuple(tuple(r[c0:c1]) for r in self.entries[r0:r1]))

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self.entries)
        return f"QMatrix({self.rows}x{self.cols}: [{body}])"


def block_diag(*mats: QMatrix) -> QMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[Fraction(0)] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            out[r0 + i][c0:c0 + m.cols] = m.entries[i]
        r0 += m.rows
        c0 += m.cols
    return QMatrix(rows, cols, tuple(tuple(r) for r in out))


@dataclass(frozen=True)
class RrefResult:
    reduced: QMatrix
    rank: int
    pivots: tuple[int, ...]
    kernel: tuple[QMatrix, ...]


def _rref_rows(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    prow = 0
    for c in range(ncols):
        if prow == len(m):
            break
        sel = next((i for i in range(prow, len(m)) if m[i][c]), None)
        if sel is None:
            continue
        m[prow], m[sel] = m[sel], m[prow]
        p = m[prow][c]
        if p != 1:
            m[prow] = [x / p for x in m[prow]]
        pr = m[prow]
        nz = [k for k in range(c, ncols) if pr[k]]
        for i in range(len(m)):
            if i != prow and m[i][c]:
                f = m[i][c]
                row = m[i]
                for k in nz:
                    row[k] -= f * pr[k]
        pivots.append(c)
        prow += 1
    return m, pivots


def kernel_vectors(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Right null space basis of a dense matrix given as row lists."""
    red, pivots = _rref_rows(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis


def rref(M: QMatrix) -> RrefResult:
    red, pivots = _rref_rows([list(r) for r in M.entries], M.cols)
    kernel = tuple(QMatrix.from_columns([v], M.cols) for v in kernel_vectors([list(r) for r in M.entries], M.cols))
    return RrefResult(QMatrix(M.rows, M.cols, tuple(tuple(r) for r in red)), len(pivots), tuple(pivots), kernel)


def rank(M: QMatrix) -> int:
    return len(_rref_rows([list(r) for r in M.entries], M.cols)[1])


def invert(M: QMatrix) -> QMatrix:
    if M.rows != M.cols:
        raise ValueError("invert needs a square matrix")
    n = M.rows
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M.entries)]
    red, pivots = _rref_rows(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise Singular(f"matrix of size {n} is singular")
    return QMatrix(n, n, tuple(tuple(r[n:]) for r in red[:n]))


def det(M: QMatrix) -> Fraction:
    if M.rows != M.cols:
        raise ValueError("det needs a square matrix")
    m = [list(r) for r in M.entries]
    n = M.rows
    d = Fraction(1)
    for c in range(n):
        sel = next((i for i in range(c, n) if m[i][c]), None)
        if sel is None:
            return Fraction(0)
        if sel != c:
            m[c], m[sel] = m[sel], m[c]
            d = -d
        p = m[c][c]
        d *= p
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / p
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def solve_particular(rows: list[list[Fraction]], rhs: list[Fraction], ncols: int) -> list[Fraction] | None:
    """One solution x of rows·x = rhs, or None when inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = _rref_rows(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


# ---------------------------------------------------------------------------
# Univariate polynomials


@dataclass(frozen=True)
class QPoly:
    """Polynomial in one variable, coefficients in ascending degree."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(as_rational(x) for x in c))

    @classmethod
    def of(cls, *coeffs) -> "QPoly":
        return cls(tuple(as_rational(c) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "QPoly") -> "QPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return QPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "QPoly":
        return QPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __mul__(self, other: "QPoly") -> "QPoly":
        if self.is_zero() or other.is_zero():
            return QPoly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPoly(tuple(out))

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.coeffs[-1]
        while len(rem) >= len(other.coeffs) and rem:
            shift = len(rem) - len(other.coeffs)
            f = rem[-1] / lead
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return QPoly(tuple(q)), QPoly(tuple(rem))

    def __repr__(self):
        return f"QPoly({', '.join(format_rational(c) for c in self.coeffs)})"


def interpolate(points: Sequence[tuple[Fraction, Fraction]]) -> QPoly:
    """Lagrange interpolation through the given (x, y) pairs."""
    result = QPoly(())
    for i, (xi, yi) in enumerate(points):
        if not yi:
            continue
        term = QPoly.of(yi)
        for j, (xj, _) in enumerate(points):
            if j != i:
                term = term * QPoly.of(-xj / (xi - xj), 1 / (xi - xj))
        result = result + term
    return result


def _divisors(n: int, limit: int) -> list[int] | None:
    n = abs(n)
    if n > limit:
        return None
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


@dataclass(frozen=True)
class LinearFactors:
    roots: tuple[tuple[Fraction, int], ...]
    complete: bool


def rational_linear_factors(p: QPoly, divisor_limit: int = DEFAULT_DIVISOR_LIMIT) -> LinearFactors:
    """Rational roots of ``p`` with multiplicities, via the rational root theorem."""
    if p.is_zero():
        raise ValueError("zero polynomial has no factorization")
    roots: dict[Fraction, int] = {}
    rest = p
    while rest.coeffs and rest.coeffs[0] == 0 and rest.degree > 0:
        rest = QPoly(rest.coeffs[1:])
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
    searched_all = True
    while rest.degree > 0:
        den = 1
        for c in rest.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in rest.coeffs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        ints = [c // g for c in ints]
        pd = _divisors(ints[0], divisor_limit)
        qd = _divisors(ints[-1], divisor_limit)
        if pd is None or qd is None:
            searched_all = False
            break
        found = None
        for a in pd:
            for b in qd:
                for cand in (Fraction(a, b), Fraction(-a, b)):
                    if rest(cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        rest, r = rest.divmod(QPoly.of(-found, 1))
        assert r.is_zero()
        roots[found] = roots.get(found, 0) + 1
    complete = searched_all and rest.degree == 0
    return LinearFactors(tuple(sorted(roots.items())), complete)


# ---------------------------------------------------------------------------
# Sparse echelon subspaces (columns are integer indices; pivot = smallest index)


class SparseEchelon:
    """Incrementally built echelon basis of a subspace of Q^N.

    Vectors are dicts ``{index: Fraction}``.  Each stored row has leading
    coefficient 1 at its pivot, the smallest index in its support, and no two
    rows share a pivot.  ``reduce`` returns the canonical remainder once
    ``make_reduced`` has been called (or for any vector, a remainder supported
    off the pivots).
    """

    __slots__ = ("rows",)

    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def pivots(self) -> set[int]:
        return set(self.rows)

    def reduce(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        v = dict(vec)
        rows = self.rows
        while True:
            hits = [k for k in v if k in rows]
            if not hits:
                return v
            k = min(hits)
            c = v[k]
            for j, a in rows[k].items():
                nv = v.get(j, 0) - c * a
                if nv:
                    v[j] = nv
                else:
                    v.pop(j, None)

    def add(self, vec: dict[int, Fraction]) -> bool:
        """Insert ``vec``; return True when it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        c = v[p]
        if c != 1:
            v = {j: a / c for j, a in v.items()}
        self.rows[p] = v
        return True

    def contains(self, vec: dict[int, Fraction]) -> bool:
        return not self.reduce(vec)

    def make_reduced(self) -> None:
        """Back-substitute so every row is zero on the other pivots (true RREF)."""
        for p in sorted(self.rows, reverse=True):
            row = self.rows[p]
            others = [k for k in row if k != p and k in self.rows]
            if not others:
                continue
            head = {p: row[p]}
            tail = {k: a for k, a in row.items() if k != p}
            tail = self.reduce(tail)
            head.update(tail)
            self.rows[p] = head

    def basis(self) -> list[dict[int, Fraction]]:
        return [self.rows[p] for p in sorted(self.rows)]


def sparse_kernel(columns: list[dict[int, Fraction]]) -> list[dict[int, Fraction]]:
    """Kernel of the linear map sending basis vector i to ``columns[i]``.

    Returned vectors are dicts over the domain indices.
    """
    # Echelon on the images while tracking combinations of domain vectors.
    ech: dict[int, tuple[dict[int, Fraction], dict[int, Fraction]]] = {}
    kernel = []
    for i, col in enumerate(columns):
        v = dict(col)
        comb: dict[int, Fraction] = {i: Fraction(1)}
        while True:
            hits = [k for k in v if k in ech]
            if not hits:
                break
            k = min(hits)
            c = v[k]
            row, rcomb = ech[k]
            for j, a in row.items():
                nv = v.get(j, 0) - c * a
                if nv:
                    v[j] = nv
                else:
                    v.pop(j, None)
            for j, a in rcomb.items():
                nv = comb.get(j, 0) - c * a
                if nv:
                    comb[j] = nv
                else:
                    comb.pop(j, None)
        if v:
            p = min(v)
            c = v[p]
            ech[p] = ({j: a / c for j, a in v.items()}, {j: a / c for j, a in comb.items()})
        else:
            kernel.append(comb)
    return kernel


def sparse_rank(vectors: Iterable[dict[int, Fraction]]) -> int:
    e = SparseEchelon()
    for v in vectors:
        e.add(v)
    return e.dim

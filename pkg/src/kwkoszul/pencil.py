"""2×e matrices of linear forms, their matrix pencils, and Kronecker–Weierstrass normal forms."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .rational_core import (
    QMatrix,
    QPoly,
    Singular,
    as_rational,
    block_diag,
    det,
    format_rational,
    interpolate,
    invert,
    kernel_vectors,
    rank,
    rational_linear_factors,
    solve_particular,
)

NILPOTENT = "nilpotent"
SCROLL = "scroll"
JORDAN = "jordan"
_KIND_RANK = {NILPOTENT: 0, SCROLL: 1, JORDAN: 2}


class PencilError(ValueError):
    pass


class DegeneratePencil(PencilError):
    """The two rows of X are linearly dependent, so I_2(X) = 0."""


class IrrationalEigenvalues(PencilError):
    """The regular part has eigenvalues outside Q."""


class DependentForms(PencilError):
    pass


# ---------------------------------------------------------------------------
# Linear forms and matrices


@dataclass(frozen=True)
class LinearForm:
    coeffs: tuple[Fraction, ...]

    @classmethod
    def from_mapping(cls, variables: Sequence[str], mapping: Mapping[str, object]) -> "LinearForm":
        index = {v: i for i, v in enumerate(variables)}
        c = [Fraction(0)] * len(variables)
        for name, val in mapping.items():
            if name not in index:
                raise KeyError(f"unknown variable {name!r}")
            c[index[name]] += as_rational(val)
        return cls(tuple(c))

    def to_mapping(self, variables: Sequence[str]) -> dict[str, str]:
        return {v: format_rational(c) for v, c in zip(variables, self.coeffs) if c}

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self):
        return repr(self.coeffs)


@dataclass(frozen=True)
class LinearFormMatrix:
    variables: tuple[str, ...]
    rows: tuple[tuple[LinearForm, ...], tuple[LinearForm, ...]]

    def __post_init__(self):
        if len(self.rows) != 2:
            raise ValueError("a LinearFormMatrix has exactly two rows")
        if len(self.rows[0]) != len(self.rows[1]) or not self.rows[0]:
            raise ValueError("rows must have equal positive length")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be distinct")
        for r in self.rows:
            for f in r:
                if len(f.coeffs) != len(self.variables):
                    raise ValueError("linear form length differs from the variable count")

    @property
    def e(self) -> int:
        return len(self.rows[0])

    @property
    def n(self) -> int:
        return len(self.variables)

    @classmethod
    def from_json(cls, data: Mapping) -> "LinearFormMatrix":
        variables = tuple(data["variables"])
        rows = tuple(tuple(LinearForm.from_mapping(variables, entry) for entry in row) for row in data["rows"])
        return cls(variables, rows)

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "rows": [[f.to_mapping(self.variables) for f in row] for row in self.rows],
        }

    def mix_rows(self, M: QMatrix) -> "LinearFormMatrix":
        """Apply a 2×2 matrix to the two rows (the determinantal ideal is unchanged when M is invertible)."""
        out = []
        for i in range(2):
            row = []
            for j in range(self.e):
                c = tuple(M[i, 0] * a + M[i, 1] * b
                          for a, b in zip(self.rows[0][j].coeffs, self.rows[1][j].coeffs))
                row.append(LinearForm(c))
            out.append(tuple(row))
        return LinearFormMatrix(self.variables, tuple(out))

    def pretty(self) -> str:
        def show(f: LinearForm) -> str:
            parts = []
            for v, c in zip(self.variables, f.coeffs):
                if not c:
                    continue
                if c == 1:
                    parts.append(v)
                elif c == -1:
                    parts.append(f"-{v}")
                else:
                    parts.append(f"{format_rational(c)}*{v}")
            return "+".join(parts).replace("+-", "-") or "0"

        return "\n".join("[" + ", ".join(show(f) for f in row) + "]" for row in self.rows)


# ---------------------------------------------------------------------------
# Pencils and normal forms


@dataclass(frozen=True)
class Pencil:
    A: QMatrix
    B: QMatrix

    def __post_init__(self):
        if (self.A.rows, self.A.cols) != (self.B.rows, self.B.cols):
            raise ValueError("A and B must have the same shape")

    @property
    def e(self) -> int:
        return self.A.rows

    @property
    def n(self) -> int:
        return self.A.cols

    def at(self, v) -> QMatrix:
        return self.A + self.B.scale(v)

    def mix(self, M: QMatrix) -> "Pencil":
        return Pencil(self.A.scale(M[0, 0]) + self.B.scale(M[0, 1]),
                      self.A.scale(M[1, 0]) + self.B.scale(M[1, 1]))


@dataclass(frozen=True, order=True)
class KWBlock:
    kind: str
    length: int
    eigenvalue: Fraction | None = None

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown block kind {self.kind!r}")
        if self.length < 1:
            raise ValueError("block lengths are positive")
        if (self.kind == JORDAN) != (self.eigenvalue is not None):
            raise ValueError("exactly the Jordan blocks carry an eigenvalue")

    def sort_key(self):
        if self.kind == JORDAN:
            return (2, self.eigenvalue, -self.length)
        return (_KIND_RANK[self.kind], self.length, 0)

    def to_json(self) -> dict:
        d = {"kind": self.kind, "length": self.length}
        if self.eigenvalue is not None:
            d["eigenvalue"] = format_rational(self.eigenvalue)
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "KWBlock":
        ev = d.get("eigenvalue")
        return cls(d["kind"], int(d["length"]), None if ev is None else as_rational(ev))


def N(m: int) -> KWBlock:
    return KWBlock(NILPOTENT, m)


def S(n: int) -> KWBlock:
    return KWBlock(SCROLL, n)


def J(p: int, lam) -> KWBlock:
    return KWBlock(JORDAN, p, as_rational(lam))


@dataclass(frozen=True)
class KWForm:
    """Blocks in canonical order, plus a count of variables absent from X."""

    blocks: tuple[KWBlock, ...]
    free: int = 0

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(sorted(self.blocks, key=KWBlock.sort_key)))

    @classmethod
    def of(cls, *blocks: KWBlock, free: int = 0) -> "KWForm":
        return cls(tuple(blocks), free)

    @property
    def nilpotent_lengths(self) -> list[int]:
        return [b.length for b in self.blocks if b.kind == NILPOTENT]

    @property
    def scroll_lengths(self) -> list[int]:
        return [b.length for b in self.blocks if b.kind == SCROLL]

    @property
    def jordan_groups(self) -> list[tuple[Fraction, list[int]]]:
        groups: dict[Fraction, list[int]] = {}
        for b in self.blocks:
            if b.kind == JORDAN:
                groups.setdefault(b.eigenvalue, []).append(b.length)
        return [(lam, groups[lam]) for lam in sorted(groups)]

    def without_nilpotent(self) -> "KWForm":
        return KWForm(tuple(b for b in self.blocks if b.kind != NILPOTENT), self.free)

    def variables(self) -> tuple[str, ...]:
        return tuple(v for names in self.block_variables() for v in names) + tuple(
            f"w{k + 1}" for k in range(self.free))

    def block_variables(self) -> list[tuple[str, ...]]:
        """Variable names per block in canonical order."""
        out = []
        ni = si = 0
        groups = {lam: gi + 1 for gi, (lam, _) in enumerate(self.jordan_groups)}
        within: dict[Fraction, int] = {}
        for b in self.blocks:
            if b.kind == NILPOTENT:
                ni += 1
                out.append(tuple(f"x{ni}_{r}" for r in range(1, b.length)))
            elif b.kind == SCROLL:
                si += 1
                out.append(tuple(f"y{si}_{s}" for s in range(1, b.length + 2)))
            else:
                gi = groups[b.eigenvalue]
                within[b.eigenvalue] = within.get(b.eigenvalue, 0) + 1
                out.append(tuple(f"z{gi}_{within[b.eigenvalue]}_{r}" for r in range(1, b.length + 1)))
        return out

    @property
    def num_variables(self) -> int:
        return len(self.variables())

    def to_json(self) -> dict:
        d = {"blocks": [b.to_json() for b in self.blocks]}
        if self.free:
            d["free_variables"] = self.free
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "KWForm":
        return cls(tuple(KWBlock.from_json(b) for b in d["blocks"]), int(d.get("free_variables", 0)))

    def __str__(self):
        parts = []
        for b in self.blocks:
            if b.kind == JORDAN:
                parts.append(f"J:({b.length},{format_rational(b.eigenvalue)})")
            else:
                parts.append(f"{b.kind[0].upper()}:{b.length}")
        if self.free:
            parts.append(f"free:{self.free}")
        return "{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class EquivalenceCertificate:
    """C·(A'+vB')·C' is the canonical pencil, where (A', B') = row_mix applied to (A, B)."""

    C: QMatrix
    Cprime: QMatrix
    row_mix: QMatrix = field(default_factory=lambda: QMatrix.identity(2))

    def to_json(self) -> dict:
        def m(M):
            return [[format_rational(x) for x in r] for r in M.entries]

        return {"C": m(self.C), "Cprime": m(self.Cprime), "row_mix": m(self.row_mix)}


def _bidiagonal(rows: int, cols: int, diag_a, super_b, diag_b=Fraction(0)) -> tuple[QMatrix, QMatrix]:
    A = [[Fraction(0)] * cols for _ in range(rows)]
    B = [[Fraction(0)] * cols for _ in range(rows)]
    for i in range(rows):
        for j in range(cols):
            if j == i:
                A[i][j] = diag_a
                B[i][j] = diag_b
            elif j == i + 1:
                B[i][j] = super_b
    return QMatrix.from_rows(A, cols), QMatrix.from_rows(B, cols)


def block_pencil(b: KWBlock) -> tuple[QMatrix, QMatrix]:
    """The canonical pencil of a single block: L^T_{m-1}, L_n, or J_{p,λ}."""
    if b.kind == SCROLL:
        return _bidiagonal(b.length, b.length + 1, Fraction(1), Fraction(1))
    if b.kind == NILPOTENT:
        A, B = _bidiagonal(b.length - 1, b.length, Fraction(1), Fraction(1))
        return A.T, B.T
    return _bidiagonal(b.length, b.length, Fraction(1), Fraction(1), b.eigenvalue)


def canonical_pencil(F: KWForm) -> Pencil:
    parts = [block_pencil(b) for b in F.blocks]
    free = QMatrix.zeros(0, F.free)
    return Pencil(block_diag(*(p[0] for p in parts), free), block_diag(*(p[1] for p in parts), free))


# ---------------------------------------------------------------------------
# Conversions


def matrix_to_pencil(X: LinearFormMatrix) -> Pencil:
    A = QMatrix.from_rows([f.coeffs for f in X.rows[0]], X.n)
    B = QMatrix.from_rows([f.coeffs for f in X.rows[1]], X.n)
    return Pencil(A, B)


def pencil_to_matrix(P: Pencil, variables: Sequence[str]) -> LinearFormMatrix:
    rows = tuple(tuple(LinearForm(tuple(M.entries[j])) for j in range(P.e)) for M in (P.A, P.B))
    return LinearFormMatrix(tuple(variables), rows)


def blocks_to_matrix(F: KWForm) -> LinearFormMatrix:
    if not F.blocks:
        raise ValueError("empty normal form")
    variables = F.variables()
    index = {v: i for i, v in enumerate(variables)}
    n = len(variables)

    def form(*terms) -> LinearForm:
        c = [Fraction(0)] * n
        for coef, name in terms:
            c[index[name]] += coef
        return LinearForm(tuple(c))

    top, bottom = [], []
    for b, names in zip(F.blocks, F.block_variables()):
        one = Fraction(1)
        if b.kind == NILPOTENT:
            # reversed column order: (0, x1, ..., x_{m-1}) over (x1, ..., x_{m-1}, 0)
            top.append(form())
            top.extend(form((one, v)) for v in names)
            bottom.extend(form((one, v)) for v in names)
            bottom.append(form())
        elif b.kind == SCROLL:
            top.extend(form((one, v)) for v in names[:-1])
            bottom.extend(form((one, v)) for v in names[1:])
        else:
            lam = b.eigenvalue
            p = b.length
            for r in range(p):
                top.append(form((one, names[r])))
                if r + 1 < p:
                    bottom.append(form((one, names[r + 1]), (lam, names[r])))
                else:
                    bottom.append(form((lam, names[r])))
    return LinearFormMatrix(variables, (tuple(top), tuple(bottom)))


def scroll_matrix(type_: Sequence[int]) -> LinearFormMatrix:
    """The natural matrix of the rational normal scroll of the given type."""
    return blocks_to_matrix(KWForm(tuple(S(n) for n in type_)))


def section(X: LinearFormMatrix, forms: Sequence[LinearForm]) -> LinearFormMatrix:
    """Quotient by linear forms: eliminate one leading variable per form."""
    if not forms:
        return X
    n = X.n
    rows = [list(f.coeffs) for f in forms]
    from .rational_core import _rref_rows

    red, pivots = _rref_rows(rows, n)
    if len(pivots) < len(forms):
        raise DependentForms("the given linear forms are linearly dependent")
    keep = [j for j in range(n) if j not in set(pivots)]
    # x_p = -sum_{j kept} red[r][j] x_j
    subst = {p: {j: -red[r][j] for j in keep if red[r][j]} for r, p in enumerate(pivots)}

    def reduce_form(f: LinearForm) -> LinearForm:
        c = {j: f.coeffs[j] for j in keep}
        for p, expr in subst.items():
            a = f.coeffs[p]
            if a:
                for j, b in expr.items():
                    c[j] += a * b
        return LinearForm(tuple(c[j] for j in keep))

    new_rows = tuple(tuple(reduce_form(f) for f in row) for row in X.rows)
    return LinearFormMatrix(tuple(X.variables[j] for j in keep), new_rows)


def coordinate_forms(X: LinearFormMatrix, names: Iterable[str]) -> list[LinearForm]:
    return [LinearForm.from_mapping(X.variables, {v: 1}) for v in names]


# ---------------------------------------------------------------------------
# Ranks and chains


def pencil_rank(P: Pencil) -> int:
    """Rank of A+vB over Q(v).

    A nonzero r-minor is a polynomial of degree <= r, so it survives at one of
    any r+1 distinct points; evaluating at min(e, n)+1 points is exact.
    """
    bound = min(P.e, P.n)
    return max((rank(P.at(v)) for v in range(bound + 1)), default=0)


def _chain_system(A: QMatrix, B: QMatrix, s: int) -> list[list[Fraction]]:
    e, n = A.rows, A.cols
    width = n * (s + 1)
    rows = []
    for k in range(s + 2):
        for i in range(e):
            r = [Fraction(0)] * width
            if k <= s:
                for j in range(n):
                    r[k * n + j] -= A[i, j]
            if k >= 1:
                for j in range(n):
                    r[(k - 1) * n + j] += B[i, j]
            rows.append(r)
    return rows


def _split_chain(vec: list[Fraction], n: int, s: int) -> list[list[Fraction]]:
    return [vec[k * n:(k + 1) * n] for k in range(s + 1)]


def _independent(vectors: list[list[Fraction]]) -> bool:
    if not vectors:
        return True
    return rank(QMatrix.from_rows(vectors)) == len(vectors)


def scroll_chain(P: Pencil, s: int) -> list[list[Fraction]] | None:
    """Linearly independent w_0..w_s with Aw_0=0, Bw_{k-1}=Aw_k, Bw_s=0, if any exist."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    if P.n == 0:
        return None
    sols = kernel_vectors(_chain_system(P.A, P.B, s), P.n * (s + 1))
    if not sols:
        return None
    rng = random.Random(s * 7919 + len(sols))
    candidates = list(sols)
    for _ in range(8):
        candidates.append([sum((Fraction(rng.randint(-3, 3)) * v[i] for v in sols), Fraction(0))
                           for i in range(len(sols[0]))])
    for cand in candidates:
        ws = _split_chain(cand, P.n, s)
        if any(any(w) for w in ws) and _independent(ws):
            return ws
    return None


# ---------------------------------------------------------------------------
# Normal form


class _NeedsRowMix(Exception):
    def __init__(self, det_poly: QPoly):
        self.det_poly = det_poly


def _complete_basis(vectors: list[list[Fraction]], dim: int) -> list[list[Fraction]]:
    basis = list(vectors)
    for i in range(dim):
        if len(basis) == dim:
            break
        cand = [Fraction(int(j == i)) for j in range(dim)]
        if _independent(basis + [cand]):
            basis.append(cand)
    return basis


def _cols(vectors: list[list[Fraction]], dim: int) -> QMatrix:
    return QMatrix.from_columns(vectors, dim)


def _split_scroll(A: QMatrix, B: QMatrix, s: int, ws: list[list[Fraction]]):
    """Split L_s off the front of (A, B) given a minimal chain.

    Returns (C, C', A2, B2) with C(A+vB)C' = L_s ⊕ (A2+vB2).
    """
    e, n = A.rows, A.cols
    colvecs = list(reversed(ws))  # column j (1-based) is w_{s+1-j}
    rowvecs = [(A @ _cols([ws[s + 1 - j]], n)).column(0) for j in range(1, s + 1)]
    if not _independent(colvecs) or not _independent(rowvecs):
        raise AssertionError("minimal chain is not independent")
    Tcol = _cols(_complete_basis(colvecs, n), n)
    Trow = _cols(_complete_basis(rowvecs, e), e)
    Trow_inv = invert(Trow)
    At = Trow_inv @ A @ Tcol
    Bt = Trow_inv @ B @ Tcol
    e2, n2 = e - s, n - s - 1
    A1, B1 = At.block(0, s, 0, s + 1), Bt.block(0, s, 0, s + 1)
    XA, XB = At.block(0, s, s + 1, n), Bt.block(0, s, s + 1, n)
    A2, B2 = At.block(s, e, s + 1, n), Bt.block(s, e, s + 1, n)
    assert At.block(s, e, 0, s + 1).is_zero() and Bt.block(s, e, 0, s + 1).is_zero()
    Y = QMatrix.zeros(s + 1, n2)
    Z = QMatrix.zeros(s, e2)
    if s and n2 and not (XA.is_zero() and XB.is_zero()):
        # unknowns: Y (s+1)×n2 row-major, then Z s×e2 row-major
        ny = (s + 1) * n2
        width = ny + s * e2
        rows, rhs = [], []
        for M1, M2, X in ((A1, A2, XA), (B1, B2, XB)):
            for i in range(s):
                for j in range(n2):
                    r = [Fraction(0)] * width
                    for k in range(s + 1):
                        if M1[i, k]:
                            r[k * n2 + j] += M1[i, k]
                    for k in range(e2):
                        if M2[k, j]:
                            r[ny + i * e2 + k] += M2[k, j]
                    rows.append(r)
                    rhs.append(-X[i, j])
        sol = solve_particular(rows, rhs, width)
        if sol is None:
            raise AssertionError("coupling block could not be eliminated")
        Y = QMatrix.from_rows([sol[k * n2:(k + 1) * n2] for k in range(s + 1)], n2)
        Z = QMatrix.from_rows([sol[ny + i * e2: ny + (i + 1) * e2] for i in range(s)], e2)
    left = block_diag(QMatrix.identity(s), QMatrix.identity(e2))
    left = QMatrix.from_rows([list(r) for r in left.entries], e)
    Lz = [list(r) for r in QMatrix.identity(e).entries]
    for i in range(s):
        for k in range(e2):
            Lz[i][s + k] = Z[i, k]
    Ry = [list(r) for r in QMatrix.identity(n).entries]
    for k in range(s + 1):
        for j in range(n2):
            Ry[k][s + 1 + j] = Y[k, j]
    C = QMatrix.from_rows(Lz, e) @ Trow_inv
    Cp = Tcol @ QMatrix.from_rows(Ry, n)
    return C, Cp, A2, B2


def _minimal_chain(A: QMatrix, B: QMatrix):
    n = A.cols
    if n == 0:
        return None
    if A.rows and pencil_rank(Pencil(A, B)) == n:
        return None
    for s in range(0, n):
        sols = kernel_vectors(_chain_system(A, B, s), n * (s + 1))
        if sols:
            return s, _split_chain(sols[0], n, s)
    raise AssertionError("rank deficiency without a chain")


def _charpoly(M: QMatrix) -> QPoly:
    size = M.rows
    pts = []
    for x in range(size + 1):
        pts.append((Fraction(x), det(QMatrix.identity(size).scale(x) - M)))
    return interpolate(pts)


def _det_pencil(A: QMatrix, B: QMatrix) -> QPoly:
    size = A.rows
    return interpolate([(Fraction(x), det(A + B.scale(x))) for x in range(size + 1)])


def _matpow_kernel(Nm: QMatrix, k: int) -> list[list[Fraction]]:
    P = QMatrix.identity(Nm.rows)
    for _ in range(k):
        P = P @ Nm
    return kernel_vectors(P.tolist(), Nm.cols)


def _jordan_part(A: QMatrix, B: QMatrix):
    size = A.rows
    if size == 0:
        return [], QMatrix.identity(0), QMatrix.identity(0)
    try:
        Ainv = invert(A)
    except Singular:
        raise _NeedsRowMix(_det_pencil(A, B))
    M = Ainv @ B
    cp = _charpoly(M)
    fac = rational_linear_factors(cp)
    if not fac.complete:
        raise IrrationalEigenvalues(f"characteristic polynomial {cp} does not split over Q")
    cols: list[list[Fraction]] = []
    blocks: list[KWBlock] = []
    for lam, mult in fac.roots:
        Nm = M - QMatrix.identity(size).scale(lam)
        kers = [[]]
        k = 0
        while len(kers[-1]) < mult:
            k += 1
            kers.append(_matpow_kernel(Nm, k))
        q = k
        tops: list[tuple[list[Fraction], int]] = []
        for level in range(q, 0, -1):
            span = list(kers[level - 1])
            for u, length in tops:
                vec = u
                for _ in range(length - level):
                    vec = (Nm @ _cols([vec], size)).column(0)
                span.append(vec)
            for cand in kers[level]:
                if _independent(span + [cand]):
                    span.append(cand)
                    tops.append((cand, level))
        tops.sort(key=lambda t: -t[1])
        for u, length in tops:
            chain = [u]
            for _ in range(length - 1):
                chain.append((Nm @ _cols([chain[-1]], size)).column(0))
            cols.extend(reversed(chain))
            blocks.append(J(length, lam))
    T = _cols(cols, size)
    Cp = T
    C = invert(T) @ Ainv
    return blocks, C, Cp


def _kw(A: QMatrix, B: QMatrix):
    """Blocks (discovery order), C, C' with C(A+vB)C' = ⊕ block pencils; 'free' marks L_0."""
    e, n = A.rows, A.cols
    found = _minimal_chain(A, B)
    if found is not None:
        s, ws = found
        C1, Cp1, A2, B2 = _split_scroll(A, B, s, ws)
        head = [("free", 0)] if s == 0 else [("block", S(s))]
        rows_head, cols_head = s, s + 1
    else:
        found_t = _minimal_chain(A.T, B.T)
        if found_t is None:
            if e != n:
                raise AssertionError("regular part is not square")
            blocks, C, Cp = _jordan_part(A, B)
            return [("block", b) for b in blocks], C, Cp
        s, ws = found_t
        Ct, Cpt, A2t, B2t = _split_scroll(A.T, B.T, s, ws)
        C1, Cp1, A2, B2 = Cpt.T, Ct.T, A2t.T, B2t.T
        head = [("block", N(s + 1))]
        rows_head, cols_head = s + 1, s
    rest, C2, Cp2 = _kw(A2, B2)
    C = block_diag(QMatrix.identity(rows_head), C2) @ C1
    Cp = Cp1 @ block_diag(QMatrix.identity(cols_head), Cp2)
    return head + rest, C, Cp


def _block_shape(item) -> tuple[int, int]:
    tag, b = item
    if tag == "free":
        return 0, 1
    A, _ = block_pencil(b)
    return A.rows, A.cols


def _canonicalize(items, C: QMatrix, Cp: QMatrix):
    shapes = [_block_shape(it) for it in items]
    roffs, coffs = [], []
    r = c = 0
    for h, w in shapes:
        roffs.append(r)
        coffs.append(c)
        r += h
        c += w

    def key(i):
        tag, b = items[i]
        return (1, 0, 0) if tag == "free" else (0,) + tuple(b.sort_key()[:1]) + (b.sort_key(),)

    order = sorted(range(len(items)), key=lambda i: (items[i][0] == "free",
                                                     () if items[i][0] == "free" else items[i][1].sort_key()))
    row_perm, col_perm = [], []
    for i in order:
        h, w = shapes[i]
        row_perm.extend(range(roffs[i], roffs[i] + h))
        col_perm.extend(range(coffs[i], coffs[i] + w))
    Cn = QMatrix.from_rows([C.entries[k] for k in row_perm], C.cols)
    Cpn = QMatrix.from_rows([[row[k] for k in col_perm] for row in Cp.entries], len(col_perm))
    blocks = tuple(items[i][1] for i in order if items[i][0] == "block")
    free = sum(1 for it in items if it[0] == "free")
    return KWForm(blocks, free), Cn, Cpn


def _is_degenerate(P: Pencil) -> bool:
    vecs = [[x for r in P.A.entries for x in r], [x for r in P.B.entries for x in r]]
    return rank(QMatrix.from_rows(vecs)) < 2


def _mix_candidates():
    t = 1
    while True:
        yield Fraction(t)
        yield Fraction(-t)
        t += 1


def kw_normal_form(P: Pencil) -> tuple[KWForm, EquivalenceCertificate]:
    """Kronecker–Weierstrass normal form of a pencil with an exact certificate.

    When the regular part has A singular (an infinite elementary divisor, which
    the (λv+1) Jordan display cannot express), the first row is replaced by
    row1 + t·row2 for the first t in 1, -1, 2, -2, ... that makes it
    invertible; t is recorded in the certificate's row mix.
    """
    if P.e == 0 or _is_degenerate(P):
        raise DegeneratePencil("the rows of X are linearly dependent")
    mix = QMatrix.identity(2)
    try:
        items, C, Cp = _kw(P.A, P.B)
    except _NeedsRowMix as exc:
        t = next(x for x in _mix_candidates() if exc.det_poly(x) != 0)
        mix = QMatrix.from_rows([[1, t], [0, 1]])
        Q = P.mix(mix)
        items, C, Cp = _kw(Q.A, Q.B)
    F, C, Cp = _canonicalize(items, C, Cp)
    return F, EquivalenceCertificate(C, Cp, mix)


def verify_certificate(P: Pencil, F: KWForm, cert: EquivalenceCertificate) -> bool:
    try:
        if cert.C.rows != P.e or cert.C.cols != P.e or cert.Cprime.rows != P.n or cert.Cprime.cols != P.n:
            return False
        if det(cert.C) == 0 or det(cert.Cprime) == 0 or det(cert.row_mix) == 0:
            return False
        target = canonical_pencil(F)
        if (target.e, target.n) != (P.e, P.n):
            return False
        Q = P.mix(cert.row_mix)
        return (cert.C @ Q.A @ cert.Cprime == target.A) and (cert.C @ Q.B @ cert.Cprime == target.B)
    except (ValueError, ArithmeticError):
        return False


def normal_form_of_matrix(X: LinearFormMatrix) -> tuple[KWForm, EquivalenceCertificate]:
    return kw_normal_form(matrix_to_pencil(X))

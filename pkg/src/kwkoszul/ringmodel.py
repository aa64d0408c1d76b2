"""Degreewise exact linear algebra on homogeneous ideals of a polynomial ring over Q.

Polynomials are dicts ``{exponent tuple: Fraction}``.  The degree-d component
of an ideal is kept as an echelon basis over the degree-d monomials, listed
from largest to smallest in a term order, so the pivot of a row is its leading
monomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

from .pencil import KWForm, LinearForm, LinearFormMatrix, NILPOTENT
from .rational_core import SparseEchelon, format_rational, sparse_kernel

Exp = tuple[int, ...]
Poly = dict[Exp, Fraction]


class BoundsExceeded(ValueError):
    pass


class HasNilpotentBlock(ValueError):
    pass


@dataclass(frozen=True)
class PolyRing:
    variables: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be distinct")

    @property
    def n(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def var(self, name: str) -> Poly:
        e = [0] * self.n
        e[self.index(name)] = 1
        return {tuple(e): Fraction(1)}

    def linear(self, coeffs: Sequence) -> Poly:
        out = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * self.n
                e[i] = 1
                out[tuple(e)] = Fraction(c)
        return out

    def dim(self, d: int) -> int:
        return comb(self.n - 1 + d, d) if self.n else int(d == 0)

    def format_monomial(self, e: Exp) -> str:
        parts = []
        for v, k in zip(self.variables, e):
            if k == 1:
                parts.append(v)
            elif k:
                parts.append(f"{v}^{k}")
        return "*".join(parts) or "1"

    def format(self, f: Poly) -> str:
        if not f:
            return "0"
        terms = []
        for e in sorted(f, reverse=True):
            c = f[e]
            mono = self.format_monomial(e)
            if mono == "1":
                terms.append(format_rational(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{format_rational(c)}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


@dataclass(frozen=True)
class TermOrder:
    """Graded reverse lexicographic order; ``ranking[k]`` is the ring index of the k-th most significant variable."""

    ranking: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.ranking) != list(range(len(self.ranking))):
            raise ValueError("a term order needs a permutation of the variables")

    @classmethod
    def natural(cls, n: int) -> "TermOrder":
        return cls(tuple(range(n)))

    @classmethod
    def from_names(cls, ring: PolyRing, names: Sequence[str]) -> "TermOrder":
        return cls(tuple(ring.index(v) for v in names))

    def key(self, e: Exp):
        """Larger key means larger monomial (degree first, then reverse lexicographic)."""
        return (sum(e), tuple(-e[k] for k in reversed(self.ranking)))


@lru_cache(maxsize=None)
def _monomials(n: int, d: int, ranking: tuple[int, ...]) -> tuple[tuple[Exp, ...], dict[Exp, int]]:
    out: list[Exp] = []

    def rec(i, left, acc):
        if i == n - 1:
            out.append(tuple(acc + [left]))
            return
        for k in range(left, -1, -1):
            rec(i + 1, left - k, acc + [k])

    if n == 0:
        out = [()] if d == 0 else []
    else:
        rec(0, d, [])
    order = TermOrder(ranking)
    out.sort(key=order.key, reverse=True)
    mons = tuple(out)
    return mons, {m: i for i, m in enumerate(mons)}


def monomials(ring: PolyRing, d: int, order: TermOrder | None = None) -> tuple[Exp, ...]:
    order = order or TermOrder.natural(ring.n)
    return _monomials(ring.n, d, order.ranking)[0]


def _freeze(f: Mapping[Exp, Fraction]) -> tuple:
    return tuple(sorted((e, Fraction(c)) for e, c in f.items() if c))


def poly_degree(f: Poly) -> int:
    degs = {sum(e) for e in f}
    if len(degs) != 1:
        raise ValueError("polynomial is zero or not homogeneous")
    return degs.pop()


def poly_mul(f: Mapping[Exp, Fraction], g: Mapping[Exp, Fraction]) -> Poly:
    out: Poly = {}
    for a, c in f.items():
        for b, d in g.items():
            e = tuple(x + y for x, y in zip(a, b))
            v = out.get(e, 0) + c * d
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def poly_add(f: Mapping[Exp, Fraction], g: Mapping[Exp, Fraction], scale=1) -> Poly:
    out = dict(f)
    for e, c in g.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _mono_times(f: Mapping[Exp, Fraction], m: Exp) -> Poly:
    return {tuple(x + y for x, y in zip(e, m)): c for e, c in f.items()}


@dataclass(frozen=True)
class GeneratorSet:
    ring: PolyRing
    polys: tuple[tuple, ...]  # frozen polynomials

    @classmethod
    def of(cls, ring: PolyRing, polys: Iterable[Mapping[Exp, Fraction]]) -> "GeneratorSet":
        frozen = []
        for f in polys:
            fr = _freeze(f)
            if fr:
                poly_degree(dict(fr))
                frozen.append(fr)
        return cls(ring, tuple(frozen))

    @classmethod
    def variables(cls, ring: PolyRing, names: Iterable[str]) -> "GeneratorSet":
        return cls.of(ring, [ring.var(v) for v in names])

    def __iter__(self):
        return (dict(f) for f in self.polys)

    def __len__(self):
        return len(self.polys)

    @property
    def degrees(self) -> list[int]:
        return [sum(f[0][0]) for f in self.polys]

    def __add__(self, other: "GeneratorSet") -> "GeneratorSet":
        if other.ring != self.ring:
            raise ValueError("generator sets live in different rings")
        return GeneratorSet(self.ring, self.polys + other.polys)

    def variable_support(self) -> frozenset[str] | None:
        """The variable names if every generator is a scalar multiple of a variable, else None."""
        names = set()
        for f in self.polys:
            if len(f) != 1 or sum(f[0][0]) != 1:
                return None
            names.add(self.ring.variables[f[0][0].index(1)])
        return frozenset(names)


@dataclass
class GradedPiece:
    degree: int
    basis: list[Poly]
    echelon: SparseEchelon = field(repr=False)
    monomials: tuple[Exp, ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    checked_to_degree: int
    first_failure: int | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked_to_degree": self.checked_to_degree, "first_failure": self.first_failure}


# ---------------------------------------------------------------------------
# Ideals of 2-minors


def form_poly(ring: PolyRing, f: LinearForm) -> Poly:
    return ring.linear(f.coeffs)


def two_minors(X: LinearFormMatrix) -> GeneratorSet:
    ring = PolyRing(X.variables)
    rows = [[form_poly(ring, f) for f in r] for r in X.rows]
    minors = []
    for j, k in combinations(range(X.e), 2):
        m = poly_add(poly_mul(rows[0][j], rows[1][k]), poly_mul(rows[0][k], rows[1][j]), -1)
        if m:
            minors.append(m)
    return GeneratorSet.of(ring, minors)


# ---------------------------------------------------------------------------
# Graded pieces


def _vector(f: Mapping[Exp, Fraction], index: Mapping[Exp, int]) -> dict[int, Fraction]:
    return {index[e]: c for e, c in f.items()}


@lru_cache(maxsize=4096)
def _piece(G: GeneratorSet, d: int, ranking: tuple[int, ...]) -> tuple[SparseEchelon, tuple[Exp, ...], dict]:
    n = G.ring.n
    mons, index = _monomials(n, d, ranking)
    ech = SparseEchelon()
    for fr in G.polys:
        g = dict(fr)
        dg = sum(fr[0][0])
        if dg > d:
            continue
        for m in _monomials(n, d - dg, ranking)[0]:
            ech.add(_vector(_mono_times(g, m), index))
    ech.make_reduced()
    return ech, mons, index


def ideal_piece(R: PolyRing, G: GeneratorSet, d: int, order: TermOrder | None = None) -> GradedPiece:
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if G.ring != R:
        raise ValueError("generator set belongs to another ring")
    order = order or TermOrder.natural(R.n)
    ech, mons, _ = _piece(G, d, order.ranking)
    basis = [{mons[i]: c for i, c in row.items()} for row in ech.basis()]
    return GradedPiece(d, basis, ech, mons)


def hilbert_function(R: PolyRing, G: GeneratorSet, d: int) -> int:
    return R.dim(d) - ideal_piece(R, G, d).dim


def membership(f: Mapping[Exp, Fraction], G: GeneratorSet) -> bool:
    if not f:
        return True
    d = poly_degree(dict(f))
    ech, _, index = _piece(G, d, TermOrder.natural(G.ring.n).ranking)
    return ech.contains(_vector(f, index))


def normal_form(f: Mapping[Exp, Fraction], G: GeneratorSet) -> Poly:
    """Canonical remainder of a homogeneous f modulo G (supported on standard monomials)."""
    if not f:
        return {}
    d = poly_degree(dict(f))
    ech, mons, index = _piece(G, d, TermOrder.natural(G.ring.n).ranking)
    return {mons[i]: c for i, c in ech.reduce(_vector(f, index)).items()}


# ---------------------------------------------------------------------------
# Colon ideals


def colon_piece(J: GeneratorSet, f: Mapping[Exp, Fraction], d: int) -> GradedPiece:
    """Degree-d part of J : f."""
    R = J.ring
    df = poly_degree(dict(f))
    ranking = TermOrder.natural(R.n).ranking
    ech, _, index = _piece(J, d + df, ranking)
    mons = _monomials(R.n, d, ranking)[0]
    images = [ech.reduce(_vector(_mono_times(f, m), index)) for m in mons]
    out = SparseEchelon()
    for vec in sparse_kernel(images):
        out.add(vec)
    out.make_reduced()
    basis = [{mons[i]: c for i, c in row.items()} for row in out.basis()]
    return GradedPiece(d, basis, out, mons)


def _restrict(G: GeneratorSet, keep: Sequence[str]) -> GeneratorSet:
    """Set every variable outside ``keep`` to zero and move to the smaller ring."""
    ring = G.ring
    pos = [ring.index(v) for v in keep]
    dropped = [i for i in range(ring.n) if i not in set(pos)]
    sub = PolyRing(tuple(keep))
    polys = []
    for fr in G.polys:
        out: Poly = {}
        for e, c in fr:
            if any(e[i] for i in dropped):
                continue
            out[tuple(e[i] for i in pos)] = c
        if out:
            polys.append(out)
    return GeneratorSet.of(sub, polys)


def _restrict_poly(ring: PolyRing, f: Mapping[Exp, Fraction], keep: Sequence[str]) -> Poly:
    pos = [ring.index(v) for v in keep]
    kept = set(pos)
    return {tuple(e[i] for i in pos): c for e, c in f.items()
            if not any(e[i] for i in range(ring.n) if i not in kept)}


def _dim_piece(G: GeneratorSet, d: int) -> int:
    return _piece(G, d, TermOrder.natural(G.ring.n).ranking)[0].dim


def colon_equals_linear(J: GeneratorSet, f: Mapping[Exp, Fraction], L: Iterable[str],
                        base: GeneratorSet, D: int) -> Verdict:
    """Check (J + base) : f == (L) + base in every degree 1..D."""
    ring = base.ring
    L = frozenset(L)
    if not L <= set(ring.variables):
        raise ValueError("L mentions unknown variables")
    V = J.variable_support()
    if V is None:
        return _colon_equals_linear_general(J, f, L, base, D)
    if not V <= L:
        return Verdict(False, D, 1, "colon does not contain J")
    keep = [v for v in ring.variables if v not in V]
    base1 = _restrict(base, keep)
    f1 = _restrict_poly(ring, f, keep)
    ring1 = base1.ring
    L1 = [v for v in keep if v in L]
    if not f1:
        # f ∈ J, so the colon is everything
        ok = len(L1) == len(keep)
        return Verdict(ok, D, None if ok else 1)
    # degree-1 containment L ⊆ colon; it propagates to all degrees
    for v in L1:
        if not membership(poly_mul(ring1.var(v), f1), base1):
            return Verdict(False, D, 1, f"{v} is not in the colon")
    rest = [v for v in keep if v not in L]
    base2 = _restrict(base1, rest)
    df = poly_degree(f1)
    ranking = TermOrder.natural(ring1.n).ranking
    for d in range(1, D + 1):
        ech, _, index = _piece(base1, d + df, ranking)
        grown = SparseEchelon()
        grown.rows = dict(ech.rows)
        gain = 0
        for m in _monomials(ring1.n, d, ranking)[0]:
            if grown.add(_vector(_mono_times(f1, m), index)):
                gain += 1
        target = base2.ring.dim(d) - _dim_piece(base2, d)
        if gain != target:
            return Verdict(False, D, d, f"degree {d}: quotient by colon has dim {gain}, expected {target}")
    return Verdict(True, D)


def _colon_equals_linear_general(J, f, L, base, D) -> Verdict:
    ring = base.ring
    JB = J + base
    LB = GeneratorSet.variables(ring, sorted(L, key=ring.index)) + base
    for d in range(1, D + 1):
        lhs = colon_piece(JB, f, d)
        rhs = ideal_piece(ring, LB, d)
        if lhs.dim != rhs.dim or not all(lhs.echelon.contains(v) for v in rhs.echelon.basis()):
            return Verdict(False, D, d)
    return Verdict(True, D)


# ---------------------------------------------------------------------------
# Term orders and initial ideals


def scroll_term_order(F: KWForm) -> TermOrder:
    """Order on the canonical variables of a nilpotent-free form.

    Variables are ranked as listed: inside a block the first-row entries
    decrease, and the last variable of each block beats the first variable of
    the next block.
    """
    if any(b.kind == NILPOTENT for b in F.blocks):
        raise HasNilpotentBlock("the term order is defined only without nilpotent blocks")
    return TermOrder.natural(F.num_variables)


def leading_monomial(f: Mapping[Exp, Fraction], order: TermOrder) -> Exp:
    return max(f, key=order.key)


def groebner_check_degreewise(X: LinearFormMatrix, order: TermOrder, D: int) -> Verdict:
    """Do the 2-minors' leading terms generate in(I_2(X)) through degree D?"""
    G = two_minors(X)
    R = G.ring
    lts = {leading_monomial(dict(g), order) for g in G.polys}
    for d in range(2, D + 1):
        ech, mons, _ = _piece(G, d, order.ranking)
        initial = {mons[p] for p in ech.pivots()}
        generated = {m for m in mons if any(all(a >= b for a, b in zip(m, t)) for t in lts)}
        if initial != generated:
            return Verdict(False, D, d, f"degree {d}: {len(initial)} initial monomials vs {len(generated)}")
    return Verdict(True, D)


# ---------------------------------------------------------------------------
# Betti numbers


def _quotient_basis(G: GeneratorSet, k: int):
    """Standard monomials of (S/G)_k with an index, plus the degree-k echelon."""
    ranking = TermOrder.natural(G.ring.n).ranking
    ech, mons, index = _piece(G, k, ranking)
    piv = ech.pivots()
    std = [i for i in range(len(mons)) if i not in piv]
    return ech, mons, index, {i: pos for pos, i in enumerate(std)}


def _check_bounds(n: int, j: int, nmax: int, jmax: int):
    if n > nmax or j > jmax:
        raise BoundsExceeded(f"n={n}, degree {j} beyond limits n<={nmax}, j<={jmax}")


def koszul_betti_table(R: PolyRing, G: GeneratorSet, jmax: int, *, nmax: int = 8, degmax: int = 8) -> dict[tuple[int, int], int]:
    """All nonzero β^S_{i,j}(S/G) with j <= jmax, via Koszul homology."""
    n = R.n
    _check_bounds(n, jmax, nmax, degmax)
    table = {}
    # rank of ∂_i : Λ^i ⊗ Q_{j-i} → Λ^{i-1} ⊗ Q_{j-i+1}
    ranks: dict[tuple[int, int], int] = {}
    sizes: dict[tuple[int, int], int] = {}
    subsets = {i: list(combinations(range(n), i)) for i in range(n + 1)}
    for j in range(jmax + 1):
        for i in range(0, min(n, j) + 1):
            k = j - i
            _, mons, _, std = _quotient_basis(G, k)
            sizes[(i, j)] = comb(n, i) * len(std)
            if i == 0 or not std:
                ranks[(i, j)] = 0
                continue
            ech1, mons1, index1, std1 = _quotient_basis(G, k + 1)
            pos_lower = {s: t for t, s in enumerate(subsets[i - 1])}
            width = len(std1)
            ech = SparseEchelon()
            for sub in subsets[i]:
                for mi in std:
                    m = mons[mi]
                    vec: dict[int, Fraction] = {}
                    for t, a in enumerate(sub):
                        sign = -1 if t % 2 else 1
                        e = list(m)
                        e[a] += 1
                        red = ech1.reduce({index1[tuple(e)]: Fraction(sign)})
                        face = pos_lower[sub[:t] + sub[t + 1:]]
                        for col, c in red.items():
                            key = face * width + std1[col]
                            v = vec.get(key, 0) + c
                            if v:
                                vec[key] = v
                            else:
                                vec.pop(key, None)
                    ech.add(vec)
            ranks[(i, j)] = ech.dim
    for j in range(jmax + 1):
        for i in range(0, min(n, j) + 1):
            kernel = sizes[(i, j)] - ranks[(i, j)]
            image = ranks.get((i + 1, j), 0)
            b = kernel - image
            if b:
                table[(i, j)] = b
    return table


def koszul_homology_betti(R: PolyRing, G: GeneratorSet, i: int, j: int, *, nmax: int = 8, jmax: int = 8) -> int:
    if i < 0 or i > R.n:
        return 0
    _check_bounds(R.n, j, nmax, jmax)
    return koszul_betti_table(R, G, j, nmax=nmax, degmax=jmax).get((i, j), 0)


def regularity_from_betti(table: Mapping[tuple[int, int], int]) -> int:
    return max(j - i for (i, j) in table)


def quotient_res_betti(R: PolyRing, G: GeneratorSet, imax: int = 3, jmax: int = 6, *,
                       nmax: int = 6, degmax: int = 6) -> dict[tuple[int, int], int]:
    """β^{S/G}_{i,j}(k) for i <= imax, j <= jmax from a degreewise minimal resolution of k."""
    if imax > 3 or imax < 0:
        raise BoundsExceeded("homological degree limited to 3")
    _check_bounds(R.n, jmax, nmax, degmax)
    n = R.n
    basis_cache = {}

    def qbasis(k):
        if k not in basis_cache:
            basis_cache[k] = _quotient_basis(G, k)
        return basis_cache[k]

    table: dict[tuple[int, int], int] = {(0, 0): 1}
    if imax == 0:
        return table
    # F_1 generators: a basis of R_1 (the variables surviving modulo G), mapping onto m ⊂ F_0 = R
    # An element of F_i in degree j: {(g, std index in Q_{j - deg g}): coeff}
    gens_prev_deg = [0]  # degrees of generators of F_{i-1}
    _, _, _, std1 = qbasis(1)
    gens_deg = [1] * len(std1)
    images = [{(0, pos): Fraction(1)} for pos in range(len(std1))]  # images in F_{i-1}: {(g_prev, std_idx): c}
    if std1:
        table[(1, 1)] = len(std1)

    def mult(elem, m: Exp, k_of):
        """Multiply an element of a free module by the monomial m and normalize modulo G."""
        out: dict[tuple[int, int], Fraction] = {}
        for (g, pos), c in elem.items():
            k = k_of(g)
            _, mons, _, std = qbasis(k)
            stdlist = std_lists(k)
            mono = mons[stdlist[pos]]
            e = tuple(a + b for a, b in zip(mono, m))
            ech1, _, index1, std1 = qbasis(k + sum(m))
            red = ech1.reduce({index1[e]: Fraction(1)})
            for col, a in red.items():
                key = (g, std1[col])
                val = out.get(key, 0) + c * a
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
        return out

    std_cache = {}

    def std_lists(k):
        if k not in std_cache:
            _, _, _, std = qbasis(k)
            std_cache[k] = sorted(std, key=std.get)
        return std_cache[k]

    for i in range(1, imax):
        # compute generators of F_{i+1}: kernel of F_i -> F_{i-1}, degree by degree
        new_gens_deg: list[int] = []
        new_images: list[dict] = []
        for j in range(1, jmax + 1):
            # basis of (F_i)_j: pairs (g, std_pos) with deg g <= j
            dom = [(g, p) for g, dg in enumerate(gens_deg) if dg <= j for p in range(len(std_lists(j - dg)))]
            if not dom:
                continue
            dom_index = {x: t for t, x in enumerate(dom)}
            cols = []
            for g, p in dom:
                dg = gens_deg[g]
                m = qbasis(j - dg)[1][std_lists(j - dg)[p]]
                img = mult(images[g], m, lambda h: dg - gens_prev_deg[h])
                cols.append(img)
            kernel = sparse_kernel(cols)
            span = SparseEchelon()
            for h, dh in enumerate(new_gens_deg):
                if dh >= j:
                    continue
                for mpos in range(len(std_lists(j - dh))):
                    m = qbasis(j - dh)[1][std_lists(j - dh)[mpos]]
                    prod = mult(new_images[h], m, lambda g, dh=dh: dh - gens_deg[g])
                    span.add({dom_index[k]: c for k, c in prod.items()})
            count = 0
            for vec in kernel:
                if span.add(vec):
                    count += 1
                    new_gens_deg.append(j)
                    new_images.append({dom[t]: c for t, c in vec.items()})
            if count:
                table[(i + 1, j)] = count
        gens_prev_deg, gens_deg, images = gens_deg, new_gens_deg, new_images
    return table


"""Koszul filtrations of determinantal rings of normal-form matrices.

Every member of the filtration is generated by canonical variables, so an
ideal is identified with its variable set.  Members are named by the
families below:

* ``H(i, r)``     -- the nilpotent part: all variables of nilpotent blocks
                     before block i, plus the first r entries of
                     x_{i,s_i}, x_{i,s_i-1}, ..., x_{i,1}, x_{i,s_i+1}, ..., x_{i,m_i-1};
                     ``H(0, 0)`` is the zero ideal.
* ``I(s, a, b)``  -- every nilpotent variable, plus the first a_j and the last
                     b_j entries of each scroll block j <= s.
* ``Jd(a, b, i, j, r)``   -- I(d, a, b) plus a prefix of eigenvalue group i.
* ``K(a, b, l, i, j, r)`` -- I(d, a, b) plus the groups u <= l, u != i, and a
                     prefix of group i.

Each nonzero member comes with a witness: a smaller member J, a variable x
with I = J + (x), and the member claimed to equal J : x.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Union

from .invariants import length_condition
from .pencil import JORDAN, NILPOTENT, SCROLL, KWForm, blocks_to_matrix
from .ringmodel import GeneratorSet, PolyRing, Verdict, colon_equals_linear, membership, poly_mul, two_minors


class FiltrationError(ValueError):
    pass


class LengthConditionViolated(FiltrationError):
    pass


class InvalidIndex(FiltrationError):
    pass


class UnsupportedForm(FiltrationError):
    pass


@dataclass(frozen=True)
class H:
    i: int
    r: int

    def __str__(self):
        return "0" if self.i == 0 else f"H({self.i},{self.r})"


@dataclass(frozen=True)
class I:
    s: int
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __str__(self):
        return f"I({self.s};{_vec(self.a)},{_vec(self.b)})"


@dataclass(frozen=True)
class Jd:
    a: tuple[int, ...]
    b: tuple[int, ...]
    i: int
    j: int
    r: int

    def __str__(self):
        return f"J({self.i},{self.j},{self.r};{_vec(self.a)},{_vec(self.b)})"


@dataclass(frozen=True)
class K:
    a: tuple[int, ...]
    b: tuple[int, ...]
    l: int
    i: int
    j: int
    r: int

    def __str__(self):
        return f"K({self.l},{self.i},{self.j},{self.r};{_vec(self.a)},{_vec(self.b)})"


@dataclass(frozen=True)
class Maximal:
    def __str__(self):
        return "m"


ZERO = H(0, 0)
MAXIMAL = Maximal()
FiltrationId = Union[H, I, Jd, K]


def _vec(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


# ---------------------------------------------------------------------------
# Layout of the canonical variables


class _Layout:
    def __init__(self, F: KWForm):
        if F.free:
            raise UnsupportedForm("forms with variables absent from the matrix are not covered")
        self.F = F
        self.x: list[list[str]] = []   # nilpotent blocks with m >= 2; x[i-1][r-1] = x_{i,r}
        self.y: list[list[str]] = []   # y[j-1][s-1] = y_{j,s}
        groups: dict = {}
        for b, names in zip(F.blocks, F.block_variables()):
            if b.kind == NILPOTENT and b.length >= 2:
                self.x.append(list(names))
            elif b.kind == SCROLL:
                self.y.append(list(names))
            elif b.kind == JORDAN:
                groups.setdefault(b.eigenvalue, []).append(list(names))
        self.z: list[list[list[str]]] = [groups[lam] for lam in sorted(groups)]  # z[i-1][j-1][r-1]
        self.m = [len(v) + 1 for v in self.x]
        self.n = [len(v) - 1 for v in self.y]
        self.c, self.d, self.t = len(self.x), len(self.y), len(self.z)
        self.g = [len(gr) for gr in self.z]
        self.p = [[len(blk) for blk in gr] for gr in self.z]
        n1 = self.n[0] if self.n else None
        self.svals = [max(m - n1, 1) if n1 is not None else 1 for m in self.m]
        self.xorder = []
        for xs, s in zip(self.x, self.svals):
            self.xorder.append([xs[k - 1] for k in range(s, 0, -1)] + xs[s:])
        self.all_x = frozenset(v for xs in self.x for v in xs)
        self.all_y = frozenset(v for ys in self.y for v in ys)
        self.all_z = frozenset(v for gr in self.z for blk in gr for v in blk)
        self.all_vars = frozenset(F.variables())

    # variable sets -------------------------------------------------------
    def h_set(self, i: int, r: int) -> frozenset[str]:
        if i == 0:
            return frozenset()
        if not (1 <= i <= self.c and 1 <= r <= self.m[i - 1] - 1):
            raise InvalidIndex(f"H({i},{r})")
        prev = {v for xs in self.x[: i - 1] for v in xs}
        return frozenset(prev | set(self.xorder[i - 1][:r]))

    def h_last(self) -> frozenset[str]:
        return self.all_x

    def check_ab(self, a, b, s):
        if len(a) != s or len(b) != s:
            raise InvalidIndex("vector lengths")
        seen_zero = False
        for j in range(s):
            if b[j] < 0 or not (1 <= a[j] <= self.n[j] + 1 - b[j]):
                raise InvalidIndex(f"a={a}, b={b}")
            if b[j] == 0:
                seen_zero = True
            elif seen_zero:
                raise InvalidIndex(f"b={b} has a gap")

    def i_set(self, s: int, a, b) -> frozenset[str]:
        if not 0 <= s <= self.d:
            raise InvalidIndex(f"s={s}")
        self.check_ab(a, b, s)
        out = set(self.all_x)
        for j in range(s):
            ys = self.y[j]
            out.update(ys[: a[j]])
            if b[j]:
                out.update(ys[len(ys) - b[j]:])
        return frozenset(out)

    def z_prefix(self, i: int, j: int, r: int) -> set[str]:
        if not (1 <= i <= self.t and 0 <= j <= self.g[i - 1]):
            raise InvalidIndex(f"z-prefix ({i},{j},{r})")
        if j == 0:
            return set()
        if not 1 <= r <= self.p[i - 1][j - 1]:
            raise InvalidIndex(f"z-prefix ({i},{j},{r})")
        gr = self.z[i - 1]
        out = {v for blk in gr[: j - 1] for v in blk}
        out.update(gr[j - 1][:r])
        return out

    def group(self, u: int) -> set[str]:
        return {v for blk in self.z[u - 1] for v in blk}

    def k_extra(self, l: int, i: int) -> set[str]:
        out = set()
        for u in range(1, l + 1):
            if u != i:
                out |= self.group(u)
        return out

    def variables(self, fid) -> frozenset[str]:
        if isinstance(fid, Maximal):
            return self.all_vars
        if isinstance(fid, H):
            return self.h_set(fid.i, fid.r)
        if isinstance(fid, I):
            if fid.s < 1:
                raise InvalidIndex("I needs s >= 1")
            return self.i_set(fid.s, fid.a, fid.b)
        if isinstance(fid, Jd):
            if fid.j < 1:
                raise InvalidIndex("J needs j >= 1")
            return frozenset(self.i_set(self.d, fid.a, fid.b) | self.z_prefix(fid.i, fid.j, fid.r))
        if isinstance(fid, K):
            if not 1 <= fid.i <= fid.l <= self.t:
                raise InvalidIndex(f"K needs 1 <= i <= l <= t: {fid}")
            return frozenset(self.i_set(self.d, fid.a, fid.b) | self.k_extra(fid.l, fid.i)
                             | self.z_prefix(fid.i, fid.j, fid.r))
        raise InvalidIndex(f"unknown id {fid!r}")

    # index ranges ----------------------------------------------------------
    def ab_vectors(self, s: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        ranges_b = [range(0, self.n[j] + 1) for j in range(s)]
        for b in product(*ranges_b):
            if any(b[j] == 0 and any(b[j + 1:]) for j in range(s)):
                continue
            for a in product(*[range(1, self.n[j] + 2 - b[j]) for j in range(s)]):
                yield a, b

    def full_a(self, s=None) -> tuple[int, ...]:
        s = self.d if s is None else s
        return tuple(self.n[j] + 1 for j in range(s))

    def zeros(self, s=None) -> tuple[int, ...]:
        return (0,) * (self.d if s is None else s)


def ideal_variables(fid, F: KWForm) -> frozenset[str]:
    return _Layout(F).variables(fid)


# ---------------------------------------------------------------------------
# Enumeration


@dataclass
class Filtration:
    form: KWForm
    members: dict  # variable set -> canonical FiltrationId, in enumeration order
    maximal: object
    layout: _Layout = field(repr=False)

    @property
    def ids(self) -> list:
        return list(self.members.values())

    def __len__(self):
        return len(self.members)

    def id_of(self, vars_: frozenset[str]):
        if vars_ == self.layout.all_vars:
            return MAXIMAL
        return self.members.get(frozenset(vars_))

    def variables(self, fid) -> frozenset[str]:
        return self.layout.variables(fid)


def _enumerate_ids(L: _Layout) -> Iterator:
    yield ZERO
    for i in range(1, L.c + 1):
        for r in range(1, L.m[i - 1]):
            yield H(i, r)
    for s in range(1, L.d + 1):
        for a, b in L.ab_vectors(s):
            yield I(s, a, b)
    for a, b in (L.ab_vectors(L.d) if L.d else [((), ())]):
        for i in range(1, L.t + 1):
            for j in range(1, L.g[i - 1] + 1):
                for r in range(1, L.p[i - 1][j - 1] + 1):
                    yield Jd(a, b, i, j, r)
        for l in range(1, L.t + 1):
            for i in range(1, l + 1):
                for j in range(1, L.g[i - 1] + 1):
                    for r in range(1, L.p[i - 1][j - 1] + 1):
                        yield K(a, b, l, i, j, r)


def enumerate_filtration(F: KWForm) -> Filtration:
    if not length_condition(F):
        raise LengthConditionViolated(f"{F} violates the length condition m <= 2n")
    L = _Layout(F)
    if L.t > 2:
        raise UnsupportedForm("the Jordan part of the construction closes up only for at most two eigenvalues")
    members: dict = {}
    for fid in _enumerate_ids(L):
        members.setdefault(L.variables(fid), fid)
    if L.all_vars not in members:
        raise FiltrationError("the construction does not reach the maximal ideal")
    return Filtration(F, members, members[L.all_vars], L)


# ---------------------------------------------------------------------------
# Witnesses


@dataclass(frozen=True)
class WitnessStep:
    target: object
    smaller: object | None
    x: str
    colon: object | None
    smaller_vars: frozenset[str]
    colon_vars: frozenset[str]

    def to_json(self) -> dict:
        return {"ideal": str(self.target), "smaller": str(self.smaller), "x": self.x, "colon": str(self.colon)}


def _witness_sets(fid, L: _Layout) -> tuple[frozenset[str], str, frozenset[str]]:
    allx, ally, allz = L.all_x, L.all_y, L.all_z
    M = L.all_vars

    def i_full(k=None):
        return L.i_set(L.d, L.full_a(), L.zeros()) if L.d else allx

    if isinstance(fid, H):
        i, r = fid.i, fid.r
        if i == 0:
            raise InvalidIndex("the zero ideal has no witness")
        target = L.h_set(i, r)
        if r == 1:
            smaller = L.h_set(i - 1, L.m[i - 2] - 1) if i >= 2 else frozenset()
            s_i = L.svals[i - 1]
            if L.d:
                a = tuple(L.n[j] + 1 - s_i for j in range(L.d))
                b = tuple(min(L.n[j] + 1 + s_i - L.m[i - 1], s_i) for j in range(L.d))
                colon = L.i_set(L.d, a, b) | allz
            else:
                colon = allx | allz
        else:
            smaller = L.h_set(i, r - 1)
            colon = M
        x = L.xorder[i - 1][r - 1]
    elif isinstance(fid, I):
        s, a, b = fid.s, list(fid.a), list(fid.b)
        target = L.i_set(s, tuple(a), tuple(b))
        big_b = [k for k in range(s) if b[k] >= 2]
        big_a = [k for k in range(s) if a[k] >= 2]
        ones_b = [k for k in range(s) if b[k] == 1]
        if big_b:
            k = big_b[-1]
            x = L.y[k][L.n[k] - b[k] + 1]          # y_{k, n_k - b_k + 2}
            b2 = b.copy()
            b2[k] -= 1
            smaller = L.i_set(s, tuple(a), tuple(b2))
            colon = M
        elif big_a:
            k = big_a[-1]
            x = L.y[k][a[k] - 1]                   # y_{k, a_k}
            a2 = a.copy()
            a2[k] -= 1
            smaller = L.i_set(s, tuple(a2), tuple(b))
            if b[k] == 1:
                colon = M
            else:
                ap = []
                for j in range(L.d):
                    if j == k:
                        ap.append(L.n[k])
                    elif j < s and b[j] == 1:
                        # y_{j, n_j+1} already lies in J, hence in the colon
                        ap.append(L.n[j] + 1)
                    else:
                        aj = a[j] if j < s else 0
                        ap.append(L.n[j] if L.n[j] - aj >= L.n[k] - a[k] + 1 else L.n[j] + 1)
                colon = L.i_set(L.d, tuple(ap), L.zeros()) | allz
        elif ones_b:
            k = ones_b[-1]
            x = L.y[k][L.n[k]]                     # y_{k, n_k + 1}
            b2 = b.copy()
            b2[k] = 0
            smaller = L.i_set(s, tuple(a), tuple(b2))
            ap = [L.n[j] + 1 for j in range(k)] + [1] + [L.n[j] - L.n[k] + 1 for j in range(k + 1, L.d)]
            colon = L.i_set(L.d, tuple(ap), L.zeros()) | allz
        else:
            x = L.y[s - 1][0]                      # y_{s, 1}
            smaller = L.i_set(s - 1, (1,) * (s - 1), (0,) * (s - 1))
            colon = L.i_set(s - 1, L.full_a(s - 1), L.zeros(s - 1))
    elif isinstance(fid, (Jd, K)):
        target = L.variables(fid)
        a, b, i, j, r = fid.a, fid.b, fid.i, fid.j, fid.r
        base = L.i_set(L.d, a, b)
        if isinstance(fid, K):
            base = base | L.k_extra(fid.l, i)
        x = L.z[i - 1][j - 1][r - 1]
        if r >= 2:
            smaller = base | L.z_prefix(i, j, r - 1)
            colon = M
        else:
            prev = L.z_prefix(i, j - 1, L.p[i - 1][j - 2] if j >= 2 else 0)
            smaller = base | prev
            colon = i_full() | L.k_extra(L.t, i) | prev
    else:
        raise InvalidIndex(f"no witness for {fid!r}")
    smaller = frozenset(smaller)
    if smaller | {x} != target or x in smaller:
        raise FiltrationError(f"witness for {fid} does not add exactly one variable")
    return smaller, x, frozenset(colon)


def witness(fid, F: KWForm | Filtration) -> WitnessStep:
    filt = F if isinstance(F, Filtration) else enumerate_filtration(F)
    smaller, x, colon = _witness_sets(fid, filt.layout)
    return WitnessStep(fid, filt.id_of(smaller), x, filt.id_of(colon), smaller, colon)


# ---------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class StepResult:
    step: WitnessStep
    ok: bool
    verdict: Verdict | None
    detail: str = ""

    def to_json(self) -> dict:
        d = self.step.to_json()
        d["ok"] = self.ok
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass(frozen=True)
class FiltrationReport:
    form: KWForm
    steps: tuple[StepResult, ...]
    checked_to_degree: int

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.steps)

    def find(self, target) -> StepResult | None:
        for s in self.steps:
            if s.step.target == target:
                return s
        return None

    def to_json(self) -> dict:
        return {"steps": [s.to_json() for s in self.steps],
                "verdict": {"ok": self.ok, "checked_to_degree": self.checked_to_degree},
                "members": len(self.steps) + 1}


def _ring_data(F: KWForm):
    X = blocks_to_matrix(F)
    base = two_minors(X)
    return base.ring, base


def check_colon(F: KWForm, smaller: frozenset[str], x: str, colon: frozenset[str], D: int,
                ring_data=None) -> Verdict:
    ring, base = ring_data or _ring_data(F)
    J = GeneratorSet.variables(ring, sorted(smaller, key=ring.index))
    return colon_equals_linear(J, ring.var(x), colon, base, D)


def verify_koszul_filtration(F: KWForm, D: int = 4) -> FiltrationReport:
    filt = enumerate_filtration(F)
    data = _ring_data(F)
    results = []
    for vars_, fid in filt.members.items():
        if fid == ZERO:
            continue
        step = witness(fid, filt)
        problems = []
        if step.smaller_vars | {step.x} != vars_:
            problems.append("J + (x) differs from the ideal")
        if step.smaller is None:
            problems.append("smaller ideal is not a member")
        if step.colon is None:
            problems.append("claimed colon is not a member")
        verdict = check_colon(F, step.smaller_vars, step.x, step.colon_vars, D, data)
        if not verdict.ok:
            problems.append(verdict.detail or f"colon differs in degree {verdict.first_failure}")
        results.append(StepResult(step, not problems, verdict, "; ".join(problems)))
    return FiltrationReport(F, tuple(results), D)


# ---------------------------------------------------------------------------
# Product identities


@dataclass(frozen=True)
class IdentityCheck:
    item: str
    statement: str
    ok: bool


@dataclass(frozen=True)
class IdentityReport:
    checks: tuple[IdentityCheck, ...]
    not_forced: tuple[IdentityCheck, ...]
    checked_to_degree: int

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks) and all(c.ok for c in self.not_forced)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked_to_degree": self.checked_to_degree,
            "counts": {"asserted": len(self.checks), "not_forced": len(self.not_forced)},
            "failures": [c.statement for c in self.checks + self.not_forced if not c.ok],
        }


def _product_in(ring: PolyRing, base: GeneratorSet, u: str, v: str, extra: tuple[str, ...] = ()) -> bool:
    G = base + GeneratorSet.variables(ring, extra) if extra else base
    return membership(poly_mul(ring.var(u), ring.var(v)), G)


def verify_structural_identities(F: KWForm, D: int = 2) -> IdentityReport:
    """Check the vanishing products and colon containments among canonical variables.

    All statements are quadratic, so they live in degree 2; ``D`` only labels
    the report.  Products x_{i,r} y_{j,s} outside the asserted index ranges
    are reported under ``not_forced`` and expected to be nonzero.
    """
    L = _Layout(F)
    ring, base = _ring_data(F)
    checks: list[IdentityCheck] = []
    guards: list[IdentityCheck] = []

    def add(item, u, v, extra=()):
        ok = _product_in(ring, base, u, v, extra)
        mod = f" mod ({', '.join(extra)})" if extra else ""
        checks.append(IdentityCheck(item, f"{u}*{v} = 0{mod}", ok))

    xs = sorted(L.all_x, key=ring.index)
    for u in xs:
        for zv in sorted(L.all_z, key=ring.index):
            add("i", u, zv)
    for k, u in enumerate(xs):
        for v in xs[k:]:
            add("i", u, v)
    for i, xblk in enumerate(L.x):
        m = L.m[i]
        for r, u in enumerate(xblk, start=1):
            for j, yblk in enumerate(L.y):
                nj = L.n[j]
                for s, v in enumerate(yblk, start=1):
                    if r + s >= m + 1 or r + s <= nj + 1:
                        add("ii", u, v)
                    else:
                        inside = _product_in(ring, base, u, v)
                        guards.append(IdentityCheck("ii-complement", f"{u}*{v} != 0", not inside))
    for i, yblk in enumerate(L.y):
        for r in range(len(yblk)):
            for s in range(r + 1, len(yblk)):
                for zv in sorted(L.all_z, key=ring.index):
                    add("iii", zv, yblk[s], (yblk[r],))
        for r in range(1, len(yblk)):
            for other in L.y:
                for v in other[:-1]:
                    add("iv", v, yblk[r], (yblk[r - 1],))
        for r in range(0, len(yblk) - 1):
            for other in L.y:
                for v in other[1:]:
                    add("v", v, yblk[r], (yblk[r + 1],))
    for i in range(L.t):
        for j in range(i + 1, L.t):
            for u in sorted(L.group(i + 1), key=ring.index):
                for v in sorted(L.group(j + 1), key=ring.index):
                    add("vi", u, v)
    return IdentityReport(tuple(checks), tuple(guards), D)

"""Order complexes in the scroll monoid and multigraded Betti numbers of k.

Coordinates of N^4 are (x, y, s1, s2).  The monoid of the scroll of type
(m, n) is generated by x^{m-i} y^i s1 (0 <= i <= m) and x^{n-i} y^i s2
(0 <= i <= n).  For the target element mu, the Betti number
beta_{i,mu}(k) over k[Λ]/(x^m s1, y^m s1) is the dimension of the reduced
relative homology H~_{i-2} of the pair (Δ_mu, Δ_{mu,J}).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .rational_core import SparseEchelon

Elem = tuple[int, int, int, int]


class BoundsExceeded(ValueError):
    pass


@dataclass(frozen=True)
class ScrollMonoid:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("monoid type needs m, n >= 1")

    @property
    def generators(self) -> tuple[Elem, ...]:
        first = [(self.m - i, i, 1, 0) for i in range(self.m + 1)]
        second = [(self.n - i, i, 0, 1) for i in range(self.n + 1)]
        return tuple(first + second)

    @property
    def j_generators(self) -> tuple[Elem, Elem]:
        return (self.m, 0, 1, 0), (0, self.m, 1, 0)


def monoid_member(M: ScrollMonoid, e: Elem) -> bool:
    g, h, p, q = e
    return min(e) >= 0 and g + h == p * M.m + q * M.n


def bfs_members(M: ScrollMonoid, max_s_degree: int) -> set[Elem]:
    """Every sum of at most ``max_s_degree`` generators (an oracle for membership)."""
    seen = {(0, 0, 0, 0)}
    queue = deque([(0, 0, 0, 0)])
    while queue:
        e = queue.popleft()
        if e[2] + e[3] >= max_s_degree:
            continue
        for gen in M.generators:
            f = tuple(a + b for a, b in zip(e, gen))
            if f not in seen:
                seen.add(f)
                queue.append(f)
    return seen


def _sub(a: Elem, b: Elem) -> Elem:
    return tuple(x - y for x, y in zip(a, b))


def target_mu(m: int, n: int) -> Elem:
    a = ceil(m / n)
    return (a * n, m, 1, a)


def interval_elements(M: ScrollMonoid, mu: Elem) -> list[Elem]:
    if not monoid_member(M, mu):
        raise ValueError("mu is not in the monoid")
    out = []
    G, Hh, P, Q = mu
    for p in range(P + 1):
        for q in range(Q + 1):
            total = p * M.m + q * M.n
            for g in range(min(G, total) + 1):
                alpha = (g, total - g, p, q)
                if alpha in ((0, 0, 0, 0), mu) or alpha[1] > Hh:
                    continue
                if monoid_member(M, _sub(mu, alpha)):
                    out.append(alpha)
    out.sort(key=lambda e: (e[2] + e[3], e))
    return out


def in_j_ideal(M: ScrollMonoid, gap: Elem) -> bool:
    return any(monoid_member(M, _sub(gap, j)) for j in M.j_generators)


@dataclass(frozen=True)
class OrderComplexPair:
    vertices: tuple[Elem, ...]
    faces: tuple[tuple[int, ...], ...]      # chains of vertex indices, nonempty, increasing
    in_sub: tuple[bool, ...]                # face lies in Δ_{mu,J}
    empty_in_sub: bool

    def sub_faces(self) -> list[tuple[int, ...]]:
        return [f for f, s in zip(self.faces, self.in_sub) if s]

    def relative_faces(self) -> list[tuple[int, ...]]:
        return [f for f, s in zip(self.faces, self.in_sub) if not s]


def build_pair(M: ScrollMonoid, mu: Elem, *, max_vertices: int = 200, max_faces: int = 200000) -> OrderComplexPair:
    verts = interval_elements(M, mu)
    if len(verts) > max_vertices:
        raise BoundsExceeded(f"interval has {len(verts)} elements (limit {max_vertices})")
    k = len(verts)
    above = [[j for j in range(k) if j != i and monoid_member(M, _sub(verts[j], verts[i]))] for i in range(k)]
    faces: list[tuple[int, ...]] = []

    def extend(chain):
        faces.append(tuple(chain))
        if len(faces) > max_faces:
            raise BoundsExceeded("too many chains")
        for j in above[chain[-1]]:
            extend(chain + [j])

    for i in range(k):
        extend([i])
    zero = (0, 0, 0, 0)

    def in_sub(chain) -> bool:
        pts = [zero] + [verts[i] for i in chain] + [mu]
        return any(in_j_ideal(M, _sub(pts[t + 1], pts[t])) for t in range(len(pts) - 1))

    faces.sort(key=len)
    flags = tuple(in_sub(f) for f in faces)
    return OrderComplexPair(tuple(verts), tuple(faces), flags, in_sub(()))


def connected_components(faces) -> int:
    """Components of the 1-skeleton on the vertices that occur in some face."""
    parent: dict[int, int] = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for f in faces:
        for v in f:
            parent.setdefault(v, v)
    for f in faces:
        for v in f[1:]:
            ra, rb = find(f[0]), find(v)
            if ra != rb:
                parent[ra] = rb
    return len({find(v) for v in parent})


def _boundary_rank(faces_k: list[tuple[int, ...]], faces_km1_index: dict[tuple[int, ...], int]) -> int:
    ech = SparseEchelon()
    for f in faces_k:
        vec = {}
        for t in range(len(f)):
            g = f[:t] + f[t + 1:]
            idx = faces_km1_index.get(g)
            if idx is not None:
                vec[idx] = Fraction(-1 if t % 2 else 1)
        if vec:
            ech.add(vec)
    return ech.dim


def relative_homology_dims(pair: OrderComplexPair) -> dict[int, int]:
    """All nonzero dim H~_i(Δ, Δ_J; Q)."""
    rel = pair.relative_faces()
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for f in rel:
        by_dim.setdefault(len(f) - 1, []).append(f)
    if not pair.empty_in_sub:
        by_dim.setdefault(-1, []).append(())
    if not by_dim:
        return {}
    top = max(by_dim)
    index = {d: {f: i for i, f in enumerate(fs)} for d, fs in by_dim.items()}
    ranks = {d: _boundary_rank(by_dim.get(d, []), index.get(d - 1, {})) for d in range(0, top + 1)}
    out = {}
    for d in range(-1, top + 1):
        h = len(by_dim.get(d, [])) - ranks.get(d, 0) - ranks.get(d + 1, 0)
        if h:
            out[d] = h
    return out


def relative_homology_dim(pair: OrderComplexPair, i: int) -> int:
    if i < 0:
        raise ValueError("i must be nonnegative")
    return relative_homology_dims(pair).get(i, 0)


def relative_euler_characteristic(pair: OrderComplexPair) -> int:
    chi = sum((-1) ** (len(f) - 1) for f in pair.relative_faces())
    return chi - (0 if pair.empty_in_sub else 1)


def _check_bounds(m: int, n: int, max_degree: int):
    a = ceil(m / n)
    if a + 1 > max_degree:
        raise BoundsExceeded(f"degree a+1={a + 1} exceeds {max_degree}")


def betti_hrw(M: ScrollMonoid, mu: Elem, i: int, *, max_degree: int = 6, max_vertices: int = 200) -> int:
    if i < 2:
        raise ValueError("the formula applies for i >= 2")
    if sum(mu[2:]) > max_degree:
        raise BoundsExceeded(f"mu has degree {sum(mu[2:])} beyond {max_degree}")
    return relative_homology_dim(build_pair(M, mu, max_vertices=max_vertices), i - 2)


@dataclass(frozen=True)
class WitnessReport:
    m: int
    n: int
    mu: Elem
    a: int
    interval_size: int
    components_of_subcomplex: int
    components_of_complex: int
    betti3: int

    @property
    def witness(self) -> bool:
        return self.betti3 >= 1

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "mu": list(self.mu), "a": self.a,
                "interval_size": self.interval_size,
                "components_of_subcomplex": self.components_of_subcomplex,
                "components_of_complex": self.components_of_complex,
                "betti3": self.betti3, "witness": self.witness}


def witness_report(m: int, n: int, *, max_degree: int = 6, max_vertices: int = 200) -> WitnessReport:
    _check_bounds(m, n, max_degree)
    M = ScrollMonoid(m, n)
    mu = target_mu(m, n)
    pair = build_pair(M, mu, max_vertices=max_vertices)
    return WitnessReport(m, n, mu, ceil(m / n), len(pair.vertices),
                         connected_components(pair.sub_faces()), connected_components(pair.faces),
                         relative_homology_dim(pair, 1))


def nonkoszul_witness(m: int, n: int, **bounds) -> bool:
    if m < 2 * n + 1:
        raise ValueError("the witness applies when m >= 2n+1")
    return witness_report(m, n, **bounds).witness

"""Closed-form invariants of a length sequence and scroll classification."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil
from typing import Sequence

from .pencil import KWForm
from .rational_core import QPoly


@dataclass(frozen=True)
class LengthSequence:
    nilpotent: tuple[int, ...] = ()
    scroll: tuple[int, ...] = ()
    jordan: tuple[tuple[Fraction, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nilpotent", tuple(sorted(self.nilpotent)))
        object.__setattr__(self, "scroll", tuple(sorted(self.scroll)))
        groups = tuple(sorted((Fraction(lam), tuple(sorted(ps, reverse=True))) for lam, ps in self.jordan))
        object.__setattr__(self, "jordan", groups)
        if any(x < 1 for x in self.nilpotent + self.scroll) or any(p < 1 for _, ps in groups for p in ps):
            raise ValueError("lengths are positive")
        lams = [lam for lam, _ in groups]
        if len(set(lams)) != len(lams):
            raise ValueError("eigenvalues must be pairwise distinct")

    @classmethod
    def of(cls, F: KWForm) -> "LengthSequence":
        return cls(tuple(F.nilpotent_lengths), tuple(F.scroll_lengths),
                   tuple((lam, tuple(ps)) for lam, ps in F.jordan_groups))

    @property
    def longest_nilpotent(self) -> int:
        return max(self.nilpotent, default=0)

    @property
    def shortest_scroll(self) -> int:
        return min(self.scroll, default=0)


def _seq(L) -> LengthSequence:
    return L if isinstance(L, LengthSequence) else LengthSequence.of(L)


def koszul_verdict(L: LengthSequence | KWForm) -> bool:
    L = _seq(L)
    m = L.longest_nilpotent
    if m < 2 or not L.scroll:
        return True
    return m <= 2 * L.shortest_scroll


def length_condition(L: LengthSequence | KWForm) -> bool:
    return koszul_verdict(L)


def regularity_formula(L: LengthSequence | KWForm) -> int:
    """Castelnuovo–Mumford regularity of S/I_2(X) over S."""
    L = _seq(L)
    m = L.longest_nilpotent
    if m <= 1 or not L.scroll:
        return 1
    return ceil((m - 1) / L.shortest_scroll)


def count_N(scroll: Sequence[int], b: int, q: int) -> int:
    """#{v >= 0 : sum n_j v_j <= b-1, sum v_j = q-1}, by enumeration."""
    if q < 1 or b < 1:
        return 0
    total = q - 1
    if not scroll:
        return int(total == 0)
    count = 0
    for v in product(range(total + 1), repeat=len(scroll)):
        if sum(v) == total and sum(n * x for n, x in zip(scroll, v)) <= b - 1:
            count += 1
    return count


def hilbert_correction(L: LengthSequence | KWForm) -> QPoly:
    """H_R(v) - H_{R'}(v), where R' drops the nilpotent blocks."""
    L = _seq(L)
    ms = L.nilpotent
    if not ms:
        return QPoly(())
    coeffs = [Fraction(0), Fraction(sum(ms) - len(ms))]
    for q in range(2, max(ms) + 1):
        coeffs.append(Fraction(sum(count_N(L.scroll, mi - 1 - r, q) for mi in ms for r in range(mi - 1))))
    return QPoly(tuple(coeffs))


def format_correction(p: QPoly) -> str:
    terms = []
    for k, c in enumerate(p.coeffs):
        if not c:
            continue
        mono = "" if k == 0 else ("v" if k == 1 else f"v^{k}")
        coef = "" if (c == 1 and k) else str(c)
        terms.append(coef + mono)
    return "+".join(terms).replace("+-", "-") or "0"


@dataclass(frozen=True)
class ScrollClassification:
    type: tuple[int, ...]
    balanced_regularity: bool
    linearly_koszul: bool
    strongly_koszul: bool
    ul_koszul: bool
    universal_regularity: bool

    def to_json(self) -> dict:
        return {
            "type": list(self.type),
            "balanced": self.balanced_regularity,
            "linearly_koszul": self.linearly_koszul,
            "strongly_koszul": self.strongly_koszul,
            "ul_koszul": self.ul_koszul,
            "universal_regularity": self.universal_regularity,
        }


def classify_scroll(T: Sequence[int]) -> ScrollClassification:
    T = tuple(T)
    if not T or any(x < 1 for x in T) or list(T) != sorted(T):
        raise ValueError("scroll type must be a nonempty ascending sequence of positive integers")
    t = len(T)
    n1, nt = T[0], T[-1]
    all_equal = n1 == nt
    return ScrollClassification(
        type=T,
        balanced_regularity=nt <= n1 + 1,
        linearly_koszul=nt <= 2 * n1,
        strongly_koszul=all_equal,
        ul_koszul=t == 1 or (t == 2 and T[1] <= 2 * n1) or (t == 3 and all_equal),
        universal_regularity=t <= 1 or (t == 2 and T[1] <= n1 + 1) or (t == 3 and T == (1, 1, 1)),
    )

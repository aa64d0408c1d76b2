"""Shared generators and oracles for the test suite."""

import random
from fractions import Fraction
from itertools import combinations_with_replacement

from kwkoszul.pencil import J, KWForm, N, Pencil, S, canonical_pencil
from kwkoszul.rational_core import QMatrix, det


def random_invertible(rng: random.Random, k: int, spread: int = 3) -> QMatrix:
    while True:
        M = QMatrix.from_rows([[rng.randint(-spread, spread) for _ in range(k)] for _ in range(k)])
        if det(M) != 0:
            return M


def disguise(F: KWForm, rng: random.Random) -> Pencil:
    """A random strictly equivalent copy of the canonical pencil of F."""
    P = canonical_pencil(F)
    C = random_invertible(rng, P.e)
    Cp = random_invertible(rng, P.n)
    return Pencil(C @ P.A @ Cp, C @ P.B @ Cp)


def random_form(rng: random.Random, max_vars: int = 8, eigenvalues=(0, 1, 2, Fraction(-1, 2)),
                nilpotent: bool = True) -> KWForm:
    while True:
        blocks = []
        for _ in range(rng.randint(1, 4)):
            kind = rng.choice("NSJ" if nilpotent else "SJ")
            if kind == "N":
                blocks.append(N(rng.randint(2, 4)))
            elif kind == "S":
                blocks.append(S(rng.randint(1, 3)))
            else:
                blocks.append(J(rng.randint(1, 3), rng.choice(eigenvalues)))
        F = KWForm(tuple(blocks))
        if 2 <= F.num_variables <= max_vars and (F.scroll_lengths or len(blocks) > 1):
            return F


def monomials_of_degree(n: int, d: int):
    """Exponent vectors of degree d, by brute force."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out

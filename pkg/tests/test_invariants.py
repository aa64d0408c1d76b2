from fractions import Fraction
from itertools import product

import pytest

from kwkoszul.invariants import (LengthSequence, classify_scroll, count_N, format_correction, hilbert_correction,
                                 koszul_verdict, length_condition, regularity_formula)
from kwkoszul.pencil import J, KWForm, N, S


def F(*blocks):
    return KWForm.of(*blocks)


def brute_N(scroll, b, q):
    bound = max(q, 1)
    return sum(1 for v in product(range(bound), repeat=len(scroll))
               if sum(v) == q - 1 and sum(n * x for n, x in zip(scroll, v)) <= b - 1)


def test_koszul_verdict_examples():
    assert not koszul_verdict(F(N(3), S(1)))
    assert koszul_verdict(F(N(2), S(1)))
    assert koszul_verdict(F(N(7)))
    assert koszul_verdict(F(N(1), S(1)))
    assert koszul_verdict(F(N(3), N(4), S(3), S(2), J(2, 0)))
    assert not koszul_verdict(F(N(5), S(3), S(2)))
    assert length_condition(F(S(2))) is True


def test_regularity_examples():
    assert regularity_formula(F(N(3), S(1))) == 2
    assert regularity_formula(F(S(1), S(2), S(3))) == 1
    assert regularity_formula(F(N(5), S(2))) == 2
    assert regularity_formula(F(N(4), S(1))) == 3
    assert regularity_formula(F(N(4), J(2, 0))) == 1


def test_count_N_examples():
    assert count_N((1,), 2, 2) == 1
    assert count_N((2, 3), 2, 2) == 0
    for scroll in ((), (1,), (2, 3), (1, 1, 4)):
        assert count_N(scroll, 5, 1) == 1
    assert count_N((1,), 0, 3) == 0


def test_count_N_matches_brute_force():
    for scroll in ((1,), (2,), (1, 2), (1, 1, 3), (2, 2)):
        for b in range(1, 8):
            for q in range(1, 5):
                assert count_N(scroll, b, q) == brute_N(scroll, b, q)


def test_hilbert_correction_examples():
    assert hilbert_correction(F(N(3), S(1))).coeffs == (0, 2, 1)
    assert format_correction(hilbert_correction(F(N(3), S(1)))) == "2v+v^2"
    assert hilbert_correction(F(S(3))).is_zero()
    assert format_correction(hilbert_correction(F(S(3)))) == "0"
    assert hilbert_correction(F(N(2), S(1))).coeffs == (0, 1)
    assert hilbert_correction(F(N(1), S(1))).is_zero()


def test_length_sequence_validation():
    L = LengthSequence((3, 2), (1,), ((Fraction(1), (1, 2)),))
    assert L.nilpotent == (2, 3) and L.jordan == ((1, (2, 1)),)
    assert L.longest_nilpotent == 3 and L.shortest_scroll == 1
    with pytest.raises(ValueError):
        LengthSequence((0,), ())
    with pytest.raises(ValueError):
        LengthSequence((), (), ((0, (1,)), (0, (2,))))


def test_classification_table():
    c = classify_scroll((1, 3))
    assert not c.balanced_regularity and not c.linearly_koszul
    c = classify_scroll((1, 2))
    assert (c.balanced_regularity, c.linearly_koszul, c.strongly_koszul, c.ul_koszul, c.universal_regularity) == \
        (True, True, False, True, True)
    c = classify_scroll((2, 2, 2))
    assert c.strongly_koszul and c.ul_koszul and not c.universal_regularity
    assert classify_scroll((1,)).to_json()["universal_regularity"]
    with pytest.raises(ValueError):
        classify_scroll((3, 1))
    with pytest.raises(ValueError):
        classify_scroll(())


def test_classification_implications():
    for t in range(1, 4):
        for T in product(range(1, 5), repeat=t):
            if list(T) != sorted(T):
                continue
            c = classify_scroll(T)
            if c.strongly_koszul:
                assert c.linearly_koszul
            if c.universal_regularity:
                assert c.balanced_regularity
            if c.balanced_regularity:
                assert c.linearly_koszul

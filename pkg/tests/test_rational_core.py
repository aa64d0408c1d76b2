import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kwkoszul.rational_core import (QMatrix, QPoly, Singular, SparseEchelon, as_rational, det, format_rational,
                                    interpolate, invert, kernel_vectors, rank, rational_linear_factors, rref,
                                    solve_particular, sparse_kernel, sparse_rank)


def M(rows):
    return QMatrix.from_rows(rows)


def test_as_rational_forms():
    assert as_rational("3/4") == Fraction(3, 4)
    assert as_rational(2) == 2
    assert as_rational("-1/2") == Fraction(-1, 2)
    with pytest.raises((ValueError, ZeroDivisionError)):
        as_rational("1/0")
    with pytest.raises((ValueError, TypeError)):
        as_rational(0.5)
    assert format_rational(Fraction(-3, 2)) == "-3/2"
    assert format_rational(Fraction(4)) == "4"


def test_rank_and_kernel_examples():
    assert rank(M([[1, 2], [2, 4]])) == 1
    assert kernel_vectors([[1, 2], [2, 4]], 2) == [[-2, 1]]
    assert rank(QMatrix.identity(3)) == 3
    assert kernel_vectors(QMatrix.identity(3).tolist(), 3) == []
    assert rank(M([[0, 1, 0], [0, 0, 1]])) == 2
    assert kernel_vectors([[0, 1, 0], [0, 0, 1]], 3) == [[1, 0, 0]]


def test_rref_shape():
    r = rref(M([[0, 2, 4], [1, 1, 1]]))
    assert r.pivots == (0, 1) and r.rank == 2
    assert r.reduced.tolist()[:2] == [[1, 0, -1], [0, 1, 2]]
    assert len(r.kernel) == 1


def test_invert_examples():
    assert invert(M([[0, 1], [1, 0]])).tolist() == [[0, 1], [1, 0]]
    assert invert(M([[2, 0], [0, 2]])).tolist() == [[Fraction(1, 2), 0], [0, Fraction(1, 2)]]
    with pytest.raises(Singular):
        invert(M([[1, 1], [1, 1]]))


def test_det_and_solve():
    assert det(M([[1, 2], [3, 4]])) == -2
    assert det(M([[1, 1], [1, 1]])) == 0
    x = solve_particular([[1, 1], [1, -1]], [Fraction(3), Fraction(1)], 2)
    assert x == [2, 1]
    assert solve_particular([[1, 1], [1, 1]], [Fraction(0), Fraction(1)], 2) is None


def test_linear_factors_examples():
    f = rational_linear_factors(QPoly.of(-1, 0, 1))
    assert sorted(f.roots) == [(-1, 1), (1, 1)] and f.complete
    f = rational_linear_factors(QPoly.of(1, 4, 4))
    assert list(f.roots) == [(Fraction(-1, 2), 2)] and f.complete
    f = rational_linear_factors(QPoly.of(1, 0, 1))
    assert not f.roots and not f.complete


def test_qpoly_arithmetic():
    p = QPoly.of(1, 1)
    q = p * p
    assert q.coeffs == (1, 2, 1)
    quo, rem = q.divmod(p)
    assert quo.coeffs == p.coeffs and rem.is_zero()
    assert (q - q).is_zero()
    assert q(Fraction(2)) == 9


def test_interpolate_recovers_polynomial():
    p = QPoly.of(3, -1, Fraction(1, 2), 2)
    pts = [(Fraction(x), p(Fraction(x))) for x in range(4)]
    assert interpolate(pts).coeffs == p.coeffs


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4))
def test_rank_nullity(rows):
    ker = kernel_vectors([[Fraction(v) for v in r] for r in rows], 4)
    assert rank(M(rows)) + len(ker) == 4
    for k in ker:
        assert all(sum(Fraction(a) * b for a, b in zip(r, k)) == 0 for r in rows)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=9, max_size=9))
def test_inverse_roundtrip(vals):
    A = M([vals[0:3], vals[3:6], vals[6:9]])
    if det(A) == 0:
        with pytest.raises(Singular):
            invert(A)
    else:
        assert (A @ invert(A)).tolist() == QMatrix.identity(3).tolist()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3).filter(bool), min_size=1, max_size=3), st.integers(0, 2))
def test_linear_factors_find_all_rational_roots(roots, extra_mult):
    p = QPoly.of(1)
    for r in roots:
        p = p * QPoly.of(-r, 1)
    p = p * QPoly.of(1, 0, 1) if extra_mult else p
    f = rational_linear_factors(p)
    expect = {}
    for r in roots:
        expect[Fraction(r)] = expect.get(Fraction(r), 0) + 1
    assert dict(f.roots) == expect
    assert f.complete == (extra_mult == 0)


def test_sparse_echelon_against_dense_rank():
    rng = random.Random(7)
    for _ in range(30):
        rows = [[rng.randint(-2, 2) for _ in range(6)] for _ in range(rng.randint(1, 6))]
        vecs = [{i: Fraction(v) for i, v in enumerate(r) if v} for r in rows]
        assert sparse_rank(vecs) == rank(M(rows))
        ech = SparseEchelon()
        for v in vecs:
            ech.add(v)
        for v in vecs:
            assert ech.contains(v)


def test_sparse_kernel_is_kernel():
    cols = [{0: Fraction(1), 1: Fraction(2)}, {0: Fraction(2), 1: Fraction(4)}, {2: Fraction(1)}]
    ker = sparse_kernel(cols)
    assert len(ker) == 1
    (k,) = ker
    total = {}
    for j, c in k.items():
        for i, v in cols[j].items():
            total[i] = total.get(i, 0) + c * v
    assert all(v == 0 for v in total.values())

from itertools import combinations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from functcat.exactlin import (
    QQ,
    DimensionMismatch,
    FieldSpec,
    Subspace,
    image_basis,
    inverse,
    kernel_basis,
    left_inverse,
    quotient_map,
    quotient_section,
    rank,
    rref,
    solve,
    subspace_intersect,
    subspace_sum,
)

F101 = FieldSpec.prime(101)
F2 = FieldSpec.prime(2)


def minor_rank(rows, p=0):
    """Largest r with a nonzero r x r minor; determinants via sympy, reduced mod p."""
    m = sympy.Matrix(rows)
    for r in range(min(m.shape), 0, -1):
        for ri in combinations(range(m.rows), r):
            for ci in combinations(range(m.cols), r):
                d = m.extract(list(ri), list(ci)).det()
                if (d % p if p else d) != 0:
                    return r
    return 0


small_ints = st.integers(min_value=-4, max_value=4)


@st.composite
def int_matrices(draw, max_rows=5, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return draw(st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r))


def test_field_validation():
    assert FieldSpec.rationals().kind == "rationals"
    assert FieldSpec.prime(7).kind == "prime_field"
    with pytest.raises(ValueError):
        FieldSpec(6)
    with pytest.raises(ValueError):
        FieldSpec(-3)


def test_prime_field_scalars():
    f7 = FieldSpec.prime(7)
    assert f7.scalar("1/3") == 5
    assert f7.scalar(-1) == 6
    with pytest.raises(ZeroDivisionError):
        f7.scalar("1/7")


def test_rref_identity_and_dependent_rows():
    red, r = rref(QQ.eye(2))
    assert r == 2 and (red == QQ.eye(2)).all()
    red, r = rref(QQ.matrix([[1, 2], [2, 4]]))
    assert r == 1
    assert red.tolist() == QQ.matrix([[1, 2], [0, 0]]).tolist()


def test_rank_f101_matches_minor_oracle():
    rng = np.random.default_rng(7)
    for trial in range(4):
        raw = rng.integers(0, 101, size=(5, 7)).tolist()
        if trial == 3:
            raw[4] = [(raw[0][j] + 2 * raw[1][j]) % 101 for j in range(7)]
        m = F101.matrix(raw)
        assert rank(m, F101) == minor_rank(raw, 101)


def test_rank_depends_on_characteristic():
    rows = [[1, 1], [1, -1]]
    assert rank(QQ.matrix(rows)) == 2
    assert rank(F2.matrix(rows), F2) == 1


def test_kernel_examples():
    assert kernel_basis(QQ.eye(3)).dim == 0
    assert kernel_basis(QQ.zeros(3, 3)).dim == 3
    k = kernel_basis(QQ.matrix([[1, 1]]))
    assert k.dim == 1
    assert k == Subspace.span(QQ.matrix([[1, -1]]), 2)


def test_solve():
    b = QQ.vector([3, -1, "1/2"])
    assert (solve(QQ.eye(3), b) == b).all()
    assert solve(QQ.matrix([[1, 1], [1, 1]]), QQ.vector([1, 2])) is None
    with pytest.raises(DimensionMismatch):
        solve(QQ.eye(2), QQ.vector([1, 2, 3]))


def test_intersect_and_sum():
    e1 = Subspace.span(QQ.matrix([[1, 0, 0]]), 3)
    e2 = Subspace.span(QQ.matrix([[0, 1, 0]]), 3)
    assert subspace_intersect(e1, e2).dim == 0
    assert subspace_sum(e1, e2).dim == 2
    with pytest.raises(DimensionMismatch):
        subspace_sum(e1, Subspace.zero(2))


def test_quotient_map_kills_subspace():
    sub = Subspace.span(QQ.matrix([[1, 0, 0]]), 3)
    q = quotient_map(3, sub)
    assert q.shape == (2, 3) and rank(q) == 2
    assert all(x == 0 for x in QQ.dot(q, QQ.vector([1, 0, 0])))
    assert (QQ.dot(q, quotient_section(3, sub)) == QQ.eye(2)).all()


def test_inverse_and_left_inverse():
    m = QQ.matrix([[2, 1], [1, 1]])
    assert (QQ.dot(m, inverse(m)) == QQ.eye(2)).all()
    with pytest.raises(ZeroDivisionError):
        inverse(QQ.matrix([[1, 2], [2, 4]]))
    tall = QQ.matrix([[1, 0], [1, 1], [0, 3]])
    assert (QQ.dot(left_inverse(tall), tall) == QQ.eye(2)).all()


def test_canonical_form_is_basis_independent():
    a = Subspace.span(QQ.matrix([[1, 2, 3], [0, 1, 1]]), 3)
    b = Subspace.span(QQ.matrix([[1, 3, 4], [2, 5, 7]]), 3)
    assert a == b and hash(a) == hash(b)


@settings(max_examples=40, deadline=None)
@given(int_matrices())
def test_rank_nullity_and_transpose(rows):
    m = QQ.matrix(rows)
    r = rank(m)
    assert r == rank(m.T)
    assert kernel_basis(m).dim + r == m.shape[1]
    assert image_basis(m).dim == r


@settings(max_examples=40, deadline=None)
@given(int_matrices(), st.sampled_from([0, 2, 3, 101]))
def test_rref_idempotent_and_kernel_annihilated(rows, p):
    fs = FieldSpec(p)
    m = fs.matrix(rows)
    red, r = rref(m, fs)
    red2, r2 = rref(red, fs)
    assert r == r2 and red.tolist() == red2.tolist()
    k = kernel_basis(m, fs)
    for v in k.basis:
        assert all(x == 0 for x in fs.dot(m, v))


@settings(max_examples=40, deadline=None)
@given(int_matrices(max_rows=4, max_cols=4), st.lists(small_ints, min_size=4, max_size=4))
def test_solve_consistent_with_image(rows, xs):
    m = QQ.matrix(rows)
    x = QQ.vector(xs[: m.shape[1]])
    b = QQ.dot(m, x)
    sol = solve(m, b)
    assert sol is not None and (QQ.dot(m, sol) == b).all()


@settings(max_examples=30, deadline=None)
@given(int_matrices(max_rows=3, max_cols=4), int_matrices(max_rows=3, max_cols=4))
def test_dimension_formula(r1, r2):
    n = 4
    a = Subspace.span(QQ.matrix([row + [0] * (n - len(row)) for row in r1]), n)
    b = Subspace.span(QQ.matrix([row + [0] * (n - len(row)) for row in r2]), n)
    assert a.dim + b.dim == subspace_sum(a, b).dim + subspace_intersect(a, b).dim
    q = quotient_map(n, a)
    assert kernel_basis(q) == a

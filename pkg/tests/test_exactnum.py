"""Exact scalar and matrix arithmetic: identities, canonical forms, solvers."""

import random
from fractions import Fraction

import pytest

from chaingeo.exactnum import (
    I,
    ONE,
    ZERO,
    ExactnumError,
    GaussianRational,
    NotHermitianError,
    RMatrix,
    SingularMatrixError,
    cayley_h_unitary,
    gr,
    hermitian_signature,
    rat_from_str,
    rat_str,
    solve_affine,
)

RNG = random.Random(20240817)


def rand_scalar(height=6, real=False):
    def frac():
        return Fraction(RNG.randint(-height, height), RNG.randint(1, height))

    return GaussianRational(frac(), 0 if real else frac())


def rand_matrix(rows, cols, height=6, real=False):
    if rows == 0 or cols == 0:
        return RMatrix.zeros(rows, cols)
    return RMatrix.from_rows(
        [[rand_scalar(height, real) for _ in range(cols)] for _ in range(rows)]
    )


# ---------------------------------------------------------------------------
# scalars


def test_constants():
    assert ZERO.is_zero()
    assert ONE == 1
    assert (I * I) == -1
    assert I.conj() == -I


def test_field_axioms_sampled():
    for _ in range(200):
        a, b, c = rand_scalar(), rand_scalar(), rand_scalar()
        assert ((a + b) + c) == (a + (b + c))
        assert ((a * b) * c) == (a * (b * c))
        assert (a * (b + c)) == (a * b + a * c)
        assert (a + b) == (b + a)
        assert (a * b) == (b * a)
        assert (a - a).is_zero()
        if not a.is_zero():
            assert (a * a.inverse()) == ONE
            assert (b / a) * a == b


def test_conjugation_and_modulus():
    for _ in range(100):
        a, b = rand_scalar(), rand_scalar()
        assert (a * b).conj() == a.conj() * b.conj()
        assert (a + b).conj() == a.conj() + b.conj()
        assert a.abs2() == (a * a.conj()).re
        assert (a * a.conj()).im == 0


def test_scalar_coercions_and_predicates():
    assert GaussianRational(Fraction(1, 2)) + Fraction(1, 2) == 1
    assert GaussianRational(3) == 3
    assert gr(2, -1) == GaussianRational(2, -1)
    assert gr(0, 5).is_real() is False
    assert gr(7).is_real() is True
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_rat_str_roundtrip():
    for _ in range(50):
        q = Fraction(RNG.randint(-40, 40), RNG.randint(1, 40))
        assert rat_from_str(rat_str(q)) == q
    assert rat_str(Fraction(-3, 7)) == "-3/7"
    assert rat_from_str("5/1") == 5


# ---------------------------------------------------------------------------
# matrix construction and shape discipline


def test_constructor_shape_checks():
    with pytest.raises(ExactnumError):
        RMatrix(2, 2, [[ONE, ONE]])
    with pytest.raises(ExactnumError):
        RMatrix(1, 2, [[ONE]])
    z = RMatrix.zeros(0, 3)
    assert (z.rows, z.cols) == (0, 3)
    assert RMatrix.identity(0).rows == 0


def test_stack_and_block():
    a = rand_matrix(2, 3)
    b = rand_matrix(2, 1)
    c = a.hstack(b)
    assert (c.rows, c.cols) == (2, 4)
    assert c.block(0, 2, 0, 3) == a
    assert c.block(0, 2, 3, 4) == b
    d = a.vstack(rand_matrix(1, 3))
    assert (d.rows, d.cols) == (3, 3)
    with pytest.raises(ExactnumError):
        a.hstack(rand_matrix(3, 1))
    with pytest.raises(ExactnumError):
        a.vstack(rand_matrix(1, 2))


def test_zero_inner_dimension_product():
    # (p x 0) @ (0 x q) must be the p x q zero matrix with consistent rows
    a = RMatrix.zeros(2, 0)
    b = RMatrix.zeros(0, 3)
    c = a @ b
    assert (c.rows, c.cols) == (2, 3)
    assert c.is_zero()
    assert c.transpose().rows == 3  # the malformed product used to break here
    assert (rand_matrix(2, 2) @ RMatrix.zeros(2, 0)).cols == 0


def test_matmul_against_quadratic_form():
    # associativity and distributivity on random chains of products
    for _ in range(40):
        a = rand_matrix(RNG.randint(1, 4), RNG.randint(1, 4))
        b = rand_matrix(a.cols, RNG.randint(1, 4))
        c = rand_matrix(b.cols, RNG.randint(1, 4))
        assert ((a @ b) @ c) == (a @ (b @ c))
        d = rand_matrix(a.rows, a.cols)
        assert ((a + d) @ b) == (a @ b + d @ b)


def test_transpose_and_conjugate():
    for _ in range(30):
        a = rand_matrix(3, 2)
        b = rand_matrix(2, 4)
        assert (a @ b).conj_t() == b.conj_t() @ a.conj_t()
        assert a.transpose().transpose() == a
        assert a.conj().conj() == a


def test_hermitian_predicates():
    a = rand_matrix(3, 3)
    h = a + a.conj_t()
    k = a - a.conj_t()
    assert h.is_hermitian()
    assert k.is_anti_hermitian()
    assert not k.is_hermitian() or k.is_zero()
    assert (h @ h).trace().is_real()


# ---------------------------------------------------------------------------
# elimination-based computations


def test_rref_shape_and_idempotence():
    for _ in range(60):
        a = rand_matrix(RNG.randint(0, 5), RNG.randint(0, 5))
        red, pivots = a.rref()
        assert sorted(pivots) == list(pivots)
        again, pivots2 = red.rref()
        assert again == red and pivots2 == pivots
        for r, pc in enumerate(pivots):
            assert red._d[r][pc] == ONE
            for r2 in range(red.rows):
                if r2 != r:
                    assert red._d[r2][pc].is_zero()


def test_rank_kernel_nullity():
    for _ in range(60):
        a = rand_matrix(RNG.randint(0, 5), RNG.randint(0, 5))
        ker = a.kernel()
        assert (a @ ker).is_zero()
        assert a.rank() + ker.cols == a.cols
        assert ker.rank() == ker.cols  # kernel basis is independent
    assert RMatrix.identity(4).kernel().cols == 0


def test_rank_of_products_and_low_rank():
    u = rand_matrix(4, 2)
    v = rand_matrix(2, 4)
    assert (u @ v).rank() <= 2
    a = rand_matrix(3, 3)
    rows = [list(r) for r in a._d]
    rows[2] = [x + y for x, y in zip(rows[0], rows[1])]
    assert RMatrix.from_rows(rows).rank() <= 2


def test_inverse_and_solve():
    for _ in range(40):
        n = RNG.randint(1, 4)
        a = rand_matrix(n, n)
        if a.det().is_zero():
            continue
        inv = a.inverse()
        assert (a @ inv) == RMatrix.identity(n)
        b = rand_matrix(n, 2)
        x = a.solve(b)
        assert (a @ x) == b
    with pytest.raises(SingularMatrixError):
        RMatrix.zeros(2, 2).inverse()


def test_det_multiplicative_and_closed_forms():
    a = RMatrix.from_rows([[gr(1), gr(2)], [gr(3), gr(4)]])
    assert a.det() == gr(-2)
    for _ in range(30):
        n = RNG.randint(1, 4)
        p, q = rand_matrix(n, n), rand_matrix(n, n)
        assert (p @ q).det() == p.det() * q.det()
    sing = RMatrix.from_rows([[gr(1), gr(2)], [gr(2), gr(4)]])
    assert sing.det().is_zero()
    with pytest.raises(ExactnumError):
        rand_matrix(2, 3).det()


def test_col_canonical_is_a_span_invariant():
    for _ in range(40):
        rows = RNG.randint(1, 5)
        cols = RNG.randint(1, 4)
        a = rand_matrix(rows, cols)
        g = None
        while g is None or g.det().is_zero():
            g = rand_matrix(cols, cols)
        assert (a @ g).col_canonical() == a.col_canonical()
        can = a.col_canonical()
        assert can.col_canonical() == can
        assert can.cols == a.rank()


def test_solve_affine_full_solution_set():
    for _ in range(60):
        a = rand_matrix(RNG.randint(1, 4), RNG.randint(1, 4))
        x = rand_matrix(a.cols, 1)
        b = a @ x
        got = solve_affine(a, b)
        assert got is not None
        x0, ker = got
        assert (a @ x0) == b
        assert (a @ ker).is_zero()
        assert ker.cols == a.cols - a.rank()
    # inconsistent system
    a = RMatrix.from_rows([[gr(1), gr(0)], [gr(1), gr(0)]])
    b = RMatrix.from_rows([[gr(1)], [gr(2)]])
    assert solve_affine(a, b) is None
    with pytest.raises(ExactnumError):
        solve_affine(a, rand_matrix(2, 2))


# ---------------------------------------------------------------------------
# signature


def test_signature_diagonal_and_hyperbolic():
    d = RMatrix.diag([gr(2), gr(-3), gr(0), gr(1)])
    assert hermitian_signature(d) == (2, 1, 1)
    hyp = RMatrix.from_rows([[gr(0), gr(1)], [gr(1), gr(0)]])
    assert hermitian_signature(hyp) == (1, 1, 0)
    ihyp = RMatrix.from_rows([[gr(0), gr(0, 1)], [gr(0, -1), gr(0)]])
    assert hermitian_signature(ihyp) == (1, 1, 0)
    assert hermitian_signature(RMatrix.zeros(3, 3)) == (0, 0, 3)
    with pytest.raises(NotHermitianError):
        hermitian_signature(RMatrix.from_rows([[gr(0), gr(1)], [gr(2), gr(0)]]))


def test_signature_congruence_invariance():
    for _ in range(30):
        n = RNG.randint(1, 4)
        a = rand_matrix(n, n)
        h = a + a.conj_t()
        g = None
        while g is None or g.det().is_zero():
            g = rand_matrix(n, n)
        assert hermitian_signature(g.conj_t() @ h @ g) == hermitian_signature(h)


def test_signature_float_crosscheck_small():
    numpy = pytest.importorskip("numpy")
    for _ in range(50):
        n = RNG.randint(2, 5)
        a = rand_matrix(n, n, height=5)
        h = a + a.conj_t()
        plus, minus, zero = hermitian_signature(h)
        arr = numpy.array(
            [[float(x.re) + 1j * float(x.im) for x in row] for row in h._d]
        )
        eig = numpy.linalg.eigvalsh(arr)
        assert plus == int((eig > 1e-8).sum())
        assert minus == int((eig < -1e-8).sum())
        assert zero == int((abs(eig) <= 1e-8).sum())


# ---------------------------------------------------------------------------
# Cayley transform


def test_cayley_h_unitary_preserves_form():
    count = 0
    while count < 25:
        n = RNG.randint(1, 4)
        h = RMatrix.diag([gr(1 if RNG.random() < 0.5 else -1) for _ in range(n)])
        b = rand_matrix(n, n)
        k = h @ (b - b.conj_t())  # K* H + H K = 0 since H^2 = Id
        if (RMatrix.identity(n) + k).det().is_zero():
            continue
        g = cayley_h_unitary(k, h)
        assert (g.conj_t() @ h @ g) == h
        count += 1
    with pytest.raises(ExactnumError):
        cayley_h_unitary(RMatrix.identity(2), RMatrix.identity(2))

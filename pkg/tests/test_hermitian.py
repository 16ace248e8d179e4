"""Subspace lattice over the indefinite Hermitian space: spans, intersections,
complements, and signatures."""

import random
from fractions import Fraction

import pytest

from chaingeo.exactnum import RMatrix, GaussianRational, gr, hermitian_signature
from chaingeo.hermitian import (
    DimensionError,
    GeometryError,
    HermSpace,
    Subspace,
    intersect,
    span,
)

RNG = random.Random(95100)


def rand_scalar():
    return GaussianRational(
        Fraction(RNG.randint(-5, 5), RNG.randint(1, 4)),
        Fraction(RNG.randint(-5, 5), RNG.randint(1, 4)),
    )


def rand_subspace(space, dim):
    while True:
        gens = RMatrix.from_rows(
            [[rand_scalar() for _ in range(dim)] for _ in range(space.dim)]
        )
        sub = Subspace(space, gens)
        if sub.dim == dim:
            return sub


def test_space_form_is_hermitian_with_signature_mn():
    for m, n in [(1, 2), (2, 3), (2, 5), (3, 4)]:
        space = HermSpace(m, n)
        assert space.h.is_hermitian()
        assert hermitian_signature(space.h) == (m, n, 0)
        assert space.dim == m + n
    with pytest.raises(DimensionError):
        HermSpace(0, 3)
    with pytest.raises(DimensionError):
        HermSpace(3, 2)


def test_pairing_is_sesquilinear():
    space = HermSpace(2, 3)
    for _ in range(20):
        u = RMatrix.from_rows([[rand_scalar()] for _ in range(5)])
        v = RMatrix.from_rows([[rand_scalar()] for _ in range(5)])
        w = RMatrix.from_rows([[rand_scalar()] for _ in range(5)])
        c = rand_scalar()
        assert space.pairing(u, v).conj() == space.pairing(v, u)
        assert space.pairing(u, v.scale(c)) == c * space.pairing(u, v)
        assert space.pairing(u.scale(c), v) == c.conj() * space.pairing(u, v)
        assert space.pairing(u, v + w) == space.pairing(u, v) + space.pairing(u, w)


def test_subspace_canonical_equality():
    space = HermSpace(2, 3)
    sub = rand_subspace(space, 2)
    g = None
    while g is None or g.det().is_zero():
        g = RMatrix.from_rows([[rand_scalar() for _ in range(2)] for _ in range(2)])
    other = Subspace(space, sub.basis @ g)
    assert other == sub
    assert hash(other) == hash(sub)
    assert other.leq(sub) and sub.leq(other)


def test_contains_vector_and_leq():
    space = HermSpace(1, 2)
    e0 = space.basis_vector(0)
    e1 = space.basis_vector(1)
    sub = Subspace(space, e0.hstack(e1))
    assert sub.contains_vector(e0 + e1.scale(gr(0, 7)))
    assert not sub.contains_vector(space.basis_vector(2))
    small = Subspace(space, e0)
    assert small.leq(sub)
    assert not sub.leq(small)


def test_dimension_formula_span_intersect():
    space = HermSpace(3, 5)
    for _ in range(25):
        a = rand_subspace(space, RNG.randint(1, 4))
        b = rand_subspace(space, RNG.randint(1, 4))
        s = span(a, b)
        i = intersect(a, b)
        assert a.dim + b.dim == s.dim + i.dim
        assert i.leq(a) and i.leq(b)
        assert a.leq(s) and b.leq(s)
    assert span(rand_subspace(space, 2)).dim == 2


def test_orth_complement():
    space = HermSpace(2, 4)
    for _ in range(20):
        a = rand_subspace(space, RNG.randint(1, 5))
        perp = a.orth_complement()
        assert perp.dim == space.dim - a.dim
        assert perp.orth_complement() == a
        gram = space.gram(a.basis, perp.basis)
        assert gram.is_zero()


def test_restrict_form_and_radical():
    space = HermSpace(2, 3)
    for _ in range(20):
        a = rand_subspace(space, RNG.randint(1, 4))
        f = a.restrict_form()
        assert f.is_hermitian()
        plus, minus, zero = a.signature()
        assert plus + minus + zero == a.dim
        assert a.radical().dim == zero
        assert a.radical().leq(a)


def test_isotropic_detection():
    space = HermSpace(2, 3)
    # the span of the first m coordinate vectors is isotropic by design
    iso = Subspace(space, space.basis_vector(0).hstack(space.basis_vector(1)))
    assert iso.is_isotropic()
    assert iso.signature() == (0, 0, 2)
    # e_0 pairs with e_{n+0}, so their sum has positive self-pairing
    pos = Subspace(space, space.basis_vector(0) + space.basis_vector(3))
    assert not pos.is_isotropic()
    assert pos.signature() == (1, 0, 0)


def test_generator_shape_validation():
    space = HermSpace(1, 2)
    with pytest.raises(GeometryError):
        Subspace(space, RMatrix.identity(2))

"""Points and chains of the Shilov boundary of SU(m, n).

A point is an m-dimensional h-isotropic subspace of C^(m+n).  A chain is
the point set of a maximal tube-type subdomain's Shilov boundary: it is
determined by a 2m-dimensional subspace V of signature (m, m), and its
points are exactly the maximal isotropic subspaces of V.

Two numerical triple invariants live here.  The integer-valued index of a
coplanar triple is computed by exact signature counting, so it never
suffers rounding; the classical angular invariant for m = 1 is kept in
floating point as an independent cross-check.
"""

from __future__ import annotations

import math

from .exactnum import (
    I,
    ONE,
    RMatrix,
    ZERO,
    hermitian_signature,
)
from .hermitian import GeometryError, HermSpace, Subspace, intersect, span


class NotTransverseError(GeometryError):
    pass


class NotCoplanarError(GeometryError):
    pass


class DegeneratePairingError(GeometryError):
    pass


class ShilovPoint:
    """An m-dimensional isotropic subspace, the boundary point itself."""

    __slots__ = ("space", "subspace")

    def __init__(self, space: HermSpace, subspace: Subspace):
        if subspace.dim != space.m:
            raise GeometryError(
                "a point is %d-dimensional, got dimension %d"
                % (space.m, subspace.dim)
            )
        if not subspace.is_isotropic():
            raise GeometryError("subspace is not isotropic")
        self.space = space
        self.subspace = subspace

    @staticmethod
    def from_basis(space: HermSpace, basis: RMatrix) -> "ShilovPoint":
        return ShilovPoint(space, Subspace(space, basis))

    @property
    def basis(self) -> RMatrix:
        return self.subspace.basis

    def __eq__(self, other):
        if not isinstance(other, ShilovPoint):
            return NotImplemented
        return self.subspace == other.subspace

    def __hash__(self):
        return hash(self.subspace)

    def __repr__(self):
        return "ShilovPoint(%r)" % (self.subspace,)


class MChain:
    """A chain: the set of maximal isotropic subspaces of a (m, m) space V.

    The optional seed point records one point known to lie on the chain;
    constructions that start from points keep it so that later chart
    computations have an exact rational foothold.
    """

    __slots__ = ("space", "subspace", "seed")

    def __init__(self, space: HermSpace, subspace: Subspace, seed=None):
        m = space.m
        if subspace.dim != 2 * m:
            raise GeometryError(
                "a chain subspace is %d-dimensional, got %d"
                % (2 * m, subspace.dim)
            )
        if subspace.signature() != (m, m, 0):
            raise GeometryError("chain subspace must have signature (m, m)")
        if seed is not None and not seed.subspace.leq(subspace):
            raise GeometryError("seed point does not lie on the chain")
        self.space = space
        self.subspace = subspace
        self.seed = seed

    def __eq__(self, other):
        if not isinstance(other, MChain):
            return NotImplemented
        return self.subspace == other.subspace

    def __hash__(self):
        return hash(self.subspace)

    def __repr__(self):
        return "MChain(%r)" % (self.subspace,)


def standard_vinf(space: HermSpace) -> ShilovPoint:
    """The point spanned by the first m coordinates."""
    m = space.m
    basis = RMatrix.identity(space.dim).block(0, space.dim, 0, m)
    return ShilovPoint.from_basis(space, basis)


def standard_v0(space: HermSpace) -> ShilovPoint:
    """The point spanned by the last m coordinates."""
    m, n = space.m, space.n
    basis = RMatrix.identity(space.dim).block(0, space.dim, n, n + m)
    return ShilovPoint.from_basis(space, basis)


def standard_vd(space: HermSpace, signs) -> ShilovPoint:
    """The point with basis [Id; 0; d], d diagonal with entries sign*i.

    signs is a tuple of +1/-1 of length m.  All 2^m of these points are
    transverse to both standard points and coplanar with them.
    """
    m, n = space.m, space.n
    if len(signs) != m:
        raise GeometryError("need %d signs" % m)
    rows = []
    for i in range(m):
        row = [ZERO] * m
        row[i] = ONE
        rows.append(row)
    for _ in range(n - m):
        rows.append([ZERO] * m)
    for i in range(m):
        row = [ZERO] * m
        row[i] = I if signs[i] > 0 else -I
        rows.append(row)
    return ShilovPoint.from_basis(space, RMatrix.from_rows(rows))


def transverse(x: ShilovPoint, y: ShilovPoint) -> bool:
    """True iff the two points intersect trivially."""
    return x.basis.hstack(y.basis).rank() == 2 * x.space.m


def chain_through(x: ShilovPoint, y: ShilovPoint) -> MChain:
    """The unique chain through two transverse points."""
    if not transverse(x, y):
        raise NotTransverseError("chain through non-transverse points")
    v = span(x.subspace, y.subspace)
    return MChain(x.space, v, seed=x)


def member(x: ShilovPoint, t: MChain) -> bool:
    """True iff the point lies on the chain."""
    return x.subspace.leq(t.subspace)


def apply_matrix(g: RMatrix, x: ShilovPoint) -> ShilovPoint:
    """Image of a point under an h-unitary matrix."""
    return ShilovPoint.from_basis(x.space, g @ x.basis)


def apply_matrix_chain(g: RMatrix, t: MChain) -> MChain:
    """Image of a chain under an h-unitary matrix."""
    seed = apply_matrix(g, t.seed) if t.seed is not None else None
    return MChain(t.space, Subspace(t.space, g @ t.subspace.basis), seed=seed)


def is_maximal_triple_space(x: ShilovPoint, y: ShilovPoint, z: ShilovPoint) -> bool:
    """True iff the three pairwise transverse points span a 2m-space.

    Such triples lie on a common chain and are exactly the triples whose
    integer index below attains its extremes.
    """
    for a, b in ((x, y), (y, z), (x, z)):
        if not transverse(a, b):
            raise NotTransverseError("triple contains a non-transverse pair")
    return span(x.subspace, y.subspace, z.subspace).dim == 2 * x.space.m


def bergmann_index(x: ShilovPoint, y: ShilovPoint, z: ShilovPoint) -> int:
    """Integer triple invariant of a pairwise transverse coplanar triple.

    Write the middle point y as the graph of an invertible map from x to z
    inside the 2m-space V spanned by x and z.  The sesquilinear form
    F(u, u') = h(u, Tu') on x is forced to be anti-Hermitian by isotropy of
    the three subspaces, so iF is Hermitian and nondegenerate; the value is
    its signature (number of positive minus number of negative eigenvalues).

    The result is an even-step integer in [-m, m], alternating under
    permutations, invariant under h-unitaries, and additive in the cocycle
    sense on coplanar quadruples.  For m = 1 it agrees exactly with the
    sign convention of the angular invariant in cartan_invariant.
    """
    for a, b in ((x, y), (y, z), (x, z)):
        if not transverse(a, b):
            raise NotTransverseError("index needs pairwise transverse points")
    space = x.space
    m = space.m
    xb, yb, zb = x.basis, y.basis, z.basis
    vbasis = xb.hstack(zb)
    if not Subspace(space, vbasis.hstack(yb)).dim == 2 * m:
        raise NotCoplanarError("middle point is not in the span of the outer pair")
    pq = vbasis.solve(yb)
    p = pq.block(0, m, 0, m)
    q = pq.block(m, 2 * m, 0, m)
    a = space.gram(xb, zb)
    f = a @ q @ p.inverse()
    if not f.is_anti_hermitian():
        raise GeometryError("graph form is not anti-Hermitian")
    plus, minus, zero = hermitian_signature(f.scale(I))
    if zero != 0:
        raise GeometryError("graph form is degenerate")
    return plus - minus


def cartan_invariant(x: ShilovPoint, y: ShilovPoint, z: ShilovPoint) -> float:
    """Angular invariant of a triple of boundary points for m = 1.

    Computes (2/pi) * arg(conj(h(x,y) h(y,z) h(z,x))) from exact pairings,
    with the single arg evaluated in floating point.  With our form the
    triple product of isotropic vectors has non-negative real part, so
    values lie in [-1, 1]; the extremes are attained exactly on coplanar
    transverse triples, where this agrees with bergmann_index.
    """
    space = x.space
    if space.m != 1:
        raise GeometryError("angular invariant is defined for m = 1 only")
    a1 = space.pairing(x.basis, y.basis)
    a2 = space.pairing(y.basis, z.basis)
    a3 = space.pairing(z.basis, x.basis)
    if a1.is_zero() or a2.is_zero() or a3.is_zero():
        raise DegeneratePairingError("a pairing in the triple product vanishes")
    prod = a1 * a2 * a3
    return (2.0 / math.pi) * math.atan2(float(-prod.im), float(prod.re))

"""The Hermitian form of signature (m, n) on C^(m+n) and its subspaces.

The form is represented by the block matrix

    H = [[0,      0,  Id_m],
         [0, -Id_(n-m),  0],
         [Id_m,   0,    0]]

whose pairing is h(u, v) = u* H v, conjugate linear in the first argument.
The first m coordinates and the last m coordinates span a pair of dual
isotropic subspaces; the middle block is negative definite.

Subspaces are stored through a canonical basis: the column-reduced echelon
form of any spanning set, computed left to right with leading entries 1.
Two subspaces are equal iff their canonical bases are identical, which makes
equality a pure string/tuple comparison with no tolerance.
"""

from __future__ import annotations

from .exactnum import (
    ONE,
    RMatrix,
    ZERO,
    GaussianRational,
    hermitian_signature,
)


class GeometryError(ValueError):
    """Base error for geometric precondition failures."""


class DimensionError(GeometryError):
    pass


class HermSpace:
    """C^(m+n) with the standard signature-(m, n) Hermitian form."""

    __slots__ = ("m", "n", "dim", "h")

    def __init__(self, m: int, n: int):
        if not (1 <= m <= n):
            raise DimensionError("need 1 <= m <= n, got (%d, %d)" % (m, n))
        self.m = m
        self.n = n
        self.dim = m + n
        rows = []
        for i in range(m + n):
            row = [ZERO] * (m + n)
            if i < m:
                row[n + i] = ONE
            elif i < n:
                row[i] = -ONE
            else:
                row[i - n] = ONE
            rows.append(row)
        self.h = RMatrix.from_rows(rows)

    def __eq__(self, other):
        return (
            isinstance(other, HermSpace)
            and self.m == other.m
            and self.n == other.n
        )

    def __hash__(self):
        return hash((HermSpace, self.m, self.n))

    def __repr__(self):
        return "HermSpace(%d, %d)" % (self.m, self.n)

    def pairing(self, u: RMatrix, v: RMatrix) -> GaussianRational:
        """h(u, v) for column vectors u, v."""
        return (u.conj_t() @ self.h @ v)[0, 0]

    def gram(self, a: RMatrix, b: RMatrix) -> RMatrix:
        """Matrix of pairings between the columns of a and of b."""
        return a.conj_t() @ self.h @ b

    def basis_vector(self, i: int) -> RMatrix:
        """Standard basis column e_i (0-indexed)."""
        col = [[ZERO] for _ in range(self.dim)]
        col[i][0] = ONE
        return RMatrix.from_rows(col)


class Subspace:
    """A linear subspace of C^(m+n), held in canonical column-echelon form."""

    __slots__ = ("space", "basis", "dim")

    def __init__(self, space: HermSpace, generators: RMatrix):
        if generators.rows != space.dim:
            raise DimensionError(
                "generators have %d rows, ambient dimension is %d"
                % (generators.rows, space.dim)
            )
        self.space = space
        self.basis = generators.col_canonical()
        self.dim = self.basis.cols

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.space == other.space and self.basis == other.basis

    def __hash__(self):
        return hash((self.space, self.basis))

    def __repr__(self):
        return "Subspace(dim=%d of C^%d)" % (self.dim, self.space.dim)

    def contains_vector(self, v: RMatrix) -> bool:
        if v.is_zero():
            return True
        return self.basis.hstack(v).rank() == self.dim

    def leq(self, other: "Subspace") -> bool:
        """True iff self is contained in other."""
        if self.dim > other.dim:
            return False
        return other.basis.hstack(self.basis).rank() == other.dim

    def restrict_form(self) -> RMatrix:
        """Gram matrix of the ambient form on the canonical basis."""
        return self.space.gram(self.basis, self.basis)

    def signature(self):
        """Exact signature (plus, minus, zero) of the restricted form."""
        return hermitian_signature(self.restrict_form())

    def is_isotropic(self) -> bool:
        return self.restrict_form().is_zero()

    def orth_complement(self) -> "Subspace":
        """h-orthogonal complement; dimensions add up to m+n."""
        ker = (self.basis.conj_t() @ self.space.h).kernel()
        return Subspace(self.space, ker)

    def radical(self) -> "Subspace":
        """Radical of the restricted form: self intersected with self-perp."""
        return intersect(self, self.orth_complement())


def span(*subs: Subspace) -> Subspace:
    """Span of the given subspaces."""
    space = subs[0].space
    acc = subs[0].basis
    for s in subs[1:]:
        if s.space != space:
            raise GeometryError("cannot span subspaces of different spaces")
        acc = acc.hstack(s.basis)
    return Subspace(space, acc)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection of two subspaces."""
    if a.space != b.space:
        raise GeometryError("cannot intersect subspaces of different spaces")
    if a.dim == 0 or b.dim == 0:
        return Subspace(a.space, RMatrix.zeros(a.space.dim, 0))
    ker = a.basis.hstack(-b.basis).kernel()
    coeff = ker.block(0, a.dim, 0, ker.cols)
    return Subspace(a.space, a.basis @ coeff)

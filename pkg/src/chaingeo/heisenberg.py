"""Horospherical coordinates centered at the point at infinity.

Points transverse to v_inf = <e_1 .. e_m> form a generalized Heisenberg
group: pairs (X, Y) with X a complex (n-m) x m matrix and Y an
anti-Hermitian m x m matrix, embedded as the column span of

    [Y + X*X/2]
    [    X    ]
    [   Id_m  ]

The stabilizer of v_inf factors as Q = L x| N where N is the unipotent
radical acting on the chart by

    (E, F) . (X, Y) = (E + X, F + Y + (E*X - X*E)/2)

and L consists of block-diagonal h-unitaries diag(A, (a~/a) B, A^-*) with
A invertible, B unitary and a = det A, acting by

    (A, B) . (X, Y) = ((a~/a) B X A*, A Y A*).

The quotient by the center (the F translations) is the first factor X; the
quotient map is `project`, and the 2m-dimensional subspaces attached to its
fibers are produced by `w_to_subspace`.
"""

from __future__ import annotations

from .exactnum import RMatrix, SingularMatrixError
from .hermitian import GeometryError, HermSpace, Subspace
from .shilov import ShilovPoint, standard_vinf


class ChartError(GeometryError):
    pass


class NotInChartError(ChartError):
    """Raised for points not transverse to v_inf."""


class HeisPoint:
    """Chart coordinates (X, Y) of a point transverse to v_inf."""

    __slots__ = ("space", "x", "y")

    def __init__(self, space: HermSpace, x: RMatrix, y: RMatrix):
        m, n = space.m, space.n
        if x.rows != n - m or x.cols != m:
            raise ChartError("X must be (n-m) x m")
        if y.rows != m or y.cols != m or not y.is_anti_hermitian():
            raise ChartError("Y must be anti-Hermitian m x m")
        self.space = space
        self.x = x
        self.y = y

    def __eq__(self, other):
        if not isinstance(other, HeisPoint):
            return NotImplemented
        return self.space == other.space and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.space, self.x, self.y))

    def __repr__(self):
        return "HeisPoint(X=%r, Y=%r)" % (self.x, self.y)


class WPoint:
    """A point of the quotient of the chart by the central translations."""

    __slots__ = ("space", "a")

    def __init__(self, space: HermSpace, a: RMatrix):
        m, n = space.m, space.n
        if a.rows != n - m or a.cols != m:
            raise ChartError("A must be (n-m) x m")
        self.space = space
        self.a = a

    def __eq__(self, other):
        if not isinstance(other, WPoint):
            return NotImplemented
        return self.space == other.space and self.a == other.a

    def __hash__(self):
        return hash((self.space, self.a))

    def __repr__(self):
        return "WPoint(%r)" % (self.a,)


def from_chart(p: HeisPoint) -> ShilovPoint:
    """The boundary point with chart coordinates p."""
    m = p.space.m
    top = p.y + (p.x.conj_t() @ p.x).scale("1/2")
    basis = top.vstack(p.x).vstack(RMatrix.identity(m))
    return ShilovPoint.from_basis(p.space, basis)


def to_chart(z: ShilovPoint) -> HeisPoint:
    """Chart coordinates of a point transverse to v_inf."""
    space = z.space
    m, n = space.m, space.n
    b = z.basis
    bot = b.block(n, n + m, 0, m)
    try:
        binv = bot.inverse()
    except SingularMatrixError:
        raise NotInChartError("point is not transverse to v_inf")
    nb = b @ binv
    x = nb.block(m, n, 0, m)
    y = nb.block(0, m, 0, m) - (x.conj_t() @ x).scale("1/2")
    return HeisPoint(space, x, y)


def project(p: HeisPoint) -> WPoint:
    """Quotient map to the first chart factor."""
    return WPoint(p.space, p.x)


class NElement:
    """Element (E, F) of the unipotent radical N."""

    __slots__ = ("space", "e", "f")

    def __init__(self, space: HermSpace, e: RMatrix, f: RMatrix):
        m, n = space.m, space.n
        if e.rows != n - m or e.cols != m:
            raise ChartError("E must be (n-m) x m")
        if f.rows != m or f.cols != m or not f.is_anti_hermitian():
            raise ChartError("F must be anti-Hermitian m x m")
        self.space = space
        self.e = e
        self.f = f

    def is_central(self) -> bool:
        return self.e.is_zero()

    def matrix(self) -> RMatrix:
        """The h-unitary upper triangular matrix of this element."""
        m, n = self.space.m, self.space.n
        l = n - m
        estar = self.e.conj_t()
        top = (
            RMatrix.identity(m)
            .hstack(estar)
            .hstack(self.f + (estar @ self.e).scale("1/2"))
        )
        mid = RMatrix.zeros(l, m).hstack(RMatrix.identity(l)).hstack(self.e)
        bot = RMatrix.zeros(m, m + l).hstack(RMatrix.identity(m))
        return top.vstack(mid).vstack(bot)


class LElement:
    """Element (A, B) of the reductive factor L."""

    __slots__ = ("space", "a", "b")

    def __init__(self, space: HermSpace, a: RMatrix, b: RMatrix):
        m, n = space.m, space.n
        l = n - m
        if a.rows != m or a.cols != m:
            raise ChartError("A must be m x m")
        if b.rows != l or b.cols != l:
            raise ChartError("B must be (n-m) x (n-m)")
        if not (b.conj_t() @ b - RMatrix.identity(l)).is_zero():
            raise ChartError("B must be exactly unitary")
        self.space = space
        self.a = a
        self.b = b
        self._phase()  # fails early when A is singular

    def _phase(self):
        det = self.a.det()
        if det.is_zero():
            raise ChartError("A must be invertible")
        return det.conj() / det

    def matrix(self) -> RMatrix:
        """Block diagonal h-unitary diag(A, (a~/a) B, A^-*)."""
        m, n = self.space.m, self.space.n
        l = n - m
        mid = self.b.scale(self._phase())
        ainvstar = self.a.inverse().conj_t()
        top = self.a.hstack(RMatrix.zeros(m, l + m))
        midrow = RMatrix.zeros(l, m).hstack(mid).hstack(RMatrix.zeros(l, m))
        bot = RMatrix.zeros(m, m + l).hstack(ainvstar)
        return top.vstack(midrow).vstack(bot)


class QElement:
    """Element of the stabilizer Q of v_inf, kept in N.L factored form."""

    __slots__ = ("nel", "lel")

    def __init__(self, nel: NElement, lel: LElement):
        if nel.space != lel.space:
            raise ChartError("factors live in different spaces")
        self.nel = nel
        self.lel = lel

    @property
    def space(self):
        return self.nel.space

    def matrix(self) -> RMatrix:
        return self.nel.matrix() @ self.lel.matrix()

    @staticmethod
    def from_matrix(space: HermSpace, g: RMatrix) -> "QElement":
        """Factor an h-unitary block upper triangular matrix as n.l."""
        m, n = space.m, space.n
        l = n - m
        if g.rows != m + n or g.cols != m + n:
            raise ChartError("bad matrix size")
        if not (g.conj_t() @ space.h @ g - space.h).is_zero():
            raise ChartError("matrix is not h-unitary")
        for (r0, r1, c0, c1) in (
            (m, m + l, 0, m),
            (m + l, m + n, 0, m),
            (m + l, m + n, m, m + l),
        ):
            if not g.block(r0, r1, c0, c1).is_zero():
                raise ChartError("matrix does not stabilize v_inf")
        a = g.block(0, m, 0, m)
        mid = g.block(m, m + l, m, m + l)
        det = a.det()
        b = mid.scale(det / det.conj())
        lel = LElement(space, a, b)
        nmat = g @ lel.matrix().inverse()
        e = nmat.block(m, m + l, m + l, m + n)
        f = nmat.block(0, m, m + l, m + n) - (e.conj_t() @ e).scale("1/2")
        nel = NElement(space, e, f)
        q = QElement(nel, lel)
        if q.matrix() != g:
            raise ChartError("factorization failed")
        return q


def act_n(nel: NElement, p: HeisPoint) -> HeisPoint:
    """Chart action of the unipotent radical."""
    estar_x = nel.e.conj_t() @ p.x
    comm = (estar_x - estar_x.conj_t()).scale("1/2")
    return HeisPoint(p.space, nel.e + p.x, nel.f + p.y + comm)


def act_l(lel: LElement, p: HeisPoint) -> HeisPoint:
    """Chart action of the reductive factor."""
    astar = lel.a.conj_t()
    newx = (lel.b @ p.x @ astar).scale(lel._phase())
    newy = lel.a @ p.y @ astar
    return HeisPoint(p.space, newx, newy)


def act_q(q: QElement, p: HeisPoint) -> HeisPoint:
    return act_n(q.nel, act_l(q.lel, p))


def w_to_subspace(w: WPoint) -> Subspace:
    """The 2m-subspace attached to a fiber of the projection.

    It is the h-orthogonal complement of the columns of [A*; Id; 0]; it
    contains v_inf and has signature (m, m), and the chain it defines is
    the closure of the fiber over w.
    """
    space = w.space
    m, n = space.m, space.n
    l = n - m
    gens = w.a.conj_t().vstack(RMatrix.identity(l)).vstack(RMatrix.zeros(m, l))
    sub = Subspace(space, gens).orth_complement()
    return sub


def w_from_subspace(space: HermSpace, v: Subspace) -> WPoint:
    """Inverse of w_to_subspace on its image.

    Accepts a 2m-dimensional subspace of signature (m, m) containing v_inf
    and recovers the chart coordinate A of its fiber.
    """
    m, n = space.m, space.n
    l = n - m
    if v.dim != 2 * m:
        raise ChartError("expected a 2m-dimensional subspace")
    if not standard_vinf(space).subspace.leq(v):
        raise ChartError("subspace does not contain v_inf")
    perp = v.orth_complement()
    b = perp.basis
    if not b.block(n, n + m, 0, b.cols).is_zero():
        raise ChartError("orthogonal complement sticks out of v_inf-perp")
    p = b.block(0, m, 0, l)
    q = b.block(m, n, 0, l)
    try:
        qinv = q.inverse()
    except SingularMatrixError:
        raise ChartError("subspace is not a fiber closure")
    return WPoint(space, (p @ qinv).conj_t())

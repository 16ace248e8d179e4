"""Chain geometry: vertical chains, circles, stabilizers and beta data.

A chain T determines the integer i(T) = dim(v_inf ^ V_T), its index at
infinity.  Chains of index m are vertical (fibers of the chart projection);
chains of index k < m that meet the chart project to (m, k)-circles in the
first chart factor.  This module provides:

  * the standard chain of each admissible index and its chart
    parametrization,
  * projection of chains to circles, lifting of circles through fiber
    points, and exact circle equality,
  * the space M_T of central translations stabilizing a chain,
  * the beta invariants of a point in general position with respect to the
    standard coplanar configuration (regime n < 2m), the associated error
    and information subspaces of u(m), and an exact constructive inverse
    of beta,
  * generic intersection bookkeeping used to recover a point from finitely
    many chains through it.

Anything called "exact" here is decided in Gaussian-rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exactnum import (
    GaussianRational,
    I,
    ONE,
    RMatrix,
    ZERO,
    solve_affine,
)
from .hermitian import GeometryError, HermSpace, Subspace, intersect, span
from .shilov import (
    MChain,
    NotTransverseError,
    ShilovPoint,
    apply_matrix_chain,
    member,
    standard_v0,
    standard_vd,
    standard_vinf,
    transverse,
)
from .heisenberg import (
    HeisPoint,
    NElement,
    NotInChartError,
    WPoint,
    from_chart,
    to_chart,
    w_from_subspace,
    w_to_subspace,
)


class InvalidRegimeError(GeometryError):
    """Raised when a construction is requested outside its (m, n, k) range."""


class VerticalChainError(GeometryError):
    pass


class NotOnCircleError(GeometryError):
    pass


class NoCommonPointError(GeometryError):
    pass


class NoRationalChartPointError(GeometryError):
    """A chain given without a seed point and with no small rational chart
    point within the search budget."""


class PreimageNotFoundError(GeometryError):
    pass


# ---------------------------------------------------------------------------
# real coordinates on u(m)

def antiherm_coords(y: RMatrix):
    """Real coordinates of an anti-Hermitian matrix.

    Order: the m diagonal imaginary parts, then (Re, Im) of each strictly
    upper entry by rows.  Entries are returned as real Gaussian rationals.
    """
    m = y.rows
    out = []
    for p in range(m):
        out.append(GaussianRational(y[p, p].im))
    for p in range(m):
        for q in range(p + 1, m):
            out.append(GaussianRational(y[p, q].re))
            out.append(GaussianRational(y[p, q].im))
    return out


def antiherm_from_coords(m: int, coords) -> RMatrix:
    """Inverse of antiherm_coords."""
    rows = [[ZERO] * m for _ in range(m)]
    t = 0
    for p in range(m):
        rows[p][p] = GaussianRational(0, coords[p].re)
        t += 1
    for p in range(m):
        for q in range(p + 1, m):
            re = coords[t].re
            im = coords[t + 1].re
            t += 2
            rows[p][q] = GaussianRational(re, im)
            rows[q][p] = GaussianRational(-re, im)
    return RMatrix.from_rows(rows)


@lru_cache(maxsize=None)
def um_basis(m: int):
    """The standard real basis of u(m), in coordinate order."""
    out = []
    for t in range(m * m):
        coords = [ZERO] * (m * m)
        coords[t] = ONE
        out.append(antiherm_from_coords(m, coords))
    return tuple(out)


@lru_cache(maxsize=None)
def ek_basis(m: int, k: int):
    """Real basis of E_k: anti-Hermitian matrices supported on the leading
    k x k block."""
    out = []
    for p in range(k):
        rows = [[ZERO] * m for _ in range(m)]
        rows[p][p] = I
        out.append(RMatrix.from_rows(rows))
    for p in range(k):
        for q in range(p + 1, k):
            rows = [[ZERO] * m for _ in range(m)]
            rows[p][q] = ONE
            rows[q][p] = -ONE
            out.append(RMatrix.from_rows(rows))
            rows = [[ZERO] * m for _ in range(m)]
            rows[p][q] = I
            rows[q][p] = I
            out.append(RMatrix.from_rows(rows))
    return tuple(out)


class USubspace:
    """A real linear subspace of u(m), canonicalized in coordinates."""

    __slots__ = ("m", "coords", "dim")

    def __init__(self, m: int, coord_rows: RMatrix):
        if coord_rows.cols != m * m:
            raise GeometryError("coordinate rows must have m^2 columns")
        red, pivots = coord_rows.rref()
        keep = tuple(red.entries()[i] for i in range(len(pivots)))
        self.m = m
        self.coords = RMatrix._raw(len(keep), m * m, keep)
        self.dim = len(keep)

    @staticmethod
    def from_generators(m: int, mats) -> "USubspace":
        mats = list(mats)
        rows = tuple(tuple(antiherm_coords(x)) for x in mats)
        return USubspace(m, RMatrix._raw(len(rows), m * m, rows))

    def basis_matrices(self):
        return [
            antiherm_from_coords(self.m, list(self.coords.row(i)))
            for i in range(self.dim)
        ]

    def contains(self, y: RMatrix) -> bool:
        row = RMatrix._raw(1, self.m * self.m, (tuple(antiherm_coords(y)),))
        return self.coords.vstack(row).rank() == self.dim

    def add(self, other: "USubspace") -> "USubspace":
        if self.m != other.m:
            raise GeometryError("dimension mismatch")
        return USubspace(self.m, self.coords.vstack(other.coords))

    def __eq__(self, other):
        if not isinstance(other, USubspace):
            return NotImplemented
        return self.m == other.m and self.coords == other.coords

    def __hash__(self):
        return hash((self.m, self.coords))

    def __repr__(self):
        return "USubspace(dim=%d of u(%d))" % (self.dim, self.m)


def um_inner(a: RMatrix, b: RMatrix) -> GaussianRational:
    """The real inner product tr(A* B) on u(m)."""
    return (a.conj_t() @ b).trace()


def um_orthogonal(u1: USubspace, u2: USubspace) -> bool:
    """True iff the two subspaces of u(m) are tr(A* B)-orthogonal."""
    for a in u1.basis_matrices():
        for b in u2.basis_matrices():
            if not um_inner(a, b).is_zero():
                return False
    return True


def solve_antiherm(m: int, constraints):
    """Solve bilinear conditions L @ Y @ R = D for anti-Hermitian Y.

    constraints is an iterable of (L, R, D) triples.  Returns None when the
    real linear system is inconsistent, else (Y0, kernel) where kernel is a
    list of anti-Hermitian matrices spanning the solution directions.
    """
    basis = um_basis(m)
    arows = []
    brows = []
    for (lmat, rmat, dmat) in constraints:
        mats = [lmat @ b @ rmat for b in basis]
        for i in range(dmat.rows):
            for j in range(dmat.cols):
                arows.append(
                    tuple(GaussianRational(x[i, j].re) for x in mats)
                )
                brows.append((GaussianRational(dmat[i, j].re),))
                arows.append(
                    tuple(GaussianRational(x[i, j].im) for x in mats)
                )
                brows.append((GaussianRational(dmat[i, j].im),))
    a = RMatrix._raw(len(arows), m * m, tuple(arows))
    b = RMatrix._raw(len(brows), 1, tuple(brows))
    sol = solve_affine(a, b)
    if sol is None:
        return None
    x0, ker = sol
    y0 = antiherm_from_coords(m, [x0[t, 0] for t in range(m * m)])
    kmats = [
        antiherm_from_coords(m, [ker[t, j] for t in range(m * m)])
        for j in range(ker.cols)
    ]
    return y0, kmats


# ---------------------------------------------------------------------------
# subspaces of C^m (values of the beta invariants)

class CmSubspace:
    """A subspace of C^m with the standard inner product, canonicalized."""

    __slots__ = ("m", "basis", "dim")

    def __init__(self, m: int, generators: RMatrix):
        if generators.rows != m:
            raise GeometryError("generators must have m rows")
        self.m = m
        self.basis = generators.col_canonical()
        self.dim = self.basis.cols

    def perp(self) -> "CmSubspace":
        return CmSubspace(self.m, self.basis.conj_t().kernel())

    def add(self, other: "CmSubspace") -> "CmSubspace":
        return CmSubspace(self.m, self.basis.hstack(other.basis))

    def contains(self, other: "CmSubspace") -> bool:
        return self.basis.hstack(other.basis).rank() == self.dim

    def __eq__(self, other):
        if not isinstance(other, CmSubspace):
            return NotImplemented
        return self.m == other.m and self.basis == other.basis

    def __hash__(self):
        return hash((self.m, self.basis))

    def __repr__(self):
        return "CmSubspace(dim=%d of C^%d)" % (self.dim, self.m)


def s_map(z1: CmSubspace, z2: CmSubspace) -> USubspace:
    """Real span of { z1 z2* - z2 z1* } over the two subspaces.

    Spanning over complex combinations needs both z and iz generators, so
    each basis pair (u, v) contributes u v* - v u* and i(u v* + v u*).
    """
    if z1.m != z2.m:
        raise GeometryError("dimension mismatch")
    gens = []
    for p in range(z1.dim):
        u = z1.basis.col(p)
        for q in range(z2.dim):
            v = z2.basis.col(q)
            uv = u @ v.conj_t()
            vu = v @ u.conj_t()
            gens.append(uv - vu)
            gens.append((uv + vu).scale(I))
    return USubspace.from_generators(z1.m, gens)


def _completion(basis: RMatrix) -> RMatrix:
    """Extend independent columns to an invertible m x m matrix with
    standard basis vectors."""
    m = basis.rows
    acc = basis
    for i in range(m):
        if acc.cols == m:
            break
        col = [[ZERO] for _ in range(m)]
        col[i][0] = ONE
        cand = acc.hstack(RMatrix.from_rows(col))
        if cand.rank() == cand.cols:
            acc = cand
    if acc.cols != m or acc.rank() != m:
        raise GeometryError("completion failed")
    return acc


def um_conjugated_ek(v: CmSubspace) -> USubspace:
    """The subspace a^-1 E_k a^-* of u(m) for any a taking v to the span of
    the first k coordinates.  Independent of the choice of a."""
    p = _completion(v.basis)
    pstar = p.conj_t()
    return USubspace.from_generators(
        v.m, [p @ b @ pstar for b in ek_basis(v.m, v.dim)]
    )


# ---------------------------------------------------------------------------
# standard chains and their parametrization

def valid_k_range(space: HermSpace):
    """Admissible indices of chains in this space."""
    return range(max(0, 2 * space.m - space.n), space.m + 1)


def _check_k(space: HermSpace, k: int):
    if k not in valid_k_range(space):
        raise InvalidRegimeError(
            "no chain of index %d exists for (m, n) = (%d, %d)"
            % (k, space.m, space.n)
        )


def intersection_index(x: ShilovPoint, t: MChain) -> int:
    """dim(x ^ V_T), the complete invariant of the pair (x, T)."""
    return intersect(x.subspace, t.subspace).dim


def standard_chain(space: HermSpace, k: int) -> MChain:
    """The standard chain of index k at v_inf.

    Spanned by e_1 .. e_k, the mixed vectors e_j + e_(m+j-k) + e_(n+j) for
    k < j <= m, and the standard point v_0.  Requires 2m - n <= k <= m.
    """
    _check_k(space, k)
    m, n = space.m, space.n
    cols = []
    dim = space.dim
    for i in range(k):
        col = [ZERO] * dim
        col[i] = ONE
        cols.append(col)
    for j in range(k, m):
        col = [ZERO] * dim
        col[j] = ONE
        col[m + j - k] = ONE
        col[n + j] = ONE
        cols.append(col)
    for i in range(m):
        col = [ZERO] * dim
        col[n + i] = ONE
        cols.append(col)
    basis = RMatrix.from_rows(list(map(list, zip(*cols))))
    return MChain(space, Subspace(space, basis), seed=standard_v0(space))


def parametrize_tk(space: HermSpace, k: int, e: RMatrix, xu: RMatrix,
                   c: RMatrix) -> ShilovPoint:
    """Chart points of the standard chain of index k.

    e is a free (m-k) x k matrix, xu is a unitary (m-k) x (m-k) matrix and
    c is an anti-Hermitian k x k matrix.  The resulting point is transverse
    to v_inf, lies on the standard chain, and its chart projection is the
    block matrix [[e, Id + xu], [0, 0]].
    """
    _check_k(space, k)
    m, n = space.m, space.n
    r = m - k
    if e.rows != r or e.cols != k:
        raise GeometryError("e must be (m-k) x k")
    if xu.rows != r or xu.cols != r:
        raise GeometryError("xu must be (m-k) x (m-k)")
    if not (xu.conj_t() @ xu - RMatrix.identity(r)).is_zero():
        raise GeometryError("xu must be exactly unitary")
    if c.rows != k or c.cols != k or not c.is_anti_hermitian():
        raise GeometryError("c must be anti-Hermitian k x k")
    estar = e.conj_t()
    z11 = (estar @ e).scale("1/2") + c
    z22 = RMatrix.identity(r) + xu
    z12 = estar @ xu
    top = z11.hstack(z12).vstack(e.hstack(z22))
    mid = e.hstack(z22).vstack(RMatrix.zeros(n - 2 * m + k, m))
    basis = top.vstack(mid).vstack(RMatrix.identity(m))
    return ShilovPoint.from_basis(space, basis)


def vertical_chain(space: HermSpace, w: WPoint) -> MChain:
    """The vertical chain whose chart trace is the fiber over w."""
    sub = w_to_subspace(w)
    seed = from_chart(HeisPoint(space, w.a, RMatrix.zeros(space.m, space.m)))
    return MChain(space, sub, seed=seed)


# ---------------------------------------------------------------------------
# chart points of a chain, fibers, circles

def _dual_point_on(t: MChain, x: ShilovPoint) -> ShilovPoint:
    """A point of the chain transverse to the given one.

    Standard hyperbolic completion: pick any complement of x in V_T, dualize
    against x, then subtract half the Gram matrix to make it isotropic.  All
    steps are rational.
    """
    space = t.space
    m = space.m
    vb = t.subspace.basis
    xb = x.basis
    coords = vb.solve(xb)
    comp_cols = []
    acc = coords
    for i in range(2 * m):
        if acc.cols == 2 * m:
            break
        col = [[ZERO] for _ in range(2 * m)]
        col[i][0] = ONE
        cand = acc.hstack(RMatrix.from_rows(col))
        if cand.rank() == cand.cols:
            acc = cand
            comp_cols.append(i)
    comp = vb @ acc.block(0, 2 * m, m, 2 * m)
    g = space.gram(xb, comp)
    ctilde = comp @ g.inverse()
    corr = space.gram(ctilde, ctilde).scale("1/2")
    dual = ctilde - xb @ corr
    return ShilovPoint.from_basis(space, dual)


def _graph_points(t: MChain, x0: ShilovPoint, x1: ShilovPoint):
    """Parametrization of points of the chain transverse to x0.

    Returns a function sending an anti-Hermitian m x m matrix W to the point
    spanned by B1' + B0 W, where (B0, B1') is the hyperbolic normalization
    of the two given transverse chain points.
    """
    space = t.space
    b0 = x0.basis
    p = space.gram(b0, x1.basis)
    b1 = x1.basis @ p.inverse()

    def at(w: RMatrix) -> ShilovPoint:
        return ShilovPoint.from_basis(space, b1 + b0 @ w)

    return at


def _isotropic_line_search(space: HermSpace, basis: RMatrix):
    """Bounded search for an isotropic vector in the span of the columns."""
    g = space.gram(basis, basis)
    r = basis.cols
    for i in range(r):
        if g[i, i].is_zero():
            return basis.col(i)
    cands = [
        GaussianRational(a, b)
        for a in (0, 1, -1, 2, -2, "1/2", "-1/2", 3, -3)
        for b in (0, 1, -1, 2, -2)
        if not (a == 0 and b == 0)
    ]
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            gii, gjj, gij = g[i, i], g[j, j], g[i, j]
            for tv in cands:
                val = gii + tv.conj() * gij.conj() + tv * gij + tv.abs2() * gjj
                if val.is_zero():
                    return basis.col(i) + basis.col(j).scale(tv)
    return None


def _search_chart_point(t: MChain) -> ShilovPoint:
    """Find a rational point of the chain transverse to v_inf, if a small
    one exists.  Used for chains that come without a seed point."""
    space = t.space
    m = space.m
    v = t.subspace
    z = intersect(standard_vinf(space).subspace, v)
    k = z.dim
    if k == m:
        raise VerticalChainError("vertical chains have no chart trace")
    parts = []
    if k > 0:
        zperp_in_v = intersect(
            z.orth_complement(), v
        )
        comp = _subspace_complement(v, zperp_in_v)
        g = space.gram(z.basis, comp)
        ctilde = comp @ g.inverse()
        corr = space.gram(ctilde, ctilde).scale("1/2")
        zdual = ctilde - z.basis @ corr
        parts.append(zdual)
        hyp = Subspace(space, z.basis.hstack(zdual))
        v1 = intersect(hyp.orth_complement(), v)
    else:
        v1 = v
    work = v1.basis
    for _ in range(m - k):
        vec = _isotropic_line_search(space, work)
        if vec is None:
            raise NoRationalChartPointError(
                "no small rational chart point found; construct the chain "
                "from a known point to avoid the search"
            )
        parts.append(vec)
        sub = Subspace(space, work)
        line = Subspace(space, vec)
        rest = intersect(line.orth_complement(), sub)
        dual_dirs = _subspace_complement(sub, rest)
        g = space.gram(vec, dual_dirs)
        ctilde = dual_dirs @ g.inverse()
        corr = space.gram(ctilde, ctilde).scale("1/2")
        dualvec = ctilde - vec @ corr
        pair = Subspace(space, vec.hstack(dualvec))
        work = intersect(pair.orth_complement(), sub).basis
    basis = parts[0]
    for p in parts[1:]:
        basis = basis.hstack(p)
    return ShilovPoint.from_basis(space, basis)


def _subspace_complement(big: Subspace, small: Subspace) -> RMatrix:
    """Columns of big extending a basis of small to one of big."""
    acc = small.basis
    out_cols = []
    for j in range(big.basis.cols):
        if acc.cols == big.dim:
            break
        cand = acc.hstack(big.basis.col(j))
        if cand.rank() == cand.cols:
            acc = cand
            out_cols.append(j)
    if acc.cols != big.dim:
        raise GeometryError("complement extension failed")
    out = None
    for j in out_cols:
        c = big.basis.col(j)
        out = c if out is None else out.hstack(c)
    if out is None:
        return RMatrix.zeros(big.basis.rows, 0)
    return out


def chart_point_of(t: MChain, rng=None) -> HeisPoint:
    """Chart coordinates of some rational point of the chain.

    Prefers the seed point; when the seed is not transverse to v_inf, walks
    the graph parametrization around the seed until a transverse point
    appears; without a seed, falls back to a bounded algebraic search.
    """
    space = t.space
    m = space.m
    vinf = standard_vinf(space)
    if intersect(vinf.subspace, t.subspace).dim == m:
        raise VerticalChainError("vertical chains have no chart trace")
    if t.seed is None:
        return to_chart(_search_chart_point(t))
    if transverse(t.seed, vinf):
        return to_chart(t.seed)
    x1 = _dual_point_on(t, t.seed)
    if transverse(x1, vinf):
        return to_chart(x1)
    at = _graph_points(t, t.seed, x1)
    scalars = [ONE, -ONE, I, -I, GaussianRational(2), GaussianRational(0, 2),
               GaussianRational("1/2"), GaussianRational(1, 1)]
    for s in scalars:
        for b in um_basis(m):
            cand = at(b.scale(s))
            if transverse(cand, vinf):
                return to_chart(cand)
    for t_idx in range(256):
        w = _pseudo_antiherm(m, t_idx)
        cand = at(w)
        if transverse(cand, vinf):
            return to_chart(cand)
    raise NoRationalChartPointError("graph search exhausted")


def _pseudo_antiherm(m: int, salt: int) -> RMatrix:
    """Small deterministic anti-Hermitian matrices for search loops."""
    vals = []
    state = (salt * 0x9E3779B97F4A7C15 + 0xC2B2AE3D27D4EB4F) % (1 << 64)
    for _ in range(m * m):
        state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
        vals.append(GaussianRational(((state >> 33) % 7) - 3))
    return antiherm_from_coords(m, vals)


def fiber_solutions(t: MChain, x0: RMatrix):
    """All anti-Hermitian Y with the chart point (x0, Y) on the chain.

    Returns (Y0, kernel directions) or None when the fiber over x0 misses
    the chain.
    """
    space = t.space
    m, n = space.m, space.n
    comp = t.subspace.basis.conj_t().kernel()
    cstar = comp.conj_t()
    c1 = cstar.block(0, cstar.rows, 0, m)
    c2 = cstar.block(0, cstar.rows, m, n)
    c3 = cstar.block(0, cstar.rows, n, n + m)
    d = -(
        c1 @ (x0.conj_t() @ x0).scale("1/2")
        + c2 @ x0
        + c3
    )
    return solve_antiherm(m, [(c1, RMatrix.identity(m), d)])


class Circle:
    """An (m, k)-circle: the chart projection of a chain of index k < m.

    Represented by k, a witness chain whose marked fiber point has been
    normalized to have vanishing central coordinate, and that marked chart
    point.  Two representations describe the same circle iff the witness
    chains differ by a central translation; use circle_equal.
    """

    __slots__ = ("k", "witness", "marked")

    def __init__(self, k: int, witness: MChain, marked: HeisPoint):
        self.k = k
        self.witness = witness
        self.marked = marked

    def __repr__(self):
        return "Circle(k=%d)" % self.k


def project_chain(t: MChain) -> Circle:
    """The circle traced by the chart points of a non-vertical chain."""
    space = t.space
    m = space.m
    k = intersection_index(standard_vinf(space), t)
    if k == m:
        raise VerticalChainError(
            "chain is vertical; its projection is the single point "
            "recovered by project_vertical"
        )
    hp = chart_point_of(t)
    shift = NElement(space, RMatrix.zeros(space.n - m, m), -hp.y)
    witness = apply_matrix_chain(shift.matrix(), t)
    marked = HeisPoint(space, hp.x, RMatrix.zeros(m, m))
    witness = MChain(space, witness.subspace, seed=from_chart(marked))
    return Circle(k, witness, marked)


def project_vertical(t: MChain) -> WPoint:
    """The single chart-factor point under a vertical chain."""
    space = t.space
    if intersection_index(standard_vinf(space), t) != space.m:
        raise GeometryError("chain is not vertical")
    return w_from_subspace(space, t.subspace)


def central_match(t1: MChain, t2: MChain):
    """An anti-Hermitian F with (0, F) . T1 = T2, or None.

    The existence of F is exactly the statement that the two chains project
    to the same circle.
    """
    space = t1.space
    m, n = space.m, space.n
    b1 = t1.subspace.basis
    bot1 = b1.block(n, n + m, 0, b1.cols)
    comp = t2.subspace.basis.conj_t().kernel()
    cstar = comp.conj_t()
    c1 = cstar.block(0, cstar.rows, 0, m)
    d = -(cstar @ b1)
    sol = solve_antiherm(m, [(c1, bot1, d)])
    if sol is None:
        return None
    f = sol[0]
    shifted = apply_matrix_chain(
        NElement(space, RMatrix.zeros(n - m, m), f).matrix(), t1
    )
    if shifted.subspace != t2.subspace:
        return None
    return f


def circle_equal(c1: Circle, c2: Circle) -> bool:
    """Exact equality of circles (central-translation match of witnesses)."""
    if c1.k != c2.k:
        return False
    return central_match(c1.witness, c2.witness) is not None


def lift_circle(c: Circle, t: ShilovPoint) -> MChain:
    """The unique chain projecting to the circle through a given fiber point.

    t must be transverse to v_inf and its chart projection must lie on the
    circle; otherwise NotOnCircleError is raised.
    """
    space = t.space
    hp = to_chart(t)
    sol = fiber_solutions(c.witness, hp.x)
    if sol is None:
        raise NotOnCircleError("point does not project into the circle")
    y0 = sol[0]
    f = hp.y - y0
    lifted = apply_matrix_chain(
        NElement(space, RMatrix.zeros(space.n - space.m, space.m), f).matrix(),
        c.witness,
    )
    out = MChain(space, lifted.subspace, seed=t)
    if not member(t, out):
        raise GeometryError("lift failed to contain the fiber point")
    return out


def chain_stabilizer_M(t: MChain) -> USubspace:
    """The central translations F with (0, F) . T = T.

    Computed as a^-1 E_k a^-* from any a carrying v_inf ^ V_T to the span
    of the first k coordinates; the result does not depend on the choice.
    """
    space = t.space
    m = space.m
    z = intersect(standard_vinf(space).subspace, t.subspace)
    k = z.dim
    zb = z.basis.block(0, m, 0, k)
    if not z.basis.block(m, space.dim, 0, k).is_zero():
        raise GeometryError("intersection with v_inf is malformed")
    p = _completion(zb)
    pstar = p.conj_t()
    return USubspace.from_generators(
        m, [p @ b @ pstar for b in ek_basis(m, k)]
    )


# ---------------------------------------------------------------------------
# beta invariants (regime n < 2m)

def _beta_regime(space: HermSpace) -> int:
    m, n = space.m, space.n
    k = 2 * m - n
    if not (m < n < 2 * m):
        raise InvalidRegimeError(
            "beta data needs m < n < 2m, got (%d, %d)" % (m, n)
        )
    return k


def _resolve_signs(space: HermSpace, signs):
    if signs is None:
        return (1,) * space.m
    signs = tuple(signs)
    if len(signs) != space.m or any(s not in (1, -1) for s in signs):
        raise GeometryError("signs must be m entries of +1/-1")
    return signs


def d_matrix(space: HermSpace, signs=None) -> RMatrix:
    """The diagonal matrix with entries sign * i."""
    signs = _resolve_signs(space, signs)
    return RMatrix.diag([I if s > 0 else -I for s in signs])


def in_beta_domain(w: ShilovPoint, signs=None) -> bool:
    """Transversality of w to v_0, v_d and their common span."""
    space = w.space
    signs = _resolve_signs(space, signs)
    v0 = standard_v0(space)
    vd = standard_vd(space, signs)
    if not (transverse(w, v0) and transverse(w, vd)):
        return False
    full = span(w.subspace, v0.subspace, standard_vinf(space).subspace)
    return full.dim == space.dim


def beta(w: ShilovPoint, signs=None):
    """The pair of k-dimensional subspaces of v_inf attached to w.

    First component: <v_0, w> ^ v_inf.  Second: <v_d, w> ^ v_inf.  Both are
    returned as subspaces of C^m through the first-block coordinates.
    """
    space = w.space
    signs = _resolve_signs(space, signs)
    m = space.m
    k = _beta_regime(space)
    if not in_beta_domain(w, signs):
        raise GeometryError("point is not in the beta domain")
    out = []
    for anchor in (standard_v0(space), standard_vd(space, signs)):
        cap = intersect(span(w.subspace, anchor.subspace),
                        standard_vinf(space).subspace)
        if cap.dim != k:
            raise GeometryError("unexpected intersection dimension")
        if not cap.basis.block(m, space.dim, 0, k).is_zero():
            raise GeometryError("intersection escapes v_inf")
        out.append(CmSubspace(m, cap.basis.block(0, m, 0, k)))
    return out[0], out[1]


def error_space(w: ShilovPoint, signs=None) -> USubspace:
    """E(w) = S(beta0, beta0) + S(beta1, beta1) inside u(m)."""
    b0, b1 = beta(w, signs)
    return s_map(b0, b0).add(s_map(b1, b1))


def info_space(w: ShilovPoint, signs=None) -> USubspace:
    """I(w) = S(beta0-perp, beta1-perp), tr-orthogonal to E(w)."""
    b0, b1 = beta(w, signs)
    return s_map(b0.perp(), b1.perp())


def _preimage_y_candidates(sol, m, budget):
    """Deterministic sweep over the affine solution set of the Y system."""
    y0, kernel = sol
    yield y0
    if not kernel:
        return
    small = [ONE, -ONE, GaussianRational(2), GaussianRational(-2),
             GaussianRational("1/2"), GaussianRational("-1/2"),
             GaussianRational(3)]
    count = 0
    for idx in range(len(kernel)):
        for s in small:
            yield y0 + kernel[idx].scale(s)
            count += 1
            if count >= budget:
                return
    for idx in range(len(kernel)):
        for jdx in range(idx + 1, len(kernel)):
            for s in small[:3]:
                for r in small[:3]:
                    yield y0 + kernel[idx].scale(s) + kernel[jdx].scale(r)
                    count += 1
                    if count >= budget:
                        return
    salt = 1
    while count < budget:
        acc = y0
        state = salt
        for kmat in kernel:
            state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
            cval = ((state >> 40) % 9) - 4
            if cval:
                acc = acc + kmat.scale(GaussianRational(int(cval)))
        yield acc
        count += 1
        salt += 1


def _antiherm_units(k):
    """Small deterministic invertible anti-Hermitian k x k matrices."""
    base = RMatrix.diag([I] * k)
    out = [base, base.scale(GaussianRational(2)),
           base.scale(GaussianRational("1/2")), -base,
           RMatrix.diag([I * GaussianRational(j + 1) for j in range(k)])]
    if k >= 2:
        for p in range(k - 1):
            rows = [[base[r, c] for c in range(k)] for r in range(k)]
            rows[p][p + 1] = ONE
            rows[p + 1][p] = -ONE
            cand = RMatrix.from_rows(rows)
            if not cand.det().is_zero():
                out.append(cand)
    return out


def _preimage_k_candidates(space, v0, v1, signs, tries):
    """Candidate kernels K = ker X for the preimage solver.

    A kernel works only when the forced map u -> Yu admits an
    anti-Hermitian extension, which pins K to the totally isotropic
    subspaces of a hyperbolic compatibility form on d^-1(V0 + V1).  When
    V0 and V1 are complementary enough these are exactly the graphs
    span(B0 + B1 G) with B0* d B1 G anti-Hermitian, so those are emitted
    first; a seeded random sweep remains as a fallback for degenerate
    inputs, where the extension problem gains slack from V0 ^ V1.
    """
    m = space.m
    k = 2 * m - space.n
    dmat = d_matrix(space, signs)
    dinv = dmat.inverse()
    w = CmSubspace(m, dinv @ v0.add(v1).basis)
    seen = set()

    def emit(cand):
        if cand.dim == k and cand.basis not in seen:
            seen.add(cand.basis)
            return cand
        return None

    if v0.add(v1).dim == 2 * k:
        b0 = CmSubspace(m, dinv @ v0.basis).basis
        b1 = CmSubspace(m, dinv @ v1.basis).basis
        for left, right in ((b0, b1), (b1, b0)):
            pairing = left.conj_t() @ dmat @ right
            if pairing.det().is_zero():
                continue
            pinv = pairing.inverse()
            for unit in _antiherm_units(k):
                g = pinv @ unit
                c = emit(CmSubspace(m, left + right @ g))
                if c:
                    yield c
    if v0.add(v1).dim == 2 * k - 1 and k == 2:
        # One-dimensional overlap J: split V_i = J + V_i' orthogonally.  The
        # compatible kernels here are K = span(d^-1 J, u_0 + g u_1) where the
        # mixing coefficient g is pinned by one real-linear condition coming
        # from the anti-Hermitian extension obstruction.
        jsub = v0.perp().add(v1.perp()).perp()
        zj = jsub.basis
        prim = []
        for part in (v0, v1):
            row = zj.conj_t() @ part.basis
            prim.append(part.basis @ row.kernel())
        w0, w1 = prim
        uj = -(dmat @ zj)
        u0 = -(dmat @ w0)
        u1 = -(dmat @ w1)
        p = (zj.conj_t() @ dmat @ zj)[0, 0]
        if not p.is_zero():
            t = p.im
            a = (zj.conj_t() @ dmat @ w1)[0, 0]
            q = (zj.conj_t() @ dmat @ w0)[0, 0]
            b = (w0.conj_t() @ dmat @ w1)[0, 0]
            for beta_c, omega, base_v, grow_v in (
                (b, a * q.conj(), u0, u1),
                (b.conj(), -(q * a.conj()), u1, u0),
            ):
                ca = beta_c.re + omega.im / t
                cb = -beta_c.im + omega.re / t
                if ca == 0 and cb == 0:
                    gamma = ONE
                else:
                    gamma = GaussianRational(cb, -ca)
                if gamma.is_zero():
                    continue
                cand = CmSubspace(m, uj.hstack(base_v + grow_v.scale(gamma)))
                c = emit(cand)
                if c:
                    yield c
    if w.dim == k:
        c = emit(w)
        if c:
            yield c
        return
    state = 0xC0FFEE
    for _ in range(tries):
        rows = []
        for _i in range(w.dim):
            row = []
            for _j in range(k):
                state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
                re = ((state >> 30) % 5) - 2
                state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
                im = ((state >> 30) % 5) - 2
                row.append(GaussianRational(re, im))
            rows.append(row)
        mix = RMatrix.from_rows(rows)
        cand = CmSubspace(m, w.basis @ mix)
        c = emit(cand)
        if c:
            yield c


def beta_preimage(space: HermSpace, v0: CmSubspace, v1: CmSubspace,
                  signs=None,
                  k_tries: int = 40, y_budget: int = 80) -> ShilovPoint:
    """An exact rational point w in the beta domain with beta(w) = (v0, v1).

    Solves directly in the chart: a point (X, Y) has beta components
    Y(ker X) and (Y + d)(ker X), so a kernel K and an anti-Hermitian Y with
    Y(K) = V0 and (Y + d)(K) = V1 are produced by an exact real-linear
    solve plus a deterministic sweep for the open rank conditions.  The
    returned point is verified by running beta on it.
    """
    signs = _resolve_signs(space, signs)
    m = space.m
    k = _beta_regime(space)
    if v0.dim != k or v1.dim != k:
        raise GeometryError("both subspaces must have dimension 2m - n")
    dmat = d_matrix(space, signs)
    p0perp = v0.perp().basis.conj_t()
    p1perp = v1.perp().basis.conj_t()
    for kcand in _preimage_k_candidates(space, v0, v1, signs, k_tries):
        kb = kcand.basis
        x = kcand.perp().basis.conj_t()
        constraints = [
            (p0perp, kb, RMatrix.zeros(m - k, k)),
            (p1perp, kb, -(p1perp @ dmat @ kb)),
        ]
        sol = solve_antiherm(m, constraints)
        if sol is None:
            continue
        for y in _preimage_y_candidates(sol, m, y_budget):
            if (y @ kb).rank() != k:
                continue
            if ((y + dmat) @ kb).rank() != k:
                continue
            try:
                z = from_chart(HeisPoint(space, x, y))
            except GeometryError:
                continue
            if not in_beta_domain(z, signs):
                continue
            b0, b1 = beta(z, signs)
            if b0 == v0 and b1 == v1:
                return z
    raise PreimageNotFoundError(
        "no exact preimage found within the search budget"
    )


# ---------------------------------------------------------------------------
# chains through the anchors and their chart coordinates

def w_chart_at(space: HermSpace, base: str, a: RMatrix, signs=None) -> Subspace:
    """The 2m-subspace of the chain with coordinate A at the given anchor.

    base is "v0" or "vd".  The subspace contains the anchor point; the
    chain is k-vertical at v_inf iff A has rank m - k.
    """
    m, n = space.m, space.n
    l = n - m
    if a.rows != l or a.cols != m:
        raise GeometryError("A must be (n-m) x m")
    astar = a.conj_t()
    if base == "v0":
        gens = RMatrix.zeros(m, l).vstack(RMatrix.identity(l)).vstack(astar)
    elif base == "vd":
        if signs is None:
            raise GeometryError("vd anchor needs signs")
        dmat = d_matrix(space, signs)
        gens = astar.vstack(RMatrix.identity(l)).vstack(dmat @ astar)
    else:
        raise GeometryError("base must be 'v0' or 'vd'")
    return Subspace(space, gens).orth_complement()


def w_coords_at(space: HermSpace, base: str, v: Subspace, signs=None) -> RMatrix:
    """Inverse of w_chart_at: the coordinate A of a chain subspace through
    the anchor."""
    m, n = space.m, space.n
    l = n - m
    if v.dim != 2 * m:
        raise GeometryError("expected a 2m-dimensional subspace")
    perp = v.orth_complement()
    b = perp.basis
    top = b.block(0, m, 0, l)
    mid = b.block(m, n, 0, l)
    bot = b.block(n, n + m, 0, l)
    try:
        midinv = mid.inverse()
    except Exception:
        raise GeometryError("subspace is not in the chart of the anchor")
    top = top @ midinv
    bot = bot @ midinv
    if base == "v0":
        if not top.is_zero():
            raise GeometryError("subspace does not contain v_0")
        return bot.conj_t()
    if base == "vd":
        if signs is None:
            raise GeometryError("vd anchor needs signs")
        dmat = d_matrix(space, signs)
        if bot != dmat @ top:
            raise GeometryError("subspace does not contain v_d")
        return top.conj_t()
    raise GeometryError("base must be 'v0' or 'vd'")


def pair_in_image(space: HermSpace, a0: RMatrix, a1: RMatrix) -> bool:
    """Whether (A0, A1) arises from a common point in general position.

    The criterion is maximal rank of both coordinates together with
    A1 A0* - Id exactly unitary.
    """
    m, n = space.m, space.n
    l = n - m
    r = min(l, m)
    if a0.rows != l or a0.cols != m or a1.rows != l or a1.cols != m:
        raise GeometryError("coordinates must be (n-m) x m")
    if a0.rank() != r or a1.rank() != r:
        return False
    u = a1 @ a0.conj_t() - RMatrix.identity(l)
    return (u.conj_t() @ u - RMatrix.identity(l)).is_zero()


# ---------------------------------------------------------------------------
# generic intersections of chains through a common point

def oo_point_count(m: int, n: int) -> int:
    """Smallest integer strictly bigger than 1 + m/(n-m)."""
    x = 1 + Fraction(m, n - m)
    return int(x) + 1 if x.denominator == 1 else -(-x.numerator // x.denominator)


def oo_expected_dims(m: int, n: int, count: int):
    """Expected dims of the running intersections for generic samples."""
    return [max(2 * m - (n - m) * (j - 1), m) for j in range(1, count + 1)]


def generic_intersection_dims(z: ShilovPoint, xs):
    """dims of the running intersections of the chains <z, x_i>."""
    space = z.space
    acc = None
    out = []
    for x in xs:
        if not transverse(z, x):
            raise NotTransverseError("sample point not transverse to z")
        sp = span(z.subspace, x.subspace)
        acc = sp if acc is None else intersect(acc, sp)
        out.append(acc.dim)
    return out


def intersect_chains(ts) -> ShilovPoint:
    """The unique common point of the chains, when the intersection of
    their subspaces is exactly one point."""
    ts = list(ts)
    if not ts:
        raise NoCommonPointError("no chains given")
    space = ts[0].space
    acc = ts[0].subspace
    for t in ts[1:]:
        acc = intersect(acc, t.subspace)
    if acc.dim != space.m or not acc.is_isotropic():
        raise NoCommonPointError(
            "chains do not intersect in a single point"
        )
    return ShilovPoint(space, acc)


def triple_span_generic(x: ShilovPoint, y: ShilovPoint, w: ShilovPoint) -> bool:
    """Whether three points span a 3m-dimensional space (regime n >= 2m)."""
    return span(x.subspace, y.subspace, w.subspace).dim == 3 * x.space.m

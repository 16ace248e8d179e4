"""Exact arithmetic over the Gaussian rationals and dense matrices built on it.

Every incidence predicate in this package (isotropy, containment, rank,
transversality) is decided with exact arithmetic in Q(i), so a zero is a
mathematical zero and not a numerical accident.  Floating point appears only
in explicitly labelled cross-check code.

Scalars are pairs of arbitrary-precision rationals.  gmpy2.mpq is used when
available because it is markedly faster than fractions.Fraction; the two are
interchangeable here.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _mpq

    def RAT(p=0, q=1):
        """Exact rational from int/str/rational input."""
        return _mpq(p, q)

    _RAT_BACKEND = "gmpy2.mpq"
except ImportError:  # pragma: no cover
    def RAT(p=0, q=1):
        """Exact rational from int/str/rational input."""
        return Fraction(p, q)

    _RAT_BACKEND = "fractions.Fraction"

_R0 = RAT(0)
_R1 = RAT(1)


class ExactnumError(ValueError):
    """Base error for exact-arithmetic failures."""


class SingularMatrixError(ExactnumError):
    """Raised when an inverse or solve hits a singular matrix."""


class NotHermitianError(ExactnumError):
    """Raised when a signature is requested for a non-Hermitian matrix."""


def rat_str(r) -> str:
    """Serialize a rational as a reduced 'p/q' string."""
    return "%d/%d" % (r.numerator, r.denominator)


def rat_from_str(s: str):
    """Parse 'p/q' (or a bare integer string) into an exact rational."""
    s = s.strip()
    if "/" in s:
        p, q = s.split("/")
        return RAT(int(p), int(q))
    return RAT(int(s))


def _as_rat(x):
    if isinstance(x, (int, Fraction)):
        return RAT(x)
    if isinstance(x, str):
        return rat_from_str(x)
    return RAT(x)


class GaussianRational:
    """A complex number re + i*im with exact rational re and im."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_rat(re)
        self.im = _as_rat(im)

    # Fast internal constructor: trusts that re/im are already rationals.
    @staticmethod
    def _raw(re, im) -> "GaussianRational":
        z = GaussianRational.__new__(GaussianRational)
        z.re = re
        z.im = im
        return z

    def __add__(self, other):
        o = _coerce(other)
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        return GaussianRational._raw(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = _coerce(other)
        return GaussianRational._raw(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational._raw(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )

    def __rtruediv__(self, other):
        return _coerce(other).__truediv__(self)

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def conj(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        return ONE / self

    def abs2(self):
        """Squared modulus, an exact rational."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return "GR(%s)" % self.re
        return "GR(%s, %s)" % (self.re, self.im)


def _coerce(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational._raw(RAT(x), _R0)
    return GaussianRational._raw(_as_rat(x), _R0)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def gr(re=0, im=0) -> GaussianRational:
    """Shorthand constructor for a Gaussian rational."""
    return GaussianRational(re, im)


class RMatrix:
    """Immutable dense matrix over the Gaussian rationals.

    Entries are stored row-major.  All mutating algorithms copy first; no
    public method alters an existing matrix.
    """

    __slots__ = ("rows", "cols", "_d")

    def __init__(self, rows: int, cols: int, data):
        if len(data) != rows:
            raise ExactnumError("row count mismatch")
        d = []
        for row in data:
            if len(row) != cols:
                raise ExactnumError("column count mismatch")
            d.append(tuple(_coerce(x) for x in row))
        self.rows = rows
        self.cols = cols
        self._d = tuple(d)

    @staticmethod
    def _raw(rows, cols, d) -> "RMatrix":
        m = RMatrix.__new__(RMatrix)
        m.rows = rows
        m.cols = cols
        m._d = d
        return m

    @staticmethod
    def from_rows(data) -> "RMatrix":
        data = list(data)
        if not data:
            return RMatrix(0, 0, [])
        return RMatrix(len(data), len(data[0]), data)

    @staticmethod
    def zeros(rows: int, cols: int) -> "RMatrix":
        zrow = (ZERO,) * cols
        return RMatrix._raw(rows, cols, tuple(zrow for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "RMatrix":
        return RMatrix.diag([ONE] * n)

    @staticmethod
    def diag(entries) -> "RMatrix":
        entries = [_coerce(e) for e in entries]
        n = len(entries)
        d = []
        for i in range(n):
            row = [ZERO] * n
            row[i] = entries[i]
            d.append(tuple(row))
        return RMatrix._raw(n, n, tuple(d))

    def __getitem__(self, ij):
        i, j = ij
        return self._d[i][j]

    def row(self, i):
        return self._d[i]

    def col(self, j) -> "RMatrix":
        return RMatrix._raw(self.rows, 1, tuple((r[j],) for r in self._d))

    def entries(self):
        return self._d

    def __eq__(self, other):
        if not isinstance(other, RMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self._d == other._d
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self._d))

    def __add__(self, other):
        _shape_match(self, other)
        return RMatrix._raw(
            self.rows,
            self.cols,
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self._d, other._d)
            ),
        )

    def __sub__(self, other):
        _shape_match(self, other)
        return RMatrix._raw(
            self.rows,
            self.cols,
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self._d, other._d)
            ),
        )

    def __neg__(self):
        return RMatrix._raw(
            self.rows,
            self.cols,
            tuple(tuple(-a for a in r) for r in self._d),
        )

    def scale(self, c) -> "RMatrix":
        c = _coerce(c)
        return RMatrix._raw(
            self.rows,
            self.cols,
            tuple(tuple(c * a for a in r) for r in self._d),
        )

    def __matmul__(self, other) -> "RMatrix":
        if self.cols != other.rows:
            raise ExactnumError(
                "cannot multiply %dx%d by %dx%d"
                % (self.rows, self.cols, other.rows, other.cols)
            )
        if self.cols == 0:
            return RMatrix.zeros(self.rows, other.cols)
        # raw-pair accumulation with zero-term skipping; the matrices here
        # are often block-structured, so most products vanish identically
        ocols = other.cols
        od = other._d
        col_re = []
        col_im = []
        for j in range(ocols):
            col_re.append([row[j].re for row in od])
            col_im.append([row[j].im for row in od])
        raw = GaussianRational._raw
        out = []
        for r in self._d:
            row_re = [x.re for x in r]
            row_im = [x.im for x in r]
            nz = [t for t in range(len(r)) if row_re[t] or row_im[t]]
            orow = []
            for j in range(ocols):
                cre = col_re[j]
                cim = col_im[j]
                s_re = _R0
                s_im = _R0
                for t in nz:
                    br = cre[t]
                    bi = cim[t]
                    if br or bi:
                        ar = row_re[t]
                        ai = row_im[t]
                        s_re += ar * br - ai * bi
                        s_im += ar * bi + ai * br
                orow.append(raw(s_re, s_im))
            out.append(tuple(orow))
        return RMatrix._raw(self.rows, ocols, tuple(out))

    def conj_t(self) -> "RMatrix":
        """Conjugate transpose."""
        return RMatrix._raw(
            self.cols,
            self.rows,
            tuple(
                tuple(self._d[i][j].conj() for i in range(self.rows))
                for j in range(self.cols)
            ),
        )

    def transpose(self) -> "RMatrix":
        return RMatrix._raw(
            self.cols,
            self.rows,
            tuple(
                tuple(self._d[i][j] for i in range(self.rows))
                for j in range(self.cols)
            ),
        )

    def conj(self) -> "RMatrix":
        return RMatrix._raw(
            self.rows,
            self.cols,
            tuple(tuple(a.conj() for a in r) for r in self._d),
        )

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "RMatrix":
        """Submatrix of rows r0:r1 and columns c0:c1."""
        return RMatrix._raw(
            r1 - r0,
            c1 - c0,
            tuple(r[c0:c1] for r in self._d[r0:r1]),
        )

    def hstack(self, other) -> "RMatrix":
        if self.rows != other.rows:
            raise ExactnumError("hstack row mismatch")
        return RMatrix._raw(
            self.rows,
            self.cols + other.cols,
            tuple(a + b for a, b in zip(self._d, other._d)),
        )

    def vstack(self, other) -> "RMatrix":
        if self.cols != other.cols:
            raise ExactnumError("vstack column mismatch")
        return RMatrix._raw(self.rows + other.rows, self.cols, self._d + other._d)

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self._d for a in r)

    def is_hermitian(self) -> bool:
        if self.rows != self.cols:
            return False
        for i in range(self.rows):
            for j in range(i, self.cols):
                if self._d[i][j] != self._d[j][i].conj():
                    return False
        return True

    def is_anti_hermitian(self) -> bool:
        if self.rows != self.cols:
            return False
        for i in range(self.rows):
            for j in range(i, self.cols):
                a, b = self._d[i][j], self._d[j][i]
                if a.re != -b.re or a.im != b.im:
                    return False
        return True

    def trace(self) -> GaussianRational:
        return sum((self._d[i][i] for i in range(self.rows)), ZERO)

    def _rref_raw(self):
        """Row echelon reduction on parallel arrays of raw rationals.

        Returns (re, im, pivots) with re/im the real and imaginary row
        arrays of the reduced matrix.  The inner complex multiply-subtract
        dominates package runtime, and skipping the scalar wrapper objects
        there is a large constant win.  Rows at or below the current pivot
        row are zero in every earlier column (row operations preserve the
        zeros that made those columns pivot or free), so updates start at
        the pivot column.
        """
        rows, cols = self.rows, self.cols
        re = [[x.re for x in r] for r in self._d]
        im = [[x.im for x in r] for r in self._d]
        pivots = []
        pr = 0
        for pc in range(cols):
            sel = None
            for i in range(pr, rows):
                if re[i][pc] or im[i][pc]:
                    sel = i
                    break
            if sel is None:
                continue
            re[pr], re[sel] = re[sel], re[pr]
            im[pr], im[sel] = im[sel], im[pr]
            rp, ip = re[pr], im[pr]
            a, b = rp[pc], ip[pc]
            if b:
                d2 = a * a + b * b
                ia, ib = a / d2, -b / d2
                for j in range(pc, cols):
                    x, y = rp[j], ip[j]
                    rp[j] = ia * x - ib * y
                    ip[j] = ia * y + ib * x
            elif a != _R1:
                ia = _R1 / a
                for j in range(pc, cols):
                    rp[j] = ia * rp[j]
                    ip[j] = ia * ip[j]
            for i in range(rows):
                if i == pr:
                    continue
                ri, ii = re[i], im[i]
                fr, fi = ri[pc], ii[pc]
                if fi:
                    for j in range(pc, cols):
                        x, y = rp[j], ip[j]
                        if x or y:
                            ri[j] -= fr * x - fi * y
                            ii[j] -= fr * y + fi * x
                elif fr:
                    for j in range(pc, cols):
                        x, y = rp[j], ip[j]
                        if x or y:
                            ri[j] -= fr * x
                            ii[j] -= fr * y
            pivots.append(pc)
            pr += 1
            if pr == rows:
                break
        return re, im, pivots

    def _rref(self):
        """Row echelon reduction; returns (rows as lists, pivot columns)."""
        re, im, pivots = self._rref_raw()
        raw = GaussianRational._raw
        cols = self.cols
        d = [
            [raw(re[i][j], im[i][j]) for j in range(cols)]
            for i in range(self.rows)
        ]
        return d, pivots

    def rref(self):
        """Reduced row echelon form and pivot column indices."""
        d, pivots = self._rref()
        return RMatrix._raw(self.rows, self.cols, tuple(tuple(r) for r in d)), pivots

    def rank(self) -> int:
        return len(self._rref_raw()[2])

    def kernel(self) -> "RMatrix":
        """Matrix whose columns form a basis of the right null space.

        Returns an (cols x nullity) matrix; nullity may be zero.
        """
        d, pivots = self._rref()
        pivset = set(pivots)
        free = [j for j in range(self.cols) if j not in pivset]
        basis_cols = []
        for f in free:
            v = [ZERO] * self.cols
            v[f] = ONE
            for i, pc in enumerate(pivots):
                v[pc] = -d[i][f]
            basis_cols.append(v)
        return RMatrix._raw(
            self.cols,
            len(free),
            tuple(tuple(bc[i] for bc in basis_cols) for i in range(self.cols)),
        )

    def inverse(self) -> "RMatrix":
        if self.rows != self.cols:
            raise SingularMatrixError("inverse of non-square matrix")
        aug = self.hstack(RMatrix.identity(self.rows))
        d, pivots = aug._rref()
        if len(pivots) < self.rows or pivots[: self.rows] != list(range(self.rows)):
            raise SingularMatrixError("matrix is singular")
        n = self.rows
        return RMatrix._raw(n, n, tuple(tuple(d[i][n:]) for i in range(n)))

    def solve(self, rhs: "RMatrix") -> "RMatrix":
        """Solve self @ X = rhs exactly; raises if there is no solution.

        When the system is underdetermined one particular solution is
        returned (free variables set to zero).
        """
        if rhs.rows != self.rows:
            raise ExactnumError("solve shape mismatch")
        aug = self.hstack(rhs)
        d, pivots = aug._rref()
        if any(pc >= self.cols for pc in pivots):
            raise SingularMatrixError("inconsistent linear system")
        out = [[ZERO] * rhs.cols for _ in range(self.cols)]
        for i, pc in enumerate(pivots):
            for j in range(rhs.cols):
                out[pc][j] = d[i][self.cols + j]
        return RMatrix._raw(self.cols, rhs.cols, tuple(tuple(r) for r in out))

    def det(self) -> GaussianRational:
        if self.rows != self.cols:
            raise ExactnumError("determinant of non-square matrix")
        d = [list(r) for r in self._d]
        n = self.rows
        acc = ONE
        for c in range(n):
            sel = None
            for i in range(c, n):
                if not d[i][c].is_zero():
                    sel = i
                    break
            if sel is None:
                return ZERO
            if sel != c:
                d[c], d[sel] = d[sel], d[c]
                acc = -acc
            acc = acc * d[c][c]
            inv = d[c][c].inverse()
            for i in range(c + 1, n):
                if not d[i][c].is_zero():
                    f = d[i][c] * inv
                    d[i] = [x - f * y for x, y in zip(d[i], d[c])]
        return acc

    def col_canonical(self) -> "RMatrix":
        """Canonical basis of the column space.

        Column-reduced echelon form with leading entries 1, computed left to
        right; two matrices span the same column space iff their canonical
        forms are equal.  Zero columns are dropped, so the result has
        rank-many columns.
        """
        re, im, pivots = self.transpose()._rref_raw()
        raw = GaussianRational._raw
        rows = self.rows
        keep = tuple(
            tuple(raw(re[i][j], im[i][j]) for j in range(rows))
            for i in range(len(pivots))
        )
        return RMatrix._raw(len(keep), rows, keep).transpose()

    def __repr__(self):
        body = "; ".join(
            " ".join(_fmt_entry(a) for a in r) for r in self._d
        )
        return "RMatrix(%dx%d: %s)" % (self.rows, self.cols, body)


def _fmt_entry(a: GaussianRational) -> str:
    if a.im == 0:
        return str(a.re)
    if a.re == 0:
        return "%si" % a.im
    return "%s%+si" % (a.re, a.im)


def solve_affine(a: RMatrix, b: RMatrix):
    """Full solution set of a @ x = b for a single right-hand column.

    Returns None when the system is inconsistent, else (x0, kernel) where
    x0 is one particular solution (free variables zero) and kernel's
    columns span the homogeneous solutions.
    """
    if b.rows != a.rows or b.cols != 1:
        raise ExactnumError("solve_affine expects a single column rhs")
    aug = a.hstack(b)
    d, pivots = aug._rref()
    if any(pc >= a.cols for pc in pivots):
        return None
    x0 = [ZERO] * a.cols
    for i, pc in enumerate(pivots):
        x0[pc] = d[i][a.cols]
    # the leading a.cols columns of the reduction are exactly rref(a)
    pivset = set(pivots)
    free = [j for j in range(a.cols) if j not in pivset]
    basis_cols = []
    for f in free:
        v = [ZERO] * a.cols
        v[f] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -d[i][f]
        basis_cols.append(v)
    kernel = RMatrix._raw(
        a.cols,
        len(free),
        tuple(tuple(bc[i] for bc in basis_cols) for i in range(a.cols)),
    )
    return RMatrix._raw(a.cols, 1, tuple((v,) for v in x0)), kernel


def _shape_match(a: RMatrix, b: RMatrix):
    if a.rows != b.rows or a.cols != b.cols:
        raise ExactnumError("shape mismatch")


def hermitian_signature(a: RMatrix):
    """Exact signature (plus, minus, zero) of a Hermitian matrix.

    Symmetric elimination: a nonzero diagonal entry (preferring the one of
    greatest numerator magnitude) contributes its sign and is eliminated by
    a congruence; if the remaining diagonal is all zero, a nonzero
    off-diagonal entry a_ij is used as a hyperbolic 2x2 pivot, which
    contributes one plus and one minus.  Congruence preserves signature, so
    the count is exact.
    """
    if not a.is_hermitian():
        raise NotHermitianError("signature requested for non-Hermitian matrix")
    n = a.rows
    work = {
        (i, j): a[i, j] for i in range(n) for j in range(n) if not a[i, j].is_zero()
    }
    live = list(range(n))
    plus = minus = 0
    while live:
        pivot = None
        best = None
        for i in live:
            d = work.get((i, i))
            if d is not None and d.re != 0:
                key = abs(d.re.numerator)
                if best is None or key > best:
                    best = key
                    pivot = i
        if pivot is not None:
            d = work[(pivot, pivot)].re
            if d > 0:
                plus += 1
            else:
                minus += 1
            dinv = RAT(1) / d
            others = [j for j in live if j != pivot]
            colv = {j: work.get((j, pivot)) for j in others}
            for i in others:
                ci = colv[i]
                if ci is None:
                    continue
                for j in others:
                    cj = colv[j]
                    if cj is None:
                        continue
                    # a_ij -= a_ip * a_pj / d   with a_pj = conj(a_jp)
                    delta = ci * cj.conj()
                    cur = work.get((i, j), ZERO)
                    new = cur - GaussianRational._raw(
                        delta.re * dinv, delta.im * dinv
                    )
                    if new.is_zero():
                        work.pop((i, j), None)
                    else:
                        work[(i, j)] = new
            for i in others:
                work.pop((i, pivot), None)
                work.pop((pivot, i), None)
            work.pop((pivot, pivot), None)
            live.remove(pivot)
            continue
        off = None
        for i in live:
            for j in live:
                if j > i and (i, j) in work:
                    off = (i, j)
                    break
            if off:
                break
        if off is None:
            break  # remaining block is zero
        p, q = off
        b = work[(p, q)]
        plus += 1
        minus += 1
        # Schur complement of the 2x2 block [[0, b], [conj(b), 0]].
        binv = b.inverse()
        bcinv = b.conj().inverse()
        others = [j for j in live if j != p and j != q]
        colp = {j: work.get((j, p)) for j in others}
        colq = {j: work.get((j, q)) for j in others}
        for i in others:
            for j in others:
                aip = colp[i]
                aiq = colq[i]
                apj = colp[j].conj() if colp[j] is not None else None
                aqj = colq[j].conj() if colq[j] is not None else None
                delta = ZERO
                if aiq is not None and apj is not None:
                    delta = delta + aiq * binv * apj
                if aip is not None and aqj is not None:
                    delta = delta + aip * bcinv * aqj
                if delta.is_zero():
                    continue
                cur = work.get((i, j), ZERO)
                new = cur - delta
                if new.is_zero():
                    work.pop((i, j), None)
                else:
                    work[(i, j)] = new
        for t in (p, q):
            for i in others:
                work.pop((i, t), None)
                work.pop((t, i), None)
        work.pop((p, q), None)
        work.pop((q, p), None)
        work.pop((p, p), None)
        work.pop((q, q), None)
        live.remove(p)
        live.remove(q)
    zero = n - plus - minus
    return plus, minus, zero


def cayley_h_unitary(k: RMatrix, h: RMatrix) -> RMatrix:
    """Cayley transform (Id - K)(Id + K)^-1 of an h-anti-Hermitian K.

    If K satisfies K* H + H K = 0 and Id + K is invertible, the result g
    satisfies g* H g = H exactly.
    """
    n = k.rows
    if not ((k.conj_t() @ h) + (h @ k)).is_zero():
        raise ExactnumError("matrix is not anti-Hermitian for the given form")
    ident = RMatrix.identity(n)
    try:
        inv = (ident + k).inverse()
    except SingularMatrixError:
        raise SingularMatrixError("Id + K is singular; Cayley transform undefined")
    g = (ident - k) @ inv
    return g

"""Deterministic seeded sampling of exact test data.

All randomness flows through a splittable 64-bit generator (splitmix64
finalizer over a keyed counter), so every sampled object is a pure function
of (seed, split path, draw index).  Splitting derives an independent child
stream from string/int tokens without consuming draws from the parent,
which makes parallel trials reproducible: trial j of check C under seed s
always sees the stream split(s, C, j).

Sampled rationals have numerator and denominator bounded by the configured
height; all objects satisfy their exact invariants by construction
(isotropy, unitarity, h-unitarity), never approximately.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .exactnum import (
    GaussianRational,
    RAT,
    RMatrix,
    cayley_h_unitary,
)
from .hermitian import HermSpace
from .shilov import (
    MChain,
    ShilovPoint,
    apply_matrix,
    apply_matrix_chain,
    standard_v0,
    standard_vd,
    standard_vinf,
)
from .heisenberg import (
    HeisPoint,
    LElement,
    NElement,
    QElement,
    from_chart,
)
from . import chains as _chains

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _fnv1a(text: str) -> int:
    h = 0xCBF29CE484222325
    for b in text.encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & _MASK
    return h


class Rng:
    """Splittable counter-based generator (value semantics on split)."""

    __slots__ = ("_key", "_count")

    def __init__(self, key: int):
        self._key = key & _MASK
        self._count = 0

    def next_u64(self) -> int:
        self._count += 1
        return _mix((self._key + self._count * _GOLDEN) & _MASK)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi], inclusive."""
        return lo + self.next_u64() % (hi - lo + 1)

    def split(self, *tokens) -> "Rng":
        """Independent child stream named by the tokens.

        Does not consume draws from this stream, so the child is a pure
        function of (key, tokens).
        """
        h = _mix(self._key ^ 0xA0761D6478BD642F)
        for t in tokens:
            h = _mix(h ^ _fnv1a(str(t)))
        return Rng(h)


@dataclass(frozen=True)
class SampleConfig:
    """Parameters of a sampling stream.

    height bounds the absolute numerators and denominators of sampled
    rationals; small heights keep downstream exact arithmetic fast.
    """

    m: int
    n: int
    seed: int
    height: int = 10

    def with_height(self, height: int) -> "SampleConfig":
        return replace(self, height=height)


class Sampler:
    """Draws exact geometric objects for one (m, n) space."""

    def __init__(self, cfg: SampleConfig, rng: Rng | None = None):
        self.cfg = cfg
        self.space = HermSpace(cfg.m, cfg.n)
        self.rng = rng if rng is not None else Rng(cfg.seed)

    def split(self, *tokens) -> "Sampler":
        return Sampler(self.cfg, self.rng.split(*tokens))

    # -- scalars ----------------------------------------------------------

    def rational(self, height: int | None = None):
        h = height or self.cfg.height
        num = self.rng.randint(-h, h)
        den = self.rng.randint(1, h)
        return RAT(num, den)

    def scalar(self, height: int | None = None) -> GaussianRational:
        return GaussianRational(self.rational(height), self.rational(height))

    def nonzero_scalar(self, height: int | None = None) -> GaussianRational:
        while True:
            s = self.scalar(height)
            if not s.is_zero():
                return s

    def signs(self):
        """A +/-1 pattern of length m."""
        return tuple(
            1 if self.rng.next_u64() % 2 == 0 else -1
            for _ in range(self.cfg.m)
        )

    # -- matrices ---------------------------------------------------------

    def matrix(self, rows: int, cols: int, height: int | None = None) -> RMatrix:
        if rows == 0 or cols == 0:
            return RMatrix.zeros(rows, cols)
        return RMatrix.from_rows(
            [[self.scalar(height) for _ in range(cols)] for _ in range(rows)]
        )

    def anti_hermitian(self, size: int, height: int | None = None) -> RMatrix:
        out = [[None] * size for _ in range(size)]
        for p in range(size):
            out[p][p] = GaussianRational(0, self.rational(height))
            for q in range(p + 1, size):
                v = self.scalar(height)
                out[p][q] = v
                out[q][p] = -v.conj()
        return RMatrix.from_rows(out)

    def hermitian(self, size: int, height: int | None = None) -> RMatrix:
        out = [[None] * size for _ in range(size)]
        for p in range(size):
            out[p][p] = GaussianRational(self.rational(height))
            for q in range(p + 1, size):
                v = self.scalar(height)
                out[p][q] = v
                out[q][p] = v.conj()
        return RMatrix.from_rows(out)

    def gl(self, size: int, height: int | None = None) -> RMatrix:
        """An exactly invertible size x size matrix."""
        if size == 0:
            return RMatrix.identity(0)
        while True:
            a = self.matrix(size, size, height)
            if not a.det().is_zero():
                return a

    def unitary(self, size: int, height: int | None = None) -> RMatrix:
        """An exact unitary with determinant 1, via the Cayley transform.

        det of a Cayley unitary is c-bar/c for c = det(Id + K), a Gaussian
        rational of modulus one, so scaling the first column by its
        conjugate lands in the determinant-one group exactly.
        """
        if size == 0:
            return RMatrix.identity(0)
        ident = RMatrix.identity(size)
        while True:
            k = self.anti_hermitian(size, height)
            if not (ident + k).det().is_zero():
                break
        u = (ident - k) @ (ident + k).inverse()
        delta = u.det().conj()
        cols = [u.col(0).scale(delta)] + [u.col(j) for j in range(1, size)]
        out = cols[0]
        for c in cols[1:]:
            out = out.hstack(c)
        return out

    def h_anti_hermitian(self, height: int | None = None) -> RMatrix:
        """K with K* H + H K = 0 (the derivative condition of h-unitarity)."""
        s = self.anti_hermitian(self.space.dim, height)
        return self.space.h @ s

    def h_unitary(self, height: int | None = None) -> RMatrix:
        """An exact h-unitary via the Cayley transform, resampling the
        measure-zero singular draws."""
        ident = RMatrix.identity(self.space.dim)
        for _ in range(100):
            k = self.h_anti_hermitian(height)
            if not (ident + k).det().is_zero():
                return cayley_h_unitary(k, self.space.h)
        raise RuntimeError("h-unitary sampling failed 100 times")

    # -- group elements fixing v_inf ---------------------------------------

    def n_element(self, height: int | None = None) -> NElement:
        m, n = self.cfg.m, self.cfg.n
        return NElement(
            self.space,
            self.matrix(n - m, m, height),
            self.anti_hermitian(m, height),
        )

    def central_element(self, height: int | None = None) -> NElement:
        m, n = self.cfg.m, self.cfg.n
        return NElement(
            self.space,
            RMatrix.zeros(n - m, m),
            self.anti_hermitian(m, height),
        )

    def l_element(self, height: int | None = None) -> LElement:
        m, n = self.cfg.m, self.cfg.n
        return LElement(
            self.space, self.gl(m, height), self.unitary(n - m, height)
        )

    def q_element(self, height: int | None = None) -> QElement:
        return QElement(self.n_element(height), self.l_element(height))

    def s0_element(self, k: int, height: int | None = None):
        """A sampled stabilizer of (v_inf, v_0, T_k), as an LElement.

        Block shape: A = [[Y, X], [0, W]] with Y invertible k x k and W
        unitary, B = diag((a/a-bar) W, C22) with a = det A and C22 unitary.
        The compensating scalar on W is exactly what makes the middle block
        of the h-unitary matrix carry W itself on the chain block.
        """
        m, n = self.cfg.m, self.cfg.n
        if k not in _chains.valid_k_range(self.space):
            raise ValueError("k out of range for this space")
        y = self.gl(k, height)
        x = self.matrix(k, m - k, height)
        w = self.unitary(m - k, height)
        c22 = self.unitary(n - 2 * m + k, height)
        a = y.hstack(x).vstack(RMatrix.zeros(m - k, k).hstack(w))
        det = a.det()
        phase = det * det.conj().inverse()
        b = _block_diag(w.scale(phase), c22)
        return LElement(self.space, a, b)

    # -- geometric objects --------------------------------------------------

    def heis_point(self, height: int | None = None) -> HeisPoint:
        m, n = self.cfg.m, self.cfg.n
        return HeisPoint(
            self.space,
            self.matrix(n - m, m, height),
            self.anti_hermitian(m, height),
        )

    def chart_point(self, height: int | None = None) -> ShilovPoint:
        return from_chart(self.heis_point(height))

    def point(self, height: int | None = None) -> ShilovPoint:
        """A random point; occasionally v_inf itself to cover the one
        point outside the chart."""
        if self.rng.next_u64() % 16 == 0:
            return standard_vinf(self.space)
        return self.chart_point(height)

    def vd_point(self) -> ShilovPoint:
        return standard_vd(self.space, self.signs())

    def chain(self, k: int, height: int | None = None,
              move_vinf: bool = False) -> MChain:
        """A chain of index k at v_inf (default), or a free h-unitary
        translate of the standard one when move_vinf is set."""
        t = _chains.standard_chain(self.space, k)
        if move_vinf:
            g = self.h_unitary(height)
        else:
            g = self.q_element(height).matrix()
        return apply_matrix_chain(g, t)

    def maximal_triple(self, height: int | None = None):
        """g . (v_inf, v_0, v_d) for a random h-unitary g and random d."""
        g = self.h_unitary(height)
        trip = (
            standard_vinf(self.space),
            standard_v0(self.space),
            standard_vd(self.space, self.signs()),
        )
        return tuple(apply_matrix(g, x) for x in trip)

    def cm_subspace(self, dim: int, height: int | None = None):
        """A dim-dimensional subspace of C^m."""
        m = self.cfg.m
        while True:
            b = self.matrix(m, dim, height)
            if b.rank() == dim:
                return _chains.CmSubspace(m, b)

    def beta_domain_point(self, signs=None, height: int | None = None,
                          tries: int = 200) -> ShilovPoint:
        """A chart point transverse to v_0, v_d and their span."""
        for _ in range(tries):
            z = self.chart_point(height)
            if _chains.in_beta_domain(z, signs):
                return z
        raise RuntimeError("beta-domain sampling exhausted")


def _block_diag(a: RMatrix, b: RMatrix) -> RMatrix:
    top = a.hstack(RMatrix.zeros(a.rows, b.cols))
    bot = RMatrix.zeros(b.rows, a.cols).hstack(b)
    return top.vstack(bot)

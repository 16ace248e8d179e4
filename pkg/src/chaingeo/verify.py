"""Seeded property checks for the constructive chain-geometry statements.

Every check runs `trials` independent instances; instance j of check C under
seed s draws all of its data from the stream split(s, C, j), so reports are
deterministic and any failing trial can be replayed standalone from the
(check, seed, trial) triple recorded in its counterexample.

Probabilistic converse statements ("a random element moves X") hold off a
measure-zero set; when a sampled element lands in that null set the trial
resamples instead of failing, with a bounded budget.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy

from .exactnum import GaussianRational, RMatrix, hermitian_signature
from .hermitian import intersect, span
from .shilov import (
    NotTransverseError,
    apply_matrix,
    apply_matrix_chain,
    bergmann_index,
    cartan_invariant,
    chain_through,
    is_maximal_triple_space,
    member,
    standard_v0,
    standard_vd,
    standard_vinf,
)
from .heisenberg import (
    HeisPoint,
    NElement,
    QElement,
    WPoint,
    act_q,
    from_chart,
    to_chart,
    w_to_subspace,
)
from . import chains
from .sampler import Rng, SampleConfig, Sampler
from . import serialize


class UnknownCheckError(ValueError):
    """The requested check id is not in the registry."""


class _Fail(Exception):
    """Raised inside a check body to report a failed property."""

    def __init__(self, reason: str, **objs):
        super().__init__(reason)
        self.info = {"reason": reason}
        for key, val in objs.items():
            self.info[key] = _jsonable(val)


def _jsonable(v):
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    try:
        return serialize.object_to_json(v)
    except Exception:
        return repr(v)


def _req(cond: bool, reason: str, **objs):
    if not cond:
        raise _Fail(reason, **objs)


def _resample(sampler_fn, reject, budget: int, what: str):
    """Draw until the rejection predicate clears (null-set resampling)."""
    for _ in range(budget):
        x = sampler_fn()
        if not reject(x):
            return x
    raise _Fail("resample budget exhausted for " + what)


# ---------------------------------------------------------------------------
# check bodies


def _check_vc(s: Sampler, trial: int):
    """Vertical chains correspond bijectively to points of the W factor."""
    space = s.space
    m, n = space.m, space.n
    vinf = standard_vinf(space)
    w = WPoint(space, s.matrix(n - m, m))
    t = chains.vertical_chain(space, w)
    _req(chains.intersection_index(vinf, t) == m,
         "vertical chain does not have index m", w=w)
    _req(w_to_subspace(w) == t.subspace,
         "subspace attached to w differs from the vertical chain", w=w)
    _req(chains.project_vertical(t) == w,
         "roundtrip through the vertical chain lost the base point", w=w)
    y = s.anti_hermitian(m)
    _req(member(from_chart(HeisPoint(space, w.a, y)), t),
         "fiber point is not on the vertical chain", w=w, y=y)
    other = s.heis_point()
    if other.x != w.a:
        _req(not member(from_chart(other), t),
             "point outside the fiber lies on the vertical chain",
             w=w, other_x=other.x, other_y=other.y)


def _check_vf(s: Sampler, trial: int):
    """The fiber over w is an M-orbit and M acts simply transitively."""
    space = s.space
    m, n = space.m, space.n
    w = WPoint(space, s.matrix(n - m, m))
    t = chains.vertical_chain(space, w)
    y1 = s.anti_hermitian(m)
    y2 = _resample(lambda: s.anti_hermitian(m), lambda y: y == y1,
                   20, "distinct fiber coordinate")
    p1 = HeisPoint(space, w.a, y1)
    p2 = HeisPoint(space, w.a, y2)
    f = y2 - y1
    nel = NElement(space, RMatrix.zeros(n - m, m), f)
    _req(apply_matrix(nel.matrix(), from_chart(p1)) == from_chart(p2),
         "central translation by the coordinate difference misses", w=w,
         y1=y1, y2=y2)
    delta = _resample(lambda: s.anti_hermitian(m), lambda d: d.is_zero(),
                      20, "nonzero central direction")
    bad = NElement(space, RMatrix.zeros(n - m, m), f + delta)
    _req(apply_matrix(bad.matrix(), from_chart(p1)) != from_chart(p2),
         "two distinct central elements map p1 to p2", w=w, delta=delta)
    _req(member(from_chart(p1), t) and member(from_chart(p2), t),
         "fiber points are not on the vertical chain", w=w)
    _req(apply_matrix_chain(nel.matrix(), t) == t,
         "central translation moves the vertical chain", w=w, f=f)
    _req(chains.chain_stabilizer_M(t)
         == chains.USubspace.from_generators(m, chains.um_basis(m)),
         "vertical chain is not stabilized by all of the center", w=w)


def _check_ti(s: Sampler, trial: int):
    """Index is the complete invariant: realizable for each admissible k
    and preserved by the group action."""
    space = s.space
    vinf = standard_vinf(space)
    ks = list(chains.valid_k_range(space))
    for k in ks:
        t = chains.standard_chain(space, k)
        _req(chains.intersection_index(vinf, t) == k,
             "standard chain has wrong index", k=k)
    k = ks[s.rng.randint(0, len(ks) - 1)]
    t = chains.standard_chain(space, k)
    g = s.h_unitary(3)
    _req(chains.intersection_index(
            apply_matrix(g, vinf), apply_matrix_chain(g, t)) == k,
         "index changed under an isometry", k=k, g=g)
    q = s.q_element(3).matrix()
    _req(chains.intersection_index(vinf, apply_matrix_chain(q, t)) == k,
         "index at the fixed point changed under the stabilizer", k=k, q=q)


def _check_tk(s: Sampler, trial: int):
    """Chart points of the standard index-k chain are parametrized by
    (E, unitary Xu, anti-Hermitian C) with the stated chart projection."""
    space = s.space
    m, n = space.m, space.n
    ks = list(chains.valid_k_range(space))
    k = ks[s.rng.randint(0, len(ks) - 1)]
    r = m - k
    e = s.matrix(r, k)
    xu = s.unitary(r)
    c = s.anti_hermitian(k)
    z = chains.parametrize_tk(space, k, e, xu, c)
    t = chains.standard_chain(space, k)
    _req(member(z, t), "parametrized point is off the chain",
         k=k, e=e, xu=xu, c=c)
    hp = to_chart(z)
    _req(hp.x.block(0, r, 0, k) == e
         and hp.x.block(0, r, k, m) == RMatrix.identity(r) + xu
         and hp.x.block(r, n - m, 0, m).is_zero(),
         "chart projection has the wrong block form", k=k, e=e, xu=xu, x=hp.x)
    if k == m:
        _req(hp.x.is_zero() and hp.y == c,
             "index-m parametrization is not the central fiber", c=c, y=hp.y)


def _check_s0(s: Sampler, trial: int):
    """Block-form elements stabilize (v_inf, v_0, T_k); generic reductive
    elements move T_k."""
    space = s.space
    m = space.m
    vinf, v0 = standard_vinf(space), standard_v0(space)
    ks = list(chains.valid_k_range(space))
    k = ks[s.rng.randint(0, len(ks) - 1)]
    t = chains.standard_chain(space, k)
    g = s.s0_element(k).matrix()
    _req(apply_matrix(g, vinf) == vinf, "stabilizer moved v_inf", k=k, g=g)
    _req(apply_matrix(g, v0) == v0, "stabilizer moved v_0", k=k, g=g)
    _req(apply_matrix_chain(g, t) == t, "stabilizer moved the chain",
         k=k, g=g)
    if k < m:
        _resample(
            lambda: s.l_element(3),
            lambda l: apply_matrix_chain(l.matrix(), t) == t,
            20, "reductive element moving the chain")


def _check_s1(s: Sampler, trial: int):
    """m . s_0 products fix the base W-point and the standard circle and
    factor with central unipotent part; elements with E != 0 move the
    base point."""
    space = s.space
    m, n = space.m, space.n
    ks = [k for k in chains.valid_k_range(space) if k < m]
    k = ks[s.rng.randint(0, len(ks) - 1)]
    t = chains.standard_chain(space, k)
    ck = chains.project_chain(t)
    origin = HeisPoint(space, RMatrix.zeros(n - m, m), RMatrix.zeros(m, m))
    q = QElement(s.central_element(), s.s0_element(k))
    _req(act_q(q, origin).x.is_zero(), "stabilizer moved the base W-point",
         k=k, q=q.matrix())
    t2 = apply_matrix_chain(q.matrix(), t)
    _req(chains.circle_equal(chains.project_chain(t2), ck),
         "stabilizer moved the standard circle", k=k, q=q.matrix())
    _req(QElement.from_matrix(space, q.matrix()).nel.is_central(),
         "stabilizer element does not factor with central unipotent part",
         k=k, q=q.matrix())
    nel = NElement(
        space,
        _resample(lambda: s.matrix(n - m, m), lambda e: e.is_zero(),
                  20, "nonzero E"),
        s.anti_hermitian(m),
    )
    q2 = QElement(nel, s.l_element(3))
    _req(not act_q(q2, origin).x.is_zero(),
         "element with nonzero E fixed the base W-point", k=k, e=nel.e)
    _resample(
        lambda: s.l_element(3),
        lambda l: chains.circle_equal(
            chains.project_chain(apply_matrix_chain(l.matrix(), t)), ck),
        20, "reductive element moving the circle")


def _check_um(s: Sampler, trial: int):
    """If C(Id+X)A* stays in Id + unitaries for all unitary X then A = C."""
    l = s.space.n - s.space.m
    ident = RMatrix.identity(l)

    def in_family(c, a):
        prod = c @ (ident + s.unitary(l)) @ a.conj_t() - ident
        return (prod.conj_t() @ prod - ident).is_zero()

    c = s.unitary(l)
    _req(in_family(c, c), "conjugation by a unitary left the family", c=c)
    a = _resample(lambda: s.gl(l), lambda a: a == c, 20, "A distinct from C")
    found = any(not in_family(c, a) for _ in range(50))
    _req(found, "no witness within 50 samples for A != C", c=c, a=a)


def _check_lift(s: Sampler, trial: int):
    """Projection to circles is inverted by lifting through any fiber
    point, uniquely among central translates."""
    space = s.space
    m = space.m
    ks = [k for k in chains.valid_k_range(space) if k < m]
    k = ks[s.rng.randint(0, len(ks) - 1)]
    q = s.q_element()
    t = apply_matrix_chain(q.matrix(), chains.standard_chain(space, k))
    c = chains.project_chain(t)
    p = t.seed
    _req(chains.lift_circle(c, p) == t,
         "lift through a point of the chain is not the chain", k=k, t=t)
    _req(chains.lift_circle(c, from_chart(c.marked)) == c.witness,
         "lift through the marked point is not the witness", k=k)
    f = s.anti_hermitian(m)
    nel = NElement(space, RMatrix.zeros(space.n - m, m), f)
    _req(chains.lift_circle(c, apply_matrix(nel.matrix(), p))
         == apply_matrix_chain(nel.matrix(), t),
         "lift does not commute with central translation", k=k, f=f)
    mt = chains.chain_stabilizer_M(t)
    delta = _resample(lambda: s.anti_hermitian(m), mt.contains,
                      20, "central element outside the chain stabilizer")
    shifted = apply_matrix_chain(
        NElement(space, RMatrix.zeros(space.n - m, m), delta).matrix(), t)
    _req(shifted != t and not member(p, shifted),
         "a different central translate also passes through the point",
         k=k, delta=delta)


def _check_err(s: Sampler, trial: int):
    """Chain stabilizers in the center: conjugation covariance, fiber
    trace, unipotent invariance, and base-change independence."""
    space = s.space
    m = space.m
    ks = list(chains.valid_k_range(space))
    k = ks[s.rng.randint(0, len(ks) - 1)]
    t0 = chains.standard_chain(space, k)
    q = s.q_element()
    t = apply_matrix_chain(q.matrix(), t0)
    mt = chains.chain_stabilizer_M(t)
    a = q.lel.a
    conj = chains.USubspace.from_generators(
        m, [a @ b @ a.conj_t() for b in chains.ek_basis(m, k)])
    _req(mt == conj, "stabilizer does not transform by conjugation",
         k=k, a=a)
    hp = to_chart(t.seed)
    sol = chains.fiber_solutions(t, hp.x)
    _req(sol is not None, "no fiber solutions over a point of the chain",
         k=k)
    y0, kernel = sol
    _req(chains.USubspace.from_generators(m, kernel) == mt,
         "fiber solution directions differ from the stabilizer", k=k)
    _req(mt.contains(hp.y - y0),
         "fiber solutions miss the seed point", k=k)
    for b in mt.basis_matrices():
        _req(member(from_chart(HeisPoint(space, hp.x, hp.y + b)), t),
             "stabilizer direction leaves the chain", k=k, b=b)
    if k < m:
        delta = _resample(lambda: s.anti_hermitian(m), mt.contains,
                          20, "central element outside the stabilizer")
        _req(not member(
                from_chart(HeisPoint(space, hp.x, hp.y + delta)), t),
             "non-stabilizer central translate stays on the chain",
             k=k, delta=delta)
    nel = s.n_element()
    _req(chains.chain_stabilizer_M(apply_matrix_chain(nel.matrix(), t)) == mt,
         "unipotent translation changed the stabilizer", k=k)
    zt = intersect(standard_vinf(space).subspace, t.subspace)
    zb = zt.basis.block(0, m, 0, zt.dim)
    zc = chains.CmSubspace(m, zb)
    _req(chains.um_conjugated_ek(zc) == mt,
         "independent base completion gives a different stabilizer", k=k)
    if 0 < k:
        r = s.gl(k, 3)
        x12 = s.matrix(k, m - k, 3)
        r2 = s.gl(m - k, 3)
        top = r.hstack(x12)
        bot = RMatrix.zeros(m - k, k).hstack(r2)
        p2 = chains._completion(zc.basis) @ top.vstack(bot)
        alt = chains.USubspace.from_generators(
            m, [p2 @ b @ p2.conj_t() for b in chains.ek_basis(m, k)])
        _req(alt == mt, "stabilizer depends on the choice of base change",
             k=k, p2=p2)


def _check_smap(s: Sampler, trial: int):
    """The pair map S spans the expected subspaces of u(m)."""
    space = s.space
    m = space.m
    ks = list(chains.valid_k_range(space))
    k = ks[s.rng.randint(0, len(ks) - 1)]
    zk = chains.CmSubspace(m, RMatrix.identity(m).block(0, m, 0, k))
    _req(chains.s_map(zk, zk)
         == chains.USubspace.from_generators(m, chains.ek_basis(m, k)),
         "standard pair span differs from the corner subspace", k=k)
    full = chains.CmSubspace(m, RMatrix.identity(m))
    _req(chains.s_map(full, full).dim == m * m,
         "full pair span is not all of u(m)")
    zero = chains.CmSubspace(m, RMatrix.zeros(m, 0))
    _req(chains.s_map(zero, full).dim == 0,
         "pair span against the zero subspace is nonzero")
    z = s.cm_subspace(k)
    _req(chains.s_map(z, z) == chains.um_conjugated_ek(z),
         "pair span differs from the conjugated corner subspace",
         k=k, z=z.basis)


def _check_beta(s: Sampler, trial: int):
    """Both beta components have the forced dimension and the information
    space is orthogonal to the error space."""
    space = s.space
    m, n = space.m, space.n
    k = 2 * m - n
    signs = s.signs()
    w = s.beta_domain_point(signs)
    b0, b1 = chains.beta(w, signs)
    _req(b0.dim == k and b1.dim == k,
         "beta components have the wrong dimension", w=w, signs=list(signs))
    err = chains.error_space(w, signs)
    info = chains.info_space(w, signs)
    _req(chains.um_orthogonal(info, err),
         "information space is not orthogonal to the error space",
         w=w, signs=list(signs))
    _req(err == chains.um_conjugated_ek(b0).add(chains.um_conjugated_ek(b1)),
         "error space differs from the conjugated-corner construction",
         w=w, signs=list(signs))
    if trial == 0:
        _req(not chains.in_beta_domain(standard_v0(space), signs),
             "v_0 itself passed the domain test")


def _check_c45(s: Sampler, trial: int):
    """W-chart coordinates of chains through a domain point satisfy the
    unitarity equation, synthetic solutions of the equation pass the image
    test, and random coordinate pairs fail it."""
    space = s.space
    m, n = space.m, space.n
    l = n - m
    ident = RMatrix.identity(l)
    signs = s.signs()
    v0 = standard_v0(space)
    vd = standard_vd(space, signs)
    vinf = standard_vinf(space)
    w = s.beta_domain_point(signs)
    sub0 = span(v0.subspace, w.subspace)
    sub1 = span(vd.subspace, w.subspace)
    a0 = chains.w_coords_at(space, "v0", sub0, signs)
    a1 = chains.w_coords_at(space, "vd", sub1, signs)
    _req(chains.pair_in_image(space, a0, a1),
         "coordinates of a domain point fail the image test",
         w=w, a0=a0, a1=a1, signs=list(signs))
    _req((a0 @ a1.conj_t() - ident) @ (a1 @ a0.conj_t() - ident) == ident,
         "unitarity equation fails on an image pair", a0=a0, a1=a1)
    _req(intersect(vinf.subspace, sub0).dim == m - a0.rank(),
         "verticality index disagrees with the coordinate rank", a0=a0)
    _req(w.subspace.leq(chains.w_chart_at(space, "v0", a0, signs))
         and w.subspace.leq(chains.w_chart_at(space, "vd", a1, signs)),
         "domain point left its own coordinate fibers", w=w, a0=a0, a1=a1)
    b0 = _resample(lambda: s.matrix(l, m), lambda a: a.rank() < l,
                   20, "full-rank coordinate matrix")
    u = s.unitary(l)
    b1 = (ident + u) @ (b0 @ b0.conj_t()).inverse() @ b0
    _req(chains.pair_in_image(space, b0, b1),
         "synthetic unitary-equation solution fails the image test",
         b0=b0, u=u)
    a0r = s.matrix(l, m)
    _resample(lambda: s.matrix(l, m),
              lambda a: chains.pair_in_image(space, a0r, a),
              20, "random pair outside the image")


def _check_surj(s: Sampler, trial: int):
    """Every pair of k-dimensional subspaces is hit by beta, exactly."""
    space = s.space
    k = 2 * space.m - space.n
    signs = s.signs()
    v0 = s.cm_subspace(k)
    v1 = s.cm_subspace(k)
    z = chains.beta_preimage(space, v0, v1, signs)
    _req(chains.in_beta_domain(z, signs),
         "preimage point is outside the beta domain",
         v0=v0.basis, v1=v1.basis, signs=list(signs))
    b0, b1 = chains.beta(z, signs)
    _req(b0 == v0 and b1 == v1, "beta of the preimage differs",
         v0=v0.basis, v1=v1.basis, z=z, signs=list(signs))


def spanning_samples(s: Sampler, signs, budget: int):
    """Greedy count of domain points whose information spaces span u(m).

    Returns the number of samples used, or None if the budget was exhausted
    before the span filled up.
    """
    m = s.space.m
    acc = chains.USubspace.from_generators(m, [])
    for count in range(1, budget + 1):
        w = s.beta_domain_point(signs)
        acc = acc.add(chains.info_space(w, signs))
        if acc.dim == m * m:
            return count
    return None


def _check_span(s: Sampler, trial: int):
    """Finitely many information spaces span u(m)."""
    m = s.space.m
    signs = s.signs()
    used = spanning_samples(s, signs, 50 * m * m)
    _req(used is not None,
         "information spaces failed to span within 50 m^2 samples",
         signs=list(signs))


def _check_oo(s: Sampler, trial: int):
    """Generic joint spans shrink by n - m per step down to the base point,
    which the chain intersection recovers exactly."""
    space = s.space
    m, n = space.m, space.n
    l = chains.oo_point_count(m, n)
    expected = chains.oo_expected_dims(m, n, l)
    last = None
    for _ in range(5):
        z = s.chart_point()
        xs = [s.chart_point() for _ in range(l)]
        try:
            dims = chains.generic_intersection_dims(z, xs)
        except NotTransverseError:
            continue
        last = dims
        if dims == expected:
            ts = [chain_through(z, x) for x in xs]
            got = chains.intersect_chains(ts)
            _req(got == z, "chain intersection missed the base point", z=z)
            return
    raise _Fail("dimension sequence stayed degenerate for 5 attempts",
                expected=expected, last=last)


def _check_ic(s: Sampler, trial: int):
    """Intersecting the connecting chains inverts the point-to-chains map;
    chains through different base points share no point."""
    space = s.space
    m, n = space.m, space.n
    l = chains.oo_point_count(m, n)
    expected = chains.oo_expected_dims(m, n, l)
    for _ in range(5):
        z = s.chart_point()
        xs = [s.chart_point() for _ in range(l)]
        try:
            if chains.generic_intersection_dims(z, xs) != expected:
                continue
        except NotTransverseError:
            continue
        got = chains.intersect_chains([chain_through(z, x) for x in xs])
        _req(got == z, "inverse failed on a generic configuration", z=z)
        break
    else:
        raise _Fail("no generic configuration in 5 attempts")
    for _ in range(10):
        z1 = s.chart_point()
        z2 = s.chart_point()
        if z1 == z2:
            continue
        try:
            t1 = chain_through(z1, s.chart_point())
            t2 = chain_through(z2, s.chart_point())
        except NotTransverseError:
            continue
        try:
            chains.intersect_chains([t1, t2])
        except chains.NoCommonPointError:
            return
    raise _Fail("chains through distinct points kept meeting for 10 attempts")


def _berg_quad(s: Sampler):
    """Four pairwise transverse points on a common (translated) chain."""
    space = s.space
    m = space.m
    ws = []
    for _ in range(40):
        w = s.anti_hermitian(m)
        if all(not (w - prev).det().is_zero() for prev in ws):
            ws.append(w)
        if len(ws) == 4:
            break
    else:
        raise _Fail("could not sample four pairwise transverse chain points")
    g = s.h_unitary(3)
    return [apply_matrix(g, from_chart(HeisPoint(
        space, RMatrix.zeros(space.n - m, m), w))) for w in ws]


def _check_berg(s: Sampler, trial: int):
    """The triple index is alternating, invariant, a cocycle, and attains
    the full range on the diagonal family."""
    space = s.space
    m = space.m
    if trial == 0:
        values = {}
        for bits in range(2 ** m):
            signs = tuple(1 if bits & (1 << i) else -1 for i in range(m))
            v = bergmann_index(standard_vinf(space),
                               standard_vd(space, signs),
                               standard_v0(space))
            values[v] = values.get(v, 0) + 1
        expect = {m - 2 * j: math.comb(m, j) for j in range(m + 1)}
        _req(values == expect,
             "diagonal family misses the expected value distribution",
             got=sorted(values.items()), want=sorted(expect.items()))
    p1, p2, p3, p4 = _berg_quad(s)
    f = bergmann_index(p1, p2, p3)
    _req(bergmann_index(p2, p1, p3) == -f
         and bergmann_index(p1, p3, p2) == -f,
         "index is not alternating", p1=p1, p2=p2, p3=p3)
    g = s.h_unitary(3)
    _req(bergmann_index(apply_matrix(g, p1), apply_matrix(g, p2),
                        apply_matrix(g, p3)) == f,
         "index is not isometry invariant", p1=p1, p2=p2, p3=p3, g=g)
    _req(bergmann_index(p2, p3, p4) - bergmann_index(p1, p3, p4)
         + bergmann_index(p1, p2, p4) - bergmann_index(p1, p2, p3) == 0,
         "cocycle identity fails", p1=p1, p2=p2, p3=p3, p4=p4)


def _check_car(s: Sampler, trial: int):
    """The angular invariant attains its extremes exactly on maximal
    triples (rank one)."""
    space = s.space
    ys = []
    while len(ys) < 3:
        y = s.rational()
        if all(y != prev for prev in ys):
            ys.append(y)
    g = s.h_unitary(3)
    tri = [apply_matrix(g, from_chart(HeisPoint(
        space, RMatrix.zeros(space.n - 1, 1),
        RMatrix.from_rows([[GaussianRational(0, y)]])))) for y in ys]
    c = cartan_invariant(*tri)
    _req(abs(abs(c) - 1.0) <= 1e-9,
         "coplanar triple is not extremal", c=c, tri=tri)
    _req(is_maximal_triple_space(*tri), "coplanar triple is not maximal")
    _req(abs(bergmann_index(*tri)) == 1,
         "maximal triple has non-extremal index")

    def distinct_triple():
        pts = [s.chart_point() for _ in range(3)]
        return pts if len({p.subspace for p in pts}) == 3 else None

    pts = _resample(distinct_triple, lambda p: p is None,
                    20, "distinct random triple")
    maximal = is_maximal_triple_space(*pts)
    c2 = cartan_invariant(*pts)
    _req((abs(c2) >= 1.0 - 1e-9) == maximal,
         "angular extremality disagrees with exact maximality",
         c=c2, maximal=maximal, pts=pts)


def _check_xsig(s: Sampler, trial: int):
    """Exact signature agrees with the floating eigenvalue count."""
    size = s.rng.randint(2, 8)
    a = s.hermitian(size)
    exact = hermitian_signature(a)
    arr = numpy.array(
        [[complex(float(v.re), float(v.im)) for v in row]
         for row in a.entries()],
        dtype=complex,
    )
    evs = numpy.linalg.eigvalsh(arr)
    plus = int((evs > 1e-8).sum())
    minus = int((evs < -1e-8).sum())
    approx = (plus, minus, size - plus - minus)
    _req(exact == approx,
         "exact and floating signatures disagree",
         a=a, exact=list(exact), approx=list(approx))


# ---------------------------------------------------------------------------
# registry and drivers


def _any_regime(m: int, n: int) -> bool:
    return 1 <= m <= n


def _chart_regime(m: int, n: int) -> bool:
    return 1 <= m < n


def _beta_regime(m: int, n: int) -> bool:
    return m < n < 2 * m


def _rank_one_regime(m: int, n: int) -> bool:
    return m == 1 and n > 1


@dataclass(frozen=True)
class CheckDef:
    fn: object
    gate: object
    gate_reason: str
    description: str


REGISTRY = {
    "VC": CheckDef(_check_vc, _chart_regime, "needs m < n",
                   "vertical chains <-> W-points bijection"),
    "VF": CheckDef(_check_vf, _chart_regime, "needs m < n",
                   "fibers are simply transitive center orbits"),
    "TI": CheckDef(_check_ti, _any_regime, "",
                   "index realizability and invariance"),
    "TK": CheckDef(_check_tk, _any_regime, "",
                   "chart parametrization of the standard chains"),
    "S0": CheckDef(_check_s0, _any_regime, "",
                   "block stabilizer of (v_inf, v_0, T_k)"),
    "S1": CheckDef(_check_s1, _chart_regime, "needs m < n",
                   "circle stabilizer factors through the center"),
    "UM": CheckDef(_check_um, _chart_regime, "needs m < n",
                   "unitary-family rigidity"),
    "LIFT": CheckDef(_check_lift, _chart_regime, "needs m < n",
                     "unique lifts of circles"),
    "ERR": CheckDef(_check_err, _any_regime, "",
                    "center stabilizers of chains"),
    "SMAP": CheckDef(_check_smap, _any_regime, "",
                     "pair spans in u(m)"),
    "BETA": CheckDef(_check_beta, _beta_regime, "needs m < n < 2m",
                     "beta dimensions and orthogonality"),
    "C45": CheckDef(_check_c45, _beta_regime, "needs m < n < 2m",
                    "image characterization of coordinate pairs"),
    "SURJ": CheckDef(_check_surj, _beta_regime, "needs m < n < 2m",
                     "beta surjectivity roundtrip"),
    "SPAN": CheckDef(_check_span, _beta_regime, "needs m < n < 2m",
                     "information spaces span u(m)"),
    "OO": CheckDef(_check_oo, _chart_regime, "needs m < n",
                   "generic intersection dimension recursion"),
    "IC": CheckDef(_check_ic, _chart_regime, "needs m < n",
                   "chain intersection inverts the chain map"),
    "BERG": CheckDef(_check_berg, _any_regime, "",
                     "triple index: alternating, invariant, cocycle, range"),
    "CAR": CheckDef(_check_car, _rank_one_regime, "needs m = 1 < n",
                    "angular invariant vs exact maximality"),
    "XSIG": CheckDef(_check_xsig, _any_regime, "",
                     "exact vs floating signature"),
}


@dataclass
class CheckReport:
    check_id: str
    params: dict
    trials: int
    failures: int
    first_counterexample: dict | None
    elapsed: float
    status: str
    skip_reason: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {
            "check": self.check_id,
            "params": self.params,
            "trials": self.trials,
            "failures": self.failures,
            "status": self.status,
            "elapsed": round(self.elapsed, 3),
        }
        if self.first_counterexample is not None:
            out["counterexample"] = self.first_counterexample
        if self.skip_reason:
            out["skip_reason"] = self.skip_reason
        return out


def run_check(check_id: str, cfg: SampleConfig, trials: int) -> CheckReport:
    """Run one registered check for `trials` independent seeded instances."""
    entry = REGISTRY.get(check_id)
    if entry is None:
        raise UnknownCheckError("unknown check id: %r" % check_id)
    if not entry.gate(cfg.m, cfg.n):
        raise chains.InvalidRegimeError(
            "check %s does not apply to (m, n) = (%d, %d): %s"
            % (check_id, cfg.m, cfg.n, entry.gate_reason))
    start = time.perf_counter()
    failures = 0
    first = None
    for j in range(trials):
        s = Sampler(cfg, Rng(cfg.seed).split(check_id, j))
        try:
            entry.fn(s, j)
        except _Fail as f:
            failures += 1
            if first is None:
                first = _replay_header(check_id, cfg, j)
                first.update(f.info)
        except Exception as exc:  # genuine bug: report, do not crash the suite
            failures += 1
            if first is None:
                first = _replay_header(check_id, cfg, j)
                first["reason"] = "unexpected error"
                first["error"] = repr(exc)
    elapsed = time.perf_counter() - start
    return CheckReport(
        check_id=check_id,
        params={"m": cfg.m, "n": cfg.n, "seed": cfg.seed,
                "height": cfg.height},
        trials=trials,
        failures=failures,
        first_counterexample=first,
        elapsed=elapsed,
        status="fail" if failures else "pass",
    )


def _replay_header(check_id: str, cfg: SampleConfig, trial: int) -> dict:
    return {
        "check": check_id,
        "m": cfg.m,
        "n": cfg.n,
        "seed": cfg.seed,
        "height": cfg.height,
        "trial": trial,
    }


def replay(counterexample: dict) -> bool:
    """Re-run the single trial recorded in a counterexample.

    Returns True when the trial fails again (the counterexample is
    replayable), False when it passes.
    """
    check_id = counterexample["check"]
    cfg = SampleConfig(
        m=counterexample["m"],
        n=counterexample["n"],
        seed=counterexample["seed"],
        height=counterexample["height"],
    )
    j = counterexample["trial"]
    entry = REGISTRY[check_id]
    s = Sampler(cfg, Rng(cfg.seed).split(check_id, j))
    try:
        entry.fn(s, j)
    except Exception:
        return True
    return False


def _worker(args):
    check_id, cfg, trials = args
    return run_check(check_id, cfg, trials)


def default_workers() -> int:
    env = os.environ.get("CHAINGEO_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def run_suite(ids, cfg: SampleConfig, trials: int,
              trial_overrides: dict | None = None,
              workers: int | None = None) -> list:
    """Run several checks, skipping the ones whose regime does not apply.

    Checks run in parallel processes (capped by CHAINGEO_THREADS); the
    report list is merged back in registry order regardless.
    """
    if ids == "all":
        ids = list(REGISTRY)
    else:
        ids = list(ids)
    for check_id in ids:
        if check_id not in REGISTRY:
            raise UnknownCheckError("unknown check id: %r" % check_id)
    overrides = trial_overrides or {}
    runnable = []
    reports = {}
    for check_id in ids:
        entry = REGISTRY[check_id]
        if not entry.gate(cfg.m, cfg.n):
            reports[check_id] = CheckReport(
                check_id=check_id,
                params={"m": cfg.m, "n": cfg.n, "seed": cfg.seed,
                        "height": cfg.height},
                trials=0,
                failures=0,
                first_counterexample=None,
                elapsed=0.0,
                status="skip",
                skip_reason=entry.gate_reason,
            )
        else:
            runnable.append((check_id, cfg, overrides.get(check_id, trials)))
    nworkers = workers if workers is not None else default_workers()
    nworkers = max(1, min(nworkers, len(runnable) or 1))
    if nworkers == 1 or len(runnable) <= 1:
        for args in runnable:
            reports[args[0]] = _worker(args)
    else:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            for report in pool.map(_worker, runnable):
                reports[report.check_id] = report
    return [reports[check_id] for check_id in ids]


def suite_exit_code(reports) -> int:
    """0 all pass, 1 any failure, 3 nothing ran (all skipped)."""
    if any(r.status == "fail" for r in reports):
        return 1
    if reports and all(r.status == "skip" for r in reports):
        return 3
    return 0

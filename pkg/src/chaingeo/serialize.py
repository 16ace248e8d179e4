"""Exact JSON interchange for all geometric objects.

Every rational is serialized as a reduced "p/q" string (never a float), so
files are exact and byte-stable across platforms.  Schemas:

  scalar     {"re": "p/q", "im": "r/s"}
  matrix     {"rows": r, "cols": c, "data": [scalar ... row-major]}
  subspace   {"m": m, "n": n, "basis": matrix}
  point      subspace + {"kind": "shilov-point"}
  chain      subspace + {"kind": "m-chain"} (+ optional "point": point)
  heis point {"X": matrix, "Y": matrix}
  w point    {"A": matrix}
  u-subspace [matrix, ...]  (real basis of anti-Hermitian matrices)
  circle     {"k": k, "witness": chain, "marked": heis point}
  tuples     {"kind": "pair"|"triple", "points": [point, ...]}

Subspace bases are canonicalized on load (the constructor normalizes), so
equality of loaded objects is equality of serializations.
"""

from __future__ import annotations

from .exactnum import GaussianRational, RMatrix, rat_from_str, rat_str
from .hermitian import GeometryError, HermSpace, Subspace
from .shilov import MChain, ShilovPoint
from .heisenberg import HeisPoint, WPoint
from .chains import Circle, USubspace


class SchemaError(GeometryError):
    """Input JSON does not match the expected object schema."""


def scalar_to_json(s: GaussianRational) -> dict:
    return {"re": rat_str(s.re), "im": rat_str(s.im)}


def scalar_from_json(obj) -> GaussianRational:
    try:
        return GaussianRational(rat_from_str(obj["re"]), rat_from_str(obj["im"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError("bad scalar: %s" % (exc,))


def matrix_to_json(a: RMatrix) -> dict:
    return {
        "rows": a.rows,
        "cols": a.cols,
        "data": [scalar_to_json(v) for row in a.entries() for v in row],
    }


def matrix_from_json(obj) -> RMatrix:
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except (KeyError, TypeError):
        raise SchemaError("bad matrix object")
    if not (isinstance(rows, int) and isinstance(cols, int)):
        raise SchemaError("matrix dimensions must be integers")
    if len(data) != rows * cols:
        raise SchemaError("matrix data length mismatch")
    if rows == 0 or cols == 0:
        return RMatrix.zeros(rows, cols)
    vals = [scalar_from_json(v) for v in data]
    return RMatrix.from_rows(
        [vals[i * cols : (i + 1) * cols] for i in range(rows)]
    )


def subspace_to_json(v: Subspace) -> dict:
    return {"m": v.space.m, "n": v.space.n, "basis": matrix_to_json(v.basis)}


def subspace_from_json(obj) -> Subspace:
    try:
        space = HermSpace(obj["m"], obj["n"])
        basis = matrix_from_json(obj["basis"])
    except (KeyError, TypeError):
        raise SchemaError("bad subspace object")
    return Subspace(space, basis)


def point_to_json(x: ShilovPoint) -> dict:
    out = subspace_to_json(x.subspace)
    out["kind"] = "shilov-point"
    return out


def point_from_json(obj) -> ShilovPoint:
    if obj.get("kind") != "shilov-point":
        raise SchemaError("expected a shilov-point")
    sub = subspace_from_json(obj)
    return ShilovPoint(sub.space, sub)


def chain_to_json(t: MChain) -> dict:
    out = subspace_to_json(t.subspace)
    out["kind"] = "m-chain"
    if t.seed is not None:
        out["point"] = point_to_json(t.seed)
    return out


def chain_from_json(obj) -> MChain:
    if obj.get("kind") != "m-chain":
        raise SchemaError("expected an m-chain")
    sub = subspace_from_json(obj)
    seed = point_from_json(obj["point"]) if "point" in obj else None
    return MChain(sub.space, sub, seed=seed)


def heis_to_json(p: HeisPoint) -> dict:
    return {"X": matrix_to_json(p.x), "Y": matrix_to_json(p.y)}


def heis_from_json(obj) -> HeisPoint:
    try:
        x = matrix_from_json(obj["X"])
        y = matrix_from_json(obj["Y"])
    except (KeyError, TypeError):
        raise SchemaError("bad chart-point object")
    return HeisPoint(HermSpace(y.rows, x.rows + y.rows), x, y)


def w_to_json(w: WPoint) -> dict:
    return {"A": matrix_to_json(w.a)}


def w_from_json(obj) -> WPoint:
    try:
        a = matrix_from_json(obj["A"])
    except (KeyError, TypeError):
        raise SchemaError("bad w-point object")
    return WPoint(HermSpace(a.cols, a.rows + a.cols), a)


def usubspace_to_json(u: USubspace) -> list:
    return [matrix_to_json(b) for b in u.basis_matrices()]


def usubspace_from_json(obj, m: int | None = None) -> USubspace:
    if not isinstance(obj, list):
        raise SchemaError("expected a list of matrices")
    mats = [matrix_from_json(b) for b in obj]
    if not mats:
        if m is None:
            raise SchemaError("empty basis needs an explicit dimension")
        return USubspace.from_generators(m, [])
    return USubspace.from_generators(mats[0].rows, mats)


def circle_to_json(c: Circle) -> dict:
    return {
        "k": c.k,
        "witness": chain_to_json(c.witness),
        "marked": heis_to_json(c.marked),
    }


def circle_from_json(obj) -> Circle:
    try:
        k = obj["k"]
        witness = chain_from_json(obj["witness"])
        marked = heis_from_json(obj["marked"])
    except (KeyError, TypeError):
        raise SchemaError("bad circle object")
    return Circle(k, witness, marked)


def tuple_to_json(kind: str, points) -> dict:
    return {"kind": kind, "points": [point_to_json(p) for p in points]}


def tuple_from_json(obj):
    if obj.get("kind") not in ("pair", "triple"):
        raise SchemaError("expected a pair or triple")
    pts = [point_from_json(p) for p in obj["points"]]
    want = 2 if obj["kind"] == "pair" else 3
    if len(pts) != want:
        raise SchemaError("wrong number of points for a %s" % obj["kind"])
    return tuple(pts)


def object_to_json(obj):
    """Serialize any supported object by type dispatch."""
    if isinstance(obj, ShilovPoint):
        return point_to_json(obj)
    if isinstance(obj, MChain):
        return chain_to_json(obj)
    if isinstance(obj, HeisPoint):
        return heis_to_json(obj)
    if isinstance(obj, WPoint):
        return w_to_json(obj)
    if isinstance(obj, Circle):
        return circle_to_json(obj)
    if isinstance(obj, USubspace):
        return usubspace_to_json(obj)
    if isinstance(obj, Subspace):
        return subspace_to_json(obj)
    if isinstance(obj, RMatrix):
        return matrix_to_json(obj)
    if isinstance(obj, GaussianRational):
        return scalar_to_json(obj)
    if isinstance(obj, tuple):
        kind = {2: "pair", 3: "triple"}.get(len(obj))
        if kind:
            return tuple_to_json(kind, obj)
    raise SchemaError("cannot serialize %r" % type(obj).__name__)


def object_from_json(obj):
    """Load any supported object, dispatching on its shape."""
    if isinstance(obj, list):
        return usubspace_from_json(obj)
    if not isinstance(obj, dict):
        raise SchemaError("expected a JSON object")
    kind = obj.get("kind")
    if kind == "shilov-point":
        return point_from_json(obj)
    if kind == "m-chain":
        return chain_from_json(obj)
    if kind in ("pair", "triple"):
        return tuple_from_json(obj)
    if "witness" in obj:
        return circle_from_json(obj)
    if "X" in obj and "Y" in obj:
        return heis_from_json(obj)
    if "A" in obj:
        return w_from_json(obj)
    if "basis" in obj:
        return subspace_from_json(obj)
    if "data" in obj:
        return matrix_from_json(obj)
    if "re" in obj:
        return scalar_from_json(obj)
    raise SchemaError("unrecognized object shape")

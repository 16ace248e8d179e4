"""JSON serialization roundtrips and schema validation."""

import json

import pytest

from chaingeo.exactnum import GaussianRational, RMatrix
from chaingeo.hermitian import HermSpace, Subspace
from chaingeo.shilov import MChain, ShilovPoint, standard_v0
from chaingeo.heisenberg import HeisPoint, WPoint
from chaingeo.chains import Circle, USubspace, project_chain, um_basis
from chaingeo.sampler import SampleConfig, Sampler
from chaingeo.serialize import (
    SchemaError,
    chain_from_json,
    chain_to_json,
    circle_from_json,
    circle_to_json,
    heis_from_json,
    heis_to_json,
    matrix_from_json,
    matrix_to_json,
    object_from_json,
    object_to_json,
    point_from_json,
    point_to_json,
    scalar_from_json,
    scalar_to_json,
    subspace_from_json,
    subspace_to_json,
    tuple_from_json,
    tuple_to_json,
    usubspace_from_json,
    usubspace_to_json,
    w_from_json,
    w_to_json,
)


def sampler(m=2, n=3, seed=5):
    return Sampler(SampleConfig(m=m, n=n, seed=seed))


def via_json(obj):
    """Full roundtrip through an actual JSON text encoding."""
    return json.loads(json.dumps(obj))


def test_scalar_roundtrip_exact():
    s = sampler()
    for _ in range(20):
        x = s.scalar()
        assert scalar_from_json(via_json(scalar_to_json(x))) == x
    big = GaussianRational("123456789/987654321", "-5/7")
    assert scalar_from_json(via_json(scalar_to_json(big))) == big


def test_matrix_roundtrip_including_empty():
    s = sampler()
    a = s.matrix(3, 2)
    assert matrix_from_json(via_json(matrix_to_json(a))) == a
    empty = RMatrix.zeros(0, 3)
    back = matrix_from_json(via_json(matrix_to_json(empty)))
    assert (back.rows, back.cols) == (0, 3)


def test_matrix_schema_errors():
    with pytest.raises(SchemaError):
        matrix_from_json({"rows": 2, "cols": 2})
    with pytest.raises(SchemaError):
        matrix_from_json({"rows": 2, "cols": 2, "data": []})
    with pytest.raises(SchemaError):
        matrix_from_json({"rows": "2", "cols": 2, "data": []})
    with pytest.raises(SchemaError):
        scalar_from_json({"re": "1"})
    with pytest.raises(SchemaError):
        scalar_from_json({"re": "1", "im": "x"})


def test_subspace_and_point_roundtrip():
    s = sampler(2, 3)
    x = s.chart_point()
    obj = via_json(point_to_json(x))
    assert obj["kind"] == "shilov-point"
    assert obj["m"] == 2 and obj["n"] == 3
    back = point_from_json(obj)
    assert back.subspace == x.subspace
    sub = x.subspace
    assert subspace_from_json(via_json(subspace_to_json(sub))) == sub
    with pytest.raises(SchemaError):
        point_from_json({"kind": "m-chain"})


def test_chain_roundtrip_with_and_without_seed():
    s = sampler(2, 3)
    t = s.chain(1)
    obj = via_json(chain_to_json(t))
    assert obj["kind"] == "m-chain"
    back = chain_from_json(obj)
    assert back.subspace == t.subspace
    assert (back.seed is None) == (t.seed is None)
    if t.seed is not None:
        assert back.seed.subspace == t.seed.subspace
    bare = MChain(t.space, t.subspace, seed=None)
    obj2 = via_json(chain_to_json(bare))
    assert "point" not in obj2
    assert chain_from_json(obj2).seed is None
    with pytest.raises(SchemaError):
        chain_from_json({"kind": "shilov-point"})


def test_heis_and_w_roundtrip():
    s = sampler(2, 3)
    hp = s.heis_point()
    back = heis_from_json(via_json(heis_to_json(hp)))
    assert back == hp
    assert back.space == hp.space
    w = WPoint(s.space, s.matrix(1, 2))
    backw = w_from_json(via_json(w_to_json(w)))
    assert backw == w
    with pytest.raises(SchemaError):
        heis_from_json({"X": matrix_to_json(hp.x)})
    with pytest.raises(SchemaError):
        w_from_json({"B": 3})


def test_usubspace_roundtrip_and_empty_basis():
    u = USubspace.from_generators(2, um_basis(2)[:2])
    back = usubspace_from_json(via_json(usubspace_to_json(u)))
    assert back == u
    empty = USubspace.from_generators(2, [])
    assert usubspace_from_json(via_json(usubspace_to_json(empty)), m=2) == empty
    with pytest.raises(SchemaError):
        usubspace_from_json([], m=None)
    with pytest.raises(SchemaError):
        usubspace_from_json({"not": "a list"})


def test_circle_roundtrip():
    s = sampler(2, 3)
    c = project_chain(s.chain(1))
    obj = via_json(circle_to_json(c))
    back = circle_from_json(obj)
    assert back.k == c.k
    assert back.witness.subspace == c.witness.subspace
    assert back.marked == c.marked
    with pytest.raises(SchemaError):
        circle_from_json({"k": 1})


def test_tuple_roundtrip():
    s = sampler(2, 3)
    trip = s.maximal_triple()
    obj = via_json(tuple_to_json("triple", trip))
    back = tuple_from_json(obj)
    assert all(a.subspace == b.subspace for a, b in zip(back, trip))
    pair = trip[:2]
    obj2 = via_json(tuple_to_json("pair", pair))
    assert len(tuple_from_json(obj2)) == 2
    with pytest.raises(SchemaError):
        tuple_from_json({"kind": "pair", "points": [point_to_json(trip[0])]})
    with pytest.raises(SchemaError):
        tuple_from_json({"kind": "quad", "points": []})


def test_object_dispatch_covers_all_kinds():
    s = sampler(2, 3)
    x = s.chart_point()
    samples = [
        x,
        s.chain(1),
        s.heis_point(),
        WPoint(s.space, s.matrix(1, 2)),
        project_chain(s.split("c").chain(1)),
        USubspace.from_generators(2, um_basis(2)[:3]),
        x.subspace,
        s.matrix(2, 2),
        s.scalar(),
        (x, standard_v0(s.space)),
        s.maximal_triple(),
    ]
    for obj in samples:
        encoded = via_json(object_to_json(obj))
        back = object_from_json(encoded)
        assert object_to_json(back) == object_to_json(obj)


def test_object_dispatch_rejects_unknown():
    with pytest.raises(SchemaError):
        object_to_json({"some": "dict"})
    with pytest.raises(SchemaError):
        object_to_json((1, 2, 3, 4))
    with pytest.raises(SchemaError):
        object_from_json({"unknown": True})
    with pytest.raises(SchemaError):
        object_from_json(17)


def test_golden_encodings_are_stable():
    # pinned textual form: exact rationals as "num/den" strings
    x = GaussianRational("2/3", "-1/2")
    assert scalar_to_json(x) == {"re": "2/3", "im": "-1/2"}
    a = RMatrix.from_rows([[GaussianRational(1), GaussianRational(0, 1)]])
    assert matrix_to_json(a) == {
        "rows": 1,
        "cols": 2,
        "data": [{"re": "1/1", "im": "0/1"}, {"re": "0/1", "im": "1/1"}],
    }
    space = HermSpace(1, 2)
    v0 = standard_v0(space)
    assert point_to_json(v0) == {
        "kind": "shilov-point",
        "m": 1,
        "n": 2,
        "basis": {
            "rows": 3,
            "cols": 1,
            "data": [
                {"re": "0/1", "im": "0/1"},
                {"re": "0/1", "im": "0/1"},
                {"re": "1/1", "im": "0/1"},
            ],
        },
    }

import random

import pytest

from bimatch.errors import DimensionMismatch, ValidationError
from bimatch.linalg import contains
from bimatch.persistence import (
    Barcode,
    IndexedInterval,
    IntervalKey,
    PersistenceDiagram,
    PersistenceModule,
    barcode,
    composite,
    diagram,
    direct_sum,
    interval_module,
    persist_subspace,
    realize_matching,
    zero_module,
)
from oracles import diagram_from_ranks, rank_invariant

from helpers import random_module

RUN_V = ([0, 3, 2], [[[], [], []], [[1, 0, 0], [0, 0, 1]]])
RUN_U = ([2, 3, 1], [[[1, 0], [0, 0], [0, 1]], [[0, 1, 0]]])


def test_running_example_decompositions():
    V = PersistenceModule.build(*RUN_V)
    U = PersistenceModule.build(*RUN_U)
    assert diagram(V) == {(2, 2): 1, (2, 3): 2}
    assert diagram(U) == {(1, 2): 2, (2, 3): 1}
    assert str(barcode(diagram(V))) == "{[2,3] x 2; [2,2] x 1}"


def test_diagram_matches_rank_invariant_oracle():
    rng = random.Random(11)
    for _ in range(300):
        v = random_module(rng, rng.randint(1, 5), 3)
        expected = diagram_from_ranks(rank_invariant(v.dims, [m.rows for m in v.maps]), v.n)
        assert diagram(v) == expected


def test_interval_module_diagram():
    for n in range(1, 5):
        for a in range(1, n + 1):
            for b in range(a, n + 1):
                assert diagram(interval_module(a, b, n)) == {(a, b): 1}


def test_interval_module_rejects_bad_bounds():
    with pytest.raises(ValueError):
        interval_module(3, 2, 4)


def test_zero_module_has_empty_barcode():
    assert barcode(diagram(zero_module(4))).cardinality == 0


def test_direct_sum_adds_diagrams():
    rng = random.Random(2)
    for _ in range(100):
        n = rng.randint(1, 4)
        v, w = random_module(rng, n, 3), random_module(rng, n, 3)
        assert diagram(direct_sum(v, w)) == diagram(v) + diagram(w)


def test_direct_sum_length_mismatch():
    with pytest.raises(DimensionMismatch):
        direct_sum(zero_module(2), zero_module(3))


def test_dims_recovered_from_barcode():
    rng = random.Random(4)
    for _ in range(100):
        v = random_module(rng, rng.randint(1, 5), 4)
        d = diagram(v)
        for i in range(1, v.n + 1):
            assert sum(m for k, m in d.items() if k.a <= i <= k.b) == v.dim_at(i)


def test_persist_subspace_nested_in_birth():
    rng = random.Random(8)
    for _ in range(50):
        v = random_module(rng, 4, 3)
        for b in range(1, 5):
            for a in range(1, b + 1):
                assert contains(persist_subspace(v, a, b), persist_subspace(v, a - 1, b))


def test_persist_subspace_zero_out_of_range():
    v = interval_module(1, 2, 2)
    assert persist_subspace(v, 2, 1).is_zero()
    assert persist_subspace(v, 0, 1).is_zero()
    assert persist_subspace(v, 1, 3).dim == 0


def test_composite_bounds():
    v = interval_module(1, 3, 3)
    assert composite(v, 1, 3).tolist() == [[1]]
    assert composite(v, 0, 2).is_zero()
    assert composite(v, 2, 4).is_zero()
    with pytest.raises(ValueError):
        composite(v, 3, 2)
    with pytest.raises(ValueError):
        composite(v, 1, 5)


def test_build_rejects_bad_shapes():
    with pytest.raises(ValidationError):
        PersistenceModule.build([1, 2], [[[1, 0]]])
    with pytest.raises(ValidationError):
        PersistenceModule.build([1, 1], [])
    with pytest.raises(ValidationError):
        PersistenceModule.build([-1], [])


def test_build_rejects_non_integer_entries():
    with pytest.raises(ValidationError):
        PersistenceModule.build([1, 1], [[[0.5]]])


def test_diagram_mapping_behaviour():
    d = PersistenceDiagram(3, {(1, 2): 2, (2, 2): 0})
    assert d[(1, 2)] == 2
    assert d[(3, 3)] == 0
    assert list(d) == [IntervalKey(1, 2)]
    assert len(d) == 1
    with pytest.raises(ValidationError):
        PersistenceDiagram(3, {(1, 1): -1})


def test_barcode_canonical_order_and_copies():
    bc = Barcode.from_counts({(2, 2): 1, (1, 2): 2, (1, 3): 1, (2, 3): 2})
    assert [tuple(k) for k, _ in bc] == [(1, 3), (1, 2), (2, 3), (2, 2)]
    assert bc.cardinality == 6
    assert [str(x) for x in bc.representation_set()][:3] == ["[1,3]#1", "[1,2]#1", "[1,2]#2"]


def test_barcode_rejects_duplicates_and_nonpositive():
    with pytest.raises(ValidationError):
        Barcode(((IntervalKey(1, 1), 0),))
    with pytest.raises(ValidationError):
        Barcode(((IntervalKey(1, 1), 1), (IntervalKey(1, 1), 2)))


def test_realize_matching_is_deterministic_and_bounded():
    dV = PersistenceDiagram(3, {(2, 3): 2, (2, 2): 1})
    dU = PersistenceDiagram(3, {(1, 2): 2, (2, 3): 1})
    pairs = realize_matching({(2, 3, 2, 3): 1, (2, 3, 1, 2): 1}, dV, dU)
    # key pairs are consumed in canonical order: (2,3,1,2) before (2,3,2,3)
    assert [(str(x), str(y)) for x, y in pairs] == [("[2,3]#1", "[1,2]#1"), ("[2,3]#2", "[2,3]#1")]
    with pytest.raises(ValidationError):
        realize_matching({(2, 2, 1, 2): 3}, dV, dU)


def test_indexed_interval_str():
    assert str(IndexedInterval(IntervalKey(1, 4), 2)) == "[1,4]#2"

import warnings
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from carrier.dividing import (DividingSet, FaceDiagram, NonconvexWarning, classify_arcs,
                              detect_closed, load_dividing, tb_face, tb_total)
from carrier.errors import CarrierError
from carrier.generate import (normal_dividing, random_dividing, random_noncrossing,
                              random_shelled_triangulation)


def matchings(points):
    if not points:
        yield []
        return
    a = points[0]
    for i in range(1, len(points)):
        rest = points[1:i] + points[i + 1:]
        for m in matchings(rest):
            yield [(a, points[i])] + m


@pytest.mark.parametrize("m", range(0, 7))
def test_validator_accepts_exactly_catalan_many_matchings(m):
    accepted = 0
    for pairs in matchings(list(range(2 * m))):
        try:
            FaceDiagram((2 * m, 0, 0), [((0, a), (0, b)) for a, b in pairs])
        except CarrierError as e:
            assert e.code == "CROSSING_ARCS"
        else:
            accepted += 1
    assert accepted == comb(2 * m, m) // (m + 1)


def test_interleaved_pairs_cross():
    with pytest.raises(CarrierError) as err:
        FaceDiagram((4, 0, 0), [((0, 0), (0, 2)), ((0, 1), (0, 3))])
    assert err.value.code == "CROSSING_ARCS"


def test_corner_arcs_at_one_vertex_load(single_tet):
    text = ("face 0 1 counts n01=0 n02=0 n12=1 closed=0\n"
            "face 0 2 counts n01=0 n02=0 n12=1 closed=0\n"
            "face 0 3 counts n01=0 n02=0 n12=1 closed=0\n")
    D = load_dividing(single_tet, text)
    assert D.serialize() == text
    assert tb_total(D) == -3


def test_edge_mismatch(single_tet):
    # face 3 puts 2 endpoints on edge 01; face 2 puts 4 there
    text = ("face 0 3 counts n01=0 n02=0 n12=0 bp=0:1:1 closed=0\n"
            "face 0 2 counts n01=0 n02=0 n12=0 bp=0:1:2 closed=0\n")
    with pytest.raises(CarrierError) as err:
        load_dividing(single_tet, text)
    assert err.value.code == "EDGE_MISMATCH"


def test_strict_mode_requires_two_endpoints_per_edge(single_tet):
    text = "face 0 3 counts n01=1 n02=0 n12=0 closed=0\nface 0 2 counts n01=1 closed=0\n"
    with pytest.raises(CarrierError):
        load_dividing(single_tet, text, require_negative_tb=True)


@pytest.mark.parametrize("text", [
    "face 0 0 counts n01=-1 closed=0\n",
    "face 0 0 explicit slots e0=2 e1=0 e2=0 match (e0.0,e0.0) closed=0\n",
    "face 0 0 explicit slots e0=2 e1=0 e2=0 match closed=0\n",
    "face 9 0 counts closed=0\n",
    "fase 0 0 counts closed=0\n",
])
def test_parse_errors(single_tet, text):
    with pytest.raises(CarrierError):
        load_dividing(single_tet, text)


def test_tb_face_values(single_tet):
    d = FaceDiagram.from_counts(1, 1, 1, {(0, 1): 1, (2, 0): 1})
    assert len(d.partner) == 10 and d.arc_count == 5
    D = normal_dividing(single_tet, [[1, 0, 0, 0]])
    assert tb_face(D, (0, 1)) == -1
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert tb_face(D, (0, 0)) == 0
    assert any(issubclass(w.category, NonconvexWarning) for w in caught)


def test_tb_total_of_empty_and_of_four_single_arcs(double_tet):
    empty = DividingSet(double_tet, [FaceDiagram((0, 0, 0))] * 4)
    assert tb_total(empty) == 0
    D = normal_dividing(double_tet, [[1, 0, 0, 0], [1, 0, 0, 0]])
    assert sum(d.arc_count for d in D.diagrams) == 3
    assert tb_total(D) == -3


def test_detect_closed(single_tet):
    D = DividingSet(single_tet, [FaceDiagram((0, 0, 0), closed=2)] + [FaceDiagram((0, 0, 0))] * 3)
    assert detect_closed(D) == [((0, 0), 2)]
    with pytest.raises(CarrierError) as err:
        tb_total(D)
    assert err.value.code == "CLOSED_COMPONENT"
    assert detect_closed(DividingSet(single_tet, [FaceDiagram((0, 0, 0))] * 4)) == []


def test_single_mid_edge_arc_is_boundary_parallel():
    d = FaceDiagram((0, 0, 2), [((2, 0), (2, 1))])
    n01, n02, n12, bp, closed = d.counts()
    assert (n01, n02, n12) == (0, 0, 0)
    assert sum(bp.values()) == 1 and list(bp)[0][0] == 2


def test_explicit_form_used_when_counts_do_not_determine():
    # nested boundary-parallel arcs at both ends of edge 0
    d = FaceDiagram((8, 0, 0), [((0, 0), (0, 3)), ((0, 1), (0, 2)),
                                ((0, 4), (0, 7)), ((0, 5), (0, 6))])
    assert not d.determined_by_counts()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 12), st.integers(0, 10 ** 6))
def test_buckets_partition_arcs(m, seed):
    import random
    rng = random.Random(seed)
    partner = random_noncrossing(m, rng)
    cut = sorted(rng.choices(range(2 * m + 1), k=2))
    slots = (cut[0], cut[1] - cut[0], 2 * m - cut[1])
    d = FaceDiagram._from_partner(slots, partner)
    again = FaceDiagram(slots, d.arcs())
    assert again == d
    n01, n02, n12, bp, _ = d.counts()
    assert n01 + n02 + n12 + sum(bp.values()) == d.arc_count == m


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10 ** 6))
def test_random_dividing_sets_roundtrip_and_agree_along_edges(n, seed):
    T = random_shelled_triangulation(n, seed)
    D = random_dividing(T, seed, max_per_edge=10)
    assert load_dividing(T, D.serialize()) == D
    for e in range(len(T.edges)):
        counts = {D.diagrams[fid].slots[i] for fid, i, _ in T.edge_occurrences(e)}
        assert len(counts) <= 1
    for fid in range(len(T.faces)):
        assert tb_face(D, fid) == -D.diagrams[fid].arc_count
        n01, n02, n12, bp, _ = classify_arcs(D, fid)
        assert n01 + n02 + n12 + sum(bp.values()) == D.diagrams[fid].arc_count

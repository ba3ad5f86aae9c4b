import random

import pytest
from hypothesis import given, settings, strategies as st

from carrier.dividing import DividingSet, FaceDiagram, tb_total
from carrier.errors import CarrierError, OvertwistedHint, PropertyFailure
from carrier.generate import (normal_dividing, random_dividing, random_shelled_triangulation,
                              random_triangulation)
from carrier.normalize import (apply_edge_isotopy, extract_prisms, find_bypass_candidates,
                               normal_form_violations, normalize, quad_corners)


def bp_in_middle(T):
    """Single tetrahedron: triangles at vertices 0 and 1, plus a far arc on edge 01.

    Edge 01 is face-local edge 2 on faces 2 and 3; the far arc sits between
    the two corner arcs there.
    """
    base = normal_dividing(T, [[1, 1, 0, 0]])
    faces = list(base.diagrams)
    for fid in (2, 3):
        d = faces[fid]
        shift = [tuple((e, i + 2 if e == 2 and i >= 1 else i) for e, i in arc) for arc in d.arcs()]
        slots = (d.slots[0], d.slots[1], d.slots[2] + 2)
        faces[fid] = FaceDiagram(slots, shift + [((2, 1), (2, 2))])
    return DividingSet(T, faces)


def test_far_arc_is_the_only_candidate(single_tet):
    D = bp_in_middle(single_tet)
    cands = find_bypass_candidates(D)
    assert cands == [(2, ((2, 1), (2, 2))), (3, ((2, 1), (2, 2)))]


def test_connected_dividing_set_has_no_candidate():
    T = random_shelled_triangulation(1, 0)
    faces = [FaceDiagram((0, 0, 0))] * 4
    D = DividingSet(T, faces)
    assert find_bypass_candidates(D) == []


def test_move_raises_tb_by_one_per_face_along_the_edge(single_tet):
    D = bp_in_middle(single_tet)
    before = tb_total(D)
    out, rec = apply_edge_isotopy(D, (0, 2), ((2, 1), (2, 2)))
    assert rec.tb_before == before and rec.tb_after == tb_total(out)
    assert tb_total(out) - before == len(single_tet.edge_occurrences(rec.edge)) == 2
    assert [kind for _, kind in rec.rewrites] == ["delete"]
    assert rec.to_line().startswith(f"move face=0:2 edge={single_tet.tet_edge(0, 0, 1)[0]}")
    assert find_bypass_candidates(out) == []


def test_not_a_candidate(single_tet):
    D = bp_in_middle(single_tet)
    with pytest.raises(CarrierError) as err:
        apply_edge_isotopy(D, (0, 2), ((2, 0), (2, 3)))
    assert err.value.code == "NOT_A_CANDIDATE"


def test_closed_curves_are_refused(single_tet):
    D = DividingSet(single_tet, [FaceDiagram((0, 0, 0), closed=1)] + [FaceDiagram((0, 0, 0))] * 3)
    with pytest.raises(OvertwistedHint):
        find_bypass_candidates(D)
    with pytest.raises(OvertwistedHint):
        normalize(D)


def test_normal_input_is_a_fixpoint(double_tet):
    D = normal_dividing(double_tet, [[1, 2, 0, 1], [1, 2, 0, 1]], {0: (1, 2), 1: (1, 2)},
                        near_bp=[(0, 0), (3, 1)])
    out, moves = normalize(D)
    assert out == D and moves == []
    assert normal_form_violations(out) == []


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(0, 10 ** 6))
def test_normalize_contract(n, seed):
    T = random_shelled_triangulation(n, seed)
    D = random_dividing(T, seed, max_per_edge=14)
    out, moves = normalize(D)
    assert len(moves) <= D.endpoint_total()
    assert normal_form_violations(out) == []
    tb = tb_total(D)
    for m in moves:
        assert m.tb_before == tb and m.tb_after >= tb + 1
        tb = m.tb_after
    assert tb == tb_total(out)
    again, moves2 = normalize(D)
    assert again == out and moves2 == moves


def test_closed_attachments_are_reported():
    # faces with repeated edges let a join close up a curve
    codes = set()
    for seed in range(60):
        T = random_triangulation(2, seed)
        D = random_dividing(T, seed, max_per_edge=8)
        try:
            normalize(D)
        except CarrierError as e:
            codes.add(e.code)
    assert codes == {"ATTACHMENT_CREATES_CLOSED"}


def test_move_budget_is_enforced():
    T = random_shelled_triangulation(3, 5)
    D = random_dividing(T, 5, max_per_edge=14)
    _, moves = normalize(D)
    assert moves
    with pytest.raises(PropertyFailure) as err:
        normalize(D, max_moves=len(moves) - 1)
    assert err.value.code == "NO_TERMINATION"


# -- prisms -------------------------------------------------------------------

def test_one_triangle_prism(single_tet):
    P = extract_prisms(normal_dividing(single_tet, [[1, 0, 0, 0]]))
    assert P.tri[0] == (1, 0, 0, 0) and P.quad[0] == (None, 0)
    assert all(P.leftover_total(0, x) == 0 for x in range(4))
    assert P.report_lines() == ["tet 0 tri 1 0 0 0 quad - 0 leftover 0:0,1:0,2:0,3:0"]


def test_one_rectangle_prism(single_tet):
    P = extract_prisms(normal_dividing(single_tet, [[0] * 4], {0: (2, 1)}))
    assert P.tri[0] == (0, 0, 0, 0) and P.quad[0] == (2, 1)
    assert P.positions_used(0) == 1


def test_majority_rectangle_family_is_packed(single_tet):
    D = normal_dividing(single_tet, [[0] * 4], {0: [(0, 5), (1, 2)]})
    P = extract_prisms(D)
    assert P.quad[0] == (0, 5)
    assert all(P.leftover_total(0, x) == 2 for x in range(4))
    with pytest.raises(PropertyFailure) as err:
        extract_prisms(D, C=1)
    assert err.value.code == "LEFTOVER_EXCEEDS_C"


def test_rectangle_ties_go_to_the_lowest_axis(single_tet):
    P = extract_prisms(normal_dividing(single_tet, [[0] * 4], {0: [(2, 3), (1, 3)]}))
    assert P.quad[0] == (1, 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=4, max_size=4),
       st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_packing_conserves_arcs(tris, quads):
    from carrier.tri import Triangulation
    T = Triangulation(1, {})
    D = normal_dividing(T, [tris], {0: list(enumerate(quads))})
    P = extract_prisms(D, C=None)
    assert P.positions_used(0) <= 5
    axis, q = P.quad[0]
    assert (axis is None) == (q == 0)
    for x in range(4):
        used = P.packed(0, x)
        for v in used:
            assert used[v] + P.leftover[(0, x)][v] == P.corners[(0, x)][v]
            assert P.leftover[(0, x)][v] >= 0
    # nothing better exists: compare with brute force over all packings
    c = P.corners
    best = 0
    for ax in range(3):
        qc = quad_corners(ax)
        for qq in range(0, min(c[(0, x)][qc[x]] for x in range(4)) + 1):
            ts = [min(c[(0, x)][v] - (qq if qc[x] == v else 0) for x in range(4) if x != v)
                  for v in range(4)]
            best = max(best, 3 * sum(ts) + 4 * qq)
    assert 3 * sum(P.tri[0]) + 4 * q == best


def test_prisms_after_normalizing_random_sets():
    for seed in range(10):
        T = random_shelled_triangulation(4, seed)
        out, _ = normalize(random_dividing(T, seed, max_per_edge=10))
        P = extract_prisms(out, C=None)
        rng = random.Random(seed)
        t = rng.randrange(T.tet_count)
        assert P.positions_used(t) <= 5

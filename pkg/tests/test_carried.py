from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from carrier import corpus
from carrier.branched import load_branched, validate
from carrier.carried import (chi_coefficients, classify, enumerate_carried,
                             euler_characteristic, surface_from_weight)
from carrier.diophantine import boxed_solutions, equations_from, hilbert_basis
from carrier.errors import CarrierError


def verdicts(B, w):
    return sorted(v for *_, v in classify(B, w))


def test_torus_sheets_are_parallel_copies():
    B = corpus.branched("torus")
    surf = surface_from_weight(B, (3,))
    assert surf.closed and len(surf.components) == 3
    assert verdicts(B, (3,)) == ["Torus"] * 3


def test_klein_and_sphere():
    assert verdicts(corpus.branched("klein"), (1,)) == ["KleinBottle"]
    assert verdicts(corpus.branched("sphere"), (2,)) == ["Other(2)"] * 2


def test_flap_basis_surfaces_are_tori(flap):
    for w in [(0, 1, 1), (1, 1, 0)]:
        surf = surface_from_weight(flap, w)
        assert surf.closed and len(surf.components) == 1 and surf.chi == 0
        assert verdicts(flap, w) == ["Torus"]
    assert chi_coefficients(flap) == [0, 0, 0]


def test_enumerate_small_box(flap):
    assert {w for w, _ in enumerate_carried(flap, 1)} == {(0, 0, 0), (0, 1, 1), (1, 1, 0)}


def test_weight_errors(flap):
    with pytest.raises(CarrierError) as err:
        surface_from_weight(flap, (1, 0, 0))
    assert err.value.code == "NOT_A_SOLUTION"
    with pytest.raises(CarrierError) as err:
        surface_from_weight(flap, (1, 1))
    assert err.value.code == "BAD_WEIGHT"
    with pytest.raises(CarrierError):
        surface_from_weight(flap, (-1, 0, 1))


def test_non_solution_leaves_free_sides(flap):
    surf = surface_from_weight(flap, (1, 0, 0), strict=False)
    assert not surf.closed


def test_zero_weight_is_empty(flap):
    surf = surface_from_weight(flap, (0, 0, 0))
    assert surf.components == [] and surf.chi == 0


@pytest.mark.parametrize("name", corpus.BRANCHED)
def test_bundled_invariants(name):
    B = corpus.branched(name)
    c = chi_coefficients(B)
    sols = [tuple(map(int, r)) for r in boxed_solutions(equations_from(B), 2)]
    for w in sols:
        surf = surface_from_weight(B, w)
        assert surf.closed
        assert surf.chi == sum(a * b for a, b in zip(c, w)) == euler_characteristic(B, w)
        for n in (2, 3):
            assert len(surface_from_weight(B, [n * x for x in w]).components) == \
                n * len(surf.components)
    for u, v in product(sols, sols):
        s = tuple(a + b for a, b in zip(u, v))
        assert euler_characteristic(B, s) == euler_characteristic(B, u) + euler_characteristic(B, v)


@pytest.mark.parametrize("name", corpus.BRANCHED)
def test_sheet_complex_is_a_valid_closed_complex(name):
    B = corpus.branched(name)
    for u in hilbert_basis(equations_from(B)):
        surf = surface_from_weight(B, u)
        C = surf.to_complex()
        rep = validate(C)
        assert rep.ok and rep.closed
        assert C.d == len(surf.components)
        assert sum(chi_coefficients(C)) == surf.chi


def test_child_order_does_not_change_verdicts(flap):
    flipped = load_branched(flap.serialize().replace("order 0", "order 2"))
    for w in [(0, 1, 1), (1, 1, 0), (2, 3, 1), (1, 3, 2)]:
        assert verdicts(flap, w) == verdicts(flipped, w)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4))
def test_flap_combinations(a, b):
    B = corpus.branched("flap-torus")
    w = (b, a + b, a)
    surf = surface_from_weight(B, w)
    assert surf.closed and surf.chi == 0
    assert all(v == "Torus" for v in verdicts(B, w))

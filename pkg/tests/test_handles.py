from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import _oracles as oracle
from knotcalc.errors import InputError
from knotcalc.handles import (
    ISOLATED_DISK,
    MONKEY_HANDLE,
    ONE_HANDLE,
    ZERO_HANDLE,
    HandleCell,
    HandleComplex,
    RelativeCycle,
    area_budget,
    bounded_cycle_generators,
    contribution_matrix,
    is_cycle,
    torsion_bound_check,
    validate_handle_complex,
    weighted_area,
)
from knotcalc.linalg import IntMatrix, rational_kernel_basis, same_rational_span


def cx(cells, fibers, contrib):
    return HandleComplex(tuple(cells), tuple(fibers), dict(contrib))


def test_one_handle_with_odd_contribution_is_flagged():
    h = cx([HandleCell("B", ONE_HANDLE)], ["f"], {("B", "f"): 1})
    assert [d.message for d in validate_handle_complex(h)] == ["one-handle must contribute 0 or ±2"]


def test_empty_complex_is_valid():
    assert validate_handle_complex(cx([], [], {})) == []


def test_monkey_handle_abs_sum_limit():
    h = cx([HandleCell("F", MONKEY_HANDLE)], ["f1", "f2"], {("F", "f1"): 2, ("F", "f2"): -2})
    (d,) = validate_handle_complex(h)
    assert d.cell == "F" and "at most 3" in d.message


def test_zero_handle_and_disk_rules():
    h = cx([HandleCell("z", ZERO_HANDLE), HandleCell("d", ISOLATED_DISK)], ["f1", "f2"],
           {("z", "f1"): 1, ("z", "f2"): 1, ("d", "f1"): 1})
    assert {d.cell for d in validate_handle_complex(h)} == {"z", "d"}
    with pytest.raises(InputError):
        contribution_matrix(h)


def test_unknown_references():
    h = cx([HandleCell("a", ZERO_HANDLE)], ["f"], {("b", "f"): 1, ("a", "g"): 1})
    assert len(validate_handle_complex(h)) == 2


def test_contribution_matrix_transcription():
    h = cx([HandleCell("F", MONKEY_HANDLE), HandleCell("B", ONE_HANDLE)], ["p1", "p2"],
           {("F", "p1"): 1, ("F", "p2"): -2, ("B", "p1"): 2})
    assert contribution_matrix(h).to_rows() == [[1, 2], [-2, 0]]


def test_isolated_disks_only():
    h = cx([HandleCell("d1", ISOLATED_DISK), HandleCell("d2", ISOLATED_DISK)], ["p1"], {})
    A = contribution_matrix(h)
    assert (A.rows, A.cols) == (1, 2) and not any(A.entries)
    h0 = cx([HandleCell("d1", ISOLATED_DISK)], [], {})
    assert (contribution_matrix(h0).rows, contribution_matrix(h0).cols) == (0, 1)
    gens = bounded_cycle_generators(h)
    assert [dict(g.coefficients) for g in gens] == [{"d1": 1}, {"d2": 1}]


def test_single_contributing_monkey_handle_has_no_cycle():
    h = cx([HandleCell("F", MONKEY_HANDLE)], ["p"], {("F", "p"): 1})
    assert bounded_cycle_generators(h) == []


def test_three_monkey_handles():
    h = cx([HandleCell(c, MONKEY_HANDLE) for c in "xyz"], ["p"],
           {("x", "p"): 1, ("y", "p"): 1, ("z", "p"): -2})
    gens = [dict(g.coefficients) for g in bounded_cycle_generators(h)]
    assert gens == [{"x": -1, "y": 1}, {"x": 2, "z": 1}]


def test_torsion_check_examples():
    chk = torsion_bound_check(None, IntMatrix.from_rows([[2, 0], [0, 2], [1, 1]]))
    assert (chk.max_order, chk.wide_rows, chk.bound, chk.ok) == (2, 1, 6, True)
    chk = torsion_bound_check(None, IntMatrix.zeros(0, 2))
    assert (chk.max_order, chk.bound, chk.ok) == (1, 2, True)
    chk = torsion_bound_check(None, IntMatrix.from_rows([[1, 1, 1]]))
    assert (chk.max_order, chk.wide_rows, chk.bound, chk.ok) == (1, 1, 6, True)


def test_torsion_check_rejects_unstructured_rows():
    with pytest.raises(InputError):
        torsion_bound_check(None, IntMatrix.from_rows([[3, 0]]))
    with pytest.raises(InputError):
        torsion_bound_check(None, IntMatrix.from_rows([[2, 2]]))


def test_weighted_area_examples():
    h = cx([HandleCell("d1", ISOLATED_DISK, Fraction(1)), HandleCell("F", MONKEY_HANDLE),
            HandleCell("B", ONE_HANDLE, Fraction(1, 2))], ["p"], {})
    assert weighted_area(RelativeCycle({"d1": 1}), h) == 1
    assert weighted_area(RelativeCycle({"F": 3, "B": -2}), h) == 4


def test_area_budget():
    assert area_budget(2) == 27 ** 2 * 44 == 32076


def test_json_round_trip():
    h = cx([HandleCell("F", MONKEY_HANDLE), HandleCell("B", ONE_HANDLE, Fraction(1, 3))], ["p1", "p2"],
           {("F", "p1"): 1, ("F", "p2"): -2, ("B", "p1"): 2})
    assert HandleComplex.from_json(h.to_json()) == h


@st.composite
def valid_complexes(draw, max_fibers=4, max_cells=8):
    fibers = [f"f{i}" for i in range(draw(st.integers(0, max_fibers)))]
    cells, contrib = [], {}
    for i in range(draw(st.integers(0, max_cells))):
        kind = draw(st.sampled_from((ZERO_HANDLE, ONE_HANDLE, MONKEY_HANDLE, ISOLATED_DISK)))
        area = draw(st.fractions(0, 1, max_denominator=4))
        cid = f"c{i}"
        cells.append(HandleCell(cid, kind, area))
        if not fibers or kind == ISOLATED_DISK:
            continue
        if kind in (ZERO_HANDLE, ONE_HANDLE):
            if draw(st.booleans()):
                mag = 1 if kind == ZERO_HANDLE else 2
                contrib[(cid, draw(st.sampled_from(fibers)))] = mag * draw(st.sampled_from((1, -1)))
        else:
            left = 3
            for f in draw(st.permutations(fibers))[:3]:
                v = draw(st.integers(-left, left))
                contrib[(cid, f)] = v
                left -= abs(v)
    return cx(cells, fibers, contrib)


@given(valid_complexes())
def test_generators_are_bounded_cycles(h):
    assert validate_handle_complex(h) == []
    A = contribution_matrix(h)
    p = oracle.rational_rank(A.to_rows()) if A.rows else 0
    gens = bounded_cycle_generators(h)
    ids = [c.id for c in h.cells]
    vectors = [[g.coefficients.get(i, 0) for i in ids] for g in gens]
    for g in gens:
        assert is_cycle(g, h)
        assert max(abs(x) for x in g.coefficients.values()) <= 3 ** p
    assert len(gens) == len(ids) - p
    if gens:
        assert oracle.rational_rank(vectors) == len(gens)
    # span check against the full rational kernel
    assert same_rational_span(vectors, rational_kernel_basis(A), len(ids))


@given(valid_complexes(max_fibers=3, max_cells=6))
def test_weighted_areas_within_budget(h):
    # with total area at most plen and rank at most 3*plen each generator fits in A(plen)
    gens = bounded_cycle_generators(h)
    plen = max(1, -(-h.total_area.numerator // h.total_area.denominator))
    for g in gens:
        assert weighted_area(g, h) <= area_budget(plen)

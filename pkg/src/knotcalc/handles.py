"""Abstract handle complexes and their bounded relative-cycle generators.

A handle complex records, for each 2-cell (0-handle, 1-handle, monkey-handle
or isolated disk), its signed contribution to the fiber class of every
I-bundle component.  Relative cycles are exactly the integer vectors killed by
the resulting contribution matrix.  Areas are rationals in units of pi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple

from .bounds import area_over_pi
from .errors import InputError, certify
from .linalg import IntMatrix, bounded_kernel_basis, torsion_orders

ZERO_HANDLE = "zero-handle"
ONE_HANDLE = "one-handle"
MONKEY_HANDLE = "monkey-handle"
ISOLATED_DISK = "isolated-disk"
KINDS = (ZERO_HANDLE, ONE_HANDLE, MONKEY_HANDLE, ISOLATED_DISK)

_DEFAULT_AREA = {MONKEY_HANDLE: Fraction(1)}


@dataclass(frozen=True)
class HandleCell:
    id: str
    kind: str
    area: Fraction = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown handle kind {self.kind!r}; expected one of {KINDS}")
        area = _DEFAULT_AREA.get(self.kind, Fraction(0)) if self.area is None else Fraction(self.area)
        if area < 0:
            raise InputError(f"cell {self.id}: area must be nonnegative")
        object.__setattr__(self, "area", area)


@dataclass(frozen=True)
class HandleComplex:
    cells: tuple[HandleCell, ...]
    fiber_classes: tuple[str, ...]
    contributions: Mapping[tuple[str, str], int] = field(default_factory=dict)

    def cell(self, cell_id: str) -> HandleCell:
        for c in self.cells:
            if c.id == cell_id:
                return c
        raise InputError(f"unknown cell id {cell_id!r}")

    def column(self, cell_id: str) -> list[int]:
        return [self.contributions.get((cell_id, f), 0) for f in self.fiber_classes]

    @property
    def total_area(self) -> Fraction:
        return sum((c.area for c in self.cells), Fraction(0))

    def to_json(self) -> dict:
        return {
            "cells": [{"id": c.id, "kind": c.kind, "area": str(c.area)} for c in self.cells],
            "fibers": list(self.fiber_classes),
            "contributions": [
                {"cell": cell, "fiber": fib, "value": v}
                for (cell, fib), v in sorted(self.contributions.items()) if v
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> HandleComplex:
        try:
            cells = tuple(HandleCell(str(c["id"]), c["kind"],
                                     Fraction(str(c["area"])) if c.get("area") is not None else None)
                          for c in obj.get("cells", []))
            fibers = tuple(str(f) for f in obj.get("fibers", []))
            contrib: dict[tuple[str, str], int] = {}
            for entry in obj.get("contributions", []):
                key = (str(entry["cell"]), str(entry["fiber"]))
                contrib[key] = contrib.get(key, 0) + int(entry["value"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad handle complex JSON: {exc}") from None
        return cls(cells, fibers, contrib)


class Diagnostic(NamedTuple):
    cell: str | None
    message: str


@dataclass(frozen=True)
class RelativeCycle:
    coefficients: Mapping[str, int]

    def __add__(self, other: RelativeCycle) -> RelativeCycle:
        keys = dict.fromkeys(list(self.coefficients) + list(other.coefficients))
        return RelativeCycle({k: self.coefficients.get(k, 0) + other.coefficients.get(k, 0)
                              for k in keys})


def validate_handle_complex(h: HandleComplex) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    ids = [c.id for c in h.cells]
    for dup in sorted({i for i in ids if ids.count(i) > 1}):
        diags.append(Diagnostic(dup, "duplicate cell id"))
    if len(set(h.fiber_classes)) != len(h.fiber_classes):
        diags.append(Diagnostic(None, "duplicate fiber class"))
    known_fibers = set(h.fiber_classes)
    for (cell, fib), v in sorted(h.contributions.items()):
        if cell not in ids:
            diags.append(Diagnostic(cell, "contribution references an unknown cell"))
        if fib not in known_fibers:
            diags.append(Diagnostic(cell, f"contribution references unknown fiber {fib!r}"))

    for c in h.cells:
        nonzero = [v for v in h.column(c.id) if v]
        if c.kind == ZERO_HANDLE:
            if len(nonzero) > 1 or any(abs(v) != 1 for v in nonzero):
                diags.append(Diagnostic(c.id, "zero-handle must contribute 0 or ±1 to a single fiber"))
        elif c.kind == ONE_HANDLE:
            if len(nonzero) > 1 or any(abs(v) != 2 for v in nonzero):
                diags.append(Diagnostic(c.id, "one-handle must contribute 0 or ±2"))
        elif c.kind == MONKEY_HANDLE:
            if sum(abs(v) for v in nonzero) > 3:
                diags.append(Diagnostic(c.id, "monkey-handle contributions must have absolute values summing to at most 3"))
        elif nonzero:
            diags.append(Diagnostic(c.id, "isolated disk must not contribute to any fiber"))
    return diags


def _require_valid(h: HandleComplex) -> None:
    diags = validate_handle_complex(h)
    if diags:
        raise InputError("invalid handle complex: " + "; ".join(
            f"{d.cell}: {d.message}" if d.cell else d.message for d in diags))


def contribution_matrix(h: HandleComplex) -> IntMatrix:
    """Rows are fiber classes, columns are cells in declaration order."""
    _require_valid(h)
    cols = [h.column(c.id) for c in h.cells]
    return IntMatrix.from_rows([[col[i] for col in cols] for i in range(len(h.fiber_classes))],
                               len(h.cells))


def bounded_cycle_generators(h: HandleComplex) -> list[RelativeCycle]:
    """Integral cycles spanning the rational cycle space with small coefficients.

    Cells that contribute nothing (isolated disks among them) are cycles on
    their own; the rest come from :func:`bounded_kernel_basis` on the nonzero
    columns, so every coefficient is at most ``3**rank`` in absolute value.
    """
    A = contribution_matrix(h)
    gens = []
    live = []
    for j, c in enumerate(h.cells):
        if any(A.column(j)):
            live.append(j)
        else:
            gens.append(RelativeCycle({c.id: 1}))
    sub = A.submatrix(range(A.rows), live)
    basis = bounded_kernel_basis(sub)
    bound = 3 ** basis.rank
    for u in basis.solutions:
        coeffs = {h.cells[j].id: x for j, x in zip(live, u) if x}
        certify(all(abs(x) <= bound for x in coeffs.values()),
                f"cycle coefficient exceeds 3^{basis.rank}")
        gens.append(RelativeCycle(coeffs))
    for g in gens:
        certify(is_cycle(g, h), f"generator {dict(g.coefficients)} is not a cycle")
    return gens


def is_cycle(c: RelativeCycle, h: HandleComplex) -> bool:
    for f in h.fiber_classes:
        if sum(x * h.contributions.get((cell, f), 0) for cell, x in c.coefficients.items()):
            return False
    return True


class TorsionCheck(NamedTuple):
    max_order: int
    bound: int
    ok: bool
    wide_rows: int


def torsion_bound_check(h: HandleComplex | None, presentation_rows: IntMatrix) -> TorsionCheck:
    """Compare the largest torsion order of the cokernel with ``2 * 3**t``.

    ``t`` counts the wide rows (more than one nonzero entry, absolute values
    summing to at most 3); every other row must be a single ``±1`` or ``±2``.
    """
    if h is not None:
        _require_valid(h)
    t = 0
    for i in range(presentation_rows.rows):
        row = presentation_rows.row(i)
        nonzero = [x for x in row if x]
        if len(nonzero) > 1:
            if sum(abs(x) for x in nonzero) > 3:
                raise InputError(f"row {i}: wide row entries must have absolute values summing to at most 3")
            t += 1
        elif nonzero and abs(nonzero[0]) not in (1, 2):
            raise InputError(f"row {i}: single-entry rows must be ±1 or ±2")
    max_order = torsion_orders(presentation_rows).max_order
    bound = 2 * 3 ** t
    return TorsionCheck(max_order, bound, max_order <= bound, t)


def weighted_area(c: RelativeCycle, h: HandleComplex) -> Fraction:
    """Sum of ``|coefficient| * area`` over the cells of the cycle (units of pi)."""
    return sum((abs(x) * h.cell(cell).area for cell, x in c.coefficients.items()), Fraction(0))


def area_budget(plen: int) -> int:
    """Area allowance per generator in units of pi."""
    return area_over_pi(plen)

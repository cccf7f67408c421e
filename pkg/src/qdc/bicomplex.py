"""The two-row double complex carried by the split differential.

Row r counts canonical-element factors (at most one, since its square
vanishes in the wedge), column s counts complement factors.  The grid is
computed from exact subspace decompositions, and the three split
conditions plus their sum are verified identity by identity.
"""

from __future__ import annotations

import random

from .algebra import AlgebraElement
from .forms import GradeCapError
from .calculus import CheckReport


class BicomplexGrid:
    """Cell dimensions and basis words of the (r, s) grid."""

    def __init__(self, calc, cap):
        if cap > calc.space.table.max_grade:
            raise GradeCapError(
                "grid cap %d exceeds wedge table cap %d"
                % (cap, calc.space.table.max_grade))
        self.calc = calc
        self.cap = cap
        self.cells = {}
        basis = calc.space.basis
        for k in range(cap + 1):
            data = calc.grid.data(k)
            d0, d1 = data["dims"]
            u0_labels = [" /\\ ".join(basis.label(i) for i in w) if w else "1"
                         for w in data["u0_words"]]
            u1_labels = ["X" if not w else
                         " /\\ ".join(basis.label(i) for i in w) + " /\\ X"
                         for w in data["u1_words"]]
            self.cells[(0, k)] = {"dim": d0, "basis": u0_labels}
            if k >= 1:
                self.cells[(1, k - 1)] = {"dim": d1, "basis": u1_labels}
        self.cells[(0, 0)] = {"dim": 1, "basis": ["1"], "marker": "grade-0"}

    def dim(self, r, s):
        cell = self.cells.get((r, s))
        return cell["dim"] if cell else 0

    def additivity_holds(self, k):
        total = self.calc.space.table.dimension(k)
        return total == self.dim(0, k) + self.dim(1, k - 1)

    def as_dict(self):
        out = {"cap": self.cap, "cells": []}
        for (r, s) in sorted(self.cells):
            cell = self.cells[(r, s)]
            entry = {"r": r, "s": s, "dim": cell["dim"], "basis": cell["basis"]}
            if "marker" in cell:
                entry["marker"] = cell["marker"]
            out["cells"].append(entry)
        out["wedge_dimensions"] = self.calc.space.table.dimensions()[:self.cap + 1]
        empty = self.calc.space.table.first_empty_grade()
        out["first_empty_grade"] = empty
        return out

    def render(self):
        lines = ["bicomplex grid (cap %d)" % self.cap]
        for (r, s) in sorted(self.cells):
            cell = self.cells[(r, s)]
            mark = "  [%s]" % cell["marker"] if "marker" in cell else ""
            lines.append("  (r=%d, s=%d) dim %d: %s%s"
                         % (r, s, cell["dim"], ", ".join(cell["basis"]) or "-",
                            mark))
        dims = self.calc.space.table.dimensions()[:self.cap + 1]
        lines.append("  total wedge dimensions by grade: %s" % dims)
        empty = self.calc.space.table.first_empty_grade()
        lines.append("  first empty wedge grade: %s"
                     % ("not reached within probe" if empty is None else empty))
        return "\n".join(lines)


def build_grid(calc, cap=None):
    return BicomplexGrid(calc, cap if cap is not None else calc.grade_cap)


def _delta_op(calc, f00_choice):
    if f00_choice == "counit":
        return lambda x: calc.space.zero()
    return calc.delta


def _total_d(calc, f00_choice):
    if f00_choice == "counit":
        return calc.partial
    return calc.d


def cartan_check(calc, degree=None, f00_choice="trace", samples=0, seed=20260809,
                 swap_projectors=False):
    """The split conditions: total, square of each part, anticommutation.

    With the counit sector choice the one-dimensional differential is the
    zero map and the conditions degenerate accordingly.  swap_projectors
    deliberately misassembles the splitting (negative control).
    """
    degree = degree if degree is not None else calc.degree_bound
    report = CheckReport("cartan", degree)
    rng = random.Random(seed)
    if swap_projectors:
        # misassembled splitting: project with J and Jperp exchanged and
        # without the row bookkeeping; the squares must then fail
        def part(x):
            return calc.split_differential(x)[1]

        def delt(x):
            return calc.split_differential(x)[0]
        total = calc.d
    else:
        part = calc.partial
        delt = _delta_op(calc, f00_choice)
        total = _total_d(calc, f00_choice)

    elements = []
    for w in calc.qg.rs.normal_words(degree):
        elements.append(("monomial %s" % _word_str(w),
                         calc.space.from_algebra(
                             AlgebraElement.from_word(calc.qg.rs, w))))
    for i in range(calc.space.M):
        elements.append(("basis form %s" % calc.space.basis.label(i),
                         calc.space.one_form(i)))
    max_input = calc.space.table.max_grade - 2
    for g in range(calc.grade_cap + 1):
        for t in range(samples):
            x = calc.random_form(rng, min(g, max_input))
            if not x.is_zero():
                elements.append(("random grade-%d #%d" % (min(g, max_input), t), x))

    checks = [
        ("d-squared", "d o d = 0 (total differential)", lambda x: total(total(x))),
        ("partial-squared", "partial o partial = 0", lambda x: part(part(x))),
        ("delta-squared", "delta o delta = 0", lambda x: delt(delt(x))),
        ("anticommute", "partial delta + delta partial = 0",
         lambda x: part(delt(x)) + delt(part(x))),
    ]
    for law, desc, op in checks:
        ok = True
        witness = None
        for name, x in elements:
            if max(x.grades(), default=0) > max_input:
                continue
            try:
                val = op(x)
            except GradeCapError:
                continue
            if not val.is_zero():
                ok = False
                witness = "%s -> %s" % (name, val.render())
                break
        report.add(law, desc, ok, witness=witness)
    return report


def _word_str(w):
    if not w:
        return "1"
    return "*".join("t[%d,%d]" % g for g in w)


def grid_check(calc, cap=None):
    """Dimension additivity of the grid, as a report."""
    grid = build_grid(calc, cap)
    report = CheckReport("bicomplex-grid", calc.degree_bound)
    for k in range(1, grid.cap + 1):
        report.add("additivity-grade-%d" % k,
                   "wedge dimension at grade %d splits over the two rows" % k,
                   grid.additivity_holds(k),
                   witness="dim %d vs %d + %d"
                           % (calc.space.table.dimension(k),
                              grid.dim(0, k), grid.dim(1, k - 1)))
    return report

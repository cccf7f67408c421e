import pytest

from qdc.forms import GradeCapError
from qdc.bicomplex import build_grid, cartan_check, grid_check


EXPECTED_CELLS = {
    (0, 0): 1, (0, 1): 3, (0, 2): 3, (0, 3): 1,
    (1, 0): 1, (1, 1): 3, (1, 2): 3,
}


class TestGrid:
    def test_cell_dimensions(self, calc):
        grid = build_grid(calc, 3)
        for (r, s), dim in EXPECTED_CELLS.items():
            assert grid.dim(r, s) == dim, (r, s)

    def test_additivity(self, calc):
        grid = build_grid(calc, 3)
        wedge_dims = calc.space.table.dimensions()
        for k in range(1, 4):
            assert wedge_dims[k] == grid.dim(0, k) + grid.dim(1, k - 1)

    def test_grade_one_split(self, calc):
        grid = build_grid(calc, 3)
        assert calc.space.table.dimension(1) == 4
        assert grid.dim(0, 1) + grid.dim(1, 0) == 4
        assert grid.dim(1, 0) == 1   # the canonical line

    def test_grade_zero_marker(self, calc):
        grid = build_grid(calc, 3)
        assert grid.cells[(0, 0)].get("marker") == "grade-0"

    def test_cap_error(self, calc):
        with pytest.raises(GradeCapError):
            build_grid(calc, 10)

    def test_termination_grade_reported(self, calc):
        grid = build_grid(calc, 3)
        out = grid.as_dict()
        assert out["first_empty_grade"] == 5

    def test_grid_check_report(self, calc):
        assert grid_check(calc).passed()

    def test_basis_labels_syntactic(self, calc):
        grid = build_grid(calc, 3)
        for label in grid.cells[(1, 1)]["basis"]:
            assert label.endswith(" /\\ X")
        for label in grid.cells[(0, 2)]["basis"]:
            assert "X" not in label


class TestCartan:
    @pytest.mark.parametrize("choice", ["trace", "counit"])
    def test_all_conditions(self, calc, choice):
        report = cartan_check(calc, degree=2, f00_choice=choice, samples=8)
        assert report.passed(), report.render()
        assert {e.law for e in report.entries} == \
            {"d-squared", "partial-squared", "delta-squared", "anticommute"}

    def test_negative_control_breaks(self, calc):
        report = cartan_check(calc, degree=1, samples=0, swap_projectors=True)
        assert not report.passed()
        failing = [e for e in report.entries if e.status == "fail"]
        assert failing and all(e.witness for e in failing)
        assert any(e.law in ("partial-squared", "anticommute")
                   for e in failing)

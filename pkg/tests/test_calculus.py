import random

import pytest

from qdc.scalars import ZERO, ONE, Q
from qdc.algebra import AlgebraElement
from qdc.forms import left_coaction
from qdc.functionals import convolve, InvalidFunctionalError, scalar_functional
from qdc.calculus import (assemble, canonical_element, build_projectors,
                          inner_d, expand_d_in_basis, delta_differential,
                          split_differential, map_in_to_out, map_out_to_in,
                          roundtrip_check, CalculusError)


class TestCanonicalElement:
    def test_trace_form(self, calc):
        X = canonical_element(calc.space)
        assert X.terms.keys() == {(0,), (3,)}
        assert X.render() == "w[1,1] + w[2,2]"

    def test_left_invariance(self, calc):
        co = left_coaction(calc.space, calc.X)
        assert co.terms == {(): calc.X}

    def test_unit_action(self, calc, qg):
        assert calc.X.algebra_mul_right(qg.one()) == calc.X


class TestInnerDifferential:
    def test_d_of_unit(self, calc, qg):
        assert calc.d(qg.one()).is_zero()

    def test_d_raises_grade(self, calc, qg):
        da = calc.d(qg.generator(1, 1))
        assert da.grades() == [1]
        d2 = calc.d(calc.space.one_form(1))
        assert d2.grades() == [2]

    def test_d_squared_on_generators(self, calc, qg):
        for g in qg.rs.gens:
            assert calc.d(calc.d(qg.generator(*g))).is_zero()

    def test_leibniz_random(self, calc, qg):
        rng = random.Random(3)
        words = qg.rs.normal_words(2)
        for _ in range(6):
            a = AlgebraElement.from_word(qg.rs, words[rng.randrange(len(words))])
            b = AlgebraElement.from_word(qg.rs, words[rng.randrange(len(words))])
            lhs = calc.d(a * b)
            rhs = calc.d(a).algebra_mul_right(b) + \
                calc.space.from_algebra(a).wedge(calc.d(b))
            assert lhs == rhs

    def test_degenerate_parameter(self, qg):
        from qdc.functionals import DegenerateParameterError
        with pytest.raises(DegenerateParameterError):
            assemble(lam=ZERO)


class TestBasisExpansion:
    def test_unit_gives_zeros(self, calc, qg):
        assert all(c.is_zero() for c in calc.expand_d_in_basis(qg.one()))

    def test_matches_vector_field_convolutions(self, calc, qg, dual):
        for w in qg.rs.normal_words(2):
            a = AlgebraElement.from_word(qg.rs, w)
            coeffs = calc.expand_d_in_basis(a)
            for i in range(4):
                assert coeffs[i] == convolve(dual.chi.entry(i), a, side="left")

    def test_linearity(self, calc, qg):
        a = qg.generator(1, 1)
        b = qg.generator(2, 1)
        ca = calc.expand_d_in_basis(a)
        cb = calc.expand_d_in_basis(b)
        cab = calc.expand_d_in_basis(a + b)
        for i in range(4):
            assert cab[i] == ca[i] + cb[i]


class TestProjectors:
    def test_laws(self, calc):
        assert build_projectors(calc).laws_exact() == (True, True, True)

    def test_on_canonical_element(self, calc):
        pair = calc.projectors
        assert pair.apply(pair.J, calc.X) == calc.X
        assert pair.apply(pair.Jperp, calc.X).is_zero()

    def test_along_complement(self, calc):
        pair = calc.projectors
        for i in calc.space.basis.complement:
            w = calc.space.one_form(i)
            assert pair.apply(pair.J, w).is_zero()
            assert pair.apply(pair.Jperp, w) == w


class TestSectorDifferential:
    def test_counit_choice_vanishes(self, calc, qg):
        eps = calc.resolve_f00("counit")
        for w in qg.rs.normal_words(2):
            a = AlgebraElement.from_word(qg.rs, w)
            assert delta_differential(calc, a, eps).is_zero()

    def test_trace_choice_frozen_value(self, calc, qg):
        trace = calc.resolve_f00("trace")
        a = qg.generator(1, 1)
        got = delta_differential(calc, a, trace)
        coeff = a.scalar_mul(Q - ONE)
        assert got == calc.X.algebra_mul_left(coeff)

    def test_unit_vanishes(self, calc, qg):
        trace = calc.resolve_f00("trace")
        assert delta_differential(calc, qg.one(), trace).is_zero()


class TestSplit:
    def test_sum_reconstitutes(self, calc, qg):
        rng = random.Random(5)
        inputs = [calc.space.from_algebra(qg.generator(1, 2)),
                  calc.random_form(rng, 1), calc.random_form(rng, 2)]
        for x in inputs:
            p, dl = split_differential(calc, x)
            assert p + dl == calc.d(x)

    def test_grade_zero_sector_is_canonical_multiple(self, calc, qg, dual):
        for g in qg.rs.gens:
            a = qg.generator(*g)
            _, dl = split_differential(calc, a)
            coeff = convolve(dual.chi.entry(3), a, side="left")
            assert dl == calc.X.algebra_mul_left(coeff)

    def test_partial_image_avoids_canonical_line(self, calc, qg):
        for w in qg.rs.normal_words(calc.degree_bound):
            a = AlgebraElement.from_word(qg.rs, w)
            p = calc.partial(a)
            for k in p.grades():
                u0, u1 = calc.grid.split_component(p.component(k), k)
                assert u1.is_zero()


class TestMaps:
    def test_quotient_rank(self, calc):
        outer = map_in_to_out(calc)
        assert outer.rank == 3
        assert outer.labels == ["w[1,1]", "w[1,2]", "w[2,1]"]

    def test_extension_rank(self, calc):
        outer = map_in_to_out(calc)
        ext = map_out_to_in(outer, calc.resolve_f00("trace"))
        assert ext.rank == outer.rank + 1

    def test_roundtrip_both_sectors(self, calc):
        outer = map_in_to_out(calc)
        for choice in ("trace", "counit"):
            report = roundtrip_check(outer, calc.resolve_f00(choice), 3)
            assert report.passed(), report.render()

    def test_extension_distinguishes_sectors(self, calc, qg):
        outer = map_in_to_out(calc)
        ext_t = map_out_to_in(outer, calc.resolve_f00("trace"))
        ext_e = map_out_to_in(outer, calc.resolve_f00("counit"))
        tables = []
        for ext in (ext_t, ext_e):
            tables.append({g: ext.f00.on_generator(*g) for g in qg.rs.gens})
        assert tables[0] != tables[1]

    def test_corrupted_sector_functional_rejected(self, calc, qg):
        vals = {g: calc.f00.on_generator(*g) for g in qg.rs.gens}
        vals[(1, 1)] = vals[(1, 1)] + ONE
        bad = scalar_functional(qg, vals, "corrupted")
        outer = map_in_to_out(calc)
        with pytest.raises(InvalidFunctionalError):
            map_out_to_in(outer, bad)
        report = roundtrip_check(outer, bad, 2)
        assert not report.passed()
        assert any(e.status == "fail" and e.witness for e in report.entries)

    def test_degenerate_extension_keeps_partial(self, calc, qg):
        outer = map_in_to_out(calc)
        ext = map_out_to_in(outer, calc.resolve_f00("counit"))
        for g in qg.rs.gens:
            a = qg.generator(*g)
            dcoeff, ptab = ext.total_differential(a)
            assert dcoeff.is_zero()
            assert ptab == outer.partial_table(a)

    def test_outer_partial_matches_inner_projection(self, calc, qg):
        outer = map_in_to_out(calc)
        for w in qg.rs.normal_words(2):
            a = AlgebraElement.from_word(qg.rs, w)
            table = outer.partial_table(a)
            p = calc.partial(a)
            # reconstruct the complement expansion from the inner split
            terms = dict(p.terms)
            expected = []
            rm = calc.space.basis.removed_index
            for i in outer.letters:
                c = terms.get((i,), AlgebraElement.zero(qg.rs))
                expected.append(c)
            assert table == expected

    def test_unknown_f00_choice(self, calc):
        with pytest.raises(CalculusError):
            calc.resolve_f00("something-else")


class TestOperationWrappers:
    def test_wrappers_delegate(self, calc, qg):
        a = qg.generator(1, 2)
        assert inner_d(calc, a) == calc.d(a)
        assert expand_d_in_basis(calc, a) == calc.expand_d_in_basis(a)

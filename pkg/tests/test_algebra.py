import itertools
from fractions import Fraction

import pytest

from qdc.scalars import ZERO, ONE, Q, qlambda
from qdc.algebra import (RMatrixError, load_rmatrix, dump_rmatrix,
                         QuantumGroup, AlgebraElement, TensorElement,
                         quantum_determinant_terms)
from qdc.calculus import DEFAULT_RMATRIX


def gen(rs, a, b):
    return AlgebraElement.generator(rs, a, b)


# ---------------------------------------------------------------------------
# R-matrix gate

class TestRMatrixGate:
    def test_standard_r_accepted(self):
        r = load_rmatrix(DEFAULT_RMATRIX)
        assert r.N == 2 and len(r.entries) == 5

    def test_ybe_brute_force_oracle(self):
        # independent check: specialize exactly at q0 = 7 and sweep all 64
        # component equations with plain Fractions
        r = load_rmatrix(DEFAULT_RMATRIX)
        q0 = Fraction(7)
        val = {}
        for (a, c, b, d), v in r.entries.items():
            val[(a, c, b, d)] = v.evaluate_at(q0)

        def rv(a, c, b, d):
            return val.get((a, c, b, d), Fraction(0))

        rng = (1, 2)
        count = 0
        for a1, a2, a3, c1, c2, c3 in itertools.product(rng, repeat=6):
            lhs = sum(rv(a1, a2, x, y) * rv(x, a3, c1, z) * rv(y, z, c2, c3)
                      for x in rng for y in rng for z in rng)
            rhs = sum(rv(a2, a3, x, y) * rv(a1, y, z, c3) * rv(z, x, c1, c2)
                      for x in rng for y in rng for z in rng)
            assert lhs == rhs
            count += 1
        assert count == 64

    def test_hecke_on_braided_form(self):
        # (braided - q)(braided + q^-1) = 0, checked through the loader once
        # more on a scaled copy that must fail
        bad = DEFAULT_RMATRIX.replace("entry 1 1 1 1 q", "entry 1 1 1 1 q^2")
        with pytest.raises(RMatrixError):
            load_rmatrix(bad)

    def test_identity_matrix_rejected_by_hecke(self):
        text = "\n".join(["N 2", "entry 1 1 1 1 1", "entry 1 2 1 2 1",
                          "entry 2 1 2 1 1", "entry 2 2 2 2 1"])
        with pytest.raises(RMatrixError) as err:
            load_rmatrix(text)
        assert "Hecke" in str(err.value)

    def test_perturbed_entry_fails_with_witness(self):
        bad = DEFAULT_RMATRIX.replace("entry 1 2 2 1 q - q^-1",
                                      "entry 1 2 2 1 q - q^-1 + 1")
        with pytest.raises(RMatrixError) as err:
            load_rmatrix(bad)
        message = str(err.value)
        assert "(" in message and "fails at" in message

    def test_singular_rejected(self):
        text = "\n".join(["N 2", "entry 1 1 1 1 q", "entry 1 2 1 2 1",
                          "entry 2 1 2 1 1"])
        with pytest.raises(RMatrixError) as err:
            load_rmatrix(text)
        assert "singular" in str(err.value)

    def test_reserved_series_rejected(self):
        bad = DEFAULT_RMATRIX.replace("series A", "series BCD-reserved")
        with pytest.raises(RMatrixError) as err:
            load_rmatrix(bad)
        assert "reserved" in str(err.value)

    def test_config_round_trip_bit_exact(self):
        r = load_rmatrix(DEFAULT_RMATRIX)
        text = dump_rmatrix(r)
        assert dump_rmatrix(load_rmatrix(text)) == text


# ---------------------------------------------------------------------------
# relations and rewriting

SPEC_RELATIONS = [
    # (word, word, scalar factor): lhs = factor * rhs as stated equalities
    ("t11 t12 = q t12 t11"),
    ("t11 t21 = q t21 t11"),
    ("t12 t21 = t21 t12"),
    ("t12 t22 = q t22 t12"),
    ("t21 t22 = q t22 t21"),
]


def spec_relation_vectors(rs):
    """The expected N=2 relation span, as vectors over words."""
    g = {"t11": (1, 1), "t12": (1, 2), "t21": (2, 1), "t22": (2, 2)}
    vecs = []
    q = Q
    for text in SPEC_RELATIONS:
        lhs, rhs = text.split(" = ")
        lw = tuple(g[x] for x in lhs.split())
        parts = rhs.split()
        factor = ONE
        if parts[0] == "q":
            factor = q
            parts = parts[1:]
        rw = tuple(g[x] for x in parts)
        vecs.append({lw: ONE, rw: -factor})
    # t11 t22 - t22 t11 = (q - q^-1) t12 t21
    lam = qlambda()
    vecs.append({(g["t11"], g["t22"]): ONE, (g["t22"], g["t11"]): -ONE,
                 (g["t12"], g["t21"]): -lam})
    # t11 t22 - q t12 t21 = 1
    vecs.append({(g["t11"], g["t22"]): ONE, (g["t12"], g["t21"]): -q,
                 (): -ONE})
    return vecs


class TestDeriveRelations:
    def test_matches_seven_rule_oracle(self, qg):
        from qdc.linalg import rref_sparse
        rs = qg.rs
        spec = spec_relation_vectors(rs)
        derived = []
        for lhs, rhs in rs.rules.items():
            row = {lhs: ONE}
            for w, c in rhs.items():
                row[w] = row.get(w, ZERO) - c
            derived.append(row)
        words = sorted({w for row in spec + derived for w in row},
                       key=rs.word_key, reverse=True)
        _, p_spec = rref_sparse([dict(r) for r in spec], words)
        _, p_der = rref_sparse([dict(r) for r in derived], words)
        _, p_all = rref_sparse([dict(r) for r in spec + derived], words)
        assert len(p_spec) == len(p_der) == len(p_all) == 7

    def test_normal_form_examples(self, qg):
        rs = qg.rs
        a, b, c, d = (gen(rs, 1, 1), gen(rs, 1, 2), gen(rs, 2, 1),
                      gen(rs, 2, 2))
        assert b * a == (a * b).scalar_mul(ONE / Q)
        assert a * d - (b * c).scalar_mul(Q) == AlgebraElement.one(rs)

    def test_unit_law(self, qg):
        rs = qg.rs
        e = gen(rs, 2, 2) * gen(rs, 1, 2) + gen(rs, 1, 1)
        assert e * AlgebraElement.one(rs) == e

    def test_single_generator_presentation(self):
        r = load_rmatrix("N 1\nentry 1 1 1 1 q\n")
        qg = QuantumGroup(r)
        t = qg.generator(1, 1)
        assert t == qg.one()
        assert list(qg.rs.rules) == [((1, 1),)]


class TestConfluence:
    def test_all_length_four_words_confluent(self, qg):
        rs = qg.rs
        gens = rs.gens

        def reductions_one_step(word):
            out = []
            for i in range(len(word)):
                for ln in rs.lhs_lengths:
                    if i + ln > len(word):
                        continue
                    rhs = rs.rules.get(word[i:i + ln])
                    if rhs is None:
                        continue
                    out.append((i, ln, rhs))
            return out

        def normal_forms(word, coeff, acc):
            steps = reductions_one_step(word)
            if not steps:
                acc[word] = acc.get(word, ZERO) + coeff
                return
            i, ln, rhs = steps[0]
            for w, c in rhs.items():
                normal_forms(word[:i] + w + word[i + ln:], coeff * c, acc)

        for length in range(2, 5):
            for word in itertools.product(gens, repeat=length):
                steps = reductions_one_step(word)
                if len(steps) < 2:
                    continue
                results = []
                for i, ln, rhs in steps:
                    acc = {}
                    for w, c in rhs.items():
                        normal_forms(word[:i] + w + word[i + ln:], c, acc)
                    results.append({w: c for w, c in acc.items()
                                    if not c.is_zero()})
                for other in results[1:]:
                    assert other == results[0], "diverging paths on %r" % (word,)


class TestDeterminant:
    def test_determinant_is_unit_in_sl_mode(self, qg):
        det = qg.quantum_determinant()
        assert det == qg.one()

    def test_determinant_central_in_gl_mode(self, qg_gl):
        det = qg_gl.quantum_determinant()
        assert det != qg_gl.one()
        for g in qg_gl.rs.gens:
            t = AlgebraElement.generator(qg_gl.rs, *g)
            assert (det * t - t * det).is_zero()

    def test_classical_limit_of_commutation_rules(self, qg_gl):
        # in GL mode every rule swaps a pair with a coefficient that
        # degenerates to 1 at q0 = 1 (plus a vanishing correction term)
        for lhs, rhs in qg_gl.rs.rules.items():
            assert len(lhs) == 2
            swapped = (lhs[1], lhs[0])
            for w, c in rhs.items():
                expected = 1 if w == swapped else 0
                assert c.evaluate_at(1) == expected


# ---------------------------------------------------------------------------
# Hopf structure

class TestHopf:
    def test_coproduct_on_generators(self, qg):
        t = qg.coproduct(qg.generator(1, 1))
        assert t.terms == {(((1, 1),), ((1, 1),)): ONE,
                           (((1, 2),), ((2, 1),)): ONE}

    def test_unit_grouplike(self, qg):
        t = qg.coproduct(qg.one())
        assert t.terms == {((), ()): ONE}

    def test_counit_values(self, qg):
        assert qg.counit(qg.generator(1, 2)).is_zero()
        assert qg.counit(qg.one()).is_one()
        det = AlgebraElement(qg.rs, dict(quantum_determinant_terms(2)),
                             reduce=False)
        assert qg.counit(det).is_one()

    def test_counit_axiom_random_degree_three(self, qg):
        for w in qg.rs.normal_words(3):
            elem = AlgebraElement.from_word(qg.rs, w)
            acc = AlgebraElement.zero(qg.rs)
            for (w1, w2), c in qg.coproduct_word(w).terms.items():
                e = qg.counit_word(w1)
                if not e.is_zero():
                    acc = acc + AlgebraElement(qg.rs, {w2: c * e}, reduce=False)
            assert acc == elem

    def test_antipode_table(self, qg):
        assert qg.antipode_table[(1, 1)] == qg.generator(2, 2)
        assert qg.antipode_table[(2, 2)] == qg.generator(1, 1)
        assert qg.antipode_table[(1, 2)] == \
            qg.generator(1, 2).scalar_mul(ZERO - ONE / Q)
        assert qg.antipode_table[(2, 1)] == qg.generator(2, 1).scalar_mul(ZERO - Q)

    def test_antipode_axiom_all_generators(self, qg):
        for a in (1, 2):
            for b in (1, 2):
                acc = AlgebraElement.zero(qg.rs)
                for g in (1, 2):
                    acc = acc + qg.antipode_table[(a, g)] * qg.generator(g, b)
                expected = qg.one() if a == b else AlgebraElement.zero(qg.rs)
                assert acc == expected

    def test_antipode_squared_via_axiom(self, qg):
        b = qg.generator(1, 2)
        assert qg.antipode(qg.antipode(b)) == b.scalar_mul(ONE / (Q * Q))
        assert qg.antipode(qg.one()) == qg.one()


class TestAdjoint:
    def test_unit(self, qg):
        t = qg.adjoint(qg.one())
        assert t.terms == {((), ()): ONE}

    def test_counit_collapse(self, qg):
        for w in qg.rs.normal_words(2):
            elem = AlgebraElement.from_word(qg.rs, w)
            t = qg.adjoint(elem)
            total = ZERO
            for (w1, w2), c in t.terms.items():
                e = qg.counit_word(w1) * qg.counit_word(w2)
                if not e.is_zero():
                    total = total + c * e
            assert total == qg.counit(elem)

    def test_generator_expansion_leg_by_leg(self, qg):
        a = qg.generator(1, 1)
        triple = qg.coproduct(a, arity=3)
        expected = TensorElement(qg.rs, 2, {})
        for (w1, w2, w3), c in triple.terms.items():
            right = qg.antipode_word(w1) * AlgebraElement.from_word(qg.rs, w3)
            piece = {}
            for u, cu in right.terms.items():
                piece[(w2, u)] = c * cu
            expected = expected + TensorElement(qg.rs, 2, piece)
        assert qg.adjoint(a) == expected

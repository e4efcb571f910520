"""K satisfiability, the full decision procedure, and bounded search."""

import pytest

from lhs import (
    ContainsI,
    MixedFormula,
    Not,
    brute_force_sat_oracle,
    check,
    k_sat,
    k_valid,
    lhs_bounded_sat,
    lhs_minus_sat,
    lhs_minus_valid,
    one_sided_eval,
    parse,
)
from lhs.model import successors
from lhs.syntax import Side

from conftest import random_i_free, random_one_sided


class TestKSat:
    def test_propositional_clash(self):
        assert k_sat(parse("l:p & ~l:p")).status == "UNSAT"

    def test_diamond_top(self):
        v = k_sat(parse("<W> true"))
        assert v.status == "SAT"
        assert len(v.model.states) == 2
        assert one_sided_eval(v.model, v.state, parse("<W> true"))

    def test_k_non_theorem_needs_two_successors(self):
        phi = parse("[W](l:p | l:q) & ~([W]l:p | [W]l:q)")
        v = k_sat(phi)
        assert v.status == "SAT"
        assert one_sided_eval(v.model, v.state, phi)
        assert brute_force_sat_oracle(phi, 3).status == "SAT"

    def test_rejects_mixed(self):
        with pytest.raises(MixedFormula):
            k_sat(parse("l:p & r:q"))

    def test_witnesses_are_trees(self, rng):
        for _ in range(100):
            phi = random_one_sided(rng, Side.LEFT, depth=3)
            v = k_sat(phi)
            if v.status != "SAT":
                continue
            assert one_sided_eval(v.model, v.state, phi)
            indeg = {w: 0 for w in v.model.states}
            for a, b in v.model.edges:
                assert a != b
                indeg[b] += 1
            assert all(d <= 1 for d in indeg.values())


class TestKValid:
    def test_k_axiom(self):
        ok, _ = k_valid(parse("[W](l:p -> l:q) -> ([W]l:p -> [W]l:q)"))
        assert ok

    def test_atom_invalid_with_countermodel(self):
        ok, counter = k_valid(parse("l:p"))
        assert not ok
        assert len(counter.model.states) == 1
        assert not one_sided_eval(counter.model, counter.state, parse("l:p"))

    def test_oracle_agreement(self, rng):
        for _ in range(150):
            side = rng.choice([Side.LEFT, Side.RIGHT])
            phi = random_one_sided(rng, side, depth=2)
            ok, counter = k_valid(phi)
            oracle = brute_force_sat_oracle(Not(phi), 3)
            if oracle.status == "SAT":
                assert not ok
            if ok:
                assert oracle.status == "NO-MODEL-UP-TO-BOUND"
            else:
                assert not one_sided_eval(counter.model, counter.state, phi)


class TestLhsMinusValid:
    def test_white_distribution_axiom(self):
        v = lhs_minus_valid(parse("[W](l:p | r:p) <-> ([W]l:p | r:p)"))
        assert v.status == "VALID"
        assert v.certificate

    def test_modal_commutation(self):
        phi = parse("[W][B](l:p & r:q) <-> [B][W](l:p & r:q)")
        assert lhs_minus_valid(phi).status == "VALID"

    def test_unsound_distribution_refuted(self):
        phi = parse("[W](l:p | l:q) -> ([W]l:p | l:q)")
        v = lhs_minus_valid(phi)
        assert v.status == "INVALID"
        s, t = v.pair
        assert not check(v.model, s, t, phi)
        assert brute_force_sat_oracle(Not(phi), 4).status == "SAT"

    def test_rejects_equality_constant(self):
        with pytest.raises(ContainsI):
            lhs_minus_valid(parse("I -> I"))


class TestLhsMinusSat:
    def test_top(self):
        assert lhs_minus_sat(parse("true")).status == "SAT"

    def test_contradiction(self):
        assert lhs_minus_sat(parse("l:p & ~l:p")).status == "UNSAT"

    def test_witnesses_verify(self, rng):
        for _ in range(100):
            phi = random_i_free(rng, depth=2)
            v = lhs_minus_sat(phi)
            if v.status == "SAT":
                s, t = v.pair
                assert check(v.model, s, t, phi)

    def test_oracle_agreement(self, rng):
        for _ in range(150):
            phi = random_i_free(rng, depth=2)
            mine = lhs_minus_sat(phi)
            oracle = brute_force_sat_oracle(phi, 4)
            if oracle.status == "SAT":
                assert mine.status == "SAT"
            if mine.status == "UNSAT":
                assert oracle.status == "NO-MODEL-UP-TO-BOUND"


class TestBoundedSat:
    def test_equality_constant_needs_one_state(self):
        v = lhs_bounded_sat(parse("I"), 1)
        assert v.status == "SAT"
        s, t = v.pair
        assert s == t

    def test_contradiction_exhausts(self):
        for bound in (1, 2, 3):
            assert lhs_bounded_sat(parse("I & ~I"), bound).status == "NO-MODEL-UP-TO-BOUND"

    def test_agrees_with_oracle(self, rng):
        for _ in range(40):
            phi = random_i_free(rng, depth=2)
            a = lhs_bounded_sat(phi, 2)
            b = brute_force_sat_oracle(phi, 2)
            assert a.status == b.status
            if a.status == "SAT":
                assert check(a.model, *a.pair, phi)
                assert check(b.model, *b.pair, phi)

    def test_witness_verifies(self, rng):
        for _ in range(40):
            phi = rng.choice([parse("<W>I"), parse("I & <W>~I"), parse("[B]I & <W>l:p")])
            v = lhs_bounded_sat(phi, 3)
            if v.status == "SAT":
                assert check(v.model, *v.pair, phi)

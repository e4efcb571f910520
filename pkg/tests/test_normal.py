"""Propositional CNF, clean decomposition, clean CNF, and the companion."""

import itertools

import pytest

from lhs import (
    And,
    Atom,
    BBox,
    Bot,
    ContainsI,
    Iff,
    ModalInput,
    Not,
    NotClean,
    Or,
    Top,
    WBox,
    check,
    classify,
    clean_decompose,
    clean_to_cnf,
    companion,
    left_atom,
    make_model,
    parse,
    prop_cnf,
    prop_names,
    render,
    right_atom,
    substitute,
)
from lhs.bruteforce import find_model
from lhs.syntax import Formula, Side

from conftest import equivalent_on, random_clean, random_i_free, random_model


def truth_table_equal(f1, f2):
    """Propositional equivalence by brute force over all assignments."""
    names = sorted(prop_names(f1) | prop_names(f2), key=str)
    for bits in itertools.product([False, True], repeat=len(names)):
        env = dict(zip(names, bits))
        if _prop_eval(f1, env) != _prop_eval(f2, env):
            return False
    return True


def _prop_eval(phi, env):
    if isinstance(phi, Atom):
        return env[phi.prop]
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Not):
        return not _prop_eval(phi.child, env)
    if isinstance(phi, And):
        return _prop_eval(phi.left, env) and _prop_eval(phi.right, env)
    if isinstance(phi, Or):
        return _prop_eval(phi.left, env) or _prop_eval(phi.right, env)
    if isinstance(phi, Iff):
        return _prop_eval(phi.left, env) == _prop_eval(phi.right, env)
    # Implies
    return (not _prop_eval(phi.left, env)) or _prop_eval(phi.right, env)


def is_cnf(phi):
    """Shape check: a conjunction of disjunctions of literals (or a constant)."""
    def literal(f):
        return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.child, Atom))

    def clause(f):
        if isinstance(f, Or):
            return clause(f.left) and clause(f.right)
        return literal(f)

    def conj(f):
        if isinstance(f, And):
            return conj(f.left) and conj(f.right)
        return clause(f)

    return isinstance(phi, (Top, Bot)) or conj(phi)


def random_prop_formula(rng, depth=3):
    """Random modality-free formula over both sides' atoms."""
    import random as _r
    from lhs import Implies
    leaves = [left_atom("p"), left_atom("q"), right_atom("p"), right_atom("q"),
              Top(), Bot()]
    if depth == 0 or rng.random() < 0.3:
        return rng.choice(leaves)
    if rng.random() < 0.25:
        return Not(random_prop_formula(rng, depth - 1))
    op = rng.choice([And, Or, Implies, Iff])
    return op(random_prop_formula(rng, depth - 1), random_prop_formula(rng, depth - 1))


def companion_formula(phi):
    return companion(phi).to_formula()


def equivalent_everywhere(f1, f2, max_states=3):
    """No model up to `max_states` states over f1's variables splits f1/f2."""
    props = sorted(prop_names(f1), key=str)
    return find_model(Not(Iff(f1, f2)), max_states, props=props) is None


class TestPropCNF:
    def test_unit_clause(self):
        assert prop_cnf(parse("l:p")) == parse("l:p")

    def test_de_morgan(self):
        assert truth_table_equal(prop_cnf(parse("~(l:p & r:q)")),
                                 parse("~l:p | ~r:q"))
        assert is_cnf(prop_cnf(parse("~(l:p & r:q)")))

    def test_iff_expands(self):
        got = prop_cnf(parse("l:p <-> r:q"))
        assert is_cnf(got)
        assert truth_table_equal(got, parse("(~l:p | r:q) & (l:p | ~r:q)"))

    def test_rejects_modalities(self):
        with pytest.raises(ModalInput):
            prop_cnf(parse("[W]l:p"))

    def test_rejects_equality_constant(self):
        with pytest.raises(ModalInput):
            prop_cnf(parse("I"))

    def test_random_equivalence_and_shape(self, rng):
        for _ in range(150):
            alpha = random_prop_formula(rng)
            out = prop_cnf(alpha)
            assert is_cnf(out)
            assert truth_table_equal(alpha, out)


class TestCleanDecompose:
    def test_one_sided_is_single_placeholder(self):
        phi = parse("[W](l:p & l:q)")
        skeleton, blocks, mapping = clean_decompose(phi)
        assert blocks == [phi]
        assert isinstance(skeleton, Atom)

    def test_two_blocks(self):
        phi = parse("[W]l:p | [B]r:q")
        skeleton, blocks, _ = clean_decompose(phi)
        assert isinstance(skeleton, Or)
        assert blocks == [parse("[W]l:p"), parse("[B]r:q")]

    def test_shared_blocks_share_placeholders(self):
        phi = parse("[W]l:p & [W]l:p")
        _, blocks, mapping = clean_decompose(phi)
        assert len(blocks) == 1 and len(mapping) == 1

    def test_rejects_unclean(self):
        with pytest.raises(NotClean):
            clean_decompose(parse("[W](l:p | r:q)"))

    def test_back_substitution_identity(self, rng):
        for _ in range(500):
            phi = random_clean(rng, depth=3)
            skeleton, blocks, mapping = clean_decompose(phi)
            left_map = {pn: b for b, pn in mapping.items() if pn.side is Side.LEFT}
            right_map = {pn: b for b, pn in mapping.items() if pn.side is Side.RIGHT}
            assert substitute(skeleton, left_map, right_map) == phi


class TestCleanToCNF:
    def test_left_atom_padding_shape(self):
        cnf = clean_to_cnf(parse("l:p"))
        assert len(cnf.conjuncts) == 1
        psi, gamma = cnf.conjuncts[0]
        assert psi == parse("(l:_fresh0 & ~l:_fresh0) | l:p", allow_reserved=True)
        assert gamma == parse("r:_fresh0 & ~r:_fresh0", allow_reserved=True)

    def test_conjuncts_are_one_sided(self, rng):
        for _ in range(100):
            phi = random_clean(rng)
            for psi, gamma in clean_to_cnf(phi).conjuncts:
                assert classify(psi).white_only
                assert classify(gamma).black_only

    def test_mixed_disjunction_equivalent(self):
        phi = parse("[W]l:p | [B]r:q")
        cnf = clean_to_cnf(phi)
        assert len(cnf.conjuncts) == 1
        assert equivalent_everywhere(phi, cnf.to_formula())

    def test_rejects_unclean(self):
        with pytest.raises(NotClean):
            clean_to_cnf(parse("[W](l:p | r:q)"))

    def test_random_equivalence(self, rng):
        for _ in range(100):
            phi = random_clean(rng)
            assert equivalent_everywhere(phi, clean_to_cnf(phi).to_formula())


class TestCompanion:
    def test_black_box_atom_identity(self):
        cnf = companion(parse("[B]l:p"))
        assert len(cnf.conjuncts) == 1
        psi, gamma = cnf.conjuncts[0]
        assert psi == parse("l:p")
        assert gamma == parse("[B](r:_fresh0 & ~r:_fresh0)", allow_reserved=True)

    def test_left_atom_identity(self):
        cnf = companion(parse("l:p"))
        assert render(cnf.to_formula()) == "l:p | r:_fresh0 & ~r:_fresh0"

    def test_conjunction_concatenates(self):
        a = companion(parse("l:p"))
        b = companion(parse("r:q"))
        both = companion(parse("l:p & r:q"))
        assert len(both.conjuncts) == len(a.conjuncts) + len(b.conjuncts)

    def test_rejects_equality_constant(self):
        with pytest.raises(ContainsI):
            companion(parse("[W]I"))

    def test_deterministic(self, rng):
        for _ in range(30):
            phi = random_i_free(rng)
            assert companion(phi).conjuncts == companion(phi).conjuncts

    def test_conjuncts_one_sided(self, rng):
        for _ in range(100):
            phi = random_i_free(rng)
            for psi, gamma in companion(phi).conjuncts:
                assert classify(psi).white_only
                assert classify(gamma).black_only

    def test_modal_commutation_companions_equivalent(self, rng):
        # the companions of [W][B]~phi and [B][W]~phi describe the same class
        for _ in range(20):
            phi = random_i_free(rng, depth=1)
            a = companion_formula(WBox(BBox(Not(phi))))
            b = companion_formula(BBox(WBox(Not(phi))))
            props = sorted(prop_names(phi), key=str)
            assert find_model(Not(Iff(a, b)), 3, props=props) is None

    def test_random_equivalence(self, rng):
        for _ in range(100):
            phi = random_i_free(rng)
            assert equivalent_everywhere(phi, companion_formula(phi))

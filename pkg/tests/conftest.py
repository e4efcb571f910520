"""Shared random generators and helpers for the test suite.

Everything here is seeded explicitly by the caller so test runs are
reproducible; no module-level RNG state.
"""

import random

import pytest

from lhs import (
    And,
    Atom,
    BBox,
    BDia,
    Bot,
    EqConst,
    Iff,
    Implies,
    Model,
    Not,
    Or,
    Top,
    WBox,
    WDia,
    check,
    left_atom,
    make_model,
    right_atom,
)
from lhs.syntax import Formula, PropName, Side

LEFT_VARS = ("p", "q")
RIGHT_VARS = ("p", "q")

_UNARY = (Not, WBox, WDia, BBox, BDia)
_BINARY = (And, Or, Implies, Iff)


@pytest.fixture
def rng():
    return random.Random(20260826)


def random_formula(rng, depth=3, allow_i=True, left_vars=LEFT_VARS,
                   right_vars=RIGHT_VARS):
    """A random formula of modal/connective depth at most `depth`."""
    leaves = [left_atom(v) for v in left_vars] + [right_atom(v) for v in right_vars]
    leaves += [Top(), Bot()]
    if allow_i:
        leaves.append(EqConst())
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(leaves)
    if rng.random() < 0.5:
        op = rng.choice(_UNARY)
        return op(random_formula(rng, depth - 1, allow_i, left_vars, right_vars))
    op = rng.choice(_BINARY)
    return op(random_formula(rng, depth - 1, allow_i, left_vars, right_vars),
              random_formula(rng, depth - 1, allow_i, left_vars, right_vars))


def random_i_free(rng, depth=2, left_vars=LEFT_VARS, right_vars=RIGHT_VARS):
    return random_formula(rng, depth, allow_i=False, left_vars=left_vars,
                          right_vars=right_vars)


def random_one_sided(rng, side, depth=2, names=("p", "q")):
    """A random formula using only one side's atoms and modalities."""
    mk = left_atom if side is Side.LEFT else right_atom
    box, dia = (WBox, WDia) if side is Side.LEFT else (BBox, BDia)
    leaves = [mk(v) for v in names] + [Top(), Bot()]
    if depth == 0 or rng.random() < 0.3:
        return rng.choice(leaves)
    roll = rng.random()
    child = random_one_sided(rng, side, depth - 1, names)
    if roll < 0.2:
        return Not(child)
    if roll < 0.4:
        return box(child)
    if roll < 0.55:
        return dia(child)
    op = rng.choice(_BINARY)
    return op(child, random_one_sided(rng, side, depth - 1, names))


def random_clean(rng, depth=2, block_depth=2):
    """A random clean formula: a Boolean combination of one-sided blocks."""
    if depth == 0 or rng.random() < 0.4:
        side = rng.choice([Side.LEFT, Side.RIGHT])
        return random_one_sided(rng, side, block_depth)
    if rng.random() < 0.25:
        return Not(random_clean(rng, depth - 1, block_depth))
    op = rng.choice(_BINARY)
    return op(random_clean(rng, depth - 1, block_depth),
              random_clean(rng, depth - 1, block_depth))


def random_model(rng, max_states=4, props=("l:p", "l:q", "r:p", "r:q"),
                 edge_prob=0.35, val_prob=0.4):
    """A random Kripke model with 1..max_states states."""
    n = rng.randint(1, max_states)
    states = [f"w{i}" for i in range(n)]
    edges = [(a, b) for a in states for b in states if rng.random() < edge_prob]
    valuation = {}
    for p in props:
        holds = [w for w in states if rng.random() < val_prob]
        if holds:
            valuation[p] = holds
    return make_model(states, edges, valuation)


def all_pairs(model):
    return [(s, t) for s in sorted(model.states) for t in sorted(model.states)]


def equivalent_on(model, f1, f2):
    """True when f1 and f2 have the same truth value at every pair."""
    return all(check(model, s, t, f1) == check(model, s, t, f2)
               for s, t in all_pairs(model))


def rename_copy(model, prefix="c."):
    """An isomorphic copy of `model` with prefixed state names."""
    ren = {w: prefix + w for w in model.states}
    return make_model(
        [ren[w] for w in model.states],
        [(ren[a], ren[b]) for a, b in model.edges],
        {f"{p.side.value}:{p.name}": [ren[w] for w in ws]
         for p, ws in model.valuation.items()},
    ), ren

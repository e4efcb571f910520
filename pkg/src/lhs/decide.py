"""Satisfiability and validity: K tableau, the I-free decision procedure,
bounded search for the full language, and the brute-force oracle wrapper."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import bruteforce
from .errors import ContainsI, LhsError, MixedFormula
from .model import (
    DEFAULT_ENUMERATION_CEILING,
    Model,
    disjoint_union,
    enumerate_models,
)
from .normal import CleanCNF, companion
from .semantics import check
from .syntax import (
    And,
    Atom,
    BBox,
    BDia,
    Bot,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    RESERVED_PREFIX,
    Top,
    WBox,
    WDia,
    classify,
    prop_names,
)


@dataclass(frozen=True)
class KVerdict:
    status: str  # "SAT" | "UNSAT"
    model: Model | None = None
    state: str | None = None


@dataclass(frozen=True)
class LHSVerdict:
    status: str  # "VALID" | "INVALID" | "SAT" | "UNSAT"
    model: Model | None = None
    pair: tuple[str, str] | None = None
    # For VALID: one record per companion conjunct, ("white"|"black", formula).
    certificate: tuple[tuple[str, Formula], ...] | None = None
    companion: CleanCNF | None = None


@dataclass(frozen=True)
class BoundedVerdict:
    status: str  # "SAT" | "NO-MODEL-UP-TO-BOUND"
    bound: int
    model: Model | None = None
    pair: tuple[str, str] | None = None


# ---------------------------------------------------------------------------
# K tableau


def _nnf(phi: Formula, positive: bool = True) -> Formula:
    if isinstance(phi, Atom):
        return phi if positive else Not(phi)
    if isinstance(phi, Top):
        return Top() if positive else Bot()
    if isinstance(phi, Bot):
        return Bot() if positive else Top()
    if isinstance(phi, Not):
        return _nnf(phi.child, not positive)
    if isinstance(phi, And):
        ctor = And if positive else Or
        return ctor(_nnf(phi.left, positive), _nnf(phi.right, positive))
    if isinstance(phi, Or):
        ctor = Or if positive else And
        return ctor(_nnf(phi.left, positive), _nnf(phi.right, positive))
    if isinstance(phi, Implies):
        return _nnf(Or(Not(phi.left), phi.right), positive)
    if isinstance(phi, Iff):
        both = And(Implies(phi.left, phi.right), Implies(phi.right, phi.left))
        return _nnf(both, positive)
    if isinstance(phi, (WBox, BBox)):
        box, dia = (WBox, WDia) if isinstance(phi, WBox) else (BBox, BDia)
        return box(_nnf(phi.child, True)) if positive else dia(_nnf(phi.child, False))
    if isinstance(phi, (WDia, BDia)):
        box, dia = (WBox, WDia) if isinstance(phi, WDia) else (BBox, BDia)
        return dia(_nnf(phi.child, True)) if positive else box(_nnf(phi.child, False))
    raise TypeError(f"not a formula: {phi!r}")


@dataclass
class _TreeNode:
    atoms: frozenset
    children: list = field(default_factory=list)


def _tableau(goals: frozenset) -> _TreeNode | None:
    """Satisfiability of a set of NNF formulas in basic modal logic K.

    Returns a tree witness (nodes carry their positive atoms) or None.
    Depth is bounded by modal depth, so no loop check is needed.
    """
    for f in goals:
        if isinstance(f, And):
            rest = (goals - {f}) | {f.left, f.right}
            return _tableau(rest)
        if isinstance(f, Or):
            rest = goals - {f}
            return _tableau(rest | {f.left}) or _tableau(rest | {f.right})
    # Only literals, constants, boxes and diamonds remain.
    if any(isinstance(f, Bot) for f in goals):
        return None
    positive = {f.prop for f in goals if isinstance(f, Atom)}
    negative = {f.child.prop for f in goals if isinstance(f, Not)}
    if positive & negative:
        return None
    box_contents = frozenset(f.child for f in goals if isinstance(f, (WBox, BBox)))
    node = _TreeNode(frozenset(positive))
    for f in goals:
        if isinstance(f, (WDia, BDia)):
            child = _tableau(box_contents | {f.child})
            if child is None:
                return None
            node.children.append(child)
    return node


def _tree_to_model(root: _TreeNode) -> tuple[Model, str]:
    states: list[str] = []
    edges = set()
    valuation: dict = {}

    def emit(node: _TreeNode) -> str:
        name = f"n{len(states)}"
        states.append(name)
        for prop in node.atoms:
            valuation.setdefault(prop, set()).add(name)
        for child in node.children:
            edges.add((name, emit(child)))
        return name

    root_name = emit(root)
    return (
        Model(tuple(states), frozenset(edges), {p: frozenset(ws) for p, ws in valuation.items()}),
        root_name,
    )


def k_sat(phi: Formula) -> KVerdict:
    """Sound and complete satisfiability for a one-sided formula in K.

    On SAT the witness is the extracted tableau tree (acyclic, in-degree one
    except at the root).
    """
    sc = classify(phi)
    if not (sc.white_only or sc.black_only):
        raise MixedFormula("K satisfiability requires a white-only or black-only formula")
    tree = _tableau(frozenset({_nnf(phi)}))
    if tree is None:
        return KVerdict("UNSAT")
    model, root = _tree_to_model(tree)
    return KVerdict("SAT", model, root)


def k_valid(phi: Formula) -> tuple[bool, KVerdict | None]:
    """Validity in K; on failure also returns the countermodel verdict."""
    verdict = k_sat(Not(phi))
    if verdict.status == "UNSAT":
        return True, None
    return False, verdict


# ---------------------------------------------------------------------------
# Decision procedure for the I-free fragment


def _strip_fresh(model: Model) -> Model:
    val = {
        p: ws
        for p, ws in model.valuation.items()
        if not p.name.startswith(RESERVED_PREFIX)
    }
    return Model(model.states, model.edges, val)


def lhs_minus_valid(phi: Formula) -> LHSVerdict:
    """Validity of an I-free formula.

    The companion splits phi into conjuncts psi_i | gamma_i; the formula is
    valid iff every conjunct has a K-valid side. An invalid conjunct yields
    two K countermodels whose disjoint union falsifies phi at the paired
    roots; the witness is re-verified before being returned.
    """
    if not classify(phi).i_free:
        raise ContainsI("the decision procedure covers the I-free fragment only")
    comp = companion(phi)
    certificate = []
    for psi, gamma in comp.conjuncts:
        ok_white, counter_white = k_valid(psi)
        if ok_white:
            certificate.append(("white", psi))
            continue
        ok_black, counter_black = k_valid(gamma)
        if ok_black:
            certificate.append(("black", gamma))
            continue
        union, rename_m, rename_n = disjoint_union(counter_white.model, counter_black.model)
        s = rename_m[counter_white.state]
        t = rename_n[counter_black.state]
        if check(union, s, t, phi):
            raise LhsError(
                "internal error: countermodel failed to falsify the input"
            )
        return LHSVerdict("INVALID", _strip_fresh(union), (s, t), companion=comp)
    return LHSVerdict("VALID", certificate=tuple(certificate), companion=comp)


def lhs_minus_sat(phi: Formula) -> LHSVerdict:
    """Satisfiability of an I-free formula, with a finite witness on SAT."""
    verdict = lhs_minus_valid(Not(phi))
    if verdict.status == "INVALID":
        s, t = verdict.pair
        if not check(verdict.model, s, t, phi):
            raise LhsError("internal error: witness failed to satisfy the input")
        return LHSVerdict("SAT", verdict.model, verdict.pair)
    return LHSVerdict("UNSAT")


# ---------------------------------------------------------------------------
# Bounded search for the full language


def lhs_bounded_sat(phi: Formula, max_states: int,
                    ceiling: int = DEFAULT_ENUMERATION_CEILING,
                    force: bool = False) -> BoundedVerdict:
    """Enumerate models over phi's variables up to the bound.

    Exhaustion means "no model up to the bound", never "unsatisfiable":
    satisfiability of the full language is undecidable, so only this
    semi-procedure is offered.
    """
    props = sorted(prop_names(phi), key=str)
    for model in enumerate_models(max_states, props, ceiling=ceiling, force=force):
        memo: dict = {}
        for s in model.states:
            for t in model.states:
                if check(model, s, t, phi, _memo=memo):
                    return BoundedVerdict("SAT", max_states, model, (s, t))
    return BoundedVerdict("NO-MODEL-UP-TO-BOUND", max_states)


def brute_force_sat_oracle(phi: Formula, max_states: int,
                           ceiling: int = bruteforce.DEFAULT_ORACLE_CEILING,
                           force: bool = False,
                           mod_iso: bool = True) -> BoundedVerdict:
    """Independent oracle with the same contract as `lhs_bounded_sat`.

    Shares nothing with the tableau or the companion; witnesses are
    re-verified through the reference truth definition before returning.
    """
    found = bruteforce.find_model(phi, max_states, ceiling=ceiling, force=force,
                                  mod_iso=mod_iso)
    if found is None:
        return BoundedVerdict("NO-MODEL-UP-TO-BOUND", max_states)
    model, s, t = found
    if not check(model, s, t, phi):
        raise LhsError("internal error: oracle witness failed re-verification")
    return BoundedVerdict("SAT", max_states, model, (s, t))

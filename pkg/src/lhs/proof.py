"""Checker for Hilbert-style derivations in the I-free calculus.

Axiom lines must be literal schema instances over propositional variables
(with the side constraints of each schema); general instances are reached via
an explicit substitution line, whose side-purity requirement is exactly what
keeps the one-sided axioms sound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ModelFormatError, SideViolation
from .syntax import (
    Atom,
    BBox,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    PropName,
    Side,
    WBox,
    classify,
    parse,
    render,
    substitute,
)

AXIOM_NAMES = ("A1", "A2", "A3", "K_box", "K_bbox", "R_box", "R_bbox")
RULE_NAMES = AXIOM_NAMES + ("Sub", "MP", "Nec_W", "Nec_B")


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    rule: str
    premises: tuple[int, ...] = ()  # 1-based indices of earlier lines
    left_map: dict[PropName, Formula] | None = None
    right_map: dict[PropName, Formula] | None = None


@dataclass(frozen=True)
class LineError:
    line: int
    reason: str


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    first_error: LineError | None = None


# ---------------------------------------------------------------------------
# Axiom recognizers: each matches the exact schema shape over atoms.


def _is_atom(f: Formula, side: Side | None = None) -> bool:
    return isinstance(f, Atom) and (side is None or f.prop.side is side)


def _match_a1(f: Formula) -> bool:
    # p -> (q -> p)
    return (
        isinstance(f, Implies)
        and _is_atom(f.left)
        and isinstance(f.right, Implies)
        and _is_atom(f.right.left)
        and f.right.right == f.left
    )


def _match_a2(f: Formula) -> bool:
    # (p -> (q -> r)) -> ((p -> q) -> (p -> r))
    if not (isinstance(f, Implies) and isinstance(f.left, Implies)):
        return False
    head, tail = f.left, f.right
    if not (isinstance(head.right, Implies) and _is_atom(head.left)):
        return False
    p, q, r = head.left, head.right.left, head.right.right
    if not (_is_atom(q) and _is_atom(r)):
        return False
    return tail == Implies(Implies(p, q), Implies(p, r))


def _match_a3(f: Formula) -> bool:
    # (~q -> ~p) -> (p -> q)
    if not (isinstance(f, Implies) and isinstance(f.left, Implies)):
        return False
    head, tail = f.left, f.right
    if not (
        isinstance(head.left, Not)
        and isinstance(head.right, Not)
        and _is_atom(head.left.child)
        and _is_atom(head.right.child)
    ):
        return False
    q, p = head.left.child, head.right.child
    return tail == Implies(p, q)


def _match_k(f: Formula, box, side: Side) -> bool:
    # box(p -> q) -> (box p -> box q), both variables on the box's side
    if not (isinstance(f, Implies) and isinstance(f.left, box)):
        return False
    inner = f.left.child
    if not (isinstance(inner, Implies) and _is_atom(inner.left, side) and _is_atom(inner.right, side)):
        return False
    p, q = inner.left, inner.right
    return f.right == Implies(box(p), box(q))


def _match_r_box(f: Formula) -> bool:
    # [W](pl | pr) <-> ([W]pl | pr)
    if not (isinstance(f, Iff) and isinstance(f.left, WBox)):
        return False
    inner = f.left.child
    if not (isinstance(inner, Or) and _is_atom(inner.left, Side.LEFT) and _is_atom(inner.right, Side.RIGHT)):
        return False
    pl, pr = inner.left, inner.right
    return f.right == Or(WBox(pl), pr)


def _match_r_bbox(f: Formula) -> bool:
    # [B](pl | pr) <-> (pl | [B]pr)
    if not (isinstance(f, Iff) and isinstance(f.left, BBox)):
        return False
    inner = f.left.child
    if not (isinstance(inner, Or) and _is_atom(inner.left, Side.LEFT) and _is_atom(inner.right, Side.RIGHT)):
        return False
    pl, pr = inner.left, inner.right
    return f.right == Or(pl, BBox(pr))


_AXIOM_MATCHERS = {
    "A1": _match_a1,
    "A2": _match_a2,
    "A3": _match_a3,
    "K_box": lambda f: _match_k(f, WBox, Side.LEFT),
    "K_bbox": lambda f: _match_k(f, BBox, Side.RIGHT),
    "R_box": _match_r_box,
    "R_bbox": _match_r_bbox,
}


# ---------------------------------------------------------------------------
# Proof checking


def check_proof(lines: list[ProofLine]) -> CheckReport:
    for number, line in enumerate(lines, start=1):
        reason = _check_line(lines, number, line)
        if reason is not None:
            return CheckReport(False, LineError(number, reason))
    return CheckReport(True)


def _check_line(lines: list[ProofLine], number: int, line: ProofLine) -> str | None:
    if not classify(line.formula).i_free:
        return "proof lines must be I-free"
    for idx in line.premises:
        if not (1 <= idx < number):
            return f"premise {idx} does not precede line {number}"
    rule = line.rule
    if rule in _AXIOM_MATCHERS:
        if line.premises:
            return f"axiom {rule} takes no premises"
        if not _AXIOM_MATCHERS[rule](line.formula):
            return f"formula is not an instance of schema {rule}"
        return None
    if rule == "Sub":
        if len(line.premises) != 1:
            return "Sub takes exactly one premise"
        premise = lines[line.premises[0] - 1].formula
        try:
            expected = substitute(premise, line.left_map or {}, line.right_map or {})
        except SideViolation as exc:
            return f"substitution violates side purity: {exc}"
        if line.formula != expected:
            return (
                f"substitution result mismatch: expected {render(expected)}"
            )
        return None
    if rule == "MP":
        if len(line.premises) != 2:
            return "MP takes exactly two premises"
        antecedent = lines[line.premises[0] - 1].formula
        implication = lines[line.premises[1] - 1].formula
        if implication != Implies(antecedent, line.formula):
            return "second premise is not (first premise -> this line)"
        return None
    if rule in ("Nec_W", "Nec_B"):
        if len(line.premises) != 1:
            return f"{rule} takes exactly one premise"
        premise = lines[line.premises[0] - 1].formula
        box = WBox if rule == "Nec_W" else BBox
        if line.formula != box(premise):
            return f"formula is not the {rule} of its premise"
        return None
    return f"unknown rule {rule!r}"


def proof_conclusion_valid(lines: list[ProofLine]) -> bool:
    """Soundness cross-check: the last line must be valid per the decision procedure."""
    from .decide import lhs_minus_valid

    report = check_proof(lines)
    if not report.ok or not lines:
        raise ModelFormatError("conclusion check requires a nonempty verified proof")
    return lhs_minus_valid(lines[-1].formula).status == "VALID"


# ---------------------------------------------------------------------------
# File format


def _parse_subst_map(raw: dict, expected_side: Side) -> dict[PropName, Formula]:
    out = {}
    for key, value in raw.items():
        prop_formula = parse(key)
        if not isinstance(prop_formula, Atom):
            raise ModelFormatError(f"substitution key {key!r} is not an atom")
        if prop_formula.prop.side is not expected_side:
            raise ModelFormatError(
                f"substitution key {key!r} is on the wrong side for this map"
            )
        out[prop_formula.prop] = parse(value)
    return out


def load_proof(text: str) -> list[ProofLine]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise ModelFormatError("a proof file is a JSON list of line objects")
    lines = []
    for i, entry in enumerate(doc, start=1):
        if not isinstance(entry, dict):
            raise ModelFormatError(f"line {i}: not an object")
        unknown = set(entry) - {"formula", "rule", "premises", "subst", "vars"}
        if unknown:
            raise ModelFormatError(f"line {i}: unknown keys {sorted(unknown)}")
        try:
            formula = parse(entry["formula"])
        except KeyError:
            raise ModelFormatError(f"line {i}: missing 'formula'") from None
        rule = entry.get("rule")
        if rule not in RULE_NAMES:
            raise ModelFormatError(f"line {i}: unknown rule {rule!r}")
        premises = tuple(entry.get("premises", []))
        if not all(isinstance(p, int) for p in premises):
            raise ModelFormatError(f"line {i}: premises must be integers")
        left_map = right_map = None
        if "subst" in entry:
            subst = entry["subst"]
            left_map = _parse_subst_map(subst.get("left", {}), Side.LEFT)
            right_map = _parse_subst_map(subst.get("right", {}), Side.RIGHT)
        lines.append(ProofLine(formula, rule, premises, left_map, right_map))
    return lines

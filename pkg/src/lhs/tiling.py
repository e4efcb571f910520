"""Tile sets, the satisfiability formula that encodes tiling, and torus models.

A tile set compiles to a formula whose models embed a grid: a spy point sees
every grid state, grid states carry `t`/`u`/`r_` labels, and the up/right
moves are forced to be functional and commuting. Periodic tilings yield
finite torus-shaped models on which the construction is machine-checkable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import InvalidTiling, ModelFormatError
from .model import Model
from .syntax import (
    And,
    BBox,
    BDia,
    Bot,
    EqConst,
    Formula,
    Iff,
    Implies,
    Not,
    WBox,
    WDia,
    conjoin,
    disjoin,
    left_atom,
    right_atom,
)

# The horizontal-step label is surfaced as `r_` because `r:` is the side prefix.
LABEL_UP = "u"
LABEL_RIGHT = "r_"


@dataclass(frozen=True)
class Tile:
    name: str
    up: str
    down: str
    left: str
    right: str


@dataclass(frozen=True)
class TileSet:
    tiles: tuple[Tile, ...]

    def __post_init__(self):
        if not self.tiles:
            raise ModelFormatError("a tile set needs at least one tile")
        names = [t.name for t in self.tiles]
        if len(set(names)) != len(names):
            raise ModelFormatError("tile names must be unique")

    def labels(self) -> list[str]:
        return [LABEL_UP, LABEL_RIGHT] + [f"t{i + 1}" for i in range(len(self.tiles))]

    def tile_label(self, name: str) -> str:
        for i, tile in enumerate(self.tiles):
            if tile.name == name:
                return f"t{i + 1}"
        raise ModelFormatError(f"unknown tile {name!r}")


@dataclass(frozen=True)
class PeriodicTiling:
    period: tuple[int, int]
    assign: dict[tuple[int, int], str]

    def __post_init__(self):
        p, q = self.period
        if p < 1 or q < 1:
            raise ModelFormatError("period components must be positive")
        cells = {(x, y) for x in range(p) for y in range(q)}
        if set(self.assign) != cells:
            raise ModelFormatError("assignment must cover exactly the period cells")


@dataclass(frozen=True)
class TilingViolation:
    cell: tuple[int, int]
    direction: str  # "horizontal" | "vertical"

    def __str__(self):
        return f"{self.direction} color mismatch at cell {self.cell}"


def validate_tiling(ts: TileSet, pt: PeriodicTiling) -> TilingViolation | None:
    """First wrap-around color mismatch, or None when the tiling is valid."""
    by_name = {t.name: t for t in ts.tiles}
    p, q = pt.period
    for x in range(p):
        for y in range(q):
            here = by_name[pt.assign[(x, y)]]
            right_neighbor = by_name[pt.assign[((x + 1) % p, y)]]
            if here.right != right_neighbor.left:
                return TilingViolation((x, y), "horizontal")
            up_neighbor = by_name[pt.assign[(x, (y + 1) % q)]]
            if here.up != up_neighbor.down:
                return TilingViolation((x, y), "vertical")
    return None


# ---------------------------------------------------------------------------
# The satisfiability formula


def _t_left(ts: TileSet) -> Formula:
    return disjoin(left_atom(f"t{i + 1}") for i in range(len(ts.tiles)))


def _t_right(ts: TileSet) -> Formula:
    return disjoin(right_atom(f"t{i + 1}") for i in range(len(ts.tiles)))


def _dia_step(ts: TileSet, step_label: str, phi: Formula) -> Formula:
    # White composite move: step onto a step-labelled state, then onto a tile state.
    tl = _t_left(ts)
    return And(tl, WDia(And(left_atom(step_label), WDia(And(tl, phi)))))


def _bdia_step(ts: TileSet, step_label: str, phi: Formula) -> Formula:
    tr = _t_right(ts)
    return And(tr, BDia(And(right_atom(step_label), BDia(And(tr, phi)))))


def _box_step(ts: TileSet, step_label: str, phi: Formula) -> Formula:
    return Not(_dia_step(ts, step_label, Not(phi)))


def _bbox_step(ts: TileSet, step_label: str, phi: Formula) -> Formula:
    return Not(_bdia_step(ts, step_label, Not(phi)))


def generate_phi(ts: TileSet) -> Formula:
    """The conjunction whose satisfiability encodes tilability by `ts`."""
    labels = ts.labels()
    tl = _t_left(ts)
    eq = EqConst()

    spy = And(And(eq, WBox(WBox(BDia(eq)))), WDia(tl))
    same_labels = WBox(
        BBox(
            Implies(
                eq,
                conjoin(Iff(left_atom(p), right_atom(p)) for p in labels),
            )
        )
    )
    unique_label = WBox(
        conjoin(
            Iff(
                left_atom(p),
                conjoin(Not(left_atom(q)) for q in labels if q != p),
            )
            for p in labels
        )
    )

    tu1 = WBox(BBox(Implies(And(tl, eq),
                            WDia(And(left_atom(LABEL_UP), BBox(Implies(right_atom(LABEL_UP), eq)))))))
    tu2 = WBox(BBox(Implies(And(left_atom(LABEL_UP), eq),
                            WDia(And(tl, BBox(Implies(_t_right(ts), eq)))))))
    tr1 = WBox(BBox(Implies(And(tl, eq),
                            WDia(And(left_atom(LABEL_RIGHT), BBox(Implies(right_atom(LABEL_RIGHT), eq)))))))
    tr2 = WBox(BBox(Implies(And(left_atom(LABEL_RIGHT), eq),
                            WDia(And(tl, BBox(Implies(_t_right(ts), eq)))))))
    urt = WBox(
        BBox(
            Implies(
                And(tl, eq),
                _box_step(
                    ts,
                    LABEL_UP,
                    _bbox_step(
                        ts,
                        LABEL_RIGHT,
                        _dia_step(ts, LABEL_RIGHT, _bdia_step(ts, LABEL_UP, eq)),
                    ),
                ),
            )
        )
    )

    def tiling_group(step_label: str, matches) -> Formula:
        branches = []
        for i, tile in enumerate(ts.tiles):
            continuations = [
                left_atom(f"t{j + 1}")
                for j, other in enumerate(ts.tiles)
                if matches(tile, other)
            ]
            branches.append(
                Implies(
                    left_atom(f"t{i + 1}"),
                    _dia_step(ts, step_label, disjoin(continuations, empty=Bot())),
                )
            )
        return WBox(Implies(tl, conjoin(branches)))

    t1 = tiling_group(LABEL_UP, lambda a, b: a.up == b.down)
    t2 = tiling_group(LABEL_RIGHT, lambda a, b: a.right == b.left)

    return conjoin([spy, same_labels, unique_label, tu1, tu2, tr1, tr2, urt, t1, t2])


# ---------------------------------------------------------------------------
# Torus models from periodic tilings


def torus_model(ts: TileSet, pt: PeriodicTiling) -> tuple[Model, str]:
    """Finite wrap-around version of the grid model for a periodic tiling.

    The grid interleaves tile states (even, even) with step states carrying
    the `r_` label at (odd, even) and the `u` label at (even, odd); the spy
    sees every grid state. Returns the model and the spy's id.
    """
    violation = validate_tiling(ts, pt)
    if violation is not None:
        raise InvalidTiling(str(violation))
    p, q = pt.period
    width, height = 2 * p, 2 * q
    spy = "s"
    grid = [
        (a, b) for a in range(width) for b in range(height) if (a * b) % 2 == 0
    ]
    name = {cell: f"{cell[0]},{cell[1]}" for cell in grid}
    states = (spy,) + tuple(name[c] for c in grid)
    edges = {(spy, name[c]) for c in grid}
    for a, b in grid:
        if b % 2 == 0:
            edges.add((name[(a, b)], name[((a + 1) % width, b)]))
        if a % 2 == 0:
            edges.add((name[(a, b)], name[(a, (b + 1) % height)]))
    valuation: dict = {}

    def mark(label: str, cell):
        valuation.setdefault(left_atom(label).prop, set()).add(name[cell])
        valuation.setdefault(right_atom(label).prop, set()).add(name[cell])

    for a, b in grid:
        if a % 2 == 1 and b % 2 == 0:
            mark(LABEL_RIGHT, (a, b))
        elif a % 2 == 0 and b % 2 == 1:
            mark(LABEL_UP, (a, b))
        else:
            tile_name = pt.assign[((a // 2) % p, (b // 2) % q)]
            mark(ts.tile_label(tile_name), (a, b))
    model = Model(states, frozenset(edges), {k: frozenset(v) for k, v in valuation.items()})
    return model, spy


# ---------------------------------------------------------------------------
# File formats


def load_tileset(text: str) -> TileSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) != {"tiles"}:
        raise ModelFormatError("tile file must be an object with a single 'tiles' key")
    tiles = []
    for entry in doc["tiles"]:
        if set(entry) != {"name", "up", "down", "left", "right"}:
            raise ModelFormatError(f"bad tile entry {entry!r}")
        tiles.append(Tile(**entry))
    return TileSet(tuple(tiles))


def load_tiling(text: str) -> PeriodicTiling:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) != {"period", "assign"}:
        raise ModelFormatError("tiling file must have exactly 'period' and 'assign'")
    period = doc["period"]
    if not (isinstance(period, list) and len(period) == 2 and all(isinstance(v, int) for v in period)):
        raise ModelFormatError("'period' must be a pair of integers")
    assign = {}
    for key, value in doc["assign"].items():
        parts = key.split(",")
        if len(parts) != 2:
            raise ModelFormatError(f"bad cell key {key!r} (expected 'x,y')")
        try:
            cell = (int(parts[0]), int(parts[1]))
        except ValueError:
            raise ModelFormatError(f"bad cell key {key!r}") from None
        assign[cell] = value
    return PeriodicTiling((period[0], period[1]), assign)

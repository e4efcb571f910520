"""Toolkit for the two-dimensional modal logic of the hide-and-seek game."""

from .bisim import (
    ClauseViolation,
    PairRelation,
    are_bisimilar,
    check_bisimulation_witness,
    largest_bisimulation,
)
from .decide import (
    BoundedVerdict,
    KVerdict,
    LHSVerdict,
    brute_force_sat_oracle,
    k_sat,
    k_valid,
    lhs_bounded_sat,
    lhs_minus_sat,
    lhs_minus_valid,
)
from .errors import (
    ContainsI,
    FormulaSyntaxError,
    InvalidTiling,
    LhsError,
    MixedFormula,
    ModalInput,
    ModelFormatError,
    NotClean,
    ReservedNameError,
    ResourceGuard,
    SideViolation,
    UnknownState,
)
from .model import (
    Model,
    disjoint_union,
    enumerate_models,
    generated_submodel,
    load_model,
    make_model,
    restrict_left,
    restrict_right,
    save_model,
)
from .normal import CleanCNF, clean_decompose, clean_to_cnf, companion, prop_cnf
from .proof import CheckReport, ProofLine, check_proof, load_proof
from .semantics import check, check_all, fo_eval, fo_render, fo_translate, one_sided_eval
from .syntax import (
    And,
    Atom,
    BBox,
    BDia,
    Bot,
    EqConst,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    PropName,
    Side,
    Top,
    WBox,
    WDia,
    classify,
    left_atom,
    modal_depth,
    parse,
    prop_names,
    render,
    right_atom,
    subformulas,
    substitute,
)
from .tiling import (
    PeriodicTiling,
    Tile,
    TileSet,
    generate_phi,
    load_tileset,
    load_tiling,
    torus_model,
    validate_tiling,
)

__version__ = "0.1.0"

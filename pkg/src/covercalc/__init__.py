"""Covering spaces of surfaces.

Finite covers of finite-type surfaces, piece-graph models of infinite-type
surfaces with end-space classification, certified cover chains, ends of
groups, Stallings foldings and free-product tree actions.
"""

from .dsl import Request, parse_dsl
from .ends import (
    AiFunction,
    FiniteTable,
    FreeGroup,
    FreeProduct,
    Zk,
    almost_invariant_rank,
    boundary_of,
    cayley_ball,
    ends_estimate,
    is_coboundary,
    parse_group,
    swarup_kernel_test,
)
from .errors import CoverCalcError, InputError, NotAHomomorphismError, ResourceError, UnsupportedError
from .folding import CoreGraph, find_relation, fold_core_graph
from .forge import (
    CoverChain,
    GraphCoverMap,
    PieceSelection,
    characteristic_constraint,
    check_cover,
    classify_mod_n_cover_infinite,
    classify_uac,
    embed_in_bct,
    everything_covers_chain,
    graph_universal_cover,
    subsurface_cover,
    uac_approximation_evidence,
)
from .model import (
    EndSpec,
    Named,
    PieceGraph,
    Unrecognized,
    build_named,
    classify_named,
    end_spec_of,
    genus_lower_bound,
)
from .quotient import FiniteQuotientHom, abelian_hom, permutation_hom
from .surfaces import CoverResult, FiniteSurface, cover_type, mod_n_hom, peripheral_words
from .trees import FreeProductAction
from .words import parse_word, reduce_word

__version__ = "0.1.0"

__all__ = [
    "abelian_hom",
    "AiFunction",
    "almost_invariant_rank",
    "boundary_of",
    "build_named",
    "cayley_ball",
    "characteristic_constraint",
    "check_cover",
    "classify_mod_n_cover_infinite",
    "classify_named",
    "classify_uac",
    "CoreGraph",
    "cover_type",
    "CoverCalcError",
    "CoverChain",
    "CoverResult",
    "embed_in_bct",
    "end_spec_of",
    "ends_estimate",
    "EndSpec",
    "everything_covers_chain",
    "find_relation",
    "FiniteQuotientHom",
    "FiniteSurface",
    "FiniteTable",
    "fold_core_graph",
    "FreeGroup",
    "FreeProduct",
    "FreeProductAction",
    "genus_lower_bound",
    "graph_universal_cover",
    "GraphCoverMap",
    "InputError",
    "is_coboundary",
    "mod_n_hom",
    "Named",
    "NotAHomomorphismError",
    "parse_dsl",
    "parse_group",
    "parse_word",
    "peripheral_words",
    "permutation_hom",
    "PieceGraph",
    "PieceSelection",
    "reduce_word",
    "Request",
    "ResourceError",
    "subsurface_cover",
    "swarup_kernel_test",
    "uac_approximation_evidence",
    "Unrecognized",
    "UnsupportedError",
    "Zk",
]

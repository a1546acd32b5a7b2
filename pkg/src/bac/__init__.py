"""Finite bounded acyclic categories as symbol-dictionary-weighted trees.

The public surface is re-exported here: the data model and traversal
(:mod:`bac.core`), the edit operations (:mod:`bac.ops`), the canonical
text format and DOT export (:mod:`bac.serde`), and the brute-force
category oracle (:mod:`bac.oracle`).
"""

from .core import (
    BASE,
    Arrow,
    BacError,
    Chain2,
    Edge,
    InvalidSymbolError,
    Location,
    MissingKeyError,
    Node,
    Symbol,
    SymbolMap,
    ValidationReport,
    Violation,
    arrow,
    arrow2,
    cat,
    divide,
    fold,
    fold_under,
    fresh_symbol,
    join,
    locate,
    modify,
    modify_under,
    nondecomposable,
    root,
    suffix_nd,
    symbol,
    symbol2,
    symbols,
    validate,
)
from .ops import (
    Angle,
    BaseMovedError,
    BaseReservedError,
    Coangle,
    CoverageGapError,
    IncomingMismatchError,
    IncompatibleChoicesError,
    InserterClashError,
    LoopDetectedError,
    MergerClashError,
    NoAlternativePathError,
    NotBijectiveError,
    NotFoundError,
    NotInjectiveError,
    NotLeafError,
    NotNondecomposableError,
    NotSplittableError,
    PicklistMismatchError,
    SplitterClashError,
    SymbolCollisionError,
    TargetMismatchError,
    ZipMismatchError,
    add_leaf_node,
    add_nd_symbol,
    add_parent_node,
    add_parent_node_on_root,
    compatible_angles,
    compatible_coangles,
    compatible_coangles_angles,
    duplicate_nd_symbol,
    duplicate_node,
    empty,
    find_valid_coangles_angles,
    merge_nodes,
    merge_root_nodes,
    merge_symbols,
    partition_prefix,
    partition_symbols,
    relabel,
    remove_leaf_node,
    remove_nd_symbol,
    remove_node,
    rewire,
    singleton,
    split_node,
    split_root_node,
    split_symbol,
    zip_suffixes,
)
from .oracle import MatCategory, TooLargeError, equivalent, fuzz_bac, materialize
from .serde import BacSyntaxError, LawViolationError, dumps, loads, to_dot

__version__ = "0.1.0"

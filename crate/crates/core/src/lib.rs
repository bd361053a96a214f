//! Combinatorial search and verification for forbidden patterns in 0-1
//! matrices.
//!
//! The crate provides four layers:
//!
//! * [`pattern`]: the matrix types, text parsing, and the containment
//!   relation with embedding witnesses ([`contains()`], [`verify_embedding`]);
//! * [`classify`]: acyclicity, vertical separability, class numbers with
//!   separation-tree witnesses, and the ordered-graph view;
//! * [`embed`]: block-respecting embeddings into `(k,u)`-complete hosts and
//!   the embed-or-densify search that returns either an embedding or a
//!   density certificate;
//! * [`extremal`]: exact extremal numbers by branch-and-bound, sparsity
//!   audits, and the box-decomposition pipeline.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything here is safe to share across threads. Searches
//! return deterministic leftmost witnesses; randomized helpers take explicit
//! seeds.

pub mod classify;
pub mod contains;
pub mod embed;
pub mod error;
pub mod extremal;
pub mod fixtures;
pub mod pattern;
pub mod sparsity;
pub mod wire;

mod bits;

pub use classify::{
    class_number, find_degenerate_row_permutation, interval_chromatic_number, is_acyclic,
    is_vertically_degenerate, is_vertically_separable, pattern_to_ordered_graph,
    relaxed_class_number, relaxed_class_number_with, spanning_columns, vertical_separation,
    OrderedGraph, RelaxedCutPolicy, SeparationNode, SeparationTree, VerticalCut,
};
pub use contains::{contains, verify_embedding};
pub use embed::{
    combine_embeddings, compute_si_sets, find_block_embedding, is_ku_complete, recursive_embed,
    BlockEmbedding, BlockStructure, EmbedResult,
};
pub use error::{CombineViolation, Error, Result};
pub use extremal::{
    box_decompose, ex_exact, ex_exact_with, ex_lower_greedy, ex_table, is_h_sparse, verify_bound,
    BoundCheck, BoxDecomposition, BoxLabel, ExOptions, ExtremalResult, SparsityMode,
    SparsityOutcome, TheoremParameters,
};
pub use pattern::{Embedding, Matrix01, Pattern};
pub use sparsity::{DenseCertificate, SparsityBound};

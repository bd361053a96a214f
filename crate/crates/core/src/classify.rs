//! Pattern taxonomy: acyclicity, vertical separability, class numbers with
//! separation-tree witnesses, the relaxed (simultaneous-cut) variant, row
//! permutations restoring degeneracy, and the ordered-graph view.
//!
//! Conventions: a horizontal cut is identified by `cut_after`, the number of
//! rows above the cut (so `1 <= cut_after < l`). A column *spans* a cut when
//! it has 1-entries both above and below it. A cut is a vertical separation
//! when at most one column spans it.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::pattern::Pattern;

/// Columns with a 1-entry on both sides of the cut, for the full pattern.
pub fn spanning_columns(p: &Pattern, cut_after: usize) -> Result<BTreeSet<usize>> {
    if cut_after == 0 || cut_after >= p.rows() {
        return Err(Error::IndexOutOfRange(format!(
            "cut position {cut_after} not in 1..{}",
            p.rows()
        )));
    }
    Ok(spanning_in_band(p, 0, p.rows(), cut_after))
}

/// Spanning columns of the cut `cut_after` measured inside rows `lo..hi` only.
fn spanning_in_band(p: &Pattern, lo: usize, hi: usize, cut_after: usize) -> BTreeSet<usize> {
    debug_assert!(lo < cut_after && cut_after < hi && hi <= p.rows());
    let mut set = BTreeSet::new();
    for y in 0..p.cols() {
        let above = (lo..cut_after).any(|x| p.get(x, y));
        if above && (cut_after..hi).any(|x| p.get(x, y)) {
            set.insert(y);
        }
    }
    set
}

/// A horizontal cut that separates 1-entries in at most one column.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VerticalCut {
    /// Rows above the cut.
    pub cut_after: usize,
    /// The single spanning column, when one exists.
    pub spanning_col: Option<usize>,
}

/// The smallest valid vertical separation of `p`, or `None` when every cut
/// separates two or more columns. Errors on single-row patterns, where
/// separability is undefined.
pub fn vertical_separation(p: &Pattern) -> Result<Option<VerticalCut>> {
    if p.rows() < 2 {
        return Err(Error::SingleRow);
    }
    for cut_after in 1..p.rows() {
        let span = spanning_in_band(p, 0, p.rows(), cut_after);
        if span.len() <= 1 {
            return Ok(Some(VerticalCut {
                cut_after,
                spanning_col: span.into_iter().next(),
            }));
        }
    }
    Ok(None)
}

pub fn is_vertically_separable(p: &Pattern) -> Result<bool> {
    Ok(vertical_separation(p)?.is_some())
}

/// Recursive witness that a pattern splits into single rows by repeated
/// vertical separations. Leaves cover one row; every cut node records the
/// absolute cut position and the spanning column it destroys, if any. The
/// depth of the tree (leaves at 0) is the class number it witnesses.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeparationTree {
    /// Contiguous row interval `lo..hi` of the root pattern.
    pub span: (usize, usize),
    pub kind: SeparationNode,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SeparationNode {
    Leaf,
    Cut {
        /// Absolute row index: the upper child covers `span.0..cut_after`.
        cut_after: usize,
        /// The one column with 1-entries on both sides within this span.
        spanning_col: Option<usize>,
        upper: Box<SeparationTree>,
        lower: Box<SeparationTree>,
    },
}

impl SeparationTree {
    pub fn leaf(row: usize) -> SeparationTree {
        SeparationTree {
            span: (row, row + 1),
            kind: SeparationNode::Leaf,
        }
    }

    /// Leaves at depth 0; a cut node sits one above its deeper child.
    pub fn depth(&self) -> usize {
        match &self.kind {
            SeparationNode::Leaf => 0,
            SeparationNode::Cut { upper, lower, .. } => 1 + upper.depth().max(lower.depth()),
        }
    }

    /// Checks the witness against `p`: spans tile correctly, leaves are
    /// single rows, and each recorded cut is a genuine vertical separation
    /// of its band with the recorded spanning column.
    pub fn validate(&self, p: &Pattern) -> Result<()> {
        if self.span != (0, p.rows()) {
            return Err(Error::DimensionMismatch(format!(
                "tree spans rows {:?}, pattern has {} rows",
                self.span,
                p.rows()
            )));
        }
        self.validate_node(p)
    }

    fn validate_node(&self, p: &Pattern) -> Result<()> {
        let (lo, hi) = self.span;
        if lo >= hi || hi > p.rows() {
            return Err(Error::Internal(format!("bad tree span {:?}", self.span)));
        }
        match &self.kind {
            SeparationNode::Leaf => {
                if hi - lo != 1 {
                    return Err(Error::Internal(format!(
                        "leaf span {:?} has {} rows",
                        self.span,
                        hi - lo
                    )));
                }
                Ok(())
            }
            SeparationNode::Cut {
                cut_after,
                spanning_col,
                upper,
                lower,
            } => {
                if !(lo < *cut_after && *cut_after < hi) {
                    return Err(Error::Internal(format!(
                        "cut {cut_after} outside span {:?}",
                        self.span
                    )));
                }
                let span = spanning_in_band(p, lo, hi, *cut_after);
                if span.len() > 1 {
                    return Err(Error::Internal(format!(
                        "cut {cut_after} in span {:?} separates {} columns",
                        self.span,
                        span.len()
                    )));
                }
                if span.iter().next().copied() != *spanning_col {
                    return Err(Error::Internal(format!(
                        "cut {cut_after} records spanning column {spanning_col:?}, found {span:?}"
                    )));
                }
                if upper.span != (lo, *cut_after) || lower.span != (*cut_after, hi) {
                    return Err(Error::Internal("child spans do not tile the cut".into()));
                }
                upper.validate_node(p)?;
                lower.validate_node(p)
            }
        }
    }
}

/// Minimal class number of `p` together with a witnessing separation tree,
/// or `None` when `p` is not vertically degenerate.
///
/// A single row is class 0; otherwise the minimum over valid cuts of
/// `1 + max(class of upper band, class of lower band)`, each band measured
/// as a standalone pattern. Bands are memoized on their row interval and
/// ties prefer the smallest cut, so the witness is deterministic.
pub fn class_number(p: &Pattern) -> Option<(usize, SeparationTree)> {
    let mut memo: HashMap<(usize, usize), Option<(usize, SeparationTree)>> = HashMap::new();
    class_of_band(p, 0, p.rows(), &mut memo)
}

fn class_of_band(
    p: &Pattern,
    lo: usize,
    hi: usize,
    memo: &mut HashMap<(usize, usize), Option<(usize, SeparationTree)>>,
) -> Option<(usize, SeparationTree)> {
    if hi - lo == 1 {
        return Some((0, SeparationTree::leaf(lo)));
    }
    if let Some(cached) = memo.get(&(lo, hi)) {
        return cached.clone();
    }
    let mut best: Option<(usize, SeparationTree)> = None;
    for cut_after in lo + 1..hi {
        let span = spanning_in_band(p, lo, hi, cut_after);
        if span.len() > 1 {
            continue;
        }
        let Some((du, upper)) = class_of_band(p, lo, cut_after, memo) else {
            continue;
        };
        let Some((dl, lower)) = class_of_band(p, cut_after, hi, memo) else {
            continue;
        };
        let depth = 1 + du.max(dl);
        if best.as_ref().is_none_or(|(b, _)| depth < *b) {
            best = Some((
                depth,
                SeparationTree {
                    span: (lo, hi),
                    kind: SeparationNode::Cut {
                        cut_after,
                        spanning_col: span.into_iter().next(),
                        upper: Box::new(upper),
                        lower: Box::new(lower),
                    },
                },
            ));
        }
    }
    memo.insert((lo, hi), best.clone());
    best
}

pub fn is_vertically_degenerate(p: &Pattern) -> bool {
    class_number(p).is_some()
}

/// How simultaneous cuts are selected in the relaxed classifier.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum RelaxedCutPolicy {
    /// Every cut whose spanning set within the current band has size <= 1
    /// is applied, independently of the other cuts.
    #[default]
    Independent,
    /// A column may be the spanning column of at most one applied cut per
    /// round; conflicting cuts are dropped, scanning top to bottom.
    JointColumnBudget,
}

/// Minimal relaxed class number: on each round, all admissible cuts of the
/// current band are applied at once and every resulting band must resolve
/// one level lower. `None` when some multi-row band admits no cut.
pub fn relaxed_class_number(p: &Pattern) -> Option<usize> {
    relaxed_class_number_with(p, RelaxedCutPolicy::Independent)
}

pub fn relaxed_class_number_with(p: &Pattern, policy: RelaxedCutPolicy) -> Option<usize> {
    relaxed_band(p, 0, p.rows(), policy)
}

fn relaxed_band(p: &Pattern, lo: usize, hi: usize, policy: RelaxedCutPolicy) -> Option<usize> {
    if hi - lo == 1 {
        return Some(0);
    }
    let mut cuts = Vec::new();
    let mut used_cols: BTreeSet<usize> = BTreeSet::new();
    for cut_after in lo + 1..hi {
        let span = spanning_in_band(p, lo, hi, cut_after);
        if span.len() > 1 {
            continue;
        }
        if let RelaxedCutPolicy::JointColumnBudget = policy {
            if let Some(&col) = span.iter().next() {
                if !used_cols.insert(col) {
                    continue;
                }
            }
        }
        cuts.push(cut_after);
    }
    if cuts.is_empty() {
        return None;
    }
    let mut bounds = vec![lo];
    bounds.extend(cuts);
    bounds.push(hi);
    let mut deepest = 0;
    for pair in bounds.windows(2) {
        deepest = deepest.max(relaxed_band(p, pair[0], pair[1], policy)?);
    }
    Some(1 + deepest)
}

/// Searches row permutations in lexicographic order for one that makes the
/// pattern vertically degenerate. Such a permutation exists for every
/// acyclic pattern, so finding none for an acyclic input is an internal
/// error and is surfaced as such.
pub fn find_degenerate_row_permutation(p: &Pattern) -> Result<Option<Vec<usize>>> {
    for perm in (0..p.rows()).permutations(p.rows()) {
        let permuted = p.permute_rows(&perm)?;
        if is_vertically_degenerate(&permuted) {
            return Ok(Some(perm));
        }
    }
    if is_acyclic(p) {
        return Err(Error::Internal(
            "acyclic pattern admits no degenerate row permutation".into(),
        ));
    }
    Ok(None)
}

/// True iff no submatrix has two or more 1-entries in every row and every
/// column; decided as forest-ness of the bipartite incidence graph.
pub fn is_acyclic(p: &Pattern) -> bool {
    let l = p.rows();
    let mut uf = UnionFind::new(l + p.cols());
    for i in 0..l {
        for j in p.ones_in_row(i) {
            if !uf.union(i, l + j) {
                return false;
            }
        }
    }
    true
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// False when both endpoints were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Simple graph with the integer order on its vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrderedGraph {
    pub vertex_count: usize,
    /// Pairs `(u, v)` with `u < v`.
    pub edges: BTreeSet<(usize, usize)>,
}

/// The bipartite incidence graph of a pattern: row vertices `0..l` precede
/// column vertices `l..l+k`, with an edge per 1-entry.
pub fn pattern_to_ordered_graph(p: &Pattern) -> OrderedGraph {
    let l = p.rows();
    let mut edges = BTreeSet::new();
    for i in 0..l {
        for j in p.ones_in_row(i) {
            edges.insert((i, l + j));
        }
    }
    OrderedGraph {
        vertex_count: l + p.cols(),
        edges,
    }
}

/// Minimum number of consecutive vertex intervals with no internal edge.
///
/// The left-to-right sweep that extends the current interval until an edge
/// would close inside it is optimal: its interval ends are maximal, so any
/// other valid partition needs at least as many intervals.
pub fn interval_chromatic_number(h: &OrderedGraph) -> usize {
    assert!(h.vertex_count >= 1, "graph must have vertices");
    // Largest earlier neighbor per vertex.
    let mut max_earlier: Vec<Option<usize>> = vec![None; h.vertex_count];
    for &(u, v) in &h.edges {
        let e = &mut max_earlier[v];
        *e = Some(e.map_or(u, |cur| cur.max(u)));
    }
    let mut intervals = 1;
    let mut start = 0;
    for (v, earlier) in max_earlier.iter().enumerate() {
        if let Some(u) = earlier {
            if *u >= start {
                intervals += 1;
                start = v;
            }
        }
    }
    intervals
}

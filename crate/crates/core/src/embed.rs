//! Block-respecting embeddings into `(k,u)`-complete matrices and the
//! embed-or-densify recursion.
//!
//! A host with `k` vertical blocks of `n` columns is `(k,u)`-complete when
//! every row meets every block in at least `u` ones. A block-respecting
//! embedding of a `k`-column pattern sends column `j` into block `j`, so two
//! such embeddings of the upper and lower halves of a vertically separated
//! pattern can be spliced whenever their rows are disjoint in order and they
//! agree on the columns both halves use ([`combine_embeddings`]).
//!
//! [`recursive_embed`] runs that splice search over horizontal slices of the
//! host and, when no splice exists, extracts a square window dense enough to
//! violate the sparsity bound. Every answer is re-verified before being
//! returned; `Inconclusive` is only reported when the size hypotheses of the
//! argument fail.

use std::collections::BTreeSet;

use crate::bits::ColSet;
use crate::classify::{SeparationNode, SeparationTree};
use crate::error::{CombineViolation, Error, Result};
use crate::pattern::{Matrix01, Pattern};
use crate::sparsity::{DenseCertificate, SparsityBound};

/// Vertical block layout of a host matrix: `block_count` blocks of
/// `block_width` consecutive columns each.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BlockStructure {
    pub block_count: usize,
    pub block_width: usize,
}

impl BlockStructure {
    pub fn new(block_count: usize, block_width: usize) -> Result<BlockStructure> {
        if block_count == 0 || block_width == 0 {
            return Err(Error::Domain(
                "block count and width must be positive".into(),
            ));
        }
        Ok(BlockStructure {
            block_count,
            block_width,
        })
    }

    pub fn total_cols(&self) -> usize {
        self.block_count * self.block_width
    }

    /// Column range of block `j`.
    pub fn range(&self, j: usize) -> std::ops::Range<usize> {
        j * self.block_width..(j + 1) * self.block_width
    }

    fn check_host(&self, a: &Matrix01) -> Result<()> {
        if a.cols() != self.total_cols() {
            return Err(Error::DimensionMismatch(format!(
                "host has {} columns, block structure covers {}",
                a.cols(),
                self.total_cols()
            )));
        }
        Ok(())
    }

    fn check_pattern(&self, p: &Pattern) -> Result<()> {
        if p.cols() != self.block_count {
            return Err(Error::DimensionMismatch(format!(
                "pattern has {} columns, expected one per block ({})",
                p.cols(),
                self.block_count
            )));
        }
        Ok(())
    }
}

/// Witness that a pattern embeds with column `j` landing inside block `j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockEmbedding {
    /// Strictly increasing host rows, one per pattern row.
    pub row_map: Vec<usize>,
    /// Host column for pattern column `j`, inside block `j`.
    pub col_map: Vec<usize>,
}

impl BlockEmbedding {
    /// Full validity check: shapes, monotone rows, block residence, and
    /// 1-entries mapping onto 1-entries.
    pub fn verify(&self, p: &Pattern, a: &Matrix01, blocks: &BlockStructure) -> bool {
        if blocks.check_host(a).is_err() || blocks.check_pattern(p).is_err() {
            return false;
        }
        if self.row_map.len() != p.rows() || self.col_map.len() != p.cols() {
            return false;
        }
        if !self.row_map.windows(2).all(|w| w[0] < w[1]) {
            return false;
        }
        if self.row_map.iter().any(|&r| r >= a.rows()) {
            return false;
        }
        for (j, &c) in self.col_map.iter().enumerate() {
            if !blocks.range(j).contains(&c) {
                return false;
            }
        }
        for i in 0..p.rows() {
            for j in p.ones_in_row(i) {
                if !a.get(self.row_map[i], self.col_map[j]) {
                    return false;
                }
            }
        }
        true
    }
}

/// True iff every row-block box of `a` holds at least `u` ones.
pub fn is_ku_complete(a: &Matrix01, blocks: &BlockStructure, u: usize) -> Result<bool> {
    blocks.check_host(a)?;
    if u == 0 {
        return Ok(true);
    }
    for r in 0..a.rows() {
        for j in 0..blocks.block_count {
            if a.row_weight_in(r, blocks.range(j)) < u {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Leftmost block-respecting embedding of `p` in `a`, if any.
pub fn find_block_embedding(
    p: &Pattern,
    a: &Matrix01,
    blocks: &BlockStructure,
) -> Result<Option<BlockEmbedding>> {
    find_block_embedding_pinned(p, a, blocks, None)
}

/// Same search with the host column for one pattern column fixed.
pub(crate) fn find_block_embedding_pinned(
    p: &Pattern,
    a: &Matrix01,
    blocks: &BlockStructure,
    pin: Option<(usize, usize)>,
) -> Result<Option<BlockEmbedding>> {
    blocks.check_host(a)?;
    blocks.check_pattern(p)?;
    if p.rows() > a.rows() {
        return Ok(None);
    }
    let mut cands: Vec<ColSet> = (0..blocks.block_count)
        .map(|j| ColSet::range(a.cols(), blocks.range(j).start, blocks.range(j).end))
        .collect();
    if let Some((j, c)) = pin {
        if j >= blocks.block_count {
            return Err(Error::IndexOutOfRange(format!(
                "pinned column {j} outside the {} blocks",
                blocks.block_count
            )));
        }
        if !blocks.range(j).contains(&c) {
            return Ok(None);
        }
        cands[j] = ColSet::singleton(a.cols(), c);
    }
    let mut rows = Vec::with_capacity(p.rows());
    if block_rows(p, a, &mut cands, &mut rows, 0, 0) {
        let col_map = cands
            .iter()
            .map(|cand| cand.first_at_or_after(0).expect("non-empty candidate set"))
            .collect();
        Ok(Some(BlockEmbedding {
            row_map: rows,
            col_map,
        }))
    } else {
        Ok(None)
    }
}

/// Row backtracking for the block search. Candidate sets only shrink, and
/// block residence makes the column choices independent, so feasibility is
/// just non-emptiness of every set.
fn block_rows(
    p: &Pattern,
    a: &Matrix01,
    cands: &mut [ColSet],
    rows: &mut Vec<usize>,
    i: usize,
    start: usize,
) -> bool {
    if i == p.rows() {
        return true;
    }
    let last = a.rows() - (p.rows() - i);
    for r in start..=last {
        let ones: Vec<usize> = p.ones_in_row(i);
        let mut frame = Vec::with_capacity(ones.len());
        let mut ok = true;
        for &j in &ones {
            frame.push((j, cands[j].clone()));
            cands[j].intersect_row(a.row_bits(r));
            if cands[j].is_empty() {
                ok = false;
                break;
            }
        }
        if ok {
            rows.push(r);
            if block_rows(p, a, cands, rows, i + 1, r + 1) {
                return true;
            }
            rows.pop();
        }
        for (j, saved) in frame.into_iter().rev() {
            cands[j] = saved;
        }
    }
    false
}

/// All host columns of block `b_col` that can serve as `g(b_col)` in a
/// block-respecting embedding of `part` into `a_i`.
pub fn compute_si_sets(
    part: &Pattern,
    b_col: usize,
    a_i: &Matrix01,
    blocks: &BlockStructure,
) -> Result<BTreeSet<usize>> {
    blocks.check_host(a_i)?;
    blocks.check_pattern(part)?;
    if b_col >= blocks.block_count {
        return Err(Error::IndexOutOfRange(format!(
            "block column {b_col} outside the {} blocks",
            blocks.block_count
        )));
    }
    let range = blocks.range(b_col);
    let constrained = (0..part.rows()).any(|i| part.get(i, b_col));

    if !constrained {
        // g(b_col) is free: attainable everywhere or nowhere.
        return Ok(if find_block_embedding(part, a_i, blocks)?.is_some() {
            range.collect()
        } else {
            BTreeSet::new()
        });
    }

    if part.rows() == 1 {
        // A row qualifies when it meets every needed block; it then
        // contributes its ones inside block `b_col`.
        let needed = part.ones_in_row(0);
        let mut set = BTreeSet::new();
        for r in 0..a_i.rows() {
            if needed
                .iter()
                .all(|&j| a_i.row_weight_in(r, blocks.range(j)) >= 1)
            {
                for c in a_i.ones_in_row(r) {
                    if range.contains(&c) {
                        set.insert(c);
                    }
                }
            }
        }
        return Ok(set);
    }

    // General case: pin each column of the block that appears at all.
    let mut candidates = BTreeSet::new();
    for r in 0..a_i.rows() {
        for c in a_i.ones_in_row(r) {
            if range.contains(&c) {
                candidates.insert(c);
            }
        }
    }
    let mut set = BTreeSet::new();
    for c in candidates {
        if find_block_embedding_pinned(part, a_i, blocks, Some((b_col, c)))?.is_some() {
            set.insert(c);
        }
    }
    Ok(set)
}

/// Splices block-respecting embeddings of the upper `cut_after` rows and the
/// remaining rows of `p` into one embedding of `p`.
///
/// Hypotheses checked, each with its own diagnostic: both inputs are valid
/// part embeddings, only `spanning_col` may carry 1-entries on both sides of
/// the cut, the upper rows end strictly before the lower rows start, and the
/// two column maps agree on every column used by both parts.
pub fn combine_embeddings(
    p: &Pattern,
    cut_after: usize,
    spanning_col: Option<usize>,
    upper: &BlockEmbedding,
    lower: &BlockEmbedding,
    a: &Matrix01,
    blocks: &BlockStructure,
) -> Result<BlockEmbedding> {
    if cut_after == 0 || cut_after >= p.rows() {
        return Err(Error::IndexOutOfRange(format!(
            "cut {cut_after} not in 1..{}",
            p.rows()
        )));
    }
    let upper_pat = p.row_band(0, cut_after);
    let lower_pat = p.row_band(cut_after, p.rows());
    if !upper.verify(&upper_pat, a, blocks) {
        return Err(CombineViolation::PartEmbedding {
            part: "upper",
            reason: "fails block-respecting validity for the upper rows".into(),
        }
        .into());
    }
    if !lower.verify(&lower_pat, a, blocks) {
        return Err(CombineViolation::PartEmbedding {
            part: "lower",
            reason: "fails block-respecting validity for the lower rows".into(),
        }
        .into());
    }

    let used_above = |j: usize| (0..cut_after).any(|i| p.get(i, j));
    let used_below = |j: usize| (cut_after..p.rows()).any(|i| p.get(i, j));
    for j in 0..p.cols() {
        if used_above(j) && used_below(j) {
            if spanning_col != Some(j) {
                return Err(CombineViolation::SpanningColumn { col: j }.into());
            }
            if upper.col_map[j] != lower.col_map[j] {
                return Err(CombineViolation::ColumnAgreement {
                    col: j,
                    upper_col: upper.col_map[j],
                    lower_col: lower.col_map[j],
                }
                .into());
            }
        }
    }

    let upper_last = *upper.row_map.last().expect("upper part is non-empty");
    let lower_first = lower.row_map[0];
    if upper_last >= lower_first {
        return Err(CombineViolation::RowOrder {
            upper_last: cut_after,
            upper_row: upper_last,
            lower_row: lower_first,
        }
        .into());
    }

    let row_map: Vec<usize> = upper
        .row_map
        .iter()
        .chain(lower.row_map.iter())
        .copied()
        .collect();
    let col_map: Vec<usize> = (0..p.cols())
        .map(|j| {
            if used_above(j) {
                upper.col_map[j]
            } else {
                lower.col_map[j]
            }
        })
        .collect();
    let combined = BlockEmbedding { row_map, col_map };
    if !combined.verify(p, a, blocks) {
        return Err(Error::Internal(
            "combined embedding failed verification despite valid hypotheses".into(),
        ));
    }
    Ok(combined)
}

/// Outcome of [`recursive_embed`]: a verified embedding, a verified density
/// certificate, or an explanation of which size hypothesis failed.
#[derive(Clone, PartialEq, Debug)]
pub enum EmbedResult {
    Embedding(BlockEmbedding),
    Certificate(DenseCertificate),
    Inconclusive(String),
}

/// Constructive embed-or-densify search guided by a separation tree.
///
/// At a leaf the pattern is a single row and embeds directly. At a cut node
/// of depth `s` the host is sliced into `beta = m / m*` horizontal blocks of
/// `m* = ceil(1080 * n^(1 - x^(s-1)) * (h(n)/u)^2)` rows. For each slice the
/// attainable positions of the spanning column are collected for both parts
/// of the pattern; a common position across two slices splices into an
/// embedding of the whole pattern. Otherwise some slice attains at most
/// `n/beta` positions, and the heaviest `m* x m*` window over those columns
/// is returned as a density certificate when it violates the bound.
///
/// Every embedding is re-verified against the host and every certificate is
/// recounted before being returned.
pub fn recursive_embed(
    p: &Pattern,
    tree: &SeparationTree,
    a: &Matrix01,
    blocks: &BlockStructure,
    u: usize,
    bound: &SparsityBound,
) -> Result<EmbedResult> {
    blocks.check_host(a)?;
    blocks.check_pattern(p)?;
    tree.validate(p)?;
    if !is_ku_complete(a, blocks, u)? {
        return Err(Error::Domain(format!(
            "host is not ({},{u})-complete",
            blocks.block_count
        )));
    }

    let (cut_after, spanning_col) = match &tree.kind {
        SeparationNode::Leaf => {
            return Ok(match find_block_embedding(p, a, blocks)? {
                Some(e) if e.verify(p, a, blocks) => EmbedResult::Embedding(e),
                Some(_) => {
                    return Err(Error::Internal("leaf embedding failed verification".into()))
                }
                None => EmbedResult::Inconclusive(
                    "single-row pattern has no block-respecting embedding (is u = 0?)".into(),
                ),
            });
        }
        SeparationNode::Cut {
            cut_after,
            spanning_col,
            ..
        } => (*cut_after, *spanning_col),
    };

    let s = tree.depth();
    let n = blocks.block_width;
    if n < 2 {
        return Ok(EmbedResult::Inconclusive("block width below 2".into()));
    }
    if u == 0 {
        return Ok(EmbedResult::Inconclusive("u = 0 at a cut node".into()));
    }
    let x = bound.x(n)?;
    let log_n = (n as f64).log2();
    if x.powi(s as i32) * log_n < 40f64.log2() {
        return Ok(EmbedResult::Inconclusive(format!(
            "n^(x^s) = {:.3} < 40",
            (x.powi(s as i32) * log_n).exp2()
        )));
    }
    let h = bound.h(n)?;
    let hu = h / u as f64;
    let m_star_f = (1080.0 * (n as f64).powf(1.0 - x.powi(s as i32 - 1)) * hu * hu).ceil();
    if !m_star_f.is_finite() || m_star_f > a.rows() as f64 {
        return Ok(EmbedResult::Inconclusive(format!(
            "host has {} rows, below m* = {m_star_f:.0}",
            a.rows()
        )));
    }
    let m_star = (m_star_f as usize).max(2);
    if m_star > a.rows() {
        return Ok(EmbedResult::Inconclusive(format!(
            "host has {} rows, below m* = {m_star}",
            a.rows()
        )));
    }
    let beta = a.rows() / m_star;

    let b_col = spanning_col.unwrap_or(0);
    let upper_pat = p.row_band(0, cut_after);
    let lower_pat = p.row_band(cut_after, p.rows());
    let all_cols: Vec<usize> = (0..a.cols()).collect();

    let mut slices = Vec::with_capacity(beta);
    let mut upper_sets = Vec::with_capacity(beta);
    let mut lower_sets = Vec::with_capacity(beta);
    let mut common_sets: Vec<BTreeSet<usize>> = Vec::with_capacity(beta);
    for i in 0..beta {
        let rows: Vec<usize> = (i * m_star..(i + 1) * m_star).collect();
        let a_i = a.submatrix(&rows, &all_cols)?;
        let s_up = compute_si_sets(&upper_pat, b_col, &a_i, blocks)?;
        let s_lo = compute_si_sets(&lower_pat, b_col, &a_i, blocks)?;
        common_sets.push(s_up.intersection(&s_lo).copied().collect());
        upper_sets.push(s_up);
        lower_sets.push(s_lo);
        slices.push(a_i);
    }

    // Smallest (i', i'', j) in lexicographic order splices the two parts.
    for i_up in 0..beta {
        for i_lo in i_up + 1..beta {
            let Some(&j) = common_sets[i_up].intersection(&common_sets[i_lo]).next() else {
                continue;
            };
            let e_up = find_block_embedding_pinned(&upper_pat, &slices[i_up], blocks, Some((b_col, j)))?
                .ok_or_else(|| {
                    Error::Internal("attainable column lost on re-search (upper)".into())
                })?;
            let e_lo = find_block_embedding_pinned(&lower_pat, &slices[i_lo], blocks, Some((b_col, j)))?
                .ok_or_else(|| {
                    Error::Internal("attainable column lost on re-search (lower)".into())
                })?;
            let lift = |e: BlockEmbedding, offset: usize| BlockEmbedding {
                row_map: e.row_map.iter().map(|r| r + offset).collect(),
                col_map: e.col_map,
            };
            let combined = combine_embeddings(
                p,
                cut_after,
                spanning_col,
                &lift(e_up, i_up * m_star),
                &lift(e_lo, i_lo * m_star),
                a,
                blocks,
            )?;
            return Ok(EmbedResult::Embedding(combined));
        }
    }

    // No splice: find a slice attaining few columns and densify there.
    let limit = n as f64 / beta as f64;
    let Some(i) = (0..beta).find(|&i| common_sets[i].len() as f64 <= limit) else {
        return Ok(EmbedResult::Inconclusive(
            "pigeonhole failed: every slice attains more than n/beta columns".into(),
        ));
    };

    #[cfg(debug_assertions)]
    assert_removed_rows_are_dense(
        &slices[i],
        blocks,
        b_col,
        u,
        &upper_sets[i],
        &lower_sets[i],
        &common_sets[i],
    );

    let b_rows: Vec<usize> = (i * m_star..(i + 1) * m_star).collect();
    let s_i: Vec<usize> = common_sets[i].iter().copied().collect();
    let cols: Vec<usize> = if s_i.len() >= m_star {
        // Heaviest m* columns of the slice restricted to S_i, ties leftmost.
        let mut weighted: Vec<(usize, usize)> = s_i
            .iter()
            .map(|&c| (c, b_rows.iter().filter(|&&r| a.get(r, c)).count()))
            .collect();
        weighted.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
        let mut chosen: Vec<usize> = weighted[..m_star].iter().map(|&(c, _)| c).collect();
        chosen.sort_unstable();
        chosen
    } else {
        if a.cols() < m_star {
            return Ok(EmbedResult::Inconclusive(format!(
                "host has {} columns, too narrow for an m* = {m_star} frame",
                a.cols()
            )));
        }
        let anchor = s_i.first().copied().unwrap_or(blocks.range(b_col).start);
        let start = anchor.min(a.cols() - m_star);
        (start..start + m_star).collect()
    };

    match DenseCertificate::try_new(a, b_rows, cols, *bound)? {
        Some(cert) => {
            if !cert.verify(a) {
                return Err(Error::Internal("certificate failed re-verification".into()));
            }
            Ok(EmbedResult::Certificate(cert))
        }
        None => Ok(EmbedResult::Inconclusive(
            "densest m* window does not violate the bound".into(),
        )),
    }
}

/// Rows dropped by both part reductions keep more than `u/3` of their ones
/// inside the attained column set; that count feeds the density estimate.
#[cfg(debug_assertions)]
fn assert_removed_rows_are_dense(
    a_i: &Matrix01,
    blocks: &BlockStructure,
    b_col: usize,
    u: usize,
    upper_set: &BTreeSet<usize>,
    lower_set: &BTreeSet<usize>,
    common: &BTreeSet<usize>,
) {
    let range = blocks.range(b_col);
    for r in 0..a_i.rows() {
        let ones: Vec<usize> = a_i
            .ones_in_row(r)
            .into_iter()
            .filter(|c| range.contains(c))
            .collect();
        let outside_upper = ones.iter().filter(|c| !upper_set.contains(c)).count();
        let outside_lower = ones.iter().filter(|c| !lower_set.contains(c)).count();
        if 3 * outside_upper < u && 3 * outside_lower < u {
            let inside = ones.iter().filter(|c| common.contains(c)).count();
            debug_assert!(
                3 * inside > u,
                "doubly-removed row {r} has only {inside} ones inside the common set (u = {u})"
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::class_number;
    use crate::fixtures;

    fn q1() -> Pattern {
        fixtures::fixture("Q1").unwrap()
    }

    #[test]
    fn completeness_examples() {
        let blocks = BlockStructure::new(2, 3).unwrap();
        let a = Matrix01::parse("111111\n111111").unwrap();
        assert!(is_ku_complete(&a, &blocks, 0).unwrap());
        assert!(is_ku_complete(&a, &blocks, 3).unwrap());
        assert!(!is_ku_complete(&a, &blocks, 4).unwrap());

        let holed = Matrix01::parse("111000\n111111").unwrap();
        assert!(!is_ku_complete(&holed, &blocks, 1).unwrap());
        assert!(is_ku_complete(&holed, &blocks, 0).unwrap());

        let wrong = Matrix01::parse("11111\n11111").unwrap();
        assert!(is_ku_complete(&wrong, &blocks, 1).is_err());
    }

    #[test]
    fn single_row_embeds_in_first_row_of_complete_host() {
        let blocks = BlockStructure::new(3, 2).unwrap();
        let p = Pattern::parse("111").unwrap();
        let a = Matrix01::parse("010101\n101010\n110110").unwrap();
        let e = find_block_embedding(&p, &a, &blocks).unwrap().unwrap();
        assert_eq!(e.row_map, vec![0]);
        assert_eq!(e.col_map, vec![1, 3, 5]);
        assert!(e.verify(&p, &a, &blocks));
    }

    #[test]
    fn zero_host_has_no_embedding() {
        let blocks = BlockStructure::new(2, 2).unwrap();
        let p = Pattern::parse("10").unwrap();
        let a = Matrix01::zeros(3, 4);
        assert!(find_block_embedding(&p, &a, &blocks).unwrap().is_none());
    }

    #[test]
    fn q1_embeds_in_itself_with_unit_blocks() {
        let q1 = q1();
        let blocks = BlockStructure::new(4, 1).unwrap();
        let a = Matrix01::from(&q1);
        let e = find_block_embedding(&q1, &a, &blocks).unwrap().unwrap();
        assert_eq!(e.row_map, vec![0, 1, 2]);
        assert_eq!(e.col_map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn si_set_examples() {
        // Part with a single 1 in the watched column.
        let blocks = BlockStructure::new(2, 3).unwrap();
        let part = Pattern::parse("10").unwrap();
        let a_i = Matrix01::parse("110000\n010111").unwrap();
        let set = compute_si_sets(&part, 0, &a_i, &blocks).unwrap();
        assert_eq!(set, BTreeSet::from([0usize, 1]));

        let zero = Matrix01::zeros(2, 6);
        assert!(compute_si_sets(&part, 0, &zero, &blocks).unwrap().is_empty());

        // Upper row of Q1 inside Q1 with unit blocks: only column 0 works.
        let q1 = q1();
        let upper = q1.row_band(0, 1);
        let host = Matrix01::from(&q1);
        let unit = BlockStructure::new(4, 1).unwrap();
        let set = compute_si_sets(&upper, 0, &host, &unit).unwrap();
        assert_eq!(set, BTreeSet::from([0usize]));
    }

    #[test]
    fn si_set_with_unconstrained_column_is_all_or_nothing() {
        let blocks = BlockStructure::new(2, 2).unwrap();
        // Pattern uses only block 1; block 0 is free.
        let part = Pattern::parse("01").unwrap();
        let a_i = Matrix01::parse("0010\n0001").unwrap();
        let set = compute_si_sets(&part, 0, &a_i, &blocks).unwrap();
        assert_eq!(set, BTreeSet::from([0usize, 1]));
        let empty_host = Matrix01::zeros(2, 4);
        assert!(compute_si_sets(&part, 0, &empty_host, &blocks)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn combine_minimal_instance() {
        // Both parts wrote a single 1 in column 0; they agree on g(0).
        let p = Pattern::parse("10\n10").unwrap();
        let blocks = BlockStructure::new(2, 2).unwrap();
        let a = Matrix01::parse("1010\n1001").unwrap();
        let upper = BlockEmbedding {
            row_map: vec![0],
            col_map: vec![0, 2],
        };
        let lower = BlockEmbedding {
            row_map: vec![1],
            col_map: vec![0, 3],
        };
        let e = combine_embeddings(&p, 1, Some(0), &upper, &lower, &a, &blocks).unwrap();
        assert_eq!(e.row_map, vec![0, 1]);
        assert_eq!(e.col_map[0], 0);
        assert!(e.verify(&p, &a, &blocks));
    }

    #[test]
    fn combine_q1_across_spread_rows() {
        let q1 = q1();
        let blocks = BlockStructure::new(4, 1).unwrap();
        // Q1's rows sit in host rows 0, 2, 4.
        let a = Matrix01::parse("1010\n0000\n1001\n0000\n0101").unwrap();
        let upper = find_block_embedding(&q1.row_band(0, 1), &a, &blocks)
            .unwrap()
            .unwrap();
        let lower = BlockEmbedding {
            row_map: vec![2, 4],
            col_map: vec![0, 1, 2, 3],
        };
        let e = combine_embeddings(&q1, 1, Some(0), &upper, &lower, &a, &blocks).unwrap();
        assert_eq!(e.row_map, vec![0, 2, 4]);
    }

    #[test]
    fn combine_rejects_each_violated_hypothesis() {
        let p = Pattern::parse("10\n10").unwrap();
        let blocks = BlockStructure::new(2, 2).unwrap();
        let a = Matrix01::parse("1010\n1001").unwrap();
        let upper = BlockEmbedding {
            row_map: vec![0],
            col_map: vec![0, 2],
        };
        let lower_same_row = BlockEmbedding {
            row_map: vec![0],
            col_map: vec![0, 2],
        };
        match combine_embeddings(&p, 1, Some(0), &upper, &lower_same_row, &a, &blocks) {
            Err(Error::Combine(CombineViolation::RowOrder { .. })) => {}
            other => panic!("expected RowOrder, got {other:?}"),
        }

        let lower_disagreeing = BlockEmbedding {
            row_map: vec![1],
            col_map: vec![1, 3],
        };
        // Column 0 is shared but g'(0)=0 vs g''(0)=1. Host needs a 1 at (1,1).
        let mut a2 = a.clone();
        a2.set(1, 1, true);
        match combine_embeddings(&p, 1, Some(0), &upper, &lower_disagreeing, &a2, &blocks) {
            Err(Error::Combine(CombineViolation::ColumnAgreement { col: 0, .. })) => {}
            other => panic!("expected ColumnAgreement, got {other:?}"),
        }

        // Wrong designated spanning column.
        match combine_embeddings(
            &p,
            1,
            Some(1),
            &upper,
            &BlockEmbedding {
                row_map: vec![1],
                col_map: vec![0, 3],
            },
            &a,
            &blocks,
        ) {
            Err(Error::Combine(CombineViolation::SpanningColumn { col: 0 })) => {}
            other => panic!("expected SpanningColumn, got {other:?}"),
        }

        // Corrupt upper part: points at a 0.
        let bad_upper = BlockEmbedding {
            row_map: vec![0],
            col_map: vec![1, 2],
        };
        match combine_embeddings(
            &p,
            1,
            Some(0),
            &bad_upper,
            &BlockEmbedding {
                row_map: vec![1],
                col_map: vec![0, 3],
            },
            &a,
            &blocks,
        ) {
            Err(Error::Combine(CombineViolation::PartEmbedding { part: "upper", .. })) => {}
            other => panic!("expected PartEmbedding, got {other:?}"),
        }
    }

    #[test]
    fn leaf_recursion_embeds_single_rows() {
        let p = Pattern::parse("11").unwrap();
        let (s, tree) = class_number(&p).unwrap();
        assert_eq!(s, 0);
        let blocks = BlockStructure::new(2, 2).unwrap();
        let a = Matrix01::parse("0101\n1010\n1111").unwrap();
        let bound = SparsityBound::new(1.0, 0.5, 1.0).unwrap();
        match recursive_embed(&p, &tree, &a, &blocks, 1, &bound).unwrap() {
            EmbedResult::Embedding(e) => {
                assert_eq!(e.row_map, vec![0]);
                assert!(e.verify(&p, &a, &blocks));
            }
            other => panic!("expected embedding, got {other:?}"),
        }
    }

    #[test]
    fn tiny_cut_instance_is_inconclusive() {
        let p = Pattern::parse("10\n01").unwrap();
        let (_, tree) = class_number(&p).unwrap();
        let blocks = BlockStructure::new(2, 2).unwrap();
        let a = Matrix01::parse("1111\n1111\n1111").unwrap();
        // Small b keeps n^(x^s) far below 40.
        let bound = SparsityBound::new(0.5, 0.5, 1.0).unwrap();
        match recursive_embed(&p, &tree, &a, &blocks, 1, &bound).unwrap() {
            EmbedResult::Inconclusive(reason) => assert!(reason.contains("< 40"), "{reason}"),
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn incomplete_host_is_rejected() {
        let p = Pattern::parse("10\n01").unwrap();
        let (_, tree) = class_number(&p).unwrap();
        let blocks = BlockStructure::new(2, 2).unwrap();
        let a = Matrix01::parse("1100\n1111\n1111").unwrap();
        let bound = SparsityBound::new(1.0, 0.5, 1.0).unwrap();
        assert!(matches!(
            recursive_embed(&p, &tree, &a, &blocks, 1, &bound),
            Err(Error::Domain(_))
        ));
    }
}

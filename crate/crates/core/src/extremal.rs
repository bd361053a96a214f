//! Exact extremal numbers at desk scale, sparsity auditing, and the
//! box-decomposition pipeline that reduces a heavy square matrix to a
//! complete block matrix for the embed-or-densify search.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::class_number;
use crate::contains::{
    contains, contains_pinned, contains_pinned_words_fast, verify_embedding, PinScratch, Pins,
};
use crate::embed::{is_ku_complete, recursive_embed, BlockStructure, EmbedResult};
use crate::error::{Error, Result};
use crate::pattern::{Embedding, Matrix01, Pattern};
use crate::sparsity::{exceeds, DenseCertificate, SparsityBound};

/// Search controls for [`ex_exact_with`].
#[derive(Clone, Copy, Debug)]
pub struct ExOptions {
    /// Node budget; the search fails explicitly instead of guessing.
    pub budget: u64,
    /// Seed for the greedy warm start.
    pub seed: u64,
}

impl Default for ExOptions {
    fn default() -> Self {
        ExOptions {
            budget: 100_000_000,
            seed: 0,
        }
    }
}

/// The exact extremal number together with an optimal witness.
#[derive(Clone, Debug)]
pub struct ExtremalResult {
    pub n: usize,
    pub max_weight: usize,
    /// A maximum-weight matrix avoiding the pattern.
    pub witness: Matrix01,
    pub nodes_explored: u64,
}

/// Maximum weight of an `n x n` matrix avoiding `p`, by exhaustive
/// branch-and-bound.
///
/// Cells are decided in row-major order, setting 1 before 0, and a branch is
/// cut when its weight plus all undecided cells cannot beat the incumbent.
/// Setting a cell re-tests containment with the pattern's last 1-entry
/// pinned to that cell, which is complete because earlier cells are frozen
/// and later cells are still 0.
pub fn ex_exact(n: usize, p: &Pattern) -> Result<ExtremalResult> {
    ex_exact_with(n, p, &ExOptions::default())
}

pub fn ex_exact_with(n: usize, p: &Pattern, opts: &ExOptions) -> Result<ExtremalResult> {
    let (weight, witness) = ex_lower_greedy(n, p, opts.seed)?;
    ex_exact_from(n, p, opts, weight, witness)
}

/// Runs the search bottom-up over row counts: `ext[m]` is the exact maximum
/// weight of an `m x n` pattern-free matrix. Each level prunes with the
/// exact values of the smaller levels: the undecided rows of any branch
/// form a pattern-free rectangle, so `ext` caps what they can still add,
/// which subsumes the plain remaining-cells bound. The node budget is shared
/// across levels.
fn ex_exact_from(
    n: usize,
    p: &Pattern,
    opts: &ExOptions,
    warm_weight: usize,
    warm_witness: Matrix01,
) -> Result<ExtremalResult> {
    let pin = last_one_cell(p);
    let mut nodes = 0u64;
    let mut ext: Vec<usize> = vec![0];
    let mut prev_witness: Option<Matrix01> = None;
    let mut result = None;
    for m in 1..=n {
        let (mut best_weight, mut best_witness) = if m == n {
            (warm_weight, warm_witness.clone())
        } else {
            greedy_saturate(m, n, p, opts.seed)
        };
        if let Some(prev) = &prev_witness {
            // Previous level plus a zero row; padding can complete patterns
            // with blank border rows, so it is re-checked.
            if ext[m - 1] > best_weight {
                let mut padded = Matrix01::zeros(m, n);
                for r in 0..m - 1 {
                    for c in prev.ones_in_row(r) {
                        padded.set(r, c, true);
                    }
                }
                if contains(&padded, p).is_none() {
                    best_weight = ext[m - 1];
                    best_witness = padded;
                }
            }
        }
        let (level_best, level_witness, level_nodes) = {
            let mut search = BbSearch {
                p,
                pin,
                rows: m,
                cols: n,
                total: m * n,
                budget: opts.budget,
                nodes,
                best_weight,
                best_witness,
                ext: &ext,
                scratch: PinScratch::for_pattern(p),
            };
            if n <= 64 {
                let mut words = vec![0u64; m];
                search.dfs(&mut words, 0, 0, 0)?;
            } else {
                let mut a = Matrix01::zeros(m, n);
                search.dfs_wide(&mut a, 0, 0, 0)?;
            }
            (search.best_weight, search.best_witness, search.nodes)
        };
        nodes = level_nodes;
        ext.push(level_best);
        if m == n {
            result = Some((level_best, level_witness.clone()));
        }
        prev_witness = Some(level_witness);
    }
    let (max_weight, witness) = result.expect("n >= 1");
    debug_assert!(contains(&witness, p).is_none());
    debug_assert_eq!(witness.weight(), max_weight);
    Ok(ExtremalResult {
        n,
        max_weight,
        witness,
        nodes_explored: nodes,
    })
}

/// Row-major last 1-entry of the pattern. Any embedding created by setting a
/// new 1 must map this cell onto it.
fn last_one_cell(p: &Pattern) -> (usize, usize) {
    for i in (0..p.rows()).rev() {
        if let Some(&j) = p.ones_in_row(i).last() {
            return (i, j);
        }
    }
    unreachable!("callers reject zero-weight patterns")
}

struct BbSearch<'a> {
    p: &'a Pattern,
    pin: (usize, usize),
    rows: usize,
    cols: usize,
    total: usize,
    budget: u64,
    nodes: u64,
    best_weight: usize,
    best_witness: Matrix01,
    /// `ext[t]`: exact maximum weight of a `t x cols` pattern-free matrix,
    /// available for every `t` below the current row count.
    ext: &'a [usize],
    scratch: PinScratch,
}

impl BbSearch<'_> {
    /// `row_weight` is the number of ones already placed in the current row.
    /// Hosts with at most 64 columns run on raw row words.
    fn dfs(&mut self, a: &mut [u64], idx: usize, weight: usize, row_weight: usize) -> Result<()> {
        if weight > self.best_weight {
            self.best_weight = weight;
            self.best_witness = words_to_matrix(a, self.cols, weight);
        }
        if idx == self.total {
            return Ok(());
        }
        let (r, c) = (idx / self.cols, idx % self.cols);
        let row_weight = if c == 0 { 0 } else { row_weight };
        // Two caps on what the branch can still add: the open cells of this
        // row plus a pattern-free completion of the rows below, and a
        // pattern-free completion of the suffix including this row, which
        // already carries `row_weight` ones. At the first row the suffix
        // value is the level being solved; one extra row caps it instead.
        let cap_split = (self.cols - c) + self.ext[self.rows - r - 1];
        let suffix_value = if self.rows - r < self.ext.len() {
            self.ext[self.rows - r]
        } else {
            self.ext[self.rows - r - 1] + self.cols
        };
        let cap = cap_split.min(suffix_value.saturating_sub(row_weight));
        if weight + cap <= self.best_weight {
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
                explored: self.nodes,
            });
        }
        a[r] |= 1u64 << c;
        let pins = Pins {
            row: Some((self.pin.0, r)),
            col: Some((self.pin.1, c)),
        };
        if !contains_pinned_words_fast(a, self.cols, weight + 1, self.p, pins, &mut self.scratch) {
            self.dfs(a, idx + 1, weight + 1, row_weight + 1)?;
        }
        a[r] &= !(1u64 << c);
        self.dfs(a, idx + 1, weight, row_weight)
    }

    /// Fallback for hosts wider than one machine word.
    fn dfs_wide(
        &mut self,
        a: &mut Matrix01,
        idx: usize,
        weight: usize,
        row_weight: usize,
    ) -> Result<()> {
        if weight > self.best_weight {
            self.best_weight = weight;
            self.best_witness = a.clone();
        }
        if idx == self.total {
            return Ok(());
        }
        let (r, c) = (idx / self.cols, idx % self.cols);
        let row_weight = if c == 0 { 0 } else { row_weight };
        let cap_split = (self.cols - c) + self.ext[self.rows - r - 1];
        let suffix_value = if self.rows - r < self.ext.len() {
            self.ext[self.rows - r]
        } else {
            self.ext[self.rows - r - 1] + self.cols
        };
        let cap = cap_split.min(suffix_value.saturating_sub(row_weight));
        if weight + cap <= self.best_weight {
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
                explored: self.nodes,
            });
        }
        a.set(r, c, true);
        let pins = Pins {
            row: Some((self.pin.0, r)),
            col: Some((self.pin.1, c)),
        };
        if contains_pinned(a, self.p, pins).is_none() {
            self.dfs_wide(a, idx + 1, weight + 1, row_weight + 1)?;
        }
        a.set(r, c, false);
        self.dfs_wide(a, idx + 1, weight, row_weight)
    }
}

fn words_to_matrix(words: &[u64], cols: usize, weight: usize) -> Matrix01 {
    let mut a = Matrix01::zeros(words.len(), cols);
    for (r, &w) in words.iter().enumerate() {
        let mut bits = w;
        while bits != 0 {
            let c = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            a.set(r, c, true);
        }
    }
    debug_assert_eq!(a.weight(), weight);
    a
}

/// Randomized saturation: adds 1s in a shuffled order, keeping each one that
/// leaves the matrix pattern-free. The result is a maximal pattern-free
/// matrix, hence a lower bound for the extremal number.
pub fn ex_lower_greedy(n: usize, p: &Pattern, seed: u64) -> Result<(usize, Matrix01)> {
    if p.weight() == 0 {
        return Err(Error::ZeroWeightPattern);
    }
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    Ok(greedy_saturate(n, n, p, seed))
}

fn greedy_saturate(rows: usize, cols: usize, p: &Pattern, seed: u64) -> (usize, Matrix01) {
    let mut order: Vec<(usize, usize)> = (0..rows).cartesian_product(0..cols).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut a = Matrix01::zeros(rows, cols);
    for (r, c) in order {
        // Cells arrive in arbitrary order, so the last-cell pin shortcut of
        // the row-major search does not apply; test containment in full.
        a.set(r, c, true);
        if contains(&a, p).is_some() {
            a.set(r, c, false);
        }
    }
    (a.weight(), a)
}

/// Exact values for every `n` in the range, warm-starting each size with the
/// previous witness padded by a zero row and column (re-checked, since
/// padding can help patterns with blank border rows).
pub fn ex_table(
    range: std::ops::RangeInclusive<usize>,
    p: &Pattern,
    opts: &ExOptions,
) -> Result<Vec<ExtremalResult>> {
    let mut results: Vec<ExtremalResult> = Vec::new();
    for n in range {
        let (mut warm_weight, mut warm_witness) = ex_lower_greedy(n, p, opts.seed)?;
        if let Some(prev) = results.last() {
            if prev.max_weight > warm_weight {
                let mut padded = Matrix01::zeros(n, n);
                for r in 0..prev.n {
                    for c in prev.witness.ones_in_row(r) {
                        padded.set(r, c, true);
                    }
                }
                if contains(&padded, p).is_none() {
                    warm_weight = prev.max_weight;
                    warm_witness = padded;
                }
            }
        }
        results.push(ex_exact_from(n, p, opts, warm_weight, warm_witness)?);
    }
    Ok(results)
}

/// How hard [`is_h_sparse`] works.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SparsityMode {
    /// Exhaustive over all square submatrices; only for small matrices.
    Exact,
    /// Alternating row/column local search: finds only genuine violations
    /// but may miss some.
    Heuristic,
}

#[derive(Clone, PartialEq, Debug)]
pub enum SparsityOutcome {
    /// Exact mode proved every square submatrix is within the bound.
    Sparse,
    /// Heuristic mode found no violation; this is not a proof of sparsity.
    NotRefuted,
    Violation(DenseCertificate),
}

const EXACT_SPARSITY_LIMIT: usize = 14;

/// Looks for a square submatrix whose weight exceeds `n' * h(n')`.
pub fn is_h_sparse(
    a: &Matrix01,
    bound: &SparsityBound,
    mode: SparsityMode,
) -> Result<SparsityOutcome> {
    let max_size = a.rows().min(a.cols());
    match mode {
        SparsityMode::Exact => {
            if max_size > EXACT_SPARSITY_LIMIT {
                return Err(Error::TooLarge(format!(
                    "exact sparsity check supports min(m,n) <= {EXACT_SPARSITY_LIMIT}, got {max_size}"
                )));
            }
            for size in 2..=max_size {
                let threshold = size as f64 * bound.h(size)?;
                let mut row_weights: Vec<usize> = (0..a.rows()).map(|r| a.row_weight(r)).collect();
                row_weights.sort_unstable_by(|x, y| y.cmp(x));
                let cap: usize = row_weights[..size].iter().sum();
                if !exceeds(cap as f64, threshold) {
                    continue;
                }
                for rows in (0..a.rows()).combinations(size) {
                    let cols = heaviest_columns(a, &rows, size);
                    let weight = a.weight_of(&rows, &cols);
                    if exceeds(weight as f64, threshold) {
                        let cert = DenseCertificate::try_new(a, rows, cols, *bound)?
                            .expect("weight was checked against the threshold");
                        return Ok(SparsityOutcome::Violation(cert));
                    }
                }
            }
            Ok(SparsityOutcome::Sparse)
        }
        SparsityMode::Heuristic => {
            for size in heuristic_sizes(max_size) {
                if let Some(cert) = densest_square_local_search(a, bound, size)? {
                    return Ok(SparsityOutcome::Violation(cert));
                }
            }
            Ok(SparsityOutcome::NotRefuted)
        }
    }
}

/// The `count` heaviest columns within the given rows, ties to the left.
fn heaviest_columns(a: &Matrix01, rows: &[usize], count: usize) -> Vec<usize> {
    let mut col_counts = vec![0usize; a.cols()];
    for &r in rows {
        for c in a.ones_in_row(r) {
            col_counts[c] += 1;
        }
    }
    let mut order: Vec<usize> = (0..a.cols()).collect();
    order.sort_by(|&x, &y| col_counts[y].cmp(&col_counts[x]).then(x.cmp(&y)));
    let mut chosen = order[..count].to_vec();
    chosen.sort_unstable();
    chosen
}

fn heaviest_rows(a: &Matrix01, cols: &[usize], count: usize) -> Vec<usize> {
    let mut scores: Vec<(usize, usize)> = (0..a.rows())
        .map(|r| (r, cols.iter().filter(|&&c| a.get(r, c)).count()))
        .collect();
    scores.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
    let mut chosen: Vec<usize> = scores[..count].iter().map(|&(r, _)| r).collect();
    chosen.sort_unstable();
    chosen
}

fn heuristic_sizes(max_size: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> = (2..=max_size.min(16)).collect();
    let mut s = 24usize;
    while s <= max_size {
        sizes.push(s);
        s = s * 3 / 2;
    }
    if max_size > 16 && sizes.last() != Some(&max_size) {
        sizes.push(max_size);
    }
    sizes
}

fn densest_square_local_search(
    a: &Matrix01,
    bound: &SparsityBound,
    size: usize,
) -> Result<Option<DenseCertificate>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ddba11);
    let all_cols: Vec<usize> = (0..a.cols()).collect();
    let mut starts = vec![heaviest_columns(a, &(0..a.rows()).collect::<Vec<_>>(), size)];
    let mut random_cols = all_cols;
    random_cols.shuffle(&mut rng);
    random_cols.truncate(size);
    random_cols.sort_unstable();
    starts.push(random_cols);

    for mut cols in starts {
        let mut prev_weight = 0usize;
        for _ in 0..20 {
            let rows = heaviest_rows(a, &cols, size);
            cols = heaviest_columns(a, &rows, size);
            let weight = a.weight_of(&rows, &cols);
            if let Some(cert) = DenseCertificate::try_new(a, rows, cols.clone(), *bound)? {
                return Ok(Some(cert));
            }
            if weight == prev_weight {
                break;
            }
            prev_weight = weight;
        }
    }
    Ok(None)
}

/// Parameter pack for the reduction: `c = s/(s+1)` and
/// `b = (k+2) * log2(20k) / c`, with `d` left to the caller.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct TheoremParameters {
    pub s: usize,
    pub k: usize,
    pub c: f64,
    pub b: f64,
    pub d: f64,
}

impl TheoremParameters {
    pub fn for_pattern(p: &Pattern, d: f64) -> Result<TheoremParameters> {
        let Some((s, _)) = class_number(p) else {
            return Err(Error::NotDegenerate);
        };
        if s == 0 {
            return Err(Error::Domain(
                "single-row patterns have linear extremal numbers; the reduction parameters are undefined".into(),
            ));
        }
        let k = p.cols();
        let c = s as f64 / (s + 1) as f64;
        let b = (k + 2) as f64 * (20.0 * k as f64).log2() / c;
        Ok(TheoremParameters { s, k, c, b, d })
    }

    pub fn bound(&self) -> Result<SparsityBound> {
        SparsityBound::new(self.b, self.c, self.d)
    }

    pub fn x(&self, n: usize) -> Result<f64> {
        self.bound()?.x(n)
    }

    /// `x(n) < 1/10` exactly when `log2(n)` exceeds this value.
    pub fn log2_n0(&self) -> f64 {
        (10.0 * self.b * self.c).powi(self.s as i32 + 1)
    }

    /// Whether `n^(x(n)^s) >= 40`, the solvability floor of the embed step.
    pub fn embed_regime_ok(&self, n: usize) -> Result<bool> {
        let x = self.x(n)?;
        Ok(x.powi(self.s as i32) * (n as f64).log2() >= 40f64.log2())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoxLabel {
    Light,
    Regular,
    Heavy,
}

/// Result of the box decomposition of a heavy square matrix.
#[derive(Clone, Debug)]
pub struct BoxDecomposition {
    pub n_star: usize,
    pub alpha: usize,
    /// The `alpha * n_star` heaviest host columns, ascending.
    pub column_selection: Vec<usize>,
    /// Box weights, `rows x alpha`.
    pub box_weights: Vec<Vec<usize>>,
    pub labels: Vec<Vec<BoxLabel>>,
    /// Boxes below this are light: `h(n*) / alpha`.
    pub light_threshold: f64,
    /// Boxes above this are heavy: `h(n) / (6k)`.
    pub heavy_threshold: f64,
    /// Regular boxes per row.
    pub regular_per_row: Vec<usize>,
    /// The chosen k blocks, ascending; maximizes the number of good rows.
    pub chosen_k_set: Vec<usize>,
    /// Whether the k-set was chosen by exhaustive enumeration.
    pub kset_exact: bool,
    /// Rows with a regular box in every chosen block, ascending.
    pub good_rows: Vec<usize>,
    pub m_star: usize,
    pub u_star: usize,
    /// First `m_star` good rows.
    pub t_rows: Vec<usize>,
    /// Host columns of the chosen blocks, ascending.
    pub s_cols: Vec<usize>,
    /// The extracted `(k, u*)`-complete matrix `C`.
    pub c: Matrix01,
    /// Per block: `n_star` rows covering its heavy boxes (first `n_star`
    /// heavy rows if there are more, padded with the lowest rows if fewer).
    pub heavy_frames: Vec<Vec<usize>>,
}

const KSET_SAMPLE_SEED: u64 = 0xb0c5;
const KSET_SAMPLES: usize = 4096;
const KSET_EXACT_ALPHA: usize = 20;

/// Thresholds, labels and heavy frames: the part of the decomposition that
/// exists whether or not good rows do.
struct BoxGrid {
    n_star: usize,
    alpha: usize,
    column_selection: Vec<usize>,
    box_weights: Vec<Vec<usize>>,
    labels: Vec<Vec<BoxLabel>>,
    light_threshold: f64,
    heavy_threshold: f64,
    regular_per_row: Vec<usize>,
    heavy_frames: Vec<Vec<usize>>,
}

fn box_grid(a: &Matrix01, k: usize, bound: &SparsityBound) -> Result<BoxGrid> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "box decomposition needs a square matrix, got {n} x {}",
            a.cols()
        )));
    }
    if n < 2 {
        return Err(Error::Regime("host must have at least 2 rows".into()));
    }
    let x = bound.x(n)?;
    let ratio = (6.0 * k as f64).powf(1.0 / x);
    let n_star_f = if ratio.is_finite() { (n as f64 / ratio).floor() } else { 0.0 };
    let n_star = n_star_f as usize;
    if n_star < 1 {
        return Err(Error::Regime(format!(
            "n* = floor(n / (6k)^(1/x)) = 0 at n = {n} (x = {x:.4})"
        )));
    }
    if n_star < 2 {
        return Err(Error::Regime(
            "n* = 1: the sparsity function is undefined below 2".into(),
        ));
    }
    let alpha = n / n_star;
    if alpha < k {
        return Err(Error::Regime(format!("alpha = {alpha} < k = {k}")));
    }

    // The alpha * n_star heaviest columns, ties to the left, kept in order.
    let mut order: Vec<usize> = (0..n).collect();
    let col_weights: Vec<usize> = (0..n).map(|c| a.col_weight(c)).collect();
    order.sort_by(|&p, &q| col_weights[q].cmp(&col_weights[p]).then(p.cmp(&q)));
    let mut column_selection = order[..alpha * n_star].to_vec();
    column_selection.sort_unstable();

    let light_threshold = bound.h(n_star)? / alpha as f64;
    let heavy_threshold = bound.h(n)? / (6.0 * k as f64);

    let mut box_weights = vec![vec![0usize; alpha]; n];
    let mut labels = vec![vec![BoxLabel::Regular; alpha]; n];
    let mut regular_per_row = vec![0usize; n];
    for r in 0..n {
        for (j, chunk) in column_selection.chunks(n_star).enumerate() {
            let w: usize = chunk.iter().filter(|&&c| a.get(r, c)).count();
            box_weights[r][j] = w;
            labels[r][j] = if (w as f64) < light_threshold {
                BoxLabel::Light
            } else if w as f64 > heavy_threshold {
                BoxLabel::Heavy
            } else {
                regular_per_row[r] += 1;
                BoxLabel::Regular
            };
        }
    }

    #[cfg(debug_assertions)]
    {
        let light_total: usize = (0..n)
            .flat_map(|r| (0..alpha).map(move |j| (r, j)))
            .filter(|&(r, j)| labels[r][j] == BoxLabel::Light)
            .map(|(r, j)| box_weights[r][j])
            .sum();
        debug_assert!(
            light_total as f64 <= n as f64 * bound.h(n_star)? * (1.0 + crate::sparsity::REL_EPS),
            "light boxes outweigh n * h(n*)"
        );
    }

    let mut heavy_rows: Vec<Vec<usize>> = vec![Vec::new(); alpha];
    for (r, row_labels) in labels.iter().enumerate() {
        for (j, &label) in row_labels.iter().enumerate() {
            if label == BoxLabel::Heavy {
                heavy_rows[j].push(r);
            }
        }
    }
    let mut heavy_frames = Vec::with_capacity(alpha);
    for mut rows in heavy_rows {
        rows.truncate(n_star);
        let mut fill = 0usize;
        while rows.len() < n_star {
            if !rows.contains(&fill) {
                rows.push(fill);
            }
            fill += 1;
        }
        rows.sort_unstable();
        heavy_frames.push(rows);
    }

    Ok(BoxGrid {
        n_star,
        alpha,
        column_selection,
        box_weights,
        labels,
        light_threshold,
        heavy_threshold,
        regular_per_row,
        heavy_frames,
    })
}

/// Decomposes a heavy `n x n` matrix into boxes and extracts the complete
/// submatrix `C` fed to the embed-or-densify search.
///
/// The sparsity parameters `(b, c, d)` fully determine the thresholds, so
/// the bound is taken directly; `k` is the pattern's column count.
pub fn box_decompose(a: &Matrix01, k: usize, bound: &SparsityBound) -> Result<BoxDecomposition> {
    let grid = box_grid(a, k, bound)?;
    complete_decomposition(a, k, grid)
}

fn complete_decomposition(a: &Matrix01, k: usize, grid: BoxGrid) -> Result<BoxDecomposition> {
    let n = a.rows();
    let BoxGrid {
        n_star,
        alpha,
        column_selection,
        box_weights,
        labels,
        light_threshold,
        heavy_threshold,
        regular_per_row,
        heavy_frames,
    } = grid;

    let (chosen_k_set, good_count, kset_exact) = choose_k_set(&labels, alpha, k, n)?;

    let alpha_pow = (alpha as f64).powi(k as i32);
    let m_star = ((n as f64 / alpha_pow).ceil() as usize).max(1);
    if good_count < m_star {
        return Err(Error::NoGoodRows {
            needed: m_star,
            found: good_count,
        });
    }

    let good_rows: Vec<usize> = (0..n)
        .filter(|&r| chosen_k_set.iter().all(|&j| labels[r][j] == BoxLabel::Regular))
        .collect();
    let t_rows: Vec<usize> = good_rows[..m_star].to_vec();
    let s_cols: Vec<usize> = chosen_k_set
        .iter()
        .flat_map(|&j| column_selection[j * n_star..(j + 1) * n_star].iter().copied())
        .collect();
    let c = a.submatrix(&t_rows, &s_cols)?;
    let u_star = (light_threshold.ceil() as usize).max(1);
    debug_assert!(
        is_ku_complete(&c, &BlockStructure::new(k, n_star)?, u_star)?,
        "extracted matrix lost completeness"
    );

    Ok(BoxDecomposition {
        n_star,
        alpha,
        column_selection,
        box_weights,
        labels,
        light_threshold,
        heavy_threshold,
        regular_per_row,
        chosen_k_set,
        kset_exact,
        good_rows,
        m_star,
        u_star,
        t_rows,
        s_cols,
        c,
        heavy_frames,
    })
}

/// Picks the k-set of blocks with the most good rows: exhaustively for
/// alpha <= 20, otherwise over a seeded sample plus a greedy candidate.
fn choose_k_set(
    labels: &[Vec<BoxLabel>],
    alpha: usize,
    k: usize,
    n: usize,
) -> Result<(Vec<usize>, usize, bool)> {
    let good_for = |blocks: &[usize]| {
        (0..n)
            .filter(|&r| blocks.iter().all(|&j| labels[r][j] == BoxLabel::Regular))
            .count()
    };
    if alpha <= KSET_EXACT_ALPHA {
        let mut best: Option<(Vec<usize>, usize)> = None;
        for cand in (0..alpha).combinations(k) {
            let count = good_for(&cand);
            if best.as_ref().is_none_or(|(_, c)| count > *c) {
                best = Some((cand, count));
            }
        }
        let (set, count) = best.expect("alpha >= k guarantees candidates");
        Ok((set, count, true))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(KSET_SAMPLE_SEED);
        let mut regular_counts: Vec<(usize, usize)> = (0..alpha)
            .map(|j| (j, (0..n).filter(|&r| labels[r][j] == BoxLabel::Regular).count()))
            .collect();
        regular_counts.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
        let mut greedy: Vec<usize> = regular_counts[..k].iter().map(|&(j, _)| j).collect();
        greedy.sort_unstable();

        let mut best = (greedy.clone(), good_for(&greedy));
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([greedy]);
        for _ in 0..KSET_SAMPLES {
            let mut cand: Vec<usize> = Vec::with_capacity(k);
            while cand.len() < k {
                let j = rng.gen_range(0..alpha);
                if !cand.contains(&j) {
                    cand.push(j);
                }
            }
            cand.sort_unstable();
            if !seen.insert(cand.clone()) {
                continue;
            }
            let count = good_for(&cand);
            if count > best.1 || (count == best.1 && cand < best.0) {
                best = (cand, count);
            }
        }
        Ok((best.0, best.1, false))
    }
}

/// Outcome of the density-increment audit of a heavy matrix.
#[derive(Clone, PartialEq, Debug)]
pub enum BoundCheck {
    /// The pattern occurs; the matrix was no counterexample.
    Embedding(Embedding),
    /// A proper square submatrix violating the bound.
    Certificate(DenseCertificate),
    Inconclusive(String),
}

/// Audits a square matrix of weight above `n * h(n)`: exhibits the pattern,
/// or a denser proper submatrix, or reports which regime threshold failed.
///
/// The pipeline follows the minimal-counterexample analysis: a containment
/// check first (a heavy matrix that contains the pattern is no
/// counterexample), then the box decomposition, whose heavy-box frames are
/// audited for density, and finally the embed-or-densify search on the
/// extracted complete matrix `C`, with its results mapped back into host
/// coordinates and re-verified.
pub fn verify_bound(a: &Matrix01, p: &Pattern, params: &TheoremParameters) -> Result<BoundCheck> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {n} x {}",
            a.cols()
        )));
    }
    if n < 2 {
        return Ok(BoundCheck::Inconclusive("host smaller than 2 x 2".into()));
    }
    let bound = params.bound()?;
    let weight_threshold = n as f64 * bound.h(n)?;
    if a.weight() as f64 <= weight_threshold {
        return Ok(BoundCheck::Inconclusive(format!(
            "not a counterexample: weight {} <= n*h(n) = {weight_threshold:.3}",
            a.weight()
        )));
    }

    if let Some(e) = contains(a, p) {
        if !verify_embedding(a, p, &e) {
            return Err(Error::Internal("containment witness failed checking".into()));
        }
        return Ok(BoundCheck::Embedding(e));
    }

    let grid = match box_grid(a, p.cols(), &bound) {
        Ok(grid) => grid,
        Err(Error::Regime(msg)) => return Ok(BoundCheck::Inconclusive(msg)),
        Err(e) => return Err(e),
    };

    // Heavy boxes concentrated in one frame already violate the bound; this
    // is audited before good rows are even counted.
    for (j, frame) in grid.heavy_frames.iter().enumerate() {
        let block_cols = &grid.column_selection[j * grid.n_star..(j + 1) * grid.n_star];
        if let Some(cert) =
            DenseCertificate::try_new(a, frame.clone(), block_cols.to_vec(), bound)?
        {
            if !cert.verify(a) {
                return Err(Error::Internal("frame certificate failed recount".into()));
            }
            return Ok(BoundCheck::Certificate(cert));
        }
    }

    let dec = match complete_decomposition(a, p.cols(), grid) {
        Ok(dec) => dec,
        Err(Error::NoGoodRows { needed, found }) => {
            return Ok(BoundCheck::Inconclusive(format!(
                "no k-set with {needed} good rows (best has {found})"
            )))
        }
        Err(e) => return Err(e),
    };

    let x_star = bound.x(dec.n_star)?;
    if x_star >= 0.1 {
        return Ok(BoundCheck::Inconclusive(format!(
            "x* = {x_star:.4} >= 1/10 at n* = {}",
            dec.n_star
        )));
    }

    let Some((_, tree)) = class_number(p) else {
        return Err(Error::NotDegenerate);
    };
    let blocks = BlockStructure::new(p.cols(), dec.n_star)?;
    match recursive_embed(p, &tree, &dec.c, &blocks, dec.u_star, &bound)? {
        EmbedResult::Embedding(be) => {
            let e = Embedding {
                row_map: be.row_map.iter().map(|&r| dec.t_rows[r]).collect(),
                col_map: be.col_map.iter().map(|&c| dec.s_cols[c]).collect(),
            };
            if !verify_embedding(a, p, &e) {
                return Err(Error::Internal(
                    "lifted embedding failed verification".into(),
                ));
            }
            Ok(BoundCheck::Embedding(e))
        }
        EmbedResult::Certificate(cert) => {
            let rows: Vec<usize> = cert.rows.iter().map(|&r| dec.t_rows[r]).collect();
            let cols: Vec<usize> = cert.cols.iter().map(|&c| dec.s_cols[c]).collect();
            let lifted = DenseCertificate {
                rows,
                cols,
                weight: cert.weight,
                bound,
            };
            if !lifted.verify(a) {
                return Err(Error::Internal(
                    "lifted certificate failed recount".into(),
                ));
            }
            Ok(BoundCheck::Certificate(lifted))
        }
        EmbedResult::Inconclusive(reason) => Ok(BoundCheck::Inconclusive(reason)),
    }
}

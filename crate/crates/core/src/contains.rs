//! The containment relation: deciding whether a pattern occurs in a host
//! matrix after deleting rows, columns and 1-entries, and checking witnesses.
//!
//! The search branches on pattern rows in order, trying host rows in
//! increasing order. Column choices are resolved greedily-leftmost, which is
//! exact because candidate sets only shrink as rows are fixed, so the first
//! witness found is the lexicographically least one. A branch is abandoned
//! when fewer host rows remain than pattern rows, or when the leftmost
//! feasible column chain runs off the right edge.

use crate::bits::ColSet;
use crate::pattern::{Embedding, Matrix01, Pattern};

/// Optional constraints for the search: force a single pattern row or column
/// onto a fixed host index.
#[derive(Clone, Copy, Default, Debug)]
pub(crate) struct Pins {
    pub row: Option<(usize, usize)>,
    pub col: Option<(usize, usize)>,
}

/// Finds the leftmost embedding of `p` in `a`, if one exists.
pub fn contains(a: &Matrix01, p: &Pattern) -> Option<Embedding> {
    contains_pinned(a, p, Pins::default())
}

pub(crate) fn contains_pinned(a: &Matrix01, p: &Pattern, pins: Pins) -> Option<Embedding> {
    let (l, k) = (p.rows(), p.cols());
    let (m, n) = (a.rows(), a.cols());
    if l > m || k > n || p.weight() > a.weight() {
        return None;
    }
    if let Some((pi, r)) = pins.row {
        debug_assert!(pi < l);
        // Rows before/after the pin must fit around it.
        if r < pi || m - r < l - pi {
            return None;
        }
    }
    if let Some((pj, c)) = pins.col {
        debug_assert!(pj < k);
        if c < pj || n - c < k - pj {
            return None;
        }
    }

    let mut search = Search {
        a,
        p,
        pins,
        cands: vec![ColSet::full(n); k],
        row_map: Vec::with_capacity(l),
        saved: Vec::new(),
    };
    if !search.feasible_columns() {
        return None;
    }
    search.assign_rows(0, 0)
}

struct Search<'a> {
    a: &'a Matrix01,
    p: &'a Pattern,
    pins: Pins,
    cands: Vec<ColSet>,
    row_map: Vec<usize>,
    saved: Vec<Vec<(usize, ColSet)>>,
}

impl Search<'_> {
    /// Greedy leftmost strictly-increasing column chain through the current
    /// candidate sets, honoring the column pin. Returns None if infeasible.
    fn column_chain(&self) -> Option<Vec<usize>> {
        let mut chain = Vec::with_capacity(self.cands.len());
        let mut next_free = 0usize;
        for (j, cand) in self.cands.iter().enumerate() {
            let c = match self.pins.col {
                Some((pj, pc)) if pj == j => {
                    if pc < next_free || !cand.contains(pc) {
                        return None;
                    }
                    pc
                }
                _ => cand.first_at_or_after(next_free)?,
            };
            chain.push(c);
            next_free = c + 1;
        }
        Some(chain)
    }

    fn feasible_columns(&self) -> bool {
        self.column_chain().is_some()
    }

    /// Backtracking over host rows for pattern rows `i..`, with `start` the
    /// smallest admissible host row.
    fn assign_rows(&mut self, i: usize, start: usize) -> Option<Embedding> {
        let (l, m) = (self.p.rows(), self.a.rows());
        if i == l {
            let col_map = self.column_chain()?;
            return Some(Embedding {
                row_map: self.row_map.clone(),
                col_map,
            });
        }
        // Leave room for the remaining pattern rows.
        let mut last = m - (l - i);
        let mut first = start;
        match self.pins.row {
            Some((pi, pr)) if pi == i => {
                first = first.max(pr);
                last = last.min(pr);
            }
            Some((pi, pr)) if i < pi => {
                // Must still reach the pinned row with strict increases.
                last = last.min(pr - (pi - i));
            }
            Some((pi, pr)) if i > pi => {
                first = first.max(pr + (i - pi));
            }
            _ => {}
        }
        for r in first..=last {
            if self.place_row(i, r) {
                if self.feasible_columns() {
                    if let Some(found) = self.assign_rows(i + 1, r + 1) {
                        return Some(found);
                    }
                }
                self.unplace_row();
            }
        }
        None
    }

    /// Intersects the candidate set of every column constrained by pattern
    /// row `i` with host row `r`. Restores state and returns false if a set
    /// became empty.
    fn place_row(&mut self, i: usize, r: usize) -> bool {
        let mut frame = Vec::new();
        for j in self.p.ones_in_row(i) {
            frame.push((j, self.cands[j].clone()));
            self.cands[j].intersect_row(self.a.row_bits(r));
            if self.cands[j].is_empty() {
                for (j, cand) in frame.into_iter().rev() {
                    self.cands[j] = cand;
                }
                return false;
            }
        }
        self.saved.push(frame);
        self.row_map.push(r);
        true
    }

    fn unplace_row(&mut self) {
        self.row_map.pop();
        for (j, cand) in self.saved.pop().unwrap().into_iter().rev() {
            self.cands[j] = cand;
        }
    }
}

/// Reusable buffers for [`contains_pinned_exists_fast`].
pub(crate) struct PinScratch {
    cands: Vec<u64>,
    saved: Vec<u64>,
    /// Ones per pattern row, cached once per search session.
    row_ones: Vec<Vec<usize>>,
}

impl PinScratch {
    pub fn for_pattern(p: &Pattern) -> PinScratch {
        PinScratch {
            cands: vec![0; p.cols()],
            saved: Vec::with_capacity(p.rows() * p.cols()),
            row_ones: (0..p.rows()).map(|i| p.ones_in_row(i)).collect(),
        }
    }
}

/// Existence-only pinned containment for hosts with at most 64 columns,
/// over raw row words: candidate sets are single machine words and nothing
/// is allocated. Mirrors [`contains_pinned`] exactly on its domain.
pub(crate) fn contains_pinned_words_fast(
    host_rows: &[u64],
    cols: usize,
    host_weight: usize,
    p: &Pattern,
    pins: Pins,
    scratch: &mut PinScratch,
) -> bool {
    let (l, k) = (p.rows(), p.cols());
    let (m, n) = (host_rows.len(), cols);
    debug_assert!(n <= 64);
    if l > m || k > n || p.weight() > host_weight {
        return false;
    }
    let (pin_row, pin_col) = (pins.row.expect("row pin"), pins.col.expect("column pin"));
    if pin_row.1 < pin_row.0 || m - pin_row.1 < l - pin_row.0 {
        return false;
    }
    if pin_col.1 < pin_col.0 || n - pin_col.1 < k - pin_col.0 {
        return false;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    scratch.cands[..k].fill(full);
    scratch.saved.clear();
    let mut search = FastSearch {
        host_rows,
        row_ones: &scratch.row_ones,
        cands: &mut scratch.cands,
        saved: &mut scratch.saved,
        pin_row,
        pin_col,
        l,
        m,
    };
    search.chain_ok() && search.rows(0, 0)
}

struct FastSearch<'a> {
    host_rows: &'a [u64],
    row_ones: &'a [Vec<usize>],
    cands: &'a mut [u64],
    saved: &'a mut Vec<u64>,
    pin_row: (usize, usize),
    pin_col: (usize, usize),
    l: usize,
    m: usize,
}

impl FastSearch<'_> {
    fn chain_ok(&self) -> bool {
        let mut lo = 0usize;
        for (j, &mask) in self.cands.iter().enumerate() {
            let avail = if lo >= 64 { 0 } else { mask & (u64::MAX << lo) };
            let c = if j == self.pin_col.0 {
                let pc = self.pin_col.1;
                if pc < lo || mask >> pc & 1 == 0 {
                    return false;
                }
                pc
            } else {
                if avail == 0 {
                    return false;
                }
                avail.trailing_zeros() as usize
            };
            lo = c + 1;
        }
        true
    }

    fn rows(&mut self, i: usize, start: usize) -> bool {
        if i == self.l {
            return true;
        }
        let mut first = start;
        let mut last = self.m - (self.l - i);
        let (pi, pr) = self.pin_row;
        if i == pi {
            first = first.max(pr);
            last = last.min(pr);
        } else if i < pi {
            last = last.min(pr - (pi - i));
        } else {
            first = first.max(pr + (i - pi));
        }
        'rows: for r in first..=last {
            let row = self.host_rows[r];
            let frame_base = self.saved.len();
            for (step, &j) in self.row_ones[i].iter().enumerate() {
                self.saved.push(self.cands[j]);
                self.cands[j] &= row;
                if self.cands[j] == 0 {
                    self.undo(i, frame_base, step + 1);
                    continue 'rows;
                }
            }
            if self.chain_ok() && self.rows(i + 1, r + 1) {
                return true;
            }
            self.undo(i, frame_base, self.row_ones[i].len());
        }
        false
    }

    fn undo(&mut self, i: usize, frame_base: usize, placed: usize) {
        for step in (0..placed).rev() {
            let j = self.row_ones[i][step];
            self.cands[j] = self.saved[frame_base + step];
        }
        self.saved.truncate(frame_base);
    }
}

/// True iff `e` is a genuine witness: strictly increasing in-range maps with
/// every 1-entry of `p` landing on a 1-entry of `a`.
///
/// Implemented by direct inspection so it stays independent of the search.
pub fn verify_embedding(a: &Matrix01, p: &Pattern, e: &Embedding) -> bool {
    if e.row_map.len() != p.rows() || e.col_map.len() != p.cols() {
        return false;
    }
    let increasing_in_range =
        |map: &[usize], limit: usize| map.windows(2).all(|w| w[0] < w[1]) && map.iter().all(|&v| v < limit);
    if !increasing_in_range(&e.row_map, a.rows()) || !increasing_in_range(&e.col_map, a.cols()) {
        return false;
    }
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            if p.get(i, j) && !a.get(e.row_map[i], e.col_map[j]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    /// Exhaustive oracle: tries every row subset and column subset.
    pub(crate) fn oracle_contains(a: &Matrix01, p: &Pattern) -> bool {
        if p.rows() > a.rows() || p.cols() > a.cols() {
            return false;
        }
        for rows in (0..a.rows()).combinations(p.rows()) {
            for cols in (0..a.cols()).combinations(p.cols()) {
                let mut ok = true;
                'cells: for (i, &hr) in rows.iter().enumerate() {
                    for (j, &hc) in cols.iter().enumerate() {
                        if p.get(i, j) && !a.get(hr, hc) {
                            ok = false;
                            break 'cells;
                        }
                    }
                }
                if ok {
                    return true;
                }
            }
        }
        false
    }

    fn q1() -> Pattern {
        Pattern::parse("1010\n1001\n0101").unwrap()
    }

    #[test]
    fn any_pattern_embeds_in_itself_identically() {
        for text in ["1", "10\n01", "1010\n1001\n0101", "11\n11"] {
            let p = Pattern::parse(text).unwrap();
            let a = Matrix01::from(&p);
            let e = contains(&a, &p).expect("self-containment");
            assert_eq!(e, Embedding::identity(p.rows(), p.cols()));
            assert!(verify_embedding(&a, &p, &e));
        }
    }

    #[test]
    fn zero_host_lacks_single_one() {
        let a = Matrix01::parse("00\n00").unwrap();
        let p = Pattern::parse("1").unwrap();
        assert!(contains(&a, &p).is_none());
    }

    #[test]
    fn antidiagonal_does_not_contain_identity() {
        let a = Matrix01::parse("01\n10").unwrap();
        let p = Pattern::parse("10\n01").unwrap();
        assert!(contains(&a, &p).is_none());
        assert!(!oracle_contains(&a, &p));
    }

    #[test]
    fn zero_rows_and_columns_consume_space() {
        // A 3x1 all-zero pattern needs three host rows.
        let p = Pattern::parse("0\n0\n0").unwrap();
        let a2 = Matrix01::parse("0\n0").unwrap();
        let a3 = Matrix01::parse("0\n0\n0").unwrap();
        assert!(contains(&a2, &p).is_none());
        assert!(contains(&a3, &p).is_some());
    }

    #[test]
    fn pinned_search_respects_pins() {
        let a = Matrix01::parse("1010\n1001\n0101").unwrap();
        let p = Pattern::parse("11").unwrap();
        // Last 1-cell of "11" is column 1; pin it to host cell (1, 3).
        let e = contains_pinned(
            &a,
            &p,
            Pins {
                row: Some((0, 1)),
                col: Some((1, 3)),
            },
        )
        .expect("row 1 holds ones at 0 and 3");
        assert_eq!(e.row_map, vec![1]);
        assert_eq!(e.col_map, vec![0, 3]);
        // No embedding puts the second 1 at column 1 of host row 0.
        assert!(contains_pinned(
            &a,
            &p,
            Pins {
                row: Some((0, 0)),
                col: Some((1, 1)),
            },
        )
        .is_none());
    }

    #[test]
    fn agrees_with_oracle_on_small_hosts() {
        // All hosts up to 3x3 against all patterns up to 2x2.
        for (m, n) in (1..=3).cartesian_product(1..=3) {
            for bits in 0..(1u32 << (m * n)) {
                let mut a = Matrix01::zeros(m, n);
                for idx in 0..(m * n) {
                    if bits >> idx & 1 == 1 {
                        a.set(idx / n, idx % n, true);
                    }
                }
                for (l, k) in (1..=2).cartesian_product(1..=2) {
                    for pbits in 0..(1u32 << (l * k)) {
                        let mut ones = Vec::new();
                        for idx in 0..(l * k) {
                            if pbits >> idx & 1 == 1 {
                                ones.push((idx / k, idx % k));
                            }
                        }
                        let p = Pattern::from_cells(l, k, &ones);
                        let found = contains(&a, &p);
                        assert_eq!(
                            found.is_some(),
                            oracle_contains(&a, &p),
                            "host\n{a}\npattern\n{p}"
                        );
                        if let Some(e) = found {
                            assert!(verify_embedding(&a, &p, &e));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn q1_occurrences() {
        let q1 = q1();
        // Build a host hiding Q1 inside noise rows/columns.
        let a = Matrix01::parse("000000\n101000\n100100\n000000\n010100\n111111").unwrap();
        let e = contains(&a, &q1).expect("Q1 present");
        assert!(verify_embedding(&a, &q1, &e));
    }

    #[test]
    fn fast_pinned_search_matches_general_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..4000 {
            let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=6));
            let (l, k) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let mut a = Matrix01::zeros(m, n);
            for r in 0..m {
                for c in 0..n {
                    if rng.gen_bool(0.45) {
                        a.set(r, c, true);
                    }
                }
            }
            let mut ones = Vec::new();
            for i in 0..l {
                for j in 0..k {
                    if rng.gen_bool(0.5) {
                        ones.push((i, j));
                    }
                }
            }
            if ones.is_empty() {
                continue;
            }
            let p = Pattern::from_cells(l, k, &ones);
            let pins = Pins {
                row: Some((rng.gen_range(0..l), rng.gen_range(0..m))),
                col: Some((rng.gen_range(0..k), rng.gen_range(0..n))),
            };
            let mut scratch = PinScratch::for_pattern(&p);
            let words: Vec<u64> = (0..a.rows()).map(|r| a.row_bits(r)[0]).collect();
            let fast =
                contains_pinned_words_fast(&words, a.cols(), a.weight(), &p, pins, &mut scratch);
            let general = contains_pinned(&a, &p, pins).is_some();
            assert_eq!(fast, general, "host\n{a}\npattern\n{p}\npins {pins:?}");
        }
    }

    #[test]
    fn rejects_corrupted_witnesses() {
        let q1 = q1();
        let a = Matrix01::from(&q1);
        let good = contains(&a, &q1).unwrap();
        assert!(verify_embedding(&a, &q1, &good));

        let mut non_increasing = good.clone();
        non_increasing.row_map.swap(0, 1);
        assert!(!verify_embedding(&a, &q1, &non_increasing));

        let mut out_of_range = good.clone();
        *out_of_range.col_map.last_mut().unwrap() = a.cols();
        assert!(!verify_embedding(&a, &q1, &out_of_range));

        let mut wrong_len = good;
        wrong_len.row_map.pop();
        assert!(!verify_embedding(&a, &q1, &wrong_len));
    }
}

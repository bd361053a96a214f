//! Row-major bit grid used as the backing store for patterns and host matrices.

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct BitGrid {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitGrid {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "grid dimensions must be positive");
        let words_per_row = cols.div_ceil(WORD_BITS);
        BitGrid {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let w = r * self.words_per_row + c / WORD_BITS;
        self.data[w] >> (c % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = r * self.words_per_row + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            self.data[w] |= mask;
        } else {
            self.data[w] &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub fn weight(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of 1-entries of row `r` within the half-open column range.
    pub fn row_weight_in(&self, r: usize, cols: std::ops::Range<usize>) -> usize {
        debug_assert!(cols.end <= self.cols);
        let row = self.row(r);
        let mut total = 0usize;
        let mut c = cols.start;
        while c < cols.end {
            let w = c / WORD_BITS;
            let bit = c % WORD_BITS;
            let span = (WORD_BITS - bit).min(cols.end - c);
            let mask = if span == WORD_BITS {
                u64::MAX
            } else {
                ((1u64 << span) - 1) << bit
            };
            total += (row[w] & mask).count_ones() as usize;
            c += span;
        }
        total
    }

    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    pub fn transpose(&self) -> BitGrid {
        let mut out = BitGrid::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.ones_in_row(r) {
                out.set(c, r, true);
            }
        }
        out
    }

    /// Submatrix induced by strictly increasing row and column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BitGrid {
        let mut out = BitGrid::zeros(rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(ri, ci, true);
                }
            }
        }
        out
    }

    pub fn ones_in_row(&self, r: usize) -> OnesIter<'_> {
        OnesIter {
            words: self.row(r),
            cols: self.cols,
            word_idx: 0,
            current: self.row(r)[0],
        }
    }
}

pub(crate) struct OnesIter<'a> {
    words: &'a [u64],
    cols: usize,
    word_idx: usize,
    current: u64,
}

impl Iterator for OnesIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                let c = self.word_idx * WORD_BITS + bit;
                return (c < self.cols).then_some(c);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

/// Mutable set of candidate columns, stored as machine words.
#[derive(Clone, Debug)]
pub(crate) struct ColSet {
    words: Vec<u64>,
    cols: usize,
}

impl ColSet {
    /// All columns of width `cols`.
    pub fn full(cols: usize) -> Self {
        let n_words = cols.div_ceil(WORD_BITS);
        let mut words = vec![u64::MAX; n_words];
        let rem = cols % WORD_BITS;
        if rem != 0 {
            words[n_words - 1] = (1u64 << rem) - 1;
        }
        ColSet { words, cols }
    }

    /// Columns of the half-open range `lo..hi` only.
    pub fn range(cols: usize, lo: usize, hi: usize) -> Self {
        let mut set = ColSet {
            words: vec![0; cols.div_ceil(WORD_BITS)],
            cols,
        };
        for c in lo..hi {
            set.words[c / WORD_BITS] |= 1u64 << (c % WORD_BITS);
        }
        set
    }

    pub fn singleton(cols: usize, c: usize) -> Self {
        let mut set = ColSet {
            words: vec![0; cols.div_ceil(WORD_BITS)],
            cols,
        };
        set.words[c / WORD_BITS] |= 1u64 << (c % WORD_BITS);
        set
    }

    pub fn intersect_row(&mut self, row: &[u64]) {
        for (w, r) in self.words.iter_mut().zip(row) {
            *w &= r;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, c: usize) -> bool {
        c < self.cols && self.words[c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    /// Smallest member that is `>= from`, if any.
    pub fn first_at_or_after(&self, from: usize) -> Option<usize> {
        if from >= self.cols {
            return None;
        }
        let mut wi = from / WORD_BITS;
        let mut word = self.words[wi] & (u64::MAX << (from % WORD_BITS));
        loop {
            if word != 0 {
                let c = wi * WORD_BITS + word.trailing_zeros() as usize;
                return (c < self.cols).then_some(c);
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            word = self.words[wi];
        }
    }
}

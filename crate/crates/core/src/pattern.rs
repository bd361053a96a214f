//! Core 0-1 matrix types: the forbidden pattern `P`, the host matrix `A`,
//! and order-preserving embedding witnesses.
//!
//! Both matrix types parse from and print to the same text format: one line
//! per row over the characters `0` and `1`. Whitespace inside a line is
//! ignored and blank lines are skipped, so hand-written fixtures can be
//! padded for readability.

use std::fmt;

use crate::bits::BitGrid;
use crate::error::{Error, Result};

/// A small dense 0-1 matrix: the forbidden configuration.
///
/// Weight 0 is allowed here; operations that are undefined for weight-0
/// patterns (the extremal searches) reject it explicitly.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Pattern {
    grid: BitGrid,
    weight: usize,
}

/// A host 0-1 matrix with bitset rows.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix01 {
    grid: BitGrid,
    weight: usize,
}

fn parse_grid(text: &str) -> Result<BitGrid> {
    let mut rows: Vec<(usize, Vec<bool>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let cells: Vec<bool> = raw
            .chars()
            .filter(|ch| !ch.is_whitespace())
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    line,
                    msg: format!("illegal character {other:?}, expected '0' or '1'"),
                }),
            })
            .collect::<Result<_>>()?;
        if cells.is_empty() {
            continue;
        }
        if let Some((_, first)) = rows.first() {
            if cells.len() != first.len() {
                return Err(Error::Parse {
                    line,
                    msg: format!(
                        "ragged row: expected {} columns, found {}",
                        first.len(),
                        cells.len()
                    ),
                });
            }
        }
        rows.push((line, cells));
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        });
    }
    let mut grid = BitGrid::zeros(rows.len(), rows[0].1.len());
    for (r, (_, cells)) in rows.iter().enumerate() {
        for (c, &bit) in cells.iter().enumerate() {
            if bit {
                grid.set(r, c, true);
            }
        }
    }
    Ok(grid)
}

fn grid_to_string(grid: &BitGrid) -> String {
    let mut out = String::with_capacity(grid.rows() * (grid.cols() + 1));
    for r in 0..grid.rows() {
        if r > 0 {
            out.push('\n');
        }
        for c in 0..grid.cols() {
            out.push(if grid.get(r, c) { '1' } else { '0' });
        }
    }
    out
}

fn check_index_set(indices: &[usize], limit: usize, what: &str) -> Result<()> {
    if indices.is_empty() {
        return Err(Error::IndexOutOfRange(format!("empty {what} index set")));
    }
    for (pos, &i) in indices.iter().enumerate() {
        if i >= limit {
            return Err(Error::IndexOutOfRange(format!(
                "{what} index {i} out of range 0..{limit}"
            )));
        }
        if pos > 0 && indices[pos - 1] >= i {
            return Err(Error::IndexOutOfRange(format!(
                "{what} indices must be strictly increasing"
            )));
        }
    }
    Ok(())
}

impl Pattern {
    /// Parses the line-per-row text format.
    pub fn parse(text: &str) -> Result<Pattern> {
        let grid = parse_grid(text)?;
        let weight = grid.weight();
        Ok(Pattern { grid, weight })
    }

    pub fn from_cells(rows: usize, cols: usize, ones: &[(usize, usize)]) -> Pattern {
        let mut grid = BitGrid::zeros(rows, cols);
        for &(r, c) in ones {
            grid.set(r, c, true);
        }
        let weight = grid.weight();
        Pattern { grid, weight }
    }

    pub fn rows(&self) -> usize {
        self.grid.rows()
    }

    pub fn cols(&self) -> usize {
        self.grid.cols()
    }

    /// Number of 1-entries.
    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.grid.get(r, c)
    }

    pub fn transpose(&self) -> Pattern {
        Pattern {
            grid: self.grid.transpose(),
            weight: self.weight,
        }
    }

    /// Submatrix induced by strictly increasing row/column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Pattern> {
        check_index_set(rows, self.rows(), "row")?;
        check_index_set(cols, self.cols(), "column")?;
        let grid = self.grid.submatrix(rows, cols);
        let weight = grid.weight();
        Ok(Pattern { grid, weight })
    }

    /// The rows `lo..hi` with all columns kept, as a standalone pattern.
    pub fn row_band(&self, lo: usize, hi: usize) -> Pattern {
        let rows: Vec<usize> = (lo..hi).collect();
        let cols: Vec<usize> = (0..self.cols()).collect();
        self.submatrix(&rows, &cols)
            .expect("row band within bounds")
    }

    /// Columns of row `r` that hold a 1-entry, ascending.
    pub fn ones_in_row(&self, r: usize) -> Vec<usize> {
        self.grid.ones_in_row(r).collect()
    }

    pub fn row_bits(&self, r: usize) -> &[u64] {
        self.grid.row(r)
    }

    /// Reorders rows: row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Pattern> {
        if perm.len() != self.rows() {
            return Err(Error::DimensionMismatch(format!(
                "permutation length {} != row count {}",
                perm.len(),
                self.rows()
            )));
        }
        let mut seen = vec![false; self.rows()];
        let mut grid = BitGrid::zeros(self.rows(), self.cols());
        for (i, &src) in perm.iter().enumerate() {
            if src >= self.rows() || seen[src] {
                return Err(Error::IndexOutOfRange(format!(
                    "invalid row permutation entry {src}"
                )));
            }
            seen[src] = true;
            for c in 0..self.cols() {
                if self.get(src, c) {
                    grid.set(i, c, true);
                }
            }
        }
        Ok(Pattern {
            weight: grid.weight(),
            grid,
        })
    }
}

impl Matrix01 {
    pub fn parse(text: &str) -> Result<Matrix01> {
        let grid = parse_grid(text)?;
        let weight = grid.weight();
        Ok(Matrix01 { grid, weight })
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix01 {
        Matrix01 {
            grid: BitGrid::zeros(rows, cols),
            weight: 0,
        }
    }

    pub fn from_cells(rows: usize, cols: usize, ones: &[(usize, usize)]) -> Matrix01 {
        let mut grid = BitGrid::zeros(rows, cols);
        for &(r, c) in ones {
            grid.set(r, c, true);
        }
        let weight = grid.weight();
        Matrix01 { grid, weight }
    }

    pub fn rows(&self) -> usize {
        self.grid.rows()
    }

    pub fn cols(&self) -> usize {
        self.grid.cols()
    }

    /// Number of 1-entries.
    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.grid.get(r, c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let old = self.grid.get(r, c);
        if old != value {
            self.grid.set(r, c, value);
            if value {
                self.weight += 1;
            } else {
                self.weight -= 1;
            }
        }
    }

    pub fn transpose(&self) -> Matrix01 {
        Matrix01 {
            grid: self.grid.transpose(),
            weight: self.weight,
        }
    }

    /// Submatrix induced by strictly increasing row/column index sets;
    /// relative order is preserved.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Matrix01> {
        check_index_set(rows, self.rows(), "row")?;
        check_index_set(cols, self.cols(), "column")?;
        let grid = self.grid.submatrix(rows, cols);
        let weight = grid.weight();
        Ok(Matrix01 { grid, weight })
    }

    pub fn row_bits(&self, r: usize) -> &[u64] {
        self.grid.row(r)
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.grid.row_weight(r)
    }

    pub fn row_weight_in(&self, r: usize, cols: std::ops::Range<usize>) -> usize {
        self.grid.row_weight_in(r, cols)
    }

    pub fn col_weight(&self, c: usize) -> usize {
        self.grid.col_weight(c)
    }

    pub fn ones_in_row(&self, r: usize) -> Vec<usize> {
        self.grid.ones_in_row(r).collect()
    }

    /// Weight of the submatrix induced by the given index sets, without
    /// materializing it.
    pub fn weight_of(&self, rows: &[usize], cols: &[usize]) -> usize {
        let mut total = 0;
        for &r in rows {
            for &c in cols {
                if self.get(r, c) {
                    total += 1;
                }
            }
        }
        total
    }
}

impl From<&Pattern> for Matrix01 {
    fn from(p: &Pattern) -> Matrix01 {
        Matrix01 {
            grid: p.grid.clone(),
            weight: p.weight,
        }
    }
}

impl From<&Matrix01> for Pattern {
    fn from(a: &Matrix01) -> Pattern {
        Pattern {
            grid: a.grid.clone(),
            weight: a.weight,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&grid_to_string(&self.grid))
    }
}

impl fmt::Display for Matrix01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&grid_to_string(&self.grid))
    }
}

/// Witness that a pattern occurs in a host matrix: strictly increasing row
/// and column maps sending every 1 of the pattern onto a 1 of the host.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Embedding {
    pub row_map: Vec<usize>,
    pub col_map: Vec<usize>,
}

impl Embedding {
    pub fn identity(rows: usize, cols: usize) -> Embedding {
        Embedding {
            row_map: (0..rows).collect(),
            col_map: (0..cols).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_identity_pattern() {
        let p = Pattern::parse("10\n01").unwrap();
        assert_eq!((p.rows(), p.cols(), p.weight()), (2, 2, 2));
        assert!(p.get(0, 0) && p.get(1, 1));
        assert!(!p.get(0, 1) && !p.get(1, 0));
    }

    #[test]
    fn parses_q1_display() {
        let q1 = Pattern::parse("1010\n1001\n0101").unwrap();
        assert_eq!(q1.weight(), 6);
        assert_eq!(q1.ones_in_row(0), vec![0, 2]);
        assert_eq!(q1.ones_in_row(1), vec![0, 3]);
        assert_eq!(q1.ones_in_row(2), vec![1, 3]);
    }

    #[test]
    fn empty_input_is_a_parse_error() {
        assert!(matches!(
            Pattern::parse(""),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(Pattern::parse("  \n \n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn ragged_and_illegal_inputs_name_the_line() {
        match Pattern::parse("101\n10") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match Pattern::parse("101\n1x1") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn whitespace_is_tolerated() {
        let a = Pattern::parse("1 0 1\n0 1 0").unwrap();
        let b = Pattern::parse("101\n010").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn weight_examples() {
        assert_eq!(Matrix01::parse("000\n000\n000").unwrap().weight(), 0);
        assert_eq!(Pattern::parse("11\n11").unwrap().weight(), 4);
    }

    #[test]
    fn transpose_examples() {
        let row = Pattern::parse("111").unwrap();
        let col = row.transpose();
        assert_eq!((col.rows(), col.cols()), (3, 1));

        let q2 = Pattern::parse("0101\n1010\n1001").unwrap();
        assert_eq!(q2.transpose().transpose(), q2);

        let q1 = Pattern::parse("1010\n1001\n0101").unwrap();
        let t = q1.transpose();
        assert_eq!((t.rows(), t.cols()), (4, 3));
        for r in 0..3 {
            for c in 0..4 {
                assert_eq!(q1.get(r, c), t.get(c, r));
            }
        }
    }

    #[test]
    fn submatrix_examples() {
        let q1 = Matrix01::parse("1010\n1001\n0101").unwrap();
        let full = q1.submatrix(&[0, 1, 2], &[0, 1, 2, 3]).unwrap();
        assert_eq!(full, q1);

        // Single cell (row 2, col 3 in 1-based terms) of Q1 is a 0.
        let cell = q1.submatrix(&[1], &[2]).unwrap();
        assert_eq!(cell.weight(), 0);

        // Rows {1,2}, columns {1,4} (1-based) give [[1,0],[1,1]].
        let sub = q1.submatrix(&[0, 1], &[0, 3]).unwrap();
        assert_eq!(sub.to_string(), "10\n11");
    }

    #[test]
    fn submatrix_rejects_bad_indices() {
        let a = Matrix01::parse("10\n01").unwrap();
        assert!(a.submatrix(&[0, 2], &[0]).is_err());
        assert!(a.submatrix(&[], &[0]).is_err());
        assert!(a.submatrix(&[1, 0], &[0]).is_err());
    }

    #[test]
    fn display_round_trips() {
        let text = "1010\n1001\n0101";
        let p = Pattern::parse(text).unwrap();
        assert_eq!(p.to_string(), text);
        assert_eq!(Pattern::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn permute_rows_reorders() {
        let p = Pattern::parse("10\n01").unwrap();
        let swapped = p.permute_rows(&[1, 0]).unwrap();
        assert_eq!(swapped.to_string(), "01\n10");
        assert!(p.permute_rows(&[0, 0]).is_err());
    }
}

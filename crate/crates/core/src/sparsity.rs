//! The sub-polynomial sparsity bound `h(n) = d * 2^(b * log2(n)^c)` and the
//! square-submatrix density certificates that witness its violation.

use crate::error::{Error, Result};
use crate::pattern::Matrix01;

/// Relative tolerance for comparisons of integer weights against real-valued
/// `h` thresholds. A certificate is only claimed when the recounted weight
/// clears the threshold by this margin, so float rounding can suppress a
/// borderline certificate but never produce an invalid one.
pub const REL_EPS: f64 = 1e-9;

/// True iff `value` exceeds `threshold` beyond the relative tolerance.
pub fn exceeds(value: f64, threshold: f64) -> bool {
    value > threshold * (1.0 + REL_EPS)
}

/// Parameters of the bound `h(n) = d * 2^(b * log2(n)^c)` with `b, d > 0`
/// and `0 < c < 1`. In this regime `h` is strictly increasing on `n >= 2`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SparsityBound {
    b: f64,
    c: f64,
    d: f64,
}

impl SparsityBound {
    pub fn new(b: f64, c: f64, d: f64) -> Result<SparsityBound> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::Domain(format!("b must be positive, got {b}")));
        }
        if !(c.is_finite() && 0.0 < c && c < 1.0) {
            return Err(Error::Domain(format!("c must lie in (0,1), got {c}")));
        }
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::Domain(format!("d must be positive, got {d}")));
        }
        Ok(SparsityBound { b, c, d })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Evaluates `h(n)`; defined for `n >= 2`.
    pub fn h(&self, n: usize) -> Result<f64> {
        if n < 2 {
            return Err(Error::Domain(format!("h(n) requires n >= 2, got {n}")));
        }
        let log = (n as f64).log2();
        Ok(self.d * (self.b * log.powf(self.c)).exp2())
    }

    /// The exponent `x(n) = b * c * log2(n)^(c-1)` governing how fast the
    /// ratio `h(n)/h(m)` outgrows `(n/m)^x`.
    pub fn x(&self, n: usize) -> Result<f64> {
        if n < 2 {
            return Err(Error::Domain(format!("x(n) requires n >= 2, got {n}")));
        }
        let log = (n as f64).log2();
        Ok(self.b * self.c * log.powf(self.c - 1.0))
    }
}

/// An `n' x n'` submatrix whose weight exceeds `n' * h(n')`: the witness
/// that a matrix is not `h`-sparse.
#[derive(Clone, PartialEq, Debug)]
pub struct DenseCertificate {
    /// Host row indices, strictly increasing.
    pub rows: Vec<usize>,
    /// Host column indices, strictly increasing.
    pub cols: Vec<usize>,
    /// Weight of the induced submatrix.
    pub weight: usize,
    pub bound: SparsityBound,
}

impl DenseCertificate {
    /// Builds a certificate if the induced square submatrix genuinely
    /// violates the bound; returns `None` when it does not.
    pub fn try_new(
        a: &Matrix01,
        rows: Vec<usize>,
        cols: Vec<usize>,
        bound: SparsityBound,
    ) -> Result<Option<DenseCertificate>> {
        if rows.len() != cols.len() {
            return Err(Error::DimensionMismatch(format!(
                "certificate must be square, got {} x {}",
                rows.len(),
                cols.len()
            )));
        }
        let weight = a.weight_of(&rows, &cols);
        let threshold = rows.len() as f64 * bound.h(rows.len())?;
        if exceeds(weight as f64, threshold) {
            Ok(Some(DenseCertificate {
                rows,
                cols,
                weight,
                bound,
            }))
        } else {
            Ok(None)
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn threshold(&self) -> Result<f64> {
        Ok(self.size() as f64 * self.bound.h(self.size())?)
    }

    /// Recounts the submatrix weight in `a` and rechecks the violation.
    pub fn verify(&self, a: &Matrix01) -> bool {
        if self.rows.len() != self.cols.len() || self.rows.is_empty() {
            return false;
        }
        let in_range = |idx: &[usize], limit: usize| {
            idx.windows(2).all(|w| w[0] < w[1]) && idx.iter().all(|&v| v < limit)
        };
        if !in_range(&self.rows, a.rows()) || !in_range(&self.cols, a.cols()) {
            return false;
        }
        let recount = a.weight_of(&self.rows, &self.cols);
        if recount != self.weight {
            return false;
        }
        match self.threshold() {
            Ok(t) => exceeds(recount as f64, t),
            Err(_) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_matches_hand_computed_values() {
        let b = SparsityBound::new(1.0, 0.5, 1.0).unwrap();
        assert!((b.h(16).unwrap() - 4.0).abs() < 1e-12);

        let scaled = SparsityBound::new(1.0, 0.5, 3.0).unwrap();
        assert!((scaled.h(16).unwrap() - 12.0).abs() < 1e-12);

        // 2^(2*sqrt(8)) evaluated independently.
        let wide = SparsityBound::new(2.0, 0.5, 1.0).unwrap();
        let expected = 2f64.powf(2.0 * 8f64.sqrt());
        assert!((wide.h(256).unwrap() - expected).abs() / expected < 1e-9);
        assert!((wide.h(256).unwrap() - 50.4531).abs() < 1e-3);
    }

    #[test]
    fn h_rejects_small_arguments_and_bad_parameters() {
        let b = SparsityBound::new(1.0, 0.5, 1.0).unwrap();
        assert!(b.h(1).is_err());
        assert!(b.h(0).is_err());
        assert!(SparsityBound::new(0.0, 0.5, 1.0).is_err());
        assert!(SparsityBound::new(1.0, 1.0, 1.0).is_err());
        assert!(SparsityBound::new(1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn h_is_increasing() {
        let b = SparsityBound::new(2.5, 0.7, 0.3).unwrap();
        let mut prev = b.h(2).unwrap();
        for n in 3..2000 {
            let cur = b.h(n).unwrap();
            assert!(cur > prev, "h not increasing at {n}");
            prev = cur;
        }
    }

    #[test]
    fn certificate_recount_detects_tampering() {
        let a = Matrix01::parse("1111\n1111\n1111\n1111").unwrap();
        let bound = SparsityBound::new(0.5, 0.5, 0.5).unwrap();
        let cert = DenseCertificate::try_new(&a, vec![0, 1, 2, 3], vec![0, 1, 2, 3], bound)
            .unwrap()
            .expect("all-ones violates a small bound");
        assert_eq!(cert.weight, 16);
        assert!(cert.verify(&a));

        let mut wrong_weight = cert.clone();
        wrong_weight.weight = 15;
        assert!(!wrong_weight.verify(&a));

        let mut out_of_range = cert.clone();
        out_of_range.cols[3] = 4;
        assert!(!out_of_range.verify(&a));

        // A sparse region does not yield a certificate.
        let identity = Matrix01::parse("1000\n0100\n0010\n0001").unwrap();
        let none = DenseCertificate::try_new(
            &identity,
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 3],
            SparsityBound::new(1.0, 0.5, 1.0).unwrap(),
        )
        .unwrap();
        assert!(none.is_none());
    }
}

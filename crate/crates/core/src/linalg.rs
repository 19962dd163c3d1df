//! Least squares with heteroskedasticity-robust (sandwich) covariance.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("design matrix is rank deficient ({rows} rows, {cols} columns)")]
    RankDeficient { rows: usize, cols: usize },
    #[error("need more rows than columns: {rows} rows, {cols} columns")]
    TooFewRows { rows: usize, cols: usize },
}

/// Relative eigenvalue floor below which `X'X` is treated as singular.
const RANK_TOLERANCE: f64 = 1e-10;

/// Intercept column followed by `columns`.
pub fn design_with_intercept(columns: &[Vec<f64>], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, columns.len() + 1, |i, j| {
        if j == 0 {
            1.0
        } else {
            columns[j - 1][i]
        }
    })
}

#[derive(Debug, Clone)]
pub struct OlsFit {
    pub coef: DVector<f64>,
    /// `(X'X)^{-1}`
    pub bread: DMatrix<f64>,
    pub residuals: DVector<f64>,
}

pub fn ols(x: &DMatrix<f64>, y: &[f64]) -> Result<OlsFit, LinalgError> {
    let (rows, cols) = x.shape();
    if rows <= cols {
        return Err(LinalgError::TooFewRows { rows, cols });
    }
    let y = DVector::from_column_slice(y);
    let xtx = x.tr_mul(x);
    let eig = xtx.clone().symmetric_eigen();
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    if !(max > 0.0) || min <= RANK_TOLERANCE * max {
        return Err(LinalgError::RankDeficient { rows, cols });
    }
    let chol = xtx
        .cholesky()
        .ok_or(LinalgError::RankDeficient { rows, cols })?;
    let coef = chol.solve(&x.tr_mul(&y));
    let bread = chol.inverse();
    let residuals = &y - x * &coef;
    Ok(OlsFit {
        coef,
        bread,
        residuals,
    })
}

impl OlsFit {
    /// Per-row coefficient influence, row `i` = `(X'X)^{-1} x_i e_i`. The
    /// coefficient error is approximately the column sum of this matrix.
    pub fn influence(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut scaled = x.clone();
        for (mut row, e) in scaled.row_iter_mut().zip(self.residuals.iter()) {
            row *= *e;
        }
        scaled * &self.bread
    }

    /// HC1 sandwich covariance `n/(n-p) (X'X)^{-1} X' diag(e^2) X (X'X)^{-1}`.
    pub fn hc1_covariance(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let inf = self.influence(x);
        let (n, p) = x.shape();
        inf.tr_mul(&inf) * (n as f64 / (n - p) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_line_is_recovered() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = xs.iter().map(|x| 1.5 + 2.0 * x).collect();
        let x = design_with_intercept(&[xs], 10);
        let fit = ols(&x, &y).unwrap();
        assert_relative_eq!(fit.coef[0], 1.5, epsilon = 1e-12);
        assert_relative_eq!(fit.coef[1], 2.0, epsilon = 1e-12);
        assert!(fit.residuals.amax() < 1e-12);
    }

    #[test]
    fn duplicate_column_is_rank_deficient() {
        let c: Vec<f64> = (0..10).map(f64::from).collect();
        let x = design_with_intercept(&[c.clone(), c], 10);
        assert!(matches!(
            ols(&x, &[0.0; 10]),
            Err(LinalgError::RankDeficient { .. })
        ));
    }

    #[test]
    fn hc1_matches_hand_computation_for_intercept_only() {
        // Intercept-only OLS: HC1 variance of the mean is sum(e^2)/(n(n-1)).
        let y = [1.0, 2.0, 4.0, 7.0];
        let x = design_with_intercept(&[], 4);
        let fit = ols(&x, &y).unwrap();
        let m = 3.5;
        let ss: f64 = y.iter().map(|v| (v - m) * (v - m)).sum();
        assert_relative_eq!(
            fit.hc1_covariance(&x)[(0, 0)],
            ss / (4.0 * 3.0),
            epsilon = 1e-14
        );
    }
}

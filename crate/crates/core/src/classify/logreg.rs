//! L2-regularized logistic regression fitted by gradient ascent, with Wald
//! standard errors.
//!
//! The objective is the mean Bernoulli log-likelihood minus
//! `(λ/2)·‖w‖²`; the intercept is not penalized.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    Continuous,
    Binary,
    /// Zero variance on the training rows; passed through unchanged.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnScale {
    pub mean: f64,
    pub sd: f64,
    pub kind: ColumnKind,
}

/// Per-column z-scoring fitted on training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub columns: Vec<ColumnScale>,
}

/// Fits a scaler on the rows of `x`. Binary columns and zero-variance
/// columns keep mean 0 and sd 1. Uses the sample (n−1) standard deviation.
pub fn standardize_fit(x: &[Vec<f64>], binary: &[bool]) -> Scaler {
    let n = x.len();
    let columns = binary
        .iter()
        .enumerate()
        .map(|(j, &is_binary)| {
            let identity = |kind| ColumnScale {
                mean: 0.0,
                sd: 1.0,
                kind,
            };
            if is_binary {
                return identity(ColumnKind::Binary);
            }
            let mean = x.iter().map(|r| r[j]).sum::<f64>() / n.max(1) as f64;
            let var = if n > 1 {
                x.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / (n - 1) as f64
            } else {
                0.0
            };
            let sd = var.sqrt();
            if sd > 1e-12 * mean.abs().max(1.0) {
                ColumnScale {
                    mean,
                    sd,
                    kind: ColumnKind::Continuous,
                }
            } else {
                log::warn!("column {j} has zero variance; passed through unscaled");
                identity(ColumnKind::Constant)
            }
        })
        .collect();
    Scaler { columns }
}

impl Scaler {
    pub fn apply_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(&self.columns)
            .map(|(v, c)| (v - c.mean) / c.sd)
            .collect()
    }
}

pub fn standardize_apply(scaler: &Scaler, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
    x.iter().map(|r| scaler.apply_row(r)).collect()
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Optimizer settings. `l2: None` means `1/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogregConfig {
    pub l2: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LogregConfig {
    fn default() -> Self {
        LogregConfig {
            l2: None,
            tol: 1e-8,
            max_iter: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogregFit {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub l2: f64,
    pub objective: f64,
    pub grad_norm: f64,
    pub iterations: usize,
}

fn linear(x: &[f64], b: f64, w: &[f64]) -> f64 {
    b + x.iter().zip(w).map(|(a, c)| a * c).sum::<f64>()
}

/// Regularized mean log-likelihood.
pub fn logreg_objective(x: &[Vec<f64>], y: &[u8], b: f64, w: &[f64], l2: f64) -> f64 {
    let n = x.len() as f64;
    let ll: f64 = x
        .iter()
        .zip(y)
        .map(|(row, &yi)| {
            let z = linear(row, b, w);
            f64::from(yi) * z - softplus(z)
        })
        .sum();
    ll / n - 0.5 * l2 * w.iter().map(|v| v * v).sum::<f64>()
}

/// Gradient of [`logreg_objective`] with respect to `(b, w)`.
pub fn logreg_gradient(x: &[Vec<f64>], y: &[u8], b: f64, w: &[f64], l2: f64) -> (f64, Vec<f64>) {
    let n = x.len() as f64;
    let mut gb = 0.0;
    let mut gw = vec![0.0; w.len()];
    for (row, &yi) in x.iter().zip(y) {
        let r = f64::from(yi) - sigmoid(linear(row, b, w));
        gb += r;
        for (g, v) in gw.iter_mut().zip(row) {
            *g += r * v;
        }
    }
    for (g, wi) in gw.iter_mut().zip(w) {
        *g = *g / n - l2 * wi;
    }
    (gb / n, gw)
}

/// Objective change from `(b, w)` to `(b, w) + t·(db, dw)`, computed from
/// per-row increments so it stays accurate when the change is far below the
/// objective's own rounding error.
#[allow(clippy::too_many_arguments)]
fn objective_change(x: &[Vec<f64>], y: &[u8], z: &[f64], w: &[f64], db: f64, dw: &[f64], t: f64, l2: f64) -> f64 {
    let n = x.len() as f64;
    let mut total = 0.0;
    for ((row, &yi), &zi) in x.iter().zip(y).zip(z) {
        let dz = t * linear(row, db, dw);
        let d_softplus = if dz.abs() < 1.0 {
            (sigmoid(zi) * dz.exp_m1()).ln_1p()
        } else {
            softplus(zi + dz) - softplus(zi)
        };
        total += f64::from(yi) * dz - d_softplus;
    }
    let w_dot: f64 = w.iter().zip(dw).map(|(a, b)| a * b).sum();
    let dw_sq: f64 = dw.iter().map(|v| v * v).sum();
    let change = total / n - 0.5 * l2 * (2.0 * t * w_dot + t * t * dw_sq);
    if change.is_nan() {
        f64::NEG_INFINITY
    } else {
        change
    }
}

/// Maximizes the regularized log-likelihood by full-batch gradient ascent
/// with Armijo backtracking, until the gradient norm is below `config.tol`.
pub fn train_logreg(x: &[Vec<f64>], y: &[u8], config: &LogregConfig) -> Result<LogregFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(Error::Invalid(
            "logistic regression needs at least 2 labeled rows".into(),
        ));
    }
    let d = x[0].len();
    if x.iter().any(|r| r.len() != d || r.iter().any(|v| !v.is_finite())) {
        return Err(Error::Invalid(
            "design matrix rows must have equal width and finite values".into(),
        ));
    }
    if y.iter().any(|&v| v > 1) {
        return Err(Error::Invalid("labels must be 0 or 1".into()));
    }
    let positives = y.iter().filter(|&&v| v == 1).count();
    if positives == 0 || positives == n {
        return Err(Error::Invalid(
            "both classes must be present in the training rows".into(),
        ));
    }
    let l2 = config.l2.unwrap_or(1.0 / n as f64);
    if !(l2 >= 0.0 && l2.is_finite()) {
        return Err(Error::Invalid(format!("l2 must be non-negative, got {l2}")));
    }

    let mut b = 0.0;
    let mut w = vec![0.0; d];
    let mut step = 1.0;
    let mut objective = logreg_objective(x, y, b, &w, l2);
    for iteration in 0.. {
        let (gb, gw) = logreg_gradient(x, y, b, &w, l2);
        let sq = gb * gb + gw.iter().map(|g| g * g).sum::<f64>();
        let grad_norm = sq.sqrt();
        if grad_norm <= config.tol {
            return Ok(LogregFit {
                intercept: b,
                coefficients: w,
                l2,
                objective,
                grad_norm,
                iterations: iteration,
            });
        }
        if iteration >= config.max_iter {
            return Err(Error::NotConverged {
                iterations: iteration,
                grad_norm,
            });
        }
        let z: Vec<f64> = x.iter().map(|r| linear(r, b, &w)).collect();
        let mut t = step;
        let change = loop {
            let change = objective_change(x, y, &z, &w, gb, &gw, t, l2);
            if change >= 1e-4 * t * sq {
                break change;
            }
            t *= 0.5;
            if t < 1e-30 {
                return Err(Error::NotConverged {
                    iterations: iteration,
                    grad_norm,
                });
            }
        };
        assert!(change >= 0.0, "objective decreased at iteration {iteration}");
        b += t * gb;
        for (wi, g) in w.iter_mut().zip(&gw) {
            *wi += t * g;
        }
        objective += change;
        step = (t * 2.0).min(1e6);
    }
    unreachable!()
}

/// Standard errors and two-sided p-values, intercept first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wald {
    pub standard_errors: Vec<f64>,
    pub p_values: Vec<f64>,
}

/// Two-sided standard-normal tail probability of `z`.
pub fn normal_two_sided_p(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

/// Wald inference from the inverse of `XᵀWX + nλ·D`, where `X` carries an
/// intercept column, `W = diag(p̂(1−p̂))` and `D` is the identity with the
/// intercept entry zeroed.
pub fn wald_pvalues(fit: &LogregFit, x: &[Vec<f64>]) -> Result<Wald> {
    let n = x.len();
    let d = fit.coefficients.len() + 1;
    let mut info = DMatrix::<f64>::zeros(d, d);
    let mut row = DVector::<f64>::zeros(d);
    for r in x {
        row[0] = 1.0;
        for (j, v) in r.iter().enumerate() {
            row[j + 1] = *v;
        }
        let p = sigmoid(linear(r, fit.intercept, &fit.coefficients));
        info.ger(p * (1.0 - p), &row, &row, 1.0);
    }
    for j in 1..d {
        info[(j, j)] += n as f64 * fit.l2;
    }
    let cov = info.cholesky().ok_or(Error::SingularInformation)?.inverse();
    let estimates: Vec<f64> = std::iter::once(fit.intercept)
        .chain(fit.coefficients.iter().copied())
        .collect();
    let mut standard_errors = Vec::with_capacity(d);
    let mut p_values = Vec::with_capacity(d);
    for (j, beta) in estimates.iter().enumerate() {
        let var = cov[(j, j)];
        if !(var > 0.0 && var.is_finite()) {
            return Err(Error::SingularInformation);
        }
        let se = var.sqrt();
        standard_errors.push(se);
        p_values.push(normal_two_sided_p(beta / se));
    }
    Ok(Wald {
        standard_errors,
        p_values,
    })
}

/// Table-style p-value: `<0.01`, `<0.05`, or three decimals.
pub fn format_p_value(p: f64) -> String {
    if p < 0.01 {
        "<0.01".to_owned()
    } else if p < 0.05 {
        "<0.05".to_owned()
    } else {
        format!("{p:.3}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn scaler_fixtures() {
        let x = vec![vec![1.0, 0.0, 5.0], vec![2.0, 1.0, 5.0], vec![3.0, 1.0, 5.0]];
        let s = standardize_fit(&x, &[false, true, false]);
        assert_eq!(s.columns[0].mean, 2.0);
        assert_eq!(s.columns[0].sd, 1.0);
        assert_eq!(s.columns[1].kind, ColumnKind::Binary);
        assert_eq!(s.columns[2].kind, ColumnKind::Constant);
        let z = standardize_apply(&s, &x);
        assert_eq!(z, vec![vec![-1.0, 0.0, 5.0], vec![0.0, 1.0, 5.0], vec![1.0, 1.0, 5.0]]);
    }

    #[test]
    fn initial_gradient_is_analytic() {
        let x = vec![vec![1.0, -2.0], vec![0.5, 3.0], vec![-1.0, 0.0]];
        let y = [1, 0, 1];
        let (gb, gw) = logreg_gradient(&x, &y, 0.0, &[0.0, 0.0], 0.7);
        // X^T (y - 0.5) / n; the penalty vanishes at w = 0.
        assert_abs_diff_eq!(gb, 0.5 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gw[0], (0.5 - 0.25 - 0.5) / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gw[1], (-1.0 - 1.5) / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn separable_data_is_fit_exactly() {
        let x = vec![
            vec![-2.0, -1.0],
            vec![-1.0, -2.0],
            vec![-1.5, -0.5],
            vec![1.0, 2.0],
            vec![2.0, 1.0],
            vec![0.5, 1.5],
        ];
        let y = [0, 0, 0, 1, 1, 1];
        let fit = train_logreg(
            &x,
            &y,
            &LogregConfig {
                l2: Some(1e-3),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(fit.grad_norm <= 1e-8);
        for (row, &yi) in x.iter().zip(&y) {
            let p = sigmoid(linear(row, fit.intercept, &fit.coefficients));
            assert_eq!(u8::from(p >= 0.5), yi);
        }
    }

    #[test]
    fn single_class_is_rejected() {
        let x = vec![vec![1.0], vec![2.0]];
        assert!(matches!(
            train_logreg(&x, &[1, 1], &LogregConfig::default()),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn zero_coefficient_has_unit_p_value() {
        let fit = LogregFit {
            intercept: 0.3,
            coefficients: vec![0.0, 1.0],
            l2: 0.01,
            objective: 0.0,
            grad_norm: 0.0,
            iterations: 0,
        };
        let x = vec![vec![1.0, 0.5], vec![-1.0, 0.2], vec![0.3, -0.7], vec![0.1, 0.9]];
        let wald = wald_pvalues(&fit, &x).unwrap();
        assert_eq!(wald.p_values[1], 1.0);
        assert!(wald.p_values.iter().all(|p| (0.0..=1.0).contains(p)));
    }

    #[test]
    fn p_value_labels() {
        assert_eq!(format_p_value(0.001), "<0.01");
        assert_eq!(format_p_value(0.03), "<0.05");
        assert_eq!(format_p_value(0.0841), "0.084");
        // statrs erfc is accurate to about 1e-11 here.
        assert_abs_diff_eq!(normal_two_sided_p(1.959963984540054), 0.05, epsilon = 1e-10);
        assert_abs_diff_eq!(normal_two_sided_p(0.0), 1.0, epsilon = 1e-15);
    }
}

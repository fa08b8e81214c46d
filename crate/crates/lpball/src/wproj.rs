//! Exact projections used by the boundary step and the baselines.
//!
//! The boundary subproblem keeps the zero pattern and the signs of the
//! current iterate and replaces the lp constraint by its linearization, a
//! weighted l1 ball. In the sign-aligned variables `y_i = sgn(x_i) x_i` that
//! is a projection onto `{y >= 0, w^T y <= c}`, solved exactly by a sorted
//! breakpoint scan.

use std::cmp::Ordering;

use ndarray::{Array1, ArrayView1};

use crate::ball::{lp_norm_p, LpBall};
use crate::{Error, Result};

/// Solution of the boundary subproblem at `x_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub x_next: Array1<f64>,
    /// Multiplier of the weighted-l1 constraint in the projection problem.
    pub lambda: f64,
    /// Multiplier of the lp constraint, `lambda / beta`.
    pub xi: f64,
    /// `P(x_k; x_k) - P(x_next; x_k)`.
    pub decrease: f64,
}

/// Euclidean projection of `v` onto `{y : y >= 0, w^T y <= c}`.
///
/// Returns `(y, lambda)` with `y_i = max(v_i - lambda w_i, 0)`; `lambda = 0`
/// when the clipped `v` already fits the budget, otherwise it is the root of
/// `sum_i w_i max(v_i - lambda w_i, 0) = c`, found by scanning the
/// breakpoints `v_i / w_i` in decreasing order.
pub fn weighted_nonneg_l1_project(
    v: ArrayView1<f64>,
    w: ArrayView1<f64>,
    c: f64,
) -> Result<(Array1<f64>, f64)> {
    if v.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            got: w.len(),
        });
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "budget must be nonnegative, got {c}"
        )));
    }
    if let Some(bad) = w.iter().find(|wi| !(**wi > 0.0 && wi.is_finite())) {
        return Err(Error::InvalidInput(format!(
            "weights must be positive, got {bad}"
        )));
    }

    let used: f64 = v
        .iter()
        .zip(w.iter())
        .map(|(vi, wi)| wi * vi.max(0.0))
        .sum();
    if used <= c {
        return Ok((v.mapv(|vi| vi.max(0.0)), 0.0));
    }

    let mut order: Vec<usize> = (0..v.len()).filter(|&i| v[i] > 0.0).collect();
    let ratio = |i: usize| v[i] / w[i];
    order.sort_unstable_by(|&a, &b| ratio(b).partial_cmp(&ratio(a)).unwrap_or(Ordering::Equal));

    let mut sum_wv = 0.0;
    let mut sum_ww = 0.0;
    let mut lambda = 0.0;
    for (k, &i) in order.iter().enumerate() {
        sum_wv += w[i] * v[i];
        sum_ww += w[i] * w[i];
        lambda = (sum_wv - c) / sum_ww;
        let next = order.get(k + 1).map_or(0.0, |&j| ratio(j));
        if lambda >= next {
            break;
        }
    }
    let lambda = lambda.max(0.0);
    let y = ndarray::Zip::from(&v)
        .and(&w)
        .map_collect(|vi, wi| (vi - lambda * wi).max(0.0));
    Ok((y, lambda))
}

/// Solves the boundary subproblem
///
/// ```text
/// min (1 / 2 beta) ||x - (x_k - beta grad)||^2
/// s.t. sum_{i in I} sgn(x_k,i) w_i (x_i - x_k,i) <= 0,  x_i = 0 off I,
///      sgn(x_k,i) x_i >= 0 on I
/// ```
///
/// with `I` the support of `x_k` (entries above `zero_tol`) and
/// `w_i = p |x_k,i|^(p-1)`. The budget `sum_I w_i |x_k,i|` is evaluated as
/// `p sum_I |x_k,i|^p`, which is `p gamma` on the boundary. It is taken at
/// `x_k` rather than at `gamma` so that `x_k` is always feasible for the
/// subproblem, including points that sit within the boundary tolerance on
/// either side.
pub fn solve_p2(
    x_k: ArrayView1<f64>,
    grad: ArrayView1<f64>,
    ball: &LpBall,
    beta: f64,
    zero_tol: f64,
) -> Result<ProjectionResult> {
    if x_k.len() != grad.len() {
        return Err(Error::DimensionMismatch {
            expected: x_k.len(),
            got: grad.len(),
        });
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidInput(format!(
            "beta must be positive, got {beta}"
        )));
    }
    let support: Vec<usize> = (0..x_k.len())
        .filter(|&i| x_k[i].abs() > zero_tol)
        .collect();
    if support.is_empty() {
        return Err(Error::DegenerateBoundary);
    }
    let p = ball.p();
    let v: Array1<f64> = support
        .iter()
        .map(|&i| x_k[i].abs() - beta * x_k[i].signum() * grad[i])
        .collect();
    let w: Array1<f64> = support
        .iter()
        .map(|&i| p * x_k[i].abs().powf(p - 1.0))
        .collect();
    let on_support: Array1<f64> = support.iter().map(|&i| x_k[i]).collect();
    let budget = p * lp_norm_p(on_support.view(), p);
    let (y, lambda) = weighted_nonneg_l1_project(v.view(), w.view(), budget)?;

    let mut x_next = Array1::zeros(x_k.len());
    for (yi, &i) in y.iter().zip(&support) {
        x_next[i] = x_k[i].signum() * yi;
    }
    let delta = &x_next - &x_k;
    let decrease = -grad.dot(&delta) - delta.dot(&delta) / (2.0 * beta);
    Ok(ProjectionResult {
        x_next,
        lambda,
        xi: lambda / beta,
        decrease,
    })
}

/// Euclidean projection onto `{x : ||x||_1 <= radius}`.
pub fn l1_ball_project(v: ArrayView1<f64>, radius: f64) -> Result<Array1<f64>> {
    if !(radius > 0.0) {
        return Err(Error::InvalidInput(format!(
            "radius must be positive, got {radius}"
        )));
    }
    if v.iter().map(|x| x.abs()).sum::<f64>() <= radius {
        return Ok(v.to_owned());
    }
    let mag = v.mapv(f64::abs);
    let ones = Array1::ones(v.len());
    let (y, _) = weighted_nonneg_l1_project(mag.view(), ones.view(), radius)?;
    Ok(ndarray::Zip::from(&y)
        .and(&v)
        .map_collect(|yi, vi| yi * vi.signum()))
}

/// Keeps the `s` entries of largest magnitude (smaller index wins ties) and
/// zeroes the rest. `s` larger than the length keeps everything.
pub fn hard_threshold(v: ArrayView1<f64>, s: usize) -> Array1<f64> {
    let n = v.len();
    if s >= n {
        return v.to_owned();
    }
    let mut out = Array1::zeros(n);
    if s == 0 {
        return out;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    let key = |a: &usize, b: &usize| {
        v[*b]
            .abs()
            .partial_cmp(&v[*a].abs())
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(b))
    };
    idx.select_nth_unstable_by(s - 1, key);
    for &i in &idx[..s] {
        out[i] = v[i];
    }
    out
}

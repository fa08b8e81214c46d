//! Objective oracles: value, gradient and a Lipschitz constant of the
//! gradient.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// A continuously differentiable objective with an `L`-Lipschitz gradient.
pub trait Objective: Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: ArrayView1<f64>) -> f64;

    fn gradient(&self, x: ArrayView1<f64>) -> Array1<f64>;

    /// Both at once; implementors override this when the two share work.
    fn value_and_gradient(&self, x: ArrayView1<f64>) -> (f64, Array1<f64>) {
        (self.value(x), self.gradient(x))
    }

    fn lipschitz(&self) -> f64;
}

/// `f(x) = 0.5 * ||x - y||_2^2`, the Euclidean projection objective.
#[derive(Debug, Clone)]
pub struct QuadraticDistance {
    y: Array1<f64>,
}

impl QuadraticDistance {
    pub fn new(y: Array1<f64>) -> Self {
        Self { y }
    }

    pub fn target(&self) -> ArrayView1<'_, f64> {
        self.y.view()
    }
}

impl Objective for QuadraticDistance {
    fn dim(&self) -> usize {
        self.y.len()
    }

    fn value(&self, x: ArrayView1<f64>) -> f64 {
        0.5 * x
            .iter()
            .zip(self.y.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
    }

    fn gradient(&self, x: ArrayView1<f64>) -> Array1<f64> {
        &x - &self.y
    }

    fn value_and_gradient(&self, x: ArrayView1<f64>) -> (f64, Array1<f64>) {
        let g = &x - &self.y;
        (0.5 * g.dot(&g), g)
    }

    fn lipschitz(&self) -> f64 {
        1.0
    }
}

/// `f(x) = 0.5 * ||A x - b||_2^2`.
///
/// The Lipschitz constant is `1.01` times a power-method estimate of
/// `lambda_max(A^T A)`; the power method approaches the eigenvalue from
/// below, and stepsizes derived from `L` must stay under `1/L_true`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    a: Array2<f64>,
    b: Array1<f64>,
    lipschitz: f64,
}

impl LeastSquares {
    pub const LIPSCHITZ_SAFETY: f64 = 1.01;
    pub const POWER_ITERS: usize = 5000;
    pub const POWER_TOL: f64 = 1e-10;

    pub fn new(a: Array2<f64>, b: Array1<f64>) -> Result<Self> {
        check_shapes(&a, &b)?;
        let est = power_method_lmax(a.view(), Self::POWER_ITERS, Self::POWER_TOL)?;
        if est.degenerate {
            return Err(Error::InvalidInput("measurement matrix is zero".into()));
        }
        Ok(Self {
            a,
            b,
            lipschitz: Self::LIPSCHITZ_SAFETY * est.lambda_max,
        })
    }

    /// Uses a caller-provided Lipschitz constant instead of estimating one.
    pub fn with_lipschitz(a: Array2<f64>, b: Array1<f64>, lipschitz: f64) -> Result<Self> {
        check_shapes(&a, &b)?;
        if !(lipschitz > 0.0) {
            return Err(Error::InvalidInput(format!(
                "Lipschitz constant must be positive, got {lipschitz}"
            )));
        }
        Ok(Self { a, b, lipschitz })
    }

    pub fn matrix(&self) -> ArrayView2<'_, f64> {
        self.a.view()
    }

    pub fn rhs(&self) -> ArrayView1<'_, f64> {
        self.b.view()
    }

    fn residual(&self, x: ArrayView1<f64>) -> Array1<f64> {
        self.a.dot(&x) - &self.b
    }
}

fn check_shapes(a: &Array2<f64>, b: &Array1<f64>) -> Result<()> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::InvalidInput("measurement matrix is empty".into()));
    }
    if a.nrows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: b.len(),
        });
    }
    Ok(())
}

impl Objective for LeastSquares {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, x: ArrayView1<f64>) -> f64 {
        let r = self.residual(x);
        0.5 * r.dot(&r)
    }

    fn gradient(&self, x: ArrayView1<f64>) -> Array1<f64> {
        self.a.t().dot(&self.residual(x))
    }

    fn value_and_gradient(&self, x: ArrayView1<f64>) -> (f64, Array1<f64>) {
        let r = self.residual(x);
        (0.5 * r.dot(&r), self.a.t().dot(&r))
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
}

/// Outcome of [`power_method_lmax`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerEstimate {
    pub lambda_max: f64,
    pub iterations: usize,
    /// Set when `A^T A` annihilated the iterate (zero matrix); `lambda_max`
    /// is then 0.
    pub degenerate: bool,
}

const POWER_SEED: u64 = 0x6c70_6261_6c6c;

/// Estimates `lambda_max(A^T A)` by power iteration on `A^T A` without
/// forming it.
///
/// Starts from a fixed-seed random unit vector so repeated calls agree.
/// Stops once the Rayleigh quotient changes by at most `tol` relative to
/// its magnitude, or after `iters` iterations.
pub fn power_method_lmax(a: ArrayView2<f64>, iters: usize, tol: f64) -> Result<PowerEstimate> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::InvalidInput(
            "power method needs a nonempty matrix".into(),
        ));
    }
    if iters == 0 {
        return Err(Error::InvalidInput(
            "power method needs at least one iteration".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let mut v: Array1<f64> = (0..a.ncols())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let nv = v.dot(&v).sqrt();
    v /= nv;

    let mut lambda = 0.0;
    for it in 1..=iters {
        let av = a.dot(&v);
        let rayleigh = av.dot(&av);
        let w = a.t().dot(&av);
        let nw = w.dot(&w).sqrt();
        if nw == 0.0 || rayleigh == 0.0 {
            return Ok(PowerEstimate {
                lambda_max: 0.0,
                iterations: it,
                degenerate: true,
            });
        }
        let change = (rayleigh - lambda).abs();
        lambda = rayleigh;
        v = w / nw;
        if it > 1 && change <= tol * lambda {
            return Ok(PowerEstimate {
                lambda_max: lambda,
                iterations: it,
                degenerate: false,
            });
        }
    }
    Ok(PowerEstimate {
        lambda_max: lambda,
        iterations: iters,
        degenerate: false,
    })
}

/// Largest absolute deviation between central differences of
/// `obj.value` and `obj.gradient` over all coordinates.
pub fn finite_diff_check(obj: &dyn Objective, x: ArrayView1<f64>, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!(
            "step h must be positive, got {h}"
        )));
    }
    let grad = obj.gradient(x);
    let mut probe = x.to_owned();
    let mut worst = 0.0_f64;
    for i in 0..x.len() {
        let orig = probe[i];
        probe[i] = orig + h;
        let up = obj.value(probe.view());
        probe[i] = orig - h;
        let down = obj.value(probe.view());
        probe[i] = orig;
        let fd = (up - down) / (2.0 * h);
        worst = worst.max((fd - grad[i]).abs());
    }
    Ok(worst)
}

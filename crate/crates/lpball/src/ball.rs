//! The lp ball `{x : ||x||_p^p <= gamma}` and queries against it.

use ndarray::ArrayView1;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Constraint set parameters: exponent `p` in (0, 1) and radius `gamma > 0`
/// bounding `||x||_p^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpBall {
    p: f64,
    gamma: f64,
}

impl LpBall {
    pub fn new(p: f64, gamma: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidInput(format!(
                "p must lie in (0, 1), got {p}"
            )));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "gamma must be positive and finite, got {gamma}"
            )));
        }
        Ok(Self { p, gamma })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `gamma^(1/p)`, the magnitude of the nonzero entry of every one-hot
    /// point on the boundary. Also the largest Euclidean norm in the ball.
    pub fn vertex_radius(&self) -> f64 {
        self.gamma.powf(1.0 / self.p)
    }

    pub fn norm_p(&self, x: ArrayView1<f64>) -> f64 {
        lp_norm_p(x, self.p)
    }

    pub fn position(&self, x: ArrayView1<f64>, boundary_tol: f64) -> Position {
        classify_position(x, self, boundary_tol)
    }
}

/// Where a point sits relative to the ball, up to a boundary tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Position {
    Interior,
    Boundary,
    Infeasible,
}

/// `sum_i |x_i|^p`, with zero entries contributing exactly zero.
///
/// Uses Neumaier summation; the bisection drives this quantity to within
/// 1e-8 of `gamma`, so the rounding error of a plain sum over 1e5 terms
/// would be visible.
pub fn lp_norm_p(x: ArrayView1<f64>, p: f64) -> f64 {
    neumaier_sum(x.iter().filter(|v| **v != 0.0).map(|v| v.abs().powf(p)))
}

pub(crate) fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Boundary iff `| ||x||_p^p - gamma | <= boundary_tol`, Interior iff
/// strictly below `gamma - boundary_tol`, Infeasible otherwise.
pub fn classify_position(x: ArrayView1<f64>, ball: &LpBall, boundary_tol: f64) -> Position {
    position_of_norm(lp_norm_p(x, ball.p), ball.gamma, boundary_tol)
}

pub(crate) fn position_of_norm(norm: f64, gamma: f64, boundary_tol: f64) -> Position {
    if (norm - gamma).abs() <= boundary_tol {
        Position::Boundary
    } else if norm < gamma - boundary_tol {
        Position::Interior
    } else {
        Position::Infeasible
    }
}

/// Sets every entry with `|x_i| <= zero_tol` to exactly zero.
pub(crate) fn snap_zeros(x: &mut ndarray::Array1<f64>, zero_tol: f64) {
    x.mapv_inplace(|v| if v.abs() <= zero_tol { 0.0 } else { v });
}

pub(crate) fn support_size(x: ArrayView1<f64>) -> usize {
    x.iter().filter(|v| **v != 0.0).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array1};
    use proptest::prelude::*;

    #[test]
    fn norm_examples() {
        assert_eq!(lp_norm_p(array![0.0, 0.0, 0.0].view(), 0.5), 0.0);
        assert_eq!(lp_norm_p(array![1.0, -1.0].view(), 0.5), 2.0);
        assert_eq!(lp_norm_p(array![0.25, 0.0].view(), 0.5), 0.5);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LpBall::new(0.0, 1.0).is_err());
        assert!(LpBall::new(1.0, 1.0).is_err());
        assert!(LpBall::new(0.5, 0.0).is_err());
        assert!(LpBall::new(0.5, -2.0).is_err());
        assert!(LpBall::new(f64::NAN, 1.0).is_err());
        assert!(LpBall::new(0.5, 1.0).is_ok());
    }

    #[test]
    fn classify_examples() {
        let ball = LpBall::new(0.5, 2.0).unwrap();
        assert_eq!(
            classify_position(array![1.0, -1.0].view(), &ball, 1e-8),
            Position::Boundary
        );
        assert_eq!(
            classify_position(Array1::zeros(3).view(), &ball, 1e-8),
            Position::Interior
        );
        // ||x||_p^p = 3 = gamma + 1
        assert_eq!(
            classify_position(array![1.0, 1.0, 1.0].view(), &ball, 1e-8),
            Position::Infeasible
        );
    }

    #[test]
    fn classify_tolerance_edges() {
        let ball = LpBall::new(0.5, 1.0).unwrap();
        assert_eq!(position_of_norm(1.0 + 5e-9, 1.0, 1e-8), Position::Boundary);
        assert_eq!(position_of_norm(1.0 - 5e-9, 1.0, 1e-8), Position::Boundary);
        assert_eq!(position_of_norm(1.0 - 2e-8, 1.0, 1e-8), Position::Interior);
        assert_eq!(
            position_of_norm(1.0 + 2e-8, 1.0, 1e-8),
            Position::Infeasible
        );
        assert_eq!(ball.vertex_radius(), 1.0);
    }

    #[test]
    fn snapping() {
        let mut x = array![1e-15, -3e-15, 0.5, -1e-3];
        snap_zeros(&mut x, 1e-14);
        assert_eq!(x, array![0.0, 0.0, 0.5, -1e-3]);
        assert_eq!(support_size(x.view()), 2);
    }

    fn vec_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-10.0..10.0_f64, 1..20)
    }

    proptest! {
        #[test]
        fn homogeneity(x in vec_strategy(), c in -5.0..5.0_f64, p in 0.05..0.95_f64) {
            let x = Array1::from(x);
            let lhs = lp_norm_p((&x * c).view(), p);
            let rhs = c.abs().powf(p) * lp_norm_p(x.view(), p);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
        }

        #[test]
        fn dominates_euclidean_power(x in vec_strategy(), p in 0.05..0.95_f64) {
            let x = Array1::from(x);
            let l2 = x.dot(&x).sqrt();
            prop_assert!(lp_norm_p(x.view(), p) >= l2.powf(p) * (1.0 - 1e-12));
        }

        #[test]
        fn equality_on_one_hot(n in 1usize..20, idx in 0usize..20, v in -10.0..10.0_f64, p in 0.05..0.95_f64) {
            let mut x = Array1::zeros(n);
            x[idx % n] = v;
            let l2 = x.dot(&x).sqrt();
            let lp = lp_norm_p(x.view(), p);
            prop_assert!((lp - l2.powf(p)).abs() <= 1e-12 * (1.0 + lp));
        }

        #[test]
        fn classification_is_exclusive(norm in 0.0..3.0_f64, gamma in 0.1..2.0_f64, tol in 1e-10..1e-2_f64) {
            let pos = position_of_norm(norm, gamma, tol);
            let boundary = (norm - gamma).abs() <= tol;
            let interior = norm < gamma - tol;
            let infeasible = !boundary && !interior;
            prop_assert_eq!(pos == Position::Boundary, boundary);
            prop_assert_eq!(pos == Position::Interior, interior);
            prop_assert_eq!(pos == Position::Infeasible, infeasible);
        }
    }
}

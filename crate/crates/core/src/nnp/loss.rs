//! Regression losses over coordinate batches.

use crate::error::{Error, Result};
use crate::numerics::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LossKind {
    /// Mean squared error.
    #[default]
    Mse,
    /// Mean absolute error.
    Mae,
    /// Mean log(cosh(error)).
    LogCosh,
}

impl LossKind {
    pub fn name(&self) -> &'static str {
        match self {
            LossKind::Mse => "mse",
            LossKind::Mae => "mae",
            LossKind::LogCosh => "logcosh",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mse" => Ok(LossKind::Mse),
            "mae" => Ok(LossKind::Mae),
            "logcosh" => Ok(LossKind::LogCosh),
            other => Err(Error::Param(format!(
                "unknown loss '{other}' (expected mse, mae, or logcosh)"
            ))),
        }
    }
}

fn check_shapes(pred: &Matrix, target: &Matrix) -> Result<()> {
    if pred.rows() != target.rows() || pred.cols() != target.cols() {
        return Err(Error::Shape(format!(
            "prediction {}x{} vs target {}x{}",
            pred.rows(),
            pred.cols(),
            target.rows(),
            target.cols()
        )));
    }
    Ok(())
}

/// Mean of the element-wise loss over all entries.
pub fn loss(pred: &Matrix, target: &Matrix, kind: LossKind) -> Result<f64> {
    check_shapes(pred, target)?;
    let n = pred.as_slice().len() as f64;
    let total: f64 = pred
        .as_slice()
        .iter()
        .zip(target.as_slice())
        .map(|(&p, &t)| {
            let e = p - t;
            match kind {
                LossKind::Mse => e * e,
                LossKind::Mae => e.abs(),
                LossKind::LogCosh => log_cosh(e),
            }
        })
        .sum();
    Ok(total / n)
}

/// Gradient of [`loss`] with respect to the predictions.
pub fn loss_gradient(pred: &Matrix, target: &Matrix, kind: LossKind) -> Result<Matrix> {
    check_shapes(pred, target)?;
    let n = pred.as_slice().len() as f64;
    let mut out = pred.clone();
    for (v, &t) in out.as_mut_slice().iter_mut().zip(target.as_slice()) {
        let e = *v - t;
        *v = match kind {
            LossKind::Mse => 2.0 * e / n,
            LossKind::Mae => e.signum() * if e == 0.0 { 0.0 } else { 1.0 } / n,
            LossKind::LogCosh => e.tanh() / n,
        };
    }
    Ok(out)
}

/// ln(cosh(x)) computed without overflowing for large |x|.
fn log_cosh(x: f64) -> f64 {
    let a = x.abs();
    // ln(cosh x) = |x| + ln(1 + e^{-2|x|}) - ln 2
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    const KINDS: [LossKind; 3] = [LossKind::Mse, LossKind::Mae, LossKind::LogCosh];

    #[test]
    fn zero_when_equal() {
        let a = Matrix::from_vec(2, 2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        for kind in KINDS {
            assert_eq!(loss(&a, &a, kind).unwrap(), 0.0);
        }
    }

    #[test]
    fn unit_error_closed_forms() {
        let pred = Matrix::from_vec(2, 2, vec![1.0; 4]).unwrap();
        let target = Matrix::zeros(2, 2);
        assert!((loss(&pred, &target, LossKind::Mse).unwrap() - 1.0).abs() < 1e-15);
        assert!((loss(&pred, &target, LossKind::Mae).unwrap() - 1.0).abs() < 1e-15);
        let expect = 1.0f64.cosh().ln();
        assert!((expect - 0.4338).abs() < 1e-4);
        assert!((loss(&pred, &target, LossKind::LogCosh).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn matches_scalar_loop_oracle() {
        let mut rng = crate::numerics::Rng::new(17);
        let pred_data: Vec<f64> = (0..20).map(|_| rng.range_f64(-2.0, 2.0)).collect();
        let target_data: Vec<f64> = (0..20).map(|_| rng.range_f64(-2.0, 2.0)).collect();
        let pred = Matrix::from_vec(10, 2, pred_data.clone()).unwrap();
        let target = Matrix::from_vec(10, 2, target_data.clone()).unwrap();
        for kind in KINDS {
            let mut acc = 0.0;
            for (p, t) in pred_data.iter().zip(&target_data) {
                let e = p - t;
                acc += match kind {
                    LossKind::Mse => e * e,
                    LossKind::Mae => e.abs(),
                    LossKind::LogCosh => e.cosh().ln(),
                };
            }
            let expect = acc / 20.0;
            assert!((loss(&pred, &target, kind).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        let a = Matrix::zeros(2, 2);
        let b = Matrix::zeros(3, 2);
        assert!(loss(&a, &b, LossKind::Mse).is_err());
        assert!(loss_gradient(&a, &b, LossKind::Mse).is_err());
    }

    #[test]
    fn log_cosh_stable_for_large_errors() {
        let v = log_cosh(800.0);
        assert!(v.is_finite());
        assert!((v - (800.0 - std::f64::consts::LN_2)).abs() < 1e-9);
    }
}

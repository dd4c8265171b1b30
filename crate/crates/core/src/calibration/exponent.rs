use serde::Serialize;

use super::CalibrationError;

/// Search bracket for exponents.
const BRACKET: (f64, f64) = (-10.0, 10.0);
const X_TOLERANCE: f64 = 1e-9;
const MAX_ITERATIONS: usize = 200;

/// Result of solving `base^x = target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentSolve {
    pub base: f64,
    pub target: f64,
    pub solution: f64,
    /// `base^solution - target`.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    pub root: f64,
    pub iterations: usize,
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Stops once the bracket is no wider than `x_tolerance` and returns its
/// midpoint, or as soon as `f` evaluates to exactly zero.
pub fn bisect<F>(f: F, lo: f64, hi: f64, x_tolerance: f64, max_iterations: usize) -> Result<Bisection, CalibrationError>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(Bisection {
            root: lo,
            iterations: 0,
        });
    }
    if f_hi == 0.0 {
        return Ok(Bisection {
            root: hi,
            iterations: 0,
        });
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(CalibrationError::InvalidProblem(format!(
            "no sign change on [{lo}, {hi}]"
        )));
    }
    for iteration in 1..=max_iterations {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(Bisection {
                root: mid,
                iterations: iteration,
            });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= x_tolerance {
            return Ok(Bisection {
                root: 0.5 * (lo + hi),
                iterations: iteration,
            });
        }
    }
    Err(CalibrationError::IterationLimit {
        iterations: max_iterations,
    })
}

/// Solves `base^x = target` for `x` by bisection on `[-10, 10]`.
pub fn solve_exponent(base: f64, target: f64) -> Result<ExponentSolve, CalibrationError> {
    if !(base.is_finite() && base > 0.0 && base != 1.0) {
        return Err(CalibrationError::InvalidProblem(format!(
            "base must be positive, finite and not 1, got {base}"
        )));
    }
    if !(target.is_finite() && target > 0.0) {
        return Err(CalibrationError::InvalidProblem(format!(
            "target must be positive and finite, got {target}"
        )));
    }
    let (lo, hi) = BRACKET;
    let g = |x: f64| base.powf(x) - target;
    if g(lo).signum() == g(hi).signum() && g(lo) != 0.0 && g(hi) != 0.0 {
        return Err(CalibrationError::NotBracketable { base, target, lo, hi });
    }
    let Bisection { root, iterations } = bisect(g, lo, hi, X_TOLERANCE, MAX_ITERATIONS)?;
    let residual = base.powf(root) - target;
    if residual.abs() > 1e-6 * target {
        return Err(CalibrationError::InvalidProblem(format!(
            "residual {residual} too large for {base}^x = {target}"
        )));
    }
    Ok(ExponentSolve {
        base,
        target,
        solution: root,
        residual,
        iterations,
    })
}

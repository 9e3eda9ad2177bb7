//! Matrix exponential by scaling and squaring.
//!
//! The scaled matrix is brought under 1-norm 0.5, a fixed 18-term Taylor
//! polynomial is summed, and the result is squared back up. At that norm the
//! truncation remainder is below `0.5^18 / 18! ~ 6e-22`, so the routine is
//! accurate to rounding and has no dependence outside this crate. It is the
//! reference every closed-form propagator is checked against.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Number of Taylor terms summed after scaling (powers 0 through 17).
pub const TAYLOR_TERMS: usize = 18;

/// Scaled norms are pushed strictly below this bound before summing.
pub const SCALED_NORM_BOUND: f64 = 0.5;

/// `exp(scale * a)`.
pub fn expm_series(a: &ComplexMatrix, scale: C64) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Argument(format!(
            "matrix exponential needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !scale.re.is_finite() || !scale.im.is_finite() {
        return Err(Error::Argument(format!("non-finite scale {scale}")));
    }
    if !a.is_finite() {
        return Err(Error::Argument("matrix has non-finite entries".into()));
    }

    let m = a.scale(scale);
    let squarings = squarings_for(m.norm_one());
    let m = m.scale_real(0.5_f64.powi(squarings as i32));

    let n = m.rows();
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..TAYLOR_TERMS {
        term = (&term * &m).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// Smallest `s >= 0` with `norm / 2^s < SCALED_NORM_BOUND`.
fn squarings_for(norm: f64) -> u32 {
    let mut s = 0;
    let mut scaled = norm;
    while scaled >= SCALED_NORM_BOUND {
        scaled *= 0.5;
        s += 1;
    }
    s
}

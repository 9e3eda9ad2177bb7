//! Dense complex linear algebra for the atom, Fock, and joint spaces.

mod expm;
mod matrix;
mod state;
mod su2;

pub use expm::{expm_series, SCALED_NORM_BOUND, TAYLOR_TERMS};
pub use matrix::{commutator, tensor_product, ComplexMatrix};
pub use state::{fidelity, StateVector, NORM_TOL};
pub(crate) use state::norm_of;
pub use su2::{
    bch_conjugate, expm_su2, expm_via_hadamard, pauli, tau3, walsh_hadamard, Axis, Pauli,
};

/// Complex scalar used throughout.
pub type ComplexScalar = num_complex::Complex64;

/// Finite complex scalar; NaN or infinite parts are rejected.
pub fn scalar(re: f64, im: f64) -> crate::Result<ComplexScalar> {
    if re.is_finite() && im.is_finite() {
        Ok(ComplexScalar::new(re, im))
    } else {
        Err(crate::Error::Argument(format!("non-finite scalar ({re}, {im})")))
    }
}

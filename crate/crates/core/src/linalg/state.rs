use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance used when a caller asserts a state is normalized.
pub const NORM_TOL: f64 = 1e-10;

/// Complex amplitude vector for an atom, a Fock mode, or the joint space.
///
/// Constructors that take user input normalize; the raw constructor used by
/// the integrator does not, so that norm drift stays observable.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(Vec<C64>);

impl StateVector {
    /// Normalize `amps`; fails on an empty or zero vector or non-finite entries.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Argument("state vector must be non-empty".into()));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Argument("state vector has non-finite amplitudes".into()));
        }
        let n = norm_of(&amps);
        if n == 0.0 {
            return Err(Error::Argument("cannot normalize the zero vector".into()));
        }
        Ok(Self(amps.into_iter().map(|z| z / n).collect()))
    }

    /// Unit vector with a one in slot `k`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::OutOfRange { index: k, dim });
        }
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[k] = C64::new(1.0, 0.0);
        Ok(Self(v))
    }

    pub(crate) fn from_raw(amps: Vec<C64>) -> Self {
        Self(amps)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.0
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.0)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    pub fn require_normalized(&self, what: &str) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{what} must be normalized (norm = {})",
                self.norm()
            )))
        }
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "inner product of vectors of length {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `|amp|^2` per slot.
    pub fn populations(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Kronecker product, `self` as the outer (slow) index.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.0 {
            out.extend(other.0.iter().map(|&b| a * b));
        }
        Self(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.iter().map(|&z| z * s).collect())
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff: dimension mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn norm_of(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `|<a|b>|^2 / (<a|a> <b|b>)`: insensitive to global phase, and to the
/// small norm drift of integrated states.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    let overlap = a.inner(b)?.norm_sqr();
    let scale = a.norm().powi(2) * b.norm().powi(2);
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok((overlap / scale).clamp(0.0, 1.0))
}

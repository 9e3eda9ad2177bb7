//! Truncated Fock space: ladder operators on `|0>, ..., |D-1>`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{commutator, ComplexMatrix, StateVector};

/// Population in the top two retained levels above which a run is flagged
/// `truncation_suspect`.
pub const LEAKAGE_THRESHOLD: f64 = 1e-8;

/// Number of retained Fock levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct FockTruncation(usize);

impl FockTruncation {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Argument(format!(
                "Fock truncation must keep at least 2 levels, got {dim}"
            )));
        }
        Ok(Self(dim))
    }

    pub fn dim(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for FockTruncation {
    type Error = Error;

    fn try_from(dim: usize) -> Result<Self> {
        Self::new(dim)
    }
}

impl From<FockTruncation> for usize {
    fn from(t: FockTruncation) -> usize {
        t.0
    }
}

/// `a`, `a^dagger` and `N = a^dagger a` on the truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderSet {
    pub a: ComplexMatrix,
    pub a_dag: ComplexMatrix,
    pub n_op: ComplexMatrix,
}

impl LadderSet {
    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// Diagonal of the truncated `a a^dagger`: `n + 1` below the top level,
    /// `0` on it.
    pub fn raised_number_diag(&self) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|n| if n + 1 < d { (n + 1) as f64 } else { 0.0 }).collect()
    }
}

pub fn ladder_ops(trunc: FockTruncation) -> LadderSet {
    ladder_ops_with_phase(trunc, 0.0)
}

/// Ladder operators with the phase freedom `b = e^{i theta} a`; `N` is
/// unchanged.
pub fn ladder_ops_with_phase(trunc: FockTruncation, theta: f64) -> LadderSet {
    let d = trunc.dim();
    let phase = C64::from_polar(1.0, theta);
    let mut a = ComplexMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = phase * (n as f64).sqrt();
    }
    let a_dag = a.dagger();
    let n_op = ComplexMatrix::from_diag(
        &(0..d).map(|n| C64::new(n as f64, 0.0)).collect::<Vec<_>>(),
    );
    LadderSet { a, a_dag, n_op }
}

/// `|n>`.
pub fn number_state(n: usize, trunc: FockTruncation) -> Result<StateVector> {
    StateVector::basis(trunc.dim(), n)
}

/// `[a, a^dagger] - I` on the truncation. Zero except `(D-1, D-1) = -D`.
pub fn commutation_defect(trunc: FockTruncation) -> ComplexMatrix {
    let ops = ladder_ops(trunc);
    let comm = commutator(&ops.a, &ops.a_dag).expect("square ladder operators");
    &comm - &ComplexMatrix::identity(trunc.dim())
}

/// Population in the top two Fock levels of an `atom_dim x D` joint state
/// laid out atom-outer, Fock-inner.
pub fn top_level_population(psi: &StateVector, atom_dim: usize, trunc: FockTruncation) -> f64 {
    let d = trunc.dim();
    assert_eq!(psi.dim(), atom_dim * d, "joint state dimension");
    let amps = psi.amplitudes();
    (0..atom_dim)
        .flat_map(|s| [s * d + d - 1, s * d + d - 2])
        .map(|k| amps[k].norm_sqr())
        .sum()
}

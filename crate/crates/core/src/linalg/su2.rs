//! The 2x2 generators and their exponentials.
//!
//! Basis convention: `|0> = (1, 0)^T`, `|1> = (0, 1)^T`. Under this choice
//! `sigma_-` maps the first slot to the second, i.e. it annihilates `|1>`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{commutator, ComplexMatrix};

/// One of the 2x2 generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    /// sigma_1, the flip.
    X,
    /// sigma_2.
    Y,
    /// sigma_3.
    Z,
    /// sigma_+ = (sigma_1 + i sigma_2) / 2.
    Plus,
    /// sigma_- = (sigma_1 - i sigma_2) / 2.
    Minus,
    Identity,
}

/// Axis of an su(2) rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl From<Axis> for Pauli {
    fn from(axis: Axis) -> Self {
        match axis {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }
}

impl FromStr for Pauli {
    type Err = Error;

    /// Accepts `1`, `2`, `3`, `+`, `-`, `I` (and `x`, `y`, `z` aliases).
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "x" | "X" => Ok(Pauli::X),
            "2" | "y" | "Y" => Ok(Pauli::Y),
            "3" | "z" | "Z" => Ok(Pauli::Z),
            "+" => Ok(Pauli::Plus),
            "-" => Ok(Pauli::Minus),
            "I" | "i" | "0" => Ok(Pauli::Identity),
            other => Err(Error::Argument(format!("unknown Pauli index `{other}`"))),
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<Pauli>()? {
            Pauli::X => Ok(Axis::X),
            Pauli::Y => Ok(Axis::Y),
            Pauli::Z => Ok(Axis::Z),
            other => Err(Error::Argument(format!("{other:?} is not a rotation axis"))),
        }
    }
}

const O: C64 = C64::new(0.0, 0.0);
const L: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

fn m2(a: C64, b: C64, c: C64, d: C64) -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![a, b, c, d]).expect("2x2")
}

pub fn pauli(which: Pauli) -> ComplexMatrix {
    match which {
        Pauli::X => m2(O, L, L, O),
        Pauli::Y => m2(O, -I, I, O),
        Pauli::Z => m2(L, O, O, -L),
        Pauli::Plus => m2(O, L, O, O),
        Pauli::Minus => m2(O, O, L, O),
        Pauli::Identity => m2(L, O, O, L),
    }
}

/// `sigma_3 / 2`.
pub fn tau3() -> ComplexMatrix {
    pauli(Pauli::Z).scale_real(0.5)
}

/// Walsh-Hadamard matrix `(1/sqrt 2) [[1, 1], [1, -1]]`; real orthogonal and
/// an involution.
pub fn walsh_hadamard() -> ComplexMatrix {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    m2(h, h, h, -h)
}

/// `exp(i lambda sigma_k) = cos(lambda) I + i sin(lambda) sigma_k`.
pub fn expm_su2(axis: Axis, lambda: f64) -> ComplexMatrix {
    let (s, c) = lambda.sin_cos();
    let id = pauli(Pauli::Identity).scale_real(c);
    let gen = pauli(axis.into()).scale(C64::new(0.0, s));
    &id + &gen
}

/// `exp(i lambda sigma_1)` computed as `W exp(i lambda sigma_3) W^-1`, with
/// `W^-1 = W`.
pub fn expm_via_hadamard(lambda: f64) -> ComplexMatrix {
    let w = walsh_hadamard();
    let diag = ComplexMatrix::from_diag(&[
        C64::from_polar(1.0, lambda),
        C64::from_polar(1.0, -lambda),
    ]);
    &(&w * &diag) * &w
}

/// `e^X A e^-X` truncated after the `depth`-fold nested commutator:
/// `sum_{k=0}^{depth} ad_X^k(A) / k!`.
///
/// Exact once `depth` reaches the order at which the nested commutators
/// vanish (e.g. `X` proportional to `sigma_+`).
pub fn bch_conjugate(x: &ComplexMatrix, a: &ComplexMatrix, depth: usize) -> Result<ComplexMatrix> {
    if depth == 0 {
        return Err(Error::Argument("BCH depth must be positive".into()));
    }
    let mut nested = a.clone();
    let mut sum = a.clone();
    let mut factorial = 1.0;
    for k in 1..=depth {
        nested = commutator(x, &nested)?;
        factorial *= k as f64;
        sum = &sum + &nested.scale_real(1.0 / factorial);
    }
    Ok(sum)
}

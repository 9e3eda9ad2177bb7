//! Quantum Rabi model and its Jaynes-Cummings reduction on the joint
//! atom x truncated-Fock space.
//!
//! Joint states are laid out atom-outer: index `s * D + n` for atom slot `s`
//! and photon number `n`, so every joint operator is a 2x2 grid of `D x D`
//! blocks. Slot 0 is the `+Omega/2` level.
//!
//! Operator-valued functions (`cos(sqrt(N+1) g t)` and friends) are evaluated
//! on the diagonal of the truncated number operators. On the top level the
//! truncated `a a^dagger` is 0 rather than `D`, which is what makes the
//! closed forms coincide with the matrix exponential on the finite space.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{ladder_ops, top_level_population, FockTruncation, LadderSet, LEAKAGE_THRESHOLD};
use crate::integrator::{integrate, Flag, IntegratorConfig, TimeSeries};
use crate::linalg::{pauli, tensor_product, ComplexMatrix, Pauli, StateVector};
use crate::semiclassical::sinc;

pub const RESONANCE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JcParams {
    /// Atomic transition frequency.
    pub big_omega: f64,
    /// Field mode frequency.
    pub omega: f64,
    pub g: f64,
    /// Retained Fock levels.
    #[serde(rename = "dim")]
    pub trunc: FockTruncation,
}

impl JcParams {
    pub fn new(big_omega: f64, omega: f64, g: f64, dim: usize) -> Result<Self> {
        let p = Self {
            big_omega,
            omega,
            g,
            trunc: FockTruncation::new(dim)?,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.big_omega, self.omega, self.g].iter().all(|x| x.is_finite()) {
            return Err(Error::Argument("JC parameters must be finite".into()));
        }
        if self.big_omega <= 0.0 {
            return Err(Error::Argument(format!("big_omega must be > 0, got {}", self.big_omega)));
        }
        if self.omega <= 0.0 {
            return Err(Error::Argument(format!("omega must be > 0, got {}", self.omega)));
        }
        if self.g < 0.0 {
            return Err(Error::Argument(format!("g must be >= 0, got {}", self.g)));
        }
        FockTruncation::new(self.trunc.dim()).map(|_| ())
    }

    pub fn dim(&self) -> usize {
        self.trunc.dim()
    }

    /// Joint-space dimension `2D`.
    pub fn joint_dim(&self) -> usize {
        2 * self.dim()
    }

    /// `delta = Omega - omega`.
    pub fn detuning(&self) -> f64 {
        self.big_omega - self.omega
    }

    pub fn is_resonant(&self) -> bool {
        self.detuning().abs() <= RESONANCE_TOL
    }
}

fn uncoupled(p: &JcParams, ops: &LadderSet) -> ComplexMatrix {
    let id_f = ComplexMatrix::identity(p.dim());
    &tensor_product(&pauli(Pauli::Z).scale_real(p.big_omega / 2.0), &id_f)
        + &tensor_product(&ComplexMatrix::identity(2), &ops.n_op.scale_real(p.omega))
}

/// `(Omega/2) sigma_3 x 1 + omega 1 x N + g (sigma_+ + sigma_-) x (a + a^dagger)`.
pub fn hamiltonian_quantum_rabi(p: &JcParams) -> ComplexMatrix {
    let ops = ladder_ops(p.trunc);
    let field = &ops.a + &ops.a_dag;
    let coupling = tensor_product(&pauli(Pauli::X), &field).scale_real(p.g);
    &uncoupled(p, &ops) + &coupling
}

/// `(Omega/2) sigma_3 x 1 + omega 1 x N + g (sigma_+ x a + sigma_- x a^dagger)`.
pub fn hamiltonian_jc(p: &JcParams) -> ComplexMatrix {
    let ops = ladder_ops(p.trunc);
    let coupling = &tensor_product(&pauli(Pauli::Plus), &ops.a)
        + &tensor_product(&pauli(Pauli::Minus), &ops.a_dag);
    &uncoupled(p, &ops) + &coupling.scale_real(p.g)
}

/// `g (sigma_+ x a^dagger + sigma_- x a)`, the part the rotating-wave
/// approximation drops.
pub fn counter_rotating_terms(p: &JcParams) -> ComplexMatrix {
    let ops = ladder_ops(p.trunc);
    (&tensor_product(&pauli(Pauli::Plus), &ops.a_dag) + &tensor_product(&pauli(Pauli::Minus), &ops.a))
        .scale_real(p.g)
}

/// `sigma_3/2 x 1 + 1 x N`.
pub fn excitation_number(trunc: FockTruncation) -> ComplexMatrix {
    let ops = ladder_ops(trunc);
    &tensor_product(&pauli(Pauli::Z).scale_real(0.5), &ComplexMatrix::identity(trunc.dim()))
        + &tensor_product(&ComplexMatrix::identity(2), &ops.n_op)
}

/// `U(t) = e^{i t omega sigma_3 / 2} x e^{i t omega N}`, block diagonal
/// `diag(e^{it(omega N + omega/2)}, e^{it(omega N - omega/2)})`.
pub fn frame_transform_u(t: f64, p: &JcParams) -> ComplexMatrix {
    ComplexMatrix::from_diag(&frame_phases(t, p))
}

fn frame_phases(t: f64, p: &JcParams) -> Vec<C64> {
    let d = p.dim();
    let w = p.omega;
    (0..2 * d)
        .map(|k| {
            let n = (k % d) as f64;
            let s = if k < d { 0.5 } else { -0.5 };
            C64::from_polar(1.0, t * (w * n + s * w))
        })
        .collect()
}

/// `A = [[0, a], [a^dagger, 0]]`, the resonant rotating-frame generator over `g`.
pub fn resonance_generator(trunc: FockTruncation) -> ComplexMatrix {
    let ops = ladder_ops(trunc);
    let d = trunc.dim();
    let mut m = ComplexMatrix::zeros(2 * d, 2 * d);
    m.set_block(0, d, &ops.a);
    m.set_block(d, 0, &ops.a_dag);
    m
}

/// `B = [[delta/2, g a], [g a^dagger, -delta/2]]`, the rotating-frame generator.
pub fn rotating_generator(p: &JcParams) -> ComplexMatrix {
    let d = p.dim();
    let half = p.detuning() / 2.0;
    let mut m = resonance_generator(p.trunc).scale_real(p.g);
    for k in 0..d {
        m[(k, k)] = C64::new(half, 0.0);
        m[(d + k, d + k)] = C64::new(-half, 0.0);
    }
    m
}

/// Assemble `[[diag(ul), diag(ur) a], [diag(ll) a^dagger, diag(lr)]]`.
fn assemble_blocks(
    ops: &LadderSet,
    ul: &[C64],
    ur: &[C64],
    ll: &[C64],
    lr: &[C64],
) -> ComplexMatrix {
    let d = ops.dim();
    let mut m = ComplexMatrix::zeros(2 * d, 2 * d);
    for n in 0..d {
        m[(n, n)] = ul[n];
        m[(d + n, d + n)] = lr[n];
        // a has its only entry of row n at column n + 1
        if n + 1 < d {
            m[(n, d + n + 1)] = ur[n] * ops.a[(n, n + 1)];
        }
        // a^dagger has its only entry of row n at column n - 1
        if n >= 1 {
            m[(d + n, n - 1)] = ll[n] * ops.a_dag[(n, n - 1)];
        }
    }
    m
}

/// Rotating-frame resonant propagator `exp(-i g t A)` by diagonal functional
/// calculus on `a a^dagger` and `a^dagger a`.
pub fn propagator_jc_resonance(t: f64, p: &JcParams) -> Result<ComplexMatrix> {
    if !p.is_resonant() {
        return Err(Error::Precondition(format!(
            "resonant JC propagator needs Omega == omega (detuning {:e}); use propagator_jc_detuned",
            p.detuning()
        )));
    }
    let ops = ladder_ops(p.trunc);
    let gt = p.g * t;
    let raised = ops.raised_number_diag();
    let number: Vec<f64> = (0..p.dim()).map(|n| n as f64).collect();
    let i = C64::i();

    let cos_of = |x: &f64| C64::new((x.sqrt() * gt).cos(), 0.0);
    // sin(sqrt(x) g t) / sqrt(x), finite at x = 0
    let sin_of = |x: &f64| -i * gt * sinc(x.sqrt() * gt);

    let ul: Vec<C64> = raised.iter().map(cos_of).collect();
    let ur: Vec<C64> = raised.iter().map(sin_of).collect();
    let ll: Vec<C64> = number.iter().map(sin_of).collect();
    let lr: Vec<C64> = number.iter().map(cos_of).collect();
    Ok(assemble_blocks(&ops, &ul, &ur, &ll, &lr))
}

/// Rotating-frame propagator `exp(-i t B)` for arbitrary detuning, built from
/// scalar functions of `phi_D = delta^2/4 + g^2 N` and its raised partner
/// `delta^2/4 + g^2 a a^dagger`.
pub fn propagator_jc_detuned(t: f64, p: &JcParams) -> ComplexMatrix {
    let ops = ladder_ops(p.trunc);
    let delta = p.detuning();
    let shift = 0.25 * delta * delta;
    let g2 = p.g * p.g;
    let i = C64::i();

    let upper: Vec<f64> = ops.raised_number_diag().iter().map(|m| shift + g2 * m).collect();
    let lower: Vec<f64> = (0..p.dim()).map(|n| shift + g2 * n as f64).collect();

    // (cos(t r), t sinc(t r)) with r = sqrt(x)
    let trig = |x: f64| {
        let r = x.sqrt();
        ((t * r).cos(), t * sinc(t * r))
    };

    let mut ul = Vec::with_capacity(p.dim());
    let mut ur = Vec::with_capacity(p.dim());
    for &x in &upper {
        let (c, s) = trig(x);
        ul.push(c - i * (delta / 2.0) * s);
        ur.push(-i * p.g * s);
    }
    let mut ll = Vec::with_capacity(p.dim());
    let mut lr = Vec::with_capacity(p.dim());
    for &x in &lower {
        let (c, s) = trig(x);
        ll.push(-i * p.g * s);
        lr.push(c + i * (delta / 2.0) * s);
    }
    assemble_blocks(&ops, &ul, &ur, &ll, &lr)
}

/// Lab-frame JC propagator `U(t)^{-1} exp(-i t B)`; exact, since `U(0) = 1`.
pub fn propagator_jc_lab(t: f64, p: &JcParams) -> ComplexMatrix {
    let phases = frame_phases(t, p);
    let mut m = propagator_jc_detuned(t, p);
    let n = m.rows();
    for r in 0..n {
        let ph = phases[r].conj();
        for c in 0..n {
            m[(r, c)] *= ph;
        }
    }
    m
}

/// `atom x fock`.
pub fn joint_state(atom: &StateVector, fock: &StateVector) -> StateVector {
    atom.tensor(fock)
}

/// Set `truncation_suspect` when any sample puts more than
/// [`LEAKAGE_THRESHOLD`] into the top two Fock levels.
pub fn flag_leakage(ts: &mut TimeSeries, trunc: FockTruncation) {
    let leaked = ts
        .states
        .iter()
        .any(|s| top_level_population(s, 2, trunc) > LEAKAGE_THRESHOLD);
    if leaked {
        ts.flags.insert(Flag::TruncationSuspect);
    }
}

fn check_joint(p: &JcParams, psi0: &StateVector) -> Result<()> {
    p.validate()?;
    if psi0.dim() != p.joint_dim() {
        return Err(Error::Dimension(format!(
            "joint state of dimension {} expected, got {}",
            p.joint_dim(),
            psi0.dim()
        )));
    }
    psi0.require_normalized("initial state")
}

/// Integrate the full quantum Rabi Hamiltonian.
pub fn simulate_quantum_rabi(
    p: &JcParams,
    psi0: &StateVector,
    t_final: f64,
    cfg: &IntegratorConfig,
) -> Result<TimeSeries> {
    check_joint(p, psi0)?;
    let mut ts = integrate(&hamiltonian_quantum_rabi(p), psi0, 0.0, t_final, cfg)?;
    flag_leakage(&mut ts, p.trunc);
    Ok(ts)
}

/// Integrate the Jaynes-Cummings Hamiltonian.
pub fn simulate_jc(
    p: &JcParams,
    psi0: &StateVector,
    t_final: f64,
    cfg: &IntegratorConfig,
) -> Result<TimeSeries> {
    check_joint(p, psi0)?;
    let mut ts = integrate(&hamiltonian_jc(p), psi0, 0.0, t_final, cfg)?;
    flag_leakage(&mut ts, p.trunc);
    Ok(ts)
}

/// Sample the closed-form JC solution on `times`.
pub fn evolve_jc_closed_form(p: &JcParams, psi0: &StateVector, times: &[f64]) -> Result<TimeSeries> {
    check_joint(p, psi0)?;
    let mut ts = TimeSeries::default();
    for &t in times {
        ts.push(t, propagator_jc_lab(t, p).apply(psi0)?);
    }
    flag_leakage(&mut ts, p.trunc);
    Ok(ts)
}

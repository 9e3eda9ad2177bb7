//! Numerical integration of `i d psi/dt = H(t) psi`.
//!
//! Two steppers share one driver: classical fixed-step RK4, and the
//! Dormand-Prince 5(4) pair with standard step-size control. Output is sampled
//! on the uniform grid `t0, t0 + dt, ...` ending exactly at `t1`; the adaptive
//! stepper clips its steps to land on each sample.

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm_of, ComplexMatrix, StateVector};

pub use crate::linalg::fidelity;

/// `max |H - H^dagger|` above which the integrator refuses a Hamiltonian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Final-norm deviation above which a run is flagged `norm_drift`.
pub const NORM_DRIFT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "rk4-fixed")]
    Rk4Fixed,
    #[serde(rename = "rk45-adaptive")]
    Rk45Adaptive,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Rk4Fixed => "rk4-fixed",
            Method::Rk45Adaptive => "rk45-adaptive",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4-fixed" => Ok(Method::Rk4Fixed),
            "rk45-adaptive" => Ok(Method::Rk45Adaptive),
            other => Err(Error::Argument(format!("unknown integration method `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step for RK4, initial step for RK45; also the output sample spacing.
    pub dt: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub renormalize: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Rk45Adaptive,
            dt: 0.01,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            renormalize: false,
        }
    }
}

impl IntegratorConfig {
    pub fn rk4(dt: f64) -> Self {
        Self {
            method: Method::Rk4Fixed,
            dt,
            ..Self::default()
        }
    }

    pub fn adaptive(dt: f64, rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            method: Method::Rk45Adaptive,
            dt,
            rel_tol,
            abs_tol,
            renormalize: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Argument(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Argument("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// Population reached the top Fock levels.
    TruncationSuspect,
    Renormalized,
    /// Final norm left `1 +- NORM_DRIFT_TOL`.
    NormDrift,
    /// Two series on different grids were compared after interpolation.
    Resampled,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::TruncationSuspect => "truncation_suspect",
            Flag::Renormalized => "renormalized",
            Flag::NormDrift => "norm_drift",
            Flag::Resampled => "resampled",
        })
    }
}

impl FromStr for Flag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "truncation_suspect" => Ok(Flag::TruncationSuspect),
            "renormalized" => Ok(Flag::Renormalized),
            "norm_drift" => Ok(Flag::NormDrift),
            "resampled" => Ok(Flag::Resampled),
            other => Err(Error::Argument(format!("unknown flag `{other}`"))),
        }
    }
}

/// Sampled trajectory.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub norms: Vec<f64>,
    pub flags: BTreeSet<Flag>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map(StateVector::dim).unwrap_or(0)
    }

    pub fn push(&mut self, t: f64, state: StateVector) {
        self.norms.push(state.norm());
        self.times.push(t);
        self.states.push(state);
    }

    pub fn last(&self) -> Option<&StateVector> {
        self.states.last()
    }

    /// `|amp_k|^2` per sample.
    pub fn population(&self, k: usize) -> Vec<f64> {
        self.states.iter().map(|s| s.amplitudes()[k].norm_sqr()).collect()
    }

    /// Apply `f` to every state, keeping times and flags.
    pub fn map_states(&self, f: impl Fn(f64, &StateVector) -> StateVector) -> Self {
        let mut out = TimeSeries {
            flags: self.flags.clone(),
            ..Default::default()
        };
        for (&t, s) in self.times.iter().zip(&self.states) {
            out.push(t, f(t, s));
        }
        out
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.norms.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// A Hamiltonian as a function of time.
pub trait Hamiltonian {
    fn at(&self, t: f64) -> Cow<'_, ComplexMatrix>;
}

impl Hamiltonian for ComplexMatrix {
    fn at(&self, _t: f64) -> Cow<'_, ComplexMatrix> {
        Cow::Borrowed(self)
    }
}

impl<F> Hamiltonian for F
where
    F: Fn(f64) -> ComplexMatrix,
{
    fn at(&self, t: f64) -> Cow<'_, ComplexMatrix> {
        Cow::Owned(self(t))
    }
}

/// A first-order complex ODE `y' = f(t, y)`.
pub trait ComplexOde {
    fn rhs(&self, t: f64, y: &[C64], dy: &mut [C64]) -> Result<()>;
}

struct Schrodinger<'a, H: Hamiltonian + ?Sized> {
    h: &'a H,
    dim: usize,
}

impl<H: Hamiltonian + ?Sized> ComplexOde for Schrodinger<'_, H> {
    fn rhs(&self, t: f64, y: &[C64], dy: &mut [C64]) -> Result<()> {
        let h = self.h.at(t);
        check_hamiltonian(&h, self.dim, t)?;
        h.apply_into(y, dy);
        for z in dy.iter_mut() {
            // -i z
            *z = C64::new(z.im, -z.re);
        }
        Ok(())
    }
}

fn check_hamiltonian(h: &ComplexMatrix, dim: usize, t: f64) -> Result<()> {
    if h.rows() != dim || h.cols() != dim {
        return Err(Error::Dimension(format!(
            "Hamiltonian at t = {t} is {}x{}, state has dimension {dim}",
            h.rows(),
            h.cols()
        )));
    }
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NonHermitian { t, defect });
    }
    Ok(())
}

/// Integrate the Schrodinger equation from `psi0` at `t0` to `t1`.
pub fn integrate<H: Hamiltonian + ?Sized>(
    h: &H,
    psi0: &StateVector,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<TimeSeries> {
    psi0.require_normalized("initial state")?;
    let ode = Schrodinger { h, dim: psi0.dim() };
    let mut ts = TimeSeries::default();
    solve_ode(&ode, psi0.amplitudes(), t0, t1, cfg, |t, y| {
        ts.push(t, StateVector::from_raw(y.to_vec()));
        Ok(())
    })?;
    if cfg.renormalize {
        ts.flags.insert(Flag::Renormalized);
    }
    if let Some(last) = ts.norms.last() {
        if (last - 1.0).abs() > NORM_DRIFT_TOL {
            ts.flags.insert(Flag::NormDrift);
        }
    }
    Ok(ts)
}

/// Output grid `t0, t0 + dt, ...`, ending exactly at `t1`.
pub fn sample_grid(t0: f64, t1: f64, dt: f64) -> Vec<f64> {
    let span = t1 - t0;
    let steps = (span / dt - 1e-9).ceil().max(1.0) as usize;
    let mut grid: Vec<f64> = (0..steps).map(|k| t0 + k as f64 * dt).collect();
    grid.push(t1);
    grid
}

/// Drive `ode` across the sample grid, calling `observe` at every sample
/// (including `t0`). With `cfg.renormalize` the state the stepper continues
/// from is renormalized at each sample.
pub fn solve_ode<O: ComplexOde + ?Sized>(
    ode: &O,
    y0: &[C64],
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
    mut observe: impl FnMut(f64, &[C64]) -> Result<()>,
) -> Result<()> {
    cfg.validate()?;
    if !(t1 > t0) {
        return Err(Error::Argument(format!("need t1 > t0, got t0 = {t0}, t1 = {t1}")));
    }
    let grid = sample_grid(t0, t1, cfg.dt);
    let mut y = y0.to_vec();
    observe(t0, &y)?;
    let mut stepper = Stepper::new(y.len(), cfg);
    for w in grid.windows(2) {
        stepper.advance(ode, &mut y, w[0], w[1])?;
        if cfg.renormalize {
            let n = norm_of(&y);
            y.iter_mut().for_each(|z| *z /= n);
        }
        observe(w[1], &y)?;
    }
    Ok(())
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b* (fifth minus embedded fourth order weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

struct Stepper {
    cfg: IntegratorConfig,
    h: f64,
    k: [Vec<C64>; 7],
    tmp: Vec<C64>,
    y_new: Vec<C64>,
}

impl Stepper {
    fn new(n: usize, cfg: &IntegratorConfig) -> Self {
        let z = || vec![C64::new(0.0, 0.0); n];
        Self {
            cfg: *cfg,
            h: cfg.dt,
            k: [z(), z(), z(), z(), z(), z(), z()],
            tmp: z(),
            y_new: z(),
        }
    }

    fn advance<O: ComplexOde + ?Sized>(
        &mut self,
        ode: &O,
        y: &mut Vec<C64>,
        t_start: f64,
        t_end: f64,
    ) -> Result<()> {
        match self.cfg.method {
            Method::Rk4Fixed => self.rk4_step(ode, y, t_start, t_end - t_start),
            Method::Rk45Adaptive => self.adaptive_to(ode, y, t_start, t_end),
        }
    }

    fn combo(&mut self, y: &[C64], h: f64, coeffs: &[(usize, f64)]) {
        for (i, out) in self.tmp.iter_mut().enumerate() {
            let mut acc = y[i];
            for &(s, c) in coeffs {
                acc += self.k[s][i] * (h * c);
            }
            *out = acc;
        }
    }

    fn rk4_step<O: ComplexOde + ?Sized>(
        &mut self,
        ode: &O,
        y: &mut [C64],
        t: f64,
        h: f64,
    ) -> Result<()> {
        ode.rhs(t, y, &mut self.k[0])?;
        self.combo(y, h, &[(0, 0.5)]);
        ode.rhs(t + 0.5 * h, &self.tmp, &mut self.k[1])?;
        self.combo(y, h, &[(1, 0.5)]);
        ode.rhs(t + 0.5 * h, &self.tmp, &mut self.k[2])?;
        self.combo(y, h, &[(2, 1.0)]);
        ode.rhs(t + h, &self.tmp, &mut self.k[3])?;
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += (self.k[0][i] + self.k[1][i] * 2.0 + self.k[2][i] * 2.0 + self.k[3][i])
                * (h / 6.0);
        }
        Ok(())
    }

    fn adaptive_to<O: ComplexOde + ?Sized>(
        &mut self,
        ode: &O,
        y: &mut Vec<C64>,
        t_start: f64,
        t_end: f64,
    ) -> Result<()> {
        let mut t = t_start;
        while t < t_end {
            let remaining = t_end - t;
            let last = self.h >= remaining * (1.0 - 1e-12);
            let h = if last { remaining } else { self.h };
            let err = self.dopri_trial(ode, y, t, h)?;
            if err <= 1.0 {
                t = if last { t_end } else { t + h };
                std::mem::swap(y, &mut self.y_new);
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                // a step clipped to hit the sample says little about the scale
                if !last || h * factor > self.h {
                    self.h = h * factor;
                }
            } else {
                let factor = (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
                self.h = h * factor;
            }
            if self.h <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepUnderflow { t, step: self.h });
            }
        }
        Ok(())
    }

    /// One Dormand-Prince trial step into `y_new`; returns the scaled error norm.
    fn dopri_trial<O: ComplexOde + ?Sized>(
        &mut self,
        ode: &O,
        y: &[C64],
        t: f64,
        h: f64,
    ) -> Result<f64> {
        ode.rhs(t, y, &mut self.k[0])?;
        self.combo(y, h, &[(0, A21)]);
        ode.rhs(t + C2 * h, &self.tmp, &mut self.k[1])?;
        self.combo(y, h, &[(0, A31), (1, A32)]);
        ode.rhs(t + C3 * h, &self.tmp, &mut self.k[2])?;
        self.combo(y, h, &[(0, A41), (1, A42), (2, A43)]);
        ode.rhs(t + C4 * h, &self.tmp, &mut self.k[3])?;
        self.combo(y, h, &[(0, A51), (1, A52), (2, A53), (3, A54)]);
        ode.rhs(t + C5 * h, &self.tmp, &mut self.k[4])?;
        self.combo(y, h, &[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)]);
        ode.rhs(t + h, &self.tmp, &mut self.k[5])?;
        self.combo(y, h, &[(0, B1), (2, B3), (3, B4), (4, B5), (5, B6)]);
        self.y_new.copy_from_slice(&self.tmp);
        ode.rhs(t + h, &self.y_new, &mut self.k[6])?;

        let n = y.len() as f64;
        let mut acc = 0.0;
        for i in 0..y.len() {
            let e = (self.k[0][i] * E1
                + self.k[2][i] * E3
                + self.k[3][i] * E4
                + self.k[4][i] * E5
                + self.k[5][i] * E6
                + self.k[6][i] * E7)
                * h;
            let sc = self.cfg.abs_tol + self.cfg.rel_tol * y[i].norm().max(self.y_new[i].norm());
            acc += (e.norm() / sc).powi(2);
        }
        let err = (acc / n).sqrt();
        if !err.is_finite() {
            // force a rejection and a smaller step
            return Ok(1e10);
        }
        Ok(err)
    }
}

/// `<psi(t)| obs |psi(t)>` per sample.
pub fn observable_series(ts: &TimeSeries, obs: &ComplexMatrix) -> Result<Vec<f64>> {
    if !obs.is_square() || (!ts.is_empty() && obs.rows() != ts.dim()) {
        return Err(Error::Dimension(format!(
            "observable is {}x{}, states have dimension {}",
            obs.rows(),
            obs.cols(),
            ts.dim()
        )));
    }
    if !obs.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::Argument("observable must be Hermitian".into()));
    }
    let mut scratch = vec![C64::new(0.0, 0.0); obs.rows()];
    ts.states
        .iter()
        .map(|s| {
            obs.apply_into(s.amplitudes(), &mut scratch);
            let ev = s
                .amplitudes()
                .iter()
                .zip(&scratch)
                .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b);
            if ev.im.abs() > 1e-10 {
                return Err(Error::Argument(format!(
                    "expectation value has imaginary residue {:e}",
                    ev.im
                )));
            }
            Ok(ev.re)
        })
        .collect()
}

//! Laser-driven two-level atom.
//!
//! `H(t) = -(Delta/2) sigma_3 + 2 g cos(omega t + phi) sigma_1`, its
//! rotating-wave reduction, the rotating frame in which that reduction is
//! constant, and the disentangling pathway that reaches the exact dynamics
//! through a Riccati equation.
//!
//! Lab-frame closed forms drop the global phase `e^{i(omega t + phi)/2}` and
//! identify `Psi(0)` with `Phi(0)`; compare them with [`fidelity`], not
//! entrywise.
//!
//! [`fidelity`]: crate::linalg::fidelity

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{solve_ode, ComplexOde, IntegratorConfig, TimeSeries};
use crate::linalg::{pauli, ComplexMatrix, Pauli, StateVector};

/// Tolerance on `|Delta - omega|` for the resonant closed form.
pub const RESONANCE_TOL: f64 = 1e-12;

/// `|F|` beyond which the disentangling solution is treated as at a pole.
pub const POLE_MAGNITUDE: f64 = 1e8;

/// Smallest admissible `|e^{iG}|` (the divisor in the `H` equation).
pub const POLE_DIVISOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveParams {
    /// Level splitting `E1 - E0`.
    pub delta: f64,
    /// Coupling strength (drive amplitude absorbed).
    pub g: f64,
    /// Laser angular frequency.
    pub omega: f64,
    /// Laser phase.
    #[serde(default)]
    pub phi: f64,
}

impl DriveParams {
    pub fn new(delta: f64, g: f64, omega: f64, phi: f64) -> Result<Self> {
        let p = Self { delta, g, omega, phi };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.delta, self.g, self.omega, self.phi]
            .iter()
            .all(|x| x.is_finite());
        if !all_finite {
            return Err(Error::Argument("drive parameters must be finite".into()));
        }
        if self.delta <= 0.0 {
            return Err(Error::Argument(format!("delta must be > 0, got {}", self.delta)));
        }
        if self.g < 0.0 {
            return Err(Error::Argument(format!("g must be >= 0, got {}", self.g)));
        }
        if self.omega <= 0.0 {
            return Err(Error::Argument(format!("omega must be > 0, got {}", self.omega)));
        }
        Ok(())
    }

    /// `Delta - omega`.
    pub fn detuning(&self) -> f64 {
        self.delta - self.omega
    }

    pub fn is_resonant(&self) -> bool {
        self.detuning().abs() <= RESONANCE_TOL
    }

    /// `sqrt(((Delta - omega)/2)^2 + g^2)`.
    pub fn generalized_rabi(&self) -> f64 {
        (0.25 * self.detuning().powi(2) + self.g * self.g).sqrt()
    }

    fn phase_angle(&self, t: f64) -> f64 {
        self.omega * t + self.phi
    }
}

fn m2(a: C64, b: C64, c: C64, d: C64) -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![a, b, c, d]).expect("2x2")
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn hamiltonian_full(t: f64, p: &DriveParams) -> ComplexMatrix {
    let c = re(2.0 * p.g * p.phase_angle(t).cos());
    m2(re(-p.delta / 2.0), c, c, re(p.delta / 2.0))
}

/// `2 cos(theta)` replaced by `e^{i theta}` above the diagonal.
pub fn hamiltonian_rwa(t: f64, p: &DriveParams) -> ComplexMatrix {
    let e = C64::from_polar(p.g, p.phase_angle(t));
    m2(re(-p.delta / 2.0), e, e.conj(), re(p.delta / 2.0))
}

/// Constant generator of the rotating-frame dynamics,
/// `[[-(Delta-omega)/2, g], [g, (Delta-omega)/2]]`.
pub fn rotating_frame_hamiltonian(p: &DriveParams) -> ComplexMatrix {
    let d = p.detuning() / 2.0;
    m2(re(-d), re(p.g), re(p.g), re(d))
}

/// `diag(e^{-i theta/2}, e^{i theta/2})` with `theta = omega t + phi`.
pub fn rotating_frame_matrix(t: f64, p: &DriveParams) -> ComplexMatrix {
    let half = p.phase_angle(t) / 2.0;
    ComplexMatrix::from_diag(&[C64::from_polar(1.0, -half), C64::from_polar(1.0, half)])
}

/// `Phi = diag(e^{-i theta/2}, e^{i theta/2}) Psi`.
pub fn to_rotating_frame(psi: &StateVector, t: f64, p: &DriveParams) -> Result<StateVector> {
    rotate(psi, -p.phase_angle(t) / 2.0)
}

/// Inverse of [`to_rotating_frame`].
pub fn from_rotating_frame(phi: &StateVector, t: f64, p: &DriveParams) -> Result<StateVector> {
    rotate(phi, p.phase_angle(t) / 2.0)
}

fn rotate(v: &StateVector, half: f64) -> Result<StateVector> {
    if v.dim() != 2 {
        return Err(Error::Dimension(format!(
            "two-level state expected, got dimension {}",
            v.dim()
        )));
    }
    let a = v.amplitudes();
    Ok(StateVector::from_raw(vec![
        a[0] * C64::from_polar(1.0, half),
        a[1] * C64::from_polar(1.0, -half),
    ]))
}

/// Resonant rotating-wave propagator with the global phase removed:
/// `[[cos gt, -i sin gt], [-i e^{-i theta} sin gt, e^{-i theta} cos gt]]`.
///
/// At `t = 0` this is `diag(1, e^{-i phi})`, not the identity; for `phi = 0`
/// or a basis-state initial condition it is the exact propagator up to
/// global phase.
pub fn propagator_rwa_resonance(t: f64, p: &DriveParams) -> Result<ComplexMatrix> {
    if !p.is_resonant() {
        return Err(Error::Precondition(format!(
            "resonant propagator needs delta == omega (detuning {:e}); use propagator_rwa_detuned",
            p.detuning()
        )));
    }
    let (s, c) = (p.g * t).sin_cos();
    let ph = C64::from_polar(1.0, -p.phase_angle(t));
    Ok(m2(re(c), C64::new(0.0, -s), ph * C64::new(0.0, -s), ph * c))
}

/// `exp(-i t M)` for the constant rotating-frame generator, in closed form:
/// `cos(W t) I - i t sinc(W t) M` with `W` the generalized Rabi frequency.
pub fn rotating_propagator_rwa(t: f64, p: &DriveParams) -> ComplexMatrix {
    let w = p.generalized_rabi();
    let c = (w * t).cos();
    let s = t * sinc(w * t);
    let m = rotating_frame_hamiltonian(p);
    &ComplexMatrix::identity(2).scale_real(c) - &m.scale(C64::new(0.0, s))
}

/// Lab-frame rotating-wave propagator for arbitrary detuning, with the same
/// phase conventions as [`propagator_rwa_resonance`], to which it reduces at
/// zero detuning.
pub fn propagator_rwa_detuned(t: f64, p: &DriveParams) -> ComplexMatrix {
    // e^{-i theta/2} R(t)^{-1} = diag(1, e^{-i theta})
    let back = ComplexMatrix::from_diag(&[re(1.0), C64::from_polar(1.0, -p.phase_angle(t))]);
    &back * &rotating_propagator_rwa(t, p)
}

/// Exact lab-frame propagator of the rotating-wave Hamiltonian,
/// `R(t)^{-1} exp(-i t M) R(0)`, global phase included.
pub fn propagator_rwa_lab(t: f64, p: &DriveParams) -> ComplexMatrix {
    let back = rotating_frame_matrix(t, p).dagger();
    &(&back * &rotating_propagator_rwa(t, p)) * &rotating_frame_matrix(0.0, p)
}

/// `sin(x)/x` with the removable singularity filled.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Coefficients of the disentangling form
/// `Psi(t) = e^{-iF sigma_+} e^{-iG tau_3} e^{-iH sigma_-} Psi(0)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DisentangleState {
    pub f: C64,
    pub g: C64,
    pub h: C64,
}

impl DisentangleState {
    fn from_slice(y: &[C64]) -> Self {
        Self { f: y[0], g: y[1], h: y[2] }
    }
}

/// Time derivative of the disentangling coefficients under `H(t)`:
///
/// ```text
/// F' = c (1 + F^2) + i Delta F
/// G' = -Delta + 2 i c F
/// H' = c e^{-iG}
/// ```
///
/// with `c = 2 g cos(omega t + phi)`. The `H` equation uses the exact
/// conjugation `e^{-iG tau_3} sigma_- e^{iG tau_3} = e^{iG} sigma_-`.
pub fn riccati_rhs(s: &DisentangleState, t: f64, p: &DriveParams) -> Result<DisentangleState> {
    if !(s.f.norm() <= POLE_MAGNITUDE) {
        return Err(Error::Singularity {
            t,
            reason: format!("|F| = {:e} exceeds {POLE_MAGNITUDE:e}", s.f.norm()),
        });
    }
    // |e^{iG}| = e^{-Im G}
    let divisor = (-s.g.im).exp();
    if !(divisor >= POLE_DIVISOR) {
        return Err(Error::Singularity {
            t,
            reason: format!("|e^(iG)| = {divisor:e} below {POLE_DIVISOR:e}"),
        });
    }
    let i = C64::i();
    let c = 2.0 * p.g * p.phase_angle(t).cos();
    Ok(DisentangleState {
        f: c * (1.0 + s.f * s.f) + i * p.delta * s.f,
        g: -p.delta + 2.0 * i * c * s.f,
        h: c * (-i * s.g).exp(),
    })
}

/// `(I - iF sigma_+) diag(e^{-iG/2}, e^{iG/2}) (I - iH sigma_-)`.
pub fn reconstruct_disentangled(s: &DisentangleState) -> ComplexMatrix {
    let i = C64::i();
    let lower = &ComplexMatrix::identity(2) - &pauli(Pauli::Minus).scale(i * s.h);
    let upper = &ComplexMatrix::identity(2) - &pauli(Pauli::Plus).scale(i * s.f);
    let mid = ComplexMatrix::from_diag(&[(-i * s.g / 2.0).exp(), (i * s.g / 2.0).exp()]);
    &(&upper * &mid) * &lower
}

struct Disentangle<'a>(&'a DriveParams);

impl ComplexOde for Disentangle<'_> {
    fn rhs(&self, t: f64, y: &[C64], dy: &mut [C64]) -> Result<()> {
        let d = riccati_rhs(&DisentangleState::from_slice(y), t, self.0)?;
        dy[0] = d.f;
        dy[1] = d.g;
        dy[2] = d.h;
        Ok(())
    }
}

/// Integration settings for [`solve_beyond_rwa`] with sample spacing `dt`.
pub fn beyond_rwa_config(dt: f64) -> IntegratorConfig {
    IntegratorConfig::adaptive(dt, 1e-11, 1e-13)
}

/// Exact driven-atom dynamics through the disentangling coefficients.
pub fn solve_beyond_rwa(
    p: &DriveParams,
    t_final: f64,
    dt: f64,
    psi0: &StateVector,
) -> Result<TimeSeries> {
    solve_beyond_rwa_with(p, t_final, psi0, &beyond_rwa_config(dt))
}

pub fn solve_beyond_rwa_with(
    p: &DriveParams,
    t_final: f64,
    psi0: &StateVector,
    cfg: &IntegratorConfig,
) -> Result<TimeSeries> {
    p.validate()?;
    psi0.require_normalized("initial state")?;
    if psi0.dim() != 2 {
        return Err(Error::Dimension(format!(
            "two-level state expected, got dimension {}",
            psi0.dim()
        )));
    }
    let mut ts = TimeSeries::default();
    let zero = [C64::new(0.0, 0.0); 3];
    solve_ode(&Disentangle(p), &zero, 0.0, t_final, cfg, |t, y| {
        let s = DisentangleState::from_slice(y);
        if !(s.f.norm() <= POLE_MAGNITUDE) {
            return Err(Error::Singularity {
                t,
                reason: format!("|F| = {:e} exceeds {POLE_MAGNITUDE:e}", s.f.norm()),
            });
        }
        ts.push(t, reconstruct_disentangled(&s).apply(psi0)?);
        Ok(())
    })?;
    Ok(ts)
}

/// Trajectory of the disentangling coefficients themselves.
pub fn disentangle_trajectory(
    p: &DriveParams,
    t_final: f64,
    cfg: &IntegratorConfig,
) -> Result<Vec<(f64, DisentangleState)>> {
    p.validate()?;
    let mut out = Vec::new();
    let zero = [C64::new(0.0, 0.0); 3];
    solve_ode(&Disentangle(p), &zero, 0.0, t_final, cfg, |t, y| {
        out.push((t, DisentangleState::from_slice(y)));
        Ok(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_series, fidelity};
    use std::f64::consts::FRAC_PI_2;

    fn params(delta: f64, g: f64, omega: f64, phi: f64) -> DriveParams {
        DriveParams::new(delta, g, omega, phi).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(DriveParams::new(0.0, 0.1, 1.0, 0.0).is_err());
        assert!(DriveParams::new(1.0, -0.1, 1.0, 0.0).is_err());
        assert!(DriveParams::new(1.0, 0.1, 0.0, 0.0).is_err());
        assert!(DriveParams::new(1.0, f64::NAN, 1.0, 0.0).is_err());
    }

    #[test]
    fn full_hamiltonian_cases() {
        let p = params(1.2, 0.3, 0.9, 0.0);
        let h0 = hamiltonian_full(0.0, &p);
        let expected = ComplexMatrix::from_real_rows(&[[-0.6, 0.6], [0.6, 0.6]]).unwrap();
        assert!(h0.max_abs_diff(&expected) < 1e-15);

        let off = params(1.2, 0.0, 0.9, 0.4);
        let free = pauli(Pauli::Z).scale_real(-0.6);
        assert_eq!(hamiltonian_full(3.7, &off), free);

        // omega t + phi = pi/2
        let t = (FRAC_PI_2 - 0.4) / 0.9;
        let h = hamiltonian_full(t, &params(1.2, 0.3, 0.9, 0.4));
        assert!(h[(0, 1)].norm() < 1e-15 && h[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn rwa_hamiltonian_cases() {
        let p = params(1.0, 0.25, 1.0, 0.0);
        let h0 = hamiltonian_rwa(0.0, &p);
        let expected = ComplexMatrix::from_real_rows(&[[-0.5, 0.25], [0.25, 0.5]]).unwrap();
        assert!(h0.max_abs_diff(&expected) < 1e-15);
        for k in 0..50 {
            let t = 0.37 * k as f64;
            let h = hamiltonian_rwa(t, &params(1.0, 0.25, 1.3, 0.2));
            assert!((h[(0, 1)].norm() - 0.25).abs() < 1e-15);
            assert!(h.is_hermitian(1e-15));
            assert!(hamiltonian_full(t, &p).is_hermitian(0.0));
        }
        assert_eq!(
            hamiltonian_rwa(2.0, &params(1.0, 0.0, 1.0, 0.0)),
            pauli(Pauli::Z).scale_real(-0.5)
        );
    }

    #[test]
    fn rotating_frame_conjugates_rwa_to_constant() {
        let p = params(1.3, 0.2, 0.8, 0.5);
        let bare = ComplexMatrix::from_real_rows(&[[-0.65, 0.2], [0.2, 0.65]]).unwrap();
        for &t in &[0.0, 0.7, 4.1] {
            let r = rotating_frame_matrix(t, &p);
            let conj = &(&r.dagger() * &bare) * &r;
            assert!(conj.max_abs_diff(&hamiltonian_rwa(t, &p)) < 1e-15);

            // R H R^dagger + i (dR/dt) R^dagger, derivative by central difference
            let eps = 1e-5;
            let dr = (&rotating_frame_matrix(t + eps, &p) - &rotating_frame_matrix(t - eps, &p))
                .scale_real(0.5 / eps);
            let generator = &(&(&r * &hamiltonian_rwa(t, &p)) * &r.dagger())
                + &(&dr * &r.dagger()).scale(C64::i());
            assert!(generator.max_abs_diff(&rotating_frame_hamiltonian(&p)) < 1e-9);
        }
    }

    #[test]
    fn frame_round_trip() {
        let p = params(1.0, 0.1, 1.7, 0.3);
        let psi = StateVector::normalized(vec![C64::new(0.3, 0.4), C64::new(-0.5, 0.2)]).unwrap();
        let there = to_rotating_frame(&psi, 2.9, &p).unwrap();
        let back = from_rotating_frame(&there, 2.9, &p).unwrap();
        assert!(back.max_abs_diff(&psi) < 1e-15);
        assert!((there.norm() - psi.norm()).abs() < 1e-15);
        let at_zero_phase = params(1.0, 0.1, 1.0, 0.0);
        assert_eq!(to_rotating_frame(&psi, 0.0, &at_zero_phase).unwrap(), psi);
    }

    #[test]
    fn resonance_propagator_cases() {
        let phi = 0.6;
        let p = params(1.0, 0.1, 1.0, phi);
        let u0 = propagator_rwa_resonance(0.0, &p).unwrap();
        let expected = ComplexMatrix::from_diag(&[re(1.0), C64::from_polar(1.0, -phi)]);
        assert!(u0.max_abs_diff(&expected) < 1e-15);

        let ket0 = StateVector::basis(2, 0).unwrap();
        for k in 0..40 {
            let t = 0.9 * k as f64;
            let pops = propagator_rwa_resonance(t, &p).unwrap().apply(&ket0).unwrap().populations();
            let gt = 0.1 * t;
            assert!((pops[0] - gt.cos().powi(2)).abs() < 1e-14);
            assert!((pops[1] - gt.sin().powi(2)).abs() < 1e-14);
        }
        let t_half = FRAC_PI_2 / 0.1;
        let pops = propagator_rwa_resonance(t_half, &p).unwrap().apply(&ket0).unwrap().populations();
        assert!((pops[1] - 1.0).abs() < 1e-14);

        assert!(matches!(
            propagator_rwa_resonance(1.0, &params(1.1, 0.1, 1.0, 0.0)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn detuned_reduces_to_resonant() {
        let p = params(1.0, 0.13, 1.0, 0.4);
        for &t in &[0.0, 1.0, 17.3] {
            let a = propagator_rwa_detuned(t, &p);
            let b = propagator_rwa_resonance(t, &p).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-14);
        }
    }

    #[test]
    fn detuned_rotating_propagator_matches_series() {
        for &(delta, g, omega, t) in &[
            (1.3, 0.2, 1.0, 3.3),
            (0.7, 0.05, 1.1, 12.0),
            (2.0, 0.0, 1.0, 5.0),
            (1.0, 0.3, 1.0, 0.0),
        ] {
            let p = params(delta, g, omega, 0.0);
            let series = expm_series(&rotating_frame_hamiltonian(&p), C64::new(0.0, -t)).unwrap();
            assert!(rotating_propagator_rwa(t, &p).max_abs_diff(&series) < 1e-12);
        }
        // g = 0: diag(e^{it(D-w)/2}, e^{-it(D-w)/2})
        let p = params(2.0, 0.0, 1.0, 0.0);
        let u = rotating_propagator_rwa(3.0, &p);
        assert!((u[(0, 0)] - C64::from_polar(1.0, 1.5)).norm() < 1e-15);
        assert!((u[(1, 1)] - C64::from_polar(1.0, -1.5)).norm() < 1e-15);
    }

    #[test]
    fn lab_propagator_is_exact_for_any_phase() {
        let p = params(1.2, 0.15, 1.0, 0.9);
        let psi0 = StateVector::normalized(vec![C64::new(0.6, 0.1), C64::new(0.2, -0.7)]).unwrap();
        let ts = crate::integrator::integrate(
            &|t| hamiltonian_rwa(t, &p),
            &psi0,
            0.0,
            20.0,
            &IntegratorConfig::adaptive(0.5, 1e-12, 1e-14),
        )
        .unwrap();
        for (&t, s) in ts.times.iter().zip(&ts.states) {
            let exact = propagator_rwa_lab(t, &p).apply(&psi0).unwrap();
            assert!(exact.max_abs_diff(s) < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn riccati_rhs_cases() {
        let p = params(1.4, 0.2, 1.0, 0.0);
        let d = riccati_rhs(&DisentangleState::default(), 0.0, &p).unwrap();
        assert!((d.f - 0.4).norm() < 1e-15);
        assert!((d.g + 1.4).norm() < 1e-15);
        assert!((d.h - 0.4).norm() < 1e-15);

        let free = params(1.4, 0.0, 1.0, 0.0);
        let s = DisentangleState { f: C64::new(0.0, 0.0), g: C64::new(-3.0, 0.0), h: C64::new(0.0, 0.0) };
        let d = riccati_rhs(&s, 2.0, &free).unwrap();
        assert_eq!(d.f, C64::new(0.0, 0.0));
        assert_eq!(d.g, C64::new(-1.4, 0.0));
        assert_eq!(d.h, C64::new(0.0, 0.0));
    }

    #[test]
    fn riccati_guards() {
        let p = params(1.0, 0.1, 1.0, 0.0);
        let big = DisentangleState { f: C64::new(2e8, 0.0), ..Default::default() };
        assert!(matches!(riccati_rhs(&big, 1.0, &p), Err(Error::Singularity { t, .. }) if t == 1.0));
        let tiny = DisentangleState { g: C64::new(0.0, 40.0), ..Default::default() };
        assert!(matches!(riccati_rhs(&tiny, 2.0, &p), Err(Error::Singularity { .. })));
    }

    #[test]
    fn reconstruction_cases() {
        assert!(reconstruct_disentangled(&DisentangleState::default())
            .max_abs_diff(&ComplexMatrix::identity(2))
            < 1e-15);
        let s = DisentangleState {
            f: C64::new(0.3, -0.2),
            g: C64::new(-1.1, 0.4),
            h: C64::new(0.05, 0.7),
        };
        let i = C64::i();
        let factors = [
            expm_series(&pauli(Pauli::Plus), -i * s.f).unwrap(),
            expm_series(&crate::linalg::tau3(), -i * s.g).unwrap(),
            expm_series(&pauli(Pauli::Minus), -i * s.h).unwrap(),
        ];
        let composed = &(&factors[0] * &factors[1]) * &factors[2];
        assert!(reconstruct_disentangled(&s).max_abs_diff(&composed) < 1e-14);
    }

    #[test]
    fn free_disentangled_trajectory() {
        let delta = 1.7;
        let p = params(delta, 0.0, 1.0, 0.0);
        let psi0 = StateVector::normalized(vec![C64::new(0.8, 0.0), C64::new(0.0, 0.6)]).unwrap();
        let ts = solve_beyond_rwa(&p, 10.0, 0.25, &psi0).unwrap();
        for (&t, s) in ts.times.iter().zip(&ts.states) {
            let free = ComplexMatrix::from_diag(&[
                C64::from_polar(1.0, delta * t / 2.0),
                C64::from_polar(1.0, -delta * t / 2.0),
            ]);
            assert!(free.apply(&psi0).unwrap().max_abs_diff(s) < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn short_beyond_rwa_matches_direct() {
        let p = params(1.0, 0.05, 1.0, 0.0);
        let psi0 = StateVector::basis(2, 0).unwrap();
        let ric = solve_beyond_rwa(&p, 10.0, 0.5, &psi0).unwrap();
        let direct = crate::integrator::integrate(
            &|t| hamiltonian_full(t, &p),
            &psi0,
            0.0,
            10.0,
            &IntegratorConfig::adaptive(0.5, 1e-11, 1e-13),
        )
        .unwrap();
        for (a, b) in ric.states.iter().zip(&direct.states) {
            assert!(1.0 - fidelity(a, b).unwrap() < 1e-9);
            assert!((a.norm() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn sinc_limits() {
        assert_eq!(sinc(0.0), 1.0);
        assert!((sinc(1e-5) - (1e-5f64).sin() / 1e-5).abs() < 4.0 * f64::EPSILON);
        assert_eq!(sinc(2.0), 2.0f64.sin() / 2.0);
    }
}

//! Scenario files.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! model = "semiclassical-rwa"
//! solver = "analytic"          # optional; "numeric" or "analytic"
//! initial_state = "atom:0"
//! t_final = 100.0              # or g_t_final = 6.283 (t_final = value / g)
//! outputs = ["p1", "sz"]
//!
//! [params]
//! delta = 1.0
//! g = 0.1
//! omega = 1.0
//! phi = 0.0
//!
//! [integrator]                 # optional; every key has a default
//! method = "rk45-adaptive"
//! dt = 0.01
//! rel_tol = 1e-10
//! abs_tol = 1e-12
//! renormalize = false
//! ```
//!
//! Quantum models take `[params] big_omega, omega, g, dim` instead.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fock::{number_state, FockTruncation};
use crate::integrator::IntegratorConfig;
use crate::jc::JcParams;
use crate::linalg::StateVector;
use crate::semiclassical::DriveParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    SemiclassicalFull,
    SemiclassicalRwa,
    SemiclassicalRiccati,
    QuantumRabi,
    JaynesCummings,
    JcDetunedAnalytic,
}

impl Model {
    pub const ALL: [Model; 6] = [
        Model::SemiclassicalFull,
        Model::SemiclassicalRwa,
        Model::SemiclassicalRiccati,
        Model::QuantumRabi,
        Model::JaynesCummings,
        Model::JcDetunedAnalytic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::SemiclassicalFull => "semiclassical-full",
            Model::SemiclassicalRwa => "semiclassical-rwa",
            Model::SemiclassicalRiccati => "semiclassical-riccati",
            Model::QuantumRabi => "quantum-rabi",
            Model::JaynesCummings => "jaynes-cummings",
            Model::JcDetunedAnalytic => "jc-detuned-analytic",
        }
    }

    /// Atom coupled to a quantized mode.
    pub fn is_quantum(self) -> bool {
        matches!(
            self,
            Model::QuantumRabi | Model::JaynesCummings | Model::JcDetunedAnalytic
        )
    }

    /// The model a sweep compares against: rotating-wave models pair with
    /// their exact counterpart and vice versa.
    pub fn counterpart(self) -> Model {
        match self {
            Model::SemiclassicalFull => Model::SemiclassicalRwa,
            Model::SemiclassicalRwa | Model::SemiclassicalRiccati => Model::SemiclassicalFull,
            Model::QuantumRabi => Model::JaynesCummings,
            Model::JaynesCummings | Model::JcDetunedAnalytic => Model::QuantumRabi,
        }
    }

    pub fn default_solver(self) -> Solver {
        match self {
            Model::JcDetunedAnalytic => Solver::Analytic,
            _ => Solver::Numeric,
        }
    }

    pub fn supports(self, solver: Solver) -> bool {
        match solver {
            Solver::Numeric => self != Model::JcDetunedAnalytic,
            Solver::Analytic => matches!(
                self,
                Model::SemiclassicalRwa | Model::JaynesCummings | Model::JcDetunedAnalytic
            ),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown model `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    /// Schrodinger (or Riccati) integration.
    Numeric,
    /// Closed-form propagators.
    Analytic,
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Solver::Numeric => "numeric",
            Solver::Analytic => "analytic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ModelParams {
    Drive(DriveParams),
    Jc(JcParams),
}

impl ModelParams {
    pub fn g(&self) -> f64 {
        match self {
            ModelParams::Drive(p) => p.g,
            ModelParams::Jc(p) => p.g,
        }
    }
}

/// Named expectation values written next to the amplitudes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Observable {
    /// Atom population of slot 0.
    P0,
    /// Atom population of slot 1.
    P1,
    Sx,
    Sy,
    Sz,
    /// Photon number `1 x N`.
    PhotonNumber,
    /// `sigma_3/2 x 1 + 1 x N`.
    Excitation,
    /// `<H(t)>` of the model being run.
    Energy,
    /// `|amp_k|^2` of joint basis state `k`.
    BasisPopulation(usize),
}

impl Observable {
    pub fn name(&self) -> String {
        match self {
            Observable::P0 => "p0".into(),
            Observable::P1 => "p1".into(),
            Observable::Sx => "sx".into(),
            Observable::Sy => "sy".into(),
            Observable::Sz => "sz".into(),
            Observable::PhotonNumber => "n".into(),
            Observable::Excitation => "excitation".into(),
            Observable::Energy => "energy".into(),
            Observable::BasisPopulation(k) => format!("pop:{k}"),
        }
    }

    pub fn needs_field(&self) -> bool {
        matches!(self, Observable::PhotonNumber | Observable::Excitation)
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "p0" => Observable::P0,
            "p1" => Observable::P1,
            "sx" => Observable::Sx,
            "sy" => Observable::Sy,
            "sz" => Observable::Sz,
            "n" => Observable::PhotonNumber,
            "excitation" => Observable::Excitation,
            "energy" => Observable::Energy,
            other => match other.strip_prefix("pop:").map(str::parse) {
                Some(Ok(k)) => Observable::BasisPopulation(k),
                _ => return Err(Error::Argument(format!("unknown observable `{other}`"))),
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub model: Model,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<Solver>,
    pub initial_state: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_t_final: Option<f64>,
    pub outputs: Vec<String>,
    pub params: ModelParams,
    pub integrator: IntegratorConfig,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    model: Model,
    #[serde(default)]
    solver: Option<Solver>,
    initial_state: String,
    #[serde(default)]
    t_final: Option<f64>,
    #[serde(default)]
    g_t_final: Option<f64>,
    #[serde(default)]
    outputs: Vec<String>,
    params: toml::Table,
    #[serde(default)]
    integrator: IntegratorConfig,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::config("", e.message().to_string()))?;
        Self::from_table(table)
    }

    pub fn from_table(table: toml::Table) -> Result<Self> {
        let raw: RawScenario = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::config("", e.message().to_string()))?;
        let params = if raw.model.is_quantum() {
            ModelParams::Jc(parse_params::<JcParams>(raw.params, raw.model)?)
        } else {
            ModelParams::Drive(parse_params::<DriveParams>(raw.params, raw.model)?)
        };
        let sc = Scenario {
            model: raw.model,
            solver: raw.solver,
            initial_state: raw.initial_state,
            t_final: raw.t_final,
            g_t_final: raw.g_t_final,
            outputs: raw.outputs,
            params,
            integrator: raw.integrator,
        };
        sc.validate()?;
        Ok(sc)
    }

    /// Canonical TOML form; parses back to an equal scenario.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn to_table(&self) -> toml::Table {
        toml::Table::try_from(self).expect("scenario serializes")
    }

    /// SHA-256 of the canonical form, lowercase hex.
    pub fn config_hash(&self) -> String {
        Sha256::digest(self.to_toml().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn solver(&self) -> Solver {
        self.solver.unwrap_or(self.model.default_solver())
    }

    pub fn t_final(&self) -> f64 {
        match (self.t_final, self.g_t_final) {
            (Some(t), _) => t,
            (None, Some(gt)) => gt / self.params.g(),
            (None, None) => unreachable!("validated scenario has a duration"),
        }
    }

    pub fn drive_params(&self) -> Option<&DriveParams> {
        match &self.params {
            ModelParams::Drive(p) => Some(p),
            ModelParams::Jc(_) => None,
        }
    }

    pub fn jc_params(&self) -> Option<&JcParams> {
        match &self.params {
            ModelParams::Jc(p) => Some(p),
            ModelParams::Drive(_) => None,
        }
    }

    /// State dimension: 2, or `2D` for the quantum models.
    pub fn dim(&self) -> usize {
        match &self.params {
            ModelParams::Drive(_) => 2,
            ModelParams::Jc(p) => p.joint_dim(),
        }
    }

    pub fn observables(&self) -> Result<Vec<Observable>> {
        self.outputs
            .iter()
            .enumerate()
            .map(|(i, name)| {
                let path = format!("outputs[{i}]");
                let obs: Observable = name.parse().map_err(|_| {
                    Error::config(&path, format!("unknown observable `{name}`"))
                })?;
                if obs.needs_field() && !self.model.is_quantum() {
                    return Err(Error::config(path, format!("`{name}` needs a quantized field")));
                }
                if let Observable::BasisPopulation(k) = obs {
                    if k >= self.dim() {
                        return Err(Error::config(
                            path,
                            format!("basis index {k} out of range for dimension {}", self.dim()),
                        ));
                    }
                }
                Ok(obs)
            })
            .collect()
    }

    pub fn initial_state(&self) -> Result<StateVector> {
        let trunc = self.jc_params().map(|p| p.trunc);
        parse_initial_state(&self.initial_state, trunc)
            .map_err(|e| Error::config("initial_state", strip_kind(e)))
    }

    pub fn validate(&self) -> Result<()> {
        match (&self.params, self.model.is_quantum()) {
            (ModelParams::Drive(p), false) => validate_drive(p)?,
            (ModelParams::Jc(p), true) => validate_jc(p)?,
            _ => {
                return Err(Error::config(
                    "params",
                    format!("parameter set does not match model `{}`", self.model),
                ))
            }
        }
        let solver = self.solver();
        if !self.model.supports(solver) {
            return Err(Error::config(
                "solver",
                format!("model `{}` has no {solver} solver", self.model),
            ));
        }
        match (self.t_final, self.g_t_final) {
            (Some(_), Some(_)) => {
                return Err(Error::config("t_final", "give either t_final or g_t_final, not both"))
            }
            (None, None) => return Err(Error::config("t_final", "missing duration")),
            (Some(t), None) => positive("t_final", t)?,
            (None, Some(gt)) => {
                positive("g_t_final", gt)?;
                if self.params.g() <= 0.0 {
                    return Err(Error::config("g_t_final", "needs g > 0"));
                }
            }
        }
        self.integrator
            .validate()
            .map_err(|e| Error::config("integrator", strip_kind(e)))?;
        self.observables()?;
        self.initial_state()?;
        Ok(())
    }
}

fn parse_params<T: serde::de::DeserializeOwned>(table: toml::Table, model: Model) -> Result<T> {
    toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| {
        Error::config("params", format!("for model `{model}`: {}", e.message()))
    })
}

fn strip_kind(e: Error) -> String {
    match e {
        Error::Argument(m) | Error::Dimension(m) | Error::Precondition(m) => m,
        other => other.to_string(),
    }
}

fn positive(path: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::config(path, format!("must be positive and finite, got {x}")))
    }
}

fn finite(path: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::config(path, format!("must be finite, got {x}")))
    }
}

fn validate_drive(p: &DriveParams) -> Result<()> {
    positive("params.delta", p.delta)?;
    positive("params.omega", p.omega)?;
    finite("params.g", p.g)?;
    if p.g < 0.0 {
        return Err(Error::config("params.g", format!("must be >= 0, got {}", p.g)));
    }
    finite("params.phi", p.phi)
}

fn validate_jc(p: &JcParams) -> Result<()> {
    positive("params.big_omega", p.big_omega)?;
    positive("params.omega", p.omega)?;
    finite("params.g", p.g)?;
    if p.g < 0.0 {
        return Err(Error::config("params.g", format!("must be >= 0, got {}", p.g)));
    }
    Ok(())
}

/// Parse an initial-state spec.
///
/// * `atom:K` with `K` in {0, 1};
/// * `atom:K fock:N` for the quantum models (`fock` defaults to 0);
/// * `[c0, c1, ...]`, complex literals such as `0.6`, `0.8i`, `0.1-0.2i`,
///   normalized after parsing.
pub fn parse_initial_state(spec: &str, trunc: Option<FockTruncation>) -> Result<StateVector> {
    let spec = spec.trim();
    let dim = trunc.map_or(2, |t| 2 * t.dim());
    if let Some(body) = spec.strip_prefix('[') {
        let body = body
            .strip_suffix(']')
            .ok_or_else(|| Error::Argument("amplitude list must end with `]`".into()))?;
        let amps = body
            .split(',')
            .map(|s| {
                let s: String = s.split_whitespace().collect();
                C64::from_str(&s).map_err(|_| Error::Argument(format!("bad amplitude `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if amps.len() != dim {
            return Err(Error::Dimension(format!(
                "{} amplitudes given, state dimension is {dim}",
                amps.len()
            )));
        }
        return StateVector::normalized(amps);
    }

    let mut atom = None;
    let mut fock = None;
    for token in spec.split_whitespace() {
        let (key, value) = token
            .split_once(':')
            .ok_or_else(|| Error::Argument(format!("expected key:value, got `{token}`")))?;
        let value: usize = value
            .parse()
            .map_err(|_| Error::Argument(format!("bad index in `{token}`")))?;
        let slot = match key {
            "atom" => &mut atom,
            "fock" => &mut fock,
            other => return Err(Error::Argument(format!("unknown component `{other}`"))),
        };
        if slot.replace(value).is_some() {
            return Err(Error::Argument(format!("`{key}` given twice")));
        }
    }
    let atom = atom.ok_or_else(|| Error::Argument("missing `atom:K`".into()))?;
    let atom_state = StateVector::basis(2, atom)
        .map_err(|_| Error::Argument(format!("atom index must be 0 or 1, got {atom}")))?;
    match (trunc, fock) {
        (None, None) => Ok(atom_state),
        (None, Some(_)) => Err(Error::Argument("`fock` needs a quantized model".into())),
        (Some(t), n) => {
            let n = n.unwrap_or(0);
            let field = number_state(n, t).map_err(|_| {
                Error::Argument(format!("fock index {n} outside truncation {}", t.dim()))
            })?;
            Ok(atom_state.tensor(&field))
        }
    }
}

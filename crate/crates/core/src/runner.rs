//! Scenario execution, comparison reports and parameter sweeps.
//!
//! Every emitted table is comma-separated with a `#`-prefixed header. Run
//! tables carry the canonical scenario in `#| ` lines, so an output file can
//! be fed back to [`load_scenario`] and reproduces the same table byte for
//! byte. Numbers are written in shortest round-trip exponent form.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::integrator::{integrate, sample_grid, Flag, TimeSeries};
use crate::jc::{
    evolve_jc_closed_form, flag_leakage, frame_transform_u, hamiltonian_jc,
    hamiltonian_quantum_rabi, propagator_jc_resonance, simulate_jc, simulate_quantum_rabi,
    JcParams,
};
use crate::linalg::{fidelity, pauli, tensor_product, ComplexMatrix, Pauli, StateVector};
use crate::scenario::{Model, ModelParams, Observable, Scenario, Solver};
use crate::semiclassical::{
    hamiltonian_full, hamiltonian_rwa, propagator_rwa_lab, solve_beyond_rwa_with, DriveParams,
};

pub const VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Relative tolerance under which two sample times count as the same.
const GRID_TOL: f64 = 1e-12;

const CONFIG_PREFIX: &str = "#| ";

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn flag_list(flags: &BTreeSet<Flag>, sep: &str) -> String {
    if flags.is_empty() {
        "none".into()
    } else {
        flags.iter().map(Flag::to_string).collect::<Vec<_>>().join(sep)
    }
}

/// Read a scenario from a TOML file or from a previously written run table.
/// Returns the label (file stem, or the label recorded in a run table).
pub fn load_scenario(path: &Path) -> Result<(String, Scenario)> {
    let text = fs::read_to_string(path).map_err(|e| {
        Error::config(path.display().to_string(), format!("cannot read: {e}"))
    })?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    if text.starts_with('#') {
        let (label, sc) = scenario_from_output(&text)?;
        Ok((label.unwrap_or(stem), sc))
    } else {
        Ok((stem, Scenario::from_toml_str(&text)?))
    }
}

/// Recover the scenario (and label) echoed in a run table's header.
pub fn scenario_from_output(text: &str) -> Result<(Option<String>, Scenario)> {
    let mut label = None;
    let mut config = String::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some(body) = line.strip_prefix(CONFIG_PREFIX) {
            config.push_str(body);
            config.push('\n');
        } else if line == CONFIG_PREFIX.trim_end() {
            config.push('\n');
        } else if let Some(l) = line.strip_prefix("# label: ") {
            label = Some(l.to_string());
        }
    }
    if config.is_empty() {
        return Err(Error::config("", "no scenario record in table header"));
    }
    Ok((label, Scenario::from_toml_str(&config)?))
}

/// A finished scenario run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub label: String,
    pub scenario: Scenario,
    pub config_hash: String,
    pub series: TimeSeries,
    /// Requested observables, one value per sample.
    pub observables: Vec<(String, Vec<f64>)>,
}

impl RunOutput {
    pub fn truncation_suspect(&self) -> bool {
        self.series.flags.contains(&Flag::TruncationSuspect)
    }

    fn solver_description(&self) -> String {
        match self.scenario.solver() {
            Solver::Analytic => "analytic".into(),
            Solver::Numeric => format!("numeric ({})", self.scenario.integrator.method),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let dim = self.series.dim();
        let _ = writeln!(out, "# {VERSION}");
        let _ = writeln!(out, "# kind: run");
        let _ = writeln!(out, "# label: {}", self.label);
        let _ = writeln!(out, "# model: {}", self.scenario.model);
        let _ = writeln!(out, "# solver: {}", self.solver_description());
        let _ = writeln!(out, "# config_hash: {}", self.config_hash);
        let _ = writeln!(out, "# flags: {}", flag_list(&self.series.flags, ","));
        let _ = writeln!(out, "# samples: {}", self.series.len());
        for line in self.scenario.to_toml().lines() {
            let _ = writeln!(out, "{CONFIG_PREFIX}{line}");
        }
        let mut cols = vec!["t".to_string()];
        for k in 0..dim {
            cols.push(format!("re_{k}"));
            cols.push(format!("im_{k}"));
        }
        cols.extend(self.observables.iter().map(|(n, _)| n.clone()));
        cols.push("norm".into());
        let _ = writeln!(out, "{}", cols.join(","));
        for (i, (t, s)) in self.series.times.iter().zip(&self.series.states).enumerate() {
            let mut row = vec![num(*t)];
            for a in s.amplitudes() {
                row.push(num(a.re));
                row.push(num(a.im));
            }
            row.extend(self.observables.iter().map(|(_, v)| num(v[i])));
            row.push(num(self.series.norms[i]));
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    /// Write `<dir>/<label>.csv`.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        write_file(dir, &format!("{}.csv", self.label), &self.to_csv())
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

/// Lift a 2x2 atom operator to the scenario's state space.
fn atom_operator(op: ComplexMatrix, sc: &Scenario) -> ComplexMatrix {
    match sc.jc_params() {
        Some(p) => tensor_product(&op, &ComplexMatrix::identity(p.dim())),
        None => op,
    }
}

fn model_hamiltonian(sc: &Scenario, t: f64) -> ComplexMatrix {
    match (&sc.params, sc.model) {
        (ModelParams::Drive(p), Model::SemiclassicalRwa) => hamiltonian_rwa(t, p),
        (ModelParams::Drive(p), _) => hamiltonian_full(t, p),
        (ModelParams::Jc(p), Model::QuantumRabi) => hamiltonian_quantum_rabi(p),
        (ModelParams::Jc(p), _) => hamiltonian_jc(p),
    }
}

fn expectation(op: &ComplexMatrix, psi: &StateVector) -> Result<f64> {
    Ok(psi.inner(&op.apply(psi)?)?.re)
}

fn observable_values(sc: &Scenario, obs: Observable, ts: &TimeSeries) -> Result<Vec<f64>> {
    let half = C64::new(0.5, 0.0);
    let fixed = match obs {
        Observable::P0 => Some(atom_operator(
            (&pauli(Pauli::Identity) + &pauli(Pauli::Z)).scale(half),
            sc,
        )),
        Observable::P1 => Some(atom_operator(
            (&pauli(Pauli::Identity) - &pauli(Pauli::Z)).scale(half),
            sc,
        )),
        Observable::Sx => Some(atom_operator(pauli(Pauli::X), sc)),
        Observable::Sy => Some(atom_operator(pauli(Pauli::Y), sc)),
        Observable::Sz => Some(atom_operator(pauli(Pauli::Z), sc)),
        Observable::PhotonNumber => sc.jc_params().map(|p| {
            let ops = crate::fock::ladder_ops(p.trunc);
            tensor_product(&ComplexMatrix::identity(2), &ops.n_op)
        }),
        Observable::Excitation => sc.jc_params().map(|p| crate::jc::excitation_number(p.trunc)),
        Observable::BasisPopulation(k) => return Ok(ts.population(k)),
        Observable::Energy => None,
    };
    ts.times
        .iter()
        .zip(&ts.states)
        .map(|(&t, s)| match &fixed {
            Some(op) => expectation(op, s),
            None => expectation(&model_hamiltonian(sc, t), s),
        })
        .collect()
}

fn resonant_jc_lab(p: &JcParams, psi0: &StateVector, t_final: f64, dt: f64) -> Result<TimeSeries> {
    let mut ts = TimeSeries::default();
    for t in sample_grid(0.0, t_final, dt) {
        let u = &frame_transform_u(t, p).dagger() * &propagator_jc_resonance(t, p)?;
        ts.push(t, u.apply(psi0)?);
    }
    flag_leakage(&mut ts, p.trunc);
    Ok(ts)
}

fn analytic_rwa(p: &DriveParams, psi0: &StateVector, t_final: f64, dt: f64) -> Result<TimeSeries> {
    let mut ts = TimeSeries::default();
    for t in sample_grid(0.0, t_final, dt) {
        ts.push(t, propagator_rwa_lab(t, p).apply(psi0)?);
    }
    Ok(ts)
}

/// Trajectory of a validated scenario.
pub fn simulate(sc: &Scenario) -> Result<TimeSeries> {
    let psi0 = sc.initial_state()?;
    let t_final = sc.t_final();
    let cfg = &sc.integrator;
    match (&sc.params, sc.model, sc.solver()) {
        (ModelParams::Drive(p), Model::SemiclassicalFull, _) => {
            integrate(&|t: f64| hamiltonian_full(t, p), &psi0, 0.0, t_final, cfg)
        }
        (ModelParams::Drive(p), Model::SemiclassicalRwa, Solver::Numeric) => {
            integrate(&|t: f64| hamiltonian_rwa(t, p), &psi0, 0.0, t_final, cfg)
        }
        (ModelParams::Drive(p), Model::SemiclassicalRwa, Solver::Analytic) => {
            analytic_rwa(p, &psi0, t_final, cfg.dt)
        }
        (ModelParams::Drive(p), Model::SemiclassicalRiccati, _) => {
            solve_beyond_rwa_with(p, t_final, &psi0, cfg)
        }
        (ModelParams::Jc(p), Model::QuantumRabi, _) => simulate_quantum_rabi(p, &psi0, t_final, cfg),
        (ModelParams::Jc(p), Model::JaynesCummings, Solver::Numeric) => {
            simulate_jc(p, &psi0, t_final, cfg)
        }
        (ModelParams::Jc(p), Model::JaynesCummings, Solver::Analytic) => {
            resonant_jc_lab(p, &psi0, t_final, cfg.dt)
        }
        (ModelParams::Jc(p), Model::JcDetunedAnalytic, _) => {
            evolve_jc_closed_form(p, &psi0, &sample_grid(0.0, t_final, cfg.dt))
        }
        _ => Err(Error::config("params", "parameter set does not match model")),
    }
}

/// Run a scenario and evaluate its requested observables.
pub fn execute(label: &str, sc: &Scenario) -> Result<RunOutput> {
    sc.validate()?;
    let series = simulate(sc)?;
    let observables = sc
        .observables()?
        .into_iter()
        .map(|o| Ok((o.name(), observable_values(sc, o, &series)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RunOutput {
        label: label.to_string(),
        scenario: sc.clone(),
        config_hash: sc.config_hash(),
        series,
        observables,
    })
}

/// Load, run and write one scenario file; returns the run and the table path.
pub fn run_file(path: &Path, out_dir: &Path) -> Result<(RunOutput, PathBuf)> {
    let (label, sc) = load_scenario(path)?;
    let run = execute(&label, &sc)?;
    let written = run.write(out_dir)?;
    Ok((run, written))
}

/// Population of atom slot 1, summed over the field.
pub fn atom_upper_population(psi: &StateVector) -> f64 {
    let half = psi.dim() / 2;
    psi.amplitudes()[half..].iter().map(|a| a.norm_sqr()).sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    /// `max_t max_k |P_a,k(t) - P_b,k(t)|`.
    pub max_deviation: f64,
    pub mean_deviation: f64,
    pub time_of_max: f64,
    pub min_fidelity: f64,
    pub mean_fidelity: f64,
}

/// Sample-by-sample comparison of two runs.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub label_a: String,
    pub label_b: String,
    pub hash_a: String,
    pub hash_b: String,
    pub times: Vec<f64>,
    pub fidelity: Vec<f64>,
    /// `max_k |P_a,k - P_b,k|` per sample.
    pub deviation: Vec<f64>,
    /// `P_a,k - P_b,k` per sample.
    pub population_delta: Vec<Vec<f64>>,
    pub summary: Summary,
    pub flags: BTreeSet<Flag>,
}

fn same_grid(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len()
        && a
            .iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= GRID_TOL * x.abs().max(1.0))
}

/// Linear interpolation of `ts` at `t`, renormalized. `t` must lie inside
/// the sampled span.
fn interpolate(ts: &TimeSeries, t: f64) -> Result<StateVector> {
    let k = ts.times.partition_point(|&x| x < t);
    if k == 0 {
        return Ok(ts.states[0].clone());
    }
    if k == ts.len() {
        return Ok(ts.states[k - 1].clone());
    }
    let (t0, t1) = (ts.times[k - 1], ts.times[k]);
    let w = (t - t0) / (t1 - t0);
    let amps = ts.states[k - 1]
        .amplitudes()
        .iter()
        .zip(ts.states[k].amplitudes())
        .map(|(x, y)| x * (1.0 - w) + y * w)
        .collect();
    StateVector::normalized(amps)
}

pub fn compare(a: &RunOutput, b: &RunOutput) -> Result<ComparisonReport> {
    let (sa, sb) = (&a.series, &b.series);
    if sa.dim() != sb.dim() {
        return Err(Error::Argument(format!(
            "cannot compare `{}` (dimension {}) with `{}` (dimension {})",
            a.label,
            sa.dim(),
            b.label,
            sb.dim()
        )));
    }
    if sa.is_empty() || sb.is_empty() {
        return Err(Error::Argument("cannot compare empty runs".into()));
    }
    let mut flags: BTreeSet<Flag> = sa
        .flags
        .iter()
        .chain(&sb.flags)
        .copied()
        .filter(|f| *f != Flag::Renormalized)
        .collect();

    let pairs: Vec<(f64, StateVector, StateVector)> = if same_grid(&sa.times, &sb.times) {
        sa.times
            .iter()
            .zip(sa.states.iter().zip(&sb.states))
            .map(|(&t, (x, y))| (t, x.clone(), y.clone()))
            .collect()
    } else {
        flags.insert(Flag::Resampled);
        let (lo, hi) = (sb.times[0], sb.times[sb.len() - 1]);
        let slack = GRID_TOL * hi.abs().max(1.0);
        sa.times
            .iter()
            .zip(&sa.states)
            .filter(|(&t, _)| t >= lo - slack && t <= hi + slack)
            .map(|(&t, x)| Ok((t, x.clone(), interpolate(sb, t)?)))
            .collect::<Result<_>>()?
    };
    if pairs.is_empty() {
        return Err(Error::Argument(format!(
            "time grids of `{}` and `{}` do not overlap",
            a.label, b.label
        )));
    }

    let mut report = ComparisonReport {
        label_a: a.label.clone(),
        label_b: b.label.clone(),
        hash_a: a.config_hash.clone(),
        hash_b: b.config_hash.clone(),
        times: Vec::with_capacity(pairs.len()),
        fidelity: Vec::with_capacity(pairs.len()),
        deviation: Vec::with_capacity(pairs.len()),
        population_delta: Vec::with_capacity(pairs.len()),
        summary: Summary {
            max_deviation: 0.0,
            mean_deviation: 0.0,
            time_of_max: pairs[0].0,
            min_fidelity: 1.0,
            mean_fidelity: 0.0,
        },
        flags,
    };
    for (t, x, y) in &pairs {
        let f = fidelity(x, y)?;
        let delta: Vec<f64> = x
            .populations()
            .iter()
            .zip(y.populations())
            .map(|(p, q)| p - q)
            .collect();
        let dev = delta.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
        let s = &mut report.summary;
        if dev > s.max_deviation {
            s.max_deviation = dev;
            s.time_of_max = *t;
        }
        s.min_fidelity = s.min_fidelity.min(f);
        s.mean_deviation += dev;
        s.mean_fidelity += f;
        report.times.push(*t);
        report.fidelity.push(f);
        report.deviation.push(dev);
        report.population_delta.push(delta);
    }
    let n = pairs.len() as f64;
    report.summary.mean_deviation /= n;
    report.summary.mean_fidelity /= n;
    Ok(report)
}

impl ComparisonReport {
    pub fn file_name(&self) -> String {
        format!("{}__vs__{}.csv", self.label_a, self.label_b)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let s = &self.summary;
        let _ = writeln!(out, "# {VERSION}");
        let _ = writeln!(out, "# kind: compare");
        let _ = writeln!(out, "# a: {} {}", self.label_a, self.hash_a);
        let _ = writeln!(out, "# b: {} {}", self.label_b, self.hash_b);
        let _ = writeln!(out, "# flags: {}", flag_list(&self.flags, ","));
        let _ = writeln!(out, "# max_deviation: {}", num(s.max_deviation));
        let _ = writeln!(out, "# mean_deviation: {}", num(s.mean_deviation));
        let _ = writeln!(out, "# time_of_max: {}", num(s.time_of_max));
        let _ = writeln!(out, "# min_fidelity: {}", num(s.min_fidelity));
        let _ = writeln!(out, "# mean_fidelity: {}", num(s.mean_fidelity));
        let dim = self.population_delta.first().map_or(0, Vec::len);
        let mut cols = vec!["t".to_string(), "fidelity".into(), "deviation".into()];
        cols.extend((0..dim).map(|k| format!("dp_{k}")));
        let _ = writeln!(out, "{}", cols.join(","));
        for i in 0..self.times.len() {
            let mut row = vec![
                num(self.times[i]),
                num(self.fidelity[i]),
                num(self.deviation[i]),
            ];
            row.extend(self.population_delta[i].iter().map(|d| num(*d)));
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        write_file(dir, &self.file_name(), &self.to_csv())
    }
}

/// Run two scenario files and compare them.
pub fn compare_files(a: &Path, b: &Path) -> Result<ComparisonReport> {
    let (la, sa) = load_scenario(a)?;
    let (mut lb, sb) = load_scenario(b)?;
    if lb == la {
        lb.push_str("_b");
    }
    compare(&execute(&la, &sa)?, &execute(&lb, &sb)?)
}

/// Copy of `base` with one numeric field replaced.
///
/// `name` is a dotted path into the scenario (`params.g`, `t_final`,
/// `integrator.dt`), a bare parameter name (`g`, searched at top level, then
/// in `params`, then in `integrator`), or `detuning`, which moves the level
/// splitting to `omega + value`.
pub fn with_parameter(base: &Scenario, name: &str, value: f64) -> Result<Scenario> {
    let mut table = base.to_table();
    let path: Vec<String> = if name == "detuning" {
        let key = if base.model.is_quantum() { "big_omega" } else { "delta" };
        let omega = match &base.params {
            ModelParams::Drive(p) => p.omega,
            ModelParams::Jc(p) => p.omega,
        };
        return with_parameter(base, &format!("params.{key}"), omega + value);
    } else if name.contains('.') {
        name.split('.').map(str::to_string).collect()
    } else {
        ["", "params", "integrator"]
            .iter()
            .map(|prefix| {
                if prefix.is_empty() {
                    vec![name.to_string()]
                } else {
                    vec![prefix.to_string(), name.to_string()]
                }
            })
            .find(|p| lookup(&table, p).is_some())
            .ok_or_else(|| Error::Argument(format!("unknown scenario parameter `{name}`")))?
    };
    let slot = lookup_mut(&mut table, &path)
        .ok_or_else(|| Error::Argument(format!("unknown scenario parameter `{name}`")))?;
    *slot = match slot {
        toml::Value::Float(_) => toml::Value::Float(value),
        toml::Value::Integer(_) if value.fract() == 0.0 && value.abs() < 9.0e15 => {
            toml::Value::Integer(value as i64)
        }
        toml::Value::Integer(_) => {
            return Err(Error::Argument(format!("`{name}` takes integer values, got {value}")))
        }
        _ => return Err(Error::Argument(format!("`{name}` is not a numeric field"))),
    };
    Scenario::from_table(table)
}

fn lookup<'a>(table: &'a toml::Table, path: &[String]) -> Option<&'a toml::Value> {
    let (last, parents) = path.split_last()?;
    let mut t = table;
    for key in parents {
        t = t.get(key)?.as_table()?;
    }
    t.get(last)
}

fn lookup_mut<'a>(table: &'a mut toml::Table, path: &[String]) -> Option<&'a mut toml::Value> {
    let (last, parents) = path.split_last()?;
    let mut t = table;
    for key in parents {
        t = t.get_mut(key)?.as_table_mut()?;
    }
    t.get_mut(last)
}

/// One sweep value compared against the counterpart model.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub value: f64,
    pub summary: Summary,
    /// `max_t` atom slot-1 population of the base model.
    pub peak_p1: f64,
    pub peak_p1_counterpart: f64,
    pub flags: BTreeSet<Flag>,
}

#[derive(Clone, Debug)]
pub struct SweepTable {
    pub label: String,
    pub base_hash: String,
    pub model: Model,
    pub counterpart: Model,
    pub parameter: String,
    pub rows: Vec<SweepRow>,
}

fn peak_upper(ts: &TimeSeries) -> f64 {
    ts.states.iter().map(atom_upper_population).fold(0.0, f64::max)
}

fn sweep_point(label: &str, sc: &Scenario, value: f64) -> Result<SweepRow> {
    let mut other = sc.clone();
    other.model = sc.model.counterpart();
    other.solver = None;
    let a = execute(label, sc)?;
    let b = execute(&format!("{label}_{}", other.model), &other)?;
    let report = compare(&a, &b)?;
    Ok(SweepRow {
        value,
        summary: report.summary,
        peak_p1: peak_upper(&a.series),
        peak_p1_counterpart: peak_upper(&b.series),
        flags: report.flags,
    })
}

/// Evaluate `base` and its counterpart model at each value of `parameter`.
/// Values run concurrently; rows keep the order of `values`.
pub fn sweep(label: &str, base: &Scenario, parameter: &str, values: &[f64]) -> Result<SweepTable> {
    if values.is_empty() {
        return Err(Error::Argument("sweep needs at least one value".into()));
    }
    let scenarios = values
        .iter()
        .map(|&v| with_parameter(base, parameter, v))
        .collect::<Result<Vec<_>>>()?;
    let rows = std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios
            .iter()
            .zip(values)
            .map(|(sc, &v)| scope.spawn(move || sweep_point(label, sc, v)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SweepTable {
        label: label.to_string(),
        base_hash: base.config_hash(),
        model: base.model,
        counterpart: base.model.counterpart(),
        parameter: parameter.to_string(),
        rows,
    })
}

impl SweepTable {
    pub fn file_name(&self) -> String {
        format!("{}__sweep_{}.csv", self.label, self.parameter.replace('.', "_"))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {VERSION}");
        let _ = writeln!(out, "# kind: sweep");
        let _ = writeln!(out, "# base: {} {}", self.label, self.base_hash);
        let _ = writeln!(out, "# model: {}", self.model);
        let _ = writeln!(out, "# counterpart: {}", self.counterpart);
        let _ = writeln!(out, "# parameter: {}", self.parameter);
        let _ = writeln!(
            out,
            "value,max_deviation,mean_deviation,time_of_max,min_fidelity,peak_p1,peak_p1_counterpart,flags"
        );
        for r in &self.rows {
            let s = &r.summary;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                num(r.value),
                num(s.max_deviation),
                num(s.mean_deviation),
                num(s.time_of_max),
                num(s.min_fidelity),
                num(r.peak_p1),
                num(r.peak_p1_counterpart),
                flag_list(&r.flags, ";")
            );
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        write_file(dir, &self.file_name(), &self.to_csv())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rwa_scenario(g: f64, solver: &str) -> Scenario {
        Scenario::from_toml_str(&format!(
            r#"
model = "semiclassical-rwa"
solver = "{solver}"
initial_state = "atom:0"
t_final = 20.0
outputs = ["p1", "energy"]
[params]
delta = 1.0
g = {g:?}
omega = 1.0
[integrator]
dt = 0.5
"#
        ))
        .unwrap()
    }

    #[test]
    fn csv_layout() {
        let run = execute("rwa", &rwa_scenario(0.1, "analytic")).unwrap();
        let csv = run.to_csv();
        let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(header, "t,re_0,im_0,re_1,im_1,p1,energy,norm");
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 41);
        assert!(csv.contains("# flags: none"));
        assert!(csv.contains(&format!("# config_hash: {}", run.config_hash)));
    }

    #[test]
    fn output_header_reparses() {
        let sc = rwa_scenario(0.1, "numeric");
        let run = execute("x", &sc).unwrap();
        let (label, back) = scenario_from_output(&run.to_csv()).unwrap();
        assert_eq!(label.as_deref(), Some("x"));
        assert_eq!(back, sc);
        assert_eq!(execute("x", &back).unwrap().to_csv(), run.to_csv());
    }

    #[test]
    fn p1_is_rabi_oscillation() {
        let run = execute("rwa", &rwa_scenario(0.1, "analytic")).unwrap();
        let (_, p1) = &run.observables[0];
        for (t, p) in run.series.times.iter().zip(p1) {
            assert!((p - (0.1 * t).sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn self_comparison() {
        let run = execute("rwa", &rwa_scenario(0.1, "numeric")).unwrap();
        let r = compare(&run, &run).unwrap();
        assert!(r.fidelity.iter().all(|&f| (f - 1.0).abs() < 1e-14));
        assert_eq!(r.summary.max_deviation, 0.0);
        assert!(r.flags.is_empty());
    }

    #[test]
    fn comparison_resamples_different_grids() {
        let fine = execute("fine", &rwa_scenario(0.1, "analytic")).unwrap();
        let mut coarse_sc = rwa_scenario(0.1, "analytic");
        coarse_sc.integrator.dt = 0.3;
        let coarse = execute("coarse", &coarse_sc).unwrap();
        let r = compare(&fine, &coarse).unwrap();
        assert!(r.flags.contains(&Flag::Resampled));
        assert_eq!(r.times, fine.series.times);
        // interpolation error over a 0.3 gap at Rabi frequency 0.1 is small
        assert!(r.summary.max_deviation < 1e-2);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = execute("a", &rwa_scenario(0.1, "analytic")).unwrap();
        let jc = Scenario::from_toml_str(
            r#"
model = "jaynes-cummings"
initial_state = "atom:0"
t_final = 1.0
[params]
big_omega = 1.0
omega = 1.0
g = 0.1
dim = 4
"#,
        )
        .unwrap();
        let b = execute("b", &jc).unwrap();
        assert!(matches!(compare(&a, &b), Err(Error::Argument(_))));
    }

    #[test]
    fn parameter_substitution() {
        let sc = rwa_scenario(0.1, "analytic");
        assert_eq!(with_parameter(&sc, "g", 0.3).unwrap().drive_params().unwrap().g, 0.3);
        assert_eq!(with_parameter(&sc, "params.g", 0.3).unwrap().drive_params().unwrap().g, 0.3);
        assert_eq!(with_parameter(&sc, "t_final", 5.0).unwrap().t_final(), 5.0);
        assert_eq!(with_parameter(&sc, "dt", 0.2).unwrap().integrator.dt, 0.2);
        let det = with_parameter(&sc, "detuning", 0.2).unwrap();
        assert!((det.drive_params().unwrap().detuning() - 0.2).abs() < 1e-15);
        assert!(matches!(with_parameter(&sc, "model", 1.0), Err(Error::Argument(_))));
        assert!(matches!(with_parameter(&sc, "renormalize", 1.0), Err(Error::Argument(_))));
        assert!(matches!(with_parameter(&sc, "nope", 1.0), Err(Error::Argument(_))));
        assert!(matches!(with_parameter(&sc, "g", -1.0), Err(Error::Config { .. })));
    }

    #[test]
    fn single_value_sweep_matches_compare() {
        let sc = rwa_scenario(0.1, "numeric");
        let table = sweep("s", &sc, "g", &[0.1]).unwrap();
        let mut full = sc.clone();
        full.model = Model::SemiclassicalFull;
        full.solver = None;
        let r = compare(&execute("a", &sc).unwrap(), &execute("b", &full).unwrap()).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].summary, r.summary);
        assert_eq!(table.counterpart, Model::SemiclassicalFull);
    }

    #[test]
    fn upper_population_marginal() {
        let psi = StateVector::normalized(vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
        ])
        .unwrap();
        assert!((atom_upper_population(&psi) - 0.5).abs() < 1e-15);
    }
}

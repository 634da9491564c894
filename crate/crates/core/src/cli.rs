//! Scenario configs and the dispatcher behind the `zeno` binary.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{BlochVector, DensityMatrix, MeasurementDirection};
use crate::bath::BathParams;
use crate::directions::{landscape_scan, optimal_directions, DEFAULT_PHI_COUNT, DEFAULT_THETA_COUNT};
use crate::dynamics::{integrate, SuperoperatorForm, DEFAULT_DT};
use crate::error::ZenoError;
use crate::format::{csv_row, round12};
use crate::intelligent::eigenstates_of_s;
use crate::measurement::{discrete_zeno_protocol, eigenstate, steady_state_under_measurement, Outcome};

pub const DEFAULT_T_MAX: f64 = 5.0;
pub const DEFAULT_GAMMA: f64 = 1.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric error: {0}")]
    Numeric(#[from] ZenoError),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numeric(_) => 3,
            Self::Io(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Landscape,
    Evolve,
    Zeno,
    DiscreteZeno,
    Intelligent,
    SteadyState,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DirectionSpec {
    Optimal1,
    Optimal2,
    Angles(MeasurementDirection),
}

impl DirectionSpec {
    pub fn resolve(&self, p: &BathParams) -> MeasurementDirection {
        match self {
            Self::Optimal1 => optimal_directions(p).0,
            Self::Optimal2 => optimal_directions(p).1,
            Self::Angles(d) => *d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    PlusMu,
    MinusMu,
    Excited,
    Ground,
    Mixed,
    Bloch(BlochVector),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub bath: BathParams,
    pub direction: Option<DirectionSpec>,
    pub initial_state: Option<InitialState>,
    pub t_max: f64,
    pub dt: f64,
    pub delta_t: Option<f64>,
    pub phi_count: usize,
    pub theta_count: usize,
    pub output_path: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<Scenario>,
    bath: Option<RawBath>,
    direction: Option<RawDirection>,
    initial_state: Option<RawInitial>,
    t_max: Option<f64>,
    dt: Option<f64>,
    delta_t: Option<f64>,
    grid: Option<RawGrid>,
    output_path: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBath {
    gamma: Option<f64>,
    #[serde(rename = "N")]
    n: Option<f64>,
    psi: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAngles {
    theta: f64,
    phi: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawDirection {
    Token(String),
    Angles(RawAngles),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawInitial {
    Named(String),
    Bloch([f64; 3]),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    phi_count: usize,
    theta_count: usize,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn missing(field: &str, scenario: Scenario) -> CliError {
    config_err(format!("missing required field `{field}` for scenario {scenario:?}"))
}

/// Parses and validates a JSON scenario document, applying defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, CliError> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| config_err(format!("invalid config: {e}")))?;
    let scenario = raw.scenario.ok_or_else(|| config_err("missing required field `scenario`"))?;

    let bath = raw.bath.ok_or_else(|| missing("bath", scenario))?;
    let n = bath.n.ok_or_else(|| missing("bath.N", scenario))?;
    if !(n >= 0.0) {
        return Err(config_err(format!("bath.N = {n} must be >= 0")));
    }
    let gamma = bath.gamma.unwrap_or(DEFAULT_GAMMA);
    let psi = bath.psi.unwrap_or(0.0);
    let bath = BathParams::new(gamma, n, psi).map_err(|e| config_err(format!("bath: {e}")))?;

    let direction = match raw.direction {
        None => None,
        Some(RawDirection::Token(t)) => Some(match t.as_str() {
            "optimal-1" => DirectionSpec::Optimal1,
            "optimal-2" => DirectionSpec::Optimal2,
            other => {
                return Err(config_err(format!(
                    "direction: unknown token `{other}` (expected optimal-1 or optimal-2)"
                )))
            }
        }),
        Some(RawDirection::Angles(a)) => Some(DirectionSpec::Angles(
            MeasurementDirection::new(a.theta, a.phi)
                .map_err(|e| config_err(format!("direction: {e}")))?,
        )),
    };

    let initial_state = match raw.initial_state {
        None => None,
        Some(RawInitial::Named(name)) => Some(match name.as_str() {
            "plus-mu" => InitialState::PlusMu,
            "minus-mu" => InitialState::MinusMu,
            "excited" => InitialState::Excited,
            "ground" => InitialState::Ground,
            "mixed" => InitialState::Mixed,
            other => return Err(config_err(format!("initial_state: unknown state `{other}`"))),
        }),
        Some(RawInitial::Bloch([x, y, z])) => Some(InitialState::Bloch(
            BlochVector::new(x, y, z).map_err(|e| config_err(format!("initial_state: {e}")))?,
        )),
    };

    let t_max = raw.t_max.unwrap_or(DEFAULT_T_MAX);
    let dt = raw.dt.unwrap_or(DEFAULT_DT);
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(config_err(format!("t_max = {t_max} must be > 0")));
    }
    if !(dt > 0.0 && dt <= t_max) {
        return Err(config_err(format!("dt = {dt} must satisfy 0 < dt <= t_max")));
    }
    if let Some(d) = raw.delta_t {
        if !(d > 0.0 && d.is_finite()) {
            return Err(config_err(format!("delta_t = {d} must be > 0")));
        }
    }
    let (phi_count, theta_count) = match raw.grid {
        Some(g) => (g.phi_count, g.theta_count),
        None => (DEFAULT_PHI_COUNT, DEFAULT_THETA_COUNT),
    };
    if phi_count < 2 || theta_count < 2 {
        return Err(config_err("grid counts must be >= 2"));
    }

    let needs_direction = matches!(
        scenario,
        Scenario::Zeno | Scenario::DiscreteZeno | Scenario::SteadyState
    ) || matches!(initial_state, Some(InitialState::PlusMu | InitialState::MinusMu));
    if needs_direction && direction.is_none() {
        return Err(missing("direction", scenario));
    }
    let needs_initial = matches!(
        scenario,
        Scenario::Evolve | Scenario::Zeno | Scenario::DiscreteZeno
    );
    if needs_initial && initial_state.is_none() {
        return Err(missing("initial_state", scenario));
    }
    if scenario == Scenario::DiscreteZeno && raw.delta_t.is_none() {
        return Err(missing("delta_t", scenario));
    }

    Ok(ScenarioConfig {
        scenario,
        bath,
        direction,
        initial_state,
        t_max,
        dt,
        delta_t: raw.delta_t,
        phi_count,
        theta_count,
        output_path: raw.output_path.map(PathBuf::from),
    })
}

impl ScenarioConfig {
    fn direction(&self) -> Result<MeasurementDirection, CliError> {
        self.direction
            .map(|d| d.resolve(&self.bath))
            .ok_or_else(|| missing("direction", self.scenario))
    }

    fn initial(&self) -> Result<DensityMatrix, CliError> {
        let state = self
            .initial_state
            .ok_or_else(|| missing("initial_state", self.scenario))?;
        Ok(match state {
            InitialState::PlusMu => DensityMatrix::pure(&eigenstate(&self.direction()?, Outcome::Plus)),
            InitialState::MinusMu => {
                DensityMatrix::pure(&eigenstate(&self.direction()?, Outcome::Minus))
            }
            InitialState::Excited => DensityMatrix::excited(),
            InitialState::Ground => DensityMatrix::ground(),
            InitialState::Mixed => DensityMatrix::maximally_mixed(),
            InitialState::Bloch(b) => crate::algebra::bloch_to_density(&b)?,
        })
    }
}

fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    text
}

/// Runs the scenario and returns the artifact text (CSV or JSON).
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<String, CliError> {
    let p = &cfg.bath;
    match cfg.scenario {
        Scenario::Landscape => Ok(landscape_scan(p, cfg.phi_count, cfg.theta_count)?.to_csv()),
        Scenario::Evolve => {
            let rho0 = cfg.initial()?;
            Ok(integrate(SuperoperatorForm::Expanded, p, &rho0, cfg.t_max, cfg.dt)?.to_csv())
        }
        Scenario::Zeno => {
            let dir = cfg.direction()?;
            let rho0 = cfg.initial()?;
            let free = integrate(SuperoperatorForm::Expanded, p, &rho0, cfg.t_max, cfg.dt)?;
            let watched = integrate(SuperoperatorForm::Measured(dir), p, &rho0, cfg.t_max, cfg.dt)?;
            let axis = dir.unit_vector();
            let mut out = String::from("t,sigma_mu_unmeasured,sigma_mu_measured,survival\n");
            for (a, b) in free.samples.iter().zip(&watched.samples) {
                let m = b.measured.expect("monitored run records columns");
                out.push_str(&csv_row(&[a.t, a.bloch.dot(&axis), m.sigma_mu_mean, m.survival]));
            }
            Ok(out)
        }
        Scenario::DiscreteZeno => {
            let dir = cfg.direction()?;
            let rho0 = cfg.initial()?;
            let delta_t = cfg.delta_t.ok_or_else(|| missing("delta_t", cfg.scenario))?;
            let n_steps = ((cfg.t_max / delta_t).round() as usize).max(1);
            Ok(discrete_zeno_protocol(p, &dir, &rho0, delta_t, n_steps)?.to_csv())
        }
        Scenario::Intelligent => {
            let (phi1, phi2) = eigenstates_of_s(p)?;
            Ok(json_text(&json!({
                "phi_1": phi1.to_json(),
                "phi_2": phi2.to_json(),
            })))
        }
        Scenario::SteadyState => {
            let dir = cfg.direction()?;
            let b = steady_state_under_measurement(p, &dir)?.bloch();
            Ok(json_text(&json!({
                "rx": round12(b.rx),
                "ry": round12(b.ry),
                "rz": round12(b.rz),
            })))
        }
    }
}

/// Runs the scenario and writes the artifact to `output` (or the config's
/// `output_path`, or standard output when neither is set). Returns the path
/// written, if any.
pub fn execute(cfg: &ScenarioConfig, output: Option<&Path>) -> Result<Option<PathBuf>, CliError> {
    let text = run_scenario(cfg)?;
    let target = output.map(Path::to_path_buf).or_else(|| cfg.output_path.clone());
    match &target {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn landscape_defaults() {
        let cfg = parse_config(r#"{"scenario":"landscape","bath":{"N":1,"psi":0}}"#).unwrap();
        assert_eq!(cfg.scenario, Scenario::Landscape);
        assert_eq!((cfg.phi_count, cfg.theta_count), (400, 200));
        assert_eq!((cfg.t_max, cfg.dt, cfg.bath.gamma()), (5.0, 1e-3, 1.0));
    }

    #[test]
    fn figure_three_config() {
        let cfg = parse_config(
            r#"{"scenario":"zeno","bath":{"N":1,"psi":0},"direction":"optimal-1","initial_state":"minus-mu"}"#,
        )
        .unwrap();
        assert_eq!(cfg.direction, Some(DirectionSpec::Optimal1));
        assert_eq!(cfg.initial_state, Some(InitialState::MinusMu));
    }

    #[test]
    fn validation_errors() {
        let err = parse_config(r#"{"scenario":"evolve","bath":{"N":-1}}"#).unwrap_err();
        assert!(matches!(err, CliError::Config(ref m) if m.contains("bath.N")));
        assert_eq!(err.exit_code(), 2);

        let err = parse_config(r#"{"scenario":"landscape","bath":{"N":1},"colour":3}"#).unwrap_err();
        assert!(err.to_string().contains("colour"));

        let err = parse_config(r#"{"scenario":"zeno","bath":{"N":1},"initial_state":"ground"}"#)
            .unwrap_err();
        assert!(err.to_string().contains("`direction`"));

        let err = parse_config(r#"{"scenario":"landscape","bath":{"psi":1}}"#).unwrap_err();
        assert!(err.to_string().contains("`bath.N`"));

        let err = parse_config(r#"{"scenario":"discrete-zeno","bath":{"N":1},"direction":"optimal-2","initial_state":"plus-mu"}"#)
            .unwrap_err();
        assert!(err.to_string().contains("`delta_t`"));

        assert!(parse_config(r#"{"scenario":"landscape","bath":{"N":1,"psi":7}}"#).is_err());
        assert!(parse_config(r#"{"scenario":"evolve","bath":{"N":1},"initial_state":[1,1,0]}"#).is_err());
        assert!(parse_config(r#"{"scenario":"evolve","bath":{"N":1},"initial_state":"up"}"#).is_err());
        assert!(parse_config("not json").is_err());
    }

    #[test]
    fn explicit_angles_and_bloch_triple() {
        let cfg = parse_config(
            r#"{"scenario":"evolve","bath":{"gamma":2,"N":0.5,"psi":1},"direction":{"theta":1.0,"phi":2.0},"initial_state":[0.1,0.2,0.3],"t_max":1,"dt":0.01}"#,
        )
        .unwrap();
        assert!(matches!(cfg.direction, Some(DirectionSpec::Angles(_))));
        let csv = run_scenario(&cfg).unwrap();
        assert!(csv.starts_with("t,rx,ry,rz\n0,0.1,0.2,0.3\n"));
        assert_eq!(csv.lines().count(), 102);
    }

    #[test]
    fn intelligent_needs_squeezing() {
        let cfg = parse_config(r#"{"scenario":"intelligent","bath":{"N":0}}"#).unwrap();
        let err = run_scenario(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn steady_state_json() {
        let cfg = parse_config(
            r#"{"scenario":"steady-state","bath":{"N":1},"direction":{"theta":0,"phi":0}}"#,
        )
        .unwrap();
        let text = run_scenario(&cfg).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert!((v["rz"].as_f64().unwrap() + 1.0 / 3.0).abs() < 1e-11);
    }
}

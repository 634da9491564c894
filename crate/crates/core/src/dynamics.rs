//! Unmonitored evolution of the two-level system in the squeezed bath.
//!
//! Two algebraically independent right-hand sides are provided (the expanded
//! three-channel Liouvillian and the single jump operator S), together with the
//! closed-form Bloch solution used as the integrator's oracle.

use crate::algebra::{
    bloch_to_density, density_to_bloch, BlochVector, ComplexMatrix2, DensityMatrix,
    MeasurementDirection, C64, ONE,
};
use crate::bath::{lindblad_operator, BathParams};
use crate::error::{Result, ZenoError};
use crate::format::csv_row;
use crate::measurement;

/// Default integration step in units of 1/γ.
pub const DEFAULT_DT: f64 = 1e-3;

/// Largest tolerated drift of the trace, and of the smallest eigenvalue below
/// zero, before a step is rejected.
pub const STEP_TOL: f64 = 1e-6;

/// Which generator drives dρ/dt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SuperoperatorForm {
    Expanded,
    Lindblad,
    /// Continuous monitoring of σ_μ along the given direction.
    Measured(MeasurementDirection),
}

impl SuperoperatorForm {
    pub fn apply(&self, p: &BathParams, m: &ComplexMatrix2) -> ComplexMatrix2 {
        match self {
            Self::Expanded => expanded_generator(p, m),
            Self::Lindblad => lindblad_generator(p, m),
            Self::Measured(dir) => measurement::measured_generator(p, dir, m),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Expanded => "expanded",
            Self::Lindblad => "lindblad",
            Self::Measured(_) => "measured",
        }
    }
}

/// Expanded squeezed-vacuum Liouvillian applied to an arbitrary matrix.
pub fn expanded_generator(p: &BathParams, rho: &ComplexMatrix2) -> ComplexMatrix2 {
    let sp = ComplexMatrix2::sigma_plus();
    let sm = ComplexMatrix2::sigma_minus();
    let (g, n, m) = (p.gamma(), p.n(), p.m());
    let rho = *rho;

    let emission = (sm * rho * sp * 2.0) - sp * sm * rho - rho * sp * sm;
    let absorption = (sp * rho * sm * 2.0) - sm * sp * rho - rho * sm * sp;
    let squeeze = sp * rho * sp * C64::from_polar(g * m, p.psi())
        + sm * rho * sm * C64::from_polar(g * m, -p.psi());

    emission * (0.5 * g * (n + 1.0)) + absorption * (0.5 * g * n) - squeeze
}

/// (γ/2)(2SρS† − ρS†S − S†Sρ) applied to an arbitrary matrix.
pub fn lindblad_generator(p: &BathParams, rho: &ComplexMatrix2) -> ComplexMatrix2 {
    let s = lindblad_operator(p);
    let sd = s.adjoint();
    let sds = sd * s;
    let rho = *rho;
    (s * rho * sd * 2.0 - rho * sds - sds * rho) * (0.5 * p.gamma())
}

pub fn liouvillian_expanded(p: &BathParams, rho: &DensityMatrix) -> ComplexMatrix2 {
    expanded_generator(p, rho.matrix())
}

pub fn liouvillian_lindblad(p: &BathParams, rho: &DensityMatrix) -> ComplexMatrix2 {
    lindblad_generator(p, rho.matrix())
}

/// Closed-form Bloch vector at time t for the unmonitored dynamics.
pub fn analytic_bloch(p: &BathParams, b0: &BlochVector, t: f64) -> Result<BlochVector> {
    if !(t >= 0.0) {
        return Err(ZenoError::NegativeTime(t));
    }
    let (s, c) = (0.5 * p.psi()).sin_cos();
    let slow = (-p.slow_rate() * t).exp();
    let fast = (-p.fast_rate() * t).exp();
    let pop = (-p.population_rate() * t).exp();
    let (x0, y0, z0) = (b0.rx, b0.ry, b0.rz);

    let rx = (x0 * s * s + y0 * s * c) * slow + (x0 * c * c - y0 * s * c) * fast;
    let ry = (y0 * c * c + x0 * s * c) * slow + (y0 * s * s - x0 * s * c) * fast;
    let rz = z0 * pop + (pop - 1.0) / (2.0 * p.n() + 1.0);
    Ok(BlochVector { rx, ry, rz })
}

/// Columns recorded only for monitored evolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuredColumns {
    /// ⟨σ_μ⟩ for the measured direction.
    pub sigma_mu_mean: f64,
    /// Probability that every measurement so far returned the initially
    /// occupied outcome.
    pub survival: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub bloch: BlochVector,
    pub measured: Option<MeasuredColumns>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub samples: Vec<Sample>,
    pub step: f64,
    pub params: BathParams,
    pub form: SuperoperatorForm,
    pub initial: DensityMatrix,
}

impl TimeSeries {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("time series is never empty")
    }

    /// ⟨A⟩ along the trajectory.
    pub fn expectation_of(&self, a: &ComplexMatrix2) -> Result<Vec<f64>> {
        self.samples
            .iter()
            .map(|s| {
                let rho = bloch_to_density(&s.bloch)?;
                crate::algebra::expectation(a, &rho)
            })
            .collect()
    }

    pub fn is_measured(&self) -> bool {
        self.samples.iter().all(|s| s.measured.is_some())
    }

    /// CSV with header `t,rx,ry,rz`, extended by `sigma_mu_mean,survival` for
    /// monitored runs.
    pub fn to_csv(&self) -> String {
        let measured = self.is_measured();
        let mut out = String::from(if measured {
            "t,rx,ry,rz,sigma_mu_mean,survival\n"
        } else {
            "t,rx,ry,rz\n"
        });
        for s in &self.samples {
            let b = s.bloch;
            match (measured, s.measured) {
                (true, Some(m)) => out.push_str(&csv_row(&[
                    s.t,
                    b.rx,
                    b.ry,
                    b.rz,
                    m.sigma_mu_mean,
                    m.survival,
                ])),
                _ => out.push_str(&csv_row(&[s.t, b.rx, b.ry, b.rz])),
            }
        }
        out
    }
}

fn rk4_step(
    form: &SuperoperatorForm,
    p: &BathParams,
    rho: &ComplexMatrix2,
    dt: f64,
) -> ComplexMatrix2 {
    let k1 = form.apply(p, rho);
    let k2 = form.apply(p, &(*rho + k1 * (0.5 * dt)));
    let k3 = form.apply(p, &(*rho + k2 * (0.5 * dt)));
    let k4 = form.apply(p, &(*rho + k3 * dt));
    *rho + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

fn check_state(m: &ComplexMatrix2, t: f64) -> Result<DensityMatrix> {
    if !m.is_finite() {
        return Err(ZenoError::StepRejected {
            t,
            reason: "non-finite state".into(),
        });
    }
    let trace_drift = (m.trace() - ONE).norm();
    if trace_drift > STEP_TOL {
        return Err(ZenoError::StepRejected {
            t,
            reason: format!("trace drifted by {trace_drift:e}; reduce dt"),
        });
    }
    let [low, _] = m.hermitian_eigenvalues();
    if low < -STEP_TOL {
        return Err(ZenoError::StepRejected {
            t,
            reason: format!("eigenvalue {low:e} below zero; reduce dt"),
        });
    }
    DensityMatrix::with_tolerance(*m, STEP_TOL).map_err(|e| ZenoError::StepRejected {
        t,
        reason: e.to_string(),
    })
}

/// Splits `duration` into the fewest equal steps no longer than `max_dt`.
fn step_grid(duration: f64, max_dt: f64) -> Result<(usize, f64)> {
    if !(max_dt > 0.0 && max_dt.is_finite()) {
        return Err(ZenoError::InvalidArgument(format!("dt = {max_dt} must be > 0")));
    }
    if !(duration >= max_dt && duration.is_finite()) {
        return Err(ZenoError::InvalidArgument(format!(
            "t_max = {duration} must be finite and >= dt = {max_dt}"
        )));
    }
    let n = ((duration / max_dt) - 1e-9).ceil().max(1.0) as usize;
    Ok((n, duration / n as f64))
}

/// Fixed-step RK4 integration of dρ/dt = form(ρ) over [0, t_max].
///
/// The step is `t_max / ceil(t_max / dt)`, i.e. `dt` whenever it divides
/// `t_max`. Every step is checked against the density-matrix invariants and
/// rejected (not renormalized) when they drift by more than [`STEP_TOL`].
/// For the measured form the initial state is dephased in the measurement basis
/// first.
pub fn integrate(
    form: SuperoperatorForm,
    p: &BathParams,
    rho0: &DensityMatrix,
    t_max: f64,
    dt: f64,
) -> Result<TimeSeries> {
    let (n_steps, step) = step_grid(t_max, dt)?;

    let monitor = match form {
        SuperoperatorForm::Measured(dir) => Some(Monitor::new(p, &dir, rho0)),
        _ => None,
    };
    let start = match &monitor {
        Some(m) => m.dephased,
        None => *rho0,
    };

    let record = |t: f64, rho: &DensityMatrix| -> Sample {
        let bloch = density_to_bloch(rho);
        Sample {
            t,
            bloch,
            measured: monitor.as_ref().map(|m| m.columns(t, &bloch)),
        }
    };

    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push(record(0.0, &start));
    let mut state = *start.matrix();
    for k in 1..=n_steps {
        let t = k as f64 * step;
        state = rk4_step(&form, p, &state, step);
        let rho = check_state(&state, t)?;
        samples.push(record(t, &rho));
    }

    Ok(TimeSeries {
        samples,
        step,
        params: *p,
        form,
        initial: *rho0,
    })
}

/// Evolves `rho` for `duration` without storing intermediate samples.
pub fn propagate(
    form: SuperoperatorForm,
    p: &BathParams,
    rho: &DensityMatrix,
    duration: f64,
    max_dt: f64,
) -> Result<DensityMatrix> {
    let (n_steps, step) = step_grid(duration, max_dt)?;
    let mut state = *rho.matrix();
    for k in 1..=n_steps {
        state = rk4_step(&form, p, &state, step);
        check_state(&state, k as f64 * step)?;
    }
    check_state(&state, duration)
}

/// Bookkeeping for monitored runs: the tracked outcome and its survival law.
struct Monitor {
    axis: [f64; 3],
    dephased: DensityMatrix,
    initial_population: f64,
    rate: f64,
}

impl Monitor {
    fn new(p: &BathParams, dir: &MeasurementDirection, rho0: &DensityMatrix) -> Self {
        let outcome = measurement::tracked_outcome(dir, rho0);
        Self {
            axis: dir.unit_vector(),
            dephased: measurement::dephase(dir, rho0),
            initial_population: measurement::outcome_population(dir, outcome, rho0),
            rate: measurement::diagonal_rate(p, dir, outcome),
        }
    }

    fn columns(&self, t: f64, bloch: &BlochVector) -> MeasuredColumns {
        MeasuredColumns {
            sigma_mu_mean: bloch.dot(&self.axis),
            survival: self.initial_population * (self.rate * t).exp(),
        }
    }
}

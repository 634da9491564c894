//! Frequent projective measurements of σ_μ.
//!
//! Continuous monitoring replaces L{ρ} by P L{ρ} P + Q L{ρ} Q (Q = 1 − P),
//! which never creates coherences between the two eigenspaces of σ_μ. Any
//! coherence present initially is removed by dephasing ρ₀ once, as the first
//! measurement would. Under that convention the monitored dynamics is a
//! two-state rate equation for the populations of |±⟩_μ.

use crate::algebra::{
    density_to_bloch, direction_eigenstates, ComplexMatrix2, DensityMatrix, MeasurementDirection,
    StateVector2,
};
use crate::bath::BathParams;
use crate::dynamics::{
    expanded_generator, propagate, MeasuredColumns, Sample, SuperoperatorForm, TimeSeries,
    DEFAULT_DT,
};
use crate::error::{Result, ZenoError};

/// Default tolerance of [`total_zeno_condition`], as a multiple of γ.
pub const DEFAULT_ZENO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn eigenvalue(&self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }

    pub fn flipped(&self) -> Self {
        match self {
            Self::Plus => Self::Minus,
            Self::Minus => Self::Plus,
        }
    }
}

/// Rank-one projector |±⟩_μ⟨±|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projector {
    pub direction: MeasurementDirection,
    pub sign: Outcome,
    pub matrix: ComplexMatrix2,
}

pub fn eigenstate(dir: &MeasurementDirection, sign: Outcome) -> StateVector2 {
    let (plus, minus) = direction_eigenstates(dir);
    match sign {
        Outcome::Plus => plus,
        Outcome::Minus => minus,
    }
}

pub fn projector(dir: &MeasurementDirection, sign: Outcome) -> Projector {
    Projector {
        direction: *dir,
        sign,
        matrix: eigenstate(dir, sign).projector(),
    }
}

/// P X P + Q X Q: removes the blocks coupling |+⟩_μ and |−⟩_μ.
fn block_diagonal(dir: &MeasurementDirection, x: &ComplexMatrix2) -> ComplexMatrix2 {
    let p = projector(dir, Outcome::Plus).matrix;
    let q = ComplexMatrix2::identity() - p;
    p * *x * p + q * *x * q
}

/// Monitored generator applied to an arbitrary matrix.
pub fn measured_generator(
    p: &BathParams,
    dir: &MeasurementDirection,
    m: &ComplexMatrix2,
) -> ComplexMatrix2 {
    block_diagonal(dir, &expanded_generator(p, m))
}

pub fn measured_liouvillian(
    p: &BathParams,
    dir: &MeasurementDirection,
    rho: &DensityMatrix,
) -> ComplexMatrix2 {
    measured_generator(p, dir, rho.matrix())
}

/// Nonselective measurement ρ → PρP + QρQ.
pub fn dephase(dir: &MeasurementDirection, rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::new(block_diagonal(dir, rho.matrix())).expect("dephasing preserves states")
}

/// tr(P± ρ)
pub fn outcome_population(dir: &MeasurementDirection, sign: Outcome, rho: &DensityMatrix) -> f64 {
    let v = eigenstate(dir, sign);
    rho.matrix().sandwich(&v, &v).re
}

/// The outcome a survival record follows: the more populated eigenstate of
/// ρ₀, with ties going to `Plus`.
pub fn tracked_outcome(dir: &MeasurementDirection, rho: &DensityMatrix) -> Outcome {
    if outcome_population(dir, Outcome::Plus, rho) >= outcome_population(dir, Outcome::Minus, rho)
    {
        Outcome::Plus
    } else {
        Outcome::Minus
    }
}

/// ⟨s|L{|s⟩⟨s|}|s⟩ evaluated on the Liouvillian itself.
pub fn diagonal_rate(p: &BathParams, dir: &MeasurementDirection, sign: Outcome) -> f64 {
    let v = eigenstate(dir, sign);
    expanded_generator(p, &v.projector()).sandwich(&v, &v).re
}

/// Rate ⟨s'|L{|s⟩⟨s|}|s'⟩ at which monitoring moves population from `from`
/// into the opposite outcome.
pub fn transfer_rate(p: &BathParams, dir: &MeasurementDirection, from: Outcome) -> f64 {
    let v = eigenstate(dir, from);
    let w = eigenstate(dir, from.flipped());
    expanded_generator(p, &v.projector()).sandwich(&w, &w).re
}

/// F(θ, φ) = ⟨+|_μ L{|+⟩_μ⟨+|} |+⟩_μ from the closed form in terms of μ̂.
pub fn decay_exponent_f(p: &BathParams, dir: &MeasurementDirection) -> f64 {
    let [x, y, z] = dir.unit_vector();
    let (g, n, m) = (p.gamma(), p.n(), p.m());
    let (sp, cp) = p.psi().sin_cos();
    let transverse = 0.5 * x * x + 0.5 * y * y;
    -0.5 * g * (n + 1.0) * (z + z * z + transverse) + 0.5 * g * n * (z - z * z - transverse)
        - 0.5 * g * m * x * (cp * x - sp * y)
        + 0.5 * g * m * y * (sp * x + cp * y)
}

/// F(θ, φ) evaluated directly on the superoperator.
pub fn decay_exponent_f_direct(p: &BathParams, dir: &MeasurementDirection) -> f64 {
    diagonal_rate(p, dir, Outcome::Plus)
}

/// exp(F t): probability that continuous monitoring started in |+⟩_μ keeps
/// returning +1 up to time t.
pub fn survival_probability(p: &BathParams, dir: &MeasurementDirection, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(ZenoError::NegativeTime(t));
    }
    Ok((decay_exponent_f(p, dir) * t).exp())
}

/// |F(θ, φ)| < tol·γ
pub fn total_zeno_condition(p: &BathParams, dir: &MeasurementDirection, tol: f64) -> bool {
    decay_exponent_f(p, dir).abs() < tol * p.gamma()
}

/// Measure σ_μ nonselectively every `delta_t`, with unmonitored evolution in
/// between (RK4 at the default step).
///
/// Sample k sits at t = k·Δt just after the k-th measurement; sample 0 is the
/// dephased initial state. The survival column is the probability that every
/// measurement up to t returned the tracked outcome (see [`tracked_outcome`]).
pub fn discrete_zeno_protocol(
    p: &BathParams,
    dir: &MeasurementDirection,
    rho0: &DensityMatrix,
    delta_t: f64,
    n_steps: usize,
) -> Result<TimeSeries> {
    discrete_zeno_protocol_with_step(p, dir, rho0, delta_t, n_steps, DEFAULT_DT)
}

pub fn discrete_zeno_protocol_with_step(
    p: &BathParams,
    dir: &MeasurementDirection,
    rho0: &DensityMatrix,
    delta_t: f64,
    n_steps: usize,
    max_dt: f64,
) -> Result<TimeSeries> {
    if !(delta_t > 0.0 && delta_t.is_finite()) {
        return Err(ZenoError::InvalidArgument(format!(
            "delta_t = {delta_t} must be > 0"
        )));
    }
    if n_steps == 0 {
        return Err(ZenoError::InvalidArgument("n_steps must be >= 1".into()));
    }
    let inner = max_dt.min(delta_t);
    let axis = dir.unit_vector();
    let tracked = tracked_outcome(dir, rho0);
    let tracked_state = DensityMatrix::pure(&eigenstate(dir, tracked));

    // After a +outcome the state is exactly |s⟩⟨s|, so each interval multiplies
    // the survival by the same return probability.
    let returned = propagate(SuperoperatorForm::Expanded, p, &tracked_state, delta_t, inner)?;
    let per_step = outcome_population(dir, tracked, &returned);

    let mut rho = dephase(dir, rho0);
    let mut survival = outcome_population(dir, tracked, rho0);
    let mut samples = Vec::with_capacity(n_steps + 1);
    let record = |t: f64, rho: &DensityMatrix, survival: f64| {
        let bloch = density_to_bloch(rho);
        Sample {
            t,
            bloch,
            measured: Some(MeasuredColumns {
                sigma_mu_mean: bloch.dot(&axis),
                survival,
            }),
        }
    };
    samples.push(record(0.0, &rho, survival));
    for k in 1..=n_steps {
        let evolved = propagate(SuperoperatorForm::Expanded, p, &rho, delta_t, inner)?;
        rho = dephase(dir, &evolved);
        survival *= per_step;
        samples.push(record(k as f64 * delta_t, &rho, survival));
    }

    Ok(TimeSeries {
        samples,
        step: delta_t,
        params: *p,
        form: SuperoperatorForm::Measured(*dir),
        initial: *rho0,
    })
}

/// Fixed point of the monitored dynamics. With dephasing, the populations obey
/// ṗ₊ = −a p₊ + g p₋, so p₊ = g/(a + g).
pub fn steady_state_under_measurement(
    p: &BathParams,
    dir: &MeasurementDirection,
) -> Result<DensityMatrix> {
    let leave_plus = transfer_rate(p, dir, Outcome::Plus);
    let leave_minus = transfer_rate(p, dir, Outcome::Minus);
    let total = leave_plus + leave_minus;
    if !(total > 1e-14 * p.gamma()) {
        return Err(ZenoError::NonUniqueSteadyState);
    }
    let p_plus = leave_minus / total;
    let plus = projector(dir, Outcome::Plus).matrix;
    let minus = projector(dir, Outcome::Minus).matrix;
    DensityMatrix::new(plus * p_plus + minus * (1.0 - p_plus))
}

//! Eigenstates of the jump operator S and their uncertainty structure.
//!
//! With σ₋ = ½(σx − iσy), the explicit states
//! |φ₁,₂⟩ = √(N/(N+M))|+⟩ ± i√(M/(N+M)) e^{−iψ/2}|−⟩ coincide with |+⟩_μ₁ and
//! |+⟩_μ₂ and carry the eigenvalues λ₋ and λ₊ of S respectively
//! (λ± = ±i√M e^{iψ/2}). Correspondingly U|−⟩ ∝ |φ₁⟩ and U|+⟩ ∝ |φ₂⟩.

use serde_json::{json, Value};

use crate::algebra::{
    eigensystem_2x2, ComplexMatrix2, DensityMatrix, StateVector2, C64, I,
};
use crate::bath::{lindblad_operator, rotated_quadrature_operators, BathParams};
use crate::directions::optimal_directions;
use crate::dynamics::{expanded_generator, propagate, SuperoperatorForm, DEFAULT_DT};
use crate::error::{Result, ZenoError};
use crate::format::round12;
use crate::measurement::{eigenstate, Outcome};

const EIGEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntelligentStateReport {
    pub state: StateVector2,
    /// Eigenvalue of S for `state`.
    pub eigenvalue: C64,
    pub var_j1: f64,
    pub var_j2: f64,
    pub jz_mean: f64,
    /// |Δ²J₁ Δ²J₂ − ⟨Jz⟩²/4|
    pub saturation_residual: f64,
}

impl IntelligentStateReport {
    /// JSON object with alphabetically ordered keys.
    pub fn to_json(&self) -> Value {
        let c = |z: C64| json!({ "im": round12(z.im), "re": round12(z.re) });
        let [a, b] = self.state.amplitudes();
        json!({
            "amplitudes": [c(a), c(b)],
            "eigenvalue": c(self.eigenvalue),
            "jz_mean": round12(self.jz_mean),
            "saturation_residual": round12(self.saturation_residual),
            "var_j1": round12(self.var_j1),
            "var_j2": round12(self.var_j2),
        })
    }
}

/// Spin moments of a pure state with respect to J₁, J₂ and Jz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uncertainty {
    pub var_j1: f64,
    pub var_j2: f64,
    pub jz_mean: f64,
}

impl Uncertainty {
    /// Δ²J₁ Δ²J₂ − ⟨Jz⟩²/4, nonnegative by the Heisenberg relation.
    pub fn excess(&self) -> f64 {
        self.var_j1 * self.var_j2 - 0.25 * self.jz_mean * self.jz_mean
    }
}

fn variance(a: &ComplexMatrix2, v: &StateVector2) -> f64 {
    let mean = a.sandwich(v, v).re;
    (*a * *a).sandwich(v, v).re - mean * mean
}

pub fn uncertainty(p: &BathParams, state: &StateVector2) -> Uncertainty {
    let (j1, j2) = rotated_quadrature_operators(p);
    Uncertainty {
        var_j1: variance(&j1, state),
        var_j2: variance(&j2, state),
        jz_mean: ComplexMatrix2::spin_z().sandwich(state, state).re,
    }
}

/// √(N/(N+M))|+⟩ ± i√(M/(N+M)) e^{−iψ/2}|−⟩, upper sign first.
pub fn closed_form_eigenstates(p: &BathParams) -> Result<(StateVector2, StateVector2)> {
    let (n, m) = (p.n(), p.m());
    if n == 0.0 {
        return Err(ZenoError::Defective);
    }
    let a = C64::new((n / (n + m)).sqrt(), 0.0);
    let b = I * (m / (n + m)).sqrt() * C64::from_polar(1.0, -0.5 * p.psi());
    Ok((StateVector2::new(a, b)?, StateVector2::new(a, -b)?))
}

fn report(p: &BathParams, state: StateVector2, eigenvalue: C64) -> IntelligentStateReport {
    let u = uncertainty(p, &state);
    IntelligentStateReport {
        state,
        eigenvalue,
        var_j1: u.var_j1,
        var_j2: u.var_j2,
        jz_mean: u.jz_mean,
        saturation_residual: u.excess().abs(),
    }
}

/// Both eigenpairs of S, ordered as (|φ₁⟩, |φ₂⟩) = (|+⟩_μ₁, |+⟩_μ₂).
///
/// Each pair is checked against |Sv − λv| < 1e-10 and against the explicit
/// amplitudes. At N = 0, S = σ₋ is defective and an error is returned.
pub fn eigenstates_of_s(
    p: &BathParams,
) -> Result<(IntelligentStateReport, IntelligentStateReport)> {
    let s = lindblad_operator(p);
    let pairs = eigensystem_2x2(&s)?;
    let (phi1, phi2) = closed_form_eigenstates(p)?;

    let mut out = Vec::with_capacity(2);
    for target in [phi1, phi2] {
        let pair = pairs
            .iter()
            .min_by(|x, y| {
                x.vector
                    .phase_distance(&target)
                    .total_cmp(&y.vector.phase_distance(&target))
            })
            .expect("two eigenpairs");
        let distance = pair.vector.phase_distance(&target);
        if distance > EIGEN_TOL {
            return Err(ZenoError::Consistency(format!(
                "eigenvector of S differs from the explicit state by {distance:e}"
            )));
        }
        let sv = s.apply(&pair.vector.amplitudes());
        let lv = pair.vector.amplitudes().map(|c| c * pair.value);
        let residual = (sv[0] - lv[0]).norm().max((sv[1] - lv[1]).norm());
        if residual > EIGEN_TOL {
            return Err(ZenoError::Consistency(format!(
                "eigen-equation residual {residual:e}"
            )));
        }
        out.push(report(p, pair.vector, pair.value));
    }
    Ok((out[0], out[1]))
}

fn exp_jz(a: C64) -> ComplexMatrix2 {
    // exp(a Jz)
    ComplexMatrix2::diag((0.5 * a).exp(), (-0.5 * a).exp())
}

/// exp(−iθJy) = cos(θ/2) − i sin(θ/2) σy
fn exp_minus_i_jy(theta: f64) -> ComplexMatrix2 {
    let (s, c) = (0.5 * theta).sin_cos();
    ComplexMatrix2::real(c, -s, s, c)
}

/// U = exp{iπJz/2} exp{β_r Jz} exp{iψJz/2} exp{−iπJy/2} with
/// e^{β_r} = (N/(N+1))^{1/4}. Not unitary for N > 0; |det U| = 1.
///
/// Verifies S = 2i√M e^{iψ/2} U Jz U⁻¹ before returning.
pub fn disentangling_transform_u(p: &BathParams) -> Result<ComplexMatrix2> {
    if p.n() == 0.0 {
        return Err(ZenoError::InvalidBath(
            "U is undefined for N = 0 (beta_r diverges)".into(),
        ));
    }
    let u = exp_jz(I * std::f64::consts::FRAC_PI_2)
        * exp_jz(C64::new(p.beta_r(), 0.0))
        * exp_jz(I * (0.5 * p.psi()))
        * exp_minus_i_jy(std::f64::consts::FRAC_PI_2);

    let u_inv = u
        .inverse()
        .ok_or_else(|| ZenoError::Consistency("U is singular".into()))?;
    let prefactor = 2.0 * I * p.m().sqrt() * C64::from_polar(1.0, 0.5 * p.psi());
    let rebuilt = (u * ComplexMatrix2::spin_z() * u_inv) * prefactor;
    let s = lindblad_operator(p);
    let deviation = s.max_abs_diff(&rebuilt);
    if deviation > EIGEN_TOL * s.max_abs().max(1.0) {
        return Err(ZenoError::Consistency(format!(
            "S = 2i sqrt(M) e^(i psi/2) U Jz U^-1 violated by {deviation:e}"
        )));
    }
    Ok(u)
}

/// Normalized (U|+⟩, U|−⟩).
pub fn transformed_eigenstates(p: &BathParams) -> Result<(StateVector2, StateVector2)> {
    let u = disentangling_transform_u(p)?;
    let up = u.apply(&StateVector2::excited().amplitudes());
    let down = u.apply(&StateVector2::ground().amplitudes());
    Ok((
        StateVector2::new(up[0], up[1])?,
        StateVector2::new(down[0], down[1])?,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureCurves {
    pub t: Vec<f64>,
    pub j1: Vec<f64>,
    pub j2: Vec<f64>,
}

/// Largest tolerated gap between the closed-form quadrature laws and an
/// integrated trajectory.
pub const QUADRATURE_CROSS_CHECK_TOL: f64 = 1e-6;

/// ⟨J₁⟩(t) = ⟨J₁⟩(0) e^{−γ(N+M+½)t} and ⟨J₂⟩(t) = ⟨J₂⟩(0) e^{−γ(N−M+½)t},
/// cross-checked against an RK4 trajectory at γdt = 1e-3.
pub fn quadrature_decay_curves(
    p: &BathParams,
    b0: &crate::algebra::BlochVector,
    t_grid: &[f64],
) -> Result<QuadratureCurves> {
    if t_grid.iter().any(|t| !(*t >= 0.0)) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ZenoError::InvalidArgument(
            "time grid must be nonnegative and strictly increasing".into(),
        ));
    }
    let (s, c) = (0.5 * p.psi()).sin_cos();
    let j1_0 = 0.5 * (c * b0.rx - s * b0.ry);
    let j2_0 = 0.5 * (s * b0.rx + c * b0.ry);
    let j1: Vec<f64> = t_grid.iter().map(|t| j1_0 * (-p.fast_rate() * t).exp()).collect();
    let j2: Vec<f64> = t_grid.iter().map(|t| j2_0 * (-p.slow_rate() * t).exp()).collect();

    let (op1, op2) = rotated_quadrature_operators(p);
    let mut rho = crate::algebra::bloch_to_density(b0)?;
    let mut now = 0.0;
    for (k, &t) in t_grid.iter().enumerate() {
        if t > now {
            let gap = t - now;
            rho = propagate(SuperoperatorForm::Expanded, p, &rho, gap, DEFAULT_DT.min(gap))?;
            now = t;
        }
        let m1 = crate::algebra::expectation(&op1, &rho)?;
        let m2 = crate::algebra::expectation(&op2, &rho)?;
        let gap = (m1 - j1[k]).abs().max((m2 - j2[k]).abs());
        if gap > QUADRATURE_CROSS_CHECK_TOL {
            return Err(ZenoError::Consistency(format!(
                "quadrature law deviates from the trajectory by {gap:e} at t = {t}"
            )));
        }
    }
    Ok(QuadratureCurves {
        t: t_grid.to_vec(),
        j1,
        j2,
    })
}

/// d⟨σ_μ₁⟩/dt at t = 0 for unmonitored evolution from |±⟩_μ₁, from
/// ⟨σ_μ⟩ = 2 sinθ^M ⟨J₂⟩ + 2 cosθ^M ⟨Jz⟩. The decomposition requires
/// ⟨J₁⟩(0) = 0 and is compared with tr(σ_μ L{ρ}).
pub fn initial_slope(p: &BathParams, start: Outcome) -> Result<f64> {
    let (mu1, _) = optimal_directions(p);
    let state = eigenstate(&mu1, start);
    let (j1, j2) = rotated_quadrature_operators(p);
    let jz = ComplexMatrix2::spin_z();

    let j1_mean = j1.sandwich(&state, &state).re;
    if j1_mean.abs() > 1e-12 {
        return Err(ZenoError::Consistency(format!(
            "<J1>(0) = {j1_mean:e} is not zero"
        )));
    }
    let j2_mean = j2.sandwich(&state, &state).re;
    let jz_mean = jz.sandwich(&state, &state).re;
    let d_j2 = -p.slow_rate() * j2_mean;
    let d_jz = -p.population_rate() * jz_mean - 0.5 * p.gamma();
    let (st, ct) = mu1.theta().sin_cos();
    let slope = 2.0 * st * d_j2 + 2.0 * ct * d_jz;

    let sigma_mu = crate::algebra::spin_direction_operator(&mu1);
    let rho = DensityMatrix::pure(&state);
    let direct = (sigma_mu * expanded_generator(p, rho.matrix())).trace().re;
    if (direct - slope).abs() > 1e-12 * p.gamma().max(1.0) * (1.0 + p.n()) {
        return Err(ZenoError::Consistency(format!(
            "slope decomposition {slope:e} disagrees with direct value {direct:e}"
        )));
    }
    Ok(slope)
}

/// Initial slope from |+⟩_μ₁, which must vanish (|slope| < 1e-10 γ).
pub fn initial_slope_check(p: &BathParams) -> Result<f64> {
    let slope = initial_slope(p, Outcome::Plus)?;
    if slope.abs() >= 1e-10 * p.gamma() {
        return Err(ZenoError::Consistency(format!(
            "initial slope {slope:e} does not vanish"
        )));
    }
    Ok(slope)
}

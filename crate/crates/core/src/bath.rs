//! Squeezed-vacuum reservoir parameters and the operators built from them.

use std::f64::consts::PI;

use crate::algebra::{ComplexMatrix2, C64, I, ONE};
use crate::error::{Result, ZenoError};

/// Broadband squeezed-vacuum bath (γ, N, ψ) with maximal correlation
/// M = √(N(N+1)) and squeeze amplitude r (cosh r = √(N+1), sinh r = √N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    gamma: f64,
    n: f64,
    psi: f64,
}

impl BathParams {
    /// γ > 0, N ≥ 0 and ψ ∈ [0, 2π).
    ///
    /// ψ is not wrapped: shifting it by 2π flips the sign of e^{iψ/2} and with it
    /// the labelling of the two eigenvalues of S.
    pub fn new(gamma: f64, n: f64, psi: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(ZenoError::InvalidBath(format!("gamma = {gamma} must be > 0")));
        }
        if !(n.is_finite() && n >= 0.0) {
            return Err(ZenoError::InvalidBath(format!("N = {n} must be >= 0")));
        }
        if !(psi.is_finite() && (0.0..2.0 * PI).contains(&psi)) {
            return Err(ZenoError::InvalidBath(format!(
                "psi = {psi} must lie in [0, 2pi)"
            )));
        }
        Ok(Self { gamma, n, psi })
    }

    /// Unit decay constant.
    pub fn unit_gamma(n: f64, psi: f64) -> Result<Self> {
        Self::new(1.0, n, psi)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn m(&self) -> f64 {
        (self.n * (self.n + 1.0)).sqrt()
    }

    pub fn cosh_r(&self) -> f64 {
        (self.n + 1.0).sqrt()
    }

    pub fn sinh_r(&self) -> f64 {
        self.n.sqrt()
    }

    pub fn r(&self) -> f64 {
        self.sinh_r().asinh()
    }

    /// α = (cosh r + sinh r)/(cosh r − sinh r) = e^{2r}
    pub fn alpha(&self) -> f64 {
        (2.0 * self.r()).exp()
    }

    /// β_r with e^{β_r} = (N/(N+1))^{1/4}; −∞ at N = 0.
    pub fn beta_r(&self) -> f64 {
        0.25 * (self.n / (self.n + 1.0)).ln()
    }

    /// Decay rate γ(N + M + ½) of the major-axis quadrature.
    pub fn fast_rate(&self) -> f64 {
        self.gamma * (self.n + self.m() + 0.5)
    }

    /// Decay rate γ(N − M + ½) of the minor-axis quadrature.
    pub fn slow_rate(&self) -> f64 {
        self.gamma * (self.n - self.m() + 0.5)
    }

    /// Population relaxation rate γ(2N + 1).
    pub fn population_rate(&self) -> f64 {
        self.gamma * (2.0 * self.n + 1.0)
    }

    /// λ₊ = i√M e^{iψ/2}
    pub fn lambda_plus(&self) -> C64 {
        I * self.m().sqrt() * C64::from_polar(1.0, 0.5 * self.psi)
    }

    /// λ₋ = −i√M e^{iψ/2}
    pub fn lambda_minus(&self) -> C64 {
        -self.lambda_plus()
    }
}

/// S = √(N+1) σ₋ − √N e^{iψ} σ₊
pub fn lindblad_operator(p: &BathParams) -> ComplexMatrix2 {
    ComplexMatrix2::sigma_minus() * p.cosh_r()
        - ComplexMatrix2::sigma_plus() * (C64::from_polar(p.sinh_r(), p.psi))
}

/// Quadrature spins rotated by ψ/2 about z:
/// J₁ = cos(ψ/2)Jx − sin(ψ/2)Jy, J₂ = sin(ψ/2)Jx + cos(ψ/2)Jy.
pub fn rotated_quadrature_operators(p: &BathParams) -> (ComplexMatrix2, ComplexMatrix2) {
    let (s, c) = (0.5 * p.psi).sin_cos();
    let jx = ComplexMatrix2::spin_x();
    let jy = ComplexMatrix2::spin_y();
    (jx * c - jy * s, jx * s + jy * c)
}

/// J₋(α) = (J₁ − iαJ₂)/(1 − α²)^{1/2}, principal branch, so that
/// S = 2λ₊ J₋(α). Undefined at N = 0 where α = 1.
pub fn jminus_alpha(p: &BathParams) -> Result<ComplexMatrix2> {
    if p.n == 0.0 {
        return Err(ZenoError::InvalidBath(
            "J-(alpha) is singular for N = 0 (alpha = 1)".into(),
        ));
    }
    let alpha = p.alpha();
    let (j1, j2) = rotated_quadrature_operators(p);
    let norm = C64::new(1.0 - alpha * alpha, 0.0).sqrt();
    let jm = (j1 - j2 * (I * alpha)) * (ONE / norm);

    let s = lindblad_operator(p);
    let deviation = s.max_abs_diff(&(jm * (2.0 * p.lambda_plus())));
    if deviation > 1e-12 * s.max_abs().max(1.0) {
        return Err(ZenoError::Consistency(format!(
            "S = 2 lambda+ J-(alpha) violated by {deviation:e}"
        )));
    }
    Ok(jm)
}

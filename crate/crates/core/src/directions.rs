//! Measurement directions that freeze the decay.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::algebra::MeasurementDirection;
use crate::bath::BathParams;
use crate::error::{Result, ZenoError};
use crate::format::csv_row;
use crate::measurement::decay_exponent_f;

pub const DEFAULT_PHI_COUNT: usize = 400;
pub const DEFAULT_THETA_COUNT: usize = 200;

/// cos θ^M = −1/(2(N + M + ½))
pub fn optimal_cos_theta(p: &BathParams) -> f64 {
    -1.0 / (2.0 * (p.n() + p.m() + 0.5))
}

/// The two zeros of F: θ^M with φ₁ = (π − ψ)/2 and φ₂ = φ₁ + π.
pub fn optimal_directions(p: &BathParams) -> (MeasurementDirection, MeasurementDirection) {
    let theta = optimal_cos_theta(p).acos();
    let phi1 = 0.5 * (PI - p.psi());
    let mu1 = MeasurementDirection::new(theta, phi1).expect("theta from acos lies in [0, pi]");
    let mu2 = MeasurementDirection::new(theta, phi1 + PI).expect("theta from acos lies in [0, pi]");
    (mu1, mu2)
}

/// F(θ, φ)/γ on a uniform grid, φ ∈ [0, 2π) and θ ∈ [0, π] with both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeGrid {
    pub phi_count: usize,
    pub theta_count: usize,
    /// Row-major with θ as the outer index.
    pub values: Vec<f64>,
    pub params: BathParams,
}

impl LandscapeGrid {
    pub fn phi(&self, i: usize) -> f64 {
        TAU * i as f64 / self.phi_count as f64
    }

    pub fn theta(&self, j: usize) -> f64 {
        // fraction first so the last node is exactly π
        PI * (j as f64 / (self.theta_count - 1) as f64)
    }

    pub fn phi_step(&self) -> f64 {
        TAU / self.phi_count as f64
    }

    pub fn theta_step(&self) -> f64 {
        PI / (self.theta_count - 1) as f64
    }

    pub fn value(&self, theta_index: usize, phi_index: usize) -> f64 {
        self.values[theta_index * self.phi_count + phi_index]
    }

    /// `(theta_index, phi_index, value)` of the largest cell; the first one in
    /// row-major order wins ties.
    pub fn argmax(&self) -> (usize, usize, f64) {
        let (k, v) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, &v)| {
                if v > best.1 {
                    (k, v)
                } else {
                    best
                }
            });
        (k / self.phi_count, k % self.phi_count, v)
    }

    /// Header `phi,theta,F_over_gamma`, θ outer, φ inner.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 48);
        out.push_str("phi,theta,F_over_gamma\n");
        for j in 0..self.theta_count {
            let theta = self.theta(j);
            for i in 0..self.phi_count {
                out.push_str(&csv_row(&[self.phi(i), theta, self.value(j, i)]));
            }
        }
        out
    }
}

pub fn landscape_scan(p: &BathParams, phi_count: usize, theta_count: usize) -> Result<LandscapeGrid> {
    if phi_count < 2 || theta_count < 2 {
        return Err(ZenoError::InvalidArgument(format!(
            "grid counts must be >= 2, got {phi_count}x{theta_count}"
        )));
    }
    let mut grid = LandscapeGrid {
        phi_count,
        theta_count,
        values: vec![0.0; phi_count * theta_count],
        params: *p,
    };
    let gamma = p.gamma();
    let thetas: Vec<f64> = (0..theta_count).map(|j| grid.theta(j)).collect();
    let phis: Vec<f64> = (0..phi_count).map(|i| grid.phi(i)).collect();
    grid.values
        .par_chunks_mut(phi_count)
        .zip(thetas.par_iter())
        .try_for_each(|(row, &theta)| -> Result<()> {
            for (cell, &phi) in row.iter_mut().zip(&phis) {
                let dir = MeasurementDirection::new(theta, phi)?;
                *cell = decay_exponent_f(p, &dir) / gamma;
            }
            Ok(())
        })?;
    Ok(grid)
}

const INITIAL_STEP: f64 = 0.1;
const FINAL_STEP: f64 = 1e-10;
const MAX_EVALUATIONS: usize = 1_000_000;

/// Derivative-free coordinate ascent of F over (θ, φ): try ±step on each
/// angle, halve the step when neither move improves, stop below 1e-10 rad.
pub fn numeric_maximize(
    p: &BathParams,
    seed: &MeasurementDirection,
) -> Result<MeasurementDirection> {
    let mut evaluations = 0usize;
    let mut eval = |theta: f64, phi: f64| -> Result<f64> {
        evaluations += 1;
        if evaluations > MAX_EVALUATIONS {
            return Err(ZenoError::NoConvergence {
                evaluations: MAX_EVALUATIONS,
            });
        }
        Ok(decay_exponent_f(p, &MeasurementDirection::new(theta, phi)?))
    };

    let (mut theta, mut phi) = (seed.theta(), seed.phi());
    let mut best = eval(theta, phi)?;
    let mut step = INITIAL_STEP;
    while step >= FINAL_STEP {
        let mut improved = false;
        for delta in [step, -step] {
            let candidate = (theta + delta).clamp(0.0, PI);
            if candidate != theta {
                let f = eval(candidate, phi)?;
                if f > best {
                    (theta, best, improved) = (candidate, f, true);
                    break;
                }
            }
        }
        for delta in [step, -step] {
            let candidate = (phi + delta).rem_euclid(TAU);
            let f = eval(theta, candidate)?;
            if f > best {
                (phi, best, improved) = (candidate, f, true);
                break;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    MeasurementDirection::new(theta, phi)
}

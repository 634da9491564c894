//! Total quantum Zeno effect for a two-level atom in a broadband squeezed
//! vacuum.
//!
//! The crate evolves the atom with and without frequent measurements of a spin
//! component σ_μ, locates the two measurement directions for which the decay is
//! completely frozen, and checks that the frozen states are the eigenstates of
//! the bath's jump operator S, which saturate the uncertainty relation between
//! the rotated quadrature spins J₁ and J₂.
//!
//! Units: ħ = 1, times in 1/γ, rates in γ. Basis `{|+⟩, |−⟩}` with `|+⟩`
//! excited.

pub mod algebra;
pub mod bath;
pub mod cli;
pub mod directions;
pub mod dynamics;
pub mod error;
pub mod fit;
pub mod format;
pub mod intelligent;
pub mod measurement;

pub use algebra::{
    bloch_to_density, density_to_bloch, direction_eigenstates, eigensystem_2x2, expectation,
    spin_direction_operator, BlochVector, ComplexMatrix2, DensityMatrix, EigenPair,
    MeasurementDirection, StateVector2, C64,
};
pub use bath::{jminus_alpha, lindblad_operator, rotated_quadrature_operators, BathParams};
pub use directions::{landscape_scan, numeric_maximize, optimal_directions, LandscapeGrid};
pub use dynamics::{
    analytic_bloch, integrate, liouvillian_expanded, liouvillian_lindblad, SuperoperatorForm,
    TimeSeries,
};
pub use error::{Result, ZenoError};
pub use intelligent::{
    disentangling_transform_u, eigenstates_of_s, initial_slope_check, quadrature_decay_curves,
    IntelligentStateReport,
};
pub use measurement::{
    decay_exponent_f, discrete_zeno_protocol, measured_liouvillian, projector,
    steady_state_under_measurement, survival_probability, total_zeno_condition, Outcome,
    Projector,
};

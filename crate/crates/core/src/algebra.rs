//! Fixed-size 2×2 complex algebra for a single two-level system.
//!
//! The computational basis is `{|+⟩, |−⟩}`, the eigenbasis of σz with
//! `|+⟩` the excited state (σz = +1) and `|−⟩` the ground state.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Result, ZenoError};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Amplitudes below this magnitude are treated as zero when fixing the global phase.
const PHASE_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix2 {
    pub entries: [[C64; 2]; 2],
}

impl ComplexMatrix2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self {
            entries: [[a, b], [c, d]],
        }
    }

    pub const fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(
            C64::new(a, 0.0),
            C64::new(b, 0.0),
            C64::new(c, 0.0),
            C64::new(d, 0.0),
        )
    }

    pub const fn zero() -> Self {
        Self::real(0.0, 0.0, 0.0, 0.0)
    }

    pub const fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }

    pub const fn diag(a: C64, d: C64) -> Self {
        Self::new(a, ZERO, ZERO, d)
    }

    pub const fn pauli_x() -> Self {
        Self::real(0.0, 1.0, 1.0, 0.0)
    }

    pub const fn pauli_y() -> Self {
        Self::new(ZERO, C64::new(0.0, -1.0), I, ZERO)
    }

    pub const fn pauli_z() -> Self {
        Self::real(1.0, 0.0, 0.0, -1.0)
    }

    /// σ₊ = ½(σx + iσy) = |+⟩⟨−|.
    pub const fn sigma_plus() -> Self {
        Self::real(0.0, 1.0, 0.0, 0.0)
    }

    /// σ₋ = ½(σx − iσy) = |−⟩⟨+|.
    pub const fn sigma_minus() -> Self {
        Self::real(0.0, 0.0, 1.0, 0.0)
    }

    pub fn spin_x() -> Self {
        Self::pauli_x() * 0.5
    }

    pub fn spin_y() -> Self {
        Self::pauli_y() * 0.5
    }

    pub fn spin_z() -> Self {
        Self::pauli_z() * 0.5
    }

    /// |a⟩⟨b|
    pub fn outer(a: &StateVector2, b: &StateVector2) -> Self {
        let [a0, a1] = a.amplitudes;
        let [b0, b1] = b.amplitudes;
        Self::new(a0 * b0.conj(), a0 * b1.conj(), a1 * b0.conj(), a1 * b1.conj())
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row][col]
    }

    pub fn trace(&self) -> C64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn det(&self) -> C64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let [[a, b], [c, d]] = self.entries;
        Self::new(a.conj(), c.conj(), b.conj(), d.conj())
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 || !det.is_finite() {
            return None;
        }
        let [[a, b], [c, d]] = self.entries;
        Some(Self::new(d, -b, -c, a) * (ONE / det))
    }

    pub fn scale(&self, s: C64) -> Self {
        let [[a, b], [c, d]] = self.entries;
        Self::new(a * s, b * s, c * s, d * s)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn apply(&self, v: &[C64; 2]) -> [C64; 2] {
        let [[a, b], [c, d]] = self.entries;
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }

    /// ⟨u|A|v⟩
    pub fn sandwich(&self, u: &StateVector2, v: &StateVector2) -> C64 {
        let av = self.apply(&v.amplitudes);
        u.amplitudes[0].conj() * av[0] + u.amplitudes[1].conj() * av[1]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation between the matrix and its adjoint.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_finite())
    }

    /// Eigenvalues of a Hermitian matrix in ascending order. Only the Hermitian
    /// part of `self` is used.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let a = self.entries[0][0].re;
        let d = self.entries[1][1].re;
        let b = 0.5 * (self.entries[0][1] + self.entries[1][0].conj());
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        [mean - half_gap, mean + half_gap]
    }
}

impl Add for ComplexMatrix2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (o, r) in out.entries.iter_mut().flatten().zip(rhs.entries.iter().flatten()) {
            *o += r;
        }
        out
    }
}

impl Sub for ComplexMatrix2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for (o, r) in out.entries.iter_mut().flatten().zip(rhs.entries.iter().flatten()) {
            *o -= r;
        }
        out
    }
}

impl Neg for ComplexMatrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let [[a, b], [c, d]] = self.entries;
        let [[e, f], [g, h]] = rhs.entries;
        Self::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

impl Mul<C64> for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::new(rhs, 0.0))
    }
}

/// Normalized pure state `c₊|+⟩ + c₋|−⟩` with a fixed global phase: the first
/// nonzero amplitude is real and non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector2 {
    amplitudes: [C64; 2],
}

impl StateVector2 {
    /// Normalizes and canonicalizes the phase. Rejects the zero vector.
    pub fn new(c_plus: C64, c_minus: C64) -> Result<Self> {
        let norm = (c_plus.norm_sqr() + c_minus.norm_sqr()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(ZenoError::InvalidArgument(
                "state vector must be finite and nonzero".into(),
            ));
        }
        let lead = if c_plus.norm() > PHASE_CUTOFF * norm {
            c_plus
        } else {
            c_minus
        };
        let phase = C64::from_polar(1.0, -lead.arg());
        let mut amplitudes = [c_plus * phase / norm, c_minus * phase / norm];
        // remove rounding residue from the phase-fixed amplitude
        let idx = if c_plus.norm() > PHASE_CUTOFF * norm { 0 } else { 1 };
        amplitudes[idx] = C64::new(amplitudes[idx].norm(), 0.0);
        Ok(Self { amplitudes })
    }

    /// |+⟩, the excited state.
    pub fn excited() -> Self {
        Self {
            amplitudes: [ONE, ZERO],
        }
    }

    /// |−⟩, the ground state.
    pub fn ground() -> Self {
        Self {
            amplitudes: [ZERO, ONE],
        }
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        self.amplitudes
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes[0].conj() * other.amplitudes[0]
            + self.amplitudes[1].conj() * other.amplitudes[1]
    }

    pub fn projector(&self) -> ComplexMatrix2 {
        ComplexMatrix2::outer(self, self)
    }

    /// Entrywise distance after aligning the global phase of `other` onto `self`.
    pub fn phase_distance(&self, other: &Self) -> f64 {
        let overlap = other.inner(self);
        let align = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b * align).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

/// Bloch vectors longer than this are rejected as unphysical.
pub const BLOCH_REJECT_TOL: f64 = 1e-6;

impl BlochVector {
    pub fn new(rx: f64, ry: f64, rz: f64) -> Result<Self> {
        let b = Self { rx, ry, rz };
        let norm = b.norm();
        if !norm.is_finite() || norm > 1.0 + BLOCH_REJECT_TOL {
            return Err(ZenoError::UnphysicalBloch { norm });
        }
        Ok(b)
    }

    pub fn origin() -> Self {
        Self {
            rx: 0.0,
            ry: 0.0,
            rz: 0.0,
        }
    }

    pub fn norm(&self) -> f64 {
        (self.rx * self.rx + self.ry * self.ry + self.rz * self.rz).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.rx, self.ry, self.rz]
    }

    pub fn dot(&self, v: &[f64; 3]) -> f64 {
        self.rx * v[0] + self.ry * v[1] + self.rz * v[2]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.rx - other.rx)
            .abs()
            .max((self.ry - other.ry).abs())
            .max((self.rz - other.rz).abs())
    }
}

/// Tolerance used by [`DensityMatrix::new`].
pub const DENSITY_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive semidefinite 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix2,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix2) -> Result<Self> {
        Self::with_tolerance(matrix, DENSITY_TOL)
    }

    /// Validates Hermiticity, unit trace and positivity, each to within `tol`.
    pub fn with_tolerance(matrix: ComplexMatrix2, tol: f64) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(ZenoError::InvalidDensity("non-finite entries".into()));
        }
        let herm = matrix.hermitian_deviation();
        if herm > tol {
            return Err(ZenoError::InvalidDensity(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > tol {
            return Err(ZenoError::InvalidDensity(format!(
                "trace {tr} differs from 1"
            )));
        }
        let [low, _] = matrix.hermitian_eigenvalues();
        if low < -tol {
            return Err(ZenoError::InvalidDensity(format!(
                "negative eigenvalue {low:e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn pure(state: &StateVector2) -> Self {
        Self {
            matrix: state.projector(),
        }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: ComplexMatrix2::identity() * 0.5,
        }
    }

    pub fn excited() -> Self {
        Self::pure(&StateVector2::excited())
    }

    pub fn ground() -> Self {
        Self::pure(&StateVector2::ground())
    }

    pub fn matrix(&self) -> &ComplexMatrix2 {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        self.matrix.hermitian_eigenvalues()
    }

    pub fn bloch(&self) -> BlochVector {
        density_to_bloch(self)
    }

    /// Trace distance ½‖ρ − σ‖₁, which for qubits is half the Bloch distance.
    pub fn trace_distance(&self, other: &Self) -> f64 {
        let a = self.bloch();
        let b = other.bloch();
        0.5 * ((a.rx - b.rx).powi(2) + (a.ry - b.ry).powi(2) + (a.rz - b.rz).powi(2)).sqrt()
    }

    /// Convex combination `w·self + (1 − w)·other`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(ZenoError::InvalidArgument(format!(
                "mixing weight {w} outside [0, 1]"
            )));
        }
        Ok(Self {
            matrix: self.matrix * w + other.matrix * (1.0 - w),
        })
    }
}

/// Polar direction (θ, φ) on the unit sphere selecting the observable σ_μ = σ⃗·μ̂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDirection {
    theta: f64,
    phi: f64,
}

impl MeasurementDirection {
    /// θ must lie in [0, π]; φ is wrapped into [0, 2π) and set to 0 at the poles.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(ZenoError::InvalidDirection("non-finite angle".into()));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(ZenoError::InvalidDirection(format!(
                "theta = {theta} outside [0, pi]"
            )));
        }
        let mut phi = phi.rem_euclid(2.0 * PI);
        // rem_euclid may round up to exactly 2π for tiny negative inputs
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        if theta == 0.0 || theta == PI {
            phi = 0.0;
        }
        Ok(Self { theta, phi })
    }

    pub fn plus_z() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    pub fn minus_z() -> Self {
        Self { theta: PI, phi: 0.0 }
    }

    /// Direction of a nonzero 3-vector.
    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(ZenoError::InvalidDirection("zero or non-finite vector".into()));
        }
        let theta = (v[2] / norm).clamp(-1.0, 1.0).acos();
        let phi = v[1].atan2(v[0]);
        Self::new(theta, phi)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// μ̂ = (cosφ sinθ, sinφ sinθ, cosθ)
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [cp * st, sp * st, ct]
    }

    /// Great-circle angle between two directions.
    pub fn angle_to(&self, other: &Self) -> f64 {
        let a = self.unit_vector();
        let b = other.unit_vector();
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let sin = (cross[0].powi(2) + cross[1].powi(2) + cross[2].powi(2)).sqrt();
        let cos = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        sin.atan2(cos)
    }
}

pub fn bloch_to_density(b: &BlochVector) -> Result<DensityMatrix> {
    let norm = b.norm();
    if !norm.is_finite() || norm > 1.0 + BLOCH_REJECT_TOL {
        return Err(ZenoError::UnphysicalBloch { norm });
    }
    let m = ComplexMatrix2::new(
        C64::new(0.5 * (1.0 + b.rz), 0.0),
        C64::new(0.5 * b.rx, -0.5 * b.ry),
        C64::new(0.5 * b.rx, 0.5 * b.ry),
        C64::new(0.5 * (1.0 - b.rz), 0.0),
    );
    Ok(DensityMatrix { matrix: m })
}

/// rᵢ = tr(ρσᵢ)
pub fn density_to_bloch(rho: &DensityMatrix) -> BlochVector {
    let [[a, b], [c, d]] = rho.matrix.entries;
    // tr(ρσx) = b + c, tr(ρσy) = i(b − c), tr(ρσz) = a − d
    BlochVector {
        rx: (b + c).re,
        ry: (I * (b - c)).re,
        rz: (a - d).re,
    }
}

/// σ_μ = σx cosφ sinθ + σy sinφ sinθ + σz cosθ
pub fn spin_direction_operator(dir: &MeasurementDirection) -> ComplexMatrix2 {
    let [x, y, z] = dir.unit_vector();
    ComplexMatrix2::pauli_x() * x + ComplexMatrix2::pauli_y() * y + ComplexMatrix2::pauli_z() * z
}

/// Returns `(|+⟩_μ, |−⟩_μ)`, the ±1 eigenstates of σ_μ.
pub fn direction_eigenstates(dir: &MeasurementDirection) -> (StateVector2, StateVector2) {
    let (s, c) = (0.5 * dir.theta).sin_cos();
    let e = C64::from_polar(1.0, dir.phi);
    let plus = StateVector2::new(C64::new(c, 0.0), e * s).expect("unit amplitudes");
    let minus = StateVector2::new(C64::new(-s, 0.0), e * c).expect("unit amplitudes");
    (plus, minus)
}

/// Tolerance on the Hermiticity of observables passed to [`expectation`].
pub const OBSERVABLE_HERMITIAN_TOL: f64 = 1e-10;

/// tr(Aρ) for a Hermitian observable A.
pub fn expectation(a: &ComplexMatrix2, rho: &DensityMatrix) -> Result<f64> {
    let deviation = a.hermitian_deviation();
    if deviation > OBSERVABLE_HERMITIAN_TOL {
        return Err(ZenoError::NotHermitian { deviation });
    }
    let value = (*a * rho.matrix).trace();
    debug_assert!(value.im.abs() < 1e-10, "imaginary residue {}", value.im);
    Ok(value.re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub value: C64,
    pub vector: StateVector2,
}

const DEFECTIVE_TOL: f64 = 1e-8;

/// Closed-form eigen-decomposition of a general complex 2×2 matrix.
///
/// Pairs are ordered by descending real part of the eigenvalue, ties broken by
/// descending imaginary part. Non-diagonalizable input is reported as
/// [`ZenoError::Defective`].
pub fn eigensystem_2x2(a: &ComplexMatrix2) -> Result<[EigenPair; 2]> {
    if !a.is_finite() {
        return Err(ZenoError::InvalidArgument("non-finite matrix".into()));
    }
    let [[p, q], [r, s]] = a.entries;
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok([
            EigenPair { value: ZERO, vector: StateVector2::excited() },
            EigenPair { value: ZERO, vector: StateVector2::ground() },
        ]);
    }

    let mean = 0.5 * (p + s);
    let disc = (0.25 * (p - s) * (p - s) + q * r).sqrt();
    let mut values = [mean + disc, mean - disc];
    let tie = 1e-12 * scale.max(1.0);
    values.sort_by(|x, y| {
        if (x.re - y.re).abs() > tie {
            y.re.total_cmp(&x.re)
        } else {
            y.im.total_cmp(&x.im)
        }
    });

    // A = λI: every vector is an eigenvector
    if q.norm() <= 1e-14 * scale && r.norm() <= 1e-14 * scale && (p - s).norm() <= 1e-14 * scale {
        return Ok([
            EigenPair { value: values[0], vector: StateVector2::excited() },
            EigenPair { value: values[1], vector: StateVector2::ground() },
        ]);
    }

    let vector_for = |lambda: C64| -> Result<StateVector2> {
        // null vectors of the two rows of A − λI
        let from_top = [q, lambda - p];
        let from_bottom = [lambda - s, r];
        let n_top = from_top[0].norm_sqr() + from_top[1].norm_sqr();
        let n_bottom = from_bottom[0].norm_sqr() + from_bottom[1].norm_sqr();
        let v = if n_top >= n_bottom { from_top } else { from_bottom };
        StateVector2::new(v[0], v[1]).map_err(|_| ZenoError::Defective)
    };

    let v0 = vector_for(values[0])?;
    let v1 = vector_for(values[1])?;
    let [a0, a1] = v0.amplitudes();
    let [b0, b1] = v1.amplitudes();
    if (a0 * b1 - a1 * b0).norm() < DEFECTIVE_TOL {
        return Err(ZenoError::Defective);
    }
    Ok([
        EigenPair { value: values[0], vector: v0 },
        EigenPair { value: values[1], vector: v1 },
    ])
}

//! Finite-dimensional unitary quantum mechanics.
//!
//! State vectors evolve under per-interval unitaries collected in a
//! [`UnitarySchedule`]. The same data supports the Schrödinger and Heisenberg
//! pictures and the relabelled picture `B̃ = (UV†) B (VU†)` in which one
//! system's evolution mimics another's.

mod decomposition;
pub mod expm;
pub mod linalg;
mod models;
mod schema;

pub use decomposition::{
    bell_alternate_decomposition, bell_states, entangled_cut, product_similarity,
    schmidt_coefficients, schmidt_rank, BellEntry, BellReport, Decomposition, SCHMIDT_TOLERANCE,
};
pub use models::{
    apparatus_interaction, correlation_operator, measurement_chain, observer_interaction,
    oscillator_hamiltonian, oscillator_observables, qubit_chain_hamiltonian, MeasurementReport,
    OSCILLATOR_COUPLING, OSCILLATOR_FREQUENCIES, QUBIT_ANISOTROPY, QUBIT_COUPLING,
    QUBIT_FREQUENCIES,
};
pub use schema::{state_transporter, UnitarySchema, DEFAULT_PROBES};

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::par;
use crate::schema::Instance;
use linalg::{hermiticity_deviation, unitarity_deviation, CMatrix, CVector};

/// Allowed `|‖ψ‖ - 1|` for a state vector.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Allowed `max |U†U - 1|` and `max |A - A†|`.
pub const OPERATOR_TOLERANCE: f64 = 1e-10;

/// A unit vector in `ℂ^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(CVector);

impl StateVector {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector(amplitudes))
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(amplitudes))
    }

    /// Scales a nonzero vector to unit norm.
    pub fn normalized(v: CVector) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector(v.unscale(norm)))
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = CVector::zeros(d);
        v[i] = Complex64::new(1.0, 0.0);
        StateVector(v)
    }

    pub fn random(d: usize, rng: &mut impl Rng) -> Self {
        StateVector(linalg::random_unit_vector(d, rng))
    }

    pub(crate) fn from_raw(v: CVector) -> Self {
        StateVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.0
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.0.dotc(&other.0)
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        (&self.0 - &other.0).norm()
    }

    /// `min_θ ‖ψ - e^{iθ}φ‖`, attained by aligning the inner product.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> f64 {
        let overlap = self.inner(other).norm();
        let sq = self.0.norm_squared() + other.0.norm_squared() - 2.0 * overlap;
        sq.max(0.0).sqrt()
    }

    /// Representative with its largest-modulus component real and positive.
    /// Ties within `1e-12` go to the lowest index.
    pub fn canonical_phase(&self) -> StateVector {
        let max = self.0.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let lead = self
            .0
            .iter()
            .find(|z| z.norm() >= max - 1e-12)
            .copied()
            .unwrap_or(Complex64::new(1.0, 0.0));
        if lead.norm() == 0.0 {
            return self.clone();
        }
        let phase = lead.conj() / lead.norm();
        StateVector(self.0.map(|z| z * phase))
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for z in self.0.iter() {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}

fn serialize_matrix<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> = m
        .row_iter()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    rows.serialize(s)
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.is_square() && m.nrows() > 0 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        })
    }
}

/// A `d × d` unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary(CMatrix);

impl Unitary {
    pub fn new(m: CMatrix) -> Result<Self> {
        check_square(&m)?;
        let deviation = unitarity_deviation(&m);
        if deviation.is_nan() || deviation > OPERATOR_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Unitary(m))
    }

    pub fn identity(d: usize) -> Self {
        Unitary(CMatrix::identity(d, d))
    }

    pub fn random(d: usize, rng: &mut impl Rng) -> Self {
        Unitary(linalg::random_unitary(d, rng))
    }

    /// `exp(-i H dt)`.
    pub fn from_hamiltonian(h: &Observable, dt: f64) -> Self {
        Unitary(expm::expm(
            &h.0.scale(dt).map(|z| z * Complex64::new(0.0, -1.0)),
        ))
    }

    pub(crate) fn from_raw(m: CMatrix) -> Self {
        Unitary(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn dagger(&self) -> Unitary {
        Unitary(self.0.adjoint())
    }

    /// `self · inner`.
    pub fn compose(&self, inner: &Unitary) -> Unitary {
        Unitary(&self.0 * &inner.0)
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        StateVector(&self.0 * &psi.0)
    }

    pub fn deviation(&self) -> f64 {
        unitarity_deviation(&self.0)
    }

    /// `self · A · self†`.
    pub fn conjugate(&self, a: &CMatrix) -> CMatrix {
        &self.0 * a * self.0.adjoint()
    }
}

impl Serialize for Unitary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_matrix(&self.0, s)
    }
}

/// A Hermitian `d × d` operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable(CMatrix);

impl Observable {
    pub fn new(m: CMatrix) -> Result<Self> {
        check_square(&m)?;
        let deviation = hermiticity_deviation(&m);
        if deviation.is_nan() || deviation > OPERATOR_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Observable(m))
    }

    pub fn random(d: usize, rng: &mut impl Rng) -> Self {
        Observable(linalg::random_hermitian(d, rng))
    }

    pub(crate) fn from_raw(m: CMatrix) -> Self {
        Observable(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    /// `⟨ψ|A|ψ⟩`, complex so that roundoff in the imaginary part is visible.
    pub fn expectation(&self, psi: &StateVector) -> Complex64 {
        psi.0.dotc(&(&self.0 * &psi.0))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .0
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.0)
    }
}

impl Serialize for Observable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_matrix(&self.0, s)
    }
}

/// Per-interval unitaries on a grid `t₀ … t_N` with cached cumulative
/// products `U(t_k) = U_k ⋯ U_1`.
#[derive(Debug, Clone)]
pub struct UnitarySchedule {
    steps: Vec<Unitary>,
    cumulative: Vec<Unitary>,
}

impl UnitarySchedule {
    pub fn new(steps: Vec<Unitary>) -> Result<Self> {
        let first = steps.first().ok_or(Error::NoSteps)?;
        let d = first.dim();
        let mut cumulative = Vec::with_capacity(steps.len() + 1);
        cumulative.push(Unitary::identity(d));
        for s in &steps {
            if s.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: s.dim(),
                });
            }
            let deviation = s.deviation();
            if deviation > OPERATOR_TOLERANCE {
                return Err(Error::NotUnitary { deviation });
            }
            let next = s.compose(cumulative.last().expect("seeded with identity"));
            cumulative.push(next);
        }
        Ok(UnitarySchedule { steps, cumulative })
    }

    pub fn constant(step: Unitary, n_steps: usize) -> Result<Self> {
        Self::new(vec![step; n_steps])
    }

    pub fn identity(d: usize, n_steps: usize) -> Result<Self> {
        Self::constant(Unitary::identity(d), n_steps)
    }

    /// `n_steps` intervals of `exp(-i H dt)`.
    pub fn from_hamiltonian(h: &Observable, dt: f64, n_steps: usize) -> Result<Self> {
        if !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("time step {dt}")));
        }
        Self::constant(Unitary::from_hamiltonian(h, dt), n_steps)
    }

    pub fn random(d: usize, n_steps: usize, rng: &mut impl Rng) -> Result<Self> {
        Self::new((0..n_steps).map(|_| Unitary::random(d, rng)).collect())
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn dim(&self) -> usize {
        self.steps[0].dim()
    }

    pub fn steps(&self) -> &[Unitary] {
        &self.steps
    }

    /// `U(t_k)`.
    pub fn cumulative(&self, k: usize) -> Result<&Unitary> {
        self.cumulative.get(k).ok_or(Error::StateOutOfRange {
            index: k,
            len: self.cumulative.len(),
        })
    }

    pub fn max_cumulative_deviation(&self) -> f64 {
        par::max_range(self.cumulative.len(), |k| self.cumulative[k].deviation())
    }

    pub fn to_instance(&self, psi0: StateVector) -> Instance<StateVector, Unitary> {
        Instance::new(psi0, self.steps.clone())
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// `x_k = U(t_k)|ψ₀⟩` for `k = 0 … N`.
pub fn evolve(psi0: &StateVector, schedule: &UnitarySchedule) -> Result<Vec<StateVector>> {
    check_dim(schedule.dim(), psi0.dim())?;
    Ok(schedule.cumulative.iter().map(|u| u.apply(psi0)).collect())
}

/// `Â(t_k) = U†(t_k) A U(t_k)`.
pub fn heisenberg(a: &Observable, schedule: &UnitarySchedule, k: usize) -> Result<Observable> {
    check_dim(schedule.dim(), a.dim())?;
    let u = schedule.cumulative(k)?;
    Ok(Observable(u.dagger().conjugate(&a.0)))
}

fn check_pair(u: &UnitarySchedule, v: &UnitarySchedule) -> Result<()> {
    check_dim(u.dim(), v.dim())?;
    if u.n_steps() != v.n_steps() {
        return Err(Error::LengthMismatch {
            got: v.n_steps(),
            expected: u.n_steps(),
        });
    }
    Ok(())
}

/// `B̃(t_k) = (U(t_k) V†(t_k)) B (V(t_k) U†(t_k))`.
pub fn picture_observable(
    b: &Observable,
    u: &UnitarySchedule,
    v: &UnitarySchedule,
    k: usize,
) -> Result<Observable> {
    check_pair(u, v)?;
    check_dim(u.dim(), b.dim())?;
    let w = u.cumulative(k)?.compose(&v.cumulative(k)?.dagger());
    Ok(Observable(w.conjugate(&b.0)))
}

/// Largest `|⟨Ψ₀|U†B̃U|Ψ₀⟩ - ⟨Ψ₀|V†BV|Ψ₀⟩|` over grid points and observables.
pub fn verify_picture_equivalence(
    psi0: &StateVector,
    u: &UnitarySchedule,
    v: &UnitarySchedule,
    observables: &[Observable],
) -> Result<f64> {
    check_pair(u, v)?;
    check_dim(u.dim(), psi0.dim())?;
    for b in observables {
        check_dim(u.dim(), b.dim())?;
    }
    Ok(par::max_range(u.n_steps() + 1, |k| {
        let uk = &u.cumulative[k];
        let vk = &v.cumulative[k];
        let w = uk.compose(&vk.dagger());
        let psi_u = uk.apply(psi0);
        let psi_v = vk.apply(psi0);
        observables
            .iter()
            .map(|b| {
                let tilde = Observable(w.conjugate(&b.0));
                (tilde.expectation(&psi_u) - b.expectation(&psi_v)).norm()
            })
            .fold(
                0.0,
                |acc: f64, x| if x.is_nan() { f64::NAN } else { acc.max(x) },
            )
    }))
}

/// Largest `|⟨Ψ(t_k)|A|Ψ(t_k)⟩ - ⟨Ψ₀|Â(t_k)|Ψ₀⟩|` over the grid.
pub fn heisenberg_deviation(
    psi0: &StateVector,
    schedule: &UnitarySchedule,
    a: &Observable,
) -> Result<f64> {
    check_dim(schedule.dim(), psi0.dim())?;
    check_dim(schedule.dim(), a.dim())?;
    Ok(par::max_range(schedule.n_steps() + 1, |k| {
        let u = &schedule.cumulative[k];
        let schrodinger = a.expectation(&u.apply(psi0));
        let heis = Observable(u.dagger().conjugate(&a.0)).expectation(psi0);
        (schrodinger - heis).norm()
    }))
}

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn vector(entries: &[Complex64]) -> CVector {
    DVector::from_column_slice(entries)
}

#[cfg(test)]
pub(crate) fn matrix(d: usize, rows: &[Complex64]) -> CMatrix {
    nalgebra::DMatrix::from_row_slice(d, d, rows)
}

//! Fixed model systems: a three-qubit chain, three coupled oscillators
//! truncated to two levels each, and a spin measured by an apparatus and an
//! observer.

use num_complex::Complex64;
use serde::Serialize;

use super::linalg::{embed, kron_all, pauli_x, pauli_y, pauli_z, real, CMatrix, CVector};
use super::{c, Observable, StateVector, Unitary, NORM_TOLERANCE};
use crate::error::{Error, Result};

pub const QUBIT_FREQUENCIES: [f64; 3] = [1.0, 1.3, 0.7];
pub const QUBIT_COUPLING: f64 = 0.4;
pub const QUBIT_ANISOTROPY: f64 = 0.5;
pub const OSCILLATOR_FREQUENCIES: [f64; 3] = [1.0, 1.1, 0.9];
pub const OSCILLATOR_COUPLING: f64 = 0.25;

/// `Σ (ω_i/2) Z_i + J Σ_{i} (X_i X_{i+1} + Y_i Y_{i+1} + Δ Z_i Z_{i+1})`.
pub fn qubit_chain_hamiltonian() -> Observable {
    let n = QUBIT_FREQUENCIES.len();
    let mut h = CMatrix::zeros(1 << n, 1 << n);
    for (i, w) in QUBIT_FREQUENCIES.iter().enumerate() {
        h += embed(&pauli_z(), i, n).scale(w / 2.0);
    }
    for i in 0..n - 1 {
        for (p, weight) in [
            (pauli_x(), 1.0),
            (pauli_y(), 1.0),
            (pauli_z(), QUBIT_ANISOTROPY),
        ] {
            h += (embed(&p, i, n) * embed(&p, i + 1, n)).scale(QUBIT_COUPLING * weight);
        }
    }
    Observable::from_raw(h)
}

fn lowering() -> CMatrix {
    real(2, &[0.0, 1.0, 0.0, 0.0])
}

fn number() -> CMatrix {
    let a = lowering();
    a.adjoint() * a
}

fn position() -> CMatrix {
    let a = lowering();
    (&a + a.adjoint()).scale(std::f64::consts::FRAC_1_SQRT_2)
}

/// `Σ Ω_i n_i + g Σ_{i<j} x_i x_j` with `x = (a + a†)/√2`, each mode
/// truncated to its two lowest levels.
pub fn oscillator_hamiltonian() -> Observable {
    let n = OSCILLATOR_FREQUENCIES.len();
    let mut h = CMatrix::zeros(1 << n, 1 << n);
    for (i, w) in OSCILLATOR_FREQUENCIES.iter().enumerate() {
        h += embed(&number(), i, n).scale(*w);
    }
    for i in 0..n {
        for j in i + 1..n {
            h += (embed(&position(), i, n) * embed(&position(), j, n)).scale(OSCILLATOR_COUPLING);
        }
    }
    Observable::from_raw(h)
}

/// Positions `x_i` followed by occupation numbers `n_i` of the oscillators.
pub fn oscillator_observables() -> Vec<(String, Observable)> {
    let n = OSCILLATOR_FREQUENCIES.len();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        out.push((
            format!("x{}", i + 1),
            Observable::from_raw(embed(&position(), i, n)),
        ));
    }
    for i in 0..n {
        out.push((
            format!("n{}", i + 1),
            Observable::from_raw(embed(&number(), i, n)),
        ));
    }
    out
}

const SPIN: usize = 2;
const DEVICE: usize = 3;
/// Apparatus readings: ready, +ħ/2, −ħ/2. Observer memories: ready, up, down.
const READY: usize = 0;
const UP: usize = 1;
const DOWN: usize = 2;

fn index(spin: usize, apparatus: usize, observer: usize) -> usize {
    spin * DEVICE * DEVICE + apparatus * DEVICE + observer
}

fn transposition(d: usize, a: usize, b: usize) -> CMatrix {
    let mut m = CMatrix::identity(d, d);
    m.swap_rows(a, b);
    m
}

fn projector(d: usize, i: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(i, i)] = c(1.0, 0.0);
    m
}

/// Apparatus reads the spin: for spin up it swaps ready ↔ +ħ/2, for spin
/// down ready ↔ −ħ/2. The swaps also fix the action on the unreachable
/// readings.
pub fn apparatus_interaction() -> Unitary {
    let id = CMatrix::identity(DEVICE, DEVICE);
    let up = kron_all(&[
        projector(SPIN, 0),
        transposition(DEVICE, READY, UP),
        id.clone(),
    ]);
    let down = kron_all(&[projector(SPIN, 1), transposition(DEVICE, READY, DOWN), id]);
    Unitary::from_raw(up + down)
}

/// Observer reads the apparatus: a +ħ/2 reading swaps the memory
/// ready ↔ up, a −ħ/2 reading swaps ready ↔ down, a ready reading does
/// nothing.
pub fn observer_interaction() -> Unitary {
    let s = CMatrix::identity(SPIN, SPIN);
    let m = kron_all(&[
        s.clone(),
        projector(DEVICE, READY),
        CMatrix::identity(DEVICE, DEVICE),
    ]) + kron_all(&[
        s.clone(),
        projector(DEVICE, UP),
        transposition(DEVICE, READY, UP),
    ]) + kron_all(&[
        s,
        projector(DEVICE, DOWN),
        transposition(DEVICE, READY, DOWN),
    ]);
    Unitary::from_raw(m)
}

/// `Ĉ = |↑⟩⟨↑| ⊗ 1 ⊗ |up⟩⟨up| + |↓⟩⟨↓| ⊗ 1 ⊗ |down⟩⟨down|`.
pub fn correlation_operator() -> Observable {
    let id = CMatrix::identity(DEVICE, DEVICE);
    Observable::from_raw(
        kron_all(&[projector(SPIN, 0), id.clone(), projector(DEVICE, UP)])
            + kron_all(&[projector(SPIN, 1), id, projector(DEVICE, DOWN)]),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasurementReport {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub correlation_before: f64,
    pub correlation_after_apparatus: f64,
    pub correlation_after: f64,
    /// Distance from `α|↑,+,up⟩ + β|↓,−,down⟩`, minimised over global phase.
    pub branch_deviation: f64,
    pub branch_weights: [f64; 2],
    pub nonzero_amplitudes: usize,
    pub final_state: StateVector,
}

/// Runs spin ⊗ apparatus ⊗ observer (dimension 18) through the two
/// correlating interactions and tracks `⟨Ĉ⟩`.
pub fn measurement_chain(alpha: Complex64, beta: Complex64) -> Result<MeasurementReport> {
    let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    if !norm.is_finite() || (norm * norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm });
    }
    let d = SPIN * DEVICE * DEVICE;
    let mut v = CVector::zeros(d);
    v[index(0, READY, READY)] = alpha;
    v[index(1, READY, READY)] = beta;
    let initial = StateVector::from_raw(v);
    let correlated = apparatus_interaction().apply(&initial);
    let recorded = observer_interaction().apply(&correlated);

    let mut expected = CVector::zeros(d);
    expected[index(0, UP, UP)] = alpha;
    expected[index(1, DOWN, DOWN)] = beta;
    let expected = StateVector::from_raw(expected);

    let cop = correlation_operator();
    let amps = recorded.amplitudes();
    Ok(MeasurementReport {
        alpha: [alpha.re, alpha.im],
        beta: [beta.re, beta.im],
        correlation_before: cop.expectation(&initial).re,
        correlation_after_apparatus: cop.expectation(&correlated).re,
        correlation_after: cop.expectation(&recorded).re,
        branch_deviation: recorded.distance_up_to_phase(&expected),
        branch_weights: [
            amps[index(0, UP, UP)].norm_sqr(),
            amps[index(1, DOWN, DOWN)].norm_sqr(),
        ],
        nonzero_amplitudes: amps.iter().filter(|z| z.norm() > 0.0).count(),
        final_state: recorded,
    })
}

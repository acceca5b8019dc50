//! Classical Hamiltonian flows on `ℝ^{2n}`.
//!
//! A [`DrivingHamiltonian`] is a list of pieces, each an underlying energy
//! function seen through an affine time change and an energy scale. That
//! makes time-rescaled composition and reversal exact rewrites rather than
//! closures over closures, and tells the integrator where the breakpoints
//! are.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

/// Central-difference step for Hamiltonians without an analytic gradient.
pub const FD_STEP: f64 = 1e-6;
pub const DEFAULT_STEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                got: p.len(),
            });
        }
        if q.iter().chain(&p).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "non-finite phase coordinate".into(),
            ));
        }
        Ok(PhasePoint { q, p })
    }

    pub fn origin(n: usize) -> Self {
        PhasePoint {
            q: vec![0.0; n],
            p: vec![0.0; n],
        }
    }

    pub fn dof(&self) -> usize {
        self.q.len()
    }

    /// Euclidean distance in phase space.
    pub fn distance(&self, other: &PhasePoint) -> f64 {
        self.q
            .iter()
            .zip(&other.q)
            .chain(self.p.iter().zip(&other.p))
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// `self - other`, coordinate-wise.
    pub fn offset(&self, other: &PhasePoint) -> PhasePoint {
        PhasePoint {
            q: self.q.iter().zip(&other.q).map(|(a, b)| a - b).collect(),
            p: self.p.iter().zip(&other.p).map(|(a, b)| a - b).collect(),
        }
    }

    fn flat(&self) -> Vec<f64> {
        self.q.iter().chain(&self.p).copied().collect()
    }

    fn from_flat(z: &[f64]) -> Self {
        let n = z.len() / 2;
        PhasePoint {
            q: z[..n].to_vec(),
            p: z[n..].to_vec(),
        }
    }
}

type EnergyFn = dyn Fn(&[f64], &[f64], f64) -> f64 + Send + Sync;
type GradientFn = dyn Fn(&[f64], &[f64], f64) -> (Vec<f64>, Vec<f64>) + Send + Sync;

#[derive(Clone)]
struct Leaf {
    energy: Arc<EnergyFn>,
    gradient: Option<Arc<GradientFn>>,
}

/// `scale · leaf(q, p, a·t + b)` for `t ∈ [start, end]`.
#[derive(Clone)]
struct Piece {
    leaf: Leaf,
    start: f64,
    end: f64,
    a: f64,
    b: f64,
    scale: f64,
}

impl Piece {
    fn covers(&self, t: f64) -> bool {
        self.start <= t && t <= self.end
    }

    fn energy(&self, q: &[f64], p: &[f64], t: f64) -> f64 {
        self.scale * (self.leaf.energy)(q, p, self.a * t + self.b)
    }

    fn gradient(&self, q: &[f64], p: &[f64], t: f64) -> (Vec<f64>, Vec<f64>) {
        let s = self.a * t + self.b;
        let (dq, dp) = match &self.leaf.gradient {
            Some(g) => g(q, p, s),
            None => finite_difference(&*self.leaf.energy, q, p, s),
        };
        let k = self.scale;
        (
            dq.into_iter().map(|x| k * x).collect(),
            dp.into_iter().map(|x| k * x).collect(),
        )
    }
}

fn finite_difference<F>(f: &F, q: &[f64], p: &[f64], t: f64) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(&[f64], &[f64], f64) -> f64 + ?Sized,
{
    let partial = |which: usize, i: usize| {
        let mut qp = [q.to_vec(), p.to_vec()];
        qp[which][i] += FD_STEP;
        let plus = f(&qp[0], &qp[1], t);
        qp[which][i] -= 2.0 * FD_STEP;
        let minus = f(&qp[0], &qp[1], t);
        (plus - minus) / (2.0 * FD_STEP)
    };
    (
        (0..q.len()).map(|i| partial(0, i)).collect(),
        (0..p.len()).map(|i| partial(1, i)).collect(),
    )
}

/// A possibly time-dependent Hamiltonian `H(q, p, t)`.
#[derive(Clone)]
pub struct DrivingHamiltonian {
    name: String,
    dof: Option<usize>,
    pieces: Vec<Piece>,
}

impl fmt::Debug for DrivingHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DrivingHamiltonian")
            .field("name", &self.name)
            .field("dof", &self.dof)
            .field("pieces", &self.pieces.len())
            .finish()
    }
}

impl DrivingHamiltonian {
    /// Hamiltonian with a numerical gradient.
    pub fn new<E>(name: impl Into<String>, energy: E) -> Self
    where
        E: Fn(&[f64], &[f64], f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_leaf(name.into(), None, Arc::new(energy), None)
    }

    /// Hamiltonian with an analytic gradient `(∂H/∂q, ∂H/∂p)`.
    pub fn with_gradient<E, G>(name: impl Into<String>, energy: E, gradient: G) -> Self
    where
        E: Fn(&[f64], &[f64], f64) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64], &[f64], f64) -> (Vec<f64>, Vec<f64>) + Send + Sync + 'static,
    {
        Self::from_leaf(
            name.into(),
            None,
            Arc::new(energy),
            Some(Arc::new(gradient)),
        )
    }

    fn from_leaf(
        name: String,
        dof: Option<usize>,
        energy: Arc<EnergyFn>,
        gradient: Option<Arc<GradientFn>>,
    ) -> Self {
        DrivingHamiltonian {
            name,
            dof,
            pieces: vec![Piece {
                leaf: Leaf { energy, gradient },
                start: f64::NEG_INFINITY,
                end: f64::INFINITY,
                a: 1.0,
                b: 0.0,
                scale: 1.0,
            }],
        }
    }

    fn with_dof(mut self, n: usize) -> Self {
        self.dof = Some(n);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Degrees of freedom if fixed by construction.
    pub fn dof(&self) -> Option<usize> {
        self.dof
    }

    fn piece_at(&self, t: f64) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.covers(t))
    }

    pub fn energy(&self, z: &PhasePoint, t: f64) -> f64 {
        self.piece_at(t).map_or(0.0, |p| p.energy(&z.q, &z.p, t))
    }

    pub fn gradient(&self, z: &PhasePoint, t: f64) -> (Vec<f64>, Vec<f64>) {
        match self.piece_at(t) {
            Some(p) => p.gradient(&z.q, &z.p, t),
            None => (vec![0.0; z.dof()], vec![0.0; z.dof()]),
        }
    }

    /// Largest gap between the gradient in use and a central difference of
    /// the energy at `z`.
    pub fn gradient_consistency(&self, z: &PhasePoint, t: f64) -> f64 {
        let Some(piece) = self.piece_at(t) else {
            return 0.0;
        };
        let (gq, gp) = piece.gradient(&z.q, &z.p, t);
        let energy = |q: &[f64], p: &[f64], s: f64| piece.energy(q, p, s);
        let (fq, fp) = finite_difference(&energy, &z.q, &z.p, t);
        gq.iter()
            .zip(&fq)
            .chain(gp.iter().zip(&fp))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Times in `(0, tau)` where the active piece changes.
    fn breakpoints(&self, tau: f64) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .pieces
            .iter()
            .flat_map(|p| [p.start, p.end])
            .filter(|&t| t > 0.0 && t < tau)
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn dof_check(&self, z: &PhasePoint) -> Result<()> {
        match self.dof {
            Some(n) if n != z.dof() => Err(Error::DimensionMismatch {
                expected: n,
                got: z.dof(),
            }),
            _ => Ok(()),
        }
    }
}

/// `H21 = 2H₁(q, p, 2t)` on `[0, τ/2]`, `2H₂(q, p, 2t − τ)` on `(τ/2, τ]`:
/// runs `H₁` then `H₂` at double speed.
pub fn compose_hamiltonians(
    h1: &DrivingHamiltonian,
    h2: &DrivingHamiltonian,
    tau: f64,
) -> DrivingHamiltonian {
    let half = tau / 2.0;
    let mut pieces = Vec::new();
    for p in &h1.pieces {
        let start = (p.start / 2.0).max(0.0);
        let end = (p.end / 2.0).min(half);
        if start <= end {
            pieces.push(Piece {
                leaf: p.leaf.clone(),
                start,
                end,
                a: 2.0 * p.a,
                b: p.b,
                scale: 2.0 * p.scale,
            });
        }
    }
    for p in &h2.pieces {
        let start = ((p.start + tau) / 2.0).max(half);
        let end = ((p.end + tau) / 2.0).min(tau);
        if start <= end {
            pieces.push(Piece {
                leaf: p.leaf.clone(),
                start,
                end,
                a: 2.0 * p.a,
                b: p.b - p.a * tau,
                scale: 2.0 * p.scale,
            });
        }
    }
    DrivingHamiltonian {
        name: format!("compose({}, {})", h1.name, h2.name),
        dof: h1.dof.or(h2.dof),
        pieces,
    }
}

/// `−H(q, p, τ − t)`: undoes the flow of `H` over `[0, τ]`.
pub fn reverse_hamiltonian(h: &DrivingHamiltonian, tau: f64) -> DrivingHamiltonian {
    let pieces = h
        .pieces
        .iter()
        .rev()
        .map(|p| Piece {
            leaf: p.leaf.clone(),
            start: tau - p.end,
            end: tau - p.start,
            a: -p.a,
            b: p.a * tau + p.b,
            scale: -p.scale,
        })
        .collect();
    DrivingHamiltonian {
        name: format!("reverse({})", h.name),
        dof: h.dof,
        pieces,
    }
}

/// `H = p·v − q·f` with `v, f` the velocities of the straight line from
/// `z₀` to `z₁` over `τ`. Every point is translated by the same offset, so
/// `z₀` lands on `z₁`.
pub fn steering_hamiltonian(
    z0: &PhasePoint,
    z1: &PhasePoint,
    tau: f64,
) -> Result<DrivingHamiltonian> {
    if z0.dof() != z1.dof() {
        return Err(Error::DimensionMismatch {
            expected: z0.dof(),
            got: z1.dof(),
        });
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("duration {tau}")));
    }
    let d = z1.offset(z0);
    let v: Vec<f64> = d.q.iter().map(|x| x / tau).collect();
    let f: Vec<f64> = d.p.iter().map(|x| x / tau).collect();
    let (ve, fe) = (v.clone(), f.clone());
    Ok(DrivingHamiltonian::with_gradient(
        "STEER",
        move |q: &[f64], p: &[f64], _| dot(p, &ve) - dot(q, &fe),
        move |_, _, _| (f.iter().map(|x| -x).collect(), v.clone()),
    )
    .with_dof(z0.dof()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Built-in Hamiltonians addressed by key.
#[derive(Debug, Clone, PartialEq)]
pub enum Catalog {
    /// `H = 0`.
    Zero,
    /// `H = Σ p_i`: uniform translation of `q`.
    Free,
    /// `H = Σ (p_i² + q_i²)/2`.
    Harmonic,
    /// `H = −Σ q_i`: uniform push of `p`.
    Kick,
    /// `H = t Σ p_i`.
    Ramp,
    Steer {
        z0: PhasePoint,
        z1: PhasePoint,
        tau: f64,
    },
}

impl Catalog {
    pub const KEYS: [&'static str; 6] = ["ZERO", "FREE", "HARMONIC", "KICK", "RAMP", "STEER"];

    /// Parses a parameterless key; `STEER` needs [`Catalog::Steer`].
    pub fn from_key(key: &str) -> Result<Self> {
        match key {
            "ZERO" => Ok(Catalog::Zero),
            "FREE" => Ok(Catalog::Free),
            "HARMONIC" => Ok(Catalog::Harmonic),
            "KICK" => Ok(Catalog::Kick),
            "RAMP" => Ok(Catalog::Ramp),
            "STEER" => Err(Error::InvalidParameter(
                "STEER needs endpoints and a duration".into(),
            )),
            other => Err(Error::InvalidParameter(format!(
                "unknown Hamiltonian `{other}`"
            ))),
        }
    }

    pub fn build(&self) -> Result<DrivingHamiltonian> {
        let ones = |n: usize, k: f64| vec![k; n];
        Ok(match self {
            Catalog::Zero => DrivingHamiltonian::with_gradient(
                "ZERO",
                |_, _, _| 0.0,
                move |q, p, _| (ones(q.len(), 0.0), ones(p.len(), 0.0)),
            ),
            Catalog::Free => DrivingHamiltonian::with_gradient(
                "FREE",
                |_, p, _| p.iter().sum(),
                move |q, p, _| (ones(q.len(), 0.0), ones(p.len(), 1.0)),
            ),
            Catalog::Harmonic => DrivingHamiltonian::with_gradient(
                "HARMONIC",
                |q, p, _| 0.5 * (dot(q, q) + dot(p, p)),
                |q, p, _| (q.to_vec(), p.to_vec()),
            ),
            Catalog::Kick => DrivingHamiltonian::with_gradient(
                "KICK",
                |q, _, _| -q.iter().sum::<f64>(),
                move |q, p, _| (ones(q.len(), -1.0), ones(p.len(), 0.0)),
            ),
            Catalog::Ramp => DrivingHamiltonian::with_gradient(
                "RAMP",
                |_, p, t| t * p.iter().sum::<f64>(),
                move |q, p, t| (ones(q.len(), 0.0), ones(p.len(), t)),
            ),
            Catalog::Steer { z0, z1, tau } => steering_hamiltonian(z0, z1, *tau)?,
        })
    }
}

fn derivative(h: &Piece, z: &[f64], t: f64) -> Vec<f64> {
    let n = z.len() / 2;
    let (dq, dp) = h.gradient(&z[..n], &z[n..], t);
    dp.into_iter().chain(dq.into_iter().map(|x| -x)).collect()
}

fn axpy(z: &[f64], k: &[f64], h: f64) -> Vec<f64> {
    z.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

/// Fixed-step RK4 for `q̇ = ∂H/∂p`, `ṗ = −∂H/∂q` from `t = 0` to `t = τ`.
///
/// Integration is split at every breakpoint of `H` so no step straddles a
/// change of piece; steps are shared out in proportion to segment length.
pub fn integrate(
    h: &DrivingHamiltonian,
    z0: &PhasePoint,
    tau: f64,
    steps: usize,
) -> Result<PhasePoint> {
    if steps == 0 {
        return Err(Error::NoSteps);
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("duration {tau}")));
    }
    h.dof_check(z0)?;
    let mut cuts = vec![0.0];
    cuts.extend(h.breakpoints(tau));
    cuts.push(tau);
    let mut z = z0.flat();
    for w in cuts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let n = ((steps as f64) * (t1 - t0) / tau).round().max(1.0) as usize;
        let Some(piece) = h.piece_at(0.5 * (t0 + t1)) else {
            continue;
        };
        let dt = (t1 - t0) / n as f64;
        for i in 0..n {
            let t = t0 + i as f64 * dt;
            let k1 = derivative(piece, &z, t);
            let k2 = derivative(piece, &axpy(&z, &k1, dt / 2.0), t + dt / 2.0);
            let k3 = derivative(piece, &axpy(&z, &k2, dt / 2.0), t + dt / 2.0);
            let k4 = derivative(piece, &axpy(&z, &k3, dt), t + dt);
            for (j, zj) in z.iter_mut().enumerate() {
                *zj += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
            if z.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite { time: t + dt });
            }
        }
    }
    Ok(PhasePoint::from_flat(&z))
}

/// [`integrate`] over many start points, in input order.
pub fn integrate_many(
    h: &DrivingHamiltonian,
    points: &[PhasePoint],
    tau: f64,
    steps: usize,
) -> Result<Vec<PhasePoint>> {
    par::map(points, |z| integrate(h, z, tau, steps))
        .into_iter()
        .collect()
}

/// Determinant of the central-difference Jacobian of the time-`τ` flow map
/// at `z`.
pub fn flow_jacobian_determinant(
    h: &DrivingHamiltonian,
    z: &PhasePoint,
    tau: f64,
    steps: usize,
    eps: f64,
) -> Result<f64> {
    let base = z.flat();
    let m = base.len();
    let probes: Vec<PhasePoint> = (0..m)
        .flat_map(|j| {
            [eps, -eps].map(|e| {
                let mut x = base.clone();
                x[j] += e;
                PhasePoint::from_flat(&x)
            })
        })
        .collect();
    let images = integrate_many(h, &probes, tau, steps)?;
    let jac = DMatrix::from_fn(m, m, |i, j| {
        (images[2 * j].flat()[i] - images[2 * j + 1].flat()[i]) / (2.0 * eps)
    });
    Ok(jac.determinant())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pt(q: &[f64], p: &[f64]) -> PhasePoint {
        PhasePoint::new(q.to_vec(), p.to_vec()).unwrap()
    }

    fn catalog(key: &str) -> DrivingHamiltonian {
        Catalog::from_key(key).unwrap().build().unwrap()
    }

    #[test]
    fn zero_flow_is_identity() {
        let z = pt(&[0.3, -1.0], &[2.0, 0.5]);
        assert_eq!(integrate(&catalog("ZERO"), &z, 3.0, 10).unwrap(), z);
    }

    #[test]
    fn free_translation() {
        let z = integrate(&catalog("FREE"), &pt(&[0.25], &[-1.0]), 1.0, 7).unwrap();
        assert!((z.q[0] - 1.25).abs() < 1e-14);
        assert_eq!(z.p[0], -1.0);
    }

    #[test]
    fn oscillator_matches_closed_form() {
        let z0 = pt(&[1.0], &[0.0]);
        let t = 1.3;
        let z = integrate(&catalog("HARMONIC"), &z0, t, 1000).unwrap();
        assert!((z.q[0] - t.cos()).abs() < 1e-12);
        assert!((z.p[0] + t.sin()).abs() < 1e-12);
        let back = integrate(&catalog("HARMONIC"), &z0, 2.0 * PI, DEFAULT_STEPS).unwrap();
        assert!(back.distance(&z0) < 1e-8);
    }

    #[test]
    fn argument_checks() {
        let z = pt(&[0.0], &[0.0]);
        assert!(integrate(&catalog("FREE"), &z, 1.0, 0).is_err());
        assert!(integrate(&catalog("FREE"), &z, 0.0, 1).is_err());
        assert!(PhasePoint::new(vec![0.0], vec![]).is_err());
        assert!(Catalog::from_key("STEER").is_err());
        assert!(Catalog::from_key("NOPE").is_err());
        let s = steering_hamiltonian(
            &pt(&[0.0, 0.0], &[0.0, 0.0]),
            &pt(&[1.0, 1.0], &[0.0, 0.0]),
            1.0,
        )
        .unwrap();
        assert!(integrate(&s, &z, 1.0, 1).is_err());
    }

    #[test]
    fn blow_up_is_reported() {
        let h = DrivingHamiltonian::with_gradient(
            "runaway",
            |q: &[f64], p: &[f64], _| -q[0].powi(4) + p[0] * p[0],
            |q: &[f64], p: &[f64], _| (vec![-4.0 * q[0].powi(3)], vec![2.0 * p[0]]),
        );
        let r = integrate(&h, &pt(&[10.0], &[0.0]), 100.0, 100);
        assert!(matches!(r, Err(Error::NonFinite { .. })), "{r:?}");
    }

    #[test]
    fn numerical_gradient_consistency() {
        let h = DrivingHamiltonian::new("quartic", |q: &[f64], p: &[f64], t| {
            q[0].powi(4) + t * p[0] * q[0]
        });
        let z = pt(&[0.7], &[-0.4]);
        let (dq, dp) = h.gradient(&z, 0.5);
        assert!((dq[0] - (4.0 * 0.343 + 0.5 * -0.4)).abs() < 1e-6);
        assert!((dp[0] - 0.5 * 0.7).abs() < 1e-6);
        assert!(catalog("HARMONIC").gradient_consistency(&z, 0.0) < 1e-8);
        assert!(catalog("RAMP").gradient_consistency(&z, 0.3) < 1e-8);
    }

    #[test]
    fn composition_of_translation_and_kick() {
        let z0 = pt(&[0.2], &[-0.3]);
        let h21 = compose_hamiltonians(&catalog("FREE"), &catalog("KICK"), 1.0);
        let direct = integrate(&h21, &z0, 1.0, 100).unwrap();
        let mid = integrate(&catalog("FREE"), &z0, 1.0, 100).unwrap();
        let seq = integrate(&catalog("KICK"), &mid, 1.0, 100).unwrap();
        assert!(direct.distance(&seq) < 1e-12);
        assert!((direct.q[0] - 1.2).abs() < 1e-12);
        assert!((direct.p[0] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn composition_preserves_time_dependence() {
        let z0 = pt(&[0.0], &[0.0]);
        let tau = 2.0;
        let h21 = compose_hamiltonians(&catalog("RAMP"), &catalog("RAMP"), tau);
        let direct = integrate(&h21, &z0, tau, 2000).unwrap();
        // Each half moves q by ∫₀^τ t dt = τ²/2.
        assert!((direct.q[0] - tau * tau).abs() < 1e-10);
        assert_eq!(h21.breakpoints(tau), vec![1.0]);
    }

    #[test]
    fn zero_composition_and_reversal() {
        let z0 = pt(&[0.5], &[0.5]);
        let h = compose_hamiltonians(&catalog("ZERO"), &catalog("ZERO"), 1.0);
        assert_eq!(integrate(&h, &z0, 1.0, 10).unwrap(), z0);
        let r = reverse_hamiltonian(&catalog("ZERO"), 1.0);
        assert_eq!(r.energy(&z0, 0.3), 0.0);
    }

    #[test]
    fn reversal_of_ramp() {
        let z0 = pt(&[0.1, -0.2], &[0.3, 0.4]);
        let tau = 1.5;
        let h = catalog("RAMP");
        let there = integrate(&h, &z0, tau, DEFAULT_STEPS).unwrap();
        let back = integrate(&reverse_hamiltonian(&h, tau), &there, tau, DEFAULT_STEPS).unwrap();
        assert!(back.distance(&z0) < 1e-10);
    }

    #[test]
    fn reversal_error_is_fourth_order() {
        let z0 = pt(&[1.0], &[0.5]);
        let h = catalog("HARMONIC");
        let rev = reverse_hamiltonian(&h, 1.0);
        let err = |n: usize| {
            let there = integrate(&h, &z0, 1.0, n).unwrap();
            integrate(&rev, &there, 1.0, n).unwrap().distance(&z0)
        };
        let ratio = err(10) / err(20);
        assert!((8.0..=32.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn steering_reaches_target_and_translates_rigidly() {
        let z0 = pt(&[0.0], &[0.0]);
        let z1 = pt(&[1.0], &[1.0]);
        let s = steering_hamiltonian(&z0, &z1, 1.0).unwrap();
        assert!(
            integrate(&s, &z0, 1.0, DEFAULT_STEPS)
                .unwrap()
                .distance(&z1)
                < 1e-12
        );
        let same = steering_hamiltonian(&z0, &z0, 1.0).unwrap();
        assert_eq!(integrate(&same, &z0, 1.0, 10).unwrap(), z0);

        let a = pt(&[3.0], &[-2.0]);
        let out = integrate_many(&s, &[z0.clone(), a.clone()], 1.0, 100).unwrap();
        let before = a.offset(&z0);
        let after = out[1].offset(&out[0]);
        assert!(before.distance(&after) < 1e-12);
    }

    #[test]
    fn harmonic_flow_is_area_preserving() {
        let det = flow_jacobian_determinant(
            &catalog("HARMONIC"),
            &pt(&[0.3, 1.0], &[-0.2, 0.0]),
            2.0,
            2000,
            1e-5,
        )
        .unwrap();
        assert!((det - 1.0).abs() < 1e-4);
    }
}

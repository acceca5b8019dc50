//! Unit vectors of `ℂ^d` with every unitary kinematically possible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::linalg::CMatrix;
use super::{c, check_dim, StateVector, Unitary, NORM_TOLERANCE, OPERATOR_TOLERANCE};
use crate::error::{Error, Result};
use crate::schema::{Evidence, Schema, Violation, DEFAULT_TOLERANCE};

/// Quantum schema over `ℂ^d`. Property S checks run against a declared,
/// seeded probe set of unitaries, so verdicts are sampled evidence.
#[derive(Debug, Clone)]
pub struct UnitarySchema {
    dim: usize,
    n_steps: usize,
    tolerance: f64,
    probe_seed: u64,
    probes: Vec<(String, Unitary)>,
}

/// Random probes drawn in addition to the identity.
pub const DEFAULT_PROBES: usize = 16;

impl UnitarySchema {
    pub fn new(dim: usize, n_steps: usize, probe_count: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension 0".into()));
        }
        if n_steps == 0 {
            return Err(Error::NoSteps);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut probes = vec![("identity".to_string(), Unitary::identity(dim))];
        probes.extend(
            (0..probe_count).map(|i| (format!("probe{i}"), Unitary::random(dim, &mut rng))),
        );
        Ok(UnitarySchema {
            dim,
            n_steps,
            tolerance: DEFAULT_TOLERANCE,
            probe_seed: seed,
            probes,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(Error::InvalidParameter(format!("tolerance {tolerance}")));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn probe_seed(&self) -> u64 {
        self.probe_seed
    }
}

impl Schema for UnitarySchema {
    type State = StateVector;
    type Map = Unitary;

    fn n_steps(&self) -> usize {
        self.n_steps
    }

    fn is_reversible(&self) -> bool {
        true
    }

    fn evidence(&self) -> Evidence {
        Evidence::Sampled {
            probes: self.probes.len(),
        }
    }

    fn check_state(&self, x: &StateVector) -> Result<()> {
        check_dim(self.dim, x.dim())?;
        let norm = x.amplitudes().norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE.max(self.tolerance) {
            return Err(Error::NotNormalized { norm });
        }
        Ok(())
    }

    fn apply(&self, map: &Unitary, x: &StateVector) -> StateVector {
        map.apply(x)
    }

    fn compose(&self, outer: &Unitary, inner: &Unitary) -> Unitary {
        outer.compose(inner)
    }

    fn invert(&self, map: &Unitary) -> Option<Unitary> {
        Some(map.dagger())
    }

    fn identity(&self) -> Unitary {
        Unitary::identity(self.dim)
    }

    fn is_kinematic(&self, map: &Unitary) -> bool {
        map.dim() == self.dim && map.deviation() <= OPERATOR_TOLERANCE.max(self.tolerance)
    }

    fn same_state(&self, a: &StateVector, b: &StateVector) -> bool {
        a.distance(b) <= self.tolerance
    }

    fn same_map(&self, a: &Unitary, b: &Unitary) -> bool {
        super::linalg::max_abs_diff(a.matrix(), b.matrix()) <= self.tolerance
    }

    fn bijection_defect(&self, v: &Unitary) -> Result<Option<Violation>> {
        check_dim(self.dim, v.dim())?;
        let deviation = v.deviation();
        Ok(
            (deviation > OPERATOR_TOLERANCE.max(self.tolerance)).then(|| {
                Violation::NotInvertible {
                    detail: format!("not unitary, deviation {deviation:.3e}"),
                }
            }),
        )
    }

    fn probes(&self) -> Vec<(&str, &Unitary)> {
        self.probes.iter().map(|(n, u)| (n.as_str(), u)).collect()
    }

    fn transport(&self, from: &StateVector, to: &StateVector) -> Option<Unitary> {
        state_transporter(from, to).ok()
    }

    fn is_transitive(&self) -> bool {
        true
    }

    fn describe_state(&self, x: &StateVector) -> String {
        let parts: Vec<String> = x
            .amplitudes()
            .iter()
            .map(|z| format!("{:.4}{:+.4}i", z.re, z.im))
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

/// Unitary `W` with `Wψ = φ`: a phase and a rotation in `span{ψ, φ}`,
/// identity on the orthogonal complement. `W = 1` when `φ = ψ`.
pub fn state_transporter(psi: &StateVector, phi: &StateVector) -> Result<Unitary> {
    check_dim(psi.dim(), phi.dim())?;
    let d = psi.dim();
    let overlap = psi.inner(phi);
    let cos = overlap.norm().min(1.0);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    let e1 = psi.amplitudes();
    let aligned = phi.amplitudes().map(|z| z * phase.conj());
    let residual = &aligned - e1.scale(cos);
    let sin = residual.norm();
    let id = CMatrix::identity(d, d);
    let p1 = e1 * e1.adjoint();
    let w = if sin < 1e-14 {
        &id + p1 * (phase - c(1.0, 0.0))
    } else {
        let e2 = residual.unscale(sin);
        let p2 = &e2 * e2.adjoint();
        let plane = (&p1 + &p2).scale(cos) + (&e2 * e1.adjoint() - e1 * e2.adjoint()).scale(sin);
        &id - &p1 - &p2 + plane * phase
    };
    Ok(Unitary::from_raw(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::max_abs_diff;
    use crate::quantum::UnitarySchedule;
    use crate::schema::{check_property_s, check_property_s_ext, run_instance};
    use crate::similarity::{construct_gruebleen, transform_instance, ExtendedSimilarity};

    #[test]
    fn transporter_cases() {
        let psi = StateVector::basis(2, 0);
        let w = state_transporter(&psi, &psi).unwrap();
        assert_eq!(w, Unitary::identity(2));
        let w = state_transporter(&psi, &StateVector::basis(2, 1)).unwrap();
        assert!(w.apply(&psi).distance(&StateVector::basis(2, 1)) < 1e-12);
        let minus = StateVector::from_raw(psi.amplitudes().map(|z| -z));
        let w = state_transporter(&psi, &minus).unwrap();
        assert!(w.apply(&psi).distance(&minus) < 1e-15);
        assert!(w.deviation() < 1e-15);
    }

    #[test]
    fn transporter_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let a = StateVector::random(8, &mut rng);
            let b = StateVector::random(8, &mut rng);
            let w = state_transporter(&a, &b).unwrap();
            assert!(w.apply(&a).distance(&b) < 1e-10);
            assert!(w.deviation() < 1e-10);
        }
    }

    #[test]
    fn unitary_similarities_pass_sampled_property_s() {
        let s = UnitarySchema::new(4, 2, DEFAULT_PROBES, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = Unitary::random(4, &mut rng);
        let verdict = check_property_s(&s, &v).unwrap();
        assert!(verdict.holds);
        assert!(verdict.evidence.is_sampled());
        let bad = Unitary::from_raw(v.matrix().scale(2.0));
        assert!(!check_property_s(&s, &bad).unwrap().holds);
        assert!(check_property_s(&s, &Unitary::identity(3)).is_err());
    }

    #[test]
    fn transform_matches_viewed_trajectory() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let s = UnitarySchema::new(4, 5, 4, 2).unwrap();
        let inst = UnitarySchedule::random(4, 5, &mut rng)
            .unwrap()
            .to_instance(StateVector::random(4, &mut rng));
        let v = ExtendedSimilarity::new((0..6).map(|_| Unitary::random(4, &mut rng)).collect());
        let out = transform_instance(&s, &v, &inst).unwrap();
        let before = run_instance(&s, &inst).unwrap();
        let after = run_instance(&s, &out).unwrap();
        for (k, (x, y)) in before.states.iter().zip(&after.states).enumerate() {
            assert!(v.maps[k].apply(x).distance(y) < 1e-10);
        }
    }

    #[test]
    fn gruebleen_on_unitary_schema() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let s = UnitarySchema::new(4, 4, 4, 3).unwrap();
        let mk = |rng: &mut ChaCha8Rng| {
            UnitarySchedule::random(4, 4, rng)
                .unwrap()
                .to_instance(StateVector::random(4, rng))
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let v = construct_gruebleen(&s, &a, &b).unwrap();
        let xa = run_instance(&s, &a).unwrap();
        let yb = run_instance(&s, &b).unwrap();
        for k in 0..=4 {
            assert!(v.maps[k].apply(&xa.states[k]).distance(&yb.states[k]) < 1e-10);
        }
        let moved = transform_instance(&s, &v, &a).unwrap();
        for (m, e) in moved.maps.iter().zip(&b.maps) {
            assert!(max_abs_diff(m.matrix(), e.matrix()) < 1e-10);
        }
        assert!(check_property_s_ext(&s, &v.maps).unwrap().holds);
    }
}

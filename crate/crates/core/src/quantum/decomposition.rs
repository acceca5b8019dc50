//! Tensor-product decompositions and entanglement across a cut.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use serde::Serialize;

use super::linalg::{kron_all, unitarity_deviation, CMatrix};
use super::{c, check_dim, vector, StateVector, Unitary, UnitarySchema, OPERATOR_TOLERANCE};
use crate::error::{Error, Result};
use crate::similarity::Proposition;

/// Singular values at or below this count as zero.
pub const SCHMIDT_TOLERANCE: f64 = 1e-10;

/// Factor dimensions plus a unitary `R` taking a state to its coordinates in
/// the decomposition's product basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    dims: Vec<usize>,
    basis: Unitary,
}

impl Decomposition {
    pub fn new(dims: Vec<usize>, basis: Unitary) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "factor dimensions {dims:?}"
            )));
        }
        let total: usize = dims.iter().product();
        check_dim(total, basis.dim())?;
        let deviation = basis.deviation();
        if deviation > OPERATOR_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Decomposition { dims, basis })
    }

    /// The computational product basis.
    pub fn computational(dims: Vec<usize>) -> Result<Self> {
        let total = dims.iter().product();
        Self::new(dims, Unitary::identity(total))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &Unitary {
        &self.basis
    }
}

/// `V = R† (V₁ ⊗ ⋯ ⊗ V_n) R`.
pub fn product_similarity(factors: &[Unitary], decomposition: &Decomposition) -> Result<Unitary> {
    if factors.len() != decomposition.dims.len() {
        return Err(Error::LengthMismatch {
            got: factors.len(),
            expected: decomposition.dims.len(),
        });
    }
    for (f, &d) in factors.iter().zip(&decomposition.dims) {
        check_dim(d, f.dim())?;
    }
    let mats: Vec<CMatrix> = factors.iter().map(|f| f.matrix().clone()).collect();
    let r = decomposition.basis.matrix();
    Ok(Unitary::from_raw(r.adjoint() * kron_all(&mats) * r))
}

/// Singular values, descending, of the coefficient matrix across the cut
/// after the first `cut` factors.
pub fn schmidt_coefficients(
    psi: &StateVector,
    decomposition: &Decomposition,
    cut: usize,
) -> Result<Vec<f64>> {
    check_dim(decomposition.dim(), psi.dim())?;
    if cut == 0 || cut >= decomposition.dims.len() {
        return Err(Error::InvalidParameter(format!(
            "cut {cut} does not split {} factors",
            decomposition.dims.len()
        )));
    }
    let left: usize = decomposition.dims[..cut].iter().product();
    let right = decomposition.dim() / left;
    let coords = decomposition.basis.matrix() * psi.amplitudes();
    let m = DMatrix::from_fn(left, right, |i, j| coords[i * right + j]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

pub fn schmidt_rank(psi: &StateVector, decomposition: &Decomposition, cut: usize) -> Result<usize> {
    Ok(schmidt_coefficients(psi, decomposition, cut)?
        .iter()
        .filter(|&&s| s > SCHMIDT_TOLERANCE)
        .count())
}

/// True iff the state has Schmidt rank above 1 across `cut`.
pub fn entangled_cut(
    decomposition: Decomposition,
    cut: usize,
) -> Result<Proposition<UnitarySchema>> {
    if cut == 0 || cut >= decomposition.dims.len() {
        return Err(Error::InvalidParameter(format!(
            "cut {cut} does not split {} factors",
            decomposition.dims.len()
        )));
    }
    let name = format!("ENTANGLED_CUT({:?}@{cut})", decomposition.dims);
    Ok(Proposition::state(
        name,
        move |_: &UnitarySchema, x: &StateVector| {
            schmidt_rank(x, &decomposition, cut)
                .map(|r| (r > 1).into())
                .map_err(|e| e.to_string())
        },
    ))
}

/// `Φ₊, Φ₋, Ψ₊, Ψ₋` on two qubits.
pub fn bell_states() -> [(&'static str, StateVector); 4] {
    let h = FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let p = c(h, 0.0);
    let m = c(-h, 0.0);
    [
        ("Phi+", StateVector::from_raw(vector(&[p, z, z, p]))),
        ("Phi-", StateVector::from_raw(vector(&[p, z, z, m]))),
        ("Psi+", StateVector::from_raw(vector(&[z, p, p, z]))),
        ("Psi-", StateVector::from_raw(vector(&[z, p, m, z]))),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct BellEntry {
    pub state: &'static str,
    /// Singular values across the original qubit cut.
    pub original: Vec<f64>,
    /// Singular values across the alternate cut.
    pub alternate: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BellReport {
    pub decomposition: Decomposition,
    pub basis_deviation: f64,
    pub entries: Vec<BellEntry>,
}

impl BellReport {
    pub fn max_alternate_second_value(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.alternate[1])
            .fold(0.0, f64::max)
    }

    pub fn max_original_deviation(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|e| e.original.iter().map(|s| (s - FRAC_1_SQRT_2).abs()))
            .fold(0.0, f64::max)
    }
}

/// Qubits `A ⊗ B` in which every Bell state is a product:
/// `Φ± = |Φ⟩_A ⊗ |±⟩_B` and `Ψ± = |Ψ⟩_A ⊗ |±⟩_B`, where `|Φ⟩_A, |Ψ⟩_A` are
/// the A basis and `|±⟩_B = (|0⟩ ± |1⟩)/√2`.
pub fn bell_alternate_decomposition() -> Result<BellReport> {
    let h = FRAC_1_SQRT_2;
    let targets = [
        vector(&[c(h, 0.0), c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
        vector(&[c(h, 0.0), c(-h, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
        vector(&[c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0), c(h, 0.0)]),
        vector(&[c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0), c(-h, 0.0)]),
    ];
    let bells = bell_states();
    let mut r = CMatrix::zeros(4, 4);
    for ((_, b), t) in bells.iter().zip(&targets) {
        r += t * b.amplitudes().adjoint();
    }
    let basis_deviation = unitarity_deviation(&r);
    let alternate = Decomposition::new(vec![2, 2], Unitary::new(r)?)?;
    let original = Decomposition::computational(vec![2, 2])?;
    let entries = bells
        .iter()
        .map(|(name, b)| {
            Ok(BellEntry {
                state: name,
                original: schmidt_coefficients(b, &original, 1)?,
                alternate: schmidt_coefficients(b, &alternate, 1)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(BellReport {
        decomposition: alternate,
        basis_deviation,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::max_abs_diff;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_qubits() -> Decomposition {
        Decomposition::computational(vec![2, 2]).unwrap()
    }

    #[test]
    fn identity_factors_give_identity() {
        let d = Decomposition::computational(vec![2, 3]).unwrap();
        let v = product_similarity(&[Unitary::identity(2), Unitary::identity(3)], &d).unwrap();
        assert_eq!(v, Unitary::identity(6));
        assert!(product_similarity(&[Unitary::identity(2)], &d).is_err());
        assert!(product_similarity(&[Unitary::identity(3), Unitary::identity(2)], &d).is_err());
    }

    #[test]
    fn local_unitaries_preserve_schmidt_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = two_qubits();
        let phi = &bell_states()[0].1;
        let prod = StateVector::basis(4, 0);
        for _ in 0..20 {
            let v = product_similarity(
                &[Unitary::random(2, &mut rng), Unitary::random(2, &mut rng)],
                &d,
            )
            .unwrap();
            assert_eq!(schmidt_rank(&v.apply(phi), &d, 1).unwrap(), 2);
            assert_eq!(schmidt_rank(&v.apply(&prod), &d, 1).unwrap(), 1);
            let before = schmidt_coefficients(phi, &d, 1).unwrap();
            let after = schmidt_coefficients(&v.apply(phi), &d, 1).unwrap();
            for (a, b) in before.iter().zip(after) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn schmidt_cut_validation() {
        let d = two_qubits();
        let s = StateVector::basis(4, 0);
        assert!(schmidt_coefficients(&s, &d, 0).is_err());
        assert!(schmidt_coefficients(&s, &d, 2).is_err());
        assert!(schmidt_coefficients(&StateVector::basis(2, 0), &d, 1).is_err());
    }

    #[test]
    fn three_factor_cut() {
        let d = Decomposition::computational(vec![2, 2, 2]).unwrap();
        // Bell pair on qubits 0,1 times |0⟩ on qubit 2.
        let h = FRAC_1_SQRT_2;
        let mut v = vec![c(0.0, 0.0); 8];
        v[0] = c(h, 0.0);
        v[6] = c(h, 0.0);
        let s = StateVector::from_slice(&v).unwrap();
        assert_eq!(schmidt_rank(&s, &d, 1).unwrap(), 2);
        assert_eq!(schmidt_rank(&s, &d, 2).unwrap(), 1);
    }

    #[test]
    fn bell_report() {
        let r = bell_alternate_decomposition().unwrap();
        assert!(r.basis_deviation < 1e-15);
        assert!(r.max_alternate_second_value() < 1e-12);
        assert!(r.max_original_deviation() < 1e-12);
        // R Φ₊ = |0⟩|+⟩.
        let coords = r.decomposition.basis().matrix() * bell_states()[0].1.amplitudes();
        let want = vector(&[
            c(FRAC_1_SQRT_2, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
        ]);
        assert!(
            max_abs_diff(
                &CMatrix::from_column_slice(4, 1, coords.as_slice()),
                &CMatrix::from_column_slice(4, 1, want.as_slice())
            ) < 1e-15
        );
        let prod = StateVector::basis(4, 0);
        assert_eq!(schmidt_rank(&prod, &two_qubits(), 1).unwrap(), 1);
    }
}

//! Matrix exponential by scaling and squaring with a degree-13 Padé
//! approximant.

use nalgebra::DMatrix;
use num_complex::Complex64;

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the unscaled [13/13] approximant is accurate to
/// double precision.
const THETA13: f64 = 5.371_920_351_148_152;

fn norm1(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` for a square complex matrix.
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }
    let norm = norm1(a);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale(0.5f64.powi(s));
    let b = |i: usize| Complex64::new(PADE13[i], 0.0);
    let id = DMatrix::<Complex64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &id * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &id * b(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular for scaled input");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::{dagger, max_abs_diff, random_hermitian};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_and_diagonal() {
        let z = DMatrix::<Complex64>::zeros(3, 3);
        assert_eq!(expm(&z), DMatrix::identity(3, 3));
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.0, 0.0),
            c(0.0, 2.0),
            c(-3.0, 0.5),
        ]));
        let e = expm(&d);
        for i in 0..3 {
            let want = d[(i, i)].exp();
            assert_relative_eq!(e[(i, i)].re, want.re, epsilon = 1e-13);
            assert_relative_eq!(e[(i, i)].im, want.im, epsilon = 1e-13);
        }
    }

    #[test]
    fn pauli_x_rotation() {
        // exp(-i θ X / 2) at θ = π is -i X.
        let x =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let u = expm(&(x.clone() * c(0.0, -std::f64::consts::FRAC_PI_2)));
        let want = x * c(0.0, -1.0);
        assert!(max_abs_diff(&u, &want) < 1e-14);
    }

    #[test]
    fn nilpotent_is_exact() {
        let n =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(5.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let e = expm(&n);
        assert_eq!(e[(0, 1)], c(5.0, 0.0));
        assert_eq!(e[(0, 0)], c(1.0, 0.0));
    }

    #[test]
    fn matches_eigen_route_on_hermitian_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(d, t) in &[(2, 0.05), (4, 1.0), (8, 3.0), (8, 40.0)] {
            let h = random_hermitian(d, &mut rng);
            let eig = h.clone().symmetric_eigen();
            let phases = eig.eigenvalues.map(|l| c(0.0, -l * t).exp());
            let want =
                &eig.eigenvectors * DMatrix::from_diagonal(&phases) * dagger(&eig.eigenvectors);
            let got = expm(&(h * c(0.0, -t)));
            assert!(max_abs_diff(&got, &want) < 1e-11, "d={d} t={t}");
        }
    }

    #[test]
    fn matches_library_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [3, 5, 8] {
            let a = crate::quantum::linalg::random_ginibre(d, &mut rng) * c(0.7, 0.0);
            assert!(max_abs_diff(&expm(&a), &a.exp()) < 1e-11);
        }
    }
}

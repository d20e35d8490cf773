use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

const INPUT_HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `h = V diag(values) V^dagger` with ascending values.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns.
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    /// `V f(diag) V^dagger` for a complex spectral function.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.values.len();
        let v = self.vectors.as_slice();
        let fv: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += v[i * n + k] * fv[k] * v[j * n + k].conj();
            }
            acc
        })
    }

    /// `exp(-i h t)`.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        self.apply_spectral(|l| Complex64::from_polar(1.0, -l * t))
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_spectral(|l| Complex64::new(l, 0.0))
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEig> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let deviation = h.hermiticity_error();
    if deviation > INPUT_HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.rows();
    let mut a = h.clone();
    a.symmetrize();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let off: f64 =
                (0..n).flat_map(|p| ((p + 1)..n).map(move |q| (p, q))).map(|(p, q)| a[(p, q)].norm_sqr()).sum();
            if off.sqrt() <= f64::EPSILON * 1e-2 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip entries that can no longer move the diagonal.
    if mag < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    // Phase-rotate the pair onto a real symmetric block, then a real Jacobi rotation.
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * c + akq * jqp;
        a[(k, q)] = akp * s + akq * jqq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c + vkq * jqp;
        v[(k, q)] = vkp * s + vkq * jqq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * c + aqk * jqp.conj();
        a[(q, k)] = apk * s + aqk * jqq.conj();
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

/// `exp(-i h t)` from the spectral decomposition of `h`.
pub fn unitary_from_hamiltonian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(h)?.propagator(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{pauli_x, pauli_z};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let mut h = &m + &m.adjoint();
        h.symmetrize();
        h
    }

    /// Independent oracle: scaling-and-squaring on a truncated Taylor series.
    fn taylor_expm_minus_i(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let n = h.rows();
        let a = h.scale(Complex64::new(0.0, -t));
        let norm = a.frobenius_norm();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let a = a.scale(Complex64::new(1.0 / f64::powi(2.0, squarings as i32), 0.0));
        let mut term = ComplexMatrix::identity(n);
        let mut sum = ComplexMatrix::identity(n);
        for k in 1..=50 {
            term = (&term * &a).scale(Complex64::new(1.0 / k as f64, 0.0));
            sum = &sum + &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn diagonal_input_sorted_ascending() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[3.0, 1.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 3.0]);
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((e.vectors[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = hermitian_eig(&pauli_x()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // (|0> - |1>)/sqrt2 up to a global phase
        let v0 = (e.vectors[(0, 0)], e.vectors[(1, 0)]);
        assert!((v0.0.norm() - h).abs() < 1e-14 && (v0.0 + v0.1).norm() < 1e-14);
        let v1 = (e.vectors[(0, 1)], e.vectors[(1, 1)]);
        assert!((v1.0 - v1.1).norm() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstruction_and_orthogonality() {
        for seed in 0..5 {
            let h = random_hermitian(16, seed);
            let e = hermitian_eig(&h).unwrap();
            assert!(e.reconstruct().approx_eq(&h, 1e-9), "seed {seed}");
            let vtv = &e.vectors.adjoint() * &e.vectors;
            assert!(vtv.approx_eq(&ComplexMatrix::identity(16), 1e-9));
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum_still_reconstructs() {
        let z = pauli_z();
        let h = crate::qcore::kron(&z, &ComplexMatrix::identity(4));
        let e = hermitian_eig(&h).unwrap();
        assert!(e.reconstruct().approx_eq(&h, 1e-12));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn unitary_special_cases() {
        let zero = ComplexMatrix::zeros(4, 4);
        assert!(unitary_from_hamiltonian(&zero, 3.3).unwrap().approx_eq(&ComplexMatrix::identity(4), 0.0));
        let u = unitary_from_hamiltonian(&pauli_z(), std::f64::consts::FRAC_PI_2).unwrap();
        assert!((u[(0, 0)] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((u[(1, 1)] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(u[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn unitary_matches_taylor_oracle() {
        for seed in 10..13 {
            let h = random_hermitian(16, seed);
            let u = unitary_from_hamiltonian(&h, 0.7).unwrap();
            let oracle = taylor_expm_minus_i(&h, 0.7);
            let err = u.max_abs_diff(&oracle).unwrap();
            assert!(err < 1e-8, "seed {seed}: {err:e}");
        }
    }
}

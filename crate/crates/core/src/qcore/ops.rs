use num_complex::Complex64;

use super::{ComplexMatrix, DensityMatrix};
use crate::error::{Error, Result};

pub fn pauli_x() -> ComplexMatrix {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    ComplexMatrix::from_vec(2, 2, vec![o, l, l, o]).expect("2x2")
}

pub fn pauli_y() -> ComplexMatrix {
    let o = Complex64::new(0.0, 0.0);
    ComplexMatrix::from_vec(2, 2, vec![o, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), o]).expect("2x2")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

/// Kronecker product; entry `(i*b.rows + k, j*b.cols + l)` is `a(i,j) * b(k,l)`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    let rows = a.rows() * br;
    let cols = a.cols() * bc;
    let mut out = ComplexMatrix::zeros(rows, cols);
    let (ad, bd) = (a.as_slice(), b.as_slice());
    let od = out.as_mut_slice();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = ad[i * a.cols() + j];
            for k in 0..br {
                let base = (i * br + k) * cols + j * bc;
                for l in 0..bc {
                    od[base + l] = aij * bd[k * bc + l];
                }
            }
        }
    }
    out
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` on qubit `site` (1-based, leftmost is qubit 1).
pub fn embed_single(op: &ComplexMatrix, site: usize, n_qubits: usize) -> Result<ComplexMatrix> {
    if op.rows() != 2 || op.cols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "single-qubit operator must be 2x2, got {}x{}",
            op.rows(),
            op.cols()
        )));
    }
    if site == 0 || site > n_qubits {
        return Err(Error::SiteOutOfRange { site, n_qubits });
    }
    let left = ComplexMatrix::identity(1 << (site - 1));
    let right = ComplexMatrix::identity(1 << (n_qubits - site));
    Ok(kron(&kron(&left, op), &right))
}

/// Trace out the given qubits (1-based). The remaining qubits keep their order.
pub fn partial_trace(rho: &DensityMatrix, traced_sites: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    let mut traced = traced_sites.to_vec();
    traced.sort_unstable();
    traced.dedup();
    if traced.is_empty() {
        return Err(Error::InvalidArgument("no qubits to trace out".into()));
    }
    if let Some(&bad) = traced.iter().find(|&&s| s == 0 || s > n) {
        return Err(Error::SiteOutOfRange { site: bad, n_qubits: n });
    }
    if traced.len() >= n {
        return Err(Error::InvalidArgument("cannot trace out every qubit".into()));
    }
    let kept: Vec<usize> = (1..=n).filter(|s| !traced.contains(s)).collect();

    // Bit position of qubit s in a basis index is n - s.
    let spread = |value: usize, sites: &[usize]| -> usize {
        sites.iter().enumerate().fold(0, |acc, (pos, &s)| {
            let bit = (value >> (sites.len() - 1 - pos)) & 1;
            acc | (bit << (n - s))
        })
    };
    let kept_idx: Vec<usize> = (0..1usize << kept.len()).map(|v| spread(v, &kept)).collect();
    let traced_idx: Vec<usize> = (0..1usize << traced.len()).map(|v| spread(v, &traced)).collect();

    let dim = 1usize << n;
    let src = rho.matrix().as_slice();
    let m = kept_idx.len();
    let mut out = ComplexMatrix::zeros(m, m);
    let dst = out.as_mut_slice();
    for (a, &ka) in kept_idx.iter().enumerate() {
        for (b, &kb) in kept_idx.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &t in &traced_idx {
                acc += src[(ka | t) * dim + (kb | t)];
            }
            dst[a * m + b] = acc;
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// `Re tr(rho * obs)`.
pub fn expectation(rho: &DensityMatrix, obs: &ComplexMatrix) -> Result<f64> {
    let r = rho.matrix();
    if obs.rows() != r.rows() || obs.cols() != r.cols() {
        return Err(Error::DimensionMismatch(format!(
            "observable is {}x{}, state is {}x{}",
            obs.rows(),
            obs.cols(),
            r.rows(),
            r.cols()
        )));
    }
    let n = r.rows();
    let (rd, od) = (r.as_slice(), obs.as_slice());
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += rd[i * n + j] * od[j * n + i];
        }
    }
    debug_assert!(acc.im.abs() <= 1e-9, "imaginary expectation {}", acc.im);
    Ok(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis_state(bits: &[u8]) -> DensityMatrix {
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        let dim = 1 << bits.len();
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(idx, idx)] = Complex64::new(1.0, 0.0);
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn kron_identities_and_dimensions() {
        let i2 = ComplexMatrix::identity(2);
        assert!(kron(&i2, &i2).approx_eq(&ComplexMatrix::identity(4), 0.0));
        let zi = kron(&pauli_z(), &i2);
        assert!(zi.approx_eq(&ComplexMatrix::from_real_diagonal(&[1., 1., -1., -1.]), 0.0));
        let big = kron(&pauli_x(), &ComplexMatrix::identity(8));
        assert_eq!((big.rows(), big.cols()), (16, 16));
    }

    #[test]
    fn embed_single_places_operator_by_site() {
        let z1 = embed_single(&pauli_z(), 1, 2).unwrap();
        assert!(z1.approx_eq(&ComplexMatrix::from_real_diagonal(&[1., 1., -1., -1.]), 0.0));
        let z2 = embed_single(&pauli_z(), 2, 2).unwrap();
        assert!(z2.approx_eq(&ComplexMatrix::from_real_diagonal(&[1., -1., 1., -1.]), 0.0));
        let id = embed_single(&ComplexMatrix::identity(2), 3, 4).unwrap();
        assert!(id.approx_eq(&ComplexMatrix::identity(16), 0.0));
        assert!(matches!(embed_single(&pauli_z(), 5, 4), Err(Error::SiteOutOfRange { site: 5, n_qubits: 4 })));
        assert!(embed_single(&pauli_z(), 0, 4).is_err());
    }

    #[test]
    fn partial_trace_of_product_basis_state() {
        let rho = basis_state(&[0, 1, 0, 1]);
        let reduced = partial_trace(&rho, &[1, 2, 3]).unwrap();
        assert!(reduced.matrix().approx_eq(&ComplexMatrix::from_real_diagonal(&[0., 1.]), 1e-15));
        // Keeping qubits 2 and 4 leaves |11>.
        let reduced = partial_trace(&rho, &[1, 3]).unwrap();
        assert!(reduced.matrix().approx_eq(&ComplexMatrix::from_real_diagonal(&[0., 0., 0., 1.]), 1e-15));
    }

    #[test]
    fn partial_trace_of_bell_pair_is_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityMatrix::from_pure(&[
            Complex64::new(h, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(h, 0.0),
        ])
        .unwrap();
        let reduced = partial_trace(&bell, &[1]).unwrap();
        assert!(reduced.matrix().approx_eq(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5]), 1e-15));
    }

    #[test]
    fn partial_trace_rejects_bad_site_sets() {
        let rho = DensityMatrix::ground(4);
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(partial_trace(&rho, &[1, 2, 3, 4]).is_err());
        assert!(partial_trace(&rho, &[0]).is_err());
        assert!(partial_trace(&rho, &[7]).is_err());
    }

    #[test]
    fn expectation_sign_conventions() {
        let z = pauli_z();
        assert_eq!(expectation(&DensityMatrix::ground(1), &z).unwrap(), 1.0);
        for u in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let rho = DensityMatrix::encoding_state(u).unwrap();
            assert!((expectation(&rho, &z).unwrap() - (1.0 - 2.0 * u)).abs() < 1e-15);
        }
        let zz = kron(&z, &z);
        assert_eq!(expectation(&DensityMatrix::ground(2), &zz).unwrap(), 1.0);
        assert!(expectation(&DensityMatrix::ground(2), &z).is_err());
    }
}

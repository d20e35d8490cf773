use crate::qcore::{embed_single, pauli_z, ComplexMatrix, DensityMatrix};

/// Spin projections `<σz^i>` followed by correlations `<σz^i σz^l>` (`i < l`).
///
/// All of them are diagonal in the computational basis, so they are stored as
/// diagonals and measured from the populations alone.
#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    n_qubits: usize,
    labels: Vec<String>,
    diagonals: Vec<Vec<f64>>,
}

impl Observables {
    pub fn spin_set(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let sign = |b: usize, site: usize| -> f64 {
            if (b >> (n_qubits - site)) & 1 == 0 {
                1.0
            } else {
                -1.0
            }
        };
        let mut labels = Vec::new();
        let mut diagonals = Vec::new();
        for i in 1..=n_qubits {
            labels.push(format!("z{i}"));
            diagonals.push((0..dim).map(|b| sign(b, i)).collect());
        }
        for i in 1..=n_qubits {
            for l in (i + 1)..=n_qubits {
                labels.push(format!("z{i}z{l}"));
                diagonals.push((0..dim).map(|b| sign(b, i) * sign(b, l)).collect());
            }
        }
        Self { n_qubits, labels, diagonals }
    }

    pub fn len(&self) -> usize {
        self.diagonals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonals.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Full operator matrices, built from embedded Pauli products.
    pub fn matrices(&self) -> Vec<ComplexMatrix> {
        let n = self.n_qubits;
        let z = |i| embed_single(&pauli_z(), i, n).expect("site in range");
        let mut out: Vec<ComplexMatrix> = (1..=n).map(z).collect();
        for i in 1..=n {
            for l in (i + 1)..=n {
                out.push(&z(i) * &z(l));
            }
        }
        out
    }

    /// Append every expectation value on `rho` to `out`.
    pub fn measure_into(&self, rho: &DensityMatrix, out: &mut Vec<f64>) {
        let m = rho.matrix();
        let dim = m.rows();
        let pops: Vec<f64> = (0..dim).map(|b| m.as_slice()[b * dim + b].re).collect();
        for d in &self.diagonals {
            out.push(d.iter().zip(&pops).map(|(s, p)| s * p).sum());
        }
    }

    pub fn measure(&self, rho: &DensityMatrix) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        self.measure_into(rho, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::expectation;

    #[test]
    fn ten_observables_for_four_qubits() {
        let obs = Observables::spin_set(4);
        assert_eq!(obs.len(), 10);
        assert_eq!(obs.labels()[4], "z1z2");
        assert_eq!(obs.labels()[9], "z3z4");
    }

    #[test]
    fn diagonal_fast_path_matches_full_trace() {
        let obs = Observables::spin_set(3);
        let psi: Vec<crate::qcore::C64> =
            (0..8).map(|k| crate::qcore::C64::new((k as f64 + 1.0).sqrt(), 0.3 * k as f64)).collect();
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi: Vec<_> = psi.iter().map(|z| z / norm).collect();
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let fast = obs.measure(&rho);
        for (f, m) in fast.iter().zip(obs.matrices()) {
            assert!((f - expectation(&rho, &m).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn ground_state_reads_all_plus_one() {
        let obs = Observables::spin_set(4);
        assert!(obs.measure(&DensityMatrix::ground(4)).iter().all(|&v| v == 1.0));
    }
}

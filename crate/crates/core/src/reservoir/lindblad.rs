//! Pure dephasing, `L_i = sqrt(γ) σz^i` on every qubit.
//!
//! `dρ/dt = -i[H, ρ] + γ Σ_i (σz^i ρ σz^i - ρ)`. In the computational basis the
//! dissipator is diagonal: element `(a, b)` decays at rate `2γ·popcount(a ^ b)`.

use crate::error::{Error, Result};
use crate::qcore::{hermitian_eig, ComplexMatrix, DensityMatrix, C64};

/// RK4 substeps per sub-evolution interval.
pub const DEFAULT_SUBSTEPS: usize = 1024;

/// Minimum eigenvalue tolerated after integration; only gross instability trips it.
const NEGATIVITY_FLOOR: f64 = -1e-3;

/// `-2γ·popcount(a ^ b)` for every matrix element, row-major.
pub fn dephasing_rates(dim: usize, gamma: f64) -> Vec<f64> {
    (0..dim * dim).map(|k| -2.0 * gamma * f64::from(((k / dim) ^ (k % dim)).count_ones())).collect()
}

fn rhs(h: &ComplexMatrix, rates: &[f64], rho: &ComplexMatrix) -> ComplexMatrix {
    let hr = h * rho;
    let rh = rho * h;
    let mi = C64::new(0.0, -1.0);
    let data = hr
        .as_slice()
        .iter()
        .zip(rh.as_slice())
        .zip(rho.as_slice())
        .zip(rates)
        .map(|(((a, b), r), &g)| mi * (a - b) + r * g)
        .collect();
    ComplexMatrix::from_vec(rho.rows(), rho.cols(), data).expect("same shape")
}

fn axpy(x: &ComplexMatrix, h: f64, k: &ComplexMatrix) -> ComplexMatrix {
    let data = x.as_slice().iter().zip(k.as_slice()).map(|(a, b)| a + b * h).collect();
    ComplexMatrix::from_vec(x.rows(), x.cols(), data).expect("same shape")
}

/// Integrate over time `t` with `substeps` equal RK4 steps, re-Hermitizing after each.
pub fn lindblad_evolve(
    state: &DensityMatrix,
    hamiltonian: &ComplexMatrix,
    gamma: f64,
    t: f64,
    substeps: usize,
) -> Result<DensityMatrix> {
    check_args(state.dim(), hamiltonian, gamma, substeps)?;
    let rates = dephasing_rates(state.dim(), gamma);
    let dt = t / substeps as f64;
    let mut rho = state.matrix().clone();
    for _ in 0..substeps {
        let k1 = rhs(hamiltonian, &rates, &rho);
        let k2 = rhs(hamiltonian, &rates, &axpy(&rho, 0.5 * dt, &k1));
        let k3 = rhs(hamiltonian, &rates, &axpy(&rho, 0.5 * dt, &k2));
        let k4 = rhs(hamiltonian, &rates, &axpy(&rho, dt, &k3));
        let data = rho
            .as_slice()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r + (k1.as_slice()[i] + k2.as_slice()[i] * 2.0 + k3.as_slice()[i] * 2.0 + k4.as_slice()[i]) * (dt / 6.0)
            })
            .collect();
        rho = ComplexMatrix::from_vec(rho.rows(), rho.cols(), data)?;
        rho.symmetrize();
    }
    let min_eigenvalue = hermitian_eig(&rho)?.values[0];
    if min_eigenvalue < NEGATIVITY_FLOOR {
        return Err(Error::IntegratorStepTooLarge { min_eigenvalue });
    }
    Ok(DensityMatrix::from_matrix_unchecked(rho))
}

fn check_args(dim: usize, h: &ComplexMatrix, gamma: f64, substeps: usize) -> Result<()> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("dephasing rate must be >= 0, got {gamma}")));
    }
    if substeps == 0 {
        return Err(Error::InvalidArgument("need at least one substep".into()));
    }
    if h.rows() != dim || h.cols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian is {}x{}, state is {dim}x{dim}",
            h.rows(),
            h.cols()
        )));
    }
    Ok(())
}

/// The RK4 map of [`lindblad_evolve`] assembled once as a superoperator.
///
/// RK4 applied to a linear generator is itself linear, so the whole interval
/// collapses to one `dim^2 x dim^2` matrix: `(I + hL + (hL)^2/2 + (hL)^3/6 +
/// (hL)^4/24)^substeps`, raised by repeated squaring.
#[derive(Debug, Clone)]
pub struct LindbladPropagator {
    dim: usize,
    map: ComplexMatrix,
}

impl LindbladPropagator {
    pub fn new(hamiltonian: &ComplexMatrix, gamma: f64, t: f64, substeps: usize) -> Result<Self> {
        let dim = hamiltonian.rows();
        check_args(dim, hamiltonian, gamma, substeps)?;
        let generator = superoperator(hamiltonian, gamma);
        let h = t / substeps as f64;
        let n2 = dim * dim;
        let id = ComplexMatrix::identity(n2);
        let hl = generator.scale(C64::new(h, 0.0));
        // Horner form of the degree-4 Taylor polynomial.
        let mut step = id.clone();
        for k in (1..=4).rev() {
            step = &id + &(&hl * &step).scale(C64::new(1.0 / k as f64, 0.0));
        }
        let map = matrix_power(&step, substeps);
        Ok(Self { dim, map })
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        debug_assert_eq!(rho.dim(), self.dim);
        let n2 = self.dim * self.dim;
        let src = rho.matrix().as_slice();
        let m = self.map.as_slice();
        let out: Vec<C64> = (0..n2)
            .map(|row| {
                let r = &m[row * n2..(row + 1) * n2];
                r.iter().zip(src).map(|(a, b)| a * b).sum()
            })
            .collect();
        let mut out = ComplexMatrix::from_vec(self.dim, self.dim, out).expect("square");
        out.symmetrize();
        DensityMatrix::from_matrix_unchecked(out)
    }
}

/// Generator `L` acting on row-major vec(ρ).
fn superoperator(h: &ComplexMatrix, gamma: f64) -> ComplexMatrix {
    let n = h.rows();
    let rates = dephasing_rates(n, gamma);
    let mut l = ComplexMatrix::zeros(n * n, n * n);
    let mi = C64::new(0.0, -1.0);
    for a in 0..n {
        for b in 0..n {
            let row = a * n + b;
            // -i H ρ: sum_c H_ac ρ_cb
            for c in 0..n {
                l[(row, c * n + b)] += mi * h[(a, c)];
            }
            // +i ρ H: sum_e ρ_ae H_eb
            for e in 0..n {
                l[(row, a * n + e)] -= mi * h[(e, b)];
            }
            l[(row, row)] += C64::new(rates[row], 0.0);
        }
    }
    l
}

fn matrix_power(m: &ComplexMatrix, mut exp: usize) -> ComplexMatrix {
    let mut result: Option<ComplexMatrix> = None;
    let mut base = m.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => &r * &base,
            });
        }
        exp >>= 1;
        if exp > 0 {
            base = &base * &base;
        }
    }
    result.unwrap_or_else(|| ComplexMatrix::identity(m.rows()))
}

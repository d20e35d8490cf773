use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative residual of the normal equations accepted by [`ridge_fit`].
pub const RIDGE_RESIDUAL_TOL: f64 = 1e-8;

const REFINEMENT_STEPS: usize = 3;

/// `W = Y Qᵀ (Q Qᵀ + β I)^{-1}` via Cholesky with iterative refinement.
///
/// `q` is `dim(q) × T` and `y` is `d × T`. Returns `d × dim(q)`.
pub fn ridge_fit(q: &DMatrix<f64>, y: &DMatrix<f64>, beta: f64) -> Result<DMatrix<f64>> {
    if q.ncols() == 0 || q.ncols() != y.ncols() {
        return Err(Error::DimensionMismatch(format!("Q has {} columns, Y has {}", q.ncols(), y.ncols())));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!("ridge parameter must be > 0, got {beta}")));
    }
    let mut a = q * q.transpose();
    for i in 0..a.nrows() {
        a[(i, i)] += beta;
    }
    let rhs = q * y.transpose();
    let chol = a.clone().cholesky().ok_or_else(|| ill_conditioned(&a))?;
    let mut x = chol.solve(&rhs);
    let rhs_norm = rhs.norm().max(f64::MIN_POSITIVE);
    let mut residual = &rhs - &a * &x;
    for _ in 0..REFINEMENT_STEPS {
        if residual.norm() <= RIDGE_RESIDUAL_TOL * rhs_norm {
            break;
        }
        x += chol.solve(&residual);
        residual = &rhs - &a * &x;
    }
    if !(residual.norm() <= RIDGE_RESIDUAL_TOL * rhs_norm) {
        return Err(ill_conditioned(&a));
    }
    Ok(x.transpose())
}

fn ill_conditioned(a: &DMatrix<f64>) -> Error {
    let eig = SymmetricEigen::new(a.clone());
    let (lo, hi) =
        eig.eigenvalues.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), &v| (lo.min(v.abs()), hi.max(v.abs())));
    Error::IllConditioned { condition: if lo > 0.0 { hi / lo } else { f64::INFINITY } }
}

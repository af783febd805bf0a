//! Sequential wrappers over faer's dense decompositions.
//!
//! The high-level faer solvers pick up a global parallelism setting; these
//! helpers pin `Par::Seq` so that reports are bit-reproducible.

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::lu::partial_pivoting::{factor as lu, solve as lu_solve};
use faer::linalg::svd::{self, ComputeSvdVectors};
use faer::{Conj, Mat, MatRef, Par};

use crate::OracleError;

const PAR: Par = Par::Seq;

/// Thin SVD `A = U diag(s) Vᵀ` with singular values in nonincreasing order.
pub(crate) struct ThinSvd {
    pub u: Mat<f64>,
    pub s: Vec<f64>,
    pub v: Mat<f64>,
}

pub(crate) fn thin_svd(a: MatRef<'_, f64>) -> Result<ThinSvd, OracleError> {
    let (m, n) = a.shape();
    let k = m.min(n);
    let mut s = Diag::<f64>::zeros(k);
    let mut u = Mat::<f64>::zeros(m, k);
    let mut v = Mat::<f64>::zeros(n, k);
    let req = svd::svd_scratch::<f64>(m, n, ComputeSvdVectors::Thin, ComputeSvdVectors::Thin, PAR, Default::default());
    let mut buf = MemBuffer::new(req);
    svd::svd(a, s.as_mut(), Some(u.as_mut()), Some(v.as_mut()), PAR, MemStack::new(&mut buf), Default::default())
        .map_err(|e| OracleError::Linalg(format!("{e:?}")))?;
    let s = (0..k).map(|i| s.column_vector()[i]).collect();
    Ok(ThinSvd { u, s, v })
}

pub(crate) fn singular_values(a: MatRef<'_, f64>) -> Result<Vec<f64>, OracleError> {
    let (m, n) = a.shape();
    let mut s = Diag::<f64>::zeros(m.min(n));
    let req = svd::svd_scratch::<f64>(m, n, ComputeSvdVectors::No, ComputeSvdVectors::No, PAR, Default::default());
    let mut buf = MemBuffer::new(req);
    svd::svd(a, s.as_mut(), None, None, PAR, MemStack::new(&mut buf), Default::default())
        .map_err(|e| OracleError::Linalg(format!("{e:?}")))?;
    Ok((0..m.min(n)).map(|i| s.column_vector()[i]).collect())
}

/// `σ_max/σ_min`, infinite for singular matrices.
pub(crate) fn condition_number(a: MatRef<'_, f64>) -> Result<f64, OracleError> {
    let s = singular_values(a)?;
    let (max, min) = (s.first().copied().unwrap_or(0.0), s.last().copied().unwrap_or(0.0));
    Ok(if min > 0.0 { max / min } else { f64::INFINITY })
}

/// LU factorization with partial pivoting of a square matrix.
pub(crate) struct Lu {
    lu: Mat<f64>,
    perm: Vec<usize>,
    perm_inv: Vec<usize>,
}

impl Lu {
    pub fn new(mut a: Mat<f64>) -> Lu {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU of a non-square matrix");
        let (mut perm, mut perm_inv) = (vec![0usize; n], vec![0usize; n]);
        let mut buf = MemBuffer::new(lu::lu_in_place_scratch::<usize, f64>(n, n, PAR, Default::default()));
        lu::lu_in_place(a.as_mut(), &mut perm, &mut perm_inv, PAR, MemStack::new(&mut buf), Default::default());
        Lu { lu: a, perm, perm_inv }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.nrows();
        let mut rhs = Mat::<f64>::from_fn(n, 1, |i, _| b[i]);
        let perm = faer::perm::PermRef::new_checked(&self.perm, &self.perm_inv, n);
        let mut buf = MemBuffer::new(lu_solve::solve_in_place_scratch::<usize, f64>(n, 1, PAR));
        lu_solve::solve_in_place_with_conj(
            self.lu.as_ref(),
            self.lu.as_ref(),
            perm,
            Conj::No,
            rhs.as_mut(),
            PAR,
            MemStack::new(&mut buf),
        );
        (0..n).map(|i| rhs[(i, 0)]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves() {
        let a = Mat::<f64>::from_fn(3, 3, |i, j| [[0.0, 2.0, 1.0], [1.0, 1.0, 0.0], [3.0, 0.0, 1.0]][i][j]);
        let x = Lu::new(a.clone()).solve(&[3.0, 2.0, 4.0]);
        for (xi, e) in x.iter().zip([1.0, 1.0, 1.0]) {
            assert!((xi - e).abs() < 1e-14);
        }
    }

    #[test]
    fn svd_reconstructs() {
        let a = Mat::<f64>::from_fn(4, 2, |i, j| (i + 2 * j) as f64 + if i == j { 1.0 } else { 0.0 });
        let d = thin_svd(a.as_ref()).unwrap();
        for i in 0..4 {
            for j in 0..2 {
                let v: f64 = (0..2).map(|k| d.u[(i, k)] * d.s[k] * d.v[(j, k)]).sum();
                assert!((v - a[(i, j)]).abs() < 1e-12);
            }
        }
        assert!(condition_number(a.as_ref()).unwrap() >= 1.0);
    }
}

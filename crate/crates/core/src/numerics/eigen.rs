use super::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Eigenpairs of a symmetric matrix, `values` ascending and column `j` of
/// `vectors` paired with `values[j]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.vectors.col(j)
    }
}

pub fn eig_symmetric(m: &DenseMatrix) -> Result<EigenDecomposition> {
    eig_symmetric_with(m, &Tolerances::default())
}

/// Cyclic Jacobi rotations. The output is deterministic: eigenvalues ascending
/// (stable for ties) and each eigenvector's first non-negligible component positive.
pub fn eig_symmetric_with(m: &DenseMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let asymmetry = m.asymmetry();
    if asymmetry > tol.symmetry * m.max_abs().max(1.0) {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let n = m.rows();
    // work on the exactly symmetric part
    let mut a = DenseMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let mut v = DenseMatrix::identity(n);
    let target = tol.jacobi_off_diagonal * a.frobenius();

    let mut converged = false;
    for _sweep in 0..tol.jacobi_max_sweeps {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::EigenNoConvergence {
            sweeps: tol.jacobi_max_sweeps,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.col(src);
        let flip = col
            .iter()
            .find(|x| x.abs() > tol.sign_threshold)
            .is_some_and(|x| *x < 0.0);
        if flip {
            col.iter_mut().for_each(|x| *x = -*x);
        }
        vectors.set_col(dst, &col);
    }
    Ok(EigenDecomposition { values, vectors })
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// `a ← Jᵀ a J`, `v ← v J` for the plane rotation J in (p, q).
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_path_laplacian() {
        let l = DenseMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let e = eig_symmetric(&l).unwrap();
        assert!(e.values[0].abs() < 1e-14);
        assert!((e.values[1] - 2.0).abs() < 1e-14);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.vectors[(0, 0)] - r).abs() < 1e-14 && (e.vectors[(1, 0)] - r).abs() < 1e-14);
        assert!((e.vectors[(0, 1)] - r).abs() < 1e-14 && (e.vectors[(1, 1)] + r).abs() < 1e-14);
    }

    #[test]
    fn identity_values_all_one() {
        let e = eig_symmetric(&DenseMatrix::identity(4)).unwrap();
        assert!(e.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn triangle_laplacian_spectrum() {
        // characteristic polynomial of the K3 Laplacian is x (x - 3)^2
        let l = DenseMatrix::from_fn(3, 3, |i, j| if i == j { 2.0 } else { -1.0 });
        let e = eig_symmetric(&l).unwrap();
        for (got, want) in e.values.iter().zip([0.0, 3.0, 3.0]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(eig_symmetric(&m), Err(Error::NotSymmetric { .. })));
        assert!(matches!(
            eig_symmetric(&DenseMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn signs_are_canonical() {
        let m = DenseMatrix::from_rows(&[
            vec![4.0, 1.0, -2.0],
            vec![1.0, 0.0, 3.0],
            vec![-2.0, 3.0, 1.0],
        ])
        .unwrap();
        let e = eig_symmetric(&m).unwrap();
        for j in 0..3 {
            let first = e.vector(j).into_iter().find(|x| x.abs() > 1e-10).unwrap();
            assert!(first > 0.0);
        }
    }
}

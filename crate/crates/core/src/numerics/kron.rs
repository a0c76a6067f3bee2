use crate::matrix::DenseMatrix;

/// Kronecker product: entry `(i·rb + p, j·cb + q)` is `a_ij · b_pq`.
pub fn kronecker(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = DenseMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            if aij == 0.0 {
                continue;
            }
            for p in 0..rb {
                for q in 0..cb {
                    out[(i * rb + p, j * cb + q)] = aij * b[(p, q)];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_gives_block_diagonal() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let k = kronecker(&DenseMatrix::identity(2), &m);
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k.block(0, 0, 2, 2), m);
        assert_eq!(k.block(2, 2, 2, 2), m);
        assert_eq!(k.block(0, 2, 2, 2).max_abs(), 0.0);
        assert_eq!(k.block(2, 0, 2, 2).max_abs(), 0.0);
    }

    #[test]
    fn entry_layout() {
        let a = DenseMatrix::from_fn(2, 3, |i, j| (1 + i * 3 + j) as f64);
        let b = DenseMatrix::from_fn(3, 2, |p, q| (10 + p * 2 + q) as f64);
        let k = kronecker(&a, &b);
        assert_eq!(k.shape(), (6, 6));
        for i in 0..2 {
            for j in 0..3 {
                for p in 0..3 {
                    for q in 0..2 {
                        assert_eq!(k[(i * 3 + p, j * 2 + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }
}

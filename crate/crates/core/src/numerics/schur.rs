use super::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Real Schur form `m = q · t · qᵀ` with `q` orthogonal and `t`
/// quasi-upper-triangular. Every 2x2 diagonal block of `t` carries a complex
/// conjugate eigenvalue pair; real eigenvalues always sit in 1x1 blocks.
#[derive(Debug, Clone)]
pub struct SchurDecomposition {
    pub q: DenseMatrix,
    pub t: DenseMatrix,
}

impl SchurDecomposition {
    pub fn dim(&self) -> usize {
        self.t.rows()
    }

    /// Diagonal blocks of `t` as `(start, size)` pairs, top to bottom.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        let mut i = 0;
        while i < n {
            if i + 1 < n && self.t[(i + 1, i)] != 0.0 {
                out.push((i, 2));
                i += 2;
            } else {
                out.push((i, 1));
                i += 1;
            }
        }
        out
    }

    /// Eigenvalues as `(re, im)` pairs read off the diagonal blocks.
    pub fn eigenvalues(&self) -> Vec<(f64, f64)> {
        let t = &self.t;
        let mut out = Vec::with_capacity(self.dim());
        for (s, size) in self.blocks() {
            if size == 1 {
                out.push((t[(s, s)], 0.0));
                continue;
            }
            let (a, b, c, d) = (t[(s, s)], t[(s, s + 1)], t[(s + 1, s)], t[(s + 1, s + 1)]);
            let mid = 0.5 * (a + d);
            let half = 0.5 * (a - d);
            let disc = half * half + b * c;
            if disc >= 0.0 {
                let r = disc.sqrt();
                out.push((mid + r, 0.0));
                out.push((mid - r, 0.0));
            } else {
                let im = (-disc).sqrt();
                out.push((mid, im));
                out.push((mid, -im));
            }
        }
        out
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .fold(0.0, |m, (re, im)| m.max(re.hypot(*im)))
    }

    /// `q · t · qᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.q.matmul(&self.t).matmul(&self.q.transpose())
    }
}

pub fn real_schur(m: &DenseMatrix, max_iter: usize) -> Result<SchurDecomposition> {
    real_schur_with(m, max_iter, &Tolerances::default())
}

/// Householder reduction to upper Hessenberg form followed by Francis
/// double-shift QR sweeps with deflation. `max_iter` caps the total number of
/// sweeps over the whole matrix.
pub fn real_schur_with(
    m: &DenseMatrix,
    max_iter: usize,
    tol: &Tolerances,
) -> Result<SchurDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let (mut h, mut q) = hessenberg(m);
    francis(&mut h, &mut q, max_iter, tol.schur_deflation)?;
    let n = h.rows();
    for i in 0..n {
        for j in 0..i.saturating_sub(1) {
            h[(i, j)] = 0.0;
        }
    }
    Ok(SchurDecomposition { q, t: h })
}

/// Returns `(h, q)` with `m = q h qᵀ` and `h` upper Hessenberg.
fn hessenberg(m: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let n = m.rows();
    let mut h = m.clone();
    let mut q = DenseMatrix::identity(n);
    let mut v = vec![0.0; n];
    for j in 0..n.saturating_sub(2) {
        let tail: f64 = (j + 2..n).map(|i| h[(i, j)] * h[(i, j)]).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(j + 1, j)];
        let norm = (x0 * x0 + tail).sqrt();
        let alpha = if x0 > 0.0 { -norm } else { norm };
        v[j + 1] = x0 - alpha;
        for i in j + 2..n {
            v[i] = h[(i, j)];
        }
        let vtv = v[j + 1] * v[j + 1] + tail;
        let beta = 2.0 / vtv;
        let v = &v[j + 1..n];
        let lo = j + 1;

        // h ← (I - β v vᵀ) h
        for c in j..n {
            let dot: f64 = v.iter().enumerate().map(|(r, vr)| vr * h[(lo + r, c)]).sum();
            let f = beta * dot;
            for (r, vr) in v.iter().enumerate() {
                h[(lo + r, c)] -= f * vr;
            }
        }
        // h ← h (I - β v vᵀ), q ← q (I - β v vᵀ)
        for target in [&mut h, &mut q] {
            for r in 0..n {
                let dot: f64 = v.iter().enumerate().map(|(c, vc)| vc * target[(r, lo + c)]).sum();
                let f = beta * dot;
                for (c, vc) in v.iter().enumerate() {
                    target[(r, lo + c)] -= f * vc;
                }
            }
        }
        h[(j + 1, j)] = alpha;
        for i in j + 2..n {
            h[(i, j)] = 0.0;
        }
    }
    (h, q)
}

/// Francis double-shift QR on an upper Hessenberg `h`, accumulating into `z`.
/// Real eigenvalue pairs that converge as a 2x2 block are split by a Givens
/// rotation so that only complex pairs remain as 2x2 blocks.
fn francis(h: &mut DenseMatrix, z: &mut DenseMatrix, max_iter: usize, deflation: f64) -> Result<()> {
    let nn = h.rows();
    if nn == 0 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }

    let mut exshift = 0.0;
    let mut iter = 0usize;
    let mut total = 0usize;
    let mut remaining = nn;
    let (mut p, mut q, mut r, mut s, mut w, mut x, mut y, mut zz);

    while remaining > 0 {
        let hi = remaining - 1;

        // look for a single small subdiagonal element
        let mut l = hi;
        while l > 0 {
            s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)].abs() <= deflation * s {
                h[(l, l - 1)] = 0.0;
                break;
            }
            l -= 1;
        }

        if l == hi {
            // one root
            h[(hi, hi)] += exshift;
            remaining -= 1;
            iter = 0;
        } else if l + 1 == hi {
            // two roots
            w = h[(hi, hi - 1)] * h[(hi - 1, hi)];
            p = (h[(hi - 1, hi - 1)] - h[(hi, hi)]) / 2.0;
            q = p * p + w;
            zz = q.abs().sqrt();
            h[(hi, hi)] += exshift;
            h[(hi - 1, hi - 1)] += exshift;
            zz = if p >= 0.0 { p + zz } else { p - zz };
            x = h[(hi, hi - 1)];
            s = x.abs() + zz.abs();
            // s == 0 means the block is already triangular (x == 0)
            if q >= 0.0 && s > 0.0 {
                p = x / s;
                q = zz / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                for j in hi - 1..nn {
                    let t = h[(hi - 1, j)];
                    h[(hi - 1, j)] = q * t + p * h[(hi, j)];
                    h[(hi, j)] = q * h[(hi, j)] - p * t;
                }
                for i in 0..=hi {
                    let t = h[(i, hi - 1)];
                    h[(i, hi - 1)] = q * t + p * h[(i, hi)];
                    h[(i, hi)] = q * h[(i, hi)] - p * t;
                }
                for i in 0..nn {
                    let t = z[(i, hi - 1)];
                    z[(i, hi - 1)] = q * t + p * z[(i, hi)];
                    z[(i, hi)] = q * z[(i, hi)] - p * t;
                }
                h[(hi, hi - 1)] = 0.0;
            }
            remaining -= 2;
            iter = 0;
        } else {
            total += 1;
            if total > max_iter {
                return Err(Error::SchurNoConvergence { iterations: max_iter });
            }

            // form shift
            x = h[(hi, hi)];
            y = h[(hi - 1, hi - 1)];
            w = h[(hi, hi - 1)] * h[(hi - 1, hi)];

            // exceptional shifts
            if iter == 10 {
                exshift += x;
                for i in 0..=hi {
                    h[(i, i)] -= x;
                }
                s = h[(hi, hi - 1)].abs() + h[(hi - 1, hi - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in 0..=hi {
                        h[(i, i)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;

            // look for two consecutive small subdiagonal elements
            let mut m = hi - 2;
            loop {
                zz = h[(m, m)];
                r = x - zz;
                s = y - zz;
                p = (r * s - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - zz - r - s;
                r = h[(m + 2, m + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let lhs = h[(m, m - 1)].abs() * (q.abs() + r.abs());
                let rhs = eps * (p.abs() * (h[(m - 1, m - 1)].abs() + zz.abs() + h[(m + 1, m + 1)].abs()));
                if lhs < rhs {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=hi {
                h[(i, i - 2)] = 0.0;
                if i > m + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // double QR step on rows l..=hi, columns m..=hi
            for k in m..hi {
                let notlast = k != hi - 1;
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s == 0.0 {
                    continue;
                }
                if k != m {
                    h[(k, k - 1)] = -s * x;
                } else if l != m {
                    h[(k, k - 1)] = -h[(k, k - 1)];
                }
                p += s;
                x = p / s;
                y = q / s;
                zz = r / s;
                q /= p;
                r /= p;

                for j in k..nn {
                    let mut t = h[(k, j)] + q * h[(k + 1, j)];
                    if notlast {
                        t += r * h[(k + 2, j)];
                        h[(k + 2, j)] -= t * zz;
                    }
                    h[(k, j)] -= t * x;
                    h[(k + 1, j)] -= t * y;
                }
                for i in 0..=hi.min(k + 3) {
                    let mut t = x * h[(i, k)] + y * h[(i, k + 1)];
                    if notlast {
                        t += zz * h[(i, k + 2)];
                        h[(i, k + 2)] -= t * r;
                    }
                    h[(i, k)] -= t;
                    h[(i, k + 1)] -= t * q;
                }
                for i in 0..nn {
                    let mut t = x * z[(i, k)] + y * z[(i, k + 1)];
                    if notlast {
                        t += zz * z[(i, k + 2)];
                        z[(i, k + 2)] -= t * r;
                    }
                    z[(i, k)] -= t;
                    z[(i, k + 1)] -= t * q;
                }
            }
        }
    }
    Ok(())
}

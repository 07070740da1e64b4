//! Dense Hermitian diagonalisation through the real symmetric embedding
//! `[[Re H, -Im H], [Im H, Re H]]`, whose spectrum is that of `H` doubled.

use crate::error::Result;
use crate::scalar::{dot, norm, Real, C};

use super::operator::LinearOperator;
use super::tridiag::symmetric_eigen;

/// Materialises a linear operator column by column.
pub fn to_dense<T: Real, Op: LinearOperator<T> + ?Sized>(op: &Op) -> Vec<Vec<C<T>>> {
    let n = op.dim();
    let zero = C::new(T::zero(), T::zero());
    let mut m = vec![vec![zero; n]; n];
    let mut e = vec![zero; n];
    let mut col = vec![zero; n];
    for j in 0..n {
        e[j] = C::new(T::one(), T::zero());
        op.apply(&e, &mut col);
        for i in 0..n {
            m[i][j] = col[i];
        }
        e[j] = zero;
    }
    m
}

fn embed<T: Real>(h: &[Vec<C<T>>]) -> Vec<Vec<T>> {
    let n = h.len();
    let mut a = vec![vec![T::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let (re, im) = (h[i][j].re, h[i][j].im);
            a[i][j] = re;
            a[i + n][j + n] = re;
            a[i][j + n] = -im;
            a[i + n][j] = im;
        }
    }
    a
}

fn is_real<T: Real>(h: &[Vec<C<T>>]) -> bool {
    h.iter().all(|row| row.iter().all(|z| z.im == T::zero()))
}

/// All eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Real>(h: &[Vec<C<T>>]) -> Result<Vec<T>> {
    Ok(hermitian_eigen(h)?.0)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (`vecs[k]` belongs
/// to eigenvalue `k`) of a Hermitian matrix.
pub fn hermitian_eigen<T: Real>(h: &[Vec<C<T>>]) -> Result<(Vec<T>, Vec<Vec<C<T>>>)> {
    let n = h.len();
    if is_real(h) {
        let a = h.iter().map(|row| row.iter().map(|z| z.re).collect()).collect();
        let (vals, z) = symmetric_eigen(a)?;
        let vecs = (0..n).map(|k| (0..n).map(|i| C::new(z[i][k], T::zero())).collect()).collect();
        return Ok((vals, vecs));
    }
    let (vals2, z) = symmetric_eigen(embed(h))?;
    // each eigenvalue appears twice; within a run of equal values the complex
    // vectors u + iv span the eigenspace twice over, so Gram-Schmidt picks half
    let scale = vals2.iter().fold(T::one(), |m, v| m.max(v.abs()));
    let tol = T::of(1e-10) * scale;
    let cand = |k: usize| -> Vec<C<T>> { (0..n).map(|i| C::new(z[i][k], z[i + n][k])).collect() };
    let mut vals = Vec::with_capacity(n);
    let mut vecs: Vec<Vec<C<T>>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < 2 * n {
        let mut end = start + 1;
        while end < 2 * n && vals2[end] - vals2[end - 1] <= tol {
            end += 1;
        }
        let want = (end - start) / 2;
        let first = vecs.len();
        for k in start..end {
            if vecs.len() - first == want {
                break;
            }
            let mut v = cand(k);
            for _ in 0..2 {
                for u in &vecs[first..] {
                    let c = dot(u, &v);
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi -= c * ui;
                    }
                }
            }
            let nv = norm(&v);
            if nv > T::of(0.5) {
                for vi in v.iter_mut() {
                    *vi = *vi / nv;
                }
                vals.push(vals2[k]);
                vecs.push(v);
            }
        }
        start = end;
    }
    Ok((vals, vecs))
}

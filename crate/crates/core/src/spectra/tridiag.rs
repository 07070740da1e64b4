//! Real symmetric eigenproblems: implicit QL on tridiagonal matrices and a
//! Householder reduction for dense ones.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_QL_SWEEPS: usize = 60;

/// Eigenvalues (ascending) and, optionally, eigenvectors of the symmetric
/// tridiagonal matrix with diagonal `diag` and off-diagonal `off`
/// (`off.len() == diag.len() - 1`). Vectors are returned as columns:
/// `vecs[i][k]` is component `i` of eigenvector `k`.
pub fn tridiagonal_eigen<T: Real>(diag: &[T], off: &[T], want_vectors: bool) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let n = diag.len();
    assert!(n == 0 || off.len() + 1 == n, "off-diagonal length mismatch");
    let mut d = diag.to_vec();
    let mut e: Vec<T> = off.iter().copied().chain(std::iter::once(T::zero())).take(n).collect();
    let mut z = if want_vectors { identity(n) } else { Vec::new() };
    ql_implicit(&mut d, &mut e, &mut z)?;
    Ok(sort_pairs(d, z))
}

/// Full eigen-decomposition of a dense real symmetric matrix `a` (row-major,
/// consumed). Columns of the returned matrix are eigenvectors.
pub fn symmetric_eigen<T: Real>(mut a: Vec<Vec<T>>) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let n = a.len();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    householder(&mut a, &mut d, &mut e);
    // shift sub-diagonal so e[i] couples i and i+1
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    ql_implicit(&mut d, &mut e, &mut a)?;
    Ok(sort_pairs(d, a))
}

fn identity<T: Real>(n: usize) -> Vec<Vec<T>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

fn sort_pairs<T: Real>(d: Vec<T>, z: Vec<Vec<T>>) -> (Vec<T>, Vec<Vec<T>>) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(std::cmp::Ordering::Equal));
    let vals = order.iter().map(|&k| d[k]).collect();
    let vecs = if z.is_empty() {
        z
    } else {
        z.iter().map(|row| order.iter().map(|&k| row[k]).collect()).collect()
    };
    (vals, vecs)
}

fn hypot<T: Real>(a: T, b: T) -> T {
    a.hypot(b)
}

fn ql_implicit<T: Real>(d: &mut [T], e: &mut [T], z: &mut [Vec<T>]) -> Result<()> {
    let n = d.len();
    let two = T::one() + T::one();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::NoConvergence { iterations: iter, residual: e[l].to_f64_lossy().abs() });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = hypot(g, T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// Householder tridiagonalisation; on return `a` holds the orthogonal
/// transformation, `d` the diagonal and `e[i]` the element coupling `i-1, i`.
fn householder<T: Real>(a: &mut [Vec<T>], d: &mut [T], e: &mut [T]) {
    let n = a.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = T::zero();
        if l > 0 {
            let scale: T = (0..=l).map(|k| a[i][k].abs()).sum();
            if scale == T::zero() {
                e[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] /= scale;
                    h += a[i][k] * a[i][k];
                }
                let f = a[i][l];
                let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i][l] = f - g;
                let mut f = T::zero();
                for j in 0..=l {
                    a[j][i] = a[i][j] / h;
                    let mut g = T::zero();
                    for k in 0..=j {
                        g += a[j][k] * a[i][k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k][j] * a[i][k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i][j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let upd = f * e[k] + g * a[i][k];
                        a[j][k] -= upd;
                    }
                }
            }
        } else {
            e[i] = a[i][l];
        }
        d[i] = h;
    }
    d[0] = T::zero();
    e[0] = T::zero();
    for i in 0..n {
        if d[i] != T::zero() {
            for j in 0..i {
                let mut g = T::zero();
                for k in 0..i {
                    g += a[i][k] * a[k][j];
                }
                for k in 0..i {
                    let upd = g * a[k][i];
                    a[k][j] -= upd;
                }
            }
        }
        d[i] = a[i][i];
        a[i][i] = T::one();
        for j in 0..i {
            a[j][i] = T::zero();
            a[i][j] = T::zero();
        }
    }
}

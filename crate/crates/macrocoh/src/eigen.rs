//! Real-symmetric eigenvalue routines shared by the quadrature module and the
//! density-matrix positivity check: implicit-shift QL for symmetric
//! tridiagonal matrices and Householder reduction for dense symmetric ones.

use num_complex::Complex64;

use crate::{Error, Result};

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal, `e[i]` the subdiagonal element coupling `i` and
/// `i + 1` (`e[n-1]` is ignored). On success `d` contains the eigenvalues in
/// ascending order. When `vectors` is given it must be an `n × n` identity
/// (or an accumulated transform); on return its columns are the matching
/// orthonormal eigenvectors.
pub(crate) fn tridiagonal_ql(
    d: &mut [f64],
    e: &mut [f64],
    mut vectors: Option<&mut Vec<Vec<f64>>>,
) -> Result<()> {
    let n = d.len();
    assert_eq!(e.len(), n, "off-diagonal storage must match the diagonal");
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let max_sweeps = 30 * n.max(1);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            // Look for a negligible subdiagonal element splitting the matrix.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() < 1e-300 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > max_sweeps {
                return Err(Error::NoConvergence(max_sweeps));
            }

            // Wilkinson-style shift from the 2x2 block at l.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            if g < 0.0 {
                r = -r;
            }
            g = d[m] - d[l] + e[l] / (g + r);

            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                let t = (d[i] - g) * s + 2.0 * c * b;
                p = s * t;
                d[i + 1] = g + p;
                g = c * t - b;
                if let Some(z) = vectors.as_deref_mut() {
                    for row in z.iter_mut() {
                        f = row[i + 1];
                        row[i + 1] = s * row[i] + c * f;
                        row[i] = c * row[i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // Ascending order, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| f64::total_cmp(&d[a], &d[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    d.copy_from_slice(&sorted);
    if let Some(z) = vectors {
        for row in z.iter_mut() {
            let sorted_row: Vec<f64> = order.iter().map(|&i| row[i]).collect();
            *row = sorted_row;
        }
    }
    Ok(())
}

/// Householder reduction of a dense symmetric matrix (row-major, `n × n`) to
/// tridiagonal form. Only the eigenvalue data (d, e) is produced; the
/// orthogonal transform is not accumulated.
fn householder_tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let mut f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        let _ = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    (d, e)
}

/// Eigenvalues of a dense real symmetric matrix, ascending.
pub(crate) fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![a[0]]);
    }
    let (mut d, mut e) = householder_tridiagonalize(&mut a, n);
    tridiagonal_ql(&mut d, &mut e, None)?;
    Ok(d)
}

/// Smallest eigenvalue of a dense Hermitian matrix (row-major, `dim × dim`),
/// computed through the standard real symmetric embedding
/// `[[Re, -Im], [Im, Re]]`.
pub(crate) fn hermitian_min_eigenvalue(dense: &[Complex64], dim: usize) -> Result<f64> {
    assert_eq!(dense.len(), dim * dim);
    if dim == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let n = 2 * dim;
    let mut embedded = vec![0.0; n * n];
    for i in 0..dim {
        for j in 0..dim {
            let v = dense[i * dim + j];
            embedded[i * n + j] = v.re;
            embedded[i * n + (dim + j)] = -v.im;
            embedded[(dim + i) * n + j] = v.im;
            embedded[(dim + i) * n + (dim + j)] = v.re;
        }
    }
    let eigenvalues = symmetric_eigenvalues(embedded, n)?;
    Ok(eigenvalues[0])
}

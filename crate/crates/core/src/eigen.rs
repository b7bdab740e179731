// Hessenberg reduction and real Schur QR iteration follow the public-domain
// EISPACK routines orthes/hqr2 as restated in JAMA.

//! Dense eigendecomposition of real nonsymmetric matrices.
//!
//! [`Eigen::new`] returns all eigenvalues and a matrix of right eigenvectors.
//! Left eigenvectors are taken as the rows of the inverse of that matrix,
//! which makes the pairs biorthogonal by construction: `v_i u_j = delta_ij`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Real eigendecomposition in the EISPACK layout.
///
/// `re[k] + i im[k]` is the k-th eigenvalue. For a real eigenvalue column k of
/// `vectors` is its eigenvector. For a complex pair at (k, k+1) with
/// `im[k] > 0`, columns k and k+1 hold the real and imaginary parts of the
/// eigenvector of `re[k] + i im[k]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub vectors: Matrix,
}

impl Eigen {
    pub fn new(a: &Matrix) -> Result<Eigen> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch { expected: a.rows(), got: a.cols() });
        }
        if !a.is_finite() {
            return Err(Error::NonFinite("eigensolver input"));
        }
        let n = a.rows();
        let mut h = a.clone();
        let mut v = Matrix::identity(n);
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        if n == 0 {
            return Ok(Eigen { re, im, vectors: v });
        }
        orthes(&mut h, &mut v);
        hqr2(&mut h, &mut v, &mut re, &mut im)?;
        Ok(Eigen { re, im, vectors: v })
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.re.iter().zip(&self.im).map(|(&r, &i)| Complex64::new(r, i)).collect()
    }

    /// Right eigenvectors as complex columns, one per eigenvalue, in the
    /// same order as [`Eigen::eigenvalues`].
    pub fn complex_vectors(&self) -> Vec<Vec<Complex64>> {
        let n = self.re.len();
        let mut out = Vec::with_capacity(n);
        let mut k = 0;
        while k < n {
            if self.im[k] == 0.0 {
                out.push((0..n).map(|r| Complex64::new(self.vectors[(r, k)], 0.0)).collect());
                k += 1;
            } else {
                let col: Vec<Complex64> = (0..n)
                    .map(|r| Complex64::new(self.vectors[(r, k)], self.vectors[(r, k + 1)]))
                    .collect();
                let conj = col.iter().map(|z| z.conj()).collect();
                // the first of each pair carries the positive imaginary part
                if self.im[k] > 0.0 {
                    out.push(col);
                    out.push(conj);
                } else {
                    out.push(conj);
                    out.push(col);
                }
                k += 2;
            }
        }
        out
    }
}

/// Reduction to upper Hessenberg form by orthogonal similarity.
fn orthes(h: &mut Matrix, v: &mut Matrix) {
    let n = h.rows();
    let low = 0;
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in low + 1..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += h[(i, m - 1)].abs();
        }
        if scale != 0.0 {
            let mut hh = 0.0;
            for i in (m..=high).rev() {
                ort[i] = h[(i, m - 1)] / scale;
                hh += ort[i] * ort[i];
            }
            let mut g = libm::sqrt(hh);
            if ort[m] > 0.0 {
                g = -g;
            }
            hh -= ort[m] * g;
            ort[m] -= g;

            for j in m..n {
                let mut f = 0.0;
                for i in (m..=high).rev() {
                    f += ort[i] * h[(i, j)];
                }
                f /= hh;
                for i in m..=high {
                    h[(i, j)] -= f * ort[i];
                }
            }
            for i in 0..=high {
                let mut f = 0.0;
                for j in (m..=high).rev() {
                    f += ort[j] * h[(i, j)];
                }
                f /= hh;
                for j in m..=high {
                    h[(i, j)] -= f * ort[j];
                }
            }
            ort[m] *= scale;
            h[(m, m - 1)] = scale * g;
        }
    }

    for i in 0..n {
        for j in 0..n {
            v[(i, j)] = if i == j { 1.0 } else { 0.0 };
        }
    }
    for m in (low + 1..high).rev() {
        if h[(m, m - 1)] != 0.0 {
            for i in m + 1..=high {
                ort[i] = h[(i, m - 1)];
            }
            for j in m..=high {
                let mut g = 0.0;
                for i in m..=high {
                    g += ort[i] * v[(i, j)];
                }
                // double division avoids possible underflow
                g = (g / ort[m]) / h[(m, m - 1)];
                for i in m..=high {
                    v[(i, j)] += g * ort[i];
                }
            }
        }
    }
}

fn cdiv(xr: f64, xi: f64, yr: f64, yi: f64) -> (f64, f64) {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let d = yr + r * yi;
        ((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        ((r * xr + xi) / d, (r * xi - xr) / d)
    }
}

/// Shifted QR on the Hessenberg matrix to real Schur form, followed by
/// back-substitution for the eigenvectors.
#[allow(clippy::many_single_char_names)]
fn hqr2(h: &mut Matrix, v: &mut Matrix, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let nn = h.rows();
    let mut n = nn as isize - 1;
    let low: isize = 0;
    let high: isize = nn as isize - 1;
    let eps = f64::EPSILON;
    let mut exshift = 0.0;
    let (mut p, mut q, mut r, mut s, mut z) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut t;
    let mut w;
    let mut x;
    let mut y;

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }

    let hh = |h: &Matrix, i: isize, j: isize| h[(i as usize, j as usize)];
    let mut iter = 0usize;
    let max_iter = 100 * nn.max(10);
    let mut total_iter = 0usize;

    while n >= low {
        // look for a single small subdiagonal element
        let mut l = n;
        while l > low {
            s = hh(h, l - 1, l - 1).abs() + hh(h, l, l).abs();
            if s == 0.0 {
                s = norm;
            }
            if hh(h, l, l - 1).abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // one root found
            let nu = n as usize;
            h[(nu, nu)] += exshift;
            d[nu] = h[(nu, nu)];
            e[nu] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // two roots found
            let nu = n as usize;
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            p = (h[(nu - 1, nu - 1)] - h[(nu, nu)]) / 2.0;
            q = p * p + w;
            z = libm::sqrt(q.abs());
            h[(nu, nu)] += exshift;
            h[(nu - 1, nu - 1)] += exshift;
            x = h[(nu, nu)];

            if q >= 0.0 {
                // real pair
                z = if p >= 0.0 { p + z } else { p - z };
                d[nu - 1] = x + z;
                d[nu] = d[nu - 1];
                if z != 0.0 {
                    d[nu] = x - w / z;
                }
                e[nu - 1] = 0.0;
                e[nu] = 0.0;
                x = h[(nu, nu - 1)];
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = libm::sqrt(p * p + q * q);
                p /= r;
                q /= r;

                for j in nu - 1..nn {
                    z = h[(nu - 1, j)];
                    h[(nu - 1, j)] = q * z + p * h[(nu, j)];
                    h[(nu, j)] = q * h[(nu, j)] - p * z;
                }
                for i in 0..=nu {
                    z = h[(i, nu - 1)];
                    h[(i, nu - 1)] = q * z + p * h[(i, nu)];
                    h[(i, nu)] = q * h[(i, nu)] - p * z;
                }
                for i in low as usize..=high as usize {
                    z = v[(i, nu - 1)];
                    v[(i, nu - 1)] = q * z + p * v[(i, nu)];
                    v[(i, nu)] = q * v[(i, nu)] - p * z;
                }
            } else {
                // complex pair
                d[nu - 1] = x + p;
                d[nu] = x + p;
                e[nu - 1] = z;
                e[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // no convergence yet
            let nu = n as usize;
            x = h[(nu, nu)];
            y = 0.0;
            w = 0.0;
            if l < n {
                y = h[(nu - 1, nu - 1)];
                w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            }

            // Wilkinson's original ad hoc shift
            if iter == 10 {
                exshift += x;
                for i in low as usize..=nu {
                    h[(i, i)] -= x;
                }
                s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }

            // MATLAB's new ad hoc shift
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = libm::sqrt(s);
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low as usize..=nu {
                        h[(i, i)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }

            iter += 1;
            total_iter += 1;
            if total_iter > max_iter {
                return Err(Error::EigenFailure(format!(
                    "QR iteration did not converge after {max_iter} steps"
                )));
            }

            // look for two consecutive small subdiagonal elements
            let mut m = n - 2;
            while m >= l {
                let mu = m as usize;
                z = h[(mu, mu)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(mu + 1, mu)] + h[(mu, mu + 1)];
                q = h[(mu + 1, mu + 1)] - z - r - s;
                r = h[(mu + 2, mu + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[(mu, mu - 1)].abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (h[(mu - 1, mu - 1)].abs() + z.abs() + h[(mu + 1, mu + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }

            let mu = m as usize;
            for i in mu + 2..=nu {
                h[(i, i - 2)] = 0.0;
                if i > mu + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // double QR step involving rows l:n and columns m:n
            let mut k = mu;
            while k < nu {
                let notlast = k != nu - 1;
                if k != mu {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        k += 1;
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                } else {
                    x = 0.0;
                }

                s = libm::sqrt(p * p + q * q + r * r);
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != mu {
                        h[(k, k - 1)] = -s * x;
                    } else if l != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    // row modification
                    for j in k..nn {
                        p = h[(k, j)] + q * h[(k + 1, j)];
                        if notlast {
                            p += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= p * z;
                        }
                        h[(k, j)] -= p * x;
                        h[(k + 1, j)] -= p * y;
                    }

                    // column modification
                    let upper = nu.min(k + 3);
                    for i in 0..=upper {
                        p = x * h[(i, k)] + y * h[(i, k + 1)];
                        if notlast {
                            p += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= p * r;
                        }
                        h[(i, k)] -= p;
                        h[(i, k + 1)] -= p * q;
                    }

                    // accumulate transformations
                    for i in low as usize..=high as usize {
                        p = x * v[(i, k)] + y * v[(i, k + 1)];
                        if notlast {
                            p += z * v[(i, k + 2)];
                            v[(i, k + 2)] -= p * r;
                        }
                        v[(i, k)] -= p;
                        v[(i, k + 1)] -= p * q;
                    }
                }
                k += 1;
            }
        }
    }

    // back-substitute to find vectors of upper triangular form
    if norm == 0.0 {
        return Ok(());
    }

    for nu in (0..nn).rev() {
        p = d[nu];
        q = e[nu];

        if q == 0.0 {
            // real vector
            let mut l = nu;
            h[(nu, nu)] = 1.0;
            for i in (0..nu).rev() {
                w = h[(i, i)] - p;
                r = 0.0;
                for j in l..=nu {
                    r += h[(i, j)] * h[(j, nu)];
                }
                if e[i] < 0.0 {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if e[i] == 0.0 {
                        h[(i, nu)] = if w != 0.0 { -r / w } else { -r / (eps * norm) };
                    } else {
                        // solve real equations
                        x = h[(i, i + 1)];
                        y = h[(i + 1, i)];
                        q = (d[i] - p) * (d[i] - p) + e[i] * e[i];
                        t = (x * s - z * r) / q;
                        h[(i, nu)] = t;
                        h[(i + 1, nu)] = if x.abs() > z.abs() { (-r - w * t) / x } else { (-s - y * t) / z };
                    }

                    // overflow control
                    t = h[(i, nu)].abs();
                    if (eps * t) * t > 1.0 {
                        for j in i..=nu {
                            h[(j, nu)] /= t;
                        }
                    }
                }
            }
        } else if q < 0.0 {
            // complex vector, handled on the second member of the pair
            let mut l = nu - 1;

            // last vector component imaginary so matrix is triangular
            if h[(nu, nu - 1)].abs() > h[(nu - 1, nu)].abs() {
                h[(nu - 1, nu - 1)] = q / h[(nu, nu - 1)];
                h[(nu - 1, nu)] = -(h[(nu, nu)] - p) / h[(nu, nu - 1)];
            } else {
                let (cr, ci) = cdiv(0.0, -h[(nu - 1, nu)], h[(nu - 1, nu - 1)] - p, q);
                h[(nu - 1, nu - 1)] = cr;
                h[(nu - 1, nu)] = ci;
            }
            h[(nu, nu - 1)] = 0.0;
            h[(nu, nu)] = 1.0;
            for i in (0..nu.saturating_sub(1)).rev() {
                let mut ra = 0.0;
                let mut sa = 0.0;
                for j in l..=nu {
                    ra += h[(i, j)] * h[(j, nu - 1)];
                    sa += h[(i, j)] * h[(j, nu)];
                }
                w = h[(i, i)] - p;

                if e[i] < 0.0 {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if e[i] == 0.0 {
                        let (cr, ci) = cdiv(-ra, -sa, w, q);
                        h[(i, nu - 1)] = cr;
                        h[(i, nu)] = ci;
                    } else {
                        // solve complex equations
                        x = h[(i, i + 1)];
                        y = h[(i + 1, i)];
                        let mut vr = (d[i] - p) * (d[i] - p) + e[i] * e[i] - q * q;
                        let vi = (d[i] - p) * 2.0 * q;
                        if vr == 0.0 && vi == 0.0 {
                            vr = eps * norm * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                        }
                        let (cr, ci) = cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                        h[(i, nu - 1)] = cr;
                        h[(i, nu)] = ci;
                        if x.abs() > (z.abs() + q.abs()) {
                            h[(i + 1, nu - 1)] = (-ra - w * h[(i, nu - 1)] + q * h[(i, nu)]) / x;
                            h[(i + 1, nu)] = (-sa - w * h[(i, nu)] - q * h[(i, nu - 1)]) / x;
                        } else {
                            let (cr, ci) = cdiv(-r - y * h[(i, nu - 1)], -s - y * h[(i, nu)], z, q);
                            h[(i + 1, nu - 1)] = cr;
                            h[(i + 1, nu)] = ci;
                        }
                    }

                    // overflow control
                    t = h[(i, nu - 1)].abs().max(h[(i, nu)].abs());
                    if (eps * t) * t > 1.0 {
                        for j in i..=nu {
                            h[(j, nu - 1)] /= t;
                            h[(j, nu)] /= t;
                        }
                    }
                }
            }
        }
    }

    // back transformation to get eigenvectors of the original matrix
    for j in (0..nn).rev() {
        for i in 0..nn {
            z = 0.0;
            for k in 0..=j {
                z += v[(i, k)] * h[(k, j)];
            }
            v[(i, j)] = z;
        }
    }
    Ok(())
}

/// Inverse of a complex square matrix given as a list of columns. Returns
/// the rows of the inverse together with the 1-norm condition number of the
/// column-normalized input. Columns that are numerically dependent (as for a
/// defective matrix) are reported as an error.
pub fn complex_inverse_rows(cols: &[Vec<Complex64>]) -> Result<(Vec<Vec<Complex64>>, f64)> {
    let n = cols.len();
    let norms: Vec<f64> = cols.iter().map(|c| libm::sqrt(c.iter().map(|z| z.norm_sqr()).sum())).collect();
    if norms.iter().any(|&v| v == 0.0 || !v.is_finite()) {
        return Err(Error::EigenFailure("zero or non-finite eigenvector".into()));
    }
    // a[i][j] = cols[j][i] / |cols[j]|
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| cols[j][i] / norms[j]).collect()).collect();
    let norm_a = (0..n).map(|j| (0..n).map(|i| a[i][j].norm()).sum::<f64>()).fold(0.0, f64::max);
    let zero = Complex64::new(0.0, 0.0);
    let mut inv: Vec<Vec<Complex64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { zero }).collect()).collect();
    for k in 0..n {
        let (piv, best) =
            (k..n).map(|i| (i, a[i][k].norm())).fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= 64.0 * f64::EPSILON * norm_a || !best.is_finite() {
            return Err(Error::EigenFailure("eigenvector matrix is singular (defective matrix)".into()));
        }
        a.swap(k, piv);
        inv.swap(k, piv);
        let pivot = a[k][k];
        for j in 0..n {
            a[k][j] /= pivot;
            inv[k][j] /= pivot;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i][k];
            if f == zero {
                continue;
            }
            for j in 0..n {
                let akj = a[k][j];
                let ikj = inv[k][j];
                a[i][j] -= f * akj;
                inv[i][j] -= f * ikj;
            }
        }
    }
    let norm_inv = (0..n).map(|j| (0..n).map(|i| inv[i][j].norm()).sum::<f64>()).fold(0.0, f64::max);
    // undo the column scaling: (V D)^-1 = D^-1 V^-1
    for (row, &s) in inv.iter_mut().zip(&norms) {
        row.iter_mut().for_each(|z| *z /= s);
    }
    Ok((inv, norm_a * norm_inv))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_right_pairs(a: &Matrix, eig: &Eigen, tol: f64) {
        let n = a.rows();
        let vals = eig.eigenvalues();
        let vecs = eig.complex_vectors();
        for (lambda, u) in vals.iter().zip(&vecs) {
            for i in 0..n {
                let au: Complex64 = (0..n).map(|j| u[j] * a[(i, j)]).sum();
                assert!((au - lambda * u[i]).norm() < tol, "A u != lambda u for {lambda}");
            }
        }
    }

    #[test]
    fn symmetric_matrix() {
        let a = Matrix::from_rows(&[[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]]);
        let eig = Eigen::new(&a).unwrap();
        let mut vals: Vec<f64> = eig.re.clone();
        vals.sort_by(f64::total_cmp);
        let r2 = libm::sqrt(2.0);
        for (got, want) in vals.iter().zip([2.0 - r2, 2.0, 2.0 + r2]) {
            assert!((got - want).abs() < 1e-13);
        }
        assert!(eig.im.iter().all(|&v| v == 0.0));
        check_right_pairs(&a, &eig, 1e-12);
    }

    #[test]
    fn rotation_has_complex_pair() {
        let a = Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]);
        let eig = Eigen::new(&a).unwrap();
        let mut ims = eig.im.clone();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-14 && (ims[1] - 1.0).abs() < 1e-14);
        check_right_pairs(&a, &eig, 1e-13);
    }

    #[test]
    fn general_matrix_with_mixed_spectrum() {
        let a = Matrix::from_rows(&[
            [4.0, -2.0, 1.0, 0.5],
            [3.0, 6.0, -4.0, 1.0],
            [2.0, 1.0, 8.0, -3.0],
            [0.1, -1.0, 2.0, 1.0],
        ]);
        let eig = Eigen::new(&a).unwrap();
        check_right_pairs(&a, &eig, 1e-11);
        let trace: f64 = eig.re.iter().sum();
        assert!((trace - 19.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_rows_are_biorthogonal() {
        let a = Matrix::from_rows(&[[0.5, 0.2, 0.1], [0.3, 0.6, 0.2], [0.2, 0.2, 0.7]]);
        let eig = Eigen::new(&a).unwrap();
        let u = eig.complex_vectors();
        let (v, cond) = complex_inverse_rows(&u).unwrap();
        assert!(cond.is_finite() && cond >= 1.0);
        for i in 0..3 {
            for j in 0..3 {
                let d: Complex64 = (0..3).map(|k| v[i][k] * u[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn defective_matrix_is_reported() {
        let a = Matrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        let eig = Eigen::new(&a).unwrap();
        assert!(complex_inverse_rows(&eig.complex_vectors()).is_err());
    }
}

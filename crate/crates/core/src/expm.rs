//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! (Higham 2005), plus a spectral path for symmetric matrices.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

const THETA_3: f64 = 1.495_585_217_958_292e-2;
const THETA_5: f64 = 2.539_398_330_063_23e-1;
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068e0;
const THETA_13: f64 = 5.371_920_351_148_152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// `(exp(-alpha * dt) - 1) / alpha`, the (non-positive) time coefficient of
/// a decaying interval. Evaluated through `expm1` so that `alpha * dt << 1`
/// keeps full relative precision.
pub fn decay_coefficient(alpha: f64, dt: f64) -> f64 {
    libm::expm1(-alpha * dt) / alpha
}

/// `exp(a)` for a square real matrix.
pub fn expm(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), got: a.cols() });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("matrix exponential argument"));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let norm = a.norm_1();
    if norm == 0.0 {
        return Ok(Matrix::identity(n));
    }

    let a2 = a.matmul(a);
    if norm <= THETA_3 {
        return pade_low(a, &a2, &B3);
    }
    if norm <= THETA_5 {
        return pade_low(a, &a2, &B5);
    }
    if norm <= THETA_7 {
        return pade_low(a, &a2, &B7);
    }
    if norm <= THETA_9 {
        return pade_low(a, &a2, &B9);
    }

    let s = if norm > THETA_13 { libm::ceil(libm::log2(norm / THETA_13)).max(0.0) as i32 } else { 0 };
    let (scaled, scaled2) = if s > 0 {
        let f = libm::exp2(-(s as f64));
        (a.scale(f), a2.scale(f * f))
    } else {
        (a.clone(), a2)
    };
    let mut r = pade13(&scaled, &scaled2)?;
    for _ in 0..s {
        r = r.matmul(&r);
    }
    Ok(r)
}

/// Padé approximants of degree 3 to 9, built from even powers of `a`.
fn pade_low(a: &Matrix, a2: &Matrix, b: &[f64]) -> Result<Matrix> {
    let n = a.rows();
    let m = b.len() - 1;
    // even powers I, A^2, A^4, ...
    let mut powers: Vec<Matrix> = Vec::with_capacity(m / 2 + 1);
    powers.push(Matrix::identity(n));
    powers.push(a2.clone());
    while powers.len() * 2 <= m {
        let next = powers[powers.len() - 1].matmul(a2);
        powers.push(next);
    }
    let mut u_inner = Matrix::zeros(n, n);
    let mut v = Matrix::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        if 2 * k < m {
            u_inner.axpy(b[2 * k + 1], p);
        }
        if 2 * k <= m {
            v.axpy(b[2 * k], p);
        }
    }
    let u = a.matmul(&u_inner);
    (v.sub(&u)).solve(&v.add(&u))
}

fn pade13(a: &Matrix, a2: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    let b = &B13;
    let a4 = a2.matmul(a2);
    let a6 = a4.matmul(a2);

    let mut u_hi = a6.scale(b[13]);
    u_hi.axpy(b[11], &a4);
    u_hi.axpy(b[9], a2);
    let mut u_inner = a6.matmul(&u_hi);
    u_inner.axpy(b[7], &a6);
    u_inner.axpy(b[5], &a4);
    u_inner.axpy(b[3], a2);
    u_inner.add_diagonal(b[1]);
    let u = a.matmul(&u_inner);

    let mut v_hi = a6.scale(b[12]);
    v_hi.axpy(b[10], &a4);
    v_hi.axpy(b[8], a2);
    let mut v = a6.matmul(&v_hi);
    v.axpy(b[6], &a6);
    v.axpy(b[4], &a4);
    v.axpy(b[2], a2);
    v.add_diagonal(b[0]);
    debug_assert_eq!(v.rows(), n);

    (v.sub(&u)).solve(&v.add(&u))
}

/// `exp(a)` for symmetric `a` through its eigendecomposition `Q diag(l) Q^T`.
pub fn expm_symmetric(a: &Matrix) -> Result<Matrix> {
    if !a.is_symmetric(0.0) {
        return Err(Error::param("a", "matrix is not symmetric"));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("matrix exponential argument"));
    }
    let (values, q) = symmetric_eigen(a)?;
    let n = a.rows();
    let exps: Vec<f64> = values.iter().map(|&l| libm::exp(l)).collect();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let s: f64 = (0..n).map(|k| q[(i, k)] * exps[k] * q[(j, k)]).sum();
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
    }
    Ok(out)
}

/// Cyclic Jacobi eigensolver for symmetric matrices. Returns eigenvalues and
/// the orthogonal matrix whose columns are the matching eigenvectors.
pub fn symmetric_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = a.rows();
    let mut m = a.clone();
    let mut q = Matrix::identity(n);
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok((alloc::vec![0.0; n], q));
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[(i, j)] * m[(i, j)]).sum();
        if libm::sqrt(off) <= 1e-15 * scale * (n as f64) {
            let values = (0..n).map(|i| m[(i, i)]).collect();
            return Ok((values, q));
        }
        for p in 0..n {
            for r in p + 1..n {
                let apr = m[(p, r)];
                if apr == 0.0 {
                    continue;
                }
                let theta = (m[(r, r)] - m[(p, p)]) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkr = m[(k, r)];
                    m[(k, p)] = c * mkp - s * mkr;
                    m[(k, r)] = s * mkp + c * mkr;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mrk = m[(r, k)];
                    m[(p, k)] = c * mpk - s * mrk;
                    m[(r, k)] = s * mpk + c * mrk;
                }
                for k in 0..n {
                    let qkp = q[(k, p)];
                    let qkr = q[(k, r)];
                    q[(k, p)] = c * qkp - s * qkr;
                    q[(k, r)] = s * qkp + c * qkr;
                }
            }
        }
    }
    Err(Error::EigenFailure("Jacobi iteration did not converge".into()))
}

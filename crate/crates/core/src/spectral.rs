//! Spectral gap and Fiedler-vector diagnostics for propagators.
//!
//! Eigenvalues are ordered by magnitude (descending), then real part, then
//! imaginary part, so repeated runs give identical output. For the right
//! eigenvectors `u_i` and left eigenvectors `v_i` we use the normalization
//! `|u_i| = 1`, `v_i u_j = delta_ij` and fix the phase so that the largest
//! component of `u_i` is real and positive.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;

use crate::eigen::{complex_inverse_rows, Eigen};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Magnitude separation below which two eigenvalues count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Allowed deviation of `|lambda_1|` from one for a valid propagator.
pub const PROPAGATOR_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    /// Full spectrum in canonical order.
    pub eigenvalues: Vec<Complex64>,
    /// `|lambda_1| - |lambda_2|`, clamped to `[0, 1]`.
    pub gap: f64,
    /// `right[i]` is `u_i` for the first `k` eigenvalues.
    pub right: Vec<Vec<Complex64>>,
    /// `left[i]` is `v_i` for the first `k` eigenvalues.
    pub left: Vec<Vec<Complex64>>,
    /// 1-norm condition number of the (column-normalized) eigenvector matrix.
    pub condition: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiedlerVector {
    pub eigenvalue: Complex64,
    /// Left Fiedler vector `v_2`, normalized against `right`.
    pub left: Vec<Complex64>,
    pub right: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkageReport {
    /// `|w_2| / |v_2|` with `w_2 = v_2 Y`.
    pub ratio: f64,
    /// `Re(w_2 . conj(v_2)) / (|w_2| |v_2|)`.
    pub cosine: f64,
}

fn canonical_order(a: &Complex64, b: &Complex64) -> Ordering {
    b.norm()
        .total_cmp(&a.norm())
        .then_with(|| b.re.total_cmp(&a.re))
        .then_with(|| b.im.total_cmp(&a.im))
}

/// All eigenvalues of `m` in canonical order.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex64>> {
    let mut values = Eigen::new(m)?.eigenvalues();
    values.sort_by(canonical_order);
    Ok(values)
}

fn gap_of(values: &[Complex64]) -> f64 {
    let l1 = values.first().map_or(0.0, |z| z.norm());
    let l2 = values.get(1).map_or(0.0, |z| z.norm());
    (l1 - l2).clamp(0.0, 1.0)
}

pub fn eigendecompose(m: &Matrix, k: usize) -> Result<SpectralSummary> {
    let n = m.rows();
    if k == 0 || k > n {
        return Err(Error::param("k", alloc::format!("requested {k} eigenpairs of a {n}x{n} matrix")));
    }
    let (eig, order) = sorted_eigen(m)?;
    summarize(&eig, &order, k)
}

/// Eigendecomposition plus the canonical ordering of its eigenvalues.
fn sorted_eigen(m: &Matrix) -> Result<(Eigen, Vec<usize>)> {
    let eig = Eigen::new(m)?;
    let values = eig.eigenvalues();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| canonical_order(&values[a], &values[b]));
    Ok((eig, order))
}

fn summarize(eig: &Eigen, order: &[usize], k: usize) -> Result<SpectralSummary> {
    let values = eig.eigenvalues();
    let vectors = eig.complex_vectors();
    let (inverse_rows, condition) = complex_inverse_rows(&vectors)?;
    let mut right = Vec::with_capacity(k);
    let mut left = Vec::with_capacity(k);
    for &idx in order.iter().take(k) {
        let (u, v) = normalize_pair(&vectors[idx], &inverse_rows[idx]);
        right.push(u);
        left.push(v);
    }
    let eigenvalues: Vec<Complex64> = order.iter().map(|&i| values[i]).collect();
    let gap = gap_of(&eigenvalues);
    Ok(SpectralSummary { eigenvalues, gap, right, left, condition })
}

/// Scales `u` to unit length with its largest component real-positive and
/// rescales `v` inversely so that `v u` is unchanged.
fn normalize_pair(u: &[Complex64], v: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let norm = libm::sqrt(u.iter().map(|z| z.norm_sqr()).sum::<f64>());
    let mut at = 0;
    let mut best = -1.0;
    for (k, z) in u.iter().enumerate() {
        if z.norm() > best * (1.0 + 1e-12) {
            best = z.norm();
            at = k;
        }
    }
    let phase = u[at] / u[at].norm();
    let scale = phase.conj() / norm;
    let mut u: Vec<Complex64> = u.iter().map(|z| z * scale).collect();
    u[at] = Complex64::new(u[at].norm(), 0.0);
    let v: Vec<Complex64> = v.iter().map(|z| z / scale).collect();
    (u, v)
}

/// `1 - |lambda_2|` for a propagator, after checking `|lambda_1| = 1`.
pub fn spectral_gap(m: &Matrix) -> Result<f64> {
    let values = eigenvalues(m)?;
    let l1 = values.first().map_or(0.0, |z| z.norm());
    if (l1 - 1.0).abs() > PROPAGATOR_TOL {
        return Err(Error::NotPropagator(l1));
    }
    let l2 = values.get(1).map_or(0.0, |z| z.norm());
    Ok((1.0 - l2).clamp(0.0, 1.0))
}

/// Left eigenvector for the second-largest-magnitude eigenvalue.
///
/// Fails when `|lambda_2|` is not separated from `|lambda_1|` or `|lambda_3|`,
/// since the direction is then not determined.
pub fn fiedler_left(m: &Matrix) -> Result<FiedlerVector> {
    let n = m.rows();
    if n < 2 {
        return Err(Error::param("m", "need at least two nodes for a Fiedler vector"));
    }
    let (eig, order) = sorted_eigen(m)?;
    let values = eig.eigenvalues();
    let mag = |k: usize| order.get(k).map_or(f64::NAN, |&i| values[i].norm());
    let (l1, l2, l3) = (mag(0), mag(1), mag(2));
    let below = if n > 2 { l2 - l3 } else { f64::INFINITY };
    if l1 - l2 < DEGENERACY_TOL || below < DEGENERACY_TOL {
        return Err(Error::DegenerateFiedler { l1, l2, l3 });
    }
    let summary = summarize(&eig, &order, 2)?;
    Ok(FiedlerVector {
        eigenvalue: summary.eigenvalues[1],
        left: summary.left[1].clone(),
        right: summary.right[1].clone(),
    })
}

/// How much the next interval factor shrinks the left Fiedler vector of
/// the current propagator.
pub fn shrinkage_ratio(m_before: &Matrix, y_next: &Matrix) -> Result<ShrinkageReport> {
    if y_next.rows() != m_before.rows() || !y_next.is_square() {
        return Err(Error::DimensionMismatch { expected: m_before.rows(), got: y_next.rows() });
    }
    let fiedler = fiedler_left(m_before)?;
    Ok(shrinkage_of(&fiedler.left, y_next))
}

/// Ratio and alignment of `w = v Y` against `v`.
pub fn shrinkage_of(v: &[Complex64], y: &Matrix) -> ShrinkageReport {
    let n = v.len();
    let mut w = alloc::vec![Complex64::new(0.0, 0.0); n];
    for (i, vi) in v.iter().enumerate() {
        for (j, wj) in w.iter_mut().enumerate() {
            *wj += vi * y[(i, j)];
        }
    }
    let norm = |x: &[Complex64]| libm::sqrt(x.iter().map(|z| z.norm_sqr()).sum::<f64>());
    let nv = norm(v);
    let nw = norm(&w);
    let ratio = if nv > 0.0 { nw / nv } else { 0.0 };
    let cosine = if nv > 0.0 && nw > 0.0 {
        let inner: f64 = w.iter().zip(v).map(|(a, b)| (a * b.conj()).re).sum();
        (inner / (nv * nw)).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    ShrinkageReport { ratio, cosine }
}

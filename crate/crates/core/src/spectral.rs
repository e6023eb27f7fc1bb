//! Eigenvalues, singular values, rank and operator norm.
//!
//! General matrices go through Householder reduction to Hessenberg form
//! followed by single-shift complex QR. Hermitian matrices use cyclic Jacobi
//! rotations, and singular values come from one-sided (Hestenes) Jacobi.

#![allow(clippy::needless_range_loop)]

use crate::error::{Result, SchurError};
use crate::matrix::{ComplexMatrix, Tolerance, C64};

const EPS: f64 = f64::EPSILON;
const MAX_JACOBI_SWEEPS: usize = 100;

/// Eigenvalues with algebraic multiplicity, ordered by decreasing modulus.
///
/// Hermitian input (`‖A - A*‖_F ≤ 100 ε ‖A‖_F`) is routed to the Jacobi
/// solver and comes back with exactly zero imaginary parts.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = a.require_square("eigenvalues")?;
    let scale = a.frobenius_norm();
    let mut values = if a.hermitian_defect() <= 100.0 * EPS * scale {
        hermitian_eigenvalues(a)?
            .into_iter()
            .map(|x| C64::new(x, 0.0))
            .collect()
    } else {
        let mut h = a.to_rows();
        hessenberg_reduce(&mut h);
        hessenberg_qr(h, scale)?
    };
    debug_assert_eq!(values.len(), n);
    values.sort_by(|x, y| y.norm().total_cmp(&x.norm()));
    Ok(values)
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(a: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?.first().map_or(0.0, |z| z.norm()))
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
///
/// Only the Hermitian part `(A + A*)/2` is read.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_jacobi(a, false)?.0)
}

/// Eigenvalues (ascending) and unit eigenvectors (as columns) of the
/// Hermitian part of `a`.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let (values, vectors) = hermitian_jacobi(a, true)?;
    Ok((values, vectors.expect("vectors requested")))
}

/// Singular values, descending.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    // Work with the orientation that has at least as many rows as columns.
    let mut columns: Vec<Vec<C64>> = if a.rows() >= a.cols() {
        (0..a.cols()).map(|j| a.column(j)).collect()
    } else {
        let t = a.adjoint();
        (0..t.cols()).map(|j| t.column(j)).collect()
    };
    let cols = columns.len();
    // Columns at rounding level relative to the whole matrix carry no signal.
    let negligible = (EPS * a.frobenius_norm()).powi(2);

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = columns[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = columns[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = columns[p].iter().zip(&columns[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= EPS * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = columns.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let yq = *y * phase.conj();
                    let xp = *x;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SchurError::Convergence {
            routine: "one-sided Jacobi SVD",
            iterations: MAX_JACOBI_SWEEPS,
        });
    }
    let mut sigma: Vec<f64> = columns
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sigma.sort_by(|x, y| y.total_cmp(x));
    Ok(sigma)
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// Number of singular values above `max(rel · σ_max · max(rows, cols), abs)`.
pub fn numerical_rank(a: &ComplexMatrix, tol: Tolerance) -> Result<usize> {
    let sigma = singular_values(a)?;
    let smax = sigma.first().copied().unwrap_or(0.0);
    let threshold = tol.bound(smax * a.rows().max(a.cols()) as f64);
    Ok(sigma.iter().filter(|&&s| s > threshold).count())
}

/// Reduces `h` (row-major, square) to upper Hessenberg form in place with
/// Householder reflectors.
fn hessenberg_reduce(h: &mut [Vec<C64>]) {
    let n = h.len();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let norm: f64 = (k + 1..n).map(|i| h[i][k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[k + 1][k];
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[i][k]).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // H <- (I - 2 v v*) H on rows k+1..n.
        for j in 0..n {
            let dot: C64 = (k + 1..n).zip(&v).map(|(i, vi)| vi.conj() * h[i][j]).sum();
            for (i, vi) in (k + 1..n).zip(&v) {
                h[i][j] -= *vi * dot * 2.0;
            }
        }
        // H <- H (I - 2 v v*) on columns k+1..n.
        for row in h.iter_mut() {
            let dot: C64 = (k + 1..n).zip(&v).map(|(j, vj)| row[j] * vj).sum();
            for (j, vj) in (k + 1..n).zip(&v) {
                row[j] -= dot * vj.conj() * 2.0;
            }
        }
        h[k + 1][k] = alpha;
        for row in h.iter_mut().skip(k + 2) {
            row[k] = C64::new(0.0, 0.0);
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix by explicitly shifted QR with
/// Wilkinson shifts and deflation.
fn hessenberg_qr(mut h: Vec<Vec<C64>>, scale: f64) -> Result<Vec<C64>> {
    let n = h.len();
    let mut values = vec![C64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(values);
    }
    let zero = C64::new(0.0, 0.0);
    let abs_floor = EPS * scale;
    let max_iter = 100 * n.max(10);
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut since_deflation = 0usize;

    loop {
        // Find the start of the active unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[lo][lo - 1].norm();
            let local = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
            if sub <= EPS * local || sub <= abs_floor {
                h[lo][lo - 1] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            values[hi] = h[hi][hi];
            since_deflation = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }

        total += 1;
        since_deflation += 1;
        if total > max_iter {
            return Err(SchurError::Convergence {
                routine: "Hessenberg QR",
                iterations: total,
            });
        }

        let shift = if since_deflation.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h[hi][hi] + C64::new(h[hi][hi - 1].norm() * 0.75, h[hi][hi - 1].norm() * 0.5)
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };

        for (k, row) in h.iter_mut().enumerate().take(hi + 1).skip(lo) {
            row[k] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[k][k], h[k + 1][k]);
            for j in k..=hi {
                let x = h[k][j];
                let y = h[k + 1][j];
                h[k][j] = x * c + s * y;
                h[k + 1][j] = -s.conj() * x + y * c;
            }
            h[k + 1][k] = zero;
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            let last = (k + 2).min(hi);
            for row in h.iter_mut().take(last + 1).skip(lo) {
                let x = row[k];
                let y = row[k + 1];
                row[k] = x * c + y * s.conj();
                row[k + 1] = -x * s + y * c;
            }
        }
        for (k, row) in h.iter_mut().enumerate().take(hi + 1).skip(lo) {
            row[k] += shift;
        }
    }
    Ok(values)
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    (an / r, (a / an) * b.conj() / r)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hermitian_jacobi(a: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let n = a.require_square("hermitian eigen")?;
    let mut m: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| (a[(i, j)] + a[(j, i)].conj()) * 0.5).collect())
        .collect();
    let mut v: Option<Vec<Vec<C64>>> = want_vectors.then(|| {
        (0..n)
            .map(|i| (0..n).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect()
    });
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C64::new(row[i].re, 0.0);
    }
    let total: f64 = m.iter().flatten().map(|z| z.norm_sqr()).sum();

    let mut converged = n < 2;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j].norm_sqr())
            .sum();
        if off <= EPS * EPS * total || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = m[p][q];
                let bn = b.norm();
                if bn == 0.0 {
                    continue;
                }
                let phase = b / bn;
                let app = m[p][p].re;
                let aqq = m[q][q].re;
                let theta = (aqq - app) / (2.0 * bn);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
                } else {
                    0.0
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns: U = diag(1, conj(phase)) * [[c, s], [-s, c]].
                let up = phase.conj();
                for row in m.iter_mut() {
                    let x = row[p];
                    let y = row[q];
                    row[p] = x * c - y * up * s;
                    row[q] = x * s + y * up * c;
                }
                // Rows: U* applied on the left.
                for j in 0..n {
                    let x = m[p][j];
                    let y = m[q][j];
                    m[p][j] = x * c - y * phase * s;
                    m[q][j] = x * s + y * phase * c;
                }
                m[p][q] = C64::new(0.0, 0.0);
                m[q][p] = C64::new(0.0, 0.0);
                m[p][p] = C64::new(m[p][p].re, 0.0);
                m[q][q] = C64::new(m[q][q].re, 0.0);
                if let Some(vecs) = v.as_mut() {
                    for row in vecs.iter_mut() {
                        let x = row[p];
                        let y = row[q];
                        row[p] = x * c - y * up * s;
                        row[q] = x * s + y * up * c;
                    }
                }
            }
        }
    }
    if !converged {
        return Err(SchurError::Convergence {
            routine: "Hermitian Jacobi",
            iterations: MAX_JACOBI_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].re.total_cmp(&m[j][j].re));
    let values = order.iter().map(|&i| m[i][i].re).collect();
    let vectors = v.map(|vecs| ComplexMatrix::from_fn(n, n, |i, k| vecs[i][order[k]]));
    Ok((values, vectors))
}

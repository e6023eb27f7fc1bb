//! Deciding whether `B ↦ A ∘ B` distributes over matrix multiplication.
//!
//! A nonzero Schur map `S_A` on `M_n(C)` is multiplicative exactly when
//! `a_ij = a_ik a_kj` with unit diagonal, equivalently when `A` has rank one
//! with unit diagonal, when `Spec(A) = {n, 0, ..., 0}` with unit diagonal, or
//! when `a_ij = f(i)/f(j)` for a nowhere-zero vector `f`. The certificate
//! below evaluates each of these routes independently so that disagreement
//! between them is visible.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use crate::error::{Result, SchurError};
use crate::matrix::{schur_product, ComplexMatrix, Tolerance, C64};
use crate::random::{gaussian_matrix, seeded_rng};
use crate::spectral::{eigenvalues, hermitian_eigenvalues, singular_values};

/// Nowhere-zero vector `f(1..n)`; the matrix `a_ij = f(i)/f(j)` and the
/// diagonal similarity `Λ = diag(f)` are both built from it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingVector(Vec<C64>);

impl ScalingVector {
    pub fn new(values: Vec<C64>) -> Result<Self> {
        if values.is_empty() {
            return Err(SchurError::InvalidDimensions("scaling vector is empty".into()));
        }
        if let Some(i) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SchurError::NonFinite { row: i + 1, col: 1 });
        }
        if let Some(i) = values.iter().position(|z| z.norm() == 0.0) {
            return Err(SchurError::ZeroEntry { row: i + 1, col: 1 });
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[C64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `max |f(i)/f(j)|`.
    pub fn max_ratio(&self) -> f64 {
        let max = self.0.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let min = self.0.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        max / min
    }

    /// `Λ = diag(f)`.
    pub fn diagonal_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::diagonal(&self.0)
    }
}

/// Result of [`check_cocycle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CocycleCheck {
    pub pass: bool,
    pub residual: f64,
    pub threshold: f64,
    /// Worst violation `(i, j, k)`, 1-based, reported only on failure. A
    /// diagonal violation at `i` is reported as `(i, i, i)`.
    pub witness: Option<(usize, usize, usize)>,
}

/// Checks `a_ij = a_ik a_kj` for all `i, j, k` and `a_ii = 1`.
///
/// The residual is the largest absolute violation; it passes when it does not
/// exceed `tol.bound(max |a_ij|²)`.
pub fn check_cocycle(a: &ComplexMatrix, tol: Tolerance) -> Result<CocycleCheck> {
    let n = a.require_square("check_cocycle")?;
    let one = C64::new(1.0, 0.0);

    let mut worst_sq = -1.0;
    let mut worst = (0, 0, 0);
    for i in 0..n {
        let d = (a[(i, i)] - one).norm_sqr();
        if d > worst_sq {
            worst_sq = d;
            worst = (i, i, i);
        }
    }
    for i in 0..n {
        let row_i = a.row(i);
        for (k, &aik) in row_i.iter().enumerate() {
            let row_k = a.row(k);
            for (j, (&aij, &akj)) in row_i.iter().zip(row_k).enumerate() {
                let d = (aij - aik * akj).norm_sqr();
                if d > worst_sq {
                    worst_sq = d;
                    worst = (i, j, k);
                }
            }
        }
    }
    let residual = worst_sq.max(0.0).sqrt();
    let m = a.max_abs_entry();
    let threshold = tol.bound(m * m);
    let pass = residual <= threshold;
    Ok(CocycleCheck {
        pass,
        residual,
        threshold,
        witness: (!pass).then_some((worst.0 + 1, worst.1 + 1, worst.2 + 1)),
    })
}

/// Extracts `f` with `a_ij = f(i)/f(j)` and `f(1) = 1`.
///
/// `f(i) = a_ip / a_1p` where `p` is the column whose smallest entry modulus is
/// largest.
pub fn factor_scaling(a: &ComplexMatrix, tol: Tolerance) -> Result<ScalingVector> {
    let check = check_cocycle(a, tol)?;
    if !check.pass {
        return Err(SchurError::NotMultiplicative {
            condition: "cocycle".into(),
            residual: check.residual,
        });
    }
    let n = a.rows();
    let (pivot, (min_row, min_mod)) = (0..n)
        .map(|j| {
            let (row, modulus) = (0..n)
                .map(|i| (i, a[(i, j)].norm()))
                .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
            (j, (row, modulus))
        })
        .fold((0, (0, -1.0)), |acc, x| if x.1 .1 > acc.1 .1 { x } else { acc });
    if min_mod <= tol.abs() {
        return Err(SchurError::ZeroEntry {
            row: min_row + 1,
            col: pivot + 1,
        });
    }
    let top = a[(0, pivot)];
    ScalingVector::new((0..n).map(|i| a[(i, pivot)] / top).collect())
}

/// `a_ij = f(i)/f(j)`.
pub fn build_from_scaling(f: &ScalingVector) -> ComplexMatrix {
    let v = f.values();
    ComplexMatrix::from_fn(v.len(), v.len(), |i, j| v[i] / v[j])
}

/// The conditions recorded in a [`MultiplicativityCertificate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// `a_ij = a_ik a_kj`, `a_ii = 1`.
    Cocycle,
    UnitDiagonal,
    /// Numerical rank one, plus unit diagonal.
    RankOne,
    /// `Spec(A) = {n, 0^(n-1)}`, plus unit diagonal.
    Spectrum,
    /// `S_A(BC) = S_A(B) S_A(C)` on seeded random pairs.
    ProductSampling,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::Cocycle,
        Condition::UnitDiagonal,
        Condition::RankOne,
        Condition::Spectrum,
        Condition::ProductSampling,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Condition::Cocycle => "cocycle",
            Condition::UnitDiagonal => "unit_diagonal",
            Condition::RankOne => "rank_one",
            Condition::Spectrum => "spectrum_0_n",
            Condition::ProductSampling => "product_sampling",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Verdict and residual for one condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionResult {
    pub pass: bool,
    pub residual: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativityCertificate {
    pub verdict: bool,
    pub conditions: BTreeMap<Condition, ConditionResult>,
    pub witness: Option<(usize, usize, usize)>,
    pub scaling: Option<ScalingVector>,
    /// Set when the theoretically equivalent conditions disagree, which only
    /// happens for inputs sitting near the tolerance boundary.
    pub inconsistent: bool,
    pub tolerance: Tolerance,
}

impl MultiplicativityCertificate {
    pub fn condition(&self, c: Condition) -> ConditionResult {
        self.conditions[&c]
    }

    pub fn failed(&self) -> Vec<Condition> {
        self.conditions
            .iter()
            .filter(|(_, r)| !r.pass)
            .map(|(c, _)| *c)
            .collect()
    }
}

/// Evaluates every equivalent form of multiplicativity on `a`.
///
/// `trials` random complex Gaussian pairs `(B, C)` drive the product test;
/// trial `t` draws from stream `t` under `seed`.
pub fn certify_multiplicative(
    a: &ComplexMatrix,
    tol: Tolerance,
    trials: usize,
    seed: u64,
) -> Result<MultiplicativityCertificate> {
    let n = a.require_square("certify_multiplicative")?;
    let m = a.max_abs_entry();
    if m == 0.0 {
        return Err(SchurError::Precondition("the zero Schur map is excluded".into()));
    }
    let nf = n as f64;
    let mut conditions = BTreeMap::new();

    let cocycle = check_cocycle(a, tol)?;
    conditions.insert(
        Condition::Cocycle,
        ConditionResult {
            pass: cocycle.pass,
            residual: cocycle.residual,
            threshold: cocycle.threshold,
        },
    );

    let diag_residual = a.unit_diagonal_defect();
    let diag_threshold = tol.unit();
    let diag_ok = diag_residual <= diag_threshold;
    conditions.insert(
        Condition::UnitDiagonal,
        ConditionResult {
            pass: diag_ok,
            residual: diag_residual,
            threshold: diag_threshold,
        },
    );

    let sigma = singular_values(a)?;
    let smax = sigma[0];
    let rank_threshold = tol.bound(smax * nf);
    let rank = sigma.iter().filter(|&&s| s > rank_threshold).count();
    let second = sigma.get(1).copied().unwrap_or(0.0);
    conditions.insert(
        Condition::RankOne,
        ConditionResult {
            pass: rank == 1 && diag_ok,
            residual: second.max(diag_residual),
            threshold: rank_threshold,
        },
    );

    let ev = eigenvalues(a)?;
    let spec_residual = ev
        .iter()
        .enumerate()
        .map(|(k, z)| {
            if k == 0 {
                (z - C64::new(nf, 0.0)).norm()
            } else {
                z.norm()
            }
        })
        .fold(0.0, f64::max);
    let spec_threshold = tol.bound(nf * a.frobenius_norm());
    conditions.insert(
        Condition::Spectrum,
        ConditionResult {
            pass: spec_residual <= spec_threshold && diag_ok,
            residual: spec_residual.max(diag_residual),
            threshold: spec_threshold,
        },
    );

    let mut product_residual: f64 = 0.0;
    for t in 0..trials.max(1) {
        let mut rng = seeded_rng(seed, t as u64);
        let b = gaussian_matrix(&mut rng, n, n);
        let c = gaussian_matrix(&mut rng, n, n);
        let lhs = schur_product(a, &b.matmul(&c)?)?;
        let rhs = schur_product(a, &b)?.matmul(&schur_product(a, &c)?)?;
        let r = lhs.sub(&rhs)?.frobenius_norm() / (b.frobenius_norm() * c.frobenius_norm() * m * m);
        product_residual = product_residual.max(r);
    }
    let product_threshold = tol.bound(nf);
    conditions.insert(
        Condition::ProductSampling,
        ConditionResult {
            pass: product_residual <= product_threshold,
            residual: product_residual,
            threshold: product_threshold,
        },
    );

    let passes = conditions.values().filter(|r| r.pass).count();
    let verdict = passes == conditions.len();
    let inconsistent = passes != 0 && !verdict;
    let scaling = if verdict { Some(factor_scaling(a, tol)?) } else { None };
    Ok(MultiplicativityCertificate {
        verdict,
        conditions,
        witness: if verdict { None } else { cocycle.witness },
        scaling,
        inconsistent,
        tolerance: tol,
    })
}

/// Operator norm of `S_A` with respect to the operator norm on matrices:
/// `‖Λ‖ ‖Λ⁻¹‖ = max |f(i)/f(j)|`.
///
/// Only defined here for multiplicative `S_A`; the cocycle condition is
/// checked first.
pub fn schur_map_norm(a: &ComplexMatrix, tol: Tolerance) -> Result<f64> {
    Ok(factor_scaling(a, tol)?.max_ratio())
}

/// Support function of the numerical range sampled at `directions` equally
/// spaced angles: `(θ, λ_max((e^{iθ}A + (e^{iθ}A)*)/2))`.
pub fn numerical_range_samples(a: &ComplexMatrix, directions: usize) -> Result<Vec<(f64, f64)>> {
    a.require_square("numerical_range_samples")?;
    (0..directions)
        .map(|k| {
            let theta = TAU * k as f64 / directions as f64;
            let rotated = a.scale(C64::from_polar(1.0, theta));
            let top = *hermitian_eigenvalues(&rotated)?.last().expect("nonempty spectrum");
            Ok((theta, top))
        })
        .collect()
}

/// Largest distance in a greedy matching of two eigenvalue multisets.
///
/// Both lists are sorted by `(re, im)`; each element of `left` in turn claims
/// its nearest unclaimed partner in `right`. Returns infinity on a length
/// mismatch.
pub fn spectrum_distance(left: &[C64], right: &[C64]) -> f64 {
    if left.len() != right.len() {
        return f64::INFINITY;
    }
    let key = |z: &C64, w: &C64| z.re.total_cmp(&w.re).then(z.im.total_cmp(&w.im));
    let mut l = left.to_vec();
    let mut r = right.to_vec();
    l.sort_by(key);
    r.sort_by(key);
    let mut used = vec![false; r.len()];
    let mut worst: f64 = 0.0;
    for z in &l {
        let (best, dist) = r
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, w)| (k, (z - w).norm()))
            .fold((usize::MAX, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        used[best] = true;
        worst = worst.max(dist);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_scaling, seeded_rng};
    use crate::spectral::operator_norm;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn intro() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(1.0, 0.0)]]).unwrap()
    }

    #[test]
    fn cocycle_examples() {
        let tol = Tolerance::default();
        let r = check_cocycle(&intro(), tol).unwrap();
        assert!(r.pass);
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.witness, None);

        assert!(check_cocycle(&ComplexMatrix::ones(3), tol).unwrap().pass);

        let bad = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]).unwrap();
        let r = check_cocycle(&bad, tol).unwrap();
        assert!(!r.pass);
        let (i, j, _) = r.witness.unwrap();
        assert_eq!((i, j), (2, 2));
        assert_eq!(r.residual, 2.0);
    }

    #[test]
    fn factor_examples() {
        let tol = Tolerance::default();
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[2.0, 1.0]]).unwrap();
        assert_eq!(factor_scaling(&a, tol).unwrap().values(), &[c(1.0, 0.0), c(2.0, 0.0)]);

        let f = factor_scaling(&intro(), tol).unwrap();
        assert_eq!(f.values(), &[c(1.0, 0.0), c(0.0, -1.0)]);

        let f = factor_scaling(&ComplexMatrix::ones(4), tol).unwrap();
        assert_eq!(f.values(), &[c(1.0, 0.0); 4]);
    }

    #[test]
    fn factor_rejects_non_multiplicative() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            factor_scaling(&a, Tolerance::default()),
            Err(SchurError::NotMultiplicative { .. })
        ));
    }

    #[test]
    fn build_examples() {
        let f = ScalingVector::new(vec![c(1.0, 0.0); 3]).unwrap();
        assert_eq!(build_from_scaling(&f), ComplexMatrix::ones(3));
        let f = ScalingVector::new(vec![c(1.0, 0.0), c(0.0, -1.0)]).unwrap();
        assert_eq!(build_from_scaling(&f), intro());
        let f = ScalingVector::new(vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(
            build_from_scaling(&f),
            ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[2.0, 1.0]]).unwrap()
        );
        assert_eq!(
            ScalingVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap_err(),
            SchurError::ZeroEntry { row: 2, col: 1 }
        );
    }

    #[test]
    fn certificate_examples() {
        let tol = Tolerance::default();
        let cert = certify_multiplicative(&intro(), tol, 8, 1).unwrap();
        assert!(cert.verdict);
        assert!(!cert.inconsistent);
        assert!(cert.witness.is_none());
        assert!(cert.scaling.is_some());
        for cond in Condition::ALL {
            assert!(cert.condition(cond).pass, "{cond}");
        }

        for n in 1..6 {
            assert!(
                certify_multiplicative(&ComplexMatrix::ones(n), tol, 4, 2)
                    .unwrap()
                    .verdict
            );
        }

        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let cert = certify_multiplicative(&a, tol, 4, 3).unwrap();
        assert!(!cert.verdict);
        assert!(!cert.condition(Condition::Cocycle).pass);
        assert!(!cert.condition(Condition::RankOne).pass);
        assert!(cert.scaling.is_none());
        assert!(cert.witness.is_some());
    }

    #[test]
    fn certify_rejects_zero_and_rectangular() {
        let tol = Tolerance::default();
        assert!(matches!(
            certify_multiplicative(&ComplexMatrix::zeros(2, 2), tol, 1, 0),
            Err(SchurError::Precondition(_))
        ));
        assert!(matches!(
            certify_multiplicative(&ComplexMatrix::ones_rect(2, 3), tol, 1, 0),
            Err(SchurError::NotSquare { .. })
        ));
    }

    #[test]
    fn map_norm_examples() {
        let tol = Tolerance::default();
        assert_eq!(schur_map_norm(&intro(), tol).unwrap(), 1.0);
        assert_eq!(schur_map_norm(&ComplexMatrix::ones(5), tol).unwrap(), 1.0);
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[2.0, 1.0]]).unwrap();
        assert!((schur_map_norm(&a, tol).unwrap() - 2.0).abs() < 1e-15);
    }

    /// Brute-force lower bound on ‖S_A‖ from random unit-norm inputs; it
    /// approaches the closed form from below.
    #[test]
    fn map_norm_matches_random_search() {
        let tol = Tolerance::default();
        let f = ScalingVector::new(vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let a = build_from_scaling(&f);
        let mut best: f64 = 0.0;
        let mut rng = seeded_rng(99, 0);
        for _ in 0..10_000 {
            let b = gaussian_matrix(&mut rng, 2, 2);
            let nb = operator_norm(&b).unwrap();
            let sb = operator_norm(&schur_product(&a, &b).unwrap()).unwrap();
            best = best.max(sb / nb);
        }
        let closed = schur_map_norm(&a, tol).unwrap();
        assert!(best <= closed + 1e-12);
        assert!(best > 0.95 * closed, "search reached {best}");
        // The matrix unit E_21 attains the bound.
        let e21 = ComplexMatrix::matrix_unit(2, 1, 0);
        let attained = operator_norm(&schur_product(&a, &e21).unwrap()).unwrap();
        assert!((attained - 2.0).abs() < 1e-15);
    }

    #[test]
    fn numerical_range_examples() {
        let d = ComplexMatrix::diagonal(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let s = numerical_range_samples(&d, 4).unwrap();
        assert_eq!(s[0].0, 0.0);
        assert!((s[0].1 - 1.0).abs() < 1e-15);

        let z = numerical_range_samples(&ComplexMatrix::zeros(3, 3), 8).unwrap();
        assert!(z.iter().all(|&(_, s)| s == 0.0));
    }

    #[test]
    fn numerical_range_preserved_by_hermitian_multiplier() {
        let f = ScalingVector::new(vec![c(1.0, 0.0), c(0.0, -1.0), C64::from_polar(1.0, 0.7)]).unwrap();
        let a = build_from_scaling(&f);
        assert!(a.hermitian_defect() < 1e-15);
        let mut rng = seeded_rng(5, 0);
        let b = gaussian_matrix(&mut rng, 3, 3);
        let sb = schur_product(&a, &b).unwrap();
        let lhs = numerical_range_samples(&b, 64).unwrap();
        let rhs = numerical_range_samples(&sb, 64).unwrap();
        for ((t1, s1), (t2, s2)) in lhs.iter().zip(&rhs) {
            assert_eq!(t1, t2);
            assert!((s1 - s2).abs() < 1e-8);
        }
    }

    #[test]
    fn spectrum_distance_matches_permutations() {
        let a = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.5)];
        let b = [c(-1.0, 0.5), c(1.0, 1e-9), c(0.0, 1.0)];
        assert!((spectrum_distance(&a, &b) - 1e-9).abs() < 1e-15);
        assert_eq!(spectrum_distance(&a, &b[..2]), f64::INFINITY);
    }

    #[test]
    fn random_scalings_certify() {
        let tol = Tolerance::default();
        for seed in 0..30 {
            let mut rng = seeded_rng(seed, 1);
            let n = 1 + seed as usize % 12;
            let f = random_scaling(&mut rng, n, 2.0);
            let cert = certify_multiplicative(&build_from_scaling(&f), tol, 3, seed).unwrap();
            assert!(cert.verdict, "seed {seed}: {cert:?}");
        }
    }
}

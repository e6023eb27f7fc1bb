//! Infinite coefficient matrices probed through finite corners.
//!
//! A [`CoefficientGenerator`] is a pure rule `(i, j) ↦ a_ij` over 1-based
//! indices. Claims about the infinite matrix (boundedness of the scaling,
//! unboundedness in operator norm) are examined on leading principal corners;
//! a finite probe can refute such a claim but never prove it, which is why
//! the outcomes are three-valued.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SchurError};
use crate::matrix::{schur_product, ComplexMatrix, Tolerance, C64};
use crate::multiplicative::{check_cocycle, factor_scaling, ScalingVector};
use crate::random::{gaussian_vector, seeded_rng};
use crate::spectral::operator_norm;

type Rule = dyn Fn(usize, usize) -> C64 + Send + Sync;

/// Deterministic rule for the coefficients of an infinite matrix.
#[derive(Clone)]
pub struct CoefficientGenerator {
    label: String,
    rule: Arc<Rule>,
    declared_bound: Option<f64>,
    support: Option<usize>,
}

impl fmt::Debug for CoefficientGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientGenerator")
            .field("label", &self.label)
            .field("declared_bound", &self.declared_bound)
            .field("support", &self.support)
            .finish()
    }
}

impl CoefficientGenerator {
    /// Wraps an arbitrary rule. The rule must return the same value for the
    /// same `(i, j)` and must be finite everywhere it is evaluated.
    pub fn new(
        label: impl Into<String>,
        declared_bound: Option<f64>,
        rule: impl Fn(usize, usize) -> C64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            rule: Arc::new(rule),
            declared_bound,
            support: None,
        }
    }

    /// `a_ij = λ^(j-i)`.
    pub fn toeplitz(lambda: C64) -> Self {
        let (r, theta) = lambda.to_polar();
        let bound = ((r - 1.0).abs() < 1e-15).then_some(1.0);
        Self::new(format!("toeplitz:{},{}", lambda.re, lambda.im), bound, move |i, j| {
            let k = j as i32 - i as i32;
            if k == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::from_polar(r.powi(k), theta * f64::from(k))
            }
        })
    }

    /// Every coefficient equal to `c`.
    pub fn constant(c: C64) -> Self {
        Self::new(format!("constant:{},{}", c.re, c.im), Some(c.norm()), move |_, _| c)
    }

    /// `a_ij = f(i)/f(j)` for a rule `f` on 1-based indices.
    pub fn from_scaling_fn(label: impl Into<String>, f: impl Fn(usize) -> C64 + Send + Sync + 'static) -> Self {
        Self::new(label, None, move |i, j| f(i) / f(j))
    }

    /// `a_ij = f(i)/f(j)` for the listed values, zero outside them.
    pub fn from_scaling_values(f: ScalingVector) -> Self {
        let values = f.values().to_vec();
        let len = values.len();
        let mut g = Self::new("scaling", None, move |i, j| {
            if i <= len && j <= len {
                values[i - 1] / values[j - 1]
            } else {
                C64::new(0.0, 0.0)
            }
        });
        g.support = Some(len);
        g
    }

    /// A finite table extended by zeros.
    pub fn table(a: ComplexMatrix) -> Self {
        let (rows, cols) = a.shape();
        let bound = a.max_abs_entry();
        let mut g = Self::new("table", Some(bound), move |i, j| {
            if i <= rows && j <= cols {
                a[(i - 1, j - 1)]
            } else {
                C64::new(0.0, 0.0)
            }
        });
        g.support = Some(rows.max(cols));
        g
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn declared_bound(&self) -> Option<f64> {
        self.declared_bound
    }

    /// Size of the finite block outside which the coefficients are zero, for
    /// generators built from finite data.
    pub fn support(&self) -> Option<usize> {
        self.support
    }

    /// `a_ij` for 1-based `i, j`.
    pub fn coefficient(&self, i: usize, j: usize) -> C64 {
        assert!(i >= 1 && j >= 1, "coefficients are indexed from 1");
        (self.rule)(i, j)
    }
}

/// Leading principal `n x n` corner.
pub fn corner(generator: &CoefficientGenerator, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| generator.coefficient(i + 1, j + 1))
}

/// Three-valued outcome for a claim about the whole infinite matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// Nothing in the probed corner contradicts the claim.
    HoldsOnProbe,
    Refuted,
    /// The probe was too small to say anything.
    NotProbed,
}

impl ProbeOutcome {
    pub fn label(self) -> &'static str {
        match self {
            ProbeOutcome::HoldsOnProbe => "holds-on-probe",
            ProbeOutcome::Refuted => "refuted",
            ProbeOutcome::NotProbed => "not-probed",
        }
    }
}

/// A running extremum that grows by at least this factor over the second
/// half of a probe is read as an unbounded trend.
pub const GROWTH_FACTOR: f64 = 1.5;

/// Smallest probe for which the half-versus-full trend test runs.
pub const MIN_TREND_PROBE: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct L2FactorReport {
    /// `f(i) = a_i1`.
    pub scaling: ScalingVector,
    /// `max |f| / min |f|` over the probe.
    pub ratio: f64,
    /// Whether `ratio` stays below `1 / tol`.
    pub ratio_within_limit: bool,
    pub bounded: ProbeOutcome,
    pub bounded_away: ProbeOutcome,
    /// Scaling of the half-size corner agrees with this one up to a global
    /// factor.
    pub coherent: bool,
}

/// Checks that the probe corner is multiplicative, extracts `f(i) = a_i1`,
/// and tests whether `f` looks bounded and bounded away from zero.
pub fn l2_multiplier_factor_check(
    generator: &CoefficientGenerator,
    probe: usize,
    tol: Tolerance,
) -> Result<L2FactorReport> {
    if probe < 2 {
        return Err(SchurError::Precondition(format!(
            "probe must be at least 2, got {probe}"
        )));
    }
    let a = corner(generator, probe);
    let check = check_cocycle(&a, tol)?;
    if !check.pass {
        return Err(SchurError::NotMultiplicative {
            condition: "cocycle".into(),
            residual: check.residual,
        });
    }
    let scaling = ScalingVector::new(a.column(0))?;
    let moduli: Vec<f64> = scaling.values().iter().map(|z| z.norm()).collect();
    let half = probe / 2;
    let extremes = |s: &[f64]| {
        s.iter()
            .fold((0.0f64, f64::INFINITY), |(hi, lo), &x| (hi.max(x), lo.min(x)))
    };
    let (hi_full, lo_full) = extremes(&moduli);
    let (hi_half, lo_half) = extremes(&moduli[..half]);
    let ratio = hi_full / lo_full;
    let limit = 1.0 / tol.unit();
    let ratio_within_limit = ratio < limit;

    let trend = |grew: bool, hard: bool| {
        if hard || (probe >= MIN_TREND_PROBE && grew) {
            ProbeOutcome::Refuted
        } else if probe >= MIN_TREND_PROBE {
            ProbeOutcome::HoldsOnProbe
        } else {
            ProbeOutcome::NotProbed
        }
    };
    let bounded = trend(hi_full >= GROWTH_FACTOR * hi_half, hi_full >= limit);
    let bounded_away = trend(lo_half >= GROWTH_FACTOR * lo_full, lo_full <= 1.0 / limit);

    let coherent = {
        let small = factor_scaling(&corner(generator, half.max(1)), tol)?;
        let large = factor_scaling(&a, tol)?;
        let g = large.values()[0] / small.values()[0];
        small
            .values()
            .iter()
            .zip(large.values())
            .all(|(s, l)| (s * g - l).norm() <= tol.bound(l.norm()))
    };

    Ok(L2FactorReport {
        scaling,
        ratio,
        ratio_within_limit,
        bounded,
        bounded_away,
        coherent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactBoundReport {
    /// Largest `‖A_n ∘ T‖ / ‖T‖` over all probes.
    pub max_ratio: f64,
    /// `max |a_ij|` over the corner.
    pub coefficient_sup: f64,
    pub elementary_max: f64,
    pub random_max: f64,
}

/// Largest `‖A_n ∘ T‖ / ‖T‖` over every matrix unit `T = E_ij` and `trials`
/// seeded random rank-one `T = u v*`. For rank-one `T` the ratio never
/// exceeds the coefficient supremum.
pub fn compact_bound_check(
    generator: &CoefficientGenerator,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<CompactBoundReport> {
    let a = corner(generator, n);
    let mut elementary_max: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let t = ComplexMatrix::matrix_unit(n, i, j);
            elementary_max = elementary_max.max(operator_norm(&schur_product(&a, &t)?)?);
        }
    }
    let mut random_max: f64 = 0.0;
    for trial in 0..trials {
        let mut rng = seeded_rng(seed, trial as u64);
        let u = gaussian_vector(&mut rng, n);
        let v = gaussian_vector(&mut rng, n);
        let t = ComplexMatrix::from_fn(n, n, |i, j| u[i] * v[j].conj());
        let t_norm = norm2(&u) * norm2(&v);
        if t_norm == 0.0 {
            continue;
        }
        random_max = random_max.max(operator_norm(&schur_product(&a, &t)?)? / t_norm);
    }
    Ok(CompactBoundReport {
        max_ratio: elementary_max.max(random_max),
        coefficient_sup: a.max_abs_entry(),
        elementary_max,
        random_max,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnboundednessWitness {
    /// Unit vector supported on the first `n` coordinates.
    pub x: Vec<C64>,
    /// `‖A_n x‖`.
    pub lower_bound: f64,
    pub iterations: usize,
}

const MAX_POWER_ITERATIONS: usize = 200;

/// Unit vector `x` with `A_n x = n x` for a multiplicative unit-diagonal
/// corner, so that `‖A x‖ ≥ n` for the infinite matrix once `x` is padded
/// with zeros.
pub fn unboundedness_witness(
    generator: &CoefficientGenerator,
    n: usize,
    tol: Tolerance,
) -> Result<UnboundednessWitness> {
    if n == 0 {
        return Err(SchurError::InvalidDimensions("n must be positive".into()));
    }
    let a = corner(generator, n);
    let check = check_cocycle(&a, tol)?;
    if !check.pass {
        return Err(SchurError::NotMultiplicative {
            condition: "cocycle".into(),
            residual: check.residual,
        });
    }

    // Power iteration from the heaviest column; the corner has rank one, so
    // the first step already lands on the eigenvector for n.
    let start = (0..n)
        .map(|j| (j, norm2(&a.column(j))))
        .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc })
        .0;
    let mut x = normalized(a.column(start));
    for iteration in 1..=MAX_POWER_ITERATIONS {
        let y = a.matvec(&x)?;
        let rayleigh: C64 = x.iter().zip(&y).map(|(xi, yi)| xi.conj() * yi).sum();
        let residual = norm2(&y.iter().zip(&x).map(|(yi, xi)| yi - rayleigh * xi).collect::<Vec<_>>());
        let y_norm = norm2(&y);
        if residual <= tol.bound(y_norm) {
            return Ok(UnboundednessWitness {
                lower_bound: y_norm,
                x,
                iterations: iteration,
            });
        }
        if y_norm == 0.0 {
            break;
        }
        x = normalized(y);
    }
    Err(SchurError::Convergence {
        routine: "power iteration",
        iterations: MAX_POWER_ITERATIONS,
    })
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalized(v: Vec<C64>) -> Vec<C64> {
    let s = norm2(&v);
    v.into_iter().map(|z| z / s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::gaussian_matrix;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn corner_examples() {
        assert_eq!(
            corner(&CoefficientGenerator::toeplitz(c(1.0, 0.0)), 3),
            ComplexMatrix::ones(3)
        );
        let g = CoefficientGenerator::from_scaling_fn("i", |i| c(i as f64, 0.0));
        assert_eq!(
            corner(&g, 2),
            ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[2.0, 1.0]]).unwrap()
        );
        let t = corner(&CoefficientGenerator::toeplitz(c(0.0, 1.0)), 2);
        let want =
            ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(1.0, 0.0)]]).unwrap();
        assert!(t.sub(&want).unwrap().max_abs_entry() < 1e-15);
    }

    #[test]
    fn generator_is_deterministic() {
        let g = CoefficientGenerator::toeplitz(c(0.6, 0.8));
        assert_eq!(corner(&g, 9), corner(&g, 9));
        assert_eq!(g.declared_bound(), Some(1.0));
    }

    #[test]
    fn bounded_scaling_is_not_flagged() {
        let g =
            CoefficientGenerator::from_scaling_fn("2+(-1)^i", |i| c(2.0 + if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
        let r = l2_multiplier_factor_check(&g, 40, Tolerance::default()).unwrap();
        assert!((r.ratio - 3.0).abs() < 1e-14);
        assert_eq!(r.bounded, ProbeOutcome::HoldsOnProbe);
        assert_eq!(r.bounded_away, ProbeOutcome::HoldsOnProbe);
        assert!(r.ratio_within_limit);
        assert!(r.coherent);
    }

    #[test]
    fn harmonic_scaling_is_flagged() {
        let g = CoefficientGenerator::from_scaling_fn("1/i", |i| c(1.0 / i as f64, 0.0));
        let r = l2_multiplier_factor_check(&g, 100, Tolerance::default()).unwrap();
        assert!((r.ratio - 100.0).abs() < 1e-10);
        assert_eq!(r.bounded, ProbeOutcome::HoldsOnProbe);
        assert_eq!(r.bounded_away, ProbeOutcome::Refuted);
        let smaller = l2_multiplier_factor_check(&g, 50, Tolerance::default()).unwrap();
        assert!(r.ratio > smaller.ratio);
    }

    #[test]
    fn geometric_toeplitz_is_flagged() {
        let g = CoefficientGenerator::toeplitz(c(2.0, 0.0));
        let r = l2_multiplier_factor_check(&g, 20, Tolerance::default()).unwrap();
        for (i, f) in r.scaling.values().iter().enumerate() {
            assert!((f - c(2f64.powi(-(i as i32)), 0.0)).norm() < 1e-15);
        }
        assert!((r.ratio - 2f64.powi(19)).abs() < 1e-6);
        assert_eq!(r.bounded_away, ProbeOutcome::Refuted);
    }

    #[test]
    fn l2_check_rejects_small_probe_and_non_multiplicative() {
        let tol = Tolerance::default();
        let g = CoefficientGenerator::constant(c(2.0, 0.0));
        assert!(matches!(
            l2_multiplier_factor_check(&g, 3, tol),
            Err(SchurError::NotMultiplicative { .. })
        ));
        assert!(matches!(
            l2_multiplier_factor_check(&CoefficientGenerator::toeplitz(c(1.0, 0.0)), 1, tol),
            Err(SchurError::Precondition(_))
        ));
        let tiny = l2_multiplier_factor_check(&CoefficientGenerator::toeplitz(c(1.0, 0.0)), 2, tol).unwrap();
        assert_eq!(tiny.bounded, ProbeOutcome::NotProbed);
    }

    #[test]
    fn compact_bound_examples() {
        let g = CoefficientGenerator::constant(c(0.0, -3.0));
        let r = compact_bound_check(&g, 4, 0, 0).unwrap();
        assert!((r.elementary_max - 3.0).abs() < 1e-14);

        let g = CoefficientGenerator::toeplitz(c(0.0, 1.0));
        let r = compact_bound_check(&g, 5, 0, 0).unwrap();
        assert!((r.elementary_max - 1.0).abs() < 1e-14);

        let mut rng = seeded_rng(17, 0);
        let g = CoefficientGenerator::table(gaussian_matrix(&mut rng, 8, 8));
        let r = compact_bound_check(&g, 8, 1000, 4).unwrap();
        assert!(r.max_ratio <= r.coefficient_sup + 1e-10);
        // Elementary probes attain the supremum.
        assert!((r.elementary_max - r.coefficient_sup).abs() < 1e-12);
    }

    #[test]
    fn witness_examples() {
        let tol = Tolerance::default();
        let w = unboundedness_witness(&CoefficientGenerator::toeplitz(c(-1.0, 0.0)), 4, tol).unwrap();
        assert!(w.lower_bound >= 4.0 - 1e-12);
        // x ∝ ((-1)^i)/2 up to a global phase.
        let phase = w.x[0] / w.x[0].norm();
        for (i, xi) in w.x.iter().enumerate() {
            let want = c(if i % 2 == 0 { 0.5 } else { -0.5 }, 0.0) * phase;
            assert!((xi - want).norm() < 1e-14);
        }

        let w = unboundedness_witness(&CoefficientGenerator::toeplitz(c(1.0, 0.0)), 10, tol).unwrap();
        assert!((w.lower_bound - 10.0).abs() < 1e-12);
        for xi in &w.x {
            assert!((xi - c(1.0 / 10f64.sqrt(), 0.0)).norm() < 1e-14);
        }

        let g = CoefficientGenerator::from_scaling_fn("e^(2πi·i/7)", |i| {
            C64::from_polar(1.0, std::f64::consts::TAU * i as f64 / 7.0)
        });
        let w = unboundedness_witness(&g, 50, tol).unwrap();
        assert!(w.lower_bound >= 50.0 * (1.0 - 1e-12));
    }

    #[test]
    fn witness_rejects_non_multiplicative_corner() {
        let mut rng = seeded_rng(2, 0);
        let g = CoefficientGenerator::table(gaussian_matrix(&mut rng, 6, 6));
        assert!(matches!(
            unboundedness_witness(&g, 6, Tolerance::default()),
            Err(SchurError::NotMultiplicative { .. })
        ));
    }
}

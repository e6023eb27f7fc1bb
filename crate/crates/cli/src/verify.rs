//! Seeded property-verification suites.
//!
//! Trial `t` of a suite draws every random quantity from the stream
//! `(suite index << 32) | t` under the user seed, so a report is a pure
//! function of `(suite, trials, seed, tolerance)`.

use std::collections::HashSet;
use std::f64::consts::TAU;
use std::time::Instant;

use rand::Rng;
use schurlab::random::{
    gaussian_matrix, random_scaling, random_tree, random_unimodular_scaling, seeded_rng, unimodular, SeededRng,
};
use schurlab::{
    build_from_scaling, certify_multiplicative, certify_star_multiplicative, check_cocycle, compact_bound_check,
    complete_partial, corner, correlation_check, enumerate_real_positive, enumerate_sign_matrices, factor_scaling,
    group_product, isometry_check, norm_equals_dimension, operator_norm, projection_check, schur_inverse,
    schur_map_norm, schur_product, toeplitz_member, torus_param, unboundedness_witness, CoefficientGenerator,
    CompletionStatus, ComplexMatrix, PartialMatrix, ScalingVector, Tolerance, C64,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Largest entry error accepted when a spanning-tree specification is
/// completed back to the matrix it was cut from.
pub const RECONSTRUCTION_LIMIT: f64 = 1e-9;
/// Slack allowed above the coefficient supremum in the compact-operator bound.
pub const COMPACT_BOUND_SLACK: f64 = 1e-10;
/// Relative size of the entry perturbation that turns a consistent
/// specification into an inconsistent one.
pub const COMPLETION_PERTURBATION: f64 = 1e-3;
/// Random product pairs drawn per certificate.
const PRODUCT_TRIALS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Thm21,
    Thm24,
    Prop26,
    Group,
    Torus,
    Completion,
    Schatten,
    Extreme,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 8] = [
        Suite::Thm21,
        Suite::Thm24,
        Suite::Prop26,
        Suite::Group,
        Suite::Torus,
        Suite::Completion,
        Suite::Schatten,
        Suite::Extreme,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm21 => "thm21",
            Suite::Thm24 => "thm24",
            Suite::Prop26 => "prop26",
            Suite::Group => "group",
            Suite::Torus => "torus",
            Suite::Completion => "completion",
            Suite::Schatten => "schatten",
            Suite::Extreme => "extreme",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    /// `suite/trial/check`.
    pub case: String,
    /// SHA-256 of the case's input matrix.
    pub digest: String,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceEcho {
    pub rel: f64,
    pub abs: f64,
}

impl From<Tolerance> for ToleranceEcho {
    fn from(t: Tolerance) -> Self {
        Self {
            rel: t.rel(),
            abs: t.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: ToleranceEcho,
    pub failures: Vec<Failure>,
    /// Wall-clock seconds.
    pub elapsed: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run_suite(suite: Suite, trials: usize, seed: u64, tol: Tolerance) -> VerifyReport {
    let start = Instant::now();
    let suites: &[Suite] = if suite == Suite::All {
        &Suite::INDIVIDUAL
    } else {
        std::slice::from_ref(&suite)
    };
    let mut failures = Vec::new();
    for &s in suites {
        let index = Suite::INDIVIDUAL
            .iter()
            .position(|&x| x == s)
            .expect("individual suite") as u64;
        for t in 0..trials {
            let mut trial = Trial {
                suite: s.name(),
                index: t,
                rng: seeded_rng(seed, (index << 32) | t as u64),
                seed,
                tol,
                input: None,
                failures: &mut failures,
            };
            let outcome = match s {
                Suite::Thm21 => thm21(&mut trial),
                Suite::Thm24 => thm24(&mut trial),
                Suite::Prop26 => prop26(&mut trial),
                Suite::Group => group(&mut trial),
                Suite::Torus => torus(&mut trial),
                Suite::Completion => completion(&mut trial),
                Suite::Schatten => schatten(&mut trial),
                Suite::Extreme => extreme(&mut trial),
                Suite::All => unreachable!("expanded above"),
            };
            if let Err(e) = outcome {
                trial.fail(&format!("error: {e}"), f64::INFINITY);
            }
        }
    }
    VerifyReport {
        suite,
        trials,
        seed,
        tolerance: tol.into(),
        failures,
        elapsed: start.elapsed().as_secs_f64(),
    }
}

struct Trial<'a> {
    suite: &'static str,
    index: usize,
    rng: SeededRng,
    seed: u64,
    tol: Tolerance,
    /// The matrix the next failure is attributed to.
    input: Option<ComplexMatrix>,
    failures: &'a mut Vec<Failure>,
}

impl Trial<'_> {
    fn input(&mut self, a: &ComplexMatrix) {
        self.input = Some(a.clone());
    }

    fn fail(&mut self, check: &str, residual: f64) {
        let digest = match &self.input {
            Some(a) => digest(a),
            None => hex::encode(Sha256::digest(format!("{}/{}/{}", self.suite, self.seed, self.index))),
        };
        self.failures.push(Failure {
            case: format!("{}/{}/{check}", self.suite, self.index),
            digest,
            residual,
        });
    }

    fn expect(&mut self, ok: bool, check: &str, residual: f64) {
        if !ok {
            self.fail(check, residual);
        }
    }

    /// A nonzero complex factor `1 + δ` with `|δ|` in `[0.1, 0.5]`.
    fn perturbation(&mut self) -> C64 {
        let r = self.rng.random_range(0.1..=0.5);
        C64::new(1.0, 0.0) + C64::from_polar(r, self.rng.random::<f64>() * TAU)
    }

    /// Scaling with one modulus 3 and the rest in `[1, 2]`, so `|f|` is far
    /// from constant.
    fn uneven_scaling(&mut self, n: usize) -> ScalingVector {
        let big = self.rng.random_range(0..n);
        let values = (0..n)
            .map(|i| {
                let modulus = if i == big {
                    3.0
                } else {
                    self.rng.random_range(1.0..=2.0)
                };
                unimodular(&mut self.rng) * modulus
            })
            .collect();
        ScalingVector::new(values).expect("moduli are positive")
    }

    fn distinct_pair(&mut self, n: usize) -> (usize, usize) {
        let i = self.rng.random_range(0..n);
        let j = (i + self.rng.random_range(1..n)) % n;
        (i, j)
    }
}

/// SHA-256 over the shape and the IEEE bits of every entry, little-endian.
pub fn digest(a: &ComplexMatrix) -> String {
    let mut h = Sha256::new();
    h.update((a.rows() as u64).to_le_bytes());
    h.update((a.cols() as u64).to_le_bytes());
    for z in a.as_slice() {
        h.update(z.re.to_bits().to_le_bytes());
        h.update(z.im.to_bits().to_le_bytes());
    }
    hex::encode(h.finalize())
}

type TrialResult = schurlab::Result<()>;

/// Multiplicative instances pass every condition; instances with one
/// diagonal and one off-diagonal entry perturbed fail every condition.
fn thm21(t: &mut Trial) -> TrialResult {
    let n = 1 + (t.index / 2) % 12;
    let mut a = build_from_scaling(&random_scaling(&mut t.rng, n, 2.0));
    let positive = t.index.is_multiple_of(2);
    if !positive {
        let k = t.rng.random_range(0..n);
        a[(k, k)] *= t.perturbation();
        if n > 1 {
            let (i, j) = t.distinct_pair(n);
            a[(i, j)] *= t.perturbation();
        }
    }
    t.input(&a);
    let cert = certify_multiplicative(&a, t.tol, PRODUCT_TRIALS, t.seed ^ t.index as u64)?;
    for (condition, r) in &cert.conditions {
        let margin = r.residual / r.threshold;
        if positive {
            t.expect(r.pass, &format!("positive/{}", condition.label()), margin);
        } else {
            t.expect(!r.pass, &format!("negative/{}", condition.label()), margin);
        }
    }
    if let (true, Some(f)) = (positive, &cert.scaling) {
        let err = build_from_scaling(f).sub(&a)?.max_abs_entry();
        t.expect(err <= t.tol.bound(a.max_abs_entry()), "positive/factor_round_trip", err);
    }
    Ok(())
}

/// Unimodular scalings pass the six *-conditions; uneven scalings and
/// Hermitian phase twists of unimodular instances fail all six.
fn thm24(t: &mut Trial) -> TrialResult {
    let family = (t.index / 2) % 2;
    let (a, label) = match (t.index % 2, family) {
        (0, _) => {
            let n = 1 + (t.index / 2) % 12;
            (
                build_from_scaling(&random_unimodular_scaling(&mut t.rng, n)),
                "positive",
            )
        }
        (_, 0) => {
            let n = 2 + (t.index / 2) % 11;
            (build_from_scaling(&t.uneven_scaling(n)), "uneven")
        }
        _ => {
            let n = 3 + (t.index / 2) % 10;
            let mut a = build_from_scaling(&random_unimodular_scaling(&mut t.rng, n));
            let (i, j) = t.distinct_pair(n);
            let sign = if t.rng.random::<bool>() { 1.0 } else { -1.0 };
            let twist = C64::from_polar(1.0, sign * t.rng.random_range(0.3..=1.0));
            a[(i, j)] *= twist;
            a[(j, i)] *= twist.conj();
            (a, "twisted")
        }
    };
    t.input(&a);
    let cert = certify_star_multiplicative(&a, t.tol)?;
    let positive = label == "positive";
    for (condition, r) in &cert.conditions {
        t.expect(
            r.pass == positive,
            &format!("{label}/{}", condition.label()),
            r.residual,
        );
    }
    Ok(())
}

/// `‖A‖ = n`, `A/n` an orthogonal projection, `‖S_A‖ = 1` and the
/// *-battery agree, and hold exactly for unimodular scalings.
fn prop26(t: &mut Trial) -> TrialResult {
    let n = 2 + t.index % 11;
    let unimodular = t.index.is_multiple_of(2);
    let f = if unimodular {
        random_unimodular_scaling(&mut t.rng, n)
    } else {
        t.uneven_scaling(n)
    };
    let a = build_from_scaling(&f);
    t.input(&a);
    let nf = n as f64;
    let norm_defect = (operator_norm(&a)? - nf).abs() / nf;
    let verdicts = [
        ("star", certify_star_multiplicative(&a, t.tol)?.verdict),
        ("norm_equals_n", norm_equals_dimension(&a, t.tol)?),
        ("projection", projection_check(&a, t.tol)?),
        ("map_norm_one", (schur_map_norm(&a, t.tol)? - 1.0).abs() <= t.tol.unit()),
    ];
    for (name, v) in verdicts {
        t.expect(v == unimodular, name, norm_defect);
    }
    Ok(())
}

/// Enumeration count and distinctness, *-certification of sampled members,
/// positivity only for `J`, Toeplitz subgroup closure and group laws in
/// `L^n`.
fn group(t: &mut Trial) -> TrialResult {
    let n = 1 + t.index % 12;
    let members: Vec<_> = enumerate_sign_matrices(n)?.collect();
    let expected = 1usize << (n - 1);
    t.expect(members.len() == expected, "enumeration_count", members.len() as f64);
    let distinct: HashSet<_> = members.iter().map(|m| m.signs()).collect();
    t.expect(
        distinct.len() == expected,
        "enumeration_distinct",
        distinct.len() as f64,
    );
    for _ in 0..4 {
        let m = members[t.rng.random_range(0..members.len())].to_matrix();
        t.input(&m);
        let cert = certify_star_multiplicative(&m, t.tol)?;
        t.expect(cert.verdict, "sign_matrix_star", 1.0);
    }
    let positive = enumerate_real_positive(n)?
        .filter(|m| m.as_slice().iter().all(|z| z.re > 0.0))
        .collect::<Vec<_>>();
    t.expect(
        positive == vec![ComplexMatrix::ones(n)],
        "only_ones_positive",
        positive.len() as f64,
    );

    let toeplitz_parameter = |rng: &mut SeededRng| {
        C64::from_polar(
            (rng.random_range(-1.0..=1.0) * 0.5f64.ln()).exp(),
            rng.random::<f64>() * TAU,
        )
    };
    let lambda = toeplitz_parameter(&mut t.rng);
    let mu = toeplitz_parameter(&mut t.rng);
    let tl = toeplitz_member(lambda, n)?;
    t.input(&tl);
    let product = group_product(&tl, &toeplitz_member(mu, n)?, t.tol)?;
    let closed = toeplitz_member(lambda * mu, n)?;
    let err = product.sub(&closed)?.max_abs_entry();
    t.expect(err <= t.tol.bound(closed.max_abs_entry()), "toeplitz_closure", err);

    let a = build_from_scaling(&random_scaling(&mut t.rng, n, 2.0));
    let b = build_from_scaling(&random_scaling(&mut t.rng, n, 2.0));
    t.input(&a);
    let ab = group_product(&a, &b, t.tol)?;
    let ba = group_product(&b, &a, t.tol)?;
    t.expect(ab == ba, "commutative", ab.sub(&ba)?.max_abs_entry());
    let closure = check_cocycle(&ab, t.tol)?;
    t.expect(closure.pass, "closure", closure.residual);
    let inv = schur_inverse(&a, t.tol)?;
    let inv_check = check_cocycle(&inv, t.tol)?;
    t.expect(inv_check.pass, "inverse_closure", inv_check.residual);
    let unit = schur_product(&a, &inv)?.sub(&ComplexMatrix::ones(n))?.max_abs_entry();
    t.expect(unit <= t.tol.unit(), "inverse", unit);
    Ok(())
}

/// The torus parametrization is a homomorphism into the *-preserving
/// multiplicative matrices, with rank-one correlation images.
fn torus(t: &mut Trial) -> TrialResult {
    let n = 1 + t.index % 12;
    let z: Vec<C64> = (1..n).map(|_| unimodular(&mut t.rng)).collect();
    let w: Vec<C64> = (1..n).map(|_| unimodular(&mut t.rng)).collect();
    let zw: Vec<C64> = z.iter().zip(&w).map(|(p, q)| p * q).collect();
    let zc: Vec<C64> = z.iter().map(|p| p.conj()).collect();
    let a = torus_param(&z, t.tol)?;
    t.input(&a);
    let product = group_product(&a, &torus_param(&w, t.tol)?, t.tol)?;
    let err = product.sub(&torus_param(&zw, t.tol)?)?.max_abs_entry();
    t.expect(err <= t.tol.unit(), "homomorphism", err);
    let err = schur_inverse(&a, t.tol)?
        .sub(&torus_param(&zc, t.tol)?)?
        .max_abs_entry();
    t.expect(err <= t.tol.unit(), "inverse_is_conjugate", err);
    let cert = certify_star_multiplicative(&a, t.tol)?;
    t.expect(cert.verdict, "star", 1.0);
    let verdict = correlation_check(&a, t.tol)?;
    t.expect(verdict.rank_one_extreme, "rank_one_extreme", verdict.rank as f64);
    Ok(())
}

/// Spanning-tree specifications complete to the source matrix; a single
/// perturbed redundant entry is caught on a cycle through it.
fn completion(t: &mut Trial) -> TrialResult {
    let reconstruct = t.index.is_multiple_of(2);
    let star = t.index.is_multiple_of(4);
    let n = if reconstruct {
        1 + (t.index / 2) % 12
    } else {
        2 + (t.index / 2) % 11
    };
    let f = if star {
        random_unimodular_scaling(&mut t.rng, n)
    } else {
        random_scaling(&mut t.rng, n, 2.0)
    };
    let a = build_from_scaling(&f);
    t.input(&a);
    let mut p = PartialMatrix::empty(n);
    for (u, v) in random_tree(&mut t.rng, n) {
        let (i, j) = if t.rng.random::<bool>() { (u, v) } else { (v, u) };
        p.set(i, j, a[(i, j)])?;
    }
    if reconstruct {
        let report = complete_partial(&p, t.tol, star)?;
        t.expect(report.status == CompletionStatus::Completed, "completed", 1.0);
        if let Some(m) = report.matrix {
            let err = m.sub(&a)?.max_abs_entry();
            t.expect(err <= RECONSTRUCTION_LIMIT, "reconstruction", err);
        }
        return Ok(());
    }
    let (i, j) = loop {
        let (i, j) = t.distinct_pair(n);
        if p.get(i, j).is_none() {
            break (i, j);
        }
    };
    p.set(i, j, a[(i, j)] * (1.0 + COMPLETION_PERTURBATION))?;
    let report = complete_partial(&p, t.tol, false)?;
    t.expect(
        report.status == CompletionStatus::Inconsistent && !report.violations.is_empty(),
        "flagged",
        1.0,
    );
    for v in &report.violations {
        t.expect(
            cycle_uses_edge(&v.cycle, i + 1, j + 1),
            "cycle_through_edge",
            v.residual,
        );
    }
    Ok(())
}

/// Whether the closed 1-based cycle traverses the edge `{i, j}`.
pub fn cycle_uses_edge(cycle: &[usize], i: usize, j: usize) -> bool {
    let k = cycle.len();
    (0..k).any(|s| {
        let (x, y) = (cycle[s], cycle[(s + 1) % k]);
        (x, y) == (i, j) || (x, y) == (j, i)
    })
}

/// Rank-one compacts never see more than the coefficient supremum; unit
/// diagonal multiplicative generators have corners of norm `n`, coherent
/// factorizations and, when Hermitian, unimodular coefficients.
fn schatten(t: &mut Trial) -> TrialResult {
    let m = 1 + t.index % 8;
    let table = gaussian_matrix(&mut t.rng, m, m);
    t.input(&table);
    let report = compact_bound_check(&CoefficientGenerator::table(table), m, 4, t.seed ^ t.index as u64)?;
    let excess = report.max_ratio - report.coefficient_sup;
    t.expect(excess <= COMPACT_BOUND_SLACK, "compact_bound", excess);

    let generator = if t.index.is_multiple_of(2) {
        CoefficientGenerator::toeplitz(unimodular(&mut t.rng))
    } else {
        let rate = t.rng.random_range(0.1..3.0);
        CoefficientGenerator::from_scaling_fn(format!("e^(i·{rate}·√k)"), move |k| {
            C64::from_polar(1.0, rate * (k as f64).sqrt())
        })
    };
    let n = 2usize << (t.index % 9);
    let a = corner(&generator, n);
    t.input(&a);
    let witness = unboundedness_witness(&generator, n, t.tol)?;
    let nf = n as f64;
    t.expect(
        witness.lower_bound >= nf - t.tol.bound(nf),
        "witness",
        nf - witness.lower_bound,
    );

    let unimodular_defect = a.as_slice().iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    t.expect(
        unimodular_defect <= t.tol.unit(),
        "hermitian_unimodular",
        unimodular_defect,
    );

    let half = (n / 2).min(32);
    let small = factor_scaling(&corner(&generator, half), t.tol)?;
    let large = factor_scaling(&corner(&generator, 2 * half), t.tol)?;
    let scale = large.values()[0] / small.values()[0];
    let drift = small
        .values()
        .iter()
        .zip(large.values())
        .map(|(s, l)| (s * scale - l).norm() / l.norm())
        .fold(0.0, f64::max);
    t.expect(drift <= t.tol.unit(), "corner_coherence", drift);
    Ok(())
}

/// Rank-one correlation matrices are extreme, midpoints of distinct ones are
/// not, identities of size above one are not, and `I - 2A/n` is unitary.
fn extreme(t: &mut Trial) -> TrialResult {
    let n = 2 + t.index % 5;
    let a = build_from_scaling(&random_unimodular_scaling(&mut t.rng, n));
    let b = build_from_scaling(&random_unimodular_scaling(&mut t.rng, n));
    t.input(&a);
    for m in [&a, &b] {
        let v = correlation_check(m, t.tol)?;
        t.expect(v.rank_one_extreme, "rank_one_extreme", v.rank as f64);
    }
    if a.sub(&b)?.max_abs_entry() > 1e-6 {
        let mid = a.add(&b)?.scale(C64::new(0.5, 0.0));
        let v = correlation_check(&mid, t.tol)?;
        t.expect(
            v.rank >= 2 && !v.rank_one_extreme,
            "midpoint_not_extreme",
            v.rank as f64,
        );
    }
    let id = correlation_check(&ComplexMatrix::identity(n), t.tol)?;
    t.expect(
        id.is_correlation && !id.rank_one_extreme,
        "identity_not_extreme",
        id.rank as f64,
    );

    let nf = n as f64;
    let p = a.scale(C64::new(1.0 / nf, 0.0));
    t.expect(projection_check(&a, t.tol)?, "projection", 1.0);
    let u = ComplexMatrix::identity(n).sub(&p.scale(C64::new(2.0, 0.0)))?;
    let v = isometry_check(&u, t.tol)?;
    let scalar = v.scalar_multiple.unwrap_or(f64::NAN);
    t.expect(
        v.isometry && v.coisometry && (scalar - 1.0).abs() <= t.tol.unit(),
        "reflection_unitary",
        (scalar - 1.0).abs(),
    );
    Ok(())
}

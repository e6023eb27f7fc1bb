//! *-preserving multiplicative Schur maps.
//!
//! For a unital Schur map the following coincide: multiplicative and
//! *-preserving; a completely positive isomorphism; `A` rank one and normal;
//! `A` rank one with unimodular entries; `A` self-adjoint with spectrum
//! `{n, 0, ..}` and `‖S_A‖ = 1`; `A` and `A^[-1]` both positive. Complete
//! positivity of a Schur map is positivity of its coefficient matrix, so no
//! Choi matrix is ever formed.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Result, SchurError};
use crate::matrix::{schur_inverse, ComplexMatrix, Tolerance, C64};
use crate::multiplicative::{check_cocycle, schur_map_norm};
use crate::spectral::{eigenvalues, hermitian_eigenvalues, numerical_rank, operator_norm};

/// Floor on the relative threshold of the normality test; the commutator
/// `AA* - A*A` compounds two products.
pub const NORMALITY_REL: f64 = 1e-8;

/// `A` Hermitian (`‖A - A*‖_F ≤ tol·‖A‖_F`) with smallest eigenvalue at least
/// `-tol·‖A‖₂`.
pub fn is_positive_semidefinite(a: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    Ok(psd_defect(a, tol)?.0)
}

/// Returns `(is_psd, defect)` where the defect is the larger of the Hermitian
/// defect and the negative part of the smallest eigenvalue.
fn psd_defect(a: &ComplexMatrix, tol: Tolerance) -> Result<(bool, f64)> {
    a.require_square("is_positive_semidefinite")?;
    let herm = a.hermitian_defect();
    if herm > tol.bound(a.frobenius_norm()) {
        return Ok((false, herm));
    }
    let ev = hermitian_eigenvalues(a)?;
    let lo = ev[0];
    let hi = ev[ev.len() - 1];
    let scale = lo.abs().max(hi.abs());
    let neg = (-lo).max(0.0);
    Ok((neg <= tol.bound(scale), herm.max(neg)))
}

/// Every entry has modulus within `tol.unit()` of 1.
pub fn is_unimodular(a: &ComplexMatrix, tol: Tolerance) -> bool {
    unimodular_defect(a) <= tol.unit()
}

fn unimodular_defect(a: &ComplexMatrix) -> f64 {
    a.as_slice().iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max)
}

/// `A/n` is an orthogonal projection: idempotent and Hermitian.
pub fn projection_check(a: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    let n = a.require_square("projection_check")?;
    let p = a.scale(C64::new(1.0 / n as f64, 0.0));
    let scale = p.frobenius_norm();
    let idem = p.matmul(&p)?.sub(&p)?.frobenius_norm();
    Ok(idem <= tol.bound(scale) && p.hermitian_defect() <= tol.bound(scale))
}

/// `|‖A‖ - n| ≤ tol·n`.
pub fn norm_equals_dimension(a: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    let n = a.require_square("norm_equals_dimension")? as f64;
    Ok((operator_norm(a)? - n).abs() <= tol.bound(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StarCondition {
    StarAndMultiplicative,
    CpIsomorphismProxy,
    RankOneNormalUnitDiag,
    RankOneUnimodularUnitDiag,
    SelfadjointSpectrumNorm,
    SchurPairPositive,
}

impl StarCondition {
    pub const ALL: [StarCondition; 6] = [
        StarCondition::StarAndMultiplicative,
        StarCondition::CpIsomorphismProxy,
        StarCondition::RankOneNormalUnitDiag,
        StarCondition::RankOneUnimodularUnitDiag,
        StarCondition::SelfadjointSpectrumNorm,
        StarCondition::SchurPairPositive,
    ];

    pub fn label(self) -> &'static str {
        match self {
            StarCondition::StarAndMultiplicative => "star_and_multiplicative",
            StarCondition::CpIsomorphismProxy => "cp_isomorphism_proxy",
            StarCondition::RankOneNormalUnitDiag => "rank_one_normal_unit_diag",
            StarCondition::RankOneUnimodularUnitDiag => "rank_one_unimodular_unit_diag",
            StarCondition::SelfadjointSpectrumNorm => "selfadjoint_spectrum_norm",
            StarCondition::SchurPairPositive => "schur_pair_positive",
        }
    }
}

impl fmt::Display for StarCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarResult {
    pub pass: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarCertificate {
    pub verdict: bool,
    pub conditions: BTreeMap<StarCondition, StarResult>,
    pub inconsistent: bool,
    pub tolerance: Tolerance,
}

impl StarCertificate {
    pub fn condition(&self, c: StarCondition) -> StarResult {
        self.conditions[&c]
    }

    pub fn failed(&self) -> Vec<StarCondition> {
        self.conditions
            .iter()
            .filter(|(_, r)| !r.pass)
            .map(|(c, _)| *c)
            .collect()
    }
}

/// Runs the six-way battery on a unit-diagonal `a`.
pub fn certify_star_multiplicative(a: &ComplexMatrix, tol: Tolerance) -> Result<StarCertificate> {
    let n = a.require_square("certify_star_multiplicative")?;
    let nf = n as f64;
    let diag = a.unit_diagonal_defect();
    if diag > tol.unit() {
        return Err(SchurError::Precondition(format!(
            "unital Schur map required: diagonal deviates from 1 by {diag:e}"
        )));
    }
    let fro = a.frobenius_norm();
    let herm = a.hermitian_defect();
    let hermitian = herm <= tol.bound(fro);
    let cocycle = check_cocycle(a, tol)?;
    let rank_one = numerical_rank(a, tol)? == 1;

    let mut conditions = BTreeMap::new();
    conditions.insert(
        StarCondition::StarAndMultiplicative,
        StarResult {
            pass: cocycle.pass && hermitian,
            residual: cocycle.residual.max(herm),
        },
    );

    let (a_psd, a_defect) = psd_defect(a, tol)?;
    let (inv_psd, inv_defect, inv_diag) = match schur_inverse(a, tol) {
        Ok(inv) => {
            let (ok, d) = psd_defect(&inv, tol)?;
            (ok, d, inv.unit_diagonal_defect())
        }
        // A zero coefficient: S_A has a kernel and no Schur inverse.
        Err(SchurError::ZeroEntry { .. }) => (false, 1.0, 1.0),
        Err(e) => return Err(e),
    };
    conditions.insert(
        StarCondition::CpIsomorphismProxy,
        StarResult {
            pass: a_psd && inv_psd,
            residual: a_defect.max(inv_defect),
        },
    );

    let commutator = {
        let aa = a.matmul(&a.adjoint())?;
        let a_a = a.adjoint().matmul(a)?;
        aa.sub(&a_a)?.frobenius_norm()
    };
    let normal = commutator <= tol.rel().max(NORMALITY_REL) * fro * fro;
    conditions.insert(
        StarCondition::RankOneNormalUnitDiag,
        StarResult {
            pass: rank_one && normal,
            residual: commutator.max(diag),
        },
    );

    let unimod = unimodular_defect(a);
    conditions.insert(
        StarCondition::RankOneUnimodularUnitDiag,
        StarResult {
            pass: rank_one && unimod <= tol.unit(),
            residual: unimod.max(diag),
        },
    );

    let ev = eigenvalues(a)?;
    let spec = ev
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
    let spec_ok = spec <= tol.bound(nf * fro);
    let (norm_ok, norm_defect) = match schur_map_norm(a, tol) {
        Ok(v) => ((v - 1.0).abs() <= tol.unit(), (v - 1.0).abs()),
        Err(SchurError::NotMultiplicative { .. }) | Err(SchurError::ZeroEntry { .. }) => (false, 1.0),
        Err(e) => return Err(e),
    };
    conditions.insert(
        StarCondition::SelfadjointSpectrumNorm,
        StarResult {
            pass: hermitian && spec_ok && norm_ok,
            residual: herm.max(spec).max(norm_defect),
        },
    );

    conditions.insert(
        StarCondition::SchurPairPositive,
        StarResult {
            pass: a_psd && inv_psd && inv_diag <= tol.unit(),
            residual: a_defect.max(inv_defect).max(inv_diag),
        },
    );

    let passes = conditions.values().filter(|r| r.pass).count();
    let verdict = passes == conditions.len();
    Ok(StarCertificate {
        verdict,
        inconsistent: passes != 0 && !verdict,
        conditions,
        tolerance: tol,
    })
}

//! Correlation matrices and the isometry test.

use crate::error::Result;
use crate::matrix::{ComplexMatrix, Tolerance, C64};
use crate::spectral::numerical_rank;
use crate::star::is_positive_semidefinite;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrelationVerdict {
    /// Positive semidefinite with unit diagonal.
    pub is_correlation: bool,
    pub rank: usize,
    /// A rank-one correlation matrix, which is an extreme point of the
    /// correlation matrices. Higher-rank extreme points are not detected.
    pub rank_one_extreme: bool,
}

pub fn correlation_check(a: &ComplexMatrix, tol: Tolerance) -> Result<CorrelationVerdict> {
    a.require_square("correlation_check")?;
    let is_correlation = a.unit_diagonal_defect() <= tol.unit() && is_positive_semidefinite(a, tol)?;
    let rank = numerical_rank(a, tol)?;
    Ok(CorrelationVerdict {
        is_correlation,
        rank,
        rank_one_extreme: is_correlation && rank == 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryVerdict {
    /// `A*A = I`.
    pub isometry: bool,
    /// `AA* = I`.
    pub coisometry: bool,
    /// `c ≥ 0` with `A*A = c²I` or `AA* = c²I`, when one exists.
    pub scalar_multiple: Option<f64>,
}

/// Frobenius-norm tests of `A*A - I` and `AA* - I` against `tol.unit()`.
pub fn isometry_check(a: &ComplexMatrix, tol: Tolerance) -> Result<IsometryVerdict> {
    let gram = a.adjoint().matmul(a)?;
    let cogram = a.matmul(&a.adjoint())?;
    let isometry = gram.sub(&ComplexMatrix::identity(gram.rows()))?.frobenius_norm() <= tol.unit();
    let coisometry = cogram.sub(&ComplexMatrix::identity(cogram.rows()))?.frobenius_norm() <= tol.unit();
    let scalar_multiple = scalar_of(&gram, tol).or_else(|| scalar_of(&cogram, tol));
    Ok(IsometryVerdict {
        isometry,
        coisometry,
        scalar_multiple,
    })
}

/// `c` with `g = c²I`, if `g` is that close to a multiple of the identity.
fn scalar_of(g: &ComplexMatrix, tol: Tolerance) -> Option<f64> {
    let k = g.rows();
    let c2 = g.trace().re / k as f64;
    let deviation = g
        .sub(&ComplexMatrix::identity(k).scale(C64::new(c2, 0.0)))
        .ok()?
        .frobenius_norm();
    (deviation <= tol.bound(c2.abs())).then(|| c2.max(0.0).sqrt())
}

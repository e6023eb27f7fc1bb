//! The group of multiplicative coefficient matrices under the Schur product.
//!
//! `J` is the identity and `A^[-1]` the inverse. Inside it sit the Toeplitz
//! members `a_ij = λ^(j-i)`, the torus of positive (unimodular Hermitian)
//! members parametrized by their first row, and the finite set of real
//! positive members, whose entries are signs.

use crate::error::{Result, SchurError};
use crate::matrix::{schur_product, ComplexMatrix, Tolerance, C64};
use crate::multiplicative::check_cocycle;

/// Largest `n` accepted by [`enumerate_real_positive`].
pub const MAX_ENUMERATION_N: usize = 24;

/// Real positive multiplicative matrix `a_ij = s_i s_j`, stored as the signs
/// `s_2..s_n` (with `s_1 = 1`), which are exactly its first row after the
/// leading 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    first_row_signs: Vec<i8>,
}

impl SignMatrix {
    pub fn new(first_row_signs: Vec<i8>) -> Result<Self> {
        if let Some(k) = first_row_signs.iter().position(|s| *s != 1 && *s != -1) {
            return Err(SchurError::Precondition(format!(
                "sign {} at position {} is not ±1",
                first_row_signs[k],
                k + 2
            )));
        }
        Ok(Self { first_row_signs })
    }

    pub fn n(&self) -> usize {
        self.first_row_signs.len() + 1
    }

    pub fn first_row_signs(&self) -> &[i8] {
        &self.first_row_signs
    }

    /// `s_1..s_n`.
    pub fn signs(&self) -> Vec<i8> {
        std::iter::once(1).chain(self.first_row_signs.iter().copied()).collect()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let s = self.signs();
        let n = s.len();
        ComplexMatrix::from_fn(n, n, |i, j| C64::new(f64::from(s[i] * s[j]), 0.0))
    }
}

/// `a_ij = λ^(j-i)`.
pub fn toeplitz_member(lambda: C64, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(SchurError::InvalidDimensions("n must be positive".into()));
    }
    if lambda.norm() == 0.0 {
        return Err(SchurError::ZeroEntry { row: 1, col: n.min(2) });
    }
    let (r, theta) = lambda.to_polar();
    let a = ComplexMatrix::from_fn(n, n, |i, j| {
        let k = j as i32 - i as i32;
        if k == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::from_polar(r.powi(k), theta * f64::from(k))
        }
    });
    if a.as_slice().iter().any(|z| z.norm() == 0.0) {
        return Err(SchurError::Precondition(format!(
            "|λ|^{} underflows for n = {n}",
            n - 1
        )));
    }
    Ok(a)
}

/// Group product `A ∘ B` of two multiplicative coefficient matrices.
pub fn group_product(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    for m in [a, b] {
        let check = check_cocycle(m, tol)?;
        if !check.pass {
            return Err(SchurError::NotMultiplicative {
                condition: "cocycle".into(),
                residual: check.residual,
            });
        }
    }
    schur_product(a, b)
}

/// The positive multiplicative matrix with first row `(1, z_1, ..., z_{n-1})`:
/// `a_ij = conj(r_i) r_j` with `r = (1, z)`.
pub fn torus_param(z: &[C64], tol: Tolerance) -> Result<ComplexMatrix> {
    if let Some(k) = z.iter().position(|w| (w.norm() - 1.0).abs() > tol.unit()) {
        return Err(SchurError::Precondition(format!(
            "torus coordinate {} has modulus {}, expected 1",
            k + 1,
            z[k].norm()
        )));
    }
    let r: Vec<C64> = std::iter::once(C64::new(1.0, 0.0)).chain(z.iter().copied()).collect();
    let n = r.len();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(1.0, 0.0)
        } else {
            r[i].conj() * r[j]
        }
    }))
}

/// All `2^(n-1)` sign matrices, in lexicographic order of the first row with
/// `+1` before `-1` (a binary counter over the signs, most significant first).
pub fn enumerate_sign_matrices(n: usize) -> Result<impl Iterator<Item = SignMatrix>> {
    if n == 0 {
        return Err(SchurError::InvalidDimensions("n must be positive".into()));
    }
    if n > MAX_ENUMERATION_N {
        return Err(SchurError::ResourceLimit {
            what: format!("enumeration size n = {n}"),
            limit: MAX_ENUMERATION_N,
        });
    }
    let free = n - 1;
    Ok((0u64..1 << free).map(move |counter| {
        let signs = (0..free)
            .map(|k| if counter >> (free - 1 - k) & 1 == 0 { 1 } else { -1 })
            .collect();
        SignMatrix { first_row_signs: signs }
    }))
}

/// Every real matrix whose Schur map is multiplicative and *-preserving.
pub fn enumerate_real_positive(n: usize) -> Result<impl Iterator<Item = ComplexMatrix>> {
    Ok(enumerate_sign_matrices(n)?.map(|s| s.to_matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplicative::factor_scaling;
    use crate::spectral::numerical_rank;
    use crate::star::certify_star_multiplicative;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn toeplitz_examples() {
        assert_eq!(toeplitz_member(c(1.0, 0.0), 4).unwrap(), ComplexMatrix::ones(4));
        let alt = toeplitz_member(c(-1.0, 0.0), 3).unwrap();
        let want = real(&[&[1.0, -1.0, 1.0], &[-1.0, 1.0, -1.0], &[1.0, -1.0, 1.0]]);
        assert!(alt.sub(&want).unwrap().max_abs_entry() < 1e-15);
        let i2 = toeplitz_member(c(0.0, 1.0), 2).unwrap();
        let intro =
            ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(1.0, 0.0)]]).unwrap();
        assert!(i2.sub(&intro).unwrap().max_abs_entry() < 1e-15);
        assert!(matches!(
            toeplitz_member(c(0.0, 0.0), 3),
            Err(SchurError::ZeroEntry { .. })
        ));
    }

    #[test]
    fn toeplitz_is_constant_on_diagonals() {
        let a = toeplitz_member(c(0.3, -1.7), 7).unwrap();
        for i in 1..7 {
            for j in 1..7 {
                assert_eq!(a[(i, j)], a[(i - 1, j - 1)]);
            }
        }
        assert!(check_cocycle(&a, Tolerance::default()).unwrap().pass);
    }

    #[test]
    fn group_product_examples() {
        let tol = Tolerance::default();
        let a = toeplitz_member(c(0.5, 0.5), 3).unwrap();
        assert_eq!(group_product(&a, &ComplexMatrix::ones(3), tol).unwrap(), a);
        let inv = crate::matrix::schur_inverse(&a, tol).unwrap();
        let id = group_product(&a, &inv, tol).unwrap();
        assert!(id.sub(&ComplexMatrix::ones(3)).unwrap().max_abs_entry() < 1e-15);

        let (z, w) = (c(2.0, -1.0), c(0.25, 3.0));
        let one = c(1.0, 0.0);
        let left =
            ComplexMatrix::from_rows(&[vec![one, z, z], vec![one / z, one, one], vec![one / z, one, one]]).unwrap();
        let right =
            ComplexMatrix::from_rows(&[vec![one, one, w], vec![one, one, w], vec![one / w, one / w, one]]).unwrap();
        let prod = group_product(&left, &right, tol).unwrap();
        let f = factor_scaling(&prod, tol).unwrap();
        // f = (1, 1/z, 1/(zw)) reproduces the general 3x3 form.
        let want = [one, one / z, one / (z * w)];
        for (got, want) in f.values().iter().zip(want) {
            assert!((got - want).norm() < 1e-14);
        }

        let bad = real(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(matches!(
            group_product(&bad, &ComplexMatrix::ones(2), tol),
            Err(SchurError::NotMultiplicative { .. })
        ));
    }

    #[test]
    fn torus_examples() {
        let tol = Tolerance::default();
        let a = torus_param(&[c(0.0, 1.0)], tol).unwrap();
        assert_eq!(
            a,
            ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(1.0, 0.0)]]).unwrap()
        );
        assert_eq!(torus_param(&[c(1.0, 0.0); 3], tol).unwrap(), ComplexMatrix::ones(4));
        assert!(certify_star_multiplicative(&a, tol).unwrap().verdict);
        assert!(matches!(
            torus_param(&[c(2.0, 0.0)], tol),
            Err(SchurError::Precondition(_))
        ));
    }

    #[test]
    fn enumeration_small_cases() {
        let one: Vec<_> = enumerate_real_positive(1).unwrap().collect();
        assert_eq!(one, vec![ComplexMatrix::ones(1)]);

        // Brute force over all 2x2 sign matrices: keep rank one, unit diagonal.
        let tol = Tolerance::default();
        let mut brute = Vec::new();
        for bits in 0..16u32 {
            let e = |k: u32| if bits >> k & 1 == 0 { 1.0 } else { -1.0 };
            let m = real(&[&[e(0), e(1)], &[e(2), e(3)]]);
            if m.unit_diagonal_defect() == 0.0 && numerical_rank(&m, tol).unwrap() == 1 {
                brute.push(m);
            }
        }
        let two: Vec<_> = enumerate_real_positive(2).unwrap().collect();
        assert_eq!(two, brute);
        assert_eq!(two[1], real(&[&[1.0, -1.0], &[-1.0, 1.0]]));
    }

    #[test]
    fn enumeration_three_matches_displayed_set() {
        let three: Vec<_> = enumerate_real_positive(3).unwrap().collect();
        let displayed = [
            real(&[&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]]),
            real(&[&[1.0, -1.0, -1.0], &[-1.0, 1.0, 1.0], &[-1.0, 1.0, 1.0]]),
            real(&[&[1.0, -1.0, 1.0], &[-1.0, 1.0, -1.0], &[1.0, -1.0, 1.0]]),
            real(&[&[1.0, 1.0, -1.0], &[1.0, 1.0, -1.0], &[-1.0, -1.0, 1.0]]),
        ];
        assert_eq!(three.len(), 4);
        for m in &displayed {
            assert!(three.contains(m));
        }
        // Lexicographic first rows.
        assert_eq!(three[0].row(0), displayed[0].row(0));
        assert_eq!(three[1].row(0), displayed[3].row(0));
        assert_eq!(three[2].row(0), displayed[2].row(0));
        assert_eq!(three[3].row(0), displayed[1].row(0));
    }

    #[test]
    fn enumeration_guards() {
        assert!(matches!(
            enumerate_real_positive(25).map(|_| ()),
            Err(SchurError::ResourceLimit { .. })
        ));
        assert!(enumerate_real_positive(0).is_err());
        assert!(SignMatrix::new(vec![1, 0]).is_err());
    }
}

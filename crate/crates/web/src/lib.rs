//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each export takes plain numbers and returns a JSON string, so the page
//! needs no bindings beyond `wasm-bindgen`'s generated glue. The Rust-side
//! functions are ordinary and testable natively.

use schurlab::{
    build_from_scaling, certify_multiplicative, certify_star_multiplicative, correlation_check,
    enumerate_sign_matrices, operator_norm, schur_map_norm, unboundedness_witness, CoefficientGenerator, ScalingVector,
    Tolerance, C64,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest `n` the page may enumerate; `2^(n-1)` rows are rendered.
pub const MAX_DEMO_ENUMERATION: usize = 10;
/// Largest corner the page may probe.
pub const MAX_DEMO_WITNESS: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoByTwo {
    /// `[[1, z], [1/z, 1]]` as rows of `[re, im]`.
    pub matrix: [[[f64; 2]; 2]; 2],
    pub operator_norm: f64,
    /// `sqrt(|z|^-2 + 2 + |z|^2)`.
    pub closed_form: f64,
    pub schur_map_norm: f64,
    pub multiplicative: bool,
    pub star_preserving: bool,
}

/// Norms and certificates for the multiplicative matrix with `a_12 = z`.
pub fn two_by_two(re: f64, im: f64) -> Result<TwoByTwo, String> {
    let z = C64::new(re, im);
    if !z.is_finite() || z.norm() == 0.0 {
        return Err("z must be finite and nonzero".into());
    }
    let tol = Tolerance::default();
    let f = ScalingVector::new(vec![C64::new(1.0, 0.0), z.inv()]).map_err(|e| e.to_string())?;
    let a = build_from_scaling(&f);
    let r = z.norm();
    let cell = |i, j| {
        let w: C64 = a[(i, j)];
        [w.re, w.im]
    };
    Ok(TwoByTwo {
        matrix: [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]],
        operator_norm: operator_norm(&a).map_err(|e| e.to_string())?,
        closed_form: (r.powi(-2) + 2.0 + r * r).sqrt(),
        schur_map_norm: schur_map_norm(&a, tol).map_err(|e| e.to_string())?,
        multiplicative: certify_multiplicative(&a, tol, 4, 0)
            .map_err(|e| e.to_string())?
            .verdict,
        star_preserving: certify_star_multiplicative(&a, tol).map_err(|e| e.to_string())?.verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignEnumeration {
    pub n: usize,
    pub count: usize,
    /// First rows, in enumeration order.
    pub first_rows: Vec<Vec<i8>>,
    /// Whether every member certified as a rank-one correlation matrix.
    pub all_extreme: bool,
}

/// The `2^(n-1)` real *-preserving multiplicative matrices, by first row.
pub fn sign_enumeration(n: usize) -> Result<SignEnumeration, String> {
    if n == 0 || n > MAX_DEMO_ENUMERATION {
        return Err(format!("n must be between 1 and {MAX_DEMO_ENUMERATION}"));
    }
    let tol = Tolerance::default();
    let mut first_rows = Vec::new();
    let mut all_extreme = true;
    for s in enumerate_sign_matrices(n).map_err(|e| e.to_string())? {
        let verdict = correlation_check(&s.to_matrix(), tol).map_err(|e| e.to_string())?;
        all_extreme &= verdict.rank_one_extreme;
        first_rows.push(s.signs());
    }
    Ok(SignEnumeration {
        n,
        count: first_rows.len(),
        first_rows,
        all_extreme,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessPoint {
    pub n: usize,
    pub lower_bound: f64,
}

/// `‖A_n x_n‖` for the Toeplitz generator `a_ij = λ^(j-i)` with `λ = e^(iθ)`
/// at `n = 1, ..., max_n`.
pub fn witness_series(theta: f64, max_n: usize) -> Result<Vec<WitnessPoint>, String> {
    if !theta.is_finite() {
        return Err("θ must be finite".into());
    }
    if max_n == 0 || max_n > MAX_DEMO_WITNESS {
        return Err(format!("n must be between 1 and {MAX_DEMO_WITNESS}"));
    }
    let generator = CoefficientGenerator::toeplitz(C64::from_polar(1.0, theta));
    let tol = Tolerance::default();
    (1..=max_n)
        .map(|n| {
            unboundedness_witness(&generator, n, tol)
                .map(|w| WitnessPoint {
                    n,
                    lower_bound: w.lower_bound,
                })
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn to_json<T: Serialize>(value: Result<T, String>) -> Result<String, String> {
    value.map(|v| serde_json::to_string(&v).expect("finite values serialize"))
}

#[wasm_bindgen(js_name = twoByTwo)]
pub fn two_by_two_json(re: f64, im: f64) -> Result<String, String> {
    to_json(two_by_two(re, im))
}

#[wasm_bindgen(js_name = signEnumeration)]
pub fn sign_enumeration_json(n: usize) -> Result<String, String> {
    to_json(sign_enumeration(n))
}

#[wasm_bindgen(js_name = witnessSeries)]
pub fn witness_series_json(theta: f64, max_n: usize) -> Result<String, String> {
    to_json(witness_series(theta, max_n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_matches_closed_form() {
        for (re, im) in [(2.0, 0.0), (1.0, 1.0), (0.1, 0.0), (0.5, 3f64.sqrt() / 2.0)] {
            let r = two_by_two(re, im).unwrap();
            assert!((r.operator_norm - r.closed_form).abs() <= 1e-10 * r.closed_form);
            assert!(r.multiplicative);
            let unimodular = (C64::new(re, im).norm() - 1.0).abs() < 1e-12;
            assert_eq!(r.star_preserving, unimodular);
            assert_eq!((r.schur_map_norm - 1.0).abs() < 1e-12, unimodular);
        }
        assert!(two_by_two(0.0, 0.0).is_err());
        assert!(two_by_two(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn enumeration_sizes() {
        for n in 1..=MAX_DEMO_ENUMERATION {
            let e = sign_enumeration(n).unwrap();
            assert_eq!(e.count, 1 << (n - 1));
            assert!(e.all_extreme);
        }
        assert_eq!(
            sign_enumeration(3).unwrap().first_rows,
            vec![vec![1, 1, 1], vec![1, 1, -1], vec![1, -1, 1], vec![1, -1, -1]]
        );
        assert!(sign_enumeration(0).is_err());
        assert!(sign_enumeration(MAX_DEMO_ENUMERATION + 1).is_err());
    }

    #[test]
    fn witness_grows_linearly() {
        let series = witness_series(0.7, 40).unwrap();
        for p in &series {
            assert!(p.lower_bound >= p.n as f64 * (1.0 - 1e-10));
        }
        assert!(witness_series(0.0, 0).is_err());
    }

    #[test]
    fn json_exports() {
        let text = sign_enumeration_json(2).unwrap();
        assert_eq!(
            text,
            r#"{"n":2,"count":2,"first_rows":[[1,1],[1,-1]],"all_extreme":true}"#
        );
        assert!(two_by_two_json(1.0, 0.0).unwrap().contains("\"star_preserving\":true"));
        assert!(witness_series_json(0.0, 3).unwrap().starts_with(r#"[{"n":1"#));
    }
}

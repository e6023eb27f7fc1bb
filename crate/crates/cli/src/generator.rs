//! `--gen` specifications for infinite coefficient matrices.

use std::path::Path;

use schurlab::{CoefficientGenerator, ScalingVector, C64};

use crate::document::MatrixDocument;
use crate::CliError;

/// Parses `toeplitz:<re>,<im>`, `scaling:<file>` (JSON array of `[re, im]`)
/// or `table:<file>` (matrix document, zero-extended).
pub fn parse_generator(spec: &str) -> Result<CoefficientGenerator, CliError> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Input(format!("generator {spec:?} must look like kind:argument")))?;
    match kind {
        "toeplitz" => {
            let (re, im) = arg
                .split_once(',')
                .ok_or_else(|| CliError::Input(format!("toeplitz generator needs <re>,<im>, got {arg:?}")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::Input(format!("not a finite number: {s:?}")))
            };
            Ok(CoefficientGenerator::toeplitz(C64::new(parse(re)?, parse(im)?)))
        }
        "scaling" => {
            let text = read(Path::new(arg))?;
            let values: Vec<[f64; 2]> = serde_json::from_str(&text)
                .map_err(|e| CliError::Input(format!("scaling file must be a JSON array of [re, im]: {e}")))?;
            let f = ScalingVector::new(values.into_iter().map(|[re, im]| C64::new(re, im)).collect())?;
            Ok(CoefficientGenerator::from_scaling_values(f))
        }
        "table" => {
            let doc = MatrixDocument::read(Path::new(arg))?;
            Ok(CoefficientGenerator::table(doc.to_matrix()?))
        }
        _ => Err(CliError::Input(format!(
            "unknown generator kind {kind:?}; expected toeplitz, scaling or table"
        ))),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

//! Compile targets: built-in phase gates or a matrix file.

use std::path::Path;

use diffuse_core::geometry::{Complex64, UnitaryMatrix};

use crate::error::{CliError, CliResult};

/// `R_k = diag(1, e^{i pi / k})` for `k = 2^m`.
pub fn phase_gate(m: u32) -> UnitaryMatrix {
    UnitaryMatrix::diagonal_phases(&[0.0, std::f64::consts::PI / 2f64.powi(m as i32)])
}

/// `R<k>` with `k` a power of two, `I`, or the path of a matrix file.
pub fn parse_target(spec: &str) -> CliResult<UnitaryMatrix> {
    let s = spec.trim();
    if s == "I" {
        return Ok(UnitaryMatrix::identity(2));
    }
    if let Some(k) = s.strip_prefix('R').and_then(|k| k.parse::<u64>().ok()) {
        if k >= 2 && k.is_power_of_two() {
            return Ok(phase_gate(k.trailing_zeros()));
        }
        return Err(CliError::Target(format!(
            "`{s}`: phase gates are R<k> with k = 2, 4, 8, ..."
        )));
    }
    let path = Path::new(s);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_matrix(&text)
}

/// One matrix row per line as `re im re im ...`; blank lines and `#`
/// comments are ignored.
pub fn parse_matrix(text: &str) -> CliResult<UnitaryMatrix> {
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| CliError::Target(format!("bad number `{t}`")))
                })
                .collect()
        })
        .collect::<CliResult<_>>()?;
    let n = rows.len();
    if n < 2 {
        return Err(CliError::Target(format!(
            "expected at least 2 rows, found {n}"
        )));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != 2 * n {
            return Err(CliError::Target(format!(
                "row {} has {} numbers, expected {}",
                i + 1,
                row.len(),
                2 * n
            )));
        }
        entries.extend(row.chunks(2).map(|c| Complex64::new(c[0], c[1])));
    }
    Ok(UnitaryMatrix::from_rows(n, &entries)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_targets() {
        let r4 = parse_target("R4").unwrap();
        let z = r4.get(1, 1);
        assert!((z.arg() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!(parse_target("R3").is_err());
        assert!(parse_target("R1").is_err());
        assert_eq!(parse_target("I").unwrap(), UnitaryMatrix::identity(2));
    }

    #[test]
    fn matrix_files() {
        let h = 1.0 / 2f64.sqrt();
        let text = format!("# hadamard\n{h} 0 {h} 0\n{h} 0 {} 0\n", -h);
        let u = parse_matrix(&text).unwrap();
        assert!((u.get(1, 1).re + h).abs() < 1e-15);
        assert!(parse_matrix("1 0 0 0\n0 0 2 0\n").is_err());
        assert!(parse_matrix("1 0 0\n0 0 1 0\n").is_err());
        assert!(parse_matrix("1 0 x 0\n0 0 1 0\n").is_err());
    }
}

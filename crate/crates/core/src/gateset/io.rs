//! Versioned text serialization of gate sets:
//!
//! ```text
//! diffuse-gateset 1
//! dim 2
//! label standard
//! includes_inverses false
//! gates 2
//! gate 0
//! <re> <im> <re> <im>      one line per row, 17 significant digits
//! ...
//! ```

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::GateSet;
use crate::error::{Error, Result};
use crate::geometry::UnitaryMatrix;

const MAGIC: &str = "diffuse-gateset";
const VERSION: u32 = 1;

impl GateSet {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC} {VERSION}");
        let _ = writeln!(s, "dim {}", self.dim);
        let _ = writeln!(s, "label {}", self.label);
        let _ = writeln!(s, "includes_inverses {}", self.includes_inverses);
        let _ = writeln!(s, "gates {}", self.gates.len());
        for (k, g) in self.gates.iter().enumerate() {
            let _ = writeln!(s, "gate {k}");
            for i in 0..self.dim {
                let row: Vec<String> = (0..self.dim)
                    .map(|j| {
                        let z = g.get(i, j);
                        format!("{:.16e} {:.16e}", z.re, z.im)
                    })
                    .collect();
                let _ = writeln!(s, "{}", row.join(" "));
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<GateSet> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::Format(format!("missing {what}")))
        };

        let header = next("header")?;
        let version = header
            .strip_prefix(MAGIC)
            .ok_or_else(|| Error::Format("not a gate-set file".into()))?
            .trim()
            .parse::<u32>()
            .map_err(|_| Error::Format("bad version".into()))?;
        if version != VERSION {
            return Err(Error::Version {
                found: version,
                expected: VERSION,
            });
        }
        let dim: usize = field(next("dim")?, "dim")?;
        let label = next("label")?
            .strip_prefix("label")
            .ok_or_else(|| Error::Format("expected `label`".into()))?
            .trim()
            .to_string();
        let includes_inverses: bool = field(next("includes_inverses")?, "includes_inverses")?;
        let count: usize = field(next("gates")?, "gates")?;
        if dim == 0 || dim > 64 || count > 256 {
            return Err(Error::Format(format!(
                "unreasonable sizes: dim {dim}, gates {count}"
            )));
        }
        let mut gates = Vec::with_capacity(count);
        for k in 0..count {
            let idx: usize = field(next("gate")?, "gate")?;
            if idx != k {
                return Err(Error::Format(format!("expected gate {k}, found {idx}")));
            }
            let mut entries = Vec::with_capacity(dim * dim);
            for _ in 0..dim {
                let row = next("matrix row")?;
                let nums = row
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|_| Error::Format(format!("bad number `{t}`")))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                if nums.len() != 2 * dim {
                    return Err(Error::Format(format!(
                        "row has {} numbers, expected {}",
                        nums.len(),
                        2 * dim
                    )));
                }
                entries.extend(nums.chunks(2).map(|c| Complex64::new(c[0], c[1])));
            }
            gates.push(UnitaryMatrix::from_rows(dim, &entries)?);
        }
        GateSet::new(label, gates, includes_inverses)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<GateSet> {
        GateSet::from_text(&std::fs::read_to_string(path)?)
    }
}

fn field<T: std::str::FromStr>(line: &str, key: &str) -> Result<T> {
    let rest = line
        .strip_prefix(key)
        .ok_or_else(|| Error::Format(format!("expected `{key}`, found `{line}`")))?;
    rest.trim()
        .parse()
        .map_err(|_| Error::Format(format!("bad value for `{key}`: `{}`", rest.trim())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateset::{augment_with_inverses, standard_diffusive_set};

    #[test]
    fn text_round_trip_is_exact() {
        let gs = augment_with_inverses(&standard_diffusive_set().unwrap());
        let back = GateSet::from_text(&gs.to_text()).unwrap();
        assert_eq!(back.to_text(), gs.to_text());
        assert_eq!(back.fingerprint(), gs.fingerprint());
        for (a, b) in gs.gates().iter().zip(back.gates()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(GateSet::from_text("nope"), Err(Error::Format(_))));
        let text = standard_diffusive_set()
            .unwrap()
            .to_text()
            .replace("diffuse-gateset 1", "diffuse-gateset 9");
        assert!(matches!(
            GateSet::from_text(&text),
            Err(Error::Version { found: 9, .. })
        ));
        let truncated: String = standard_diffusive_set()
            .unwrap()
            .to_text()
            .lines()
            .take(7)
            .collect::<Vec<_>>()
            .join("\n");
        assert!(GateSet::from_text(&truncated).is_err());
    }
}

//! Run configuration: a TOML file overridden by command-line flags.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::CliError;
use crate::arith::mp::Real;
use crate::weights::{parse_weights, Curve, OrbifoldSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "table" => Some(Format::Table),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OrbifoldSection {
    pub curve: String,
    pub k3: Vec<u32>,
}

impl Default for OrbifoldSection {
    fn default() -> Self {
        OrbifoldSection { curve: "quartic".into(), k3: vec![3, 1, 1, 1] }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Truncation {
    pub novikov_degree: u32,
    pub z_order: u32,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { novikov_degree: 4, z_order: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub format: Format,
    pub path: Option<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { format: Format::Json, path: None }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub orbifold: OrbifoldSection,
    pub truncation: Truncation,
    pub precision_bits: usize,
    /// Check name → tolerance, written as a decimal string such as `"1e-40"`.
    pub tolerances: BTreeMap<String, String>,
    pub output: OutputSection,
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            orbifold: OrbifoldSection::default(),
            truncation: Truncation::default(),
            precision_bits: 256,
            tolerances: BTreeMap::new(),
            output: OutputSection::default(),
            seed: None,
        }
    }
}

/// Default tolerances per check.
pub fn default_tolerance(check: &str) -> &'static str {
    match check {
        "contour" => "1e-20",
        _ => "1e-40",
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<RunConfig, CliError> {
        let cfg: RunConfig = toml::from_str(s).map_err(|e| CliError::BadInput(format!("config: {}", e.message())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(64..=4096).contains(&self.precision_bits) {
            return Err(CliError::BadInput(format!("precision {} bits is outside 64..=4096", self.precision_bits)));
        }
        if self.truncation.novikov_degree > 12 || self.truncation.z_order > 12 {
            return Err(CliError::BadInput("truncation orders above 12 are not supported".into()));
        }
        for (k, v) in &self.tolerances {
            parse_tolerance(v, 64).map_err(|_| CliError::BadInput(format!("tolerance for {k}: {v:?}")))?;
        }
        self.spec()?;
        Ok(())
    }

    pub fn spec(&self) -> Result<OrbifoldSpec, CliError> {
        let curve = Curve::parse(&self.orbifold.curve).ok_or_else(|| CliError::BadInput(format!("unknown curve {:?}", self.orbifold.curve)))?;
        let w: [u32; 4] = self.orbifold.k3.as_slice().try_into().map_err(|_| CliError::BadInput(format!("K3 weights need four entries, got {}", self.orbifold.k3.len())))?;
        OrbifoldSpec::new(curve, w).map_err(|e| CliError::BadInput(e.to_string()))
    }

    pub fn set_k3(&mut self, s: &str) -> Result<(), CliError> {
        self.orbifold.k3 = parse_weights(s).map_err(|e| CliError::BadInput(e.to_string()))?.to_vec();
        Ok(())
    }

    pub fn tolerance(&self, check: &str) -> Result<Real, CliError> {
        let s = self.tolerances.get(check).map(String::as_str).unwrap_or(default_tolerance(check));
        parse_tolerance(s, self.precision_bits)
    }
}

/// Parses a positive decimal such as `1e-40` or `2.5E-7` into a `Real`
/// without going through `f64` (which would underflow below `1e-308`).
pub fn parse_tolerance(s: &str, p: usize) -> Result<Real, CliError> {
    let bad = || CliError::BadInput(format!("bad tolerance {:?}", s.chars().take(40).collect::<String>()));
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    if !(-4000..=4000).contains(&exp) {
        return Err(bad());
    }
    let m: f64 = mant.parse().map_err(|_| bad())?;
    if !(m.is_finite() && m > 0.0) {
        return Err(bad());
    }
    Ok(Real::from_f64(m, p).mul(&Real::from_i64(10, p).powi(exp)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::from_toml_str("").unwrap();
        assert_eq!(c.truncation, Truncation { novikov_degree: 4, z_order: 4 });
        assert_eq!(c.precision_bits, 256);
        assert_eq!(c.spec().unwrap(), OrbifoldSpec::quartic([3, 1, 1, 1]));
    }

    #[test]
    fn full_file() {
        let c = RunConfig::from_toml_str(
            r#"
precision_bits = 128
[orbifold]
curve = "cubic-sextic"
k3 = [5, 2, 2, 1]
[truncation]
novikov_degree = 2
[tolerances]
symplectic = "1e-30"
[output]
format = "csv"
"#,
        )
        .unwrap();
        assert_eq!(c.output.format, Format::Csv);
        assert_eq!(c.spec().unwrap().k3_weights, [5, 2, 2, 1]);
        assert_eq!(c.truncation.z_order, 4);
        assert!(c.tolerance("symplectic").unwrap().log10_abs() < -29.9);
    }

    #[test]
    fn rejects() {
        assert!(RunConfig::from_toml_str("[orbifold]\nk3 = [7, 1, 1, 1]").is_err());
        assert!(RunConfig::from_toml_str("precision = 3").is_err());
        assert!(RunConfig::from_toml_str("[tolerances]\nx = \"-1\"").is_err());
        assert!(parse_tolerance("1e-400", 256).unwrap().log10_abs() < -399.0);
    }
}

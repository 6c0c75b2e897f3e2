//! Configuration files.

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::Deserialize;

use k3lines::criteria::TranscendentalSpec;
use k3lines::fano::LineConfiguration;
use k3lines::fqf::FiniteQuadraticForm;
use k3lines::linalg::RationalVector;
use k3lines::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub degree: u32,
    pub vertices: usize,
    pub edges: Vec<(usize, usize, u8)>,
    #[serde(default)]
    pub kernel: Vec<KernelGenerator>,
    #[serde(default)]
    pub transcendental: Option<TranscendentalFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelGenerator {
    pub numerators: Vec<i64>,
    pub denominator: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranscendentalFile {
    #[serde(default)]
    pub definite2: Option<[i64; 3]>,
    #[serde(default, rename = "twoU")]
    pub two_u: Option<u32>,
    #[serde(default)]
    pub discr: Option<DiscrFile>,
    #[serde(default)]
    pub rank: Option<usize>,
}

/// Finite quadratic form on generators of the given orders; values are
/// rationals written "a/b" (q mod 2, b mod 1).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscrFile {
    pub factors: Vec<u64>,
    pub qvalues: Vec<String>,
    pub pairing: Vec<Vec<String>>,
}

fn ratio(s: &str) -> Result<Ratio<i64>> {
    s.trim().parse::<Ratio<i64>>().map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

impl DiscrFile {
    pub fn form(&self) -> Result<FiniteQuadraticForm> {
        let q = self.qvalues.iter().map(|s| ratio(s)).collect::<Result<Vec<_>>>()?;
        let b = self
            .pairing
            .iter()
            .map(|row| row.iter().map(|s| ratio(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FiniteQuadraticForm::from_rational(&self.factors, &q, &b)
    }
}

impl TranscendentalFile {
    pub fn spec(&self) -> Result<TranscendentalSpec> {
        match (&self.definite2, &self.two_u, &self.discr, self.rank) {
            (Some([a, b, c]), None, None, None) => TranscendentalSpec::definite2(*a, *b, *c),
            (None, Some(n), None, None) => TranscendentalSpec::two_u(*n),
            (None, None, Some(d), Some(rank)) => TranscendentalSpec::generic(d.form()?, rank),
            (None, None, Some(_), None) => Err(Error::InvalidInput("discr transcendental needs a rank".into())),
            _ => Err(Error::InvalidInput("transcendental must be exactly one of definite2, twoU, discr".into())),
        }
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn configuration(&self) -> Result<LineConfiguration> {
        let kernel = self
            .kernel
            .iter()
            .map(|k| {
                if k.denominator <= 0 {
                    return Err(Error::InvalidInput("kernel denominator must be positive".into()));
                }
                RationalVector::new(k.numerators.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(k.denominator))
            })
            .collect::<Result<Vec<_>>>()?;
        let t = self.transcendental.as_ref().map(|t| t.spec()).transpose()?;
        LineConfiguration::new(self.degree, self.vertices, &self.edges, kernel, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_file() {
        let text = r#"{"degree": 2, "vertices": 2, "edges": [[0, 1, 3]],
            "transcendental": {"discr": {"factors": [2, 2], "qvalues": ["0", "0"],
            "pairing": [["0", "1/2"], ["1/2", "0"]]}, "rank": 4}}"#;
        let cfg = ConfigFile::parse(text).unwrap().configuration().unwrap();
        assert_eq!(cfg.vertex_count(), 2);
        assert_eq!(cfg.transcendental().unwrap().rank(), 4);
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(ConfigFile::parse(r#"{"degree": 2, "vertices": 1, "edges": [], "name": "x"}"#).is_err());
        let both = r#"{"degree": 2, "vertices": 1, "edges": [], "transcendental": {"twoU": 3, "definite2": [2, 1, 2]}}"#;
        assert!(ConfigFile::parse(both).unwrap().configuration().is_err());
    }
}

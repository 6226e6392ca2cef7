//! The patchwork file format shared by the command line and the service:
//! `{"degree": d, "triangulation": <catalog key or triangulation object>,
//! "signs": "<lexicographic 0/1 string>"}`.

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{Error, Result};
use crate::regularity::{find_lifting, verify_lifting};
use crate::signs::SignDistribution;
use crate::triangulation::{Triangulation, TriangulationFile};

/// A triangulation given by key (catalog or constructor) or inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TriangulationSource {
    Key(String),
    Inline(TriangulationFile),
}

impl TriangulationSource {
    pub fn resolve(&self) -> Result<Triangulation> {
        match self {
            TriangulationSource::Key(k) => catalog::resolve(k),
            TriangulationSource::Inline(f) => f.triangulation(),
        }
    }

    /// A lifting certifying regularity: the shipped or inline one when
    /// present and valid, otherwise one computed by linear programming.
    pub fn lifting(&self) -> Result<Vec<i64>> {
        let t = self.resolve()?;
        let given = match self {
            TriangulationSource::Key(k) => catalog::entry(k).ok().map(|e| e.lifting),
            TriangulationSource::Inline(f) => f.lifting.clone(),
        };
        if let Some(l) = given {
            if verify_lifting(&t, &l)?.is_empty() {
                return Ok(l);
            }
        }
        find_lifting(&t).ok_or(Error::NoLifting)
    }
}

/// A serialised patchwork.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchworkFile {
    pub degree: u32,
    pub triangulation: TriangulationSource,
    pub signs: String,
}

impl PatchworkFile {
    pub fn new(triangulation: TriangulationSource, signs: &SignDistribution) -> Self {
        PatchworkFile { degree: signs.degree(), triangulation, signs: signs.to_string() }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Triangulation and signs, checked for a common degree.
    pub fn resolve(&self) -> Result<(Triangulation, SignDistribution)> {
        let t = self.triangulation.resolve()?;
        if t.degree() != self.degree {
            return Err(Error::DegreeMismatch { left: self.degree, right: t.degree() });
        }
        let s = SignDistribution::parse(self.degree, &self.signs)?;
        Ok((t, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_and_inline_forms_parse() {
        let f =
            PatchworkFile::parse(r#"{"degree":2,"triangulation":"honeycomb:2","signs":"111111"}"#).unwrap();
        let (t, s) = f.resolve().unwrap();
        assert_eq!(t.degree(), 2);
        assert_eq!(s, SignDistribution::ones(2).unwrap());
        let inline = PatchworkFile::new(
            TriangulationSource::Inline(TriangulationFile::from_triangulation(&t, None)),
            &s,
        );
        let text = serde_json::to_string(&inline).unwrap();
        assert_eq!(PatchworkFile::parse(&text).unwrap(), inline);
        assert!(inline.triangulation.lifting().is_ok());
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let f =
            PatchworkFile::parse(r#"{"degree":3,"triangulation":"honeycomb:2","signs":"111111"}"#).unwrap();
        assert!(matches!(f.resolve(), Err(Error::DegreeMismatch { .. })));
    }
}

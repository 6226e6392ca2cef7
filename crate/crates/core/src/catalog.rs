//! Named triangulations shipped with the crate, each with a lifting that
//! certifies its regularity, plus constructor keys such as `honeycomb:5`.

use crate::error::{Error, Result};
use crate::triangulation::{bow_tie, framed_chessboard, honeycomb, Triangulation, TriangulationFile};

/// A named triangulation with its lifting (lexicographic order).
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub triangulation: Triangulation,
    pub lifting: Vec<i64>,
}

const SOURCES: [(&str, &str); 6] = [
    ("bat", include_str!("../data/catalog/bat.json")),
    ("moth", include_str!("../data/catalog/moth.json")),
    ("radiant", include_str!("../data/catalog/radiant.json")),
    ("split_radiant", include_str!("../data/catalog/split_radiant.json")),
    ("frayed_radiant", include_str!("../data/catalog/frayed_radiant.json")),
    ("honeycomb7", include_str!("../data/catalog/honeycomb7.json")),
];

/// Keys of the shipped triangulations.
pub fn keys() -> Vec<&'static str> {
    SOURCES.iter().map(|(k, _)| *k).collect()
}

/// Raw JSON text of a shipped triangulation.
pub fn source(key: &str) -> Result<&'static str> {
    SOURCES
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::UnknownCatalogKey(key.to_string()))
}

/// Loads one shipped triangulation.
pub fn entry(key: &str) -> Result<CatalogEntry> {
    let (name, text) =
        SOURCES.iter().find(|(k, _)| *k == key).ok_or_else(|| Error::UnknownCatalogKey(key.to_string()))?;
    let file: TriangulationFile = serde_json::from_str(text)?;
    let triangulation = file.triangulation()?;
    let lifting = file.lifting.ok_or_else(|| Error::Format(format!("{name} has no lifting")))?;
    Ok(CatalogEntry { key: name, triangulation, lifting })
}

/// All shipped triangulations in catalog order.
pub fn entries() -> Result<Vec<CatalogEntry>> {
    keys().into_iter().map(entry).collect()
}

/// The shipped triangulations of a given degree.
pub fn of_degree(degree: u32) -> Result<Vec<CatalogEntry>> {
    Ok(entries()?.into_iter().filter(|e| e.triangulation.degree() == degree).collect())
}

/// Resolves a catalog key or a constructor key `honeycomb:D`, `bow_tie:D`,
/// `framed_chessboard:D`.
pub fn resolve(key: &str) -> Result<Triangulation> {
    if let Some((name, degree)) = key.split_once(':') {
        let degree: u32 = degree.trim().parse().map_err(|_| Error::UnknownCatalogKey(key.to_string()))?;
        return match name.trim() {
            "honeycomb" => honeycomb(degree),
            "bow_tie" => bow_tie(degree),
            "framed_chessboard" => framed_chessboard(degree),
            _ => Err(Error::UnknownCatalogKey(key.to_string())),
        };
    }
    Ok(entry(key)?.triangulation)
}

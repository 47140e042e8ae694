//! Planet catalog: the records shipped with the binary plus loading of
//! user-supplied replacements.

use std::collections::BTreeMap;
use std::path::Path;

use swingby_core::planet::{PlanetModel, PlanetModelError};

/// Catalog shipped inside the binary.
const EMBEDDED: &str = include_str!("../data/planets.json");

/// A set of planet records with provenance notes per field.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    /// Where each record field's values come from, keyed by field name.
    pub notes: BTreeMap<String, String>,
    pub planets: Vec<PlanetModel>,
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("catalog {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("catalog {path}, planet {name}: {source}")]
    Invalid {
        path: String,
        name: String,
        source: PlanetModelError,
    },
    #[error("unknown planet {id:?}; catalog has {known:?}")]
    UnknownPlanet { id: String, known: Vec<String> },
}

impl Catalog {
    /// The built-in records.
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED, "<embedded>").expect("embedded catalog is valid")
    }

    /// Loads and validates a replacement catalog file.
    pub fn from_path(path: &Path) -> Result<Self, CatalogError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: shown.clone(),
            source,
        })?;
        Self::parse(&text, &shown)
    }

    fn parse(text: &str, path: &str) -> Result<Self, CatalogError> {
        let catalog: Self = serde_json::from_str(text).map_err(|source| CatalogError::Parse {
            path: path.to_string(),
            source,
        })?;
        for planet in &catalog.planets {
            planet.validate().map_err(|source| CatalogError::Invalid {
                path: path.to_string(),
                name: planet.name.clone(),
                source,
            })?;
        }
        Ok(catalog)
    }

    /// Case-insensitive lookup by planet name.
    pub fn find(&self, id: &str) -> Result<&PlanetModel, CatalogError> {
        self.planets
            .iter()
            .find(|p| p.name.eq_ignore_ascii_case(id))
            .ok_or_else(|| CatalogError::UnknownPlanet {
                id: id.to_string(),
                known: self.planets.iter().map(|p| p.name.clone()).collect(),
            })
    }
}

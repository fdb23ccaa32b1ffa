//! Scene files: named subspaces and named compositions, in TOML.
//!
//! ```toml
//! ambient = 2
//!
//! [subspaces]
//! U = { angle = "0deg" }             # ℝ², axis angle; "rad" or bare number = radians
//! V = { basis = [[1.0, 1.0]] }       # spanning vectors, any ambient
//! Z = { basis = [] }                 # {0}
//!
//! [compositions]
//! conj = ["U", "V", "Uperp"]         # application order: R_Uperp R_V R_U
//!
//! [figure]                           # optional, used by `plot`
//! compositions = ["conj"]
//! width = 900
//! height = 600
//! range = 1.5
//! ```

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Tolerance, Vector};
use crate::plane;
use crate::subspace::Subspace;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("composition `{composition}` references undeclared subspace `{name}`")]
    UnknownSubspace { composition: String, name: String },

    #[error("unknown composition `{0}`")]
    UnknownComposition(String),

    #[error("unknown subspace `{0}`")]
    UnknownName(String),

    #[error("subspace `{name}`: expected vectors of length {expected}, found {found}")]
    Dimension {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("{0}")]
    Invalid(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Angle as written in a scene file: a bare number (radians) or a string
/// with an optional `rad`/`deg` suffix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleValue {
    Radians(f64),
    Text(String),
}

impl AngleValue {
    pub fn radians(&self) -> Result<f64, String> {
        match self {
            AngleValue::Radians(r) => Ok(*r),
            AngleValue::Text(t) => parse_angle(t),
        }
    }
}

/// Parses `"30deg"`, `"0.5 rad"`, `"1.2"` into radians.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let (num, to_rad) = if let Some(n) = t.strip_suffix("deg") {
        (n, std::f64::consts::PI / 180.0)
    } else if let Some(n) = t.strip_suffix("rad") {
        (n, 1.0)
    } else {
        (t, 1.0)
    };
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("invalid angle `{text}` (expected e.g. \"30deg\" or \"0.52rad\")"))?;
    if !v.is_finite() {
        return Err(format!("angle `{text}` is not finite"));
    }
    Ok(v * to_rad)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<AngleValue>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureSection {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub compositions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<f64>,
}

/// The document as written on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub ambient: usize,
    #[serde(default)]
    pub subspaces: IndexMap<String, SubspaceEntry>,
    #[serde(default)]
    pub compositions: IndexMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figure: Option<FigureSection>,
}

/// A validated scene with every subspace resolved.
#[derive(Debug, Clone)]
pub struct Scene {
    file: SceneFile,
    subspaces: IndexMap<String, Subspace>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

impl Scene {
    pub fn parse(text: &str, tol: &Tolerance) -> Result<Self, SceneError> {
        let file: SceneFile = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
            SceneError::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        Scene::from_file(file, tol)
    }

    pub fn load(path: impl AsRef<Path>, tol: &Tolerance) -> Result<Self, SceneError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| SceneError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Scene::parse(&text, tol)
    }

    pub fn from_file(file: SceneFile, tol: &Tolerance) -> Result<Self, SceneError> {
        let n = file.ambient;
        if n == 0 {
            return Err(SceneError::Invalid("ambient must be at least 1".into()));
        }
        let mut subspaces = IndexMap::new();
        for (name, entry) in &file.subspaces {
            let s = match (&entry.basis, &entry.angle) {
                (Some(_), Some(_)) | (None, None) => {
                    return Err(SceneError::Invalid(format!(
                        "subspace `{name}` needs exactly one of `basis` or `angle`"
                    )))
                }
                (None, Some(angle)) => {
                    if n != 2 {
                        return Err(SceneError::Invalid(format!(
                            "subspace `{name}`: angle form requires ambient = 2, scene has {n}"
                        )));
                    }
                    let a = angle
                        .radians()
                        .map_err(|m| SceneError::Invalid(format!("subspace `{name}`: {m}")))?;
                    plane::line_subspace(a)
                        .map_err(|e| SceneError::Invalid(format!("subspace `{name}`: {e}")))?
                }
                (Some(vectors), None) => {
                    let mut vs = Vec::with_capacity(vectors.len());
                    for v in vectors {
                        if v.len() != n {
                            return Err(SceneError::Dimension {
                                name: name.clone(),
                                expected: n,
                                found: v.len(),
                            });
                        }
                        vs.push(Vector::from_row_slice(v));
                    }
                    Subspace::span(n, &vs, tol)
                        .map_err(|e| SceneError::Invalid(format!("subspace `{name}`: {e}")))?
                }
            };
            subspaces.insert(name.clone(), s);
        }
        for (comp, names) in &file.compositions {
            if names.is_empty() {
                return Err(SceneError::Invalid(format!(
                    "composition `{comp}` is empty"
                )));
            }
            for name in names {
                if !subspaces.contains_key(name) {
                    return Err(SceneError::UnknownSubspace {
                        composition: comp.clone(),
                        name: name.clone(),
                    });
                }
            }
        }
        if let Some(fig) = &file.figure {
            for comp in &fig.compositions {
                if !file.compositions.contains_key(comp) {
                    return Err(SceneError::UnknownComposition(comp.clone()));
                }
            }
        }
        Ok(Scene { file, subspaces })
    }

    pub fn ambient(&self) -> usize {
        self.file.ambient
    }

    pub fn file(&self) -> &SceneFile {
        &self.file
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.file).expect("scene files always serialize")
    }

    pub fn subspace_names(&self) -> impl Iterator<Item = &str> {
        self.subspaces.keys().map(String::as_str)
    }

    pub fn subspace(&self, name: &str) -> Result<&Subspace, SceneError> {
        self.subspaces
            .get(name)
            .ok_or_else(|| SceneError::UnknownName(name.to_string()))
    }

    pub fn composition_names(&self) -> impl Iterator<Item = &str> {
        self.file.compositions.keys().map(String::as_str)
    }

    /// Subspace names of a composition, application order.
    pub fn composition(&self, name: &str) -> Result<&[String], SceneError> {
        self.file
            .compositions
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| SceneError::UnknownComposition(name.to_string()))
    }

    /// Subspaces of a composition, application order.
    pub fn chain(&self, name: &str) -> Result<Vec<Subspace>, SceneError> {
        self.composition(name)?
            .iter()
            .map(|n| self.subspace(n).cloned())
            .collect()
    }

    /// Conventional right-to-left notation, e.g. `R_W R_V R_U` for `[U, V, W]`.
    pub fn notation(&self, name: &str) -> Result<String, SceneError> {
        Ok(notation(self.composition(name)?))
    }

    pub fn figure(&self) -> Option<&FigureSection> {
        self.file.figure.as_ref()
    }
}

/// `[U, V, W]` ↦ `"R_W R_V R_U"`.
pub fn notation(names: &[String]) -> String {
    names
        .iter()
        .rev()
        .map(|n| format!("R_{n}"))
        .collect::<Vec<_>>()
        .join(" ")
}

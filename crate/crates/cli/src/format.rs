//! The simplex file: a TOML document with `dimension`, `vertices` and an
//! optional `label`.
//!
//! ```toml
//! label = "isosceles"
//! dimension = 2
//! vertices = [
//!   [-1.0000000000000000e0, 0.0000000000000000e0],
//!   [1.0000000000000000e0, 0.0000000000000000e0],
//!   [0.0000000000000000e0, 2.0000000000000000e0],
//! ]
//! ```
//!
//! Writers emit every coordinate with 17 significant digits so that reading
//! the file back reproduces the vertices bit for bit.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use eqcenter_core::Simplex;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl SimplexFile {
    pub fn new(vertices: Vec<Vec<f64>>, label: Option<String>) -> Result<Self, CliError> {
        let file = Self {
            label,
            dimension: vertices.len().saturating_sub(1),
            vertices,
        };
        file.validate()?;
        Ok(file)
    }

    pub fn from_simplex(v: &Simplex, label: Option<String>) -> Self {
        Self {
            label,
            dimension: v.dim(),
            vertices: v.vertices().iter().map(|p| p.coords().to_vec()).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.dimension == 0 {
            return Err(CliError::Parse("dimension must be at least 1".into()));
        }
        if self.vertices.len() != self.dimension + 1 {
            return Err(CliError::Parse(format!(
                "dimension {} needs {} vertices, found {}",
                self.dimension,
                self.dimension + 1,
                self.vertices.len()
            )));
        }
        for (i, row) in self.vertices.iter().enumerate() {
            if row.len() != self.dimension {
                return Err(CliError::Parse(format!(
                    "vertex {i} has {} coordinates, expected {}",
                    row.len(),
                    self.dimension
                )));
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(CliError::Parse(format!(
                    "vertex {i} has a non-finite coordinate"
                )));
            }
        }
        Ok(())
    }

    pub fn to_simplex(&self) -> Result<Simplex, CliError> {
        self.validate()?;
        Simplex::from_rows(&self.vertices).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn display_name(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| format!("{}-simplex", self.dimension))
    }
}

pub fn parse(text: &str) -> Result<SimplexFile, CliError> {
    let file: SimplexFile = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    file.validate()?;
    Ok(file)
}

/// Reads a simplex file; `-` reads standard input.
pub fn read(path: &Path) -> Result<SimplexFile, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| CliError::Io {
                context: "reading stdin".into(),
                source,
            })?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|source| CliError::Io {
            context: format!("reading {}", path.display()),
            source,
        })?
    };
    parse(&text)
}

/// Decimal with 17 significant digits; TOML float syntax.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_string(file: &SimplexFile) -> String {
    let mut out = String::new();
    if let Some(label) = &file.label {
        // TOML basic strings share JSON's escaping rules
        let quoted = serde_json::to_string(label).expect("string serializes");
        let _ = writeln!(out, "label = {quoted}");
    }
    let _ = writeln!(out, "dimension = {}", file.dimension);
    out.push_str("vertices = [\n");
    for row in &file.vertices {
        let cells: Vec<String> = row.iter().map(|&x| format_f64(x)).collect();
        let _ = writeln!(out, "  [{}],", cells.join(", "));
    }
    out.push_str("]\n");
    out
}

pub fn write(path: &Path, file: &SimplexFile) -> Result<(), CliError> {
    std::fs::write(path, to_string(file)).map_err(|source| CliError::Io {
        context: format!("writing {}", path.display()),
        source,
    })
}

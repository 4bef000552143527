//! Report types. Structured output serializes these as they are; text output
//! goes through their `Display` impls.

use std::fmt;

use eqcenter_core::harness::TrialSummary;
use eqcenter_core::{Error as CoreError, Point, Tolerance};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedSubspaceReport {
    pub dim: usize,
    pub base_point: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub order: usize,
    /// `permutations[k][i] = j` when the k-th symmetry sends vertex i to vertex j.
    pub permutations: Vec<Vec<usize>>,
    pub vertex_transitive: bool,
    pub fixed_subspace: FixedSubspaceReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub label: String,
    pub dimension: usize,
    pub tolerance: Tolerance,
    pub affinely_independent: bool,
    pub equifacetal: bool,
    pub symmetry: Option<SymmetryReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterRow {
    pub center: String,
    pub value: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

impl From<&CoreError> for ErrorInfo {
    fn from(e: &CoreError) -> Self {
        Self {
            kind: error_kind(e).to_string(),
            message: e.to_string(),
        }
    }
}

/// Stable machine-readable name of a core error.
pub fn error_kind(e: &CoreError) -> &'static str {
    match e {
        CoreError::DimensionMismatch { .. } => "dimension_mismatch",
        CoreError::CardinalityMismatch { .. } => "cardinality_mismatch",
        CoreError::VertexCount { .. } => "vertex_count",
        CoreError::NonFinite => "non_finite",
        CoreError::ZeroDimension => "zero_dimension",
        CoreError::NotOrthogonal { .. } => "not_orthogonal",
        CoreError::AffinelyDependent => "affinely_dependent",
        CoreError::AnchorNotFixed { .. } => "anchor_not_fixed",
        CoreError::OutOfDomain => "out_of_domain",
        CoreError::NotATriangle(_) => "not_a_triangle",
        CoreError::Collinear => "collinear",
        CoreError::InvalidConic => "invalid_conic",
        CoreError::NoAffineCenter => "no_affine_center",
        CoreError::NotEquifacetal => "not_equifacetal",
        CoreError::EquifacetalInput => "equifacetal_input",
        CoreError::UnsupportedDimension(..) => "unsupported_dimension",
        CoreError::NonPositiveParameter => "non_positive_parameter",
        CoreError::RegularParameters => "regular_parameters",
        CoreError::InvariantViolation(_) => "invariant_violation",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentersReport {
    pub label: String,
    pub dimension: usize,
    pub tolerance: Tolerance,
    pub centers: Vec<CenterRow>,
    /// Every evaluated center lies within `tol * (1 + diam)` of the centroid.
    pub coincide: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportReport {
    pub base: String,
    pub target: String,
    pub tolerance: Tolerance,
    pub anchor: Vec<f64>,
    pub group_order: usize,
    pub value: Vec<f64>,
}

/// `cmd_verify` reports the harness summary unchanged.
pub type VerifyReport = TrialSummary;

pub fn coords(p: &Point) -> Vec<f64> {
    p.coords().to_vec()
}

struct Vector<'a>(&'a [f64]);

impl fmt::Display for Vector<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn tolerance_line(f: &mut fmt::Formatter<'_>, tol: &Tolerance) -> fmt::Result {
    writeln!(f, "tolerance: abs {:e}, rel {:e}", tol.abs, tol.rel)
}

impl fmt::Display for AnalyzeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "simplex: {} (n = {})", self.label, self.dimension)?;
        tolerance_line(f, &self.tolerance)?;
        writeln!(
            f,
            "affinely independent: {}",
            yes_no(self.affinely_independent)
        )?;
        writeln!(f, "equifacetal: {}", yes_no(self.equifacetal))?;
        match &self.symmetry {
            Some(s) => {
                writeln!(f, "symmetry group order: {}", s.order)?;
                for p in &s.permutations {
                    let cells: Vec<String> = p.iter().map(usize::to_string).collect();
                    writeln!(f, "  [{}]", cells.join(" "))?;
                }
                writeln!(f, "vertex-transitive: {}", yes_no(s.vertex_transitive))?;
                let fs = &s.fixed_subspace;
                writeln!(f, "fixed subspace: dim {}", fs.dim)?;
                writeln!(f, "  base point: {}", Vector(&fs.base_point))?;
                for d in &fs.directions {
                    writeln!(f, "  direction: {}", Vector(d))?;
                }
                writeln!(f, "  max residual: {:e}", fs.max_residual)?;
            }
            None => {
                writeln!(
                    f,
                    "symmetry group: {}",
                    self.note.as_deref().unwrap_or("skipped")
                )?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for CentersReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "simplex: {} (n = {})", self.label, self.dimension)?;
        tolerance_line(f, &self.tolerance)?;
        let width = self
            .centers
            .iter()
            .map(|r| r.center.len())
            .max()
            .unwrap_or(0);
        for row in &self.centers {
            match (&row.value, &row.error) {
                (Some(v), _) => writeln!(f, "{:<width$}  {}", row.center, Vector(v))?,
                (None, Some(e)) => {
                    writeln!(f, "{:<width$}  {}: {}", row.center, e.kind, e.message)?
                }
                (None, None) => writeln!(f, "{:<width$}  -", row.center)?,
            }
        }
        writeln!(f, "all centers coincide: {}", yes_no(self.coincide))
    }
}

impl fmt::Display for TransportReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "base: {} (symmetry group order {})",
            self.base, self.group_order
        )?;
        writeln!(f, "anchor: {}", Vector(&self.anchor))?;
        writeln!(f, "target: {}", self.target)?;
        tolerance_line(f, &self.tolerance)?;
        writeln!(f, "value: {}", Vector(&self.value))
    }
}

/// Text rendering of a verify summary.
pub struct VerifyText<'a>(pub &'a VerifyReport);

impl fmt::Display for VerifyText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.0;
        writeln!(f, "seed: {}", s.seed)?;
        tolerance_line(f, &s.tolerance)?;
        writeln!(f, "random simplices per dimension: {}", s.count)?;
        writeln!(
            f,
            "{:>3}  {:>9}  {:>12}  {:>12}  {:>8}  {:>12}  {:>14}",
            "n",
            "instances",
            "coincidences",
            "certificates",
            "failures",
            "max residual",
            "min separation"
        )?;
        for d in &s.dims {
            let sep = d
                .min_separation
                .map_or_else(|| "-".to_string(), |x| format!("{x:.6e}"));
            writeln!(
                f,
                "{:>3}  {:>9}  {:>12}  {:>12}  {:>8}  {:>12.3e}  {:>14}",
                d.dim, d.instances, d.coincidences, d.certificates, d.failures, d.max_residual, sep
            )?;
        }
        for fail in &s.failures {
            writeln!(f, "FAIL n={} {}: {}", fail.dim, fail.instance, fail.message)?;
        }
        let verdict = if s.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "{verdict}: {} failure(s)", s.total_failures())
    }
}

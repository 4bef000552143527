/// Frobenius-norm bound on `QᵀQ - I` for a matrix to count as orthogonal.
pub const ORTHOGONALITY: f64 = 1e-8;

/// Singular values at or below `NULL_SPACE_REL * (σ_max + 1)` count as zero
/// when extracting fixed-point subspaces.
pub const NULL_SPACE_REL: f64 = 1e-7;

/// Absolute + relative tolerance shared by every comparison in the crate.
///
/// Two lengths `a`, `b` are equal iff `|a - b| <= abs + rel * max(|a|, |b|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-9,
            rel: 1e-9,
        }
    }
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    /// Same value for the absolute and relative parts.
    pub const fn uniform(tol: f64) -> Self {
        Self { abs: tol, rel: tol }
    }

    pub fn eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.bound(a.abs().max(b.abs()))
    }

    /// Admissible error for a quantity of magnitude `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale
    }

    /// The single scalar used by scale-multiplied checks such as
    /// `dist <= tol * (1 + diam)`.
    pub fn scalar(&self) -> f64 {
        self.abs.max(self.rel)
    }
}

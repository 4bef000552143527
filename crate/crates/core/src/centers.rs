//! Centers: maps `Z` from simplices to points with `Z(g·V) = g·Z(V)`.
//!
//! Every center here is a partial map with an explicit domain. Centroid and
//! h-weighted centers are total; triangle centers need a non-collinear
//! planar triangle; an orbit-transport center is defined exactly on the orbit
//! of its base simplex.

use alloc::vec::Vec;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::geometry::{self, Isometry, Point};
use crate::simplex::{apply_pointwise, Simplex};
use crate::symmetry::{register, symmetry_group};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TriangleCenter {
    Incenter,
    Orthocenter,
    Circumcenter,
}

impl TriangleCenter {
    pub const ALL: [TriangleCenter; 3] = [Self::Incenter, Self::Orthocenter, Self::Circumcenter];

    pub fn name(self) -> &'static str {
        match self {
            Self::Incenter => "incenter",
            Self::Orthocenter => "orthocenter",
            Self::Circumcenter => "circumcenter",
        }
    }
}

/// Orbit-transport center: `Z(g·base) = g·anchor`.
///
/// Only constructible through [`make_orbit_center`], which checks that the
/// anchor is fixed by every symmetry of the base; that is precisely what
/// makes the value independent of which `g` is used.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OrbitCenter {
    base: Simplex,
    anchor: Point,
}

impl OrbitCenter {
    pub fn base(&self) -> &Simplex {
        &self.base
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum CenterFunction {
    Centroid,
    HWeighted,
    OrbitTransport(OrbitCenter),
    Triangle { center: TriangleCenter },
}

impl CenterFunction {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Centroid => "centroid",
            Self::HWeighted => "h_weighted",
            Self::OrbitTransport(_) => "orbit_transport",
            Self::Triangle { center } => center.name(),
        }
    }

    pub fn evaluate(&self, w: &Simplex, tol: &Tolerance) -> Result<Point> {
        evaluate(self, w, tol)
    }
}

pub fn centroid(v: &Simplex) -> Point {
    Point::from_vector(geometry::mean(v.vertices()))
}

/// Distances `h_i` from each vertex to the centroid of the remaining ones.
pub fn vertex_heights(v: &Simplex) -> Vec<f64> {
    let pts = v.vertices();
    let m = pts.len() as f64;
    let total = geometry::mean(pts) * m;
    pts.iter()
        .map(|p| {
            let rest = (&total - p.as_vector()) / (m - 1.0);
            (p.as_vector() - rest).norm()
        })
        .collect()
}

/// `Σ (h_i / Σ h_j) V_i`, or the centroid when all vertices coincide.
pub fn h_weighted_center(v: &Simplex) -> Point {
    let h = vertex_heights(v);
    let sum: f64 = h.iter().sum();
    if sum == 0.0 {
        return centroid(v);
    }
    let mut acc = DVector::zeros(v.dim());
    for (p, w) in v.vertices().iter().zip(&h) {
        acc += p.as_vector() * (w / sum);
    }
    Point::from_vector(acc)
}

/// Validates `anchor` against every symmetry of `base`.
pub fn make_orbit_center(base: &Simplex, anchor: Point, tol: &Tolerance) -> Result<CenterFunction> {
    if anchor.dim() != base.dim() {
        return Err(Error::DimensionMismatch {
            expected: base.dim(),
            found: anchor.dim(),
        });
    }
    let group = symmetry_group(base, tol)?;
    let bound = tol.bound(base.magnitude().max(anchor.norm()));
    let mut worst: Option<(usize, f64)> = None;
    for (k, el) in group.elements().iter().enumerate() {
        let residual = el.isometry.apply(&anchor)?.distance(&anchor);
        if residual > bound && worst.is_none_or(|(_, r)| residual > r) {
            worst = Some((k, residual));
        }
    }
    if let Some((element, residual)) = worst {
        return Err(Error::AnchorNotFixed { element, residual });
    }
    Ok(CenterFunction::OrbitTransport(OrbitCenter {
        base: base.clone(),
        anchor,
    }))
}

pub fn evaluate(z: &CenterFunction, w: &Simplex, tol: &Tolerance) -> Result<Point> {
    match z {
        CenterFunction::Centroid => Ok(centroid(w)),
        CenterFunction::HWeighted => Ok(h_weighted_center(w)),
        CenterFunction::OrbitTransport(oc) => {
            let g = register(&oc.base, w, tol)?.ok_or(Error::OutOfDomain)?;
            g.apply(&oc.anchor)
        }
        CenterFunction::Triangle { center } => triangle_center(*center, w, tol),
    }
}

/// `dist(Z(g·V), g·Z(V)) <= tol · (1 + diam V)`.
pub fn check_equivariance(
    z: &CenterFunction,
    v: &Simplex,
    g: &Isometry,
    tol: &Tolerance,
) -> Result<bool> {
    let moved = apply_pointwise(g, v)?;
    let lhs = evaluate(z, &moved, tol)?;
    let rhs = g.apply(&evaluate(z, v, tol)?)?;
    Ok(lhs.distance(&rhs) <= tol.scalar() * (1.0 + v.diameter()))
}

fn cross(a: &[f64], b: &[f64]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Closed-form classical centers of a planar triangle.
pub fn triangle_center(kind: TriangleCenter, v: &Simplex, tol: &Tolerance) -> Result<Point> {
    if v.dim() != 2 {
        return Err(Error::NotATriangle(v.dim()));
    }
    let p = v.vertices();
    let (a, b, c) = (p[0].coords(), p[1].coords(), p[2].coords());
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ac = [c[0] - a[0], c[1] - a[1]];
    let det = cross(&ab, &ac);
    let diam = v.diameter();
    if det.abs() <= tol.bound(diam * diam) {
        return Err(Error::Collinear);
    }
    let out = match kind {
        TriangleCenter::Incenter => {
            let la = p[1].distance(&p[2]);
            let lb = p[0].distance(&p[2]);
            let lc = p[0].distance(&p[1]);
            let s = la + lb + lc;
            [
                (la * a[0] + lb * b[0] + lc * c[0]) / s,
                (la * a[1] + lb * b[1] + lc * c[1]) / s,
            ]
        }
        // (X - A)·(B - A) = |B - A|²/2 and (X - A)·(C - A) = |C - A|²/2
        TriangleCenter::Circumcenter => {
            let r1 = 0.5 * (ab[0] * ab[0] + ab[1] * ab[1]);
            let r2 = 0.5 * (ac[0] * ac[0] + ac[1] * ac[1]);
            let (x, y) = solve2([ab, ac], [r1, r2], det);
            [a[0] + x, a[1] + y]
        }
        // (X - A)·(C - B) = 0 and (X - B)·(C - A) = 0
        TriangleCenter::Orthocenter => {
            let bc = [c[0] - b[0], c[1] - b[1]];
            let ba = [a[0] - b[0], a[1] - b[1]];
            // offsets from A: (X-A)·bc = 0, (X-A)·ac = (B-A)·ac
            let r2 = -(ba[0] * ac[0] + ba[1] * ac[1]);
            let det2 = cross(&bc, &ac);
            let (x, y) = solve2([bc, ac], [0.0, r2], det2);
            [a[0] + x, a[1] + y]
        }
    };
    Point::new(out.to_vec())
}

/// Solves `rows · (x, y) = rhs` given `det = cross(rows[0], rows[1])`.
fn solve2(rows: [[f64; 2]; 2], rhs: [f64; 2], det: f64) -> (f64, f64) {
    let [[a, b], [c, d]] = rows;
    (
        (rhs[0] * d - b * rhs[1]) / det,
        (a * rhs[1] - c * rhs[0]) / det,
    )
}

/// A projective conic `x̄ᵀ A x̄ = 0` with symmetric, nonzero `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Conic {
    matrix: [[f64; 3]; 3],
}

impl Conic {
    pub fn new(matrix: [[f64; 3]; 3]) -> Result<Self> {
        let flat = matrix.iter().flatten();
        if flat.clone().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let largest = flat.fold(0.0_f64, |m, x| m.max(x.abs()));
        if largest == 0.0 {
            return Err(Error::InvalidConic);
        }
        for i in 0..3 {
            for j in 0..i {
                if (matrix[i][j] - matrix[j][i]).abs() > 1e-12 * largest {
                    return Err(Error::InvalidConic);
                }
            }
        }
        Ok(Self { matrix })
    }

    /// `a x² + 2b xy + c y² + 2d x + 2e y + f = 0`.
    pub fn from_coefficients(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<Self> {
        Self::new([[a, b, d], [b, c, e], [d, e, f]])
    }

    pub fn matrix(&self) -> &[[f64; 3]; 3] {
        &self.matrix
    }
}

/// Affine center of a conic: the pole of the line at infinity.
pub fn conic_center(conic: &Conic, tol: &Tolerance) -> Result<Point> {
    let [[a, b, d], [_, c, e], _] = conic.matrix;
    let det = a * c - b * b;
    let scale = a.abs().max(b.abs()).max(c.abs());
    if det.abs() <= tol.bound(scale * scale) {
        return Err(Error::NoAffineCenter);
    }
    let (x, y) = solve2([[a, b], [b, c]], [-d, -e], det);
    Point::new(alloc::vec![x, y])
}

/// Whether `p` is fixed by every symmetry of `v` (used by reports).
pub fn is_fixed_by_symmetries(v: &Simplex, p: &Point, tol: &Tolerance) -> Result<bool> {
    match make_orbit_center(v, p.clone(), tol) {
        Ok(_) => Ok(true),
        Err(Error::AnchorNotFixed { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

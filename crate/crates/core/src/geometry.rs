//! Points of `R^n`, isometries of `E(n)` and distance matrices.
//!
//! Isometries use the column-vector convention `p ↦ Q·p + t`.

use alloc::vec::Vec;
use core::fmt;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tolerance::ORTHOGONALITY;

/// A point of `R^n` with finite coordinates.
#[derive(Clone, PartialEq)]
pub struct Point(DVector<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(DVector::from_vec(coords)))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    pub fn origin(dim: usize) -> Self {
        Self(DVector::zeros(dim))
    }

    pub(crate) fn from_vector(v: DVector<f64>) -> Self {
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (&self.0 - &other.0).norm()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl core::ops::Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Mean of a nonempty list of equal-dimension points.
pub(crate) fn mean(points: &[Point]) -> DVector<f64> {
    let dim = points[0].dim();
    let mut acc = DVector::zeros(dim);
    for p in points {
        acc += p.as_vector();
    }
    acc / points.len() as f64
}

/// Largest pairwise distance; zero for fewer than two points.
pub fn diameter(points: &[Point]) -> f64 {
    let mut diam: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            diam = diam.max(points[i].distance(&points[j]));
        }
    }
    diam
}

/// Common dimension of a nonempty point list.
pub(crate) fn common_dim(points: &[Point]) -> Result<usize> {
    let dim = points.first().map(Point::dim).ok_or(Error::ZeroDimension)?;
    for p in points {
        p.check_dim(dim)?;
    }
    Ok(dim)
}

/// Pairwise Euclidean distances: symmetric, zero diagonal.
pub fn distance_matrix(points: &[Point]) -> Result<DMatrix<f64>> {
    if !points.is_empty() {
        common_dim(points)?;
    }
    let m = points.len();
    let mut d = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i + 1..m {
            let dist = points[i].distance(&points[j]);
            d[(i, j)] = dist;
            d[(j, i)] = dist;
        }
    }
    Ok(d)
}

/// Frobenius norm of `QᵀQ - I`.
pub(crate) fn orthogonality_defect(q: &DMatrix<f64>) -> f64 {
    let n = q.ncols();
    (q.transpose() * q - DMatrix::<f64>::identity(n, n)).norm()
}

/// An element of the Euclidean group `E(n)`: `p ↦ linear·p + translation`
/// with an orthogonal linear part (reflections included).
#[derive(Clone, PartialEq)]
pub struct Isometry {
    linear: DMatrix<f64>,
    translation: DVector<f64>,
}

impl Isometry {
    pub fn new(linear: DMatrix<f64>, translation: DVector<f64>) -> Result<Self> {
        let n = translation.len();
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if linear.nrows() != n || linear.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: linear.nrows().max(linear.ncols()),
            });
        }
        if linear
            .iter()
            .chain(translation.iter())
            .any(|x| !x.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let defect = orthogonality_defect(&linear);
        if defect > ORTHOGONALITY {
            return Err(Error::NotOrthogonal { defect });
        }
        Ok(Self {
            linear,
            translation,
        })
    }

    /// Build from row-major nested arrays.
    pub fn from_rows(linear: &[Vec<f64>], translation: &[f64]) -> Result<Self> {
        let n = translation.len();
        if linear.len() != n || linear.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: linear.len(),
            });
        }
        let q = DMatrix::from_fn(n, n, |i, j| linear[i][j]);
        Self::new(q, DVector::from_column_slice(translation))
    }

    pub(crate) fn from_parts_unchecked(linear: DMatrix<f64>, translation: DVector<f64>) -> Self {
        Self {
            linear,
            translation,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            linear: DMatrix::identity(dim, dim),
            translation: DVector::zeros(dim),
        }
    }

    pub fn translation(t: &[f64]) -> Result<Self> {
        let n = t.len();
        Self::new(DMatrix::identity(n, n), DVector::from_column_slice(t))
    }

    /// Counter-clockwise rotation of the plane by `angle` radians about the origin.
    pub fn rotation_2d(angle: f64) -> Self {
        let (s, c) = libm::sincos(angle);
        Self {
            linear: DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
            translation: DVector::zeros(2),
        }
    }

    /// Rotation of the plane by `angle` about `center`.
    pub fn rotation_2d_about(angle: f64, center: &Point) -> Result<Self> {
        center.check_dim(2)?;
        let rot = Self::rotation_2d(angle);
        let t = center.as_vector() - &rot.linear * center.as_vector();
        Ok(Self {
            linear: rot.linear,
            translation: t,
        })
    }

    /// Reflection across the hyperplane through the origin with the given normal.
    pub fn reflection(normal: &[f64]) -> Result<Self> {
        let v = Point::from_slice(normal)?;
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::NonPositiveParameter);
        }
        let u = v.as_vector() / norm;
        let n = u.len();
        let q = DMatrix::<f64>::identity(n, n) - (&u * u.transpose()) * 2.0;
        Self::new(q, DVector::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn linear(&self) -> &DMatrix<f64> {
        &self.linear
    }

    pub fn translation_part(&self) -> &DVector<f64> {
        &self.translation
    }

    pub fn determinant(&self) -> f64 {
        self.linear.determinant()
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        p.check_dim(self.dim())?;
        Ok(Point(&self.linear * p.as_vector() + &self.translation))
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Isometry {
            linear: &self.linear * &other.linear,
            translation: &self.linear * &other.translation + &self.translation,
        })
    }

    pub fn inverse(&self) -> Result<Isometry> {
        let defect = orthogonality_defect(&self.linear);
        if defect > ORTHOGONALITY {
            return Err(Error::NotOrthogonal { defect });
        }
        let qt = self.linear.transpose();
        let t = -(&qt * &self.translation);
        Ok(Isometry {
            linear: qt,
            translation: t,
        })
    }

    /// Entrywise closeness of both parts; translation errors are weighted by
    /// `scale`-relative tolerance, the linear part by `abs + rel`.
    pub fn approx_eq(&self, other: &Isometry, tol: &crate::Tolerance, scale: f64) -> bool {
        self.dim() == other.dim()
            && (&self.linear - &other.linear).amax() <= tol.bound(1.0)
            && (&self.translation - &other.translation).amax() <= tol.bound(scale)
    }

    /// Seeded random isometry. The linear part is the orthonormalized `Q`
    /// factor of a random matrix with entries in `[-1, 1]`, its determinant
    /// sign flipped with probability one half; translation entries lie in
    /// `[-translation_scale, translation_scale]`.
    pub fn random(seed: u64, dim: usize, translation_scale: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(&mut rng, dim, translation_scale)
    }

    pub(crate) fn random_with<R: Rng>(rng: &mut R, dim: usize, translation_scale: f64) -> Self {
        assert!(dim >= 1, "random isometry needs dim >= 1");
        loop {
            let a = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.random_range(-1.0..=1.0));
            let qr = a.qr();
            let r = qr.r();
            if (0..dim).any(|i| r[(i, i)].abs() < 1e-6) {
                continue;
            }
            let mut q = qr.q();
            // make the factorization unique (positive diagonal of R)
            for j in 0..dim {
                if r[(j, j)] < 0.0 {
                    q.column_mut(j).neg_mut();
                }
            }
            let want_negative = rng.random_bool(0.5);
            if (q.determinant() < 0.0) != want_negative {
                q.column_mut(0).neg_mut();
            }
            let translation = if translation_scale > 0.0 {
                DVector::from_fn(dim, |_, _| {
                    rng.random_range(-translation_scale..=translation_scale)
                })
            } else {
                DVector::zeros(dim)
            };
            return Self {
                linear: q,
                translation,
            };
        }
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<f64>> = self
            .linear
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect();
        f.debug_struct("Isometry")
            .field("linear", &rows)
            .field("translation", &self.translation.as_slice())
            .finish()
    }
}

#[cfg(feature = "serde")]
mod serde_impls {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    impl Serialize for Point {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            self.coords().serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for Point {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let coords = Vec::<f64>::deserialize(d)?;
            Point::new(coords).map_err(serde::de::Error::custom)
        }
    }

    #[derive(Serialize, Deserialize)]
    struct IsometryRepr {
        linear: Vec<Vec<f64>>,
        translation: Vec<f64>,
    }

    impl Serialize for Isometry {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            IsometryRepr {
                linear: self
                    .linear
                    .row_iter()
                    .map(|r| r.iter().copied().collect())
                    .collect(),
                translation: self.translation.as_slice().to_vec(),
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for Isometry {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let repr = IsometryRepr::deserialize(d)?;
            Isometry::from_rows(&repr.linear, &repr.translation).map_err(serde::de::Error::custom)
        }
    }
}

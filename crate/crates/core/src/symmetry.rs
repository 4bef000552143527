//! Rigid registration, symmetry groups of simplices and their fixed-point
//! subspaces.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{self, Isometry, Point};
use crate::linalg::{self, Svd};
use crate::simplex::{self, magnitude, Simplex};
use crate::tolerance::{Tolerance, NULL_SPACE_REL};

/// Least-squares rigid alignment `S[i] ↦ T[perm[i]]`.
///
/// The orthogonal factor comes from the SVD `H = U Σ Vᵀ` of the
/// cross-covariance of the centered sets. On the range of `H` it is `U Vᵀ`;
/// on the null directions it is completed by the orthogonal map closest to the
/// identity, so that directions left untouched by both sets stay fixed.
/// Reflections are allowed (the group is `E(n)`), so no determinant correction
/// is applied. Returns `None` when the largest residual exceeds
/// `tol.bound(magnitude)`.
pub fn register_correspondence(
    s: &[Point],
    t: &[Point],
    perm: &[usize],
    tol: &Tolerance,
) -> Result<Option<Isometry>> {
    if s.len() != t.len() || perm.len() != s.len() {
        return Err(Error::CardinalityMismatch {
            left: s.len(),
            right: t.len(),
        });
    }
    if s.is_empty() {
        return Err(Error::ZeroDimension);
    }
    let mut seen = alloc::vec![false; perm.len()];
    for &j in perm {
        if j >= perm.len() || seen[j] {
            return Err(Error::InvariantViolation(format!(
                "{perm:?} is not a permutation"
            )));
        }
        seen[j] = true;
    }
    let n = geometry::common_dim(s)?;
    let tn = geometry::common_dim(t)?;
    if n != tn {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: tn,
        });
    }

    let cs = geometry::mean(s);
    let ct = geometry::mean(t);
    let mut h = DMatrix::<f64>::zeros(n, n);
    for (i, p) in s.iter().enumerate() {
        let a = p.as_vector() - &cs;
        let b = t[perm[i]].as_vector() - &ct;
        h += &b * a.transpose();
    }

    let q = orthogonal_factor(h);
    let translation = &ct - &q * &cs;
    let g = Isometry::from_parts_unchecked(q, translation);

    let bound = tol.bound(magnitude(s).max(magnitude(t)));
    let mut worst: f64 = 0.0;
    for (i, p) in s.iter().enumerate() {
        let image = g.apply(p)?;
        worst = worst.max(image.distance(&t[perm[i]]));
    }
    if worst > bound {
        return Ok(None);
    }
    // re-validate orthogonality through the checked constructor
    match Isometry::new(g.linear().clone(), g.translation_part().clone()) {
        Ok(g) => Ok(Some(g)),
        Err(Error::NotOrthogonal { defect }) => Err(Error::InvariantViolation(format!(
            "registration produced a non-orthogonal factor (defect {defect:e})"
        ))),
        Err(e) => Err(e),
    }
}

const RANK_CUTOFF: f64 = 1e-12;

/// Orthogonal `Q` maximizing `tr(Qᵀ H)`, completed towards the identity on
/// the null space of `H`.
fn orthogonal_factor(h: DMatrix<f64>) -> DMatrix<f64> {
    let n = h.nrows();
    let Svd { u, sigma, v } = linalg::svd(&h);
    // only numerically zero singular values; small genuine ones carry data
    let cutoff = RANK_CUTOFF * sigma[0];
    let rank = (0..n)
        .filter(|&i| sigma[0] > 0.0 && sigma[i] > cutoff)
        .count();

    let mut q = u.columns(0, rank) * v.columns(0, rank).transpose();
    if rank < n {
        let u_null = u.columns(rank, n - rank);
        let v_null = v.columns(rank, n - rank);
        // polar factor of U_⊥ᵀ V_⊥ is the rotation of the null block closest to I
        let polar = linalg::svd(&(u_null.transpose() * v_null));
        let rot = &polar.u * polar.v.transpose();
        q += u_null * rot * v_null.transpose();
    }
    q
}

/// One symmetry: `isometry · base[i] = base[perm[i]]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SymmetryElement {
    pub isometry: Isometry,
    pub perm: Vec<usize>,
}

/// The stabilizer of an affinely independent simplex in `E(n)`.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    base: Simplex,
    elements: Vec<SymmetryElement>,
}

impl SymmetryGroup {
    pub fn base(&self) -> &Simplex {
        &self.base
    }

    pub fn elements(&self) -> &[SymmetryElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_vertex_transitive(&self) -> bool {
        is_vertex_transitive(self)
    }

    pub fn fixed_subspace(&self, tol: &Tolerance) -> AffineSubspace {
        fixed_subspace(self, tol)
    }

    /// Checks identity, inverses and closure.
    ///
    /// Closure is verified against a greedily chosen generating set: the
    /// subgroup generated inside the element list must be the whole list, and
    /// every product met along the way must match the stored isometry.
    fn validate(&self, tol: &Tolerance) -> Result<()> {
        let m = self.base.vertices().len();
        let scale = self.base.magnitude();
        let index: BTreeMap<&[usize], usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.perm.as_slice(), i))
            .collect();
        if index.len() != self.elements.len() {
            return Err(violation("duplicate permutation in symmetry group"));
        }
        let identity: Vec<usize> = (0..m).collect();
        let e = *index
            .get(identity.as_slice())
            .ok_or_else(|| violation("symmetry group lacks the identity"))?;
        if !self.elements[e]
            .isometry
            .approx_eq(&Isometry::identity(self.base.dim()), tol, scale)
        {
            return Err(violation(
                "identity permutation carries a non-identity isometry",
            ));
        }

        for el in &self.elements {
            let mut inv = alloc::vec![0; m];
            for (i, &j) in el.perm.iter().enumerate() {
                inv[j] = i;
            }
            let k = *index
                .get(inv.as_slice())
                .ok_or_else(|| violation("symmetry group not closed under inverse"))?;
            if !el
                .isometry
                .inverse()?
                .approx_eq(&self.elements[k].isometry, tol, scale)
            {
                return Err(violation("inverse isometry does not match stored element"));
            }
        }

        let mut generators: Vec<usize> = Vec::new();
        let mut reached = alloc::vec![false; self.elements.len()];
        reached[e] = true;
        for candidate in 0..self.elements.len() {
            if reached[candidate] {
                continue;
            }
            generators.push(candidate);
            reached.iter_mut().for_each(|r| *r = false);
            reached[e] = true;
            let mut queue = alloc::vec![e];
            while let Some(x) = queue.pop() {
                for &s in &generators {
                    let (px, ps) = (&self.elements[x].perm, &self.elements[s].perm);
                    let product: Vec<usize> = ps.iter().map(|&j| px[j]).collect();
                    let k = *index
                        .get(product.as_slice())
                        .ok_or_else(|| violation("symmetry group not closed under composition"))?;
                    let composed = self.elements[x]
                        .isometry
                        .compose(&self.elements[s].isometry)?;
                    if !composed.approx_eq(&self.elements[k].isometry, tol, scale) {
                        return Err(violation("composed isometry does not match stored element"));
                    }
                    if !reached[k] {
                        reached[k] = true;
                        queue.push(k);
                    }
                }
            }
        }
        Ok(())
    }
}

fn violation(msg: &str) -> Error {
    Error::InvariantViolation(msg.into())
}

/// Symmetry group of an affinely independent simplex.
///
/// Every vertex permutation that preserves the distance matrix is registered;
/// for an affinely independent simplex each such permutation is realized by
/// exactly one isometry.
pub fn symmetry_group(v: &Simplex, tol: &Tolerance) -> Result<SymmetryGroup> {
    if !simplex::is_affinely_independent(v, tol) {
        return Err(Error::AffinelyDependent);
    }
    let pts = v.vertices();
    let mut elements = Vec::new();
    let mut failure = None;
    simplex::for_each_distance_preserving_perm(pts, pts, tol, |perm| {
        match register_correspondence(pts, pts, perm, tol) {
            Ok(Some(isometry)) => elements.push(SymmetryElement {
                isometry,
                perm: perm.to_vec(),
            }),
            Ok(None) => {}
            Err(e) => {
                failure = Some(e);
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let group = SymmetryGroup {
        base: v.clone(),
        elements,
    };
    group.validate(tol)?;
    Ok(group)
}

/// Affine subspace `base_point + span(directions)` with orthonormal directions.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AffineSubspace {
    pub base_point: Point,
    pub directions: Vec<Point>,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base_point.dim()
    }

    /// Orthogonal projection of `p` onto the subspace.
    pub fn project(&self, p: &Point) -> Result<Point> {
        if p.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: p.dim(),
            });
        }
        let offset = p.as_vector() - self.base_point.as_vector();
        let mut out = self.base_point.as_vector().clone();
        for d in &self.directions {
            out += d.as_vector() * d.as_vector().dot(&offset);
        }
        Ok(Point::from_vector(out))
    }

    pub fn distance_to(&self, p: &Point) -> Result<f64> {
        Ok(self.project(p)?.distance(p))
    }

    /// Largest displacement `|g·x - x|` over the group elements and the probe
    /// points `base_point`, `base_point + direction`.
    pub fn max_residual(&self, group: &SymmetryGroup) -> f64 {
        let mut probes = alloc::vec![self.base_point.clone()];
        for d in &self.directions {
            probes.push(Point::from_vector(
                self.base_point.as_vector() + d.as_vector(),
            ));
        }
        let mut worst: f64 = 0.0;
        for el in group.elements() {
            for p in &probes {
                if let Ok(q) = el.isometry.apply(p) {
                    worst = worst.max(q.distance(p));
                }
            }
        }
        worst
    }
}

/// Points fixed by every element of `group`.
///
/// Solves the stacked system `(Q_k - I)·p = -t_k` by SVD. Singular values at
/// or below `max(NULL_SPACE_REL·(σ_max + 1), tol.abs)` count as zero; the base
/// point is the minimum-norm least-squares solution and the directions span
/// the common null space.
pub fn fixed_subspace(group: &SymmetryGroup, tol: &Tolerance) -> AffineSubspace {
    let n = group.base.dim();
    let rows = group.elements.len() * n;
    let mut a = DMatrix::<f64>::zeros(rows, n);
    let mut b = DVector::<f64>::zeros(rows);
    for (k, el) in group.elements.iter().enumerate() {
        let q = el.isometry.linear();
        let t = el.isometry.translation_part();
        for i in 0..n {
            for j in 0..n {
                a[(k * n + i, j)] = q[(i, j)] - if i == j { 1.0 } else { 0.0 };
            }
            b[k * n + i] = -t[i];
        }
    }
    let Svd { u, sigma, v } = linalg::svd(&a);
    let cutoff = (NULL_SPACE_REL * (sigma[0] + 1.0)).max(tol.abs);

    let mut x = DVector::<f64>::zeros(n);
    let mut directions = Vec::new();
    for i in 0..n {
        let v_i = v.column(i).into_owned();
        if sigma[i] > cutoff {
            x += &v_i * (u.column(i).dot(&b) / sigma[i]);
        } else {
            directions.push(Point::from_vector(v_i));
        }
    }
    AffineSubspace {
        base_point: Point::from_vector(x),
        directions,
    }
}

/// True iff the permutation parts act on the vertices with a single orbit.
pub fn is_vertex_transitive(group: &SymmetryGroup) -> bool {
    let m = group.base.vertices().len();
    let mut seen = alloc::vec![false; m];
    seen[0] = true;
    let mut stack = alloc::vec![0usize];
    while let Some(i) = stack.pop() {
        for el in &group.elements {
            let j = el.perm[i];
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Some `g` with `g·V = W` as point multisets, or `None` when `V` and `W`
/// are not congruent.
pub fn register(v: &Simplex, w: &Simplex, tol: &Tolerance) -> Result<Option<Isometry>> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            found: w.dim(),
        });
    }
    if !simplex::is_affinely_independent(v, tol) {
        return Err(Error::AffinelyDependent);
    }
    Ok(simplex::congruent(v.vertices(), w.vertices(), tol)?.map(|c| c.isometry))
}

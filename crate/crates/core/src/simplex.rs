//! Simplices as lists of `n + 1` points of `R^n`, their facets, and
//! point-set congruence.
//!
//! Vertex order is a representation detail: coincident vertices are allowed
//! and every computed quantity is invariant under reordering.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::ControlFlow;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::{self, distance_matrix, Isometry, Point};
use crate::symmetry::register_correspondence;
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Simplex {
    dim: usize,
    vertices: Vec<Point>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let dim = geometry::common_dim(&vertices)?;
        if vertices.len() != dim + 1 {
            return Err(Error::VertexCount {
                dim,
                expected: dim + 1,
                found: vertices.len(),
            });
        }
        Ok(Self { dim, vertices })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let vertices = rows
            .iter()
            .map(|r| Point::from_slice(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn diameter(&self) -> f64 {
        geometry::diameter(&self.vertices)
    }

    /// Largest vertex norm; the magnitude that rounding errors scale with.
    pub fn magnitude(&self) -> f64 {
        magnitude(&self.vertices)
    }

    /// The `n + 1` facets, facet `k` being the vertices with index `k` removed.
    pub fn facets(&self) -> Vec<Vec<Point>> {
        facets(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Simplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Repr {
            vertices: Vec<Point>,
        }
        let repr = Repr::deserialize(d)?;
        Simplex::new(repr.vertices).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn magnitude(points: &[Point]) -> f64 {
    points.iter().map(Point::norm).fold(0.0, f64::max)
}

/// A congruence witness: `isometry · source[i] = target[perm[i]]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Correspondence {
    pub perm: Vec<usize>,
    pub isometry: Isometry,
}

pub fn facets(v: &Simplex) -> Vec<Vec<Point>> {
    (0..v.vertices.len())
        .map(|k| {
            v.vertices
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect()
}

/// Image of `v` under `g`, vertex by vertex.
pub fn apply_pointwise(g: &Isometry, v: &Simplex) -> Result<Simplex> {
    let vertices = v
        .vertices
        .iter()
        .map(|p| g.apply(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(Simplex {
        dim: v.dim,
        vertices,
    })
}

/// True iff the edge vectors from vertex 0 have smallest singular value above
/// `tol.abs + tol.rel · diam(V)`.
pub fn is_affinely_independent(v: &Simplex, tol: &Tolerance) -> bool {
    let n = v.dim;
    let base = v.vertices[0].as_vector();
    let edges = DMatrix::from_fn(n, n, |i, j| v.vertices[j + 1][i] - base[i]);
    let smallest = crate::linalg::singular_values(&edges)
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    smallest > tol.bound(v.diameter())
}

/// True iff every facet is congruent to facet 0.
pub fn is_equifacetal(v: &Simplex, tol: &Tolerance) -> bool {
    let fs = facets(v);
    fs[1..]
        .iter()
        .all(|f| matches!(congruent(&fs[0], f, tol), Ok(Some(_))))
}

/// Searches for a permutation `π` and isometry `g` with `g·S[i] = T[π(i)]`.
pub fn congruent(s: &[Point], t: &[Point], tol: &Tolerance) -> Result<Option<Correspondence>> {
    let mut found = None;
    for_each_distance_preserving_perm(s, t, tol, |perm| {
        match register_correspondence(s, t, perm, tol) {
            Ok(Some(isometry)) => {
                found = Some(Ok(Correspondence {
                    perm: perm.to_vec(),
                    isometry,
                }));
                ControlFlow::Break(())
            }
            Ok(None) => ControlFlow::Continue(()),
            Err(e) => {
                found = Some(Err(e));
                ControlFlow::Break(())
            }
        }
    })?;
    found.transpose()
}

/// Multiset equality of two point lists at tolerance `tol.bound(scale)`.
pub fn same_points(a: &[Point], b: &[Point], tol: &Tolerance) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let bound = tol.bound(magnitude(a).max(magnitude(b)));
    let mut used = alloc::vec![false; b.len()];
    fn go(i: usize, a: &[Point], b: &[Point], used: &mut [bool], bound: f64) -> bool {
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if !used[j] && a[i].dim() == b[j].dim() && a[i].distance(&b[j]) <= bound {
                used[j] = true;
                if go(i + 1, a, b, used, bound) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(0, a, b, &mut used, bound)
}

/// Sorted distance row of each point: a permutation-invariant vertex label.
fn signatures(d: &DMatrix<f64>) -> Vec<Vec<f64>> {
    d.row_iter()
        .map(|row| {
            let mut r: Vec<f64> = row.iter().copied().collect();
            r.sort_by(f64::total_cmp);
            r
        })
        .collect()
}

fn signatures_match(a: &[f64], b: &[f64], tol: &Tolerance) -> bool {
    a.iter().zip(b).all(|(&x, &y)| tol.eq(x, y))
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Visits every bijection `π : S → T` with `|S_i S_j| = |T_π(i) T_π(j)|`
/// (within `tol`) until the visitor breaks.
///
/// Backtracks over the source vertices in order of their sorted distance rows,
/// pruning a target candidate whenever its own sorted row differs or a
/// distance to an already placed vertex disagrees.
pub(crate) fn for_each_distance_preserving_perm<F>(
    s: &[Point],
    t: &[Point],
    tol: &Tolerance,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if s.len() != t.len() {
        return Err(Error::CardinalityMismatch {
            left: s.len(),
            right: t.len(),
        });
    }
    if s.is_empty() {
        return Ok(());
    }
    let dim = geometry::common_dim(s)?;
    let tdim = geometry::common_dim(t)?;
    if dim != tdim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: tdim,
        });
    }

    let ds = distance_matrix(s)?;
    let dt = distance_matrix(t)?;
    let sig_s = signatures(&ds);
    let sig_t = signatures(&dt);
    let m = s.len();

    let candidates: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| signatures_match(&sig_s[i], &sig_t[j], tol))
                .collect()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(());
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| lex_cmp(&sig_s[a], &sig_s[b]));

    let mut perm = alloc::vec![usize::MAX; m];
    let mut used = alloc::vec![false; m];

    struct Search<'a, F> {
        ds: &'a DMatrix<f64>,
        dt: &'a DMatrix<f64>,
        candidates: &'a [Vec<usize>],
        order: &'a [usize],
        tol: &'a Tolerance,
        visit: F,
    }

    impl<F: FnMut(&[usize]) -> ControlFlow<()>> Search<'_, F> {
        fn step(&mut self, depth: usize, perm: &mut [usize], used: &mut [bool]) -> ControlFlow<()> {
            if depth == self.order.len() {
                return (self.visit)(perm);
            }
            let i = self.order[depth];
            for &j in &self.candidates[i] {
                if used[j] {
                    continue;
                }
                let consistent = self.order[..depth]
                    .iter()
                    .all(|&k| self.tol.eq(self.ds[(i, k)], self.dt[(j, perm[k])]));
                if !consistent {
                    continue;
                }
                perm[i] = j;
                used[j] = true;
                self.step(depth + 1, perm, used)?;
                used[j] = false;
                perm[i] = usize::MAX;
            }
            ControlFlow::Continue(())
        }
    }

    let mut search = Search {
        ds: &ds,
        dt: &dt,
        candidates: &candidates,
        order: &order,
        tol,
        visit: &mut visit,
    };
    let _ = search.step(0, &mut perm, &mut used);
    Ok(())
}

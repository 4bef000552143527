//! Desk-scale check that all centers of a simplex agree exactly when the
//! simplex is equifacetal.
//!
//! Equifacetal inputs get a [`CoincidenceReport`]; every other input gets a
//! [`Certificate`]: a concrete, equivariance-checked center whose value
//! differs from the centroid.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::centers::{
    centroid, check_equivariance, h_weighted_center, make_orbit_center, triangle_center,
    CenterFunction, TriangleCenter,
};
use crate::error::{Error, Result};
use crate::geometry::{Isometry, Point};
use crate::simplex::{is_affinely_independent, is_equifacetal, Simplex};
use crate::symmetry::{fixed_subspace, symmetry_group};
use crate::tolerance::Tolerance;

pub const MAX_REGULAR_DIM: usize = 7;

/// Random isometries each certificate witness is checked against.
pub const CERTIFICATE_EQUIVARIANCE_TRIALS: usize = 100;
const CERTIFICATE_SEED: u64 = 0x00c0_ffee;

/// Certificates must separate the two values by at least this multiple of
/// the tolerance.
pub const SEPARATION_FACTOR: f64 = 1e3;

/// Regular `n`-simplex with unit edges, centered at the origin.
///
/// The vertices `e_i / √2` of `R^{n+1}` are expressed in the Helmert basis
/// of the hyperplane `Σ x = 0`.
pub fn regular_simplex(n: usize) -> Result<Simplex> {
    if !(1..=MAX_REGULAR_DIM).contains(&n) {
        return Err(Error::UnsupportedDimension(n, 1, MAX_REGULAR_DIM));
    }
    let vertices = (0..=n)
        .map(|i| {
            let coords = (1..=n)
                .map(|k| {
                    let norm = libm::sqrt((k * (k + 1)) as f64);
                    let entry = match i.cmp(&k) {
                        core::cmp::Ordering::Less => 1.0,
                        core::cmp::Ordering::Equal => -(k as f64),
                        core::cmp::Ordering::Greater => 0.0,
                    };
                    entry / norm / core::f64::consts::SQRT_2
                })
                .collect();
            Point::new(coords)
        })
        .collect::<Result<Vec<_>>>()?;
    Simplex::new(vertices)
}

/// The tetrahedron `(x,y,z), (x,−y,−z), (−x,y,−z), (−x,−y,z)`; opposite edges
/// are equal, so it is equifacetal. With all parameters equal it is regular,
/// which is rejected unless `allow_regular` is set.
pub fn isosceles_tetrahedron(x: f64, y: f64, z: f64, allow_regular: bool) -> Result<Simplex> {
    if !(x > 0.0 && y > 0.0 && z > 0.0) {
        return Err(Error::NonPositiveParameter);
    }
    if !allow_regular && x == y && y == z {
        return Err(Error::RegularParameters);
    }
    Simplex::from_rows(&[[x, y, z], [x, -y, -z], [-x, y, -z], [-x, -y, z]])
}

/// Seeded simplex with coordinates in `[-1, 1]`, resampled until affinely
/// independent at the default tolerance.
pub fn random_simplex(n: usize, seed: u64) -> Simplex {
    assert!(n >= 1, "random simplex needs n >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = Tolerance::default();
    loop {
        let vertices = (0..=n)
            .map(|_| {
                let coords = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
                Point::new(coords).expect("finite sample")
            })
            .collect();
        let v = Simplex::new(vertices).expect("n + 1 points of R^n");
        if is_affinely_independent(&v, &tol) {
            return v;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CenterCheck {
    pub center: String,
    pub value: Point,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CoincidenceReport {
    pub simplex: Simplex,
    pub the_point: Point,
    pub affinely_independent: bool,
    pub group_order: Option<usize>,
    pub fixed_dim: Option<usize>,
    pub centers_checked: Vec<CenterCheck>,
}

impl CoincidenceReport {
    pub fn max_residual(&self) -> f64 {
        self.centers_checked
            .iter()
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Certificate {
    pub simplex: Simplex,
    pub centroid_value: Point,
    pub witness_center: CenterFunction,
    pub witness_value: Point,
    pub separation: f64,
}

/// Evaluates the total centers on an equifacetal simplex and checks that they
/// agree with each other and, for affinely independent input, with the unique
/// point fixed by its symmetry group.
pub fn verify_coincidence(v: &Simplex, tol: &Tolerance) -> Result<CoincidenceReport> {
    if !is_equifacetal(v, tol) {
        return Err(Error::NotEquifacetal);
    }
    let independent = is_affinely_independent(v, tol);
    let (the_point, group_order, fixed_dim) = if independent {
        let group = symmetry_group(v, tol)?;
        let fixed = fixed_subspace(&group, tol);
        if fixed.dim() != 0 {
            return Err(Error::InvariantViolation(format!(
                "equifacetal simplex has a {}-dimensional fixed subspace",
                fixed.dim()
            )));
        }
        (fixed.base_point, Some(group.order()), Some(0))
    } else {
        (centroid(v), None, None)
    };

    let mut values = alloc::vec![
        ("centroid", centroid(v)),
        ("h_weighted", h_weighted_center(v)),
    ];
    if independent && v.dim() == 2 {
        for kind in TriangleCenter::ALL {
            values.push((kind.name(), triangle_center(kind, v, tol)?));
        }
    }
    let bound = tol.scalar() * (1.0 + v.diameter());
    let mut centers_checked = Vec::with_capacity(values.len());
    for (name, value) in values {
        let residual = value.distance(&the_point);
        if residual > bound {
            return Err(Error::InvariantViolation(format!(
                "{name} misses the common point by {residual:e} on an equifacetal simplex"
            )));
        }
        centers_checked.push(CenterCheck {
            center: name.into(),
            value,
            residual,
        });
    }
    Ok(CoincidenceReport {
        simplex: v.clone(),
        the_point,
        affinely_independent: independent,
        group_order,
        fixed_dim,
        centers_checked,
    })
}

/// Builds a center whose value at the non-equifacetal simplex `v` differs
/// from its centroid.
///
/// Affinely dependent input uses the h-weighted center. Independent input
/// moves from the centroid by `diam(V)` along the first direction of the
/// symmetry group's fixed subspace and wraps that point in an orbit-transport
/// center. The witness is re-checked for equivariance before returning.
pub fn certificate_of_noncoincidence(v: &Simplex, tol: &Tolerance) -> Result<Certificate> {
    if is_equifacetal(v, tol) {
        return Err(Error::EquifacetalInput);
    }
    let c = centroid(v);
    let diam = v.diameter();
    let (witness_center, witness_value) = if !is_affinely_independent(v, tol) {
        let h = crate::centers::vertex_heights(v);
        let (lo, hi) = h.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
        if hi - lo <= tol.bound(hi) {
            return Err(Error::InvariantViolation(format!(
                "dependent non-equifacetal simplex with all vertex heights equal ({hi:e}); \
                 the h-weighted center coincides with the centroid"
            )));
        }
        (CenterFunction::HWeighted, h_weighted_center(v))
    } else {
        let group = symmetry_group(v, tol)?;
        let fixed = fixed_subspace(&group, tol);
        let Some(u) = fixed.directions.first() else {
            return Err(Error::InvariantViolation(
                "non-equifacetal independent simplex has a single fixed point".into(),
            ));
        };
        let q = Point::new(
            (c.as_vector() + u.as_vector() * diam)
                .iter()
                .copied()
                .collect(),
        )?;
        let z = make_orbit_center(v, q, tol)?;
        let value = z.evaluate(v, tol)?;
        (z, value)
    };

    let separation = witness_value.distance(&c);
    if separation <= tol.scalar() * (1.0 + diam) {
        return Err(Error::InvariantViolation(format!(
            "witness separation {separation:e} is within tolerance"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CERTIFICATE_SEED);
    for trial in 0..CERTIFICATE_EQUIVARIANCE_TRIALS {
        let g = Isometry::random_with(&mut rng, v.dim(), 1.0 + diam);
        if !check_equivariance(&witness_center, v, &g, tol)? {
            return Err(Error::InvariantViolation(format!(
                "certificate witness failed equivariance on trial {trial}"
            )));
        }
    }
    Ok(Certificate {
        simplex: v.clone(),
        centroid_value: c,
        witness_center,
        witness_value,
        separation,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DimSummary {
    pub dim: usize,
    pub instances: usize,
    pub coincidences: usize,
    pub certificates: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub min_separation: Option<f64>,
}

impl DimSummary {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            instances: 0,
            coincidences: 0,
            certificates: 0,
            failures: 0,
            max_residual: 0.0,
            min_separation: None,
        }
    }

    fn merge(&mut self, other: &DimSummary) {
        self.instances += other.instances;
        self.coincidences += other.coincidences;
        self.certificates += other.certificates;
        self.failures += other.failures;
        self.max_residual = self.max_residual.max(other.max_residual);
        self.min_separation = match (self.min_separation, other.min_separation) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TrialFailure {
    pub dim: usize,
    pub instance: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TrialSummary {
    pub seed: u64,
    pub tolerance: Tolerance,
    pub count: usize,
    pub dims: Vec<DimSummary>,
    pub failures: Vec<TrialFailure>,
}

impl TrialSummary {
    pub fn empty(seed: u64, tolerance: Tolerance, count: usize) -> Self {
        Self {
            seed,
            tolerance,
            count,
            dims: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn total_failures(&self) -> usize {
        self.failures.len()
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn dim(&self, dim: usize) -> Option<&DimSummary> {
        self.dims.iter().find(|d| d.dim == dim)
    }

    /// Order-independent merge: `a.merge(b)` and `b.merge(a)` agree.
    pub fn merge(&mut self, other: TrialSummary) {
        for d in &other.dims {
            match self.dims.iter_mut().find(|x| x.dim == d.dim) {
                Some(x) => x.merge(d),
                None => self.dims.push(d.clone()),
            }
        }
        self.dims.sort_by_key(|d| d.dim);
        self.failures.extend(other.failures);
        self.failures.sort();
    }
}

/// A trial instance with what its generator guarantees.
struct Instance {
    label: String,
    simplex: Simplex,
    equifacetal: Option<bool>,
    independent: Option<bool>,
    separation: Option<f64>,
}

fn canned_instances(n: usize) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    if n <= MAX_REGULAR_DIM {
        out.push(Instance {
            label: format!("regular_simplex({n})"),
            simplex: regular_simplex(n)?,
            equifacetal: Some(true),
            independent: Some(true),
            separation: None,
        });
    }
    if n == 2 {
        out.push(Instance {
            label: "coincident_pair[(0,0),(0,0),(3,0)]".into(),
            simplex: Simplex::from_rows(&[[0.0, 0.0], [0.0, 0.0], [3.0, 0.0]])?,
            equifacetal: Some(false),
            independent: Some(false),
            separation: Some(0.5),
        });
        out.push(Instance {
            label: "isosceles[(-1,0),(1,0),(0,2)]".into(),
            simplex: Simplex::from_rows(&[[-1.0, 0.0], [1.0, 0.0], [0.0, 2.0]])?,
            equifacetal: Some(false),
            independent: Some(true),
            separation: None,
        });
        out.push(Instance {
            label: "scalene[3-4-5]".into(),
            simplex: Simplex::from_rows(&[[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]])?,
            equifacetal: Some(false),
            independent: Some(true),
            separation: None,
        });
    }
    if n == 3 {
        for (x, y, z) in [(1.0, 2.0, 3.0), (1.0, 1.0, 2.0), (0.5, 1.5, 2.5)] {
            out.push(Instance {
                label: format!("isosceles_tetrahedron({x},{y},{z})"),
                simplex: isosceles_tetrahedron(x, y, z, false)?,
                equifacetal: Some(true),
                independent: Some(true),
                separation: None,
            });
        }
    }
    Ok(out)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of the `index`-th random simplex in dimension `dim`.
pub fn instance_seed(seed: u64, dim: usize, index: usize) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(dim as u64)).wrapping_add(index as u64))
}

fn run_instance(
    inst: &Instance,
    tol: &Tolerance,
    acc: &mut DimSummary,
) -> core::result::Result<(), String> {
    let independent = is_affinely_independent(&inst.simplex, tol);
    let equifacetal = is_equifacetal(&inst.simplex, tol);
    if let Some(want) = inst.independent {
        if want != independent {
            return Err(format!(
                "generator guarantees affinely_independent = {want}, judged {independent} at this tolerance"
            ));
        }
    }
    if let Some(want) = inst.equifacetal {
        if want != equifacetal {
            return Err(format!(
                "generator guarantees equifacetal = {want}, judged {equifacetal} at this tolerance"
            ));
        }
    }
    if equifacetal {
        let report = verify_coincidence(&inst.simplex, tol).map_err(|e| format!("{e}"))?;
        acc.coincidences += 1;
        acc.max_residual = acc.max_residual.max(report.max_residual());
    } else {
        let cert = certificate_of_noncoincidence(&inst.simplex, tol).map_err(|e| format!("{e}"))?;
        let floor = SEPARATION_FACTOR * tol.scalar();
        if cert.separation < floor {
            return Err(format!(
                "certificate separation {:e} below {floor:e}",
                cert.separation
            ));
        }
        if let Some(want) = inst.separation {
            if (cert.separation - want).abs() > 1e-12 {
                return Err(format!(
                    "certificate separation {} differs from expected {want}",
                    cert.separation
                ));
            }
        }
        acc.certificates += 1;
        acc.min_separation = Some(
            acc.min_separation
                .map_or(cert.separation, |m| m.min(cert.separation)),
        );
    }
    Ok(())
}

/// Runs the canned families plus `count` random simplices per dimension.
/// Per-instance failures are collected, never fatal; the result depends only
/// on the arguments.
pub fn run_trials(dims: &[usize], count: usize, seed: u64, tol: &Tolerance) -> TrialSummary {
    let mut summary = TrialSummary::empty(seed, *tol, count);
    for &n in dims {
        summary.merge(run_dimension(n, count, seed, tol));
    }
    summary
}

/// The trials of a single dimension; summaries of different dimensions can
/// be computed independently and combined with [`TrialSummary::merge`].
pub fn run_dimension(n: usize, count: usize, seed: u64, tol: &Tolerance) -> TrialSummary {
    let mut summary = TrialSummary::empty(seed, *tol, count);
    let mut acc = DimSummary::new(n);
    if n == 0 {
        summary.failures.push(TrialFailure {
            dim: n,
            instance: "-".into(),
            message: "dimension must be at least 1".into(),
        });
        acc.failures += 1;
        summary.dims.push(acc);
        return summary;
    }
    let mut instances = match canned_instances(n) {
        Ok(v) => v,
        Err(e) => {
            summary.failures.push(TrialFailure {
                dim: n,
                instance: "canned".into(),
                message: format!("{e}"),
            });
            Vec::new()
        }
    };
    for i in 0..count {
        instances.push(Instance {
            label: format!("random[{i}]"),
            simplex: random_simplex(n, instance_seed(seed, n, i)),
            equifacetal: None,
            independent: Some(true),
            separation: None,
        });
    }
    for inst in &instances {
        acc.instances += 1;
        if let Err(message) = run_instance(inst, tol, &mut acc) {
            acc.failures += 1;
            summary.failures.push(TrialFailure {
                dim: n,
                instance: inst.label.clone(),
                message,
            });
        }
    }
    summary.dims.push(acc);
    summary.failures.sort();
    summary
}

/// Fixed point of the symmetry group as a plain vector (test helper for callers
/// that do not want to build the group themselves).
pub fn unique_fixed_point(v: &Simplex, tol: &Tolerance) -> Result<Option<DVector<f64>>> {
    let group = symmetry_group(v, tol)?;
    let f = fixed_subspace(&group, tol);
    Ok((f.dim() == 0).then(|| f.base_point.as_vector().clone()))
}

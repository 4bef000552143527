use std::path::Path;

use eqcenter_core::centers::{
    centroid, evaluate, h_weighted_center, make_orbit_center, triangle_center, CenterFunction,
};
use eqcenter_core::harness::run_trials;
use eqcenter_core::simplex::{is_affinely_independent, is_equifacetal};
use eqcenter_core::symmetry::{fixed_subspace, is_vertex_transitive, symmetry_group};
use eqcenter_core::{Point, Simplex, Tolerance, TriangleCenter};

use crate::error::CliError;
use crate::format::{self, SimplexFile};
use crate::report::{
    coords, AnalyzeReport, CenterRow, CentersReport, ErrorInfo, FixedSubspaceReport,
    SymmetryReport, TransportReport, VerifyReport,
};

pub const STABILIZER_SKIPPED: &str = "stabilizer infinite — skipped";

fn load(path: &Path) -> Result<(SimplexFile, Simplex), CliError> {
    let file = format::read(path)?;
    let simplex = file.to_simplex()?;
    Ok((file, simplex))
}

pub fn cmd_analyze(path: &Path, tol: &Tolerance) -> Result<AnalyzeReport, CliError> {
    let (file, v) = load(path)?;
    Ok(analyze(&file.display_name(), &v, tol)?)
}

pub fn analyze(
    label: &str,
    v: &Simplex,
    tol: &Tolerance,
) -> Result<AnalyzeReport, eqcenter_core::Error> {
    let independent = is_affinely_independent(v, tol);
    let equifacetal = is_equifacetal(v, tol);
    let (symmetry, note) = if independent {
        let group = symmetry_group(v, tol)?;
        let f = fixed_subspace(&group, tol);
        let report = SymmetryReport {
            order: group.order(),
            permutations: group.elements().iter().map(|e| e.perm.clone()).collect(),
            vertex_transitive: is_vertex_transitive(&group),
            fixed_subspace: FixedSubspaceReport {
                dim: f.dim(),
                base_point: coords(&f.base_point),
                directions: f.directions.iter().map(coords).collect(),
                max_residual: f.max_residual(&group),
            },
        };
        (Some(report), None)
    } else {
        (None, Some(STABILIZER_SKIPPED.to_string()))
    };
    Ok(AnalyzeReport {
        label: label.to_string(),
        dimension: v.dim(),
        tolerance: *tol,
        affinely_independent: independent,
        equifacetal,
        symmetry,
        note,
    })
}

pub fn cmd_centers(path: &Path, tol: &Tolerance) -> Result<CentersReport, CliError> {
    let (file, v) = load(path)?;
    Ok(centers(&file.display_name(), &v, tol))
}

pub fn centers(label: &str, v: &Simplex, tol: &Tolerance) -> CentersReport {
    let c = centroid(v);
    let mut values: Vec<(String, Result<Point, eqcenter_core::Error>)> = vec![
        (CenterFunction::Centroid.name().into(), Ok(c.clone())),
        (
            CenterFunction::HWeighted.name().into(),
            Ok(h_weighted_center(v)),
        ),
    ];
    if v.dim() == 2 {
        for kind in TriangleCenter::ALL {
            values.push((kind.name().into(), triangle_center(kind, v, tol)));
        }
    }
    let bound = tol.scalar() * (1.0 + v.diameter());
    let coincide = values
        .iter()
        .all(|(_, r)| r.as_ref().map_or(true, |p| p.distance(&c) <= bound));
    let centers = values
        .into_iter()
        .map(|(center, r)| match r {
            Ok(p) => CenterRow {
                center,
                value: Some(coords(&p)),
                error: None,
            },
            Err(e) => CenterRow {
                center,
                value: None,
                error: Some(ErrorInfo::from(&e)),
            },
        })
        .collect();
    CentersReport {
        label: label.to_string(),
        dimension: v.dim(),
        tolerance: *tol,
        centers,
        coincide,
    }
}

pub fn cmd_verify(dims: &[usize], count: usize, seed: u64, tol: &Tolerance) -> VerifyReport {
    run_trials(dims, count, seed, tol)
}

pub fn cmd_transport(
    base_path: &Path,
    anchor: &[f64],
    target_path: &Path,
    tol: &Tolerance,
) -> Result<TransportReport, CliError> {
    let (base_file, base) = load(base_path)?;
    let (target_file, target) = load(target_path)?;
    let anchor = Point::new(anchor.to_vec())?;
    let group_order = symmetry_group(&base, tol)?.order();
    let z = make_orbit_center(&base, anchor.clone(), tol)?;
    let value = evaluate(&z, &target, tol)?;
    Ok(TransportReport {
        base: base_file.display_name(),
        target: target_file.display_name(),
        tolerance: *tol,
        anchor: coords(&anchor),
        group_order,
        value: coords(&value),
    })
}

//! Minimum angle conditions on simplices and meshes.
//!
//! Two per-mesh conditions are checked:
//!
//! * the minimum dihedral angle condition: every dihedral angle of every subsimplex of
//!   dimension at least 2 is at least `alpha0`;
//! * the generalized (d-sine) condition: every vertex d-sine of every cell is at least `C`.
//!
//! The two are equivalent over mesh families. [`audit_simplex`] checks both directions of
//! that equivalence numerically on a single cell: every dihedral sine dominates the
//! minimum vertex d-sine, and the minimum vertex d-sine dominates the bound obtained by
//! unrolling the product formula down to triangles.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::angles::{all_dihedral_angles, ball_ratio, vertex_sines};
use crate::error::Error;
use crate::geometry::{project_intrinsic, Simplex, ToleranceConfig};
use crate::mesh::Mesh;

/// Absolute slack applied to every audit inequality.
pub const AUDIT_TOLERANCE: f64 = 1e-9;

/// Condition constants. Either may be absent when only one condition is checked.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Thresholds {
    /// Lower bound on dihedral angles, radians, in `(0, pi)`.
    pub alpha0: Option<f64>,
    /// Lower bound on vertex d-sines, in `(0, 1]`.
    pub dsine_min: Option<f64>,
}

impl Thresholds {
    pub fn new(alpha0: Option<f64>, dsine_min: Option<f64>) -> Result<Self, Error> {
        if let Some(a) = alpha0 {
            validate_alpha0(a)?;
        }
        if let Some(c) = dsine_min {
            validate_dsine_min(c)?;
        }
        Ok(Thresholds { alpha0, dsine_min })
    }

    pub fn is_empty(&self) -> bool {
        self.alpha0.is_none() && self.dsine_min.is_none()
    }
}

fn validate_alpha0(alpha0: f64) -> Result<(), Error> {
    if alpha0 > 0.0 && alpha0 < PI {
        Ok(())
    } else {
        Err(Error::InvalidArgument("alpha0 must lie in (0, pi) radians"))
    }
}

fn validate_dsine_min(c: f64) -> Result<(), Error> {
    if c > 0.0 && c <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument("d-sine threshold must lie in (0, 1]"))
    }
}

/// A subsimplex together with the parent vertex indices it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Subsimplex {
    pub vertices: Vec<usize>,
    pub simplex: Simplex,
}

/// Every subsimplex with at least `min_dim + 1` vertices, including `s` itself, ordered
/// by size and then lexicographically by vertex indices.
pub fn subsimplices(s: &Simplex, min_dim: usize) -> Result<Vec<Subsimplex>, Error> {
    if min_dim < 2 {
        return Err(Error::InvalidArgument("subsimplices below dimension 2 carry no dihedral angles"));
    }
    let n = s.vertex_count();
    let mut out = Vec::new();
    for size in min_dim + 1..=n {
        for_each_combination(n, size, |idx| {
            out.push(Subsimplex {
                vertices: idx.to_vec(),
                simplex: s.select(idx).expect("indices in range"),
            });
        });
    }
    Ok(out)
}

/// Number of subsimplices of dimension at least 2 in a k-simplex.
pub fn subsimplex_count(k: usize) -> usize {
    (3..=k + 1).map(|m| binomial(k + 1, m)).sum()
}

fn binomial(n: usize, m: usize) -> usize {
    if m > n {
        return 0;
    }
    let m = m.min(n - m);
    (0..m).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn for_each_combination<F: FnMut(&[usize])>(n: usize, size: usize, mut f: F) {
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        f(&idx);
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Extremes of the dihedral angles over all subsimplices of dimension at least 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsimplexAngleExtrema {
    pub min: f64,
    pub max: f64,
    /// Smallest `sin(beta)` over the same angles.
    pub min_sine: f64,
    pub subsimplex_count: usize,
}

fn check_cap(s: &Simplex, cfg: &ToleranceConfig) -> Result<(), Error> {
    let k = s.intrinsic_dim();
    if k > cfg.max_subsimplex_dim {
        return Err(Error::DimensionCap {
            dim: k,
            cap: cfg.max_subsimplex_dim,
        });
    }
    Ok(())
}

fn tag_degenerate(err: Error, vertices: &[usize]) -> Error {
    if err.is_degeneracy() {
        Error::Degenerate {
            vertices: vertices.to_vec(),
        }
    } else {
        err
    }
}

/// Each subsimplex is first rewritten in coordinates of its own affine hull, so a triangle
/// face of a tetrahedron contributes its planar angles.
pub fn min_dihedral_over_subsimplices(
    s: &Simplex,
    cfg: &ToleranceConfig,
) -> Result<SubsimplexAngleExtrema, Error> {
    check_cap(s, cfg)?;
    let subs = subsimplices(s, 2)?;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut min_sine = f64::INFINITY;
    for sub in &subs {
        let angles = project_intrinsic(&sub.simplex, cfg)
            .and_then(|p| all_dihedral_angles(&p, cfg))
            .map_err(|e| tag_degenerate(e, &sub.vertices))?;
        min = min.min(angles.min());
        max = max.max(angles.max());
        min_sine = min_sine.min(angles.min_sine());
    }
    Ok(SubsimplexAngleExtrema {
        min,
        max,
        min_sine,
        subsimplex_count: subs.len(),
    })
}

/// Smallest vertex d-sine of the simplex.
pub fn min_vertex_dsine(s: &Simplex, cfg: &ToleranceConfig) -> Result<f64, Error> {
    Ok(vertex_sines(s, cfg)?.min())
}

/// Per-cell quality summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexQuality {
    pub cell_index: usize,
    pub min_dihedral_all_sub: f64,
    pub max_dihedral_all_sub: f64,
    pub min_vertex_dsine: f64,
    pub ball_ratio: f64,
    /// Sum of the dihedral angles of the cell itself.
    pub dihedral_sum_top: f64,
    pub subsimplex_count: usize,
}

pub fn assess_simplex(
    s: &Simplex,
    cell_index: usize,
    cfg: &ToleranceConfig,
) -> Result<SimplexQuality, Error> {
    let all: Vec<usize> = (0..s.vertex_count()).collect();
    let tag = |e| tag_degenerate(e, &all);
    let extrema = min_dihedral_over_subsimplices(s, cfg)?;
    let top = all_dihedral_angles(s, cfg).map_err(tag)?;
    Ok(SimplexQuality {
        cell_index,
        min_dihedral_all_sub: extrema.min,
        max_dihedral_all_sub: extrema.max,
        min_vertex_dsine: min_vertex_dsine(s, cfg).map_err(tag)?,
        ball_ratio: ball_ratio(s, cfg).map_err(tag)?,
        dihedral_sum_top: top.sum(),
        subsimplex_count: extrema.subsimplex_count,
    })
}

/// Result of evaluating one mesh cell.
#[derive(Debug, Clone, PartialEq)]
pub enum CellOutcome {
    Measured(SimplexQuality),
    /// The cell, or the subsimplex on `vertices` (mesh vertex indices), is degenerate.
    Degenerate { cell_index: usize, vertices: Vec<usize> },
}

impl CellOutcome {
    pub fn cell_index(&self) -> usize {
        match self {
            CellOutcome::Measured(q) => q.cell_index,
            CellOutcome::Degenerate { cell_index, .. } => *cell_index,
        }
    }

    pub fn quality(&self) -> Option<&SimplexQuality> {
        match self {
            CellOutcome::Measured(q) => Some(q),
            CellOutcome::Degenerate { .. } => None,
        }
    }
}

/// Evaluates one cell. Degeneracy becomes [`CellOutcome::Degenerate`]; other errors
/// propagate.
pub fn assess_cell(mesh: &Mesh, cell_index: usize, cfg: &ToleranceConfig) -> Result<CellOutcome, Error> {
    let s = mesh.cell_simplex(cell_index)?;
    match assess_simplex(&s, cell_index, cfg) {
        Ok(q) => Ok(CellOutcome::Measured(q)),
        Err(Error::Degenerate { vertices }) => {
            let cell = mesh.cell(cell_index);
            Ok(CellOutcome::Degenerate {
                cell_index,
                vertices: vertices.iter().map(|&v| cell[v]).collect(),
            })
        }
        Err(e) => Err(e),
    }
}

/// Evaluates every cell in index order.
pub fn assess_mesh(mesh: &Mesh, cfg: &ToleranceConfig) -> Result<Vec<CellOutcome>, Error> {
    cfg.validate()?;
    (0..mesh.cell_count()).map(|i| assess_cell(mesh, i, cfg)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// Minimum dihedral angle over all subsimplices is at least `alpha0`.
    MinimumDihedralAngle,
    /// Minimum vertex d-sine is at least `C`.
    GeneralizedDsine,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::MinimumDihedralAngle => "minimum_dihedral_angle",
            Condition::GeneralizedDsine => "generalized_dsine",
        }
    }

    fn value(self, q: &SimplexQuality) -> f64 {
        match self {
            Condition::MinimumDihedralAngle => q.min_dihedral_all_sub,
            Condition::GeneralizedDsine => q.min_vertex_dsine,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionVerdict {
    pub condition: Condition,
    pub satisfied: bool,
    pub worst_cell: usize,
    /// Degenerate cells count as 0 here.
    pub worst_value: f64,
    pub threshold_used: f64,
    pub degenerate_cells: Vec<usize>,
}

/// Reduces cell outcomes to a verdict. Equality with the threshold satisfies it; ties for
/// the worst cell go to the lowest index.
pub fn verdict(outcomes: &[CellOutcome], condition: Condition, threshold: f64) -> ConditionVerdict {
    let mut worst_cell = 0;
    let mut worst_value = f64::INFINITY;
    let mut degenerate_cells = Vec::new();
    for outcome in outcomes {
        let value = match outcome {
            CellOutcome::Measured(q) => condition.value(q),
            CellOutcome::Degenerate { cell_index, .. } => {
                degenerate_cells.push(*cell_index);
                0.0
            }
        };
        if value < worst_value {
            worst_value = value;
            worst_cell = outcome.cell_index();
        }
    }
    ConditionVerdict {
        condition,
        satisfied: degenerate_cells.is_empty() && worst_value >= threshold,
        worst_cell,
        worst_value,
        threshold_used: threshold,
        degenerate_cells,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub verdict: ConditionVerdict,
    pub cells: Vec<CellOutcome>,
}

pub fn check_minimum_angle_condition(
    mesh: &Mesh,
    alpha0: f64,
    cfg: &ToleranceConfig,
) -> Result<ConditionCheck, Error> {
    validate_alpha0(alpha0)?;
    let cells = assess_mesh(mesh, cfg)?;
    Ok(ConditionCheck {
        verdict: verdict(&cells, Condition::MinimumDihedralAngle, alpha0),
        cells,
    })
}

pub fn check_generalized_condition(
    mesh: &Mesh,
    dsine_min: f64,
    cfg: &ToleranceConfig,
) -> Result<ConditionCheck, Error> {
    validate_dsine_min(dsine_min)?;
    let cells = assess_mesh(mesh, cfg)?;
    Ok(ConditionCheck {
        verdict: verdict(&cells, Condition::GeneralizedDsine, dsine_min),
        cells,
    })
}

/// Lower bound on every vertex d-sine of a d-simplex whose subsimplex dihedral angles all
/// lie in `[alpha0, gamma0]`: `s^(d(d-1)/2)` with `s = min(sin alpha0, sin gamma0)`.
///
/// Each level d' of the product formula contributes `d' - 1` dihedral sines, and the
/// triangle at the bottom contributes one planar sine.
pub fn certified_dsine_bound(alpha0: f64, gamma0: f64, d: usize) -> Result<f64, Error> {
    if d < 2 {
        return Err(Error::InvalidArgument("certified bound needs d >= 2"));
    }
    if !(alpha0 > 0.0 && alpha0 <= gamma0 && gamma0 < PI) {
        return Err(Error::InvalidArgument("need 0 < alpha0 <= gamma0 < pi"));
    }
    let s = libm::sin(alpha0).min(libm::sin(gamma0));
    Ok(libm::pow(s, (d * (d - 1) / 2) as f64))
}

/// Both directions of the angle/d-sine equivalence, measured on one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellAudit {
    pub cell_index: usize,
    /// `min over subsimplices S' of (min sin beta(S') - min vertex d-sine(S'))`.
    pub forward_margin: f64,
    /// Subsimplex attaining the forward margin.
    pub forward_witness: Vec<usize>,
    /// `min vertex d-sine - certified bound`.
    pub backward_margin: f64,
    pub certified_bound: f64,
    pub min_vertex_dsine: f64,
    pub min_dihedral_all_sub: f64,
    pub max_dihedral_all_sub: f64,
}

impl CellAudit {
    pub fn passed(&self) -> bool {
        self.forward_margin >= -AUDIT_TOLERANCE && self.backward_margin >= -AUDIT_TOLERANCE
    }
}

pub fn audit_simplex(s: &Simplex, cell_index: usize, cfg: &ToleranceConfig) -> Result<CellAudit, Error> {
    check_cap(s, cfg)?;
    let k = s.intrinsic_dim();
    let mut forward_margin = f64::INFINITY;
    let mut forward_witness = Vec::new();
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for sub in subsimplices(s, 2)? {
        let (angles, sines) = project_intrinsic(&sub.simplex, cfg)
            .and_then(|p| Ok((all_dihedral_angles(&p, cfg)?, vertex_sines(&p, cfg)?)))
            .map_err(|e| tag_degenerate(e, &sub.vertices))?;
        min = min.min(angles.min());
        max = max.max(angles.max());
        let margin = angles.min_sine() - sines.min();
        if margin < forward_margin {
            forward_margin = margin;
            forward_witness = sub.vertices;
        }
    }
    let all: Vec<usize> = (0..=k).collect();
    let min_dsine = min_vertex_dsine(s, cfg).map_err(|e| tag_degenerate(e, &all))?;
    let certified_bound = certified_dsine_bound(min, max, k)?;
    Ok(CellAudit {
        cell_index,
        forward_margin,
        forward_witness,
        backward_margin: min_dsine - certified_bound,
        certified_bound,
        min_vertex_dsine: min_dsine,
        min_dihedral_all_sub: min,
        max_dihedral_all_sub: max,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum AuditOutcome {
    Audited(CellAudit),
    Degenerate { cell_index: usize, vertices: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub cells: Vec<AuditOutcome>,
}

impl AuditReport {
    pub fn degenerate_cells(&self) -> Vec<usize> {
        self.cells
            .iter()
            .filter_map(|c| match c {
                AuditOutcome::Degenerate { cell_index, .. } => Some(*cell_index),
                AuditOutcome::Audited(_) => None,
            })
            .collect()
    }

    /// True when every audited cell has both margins at or above `-AUDIT_TOLERANCE`.
    /// Degenerate cells are reported separately and do not count here.
    pub fn margins_hold(&self) -> bool {
        self.cells.iter().all(|c| match c {
            AuditOutcome::Audited(a) => a.passed(),
            AuditOutcome::Degenerate { .. } => true,
        })
    }
}

pub fn audit_cell(mesh: &Mesh, cell_index: usize, cfg: &ToleranceConfig) -> Result<AuditOutcome, Error> {
    let s = mesh.cell_simplex(cell_index)?;
    match audit_simplex(&s, cell_index, cfg) {
        Ok(a) => Ok(AuditOutcome::Audited(a)),
        Err(Error::Degenerate { vertices }) => {
            let cell = mesh.cell(cell_index);
            Ok(AuditOutcome::Degenerate {
                cell_index,
                vertices: vertices.iter().map(|&v| cell[v]).collect(),
            })
        }
        Err(e) => Err(e),
    }
}

/// Audits every cell; degenerate cells are flagged and the audit continues.
pub fn equivalence_audit(mesh: &Mesh, cfg: &ToleranceConfig) -> Result<AuditReport, Error> {
    cfg.validate()?;
    let cells = (0..mesh.cell_count())
        .map(|i| audit_cell(mesh, i, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AuditReport { cells })
}

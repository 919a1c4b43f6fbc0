//! Quality, audit and family reports and their JSON layout.
//!
//! All angles are radians. With [`AngleUnit::Degrees`] the reports additionally carry
//! `*_deg` annotation fields; verdicts are unaffected.

use std::io::Write;

use meshreg_core::regularity::{AuditOutcome, AuditReport, AUDIT_TOLERANCE};
use meshreg_core::{AngleUnit, CellOutcome, Condition, ConditionVerdict};
use serde::{Deserialize, Serialize};

fn deg(unit: AngleUnit, rad: Option<f64>) -> Option<f64> {
    match unit {
        AngleUnit::Degrees => rad.map(f64::to_degrees),
        AngleUnit::Radians => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub min_dihedral_rad: Option<f64>,
    pub max_dihedral_rad: Option<f64>,
    pub min_dsine: Option<f64>,
    pub min_ball_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_dihedral_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dihedral_deg: Option<f64>,
}

impl Aggregates {
    /// Extremes over the measured cells; `None` when every cell is degenerate.
    pub fn of(cells: &[CellRecord], unit: AngleUnit) -> Self {
        fn fold(
            cells: &[CellRecord],
            pick: impl Fn(&CellRecord) -> Option<f64>,
            better: fn(f64, f64) -> f64,
        ) -> Option<f64> {
            cells.iter().filter_map(pick).reduce(better)
        }
        let min_dihedral_rad = fold(cells, |c| c.min_dihedral_rad, f64::min);
        let max_dihedral_rad = fold(cells, |c| c.max_dihedral_rad, f64::max);
        Aggregates {
            min_dihedral_rad,
            max_dihedral_rad,
            min_dsine: fold(cells, |c| c.min_dsine, f64::min),
            min_ball_ratio: fold(cells, |c| c.ball_ratio, f64::min),
            min_dihedral_deg: deg(unit, min_dihedral_rad),
            max_dihedral_deg: deg(unit, max_dihedral_rad),
        }
    }

    fn merge(parts: &[&Aggregates], unit: AngleUnit) -> Self {
        let min = |f: fn(&Aggregates) -> Option<f64>| parts.iter().filter_map(|a| f(a)).reduce(f64::min);
        let max = |f: fn(&Aggregates) -> Option<f64>| parts.iter().filter_map(|a| f(a)).reduce(f64::max);
        let min_dihedral_rad = min(|a| a.min_dihedral_rad);
        let max_dihedral_rad = max(|a| a.max_dihedral_rad);
        Aggregates {
            min_dihedral_rad,
            max_dihedral_rad,
            min_dsine: min(|a| a.min_dsine),
            min_ball_ratio: min(|a| a.min_ball_ratio),
            min_dihedral_deg: deg(unit, min_dihedral_rad),
            max_dihedral_deg: deg(unit, max_dihedral_rad),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub index: usize,
    pub min_dihedral_rad: Option<f64>,
    pub max_dihedral_rad: Option<f64>,
    pub min_dsine: Option<f64>,
    pub ball_ratio: Option<f64>,
    pub dihedral_sum_rad: Option<f64>,
    /// Mesh vertex indices of the degenerate subsimplex, when the cell could not be measured.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerate_vertices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_dihedral_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dihedral_deg: Option<f64>,
}

impl CellRecord {
    pub fn from_outcome(outcome: &CellOutcome, unit: AngleUnit) -> Self {
        match outcome {
            CellOutcome::Measured(q) => CellRecord {
                index: q.cell_index,
                min_dihedral_rad: Some(q.min_dihedral_all_sub),
                max_dihedral_rad: Some(q.max_dihedral_all_sub),
                min_dsine: Some(q.min_vertex_dsine),
                ball_ratio: Some(q.ball_ratio),
                dihedral_sum_rad: Some(q.dihedral_sum_top),
                degenerate_vertices: None,
                min_dihedral_deg: deg(unit, Some(q.min_dihedral_all_sub)),
                max_dihedral_deg: deg(unit, Some(q.max_dihedral_all_sub)),
            },
            CellOutcome::Degenerate { cell_index, vertices } => CellRecord {
                index: *cell_index,
                min_dihedral_rad: None,
                max_dihedral_rad: None,
                min_dsine: None,
                ball_ratio: None,
                dihedral_sum_rad: None,
                degenerate_vertices: Some(vertices.clone()),
                min_dihedral_deg: None,
                max_dihedral_deg: None,
            },
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate_vertices.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub condition: String,
    pub threshold: f64,
    pub satisfied: bool,
    pub worst_cell: usize,
    pub worst_value: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degenerate_cells: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_value_deg: Option<f64>,
}

impl VerdictRecord {
    pub fn from_verdict(v: &ConditionVerdict, unit: AngleUnit) -> Self {
        let angle = v.condition == Condition::MinimumDihedralAngle;
        let annotate = |x: f64| if angle { deg(unit, Some(x)) } else { None };
        VerdictRecord {
            condition: v.condition.name().to_string(),
            threshold: v.threshold_used,
            satisfied: v.satisfied,
            worst_cell: v.worst_cell,
            worst_value: v.worst_value,
            degenerate_cells: v.degenerate_cells.clone(),
            threshold_deg: annotate(v.threshold_used),
            worst_value_deg: annotate(v.worst_value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub index: usize,
    pub forward_margin: Option<f64>,
    pub backward_margin: Option<f64>,
    pub certified_bound: Option<f64>,
    pub min_dsine: Option<f64>,
    /// Mesh vertex indices of the subsimplex with the smallest forward margin.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forward_witness: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerate_vertices: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSection {
    pub tolerance: f64,
    pub margins_hold: bool,
    pub cells: Vec<AuditRecord>,
}

impl AuditSection {
    /// `cell_vertices(i)` maps cell-local vertex positions to mesh vertex indices.
    pub fn from_report<'a>(report: &AuditReport, cell_vertices: impl Fn(usize) -> &'a [usize]) -> Self {
        let cells = report
            .cells
            .iter()
            .map(|c| match c {
                AuditOutcome::Audited(a) => AuditRecord {
                    index: a.cell_index,
                    forward_margin: Some(a.forward_margin),
                    backward_margin: Some(a.backward_margin),
                    certified_bound: Some(a.certified_bound),
                    min_dsine: Some(a.min_vertex_dsine),
                    forward_witness: a
                        .forward_witness
                        .iter()
                        .map(|&v| cell_vertices(a.cell_index)[v])
                        .collect(),
                    degenerate_vertices: None,
                },
                AuditOutcome::Degenerate { cell_index, vertices } => AuditRecord {
                    index: *cell_index,
                    forward_margin: None,
                    backward_margin: None,
                    certified_bound: None,
                    min_dsine: None,
                    forward_witness: Vec::new(),
                    degenerate_vertices: Some(vertices.clone()),
                },
            })
            .collect();
        AuditSection {
            tolerance: AUDIT_TOLERANCE,
            margins_hold: report.margins_hold(),
            cells,
        }
    }
}

/// Per-cell records, mesh aggregates and any verdicts for one mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub ambient_dimension: usize,
    pub cell_count: usize,
    pub aggregates: Aggregates,
    pub cells: Vec<CellRecord>,
    pub verdicts: Vec<VerdictRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditSection>,
}

impl QualityReport {
    pub fn new(
        ambient_dimension: usize,
        outcomes: &[CellOutcome],
        verdicts: &[ConditionVerdict],
        unit: AngleUnit,
    ) -> Self {
        let cells: Vec<CellRecord> = outcomes.iter().map(|o| CellRecord::from_outcome(o, unit)).collect();
        QualityReport {
            ambient_dimension,
            cell_count: cells.len(),
            aggregates: Aggregates::of(&cells, unit),
            cells,
            verdicts: verdicts.iter().map(|v| VerdictRecord::from_verdict(v, unit)).collect(),
            audit: None,
        }
    }

    pub fn has_degenerate_cells(&self) -> bool {
        self.cells.iter().any(CellRecord::is_degenerate)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub path: String,
    pub cell_count: usize,
    pub aggregates: Aggregates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub mesh: usize,
    pub min_dihedral_rad: Option<f64>,
    pub min_dsine: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyVerdictRecord {
    pub condition: String,
    pub threshold: f64,
    pub satisfied: bool,
    pub worst_mesh: usize,
    pub worst_cell: usize,
    pub worst_value: f64,
    /// `[mesh, cell]` pairs that could not be measured.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degenerate_cells: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_deg: Option<f64>,
}

impl FamilyVerdictRecord {
    /// Combines one verdict per mesh (same condition and threshold). Ties go to the
    /// earliest mesh.
    pub fn combine(per_mesh: &[ConditionVerdict], unit: AngleUnit) -> Self {
        let first = &per_mesh[0];
        let mut worst_mesh = 0;
        for (m, v) in per_mesh.iter().enumerate() {
            if v.worst_value < per_mesh[worst_mesh].worst_value {
                worst_mesh = m;
            }
        }
        let degenerate_cells = per_mesh
            .iter()
            .enumerate()
            .flat_map(|(m, v)| v.degenerate_cells.iter().map(move |&c| [m, c]))
            .collect();
        let angle = first.condition == Condition::MinimumDihedralAngle;
        FamilyVerdictRecord {
            condition: first.condition.name().to_string(),
            threshold: first.threshold_used,
            satisfied: per_mesh.iter().all(|v| v.satisfied),
            worst_mesh,
            worst_cell: per_mesh[worst_mesh].worst_cell,
            worst_value: per_mesh[worst_mesh].worst_value,
            degenerate_cells,
            threshold_deg: if angle { deg(unit, Some(first.threshold_used)) } else { None },
        }
    }
}

/// Per-mesh aggregates, family-wide extremes and a coarse-to-fine trend table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub ambient_dimension: usize,
    pub meshes: Vec<FamilyMember>,
    pub family: Aggregates,
    pub trend: Vec<TrendRow>,
    pub verdicts: Vec<FamilyVerdictRecord>,
}

impl FamilyReport {
    pub fn new(
        ambient_dimension: usize,
        members: Vec<(String, QualityReport)>,
        verdicts: Vec<FamilyVerdictRecord>,
        unit: AngleUnit,
    ) -> Self {
        let family = Aggregates::merge(
            &members.iter().map(|(_, r)| &r.aggregates).collect::<Vec<_>>(),
            unit,
        );
        let trend = members
            .iter()
            .enumerate()
            .map(|(mesh, (_, r))| TrendRow {
                mesh,
                min_dihedral_rad: r.aggregates.min_dihedral_rad,
                min_dsine: r.aggregates.min_dsine,
            })
            .collect();
        let meshes = members
            .into_iter()
            .map(|(path, r)| FamilyMember {
                path,
                cell_count: r.cell_count,
                aggregates: r.aggregates,
            })
            .collect();
        FamilyReport {
            ambient_dimension,
            meshes,
            family,
            trend,
            verdicts,
        }
    }
}

/// Pretty JSON with a trailing newline. Output is a pure function of the value.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

pub fn write_report<T: Serialize, W: Write>(value: &T, mut sink: W) -> std::io::Result<()> {
    sink.write_all(to_json(value).as_bytes())?;
    sink.flush()
}

//! Parallel per-cell evaluation. Results come back in cell order, so reports built from
//! them do not depend on scheduling.

use meshreg_core::regularity::{assess_cell, audit_cell, AuditReport};
use meshreg_core::{CellOutcome, Error, Mesh, ToleranceConfig};
use rayon::prelude::*;

pub fn assess(mesh: &Mesh, cfg: &ToleranceConfig) -> Result<Vec<CellOutcome>, Error> {
    cfg.validate()?;
    (0..mesh.cell_count())
        .into_par_iter()
        .map(|i| assess_cell(mesh, i, cfg))
        .collect()
}

pub fn audit(mesh: &Mesh, cfg: &ToleranceConfig) -> Result<AuditReport, Error> {
    cfg.validate()?;
    let cells = (0..mesh.cell_count())
        .into_par_iter()
        .map(|i| audit_cell(mesh, i, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AuditReport { cells })
}

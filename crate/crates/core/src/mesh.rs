//! Simplicial meshes: a vertex pool plus cells of `d + 1` vertex indices.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::geometry::{is_degenerate, Simplex, ToleranceConfig};

/// Structural problems found while building a [`Mesh`].
#[derive(Debug, Clone, PartialEq)]
pub enum MeshError {
    /// Angles need at least two dimensions.
    DimensionTooSmall(usize),
    VertexArity { vertex: usize, expected: usize, found: usize },
    NonFiniteCoordinate { vertex: usize },
    CellArity { cell: usize, expected: usize, found: usize },
    IndexOutOfRange { cell: usize, index: usize, vertex_count: usize },
    RepeatedIndex { cell: usize, index: usize },
    NoCells,
}

impl fmt::Display for MeshError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshError::DimensionTooSmall(d) => {
                write!(f, "ambient dimension {d} is too small (need at least 2)")
            }
            MeshError::VertexArity { vertex, expected, found } => write!(
                f,
                "vertex {vertex} has {found} coordinates, expected {expected}"
            ),
            MeshError::NonFiniteCoordinate { vertex } => {
                write!(f, "vertex {vertex} has a non-finite coordinate")
            }
            MeshError::CellArity { cell, expected, found } => {
                write!(f, "cell {cell} has {found} indices, expected {expected}")
            }
            MeshError::IndexOutOfRange { cell, index, vertex_count } => write!(
                f,
                "cell {cell} references vertex {index}, but there are only {vertex_count}"
            ),
            MeshError::RepeatedIndex { cell, index } => {
                write!(f, "cell {cell} repeats vertex {index}")
            }
            MeshError::NoCells => write!(f, "mesh has no cells"),
        }
    }
}

impl core::error::Error for MeshError {}

/// A simplicial mesh of full-dimensional cells in R^d.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    ambient_dim: usize,
    coords: Vec<f64>,
    cells: Vec<usize>,
}

impl Mesh {
    pub fn new(
        ambient_dim: usize,
        vertices: Vec<Vec<f64>>,
        cells: Vec<Vec<usize>>,
    ) -> Result<Self, MeshError> {
        if ambient_dim < 2 {
            return Err(MeshError::DimensionTooSmall(ambient_dim));
        }
        let mut coords = Vec::with_capacity(vertices.len() * ambient_dim);
        for (vertex, v) in vertices.iter().enumerate() {
            if v.len() != ambient_dim {
                return Err(MeshError::VertexArity {
                    vertex,
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(MeshError::NonFiniteCoordinate { vertex });
            }
            coords.extend_from_slice(v);
        }
        if cells.is_empty() {
            return Err(MeshError::NoCells);
        }
        let vertex_count = vertices.len();
        let mut flat = Vec::with_capacity(cells.len() * (ambient_dim + 1));
        for (cell, c) in cells.iter().enumerate() {
            if c.len() != ambient_dim + 1 {
                return Err(MeshError::CellArity {
                    cell,
                    expected: ambient_dim + 1,
                    found: c.len(),
                });
            }
            for (pos, &index) in c.iter().enumerate() {
                if index >= vertex_count {
                    return Err(MeshError::IndexOutOfRange {
                        cell,
                        index,
                        vertex_count,
                    });
                }
                if c[..pos].contains(&index) {
                    return Err(MeshError::RepeatedIndex { cell, index });
                }
            }
            flat.extend_from_slice(c);
        }
        Ok(Mesh {
            ambient_dim,
            coords,
            cells: flat,
        })
    }

    /// Single-cell mesh on the vertices of a full-dimensional simplex.
    pub fn from_simplex(s: &Simplex) -> Result<Self, MeshError> {
        let vertices: Vec<Vec<f64>> = s.vertices().map(|v| v.to_vec()).collect();
        let cell: Vec<usize> = (0..vertices.len()).collect();
        Mesh::new(s.ambient_dim(), vertices, alloc::vec![cell])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len() / self.ambient_dim
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len() / (self.ambient_dim + 1)
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.ambient_dim..(i + 1) * self.ambient_dim]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.ambient_dim)
    }

    pub fn cell(&self, i: usize) -> &[usize] {
        let n = self.ambient_dim + 1;
        &self.cells[i * n..(i + 1) * n]
    }

    pub fn cells(&self) -> impl Iterator<Item = &[usize]> {
        self.cells.chunks_exact(self.ambient_dim + 1)
    }

    pub fn cell_simplex(&self, i: usize) -> Result<Simplex, Error> {
        if i >= self.cell_count() {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.cell_count(),
            });
        }
        Simplex::from_vertices(self.cell(i).iter().map(|&v| self.vertex(v)))
    }
}

/// Findings of [`validate_mesh`]; empty when the mesh is clean.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub degenerate_cells: Vec<usize>,
    pub unused_vertices: Vec<usize>,
    /// `(first, duplicate)` pairs of cells on the same vertex set.
    pub duplicate_cells: Vec<(usize, usize)>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.degenerate_cells.is_empty()
            && self.unused_vertices.is_empty()
            && self.duplicate_cells.is_empty()
    }
}

pub fn validate_mesh(mesh: &Mesh, cfg: &ToleranceConfig) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut used = alloc::vec![false; mesh.vertex_count()];
    let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (i, cell) in mesh.cells().enumerate() {
        cell.iter().for_each(|&v| used[v] = true);
        let simplex = mesh.cell_simplex(i).expect("cell index in range");
        if is_degenerate(&simplex, cfg) {
            report.degenerate_cells.push(i);
        }
        let mut key = cell.to_vec();
        key.sort_unstable();
        if let Some(&first) = seen.get(&key) {
            report.duplicate_cells.push((first, i));
        } else {
            seen.insert(key, i);
        }
    }
    report.unused_vertices = used
        .iter()
        .enumerate()
        .filter(|(_, u)| !**u)
        .map(|(i, _)| i)
        .collect();
    report
}

/// A facet shared by more than two cells.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetViolation {
    /// Sorted vertex indices of the facet.
    pub facet: Vec<usize>,
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConformityReport {
    pub boundary_facets: usize,
    pub interior_facets: usize,
    pub violations: Vec<FacetViolation>,
}

impl ConformityReport {
    pub fn is_conforming(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Combinatorial conformity: every facet, as a vertex-index set, belongs to at most two
/// cells. Geometric overlaps between cells that share no facet are not detected.
pub fn conformity_check(mesh: &Mesh) -> ConformityReport {
    let mut owners: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, cell) in mesh.cells().enumerate() {
        for omit in 0..cell.len() {
            let mut key: Vec<usize> = cell
                .iter()
                .enumerate()
                .filter(|(p, _)| *p != omit)
                .map(|(_, &v)| v)
                .collect();
            key.sort_unstable();
            owners.entry(key).or_default().push(i);
        }
    }
    let mut report = ConformityReport::default();
    for (facet, cells) in owners {
        match cells.len() {
            1 => report.boundary_facets += 1,
            2 => report.interior_facets += 1,
            _ => report.violations.push(FacetViolation { facet, cells }),
        }
    }
    report
}

//! Simplices embedded in R^d: measures, facets, intrinsic frames and outward normals.
//!
//! A k-simplex is stored as k+1 vertices with `ambient_dim` coordinates each. Every
//! measure goes through the Gram determinant of the edge vectors `A_i - A_0`, evaluated
//! as the product of residual norms of a pivoted, re-orthogonalized Gram-Schmidt sweep.
//! That product equals `sqrt(det G)` and keeps lower-dimensional facets on the same code
//! path as full-dimensional cells.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// Unit used when presenting angles. Computation is always in radians.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleUnit {
    #[default]
    Radians,
    Degrees,
}

impl AngleUnit {
    pub fn from_radians(self, value: f64) -> f64 {
        match self {
            AngleUnit::Radians => value,
            AngleUnit::Degrees => value.to_degrees(),
        }
    }

    pub fn to_radians(self, value: f64) -> f64 {
        match self {
            AngleUnit::Radians => value,
            AngleUnit::Degrees => value.to_radians(),
        }
    }
}

/// Numerical knobs shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// A simplex is degenerate when `sqrt(det G) <= degeneracy_rel_tol * max_edge^k`.
    pub degeneracy_rel_tol: f64,
    pub angle_unit: AngleUnit,
    /// Largest cell dimension for which subsimplices are enumerated exhaustively.
    pub max_subsimplex_dim: usize,
}

pub const DEFAULT_DEGENERACY_REL_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_SUBSIMPLEX_DIM: usize = 12;

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            degeneracy_rel_tol: DEFAULT_DEGENERACY_REL_TOL,
            angle_unit: AngleUnit::Radians,
            max_subsimplex_dim: DEFAULT_MAX_SUBSIMPLEX_DIM,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.degeneracy_rel_tol > 0.0 && self.degeneracy_rel_tol.is_finite()) {
            return Err(Error::InvalidArgument(
                "degeneracy tolerance must be positive and finite",
            ));
        }
        Ok(())
    }
}

/// Ordered vertices of a k-simplex in R^d, `k <= d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    ambient_dim: usize,
    coords: Vec<f64>,
}

/// The (k-1)-simplex opposite one vertex of a parent simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub simplex: Simplex,
    pub omitted_vertex_index: usize,
}

/// Orthonormal basis of the direction space of a simplex's affine hull.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    ambient_dim: usize,
    basis: Vec<f64>,
}

impl Frame {
    pub fn len(&self) -> usize {
        if self.ambient_dim == 0 {
            0
        } else {
            self.basis.len() / self.ambient_dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.basis[i * self.ambient_dim..(i + 1) * self.ambient_dim]
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.basis.chunks_exact(self.ambient_dim.max(1))
    }

    /// Coordinates of `v` in this basis.
    pub fn coordinates(&self, v: &[f64]) -> Vec<f64> {
        self.vectors().map(|q| dot(q, v)).collect()
    }
}

impl Simplex {
    /// Builds a simplex from its vertices; every vertex must have the same number of
    /// finite coordinates and there may be at most `ambient_dim + 1` of them.
    pub fn from_vertices<I, P>(vertices: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[f64]>,
    {
        let mut ambient_dim = None;
        let mut coords = Vec::new();
        for (index, vertex) in vertices.into_iter().enumerate() {
            let vertex = vertex.as_ref();
            let expected = *ambient_dim.get_or_insert(vertex.len());
            if vertex.len() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    found: vertex.len(),
                });
            }
            if vertex.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFiniteCoordinate { vertex: index });
            }
            coords.extend_from_slice(vertex);
        }
        let ambient_dim = ambient_dim.unwrap_or(0);
        Self::from_flat(ambient_dim, coords)
    }

    /// Builds a simplex from row-major vertex coordinates.
    pub fn from_flat(ambient_dim: usize, coords: Vec<f64>) -> Result<Self, Error> {
        if ambient_dim == 0 || coords.len() % ambient_dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: coords.len(),
            });
        }
        let count = coords.len() / ambient_dim;
        if count == 0 || count > ambient_dim + 1 {
            return Err(Error::VertexCount {
                count,
                ambient: ambient_dim,
            });
        }
        if let Some(pos) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteCoordinate {
                vertex: pos / ambient_dim,
            });
        }
        Ok(Simplex { ambient_dim, coords })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// k, one less than the vertex count.
    pub fn intrinsic_dim(&self) -> usize {
        self.vertex_count() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len() / self.ambient_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.intrinsic_dim() == self.ambient_dim
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.ambient_dim..(i + 1) * self.ambient_dim]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.ambient_dim)
    }

    /// Sub-simplex on the given vertex indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Simplex, Error> {
        let n = self.vertex_count();
        let mut coords = Vec::with_capacity(indices.len() * self.ambient_dim);
        for &i in indices {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, bound: n });
            }
            coords.extend_from_slice(self.vertex(i));
        }
        Simplex::from_flat(self.ambient_dim, coords)
    }

    /// Applies `f` to every vertex.
    pub fn map_vertices<F>(&self, mut f: F) -> Result<Simplex, Error>
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        Simplex::from_vertices(self.vertices().map(|v| f(v)))
    }

    /// Largest pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        let n = self.vertex_count();
        let mut best: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(distance(self.vertex(i), self.vertex(j)));
            }
        }
        best
    }

    fn edge_vectors(&self) -> Vec<f64> {
        let origin = self.vertex(0);
        let mut edges = Vec::with_capacity(self.intrinsic_dim() * self.ambient_dim);
        for v in self.vertices().skip(1) {
            edges.extend(v.iter().zip(origin).map(|(a, b)| a - b));
        }
        edges
    }
}

/// k-dimensional measure `sqrt(det G) / k!` of a k-simplex; a point has measure 1.
pub fn simplex_measure(s: &Simplex) -> f64 {
    let k = s.intrinsic_dim();
    let sweep = orthogonalize(&s.edge_vectors(), s.ambient_dim);
    sweep.gram_sqrt / factorial(k)
}

/// Facet opposite vertex `i`, keeping the remaining vertices in order.
pub fn facet(s: &Simplex, i: usize) -> Result<Facet, Error> {
    let n = s.vertex_count();
    if n < 2 {
        return Err(Error::InvalidArgument("a point has no facets"));
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, bound: n });
    }
    let indices: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    Ok(Facet {
        simplex: s.select(&indices)?,
        omitted_vertex_index: i,
    })
}

/// True when `sqrt(det G) <= tol * (max edge length)^k`.
pub fn is_degenerate(s: &Simplex, cfg: &ToleranceConfig) -> bool {
    let k = s.intrinsic_dim();
    if k == 0 {
        return false;
    }
    let sweep = orthogonalize(&s.edge_vectors(), s.ambient_dim);
    let max_edge = s.diameter();
    sweep.gram_sqrt <= cfg.degeneracy_rel_tol * libm::pow(max_edge, k as f64)
}

pub(crate) fn ensure_nondegenerate(s: &Simplex, cfg: &ToleranceConfig) -> Result<(), Error> {
    if is_degenerate(s, cfg) {
        Err(Error::degenerate(s.vertex_count()))
    } else {
        Ok(())
    }
}

/// Orthonormal basis of the edge space of a nondegenerate simplex.
pub fn orthonormal_frame(s: &Simplex, cfg: &ToleranceConfig) -> Result<Frame, Error> {
    ensure_nondegenerate(s, cfg)?;
    let sweep = orthogonalize(&s.edge_vectors(), s.ambient_dim);
    if sweep.rank < s.intrinsic_dim() {
        return Err(Error::degenerate(s.vertex_count()));
    }
    Ok(Frame {
        ambient_dim: s.ambient_dim,
        basis: sweep.basis,
    })
}

/// The same simplex written in k coordinates of its own affine hull, vertex 0 at the origin.
pub fn project_intrinsic(s: &Simplex, cfg: &ToleranceConfig) -> Result<Simplex, Error> {
    let frame = orthonormal_frame(s, cfg)?;
    let origin = s.vertex(0);
    let k = s.intrinsic_dim();
    let mut coords = Vec::with_capacity((k + 1) * k.max(1));
    for v in s.vertices() {
        let rel: Vec<f64> = v.iter().zip(origin).map(|(a, b)| a - b).collect();
        coords.extend(frame.coordinates(&rel));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("cannot project a point"));
    }
    Simplex::from_flat(k, coords)
}

/// Outward unit normal of facet `i`, expressed in ambient coordinates but lying in the
/// direction space of the simplex's affine hull.
pub fn outward_unit_normal(s: &Simplex, i: usize, cfg: &ToleranceConfig) -> Result<Vec<f64>, Error> {
    let n = s.vertex_count();
    if n < 2 {
        return Err(Error::InvalidArgument("a point has no facets"));
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, bound: n });
    }
    ensure_nondegenerate(s, cfg)?;
    normal_unchecked(s, i).ok_or_else(|| Error::degenerate(n))
}

/// Normal of facet `i` without the degeneracy pre-check; `None` if the apex lies in the
/// facet's affine hull to working precision.
pub(crate) fn normal_unchecked(s: &Simplex, i: usize) -> Option<Vec<f64>> {
    let d = s.ambient_dim;
    let n = s.vertex_count();
    let anchor = if i == 0 { 1 } else { 0 };
    let base = s.vertex(anchor);
    let mut facet_edges = Vec::with_capacity((n - 2) * d);
    for j in (0..n).filter(|&j| j != i && j != anchor) {
        facet_edges.extend(s.vertex(j).iter().zip(base).map(|(a, b)| a - b));
    }
    let facet_frame = orthogonalize(&facet_edges, d);
    let mut v: Vec<f64> = base.iter().zip(s.vertex(i)).map(|(a, b)| a - b).collect();
    let scale = norm(&v);
    for _ in 0..2 {
        for q in facet_frame.basis.chunks_exact(d) {
            let c = dot(q, &v);
            axpy(-c, q, &mut v);
        }
    }
    let len = norm(&v);
    if !(len > scale * f64::EPSILON * 16.0) {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= len);
    Some(v)
}

pub(crate) struct Sweep {
    pub basis: Vec<f64>,
    pub rank: usize,
    /// Product of the residual norms, i.e. `sqrt(det G)`; zero if any residual vanished.
    pub gram_sqrt: f64,
}

/// Column-pivoted modified Gram-Schmidt with one re-orthogonalization pass per vector.
/// At each step the remaining vector with the largest residual norm is taken next.
pub(crate) fn orthogonalize(vectors: &[f64], dim: usize) -> Sweep {
    let count = if dim == 0 { 0 } else { vectors.len() / dim };
    let mut work = vectors.to_vec();
    let mut done = vec![false; count];
    let mut basis: Vec<f64> = Vec::with_capacity(vectors.len());
    let mut gram_sqrt = 1.0;
    let mut rank = 0;
    for _ in 0..count {
        let (pivot, _) = match (0..count)
            .filter(|&j| !done[j])
            .map(|j| (j, norm(&work[j * dim..(j + 1) * dim])))
            .max_by(|a, b| a.1.total_cmp(&b.1))
        {
            Some(p) => p,
            None => break,
        };
        done[pivot] = true;
        let mut v = work[pivot * dim..(pivot + 1) * dim].to_vec();
        for q in basis.chunks_exact(dim) {
            let c = dot(q, &v);
            axpy(-c, q, &mut v);
        }
        let len = norm(&v);
        gram_sqrt *= len;
        if len == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= len);
        for j in (0..count).filter(|&j| !done[j]) {
            let w = &mut work[j * dim..(j + 1) * dim];
            let c = dot(&v, w);
            axpy(-c, &v, w);
        }
        basis.extend_from_slice(&v);
        rank += 1;
    }
    Sweep {
        basis,
        rank,
        gram_sqrt,
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let sum: f64 = a.iter().map(|x| (x / scale) * (x / scale)).sum();
    scale * libm::sqrt(sum)
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&diff)
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

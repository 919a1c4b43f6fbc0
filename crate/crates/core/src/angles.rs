//! Dihedral angles, d-sines and the metrics derived from them.
//!
//! For a k-simplex with outward facet normals `n_i`, the dihedral angle between facets
//! `i` and `j` is `acos(-n_i . n_j)`. The d-sine of the solid angle at vertex `i` is
//!
//! ```text
//! sin_k(A_i) = k^(k-1) meas_k(S)^(k-1) / ((k-1)! * prod_{j != i} meas_(k-1)(F_j))
//! ```
//!
//! which reduces to the classical sine for triangles. All measures are intrinsic, so the
//! functions here accept simplices embedded in a higher-dimensional space as well.

use alloc::vec::Vec;

use crate::error::Error;
use crate::geometry::{
    ensure_nondegenerate, facet, factorial, normal_unchecked, project_intrinsic, simplex_measure,
    Simplex, ToleranceConfig,
};

/// Above this dimension the d-sine is accumulated in the log domain.
const LOG_DOMAIN_DIM: usize = 12;

/// Every dihedral angle of one simplex, one entry per unordered facet pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DihedralAngleSet {
    simplex_dim: usize,
    /// Pairs `(i, j)` with `i < j`, lexicographic.
    angles: Vec<f64>,
    normals: Vec<Vec<f64>>,
}

impl DihedralAngleSet {
    pub fn simplex_dim(&self) -> usize {
        self.simplex_dim
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Angle between the facets opposite `i` and `j`, in either order.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let n = self.simplex_dim + 1;
        if i == j || i >= n || j >= n {
            return None;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        // offset of row a in the packed upper triangle
        let row = a * n - a * (a + 1) / 2;
        self.angles.get(row + (b - a - 1)).copied()
    }

    /// `((i, j), beta_ij)` for every unordered pair.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        let n = self.simplex_dim + 1;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(self.angles.iter().copied())
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn normal(&self, i: usize) -> &[f64] {
        &self.normals[i]
    }

    pub fn min(&self) -> f64 {
        self.angles.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.angles.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.angles.iter().sum()
    }

    /// Smallest `sin(beta)` over the set.
    pub fn min_sine(&self) -> f64 {
        self.angles
            .iter()
            .map(|&b| libm::sin(b))
            .fold(f64::INFINITY, f64::min)
    }
}

/// d-sines at every vertex of one simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSineSet {
    pub sines: Vec<f64>,
}

impl VertexSineSet {
    pub fn min(&self) -> f64 {
        self.sines.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Lowest vertex index attaining the minimum.
    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for (i, &s) in self.sines.iter().enumerate() {
            if s < self.sines[best] {
                best = i;
            }
        }
        best
    }
}

/// `sin_k(A_i | S) = sin_(k-1)(A_i | F_k) * prod_{j != i, j < k} sin(beta_j)` where
/// `beta_j` is the angle between the facets opposite `A_j` and `A_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductDecomposition {
    pub vertex_index: usize,
    /// d-sine at `A_i` inside the facet opposite the last vertex.
    pub sub_sine: f64,
    /// `(j, sin(beta_j))` in increasing `j`.
    pub dihedral_sines: Vec<(usize, f64)>,
    pub product: f64,
    /// The direct d-sine of the whole simplex at `A_i`.
    pub direct: f64,
    /// `|direct - product| / direct`.
    pub relative_residual: f64,
}

fn check_pair(s: &Simplex, i: usize, j: usize) -> Result<(), Error> {
    let n = s.vertex_count();
    if s.intrinsic_dim() < 2 {
        return Err(Error::InvalidArgument(
            "dihedral angles need a simplex of dimension at least 2",
        ));
    }
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, bound: n });
        }
    }
    if i == j {
        return Err(Error::InvalidArgument("dihedral angle needs two distinct facets"));
    }
    Ok(())
}

fn angle_between(ni: &[f64], nj: &[f64]) -> f64 {
    let c: f64 = -ni.iter().zip(nj).map(|(a, b)| a * b).sum::<f64>();
    libm::acos(c.clamp(-1.0, 1.0))
}

fn normals(s: &Simplex) -> Result<Vec<Vec<f64>>, Error> {
    (0..s.vertex_count())
        .map(|i| normal_unchecked(s, i).ok_or_else(|| Error::degenerate(s.vertex_count())))
        .collect()
}

/// Angle in radians between the facets opposite vertices `i` and `j`.
pub fn dihedral_angle(s: &Simplex, i: usize, j: usize, cfg: &ToleranceConfig) -> Result<f64, Error> {
    check_pair(s, i, j)?;
    ensure_nondegenerate(s, cfg)?;
    let n = s.vertex_count();
    let ni = normal_unchecked(s, i).ok_or_else(|| Error::degenerate(n))?;
    let nj = normal_unchecked(s, j).ok_or_else(|| Error::degenerate(n))?;
    Ok(angle_between(&ni, &nj))
}

pub fn all_dihedral_angles(s: &Simplex, cfg: &ToleranceConfig) -> Result<DihedralAngleSet, Error> {
    check_pair(s, 0, 1)?;
    ensure_nondegenerate(s, cfg)?;
    let normals = normals(s)?;
    let n = normals.len();
    let mut angles = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            angles.push(angle_between(&normals[i], &normals[j]));
        }
    }
    Ok(DihedralAngleSet {
        simplex_dim: s.intrinsic_dim(),
        angles,
        normals,
    })
}

fn check_sine_input(s: &Simplex, i: usize, cfg: &ToleranceConfig) -> Result<(), Error> {
    if s.intrinsic_dim() < 2 {
        return Err(Error::InvalidArgument("d-sine needs a simplex of dimension at least 2"));
    }
    let n = s.vertex_count();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, bound: n });
    }
    ensure_nondegenerate(s, cfg)
}

fn facet_measures(s: &Simplex) -> Result<Vec<f64>, Error> {
    (0..s.vertex_count())
        .map(|j| facet(s, j).map(|f| simplex_measure(&f.simplex)))
        .collect()
}

fn d_sine_from_measures(k: usize, volume: f64, facets: &[f64], i: usize) -> Result<f64, Error> {
    if facets.iter().any(|&f| f <= 0.0) || volume <= 0.0 {
        return Err(Error::degenerate(k + 1));
    }
    let others = facets.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| *f);
    let kf = k as f64;
    if k > LOG_DOMAIN_DIM {
        let log_fact: f64 = (1..k).map(|m| libm::log(m as f64)).sum();
        let log_num = (kf - 1.0) * (libm::log(kf) + libm::log(volume));
        let log_den = log_fact + others.map(libm::log).sum::<f64>();
        Ok(libm::exp(log_num - log_den))
    } else {
        let num = libm::pow(kf, kf - 1.0) * libm::pow(volume, kf - 1.0);
        let den = factorial(k - 1) * others.product::<f64>();
        Ok(num / den)
    }
}

/// d-sine of the solid angle at vertex `i`.
pub fn d_sine(s: &Simplex, i: usize, cfg: &ToleranceConfig) -> Result<f64, Error> {
    check_sine_input(s, i, cfg)?;
    let facets = facet_measures(s)?;
    d_sine_from_measures(s.intrinsic_dim(), simplex_measure(s), &facets, i)
}

pub fn vertex_sines(s: &Simplex, cfg: &ToleranceConfig) -> Result<VertexSineSet, Error> {
    check_sine_input(s, 0, cfg)?;
    let facets = facet_measures(s)?;
    let volume = simplex_measure(s);
    let k = s.intrinsic_dim();
    let sines = (0..=k)
        .map(|i| d_sine_from_measures(k, volume, &facets, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VertexSineSet { sines })
}

/// Splits the d-sine at `A_i` into the facet d-sine times dihedral sines.
/// `i` must not be the last vertex; reorder the simplex first if it is.
pub fn product_decomposition(
    s: &Simplex,
    i: usize,
    cfg: &ToleranceConfig,
) -> Result<ProductDecomposition, Error> {
    let k = s.intrinsic_dim();
    if k < 3 {
        return Err(Error::InvalidArgument(
            "product decomposition needs a simplex of dimension at least 3",
        ));
    }
    if i == k {
        return Err(Error::InvalidArgument(
            "vertex must lie on the facet opposite the last vertex; reorder first",
        ));
    }
    if i > k {
        return Err(Error::IndexOutOfRange { index: i, bound: k });
    }
    ensure_nondegenerate(s, cfg)?;
    let direct = d_sine(s, i, cfg)?;

    let base = project_intrinsic(&facet(s, k)?.simplex, cfg)?;
    let sub_sine = d_sine(&base, i, cfg)?;

    let angles = all_dihedral_angles(s, cfg)?;
    let dihedral_sines: Vec<(usize, f64)> = (0..k)
        .filter(|&j| j != i)
        .map(|j| (j, libm::sin(angles.get(j, k).expect("pair in range"))))
        .collect();
    let product = sub_sine * dihedral_sines.iter().map(|(_, s)| s).product::<f64>();
    Ok(ProductDecomposition {
        vertex_index: i,
        sub_sine,
        dihedral_sines,
        product,
        direct,
        relative_residual: (direct - product).abs() / direct,
    })
}

/// Sum of all dihedral angles.
pub fn dihedral_sum(s: &Simplex, cfg: &ToleranceConfig) -> Result<f64, Error> {
    Ok(all_dihedral_angles(s, cfg)?.sum())
}

/// Radius of the inscribed ball, `k * meas_k(S) / sum_j meas_(k-1)(F_j)`.
pub fn inradius(s: &Simplex, cfg: &ToleranceConfig) -> Result<f64, Error> {
    if s.intrinsic_dim() < 1 {
        return Err(Error::InvalidArgument("a point has no inscribed ball"));
    }
    ensure_nondegenerate(s, cfg)?;
    let total: f64 = facet_measures(s)?.iter().sum();
    Ok(s.intrinsic_dim() as f64 * simplex_measure(s) / total)
}

/// Inradius divided by diameter.
pub fn ball_ratio(s: &Simplex, cfg: &ToleranceConfig) -> Result<f64, Error> {
    Ok(inradius(s, cfg)? / s.diameter())
}

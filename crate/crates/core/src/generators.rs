//! Deterministic simplex families: well-shaped references and degenerating sequences.
//!
//! `random_simplex` draws from SplitMix64 (Steele, Lea and Flood; the
//! `splitmix64.c` reference) seeded directly with the user seed. Each coordinate is
//! `scale * (next_u64() >> 11) * 2^-53`, filled vertex by vertex, coordinate by
//! coordinate. A draw is kept when it is nondegenerate at the default tolerance and its
//! minimum vertex d-sine exceeds the requested floor; otherwise the next `d + 1` points
//! are drawn from the same stream.

use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::angles::vertex_sines;
use crate::error::Error;
use crate::geometry::{is_degenerate, Simplex, ToleranceConfig};

/// Draws attempted by [`random_simplex`] before giving up.
pub const REJECTION_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Regular,
    Corner,
    Flatten,
    Needle,
    Random,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Regular => "regular",
            GeneratorKind::Corner => "corner",
            GeneratorKind::Flatten => "flatten",
            GeneratorKind::Needle => "needle",
            GeneratorKind::Random => "random",
        }
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "regular" => Ok(GeneratorKind::Regular),
            "corner" => Ok(GeneratorKind::Corner),
            "flatten" => Ok(GeneratorKind::Flatten),
            "needle" => Ok(GeneratorKind::Needle),
            "random" => Ok(GeneratorKind::Random),
            _ => Err(Error::InvalidArgument(
                "generator kind must be one of regular, corner, flatten, needle, random",
            )),
        }
    }
}

/// Full parameter set of one generated simplex.
///
/// `param` is the family parameter `t` for `flatten` and `needle`, the minimum d-sine
/// floor for `random`, and ignored otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub dim: usize,
    pub param: f64,
    pub seed: u64,
    pub scale: f64,
}

pub fn generate(spec: &GeneratorSpec) -> Result<Simplex, Error> {
    match spec.kind {
        GeneratorKind::Regular => regular_simplex(spec.dim, spec.scale),
        GeneratorKind::Corner => corner_simplex(spec.dim, spec.scale),
        GeneratorKind::Flatten => flatten_family(spec.dim, spec.param, spec.scale),
        GeneratorKind::Needle => needle_family(spec.dim, spec.param, spec.scale),
        GeneratorKind::Random => random_simplex(spec.dim, spec.seed, spec.scale, spec.param),
    }
}

fn check_common(dim: usize, scale: f64) -> Result<(), Error> {
    if dim < 2 {
        return Err(Error::InvalidArgument("generator dimension must be at least 2"));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidArgument("scale must be positive and finite"));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<(), Error> {
    if t > 0.0 && t <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument("family parameter t must lie in (0, 1]"))
    }
}

/// Unit-edge regular d-simplex by lifting: vertex m sits above the centroid of the first
/// m vertices at height `sqrt(1 - R^2)`, `R` the circumradius of the regular
/// (m-1)-simplex.
fn regular_vertices(d: usize) -> Vec<Vec<f64>> {
    let mut verts = vec![vec![0.0; d]];
    for m in 1..=d {
        let mut apex = vec![0.0; d];
        for v in &verts {
            apex.iter_mut().zip(v).for_each(|(a, x)| *a += x / m as f64);
        }
        let k = (m - 1) as f64;
        let r2 = k / (2.0 * (k + 1.0));
        apex[m - 1] = libm::sqrt(1.0 - r2);
        verts.push(apex);
    }
    verts
}

fn scaled(verts: Vec<Vec<f64>>, scale: f64) -> Result<Simplex, Error> {
    Simplex::from_vertices(
        verts
            .into_iter()
            .map(|v| v.into_iter().map(|x| x * scale).collect::<Vec<_>>()),
    )
}

/// Regular d-simplex with edge length `scale`, vertex 0 at the origin.
pub fn regular_simplex(d: usize, scale: f64) -> Result<Simplex, Error> {
    check_common(d, scale)?;
    scaled(regular_vertices(d), scale)
}

/// `conv{0, scale e_1, ..., scale e_d}`.
pub fn corner_simplex(d: usize, scale: f64) -> Result<Simplex, Error> {
    check_common(d, scale)?;
    let mut verts = vec![vec![0.0; d]];
    for i in 0..d {
        let mut e = vec![0.0; d];
        e[i] = scale;
        verts.push(e);
    }
    Simplex::from_vertices(verts)
}

/// Regular (d-1)-simplex base of edge `scale` in `x_d = 0`, apex at height `t * scale`
/// above the base centroid. The apex is the last vertex. For d = 3,
/// `t = sqrt(2/3)` reproduces the regular tetrahedron.
pub fn flatten_family(d: usize, t: f64, scale: f64) -> Result<Simplex, Error> {
    check_common(d, scale)?;
    if d < 3 {
        return Err(Error::InvalidArgument("flatten family needs d >= 3"));
    }
    check_t(t)?;
    let mut verts: Vec<Vec<f64>> = regular_vertices(d - 1)
        .into_iter()
        .map(|mut v| {
            v.push(0.0);
            v
        })
        .collect();
    let mut apex = vec![0.0; d];
    for v in &verts {
        apex.iter_mut().zip(v).for_each(|(a, x)| *a += x / d as f64);
    }
    apex[d - 1] = t;
    verts.push(apex);
    scaled(verts, scale)
}

/// Regular simplex with vertex 1 pulled along the edge toward vertex 0 until their
/// distance is `t * scale`.
pub fn needle_family(d: usize, t: f64, scale: f64) -> Result<Simplex, Error> {
    check_common(d, scale)?;
    check_t(t)?;
    let mut verts = regular_vertices(d);
    let (head, tail) = verts.split_at_mut(1);
    tail[0]
        .iter_mut()
        .zip(&head[0])
        .for_each(|(x, o)| *x = o + t * (*x - o));
    scaled(verts, scale)
}

/// Uniform `[0, 1)` value from the top 53 bits of the next output.
fn unit_f64(rng: &mut SplitMix64) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Random simplex in `[0, scale)^d` with minimum vertex d-sine above `min_quality`.
pub fn random_simplex(d: usize, seed: u64, scale: f64, min_quality: f64) -> Result<Simplex, Error> {
    check_common(d, scale)?;
    if !(0.0..1.0).contains(&min_quality) {
        return Err(Error::InvalidArgument("min_quality must lie in [0, 1)"));
    }
    let cfg = ToleranceConfig::default();
    let mut rng = SplitMix64::seed_from_u64(seed);
    for _ in 0..REJECTION_BUDGET {
        let coords: Vec<f64> = (0..(d + 1) * d).map(|_| scale * unit_f64(&mut rng)).collect();
        let s = Simplex::from_flat(d, coords)?;
        if is_degenerate(&s, &cfg) {
            continue;
        }
        match vertex_sines(&s, &cfg) {
            Ok(v) if v.min() > min_quality => return Ok(s),
            Ok(_) => {}
            Err(e) if e.is_degeneracy() => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::RejectionBudgetExhausted {
        draws: REJECTION_BUDGET,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{all_dihedral_angles, d_sine};
    use crate::geometry::{distance, simplex_measure};
    use crate::regularity::min_vertex_dsine;
    use approx::assert_relative_eq;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn regular_edges_and_dihedrals() {
        for d in 2..=8 {
            let s = regular_simplex(d, 2.5).unwrap();
            for i in 0..=d {
                for j in i + 1..=d {
                    assert_relative_eq!(distance(s.vertex(i), s.vertex(j)), 2.5, max_relative = 1e-12);
                }
            }
            let set = all_dihedral_angles(&s, &cfg()).unwrap();
            for b in set.angles() {
                assert!((b - libm::acos(1.0 / d as f64)).abs() < 1e-10);
            }
        }
        let d4 = libm::acos(0.25);
        assert_relative_eq!(d4, 1.318_116_1, epsilon = 1e-7);
    }

    #[test]
    fn corner_properties() {
        let c = corner_simplex(3, 2.0).unwrap();
        assert_relative_eq!(simplex_measure(&c), 8.0 / 6.0, max_relative = 1e-14);
        for d in 2..=8 {
            assert_relative_eq!(
                d_sine(&corner_simplex(d, 0.3).unwrap(), 0, &cfg()).unwrap(),
                1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn flatten_at_regular_height_is_regular() {
        let s = flatten_family(3, libm::sqrt(2.0 / 3.0), 1.0).unwrap();
        for i in 0..4 {
            for j in i + 1..4 {
                assert_relative_eq!(distance(s.vertex(i), s.vertex(j)), 1.0, max_relative = 1e-12);
            }
        }
        assert!(flatten_family(3, 0.0, 1.0).is_err());
        assert!(flatten_family(3, -0.5, 1.0).is_err());
        assert!(flatten_family(2, 0.5, 1.0).is_err());
    }

    #[test]
    fn flatten_volume_is_linear_in_t() {
        let a = simplex_measure(&flatten_family(4, 0.5, 1.0).unwrap());
        let b = simplex_measure(&flatten_family(4, 0.25, 1.0).unwrap());
        assert_relative_eq!(a, 2.0 * b, max_relative = 1e-12);
    }

    #[test]
    fn needle_identity_and_shrink() {
        assert_eq!(needle_family(3, 1.0, 1.0).unwrap(), regular_simplex(3, 1.0).unwrap());
        let s = needle_family(3, 0.125, 2.0).unwrap();
        assert_relative_eq!(distance(s.vertex(0), s.vertex(1)), 0.25, max_relative = 1e-12);
        assert!(needle_family(3, 0.0, 1.0).is_err());

        let mut prev = f64::INFINITY;
        for step in 1..=8 {
            let t = libm::pow(0.5, step as f64);
            let m = min_vertex_dsine(&needle_family(3, t, 1.0).unwrap(), &cfg()).unwrap();
            assert!(m < prev);
            prev = m;
        }
        assert!(prev < 0.05);
    }

    #[test]
    fn random_is_deterministic_and_meets_floor() {
        let a = random_simplex(3, 7, 1.0, 0.0).unwrap();
        let b = random_simplex(3, 7, 1.0, 0.0).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_simplex(3, 8, 1.0, 0.0).unwrap());
        for seed in 0..100 {
            let s = random_simplex(3, seed, 1.0, 0.2).unwrap();
            assert!(min_vertex_dsine(&s, &cfg()).unwrap() > 0.2);
        }
        assert!(random_simplex(3, 0, 1.0, 1.0).is_err());
    }

    #[test]
    fn random_first_draw_is_pinned() {
        // SplitMix64 reference output for seed 0 is 0xe220a8397b1dcdaf
        let mut rng = SplitMix64::seed_from_u64(0);
        assert_eq!(rng.next_u64(), 0xe220_a839_7b1d_cdaf);
        let s = random_simplex(2, 0, 1.0, 0.0).unwrap();
        let expected = (0xe220_a839_7b1d_cdafu64 >> 11) as f64 / (1u64 << 53) as f64;
        assert_eq!(s.vertex(0)[0], expected);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("needle".parse::<GeneratorKind>().unwrap(), GeneratorKind::Needle);
        assert!("blob".parse::<GeneratorKind>().is_err());
        for k in [
            GeneratorKind::Regular,
            GeneratorKind::Corner,
            GeneratorKind::Flatten,
            GeneratorKind::Needle,
            GeneratorKind::Random,
        ] {
            assert_eq!(k.name().parse::<GeneratorKind>().unwrap(), k);
        }
    }
}

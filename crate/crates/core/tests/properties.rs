use meshreg_core::angles::{
    all_dihedral_angles, d_sine, dihedral_angle, inradius, product_decomposition, vertex_sines,
};
use meshreg_core::generators::{flatten_family, needle_family, random_simplex};
use meshreg_core::geometry::{
    orthonormal_frame, outward_unit_normal, project_intrinsic, simplex_measure,
};
use meshreg_core::regularity::{audit_simplex, min_dihedral_over_subsimplices, min_vertex_dsine};
use meshreg_core::{Simplex, ToleranceConfig};
use proptest::prelude::*;

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonal matrix (rows) from classical Gram-Schmidt on `raw`, which must be full rank.
fn orthogonal_from(raw: &[f64], d: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for r in raw.chunks(d) {
        let mut v = r.to_vec();
        for q in &rows {
            let c = dot(q, &v);
            v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
        let n = dot(&v, &v).sqrt();
        rows.push(v.into_iter().map(|x| x / n).collect());
    }
    rows
}

fn rigid(s: &Simplex, rot: &[Vec<f64>], shift: &[f64], scale: f64) -> Simplex {
    s.map_vertices(|v| {
        rot.iter()
            .zip(shift)
            .map(|(row, t)| scale * dot(row, v) + t)
            .collect()
    })
    .unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn well_shaped(d: usize, seed: u64) -> Simplex {
    random_simplex(d, seed, 1.0, 1e-3).unwrap()
}

fn dim_and_seed(lo: usize, hi: usize) -> impl Strategy<Value = (usize, u64)> {
    (lo..=hi, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn measure_invariant_under_permutation((d, seed) in dim_and_seed(2, 6), perm_seed in any::<u64>()) {
        let s = well_shaped(d, seed);
        let mut order: Vec<usize> = (0..=d).collect();
        // Fisher-Yates with a tiny LCG; any permutation will do
        let mut x = perm_seed | 1;
        for i in (1..order.len()).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (x >> 33) as usize % (i + 1));
        }
        let p = s.select(&order).unwrap();
        prop_assert!(rel(simplex_measure(&p), simplex_measure(&s)) < 1e-10);
    }

    #[test]
    fn measure_scales_with_power_k((d, seed) in dim_and_seed(2, 6), lambda in 0.01f64..100.0) {
        let s = well_shaped(d, seed);
        let scaled = s.map_vertices(|v| v.iter().map(|x| lambda * x).collect()).unwrap();
        prop_assert!(rel(simplex_measure(&scaled), lambda.powi(d as i32) * simplex_measure(&s)) < 1e-10);
    }

    #[test]
    fn measure_invariant_under_rigid_motion(
        (d, seed) in dim_and_seed(2, 6),
        raw in prop::collection::vec(-1.0f64..1.0, 36),
        shift in prop::collection::vec(-10.0f64..10.0, 6),
    ) {
        let rot = orthogonal_from(&raw[..d * d], d);
        prop_assume!(rot.iter().flatten().all(|x| x.is_finite()));
        let s = well_shaped(d, seed);
        let moved = rigid(&s, &rot, &shift[..d], 1.0);
        prop_assert!(rel(simplex_measure(&moved), simplex_measure(&s)) < 1e-10);
    }

    #[test]
    fn normals_are_unit_orthogonal_and_outward((d, seed) in dim_and_seed(2, 6)) {
        let s = well_shaped(d, seed);
        for i in 0..=d {
            let n = outward_unit_normal(&s, i, &cfg()).unwrap();
            prop_assert!((dot(&n, &n).sqrt() - 1.0).abs() < 1e-12);
            let others: Vec<usize> = (0..=d).filter(|&j| j != i).collect();
            for w in others.windows(2) {
                let e: Vec<f64> = s.vertex(w[1]).iter().zip(s.vertex(w[0])).map(|(a, b)| a - b).collect();
                prop_assert!(dot(&n, &e).abs() < 1e-10);
            }
            for &j in &others {
                let e: Vec<f64> = s.vertex(j).iter().zip(s.vertex(i)).map(|(a, b)| a - b).collect();
                prop_assert!(dot(&n, &e) > 0.0);
            }
        }
    }

    #[test]
    fn projection_preserves_distances_and_measure(
        k in 2usize..=4,
        coords in prop::collection::vec(-1.0f64..1.0, 25),
    ) {
        let d = 5;
        let s = Simplex::from_flat(d, coords[..(k + 1) * d].to_vec()).unwrap();
        prop_assume!(!meshreg_core::geometry::is_degenerate(&s, &ToleranceConfig { degeneracy_rel_tol: 1e-6, ..cfg() }));
        let p = project_intrinsic(&s, &cfg()).unwrap();
        prop_assert_eq!(p.ambient_dim(), k);
        for i in 0..=k {
            for j in i + 1..=k {
                prop_assert!(rel(dist(p.vertex(i), p.vertex(j)), dist(s.vertex(i), s.vertex(j))) < 1e-10);
            }
        }
        prop_assert!(rel(simplex_measure(&p), simplex_measure(&s)) < 1e-10);
        let frame = orthonormal_frame(&s, &cfg()).unwrap();
        for a in 0..k {
            for b in 0..k {
                let expected = if a == b { 1.0 } else { 0.0 };
                prop_assert!((dot(frame.vector(a), frame.vector(b)) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_sine_is_classical_sine(seed in any::<u64>()) {
        let s = random_simplex(2, seed, 1.0, 0.0).unwrap();
        for i in 0..3 {
            let a = s.vertex(i);
            let u: Vec<f64> = s.vertex((i + 1) % 3).iter().zip(a).map(|(x, y)| x - y).collect();
            let v: Vec<f64> = s.vertex((i + 2) % 3).iter().zip(a).map(|(x, y)| x - y).collect();
            let classical = (u[0] * v[1] - u[1] * v[0]).abs() / (dot(&u, &u).sqrt() * dot(&v, &v).sqrt());
            prop_assert!((d_sine(&s, i, &cfg()).unwrap() - classical).abs() < 1e-12);
        }
    }

    #[test]
    fn product_formula_residual((d, seed) in dim_and_seed(3, 6)) {
        let s = well_shaped(d, seed);
        for i in 0..d {
            let p = product_decomposition(&s, i, &cfg()).unwrap();
            prop_assert!(p.relative_residual < 1e-9, "residual {}", p.relative_residual);
        }
    }

    #[test]
    fn dsine_invariances(
        (d, seed) in dim_and_seed(2, 5),
        raw in prop::collection::vec(-1.0f64..1.0, 25),
        shift in prop::collection::vec(-10.0f64..10.0, 5),
        lambda in 0.01f64..100.0,
    ) {
        let rot = orthogonal_from(&raw[..d * d], d);
        prop_assume!(rot.iter().flatten().all(|x| x.is_finite()));
        let s = well_shaped(d, seed);
        let moved = rigid(&s, &rot, &shift[..d], lambda);
        let a = vertex_sines(&s, &cfg()).unwrap();
        let b = vertex_sines(&moved, &cfg()).unwrap();
        for (x, y) in a.sines.iter().zip(&b.sines) {
            prop_assert!(rel(*y, *x) < 1e-9);
        }
        let da = all_dihedral_angles(&s, &cfg()).unwrap();
        let db = all_dihedral_angles(&moved, &cfg()).unwrap();
        for (x, y) in da.angles().iter().zip(db.angles()) {
            prop_assert!(rel(*y, *x) < 1e-9);
        }
        // swapping two vertices other than 0 leaves the d-sine at 0 unchanged
        let mut order: Vec<usize> = (0..=d).collect();
        order.swap(1, d);
        let swapped = s.select(&order).unwrap();
        prop_assert!(rel(d_sine(&swapped, 0, &cfg()).unwrap(), a.sines[0]) < 1e-9);
    }

    #[test]
    fn dihedral_sines_dominate_vertex_sines((d, seed) in dim_and_seed(2, 6)) {
        // sin(beta_jk) >= sin_d(A_i) for every i outside {j, k},
        // hence sin(beta) >= min vertex d-sine for every dihedral angle
        let s = well_shaped(d, seed);
        let sines = vertex_sines(&s, &cfg()).unwrap();
        let angles = all_dihedral_angles(&s, &cfg()).unwrap();
        for &v in &sines.sines {
            prop_assert!(v > 0.0 && v <= 1.0 + 1e-12);
        }
        for ((j, k), b) in angles.iter() {
            prop_assert!(b > 0.0 && b < std::f64::consts::PI);
            prop_assert!(b.sin() >= sines.min() - 1e-9);
            for i in (0..=d).filter(|&i| i != j && i != k) {
                prop_assert!(b.sin() >= sines.sines[i] - 1e-9);
            }
        }
    }

    #[test]
    fn audit_margins_nonnegative((d, seed) in dim_and_seed(2, 6)) {
        let s = random_simplex(d, seed, 1.0, 1e-2).unwrap();
        let a = audit_simplex(&s, 0, &cfg()).unwrap();
        prop_assert!(a.forward_margin >= -1e-9);
        prop_assert!(a.backward_margin >= -1e-9);
    }

    #[test]
    fn inradius_homogeneous((d, seed) in dim_and_seed(2, 5), lambda in 0.01f64..100.0) {
        let s = well_shaped(d, seed);
        let big = s.map_vertices(|v| v.iter().map(|x| lambda * x).collect()).unwrap();
        prop_assert!(rel(inradius(&big, &cfg()).unwrap(), lambda * inradius(&s, &cfg()).unwrap()) < 1e-10);
    }
}

#[test]
fn dihedral_angle_is_symmetric_and_bounded() {
    for seed in 0..50 {
        let s = well_shaped(4, seed);
        for i in 0..5 {
            for j in 0..5 {
                if i == j {
                    continue;
                }
                let a = dihedral_angle(&s, i, j, &cfg()).unwrap();
                assert_eq!(a, dihedral_angle(&s, j, i, &cfg()).unwrap());
                assert!((0.0..=std::f64::consts::PI).contains(&a));
            }
        }
    }
}

#[test]
fn triangle_argmin_agrees_between_conditions() {
    // with every angle at most pi/2, sine is monotone and both conditions pick the same cell
    let mut seeds = 0u64..;
    let mut acute = || loop {
        let s = random_simplex(2, seeds.next().unwrap(), 1.0, 0.0).unwrap();
        let e = min_dihedral_over_subsimplices(&s, &cfg()).unwrap();
        if e.max <= std::f64::consts::FRAC_PI_2 {
            return (s, e.min);
        }
    };
    for _ in 0..200 {
        let cells: Vec<(Simplex, f64)> = (0..4).map(|_| acute()).collect();
        let by_angle = (0..4).min_by(|&a, &b| cells[a].1.total_cmp(&cells[b].1)).unwrap();
        let sines: Vec<f64> = cells.iter().map(|(s, _)| min_vertex_dsine(s, &cfg()).unwrap()).collect();
        let by_sine = (0..4).min_by(|&a, &b| sines[a].total_cmp(&sines[b])).unwrap();
        assert_eq!(by_angle, by_sine);
    }
}

#[test]
fn flatten_family_degenerates_monotonically() {
    let mut prev: Option<(f64, f64)> = None;
    for step in 1..=10 {
        let t = 0.5f64.powi(step);
        let s = flatten_family(3, t, 1.0).unwrap();
        let dsine = min_vertex_dsine(&s, &cfg()).unwrap();
        let extrema = min_dihedral_over_subsimplices(&s, &cfg()).unwrap();
        if let Some((pd, pa)) = prev {
            assert!(dsine < pd);
            assert!(extrema.min < pa);
            assert!(pd / dsine < 10.0);
        }
        prev = Some((dsine, extrema.min));
    }
    assert!(prev.unwrap().0 < 1e-3);
}

#[test]
fn needle_family_is_continuous_in_t() {
    for d in 2..=4 {
        let mut prev: Option<f64> = None;
        for step in 0..=10 {
            let t = 0.5f64.powi(step);
            let m = min_vertex_dsine(&needle_family(d, t, 1.0).unwrap(), &cfg()).unwrap();
            if let Some(p) = prev {
                assert!(p / m < 10.0 && m / p < 10.0);
            }
            prev = Some(m);
        }
    }
}

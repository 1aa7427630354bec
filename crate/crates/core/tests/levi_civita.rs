mod common;

use cartan_forge::cartan::levi_civita;
use cartan_forge::cartan::vanishing::forms_vanish;
use cartan_forge::catalog::builtin;
use cartan_forge::expr::DEFAULT_SEED;
use common::{sample_points, Oracle};

const LC_ENTRIES: [&str; 7] = [
    "flat2",
    "flat3",
    "polar2",
    "sphere2",
    "sphere3_lc",
    "minkowski",
    "diag4",
];

/// Largest difference between solved curvature components and the
/// coordinate Christoffel/Riemann oracle.
pub fn max_curvature_gap(name: &str) -> (bool, f64) {
    let entry = builtin(name).unwrap();
    let conn = levi_civita(&entry.frame);
    let frame = conn.frame().clone();
    let torsion_zero = forms_vanish(&conn.torsion(), &frame.sampler(DEFAULT_SEED)).is_symbolic();
    let data = conn.curvature_data();
    let oracle = Oracle::new(&frame);
    let n = frame.dim();
    let mut worst: f64 = 0.0;
    for x in sample_points(&frame, 20) {
        let p = oracle.at(&x);
        let a = oracle.frame_riemann(&p);
        let env = frame.env_at(&x);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = data.curvature_component(i, j, k, l).evaluate(&env).unwrap();
                        worst = worst.max((v - a[i][j][k][l]).abs());
                    }
                }
            }
        }
    }
    (torsion_zero, worst)
}

#[test]
fn solved_connection_matches_christoffel_oracle() {
    for name in LC_ENTRIES {
        let (torsion_zero, gap) = max_curvature_gap(name);
        println!("{name}: torsion proven zero = {torsion_zero}, max curvature gap = {gap:.3e}");
        assert!(torsion_zero, "{name}: torsion not proven zero");
        assert!(gap < 1e-12, "{name}: curvature gap {gap:e}");
    }
}

#[test]
fn oracle_sees_unit_sphere_curvature() {
    let entry = builtin("sphere2(1)").unwrap();
    let oracle = Oracle::new(&entry.frame);
    let theta: f64 = 0.7;
    let p = oracle.at(&[theta, 0.2]);
    assert!((p.riemann[0][1][0][1] - theta.sin().powi(2)).abs() < 1e-14);
    let (_, r) = oracle.ricci(&p);
    assert!((r - 2.0).abs() < 1e-13);
}

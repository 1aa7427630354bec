mod common;

use std::collections::BTreeMap;

use cartan_forge::cartan::vanishing::forms_vanish;
use cartan_forge::cartan::{levi_civita, CartanConnection};
use cartan_forge::catalog::{
    builtin, lie_group_teleparallel, mink_torsion_contorsion, sphere2_times_line, Side,
    StructureConstants,
};
use cartan_forge::einstein::{
    cartan_constraint, covariant_exterior_derivative, covector_exterior_derivative,
    dualized_einstein_tensor, einstein_form, einstein_tensor, generalized_einstein_form,
    hilbert_lagrangian, rotate_frame, stress_from_curvature, three_dim_einstein,
    vector_couple_invariant, volume_duals, CouplePairing, EINSTEIN_FORM_SIGN, HILBERT_CONSTANT,
};
use cartan_forge::expr::DEFAULT_SEED;
use cartan_forge::exterior::masks_of_degree;
use cartan_forge::{parse, Error, Form, FrameField, ScalarExpr, Signature, Symbols};
use common::{det, sample_points, Oracle};

fn diag4() -> CartanConnection {
    builtin("diag4").unwrap().connection()
}

fn mask_list(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

/// Numeric coordinate coefficients of `η_p` from minors of the coframe matrix.
fn eta_numeric(e: &[Vec<f64>], p: usize, cols: &[usize]) -> f64 {
    let rows: Vec<usize> = (0..e.len()).filter(|q| *q != p).collect();
    let m: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| cols.iter().map(|c| e[*r][*c]).collect())
        .collect();
    let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * det(&m)
}

/// Largest gap between `Π_i` and `sign · Σ_p G_ip ε_p η_p` over every
/// coefficient at 20 points.
fn einstein_form_vs_oracle(conn: &CartanConnection, sign: f64) -> f64 {
    let frame = conn.frame().clone();
    let pi = einstein_form(conn).unwrap();
    let oracle = Oracle::new(&frame);
    let mut worst: f64 = 0.0;
    for x in sample_points(&frame, 20) {
        let p = oracle.at(&x);
        let g = oracle.frame_einstein(&p);
        let env = frame.env_at(&x);
        for i in 0..4 {
            for mask in masks_of_degree(4, 3) {
                let cols = mask_list(mask.into());
                let lib = pi.vector[i].coeff(&cols).evaluate(&env).unwrap();
                let reference: f64 = (0..4)
                    .map(|q| g[i][q] * oracle.eps(q) * eta_numeric(&p.e, q, &cols))
                    .sum();
                worst = worst.max((lib - sign * reference).abs());
            }
        }
    }
    worst
}

/// `ω^0 = e^x dt`, `ω^a = e^t dx^a`: an Einstein tensor with off-diagonal
/// frame components.
fn tilted() -> CartanConnection {
    let chart = builtin("minkowski").unwrap().frame.chart().clone();
    let syms = Symbols::new(["t", "x", "y", "z"]);
    let ex = parse("exp(x)", &syms).unwrap();
    let et = parse("exp(t)", &syms).unwrap();
    let coframe = vec![
        Form::dx(&chart, 0).scale(&ex),
        Form::dx(&chart, 1).scale(&et),
        Form::dx(&chart, 2).scale(&et),
        Form::dx(&chart, 3).scale(&et),
    ];
    let frame =
        std::sync::Arc::new(FrameField::new(chart, Signature::lorentzian(4), coframe).unwrap());
    levi_civita(&frame)
}

#[test]
fn einstein_form_is_dualized_einstein_tensor() {
    for (name, conn) in [("diag4", diag4()), ("tilted", tilted())] {
        let plus = einstein_form_vs_oracle(&conn, 1.0);
        let minus = einstein_form_vs_oracle(&conn, -1.0);
        println!("{name}: residual with sign +1: {plus:.3e}, with sign -1: {minus:.3e}");
        let measured = if plus < minus { 1 } else { -1 };
        assert_eq!(measured, EINSTEIN_FORM_SIGN);
        assert!(plus.min(minus) < 1e-9);
        assert!(
            plus.max(minus) > 1e-3,
            "the comparison must distinguish the sign"
        );
    }
}

#[test]
fn tilted_fixture_has_off_diagonal_einstein_tensor() {
    let conn = tilted();
    let g = einstein_tensor(&conn, &ScalarExpr::one(), &ScalarExpr::zero())
        .tensor
        .unwrap();
    let v =
        cartan_forge::cartan::vanishing::vanishes(&g[0][1], &conn.frame().sampler(DEFAULT_SEED));
    assert!(v.is_nonzero());
}

#[test]
fn dualized_tensor_matches_einstein_form_symbolically() {
    let conn = tilted();
    let pi = einstein_form(&conn).unwrap();
    let dual = dualized_einstein_tensor(&conn).unwrap();
    let diff: Vec<Form> = pi
        .vector
        .iter()
        .zip(&dual)
        .map(|(a, b)| a.sub(b).unwrap())
        .collect();
    assert!(forms_vanish(&diff, &conn.frame().sampler(DEFAULT_SEED)).holds());
}

#[test]
fn einstein_form_is_covariantly_conserved() {
    for (name, conn) in [
        ("diag4", diag4()),
        ("tilted", tilted()),
        ("minkowski", builtin("minkowski").unwrap().connection()),
    ] {
        let pi = einstein_form(&conn).unwrap();
        let d = covector_exterior_derivative(&pi.vector, &conn).unwrap();
        let v = forms_vanish(&d, &conn.frame().sampler(DEFAULT_SEED));
        println!("{name}: D Π = 0 ({v})");
        assert!(v.holds() && v.max_abs() < 1e-9);
    }
}

#[test]
fn volume_duals_pair_with_coframe() {
    let conn = diag4();
    let frame = conn.frame();
    let eta = volume_duals(frame);
    let vol = cartan_forge::einstein::volume_form(frame);
    let w = frame.coframe();
    for a in 0..4 {
        for p in 0..4 {
            let lhs = w[a].wedge(&eta[p]).unwrap();
            let rhs = if a == p {
                vol.clone()
            } else {
                Form::zero(frame.chart(), 4)
            };
            assert!(forms_vanish([&lhs.sub(&rhs).unwrap()], &frame.sampler(DEFAULT_SEED)).holds());
        }
    }
}

#[test]
fn hilbert_lagrangian_is_scalar_curvature_times_volume() {
    for conn in [diag4(), tilted()] {
        check_lagrangian(&conn);
    }
}

fn check_lagrangian(conn: &CartanConnection) {
    let frame = conn.frame().clone();
    let lag = hilbert_lagrangian(conn).unwrap();
    let oracle = Oracle::new(&frame);
    let mut worst: f64 = 0.0;
    for x in sample_points(&frame, 20) {
        let p = oracle.at(&x);
        let (_, r) = oracle.ricci(&p);
        let orient = det(&p.e).signum();
        let lhs = lag
            .coeff(&[0, 1, 2, 3])
            .evaluate(&frame.env_at(&x))
            .unwrap();
        let rhs = HILBERT_CONSTANT as f64 * r * orient * oracle.volume_density(&p);
        worst = worst.max((lhs - rhs).abs());
    }
    println!("Lagrangian residual {worst:.3e}");
    assert!(worst < 1e-9);
}

#[test]
fn lagrangian_invariant_under_rigid_rotation() {
    let conn = diag4();
    let (c, s) = (ScalarExpr::rational(3, 5), ScalarExpr::rational(4, 5));
    let z = ScalarExpr::zero;
    let o = ScalarExpr::one;
    let lambda = vec![
        vec![o(), z(), z(), z()],
        vec![z(), c.clone(), s.neg_s(), z()],
        vec![z(), s.clone(), c.clone(), z()],
        vec![z(), z(), z(), o()],
    ];
    let rotated = rotate_frame(&conn, &lambda).unwrap();
    let a = hilbert_lagrangian(&conn).unwrap();
    let b = hilbert_lagrangian(&rotated).unwrap();
    assert!(forms_vanish([&a.sub(&b).unwrap()], &conn.frame().sampler(DEFAULT_SEED)).holds());
}

#[test]
fn two_dimensional_einstein_tensor_vanishes() {
    let conn = builtin("sphere2(1.7)").unwrap().connection();
    let d = einstein_tensor(&conn, &ScalarExpr::one(), &ScalarExpr::zero());
    let sampler = conn.frame().sampler(DEFAULT_SEED);
    for e in d.tensor.unwrap().iter().flatten() {
        assert!(cartan_forge::cartan::vanishing::vanishes(e, &sampler).holds());
    }
}

#[test]
fn cosmological_term_alone_gives_metric() {
    let conn = diag4();
    let d = einstein_tensor(&conn, &ScalarExpr::zero(), &ScalarExpr::one());
    let g = d.tensor.unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let expected = if i != j {
                0
            } else if i == 0 {
                1
            } else {
                -1
            };
            assert_eq!(g[i][j].simplify(), ScalarExpr::int(expected));
        }
    }
}

#[test]
fn einstein_tensor_matches_oracle_on_diag4() {
    let conn = diag4();
    let frame = conn.frame().clone();
    let d = einstein_tensor(&conn, &ScalarExpr::one(), &ScalarExpr::zero());
    let g = d.tensor.clone().unwrap();
    let oracle = Oracle::new(&frame);
    for x in sample_points(&frame, 20) {
        let reference = oracle.frame_einstein(&oracle.at(&x));
        let env = frame.env_at(&x);
        for i in 0..4 {
            for j in 0..4 {
                assert!((g[i][j].evaluate(&env).unwrap() - reference[i][j]).abs() < 1e-12);
            }
        }
    }
    assert!(d
        .asymmetry()
        .iter()
        .all(|e| e.simplify().is_structurally_zero()));
}

#[test]
fn four_dimensional_operations_reject_other_dimensions() {
    let conn = builtin("sphere3_lc").unwrap().connection();
    assert!(matches!(einstein_form(&conn), Err(Error::Dimension { .. })));
    assert!(matches!(
        generalized_einstein_form(&conn),
        Err(Error::Dimension { .. })
    ));
    assert!(matches!(
        cartan_constraint(&conn),
        Err(Error::Dimension { .. })
    ));
    assert!(matches!(
        hilbert_lagrangian(&conn),
        Err(Error::Dimension { .. })
    ));
    let conn4 = diag4();
    assert!(matches!(
        three_dim_einstein(&conn4),
        Err(Error::Dimension { .. })
    ));
    assert!(matches!(
        vector_couple_invariant(&conn4, CouplePairing::Cyclic),
        Err(Error::Dimension { .. })
    ));
}

/// A curvature matrix with `Ω^2_3 = a ω^2ω^3`, `Ω^3_1 = b ω^3ω^1`,
/// `Ω^1_2 = c ω^1ω^2` (Euclidean) yields `T = (a, b, c)` on the dual planes.
#[test]
fn three_dim_stress_of_diagonal_curvature() {
    let chart = std::sync::Arc::new(cartan_forge::Chart::new(["x1", "x2", "x3"]).unwrap());
    let frame = FrameField::new(
        chart.clone(),
        Signature::euclidean(3),
        (0..3).map(|i| Form::dx(&chart, i)).collect(),
    )
    .unwrap();
    let (a, b, c) = (
        ScalarExpr::int(2),
        ScalarExpr::int(-3),
        ScalarExpr::rational(1, 2),
    );
    let plane = |i: usize, j: usize, v: &ScalarExpr| {
        Form::dx(&chart, i)
            .wedge(&Form::dx(&chart, j))
            .unwrap()
            .scale(v)
    };
    let mut curv = vec![vec![Form::zero(&chart, 2); 3]; 3];
    let mut set = |i: usize, j: usize, f: Form| {
        curv[j][i] = f.neg();
        curv[i][j] = f;
    };
    set(1, 2, plane(1, 2, &a));
    set(2, 0, plane(2, 0, &b));
    set(0, 1, plane(0, 1, &c));
    let t = stress_from_curvature(&curv, frame.signature()).unwrap();
    assert_eq!(t[0].coeff(&[1, 2]).simplify(), a);
    assert_eq!(t[1].coeff(&[2, 0]).simplify(), b);
    assert_eq!(t[2].coeff(&[0, 1]).simplify(), c);
}

#[test]
fn three_sphere_stress_is_isotropic() {
    let conn = builtin("sphere3_lc(1.5)").unwrap().connection();
    let frame = conn.frame().clone();
    let t = three_dim_einstein(&conn).unwrap();
    let w = frame.coframe();
    let sampler = frame.sampler(DEFAULT_SEED);
    let k = ScalarExpr::num(num_rational::BigRational::new(4.into(), 9.into()));
    for i in 0..3 {
        let (p, q) = ((i + 1) % 3, (i + 2) % 3);
        let expected = w[p].wedge(&w[q]).unwrap().scale(&k);
        assert!(
            forms_vanish([&t[i].sub(&expected).unwrap()], &sampler).holds(),
            "T^{i}"
        );
    }
}

#[test]
fn vector_couple_split_on_reference_geometries() {
    let tele = builtin("sphere3_tele").unwrap().connection();
    let inv = vector_couple_invariant(&tele, CouplePairing::Cyclic).unwrap();
    assert!(inv.vector_vanishes(tele.frame()).holds());
    assert!(inv.bivector_vanishes(tele.frame()).is_nonzero());

    let product = sphere2_times_line(1.0).unwrap().connection();
    let inv = vector_couple_invariant(&product, CouplePairing::Cyclic).unwrap();
    assert!(inv.bivector_vanishes(product.frame()).is_symbolic());
    assert!(inv.vector_vanishes(product.frame()).is_nonzero());
    // Only the plane of the sphere carries curvature.
    let s = product.frame().sampler(DEFAULT_SEED);
    assert!(forms_vanish(&inv.vector[..2], &s).holds());

    let printed = vector_couple_invariant(&tele, CouplePairing::AsPrinted).unwrap();
    assert_ne!(printed.bivector.len(), 0);
}

fn mink_torsion_with(alpha: &ScalarExpr) -> CartanConnection {
    let base = builtin("minkowski").unwrap();
    let omega = mink_torsion_contorsion(&base.frame, alpha).unwrap();
    CartanConnection::new(base.frame.clone(), omega).unwrap()
}

#[test]
fn generalized_form_reduces_at_zero_torsion() {
    for name in ["diag4", "minkowski", "sphere3_lc"] {
        let conn = builtin(name).unwrap().connection();
        if conn.dim() != 4 {
            continue;
        }
        let plain = einstein_form(&conn).unwrap();
        let general = generalized_einstein_form(&conn).unwrap();
        assert_eq!(plain.vector, general.vector);
        assert!(general.bivector.values().all(Form::is_structurally_zero));
    }
}

#[test]
fn couple_part_is_linear_in_contorsion() {
    let syms = Symbols::new(["alpha"]);
    let alpha = parse("alpha", &syms).unwrap();
    let sym = generalized_einstein_form(&mink_torsion_with(&alpha)).unwrap();
    for a in [0.3_f64, -0.7, 1.9] {
        let num = generalized_einstein_form(&mink_torsion_with(&ScalarExpr::num(
            num_rational::BigRational::from_float(a).unwrap(),
        )))
        .unwrap();
        assert!(num.bivector.values().any(|f| !f.is_structurally_zero()));
        for (key, f) in &num.bivector {
            let scaled = sym.bivector[key].map(|c| {
                let mut m = BTreeMap::new();
                m.insert(
                    "alpha".to_string(),
                    ScalarExpr::num(num_rational::BigRational::from_float(a).unwrap()),
                );
                c.substitute(&m)
            });
            assert!(f
                .sub(&scaled)
                .unwrap()
                .map(|c| c.simplify())
                .is_structurally_zero());
        }
    }
    // Exact linearity: the coefficient divided by alpha is alpha-free.
    for f in sym.bivector.values() {
        for c in f.terms().values() {
            let ratio = c.mul_s(&alpha.recip_s()).simplify();
            assert!(!ratio.free_symbols().contains("alpha"), "{c}");
        }
    }
    assert!(sym.bivector.values().any(|f| !f.is_structurally_zero()));
}

#[test]
fn cartan_constraint_detects_torsion() {
    let zero = mink_torsion_with(&ScalarExpr::zero());
    assert!(cartan_constraint(&zero)
        .unwrap()
        .iter()
        .all(|f| f.map(|c| c.simplify()).is_structurally_zero()));
    let conn = builtin("mink-torsion(0.3)").unwrap().connection();
    let r = cartan_constraint(&conn).unwrap();
    let v = forms_vanish(&r, &conn.frame().sampler(DEFAULT_SEED));
    println!("constraint at 0.3: {v}");
    assert!(v.is_nonzero());
}

#[test]
fn lie_group_entries_agree_with_structure_constants() {
    let so3 = StructureConstants::so3();
    for side in [Side::Left, Side::Right] {
        let entry = lie_group_teleparallel(&so3, side).unwrap();
        let report = cartan_forge::catalog::verify_ledger(&entry);
        assert!(report.passed, "{report:?}");
    }
}

#[test]
fn vector_couple_invariant_is_covariantly_closed() {
    for conn in [
        builtin("sphere3_tele").unwrap().connection(),
        builtin("sphere3_lc").unwrap().connection(),
        sphere2_times_line(1.3).unwrap().connection(),
        builtin("staircase").unwrap().connection(),
    ] {
        let inv = vector_couple_invariant(&conn, CouplePairing::Cyclic).unwrap();
        let d = covariant_exterior_derivative(&inv, &conn).unwrap();
        let v = d.vanishes(conn.frame());
        println!("{}: {v}", conn.frame().chart().names().join(","));
        assert!(v.holds());
    }
}

use cartan_forge::catalog::{lie_group_teleparallel, verify_ledger, Side, StructureConstants};
use cartan_forge::expr::BigRational;
use cartan_forge::Error;

fn r(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[test]
fn jacobi_violation_is_reported() {
    // [X1,X2] = X2 + X3, [X2,X3] = X1, [X3,X1] = 0.
    let err = StructureConstants::new(3, &[(2, 0, 1, r(1)), (1, 0, 1, r(1)), (0, 1, 2, r(1))])
        .unwrap_err();
    assert!(matches!(err, Error::Jacobi(1, 2, 3)), "{err:?}");
}

#[test]
fn so3_killing_form_is_negative_definite() {
    let k = StructureConstants::so3().killing_form();
    for (a, row) in k.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            assert_eq!(*v, if a == b { r(-2) } else { r(0) });
        }
    }
}

#[test]
fn abelian_group_is_flat_and_torsion_free() {
    let c = StructureConstants::abelian(3).unwrap();
    let entry = lie_group_teleparallel(&c, Side::Left).unwrap();
    let report = verify_ledger(&entry);
    assert!(report.passed);
    let conn = entry.connection();
    assert!(conn.torsion().iter().all(|f| f.is_structurally_zero()));
}

#[test]
fn both_sides_satisfy_maurer_cartan_with_opposite_torsion() {
    // so(3), the 2D affine algebra [X1,X2] = X2, and the Heisenberg algebra.
    let algebras = [
        StructureConstants::so3(),
        StructureConstants::new(2, &[(1, 0, 1, r(1))]).unwrap(),
        StructureConstants::new(3, &[(2, 0, 1, r(1))]).unwrap(),
        StructureConstants::new(3, &[(0, 0, 2, r(1)), (1, 1, 2, r(-1))]).unwrap(),
    ];
    for c in &algebras {
        for side in [Side::Left, Side::Right] {
            let entry = lie_group_teleparallel(c, side).unwrap();
            let report = verify_ledger(&entry);
            for claim in &report.claims {
                println!(
                    "{} {:?}: {} -> {}",
                    entry.name, side, claim.claim, claim.detail
                );
            }
            assert!(report.passed);
        }
    }
}

#[test]
fn bad_indices_and_dimensions_are_rejected() {
    assert!(StructureConstants::new(0, &[]).is_err());
    assert!(StructureConstants::new(5, &[]).is_err());
    assert!(StructureConstants::new(2, &[(0, 1, 1, r(1))]).is_err());
    assert!(StructureConstants::new(2, &[(2, 0, 1, r(1))]).is_err());
}

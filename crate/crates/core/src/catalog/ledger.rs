//! Machine-checkable claims attached to catalog entries.

use std::fmt;

use serde::Serialize;

use super::CatalogEntry;
use crate::cartan::vanishing::{forms_vanish, vanishes_all};
use crate::cartan::{bianchi_report, CurvatureData, Vanishing};
use crate::einstein::ricci_from;
use crate::expr::DEFAULT_SEED;
use crate::transport::{autoparallel, geodesic};
use crate::ScalarExpr;

/// A property an entry is expected to have.
#[derive(Clone, Debug, PartialEq)]
pub enum Claim {
    /// `d∘d = 0` on coframe and connection forms, and both Bianchi identities.
    StructureIdentities,
    TorsionFree,
    /// Every `A^i_{jk}` (`j < k`) equals the listed value, zero when unlisted.
    Torsion(Vec<((usize, usize, usize), ScalarExpr)>),
    /// `ε_i A^i_{jk}` antisymmetric in all three indices.
    TorsionTotallyAntisymmetric,
    RotationallyFlat,
    /// `A^i_{jkl} = K ε_j (δ^i_k δ_{jl} − δ^i_l δ_{jk})`.
    ConstantCurvature(ScalarExpr),
    ScalarCurvature(ScalarExpr),
    /// Autoparallel from `x0` with coordinate velocity `v0` stays on
    /// `x0 + t v0` for `t ∈ [0, 1]`.
    AutoparallelsStraight {
        x0: Vec<f64>,
        v0: Vec<f64>,
        tolerance: f64,
    },
    /// Autoparallel and Levi-Civita geodesic from the same data agree pointwise.
    AutoparallelsAreGeodesics {
        x0: Vec<f64>,
        v0: Vec<f64>,
        tolerance: f64,
    },
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::StructureIdentities => f.write_str("d∘d = 0 and Bianchi identities"),
            Claim::TorsionFree => f.write_str("torsion vanishes"),
            Claim::Torsion(list) => {
                f.write_str("torsion components")?;
                for ((i, j, k), v) in list {
                    write!(f, " A^{}_{}{}={}", i + 1, j + 1, k + 1, v)?;
                }
                Ok(())
            }
            Claim::TorsionTotallyAntisymmetric => f.write_str("torsion totally antisymmetric"),
            Claim::RotationallyFlat => f.write_str("rotational curvature vanishes"),
            Claim::ConstantCurvature(k) => write!(f, "constant curvature K = {k}"),
            Claim::ScalarCurvature(r) => write!(f, "scalar curvature R = {r}"),
            Claim::AutoparallelsStraight { .. } => f.write_str("autoparallels are straight lines"),
            Claim::AutoparallelsAreGeodesics { .. } => {
                f.write_str("autoparallels coincide with geodesics")
            }
        }
    }
}

/// A claim plus a note on where its expected value comes from.
#[derive(Clone, Debug, PartialEq)]
pub struct LedgerClaim {
    pub claim: Claim,
    pub source: String,
}

impl LedgerClaim {
    pub fn new(claim: Claim, source: &str) -> Self {
        LedgerClaim {
            claim,
            source: source.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimResult {
    pub claim: String,
    pub source: String,
    pub passed: bool,
    /// Largest residual observed (0 for a symbolic proof).
    pub measured: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerReport {
    pub entry: String,
    pub passed: bool,
    pub claims: Vec<ClaimResult>,
}

fn from_vanishing(v: Vanishing) -> (bool, f64, String) {
    (v.holds(), v.max_abs(), v.to_string())
}

/// Run every claim of the entry's ledger.
pub fn verify_ledger(entry: &CatalogEntry) -> LedgerReport {
    let conn = entry.connection();
    let frame = conn.frame().clone();
    let sampler = frame.sampler(DEFAULT_SEED);
    let data: CurvatureData = conn.curvature_data();
    let n = frame.dim();
    let sig = frame.signature().clone();
    let mut claims = Vec::new();
    for lc in &entry.ledger {
        let (passed, measured, detail) = match &lc.claim {
            Claim::StructureIdentities => {
                let dd: Vec<_> = frame
                    .coframe()
                    .iter()
                    .chain(conn.matrix().iter().flatten())
                    .map(|f| f.d().d())
                    .collect();
                let b = bianchi_report(&conn, &data);
                let v = forms_vanish(&dd, &sampler).and(b.first).and(b.second);
                from_vanishing(v)
            }
            Claim::TorsionFree => from_vanishing(forms_vanish(&data.torsion, &sampler)),
            Claim::Torsion(list) => {
                let expected = |i: usize, j: usize, k: usize| -> ScalarExpr {
                    for ((a, b, c), v) in list {
                        if (*a, *b, *c) == (i, j, k) {
                            return v.clone();
                        }
                        if (*a, *b, *c) == (i, k, j) {
                            return v.neg_s();
                        }
                    }
                    ScalarExpr::zero()
                };
                let mut diffs = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        for k in j + 1..n {
                            diffs.push(data.torsion_component(i, j, k).sub_s(&expected(i, j, k)));
                        }
                    }
                }
                from_vanishing(vanishes_all(diffs.iter(), &sampler))
            }
            Claim::TorsionTotallyAntisymmetric => {
                let low = |i: usize, j: usize, k: usize| {
                    data.torsion_component(i, j, k).scale_i(sig.eps(i))
                };
                let mut diffs = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            diffs.push(low(i, j, k).add_s(&low(j, i, k)));
                        }
                    }
                }
                from_vanishing(vanishes_all(diffs.iter(), &sampler))
            }
            Claim::RotationallyFlat => {
                from_vanishing(forms_vanish(data.curvature.iter().flatten(), &sampler))
            }
            Claim::ConstantCurvature(kappa) => {
                let mut diffs = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            for l in k + 1..n {
                                let d = |a: usize, b: usize| i64::from(a == b);
                                let model = sig.eps(j) * (d(i, k) * d(j, l) - d(i, l) * d(j, k));
                                diffs.push(
                                    data.curvature_component(i, j, k, l)
                                        .sub_s(&kappa.scale_i(model)),
                                );
                            }
                        }
                    }
                }
                from_vanishing(vanishes_all(diffs.iter(), &sampler))
            }
            Claim::ScalarCurvature(r) => {
                let measured = ricci_from(&data, &frame).scalar;
                let diff = measured.sub_s(r);
                let v = vanishes_all([&diff], &sampler);
                let (ok, m, detail) = from_vanishing(v);
                (ok, m, format!("R = {measured}; {detail}"))
            }
            Claim::AutoparallelsStraight { x0, v0, tolerance } => {
                match autoparallel(&conn, x0, v0, 1e-3, 1.0) {
                    Ok(traj) => {
                        let dev = traj
                            .t
                            .iter()
                            .zip(&traj.x)
                            .flat_map(|(t, x)| {
                                x.iter()
                                    .enumerate()
                                    .map(move |(m, xm)| (xm - (x0[m] + t * v0[m])).abs())
                            })
                            .fold(0.0, f64::max);
                        (dev < *tolerance, dev, format!("max deviation {dev:.3e}"))
                    }
                    Err(e) => (false, f64::NAN, e.to_string()),
                }
            }
            Claim::AutoparallelsAreGeodesics { x0, v0, tolerance } => {
                match (
                    autoparallel(&conn, x0, v0, 1e-3, 1.0),
                    geodesic(&frame, x0, v0, 1e-3, 1.0),
                ) {
                    (Ok(a), Ok(g)) => {
                        let dev =
                            a.x.iter()
                                .zip(&g.x)
                                .flat_map(|(p, q)| p.iter().zip(q).map(|(u, v)| (u - v).abs()))
                                .fold(0.0, f64::max);
                        (dev < *tolerance, dev, format!("max deviation {dev:.3e}"))
                    }
                    (Err(e), _) | (_, Err(e)) => (false, f64::NAN, e.to_string()),
                }
            }
        };
        claims.push(ClaimResult {
            claim: lc.claim.to_string(),
            source: lc.source.clone(),
            passed,
            measured,
            detail,
        });
    }
    LedgerReport {
        entry: entry.name.clone(),
        passed: claims.iter().all(|c| c.passed),
        claims,
    }
}

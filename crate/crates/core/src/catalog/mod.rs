//! Built-in reference geometries with their expected-property ledgers.

mod ledger;
mod lie;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cartan::{levi_civita, CartanConnection, FrameField, Signature};
use crate::expr::{parse, BigRational, Symbols};
use crate::exterior::Form;
use crate::{Chart, Error, ScalarExpr};

pub use ledger::{verify_ledger, Claim, ClaimResult, LedgerClaim, LedgerReport};
pub use lie::{maurer_cartan, Side, StructureConstants};

/// Names accepted by [`builtin`]; a trailing `(value)` sets the parameter.
pub const BUILTIN_NAMES: [&str; 10] = [
    "flat2",
    "flat3",
    "polar2",
    "sphere2",
    "sphere3_lc",
    "sphere3_tele",
    "staircase",
    "minkowski",
    "diag4",
    "mink-torsion",
];

/// A named frame field, its connection (Levi-Civita when absent) and the
/// claims it is expected to satisfy.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub frame: Arc<FrameField>,
    pub connection: Option<CartanConnection>,
    pub ledger: Vec<LedgerClaim>,
    /// Cartan–Killing form of the underlying Lie algebra, for group entries.
    pub killing: Option<Vec<Vec<BigRational>>>,
}

impl CatalogEntry {
    pub fn connection(&self) -> CartanConnection {
        self.connection
            .clone()
            .unwrap_or_else(|| levi_civita(&self.frame))
    }

    pub fn is_levi_civita(&self) -> bool {
        self.connection.is_none()
    }
}

/// Chart with bounded coordinates plus named parameters.
pub(crate) struct Builder {
    chart: Arc<Chart>,
    params: BTreeMap<String, f64>,
    symbols: Symbols,
}

impl Builder {
    pub(crate) fn new(coords: &[(&str, f64, f64)], params: &[(&str, f64)]) -> Result<Self, Error> {
        let mut chart = Chart::new(coords.iter().map(|c| c.0))?;
        for (name, lo, hi) in coords {
            chart = chart.with_bounds(name, *lo, *hi)?;
        }
        let names = coords.iter().map(|c| c.0).chain(params.iter().map(|p| p.0));
        Ok(Builder {
            chart: Arc::new(chart),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            symbols: Symbols::new(names),
        })
    }

    pub(crate) fn expr(&self, text: &str) -> Result<ScalarExpr, Error> {
        Ok(parse(text, &self.symbols)?)
    }

    pub(crate) fn one_form(&self, coeffs: &[&str]) -> Result<Form, Error> {
        let c = coeffs
            .iter()
            .map(|t| self.expr(t))
            .collect::<Result<Vec<_>, _>>()?;
        Form::one_form(&self.chart, &c)
    }

    pub(crate) fn frame(&self, sig: Signature, rows: &[&[&str]]) -> Result<Arc<FrameField>, Error> {
        let coframe = rows
            .iter()
            .map(|r| self.one_form(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Arc::new(
            FrameField::new(self.chart.clone(), sig, coframe)?.with_params(self.params.clone()),
        ))
    }
}

fn claim(c: Claim, source: &str) -> LedgerClaim {
    LedgerClaim::new(c, source)
}

fn e(text: &str) -> ScalarExpr {
    parse(text, &Symbols::any()).expect("catalog literal")
}

/// Split `name(value)` into the base name and the parameter value.
fn split_name(name: &str) -> Result<(&str, Option<f64>), Error> {
    let name = name.trim();
    match name.find('(') {
        None => Ok((name, None)),
        Some(open) => {
            let inner = name[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::UnknownEntry(name.to_string()))?;
            let v: f64 = inner
                .trim()
                .parse()
                .map_err(|_| Error::UnknownEntry(name.to_string()))?;
            if !v.is_finite() {
                return Err(Error::UnknownEntry(name.to_string()));
            }
            Ok((&name[..open], Some(v)))
        }
    }
}

fn positive(name: &str, v: f64) -> Result<f64, Error> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Invalid(format!(
            "{name} requires a positive parameter"
        )))
    }
}

fn fmt_param(v: f64) -> String {
    format!("{v}")
}

/// Construct a catalog entry by name, e.g. `sphere2(2)` or `staircase`.
pub fn builtin(name: &str) -> Result<CatalogEntry, Error> {
    let (base, param) = split_name(name)?;
    let takes_param = matches!(
        base,
        "sphere2" | "sphere3_lc" | "sphere3_tele" | "staircase" | "mink-torsion"
    );
    if param.is_some() && !takes_param {
        return Err(Error::UnknownEntry(name.to_string()));
    }
    match base {
        "flat2" => flat(2),
        "flat3" => flat(3),
        "polar2" => polar2(),
        "sphere2" => sphere2(positive(base, param.unwrap_or(1.0))?),
        "sphere3_lc" => sphere3(positive(base, param.unwrap_or(1.0))?, false),
        "sphere3_tele" => sphere3(positive(base, param.unwrap_or(1.0))?, true),
        "staircase" => staircase(param.unwrap_or(0.3)),
        "minkowski" => minkowski(),
        "diag4" => diag4(),
        "mink-torsion" => mink_torsion(param.unwrap_or(0.3)),
        _ => Err(Error::UnknownEntry(name.to_string())),
    }
}

/// All ten entries with default parameters.
pub fn all_builtins() -> Vec<CatalogEntry> {
    BUILTIN_NAMES
        .iter()
        .map(|n| builtin(n).expect("builtin"))
        .collect()
}

fn flat(n: usize) -> Result<CatalogEntry, Error> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let coords: Vec<(&str, f64, f64)> = names.iter().map(|s| (s.as_str(), -2.0, 2.0)).collect();
    let b = Builder::new(&coords, &[])?;
    let rows: Vec<Vec<&str>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { "1" } else { "0" }).collect())
        .collect();
    let rows: Vec<&[&str]> = rows.iter().map(|r| r.as_slice()).collect();
    let frame = b.frame(Signature::euclidean(n), &rows)?;
    Ok(CatalogEntry {
        name: format!("flat{n}"),
        description: format!("Euclidean {n}-space in Cartesian coordinates"),
        frame,
        connection: None,
        ledger: vec![
            claim(Claim::StructureIdentities, "exterior calculus identities"),
            claim(Claim::TorsionFree, "Levi-Civita connection"),
            claim(Claim::RotationallyFlat, "Euclidean space"),
            claim(
                Claim::ScalarCurvature(ScalarExpr::zero()),
                "Euclidean space",
            ),
        ],
        killing: None,
    })
}

fn polar2() -> Result<CatalogEntry, Error> {
    let b = Builder::new(&[("r", 0.0, 10.0), ("phi", -6.3, 6.3)], &[])?;
    let frame = b.frame(Signature::euclidean(2), &[&["1", "0"], &["0", "r"]])?;
    Ok(CatalogEntry {
        name: "polar2".into(),
        description: "Euclidean plane in polar coordinates".into(),
        frame,
        connection: None,
        ledger: vec![
            claim(Claim::StructureIdentities, "exterior calculus identities"),
            claim(Claim::TorsionFree, "Levi-Civita connection"),
            claim(
                Claim::RotationallyFlat,
                "the plane is flat in any coordinates",
            ),
        ],
        killing: None,
    })
}

fn sphere2(r: f64) -> Result<CatalogEntry, Error> {
    let b = Builder::new(
        &[("theta", 0.0, std::f64::consts::PI), ("phi", -6.3, 6.3)],
        &[("r", r)],
    )?;
    let frame = b.frame(
        Signature::euclidean(2),
        &[&["r", "0"], &["0", "r*sin(theta)"]],
    )?;
    Ok(CatalogEntry {
        name: format!("sphere2({})", fmt_param(r)),
        description: "round 2-sphere of radius r".into(),
        frame,
        connection: None,
        ledger: vec![
            claim(Claim::StructureIdentities, "exterior calculus identities"),
            claim(Claim::TorsionFree, "Levi-Civita connection"),
            claim(
                Claim::ConstantCurvature(e("1/r^2")),
                "round sphere, Gaussian curvature 1/r^2",
            ),
            claim(
                Claim::ScalarCurvature(e("2/r^2")),
                "round sphere, Christoffel computation",
            ),
        ],
        killing: None,
    })
}

/// Frame of `SO(3)` coordinates of the second kind scaled to radius `r`:
/// `ω = (r/2) θ` with `θ` the left-invariant Maurer–Cartan form.
fn sphere3_frame(r: f64) -> Result<Arc<FrameField>, Error> {
    let b = Builder::new(
        &[("x1", -3.0, 3.0), ("x2", -1.5, 1.5), ("x3", -3.0, 3.0)],
        &[("r", r)],
    )?;
    let m = maurer_cartan(&StructureConstants::so3(), Side::Left, &["x1", "x2", "x3"])?;
    let scale = b.expr("r/2")?;
    let coframe = m
        .iter()
        .map(|row| {
            let c: Vec<ScalarExpr> = row.iter().map(|v| v.mul_s(&scale)).collect();
            Form::one_form(&b.chart, &c)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Arc::new(
        FrameField::new(b.chart.clone(), Signature::euclidean(3), coframe)?
            .with_params(b.params.clone()),
    ))
}

fn levi_civita_symbol(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// `A^i_{jk} = c ε_{ijk}` for `j < k` on three indices offset by `shift`.
fn antisymmetric_torsion(c: &ScalarExpr, shift: usize) -> Vec<((usize, usize, usize), ScalarExpr)> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            for k in j + 1..3 {
                let s = levi_civita_symbol(i, j, k);
                if s != 0 {
                    out.push(((i + shift, j + shift, k + shift), c.scale_i(s)));
                }
            }
        }
    }
    out
}

fn sphere3(r: f64, teleparallel: bool) -> Result<CatalogEntry, Error> {
    let frame = sphere3_frame(r)?;
    let mut ledger = vec![claim(
        Claim::StructureIdentities,
        "exterior calculus identities",
    )];
    let (name, description, connection) = if teleparallel {
        ledger.extend([
            claim(Claim::RotationallyFlat, "left-invariant frame is parallel"),
            claim(
                Claim::Torsion(antisymmetric_torsion(&e("-2/r"), 0)),
                "Maurer-Cartan equation for so(3) scaled by r/2",
            ),
            claim(
                Claim::TorsionTotallyAntisymmetric,
                "bi-invariant metric on a compact group",
            ),
            claim(
                Claim::AutoparallelsAreGeodesics {
                    x0: vec![0.1, 0.2, 0.3],
                    v0: vec![0.3, -0.2, 0.4],
                    tolerance: 1e-6,
                },
                "one-parameter subgroups are geodesics of a bi-invariant metric",
            ),
        ]);
        let conn = CartanConnection::zero(frame.clone());
        (
            "sphere3_tele",
            "3-sphere of radius r with left teleparallel connection",
            Some(conn),
        )
    } else {
        ledger.extend([
            claim(Claim::TorsionFree, "Levi-Civita connection"),
            claim(Claim::ConstantCurvature(e("1/r^2")), "round 3-sphere"),
            claim(Claim::ScalarCurvature(e("6/r^2")), "round 3-sphere"),
        ]);
        (
            "sphere3_lc",
            "round 3-sphere of radius r, Levi-Civita connection",
            None,
        )
    };
    Ok(CatalogEntry {
        name: format!("{name}({})", fmt_param(r)),
        description: description.into(),
        frame,
        connection,
        ledger,
        killing: Some(StructureConstants::so3().killing_form()),
    })
}

/// Constant contorsion `ω^i_j = α ε_{ijk} dx^k` on Euclidean 3-space.
fn staircase(alpha: f64) -> Result<CatalogEntry, Error> {
    let b = Builder::new(
        &[("x1", -2.0, 2.0), ("x2", -2.0, 2.0), ("x3", -2.0, 2.0)],
        &[("alpha", alpha)],
    )?;
    let frame = b.frame(
        Signature::euclidean(3),
        &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
    )?;
    let a = b.expr("alpha")?;
    let omega = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    let c: Vec<ScalarExpr> = (0..3)
                        .map(|k| a.scale_i(levi_civita_symbol(i, j, k)))
                        .collect();
                    Form::one_form(frame.chart(), &c)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let conn = CartanConnection::new(frame.clone(), omega)?;
    Ok(CatalogEntry {
        name: format!("staircase({})", fmt_param(alpha)),
        description: "Euclidean 3-space with constant totally antisymmetric contorsion".into(),
        frame,
        connection: Some(conn),
        ledger: vec![
            claim(Claim::StructureIdentities, "exterior calculus identities"),
            claim(
                Claim::Torsion(antisymmetric_torsion(&e("-2*alpha"), 0)),
                "hand expansion of dω^i + ω^i_k ∧ ω^k",
            ),
            claim(Claim::TorsionTotallyAntisymmetric, "ε-shaped contorsion"),
            claim(
                Claim::ConstantCurvature(e("-alpha^2")),
                "hand expansion: Ω^i_j = α² dx^j ∧ dx^i",
            ),
            claim(
                Claim::ScalarCurvature(e("-6*alpha^2")),
                "trace of the constant-curvature form",
            ),
            claim(
                Claim::AutoparallelsStraight {
                    x0: vec![0.1, -0.2, 0.3],
                    v0: vec![0.7, 0.4, -0.5],
                    tolerance: 1e-9,
                },
                "ε_{ijk} v^j v^k = 0",
            ),
        ],
        killing: None,
    })
}

fn minkowski_builder() -> Result<Builder, Error> {
    Builder::new(
        &[
            ("t", -1.0, 1.0),
            ("x", -1.0, 1.0),
            ("y", -1.0, 1.0),
            ("z", -1.0, 1.0),
        ],
        &[],
    )
}

const IDENTITY4: [&[&str]; 4] = [
    &["1", "0", "0", "0"],
    &["0", "1", "0", "0"],
    &["0", "0", "1", "0"],
    &["0", "0", "0", "1"],
];

fn minkowski() -> Result<CatalogEntry, Error> {
    let b = minkowski_builder()?;
    let frame = b.frame(Signature::lorentzian(4), &IDENTITY4)?;
    Ok(CatalogEntry {
        name: "minkowski".into(),
        description: "Minkowski space, signature (+---)".into(),
        frame,
        connection: None,
        ledger: vec![
            claim(Claim::StructureIdentities, "exterior calculus identities"),
            claim(Claim::TorsionFree, "Levi-Civita connection"),
            claim(Claim::RotationallyFlat, "Minkowski space"),
        ],
        killing: None,
    })
}

/// `ω^0 = dt`, `ω^a = e^t dx^a`, signature (+---).
fn diag4() -> Result<CatalogEntry, Error> {
    let b = minkowski_builder()?;
    let frame = b.frame(
        Signature::lorentzian(4),
        &[
            &["1", "0", "0", "0"],
            &["0", "exp(t)", "0", "0"],
            &["0", "0", "exp(t)", "0"],
            &["0", "0", "0", "exp(t)"],
        ],
    )?;
    Ok(CatalogEntry {
        name: "diag4".into(),
        description: "g = diag(1, -a², -a², -a²) with a(t) = exp(t)".into(),
        frame,
        connection: None,
        ledger: vec![
            claim(Claim::StructureIdentities, "exterior calculus identities"),
            claim(Claim::TorsionFree, "Levi-Civita connection"),
            claim(
                Claim::ConstantCurvature(e("-1")),
                "de Sitter space with unit Hubble rate",
            ),
            claim(
                Claim::ScalarCurvature(e("-12")),
                "Christoffel computation for a = exp(t)",
            ),
        ],
        killing: None,
    })
}

/// Minkowski coframe with contorsion `K^a_b = α ε_{abc} dx^c` among spatial
/// indices and `K^0_a = K^a_0 = α dt`. The time components keep Cartan's
/// constraint from vanishing trivially, which it does for purely spatial forms.
fn mink_torsion(alpha: f64) -> Result<CatalogEntry, Error> {
    let b = Builder::new(
        &[
            ("t", -1.0, 1.0),
            ("x", -1.0, 1.0),
            ("y", -1.0, 1.0),
            ("z", -1.0, 1.0),
        ],
        &[("alpha", alpha)],
    )?;
    let frame = b.frame(Signature::lorentzian(4), &IDENTITY4)?;
    let omega = mink_torsion_contorsion(&frame, &b.expr("alpha")?)?;
    let conn = CartanConnection::new(frame.clone(), omega)?;
    let a = e("alpha");
    let mut torsion = antisymmetric_torsion(&a.scale_i(-2), 1);
    for s in 1..4 {
        torsion.push(((0, 0, s), a.clone()));
    }
    Ok(CatalogEntry {
        name: format!("mink-torsion({})", fmt_param(alpha)),
        description: "Minkowski coframe with constant contorsion".into(),
        frame,
        connection: Some(conn),
        ledger: vec![
            claim(Claim::StructureIdentities, "exterior calculus identities"),
            claim(Claim::Torsion(torsion), "hand expansion of Σ_k K^i_k ∧ ω^k"),
        ],
        killing: None,
    })
}

/// The contorsion matrix of `mink-torsion`, scaled by `alpha`.
pub fn mink_torsion_contorsion(
    frame: &FrameField,
    alpha: &ScalarExpr,
) -> Result<Vec<Vec<Form>>, Error> {
    let chart = frame.chart();
    let mut k = vec![vec![Form::zero(chart, 1); 4]; 4];
    for a in 1..4 {
        let mut c = vec![ScalarExpr::zero(); 4];
        c[0] = alpha.clone();
        k[0][a] = Form::one_form(chart, &c)?;
        k[a][0] = k[0][a].clone();
        for bb in 1..4 {
            let c: Vec<ScalarExpr> = (0..4)
                .map(|m| {
                    if m == 0 {
                        ScalarExpr::zero()
                    } else {
                        alpha.scale_i(levi_civita_symbol(a - 1, bb - 1, m - 1))
                    }
                })
                .collect();
            k[a][bb] = Form::one_form(chart, &c)?;
        }
    }
    Ok(k)
}

/// Teleparallel geometry of a Lie group: the invariant coframe of the
/// requested side with the zero connection in that frame, Euclidean in the
/// given basis of the Lie algebra.
pub fn lie_group_teleparallel(c: &StructureConstants, side: Side) -> Result<CatalogEntry, Error> {
    let n = c.dim();
    if n < 2 {
        return Err(Error::Dimension {
            expected: "2 to 4".into(),
            found: n,
        });
    }
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let coords: Vec<(&str, f64, f64)> = names.iter().map(|s| (s.as_str(), -1.5, 1.5)).collect();
    let b = Builder::new(&coords, &[])?;
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let m = maurer_cartan(c, side, &refs)?;
    let coframe = m
        .iter()
        .map(|row| Form::one_form(&b.chart, row))
        .collect::<Result<Vec<_>, _>>()?;
    let frame = Arc::new(FrameField::new(
        b.chart.clone(),
        Signature::euclidean(n),
        coframe,
    )?);
    let sign = match side {
        Side::Left => -1,
        Side::Right => 1,
    };
    let mut torsion = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                let v = c.get(i, j, k);
                if !num_traits::Zero::is_zero(v) {
                    torsion.push(((i, j, k), ScalarExpr::num(v.clone()).scale_i(sign)));
                }
            }
        }
    }
    let side_name = match side {
        Side::Left => "left",
        Side::Right => "right",
    };
    Ok(CatalogEntry {
        name: format!("lie_group_{side_name}_{n}"),
        description: format!(
            "{side_name}-invariant teleparallel geometry of a {n}-dimensional Lie group"
        ),
        connection: Some(CartanConnection::zero(frame.clone())),
        frame,
        ledger: vec![
            claim(Claim::StructureIdentities, "exterior calculus identities"),
            claim(Claim::RotationallyFlat, "invariant frame is parallel"),
            claim(Claim::Torsion(torsion), "Maurer-Cartan equation"),
        ],
        killing: Some(c.killing_form()),
    })
}

/// Round `S² × ℝ` of radius `r` with its Levi-Civita connection.
pub fn sphere2_times_line(r: f64) -> Result<CatalogEntry, Error> {
    let b = Builder::new(
        &[
            ("theta", 0.0, std::f64::consts::PI),
            ("phi", -6.3, 6.3),
            ("z", -2.0, 2.0),
        ],
        &[("r", r)],
    )?;
    let frame = b.frame(
        Signature::euclidean(3),
        &[
            &["r", "0", "0"],
            &["0", "r*sin(theta)", "0"],
            &["0", "0", "1"],
        ],
    )?;
    Ok(CatalogEntry {
        name: format!("sphere2xR({})", fmt_param(r)),
        description: "round S² × ℝ".into(),
        frame,
        connection: None,
        ledger: vec![
            claim(Claim::StructureIdentities, "exterior calculus identities"),
            claim(Claim::TorsionFree, "Levi-Civita connection"),
            claim(
                Claim::ScalarCurvature(e("2/r^2")),
                "product with a line keeps the sphere's curvature",
            ),
        ],
        killing: None,
    })
}

/// `sphere2(1)` with deliberately wrong claims; its ledger must fail.
pub fn corrupted_fixture() -> CatalogEntry {
    let mut entry = sphere2(1.0).expect("sphere2");
    entry.name = "sphere2-corrupted".into();
    entry.ledger = vec![
        claim(Claim::StructureIdentities, "exterior calculus identities"),
        claim(Claim::ScalarCurvature(e("3/r^2")), "wrong on purpose"),
        claim(Claim::RotationallyFlat, "wrong on purpose"),
    ];
    entry
}

use std::sync::Arc;

use serde::Serialize;

use super::vanishing::{forms_vanish, vanishes_all, Vanishing};
use super::FrameField;
use crate::expr::{ScalarExpr, DEFAULT_SEED};
use crate::exterior::{frame_components, Form, FrameForm};
use crate::Error;

/// Metric-compatible connection `ω^i_j` over a frame field.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanConnection {
    frame: Arc<FrameField>,
    omega: Vec<Vec<Form>>,
}

impl CartanConnection {
    /// Validates shape and metricity `ε_i ω^i_j + ε_j ω^j_i = 0`.
    pub fn new(frame: Arc<FrameField>, omega: Vec<Vec<Form>>) -> Result<CartanConnection, Error> {
        let n = frame.dim();
        if omega.len() != n || omega.iter().any(|row| row.len() != n) {
            return Err(Error::Shape(format!("connection must be {n}×{n}")));
        }
        let mut rebuilt = Vec::with_capacity(n);
        for row in &omega {
            let mut r = Vec::with_capacity(n);
            for w in row {
                if w.degree() != 1 {
                    return Err(Error::Invalid("connection entries must be 1-forms".into()));
                }
                if **w.chart() != **frame.chart() {
                    return Err(Error::ChartMismatch);
                }
                // Re-anchor on the frame's chart handle.
                let coeffs: Vec<ScalarExpr> = (0..n).map(|mu| w.coeff(&[mu])).collect();
                r.push(Form::one_form(frame.chart(), &coeffs)?);
            }
            rebuilt.push(r);
        }
        let conn = CartanConnection {
            frame,
            omega: rebuilt,
        };
        let sampler = conn.frame.sampler(DEFAULT_SEED);
        for i in 0..n {
            for j in i..n {
                let s = conn.metricity_defect(i, j);
                if let v @ Vanishing::NonZero { .. } = forms_vanish([&s], &sampler) {
                    return Err(Error::Metricity(format!(
                        "ε_{i}ω^{i}_{j} + ε_{j}ω^{j}_{i} is {v}",
                        i = i + 1,
                        j = j + 1
                    )));
                }
            }
        }
        Ok(conn)
    }

    /// The connection with all `ω^i_j = 0` (teleparallel in the given frame).
    pub fn zero(frame: Arc<FrameField>) -> CartanConnection {
        let n = frame.dim();
        let omega = vec![vec![Form::zero(frame.chart(), 1); n]; n];
        CartanConnection { frame, omega }
    }

    pub fn frame(&self) -> &Arc<FrameField> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// `ω^i_j`.
    pub fn omega(&self, i: usize, j: usize) -> &Form {
        &self.omega[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Form>] {
        &self.omega
    }

    /// `ω_{ij} = ε_i ω^i_j`, antisymmetric.
    pub fn lowered(&self, i: usize, j: usize) -> Form {
        self.omega[i][j].scale(&ScalarExpr::int(self.frame.signature().eps(i)))
    }

    fn metricity_defect(&self, i: usize, j: usize) -> Form {
        self.lowered(i, j).plus(&self.lowered(j, i))
    }

    /// `ω + K` for a contorsion matrix `K^i_j`.
    pub fn with_contorsion(&self, k: &[Vec<Form>]) -> Result<CartanConnection, Error> {
        let n = self.dim();
        if k.len() != n || k.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("contorsion must be {n}×{n}")));
        }
        let omega = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.omega[i][j].add(&k[i][j]))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        CartanConnection::new(self.frame.clone(), omega)
    }

    /// Torsion 2-forms `Ω^i = dω^i + Σ_k ω^i_k ∧ ω^k`.
    pub fn torsion(&self) -> Vec<Form> {
        let n = self.dim();
        let w = self.frame.coframe();
        (0..n)
            .map(|i| {
                let mut t = w[i].d();
                for (k, wk) in w.iter().enumerate() {
                    t = t.plus(&self.omega[i][k].wedge_in(wk));
                }
                t
            })
            .collect()
    }

    /// Curvature 2-forms `Ω^i_j = dω^i_j + Σ_k ω^i_k ∧ ω^k_j`.
    pub fn curvature(&self) -> Vec<Vec<Form>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut c = self.omega[i][j].d();
                        for k in 0..n {
                            c = c.plus(&self.omega[i][k].wedge_in(&self.omega[k][j]));
                        }
                        c
                    })
                    .collect()
            })
            .collect()
    }

    /// Torsion and curvature with their frame components.
    pub fn curvature_data(&self) -> CurvatureData {
        CurvatureData::from_forms(&self.frame, self.torsion(), self.curvature())
    }

    /// Flatness of both structure equations, with sampled fallback.
    pub fn is_flat(&self) -> FlatnessReport {
        flatness(&self.curvature_data(), &self.frame)
    }
}

/// Torsion `Ω^i`, curvature `Ω^i_j` and their frame components
/// `A^i_{jk}` (torsion) and `A^i_{jkl}` (curvature).
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureData {
    pub torsion: Vec<Form>,
    pub curvature: Vec<Vec<Form>>,
    pub torsion_frame: Vec<FrameForm>,
    pub curvature_frame: Vec<Vec<FrameForm>>,
}

impl CurvatureData {
    pub fn from_forms(
        frame: &FrameField,
        torsion: Vec<Form>,
        curvature: Vec<Vec<Form>>,
    ) -> CurvatureData {
        let comp = |f: &Form| frame_components(f, frame).expect("forms share the frame's chart");
        let torsion_frame = torsion.iter().map(comp).collect();
        let curvature_frame = curvature
            .iter()
            .map(|row| row.iter().map(comp).collect())
            .collect();
        CurvatureData {
            torsion,
            curvature,
            torsion_frame,
            curvature_frame,
        }
    }

    pub fn dim(&self) -> usize {
        self.torsion.len()
    }

    /// `A^i_{jk}`: coefficient of `Ω^i` on `ω^j∧ω^k` (antisymmetric in j, k).
    pub fn torsion_component(&self, i: usize, j: usize, k: usize) -> ScalarExpr {
        self.torsion_frame[i].get(&[j, k])
    }

    /// `A^i_{jkl}`: coefficient of `Ω^i_j` on `ω^k∧ω^l`.
    pub fn curvature_component(&self, i: usize, j: usize, k: usize, l: usize) -> ScalarExpr {
        self.curvature_frame[i][j].get(&[k, l])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flatness {
    ProvenFlat,
    NotFlat,
    Unknown,
}

/// Separate verdicts for the two lines of the flatness condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlatnessReport {
    pub torsion: Vanishing,
    pub curvature: Vanishing,
}

impl FlatnessReport {
    fn verdict_of(v: Vanishing) -> Flatness {
        match v {
            Vanishing::Symbolic => Flatness::ProvenFlat,
            Vanishing::NonZero { .. } => Flatness::NotFlat,
            _ => Flatness::Unknown,
        }
    }

    /// Both torsion and curvature.
    pub fn verdict(&self) -> Flatness {
        Self::verdict_of(self.torsion.and(self.curvature))
    }

    /// Rotational curvature alone.
    pub fn rotational(&self) -> Flatness {
        Self::verdict_of(self.curvature)
    }

    /// True when a numerical check stood in for a missing symbolic proof.
    pub fn downgraded(&self) -> bool {
        matches!(self.torsion, Vanishing::Numerical { .. })
            || matches!(self.curvature, Vanishing::Numerical { .. })
    }
}

pub fn flatness(data: &CurvatureData, frame: &FrameField) -> FlatnessReport {
    let sampler = frame.sampler(DEFAULT_SEED);
    FlatnessReport {
        torsion: forms_vanish(&data.torsion, &sampler),
        curvature: forms_vanish(data.curvature.iter().flatten(), &sampler),
    }
}

pub fn torsion(c: &CartanConnection) -> Vec<Form> {
    c.torsion()
}

pub fn curvature(c: &CartanConnection) -> Vec<Vec<Form>> {
    c.curvature()
}

pub fn is_flat(c: &CartanConnection) -> FlatnessReport {
    c.is_flat()
}

/// First Bianchi residuals `dΩ^i + Σ_k ω^i_k∧Ω^k − Σ_k Ω^i_k∧ω^k`.
pub fn first_bianchi(c: &CartanConnection, data: &CurvatureData) -> Vec<Form> {
    let n = c.dim();
    let w = c.frame().coframe();
    (0..n)
        .map(|i| {
            let mut r = data.torsion[i].d();
            for k in 0..n {
                r = r.plus(&c.omega(i, k).wedge_in(&data.torsion[k]));
                r = r.minus(&data.curvature[i][k].wedge_in(&w[k]));
            }
            r
        })
        .collect()
}

/// Second Bianchi residuals `dΩ^i_j + Σ_k ω^i_k∧Ω^k_j − Σ_k Ω^i_k∧ω^k_j`.
pub fn second_bianchi(c: &CartanConnection, data: &CurvatureData) -> Vec<Vec<Form>> {
    let n = c.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut r = data.curvature[i][j].d();
                    for k in 0..n {
                        r = r.plus(&c.omega(i, k).wedge_in(&data.curvature[k][j]));
                        r = r.minus(&data.curvature[i][k].wedge_in(c.omega(k, j)));
                    }
                    r
                })
                .collect()
        })
        .collect()
}

/// Bianchi identities checked with the sampled fallback.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BianchiReport {
    pub first: Vanishing,
    pub second: Vanishing,
}

pub fn bianchi_report(c: &CartanConnection, data: &CurvatureData) -> BianchiReport {
    let sampler = c.frame().sampler(DEFAULT_SEED);
    BianchiReport {
        first: forms_vanish(&first_bianchi(c, data), &sampler),
        second: forms_vanish(second_bianchi(c, data).iter().flatten(), &sampler),
    }
}

/// The torsion-free metric connection of a frame.
///
/// With `dω^i = ½ Σ C^i_{ab} ω^a∧ω^b` and `C_{iab} = ε_i C^i_{ab}`, the
/// lowered connection coefficients are
/// `γ_{iab} = ½ (C_{iab} + C_{abi} − C_{bia})` and `ω^i_j = ε_i Σ_k γ_{ijk} ω^k`.
pub fn levi_civita(frame: &Arc<FrameField>) -> CartanConnection {
    let n = frame.dim();
    let sig = frame.signature();
    let dw: Vec<FrameForm> = frame
        .coframe()
        .iter()
        .map(|w| frame_components(&w.d(), frame).expect("same chart"))
        .collect();
    let lowered = |i: usize, a: usize, b: usize| dw[i].get(&[a, b]).scale_i(sig.eps(i));
    let half = ScalarExpr::rational(1, 2);
    let mut omega = vec![vec![Form::zero(frame.chart(), 1); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut acc = Form::zero(frame.chart(), 1);
            for k in 0..n {
                let g = lowered(i, j, k)
                    .add_s(&lowered(j, k, i))
                    .sub_s(&lowered(k, i, j))
                    .mul_s(&half)
                    .scale_i(sig.eps(i));
                if !g.is_structurally_zero() {
                    acc = acc.plus(&frame.coframe()[k].scale(&g));
                }
            }
            omega[i][j] = acc;
        }
    }
    CartanConnection {
        frame: frame.clone(),
        omega,
    }
}

/// Levi-Civita part and contorsion `K = ω − ω_LC`.
pub fn contorsion_split(c: &CartanConnection) -> (CartanConnection, Vec<Vec<Form>>) {
    let lc = levi_civita(c.frame());
    let n = c.dim();
    let k = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| c.omega(i, j).minus(lc.omega(i, j)))
                .collect()
        })
        .collect();
    (lc, k)
}

/// Torsion rebuilt from contorsion alone: `Σ_k K^i_k ∧ ω^k`.
pub fn torsion_from_contorsion(frame: &FrameField, k: &[Vec<Form>]) -> Vec<Form> {
    let w = frame.coframe();
    k.iter()
        .map(|row| {
            row.iter()
                .zip(w)
                .fold(Form::zero(frame.chart(), 2), |acc, (kk, wk)| {
                    acc.plus(&kk.wedge_in(wk))
                })
        })
        .collect()
}

/// Verdict for one coframe 2-plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaneNormality {
    pub plane: (usize, usize),
    pub normal: bool,
    pub in_plane: Vanishing,
}

/// Whether the translation attached to each coframe plane `(j, k)` is
/// orthogonal to it, i.e. `A^j_{jk} = A^k_{jk} = 0`. In four dimensions the
/// planes are drawn from the three frame directions sharing the majority sign.
pub fn normality_check(c: &CartanConnection) -> Result<Vec<PlaneNormality>, Error> {
    let n = c.dim();
    let sig = c.frame().signature();
    let triple: Vec<usize> = match n {
        3 => vec![0, 1, 2],
        4 => {
            let minus: Vec<usize> = (0..4).filter(|&i| sig.eps(i) < 0).collect();
            let plus: Vec<usize> = (0..4).filter(|&i| sig.eps(i) > 0).collect();
            if minus.len() == 3 {
                minus
            } else if plus.len() == 3 {
                plus
            } else {
                return Err(Error::Invalid(
                    "no spacelike triple in this signature".into(),
                ));
            }
        }
        _ => {
            return Err(Error::Dimension {
                expected: "3 or 4".into(),
                found: n,
            })
        }
    };
    let data = CurvatureData::from_forms(c.frame(), c.torsion(), Vec::new());
    let sampler = c.frame().sampler(DEFAULT_SEED);
    let mut out = Vec::new();
    for (a, &j) in triple.iter().enumerate() {
        for &k in &triple[a + 1..] {
            let comps = [
                data.torsion_component(j, j, k),
                data.torsion_component(k, j, k),
            ];
            let v = vanishes_all(comps.iter(), &sampler);
            out.push(PlaneNormality {
                plane: (j, k),
                normal: v.holds(),
                in_plane: v,
            });
        }
    }
    Ok(out)
}

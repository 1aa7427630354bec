//! Ricci and scalar curvature, the Einstein tensor, and the Einstein form as
//! a vector- (and bivector-) valued form built from the structure equations.
//!
//! Index placement: `Ω^{kl} = ε_l Ω^k_l` (antisymmetric). In four dimensions
//! the cyclic permutations of `(0,1,2,3)` are taken with signs `+ − + −`; the
//! permutation starting at `i` is `(i, i+1, i+2, i+3) mod 4`. Contracting
//! upper indices with the permutation sign makes the vector part of the
//! Einstein form covariant, `Π_i`; in Euclidean signature the placement is
//! immaterial.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cartan::{CartanConnection, CurvatureData, FrameField, Signature, Vanishing};
use crate::exterior::{Form, MultiVector};
use crate::{Error, ScalarExpr};

/// Measured relation between the vector part of the Einstein form and the
/// Einstein tensor: `Π_i = EINSTEIN_FORM_SIGN · Σ_p G_i^p η_p` where
/// `ω^a ∧ η_p = δ^a_p vol` and `G_i^p = G_{ip} ε_p`.
pub const EINSTEIN_FORM_SIGN: i64 = -1;

/// Measured relation `𝔏 = HILBERT_CONSTANT · R · vol` for torsion-free
/// connections.
pub const HILBERT_CONSTANT: i64 = 1;

/// Ricci tensor, scalar curvature and optionally the assembled Einstein tensor,
/// all in frame components.
#[derive(Clone, Debug, Serialize)]
pub struct EinsteinData {
    #[serde(serialize_with = "ser_matrix")]
    pub ricci: Vec<Vec<ScalarExpr>>,
    #[serde(serialize_with = "ser_expr")]
    pub scalar: ScalarExpr,
    #[serde(serialize_with = "ser_expr")]
    pub alpha: ScalarExpr,
    #[serde(serialize_with = "ser_expr")]
    pub beta: ScalarExpr,
    #[serde(serialize_with = "ser_expr")]
    pub kappa: ScalarExpr,
    /// `G_ij = α(R_ij − R/2 g_ij) + β g_ij`, once assembled.
    #[serde(serialize_with = "ser_opt_matrix")]
    pub tensor: Option<Vec<Vec<ScalarExpr>>>,
    /// Report flag for Cartan's `G = −κT` reading; computations always use `G = κT`.
    pub cartan_sign: bool,
}

fn ser_expr<S: serde::Serializer>(e: &ScalarExpr, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

fn ser_matrix<S: serde::Serializer>(m: &[Vec<ScalarExpr>], s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m
        .iter()
        .map(|r| r.iter().map(|e| e.to_string()).collect())
        .collect();
    serde::Serialize::serialize(&rows, s)
}

fn ser_opt_matrix<S: serde::Serializer>(
    m: &Option<Vec<Vec<ScalarExpr>>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match m {
        Some(m) => ser_matrix(m, s),
        None => s.serialize_none(),
    }
}

impl EinsteinData {
    /// `T = G/κ`, negated under the Cartan sign flag.
    pub fn matter_current(&self) -> Option<Vec<Vec<ScalarExpr>>> {
        let g = self.tensor.as_ref()?;
        let mut f = self.kappa.recip_s();
        if self.cartan_sign {
            f = f.neg_s();
        }
        Some(
            g.iter()
                .map(|r| r.iter().map(|e| e.mul_s(&f)).collect())
                .collect(),
        )
    }

    /// Symmetry defect `G_ij − G_ji` of the assembled tensor.
    pub fn asymmetry(&self) -> Vec<ScalarExpr> {
        let Some(g) = &self.tensor else {
            return Vec::new();
        };
        let n = g.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push(g[i][j].sub_s(&g[j][i]));
            }
        }
        out
    }
}

/// `R_ij = Σ_k A^k_{ikj}`, `R = Σ_i ε_i R_ii`.
pub fn ricci_scalar(c: &CartanConnection) -> EinsteinData {
    ricci_from(&c.curvature_data(), c.frame())
}

pub fn ricci_from(data: &CurvatureData, frame: &FrameField) -> EinsteinData {
    let n = data.dim();
    let sig = frame.signature();
    let ricci: Vec<Vec<ScalarExpr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(ScalarExpr::zero(), |acc, k| {
                        acc.add_s(&data.curvature_component(k, i, k, j))
                    })
                })
                .collect()
        })
        .collect();
    let scalar = (0..n).fold(ScalarExpr::zero(), |acc, i| {
        acc.add_s(&ricci[i][i].scale_i(sig.eps(i)))
    });
    EinsteinData {
        ricci,
        scalar,
        alpha: ScalarExpr::one(),
        beta: ScalarExpr::zero(),
        kappa: ScalarExpr::one(),
        tensor: None,
        cartan_sign: false,
    }
}

/// `G_ij = α(R_ij − R/2 g_ij) + β g_ij` with `g_ij = ε_i δ_ij`.
pub fn einstein_tensor(
    c: &CartanConnection,
    alpha: &ScalarExpr,
    beta: &ScalarExpr,
) -> EinsteinData {
    let mut d = ricci_scalar(c);
    assemble(&mut d, c.frame(), alpha, beta);
    d
}

pub fn assemble(d: &mut EinsteinData, frame: &FrameField, alpha: &ScalarExpr, beta: &ScalarExpr) {
    let sig = frame.signature();
    let half_r = d.scalar.mul_s(&ScalarExpr::rational(1, 2));
    let n = d.ricci.len();
    let g = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut e = d.ricci[i][j].clone();
                    if i == j {
                        let eps = ScalarExpr::int(sig.eps(i));
                        e = e.sub_s(&half_r.mul_s(&eps));
                        return alpha.mul_s(&e).add_s(&beta.mul_s(&eps));
                    }
                    alpha.mul_s(&e)
                })
                .collect()
        })
        .collect();
    d.alpha = alpha.simplify();
    d.beta = beta.simplify();
    d.tensor = Some(g);
}

/// A form with values in vectors (`e_i Π^i`) and bivectors (`[e_i e_j] Π^{ij}`).
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannValuedForm {
    pub vector: Vec<Form>,
    /// Keyed by `(i, j)` with `i < j`.
    pub bivector: BTreeMap<(usize, usize), Form>,
    degree: usize,
}

impl GrassmannValuedForm {
    pub fn new(
        vector: Vec<Form>,
        bivector: BTreeMap<(usize, usize), Form>,
        degree: usize,
    ) -> Result<Self, Error> {
        let bad = vector
            .iter()
            .chain(bivector.values())
            .any(|f| f.degree() != degree)
            || bivector
                .keys()
                .any(|(i, j)| i >= j || *j >= vector.len().max(1));
        if bad {
            return Err(Error::Shape("inconsistent Grassmann-valued form".into()));
        }
        Ok(GrassmannValuedForm {
            vector,
            bivector,
            degree,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `Π^{ij}` for any ordered pair, antisymmetric.
    pub fn bivector_part(&self, i: usize, j: usize) -> Option<Form> {
        if i < j {
            self.bivector.get(&(i, j)).cloned()
        } else {
            self.bivector.get(&(j, i)).map(Form::neg)
        }
    }

    pub fn forms(&self) -> impl Iterator<Item = &Form> {
        self.vector.iter().chain(self.bivector.values())
    }

    pub fn vector_vanishes(&self, frame: &FrameField) -> Vanishing {
        crate::cartan::vanishing::forms_vanish(
            self.vector.iter(),
            &frame.sampler(crate::expr::DEFAULT_SEED),
        )
    }

    pub fn bivector_vanishes(&self, frame: &FrameField) -> Vanishing {
        crate::cartan::vanishing::forms_vanish(
            self.bivector.values(),
            &frame.sampler(crate::expr::DEFAULT_SEED),
        )
    }

    pub fn vanishes(&self, frame: &FrameField) -> Vanishing {
        self.vector_vanishes(frame)
            .and(self.bivector_vanishes(frame))
    }

    fn map(&self, f: impl Fn(&Form) -> Form) -> Self {
        GrassmannValuedForm {
            vector: self.vector.iter().map(&f).collect(),
            bivector: self.bivector.iter().map(|(k, v)| (*k, f(v))).collect(),
            degree: self.degree,
        }
    }

    pub fn scale(&self, s: &ScalarExpr) -> Self {
        self.map(|f| f.scale(s))
    }

    /// Component multivectors of a given grade with the coefficient of one
    /// coordinate monomial `dx^I` picked out.
    pub fn multivector_at(&self, grade: usize, coeff_of: &[usize]) -> Result<MultiVector, Error> {
        let n = self.vector.len();
        let mut mv = MultiVector::zero(n, grade)?;
        match grade {
            1 => {
                for (i, f) in self.vector.iter().enumerate() {
                    mv.add_term(&[i], &f.coeff(coeff_of))?;
                }
            }
            2 => {
                for ((i, j), f) in &self.bivector {
                    mv.add_term(&[*i, *j], &f.coeff(coeff_of))?;
                }
            }
            _ => return Err(Error::GradeOutOfRange { grade, n }),
        }
        Ok(mv)
    }
}

fn require_dim(c: &CartanConnection, n: usize) -> Result<(), Error> {
    if c.dim() == n {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: n.to_string(),
            found: c.dim(),
        })
    }
}

/// Cyclic permutation of `(0,1,2,3)` starting at `i`, with its sign.
fn cyclic4(i: usize) -> ([usize; 4], i64) {
    let p = [i, (i + 1) % 4, (i + 2) % 4, (i + 3) % 4];
    (p, if i.is_multiple_of(2) { 1 } else { -1 })
}

/// `Ω^{kl} = ε_l Ω^k_l`.
fn raised(data: &CurvatureData, frame: &FrameField, k: usize, l: usize) -> Form {
    data.curvature[k][l].scale(&ScalarExpr::int(frame.signature().eps(l)))
}

fn vector_part(data: &CurvatureData, frame: &FrameField) -> Vec<Form> {
    let w = frame.coframe();
    (0..4)
        .map(|i| {
            let ([_, j, k, l], s) = cyclic4(i);
            let sum = w[j]
                .wedge_in(&raised(data, frame, k, l))
                .plus(&w[k].wedge_in(&raised(data, frame, l, j)))
                .plus(&w[l].wedge_in(&raised(data, frame, j, k)));
            sum.scale(&ScalarExpr::int(s))
        })
        .collect()
}

/// Vector part `Π_i = sig(ijkl)[ω^j Ω^{kl} + ω^k Ω^{lj} + ω^l Ω^{jk}]`.
pub fn einstein_form(c: &CartanConnection) -> Result<GrassmannValuedForm, Error> {
    require_dim(c, 4)?;
    let data = c.curvature_data();
    GrassmannValuedForm::new(vector_part(&data, c.frame()), BTreeMap::new(), 3)
}

/// Adds the couple part `−sig(ijkl)[e_i e_j](ω^k Ω^l − ω^l Ω^k)`, one term per
/// cyclic permutation, i.e. for the pairs (01), (12), (23), (30).
pub fn generalized_einstein_form(c: &CartanConnection) -> Result<GrassmannValuedForm, Error> {
    require_dim(c, 4)?;
    let data = c.curvature_data();
    let frame = c.frame();
    let w = frame.coframe();
    let t = &data.torsion;
    let mut bivector = BTreeMap::new();
    for i in 0..4 {
        let ([_, j, k, l], s) = cyclic4(i);
        let f = w[k]
            .wedge_in(&t[l])
            .minus(&w[l].wedge_in(&t[k]))
            .scale(&ScalarExpr::int(-s));
        let (key, f) = if i < j {
            ((i, j), f)
        } else {
            ((j, i), f.neg())
        };
        bivector.insert(key, f);
    }
    GrassmannValuedForm::new(vector_part(&data, frame), bivector, 3)
}

/// Cartan's algebraic constraint: for each `i`, the 4-form
/// `sig(ijkl)(Ω^j Ω^{kl} + Ω^k Ω^{lj} + Ω^l Ω^{jk})`.
pub fn cartan_constraint(c: &CartanConnection) -> Result<Vec<Form>, Error> {
    require_dim(c, 4)?;
    let data = c.curvature_data();
    let frame = c.frame();
    let t = &data.torsion;
    Ok((0..4)
        .map(|i| {
            let ([_, j, k, l], s) = cyclic4(i);
            t[j].wedge_in(&raised(&data, frame, k, l))
                .plus(&t[k].wedge_in(&raised(&data, frame, l, j)))
                .plus(&t[l].wedge_in(&raised(&data, frame, j, k)))
                .scale(&ScalarExpr::int(s))
        })
        .collect())
}

/// `𝔏 = Σ_i ω^i ∧ Π^i`, the cyclic sum completed so that every
/// `[ω^i ω^j Ω^{kl}]` with distinct indices appears.
pub fn hilbert_lagrangian(c: &CartanConnection) -> Result<Form, Error> {
    let pi = einstein_form(c)?;
    let w = c.frame().coframe();
    Ok(pi
        .vector
        .iter()
        .zip(w)
        .fold(Form::zero(c.frame().chart(), 4), |acc, (p, wi)| {
            acc.plus(&wi.wedge_in(p))
        }))
}

/// Rigid rotation of a connection's frame by a constant matrix `Λ` with
/// `Λᵀ diag(ε) Λ = diag(ε)`: `ω' = Λω`, `ω'^i_j = Λ^i_a ω^a_b (Λ⁻¹)^b_j`.
pub fn rotate_frame(
    c: &CartanConnection,
    lambda: &[Vec<ScalarExpr>],
) -> Result<CartanConnection, Error> {
    let frame = c.frame();
    let n = frame.dim();
    let (inv, _) = crate::exterior::inverse(lambda).ok_or(Error::SingularCoframe)?;
    let w = frame.coframe();
    let coframe: Vec<Form> = (0..n)
        .map(|i| {
            (0..n).fold(Form::zero(frame.chart(), 1), |acc, a| {
                acc.plus(&w[a].scale(&lambda[i][a]))
            })
        })
        .collect();
    let new_frame = std::sync::Arc::new(
        FrameField::new(frame.chart().clone(), frame.signature().clone(), coframe)?
            .with_params(frame.params().clone()),
    );
    let omega = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Form::zero(frame.chart(), 1);
                    for a in 0..n {
                        for b in 0..n {
                            let s = lambda[i][a].mul_s(&inv[b][j]);
                            if !s.is_structurally_zero() {
                                acc = acc.plus(&c.omega(a, b).scale(&s));
                            }
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    CartanConnection::new(new_frame, omega)
}

/// `T^i = Ω_{kl}` for cyclic `(i,k,l)`, with `Ω_{kl} = ε_k Ω^k_l`.
pub fn three_dim_einstein(c: &CartanConnection) -> Result<Vec<Form>, Error> {
    require_dim(c, 3)?;
    stress_from_curvature(&c.curvature(), c.frame().signature())
}

/// The same alternating sum applied to a given 3×3 curvature matrix.
pub fn stress_from_curvature(curv: &[Vec<Form>], sig: &Signature) -> Result<Vec<Form>, Error> {
    if curv.len() != 3 || curv.iter().any(|r| r.len() != 3) || sig.len() != 3 {
        return Err(Error::Shape("expected a 3×3 curvature matrix".into()));
    }
    Ok((0..3)
        .map(|i| {
            let (k, l) = ((i + 1) % 3, (i + 2) % 3);
            curv[k][l].scale(&ScalarExpr::int(sig.eps(k)))
        })
        .collect())
}

/// Bivector pairing used in the vector-couple invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplePairing {
    /// `[e_2e_3]Ω_1 + [e_3e_1]Ω_2 + [e_1e_2]Ω_3`.
    Cyclic,
    /// `[e_1e_3]Ω_1 + [e_3e_1]Ω_2 + [e_1e_2]Ω_3`, whose first two pairings cancel in kind.
    AsPrinted,
}

/// `[e_1]Ω_{23} + [e_2]Ω_{31} + [e_3]Ω_{12}` plus the torsion couple part.
pub fn vector_couple_invariant(
    c: &CartanConnection,
    pairing: CouplePairing,
) -> Result<GrassmannValuedForm, Error> {
    require_dim(c, 3)?;
    let data = c.curvature_data();
    let sig = c.frame().signature();
    let vector: Vec<Form> = (0..3)
        .map(|i| {
            let (k, l) = ((i + 1) % 3, (i + 2) % 3);
            data.curvature[k][l].scale(&ScalarExpr::int(sig.eps(k)))
        })
        .collect();
    let low = |i: usize| data.torsion[i].scale(&ScalarExpr::int(sig.eps(i)));
    let mut bivector: BTreeMap<(usize, usize), Form> = BTreeMap::new();
    let mut put = |i: usize, j: usize, f: Form| {
        let (key, f) = if i < j {
            ((i, j), f)
        } else {
            ((j, i), f.neg())
        };
        let e = bivector
            .entry(key)
            .or_insert_with(|| Form::zero(f.chart(), 2));
        *e = e.plus(&f);
    };
    match pairing {
        CouplePairing::Cyclic => {
            put(1, 2, low(0));
            put(2, 0, low(1));
            put(0, 1, low(2));
        }
        CouplePairing::AsPrinted => {
            put(0, 2, low(0));
            put(2, 0, low(1));
            put(0, 1, low(2));
        }
    }
    GrassmannValuedForm::new(vector, bivector, 2)
}

/// `D(e_i Π^i + [e_i e_j] Π^{ij})`: `DΠ^i = dΠ^i + ω^i_k ∧ Π^k`,
/// `DΠ^{ij} = dΠ^{ij} + ω^i_k ∧ Π^{kj} + ω^j_k ∧ Π^{ik}`.
pub fn covariant_exterior_derivative(
    g: &GrassmannValuedForm,
    c: &CartanConnection,
) -> Result<GrassmannValuedForm, Error> {
    let n = c.dim();
    if g.vector.len() != n {
        return Err(Error::Dimension {
            expected: n.to_string(),
            found: g.vector.len(),
        });
    }
    let vector = (0..n)
        .map(|i| {
            (0..n).fold(g.vector[i].d(), |acc, k| {
                acc.plus(&c.omega(i, k).wedge_in(&g.vector[k]))
            })
        })
        .collect();
    let mut bivector = BTreeMap::new();
    if !g.bivector.is_empty() {
        let chart = c.frame().chart();
        let part = |i: usize, j: usize| {
            g.bivector_part(i, j)
                .unwrap_or_else(|| Form::zero(chart, g.degree))
        };
        for i in 0..n {
            for j in i + 1..n {
                let mut f = part(i, j).d();
                for k in 0..n {
                    f = f.plus(&c.omega(i, k).wedge_in(&part(k, j)));
                    f = f.plus(&c.omega(j, k).wedge_in(&part(i, k)));
                }
                if !f.is_structurally_zero() || g.bivector.contains_key(&(i, j)) {
                    bivector.insert((i, j), f);
                }
            }
        }
    }
    GrassmannValuedForm::new(vector, bivector, g.degree + 1)
}

/// `DΠ_i = dΠ_i − Σ_k ω^k_i ∧ Π_k` for covector-valued forms such as the
/// vector part of the Einstein form.
pub fn covector_exterior_derivative(
    forms: &[Form],
    c: &CartanConnection,
) -> Result<Vec<Form>, Error> {
    let n = c.dim();
    if forms.len() != n {
        return Err(Error::Dimension {
            expected: n.to_string(),
            found: forms.len(),
        });
    }
    Ok((0..n)
        .map(|i| {
            (0..n).fold(forms[i].d(), |acc, k| {
                acc.minus(&c.omega(k, i).wedge_in(&forms[k]))
            })
        })
        .collect())
}

/// `η_p` with `ω^a ∧ η_p = δ^a_p vol`, as coordinate 3-forms.
pub fn volume_duals(frame: &FrameField) -> Vec<Form> {
    let w = frame.coframe();
    let n = w.len();
    (0..n)
        .map(|p| {
            let others: Vec<usize> = (0..n).filter(|q| *q != p).collect();
            let sign = if p % 2 == 0 { 1 } else { -1 };
            others
                .iter()
                .skip(1)
                .fold(w[others[0]].clone(), |acc, q| acc.wedge_in(&w[*q]))
                .scale(&ScalarExpr::int(sign))
        })
        .collect()
}

/// `EINSTEIN_FORM_SIGN · Σ_p G_i^p η_p` for each `i`, the Einstein tensor
/// dualized to covector-valued 3-forms.
pub fn dualized_einstein_tensor(c: &CartanConnection) -> Result<Vec<Form>, Error> {
    require_dim(c, 4)?;
    let data = einstein_tensor(c, &ScalarExpr::one(), &ScalarExpr::zero());
    let g = data.tensor.expect("assembled");
    let frame = c.frame();
    let eta = volume_duals(frame);
    let sig = frame.signature();
    Ok((0..4)
        .map(|i| {
            (0..4).fold(Form::zero(frame.chart(), 3), |acc, p| {
                let coef = g[i][p].scale_i(sig.eps(p) * EINSTEIN_FORM_SIGN);
                acc.plus(&eta[p].scale(&coef))
            })
        })
        .collect())
}

/// Volume 4-form `ω^0 ∧ ω^1 ∧ ω^2 ∧ ω^3` (any dimension).
pub fn volume_form(frame: &FrameField) -> Form {
    let w = frame.coframe();
    w.iter()
        .skip(1)
        .fold(w[0].clone(), |acc, f| acc.wedge_in(f))
}

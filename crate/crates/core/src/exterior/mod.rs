//! Differential forms over a chart, stored in the coordinate basis.
//!
//! A k-form is a map from strictly increasing index sets (bitmasks, bit `i`
//! for coordinate `i`) to simplified coefficients. Absent keys are zero.

mod components;
mod multivector;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::expr::{Env, EvalError, ScalarExpr};
use crate::{Chart, Error};

pub use components::{frame_components, FrameForm};
pub use multivector::{bivector_to_polar, grassmann_dual, MultiVector};

/// Index set as a bitmask.
pub type Mask = u8;

/// Ascending indices of a mask.
pub fn mask_indices(mask: Mask) -> Vec<usize> {
    (0..8).filter(|i| mask & (1 << i) != 0).collect()
}

/// Mask and permutation sign of an index list, or `None` on a repeat.
pub fn mask_of(indices: &[usize]) -> Option<(Mask, i64)> {
    let mut mask: Mask = 0;
    for &i in indices {
        if i >= 8 || mask & (1 << i) != 0 {
            return None;
        }
        mask |= 1 << i;
    }
    let mut inversions = 0;
    for a in 0..indices.len() {
        for b in a + 1..indices.len() {
            if indices[a] > indices[b] {
                inversions += 1;
            }
        }
    }
    Some((mask, if inversions % 2 == 0 { 1 } else { -1 }))
}

/// Sign of `e_A ∧ e_B` relative to `e_{A∪B}` for disjoint ascending sets.
pub fn wedge_sign(a: Mask, b: Mask) -> i64 {
    let mut count = 0;
    for j in mask_indices(b) {
        count += (a >> (j + 1)).count_ones();
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All masks of `k` elements out of `n`, in increasing numeric order.
pub fn masks_of_degree(n: usize, k: usize) -> Vec<Mask> {
    (0u16..(1u16 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| m as Mask)
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    chart: Arc<Chart>,
    degree: usize,
    terms: BTreeMap<Mask, ScalarExpr>,
}

impl Form {
    pub fn zero(chart: &Arc<Chart>, degree: usize) -> Form {
        Form {
            chart: chart.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The 0-form `f`.
    pub fn function(chart: &Arc<Chart>, f: ScalarExpr) -> Form {
        let mut out = Form::zero(chart, 0);
        out.insert(0, f.simplify());
        out
    }

    /// The coordinate differential `dx^i`.
    pub fn dx(chart: &Arc<Chart>, i: usize) -> Form {
        assert!(i < chart.dim(), "coordinate index {i} out of range");
        let mut out = Form::zero(chart, 1);
        out.insert(1 << i, ScalarExpr::one());
        out
    }

    /// `Σ c_μ dx^μ`.
    pub fn one_form(chart: &Arc<Chart>, coeffs: &[ScalarExpr]) -> Result<Form, Error> {
        if coeffs.len() != chart.dim() {
            return Err(Error::Shape(format!(
                "{} coefficients for a {}-dimensional chart",
                coeffs.len(),
                chart.dim()
            )));
        }
        let mut out = Form::zero(chart, 1);
        for (i, c) in coeffs.iter().enumerate() {
            out.insert(1 << i, c.simplify());
        }
        Ok(out)
    }

    /// Form from `(indices, coefficient)` pairs; indices may be in any order.
    pub fn from_terms<I>(chart: &Arc<Chart>, degree: usize, terms: I) -> Result<Form, Error>
    where
        I: IntoIterator<Item = (Vec<usize>, ScalarExpr)>,
    {
        let mut out = Form::zero(chart, degree);
        for (idx, c) in terms {
            if idx.len() != degree || idx.iter().any(|&i| i >= chart.dim()) {
                return Err(Error::Invalid(format!(
                    "index set {idx:?} for a {degree}-form"
                )));
            }
            if let Some((mask, sign)) = mask_of(&idx) {
                out.accumulate(mask, &c.scale_i(sign));
            }
        }
        Ok(out)
    }

    fn insert(&mut self, mask: Mask, c: ScalarExpr) {
        if !c.is_structurally_zero() {
            self.terms.insert(mask, c);
        }
    }

    fn accumulate(&mut self, mask: Mask, c: &ScalarExpr) {
        let sum = match self.terms.get(&mask) {
            Some(old) => old.add_s(c),
            None => c.simplify(),
        };
        self.terms.remove(&mask);
        self.insert(mask, sum);
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Nonzero coefficients keyed by mask.
    pub fn terms(&self) -> &BTreeMap<Mask, ScalarExpr> {
        &self.terms
    }

    /// Coefficient on `dx^{i1}∧…∧dx^{ik}`, with the permutation sign.
    pub fn coeff(&self, indices: &[usize]) -> ScalarExpr {
        if indices.len() != self.degree {
            return ScalarExpr::zero();
        }
        match mask_of(indices) {
            Some((mask, sign)) => match self.terms.get(&mask) {
                Some(c) if sign == 1 => c.clone(),
                Some(c) => c.neg_s(),
                None => ScalarExpr::zero(),
            },
            None => ScalarExpr::zero(),
        }
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_chart(&self, other: &Form) -> Result<(), Error> {
        if Arc::ptr_eq(&self.chart, &other.chart) || self.chart == other.chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn add(&self, other: &Form) -> Result<Form, Error> {
        self.same_chart(other)?;
        if self.degree != other.degree {
            return Err(Error::Invalid(format!(
                "adding a {}-form to a {}-form",
                self.degree, other.degree
            )));
        }
        Ok(self.plus(other))
    }

    pub fn sub(&self, other: &Form) -> Result<Form, Error> {
        self.add(&other.neg())
    }

    /// Sum of two forms already known to share chart and degree.
    pub(crate) fn plus(&self, other: &Form) -> Form {
        debug_assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(*m, c);
        }
        out
    }

    pub(crate) fn minus(&self, other: &Form) -> Form {
        self.plus(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.map(|c| c.neg_s())
    }

    /// Multiply every coefficient by a function.
    pub fn scale(&self, f: &ScalarExpr) -> Form {
        if f.is_structurally_zero() {
            return Form::zero(&self.chart, self.degree);
        }
        self.map(|c| c.mul_s(f))
    }

    pub fn map(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> Form {
        let mut out = Form::zero(&self.chart, self.degree);
        for (m, c) in &self.terms {
            out.insert(*m, f(c));
        }
        out
    }

    pub fn wedge(&self, other: &Form) -> Result<Form, Error> {
        self.same_chart(other)?;
        Ok(self.wedge_in(other))
    }

    /// Wedge product of forms already known to share a chart.
    pub(crate) fn wedge_in(&self, other: &Form) -> Form {
        let degree = self.degree + other.degree;
        let mut out = Form::zero(&self.chart, degree);
        if degree > self.dim() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let c = ca.mul_s(cb);
                let c = if wedge_sign(*ma, *mb) < 0 {
                    c.neg_s()
                } else {
                    c
                };
                out.accumulate(ma | mb, &c);
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(&self.chart, self.degree + 1);
        if self.degree >= self.dim() {
            return out;
        }
        for (m, c) in &self.terms {
            for j in 0..self.dim() {
                if m & (1 << j) != 0 {
                    continue;
                }
                let dc = c.diff(self.chart.name(j));
                if dc.is_structurally_zero() {
                    continue;
                }
                let dc = if wedge_sign(1 << j, *m) < 0 {
                    dc.neg_s()
                } else {
                    dc
                };
                out.accumulate(m | (1 << j), &dc);
            }
        }
        out
    }

    /// Coefficients evaluated at a point.
    pub fn evaluate(&self, env: &Env<f64>) -> Result<BTreeMap<Mask, f64>, EvalError> {
        self.terms
            .iter()
            .map(|(m, c)| Ok((*m, c.evaluate(env)?)))
            .collect()
    }

    /// Substitute parameters or coordinates in every coefficient.
    pub fn substitute(&self, map: &BTreeMap<String, ScalarExpr>) -> Form {
        self.map(|c| c.substitute(map))
    }
}

/// `d` as a free function.
pub fn exterior_derivative(a: &Form) -> Form {
    a.d()
}

/// `a ∧ b` as a free function.
pub fn wedge(a: &Form, b: &Form) -> Result<Form, Error> {
    a.wedge(b)
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let basis: Vec<String> = mask_indices(*m)
                .into_iter()
                .map(|i| format!("d{}", self.chart.name(i)))
                .collect();
            let coeff = c.to_string();
            let wrapped = if coeff.contains(" + ") || coeff.contains(" - ") {
                format!("({coeff})")
            } else {
                coeff
            };
            if basis.is_empty() {
                write!(f, "{wrapped}")?;
            } else if wrapped == "1" {
                write!(f, "{}", basis.join("^"))?;
            } else {
                write!(f, "{wrapped}*{}", basis.join("^"))?;
            }
        }
        Ok(())
    }
}

/// Determinant by cofactor expansion, simplified.
pub fn det(m: &[Vec<ScalarExpr>]) -> ScalarExpr {
    let n = m.len();
    match n {
        0 => ScalarExpr::one(),
        1 => m[0][0].simplify(),
        2 => m[0][0].mul_s(&m[1][1]).sub_s(&m[0][1].mul_s(&m[1][0])),
        _ => {
            let mut acc = ScalarExpr::zero();
            for j in 0..n {
                if m[0][j].is_structurally_zero() {
                    continue;
                }
                let minor: Vec<Vec<ScalarExpr>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][j].mul_s(&det(&minor));
                acc = if j % 2 == 0 {
                    acc.add_s(&term)
                } else {
                    acc.sub_s(&term)
                };
            }
            acc
        }
    }
}

/// Inverse by adjugate over determinant, or `None` when the determinant
/// simplifies to zero.
pub fn inverse(m: &[Vec<ScalarExpr>]) -> Option<(Vec<Vec<ScalarExpr>>, ScalarExpr)> {
    let n = m.len();
    let d = det(m);
    if d.is_structurally_zero() {
        return None;
    }
    let inv_d = d.recip_s();
    let mut out = vec![vec![ScalarExpr::zero(); n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            // adj[i][j] = (-1)^{i+j} det(m without row j, column i)
            let minor: Vec<Vec<ScalarExpr>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != j)
                .map(|(_, r)| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != i)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let cof = det(&minor);
            let cof = if (i + j) % 2 == 0 { cof } else { cof.neg_s() };
            *slot = cof.mul_s(&inv_d);
        }
    }
    Some((out, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Symbols};

    fn chart3() -> Arc<Chart> {
        Arc::new(Chart::new(["x1", "x2", "x3"]).unwrap())
    }

    fn p(s: &str) -> ScalarExpr {
        parse(s, &Symbols::any()).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let c = chart3();
        let dx1 = Form::dx(&c, 0);
        let dx2 = Form::dx(&c, 1);
        let w = dx1.wedge(&dx2).unwrap();
        assert_eq!(w.coeff(&[0, 1]), ScalarExpr::one());
        assert_eq!(w.coeff(&[1, 0]), ScalarExpr::int(-1));
        assert!(dx1.wedge(&dx1).unwrap().is_structurally_zero());
        let sum = dx1.add(&dx2).unwrap();
        assert_eq!(sum.wedge(&dx2).unwrap(), w);
    }

    #[test]
    fn derivative_examples() {
        let c = chart3();
        let a = Form::dx(&c, 1).scale(&p("x1"));
        assert_eq!(a.d(), Form::dx(&c, 0).wedge(&Form::dx(&c, 1)).unwrap());
        let f = Form::function(&c, p("x1^2"));
        assert_eq!(f.d(), Form::dx(&c, 0).scale(&p("2*x1")));
    }

    #[test]
    fn mismatched_charts_are_rejected() {
        let a = Form::dx(&chart3(), 0);
        let b = Form::dx(&Arc::new(Chart::new(["u", "v"]).unwrap()), 0);
        assert_eq!(a.wedge(&b), Err(Error::ChartMismatch));
    }

    #[test]
    fn display_uses_caret_notation() {
        let c = chart3();
        let w = Form::dx(&c, 0)
            .wedge(&Form::dx(&c, 2))
            .unwrap()
            .scale(&p("x2 + 1"));
        assert_eq!(w.to_string(), "(1 + x2)*dx1^dx3");
    }

    #[test]
    fn inverse_of_polar_coframe() {
        let m = vec![vec![p("1"), p("0")], vec![p("0"), p("r")]];
        let (inv, d) = inverse(&m).unwrap();
        assert_eq!(d, p("r").simplify());
        assert_eq!(inv[1][1], p("1/r").simplify());
        assert!(inverse(&[vec![p("1"), p("0")], vec![p("x1"), p("0")]]).is_none());
    }
}

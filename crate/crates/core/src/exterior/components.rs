//! Forms expressed in a coframe basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{mask_indices, mask_of, masks_of_degree, Form, Mask};
use crate::cartan::FrameField;
use crate::expr::ScalarExpr;
use crate::Error;

/// Coefficients of a k-form on `ω^{j1}∧…∧ω^{jk}`, `j1 < … < jk`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameForm {
    n: usize,
    degree: usize,
    terms: BTreeMap<Mask, ScalarExpr>,
}

impl FrameForm {
    pub fn zero(n: usize, degree: usize) -> FrameForm {
        FrameForm {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn accumulate(&mut self, mask: Mask, c: &ScalarExpr) {
        let sum = match self.terms.remove(&mask) {
            Some(old) => old.add_s(c),
            None => c.simplify(),
        };
        if !sum.is_structurally_zero() {
            self.terms.insert(mask, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Mask, ScalarExpr> {
        &self.terms
    }

    /// Component on `ω^{j1}∧…∧ω^{jk}` in any index order (antisymmetric).
    pub fn get(&self, indices: &[usize]) -> ScalarExpr {
        if indices.len() != self.degree {
            return ScalarExpr::zero();
        }
        match mask_of(indices) {
            Some((mask, sign)) => self
                .terms
                .get(&mask)
                .map_or_else(ScalarExpr::zero, |c| c.scale_i(sign)),
            None => ScalarExpr::zero(),
        }
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Rebuild the coordinate-basis form by substituting the coframe.
    pub fn to_form(&self, frame: &FrameField) -> Form {
        let chart: &Arc<_> = frame.chart();
        let mut out = Form::zero(chart, self.degree);
        for (mask, c) in &self.terms {
            let mut basis = Form::function(chart, ScalarExpr::one());
            for j in mask_indices(*mask) {
                basis = basis.wedge_in(&frame.coframe()[j]);
            }
            out = out.plus(&basis.scale(c));
        }
        out
    }
}

/// Components of `a` on wedge products of the coframe.
///
/// With `dx^μ = Σ_i E⁻¹[μ][i] ω^i`, the coefficient on `ω^J` is
/// `Σ_M a_M det(E⁻¹[M, J])`.
pub fn frame_components(a: &Form, frame: &FrameField) -> Result<FrameForm, Error> {
    if **a.chart() != **frame.chart() {
        return Err(Error::ChartMismatch);
    }
    Ok(frame_components_in(a, frame))
}

pub(crate) fn frame_components_in(a: &Form, frame: &FrameField) -> FrameForm {
    let n = a.dim();
    let k = a.degree();
    let mut out = FrameForm::zero(n, k);
    if k > n {
        return out;
    }
    for (m, c) in a.terms() {
        for j in masks_of_degree(n, k) {
            let minor = frame.inverse_minor(*m, j);
            if minor.is_structurally_zero() {
                continue;
            }
            out.accumulate(j, &c.mul_s(&minor));
        }
    }
    out
}

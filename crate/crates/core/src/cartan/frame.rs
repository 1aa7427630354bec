use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::expr::{Env, Sampler, ScalarExpr};
use crate::exterior::{det, inverse, mask_indices, masks_of_degree, Form, Mask};
use crate::{Chart, Error};

/// Diagonal signs `ε_i` of the metric in an orthonormal coframe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature(Vec<i8>);

impl Signature {
    pub fn new(signs: Vec<i8>) -> Result<Signature, Error> {
        if let Some(bad) = signs.iter().find(|s| **s != 1 && **s != -1) {
            return Err(Error::Invalid(format!(
                "signature entries must be ±1, got {bad}"
            )));
        }
        Ok(Signature(signs))
    }

    pub fn euclidean(n: usize) -> Signature {
        Signature(vec![1; n])
    }

    /// `(+, -, …, -)`.
    pub fn lorentzian(n: usize) -> Signature {
        let mut v = vec![-1; n];
        v[0] = 1;
        Signature(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eps(&self, i: usize) -> i64 {
        self.0[i] as i64
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    /// Product of all entries.
    pub fn product(&self) -> i64 {
        self.0.iter().map(|s| *s as i64).product()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(if *s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// Chart, signature and orthonormal coframe `ω^i = E[i][μ] dx^μ`.
#[derive(Clone, Debug)]
pub struct FrameField {
    chart: Arc<Chart>,
    signature: Signature,
    coframe: Vec<Form>,
    matrix: Vec<Vec<ScalarExpr>>,
    inverse: Vec<Vec<ScalarExpr>>,
    determinant: ScalarExpr,
    params: BTreeMap<String, f64>,
    minors: Arc<OnceLock<BTreeMap<(Mask, Mask), ScalarExpr>>>,
}

impl PartialEq for FrameField {
    fn eq(&self, other: &Self) -> bool {
        self.chart == other.chart
            && self.signature == other.signature
            && self.coframe == other.coframe
            && self.params == other.params
    }
}

impl FrameField {
    pub fn new(
        chart: Arc<Chart>,
        signature: Signature,
        coframe: Vec<Form>,
    ) -> Result<FrameField, Error> {
        let n = chart.dim();
        if signature.len() != n {
            return Err(Error::Dimension {
                expected: format!("signature of length {n}"),
                found: signature.len(),
            });
        }
        if coframe.len() != n {
            return Err(Error::Dimension {
                expected: format!("{n} coframe 1-forms"),
                found: coframe.len(),
            });
        }
        for w in &coframe {
            if w.degree() != 1 {
                return Err(Error::Invalid("coframe entries must be 1-forms".into()));
            }
            if **w.chart() != *chart {
                return Err(Error::ChartMismatch);
            }
        }
        let matrix: Vec<Vec<ScalarExpr>> = coframe
            .iter()
            .map(|w| (0..n).map(|mu| w.coeff(&[mu])).collect())
            .collect();
        let (inverse, determinant) = inverse(&matrix).ok_or(Error::SingularCoframe)?;
        // Rebuild each coframe element on the shared chart handle.
        let coframe = matrix
            .iter()
            .map(|row| Form::one_form(&chart, row))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FrameField {
            chart,
            signature,
            coframe,
            matrix,
            inverse,
            determinant,
            params: BTreeMap::new(),
            minors: Arc::new(OnceLock::new()),
        })
    }

    /// Default numerical values of the free parameters (e.g. a radius).
    pub fn with_params(mut self, params: BTreeMap<String, f64>) -> FrameField {
        self.params = params;
        self
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn coframe(&self) -> &[Form] {
        &self.coframe
    }

    /// `E[i][μ]`.
    pub fn matrix(&self) -> &[Vec<ScalarExpr>] {
        &self.matrix
    }

    /// `E⁻¹[μ][i]`: coordinate components of the dual frame vector `e_i`.
    pub fn inverse(&self) -> &[Vec<ScalarExpr>] {
        &self.inverse
    }

    pub fn determinant(&self) -> &ScalarExpr {
        &self.determinant
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Coordinate components of `e_i`.
    pub fn frame_vector(&self, i: usize) -> Vec<ScalarExpr> {
        (0..self.dim())
            .map(|mu| self.inverse[mu][i].clone())
            .collect()
    }

    /// `det E⁻¹[rows, cols]` for equal-size index sets.
    pub fn inverse_minor(&self, rows: Mask, cols: Mask) -> ScalarExpr {
        if rows.count_ones() != cols.count_ones() {
            return ScalarExpr::zero();
        }
        if rows == 0 {
            return ScalarExpr::one();
        }
        let table = self.minors.get_or_init(|| {
            let n = self.dim();
            let mut t = BTreeMap::new();
            for k in 1..=n {
                for r in masks_of_degree(n, k) {
                    for c in masks_of_degree(n, k) {
                        let m: Vec<Vec<ScalarExpr>> = mask_indices(r)
                            .iter()
                            .map(|&mu| {
                                mask_indices(c)
                                    .iter()
                                    .map(|&i| self.inverse[mu][i].clone())
                                    .collect()
                            })
                            .collect();
                        let d = det(&m);
                        if !d.is_structurally_zero() {
                            t.insert((r, c), d);
                        }
                    }
                }
            }
            t
        });
        table
            .get(&(rows, cols))
            .cloned()
            .unwrap_or_else(ScalarExpr::zero)
    }

    /// Numeric environment at a coordinate point, with the default parameters.
    pub fn env_at(&self, x: &[f64]) -> Env<f64> {
        let mut env = Env::new();
        for (k, v) in &self.params {
            env.set(k, *v);
        }
        for (name, v) in self.chart.names().iter().zip(x) {
            env.set(name, *v);
        }
        env
    }

    /// Sampler honouring the chart bounds with parameters pinned to their defaults.
    pub fn sampler(&self, seed: u64) -> Sampler {
        let mut s = self.chart.sampler(seed);
        for (k, v) in &self.params {
            s = s.with_fixed(k, *v);
        }
        s
    }

    /// Same frame with every coframe coefficient mapped (e.g. parameter substitution).
    pub fn map_coframe(&self, f: impl Fn(&Form) -> Form) -> Result<FrameField, Error> {
        let coframe = self.coframe.iter().map(f).collect();
        Ok(
            FrameField::new(self.chart.clone(), self.signature.clone(), coframe)?
                .with_params(self.params.clone()),
        )
    }
}

/// `g_{μν} = Σ_i ε_i E[i][μ] E[i][ν]`.
pub fn metric_from_coframe(frame: &FrameField) -> Vec<Vec<ScalarExpr>> {
    let n = frame.dim();
    let e = frame.matrix();
    let mut g = vec![vec![ScalarExpr::zero(); n]; n];
    for mu in 0..n {
        for nu in mu..n {
            let mut acc = ScalarExpr::zero();
            for (i, row) in e.iter().enumerate() {
                let t = row[mu].mul_s(&row[nu]).scale_i(frame.signature().eps(i));
                acc = acc.add_s(&t);
            }
            g[mu][nu] = acc.clone();
            g[nu][mu] = acc;
        }
    }
    g
}

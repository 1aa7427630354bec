//! Zero checks with a sampled fallback when the simplifier cannot decide.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::expr::{Sampler, ScalarExpr};
use crate::exterior::{Form, FrameForm};

/// Number of deterministic sample points used by the fallback.
pub const FALLBACK_SAMPLES: usize = 20;
/// Absolute tolerance of the fallback.
pub const FALLBACK_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Vanishing {
    /// The simplifier reduced every coefficient to the literal 0.
    Symbolic,
    /// Not proven, but below tolerance at every sample point.
    Numerical { max_abs: f64 },
    /// Some sample point exceeds the tolerance.
    NonZero { max_abs: f64 },
    /// No sample point could be evaluated.
    Undetermined,
}

impl Vanishing {
    /// True for symbolic or numerical vanishing.
    pub fn holds(&self) -> bool {
        matches!(self, Vanishing::Symbolic | Vanishing::Numerical { .. })
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Vanishing::Symbolic)
    }

    pub fn is_nonzero(&self) -> bool {
        matches!(self, Vanishing::NonZero { .. })
    }

    /// Largest sampled magnitude, 0 for a symbolic proof.
    pub fn max_abs(&self) -> f64 {
        match self {
            Vanishing::Symbolic => 0.0,
            Vanishing::Numerical { max_abs } | Vanishing::NonZero { max_abs } => *max_abs,
            Vanishing::Undetermined => f64::NAN,
        }
    }

    /// Combine two verdicts, keeping the weaker one.
    pub fn and(self, other: Vanishing) -> Vanishing {
        use Vanishing::*;
        match (self, other) {
            (NonZero { max_abs: a }, NonZero { max_abs: b }) => NonZero { max_abs: a.max(b) },
            (NonZero { .. }, _) => self,
            (_, NonZero { .. }) => other,
            (Undetermined, _) | (_, Undetermined) => Undetermined,
            (Numerical { max_abs: a }, Numerical { max_abs: b }) => Numerical { max_abs: a.max(b) },
            (Numerical { .. }, Symbolic) => self,
            (Symbolic, _) => other,
        }
    }
}

impl fmt::Display for Vanishing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vanishing::Symbolic => f.write_str("proven zero"),
            Vanishing::Numerical { max_abs } => write!(f, "numerically zero (max {max_abs:.3e})"),
            Vanishing::NonZero { max_abs } => write!(f, "nonzero (max {max_abs:.3e})"),
            Vanishing::Undetermined => f.write_str("undetermined"),
        }
    }
}

/// Joint check of several expressions.
pub fn vanishes_all<'a, I>(exprs: I, sampler: &Sampler) -> Vanishing
where
    I: IntoIterator<Item = &'a ScalarExpr>,
{
    let pending: Vec<&ScalarExpr> = exprs
        .into_iter()
        .filter(|e| !e.is_structurally_zero())
        .collect();
    if pending.is_empty() {
        return Vanishing::Symbolic;
    }
    let mut symbols = BTreeSet::new();
    for e in &pending {
        symbols.extend(e.free_symbols());
    }
    let mut max_abs: f64 = 0.0;
    let mut evaluated = 0;
    for env in sampler.points(&symbols, FALLBACK_SAMPLES) {
        let mut ok = true;
        let mut local: f64 = 0.0;
        for e in &pending {
            match e.evaluate(&env) {
                Ok(v) => local = local.max(v.abs()),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            evaluated += 1;
            max_abs = max_abs.max(local);
        }
    }
    if evaluated == 0 {
        Vanishing::Undetermined
    } else if max_abs > FALLBACK_TOLERANCE {
        Vanishing::NonZero { max_abs }
    } else {
        Vanishing::Numerical { max_abs }
    }
}

pub fn vanishes(e: &ScalarExpr, sampler: &Sampler) -> Vanishing {
    vanishes_all(std::iter::once(e), sampler)
}

pub fn form_vanishes(f: &Form, sampler: &Sampler) -> Vanishing {
    vanishes_all(f.terms().values(), sampler)
}

pub fn forms_vanish<'a, I>(forms: I, sampler: &Sampler) -> Vanishing
where
    I: IntoIterator<Item = &'a Form>,
{
    let coeffs: Vec<&ScalarExpr> = forms.into_iter().flat_map(|f| f.terms().values()).collect();
    vanishes_all(coeffs, sampler)
}

pub fn frame_form_vanishes(f: &FrameForm, sampler: &Sampler) -> Vanishing {
    vanishes_all(f.terms().values(), sampler)
}

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::{BigRational, Function, Node, ScalarExpr};
use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Numeric bindings for coordinates and parameters.
#[derive(Debug, Clone, Default)]
pub struct Env<T> {
    slots: Vec<(Arc<str>, T)>,
}

impl<T: Copy> Env<T> {
    pub fn new() -> Self {
        Env { slots: Vec::new() }
    }

    pub fn with(mut self, name: &str, value: T) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: &str, value: T) {
        match self.slots.iter_mut().find(|(k, _)| &**k == name) {
            Some(slot) => slot.1 = value,
            None => self.slots.push((Arc::from(name), value)),
        }
    }

    pub fn get(&self, name: &str) -> Option<T> {
        self.slots
            .iter()
            .find(|(k, _)| &**k == name)
            .map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, T)> {
        self.slots.iter().map(|(k, v)| (&**k, *v))
    }
}

impl<T: Copy> FromIterator<(String, T)> for Env<T> {
    fn from_iter<I: IntoIterator<Item = (String, T)>>(iter: I) -> Self {
        let mut env = Env::new();
        for (k, v) in iter {
            env.set(&k, v);
        }
        env
    }
}

enum Val<T> {
    Exact(BigRational),
    Float(T),
}

impl<T: Real> Val<T> {
    fn float(self) -> T {
        match self {
            Val::Exact(r) => rat_to_real(&r),
            Val::Float(x) => x,
        }
    }
}

pub(crate) fn rat_to_real<T: Real>(r: &BigRational) -> T {
    T::from_f64(r.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(T::nan)
}

pub(super) fn evaluate<T: Real>(e: &ScalarExpr, env: &Env<T>) -> Result<T, EvalError> {
    let v = eval_node(e, env)?.float();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::Domain(format!("non-finite value in `{e}`")))
    }
}

fn eval_node<T: Real>(e: &ScalarExpr, env: &Env<T>) -> Result<Val<T>, EvalError> {
    Ok(match e.node() {
        Node::Num(r) => Val::Exact(r.clone()),
        Node::Sym(s) => Val::Float(
            env.get(s)
                .ok_or_else(|| EvalError::Unbound(s.to_string()))?,
        ),
        Node::Pi => Val::Float(T::PI()),
        Node::Add(items) => {
            let mut exact = BigRational::zero();
            let mut float: Option<T> = None;
            for c in items {
                match eval_node(c, env)? {
                    Val::Exact(r) => exact += r,
                    Val::Float(x) => float = Some(float.map_or(x, |f| f + x)),
                }
            }
            match float {
                None => Val::Exact(exact),
                Some(f) => Val::Float(f + rat_to_real::<T>(&exact)),
            }
        }
        Node::Mul(items) => {
            let mut exact = BigRational::from_integer(1.into());
            let mut float: Option<T> = None;
            for c in items {
                match eval_node(c, env)? {
                    Val::Exact(r) => exact *= r,
                    Val::Float(x) => float = Some(float.map_or(x, |f| f * x)),
                }
            }
            match float {
                None => Val::Exact(exact),
                Some(f) => Val::Float(f * rat_to_real::<T>(&exact)),
            }
        }
        Node::Pow(b, r) => {
            let base = eval_node(b, env)?;
            pow_val(base, r)?
        }
        Node::Func(f, a) => {
            let x = eval_node(a, env)?.float();
            Val::Float(match f {
                Function::Sin => x.sin(),
                Function::Cos => x.cos(),
                Function::Tan => {
                    if x.cos() == T::zero() {
                        return Err(EvalError::Domain(format!("tan at a pole in `{e}`")));
                    }
                    x.tan()
                }
                Function::Exp => x.exp(),
                Function::Log => {
                    if x <= T::zero() {
                        return Err(EvalError::Domain(format!(
                            "log of non-positive value in `{e}`"
                        )));
                    }
                    x.ln()
                }
                Function::Sqrt => {
                    if x < T::zero() {
                        return Err(EvalError::Domain(format!(
                            "sqrt of negative value in `{e}`"
                        )));
                    }
                    x.sqrt()
                }
            })
        }
    })
}

fn pow_val<T: Real>(base: Val<T>, r: &BigRational) -> Result<Val<T>, EvalError> {
    if r.is_integer() {
        let k = r
            .to_integer()
            .to_i32()
            .ok_or_else(|| EvalError::Domain("exponent too large".into()))?;
        return match base {
            Val::Exact(b) => {
                if b.is_zero() && k < 0 {
                    return Err(EvalError::Domain("division by zero".into()));
                }
                if k.unsigned_abs() <= 64 {
                    let v = num_traits::pow(b.clone(), k.unsigned_abs() as usize);
                    Ok(Val::Exact(if k < 0 { v.recip() } else { v }))
                } else {
                    Ok(Val::Float(rat_to_real::<T>(&b).powi(k)))
                }
            }
            Val::Float(x) => {
                if x == T::zero() && k < 0 {
                    return Err(EvalError::Domain("division by zero".into()));
                }
                Ok(Val::Float(x.powi(k)))
            }
        };
    }
    let x = base.float();
    let q_odd = r.denom().is_odd();
    let p_odd = r.numer().is_odd();
    let rf = rat_to_real::<T>(r);
    if x == T::zero() {
        if r.is_negative() {
            return Err(EvalError::Domain("division by zero".into()));
        }
        return Ok(Val::Float(T::zero()));
    }
    if x > T::zero() {
        return Ok(Val::Float(x.powf(rf)));
    }
    if !q_odd {
        return Err(EvalError::Domain("even root of a negative value".into()));
    }
    let mag = (-x).powf(rf);
    Ok(Val::Float(if p_odd { -mag } else { mag }))
}

#[cfg(test)]
mod tests {
    use super::super::{parse, Symbols};
    use super::*;

    fn p(s: &str) -> ScalarExpr {
        parse(s, &Symbols::any()).unwrap()
    }

    #[test]
    fn basic_values() {
        assert_eq!(
            p("x1^2 + 1").evaluate(&Env::new().with("x1", 2.0)).unwrap(),
            5.0
        );
        assert_eq!(
            p("sin(theta)")
                .evaluate(&Env::new().with("theta", 0.0))
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn domain_errors_do_not_panic() {
        let env = Env::new().with("x1", 0.0);
        assert!(matches!(
            p("1/x1").evaluate(&env),
            Err(EvalError::Domain(_))
        ));
        assert!(matches!(
            p("log(x1)").evaluate(&env),
            Err(EvalError::Domain(_))
        ));
        assert!(matches!(p("y").evaluate(&env), Err(EvalError::Unbound(s)) if s == "y"));
    }

    #[test]
    fn exact_subtrees_fold_before_conversion() {
        // 1/3 + 1/3 + 1/3 is exactly 1, with no rounding residue.
        assert_eq!(p("1/3 + 1/3 + 1/3 - 1").evaluate(&Env::new()).unwrap(), 0.0);
    }

    #[test]
    fn odd_roots_of_negatives() {
        let v = p("x^(1/3)").evaluate(&Env::new().with("x", -8.0)).unwrap();
        assert!((v + 2.0).abs() < 1e-12);
        assert!(p("x^(1/2)").evaluate(&Env::new().with("x", -1.0)).is_err());
    }
}

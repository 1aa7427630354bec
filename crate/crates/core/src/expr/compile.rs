//! Expressions lowered to a flat evaluator over positional variables.
//!
//! Used on hot numerical paths (integrators, grids). Constant subtrees are
//! folded exactly at compile time, then converted once to `T`.

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::eval::rat_to_real;
use super::{BigRational, EvalError, Function, Node, ScalarExpr};
use crate::Real;

#[derive(Clone, Debug)]
enum Op<T> {
    Const(T),
    Var(usize),
    Add(Vec<Op<T>>),
    Mul(Vec<Op<T>>),
    PowI(Box<Op<T>>, i32),
    PowR {
        base: Box<Op<T>>,
        exp: T,
        odd_root: bool,
        odd_numer: bool,
    },
    Func(Function, Box<Op<T>>),
}

/// An expression ready for repeated evaluation at points given positionally.
#[derive(Clone, Debug)]
pub struct Compiled<T> {
    root: Op<T>,
    vars: usize,
}

impl<T: Real> Compiled<T> {
    /// `vars` names the positional slots; `consts` binds other symbols to
    /// fixed values (e.g. parameters).
    pub fn new(e: &ScalarExpr, vars: &[&str], consts: &[(&str, T)]) -> Result<Self, EvalError> {
        let root = lower(e, vars, consts)?;
        Ok(Compiled {
            root,
            vars: vars.len(),
        })
    }

    pub fn constant(value: T) -> Self {
        Compiled {
            root: Op::Const(value),
            vars: 0,
        }
    }

    pub fn eval(&self, x: &[T]) -> Result<T, EvalError> {
        debug_assert!(x.len() >= self.vars);
        let v = run(&self.root, x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::Domain("non-finite value".into()))
        }
    }

    pub fn is_zero_constant(&self) -> bool {
        matches!(self.root, Op::Const(c) if c == T::zero())
    }
}

fn exact_value(e: &ScalarExpr) -> Option<BigRational> {
    if !e.free_symbols().is_empty() {
        return None;
    }
    match e.node() {
        Node::Num(r) => Some(r.clone()),
        Node::Add(v) => v.iter().map(exact_value).sum(),
        Node::Mul(v) => v.iter().map(exact_value).product(),
        Node::Pow(b, r) if r.is_integer() => {
            let b = exact_value(b)?;
            let k = r.to_integer().to_i32()?;
            if k.unsigned_abs() > 64 || (k < 0 && num_traits::Zero::is_zero(&b)) {
                return None;
            }
            let v = num_traits::pow(b, k.unsigned_abs() as usize);
            Some(if k < 0 { v.recip() } else { v })
        }
        _ => None,
    }
}

fn lower<T: Real>(e: &ScalarExpr, vars: &[&str], consts: &[(&str, T)]) -> Result<Op<T>, EvalError> {
    if let Some(r) = exact_value(e) {
        return Ok(Op::Const(rat_to_real(&r)));
    }
    Ok(match e.node() {
        Node::Num(r) => Op::Const(rat_to_real(r)),
        Node::Pi => Op::Const(T::PI()),
        Node::Sym(s) => {
            if let Some(i) = vars.iter().position(|v| *v == &**s) {
                Op::Var(i)
            } else if let Some((_, c)) = consts.iter().find(|(k, _)| *k == &**s) {
                Op::Const(*c)
            } else {
                return Err(EvalError::Unbound(s.to_string()));
            }
        }
        Node::Add(v) => Op::Add(
            v.iter()
                .map(|c| lower(c, vars, consts))
                .collect::<Result<_, _>>()?,
        ),
        Node::Mul(v) => Op::Mul(
            v.iter()
                .map(|c| lower(c, vars, consts))
                .collect::<Result<_, _>>()?,
        ),
        Node::Pow(b, r) => {
            let base = Box::new(lower(b, vars, consts)?);
            match r.to_integer().to_i32() {
                Some(k) if r.is_integer() => Op::PowI(base, k),
                _ => Op::PowR {
                    base,
                    exp: rat_to_real(r),
                    odd_root: r.denom().is_odd(),
                    odd_numer: r.numer().is_odd(),
                },
            }
        }
        Node::Func(f, a) => Op::Func(*f, Box::new(lower(a, vars, consts)?)),
    })
}

fn run<T: Real>(op: &Op<T>, x: &[T]) -> Result<T, EvalError> {
    Ok(match op {
        Op::Const(c) => *c,
        Op::Var(i) => x[*i],
        Op::Add(v) => {
            let mut s = T::zero();
            for c in v {
                s = s + run(c, x)?;
            }
            s
        }
        Op::Mul(v) => {
            let mut p = T::one();
            for c in v {
                p = p * run(c, x)?;
            }
            p
        }
        Op::PowI(b, k) => {
            let v = run(b, x)?;
            if v == T::zero() && *k < 0 {
                return Err(EvalError::Domain("division by zero".into()));
            }
            v.powi(*k)
        }
        Op::PowR {
            base,
            exp,
            odd_root,
            odd_numer,
        } => {
            let v = run(base, x)?;
            if v == T::zero() {
                if exp.is_sign_negative() {
                    return Err(EvalError::Domain("division by zero".into()));
                }
                T::zero()
            } else if v > T::zero() {
                v.powf(*exp)
            } else if *odd_root {
                let m = (-v).powf(*exp);
                if *odd_numer {
                    -m
                } else {
                    m
                }
            } else {
                return Err(EvalError::Domain("even root of a negative value".into()));
            }
        }
        Op::Func(f, a) => {
            let v = run(a, x)?;
            match f {
                Function::Sin => v.sin(),
                Function::Cos => v.cos(),
                Function::Tan => v.tan(),
                Function::Exp => v.exp(),
                Function::Log => {
                    if v <= T::zero() {
                        return Err(EvalError::Domain("log of non-positive value".into()));
                    }
                    v.ln()
                }
                Function::Sqrt => {
                    if v < T::zero() {
                        return Err(EvalError::Domain("sqrt of negative value".into()));
                    }
                    v.sqrt()
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::super::{parse, Env, Symbols};
    use super::*;

    #[test]
    fn agrees_with_tree_evaluation() {
        let e = parse(
            "r*sin(theta)^2 + x^(1/3) - 1/(2*x) + exp(-theta)",
            &Symbols::any(),
        )
        .unwrap();
        let c = Compiled::<f64>::new(&e, &["theta", "x"], &[("r", 2.0)]).unwrap();
        for (t, x) in [(0.3, 1.7), (1.1, -0.4), (2.0, 5.0)] {
            let env = Env::new().with("theta", t).with("x", x).with("r", 2.0);
            let a = e.evaluate(&env).unwrap();
            let b = c.eval(&[t, x]).unwrap();
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn unbound_and_domain_errors() {
        let e = parse("y + 1", &Symbols::any()).unwrap();
        assert!(Compiled::<f64>::new(&e, &["x"], &[]).is_err());
        let e = parse("log(x)", &Symbols::any()).unwrap();
        let c = Compiled::<f32>::new(&e, &["x"], &[]).unwrap();
        assert!(c.eval(&[-1.0]).is_err());
    }
}

//! Symbolic scalar expressions over chart coordinates and named parameters.
//!
//! [`ScalarExpr`] is an immutable expression tree. Arithmetic operators build
//! trees without rewriting; [`ScalarExpr::simplify`] maps a tree to its
//! canonical form (see [`canon`] for the rewrite list) and back.

mod canon;
mod compile;
mod eval;
mod parse;
mod print;
mod zero;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub(crate) use canon::Poly;
use canon::{Atom, AtomFn, Rat};

pub use compile::Compiled;
pub use eval::{Env, EvalError};
pub use num_rational::BigRational;
pub use parse::{parse, ParseError, Symbols};
pub use zero::{is_zero, Sampler, ZeroTest, DEFAULT_SEED};

/// Unary functions accepted by the grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Function {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
}

impl Function {
    pub fn name(self) -> &'static str {
        match self {
            Function::Sin => "sin",
            Function::Cos => "cos",
            Function::Tan => "tan",
            Function::Exp => "exp",
            Function::Log => "log",
            Function::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Function> {
        Some(match name {
            "sin" => Function::Sin,
            "cos" => Function::Cos,
            "tan" => Function::Tan,
            "exp" => Function::Exp,
            "log" => Function::Log,
            "sqrt" => Function::Sqrt,
            _ => return None,
        })
    }
}

/// One node of an expression tree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Num(BigRational),
    Sym(Arc<str>),
    Pi,
    Add(Vec<ScalarExpr>),
    Mul(Vec<ScalarExpr>),
    Pow(ScalarExpr, BigRational),
    Func(Function, ScalarExpr),
}

/// Immutable, cheaply clonable symbolic expression.
#[derive(Clone)]
pub struct ScalarExpr {
    node: Arc<Node>,
    canon: Arc<OnceLock<Arc<Poly>>>,
}

impl ScalarExpr {
    pub fn from_node(node: Node) -> Self {
        ScalarExpr {
            node: Arc::new(node),
            canon: Arc::new(OnceLock::new()),
        }
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(n: i64) -> Self {
        Self::from_node(Node::Num(BigRational::from_integer(BigInt::from(n))))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::from_node(Node::Num(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    pub fn num(r: BigRational) -> Self {
        Self::from_node(Node::Num(r))
    }

    pub fn symbol(name: &str) -> Self {
        Self::from_node(Node::Sym(Arc::from(name)))
    }

    pub fn pi() -> Self {
        Self::from_node(Node::Pi)
    }

    pub fn func(f: Function, arg: ScalarExpr) -> Self {
        Self::from_node(Node::Func(f, arg))
    }

    pub fn sin(&self) -> Self {
        Self::func(Function::Sin, self.clone())
    }

    pub fn cos(&self) -> Self {
        Self::func(Function::Cos, self.clone())
    }

    pub fn exp(&self) -> Self {
        Self::func(Function::Exp, self.clone())
    }

    pub fn sqrt(&self) -> Self {
        Self::func(Function::Sqrt, self.clone())
    }

    pub fn powi(&self, k: i64) -> Self {
        self.pow(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn pow(&self, r: BigRational) -> Self {
        Self::from_node(Node::Pow(self.clone(), r))
    }

    pub(crate) fn from_poly(p: Poly) -> Self {
        let p = Arc::new(p);
        let e = poly_to_tree(&p);
        let _ = e.canon.set(p);
        e
    }

    pub(crate) fn poly(&self) -> Arc<Poly> {
        self.canon
            .get_or_init(|| Arc::new(tree_to_poly(self)))
            .clone()
    }

    /// Canonical form of this expression.
    pub fn simplify(&self) -> ScalarExpr {
        ScalarExpr::from_poly((*self.poly()).clone())
    }

    /// True when the expression simplifies to the literal `0`.
    pub fn is_structurally_zero(&self) -> bool {
        match &*self.node {
            Node::Num(r) => r.is_zero(),
            _ => self.poly().is_zero(),
        }
    }

    /// Exact rational value, when the expression simplifies to a constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        let p = self.poly();
        if p.is_zero() {
            return Some(BigRational::zero());
        }
        p.as_constant().cloned()
    }

    /// Partial derivative with respect to `var`, simplified.
    pub fn diff(&self, var: &str) -> ScalarExpr {
        ScalarExpr::from_poly(self.poly().diff(var))
    }

    /// Replace symbols by expressions; the result is simplified.
    pub fn substitute(&self, map: &BTreeMap<String, ScalarExpr>) -> ScalarExpr {
        let m: BTreeMap<Arc<str>, Poly> = map
            .iter()
            .map(|(k, v)| (Arc::from(k.as_str()), (*v.poly()).clone()))
            .collect();
        ScalarExpr::from_poly(self.poly().substitute(&m))
    }

    /// Free symbols (coordinates and parameters) of the tree.
    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_tree_symbols(self, &mut out);
        out
    }

    /// Number of monomials in the canonical form, counted recursively.
    pub fn complexity(&self) -> usize {
        self.poly().size()
    }

    /// Evaluate at a numeric environment.
    pub fn evaluate(&self, env: &Env<f64>) -> Result<f64, EvalError> {
        eval::evaluate(self, env)
    }

    /// Evaluate in a generic floating-point type.
    pub fn eval<T: crate::Real>(&self, env: &Env<T>) -> Result<T, EvalError> {
        eval::evaluate(self, env)
    }

    /// Simplified sum.
    pub fn add_s(&self, other: &ScalarExpr) -> ScalarExpr {
        ScalarExpr::from_poly(self.poly().add(&other.poly()))
    }

    /// Simplified difference.
    pub fn sub_s(&self, other: &ScalarExpr) -> ScalarExpr {
        ScalarExpr::from_poly(self.poly().sub(&other.poly()))
    }

    /// Simplified product.
    pub fn mul_s(&self, other: &ScalarExpr) -> ScalarExpr {
        if self.is_literal_zero() || other.is_literal_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr::from_poly(self.poly().mul(&other.poly()))
    }

    /// Simplified negation.
    pub fn neg_s(&self) -> ScalarExpr {
        ScalarExpr::from_poly(self.poly().neg())
    }

    /// Simplified reciprocal.
    pub fn recip_s(&self) -> ScalarExpr {
        ScalarExpr::from_poly(self.poly().recip())
    }

    /// Simplified rational power.
    pub fn pow_s(&self, r: &BigRational) -> ScalarExpr {
        ScalarExpr::from_poly(self.poly().pow(r))
    }

    /// Simplified product with an integer.
    pub fn scale_i(&self, k: i64) -> ScalarExpr {
        ScalarExpr::from_poly(
            self.poly()
                .scale(&BigRational::from_integer(BigInt::from(k))),
        )
    }

    fn is_literal_zero(&self) -> bool {
        matches!(&*self.node, Node::Num(r) if r.is_zero())
    }
}

/// `d e / d coord`, rejecting coordinates the chart does not declare.
pub fn differentiate(
    e: &ScalarExpr,
    coord: &str,
    chart: &crate::Chart,
) -> Result<ScalarExpr, crate::Error> {
    if chart.index_of(coord).is_none() {
        return Err(crate::Error::UnknownCoordinate(coord.to_string()));
    }
    Ok(e.diff(coord))
}

/// Simplify free function, mirroring the method.
pub fn simplify(e: &ScalarExpr) -> ScalarExpr {
    e.simplify()
}

fn collect_tree_symbols(e: &ScalarExpr, out: &mut BTreeSet<String>) {
    match e.node() {
        Node::Sym(s) => {
            out.insert(s.to_string());
        }
        Node::Num(_) | Node::Pi => {}
        Node::Add(v) | Node::Mul(v) => v.iter().for_each(|c| collect_tree_symbols(c, out)),
        Node::Pow(b, _) => collect_tree_symbols(b, out),
        Node::Func(_, a) => collect_tree_symbols(a, out),
    }
}

fn tree_to_poly(e: &ScalarExpr) -> Poly {
    match e.node() {
        Node::Num(r) => Poly::constant(r.clone()),
        Node::Sym(s) => Poly::symbol(s),
        Node::Pi => Poly::pi(),
        Node::Add(v) => {
            let mut acc = Poly::zero();
            for c in v {
                acc = acc.add(&c.poly());
            }
            acc
        }
        Node::Mul(v) => {
            let mut acc = Poly::one();
            for c in v {
                acc = acc.mul(&c.poly());
                if acc.is_zero() {
                    break;
                }
            }
            acc
        }
        Node::Pow(b, r) => b.poly().pow(r),
        Node::Func(f, a) => {
            let a = a.poly();
            match f {
                Function::Sin => Poly::sin(&a),
                Function::Cos => Poly::cos(&a),
                Function::Tan => Poly::sin(&a).mul(&Poly::cos(&a).recip()),
                Function::Exp => Poly::exp(&a),
                Function::Log => Poly::log(&a),
                Function::Sqrt => a.pow(&Rat::new(BigInt::one(), BigInt::from(2))),
            }
        }
    }
}

fn atom_to_tree(a: &Atom) -> ScalarExpr {
    match a {
        Atom::Sym(s) => ScalarExpr::from_node(Node::Sym(s.clone())),
        Atom::Pi => ScalarExpr::pi(),
        Atom::Func(f, p) => {
            let func = match f {
                AtomFn::Sin => Function::Sin,
                AtomFn::Cos => Function::Cos,
                AtomFn::Exp => Function::Exp,
                AtomFn::Log => Function::Log,
            };
            ScalarExpr::func(func, ScalarExpr::from_poly((**p).clone()))
        }
        Atom::Base(p) => ScalarExpr::from_poly((**p).clone()),
    }
}

fn poly_to_tree(p: &Poly) -> ScalarExpr {
    let mut terms: Vec<ScalarExpr> = Vec::new();
    for (m, c) in p.terms() {
        let mut factors: Vec<ScalarExpr> = Vec::new();
        if !c.is_one() || m.factors().is_empty() {
            factors.push(ScalarExpr::num(c.clone()));
        }
        for (a, e) in m.factors() {
            let base = atom_to_tree(a);
            if e.is_one() {
                factors.push(base);
            } else {
                factors.push(ScalarExpr::from_node(Node::Pow(base, e.clone())));
            }
        }
        terms.push(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            ScalarExpr::from_node(Node::Mul(factors))
        });
    }
    match terms.len() {
        0 => ScalarExpr::zero(),
        1 => terms.pop().unwrap(),
        _ => ScalarExpr::from_node(Node::Add(terms)),
    }
}

impl PartialEq for ScalarExpr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.node, &other.node) || self.node == other.node
    }
}

impl Eq for ScalarExpr {}

impl PartialOrd for ScalarExpr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ScalarExpr {
    fn cmp(&self, other: &Self) -> Ordering {
        self.node.cmp(&other.node)
    }
}

impl Hash for ScalarExpr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.node.hash(state)
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarExpr({self})")
    }
}

impl From<i64> for ScalarExpr {
    fn from(n: i64) -> Self {
        ScalarExpr::int(n)
    }
}

impl Add for ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: ScalarExpr) -> ScalarExpr {
        ScalarExpr::from_node(Node::Add(vec![self, rhs]))
    }
}

impl Sub for ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: ScalarExpr) -> ScalarExpr {
        ScalarExpr::from_node(Node::Add(vec![self, -rhs]))
    }
}

impl Mul for ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: ScalarExpr) -> ScalarExpr {
        ScalarExpr::from_node(Node::Mul(vec![self, rhs]))
    }
}

impl Div for ScalarExpr {
    type Output = ScalarExpr;
    fn div(self, rhs: ScalarExpr) -> ScalarExpr {
        let inv = ScalarExpr::from_node(Node::Pow(rhs, -BigRational::one()));
        ScalarExpr::from_node(Node::Mul(vec![self, inv]))
    }
}

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr::from_node(Node::Mul(vec![ScalarExpr::int(-1), self]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ScalarExpr {
        parse(s, &Symbols::any()).unwrap()
    }

    #[test]
    fn simplify_examples() {
        assert_eq!(p("x + 0").simplify(), p("x"));
        assert_eq!(
            p("sin(theta)^2 + cos(theta)^2").simplify(),
            ScalarExpr::one()
        );
        assert!(p("x1*x2 - x2*x1").simplify().is_structurally_zero());
    }

    #[test]
    fn simplify_is_idempotent_on_mixed_input() {
        for s in [
            "sqrt(2)*x^(3/2) + 1/(x+1)",
            "exp(2*t - x)*cos(y)^3",
            "tan(u)^2 + (a+b)^(-2)*3",
            "log(exp(3*x)) - (x^2)^(1/2)",
        ] {
            let once = p(s).simplify();
            assert_eq!(once.simplify(), once, "{s}");
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p("x1^2").diff("x1"), p("2*x1").simplify());
        assert!(p("sin(theta)").diff("phi").is_structurally_zero());
        assert_eq!(
            p("r*sin(theta)").diff("theta"),
            p("r*cos(theta)").simplify()
        );
    }

    #[test]
    fn structural_equality_implies_equal_values() {
        let a = p("(x+1)^2").simplify();
        let b = p("x^2 + 2*x + 1").simplify();
        assert_eq!(a, b);
    }
}

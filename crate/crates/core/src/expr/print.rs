//! Infix printing in the parser's own grammar, with minimal parentheses.

use std::fmt;

use num_traits::{One, Signed};

use super::{BigRational, Node, ScalarExpr};

// Binding strength of the printed text, loosest first.
const ADD: u8 = 1;
const NEG: u8 = 2;
const MUL: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

fn rational_text(r: &BigRational) -> (String, u8) {
    let prec = if r.is_negative() {
        NEG
    } else if r.is_integer() {
        ATOM
    } else {
        MUL
    };
    let s = if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    };
    (s, prec)
}

fn wrap(text: (String, u8), min: u8) -> String {
    if text.1 < min {
        format!("({})", text.0)
    } else {
        text.0
    }
}

/// Splits a leading negative coefficient off a term, for printing `a - b`.
fn negated(e: &ScalarExpr) -> Option<ScalarExpr> {
    match e.node() {
        Node::Num(r) if r.is_negative() => Some(ScalarExpr::num(-r.clone())),
        Node::Mul(v) => match v.first().map(|f| f.node()) {
            Some(Node::Num(r)) if r.is_negative() => {
                let c = -r.clone();
                let mut rest: Vec<ScalarExpr> = v[1..].to_vec();
                if !c.is_one() {
                    rest.insert(0, ScalarExpr::num(c));
                }
                Some(match rest.len() {
                    0 => ScalarExpr::one(),
                    1 => rest.pop().unwrap(),
                    _ => ScalarExpr::from_node(Node::Mul(rest)),
                })
            }
            _ => None,
        },
        _ => None,
    }
}

fn render(e: &ScalarExpr) -> (String, u8) {
    match e.node() {
        Node::Num(r) => rational_text(r),
        Node::Sym(s) => (s.to_string(), ATOM),
        Node::Pi => ("pi".into(), ATOM),
        Node::Func(f, a) => (format!("{}({})", f.name(), render(a).0), ATOM),
        Node::Pow(b, r) => {
            let base = wrap(render(b), ATOM);
            let exp = if r.is_integer() && !r.is_negative() {
                r.numer().to_string()
            } else {
                format!("({})", rational_text(r).0)
            };
            (format!("{base}^{exp}"), POW)
        }
        Node::Add(terms) => {
            let mut s = String::new();
            for (i, t) in terms.iter().enumerate() {
                if i == 0 {
                    s.push_str(&wrap(render(t), NEG));
                } else if let Some(pos) = negated(t) {
                    s.push_str(" - ");
                    s.push_str(&wrap(render(&pos), MUL));
                } else {
                    s.push_str(" + ");
                    s.push_str(&wrap(render(t), MUL));
                }
            }
            (s, ADD)
        }
        Node::Mul(factors) => render_product(factors),
    }
}

fn render_product(factors: &[ScalarExpr]) -> (String, u8) {
    let mut num: Vec<&ScalarExpr> = Vec::new();
    let mut den: Vec<ScalarExpr> = Vec::new();
    let mut sign = false;
    for (i, f) in factors.iter().enumerate() {
        match f.node() {
            Node::Num(r) if i == 0 && (-r.clone()).is_one() => sign = true,
            Node::Pow(b, r) if r.is_negative() => {
                let k = -r.clone();
                den.push(if k.is_one() {
                    b.clone()
                } else {
                    ScalarExpr::from_node(Node::Pow(b.clone(), k))
                });
            }
            _ => num.push(f),
        }
    }
    let mut s = String::new();
    if sign {
        s.push('-');
    }
    if num.is_empty() {
        s.push('1');
    }
    for (i, f) in num.iter().enumerate() {
        if i > 0 {
            s.push('*');
        }
        let min = if i == 0 && !sign { NEG } else { MUL };
        s.push_str(&wrap(render(f), min));
    }
    for d in &den {
        s.push('/');
        s.push_str(&wrap(render(d), POW));
    }
    let single = num.len() == 1 && den.is_empty() && !sign;
    if single {
        return render(num[0]);
    }
    (s, if sign { NEG } else { MUL })
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self).0)
    }
}

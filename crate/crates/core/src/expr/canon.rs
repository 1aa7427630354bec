//! Canonical form used by the simplifier.
//!
//! An expression is normalized into a sum of monomials with exact rational
//! coefficients. A monomial is a product of atoms raised to rational powers.
//! Atoms are symbols, `pi`, the four transcendental functions `sin`, `cos`,
//! `exp`, `log` applied to a canonical argument, and opaque bases (sums, or
//! monomials whose fractional power cannot be distributed safely).
//!
//! The rewrite list, applied in this order whenever a canonical value is
//! built:
//!
//! 1. Constant folding of rational coefficients; terms with a zero
//!    coefficient are dropped; like monomials are merged.
//! 2. Exponents of equal atoms are added; an exponent of zero removes the atom.
//! 3. An opaque base whose exponent becomes a positive integer is expanded.
//! 4. `tan(u) -> sin(u) cos(u)^-1`, `sqrt(u) -> u^(1/2)`.
//! 5. `sin(-u) -> -sin(u)`, `cos(-u) -> cos(u)`, `sin(0) -> 0`, `cos(0) -> 1`.
//! 6. `exp(a*m1 + b*m2 + ...) -> exp(m1)^a exp(m2)^b ...`, `exp(0) -> 1`,
//!    `exp(c*log(u)) -> u^c`, `log(exp(m)^c) -> c*m`, `log(1) -> 0`.
//! 7. Powers: integer powers of sums are expanded (up to degree 32);
//!    a rational power of a monomial distributes over its factors when every
//!    factor has an odd exponent numerator or is positive (`exp`, `pi`,
//!    positive constants); perfect rational roots are taken exactly.
//! 8. A sum raised to a power is first divided by its leading coefficient.
//! 9. `cos(u)^k` with `k >= 2` is rewritten as `(1 - sin(u)^2) cos(u)^(k-2)`,
//!    and `sin(u)^j cos(u)^k` with `j >= 2`, `k < 0` as
//!    `sin(u)^(j-2) (cos(u)^k - cos(u)^(k+2))`, until neither applies. The two
//!    rules act on disjoint exponent ranges, so the loop terminates. This is
//!    the only trigonometric identity used; it makes `sin^2 + cos^2` collapse
//!    to `1` and `tan^2 + 1` to `cos^-2`.
//! 10. Before a sum is raised to a negative or fractional power, it is checked
//!     against the reduced form of a single monomial with `cos(u)^(2k)`
//!     factors; on a match the monomial is used instead of an opaque base.
//!
//! Every step preserves the pointwise value wherever the input is defined.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) type Rat = BigRational;

/// Highest integer power of a sum that is expanded in place.
const MAX_EXPANSION: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum AtomFn {
    Sin,
    Cos,
    Exp,
    Log,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Atom {
    Sym(Arc<str>),
    Pi,
    Func(AtomFn, Arc<Poly>),
    Base(Arc<Poly>),
}

impl Atom {
    fn is_positive(&self) -> bool {
        match self {
            Atom::Pi | Atom::Func(AtomFn::Exp, _) => true,
            Atom::Base(p) => p.as_constant().map(|c| c.is_positive()).unwrap_or(false),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub(crate) struct Monomial(Vec<(Atom, Rat)>);

impl Monomial {
    pub(crate) fn one() -> Self {
        Monomial(Vec::new())
    }

    pub(crate) fn factors(&self) -> &[(Atom, Rat)] {
        &self.0
    }

    fn single(atom: Atom, exp: Rat) -> Self {
        if exp.is_zero() {
            Monomial::one()
        } else {
            Monomial(vec![(atom, exp)])
        }
    }

    /// Merge two monomials, adding exponents of equal atoms.
    fn merge(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(Atom, Rat)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = &self.0[i];
            let (b, eb) = &other.0[j];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    out.push((a.clone(), ea.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b.clone(), eb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = ea + eb;
                    if !e.is_zero() {
                        out.push((a.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.0[i..].iter().cloned());
        out.extend(other.0[j..].iter().cloned());
        Monomial(out)
    }

    fn without(&self, idx: usize) -> Monomial {
        let mut v = self.0.clone();
        v.remove(idx);
        Monomial(v)
    }

    fn with_exponent(&self, idx: usize, exp: Rat) -> Monomial {
        let mut v = self.0.clone();
        if exp.is_zero() {
            v.remove(idx);
        } else {
            v[idx].1 = exp;
        }
        Monomial(v)
    }

    /// Turn a merged monomial into a polynomial, expanding opaque bases whose
    /// exponent became a non-negative integer.
    fn into_poly(self, coeff: Rat) -> Poly {
        let expand_at = self.0.iter().position(|(a, e)| {
            matches!(a, Atom::Base(_))
                && e.is_integer()
                && e.is_positive()
                && *e <= rat(MAX_EXPANSION as i64)
        });
        match expand_at {
            None => {
                let mut p = Poly::zero();
                if !coeff.is_zero() {
                    p.terms.insert(self, coeff);
                }
                p
            }
            Some(idx) => {
                let (atom, e) = self.0[idx].clone();
                let rest = self.without(idx).into_poly(coeff);
                let base = match atom {
                    Atom::Base(p) => (*p).clone(),
                    _ => unreachable!(),
                };
                let k = e.to_integer().to_u32().unwrap_or(1);
                rest.mul(&base.pow_uint(k))
            }
        }
    }

    /// First place where one of the trigonometric rewrites applies.
    fn trig_site(&self) -> Option<TrigSite> {
        let two = rat(2);
        for (i, (a, e)) in self.0.iter().enumerate() {
            let Atom::Func(AtomFn::Cos, arg) = a else {
                continue;
            };
            if *e >= two {
                return Some(TrigSite::CosHigh(i));
            }
            if e.is_negative() {
                let sin = self.0.iter().position(|(b, f)| {
                    matches!(b, Atom::Func(AtomFn::Sin, x) if x == arg) && *f >= two
                });
                if let Some(j) = sin {
                    return Some(TrigSite::SinOverCos { sin: j, cos: i });
                }
            }
        }
        None
    }
}

#[derive(Clone, Copy, Debug)]
enum TrigSite {
    /// `cos(u)^k`, `k >= 2`.
    CosHigh(usize),
    /// `sin(u)^j cos(u)^k`, `j >= 2`, `k < 0`.
    SinOverCos { sin: usize, cos: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub(crate) struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

impl Poly {
    pub(crate) fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub(crate) fn constant(c: Rat) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub(crate) fn from_atom(a: Atom) -> Self {
        Monomial::single(a, Rat::one()).into_poly(Rat::one())
    }

    pub(crate) fn symbol(name: &str) -> Self {
        Poly::from_atom(Atom::Sym(Arc::from(name)))
    }

    pub(crate) fn pi() -> Self {
        Poly::from_atom(Atom::Pi)
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn as_constant(&self) -> Option<&Rat> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.0.is_empty() {
                return Some(c);
            }
        }
        None
    }

    pub(crate) fn as_monomial(&self) -> Option<(&Monomial, &Rat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn absorb(&mut self, other: Poly) {
        for (m, c) in other.terms {
            self.add_term(m, c);
        }
    }

    pub(crate) fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub(crate) fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub(crate) fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub(crate) fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub(crate) fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        let mut needs_trig = false;
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.merge(mb);
                let part = m.into_poly(ca * cb);
                out.absorb(part);
            }
        }
        for m in out.terms.keys() {
            if m.trig_site().is_some() {
                needs_trig = true;
                break;
            }
        }
        if needs_trig {
            out.reduce_trig();
        }
        out
    }

    fn pow_uint(&self, k: u32) -> Poly {
        if k == 0 {
            return Poly::one();
        }
        if let Some((m, c)) = self.as_monomial() {
            let e = rat(k as i64);
            return monomial_pow_exact(m, c, &e);
        }
        if k > MAX_EXPANSION {
            return Poly::from_atom(Atom::Base(Arc::new(self.clone()))).pow(&rat(k as i64));
        }
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut n = k;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Rational power with real semantics.
    pub(crate) fn pow(&self, r: &Rat) -> Poly {
        if r.is_zero() {
            return Poly::one();
        }
        if r.is_one() {
            return self.clone();
        }
        if self.is_zero() {
            if r.is_positive() {
                return Poly::zero();
            }
            return Monomial::single(Atom::Base(Arc::new(Poly::zero())), r.clone())
                .into_poly(Rat::one());
        }
        if let Some(c) = self.as_constant() {
            return rational_pow(c, r);
        }
        if let Some((m, c)) = self.as_monomial() {
            if let Some(p) = monomial_pow(m, c, r) {
                return p;
            }
            return opaque_pow(self.clone(), r);
        }
        if r.is_integer() && r.is_positive() {
            let k = r.to_integer().to_u32().unwrap_or(MAX_EXPANSION + 1);
            return self.pow_uint(k);
        }
        if let Some((m, c)) = self.as_reduced_cos_power() {
            if let Some(p) = monomial_pow(&m, &c, r) {
                return p;
            }
        }
        // Sum raised to a negative or fractional power.
        let lead = self.terms.values().next().unwrap().clone();
        if lead.is_one() {
            return opaque_pow(self.clone(), r);
        }
        if lead.is_positive() || r.is_integer() {
            let normalized = self.scale(&lead.recip());
            return rational_pow(&lead, r).mul(&opaque_pow(normalized, r));
        }
        opaque_pow(self.clone(), r)
    }

    /// Recognize a sum that is the reduced form of a single monomial carrying
    /// `cos(u)^(2k)` factors, so that its powers stay monomial.
    fn as_reduced_cos_power(&self) -> Option<(Monomial, Rat)> {
        if self.terms.len() < 2 {
            return None;
        }
        let sin_exp = |m: &Monomial, arg: &Arc<Poly>| -> Rat {
            m.0.iter()
                .find(|(a, _)| matches!(a, Atom::Func(AtomFn::Sin, x) if x == arg))
                .map_or_else(Rat::zero, |(_, e)| e.clone())
        };
        let mut args: Vec<Arc<Poly>> = Vec::new();
        for m in self.terms.keys() {
            for (a, _) in &m.0 {
                if let Atom::Func(AtomFn::Sin, x) = a {
                    if !args.contains(x) {
                        args.push(x.clone());
                    }
                }
            }
        }
        if args.is_empty() {
            return None;
        }
        let total = |m: &Monomial| args.iter().fold(Rat::zero(), |acc, x| acc + sin_exp(m, x));
        let (m0, c0) = self
            .terms
            .iter()
            .min_by(|a, b| total(a.0).cmp(&total(b.0)))?;
        let mut candidate = m0.clone();
        for x in &args {
            let base = sin_exp(m0, x);
            let top = self.terms.keys().map(|m| sin_exp(m, x)).max()?;
            let k = top - base;
            if k.is_zero() {
                continue;
            }
            if !k.is_integer() || k.to_integer().is_odd() {
                return None;
            }
            candidate = candidate.merge(&Monomial::single(Atom::Func(AtomFn::Cos, x.clone()), k));
        }
        let rebuilt = Poly::one().mul(&candidate.clone().into_poly(c0.clone()));
        (rebuilt == *self).then(|| (candidate, c0.clone()))
    }

    pub(crate) fn recip(&self) -> Poly {
        self.pow(&rat(-1))
    }

    fn reduce_trig(&mut self) {
        loop {
            let hit = self
                .terms
                .iter()
                .find_map(|(m, c)| m.trig_site().map(|site| (m.clone(), c.clone(), site)));
            let Some((m, c, site)) = hit else { break };
            self.terms.remove(&m);
            match site {
                TrigSite::CosHigh(idx) => {
                    // cos^k = cos^(k-2) - sin^2 cos^(k-2)
                    let (atom, e) = m.0[idx].clone();
                    let Atom::Func(AtomFn::Cos, arg) = atom else {
                        unreachable!()
                    };
                    let reduced = m.with_exponent(idx, e - rat(2));
                    let sin2 = Monomial::single(Atom::Func(AtomFn::Sin, arg), rat(2));
                    let with_sin = reduced.merge(&sin2);
                    self.absorb(reduced.into_poly(c.clone()));
                    self.absorb(with_sin.into_poly(-c));
                }
                TrigSite::SinOverCos { sin, cos } => {
                    // sin^j cos^k = sin^(j-2) cos^k - sin^(j-2) cos^(k+2)
                    let less_sin = m.merge(&Monomial::single(m.0[sin].0.clone(), rat(-2)));
                    let more_cos = less_sin.merge(&Monomial::single(m.0[cos].0.clone(), rat(2)));
                    self.absorb(less_sin.into_poly(c.clone()));
                    self.absorb(more_cos.into_poly(-c));
                }
            }
        }
    }

    pub(crate) fn sin(arg: &Poly) -> Poly {
        if arg.is_zero() {
            return Poly::zero();
        }
        let (negated, a) = sign_normalize(arg);
        let p = Poly::from_atom(Atom::Func(AtomFn::Sin, Arc::new(a)));
        if negated {
            p.neg()
        } else {
            p
        }
    }

    pub(crate) fn cos(arg: &Poly) -> Poly {
        if arg.is_zero() {
            return Poly::one();
        }
        let (_, a) = sign_normalize(arg);
        Poly::from_atom(Atom::Func(AtomFn::Cos, Arc::new(a)))
    }

    pub(crate) fn exp(arg: &Poly) -> Poly {
        let mut out = Poly::one();
        for (m, c) in &arg.terms {
            let factor = if let [(Atom::Func(AtomFn::Log, inner), e)] = m.0.as_slice() {
                if e.is_one() {
                    inner.pow(c)
                } else {
                    exp_atom(m, c)
                }
            } else {
                exp_atom(m, c)
            };
            out = out.mul(&factor);
        }
        out
    }

    pub(crate) fn log(arg: &Poly) -> Poly {
        if let Some(c) = arg.as_constant() {
            if c.is_one() {
                return Poly::zero();
            }
        }
        if let Some((m, c)) = arg.as_monomial() {
            if c.is_one() {
                if let [(Atom::Func(AtomFn::Exp, inner), e)] = m.0.as_slice() {
                    return inner.scale(e);
                }
            }
        }
        Poly::from_atom(Atom::Func(AtomFn::Log, Arc::new(arg.clone())))
    }

    pub(crate) fn diff(&self, var: &str) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (idx, (atom, e)) in m.0.iter().enumerate() {
                let da = atom_diff(atom, var);
                if da.is_zero() {
                    continue;
                }
                let rest = m.with_exponent(idx, e - Rat::one()).into_poly(c * e);
                out.absorb(rest.mul(&da));
            }
        }
        out
    }

    pub(crate) fn substitute(&self, map: &BTreeMap<Arc<str>, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (atom, e) in &m.0 {
                let base = match atom {
                    Atom::Sym(s) => match map.get(s) {
                        Some(p) => p.clone(),
                        None => Poly::from_atom(atom.clone()),
                    },
                    Atom::Pi => Poly::pi(),
                    Atom::Func(f, arg) => {
                        let a = arg.substitute(map);
                        match f {
                            AtomFn::Sin => Poly::sin(&a),
                            AtomFn::Cos => Poly::cos(&a),
                            AtomFn::Exp => Poly::exp(&a),
                            AtomFn::Log => Poly::log(&a),
                        }
                    }
                    Atom::Base(p) => p.substitute(map),
                };
                term = term.mul(&base.pow(e));
            }
            out.absorb(term);
        }
        out
    }

    pub(crate) fn size(&self) -> usize {
        self.terms
            .keys()
            .map(|m| {
                1 + m
                    .0
                    .iter()
                    .map(|(a, _)| match a {
                        Atom::Func(_, p) | Atom::Base(p) => p.size(),
                        _ => 1,
                    })
                    .sum::<usize>()
            })
            .sum()
    }
}

fn exp_atom(m: &Monomial, c: &Rat) -> Poly {
    let inner = m.clone().into_poly(Rat::one());
    Monomial::single(Atom::Func(AtomFn::Exp, Arc::new(inner)), c.clone()).into_poly(Rat::one())
}

fn atom_diff(atom: &Atom, var: &str) -> Poly {
    match atom {
        Atom::Sym(s) => {
            if &**s == var {
                Poly::one()
            } else {
                Poly::zero()
            }
        }
        Atom::Pi => Poly::zero(),
        Atom::Func(f, arg) => {
            let da = arg.diff(var);
            if da.is_zero() {
                return Poly::zero();
            }
            let outer = match f {
                AtomFn::Sin => Poly::cos(arg),
                AtomFn::Cos => Poly::sin(arg).neg(),
                AtomFn::Exp => Poly::from_atom(atom.clone()),
                AtomFn::Log => arg.recip(),
            };
            outer.mul(&da)
        }
        Atom::Base(p) => p.diff(var),
    }
}

fn sign_normalize(p: &Poly) -> (bool, Poly) {
    match p.terms.values().next() {
        Some(c) if c.is_negative() => (true, p.neg()),
        _ => (false, p.clone()),
    }
}

fn opaque_pow(base: Poly, r: &Rat) -> Poly {
    Monomial::single(Atom::Base(Arc::new(base)), r.clone()).into_poly(Rat::one())
}

/// Exact `k`-th root of a non-negative integer, if it exists.
fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if k == 1 {
        return Some(n.clone());
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// `c^r` for a rational constant `c`.
fn rational_pow(c: &Rat, r: &Rat) -> Poly {
    if c.is_zero() {
        return Poly::zero().pow(r);
    }
    if c.is_one() {
        return Poly::one();
    }
    if r.is_integer() {
        let k = r.to_integer();
        let mag = k.abs().to_usize().unwrap_or(usize::MAX);
        if mag > 4096 {
            return opaque_pow(Poly::constant(c.clone()), r);
        }
        let v = num_traits::pow(c.clone(), mag);
        return Poly::constant(if k.is_negative() { v.recip() } else { v });
    }
    let p = r.numer().clone();
    let q = r.denom().to_u32().unwrap_or(u32::MAX);
    if c.is_negative() {
        if q.is_multiple_of(2) {
            return opaque_pow(Poly::constant(c.clone()), r);
        }
        let mag = rational_pow(&c.abs(), r);
        return if p.is_odd() { mag.neg() } else { mag };
    }
    // c > 0: split r = k + f with 0 <= f < 1.
    let k = r.floor();
    let f = r - &k;
    let whole = rational_pow(c, &k);
    let num = c.numer().clone();
    let den = c.denom().clone();
    let fq = f.denom().to_u32().unwrap_or(u32::MAX);
    let fp = f.numer().to_usize().unwrap_or(0);
    if let (Some(a), Some(b)) = (exact_root(&num, fq), exact_root(&den, fq)) {
        let root = Rat::new(num_traits::pow(a, fp), num_traits::pow(b, fp));
        return whole.scale(&root);
    }
    whole.mul(&opaque_pow(Poly::constant(c.clone()), &f))
}

/// Integer power of a monomial term.
fn monomial_pow_exact(m: &Monomial, c: &Rat, e: &Rat) -> Poly {
    let mut factors: Vec<(Atom, Rat)> = Vec::with_capacity(m.0.len());
    for (a, ea) in &m.0 {
        factors.push((a.clone(), ea * e));
    }
    let coeff = rational_pow(c, e);
    let mono = Monomial(factors);
    coeff.mul(&mono.into_poly(Rat::one()))
}

/// Rational power of a monomial, distributing over factors where safe.
fn monomial_pow(m: &Monomial, c: &Rat, r: &Rat) -> Option<Poly> {
    if r.is_integer() {
        return Some(monomial_pow_exact(m, c, r));
    }
    let safe =
        m.0.iter()
            .all(|(a, e)| a.is_positive() || e.numer().is_odd());
    if !safe {
        return None;
    }
    if c.is_negative() && r.denom().is_even() {
        return None;
    }
    Some(monomial_pow_exact(m, c, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::symbol("x")
    }

    #[test]
    fn like_terms_and_cancellation() {
        let p = x()
            .mul(&Poly::symbol("y"))
            .sub(&Poly::symbol("y").mul(&x()));
        assert!(p.is_zero());
    }

    #[test]
    fn reciprocal_cosine_powers_are_canonical() {
        let c = Poly::cos(&x());
        let s = Poly::sin(&x());
        let c2 = c.mul(&c);
        assert_eq!(c2.mul(&c2.recip()), Poly::one());
        assert_eq!(c2.recip(), c.pow(&rat(-2)));
        assert_eq!(c.mul(&c2).recip(), c.pow(&rat(-3)));
        let tan2 = s.mul(&s).mul(&c2.recip());
        assert_eq!(tan2.add(&Poly::one()), c.pow(&rat(-2)));
    }

    #[test]
    fn pythagorean_identity() {
        let s = Poly::sin(&x());
        let c = Poly::cos(&x());
        let p = s.mul(&s).add(&c.mul(&c));
        assert_eq!(p, Poly::one());
    }

    #[test]
    fn roots_are_exact_when_perfect() {
        assert_eq!(
            Poly::constant(rat(64)).pow(&Rat::new(1.into(), 2.into())),
            Poly::constant(rat(8))
        );
        let two_sqrt = Poly::constant(rat(2)).pow(&Rat::new(1.into(), 2.into()));
        assert_eq!(two_sqrt.mul(&two_sqrt), Poly::constant(rat(2)));
    }

    #[test]
    fn even_power_root_stays_opaque() {
        let x2 = x().mul(&x());
        let r = x2.pow(&Rat::new(1.into(), 2.into()));
        assert_ne!(r, x());
    }

    #[test]
    fn exp_of_sum_factors() {
        let t = Poly::symbol("t");
        let e = Poly::exp(&t.scale(&rat(2)));
        let e1 = Poly::exp(&t);
        assert_eq!(e, e1.mul(&e1));
        assert_eq!(Poly::exp(&t).mul(&Poly::exp(&t.neg())), Poly::one());
    }
}

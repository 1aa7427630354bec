//! Multivectors over an orthonormal frame and Grassmann's complement.

use std::collections::BTreeMap;
use std::fmt;

use super::{mask_indices, mask_of, wedge_sign, Mask};
use crate::cartan::Signature;
use crate::expr::ScalarExpr;
use crate::Error;

/// Linear combination of `e_{i1}∧…∧e_{im}` with increasing indices.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiVector {
    n: usize,
    grade: usize,
    terms: BTreeMap<Mask, ScalarExpr>,
}

impl MultiVector {
    pub fn zero(n: usize, grade: usize) -> Result<MultiVector, Error> {
        if grade > n {
            return Err(Error::GradeOutOfRange { grade, n });
        }
        Ok(MultiVector {
            n,
            grade,
            terms: BTreeMap::new(),
        })
    }

    /// Basis element `e_{i1}∧…∧e_{im}`; indices may be unordered.
    pub fn basis(n: usize, indices: &[usize]) -> Result<MultiVector, Error> {
        let mut out = MultiVector::zero(n, indices.len())?;
        out.add_term(indices, &ScalarExpr::one())?;
        Ok(out)
    }

    /// Add `c e_{indices}` in place.
    pub fn add_term(&mut self, indices: &[usize], c: &ScalarExpr) -> Result<(), Error> {
        if indices.len() != self.grade || indices.iter().any(|&i| i >= self.n) {
            return Err(Error::Invalid(format!(
                "index set {indices:?} for grade {} in dimension {}",
                self.grade, self.n
            )));
        }
        if let Some((mask, sign)) = mask_of(indices) {
            let c = c.scale_i(sign);
            let sum = match self.terms.remove(&mask) {
                Some(old) => old.add_s(&c),
                None => c,
            };
            if !sum.is_structurally_zero() {
                self.terms.insert(mask, sum);
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn terms(&self) -> &BTreeMap<Mask, ScalarExpr> {
        &self.terms
    }

    pub fn coeff(&self, indices: &[usize]) -> ScalarExpr {
        match mask_of(indices) {
            Some((mask, sign)) if indices.len() == self.grade => match self.terms.get(&mask) {
                Some(c) => c.scale_i(sign),
                None => ScalarExpr::zero(),
            },
            _ => ScalarExpr::zero(),
        }
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, f: &ScalarExpr) -> MultiVector {
        let mut out = MultiVector {
            n: self.n,
            grade: self.grade,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            let v = c.mul_s(f);
            if !v.is_structurally_zero() {
                out.terms.insert(*m, v);
            }
        }
        out
    }

    pub fn add(&self, other: &MultiVector) -> Result<MultiVector, Error> {
        if self.n != other.n || self.grade != other.grade {
            return Err(Error::Invalid(
                "adding multivectors of different shape".into(),
            ));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(&mask_indices(*m), c)?;
        }
        Ok(out)
    }
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let basis: Vec<String> = mask_indices(*m)
                .iter()
                .map(|i| format!("e{}", i + 1))
                .collect();
            write!(f, "({c})*{}", basis.join("^"))?;
        }
        Ok(())
    }
}

/// Grassmann complement relative to `e_1∧…∧e_n`.
///
/// `e_I` maps to `s · orientation · Π_{i∈I} ε_i · e_J`, where `J` is the
/// complement of `I` and `s` is the sign with `e_I ∧ e_J = s e_1∧…∧e_n`.
/// Applying it twice gives `(-1)^{m(n-m)} Π_i ε_i` times the identity.
pub fn grassmann_dual(
    v: &MultiVector,
    sig: &Signature,
    orientation: i8,
) -> Result<MultiVector, Error> {
    let n = v.n;
    if sig.len() != n {
        return Err(Error::Dimension {
            expected: format!("signature of length {}", sig.len()),
            found: n,
        });
    }
    if orientation != 1 && orientation != -1 {
        return Err(Error::Invalid(format!(
            "orientation must be ±1, got {orientation}"
        )));
    }
    let full: Mask = ((1u16 << n) - 1) as Mask;
    let mut out = MultiVector::zero(n, n - v.grade)?;
    for (m, c) in &v.terms {
        let comp = full & !m;
        let mut sign = wedge_sign(*m, comp) * orientation as i64;
        for i in mask_indices(*m) {
            sign *= sig.eps(i);
        }
        out.add_term(&mask_indices(comp), &c.scale_i(sign))?;
    }
    Ok(out)
}

/// Polar vector of a bivector in three dimensions:
/// `(e1 b23 + e2 b31 + e3 b12) / sqrt(g11 g22 g33)`.
pub fn bivector_to_polar(b: &MultiVector, g_diag: &[ScalarExpr; 3]) -> Result<MultiVector, Error> {
    if b.n != 3 {
        return Err(Error::Dimension {
            expected: "3".into(),
            found: b.n,
        });
    }
    if b.grade != 2 {
        return Err(Error::GradeOutOfRange {
            grade: b.grade,
            n: 3,
        });
    }
    let volume = g_diag[0].mul_s(&g_diag[1]).mul_s(&g_diag[2]);
    let prefactor = volume.pow_s(&crate::expr::BigRational::new((-1).into(), 2.into()));
    let mut out = MultiVector::zero(3, 1)?;
    for (axis, (j, k)) in [(1, 2), (2, 0), (0, 1)].into_iter().enumerate() {
        out.add_term(&[axis], &b.coeff(&[j, k]).mul_s(&prefactor))?;
    }
    Ok(out)
}

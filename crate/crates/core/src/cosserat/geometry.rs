//! Reading a three-dimensional Cartan connection as a stressed medium:
//! rotational curvature becomes a stress system and torsion a couple system.

use serde::Serialize;

use crate::cartan::vanishing::vanishes_all;
use crate::cartan::{CartanConnection, Vanishing};
use crate::einstein::{covariant_exterior_derivative, vector_couple_invariant, CouplePairing};
use crate::expr::DEFAULT_SEED;
use crate::exterior::{bivector_to_polar, grassmann_dual, MultiVector};
use crate::{Error, ScalarExpr};

/// Stress and couple carried by the three frame surface elements; element
/// `m` is the plane `ω^{m+1} ∧ ω^{m+2}` (indices mod 3) with normal `e_m`.
#[derive(Clone, Debug)]
pub struct MediumGeometry {
    /// Polar stress vector on each surface element.
    pub stress: Vec<MultiVector>,
    /// Couple bivector on each surface element.
    pub couple: Vec<MultiVector>,
    /// `p[m][i]`: component `i` of the stress vector on element `m`.
    pub p: [[ScalarExpr; 3]; 3],
    /// `q[m][i]`: component `i` of the polar vector of the couple on element `m`.
    pub q: [[ScalarExpr; 3]; 3],
    pub stress_vanishes: Vanishing,
    pub couple_vanishes: Vanishing,
    /// Covariant exterior derivative of the vector-and-couple invariant.
    pub equilibrium: Vanishing,
}

#[derive(Clone, Debug, Serialize)]
pub struct MediumGeometryReport {
    pub p: Vec<Vec<String>>,
    pub q: Vec<Vec<String>>,
    pub stress_vanishes: Vanishing,
    pub couple_vanishes: Vanishing,
    pub equilibrium: Vanishing,
}

impl MediumGeometry {
    pub fn report(&self) -> MediumGeometryReport {
        let strs = |t: &[[ScalarExpr; 3]; 3]| {
            t.iter()
                .map(|r| r.iter().map(|e| e.to_string()).collect())
                .collect()
        };
        MediumGeometryReport {
            p: strs(&self.p),
            q: strs(&self.q),
            stress_vanishes: self.stress_vanishes,
            couple_vanishes: self.couple_vanishes,
            equilibrium: self.equilibrium,
        }
    }
}

pub fn geometry_to_medium(c: &CartanConnection) -> Result<MediumGeometry, Error> {
    if c.dim() != 3 {
        return Err(Error::Dimension {
            expected: "3".into(),
            found: c.dim(),
        });
    }
    let frame = c.frame();
    let sig = frame.signature();
    let data = c.curvature_data();
    let unit: [ScalarExpr; 3] = std::array::from_fn(|_| ScalarExpr::one());
    let mut stress = Vec::new();
    let mut couple = Vec::new();
    let mut p: [[ScalarExpr; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| ScalarExpr::zero()));
    let mut q = p.clone();
    for m in 0..3 {
        let (a, b) = ((m + 1) % 3, (m + 2) % 3);
        // Bivector-valued curvature Σ_{k<l} [e_k e_l] Ω_{kl} on the element.
        let mut curv = MultiVector::zero(3, 2)?;
        for k in 0..3 {
            for l in k + 1..3 {
                let coeff = data.curvature_component(k, l, a, b).scale_i(sig.eps(k));
                curv.add_term(&[k, l], &coeff)?;
            }
        }
        let s = bivector_to_polar(&curv, &unit)?;
        // Vector-valued torsion Σ_i e_i Ω^i on the element, dualized to a bivector.
        let mut tors = MultiVector::zero(3, 1)?;
        for i in 0..3 {
            tors.add_term(&[i], &data.torsion_component(i, a, b).scale_i(sig.eps(i)))?;
        }
        let cb = grassmann_dual(&tors, sig, 1)?;
        let qv = bivector_to_polar(&cb, &unit)?;
        for i in 0..3 {
            p[m][i] = s.coeff(&[i]).simplify();
            q[m][i] = qv.coeff(&[i]).simplify();
        }
        stress.push(s);
        couple.push(cb);
    }
    let sampler = frame.sampler(DEFAULT_SEED);
    let stress_vanishes = vanishes_all(p.iter().flatten(), &sampler);
    let couple_vanishes = vanishes_all(q.iter().flatten(), &sampler);
    let inv = vector_couple_invariant(c, CouplePairing::Cyclic)?;
    let equilibrium = covariant_exterior_derivative(&inv, c)?.vanishes(frame);
    Ok(MediumGeometry {
        stress,
        couple,
        p,
        q,
        stress_vanishes,
        couple_vanishes,
        equilibrium,
    })
}

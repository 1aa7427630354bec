//! Invariant coframes on Lie groups from structure constants.
//!
//! Coordinates of the second kind, `g = exp(x1 X1) ⋯ exp(xn Xn)`. The left
//! Maurer–Cartan form is `g⁻¹dg = Σ_a Ad(exp(−xn Xn) ⋯ exp(−x_{a+1} X_{a+1})) X_a dx^a`
//! and satisfies `dθ^k = −½ c^k_{ij} θ^i∧θ^j`; the right form `dg g⁻¹` has the
//! opposite sign. `Ad(exp(s X)) = exp(s ad_X)` is evaluated in closed form
//! when `ad_X` is nilpotent or satisfies `M³ = ∓λ² M`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::expr::BigRational;
use crate::{Error, ScalarExpr};

/// `c^k_{ij}` with `[X_i, X_j] = Σ_k c^k_{ij} X_k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureConstants {
    n: usize,
    #[serde(serialize_with = "ser_rational_cube")]
    c: Vec<Vec<Vec<BigRational>>>,
}

fn ser_rational_cube<S: serde::Serializer>(
    c: &[Vec<Vec<BigRational>>],
    s: S,
) -> Result<S::Ok, S::Error> {
    let v: Vec<Vec<Vec<String>>> = c
        .iter()
        .map(|a| {
            a.iter()
                .map(|b| b.iter().map(|r| r.to_string()).collect())
                .collect()
        })
        .collect();
    serde::Serialize::serialize(&v, s)
}

/// Which invariant coframe to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl StructureConstants {
    /// From entries `(k, i, j, value)` with `i < j` (0-based); the `(j, i)`
    /// entries follow by antisymmetry. Fails when the Jacobi identity does.
    pub fn new(n: usize, entries: &[(usize, usize, usize, BigRational)]) -> Result<Self, Error> {
        if !(1..=4).contains(&n) {
            return Err(Error::Dimension {
                expected: "1 to 4".into(),
                found: n,
            });
        }
        let mut c = vec![vec![vec![BigRational::zero(); n]; n]; n];
        for (k, i, j, v) in entries {
            if *k >= n || *i >= n || *j >= n || i == j {
                return Err(Error::Invalid(format!(
                    "bad structure constant index ({k}, {i}, {j})"
                )));
            }
            c[*k][*i][*j] = v.clone();
            c[*k][*j][*i] = -v.clone();
        }
        let sc = StructureConstants { n, c };
        sc.jacobi()?;
        Ok(sc)
    }

    /// `c^k_{ij} = ε_{ijk}` on three generators.
    pub fn so3() -> Self {
        let one = BigRational::one();
        StructureConstants::new(
            3,
            &[
                (2, 0, 1, one.clone()),
                (0, 1, 2, one.clone()),
                (1, 2, 0, one),
            ],
        )
        .expect("so(3) satisfies Jacobi")
    }

    pub fn abelian(n: usize) -> Result<Self, Error> {
        StructureConstants::new(n, &[])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> &BigRational {
        &self.c[k][i][j]
    }

    /// `Σ_m c^m_{ij} c^l_{mk} + cyclic(i, j, k) = 0`; reports the first
    /// failing triple (1-based).
    fn jacobi(&self) -> Result<(), Error> {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in 0..n {
                        let mut s = BigRational::zero();
                        for m in 0..n {
                            s += &self.c[m][i][j] * &self.c[l][m][k];
                            s += &self.c[m][j][k] * &self.c[l][m][i];
                            s += &self.c[m][k][i] * &self.c[l][m][j];
                        }
                        if !s.is_zero() {
                            return Err(Error::Jacobi(i + 1, j + 1, k + 1));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `(ad_a)^k_j = c^k_{aj}`.
    pub fn ad(&self, a: usize) -> Vec<Vec<BigRational>> {
        (0..self.n)
            .map(|k| (0..self.n).map(|j| self.c[k][a][j].clone()).collect())
            .collect()
    }

    /// Cartan–Killing form `K_ab = tr(ad_a ad_b)`.
    pub fn killing_form(&self) -> Vec<Vec<BigRational>> {
        let n = self.n;
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let mut s = BigRational::zero();
                        for k in 0..n {
                            for l in 0..n {
                                s += &self.c[k][a][l] * &self.c[l][b][k];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }
}

type RatMatrix = Vec<Vec<BigRational>>;

fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn is_zero_matrix(m: &RatMatrix) -> bool {
    m.iter().flatten().all(Zero::is_zero)
}

fn rat_expr(r: &BigRational) -> ScalarExpr {
    ScalarExpr::num(r.clone())
}

/// `exp(s M)` as a symbolic matrix in the parameter `s`.
fn exp_symbolic(m: &RatMatrix, s: &ScalarExpr) -> Result<Vec<Vec<ScalarExpr>>, Error> {
    let n = m.len();
    let ident = |i: usize, j: usize| {
        if i == j {
            ScalarExpr::one()
        } else {
            ScalarExpr::zero()
        }
    };
    let combine = |coeffs: &[(ScalarExpr, &RatMatrix)]| -> Vec<Vec<ScalarExpr>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        coeffs.iter().fold(ident(i, j), |acc, (c, mat)| {
                            if mat[i][j].is_zero() {
                                acc
                            } else {
                                acc.add_s(&c.mul_s(&rat_expr(&mat[i][j])))
                            }
                        })
                    })
                    .collect()
            })
            .collect()
    };
    // Nilpotent: finite series.
    let mut powers = vec![m.clone()];
    for _ in 1..=n {
        let last = powers.last().unwrap();
        if is_zero_matrix(last) {
            break;
        }
        powers.push(mat_mul(last, m));
    }
    if is_zero_matrix(powers.last().unwrap()) {
        let mut fact = BigRational::one();
        let terms: Vec<(ScalarExpr, &RatMatrix)> = powers
            .iter()
            .enumerate()
            .filter(|(_, p)| !is_zero_matrix(p))
            .map(|(k, p)| {
                fact *= BigRational::from_integer((k as i64 + 1).into());
                (s.powi(k as i64 + 1).mul_s(&rat_expr(&fact.recip())), p)
            })
            .collect();
        return Ok(combine(&terms));
    }
    // M³ = μ M with μ = ∓λ².
    let m2 = mat_mul(m, m);
    let m3 = mat_mul(&m2, m);
    let (i0, j0) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !m[i][j].is_zero())
        .expect("nonzero matrix");
    let mu = &m3[i0][j0] / &m[i0][j0];
    let scaled: RatMatrix = m
        .iter()
        .map(|r| r.iter().map(|v| v * &mu).collect())
        .collect();
    if m3 != scaled || mu.is_zero() {
        return Err(Error::Invalid(
            "adjoint exponential has no supported closed form".into(),
        ));
    }
    let lambda2 = mu.abs();
    let lambda = ScalarExpr::num(lambda2.clone()).pow_s(&BigRational::new(1.into(), 2.into()));
    let arg = lambda.mul_s(s);
    let inv_l = lambda.recip_s();
    let inv_l2 = rat_expr(&lambda2.recip());
    let (first, second) = if mu.is_negative() {
        (
            arg.sin().mul_s(&inv_l),
            ScalarExpr::one().sub_s(&arg.cos()).mul_s(&inv_l2),
        )
    } else {
        let half = ScalarExpr::rational(1, 2);
        let sinh = arg.exp().sub_s(&arg.neg_s().exp()).mul_s(&half);
        let cosh = arg.exp().add_s(&arg.neg_s().exp()).mul_s(&half);
        (
            sinh.mul_s(&inv_l),
            cosh.sub_s(&ScalarExpr::one()).mul_s(&inv_l2),
        )
    };
    Ok(combine(&[(first, m), (second, &m2)]))
}

fn sym_mat_mul(a: &[Vec<ScalarExpr>], b: &[Vec<ScalarExpr>]) -> Vec<Vec<ScalarExpr>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(ScalarExpr::zero(), |acc, k| {
                        if a[i][k].is_structurally_zero() || b[k][j].is_structurally_zero() {
                            acc
                        } else {
                            acc.add_s(&a[i][k].mul_s(&b[k][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Invariant coframe coefficients `θ^k = Σ_a M[k][a] dx^a` in coordinates
/// `coords` (one per generator).
pub fn maurer_cartan(
    c: &StructureConstants,
    side: Side,
    coords: &[&str],
) -> Result<Vec<Vec<ScalarExpr>>, Error> {
    let n = c.dim();
    if coords.len() != n {
        return Err(Error::Dimension {
            expected: n.to_string(),
            found: coords.len(),
        });
    }
    let ident: Vec<Vec<ScalarExpr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        ScalarExpr::one()
                    } else {
                        ScalarExpr::zero()
                    }
                })
                .collect()
        })
        .collect();
    let factor = |b: usize, sign: i64| -> Result<Vec<Vec<ScalarExpr>>, Error> {
        let ad = c.ad(b);
        if is_zero_matrix(&ad) {
            return Ok(ident.clone());
        }
        exp_symbolic(&ad, &ScalarExpr::symbol(coords[b]).scale_i(sign))
    };
    let mut out = vec![vec![ScalarExpr::zero(); n]; n];
    for a in 0..n {
        // Ad-product acting on X_a.
        let mut p = ident.clone();
        match side {
            Side::Left => {
                for b in (a + 1..n).rev() {
                    p = sym_mat_mul(&p, &factor(b, -1)?);
                }
            }
            Side::Right => {
                for b in 0..a {
                    p = sym_mat_mul(&p, &factor(b, 1)?);
                }
            }
        }
        for k in 0..n {
            out[k][a] = p[k][a].clone();
        }
    }
    Ok(out)
}

//! Coordinate-tensor oracle: Christoffel symbols and the Riemann tensor from
//! the metric `g_μν = Σ_i ε_i E_iμ E_iν`, using only symbolic partial
//! derivatives and floating-point linear algebra.
#![allow(dead_code)]

use cartan_forge::expr::{Env, DEFAULT_SEED};
use cartan_forge::{FrameField, ScalarExpr};

pub struct Oracle {
    n: usize,
    names: Vec<String>,
    e: Vec<Vec<ScalarExpr>>,
    g: Vec<Vec<ScalarExpr>>,
    dg: Vec<Vec<Vec<ScalarExpr>>>,
    ddg: Vec<Vec<Vec<Vec<ScalarExpr>>>>,
    eps: Vec<f64>,
    env: Env<f64>,
}

/// Values at one point: the coordinate Riemann tensor `R^ρ_{σμν}` (with
/// `R^θ_{φθφ} = sin²θ` on the unit sphere) and the frame matrices.
pub struct PointData {
    pub e: Vec<Vec<f64>>,
    pub einv: Vec<Vec<f64>>,
    pub g: Vec<Vec<f64>>,
    pub ginv: Vec<Vec<f64>>,
    pub riemann: Vec<Vec<Vec<Vec<f64>>>>,
}

pub fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| a[x][c].abs().partial_cmp(&a[y][c].abs()).unwrap())
            .unwrap();
        a.swap(c, p);
        let piv = a[c][c];
        for v in a[c].iter_mut() {
            *v /= piv;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                let row_c = a[c].clone();
                for (v, w) in a[r].iter_mut().zip(row_c) {
                    *v -= f * w;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

impl Oracle {
    pub fn new(frame: &FrameField) -> Self {
        let n = frame.dim();
        let names: Vec<String> = frame.chart().names().to_vec();
        let e: Vec<Vec<ScalarExpr>> = frame.matrix().to_vec();
        let eps: Vec<i64> = (0..n).map(|i| frame.signature().eps(i)).collect();
        let g: Vec<Vec<ScalarExpr>> = (0..n)
            .map(|m| {
                (0..n)
                    .map(|v| {
                        (0..n).fold(ScalarExpr::zero(), |acc, i| {
                            acc.add_s(&e[i][m].mul_s(&e[i][v]).scale_i(eps[i]))
                        })
                    })
                    .collect()
            })
            .collect();
        let dg: Vec<Vec<Vec<ScalarExpr>>> = (0..n)
            .map(|a| {
                g.iter()
                    .map(|r| r.iter().map(|x| x.diff(&names[a])).collect())
                    .collect()
            })
            .collect();
        let ddg = (0..n)
            .map(|b| {
                dg.iter()
                    .map(|m| {
                        m.iter()
                            .map(|r| r.iter().map(|x| x.diff(&names[b])).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut env = Env::new();
        for (k, v) in frame.params() {
            env.set(k, *v);
        }
        Oracle {
            n,
            names,
            e,
            g,
            dg,
            ddg,
            eps: eps.iter().map(|v| *v as f64).collect(),
            env,
        }
    }

    pub fn env(&self, x: &[f64]) -> Env<f64> {
        let mut env = self.env.clone();
        for (name, v) in self.names.iter().zip(x) {
            env.set(name, *v);
        }
        env
    }

    pub fn eval(&self, e: &ScalarExpr, x: &[f64]) -> f64 {
        e.evaluate(&self.env(x)).expect("oracle evaluation")
    }

    pub fn at(&self, x: &[f64]) -> PointData {
        let n = self.n;
        let env = self.env(x);
        let ev = |e: &ScalarExpr| e.evaluate(&env).expect("oracle evaluation");
        let g: Vec<Vec<f64>> = self.g.iter().map(|r| r.iter().map(ev).collect()).collect();
        // dg[a][m][v] = ∂_a g_mv ; ddg[b][a][m][v] = ∂_b ∂_a g_mv
        let dg: Vec<Vec<Vec<f64>>> = self
            .dg
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(ev).collect()).collect())
            .collect();
        let ddg: Vec<Vec<Vec<Vec<f64>>>> = self
            .ddg
            .iter()
            .map(|b| {
                b.iter()
                    .map(|m| m.iter().map(|r| r.iter().map(ev).collect()).collect())
                    .collect()
            })
            .collect();
        let ginv = invert(&g);
        // Γ_{λμν} = ½(∂_μ g_λν + ∂_ν g_λμ − ∂_λ g_μν) and its derivative.
        let low = |l: usize, m: usize, v: usize| 0.5 * (dg[m][l][v] + dg[v][l][m] - dg[l][m][v]);
        let dlow = |b: usize, l: usize, m: usize, v: usize| {
            0.5 * (ddg[b][m][l][v] + ddg[b][v][l][m] - ddg[b][l][m][v])
        };
        // ∂_b g^{ρλ} = −g^{ρα} ∂_b g_{αβ} g^{βλ}
        let dginv = |b: usize, r: usize, l: usize| {
            let mut s = 0.0;
            for a in 0..n {
                for c in 0..n {
                    s -= ginv[r][a] * dg[b][a][c] * ginv[c][l];
                }
            }
            s
        };
        let mut gamma = vec![vec![vec![0.0; n]; n]; n];
        let mut dgamma = vec![vec![vec![vec![0.0; n]; n]; n]; n];
        for r in 0..n {
            for m in 0..n {
                for v in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += ginv[r][l] * low(l, m, v);
                    }
                    gamma[r][m][v] = s;
                    for b in 0..n {
                        let mut d = 0.0;
                        for l in 0..n {
                            d += dginv(b, r, l) * low(l, m, v) + ginv[r][l] * dlow(b, l, m, v);
                        }
                        dgamma[b][r][m][v] = d;
                    }
                }
            }
        }
        let mut riemann = vec![vec![vec![vec![0.0; n]; n]; n]; n];
        for r in 0..n {
            for s in 0..n {
                for m in 0..n {
                    for v in 0..n {
                        let mut val = dgamma[m][r][v][s] - dgamma[v][r][m][s];
                        for l in 0..n {
                            val +=
                                gamma[r][m][l] * gamma[l][v][s] - gamma[r][v][l] * gamma[l][m][s];
                        }
                        riemann[r][s][m][v] = val;
                    }
                }
            }
        }
        let e: Vec<Vec<f64>> = self.e.iter().map(|r| r.iter().map(ev).collect()).collect();
        let einv = invert(&e);
        PointData {
            e,
            einv,
            g,
            ginv,
            riemann,
        }
    }

    /// `A^i_{jkl} = E^i_ρ R^ρ_{σμν} E⁻¹^σ_j E⁻¹^μ_k E⁻¹^ν_l`.
    pub fn frame_riemann(&self, p: &PointData) -> Vec<Vec<Vec<Vec<f64>>>> {
        let n = self.n;
        let mut out = vec![vec![vec![vec![0.0; n]; n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = 0.0;
                        for r in 0..n {
                            for sg in 0..n {
                                for m in 0..n {
                                    for v in 0..n {
                                        s += p.e[i][r]
                                            * p.riemann[r][sg][m][v]
                                            * p.einv[sg][j]
                                            * p.einv[m][k]
                                            * p.einv[v][l];
                                    }
                                }
                            }
                        }
                        out[i][j][k][l] = s;
                    }
                }
            }
        }
        out
    }

    /// Coordinate Ricci `R_σν = R^μ_{σμν}` and scalar `g^{σν} R_σν`.
    pub fn ricci(&self, p: &PointData) -> (Vec<Vec<f64>>, f64) {
        let n = self.n;
        let mut ric = vec![vec![0.0; n]; n];
        for s in 0..n {
            for v in 0..n {
                ric[s][v] = (0..n).map(|m| p.riemann[m][s][m][v]).sum();
            }
        }
        let mut r = 0.0;
        for s in 0..n {
            for v in 0..n {
                r += p.ginv[s][v] * ric[s][v];
            }
        }
        (ric, r)
    }

    /// Frame components `G_ij` of `Ric − R/2 g`.
    pub fn frame_einstein(&self, p: &PointData) -> Vec<Vec<f64>> {
        let n = self.n;
        let (ric, r) = self.ricci(p);
        let mut out = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for m in 0..n {
                    for v in 0..n {
                        s += p.einv[m][i] * (ric[m][v] - 0.5 * r * p.g[m][v]) * p.einv[v][j];
                    }
                }
                out[i][j] = s;
            }
        }
        out
    }

    pub fn eps(&self, i: usize) -> f64 {
        self.eps[i]
    }

    /// `sqrt|det g|`.
    pub fn volume_density(&self, p: &PointData) -> f64 {
        det(&p.g).abs().sqrt()
    }
}

pub fn det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<f64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != c)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let s = if c % 2 == 0 { 1.0 } else { -1.0 };
            s * m[0][c] * det(&minor)
        })
        .collect::<Vec<_>>()
        .iter()
        .sum()
}

/// Twenty deterministic coordinate points inside the chart bounds.
pub fn sample_points(frame: &FrameField, count: usize) -> Vec<Vec<f64>> {
    let names = frame.chart().names();
    frame
        .sampler(DEFAULT_SEED ^ 0x5eed)
        .points(names.iter(), count)
        .iter()
        .map(|env| names.iter().map(|n| env.get(n).unwrap()).collect())
        .collect()
}

//! Parallel transport, loop holonomy and geodesic/autoparallel integration
//! with fixed-step classical Runge-Kutta.
//!
//! Frame vectors are stored by their components on `e_i`. Along a curve
//! `c(t)` with `A^i_j = ω^i_j(ċ)`, a parallel vector obeys `v̇ = −A v`.

mod curve;
mod numeric;

use std::sync::Arc;

use serde::Serialize;

use crate::cartan::{levi_civita, CartanConnection, CurvatureData, FrameField};
use crate::{Error, Real};

pub use curve::CurveSpec;
pub use numeric::NumericConnection;

use curve::CompiledCurve;

/// Gap below which a loop counts as closed; the last point is then snapped
/// onto the first.
pub const CLOSURE_TOLERANCE: f64 = 1e-12;

fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("representable constant")
}

fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// One classical RK4 step of `y' = f(t, y)`.
pub fn rk4_step<T, F>(t: T, y: &[T], h: T, f: &F) -> Result<Vec<T>, Error>
where
    T: Real,
    F: Fn(T, &[T]) -> Result<Vec<T>, Error>,
{
    let two = real::<T>(2.0);
    let half = h / two;
    let axpy =
        |a: &[T], s: T, b: &[T]| -> Vec<T> { a.iter().zip(b).map(|(x, k)| *x + s * *k).collect() };
    let k1 = f(t, y)?;
    let k2 = f(t + half, &axpy(y, half, &k1))?;
    let k3 = f(t + half, &axpy(y, half, &k2))?;
    let k4 = f(t + h, &axpy(y, h, &k3))?;
    let six = real::<T>(6.0);
    Ok(y.iter()
        .enumerate()
        .map(|(i, yi)| *yi + h / six * (k1[i] + two * k2[i] + two * k3[i] + k4[i]))
        .collect())
}

/// Number of uniform substeps of size at most `step` covering `len`.
fn substeps<T: Real>(len: T, step: T) -> Result<usize, Error> {
    if !(step > T::zero()) || !step.is_finite() {
        return Err(Error::Invalid(format!("step must be positive, got {step}")));
    }
    let n = (len.abs() / step).ceil().to_usize().unwrap_or(0);
    Ok(n.max(1))
}

fn check_domain<T: Real>(frame: &FrameField, x: &[T], t: T) -> Result<(), Error> {
    let xf: Vec<f64> = x.iter().map(|v| to_f64(*v)).collect();
    if frame.chart().contains(&xf) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            t: to_f64(t),
            detail: format!("point {xf:?}"),
        })
    }
}

fn mat_vec<T: Real>(m: &[Vec<T>], v: &[T]) -> Vec<T> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(T::zero(), |acc, (a, b)| acc + *a * *b)
        })
        .collect()
}

/// Parallel transport of frame components `v0` along `curve`.
pub fn parallel_transport<T: Real>(
    conn: &CartanConnection,
    curve: &CurveSpec,
    v0: &[T],
    step: T,
) -> Result<Vec<T>, Error> {
    let num = NumericConnection::<T>::new(conn)?;
    let path = CompiledCurve::<T>::new(curve, conn.frame())?;
    let n = num.dim();
    if v0.len() != n {
        return Err(Error::Shape(format!(
            "vector has {} components, expected {n}",
            v0.len()
        )));
    }
    let mut v = v0.to_vec();
    for seg in 0..path.segments() {
        let (a, b) = path.bounds(seg);
        let steps = substeps(b - a, step)?;
        let h = (b - a) / real::<T>(steps as f64);
        let rhs = |t: T, y: &[T]| -> Result<Vec<T>, Error> {
            let (x, xdot) = path.eval(seg, t)?;
            check_domain(conn.frame(), &x, t)?;
            let a = num.omega_on(&x, &xdot)?;
            Ok(mat_vec(&a, y).into_iter().map(|z| -z).collect())
        };
        for s in 0..steps {
            let t = a + h * real::<T>(s as f64);
            v = rk4_step(t, &v, h, &rhs)?;
        }
    }
    Ok(v)
}

/// Rotation and translation picked up around a closed loop.
#[derive(Clone, Debug, Serialize)]
pub struct HolonomyResult<T> {
    /// Complementary rotation `Q = P⁻¹`, with `P` the transport map on frame components.
    pub rotation: Vec<Vec<T>>,
    /// Closing defect of the development, in the frame at the base point.
    pub translation: Vec<T>,
    /// `σ^{μν} = ½∮(x^μ dx^ν − x^ν dx^μ)`.
    pub area: Vec<Vec<T>>,
    pub base: Vec<T>,
    pub step: T,
    /// `max |Qᵀ diag(ε) Q − diag(ε)|`.
    pub metricity_defect: T,
}

/// Transport a full frame and develop the loop into the tangent space at the
/// base point: `Q̇ = Q A`, `Ẋ = Q θ(ċ)`, `σ̇^{μν} = ½(x^μ ẋ^ν − x^ν ẋ^μ)`.
pub fn loop_holonomy<T: Real>(
    conn: &CartanConnection,
    loop_: &CurveSpec,
    step: T,
) -> Result<HolonomyResult<T>, Error> {
    let num = NumericConnection::<T>::new(conn)?;
    let closed = loop_.closed(CLOSURE_TOLERANCE, conn.frame())?;
    let path = CompiledCurve::<T>::new(&closed, conn.frame())?;
    let n = num.dim();
    let nq = n * n;
    let size = nq + n + n * n;
    let mut y = vec![T::zero(); size];
    for i in 0..n {
        y[i * n + i] = T::one();
    }
    let base = path.eval(0, path.bounds(0).0)?.0;
    let half = real::<T>(0.5);
    for seg in 0..path.segments() {
        let (a, b) = path.bounds(seg);
        let steps = substeps(b - a, step)?;
        let h = (b - a) / real::<T>(steps as f64);
        let rhs = |t: T, y: &[T]| -> Result<Vec<T>, Error> {
            let (x, xdot) = path.eval(seg, t)?;
            check_domain(conn.frame(), &x, t)?;
            let a = num.omega_on(&x, &xdot)?;
            let theta = num.coframe_on(&x, &xdot)?;
            let mut dy = vec![T::zero(); size];
            for i in 0..n {
                for j in 0..n {
                    let mut s = T::zero();
                    for k in 0..n {
                        s = s + y[i * n + k] * a[k][j];
                    }
                    dy[i * n + j] = s;
                }
                let mut s = T::zero();
                for k in 0..n {
                    s = s + y[i * n + k] * theta[k];
                }
                dy[nq + i] = s;
            }
            for mu in 0..n {
                for nu in 0..n {
                    dy[nq + n + mu * n + nu] = half * (x[mu] * xdot[nu] - x[nu] * xdot[mu]);
                }
            }
            Ok(dy)
        };
        for s in 0..steps {
            let t = a + h * real::<T>(s as f64);
            y = rk4_step(t, &y, h, &rhs)?;
        }
    }
    let rotation: Vec<Vec<T>> = (0..n).map(|i| y[i * n..(i + 1) * n].to_vec()).collect();
    let translation = y[nq..nq + n].to_vec();
    let area = (0..n)
        .map(|mu| y[nq + n + mu * n..nq + n + (mu + 1) * n].to_vec())
        .collect();
    let sig = conn.frame().signature();
    let mut defect = T::zero();
    for i in 0..n {
        for j in 0..n {
            let mut s = T::zero();
            for k in 0..n {
                s = s + rotation[k][i] * real::<T>(sig.eps(k) as f64) * rotation[k][j];
            }
            let target = if i == j {
                real::<T>(sig.eps(i) as f64)
            } else {
                T::zero()
            };
            defect = defect.max((s - target).abs());
        }
    }
    Ok(HolonomyResult {
        rotation,
        translation,
        area,
        base,
        step,
        metricity_defect: defect,
    })
}

/// Curvature and torsion 2-forms evaluated on an area bivector at a point:
/// `(Ω^i_j(σ), Ω^i(σ))` with `F(σ) = Σ_{μ<ν} F_{μν} σ^{μν}`.
pub fn forms_on_area(
    data: &CurvatureData,
    frame: &FrameField,
    x: &[f64],
    area: &[Vec<f64>],
) -> Result<(Vec<Vec<f64>>, Vec<f64>), Error> {
    let env = frame.env_at(x);
    let on = |f: &crate::exterior::Form| -> Result<f64, Error> {
        let mut s = 0.0;
        for (mask, c) in f.terms() {
            let idx = crate::exterior::mask_indices(*mask);
            s += c.evaluate(&env)? * area[idx[0]][idx[1]];
        }
        Ok(s)
    };
    let n = frame.dim();
    let mut curv = vec![vec![0.0; n]; n];
    for (i, row) in curv.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = on(&data.curvature[i][j])?;
        }
    }
    let tors = data.torsion.iter().map(on).collect::<Result<Vec<_>, _>>()?;
    Ok((curv, tors))
}

/// Sampled solution of a geodesic or autoparallel problem.
#[derive(Clone, Debug, Serialize)]
pub struct Trajectory<T> {
    pub t: Vec<T>,
    /// Coordinates at each sample.
    pub x: Vec<Vec<T>>,
    /// Coordinate velocity at each sample.
    pub v: Vec<Vec<T>>,
    /// Frame components of the velocity at each sample.
    pub u: Vec<Vec<T>>,
    pub step: T,
}

impl<T: Real> Trajectory<T> {
    /// `Σ ε_i (u^i)²` at each sample.
    pub fn energy(&self, frame: &FrameField) -> Vec<T> {
        let sig = frame.signature();
        self.u
            .iter()
            .map(|u| {
                u.iter().enumerate().fold(T::zero(), |acc, (i, ui)| {
                    acc + real::<T>(sig.eps(i) as f64) * *ui * *ui
                })
            })
            .collect()
    }

    pub fn last(&self) -> Option<(&T, &Vec<T>)> {
        self.t.last().zip(self.x.last())
    }
}

/// Curve whose tangent is parallel under `conn`, from `x0` with coordinate
/// velocity `v0`. State is `(x, u)` with `ẋ = E⁻¹ u`, `u̇ = −ω(ẋ) u`.
pub fn autoparallel<T: Real>(
    conn: &CartanConnection,
    x0: &[T],
    v0: &[T],
    step: T,
    t_end: T,
) -> Result<Trajectory<T>, Error> {
    let num = NumericConnection::<T>::new(conn)?;
    let n = num.dim();
    if x0.len() != n || v0.len() != n {
        return Err(Error::Shape(format!(
            "initial data must have {n} components"
        )));
    }
    if v0.iter().all(|v| *v == T::zero()) {
        return Err(Error::Invalid("initial velocity is zero".into()));
    }
    if !(t_end > T::zero()) {
        return Err(Error::Invalid("t_end must be positive".into()));
    }
    let frame = conn.frame();
    check_domain(frame, x0, T::zero())?;
    let u0 = num.coframe_on(x0, v0)?;
    let steps = substeps(t_end, step)?;
    let h = t_end / real::<T>(steps as f64);
    let rhs = |t: T, y: &[T]| -> Result<Vec<T>, Error> {
        let (x, u) = y.split_at(n);
        check_domain(frame, x, t)?;
        let xdot = mat_vec(&num.inverse_at(x)?, u);
        let a = num.omega_on(x, &xdot)?;
        let udot: Vec<T> = mat_vec(&a, u).into_iter().map(|z| -z).collect();
        Ok(xdot.into_iter().chain(udot).collect())
    };
    let mut y: Vec<T> = x0.iter().chain(u0.iter()).copied().collect();
    let mut traj = Trajectory {
        t: Vec::with_capacity(steps + 1),
        x: Vec::with_capacity(steps + 1),
        v: Vec::with_capacity(steps + 1),
        u: Vec::with_capacity(steps + 1),
        step: h,
    };
    let mut record = |t: T, y: &[T]| -> Result<(), Error> {
        let (x, u) = y.split_at(n);
        traj.t.push(t);
        traj.x.push(x.to_vec());
        traj.v.push(mat_vec(&num.inverse_at(x)?, u));
        traj.u.push(u.to_vec());
        Ok(())
    };
    record(T::zero(), &y)?;
    for s in 0..steps {
        let t = h * real::<T>(s as f64);
        y = rk4_step(t, &y, h, &rhs)?;
        check_domain(frame, &y[..n], t + h)?;
        record(h * real::<T>((s + 1) as f64), &y)?;
    }
    Ok(traj)
}

/// Geodesic of the frame's metric: autoparallel of its Levi-Civita connection.
pub fn geodesic<T: Real>(
    frame: &Arc<FrameField>,
    x0: &[T],
    v0: &[T],
    step: T,
    t_end: T,
) -> Result<Trajectory<T>, Error> {
    autoparallel(&levi_civita(frame), x0, v0, step, t_end)
}

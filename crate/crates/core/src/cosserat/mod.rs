//! Cosserat equilibrium on regular 3D grids.
//!
//! Index convention: `p_ij` is force component `j` transmitted across a
//! surface with normal along `i`; likewise `q_ij` for couples. Equilibrium
//! reads `X_j = Σ_i ∂_i p_ij` and `L_j = Σ_i ∂_i q_ij + p_kl − p_lk` for
//! cyclic `(j, k, l)`.

mod csv;
mod geometry;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cartan::vanishing::vanishes_all;
use crate::expr::{Compiled, Sampler, DEFAULT_SEED};
use crate::{Error, Real, ScalarExpr};

pub use csv::{read_medium_csv, write_medium_csv, write_residual_csv, MEDIUM_CSV_HEADER};
pub use geometry::{geometry_to_medium, MediumGeometry};

/// Tolerance on `|n| = 1`.
pub const NORMAL_TOLERANCE: f64 = 1e-12;

pub type Tensor<T> = [[T; 3]; 3];
pub type Vector<T> = [T; 3];

/// Regular grid `origin + (i h_1, j h_2, k h_3)`; node index `i + n_1 (j + n_2 k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid<T> {
    pub origin: Vector<T>,
    pub spacing: Vector<T>,
    pub extents: [usize; 3],
}

impl<T: Real> Grid<T> {
    /// At least three nodes per axis so every stencil is second order.
    pub fn new(origin: Vector<T>, spacing: Vector<T>, extents: [usize; 3]) -> Result<Self, Error> {
        if spacing.iter().any(|h| !(*h > T::zero()) || !h.is_finite()) {
            return Err(Error::Invalid("grid spacing must be positive".into()));
        }
        if extents.iter().any(|n| *n < 3) {
            return Err(Error::Invalid(
                "grid needs at least 3 nodes per axis".into(),
            ));
        }
        Ok(Grid {
            origin,
            spacing,
            extents,
        })
    }

    /// Cube `[lo, hi]³` with `n` nodes per axis.
    pub fn cube(lo: T, hi: T, n: usize) -> Result<Self, Error> {
        if n < 3 {
            return Err(Error::Invalid(
                "grid needs at least 3 nodes per axis".into(),
            ));
        }
        let h = (hi - lo) / T::from_usize(n - 1).expect("node count");
        Grid::new([lo; 3], [h; 3], [n; 3])
    }

    pub fn len(&self) -> usize {
        self.extents.iter().product()
    }

    /// Same extents, with origin and spacing equal to relative precision 1e-9.
    pub fn matches(&self, other: &Grid<T>) -> bool {
        let close = |a: T, b: T| {
            let (a, b) = (
                a.to_f64().unwrap_or(f64::NAN),
                b.to_f64().unwrap_or(f64::NAN),
            );
            (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
        };
        self.extents == other.extents
            && (0..3).all(|a| {
                close(self.origin[a], other.origin[a]) && close(self.spacing[a], other.spacing[a])
            })
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, ijk: [usize; 3]) -> usize {
        ijk[0] + self.extents[0] * (ijk[1] + self.extents[1] * ijk[2])
    }

    pub fn ijk(&self, idx: usize) -> [usize; 3] {
        let i = idx % self.extents[0];
        let rest = idx / self.extents[0];
        [i, rest % self.extents[1], rest / self.extents[1]]
    }

    pub fn node(&self, idx: usize) -> Vector<T> {
        let ijk = self.ijk(idx);
        std::array::from_fn(|a| {
            self.origin[a] + self.spacing[a] * T::from_usize(ijk[a]).expect("index")
        })
    }

    /// Second-order derivative along `axis` of node values `f`, one-sided on
    /// the boundary.
    fn derivative(&self, f: impl Fn(usize) -> T, idx: usize, axis: usize) -> T {
        let ijk = self.ijk(idx);
        let n = self.extents[axis];
        let two = T::from_f64(2.0).unwrap();
        let three = T::from_f64(3.0).unwrap();
        let four = T::from_f64(4.0).unwrap();
        let at = |off: isize| {
            let mut p = ijk;
            p[axis] = (ijk[axis] as isize + off) as usize;
            f(self.index(p))
        };
        let h = self.spacing[axis];
        if ijk[axis] == 0 {
            (-three * at(0) + four * at(1) - at(2)) / (two * h)
        } else if ijk[axis] == n - 1 {
            (three * at(0) - four * at(-1) + at(-2)) / (two * h)
        } else {
            (at(1) - at(-1)) / (two * h)
        }
    }
}

/// Expressions over three named coordinates plus fixed parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicSpace {
    pub coords: [String; 3],
    pub params: BTreeMap<String, f64>,
}

impl Default for SymbolicSpace {
    fn default() -> Self {
        SymbolicSpace {
            coords: ["x1".into(), "x2".into(), "x3".into()],
            params: BTreeMap::new(),
        }
    }
}

impl SymbolicSpace {
    fn compile<T: Real>(&self, e: &ScalarExpr) -> Result<Compiled<T>, Error> {
        let vars: Vec<&str> = self.coords.iter().map(String::as_str).collect();
        let consts: Vec<(&str, T)> = self
            .params
            .iter()
            .map(|(k, v)| (k.as_str(), T::from_f64(*v).expect("parameter")))
            .collect();
        Ok(Compiled::new(e, &vars, &consts)?)
    }

    fn sampler(&self) -> Sampler {
        let mut s = Sampler::new(DEFAULT_SEED);
        for c in &self.coords {
            s = s.with_bounds(c, -1.0, 1.0);
        }
        for (k, v) in &self.params {
            s = s.with_fixed(k, *v);
        }
        s
    }

    fn tensor_on<T: Real>(
        &self,
        t: &Tensor<ScalarExpr>,
        grid: &Grid<T>,
    ) -> Result<Vec<Tensor<T>>, Error> {
        let compiled: Vec<Compiled<T>> = t
            .iter()
            .flatten()
            .map(|e| self.compile(e))
            .collect::<Result<_, _>>()?;
        (0..grid.len())
            .map(|idx| {
                let x = grid.node(idx);
                let mut out = [[T::zero(); 3]; 3];
                for (m, c) in compiled.iter().enumerate() {
                    out[m / 3][m % 3] = c.eval(&x)?;
                }
                Ok(out)
            })
            .collect()
    }

    fn vector_on<T: Real>(
        &self,
        v: &Vector<ScalarExpr>,
        grid: &Grid<T>,
    ) -> Result<Vec<Vector<T>>, Error> {
        let compiled: Vec<Compiled<T>> = v
            .iter()
            .map(|e| self.compile(e))
            .collect::<Result<_, _>>()?;
        (0..grid.len())
            .map(|idx| {
                let x = grid.node(idx);
                let mut out = [T::zero(); 3];
                for (m, c) in compiled.iter().enumerate() {
                    out[m] = c.eval(&x)?;
                }
                Ok(out)
            })
            .collect()
    }
}

/// A 3×3 tensor field given symbolically or as node values.
#[derive(Clone, Debug, PartialEq)]
pub enum TensorField<T> {
    Symbolic(Tensor<ScalarExpr>),
    Nodes(Vec<Tensor<T>>),
}

/// A vector field given symbolically or as node values.
#[derive(Clone, Debug, PartialEq)]
pub enum VectorField<T> {
    Symbolic(Vector<ScalarExpr>),
    Nodes(Vec<Vector<T>>),
}

impl<T: Real> TensorField<T> {
    pub fn zero() -> Self {
        TensorField::Symbolic(std::array::from_fn(|_| {
            std::array::from_fn(|_| ScalarExpr::zero())
        }))
    }

    fn check(&self, grid: &Grid<T>, what: &str) -> Result<(), Error> {
        match self {
            TensorField::Nodes(v) if v.len() != grid.len() => Err(shape(what, v.len(), grid.len())),
            _ => Ok(()),
        }
    }

    fn nodes(&self, space: &SymbolicSpace, grid: &Grid<T>) -> Result<Vec<Tensor<T>>, Error> {
        match self {
            TensorField::Symbolic(t) => space.tensor_on(t, grid),
            TensorField::Nodes(v) => Ok(v.clone()),
        }
    }
}

impl<T: Real> VectorField<T> {
    pub fn zero() -> Self {
        VectorField::Symbolic(std::array::from_fn(|_| ScalarExpr::zero()))
    }

    fn check(&self, grid: &Grid<T>, what: &str) -> Result<(), Error> {
        match self {
            VectorField::Nodes(v) if v.len() != grid.len() => Err(shape(what, v.len(), grid.len())),
            _ => Ok(()),
        }
    }

    fn nodes(&self, space: &SymbolicSpace, grid: &Grid<T>) -> Result<Vec<Vector<T>>, Error> {
        match self {
            VectorField::Symbolic(v) => space.vector_on(v, grid),
            VectorField::Nodes(v) => Ok(v.clone()),
        }
    }
}

fn shape(what: &str, found: usize, expected: usize) -> Error {
    Error::Shape(format!("{what} has {found} nodes, grid has {expected}"))
}

/// Stress `p_ij` and couple stress `q_ij` on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MediumField<T> {
    pub grid: Grid<T>,
    pub space: SymbolicSpace,
    pub p: TensorField<T>,
    pub q: TensorField<T>,
}

impl<T: Real> MediumField<T> {
    pub fn new(
        grid: Grid<T>,
        space: SymbolicSpace,
        p: TensorField<T>,
        q: TensorField<T>,
    ) -> Result<Self, Error> {
        p.check(&grid, "stress")?;
        q.check(&grid, "couple stress")?;
        Ok(MediumField { grid, space, p, q })
    }

    /// Symbolic fields over `x1, x2, x3`.
    pub fn symbolic(grid: Grid<T>, p: Tensor<ScalarExpr>, q: Tensor<ScalarExpr>) -> Self {
        MediumField {
            grid,
            space: SymbolicSpace::default(),
            p: TensorField::Symbolic(p),
            q: TensorField::Symbolic(q),
        }
    }

    /// The same medium with every field replaced by its node values.
    pub fn sampled(&self) -> Result<Self, Error> {
        Ok(MediumField {
            grid: self.grid.clone(),
            space: self.space.clone(),
            p: TensorField::Nodes(self.p.nodes(&self.space, &self.grid)?),
            q: TensorField::Nodes(self.q.nodes(&self.space, &self.grid)?),
        })
    }

    pub fn stress_nodes(&self) -> Result<Vec<Tensor<T>>, Error> {
        self.p.nodes(&self.space, &self.grid)
    }

    pub fn couple_nodes(&self) -> Result<Vec<Tensor<T>>, Error> {
        self.q.nodes(&self.space, &self.grid)
    }

    /// Largest node-wise gap between a symbolic medium and node arrays given
    /// for the same grid.
    pub fn consistency_gap(&self, other: &MediumField<T>) -> Result<T, Error> {
        if !self.grid.matches(&other.grid) {
            return Err(Error::Shape("media live on different grids".into()));
        }
        let mut worst = T::zero();
        for (a, b) in [
            (self.stress_nodes()?, other.stress_nodes()?),
            (self.couple_nodes()?, other.couple_nodes()?),
        ] {
            for (x, y) in a.iter().zip(&b) {
                for (u, v) in x.iter().flatten().zip(y.iter().flatten()) {
                    worst = worst.max((*u - *v).abs());
                }
            }
        }
        Ok(worst)
    }
}

/// Body force `X_j`, body torque `L_j` and optional boundary normals.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadField<T> {
    pub force: VectorField<T>,
    pub torque: VectorField<T>,
    /// `(node index, unit normal)` pairs on boundary faces.
    pub normals: Vec<(usize, Vector<T>)>,
}

impl<T: Real> LoadField<T> {
    pub fn new(force: VectorField<T>, torque: VectorField<T>) -> Self {
        LoadField {
            force,
            torque,
            normals: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        LoadField::new(VectorField::zero(), VectorField::zero())
    }

    pub fn symbolic(force: Vector<ScalarExpr>, torque: Vector<ScalarExpr>) -> Self {
        LoadField::new(VectorField::Symbolic(force), VectorField::Symbolic(torque))
    }

    pub fn with_normals(mut self, normals: Vec<(usize, Vector<T>)>) -> Result<Self, Error> {
        for (_, n) in &normals {
            check_unit(n)?;
        }
        self.normals = normals;
        Ok(self)
    }
}

fn check_unit<T: Real>(n: &Vector<T>) -> Result<(), Error> {
    let norm = n.iter().fold(T::zero(), |a, v| a + *v * *v).sqrt();
    let norm = norm.to_f64().unwrap_or(f64::NAN);
    if (norm - 1.0).abs() > NORMAL_TOLERANCE || !norm.is_finite() {
        return Err(Error::NonUnitNormal(norm));
    }
    Ok(())
}

/// Per-node residual vectors with their symbolic form when every input was
/// symbolic.
#[derive(Clone, Debug)]
pub struct Residual<T> {
    pub values: Vec<Vector<T>>,
    pub symbolic: Option<Vector<ScalarExpr>>,
    /// The symbolic residual simplifies to exactly zero.
    pub proven_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualSummary {
    pub nodes: usize,
    pub max_norm: f64,
    pub mean_norm: f64,
    pub exact_derivatives: bool,
    pub proven_zero: bool,
}

impl<T: Real> Residual<T> {
    pub fn norms(&self) -> Vec<T> {
        self.values
            .iter()
            .map(|v| v.iter().fold(T::zero(), |a, x| a + *x * *x).sqrt())
            .collect()
    }

    pub fn max_norm(&self) -> T {
        self.norms().into_iter().fold(T::zero(), T::max)
    }

    pub fn mean_norm(&self) -> T {
        let n = self.values.len().max(1);
        self.norms().into_iter().fold(T::zero(), |a, b| a + b) / T::from_usize(n).unwrap()
    }

    fn summary(&self, exact: bool) -> ResidualSummary {
        ResidualSummary {
            nodes: self.values.len(),
            max_norm: self.max_norm().to_f64().unwrap_or(f64::NAN),
            mean_norm: self.mean_norm().to_f64().unwrap_or(f64::NAN),
            exact_derivatives: exact,
            proven_zero: self.proven_zero,
        }
    }
}

/// `Σ_i ∂_i t_ij` for each `j`: symbolic when the field is, else by finite differences.
fn divergence<T: Real>(
    t: &TensorField<T>,
    space: &SymbolicSpace,
    grid: &Grid<T>,
) -> Result<Divergence<T>, Error> {
    match t {
        TensorField::Symbolic(e) => {
            let div: Vector<ScalarExpr> = std::array::from_fn(|j| {
                (0..3).fold(ScalarExpr::zero(), |acc, i| {
                    acc.add_s(&e[i][j].diff(&space.coords[i]))
                })
            });
            Ok(Divergence::Symbolic(div))
        }
        TensorField::Nodes(v) => {
            let values = (0..grid.len())
                .map(|idx| {
                    std::array::from_fn(|j| {
                        (0..3).fold(T::zero(), |acc, i| {
                            acc + grid.derivative(|n| v[n][i][j], idx, i)
                        })
                    })
                })
                .collect();
            Ok(Divergence::Nodes(values))
        }
    }
}

enum Divergence<T> {
    Symbolic(Vector<ScalarExpr>),
    Nodes(Vec<Vector<T>>),
}

/// Combine `load − divergence − extra` node-wise, symbolically when possible.
fn residual<T: Real>(
    m: &MediumField<T>,
    load: &VectorField<T>,
    div: Divergence<T>,
    extra: Option<Vector<ScalarExpr>>,
    extra_nodes: Option<Vec<Vector<T>>>,
) -> Result<Residual<T>, Error> {
    let grid = &m.grid;
    if let (VectorField::Symbolic(l), Divergence::Symbolic(d)) = (load, &div) {
        if extra_nodes.is_none() {
            let exprs: Vector<ScalarExpr> = std::array::from_fn(|j| {
                let mut r = l[j].sub_s(&d[j]);
                if let Some(x) = &extra {
                    r = r.sub_s(&x[j]);
                }
                r.simplify()
            });
            let proven_zero = exprs.iter().all(ScalarExpr::is_structurally_zero);
            let values = m.space.vector_on(&exprs, grid)?;
            return Ok(Residual {
                values,
                symbolic: Some(exprs),
                proven_zero,
            });
        }
    }
    let l = load.nodes(&m.space, grid)?;
    let d = match div {
        Divergence::Symbolic(e) => m.space.vector_on(&e, grid)?,
        Divergence::Nodes(v) => v,
    };
    let x = match (extra, extra_nodes) {
        (_, Some(v)) => Some(v),
        (Some(e), None) => Some(m.space.vector_on(&e, grid)?),
        (None, None) => None,
    };
    let values = (0..grid.len())
        .map(|n| {
            std::array::from_fn(|j| l[n][j] - d[n][j] - x.as_ref().map_or(T::zero(), |x| x[n][j]))
        })
        .collect();
    Ok(Residual {
        values,
        symbolic: None,
        proven_zero: false,
    })
}

fn check_loads<T: Real>(m: &MediumField<T>, l: &LoadField<T>) -> Result<(), Error> {
    l.force.check(&m.grid, "body force")?;
    l.torque.check(&m.grid, "body torque")?;
    if let Some((idx, _)) = l.normals.iter().find(|(i, _)| *i >= m.grid.len()) {
        return Err(Error::Shape(format!(
            "normal given at node {idx} outside the grid"
        )));
    }
    Ok(())
}

/// `X_j − Σ_i ∂_i p_ij`.
pub fn force_residual<T: Real>(m: &MediumField<T>, l: &LoadField<T>) -> Result<Residual<T>, Error> {
    check_loads(m, l)?;
    let div = divergence(&m.p, &m.space, &m.grid)?;
    residual(m, &l.force, div, None, None)
}

/// `p_kl − p_lk` for cyclic `(j, k, l)`, i.e. twice the axial vector of the
/// antisymmetric part.
pub fn antisymmetric_axial<S: Clone>(p: &Tensor<S>, sub: impl Fn(&S, &S) -> S) -> Vector<S> {
    std::array::from_fn(|j| {
        let (k, l) = ((j + 1) % 3, (j + 2) % 3);
        sub(&p[k][l], &p[l][k])
    })
}

/// `L_j − Σ_i ∂_i q_ij − (p_kl − p_lk)` for cyclic `(j, k, l)`.
pub fn torque_residual<T: Real>(
    m: &MediumField<T>,
    l: &LoadField<T>,
) -> Result<Residual<T>, Error> {
    check_loads(m, l)?;
    let div = divergence(&m.q, &m.space, &m.grid)?;
    match &m.p {
        TensorField::Symbolic(p) => residual(
            m,
            &l.torque,
            div,
            Some(antisymmetric_axial(p, |a, b| a.sub_s(b))),
            None,
        ),
        TensorField::Nodes(p) => {
            let axial = p
                .iter()
                .map(|t| antisymmetric_axial(t, |a, b| *a - *b))
                .collect();
            residual(m, &l.torque, div, None, Some(axial))
        }
    }
}

/// The body torque that rotational equilibrium requires: `Σ_i ∂_i q_ij + p_kl − p_lk`.
pub fn required_torque<T: Real>(m: &MediumField<T>) -> Result<Residual<T>, Error> {
    let zero = LoadField::zero();
    let r = torque_residual(m, &zero)?;
    Ok(Residual {
        values: r.values.iter().map(|v| v.map(|x| -x)).collect(),
        symbolic: r.symbolic.map(|e| e.map(|x| x.neg_s().simplify())),
        proven_zero: r.proven_zero,
    })
}

/// Surface force `F_j = Σ_i p_ij n_i` and couple `J_j = Σ_i q_ij n_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Traction<T> {
    pub node: usize,
    pub force: Vector<T>,
    pub couple: Vector<T>,
}

fn contract<T: Real>(t: &Tensor<T>, n: &Vector<T>) -> Vector<T> {
    std::array::from_fn(|j| (0..3).fold(T::zero(), |a, i| a + t[i][j] * n[i]))
}

/// Tractions at every node for one unit normal.
pub fn traction<T: Real>(m: &MediumField<T>, n: Vector<T>) -> Result<Vec<Traction<T>>, Error> {
    check_unit(&n)?;
    let p = m.stress_nodes()?;
    let q = m.couple_nodes()?;
    Ok((0..m.grid.len())
        .map(|node| Traction {
            node,
            force: contract(&p[node], &n),
            couple: contract(&q[node], &n),
        })
        .collect())
}

/// Tractions at the boundary nodes listed in the load field.
pub fn boundary_tractions<T: Real>(
    m: &MediumField<T>,
    l: &LoadField<T>,
) -> Result<Vec<Traction<T>>, Error> {
    check_loads(m, l)?;
    let p = m.stress_nodes()?;
    let q = m.couple_nodes()?;
    Ok(l.normals
        .iter()
        .map(|(node, n)| Traction {
            node: *node,
            force: contract(&p[*node], n),
            couple: contract(&q[*node], n),
        })
        .collect())
}

/// Trapezoid integrals over the grid box: net traction through the six faces
/// (interior normals) and the body-force volume integral. For an equilibrium
/// field the two sum to zero up to `O(h²)`.
pub fn box_balance<T: Real>(
    m: &MediumField<T>,
    l: &LoadField<T>,
) -> Result<(Vector<T>, Vector<T>), Error> {
    check_loads(m, l)?;
    let g = &m.grid;
    let p = m.stress_nodes()?;
    let x = l.force.nodes(&m.space, g)?;
    let half = T::from_f64(0.5).unwrap();
    let weight = |ijk: [usize; 3], axes: &[usize]| {
        axes.iter().fold(T::one(), |w, a| {
            let edge = ijk[*a] == 0 || ijk[*a] == g.extents[*a] - 1;
            w * g.spacing[*a] * if edge { half } else { T::one() }
        })
    };
    let mut volume = [T::zero(); 3];
    for idx in 0..g.len() {
        let w = weight(g.ijk(idx), &[0, 1, 2]);
        for j in 0..3 {
            volume[j] = volume[j] + w * x[idx][j];
        }
    }
    let mut surface = [T::zero(); 3];
    for axis in 0..3 {
        let others: Vec<usize> = (0..3).filter(|a| *a != axis).collect();
        for (pos, sign) in [(0, T::one()), (g.extents[axis] - 1, -T::one())] {
            for idx in 0..g.len() {
                let ijk = g.ijk(idx);
                if ijk[axis] != pos {
                    continue;
                }
                let w = weight(ijk, &others);
                for j in 0..3 {
                    surface[j] = surface[j] + w * sign * p[idx][axis][j];
                }
            }
        }
    }
    Ok((surface, volume))
}

/// Outcome of the classical (symmetric-stress) limit check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalVerdict {
    /// Loads and couple stresses vanish, so the classical reduction applies.
    pub applicable: bool,
    pub passed: bool,
    /// `max |p_ij − p_ji|`.
    pub asymmetry: f64,
    /// `max |Σ_i ∂_i p_ij|`.
    pub divergence: f64,
    pub max_violation: f64,
    pub tolerance: f64,
    pub detail: String,
}

fn tensor_vanishes<T: Real>(t: &TensorField<T>, space: &SymbolicSpace, tol: f64) -> bool {
    match t {
        TensorField::Symbolic(e) => vanishes_all(e.iter().flatten(), &space.sampler()).holds(),
        TensorField::Nodes(v) => v
            .iter()
            .flatten()
            .flatten()
            .all(|x| x.abs().to_f64().unwrap_or(f64::NAN) <= tol),
    }
}

fn vector_vanishes<T: Real>(f: &VectorField<T>, space: &SymbolicSpace, tol: f64) -> bool {
    match f {
        VectorField::Symbolic(e) => vanishes_all(e.iter(), &space.sampler()).holds(),
        VectorField::Nodes(v) => v
            .iter()
            .flatten()
            .all(|x| x.abs().to_f64().unwrap_or(f64::NAN) <= tol),
    }
}

/// With `X ≡ 0`, `L ≡ 0` and `q ≡ 0`, equilibrium forces `p` to be
/// symmetric and divergence-free; reports the largest violation of either.
pub fn classical_limit_check<T: Real>(
    m: &MediumField<T>,
    l: &LoadField<T>,
    tolerance: f64,
) -> Result<ClassicalVerdict, Error> {
    check_loads(m, l)?;
    let applicable = vector_vanishes(&l.force, &m.space, tolerance)
        && vector_vanishes(&l.torque, &m.space, tolerance)
        && tensor_vanishes(&m.q, &m.space, tolerance);
    let p = m.stress_nodes()?;
    let asymmetry = p
        .iter()
        .flat_map(|t| (0..3).flat_map(move |i| (0..3).map(move |j| (t[i][j] - t[j][i]).abs())))
        .fold(T::zero(), T::max)
        .to_f64()
        .unwrap_or(f64::NAN);
    let div = match divergence(&m.p, &m.space, &m.grid)? {
        Divergence::Symbolic(e) => m.space.vector_on(&e, &m.grid)?,
        Divergence::Nodes(v) => v,
    };
    let divergence = div
        .iter()
        .flatten()
        .fold(T::zero(), |a, x| a.max(x.abs()))
        .to_f64()
        .unwrap_or(f64::NAN);
    let max_violation = asymmetry.max(divergence);
    let passed = applicable && max_violation <= tolerance;
    let detail = if !applicable {
        "loads or couple stresses are nonzero; the classical limit does not apply".to_string()
    } else if passed {
        "stress is symmetric and divergence-free".to_string()
    } else {
        format!("asymmetry {asymmetry:.3e}, divergence {divergence:.3e}")
    };
    Ok(ClassicalVerdict {
        applicable,
        passed,
        asymmetry,
        divergence,
        max_violation,
        tolerance,
        detail,
    })
}

/// JSON-ready summary of both residuals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosseratReport {
    pub force: ResidualSummary,
    pub torque: ResidualSummary,
    pub classical: ClassicalVerdict,
}

pub fn cosserat_report<T: Real>(
    m: &MediumField<T>,
    l: &LoadField<T>,
    tolerance: f64,
) -> Result<CosseratReport, Error> {
    let exact = matches!(m.p, TensorField::Symbolic(_));
    let exact_q = exact && matches!(m.q, TensorField::Symbolic(_));
    Ok(CosseratReport {
        force: force_residual(m, l)?.summary(exact),
        torque: torque_residual(m, l)?.summary(exact_q),
        classical: classical_limit_check(m, l, tolerance)?,
    })
}

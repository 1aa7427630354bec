//! Node-array CSV for media (`i,j,k,x1,x2,x3,p11..p33,q11..q33`) and residuals.

use std::fmt::Write as _;

use super::{Grid, MediumField, Residual, SymbolicSpace, Tensor, TensorField};
use crate::{Error, Real};

pub const MEDIUM_CSV_HEADER: &str =
    "i,j,k,x1,x2,x3,p11,p12,p13,p21,p22,p23,p31,p32,p33,q11,q12,q13,q21,q22,q23,q31,q32,q33";

fn num<T: Real>(v: T) -> String {
    format!("{:.12e}", v.to_f64().unwrap_or(f64::NAN))
}

pub fn write_medium_csv<T: Real>(m: &MediumField<T>) -> Result<String, Error> {
    let p = m.stress_nodes()?;
    let q = m.couple_nodes()?;
    let mut out = String::from(MEDIUM_CSV_HEADER);
    out.push('\n');
    for idx in 0..m.grid.len() {
        let [i, j, k] = m.grid.ijk(idx);
        let x = m.grid.node(idx);
        let _ = write!(out, "{i},{j},{k}");
        for v in x
            .iter()
            .chain(p[idx].iter().flatten())
            .chain(q[idx].iter().flatten())
        {
            out.push(',');
            out.push_str(&num(*v));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parse node arrays; the grid is recovered from the index and coordinate
/// columns and must be complete and regular.
pub fn read_medium_csv<T: Real>(text: &str) -> Result<MediumField<T>, Error> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Shape("empty medium CSV".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.join(",") != MEDIUM_CSV_HEADER {
        return Err(Error::Shape(format!(
            "medium CSV header must be `{MEDIUM_CSV_HEADER}`"
        )));
    }
    let mut rows: Vec<([usize; 3], [f64; 21])> = Vec::new();
    for (n, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 24 {
            return Err(Error::Shape(format!(
                "row {} has {} columns, expected 24",
                n + 2,
                cells.len()
            )));
        }
        let bad = |c: &str| Error::Shape(format!("row {}: cannot parse `{c}`", n + 2));
        let mut ijk = [0usize; 3];
        for (slot, c) in ijk.iter_mut().zip(&cells[..3]) {
            *slot = c.parse().map_err(|_| bad(c))?;
        }
        let mut vals = [0.0; 21];
        for (slot, c) in vals.iter_mut().zip(&cells[3..]) {
            *slot = c.parse::<f64>().map_err(|_| bad(c))?;
        }
        rows.push((ijk, vals));
    }
    if rows.is_empty() {
        return Err(Error::Shape("medium CSV has no nodes".into()));
    }
    let extents: [usize; 3] =
        std::array::from_fn(|a| rows.iter().map(|r| r.0[a]).max().unwrap() + 1);
    let total: usize = extents.iter().product();
    if rows.len() != total {
        return Err(Error::Shape(format!(
            "expected {total} nodes for extents {extents:?}, found {}",
            rows.len()
        )));
    }
    let by_index: std::collections::HashMap<[usize; 3], [f64; 21]> = rows.iter().cloned().collect();
    if by_index.len() != total {
        return Err(Error::Shape("duplicate node indices in medium CSV".into()));
    }
    let at = |ijk: [usize; 3]| by_index.get(&ijk).copied();
    let origin_row = at([0, 0, 0]).ok_or_else(|| Error::Shape("missing node (0,0,0)".into()))?;
    let mut spacing = [0.0; 3];
    for a in 0..3 {
        let mut ijk = [0; 3];
        ijk[a] = 1.min(extents[a] - 1);
        let r = at(ijk).ok_or_else(|| Error::Shape("missing neighbour of node (0,0,0)".into()))?;
        spacing[a] = r[a] - origin_row[a];
    }
    let t = |v: f64| T::from_f64(v).expect("finite value");
    let origin = [t(origin_row[0]), t(origin_row[1]), t(origin_row[2])];
    let grid = Grid::new(origin, spacing.map(t), extents)?;
    let mut p: Vec<Tensor<T>> = vec![[[T::zero(); 3]; 3]; total];
    let mut q = p.clone();
    for (ijk, vals) in &rows {
        let idx = grid.index(*ijk);
        let expected = grid.node(idx);
        for a in 0..3 {
            let tol = 1e-9 * (1.0 + vals[a].abs());
            if (expected[a].to_f64().unwrap() - vals[a]).abs() > tol {
                return Err(Error::Shape(format!(
                    "node {ijk:?} is off the regular grid"
                )));
            }
        }
        for m in 0..9 {
            p[idx][m / 3][m % 3] = t(vals[3 + m]);
            q[idx][m / 3][m % 3] = t(vals[12 + m]);
        }
    }
    MediumField::new(
        grid,
        SymbolicSpace::default(),
        TensorField::Nodes(p),
        TensorField::Nodes(q),
    )
}

/// `i,j,k,x1,x2,x3,r1,r2,r3,norm` for one residual field.
pub fn write_residual_csv<T: Real>(grid: &Grid<T>, r: &Residual<T>) -> String {
    let mut out = String::from("i,j,k,x1,x2,x3,r1,r2,r3,norm\n");
    let norms = r.norms();
    for (idx, v) in r.values.iter().enumerate() {
        let [i, j, k] = grid.ijk(idx);
        let _ = write!(out, "{i},{j},{k}");
        for x in grid
            .node(idx)
            .iter()
            .chain(v.iter())
            .chain(std::iter::once(&norms[idx]))
        {
            out.push(',');
            out.push_str(&num(*x));
        }
        out.push('\n');
    }
    out
}

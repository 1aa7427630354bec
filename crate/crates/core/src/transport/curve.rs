use serde::{Deserialize, Serialize};

use crate::cartan::FrameField;
use crate::expr::{parse, Compiled, ScalarExpr, Symbols};
use crate::{Error, Real};

/// A curve in the chart: either `x^μ(t)` symbolically on `[t0, t1]`, or a
/// polyline whose segments each take unit parameter length.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveSpec {
    Symbolic {
        param: String,
        t0: f64,
        t1: f64,
        #[serde(with = "expr_strings")]
        coords: Vec<ScalarExpr>,
    },
    Polyline {
        points: Vec<Vec<f64>>,
    },
}

mod expr_strings {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[ScalarExpr], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|e| e.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<ScalarExpr>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|t| parse(t, &Symbols::any()).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl CurveSpec {
    /// Parse coordinate expressions in `param` (plus frame parameters).
    pub fn symbolic(
        frame: &FrameField,
        param: &str,
        t0: f64,
        t1: f64,
        coords: &[&str],
    ) -> Result<Self, Error> {
        let mut names: Vec<String> = frame.params().keys().cloned().collect();
        names.push(param.to_string());
        let symbols = Symbols::new(names);
        let coords = coords
            .iter()
            .map(|c| parse(c, &symbols).map_err(Error::from))
            .collect::<Result<Vec<_>, _>>()?;
        CurveSpec::Symbolic {
            param: param.to_string(),
            t0,
            t1,
            coords,
        }
        .validated(frame.dim())
    }

    pub fn polyline(points: Vec<Vec<f64>>) -> Self {
        CurveSpec::Polyline { points }
    }

    /// Axis-aligned rectangle through `(a_lo, b_lo) → (a_hi, b_lo) → (a_hi, b_hi) → (a_lo, b_hi)`
    /// in coordinates `a`, `b`, others held at `rest`.
    pub fn rectangle(rest: &[f64], a: usize, b: usize, lo: (f64, f64), hi: (f64, f64)) -> Self {
        let at = |u: f64, v: f64| {
            let mut p = rest.to_vec();
            p[a] = u;
            p[b] = v;
            p
        };
        CurveSpec::Polyline {
            points: vec![
                at(lo.0, lo.1),
                at(hi.0, lo.1),
                at(hi.0, hi.1),
                at(lo.0, hi.1),
                at(lo.0, lo.1),
            ],
        }
    }

    fn validated(self, n: usize) -> Result<Self, Error> {
        let ok = match &self {
            CurveSpec::Symbolic { coords, t0, t1, .. } => {
                coords.len() == n && t0.is_finite() && t1.is_finite() && t1 > t0
            }
            CurveSpec::Polyline { points } => {
                points.len() >= 2 && points.iter().all(|p| p.len() == n)
            }
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::Shape(format!(
                "curve does not describe a path in {n} coordinates"
            )))
        }
    }

    /// Check the endpoints coincide within `tol` and snap them together.
    pub(crate) fn closed(&self, tol: f64, frame: &FrameField) -> Result<Self, Error> {
        let spec = self.clone().validated(frame.dim())?;
        let path = CompiledCurve::<f64>::new(&spec, frame)?;
        let first = path.eval(0, path.bounds(0).0)?.0;
        let last_seg = path.segments() - 1;
        let last = path.eval(last_seg, path.bounds(last_seg).1)?.0;
        let gap = first
            .iter()
            .zip(&last)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if gap > tol {
            return Err(Error::NotClosed(gap));
        }
        Ok(match spec {
            CurveSpec::Polyline { mut points } => {
                let p0 = points[0].clone();
                *points.last_mut().unwrap() = p0;
                CurveSpec::Polyline { points }
            }
            s => s,
        })
    }
}

/// Position and velocity along a curve, per segment.
pub(crate) enum CompiledCurve<T> {
    Symbolic {
        t0: T,
        t1: T,
        x: Vec<Compiled<T>>,
        dx: Vec<Compiled<T>>,
    },
    Polyline(Vec<Vec<T>>),
}

impl<T: Real> CompiledCurve<T> {
    pub fn new(spec: &CurveSpec, frame: &FrameField) -> Result<Self, Error> {
        let spec = spec.clone().validated(frame.dim())?;
        let cast = |v: f64| {
            T::from_f64(v).ok_or_else(|| Error::Invalid(format!("{v} is not representable")))
        };
        Ok(match spec {
            CurveSpec::Symbolic {
                param,
                t0,
                t1,
                coords,
            } => {
                let consts: Vec<(&str, T)> = frame
                    .params()
                    .iter()
                    .map(|(k, v)| Ok((k.as_str(), cast(*v)?)))
                    .collect::<Result<_, Error>>()?;
                let vars = [param.as_str()];
                let compile =
                    |e: &ScalarExpr| Compiled::new(e, &vars, &consts).map_err(Error::from);
                CompiledCurve::Symbolic {
                    t0: cast(t0)?,
                    t1: cast(t1)?,
                    x: coords.iter().map(compile).collect::<Result<_, _>>()?,
                    dx: coords
                        .iter()
                        .map(|e| compile(&e.diff(&param)))
                        .collect::<Result<_, _>>()?,
                }
            }
            CurveSpec::Polyline { points } => CompiledCurve::Polyline(
                points
                    .iter()
                    .map(|p| p.iter().map(|v| cast(*v)).collect())
                    .collect::<Result<_, _>>()?,
            ),
        })
    }

    pub fn segments(&self) -> usize {
        match self {
            CompiledCurve::Symbolic { .. } => 1,
            CompiledCurve::Polyline(p) => p.len() - 1,
        }
    }

    pub fn bounds(&self, _seg: usize) -> (T, T) {
        match self {
            CompiledCurve::Symbolic { t0, t1, .. } => (*t0, *t1),
            CompiledCurve::Polyline(_) => (T::zero(), T::one()),
        }
    }

    pub fn eval(&self, seg: usize, t: T) -> Result<(Vec<T>, Vec<T>), Error> {
        match self {
            CompiledCurve::Symbolic { x, dx, .. } => {
                let at = [t];
                let pos = x.iter().map(|c| c.eval(&at)).collect::<Result<_, _>>()?;
                let vel = dx.iter().map(|c| c.eval(&at)).collect::<Result<_, _>>()?;
                Ok((pos, vel))
            }
            CompiledCurve::Polyline(p) => {
                let (a, b) = (&p[seg], &p[seg + 1]);
                let vel: Vec<T> = a.iter().zip(b).map(|(u, v)| *v - *u).collect();
                let pos = a.iter().zip(&vel).map(|(u, d)| *u + t * *d).collect();
                Ok((pos, vel))
            }
        }
    }
}

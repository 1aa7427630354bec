//! JSON geometry files: coordinates, signature, parameters, coframe and
//! connection as expression strings, plus optional curves, loops, Cosserat
//! fields and experiment lists.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cartan::{levi_civita, CartanConnection, FrameField, Signature};
use crate::catalog::CatalogEntry;
use crate::cosserat::{Grid, LoadField, MediumField, SymbolicSpace, TensorField, VectorField};
use crate::expr::{parse, Env, ScalarExpr, Symbols};
use crate::exterior::Form;
use crate::transport::CurveSpec;
use crate::{Chart, Error};

/// Version written into every exported geometry file and report.
pub const SCHEMA_VERSION: u32 = 1;

/// A problem with a geometry file, naming the offending key.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecError {
    pub key: String,
    pub message: String,
}

impl SpecError {
    pub fn new(key: impl Into<String>, message: impl fmt::Display) -> Self {
        SpecError {
            key: key.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.key.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "`{}`: {}", self.key, self.message)
        }
    }
}

impl std::error::Error for SpecError {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordinateSpec {
    Name(String),
    Bounded { name: String, min: f64, max: f64 },
}

impl CoordinateSpec {
    pub fn name(&self) -> &str {
        match self {
            CoordinateSpec::Name(n) | CoordinateSpec::Bounded { name: n, .. } => n,
        }
    }
}

/// A number (default value), a constant expression substituted exactly, or
/// `null` for a free symbolic parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParameterValue {
    Number(f64),
    Expression(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConnectionSpec {
    /// Must be `"levi-civita"`.
    Named(String),
    /// `ω^i_j` as rows of coordinate-differential coefficients.
    Matrix(Vec<Vec<Vec<String>>>),
}

impl Default for ConnectionSpec {
    fn default() -> Self {
        ConnectionSpec::Named("levi-civita".into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NamedCurve {
    Symbolic {
        name: String,
        param: String,
        t0: f64,
        t1: f64,
        coords: Vec<String>,
    },
    Polyline {
        name: String,
        points: Vec<Vec<f64>>,
    },
}

impl NamedCurve {
    pub fn name(&self) -> &str {
        match self {
            NamedCurve::Symbolic { name, .. } | NamedCurve::Polyline { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    pub extents: [usize; 3],
}

/// Cosserat stress `p`, couple stress `q`, body force `X` and torque `L` as
/// expressions in the file's coordinates; omitted entries are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldsSpec {
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<[[String; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<[[String; 3]; 3]>,
    #[serde(default, rename = "X", skip_serializing_if = "Option::is_none")]
    pub x: Option<[String; 3]>,
    #[serde(default, rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub name: String,
    pub op: String,
    #[serde(default)]
    pub args: BTreeMap<String, serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub dimension: usize,
    pub coordinates: Vec<CoordinateSpec>,
    pub signature: Vec<i64>,
    #[serde(default)]
    pub parameters: BTreeMap<String, Option<ParameterValue>>,
    pub coframe: Vec<Vec<String>>,
    #[serde(default)]
    pub connection: ConnectionSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<NamedCurve>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub loops: Vec<NamedCurve>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<FieldsSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub experiments: Vec<Experiment>,
}

/// A geometry file turned into library objects.
#[derive(Clone, Debug)]
pub struct LoadedGeometry {
    pub name: String,
    pub frame: Arc<FrameField>,
    pub connection: CartanConnection,
    pub levi_civita: bool,
    pub curves: BTreeMap<String, CurveSpec>,
    pub loops: BTreeMap<String, CurveSpec>,
    pub medium: Option<(MediumField<f64>, LoadField<f64>)>,
    pub experiments: Vec<Experiment>,
}

fn json_error(e: serde_json::Error) -> SpecError {
    let msg = e.to_string();
    // serde reports `unknown field `x``/`missing field `x``; surface the key.
    let key = msg
        .split('`')
        .nth(1)
        .filter(|_| msg.contains("field"))
        .unwrap_or("")
        .to_string();
    SpecError::new(key, msg)
}

impl GeometrySpecFile {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_json(&self) -> String {
        crate::io::report::to_json(self).expect("geometry files serialize")
    }

    /// Export a frame and connection; `connection = None` writes `"levi-civita"`.
    pub fn from_geometry(
        name: &str,
        description: &str,
        frame: &FrameField,
        connection: Option<&CartanConnection>,
    ) -> Self {
        let chart = frame.chart();
        let n = frame.dim();
        let coordinates = (0..n)
            .map(|i| match chart.bounds(i) {
                Some((min, max)) => CoordinateSpec::Bounded {
                    name: chart.name(i).to_string(),
                    min,
                    max,
                },
                None => CoordinateSpec::Name(chart.name(i).to_string()),
            })
            .collect();
        let row = |f: &Form| {
            (0..n)
                .map(|mu| f.coeff(&[mu]).to_string())
                .collect::<Vec<_>>()
        };
        GeometrySpecFile {
            schema_version: Some(SCHEMA_VERSION),
            name: Some(name.to_string()),
            description: Some(description.to_string()).filter(|d| !d.is_empty()),
            dimension: n,
            coordinates,
            signature: frame
                .signature()
                .as_slice()
                .iter()
                .map(|s| i64::from(*s))
                .collect(),
            parameters: frame
                .params()
                .iter()
                .map(|(k, v)| (k.clone(), Some(ParameterValue::Number(*v))))
                .collect(),
            coframe: frame.coframe().iter().map(row).collect(),
            connection: match connection {
                None => ConnectionSpec::default(),
                Some(c) => ConnectionSpec::Matrix(
                    c.matrix()
                        .iter()
                        .map(|r| r.iter().map(row).collect())
                        .collect(),
                ),
            },
            curves: Vec::new(),
            loops: Vec::new(),
            fields: None,
            experiments: Vec::new(),
        }
    }

    pub fn from_entry(entry: &CatalogEntry) -> Self {
        GeometrySpecFile::from_geometry(
            &entry.name,
            &entry.description,
            &entry.frame,
            entry.connection.as_ref(),
        )
    }

    /// Validate and build. `overrides` replace or supply parameter values.
    pub fn load(&self, overrides: &BTreeMap<String, f64>) -> Result<LoadedGeometry, SpecError> {
        let n = self.dimension;
        if !(Chart::MIN_DIM..=Chart::MAX_DIM).contains(&n) {
            return Err(SpecError::new(
                "dimension",
                format!(
                    "must be {} to {}, found {n}",
                    Chart::MIN_DIM,
                    Chart::MAX_DIM
                ),
            ));
        }
        if self.coordinates.len() != n {
            return Err(SpecError::new(
                "coordinates",
                format!("{} names for dimension {n}", self.coordinates.len()),
            ));
        }
        if self.signature.len() != n {
            return Err(SpecError::new(
                "signature",
                format!("length {} differs from dimension {n}", self.signature.len()),
            ));
        }
        if let Some(v) = self.schema_version {
            if v > SCHEMA_VERSION {
                return Err(SpecError::new(
                    "schema_version",
                    format!("{v} is newer than supported {SCHEMA_VERSION}"),
                ));
            }
        }
        let signs = self
            .signature
            .iter()
            .map(|s| match s {
                1 => Ok(1i8),
                -1 => Ok(-1i8),
                other => Err(SpecError::new(
                    "signature",
                    format!("entries must be ±1, found {other}"),
                )),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let signature = Signature::new(signs).map_err(|e| SpecError::new("signature", e))?;

        let mut chart = Chart::new(self.coordinates.iter().map(CoordinateSpec::name))
            .map_err(|e| SpecError::new("coordinates", e))?;
        for c in &self.coordinates {
            if let CoordinateSpec::Bounded { name, min, max } = c {
                chart = chart
                    .with_bounds(name, *min, *max)
                    .map_err(|e| SpecError::new(format!("coordinates.{name}"), e))?;
            }
        }
        let chart = Arc::new(chart);
        let coord_names: Vec<String> = chart.names().to_vec();

        // Parameters: numbers are defaults, strings constant expressions, null free.
        let mut defaults: BTreeMap<String, f64> = BTreeMap::new();
        let mut exact: BTreeMap<String, ScalarExpr> = BTreeMap::new();
        let mut free: Vec<String> = Vec::new();
        for (name, value) in &self.parameters {
            let key = format!("parameters.{name}");
            if coord_names.contains(name) {
                return Err(SpecError::new(key, "parameter shadows a coordinate"));
            }
            match value {
                Some(ParameterValue::Number(v)) => {
                    defaults.insert(name.clone(), *v);
                }
                Some(ParameterValue::Expression(text)) => {
                    let e = parse(text, &Symbols::new(Vec::<String>::new()))
                        .map_err(|e| SpecError::new(&key, e))?;
                    let v = e
                        .evaluate(&Env::new())
                        .map_err(|e| SpecError::new(&key, e))?;
                    defaults.insert(name.clone(), v);
                    exact.insert(name.clone(), e);
                }
                None => free.push(name.clone()),
            }
        }
        for (name, v) in overrides {
            if !self.parameters.contains_key(name) {
                return Err(SpecError::new(
                    format!("parameters.{name}"),
                    "not declared in the file",
                ));
            }
            defaults.insert(name.clone(), *v);
            exact.remove(name);
        }
        let symbols = Symbols::new(coord_names.iter().chain(self.parameters.keys()).cloned());
        let expr = |text: &str, key: &str| -> Result<ScalarExpr, SpecError> {
            let e = parse(text, &symbols).map_err(|e| SpecError::new(key, e))?;
            Ok(if exact.is_empty() {
                e
            } else {
                e.substitute(&exact)
            })
        };

        if self.coframe.len() != n {
            return Err(SpecError::new(
                "coframe",
                format!("{} rows for dimension {n}", self.coframe.len()),
            ));
        }
        let mut coframe = Vec::with_capacity(n);
        for (i, row) in self.coframe.iter().enumerate() {
            let key = format!("coframe[{i}]");
            if row.len() != n {
                return Err(SpecError::new(
                    key,
                    format!("{} coefficients for dimension {n}", row.len()),
                ));
            }
            let coeffs = row
                .iter()
                .enumerate()
                .map(|(mu, t)| expr(t, &format!("coframe[{i}][{mu}]")))
                .collect::<Result<Vec<_>, _>>()?;
            coframe.push(Form::one_form(&chart, &coeffs).map_err(|e| SpecError::new(&key, e))?);
        }
        let frame = FrameField::new(chart.clone(), signature, coframe)
            .map_err(|e| SpecError::new("coframe", e))?;
        let frame = Arc::new(frame.with_params(defaults));

        let (connection, is_lc) = match &self.connection {
            ConnectionSpec::Named(s) if s == "levi-civita" => (levi_civita(&frame), true),
            ConnectionSpec::Named(s) => {
                return Err(SpecError::new(
                    "connection",
                    format!("expected \"levi-civita\" or a matrix, found \"{s}\""),
                ))
            }
            ConnectionSpec::Matrix(m) => {
                if m.len() != n || m.iter().any(|r| r.len() != n) {
                    return Err(SpecError::new("connection", format!("must be {n}×{n}")));
                }
                let mut omega = Vec::with_capacity(n);
                for (i, row) in m.iter().enumerate() {
                    let mut r = Vec::with_capacity(n);
                    for (j, coeffs) in row.iter().enumerate() {
                        let key = format!("connection[{i}][{j}]");
                        if coeffs.len() != n {
                            return Err(SpecError::new(
                                key,
                                format!("{} coefficients for dimension {n}", coeffs.len()),
                            ));
                        }
                        let c = coeffs
                            .iter()
                            .enumerate()
                            .map(|(mu, t)| expr(t, &format!("{key}[{mu}]")))
                            .collect::<Result<Vec<_>, _>>()?;
                        r.push(Form::one_form(&chart, &c).map_err(|e| SpecError::new(&key, e))?);
                    }
                    omega.push(r);
                }
                let c = CartanConnection::new(frame.clone(), omega)
                    .map_err(|e| SpecError::new("connection", e))?;
                (c, false)
            }
        };

        let curves = load_curves(&self.curves, &frame, "curves")?;
        let loops = load_curves(&self.loops, &frame, "loops")?;
        let medium = match &self.fields {
            None => None,
            Some(f) => Some(load_fields(f, &coord_names, &frame, &expr)?),
        };
        for (i, e) in self.experiments.iter().enumerate() {
            if e.name.is_empty() {
                return Err(SpecError::new(
                    format!("experiments[{i}].name"),
                    "must not be empty",
                ));
            }
        }
        Ok(LoadedGeometry {
            name: self.name.clone().unwrap_or_else(|| "geometry".into()),
            frame,
            connection,
            levi_civita: is_lc,
            curves,
            loops,
            medium,
            experiments: self.experiments.clone(),
        })
    }
}

fn load_curves(
    list: &[NamedCurve],
    frame: &FrameField,
    section: &str,
) -> Result<BTreeMap<String, CurveSpec>, SpecError> {
    let mut out = BTreeMap::new();
    for (i, c) in list.iter().enumerate() {
        let key = format!("{section}[{i}]");
        let spec = match c {
            NamedCurve::Symbolic {
                param,
                t0,
                t1,
                coords,
                ..
            } => {
                let refs: Vec<&str> = coords.iter().map(String::as_str).collect();
                CurveSpec::symbolic(frame, param, *t0, *t1, &refs)
                    .map_err(|e| SpecError::new(&key, e))?
            }
            NamedCurve::Polyline { points, .. } => {
                if points.len() < 2 || points.iter().any(|p| p.len() != frame.dim()) {
                    return Err(SpecError::new(
                        key,
                        "polyline needs at least 2 points of the file's dimension",
                    ));
                }
                CurveSpec::polyline(points.clone())
            }
        };
        if out.insert(c.name().to_string(), spec).is_some() {
            return Err(SpecError::new(
                key,
                format!("duplicate name `{}`", c.name()),
            ));
        }
    }
    Ok(out)
}

fn load_fields(
    f: &FieldsSpec,
    coords: &[String],
    frame: &FrameField,
    expr: &dyn Fn(&str, &str) -> Result<ScalarExpr, SpecError>,
) -> Result<(MediumField<f64>, LoadField<f64>), SpecError> {
    if coords.len() != 3 {
        return Err(SpecError::new(
            "fields",
            "Cosserat fields need a three-dimensional geometry",
        ));
    }
    let grid = Grid::new(f.grid.origin, f.grid.spacing, f.grid.extents)
        .map_err(|e| SpecError::new("fields.grid", e))?;
    let tensor =
        |t: &Option<[[String; 3]; 3]>, name: &str| -> Result<TensorField<f64>, SpecError> {
            match t {
                None => Ok(TensorField::zero()),
                Some(rows) => {
                    let mut out: [[ScalarExpr; 3]; 3] =
                        std::array::from_fn(|_| std::array::from_fn(|_| ScalarExpr::zero()));
                    for i in 0..3 {
                        for j in 0..3 {
                            out[i][j] = expr(&rows[i][j], &format!("fields.{name}[{i}][{j}]"))?;
                        }
                    }
                    Ok(TensorField::Symbolic(out))
                }
            }
        };
    let vector = |v: &Option<[String; 3]>, name: &str| -> Result<VectorField<f64>, SpecError> {
        match v {
            None => Ok(VectorField::zero()),
            Some(v) => {
                let mut out: [ScalarExpr; 3] = std::array::from_fn(|_| ScalarExpr::zero());
                for j in 0..3 {
                    out[j] = expr(&v[j], &format!("fields.{name}[{j}]"))?;
                }
                Ok(VectorField::Symbolic(out))
            }
        }
    };
    let space = SymbolicSpace {
        coords: [coords[0].clone(), coords[1].clone(), coords[2].clone()],
        params: frame.params().clone(),
    };
    let medium = MediumField::new(grid, space, tensor(&f.p, "p")?, tensor(&f.q, "q")?)
        .map_err(|e| SpecError::new("fields", e))?;
    let loads = LoadField::new(vector(&f.x, "X")?, vector(&f.l, "L")?);
    Ok((medium, loads))
}

impl From<Error> for SpecError {
    fn from(e: Error) -> Self {
        SpecError::new("", e)
    }
}

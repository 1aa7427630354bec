//! One function per subcommand. Each returns a report, optional CSV data and
//! a pass flag that selects the exit status.

use std::collections::BTreeMap;

use cartan_forge::cartan::vanishing::{forms_vanish, vanishes_all};
use cartan_forge::cartan::{
    first_bianchi, second_bianchi, CartanConnection, FlatnessReport, FrameField, Vanishing,
};
use cartan_forge::catalog::{all_builtins, builtin, corrupted_fixture, verify_ledger};
use cartan_forge::cosserat::{
    cosserat_report, force_residual, geometry_to_medium, required_torque, torque_residual,
    write_residual_csv,
};
use cartan_forge::einstein::{
    cartan_constraint, covariant_exterior_derivative, covector_exterior_derivative,
    dualized_einstein_tensor, einstein_form, einstein_tensor, generalized_einstein_form,
    hilbert_lagrangian, ricci_scalar, three_dim_einstein, vector_couple_invariant, volume_form,
    CouplePairing, EINSTEIN_FORM_SIGN, HILBERT_CONSTANT,
};
use cartan_forge::expr::{Sampler, DEFAULT_SEED};
use cartan_forge::io::{trajectory_csv, GeometrySpecFile, Report};
use cartan_forge::transport::{
    autoparallel, geodesic, loop_holonomy, parallel_transport, CurveSpec,
};
use cartan_forge::{parse, Error, Form, Symbols};
use serde_json::{json, Value};

use crate::input::{sanitize, Source};

/// Input problems exit with 2, computational ones with 1.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Compute(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Compute(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Compute(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Eval(_) | Error::OutOfDomain { .. } => Failure::Compute(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Compute(format!("report serialization failed: {e}"))
    }
}

pub struct Outcome {
    /// Output files are named `<stem>.json` and `<stem><suffix>.csv`.
    pub stem: String,
    pub report: Report,
    pub csv: Vec<(String, String)>,
    /// Additional files written verbatim, by name.
    pub files: Vec<(String, String)>,
    pub ok: bool,
}

impl Outcome {
    fn new(stem: String, report: Report) -> Self {
        Outcome {
            stem,
            report,
            csv: Vec::new(),
            files: Vec::new(),
            ok: true,
        }
    }
}

/// A named curve from the geometry file or literal polyline points.
#[derive(Clone, Debug)]
pub enum CurveArg {
    Named(String),
    Points(Vec<Vec<f64>>),
}

impl CurveArg {
    /// `x,y;x,y;...` is a polyline, anything else a name.
    pub fn parse(text: &str) -> Result<Self, Failure> {
        if !text.contains(';') {
            return Ok(CurveArg::Named(text.to_string()));
        }
        let points = text
            .split(';')
            .filter(|p| !p.trim().is_empty())
            .map(|p| crate::input::numbers(p, "curve"))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CurveArg::Points(points))
    }

    fn from_json(v: &Value) -> Result<Self, Failure> {
        match v {
            Value::String(s) => CurveArg::parse(s),
            Value::Array(_) => serde_json::from_value::<Vec<Vec<f64>>>(v.clone())
                .map(CurveArg::Points)
                .map_err(|e| Failure::Input(format!("curve points: {e}"))),
            _ => Err(Failure::Input(
                "a curve is a name or a list of points".into(),
            )),
        }
    }

    fn resolve(&self, src: &Source) -> Result<CurveSpec, Failure> {
        match self {
            CurveArg::Named(n) => src
                .geometry
                .curves
                .get(n)
                .or_else(|| src.geometry.loops.get(n))
                .cloned()
                .ok_or_else(|| Failure::Input(format!("no curve or loop named `{n}`"))),
            CurveArg::Points(p) => {
                let n = src.geometry.frame.dim();
                if p.len() < 2 || p.iter().any(|x| x.len() != n) {
                    return Err(Failure::Input(format!(
                        "a polyline needs at least two points with {n} coordinates"
                    )));
                }
                Ok(CurveSpec::polyline(p.clone()))
            }
        }
    }

    fn describe(&self) -> Value {
        match self {
            CurveArg::Named(n) => json!(n),
            CurveArg::Points(p) => json!(p),
        }
    }
}

/// Settings shared by every computation, from flags or experiment arguments.
#[derive(Clone, Debug)]
pub struct Options {
    pub step: f64,
    pub t_end: f64,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub curve: Option<CurveArg>,
    pub vector: Option<Vec<f64>>,
    pub x0: Option<Vec<f64>>,
    pub v0: Option<Vec<f64>>,
    pub alpha: String,
    pub beta: String,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            step: 1e-3,
            t_end: 1.0,
            tolerance: 1e-9,
            seed: None,
            curve: None,
            vector: None,
            x0: None,
            v0: None,
            alpha: "1".into(),
            beta: "0".into(),
        }
    }
}

impl Options {
    fn sampler(&self, frame: &FrameField) -> Sampler {
        frame.sampler(self.seed.unwrap_or(DEFAULT_SEED))
    }

    fn step(&self) -> Result<f64, Failure> {
        if self.step > 0.0 && self.step.is_finite() {
            Ok(self.step)
        } else {
            Err(Failure::Input(format!(
                "--step must be positive, found {}",
                self.step
            )))
        }
    }

    /// Override fields from an experiment's `args`.
    fn with_args(&self, args: &BTreeMap<String, Value>) -> Result<Options, Failure> {
        let mut o = self.clone();
        let num = |k: &str, v: &Value| {
            v.as_f64()
                .ok_or_else(|| Failure::Input(format!("argument `{k}` must be a number")))
        };
        let list = |k: &str, v: &Value| {
            serde_json::from_value::<Vec<f64>>(v.clone())
                .map_err(|_| Failure::Input(format!("argument `{k}` must be a list of numbers")))
        };
        let text = |k: &str, v: &Value| match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(Failure::Input(format!(
                "argument `{k}` must be an expression"
            ))),
        };
        for (k, v) in args {
            match k.as_str() {
                "step" => o.step = num(k, v)?,
                "t_end" => o.t_end = num(k, v)?,
                "tolerance" => o.tolerance = num(k, v)?,
                "curve" | "loop" => o.curve = Some(CurveArg::from_json(v)?),
                "vector" => o.vector = Some(list(k, v)?),
                "x0" => o.x0 = Some(list(k, v)?),
                "v0" => o.v0 = Some(list(k, v)?),
                "alpha" => o.alpha = text(k, v)?,
                "beta" => o.beta = text(k, v)?,
                "expect" => {}
                _ => return Err(Failure::Input(format!("unknown experiment argument `{k}`"))),
            }
        }
        Ok(o)
    }
}

fn geometry_summary(src: &Source) -> Value {
    let f = &src.geometry.frame;
    json!({
        "name": src.geometry.name,
        "dimension": f.dim(),
        "coordinates": f.chart().names(),
        "signature": f.signature().as_slice(),
        "parameters": f.params(),
        "levi_civita": src.geometry.levi_civita,
    })
}

fn report(src: &Source, command: &str) -> Report {
    let mut r = Report::new(command);
    r.fields.insert("geometry".into(), geometry_summary(src));
    r
}

fn vanishing(v: Vanishing) -> Value {
    let mut m = serde_json::to_value(v).expect("verdicts serialize");
    m["holds"] = json!(v.holds());
    m
}

/// A float that stays visible in JSON when it is not finite.
fn float(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(cartan_forge::io::report::float_text(v).trim_matches('"'))
    }
}

fn forms_json<'a>(forms: impl IntoIterator<Item = (String, &'a Form)>) -> Value {
    Value::Object(
        forms
            .into_iter()
            .filter(|(_, f)| !f.is_structurally_zero())
            .map(|(k, f)| (k, json!(f.to_string())))
            .collect(),
    )
}

pub fn check(src: &Source) -> Result<Outcome, Failure> {
    let g = &src.geometry;
    let mut r = report(src, "check");
    r.set("valid", &true)?;
    r.set("curves", &g.curves.keys().collect::<Vec<_>>())?;
    r.set("loops", &g.loops.keys().collect::<Vec<_>>())?;
    r.set("fields", &g.medium.is_some())?;
    r.set(
        "experiments",
        &g.experiments.iter().map(|e| &e.name).collect::<Vec<_>>(),
    )?;
    r.set("coframe_determinant", &g.frame.determinant().to_string())?;
    Ok(Outcome::new(format!("{}.check", src.stem), r))
}

pub fn curvature(src: &Source, o: &Options) -> Result<Outcome, Failure> {
    let c = &src.geometry.connection;
    let n = c.dim();
    let data = c.curvature_data();
    let sampler = o.sampler(c.frame());
    let mut r = report(src, "curvature");

    let conn = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (format!("omega^{}_{}", i + 1, j + 1), c.omega(i, j)));
    r.set("connection", &forms_json(conn))?;

    let mut torsion = serde_json::Map::new();
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                let e = data.torsion_component(i, j, k);
                if !e.is_structurally_zero() {
                    torsion.insert(
                        format!("T^{}_{{{}{}}}", i + 1, j + 1, k + 1),
                        json!(e.to_string()),
                    );
                }
            }
        }
    }
    let mut curv = serde_json::Map::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in k + 1..n {
                    let e = data.curvature_component(i, j, k, l);
                    if !e.is_structurally_zero() {
                        curv.insert(
                            format!("A^{}_{{{}{}{}}}", i + 1, j + 1, k + 1, l + 1),
                            json!(e.to_string()),
                        );
                    }
                }
            }
        }
    }
    r.set("torsion", &torsion)?;
    r.set("curvature", &curv)?;

    let flat = FlatnessReport {
        torsion: forms_vanish(&data.torsion, &sampler),
        curvature: forms_vanish(data.curvature.iter().flatten(), &sampler),
    };
    r.set(
        "flatness",
        &json!({
            "torsion": vanishing(flat.torsion),
            "curvature": vanishing(flat.curvature),
            "verdict": flat.verdict(),
            "rotational": flat.rotational(),
            "downgraded": flat.downgraded(),
        }),
    )?;
    r.set("scalar_curvature", &ricci_scalar(c).scalar.to_string())?;
    r.set(
        "bianchi",
        &json!({
            "first": vanishing(forms_vanish(&first_bianchi(c, &data), &sampler)),
            "second": vanishing(forms_vanish(second_bianchi(c, &data).iter().flatten(), &sampler)),
        }),
    )?;
    Ok(Outcome::new(format!("{}.curvature", src.stem), r))
}

fn quadratic(frame: &FrameField, v: &[f64]) -> f64 {
    v.iter()
        .enumerate()
        .map(|(i, x)| frame.signature().eps(i) as f64 * x * x)
        .sum()
}

pub fn transport(src: &Source, o: &Options) -> Result<Outcome, Failure> {
    let c = &src.geometry.connection;
    let arg = o
        .curve
        .as_ref()
        .ok_or_else(|| Failure::Input("transport needs a curve".into()))?;
    let curve = arg.resolve(src)?;
    let v0 = o
        .vector
        .clone()
        .ok_or_else(|| Failure::Input("transport needs a vector".into()))?;
    let v1 = parallel_transport(c, &curve, &v0, o.step()?)?;
    let (q0, q1) = (quadratic(c.frame(), &v0), quadratic(c.frame(), &v1));
    let mut r = report(src, "transport");
    r.set("curve", &arg.describe())?;
    r.set("step", &o.step)?;
    r.set("initial", &v0)?;
    r.set("final", &v1.iter().map(|x| float(*x)).collect::<Vec<_>>())?;
    r.set("norm_drift", &float((q1 - q0).abs()))?;
    Ok(Outcome::new(format!("{}.transport", src.stem), r))
}

pub fn trajectory(src: &Source, o: &Options, metric: bool) -> Result<Outcome, Failure> {
    let g = &src.geometry;
    let x0 =
        o.x0.clone()
            .ok_or_else(|| Failure::Input("missing initial point x0".into()))?;
    let v0 =
        o.v0.clone()
            .ok_or_else(|| Failure::Input("missing initial velocity v0".into()))?;
    if !(o.t_end > 0.0 && o.t_end.is_finite()) {
        return Err(Failure::Input(format!(
            "--t-end must be positive, found {}",
            o.t_end
        )));
    }
    let traj = if metric {
        geodesic(&g.frame, &x0, &v0, o.step()?, o.t_end)?
    } else {
        autoparallel(&g.connection, &x0, &v0, o.step()?, o.t_end)?
    };
    let energy = traj.energy(&g.frame);
    let e0 = energy.first().copied().unwrap_or(0.0);
    let drift = energy.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max);
    let name = if metric { "geodesic" } else { "autoparallel" };
    let mut r = report(src, name);
    r.set("step", &o.step)?;
    r.set("t_end", &o.t_end)?;
    r.set("x0", &x0)?;
    r.set("v0", &v0)?;
    r.set("samples", &traj.t.len())?;
    r.set("final_t", &traj.t.last().map(|t| float(*t)))?;
    r.set(
        "final_x",
        &traj
            .x
            .last()
            .map(|x| x.iter().map(|v| float(*v)).collect::<Vec<_>>()),
    )?;
    r.set(
        "final_v",
        &traj
            .v
            .last()
            .map(|x| x.iter().map(|v| float(*v)).collect::<Vec<_>>()),
    )?;
    r.set("energy", &float(e0))?;
    r.set("energy_drift", &float(drift))?;
    let mut out = Outcome::new(format!("{}.{name}", src.stem), r);
    out.csv.push((String::new(), trajectory_csv(&traj)));
    Ok(out)
}

pub fn holonomy(src: &Source, o: &Options) -> Result<Outcome, Failure> {
    let arg = o
        .curve
        .as_ref()
        .ok_or_else(|| Failure::Input("holonomy needs a loop".into()))?;
    let curve = arg.resolve(src)?;
    let h = loop_holonomy::<f64>(&src.geometry.connection, &curve, o.step()?)?;
    let mut r = report(src, "holonomy");
    r.set("loop", &arg.describe())?;
    r.set("step", &h.step)?;
    r.set("base", &h.base)?;
    r.set("rotation", &h.rotation)?;
    r.set("translation", &h.translation)?;
    r.set("area", &h.area)?;
    r.set("metricity_defect", &float(h.metricity_defect))?;
    Ok(Outcome::new(format!("{}.holonomy", src.stem), r))
}

fn expr_arg(text: &str, what: &str) -> Result<cartan_forge::ScalarExpr, Failure> {
    parse(text, &Symbols::any()).map_err(|e| Failure::Input(format!("{what}: {e}")))
}

pub fn einstein(src: &Source, o: &Options) -> Result<Outcome, Failure> {
    let c = &src.geometry.connection;
    let frame = c.frame();
    let s = o.sampler(frame);
    let data = einstein_tensor(
        c,
        &expr_arg(&o.alpha, "alpha")?,
        &expr_arg(&o.beta, "beta")?,
    );
    let mut r = report(src, "einstein");
    r.set("ricci", &data)?;
    r.set("asymmetry", &vanishing(vanishes_all(&data.asymmetry(), &s)))?;
    match c.dim() {
        4 => {
            let pi = einstein_form(c)?;
            let gen = generalized_einstein_form(c)?;
            r.set("einstein_form_sign", &EINSTEIN_FORM_SIGN)?;
            r.set("hilbert_constant", &HILBERT_CONSTANT)?;
            r.set(
                "vector_part",
                &forms_json((1..=4).map(|i| format!("Pi_{i}")).zip(&pi.vector)),
            )?;
            r.set(
                "bivector_part",
                &forms_json(
                    gen.bivector
                        .iter()
                        .map(|((i, j), f)| (format!("Pi^{{{}{}}}", i + 1, j + 1), f)),
                ),
            )?;
            r.set(
                "bivector_vanishes",
                &vanishing(forms_vanish(gen.bivector.values(), &s)),
            )?;
            let dual = dualized_einstein_tensor(c)?;
            let diff: Vec<Form> = pi
                .vector
                .iter()
                .zip(&dual)
                .map(|(a, b)| a.sub(b))
                .collect::<Result<_, _>>()?;
            r.set(
                "matches_dualized_tensor",
                &vanishing(forms_vanish(&diff, &s)),
            )?;
            let cons = covector_exterior_derivative(&pi.vector, c)?;
            r.set("conservation", &vanishing(forms_vanish(&cons, &s)))?;
            r.set(
                "cartan_constraint",
                &vanishing(forms_vanish(&cartan_constraint(c)?, &s)),
            )?;
            let lag = hilbert_lagrangian(c)?;
            let scalar = ricci_scalar(c).scalar;
            let expected = volume_form(frame).scale(&scalar.scale_i(HILBERT_CONSTANT));
            r.set("lagrangian", &lag.to_string())?;
            r.set(
                "lagrangian_matches",
                &vanishing(forms_vanish([&lag.sub(&expected)?], &s)),
            )?;
        }
        3 => {
            let t = three_dim_einstein(c)?;
            r.set(
                "stress_forms",
                &forms_json((1..=3).map(|i| format!("T^{i}")).zip(&t)),
            )?;
            let inv = vector_couple_invariant(c, CouplePairing::Cyclic)?;
            let d = covariant_exterior_derivative(&inv, c)?;
            r.set("equilibrium", &vanishing(forms_vanish(d.forms(), &s)))?;
            r.set("medium", &geometry_to_medium(c)?.report())?;
        }
        _ => {}
    }
    Ok(Outcome::new(format!("{}.einstein", src.stem), r))
}

pub fn cosserat(src: &Source, o: &Options) -> Result<Outcome, Failure> {
    let mut r = report(src, "cosserat");
    let stem = format!("{}.cosserat", src.stem);
    let Some((medium, loads)) = &src.geometry.medium else {
        if src.geometry.frame.dim() != 3 {
            return Err(Failure::Input(
                "cosserat needs a `fields` section or a three-dimensional geometry".into(),
            ));
        }
        let m = geometry_to_medium(&src.geometry.connection)?;
        r.set("medium", &m.report())?;
        return Ok(Outcome::new(stem, r));
    };
    let summary = cosserat_report(medium, loads, o.tolerance)?;
    let force = force_residual(medium, loads)?;
    let torque = torque_residual(medium, loads)?;
    let needed = required_torque(medium)?;
    r.set("tolerance", &o.tolerance)?;
    r.set("grid", &medium.grid)?;
    r.set("residuals", &summary)?;
    r.set(
        "balanced",
        &((force.proven_zero || force.max_norm() <= o.tolerance)
            && (torque.proven_zero || torque.max_norm() <= o.tolerance)),
    )?;
    r.set("required_torque_max", &float(needed.max_norm()))?;
    if let Some(sym) = &needed.symbolic {
        r.set(
            "required_torque",
            &sym.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        )?;
    }
    let mut out = Outcome::new(stem, r);
    out.csv
        .push((".force".into(), write_residual_csv(&medium.grid, &force)));
    out.csv
        .push((".torque".into(), write_residual_csv(&medium.grid, &torque)));
    Ok(out)
}

pub fn catalog_list() -> Result<Outcome, Failure> {
    let entries: Vec<Value> = all_builtins()
        .iter()
        .map(|e| {
            json!({
                "name": e.name,
                "description": e.description,
                "dimension": e.frame.dim(),
                "levi_civita": e.is_levi_civita(),
                "claims": e.ledger.len(),
            })
        })
        .collect();
    let mut r = Report::new("catalog list");
    r.set("entries", &entries)?;
    Ok(Outcome::new("catalog.list".into(), r))
}

pub fn catalog_export(name: &str) -> Result<Outcome, Failure> {
    let entry = builtin(name)?;
    let file_name = format!("{}.json", sanitize(name));
    let text = GeometrySpecFile::from_entry(&entry).to_json();
    let mut r = Report::new("catalog export");
    r.set("entry", &entry.name)?;
    r.set("file", &file_name)?;
    r.set("geometry", &serde_json::from_str::<Value>(&text)?)?;
    let mut out = Outcome::new(format!("{}.export", sanitize(name)), r);
    out.files.push((file_name, text));
    Ok(out)
}

pub fn catalog_verify(name: &str) -> Result<Outcome, Failure> {
    let corrupted = corrupted_fixture();
    let entries = match name {
        "all" => all_builtins(),
        n if n == corrupted.name => vec![corrupted],
        n => vec![builtin(n)?],
    };
    let reports: Vec<_> = entries.iter().map(verify_ledger).collect();
    let passed = reports.iter().all(|r| r.passed);
    let mut r = Report::new("catalog verify");
    r.set("passed", &passed)?;
    r.set("entries", &reports)?;
    let mut out = Outcome::new(format!("{}.verify", sanitize(name)), r);
    out.ok = passed;
    Ok(out)
}

/// Closed-form identities for the geometry, then each listed experiment.
pub fn verify(src: &Source, o: &Options) -> Result<Outcome, Failure> {
    let c = &src.geometry.connection;
    let frame = c.frame();
    let s = o.sampler(frame);
    let data = c.curvature_data();
    let dd: Vec<Form> = frame
        .coframe()
        .iter()
        .chain(c.matrix().iter().flatten())
        .map(|f| f.d().d())
        .collect();
    let metric = metricity(c);
    let checks = [
        ("d_squared", forms_vanish(&dd, &s)),
        ("metricity", forms_vanish(&metric, &s)),
        ("first_bianchi", forms_vanish(&first_bianchi(c, &data), &s)),
        (
            "second_bianchi",
            forms_vanish(second_bianchi(c, &data).iter().flatten(), &s),
        ),
    ];
    let mut ok = checks.iter().all(|(_, v)| v.holds());
    let identities: serde_json::Map<String, Value> = checks
        .iter()
        .map(|(k, v)| (k.to_string(), vanishing(*v)))
        .collect();

    let mut experiments = Vec::new();
    for e in &src.geometry.experiments {
        let (passed, body) = match run_experiment(src, o, &e.op, &e.args) {
            Ok((passed, value)) => (passed, value),
            Err(f) => (false, json!({ "error": f.message() })),
        };
        ok &= passed;
        experiments.push(json!({ "name": e.name, "op": e.op, "passed": passed, "report": body }));
    }
    let mut r = report(src, "verify");
    r.set("identities", &identities)?;
    r.set("experiments", &experiments)?;
    r.set("passed", &ok)?;
    let mut out = Outcome::new(format!("{}.verify", src.stem), r);
    out.ok = ok;
    Ok(out)
}

/// `ω_ij + ω_ji` with `ω_ij = ε_i ω^i_j`.
fn metricity(c: &CartanConnection) -> Vec<Form> {
    let n = c.dim();
    (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| c.lowered(i, j).add(&c.lowered(j, i)).expect("same chart"))
        .collect()
}

/// Run one experiment; `expect` in its arguments names the verdict to check.
fn run_experiment(
    src: &Source,
    o: &Options,
    op: &str,
    args: &BTreeMap<String, Value>,
) -> Result<(bool, Value), Failure> {
    let opts = o.with_args(args)?;
    let outcome = match op {
        "check" => check(src)?,
        "curvature" => curvature(src, &opts)?,
        "transport" => transport(src, &opts)?,
        "geodesic" => trajectory(src, &opts, true)?,
        "autoparallel" => trajectory(src, &opts, false)?,
        "holonomy" => holonomy(src, &opts)?,
        "einstein" => einstein(src, &opts)?,
        "cosserat" => cosserat(src, &opts)?,
        other => return Err(Failure::Input(format!("unknown experiment op `{other}`"))),
    };
    let value = outcome.report.to_value();
    let holds = |path: &[&str]| {
        path.iter()
            .try_fold(&value, |v, k| v.get(*k))
            .and_then(Value::as_bool)
            .unwrap_or(false)
    };
    let passed = match args.get("expect").and_then(Value::as_str) {
        None => true,
        Some("flat") => value["flatness"]["verdict"] == "proven_flat",
        Some("rotationally_flat") => value["flatness"]["rotational"] == "proven_flat",
        Some("torsion_free") => holds(&["flatness", "torsion", "holds"]),
        Some("curved") => value["flatness"]["rotational"] == "not_flat",
        Some("balanced") => holds(&["balanced"]),
        Some("conserved") => holds(&["conservation", "holds"]) || holds(&["equilibrium", "holds"]),
        Some(other) => return Err(Failure::Input(format!("unknown expectation `{other}`"))),
    };
    Ok((passed, value))
}

use std::collections::{BTreeMap, BTreeSet};

use cartan_forge::cartan::vanishing::vanishes_all;
use cartan_forge::catalog::{all_builtins, builtin};
use cartan_forge::cosserat::force_residual;
use cartan_forge::expr::{Sampler, DEFAULT_SEED};
use cartan_forge::exterior::{mask_indices, Form};
use cartan_forge::io::report::float_text;
use cartan_forge::io::{
    to_json, trajectory_csv, write_atomic, GeometrySpecFile, Report, SpecError,
};
use cartan_forge::transport::geodesic;

fn load(text: &str) -> Result<cartan_forge::io::LoadedGeometry, SpecError> {
    GeometrySpecFile::from_json(text)?.load(&BTreeMap::new())
}

fn same_form(a: &Form, b: &Form, sampler: &Sampler) -> bool {
    let masks: BTreeSet<_> = a.terms().keys().chain(b.terms().keys()).copied().collect();
    let diffs: Vec<_> = masks
        .into_iter()
        .map(|m| {
            let idx = mask_indices(m);
            a.coeff(&idx).sub_s(&b.coeff(&idx))
        })
        .collect();
    vanishes_all(&diffs, sampler).holds()
}

#[test]
fn builtins_export_and_reload_identically() {
    for entry in all_builtins() {
        let file = GeometrySpecFile::from_entry(&entry);
        let text = file.to_json();
        let loaded = load(&text).unwrap_or_else(|e| panic!("{}: {e}", entry.name));
        assert_eq!(loaded.levi_civita, entry.is_levi_civita(), "{}", entry.name);

        let again = GeometrySpecFile::from_geometry(
            &entry.name,
            &entry.description,
            &loaded.frame,
            (!loaded.levi_civita).then_some(&loaded.connection),
        );
        assert_eq!(
            again.to_json(),
            text,
            "{} export is not a fixed point",
            entry.name
        );

        let sampler = entry.frame.sampler(DEFAULT_SEED);
        let original = entry.connection();
        for (a, b) in original.torsion().iter().zip(loaded.connection.torsion()) {
            assert!(same_form(a, &b, &sampler), "{} torsion", entry.name);
        }
        for (ra, rb) in original
            .curvature()
            .iter()
            .zip(loaded.connection.curvature())
        {
            for (a, b) in ra.iter().zip(rb) {
                assert!(same_form(a, &b, &sampler), "{} curvature", entry.name);
            }
        }
    }
}

const POLAR: &str = r#"{
  "dimension": 2,
  "coordinates": [{"name": "r", "min": 0.5, "max": 3}, "th"],
  "signature": [1, 1],
  "parameters": {"a": 2, "b": "1/3", "c": null},
  "coframe": [["a", "0"], ["0", "r"]],
  "connection": "levi-civita",
  "curves": [{"name": "arc", "kind": "symbolic", "param": "t", "t0": 0, "t1": 1, "coords": ["1", "t"]}],
  "loops": [{"name": "box", "kind": "polyline", "points": [[1, 0], [2, 0], [2, 1], [1, 1], [1, 0]]}],
  "experiments": [{"name": "h", "op": "holonomy", "args": {"loop": "box"}}]
}"#;

#[test]
fn loads_parameters_curves_and_experiments() {
    let g = load(POLAR).unwrap();
    assert_eq!(g.frame.params().get("a"), Some(&2.0));
    assert!((g.frame.params()["b"] - 1.0 / 3.0).abs() < 1e-15);
    assert!(!g.frame.params().contains_key("c"));
    assert!(g.curves.contains_key("arc"));
    assert!(g.loops.contains_key("box"));
    assert_eq!(g.experiments[0].op, "holonomy");

    let mut over = BTreeMap::new();
    over.insert("a".to_string(), 5.0);
    let g = GeometrySpecFile::from_json(POLAR)
        .unwrap()
        .load(&over)
        .unwrap();
    assert_eq!(g.frame.params()["a"], 5.0);
    over.insert("zz".to_string(), 1.0);
    let err = GeometrySpecFile::from_json(POLAR)
        .unwrap()
        .load(&over)
        .unwrap_err();
    assert_eq!(err.key, "parameters.zz");
}

#[test]
fn constant_expressions_are_substituted_exactly() {
    let text = POLAR.replace(r#"["a", "0"]"#, r#"["b", "0"]"#);
    let g = load(&text).unwrap();
    assert_eq!(g.frame.coframe()[0].coeff(&[0]).to_string(), "1/3");
}

#[test]
fn errors_name_the_offending_key() {
    let cases = [
        (
            POLAR.replace("\"dimension\": 2", "\"dimension\": 3"),
            "coordinates",
        ),
        (POLAR.replace("[1, 1]", "[1, 2]"), "signature"),
        (
            POLAR.replace(r#"["0", "r"]"#, r#"["0", "r +"]"#),
            "coframe[1][1]",
        ),
        (
            POLAR.replace(r#"["0", "r"]"#, r#"["0", "q"]"#),
            "coframe[1][1]",
        ),
        (POLAR.replace(r#"["0", "r"]"#, r#"["0", "0"]"#), "coframe"),
        (
            POLAR.replace("\"levi-civita\"", "\"weitzenbock\""),
            "connection",
        ),
        (
            POLAR.replace("\"b\": \"1/3\"", "\"b\": \"th\""),
            "parameters.b",
        ),
        (POLAR.replace("\"th\"]", "\"a\"]"), "parameters.a"),
        (
            POLAR.replace("[2, 1], [1, 1]", "[2, 1, 0], [1, 1]"),
            "loops[0]",
        ),
    ];
    for (text, key) in cases {
        let err = load(&text).expect_err(key);
        assert_eq!(err.key, key, "{err}");
    }
    let err =
        GeometrySpecFile::from_json(&POLAR.replace("\"dimension\"", "\"dimensions\"")).unwrap_err();
    assert!(err.message.contains("unknown field"), "{err}");
    assert_eq!(err.key, "dimensions");
}

#[test]
fn non_metric_connection_matrix_is_rejected() {
    let text = POLAR.replace(
        "\"levi-civita\"",
        r#"[[["0", "0"], ["0", "1"]], [["0", "0"], ["0", "0"]]]"#,
    );
    let err = load(&text).unwrap_err();
    assert_eq!(err.key, "connection");
    assert!(err.message.contains("metric"), "{err}");
}

#[test]
fn fields_section_builds_a_medium() {
    let text = r#"{
      "dimension": 3,
      "coordinates": ["x1", "x2", "x3"],
      "signature": [1, 1, 1],
      "parameters": {"k": 2},
      "coframe": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
      "fields": {
        "grid": {"origin": [0, 0, 0], "spacing": [0.25, 0.25, 0.25], "extents": [5, 5, 5]},
        "p": [["k*x1", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]],
        "X": ["k", "0", "0"]
      }
    }"#;
    let g = load(text).unwrap();
    let (medium, loads) = g.medium.unwrap();
    let r = force_residual(&medium, &loads).unwrap();
    assert!(r.proven_zero);

    let flat2 = POLAR.replace("\"experiments\"", r#""fields": {"grid": {"origin": [0,0,0], "spacing": [1,1,1], "extents": [3,3,3]}}, "experiments""#);
    assert_eq!(load(&flat2).unwrap_err().key, "fields");
}

#[test]
fn json_output_is_canonical() {
    let mut a = Report::new("check");
    a.set("zeta", &1.5f64).unwrap();
    a.set("alpha", &vec![f64::NAN, f64::INFINITY, -0.0, 3.0])
        .unwrap();
    a.set("count", &7u32).unwrap();
    let text = a.to_json();
    let alpha = text.find("\"alpha\"").unwrap();
    let zeta = text.find("\"zeta\"").unwrap();
    assert!(alpha < zeta);
    assert!(text.contains("\"schema_version\": 1"));
    assert!(text.contains("\"count\": 7"));
    assert!(text.contains("1.500000000000e0"));
    // serde_json maps non-finite floats to null before we see them.
    assert!(text.contains("null"));
    assert_eq!(float_text(f64::NAN), "\"NaN\"");
    assert_eq!(float_text(f64::NEG_INFINITY), "\"-inf\"");
    assert_eq!(text, a.to_json());

    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(to_json(&value).unwrap(), text);
}

#[test]
fn atomic_write_replaces_contents() {
    let dir = std::env::temp_dir().join(format!("cartan-forge-io-{}", std::process::id()));
    let path = dir.join("nested").join("out.json");
    write_atomic(&path, "one").unwrap();
    write_atomic(&path, "two").unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
    let leftovers = std::fs::read_dir(path.parent().unwrap()).unwrap().count();
    assert_eq!(leftovers, 1);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn trajectory_csv_has_positions_and_velocities() {
    let entry = builtin("sphere2").unwrap();
    let traj = geodesic(&entry.frame, &[1.0, 0.0], &[0.0, 1.0], 0.01, 0.1).unwrap();
    let csv = trajectory_csv(&traj);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x1,x2,v1,v2"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), traj.t.len());
    assert!(rows.iter().all(|r| r.split(',').count() == 5));
}

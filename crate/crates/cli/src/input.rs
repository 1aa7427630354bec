//! Resolving geometry arguments and writing report files.

use std::collections::BTreeMap;
use std::path::Path;

use cartan_forge::catalog::builtin;
use cartan_forge::io::{write_atomic, GeometrySpecFile, LoadedGeometry};

use crate::commands::{Failure, Outcome};

/// A geometry argument resolved to a loaded geometry and a file-name stem.
pub struct Source {
    pub stem: String,
    pub geometry: LoadedGeometry,
}

pub fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect::<String>()
        .trim_matches('_')
        .to_string()
}

/// A path to a geometry file, else a catalog name such as `sphere2(2)`.
/// Catalog entries go through their exported file so parameter overrides
/// apply the same way to both.
pub fn resolve(arg: &str, params: &BTreeMap<String, f64>) -> Result<Source, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {arg}: {e}")))?;
        let file = GeometrySpecFile::from_json(&text)
            .map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
        let geometry = file
            .load(params)
            .map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        return Ok(Source {
            stem: sanitize(&stem),
            geometry,
        });
    }
    let entry = builtin(arg).map_err(|_| {
        Failure::Input(format!(
            "`{arg}` is neither a readable file nor a catalog entry"
        ))
    })?;
    let geometry = GeometrySpecFile::from_entry(&entry)
        .load(params)
        .map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
    Ok(Source {
        stem: sanitize(arg),
        geometry,
    })
}

/// Comma-separated finite numbers.
pub fn numbers(text: &str, flag: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    Failure::Input(format!("{flag}: `{}` is not a finite number", s.trim()))
                })
        })
        .collect()
}

/// Print the JSON report and write it, plus CSVs when requested, atomically.
pub fn emit(outcome: &Outcome, out: &Path, csv: bool) -> std::io::Result<()> {
    let json = outcome.report.to_json();
    print!("{json}");
    write_atomic(&out.join(format!("{}.json", outcome.stem)), &json)?;
    for (name, contents) in &outcome.files {
        write_atomic(&out.join(name), contents)?;
    }
    if csv {
        for (suffix, contents) in &outcome.csv {
            write_atomic(&out.join(format!("{}{suffix}.csv", outcome.stem)), contents)?;
        }
    }
    Ok(())
}

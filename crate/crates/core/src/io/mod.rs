//! Geometry files, deterministic JSON reports and trajectory CSV.

pub mod report;
pub mod spec;

pub use report::{to_json, trajectory_csv, write_atomic, Report};
pub use spec::{
    ConnectionSpec, CoordinateSpec, Experiment, FieldsSpec, GeometrySpecFile, GridSpec,
    LoadedGeometry, NamedCurve, ParameterValue, SpecError, SCHEMA_VERSION,
};

//! Frame fields, metric connections and Cartan's structure equations.

mod connection;
mod frame;
pub mod vanishing;

pub use connection::{
    bianchi_report, contorsion_split, curvature, first_bianchi, flatness, is_flat, levi_civita,
    normality_check, second_bianchi, torsion, torsion_from_contorsion, BianchiReport,
    CartanConnection, CurvatureData, Flatness, FlatnessReport, PlaneNormality,
};
pub use frame::{metric_from_coframe, FrameField, Signature};
pub use vanishing::Vanishing;

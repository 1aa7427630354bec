//! Riemann-Cartan geometry in the moving-frame formalism.
//!
//! Coframes and connection forms are symbolic ([`expr::ScalarExpr`]
//! coefficients); torsion and curvature follow from the structure equations,
//! and the numerical side (transport, holonomy, geodesics, Cosserat grids) is
//! generic over [`Real`].

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

pub mod cartan;
pub mod catalog;
pub mod cosserat;
pub mod einstein;
pub mod expr;
pub mod exterior;
pub mod io;
pub mod transport;

mod chart;
mod error;

pub use cartan::{CartanConnection, FrameField, Signature};
pub use chart::Chart;
pub use error::Error;
pub use expr::{parse, ScalarExpr, Symbols, ZeroTest};
pub use exterior::{Form, MultiVector};

/// Floating-point scalar used by the numerical routines.
pub trait Real:
    Float + FromPrimitive + FloatConst + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Exact computation of Masur-Veech volumes of moduli spaces of quadratic
//! differentials, Siegel-Veech constants, multicurve frequencies and the
//! statistics of square-tiled surfaces, all by summing over stable graphs.

pub mod arith;
pub mod asymptotics;
pub mod correlators;
pub mod error;
pub mod frequencies;
pub mod graphs;
pub mod poly;
pub mod siegel_veech;
pub mod statistics;
pub mod volumes;

pub use arith::{DecimalValue, PiMonomial, Rational, ZetaExpr, ZetaQuotient};
pub use correlators::CorrelatorTable;
pub use error::{Error, Result};
pub use graphs::{StableGraph, Vertex};
pub use poly::CylPolynomial;
pub use siegel_veech::{CareaMethod, LyapunovSums};
pub use statistics::{Expectation, ExpectationQuery};
pub use volumes::{LegMode, VolumeReport};

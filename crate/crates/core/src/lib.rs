//! Set systems on the Boolean cube: shattering, strong shattering and
//! shattering-extremal (SE) systems, with the operators that relate them and
//! their geometric and graph-theoretic sources.

mod bits;
pub mod error;
pub mod family;
pub mod geometry;
pub mod graphs;
pub mod operators;
pub mod se;
pub mod shattering;
pub mod sweep;
pub mod system;

pub use error::{Error, ParseErrorKind, Result};
pub use family::Family;
pub use operators::{apply_sequence, Op, OpSequence};
pub use se::{is_se, se_report, SeMethod, SeReport};
pub use shattering::{sstr_family, str_family, Sandwich};
pub use sweep::{Suite, SweepOutcome};
pub use system::{Cube, DimSet, System};

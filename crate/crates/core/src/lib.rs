//! Exact computations for ellipsoid embeddings into Hirzebruch surfaces:
//! exceptional classes and their obstructions, ECH capacities, Cremona
//! reduction, and the families of pre-staircases with their accumulation
//! points and blocking intervals.

pub mod cfweights;
pub mod classes;
pub mod cremona;
pub mod echcap;
pub mod error;
pub mod exactnum;
pub mod poly;
pub mod staircase;

pub use cfweights::{ContinuedFraction, WeightExpansion};
pub use classes::{ExClass, QuasiPerfectClass, Side};
pub use cremona::{Reduction, ReductionState, Verdict};
pub use echcap::{B15Report, CapacityBound, CapacityTable, PathVertex};
pub use error::{Error, Result};
pub use exactnum::{Rational, Surd};
pub use staircase::{
    BlockingInterval, Branch, Direction, Ending, Family, RealValue, StairFamilySpec, Symmetry,
};

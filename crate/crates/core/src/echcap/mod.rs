//! ECH capacities of ellipsoids and of `X_b`, the capacity lower bound for
//! the embedding function, and the counting functions behind the `b = 1/5`
//! analysis.

pub mod counting;
pub mod ellipsoid;
pub mod embedding;
pub mod paths;

pub use counting::{
    cap_count, cap_quasipolynomial, ehr_quasipolynomial, ehrhart_count, slice_counts, verify_b15,
    B15Report, SliceCounts,
};
pub use ellipsoid::{ellipsoid_cap_direct, ellipsoid_caps};
pub use embedding::{c_lower, c_lower_curve, min_obstructing_index, CapacityBound};
pub use paths::{
    path_table, toric_cap_direct, toric_caps, toric_caps_many, toric_caps_with_table,
    CapacityTable, PathTable, PathVertex,
};

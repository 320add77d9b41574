//! Accumulation points, blocking intervals, pre-staircase families and the
//! symmetries between them.

pub mod acc;
pub mod blocking;
pub mod family;
pub mod symmetry;

pub use acc::{
    acc, acc_coefficient, acc_inv, acc_inv_surd, acc_minimum, b_from_center, is_acc_point,
    AccValue, Branch, CenterSign, RealValue,
};
pub use blocking::{
    blocking_family_closed_form, blocking_family_closed_form_u, blocking_interval_generic,
    blocks_b, BlockingInterval,
};
pub use family::{
    blocking_class, dmin1_check, prestaircase_extension, prestaircase_generate,
    prestaircase_limits, recursion_holds, staircase_one_third, Direction, DminCheck, Ending,
    ExtensionRow, Family, PrestairLimits, StairFamilySpec,
};
pub use symmetry::{symmetry_apply, Symmetry};

// Negated comparisons are used on purpose so that NaN fails the guard.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli_io;
pub mod error;
pub mod families;
pub mod lorentz;
pub mod numeric;
pub mod special;
pub mod surface;
pub mod verifiers;

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod devices;
pub mod energy;
pub mod mechanism;
pub mod numerics;
pub mod signals;

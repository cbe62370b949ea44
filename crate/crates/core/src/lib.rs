#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod mathcore;
pub mod sampling;
pub mod theory;

pub use error::{Error, Result};

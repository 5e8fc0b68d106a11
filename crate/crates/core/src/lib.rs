//! Pre-flight analyses for small spacecraft: orbital environment, attitude,
//! single-node thermal balance, power budget, random-vibration processing and
//! beam-chain structural checks.
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod attitude;
pub mod consts;
pub mod error;
pub mod model;
pub mod orbit;
pub mod power;
pub mod scenario;
pub mod structural;
pub mod thermal;
pub mod vib;

pub use error::{Error, Result};

/// Three-vector in a body or inertial frame.
pub type Vec3 = nalgebra::Vector3<f64>;

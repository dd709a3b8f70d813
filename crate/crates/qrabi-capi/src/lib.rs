//! C ABI for the qrabi solver suite.

pub mod ffi;

pub use ffi::*;

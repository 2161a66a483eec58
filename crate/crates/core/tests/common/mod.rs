//! Checks shared by the kernel, property and acceptance targets. Each returns
//! a measured error so callers can either assert on it or report it.

#![allow(dead_code)]

pub mod kernels;
pub mod props;

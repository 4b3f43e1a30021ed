//! Kraus-operator models of noisy qubit channels and minimum-error discrimination of
//! one classical bit sent through one or two uses of a channel.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and worker
//! pools live in the `qdiscrim` crate.
//!
//! Module map:
//!
//! - [`matrix`]: dense complex matrices, Kronecker products, Hermitian Jacobi
//!   eigendecomposition, trace norm.
//! - [`channels`]: Kraus channels, density matrices, the built-in channel families.
//! - [`discrimination`]: POVM error, Helstrom bound, Bell-basis algebra and the
//!   closed-form two-Pauli results.
//! - [`optimizer`]: direct search and seesaw optimization of the input pair.
//! - [`info`]: mutual information and restricted capacity search.
//! - [`montecarlo`]: sampled Kraus unravelings and empirical error rates.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod channels;
pub mod discrimination;
mod error;
pub mod info;
pub mod matrix;
pub mod montecarlo;
pub mod nelder_mead;
pub mod optimizer;
pub mod random;

pub use error::{Error, Result};
pub use num_complex::Complex64;

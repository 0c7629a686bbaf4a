//! The book chapters under `book/src/`, included here so that every code
//! snippet in the guide is compiled and run by `cargo test --doc`.

#[doc = include_str!("../../../book/src/potentials.md")]
pub mod potentials {}

#[doc = include_str!("../../../book/src/propagation.md")]
pub mod propagation {}

#[doc = include_str!("../../../book/src/quantization-rule.md")]
pub mod quantization_rule {}

#[doc = include_str!("../../../book/src/special-functions.md")]
pub mod special_functions {}

#[doc = include_str!("../../../book/src/solvers.md")]
pub mod solvers {}

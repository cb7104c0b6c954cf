//! Build, store, verify and benchmark tables of the prolate spheroidal
//! eigenvalues `χ_n(γ)`. The numerical work lives in `chitbl-core`.

pub mod bench;
pub mod build;
pub mod cli;
pub mod error;
pub mod pool;
pub mod store;
pub mod verify;

pub use chitbl_core as core;
pub use error::CliError;

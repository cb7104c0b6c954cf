//! Constant-time evaluation of the Sturm-Liouville eigenvalues `χ_n(γ)` of the
//! reduced prolate spheroidal wave equation of order zero,
//!
//! ```text
//! (1 - z²) y'' - 2z y' + (χ - γ² z²) y = 0,
//! ```
//!
//! together with everything needed to build the lookup table:
//!
//! * [`chebkit`]: Chebyshev extrema grids, coefficient transforms and adaptive
//!   piecewise expansions.
//! * [`legendre_eig`]: the reference tridiagonal (normalized Legendre basis)
//!   eigensolver for integer `n`.
//! * [`phasekit`]: the nonoscillatory phase function oracle giving the
//!   generalized index `ξ(χ)` and the phase derivatives at the origin.
//! * [`tablegen`]: per-`γ`-node construction of the `σ ↦ χ` expansions.
//! * [`chitab`]: the runtime evaluator and the `CHITBL01` byte format.
//!
//! The crate is `no_std` (it needs `alloc`). File IO, parallel builds and the
//! command line live in the companion `chitbl` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chebkit;
pub mod chitab;
pub mod dd;
pub mod legendre_eig;
pub mod ode;
pub mod phasekit;
pub mod tablegen;

/// Machine zero for IEEE double precision, `2⁻⁵²`.
pub const EPS0: f64 = f64::EPSILON;

pub use chebkit::{ChebExpansion, ChebGrid, PiecewiseChebModel};
pub use chitab::{chi_eval, ChiTable, EvalAnswer, EvalQuery, QueryIndex};
pub use legendre_eig::{chi_integer, EigenResult, Parity, TridiagonalOperator};
pub use phasekit::{psi_at_zero, riccati_probe, xi_of_chi, PhaseIndexResult, PhaseProbe};
pub use tablegen::{build_node_set, NodeExpansionSet};

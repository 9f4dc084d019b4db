//! Convergent inverse factorial series for balanced gamma-function ratios
//!
//! ```text
//! W(z) = rho^(-z) * prod_k Gamma(A_k z + a_k) / prod_j Gamma(B_j z + b_j),   sum A_k = sum B_j
//! ```
//!
//! The crate is `no_std` (it needs `alloc`) and is organized bottom-up:
//!
//! - [`numerics`]: exact rationals, Gaussian rationals, precision-tagged
//!   floats, rational polynomials, Pochhammer symbols.
//! - [`series`]: truncated power series, exponentiation by three routes, log.
//! - [`special`]: Bernoulli, Stirling, non-central Stirling and
//!   Norlund-Bernoulli numbers.
//! - [`gammaexp`]: normalization invariants and asymptotic coefficients.
//! - [`facseries`]: inverse factorial series coefficients, evaluation and
//!   convergence abscissa.
//! - [`oracle`]: certified log-gamma, direct evaluation of `W`, classical
//!   two-gamma expansions.
//! - [`identities`]: exact polynomial checks of Norlund-Bernoulli identities.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod facseries;
pub mod gammaexp;
pub mod identities;
pub mod numerics;
pub mod oracle;
pub mod series;
pub mod special;

pub use error::Error;

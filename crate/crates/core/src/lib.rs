//! Exact densities of primes at which the order of a finitely generated
//! multiplicative group satisfies divisibility conditions.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: factorization, multiplicative functions, exact rationals.
//! * [`kummer`]: degrees `[K(ζ_m, G^{1/n}) : K]` as finite tables plus a lift rule.
//! * [`density`]: closed formulas and certified series for ρ, β, γ and the
//!   coprime-order density, and the constants `A_{k,r}`.
//! * [`empirical`]: brute-force counting over degree-1 primes.
//! * [`reference`]: published reference values used by the table commands.

pub mod arith;
pub mod density;
pub mod empirical;
pub mod kummer;
pub mod reference;
pub mod error;

pub use arith::{FactoredInt, Rat};
pub use error::{Error, Result};

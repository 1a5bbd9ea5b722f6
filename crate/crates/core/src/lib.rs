//! Bounds for the optimal constant `A` of the weighted Hardy inequality
//!
//! ```text
//! ‖f‖_{L^q(μ)} ≤ A ‖f'‖_{L^p(ν)},   f(0) = 0,   on (0, D)
//! ```
//!
//! where `μ(dx) = u(x) dx`, `ν(dx) = v(x) dx` and `D` may be infinite.
//!
//! | module      | contents                                                   |
//! |-------------|------------------------------------------------------------|
//! | [`specfun`] | Gamma, Beta, incomplete Beta, the factors `k` and `k̃`     |
//! | [`expr`]    | expression densities in `x`                                |
//! | [`measure`] | densities, problem specs, domain/problem transforms        |
//! | [`quad`]    | adaptive quadrature, grids, primitives, sup search         |
//! | [`bounds`]  | `B`, `δ₁`, `δ̄₁`, `δ̃₁`, `A*` and the combined report       |
//! | [`iterate`] | the sequences `δₙ` and `δ̄ₙ`                               |
//! | [`oracle`]  | brute-force Rayleigh quotients, Bliss optimizer, residuals |
//! | [`reference`] | closed forms for the two solvable families               |
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod bounds;
pub mod error;
pub mod expr;
pub mod iterate;
pub(crate) mod math;
pub mod measure;
pub mod oracle;
pub mod quad;
pub mod reference;
pub mod specfun;

pub use error::{Error, Result};

/// Conjugate exponent `p* = p/(p-1)`.
#[inline]
pub fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

//! Homogeneous symbols on the flat torus and their asymptotic calculus.
//!
//! A symbol component is a polynomial in `ξ_1, …, ξ_d` and `|ξ|^{±1}` with
//! Clifford-valued trigonometric coefficients, kept in the reduced basis
//! described on [`XiMonomial`]. The metric is flat, so `|ξ|² = Σ ξ_i²`
//! everywhere and the spin connection vanishes.

mod classify;
mod expansion;
mod poly;

pub use classify::{is_even_class, is_odd_class, parity_class, reality_class, ParityClass, RealityClass};
pub use expansion::{multi_indices, parametrix, sqrt_symbol, symbol_product, SymbolExpansion, DEPTH_LIMIT};
pub use poly::{Coeff, HomoTerm, XiMonomial, XiPoly};

//! Exact coefficient rings.
//!
//! Everything the engine computes lives in one of these rings:
//! [`GaussianRational`] for plain numbers, [`ExactScalar`] for numbers carrying
//! powers of `π^{1/2}`, [`TrigPoly`] for coefficient functions on the torus and
//! [`TensorPoly`] for the opaque curvature and gauge-field indeterminates of the
//! boundary computation.

mod gaussian;
mod rational;
mod scalar;
mod tensor;
mod trig;

pub use gaussian::{format_rational, parse_rational, GaussianRational};
pub use rational::Rational;
pub use scalar::{ExactScalar, ScalarTermJson};
pub use tensor::{Indet, IndetKind, TensorMonomial, TensorPoly};
pub use trig::{trig_integral, Freq, TrigEntry, TrigPoly};

/// Minimal commutative-ring interface used by the Clifford algebra and the
/// symbol calculus. `Default` must be the additive identity.
pub trait Ring: Clone + Default + PartialEq + std::fmt::Debug + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, c: &GaussianRational) -> Self;
}

/// Complex conjugation, needed for adjoints.
pub trait Conjugate {
    fn conj(&self) -> Self;
}

impl Ring for GaussianRational {
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self = &*self + other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        self * c
    }
}

impl Conjugate for GaussianRational {
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
}

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::gaussian::{format_rational, parse_rational, GaussianRational};
use super::{Conjugate, ExactScalar, Ring};
use crate::error::{Error, Result};

/// Frequency vector `l ∈ Z^d` of a Fourier mode `e^{i l·x}`.
pub type Freq = Vec<i32>;

/// Trigonometric polynomial `Σ_l c_l e^{i l·x}` on the torus `[0, 2π)^d`.
///
/// Equality, ordering and hashing look only at the coefficients: the frequency
/// vectors already carry the dimension, and the zero polynomial compares equal
/// whatever dimension it was created with (`Default` gives a dimensionless
/// zero that adopts the dimension of whatever is added to it).
#[derive(Clone, Default)]
pub struct TrigPoly {
    dim: usize,
    coeffs: BTreeMap<Freq, GaussianRational>,
}

/// JSON entry `{"freq": [..], "re": "p/q", "im": "p/q"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrigEntry {
    pub freq: Vec<i32>,
    pub re: String,
    pub im: String,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: GaussianRational) -> Self {
        Self::mode(dim, vec![0; dim], c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, GaussianRational::one())
    }

    /// `c · e^{i l·x}`. Panics if `freq.len() != dim`.
    pub fn mode(dim: usize, freq: Freq, c: GaussianRational) -> Self {
        assert_eq!(freq.len(), dim, "frequency vector has wrong length");
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(freq, c);
        }
        Self { dim, coeffs }
    }

    pub fn from_modes(dim: usize, modes: impl IntoIterator<Item = (Freq, GaussianRational)>) -> Result<Self> {
        let mut out = Self::zero(dim);
        for (freq, c) in modes {
            if freq.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: freq.len(),
                });
            }
            out.add_mode(freq, &c);
        }
        Ok(out)
    }

    fn add_mode(&mut self, freq: Freq, c: &GaussianRational) {
        let sum = &self.coefficient(&freq) + c;
        if sum.is_zero() {
            self.coeffs.remove(&freq);
        } else {
            self.coeffs.insert(freq, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> impl Iterator<Item = (&Freq, &GaussianRational)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, freq: &[i32]) -> GaussianRational {
        self.coeffs.get(freq).cloned().unwrap_or_default()
    }

    /// The zero-frequency coefficient `c_0`.
    pub fn mean(&self) -> GaussianRational {
        self.coefficient(&vec![0; self.dim])
    }

    /// True when only the zero frequency is present (or the polynomial is 0).
    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|l| l.iter().all(|&k| k == 0))
    }

    pub fn max_abs_freq(&self) -> i32 {
        self.coeffs
            .keys()
            .flat_map(|l| l.iter().map(|k| k.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        if self.dim == 0 {
            self.dim = other.dim;
        }
        for (l, c) in &other.coeffs {
            match self.coeffs.get_mut(l) {
                Some(e) => {
                    *e = &*e + c;
                    if e.is_zero() {
                        self.coeffs.remove(l);
                    }
                }
                None => {
                    self.coeffs.insert(l.clone(), c.clone());
                }
            }
        }
    }

    fn as_constant(&self) -> Option<&GaussianRational> {
        match self.coeffs.iter().next() {
            Some((l, c)) if self.coeffs.len() == 1 && l.iter().all(|&x| x == 0) => Some(c),
            _ => None,
        }
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.dim);
        }
        self.map_coeffs(|c| c * s)
    }

    fn map_coeffs(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(l, c)| (l.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self { dim: self.dim, coeffs }
    }

    /// Pointwise product, i.e. convolution of the Fourier supports.
    pub fn mul(&self, other: &Self) -> Self {
        let dim = self.dim.max(other.dim);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(dim);
        }
        if let Some(c) = other.as_constant() {
            return Self { dim, ..self.scale(c) };
        }
        if let Some(c) = self.as_constant() {
            return Self { dim, ..other.scale(c) };
        }
        let mut coeffs: BTreeMap<Freq, GaussianRational> = BTreeMap::new();
        for (l1, c1) in &self.coeffs {
            for (l2, c2) in &other.coeffs {
                let l: Freq = l1.iter().zip(l2).map(|(a, b)| a + b).collect();
                let entry = coeffs.entry(l).or_default();
                *entry = &*entry + &(c1 * c2);
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        Self {
            dim: self.dim.max(other.dim),
            coeffs,
        }
    }

    /// `∂/∂x^k`, which multiplies `c_l` by `i l_k`.
    pub fn derivative(&self, k: usize) -> Self {
        let i = GaussianRational::i();
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(l, _)| l[k] != 0)
            .map(|(l, c)| (l.clone(), (c * &i).scale_int(l[k] as i64)))
            .collect();
        Self { dim: self.dim, coeffs }
    }

    /// Multi-index derivative `∂_x^α`.
    pub fn derivative_multi(&self, alpha: &[u32]) -> Self {
        let mut out = self.clone();
        for (k, &n) in alpha.iter().enumerate() {
            for _ in 0..n {
                out = out.derivative(k);
            }
        }
        out
    }

    /// Pointwise complex conjugate: `c_l ↦ conj(c_{-l})`.
    pub fn conj(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(l, c)| (l.iter().map(|k| -k).collect(), c.conj()))
            .collect();
        Self { dim: self.dim, coeffs }
    }

    /// Real-valued as a function: `c_{-l} = conj(c_l)` for every `l`.
    pub fn is_real_valued(&self) -> bool {
        self.conj() == *self
    }

    /// Purely imaginary values: `c_{-l} = -conj(c_l)`.
    pub fn is_imaginary_valued(&self) -> bool {
        self.conj() == self.neg()
    }

    /// `∫_{T^d} f dx = (2π)^d c_0`.
    pub fn integral(&self) -> ExactScalar {
        ExactScalar::from_gaussian(self.mean()).mul(&ExactScalar::pi_pow(self.dim as i32)).scale(
            &GaussianRational::from_int(1i64 << self.dim),
        )
    }

    pub fn to_entries(&self) -> Vec<TrigEntry> {
        self.coeffs
            .iter()
            .map(|(l, c)| TrigEntry {
                freq: l.clone(),
                re: format_rational(c.re()),
                im: format_rational(c.im()),
            })
            .collect()
    }

    pub fn from_entries(dim: usize, entries: &[TrigEntry]) -> Result<Self> {
        let mut modes = Vec::with_capacity(entries.len());
        for e in entries {
            let c = GaussianRational::new(parse_rational(&e.re)?, parse_rational(&e.im)?);
            modes.push((e.freq.clone(), c));
        }
        Self::from_modes(dim, modes)
    }
}

/// `∫_{T^d} f dx` for the free-function form used in the docs and CLI.
pub fn trig_integral(f: &TrigPoly) -> ExactScalar {
    f.integral()
}

impl PartialEq for TrigPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for TrigPoly {}

impl std::hash::Hash for TrigPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl Serialize for TrigPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_entries().serialize(s)
    }
}

impl fmt::Debug for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(l, c)| {
                if l.iter().all(|&k| k == 0) {
                    format!("{c}")
                } else {
                    format!("{c}·e{l:?}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Ring for TrigPoly {
    fn is_zero(&self) -> bool {
        TrigPoly::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        self.add_assign(other);
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        TrigPoly::scale(self, c)
    }
}

impl Conjugate for TrigPoly {
    fn conj(&self) -> Self {
        TrigPoly::conj(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(dim: usize, l: &[i32]) -> TrigPoly {
        TrigPoly::mode(dim, l.to_vec(), GaussianRational::one())
    }

    #[test]
    fn integral_of_one_is_volume() {
        let v = TrigPoly::one(2).integral();
        assert_eq!(v, ExactScalar::pi_pow(2).scale(&GaussianRational::from_int(4)));
    }

    #[test]
    fn oscillatory_integral_vanishes() {
        assert!(e(2, &[1, 0]).integral().is_zero());
    }

    #[test]
    fn product_with_conjugate_mode() {
        let f = e(4, &[1, 0, 0, 0]).mul(&e(4, &[-1, 0, 0, 0]));
        assert_eq!(f.integral(), ExactScalar::pi_pow(4).scale(&GaussianRational::from_int(16)));
    }

    #[test]
    fn derivative_of_mode() {
        let f = e(2, &[3, -1]);
        let df = f.derivative(0);
        assert_eq!(df.coefficient(&[3, -1]), GaussianRational::complex((0, 1), (3, 1)));
        assert!(TrigPoly::one(2).derivative(1).is_zero());
    }

    #[test]
    fn realness() {
        let sin = e(1, &[1])
            .sub(&e(1, &[-1]))
            .scale(&GaussianRational::complex((0, 1), (-1, 2)));
        assert!(sin.is_real_valued());
        let isin = sin.scale(&GaussianRational::i());
        assert!(isin.is_imaginary_valued());
        assert!(!isin.is_real_valued());
    }

    fn arb_trig(dim: usize) -> impl Strategy<Value = TrigPoly> {
        prop::collection::vec(
            (prop::collection::vec(-2i32..=2, dim), -3i64..=3, -3i64..=3, 1i64..=3),
            0..4,
        )
        .prop_map(move |modes| {
            TrigPoly::from_modes(
                dim,
                modes
                    .into_iter()
                    .map(|(l, a, b, q)| (l, GaussianRational::complex((a, q), (b, q)))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn product_commutes(f in arb_trig(2), g in arb_trig(2)) {
            prop_assert_eq!(f.mul(&g), g.mul(&f));
        }

        #[test]
        fn leibniz(f in arb_trig(2), g in arb_trig(2), k in 0usize..2) {
            let lhs = f.mul(&g).derivative(k);
            let rhs = f.derivative(k).mul(&g).add(&f.mul(&g.derivative(k)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn function_times_adjoint_is_real(f in arb_trig(3)) {
            prop_assert!(f.mul(&f.conj()).is_real_valued());
        }

        #[test]
        fn entries_roundtrip(f in arb_trig(3)) {
            prop_assert_eq!(TrigPoly::from_entries(3, &f.to_entries()).unwrap(), f);
        }
    }
}

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::gaussian::{format_rational, parse_rational, GaussianRational};
use super::{Conjugate, Ring};
use crate::error::Result;

/// `Σ_m q_m · π^{m/2}` with Gaussian-rational `q_m`.
///
/// The map never holds a zero coefficient, so the zero scalar is the empty map
/// and structural equality is exact equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    terms: BTreeMap<i32, GaussianRational>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_gaussian(GaussianRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_gaussian(GaussianRational::from_int(n))
    }

    pub fn from_gaussian(q: GaussianRational) -> Self {
        Self::monomial(q, 0)
    }

    /// `q · π^{pi_half/2}`.
    pub fn monomial(q: GaussianRational, pi_half: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(pi_half, q);
        }
        Self { terms }
    }

    /// `π^k` for integer `k`.
    pub fn pi_pow(k: i32) -> Self {
        Self::monomial(GaussianRational::one(), 2 * k)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussianRational)> {
        self.terms.iter().map(|(m, q)| (*m, q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `π^{pi_half/2}`.
    pub fn coefficient(&self, pi_half: i32) -> GaussianRational {
        self.terms.get(&pi_half).cloned().unwrap_or_default()
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    pub fn is_imaginary(&self) -> bool {
        self.terms.values().all(GaussianRational::is_imaginary)
    }

    pub fn real_part(&self) -> Self {
        self.map_coeffs(|q| GaussianRational::from_rational(q.re().clone()))
    }

    pub fn imag_part(&self) -> Self {
        self.map_coeffs(|q| GaussianRational::from_rational(q.im().clone()))
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(GaussianRational::conj)
    }

    fn map_coeffs(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, q)| (*m, f(q)))
            .filter(|(_, q)| !q.is_zero())
            .collect();
        Self { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, q) in &other.terms {
            let entry = self.terms.entry(*m).or_default();
            *entry = &*entry + q;
            if entry.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|q| -q)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, q1) in &self.terms {
            for (m2, q2) in &other.terms {
                out.add_assign(&Self::monomial(q1 * q2, m1 + m2));
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map_coeffs(|q| q * c)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Inverse of a single-term scalar. Sums of several π-powers have no
    /// inverse inside this ring.
    pub fn inv_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, q) = self.terms.iter().next()?;
        Some(Self::monomial(q.inv().ok()?, -m))
    }

    /// Floating-point value; the only route from exact to floating values.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let pi_sqrt = std::f64::consts::PI.sqrt();
        self.terms.iter().fold((0.0, 0.0), |(re, im), (m, q)| {
            let w = pi_sqrt.powi(*m);
            let (a, b) = q.to_f64_pair();
            (re + a * w, im + b * w)
        })
    }

    pub fn to_json_terms(&self) -> Vec<ScalarTermJson> {
        self.terms
            .iter()
            .map(|(m, q)| ScalarTermJson {
                pi_half: *m,
                re: format_rational(q.re()),
                im: format_rational(q.im()),
            })
            .collect()
    }

    pub fn from_json_terms(terms: &[ScalarTermJson]) -> Result<Self> {
        let mut out = Self::zero();
        for t in terms {
            let q = GaussianRational::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
            out.add_assign(&Self::monomial(q, t.pi_half));
        }
        Ok(out)
    }
}

/// One `{"pi_half": m, "re": "p/q", "im": "p/q"}` entry of the JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarTermJson {
    pub pi_half: i32,
    pub re: String,
    pub im: String,
}

#[derive(Serialize, Deserialize)]
struct ScalarJson {
    terms: Vec<ScalarTermJson>,
}

impl Serialize for ExactScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ScalarJson {
            terms: self.to_json_terms(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ScalarJson::deserialize(d)?;
        Self::from_json_terms(&raw.terms).map_err(serde::de::Error::custom)
    }
}

impl From<GaussianRational> for ExactScalar {
    fn from(q: GaussianRational) -> Self {
        Self::from_gaussian(q)
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, q) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match m {
                0 => write!(f, "{q}")?,
                m if m % 2 == 0 => write!(f, "{q}·π^{}", m / 2)?,
                m => write!(f, "{q}·π^({m}/2)")?,
            }
        }
        Ok(())
    }
}

impl Ring for ExactScalar {
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
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
        ExactScalar::scale(self, c)
    }
}

impl Conjugate for ExactScalar {
    fn conj(&self) -> Self {
        ExactScalar::conj(self)
    }
}

impl ExactScalar {
    /// True when this is a nonzero rational multiple of a single π power.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|q| q.re().is_one() && q.im().is_zero())
    }
}

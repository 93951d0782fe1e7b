use std::collections::BTreeMap;
use std::fmt;

use super::{Conjugate, ExactScalar, GaussianRational, Ring};

/// Families of opaque indeterminates used by the boundary computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndetKind {
    /// Gauge potential component `a_μ`.
    A,
    /// Field strength `F_{μν}`, antisymmetric.
    F,
    /// Scalar curvature `τ`.
    Tau,
    /// Riemann tensor `R_{ijkl}`: antisymmetric in each pair, pair-symmetric.
    R,
    /// Second fundamental form `L_{ab}`, symmetric.
    L,
    /// Connection coefficient `Γ^j_{ak} = (∇_{e_a} e_k, e_j)`, stored as
    /// `[j, a, k]`; antisymmetric in `j ↔ k` for an orthonormal frame.
    Gamma,
}

impl IndetKind {
    /// Indeterminates that carry the perturbation `A`.
    pub fn is_perturbation(self) -> bool {
        matches!(self, IndetKind::A | IndetKind::F)
    }
}

/// An indeterminate together with the number of normal covariant derivatives
/// applied to it (`x`, `x_{;d}`, `x_{;dd}`, ...).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Indet {
    pub kind: IndetKind,
    pub idx: Vec<u8>,
    pub deriv: u8,
}

impl Indet {
    pub fn new(kind: IndetKind, idx: &[u8]) -> Self {
        Self {
            kind,
            idx: idx.to_vec(),
            deriv: 0,
        }
    }

    /// Applies the declared index symmetries. Returns `None` when the
    /// indeterminate vanishes identically, otherwise a sign and the canonical
    /// representative.
    pub fn canonical(&self) -> Option<(i64, Indet)> {
        let mut idx = self.idx.clone();
        let mut sign = 1;
        match self.kind {
            IndetKind::A | IndetKind::Tau => {}
            IndetKind::F => {
                if idx[0] == idx[1] {
                    return None;
                }
                if idx[0] > idx[1] {
                    idx.swap(0, 1);
                    sign = -sign;
                }
            }
            IndetKind::L => idx.sort_unstable(),
            IndetKind::Gamma => {
                if idx[0] == idx[2] {
                    return None;
                }
                if idx[0] > idx[2] {
                    idx.swap(0, 2);
                    sign = -sign;
                }
            }
            IndetKind::R => {
                if idx[0] == idx[1] || idx[2] == idx[3] {
                    return None;
                }
                if idx[0] > idx[1] {
                    idx.swap(0, 1);
                    sign = -sign;
                }
                if idx[2] > idx[3] {
                    idx.swap(2, 3);
                    sign = -sign;
                }
                if (idx[2], idx[3]) < (idx[0], idx[1]) {
                    idx = vec![idx[2], idx[3], idx[0], idx[1]];
                }
            }
        }
        Some((
            sign,
            Indet {
                kind: self.kind,
                idx,
                deriv: self.deriv,
            },
        ))
    }
}

impl fmt::Display for Indet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: String = self.idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
        let name = match self.kind {
            IndetKind::A => "a",
            IndetKind::F => "F",
            IndetKind::Tau => "tau",
            IndetKind::R => "R",
            IndetKind::L => "L",
            IndetKind::Gamma => "Gamma",
        };
        if idx.is_empty() {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}[{idx}]")?;
        }
        if self.deriv > 0 {
            write!(f, ";{}", "d".repeat(self.deriv as usize))?;
        }
        Ok(())
    }
}

/// Commutative monomial: sorted `(indeterminate, power)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorMonomial(Vec<(Indet, u32)>);

impl TensorMonomial {
    pub fn factors(&self) -> &[(Indet, u32)] {
        &self.0
    }

    fn mul(&self, other: &Self) -> Self {
        let mut merged: BTreeMap<Indet, u32> = self.0.iter().cloned().collect();
        for (x, p) in &other.0 {
            *merged.entry(x.clone()).or_default() += p;
        }
        Self(merged.into_iter().collect())
    }

    /// Total degree in perturbation indeterminates (`a`, `F` and derivatives).
    pub fn perturbation_degree(&self) -> u32 {
        self.0
            .iter()
            .filter(|(x, _)| x.kind.is_perturbation())
            .map(|(_, p)| p)
            .sum()
    }
}

impl fmt::Display for TensorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(x, p)| if *p == 1 { x.to_string() } else { format!("{x}^{p}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Polynomial over [`ExactScalar`] in indexed indeterminates, kept in
/// canonical form: symmetry relations are applied when a variable is created,
/// monomials are sorted and zero coefficients are dropped.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorPoly {
    terms: BTreeMap<TensorMonomial, ExactScalar>,
}

impl TensorPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(TensorMonomial::default(), c);
        }
        Self { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(ExactScalar::from_int(n))
    }

    pub fn var(x: Indet) -> Self {
        match x.canonical() {
            None => Self::zero(),
            Some((sign, x)) => {
                let mut terms = BTreeMap::new();
                terms.insert(TensorMonomial(vec![(x, 1)]), ExactScalar::from_int(sign));
                Self { terms }
            }
        }
    }

    pub fn named(kind: IndetKind, idx: &[u8]) -> Self {
        Self::var(Indet::new(kind, idx))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorMonomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            let entry = self.terms.entry(m.clone()).or_default();
            entry.add_assign(c);
            if entry.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussianRational::from_int(-1))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.scale_exact(&ExactScalar::from_gaussian(c.clone()))
    }

    pub fn scale_exact(&self, c: &ExactScalar) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), v.mul(c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Self { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let entry = out.terms.entry(m.clone()).or_default();
                entry.add_assign(&c1.mul(c2));
                if entry.is_zero() {
                    out.terms.remove(&m);
                }
            }
        }
        out
    }

    /// Terms whose total degree in `a`/`F` indeterminates equals `k`.
    pub fn perturbation_part(&self, k: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.perturbation_degree() == k)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Self { terms }
    }

    pub fn mentions_perturbation(&self) -> bool {
        self.terms.keys().any(|m| m.perturbation_degree() > 0)
    }

    /// Normal covariant derivative acting as a derivation on the
    /// indeterminates: each `x` is sent to `x_{;d}`.
    pub fn normal_derivative(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (pos, (x, p)) in m.0.iter().enumerate() {
                let mut rest = m.0.clone();
                if *p == 1 {
                    rest.remove(pos);
                } else {
                    rest[pos].1 -= 1;
                }
                let mut dx = x.clone();
                dx.deriv += 1;
                let term = Self {
                    terms: [(TensorMonomial(rest), c.scale(&GaussianRational::from_int(*p as i64)))]
                        .into_iter()
                        .collect(),
                };
                out.add_assign(&term.mul(&Self::var(dx)));
            }
        }
        out
    }

    /// The constant coefficient when the polynomial has no indeterminates.
    pub fn as_constant(&self) -> Option<ExactScalar> {
        match self.terms.len() {
            0 => Some(ExactScalar::zero()),
            1 => self.terms.get(&TensorMonomial::default()).cloned(),
            _ => None,
        }
    }
}

impl fmt::Debug for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Ring for TensorPoly {
    fn is_zero(&self) -> bool {
        TensorPoly::is_zero(self)
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
        TensorPoly::scale(self, c)
    }
}

impl Conjugate for TensorPoly {
    /// Indeterminates are treated as real.
    fn conj(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect();
        Self { terms }
    }
}

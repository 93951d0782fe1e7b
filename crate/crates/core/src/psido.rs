//! Concrete operators on the flat torus and their symbols.
//!
//! `D = −i γ^j ∂_j` has symbol `γ^j ξ_j`. Its kernel (constant spinors) is
//! handled by the usual convention `D = 𝒟 + P` with `P` the kernel
//! projection; `P` is smoothing and never shows up in a homogeneous
//! component, so nothing here refers to it.

use serde::{Deserialize, Serialize};

use crate::clifford::{chirality, CliffordElement};
use crate::coefficients::{GaussianRational, TrigEntry, TrigPoly};
use crate::error::{Error, Result};
use crate::symbols::{Coeff, SymbolExpansion, XiMonomial, XiPoly};

/// Default truncation floor for theorem checks on `T^d`.
pub fn default_floor(d: usize) -> i32 {
    -(d as i32) - 4
}

/// Gauge potential `A = −i a_k γ^k` given by its components `a_1, …, a_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm {
    dim: usize,
    a: Vec<TrigPoly>,
}

impl OneForm {
    pub fn new(dim: usize, a: Vec<TrigPoly>) -> Result<Self> {
        if a.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: a.len(),
            });
        }
        if let Some(bad) = a.iter().find(|f| !f.is_zero() && f.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { dim, a })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            a: vec![TrigPoly::zero(dim); dim],
        }
    }

    /// The one-form `a [D, b]`, whose components are `a_k = a ∂_k b`.
    pub fn from_pair(a: &TrigPoly, b: &TrigPoly) -> Self {
        let dim = b.dim().max(a.dim());
        let comps = (0..dim).map(|k| a.mul(&b.derivative(k))).collect();
        Self { dim, a: comps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[TrigPoly] {
        &self.a
    }

    /// `A = A*` exactly when every `a_k` takes purely imaginary values.
    pub fn is_selfadjoint(&self) -> bool {
        self.a.iter().all(TrigPoly::is_imaginary_valued)
    }

    pub fn require_selfadjoint(&self) -> Result<()> {
        match self.a.iter().position(|f| !f.is_imaginary_valued()) {
            None => Ok(()),
            Some(k) => Err(Error::NotSelfadjoint(format!("component a_{} is not purely imaginary", k + 1))),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x.add(y)).collect(),
        }
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self {
            dim: self.dim,
            a: self.a.iter().map(|x| x.scale(s)).collect(),
        }
    }

    /// Zeroth-order matrix function `−i a_k γ^k`.
    pub fn matrix(&self) -> Coeff {
        let mi = TrigPoly::constant(self.dim, -GaussianRational::i());
        let mut out = Coeff::zero(self.dim);
        for (k, a) in self.a.iter().enumerate() {
            out.add_assign(&CliffordElement::generator(self.dim, k, a.mul(&mi)));
        }
        out
    }

    pub fn symbol(&self) -> SymbolExpansion {
        SymbolExpansion::matrix(self.dim, self.matrix())
    }

    pub fn to_entries(&self) -> Vec<Vec<TrigEntry>> {
        self.a.iter().map(TrigPoly::to_entries).collect()
    }

    pub fn from_entries(dim: usize, entries: &[Vec<TrigEntry>]) -> Result<Self> {
        let a = entries
            .iter()
            .map(|e| TrigPoly::from_entries(dim, e))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, a)
    }
}

/// Operators built from `D`, functions and one-forms.
#[derive(Clone, Debug, PartialEq)]
pub enum Operator {
    Dirac,
    Multiplication(TrigPoly),
    OneForm(OneForm),
    /// The grading `χ = (−i)^{d/2} γ^1 ⋯ γ^d` (even `d`).
    Grading,
    /// `B^k`, with a parametrix for negative `k`.
    Power(Box<Operator>, i32),
    /// `|B|^k = (B²)^{k/2}` for a first-order `B`.
    AbsPower(Box<Operator>, i32),
    /// Product, left to right.
    Composite(Vec<Operator>),
    Sum(Vec<Operator>),
}

impl Operator {
    pub fn dirac_power(k: i32) -> Self {
        Operator::Power(Box::new(Operator::Dirac), k)
    }

    pub fn abs_dirac_power(k: i32) -> Self {
        Operator::AbsPower(Box::new(Operator::Dirac), k)
    }

    /// `D + A`.
    pub fn perturbed(a: &OneForm) -> Self {
        Operator::Sum(vec![Operator::Dirac, Operator::OneForm(a.clone())])
    }

    /// Order (top degree) of the symbol.
    pub fn order(&self) -> i32 {
        match self {
            Operator::Dirac => 1,
            Operator::Multiplication(_) | Operator::OneForm(_) | Operator::Grading => 0,
            Operator::Power(b, k) | Operator::AbsPower(b, k) => b.order() * k,
            Operator::Composite(fs) => fs.iter().map(Operator::order).sum(),
            Operator::Sum(ts) => ts.iter().map(Operator::order).max().unwrap_or(0),
        }
    }

    /// Symbol on `T^d`, known at least down to degree `floor`. The leading
    /// component is always computed, even when `floor` lies above it.
    pub fn symbol(&self, d: usize, floor: i32) -> Result<SymbolExpansion> {
        let floor = floor.min(self.order());
        match self {
            Operator::Dirac => Ok(dirac_symbol(d)),
            Operator::Multiplication(f) => {
                check_fn_dim(d, f)?;
                Ok(SymbolExpansion::multiplication(d, f))
            }
            Operator::OneForm(a) => {
                if a.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: a.dim(),
                    });
                }
                Ok(a.symbol())
            }
            Operator::Grading => Ok(SymbolExpansion::matrix(d, chirality(d, TrigPoly::one(d))?)),
            Operator::Composite(fs) => {
                let orders: Vec<i32> = fs.iter().map(Operator::order).collect();
                let total: i32 = orders.iter().sum();
                let mut acc = SymbolExpansion::identity(d);
                let mut remaining = total;
                for (f, t) in fs.iter().zip(&orders) {
                    remaining -= t;
                    let s = f.symbol(d, floor - (total - t))?;
                    acc = acc.mul_to(&s, Some(floor - remaining))?;
                }
                Ok(acc)
            }
            Operator::Sum(ts) => {
                let mut acc = SymbolExpansion::zero(d).with_top(self.order());
                for t in ts {
                    acc = acc.add(&t.symbol(d, floor)?)?;
                }
                Ok(acc)
            }
            Operator::Power(b, k) => {
                let t = b.order();
                if *k >= 0 {
                    let base = b.symbol(d, floor - (k - 1).max(0) * t)?;
                    power_to(&base, *k as u32, floor)
                } else {
                    let n = -k;
                    // each inverse factor has order −t
                    let inv_floor = floor + (n - 1) * t;
                    let base = b.symbol(d, inv_floor + 2 * t)?;
                    power_to(&base.parametrix(inv_floor)?, n as u32, floor)
                }
            }
            Operator::AbsPower(b, k) => {
                if b.order() != 1 {
                    return Err(Error::InvalidSpec("abs_power needs a first-order base".into()));
                }
                let square = |f: i32| -> Result<SymbolExpansion> {
                    let base = b.symbol(d, f - 1)?;
                    base.mul_to(&base, Some(f))
                };
                let k = *k;
                if k % 2 == 0 {
                    let m = k / 2;
                    if m >= 0 {
                        power_to(&square(floor - 2 * (m - 1).max(0))?, m as u32, floor)
                    } else {
                        let m = -m;
                        let inv_floor = floor + 2 * (m - 1);
                        power_to(&square(inv_floor + 4)?.parametrix(inv_floor)?, m as u32, floor)
                    }
                } else if k > 0 {
                    let root_floor = floor - (k - 1);
                    let root = square(root_floor + 1)?.sqrt(root_floor)?;
                    power_to(&root, k as u32, floor)
                } else {
                    let n = -k;
                    let inv_floor = floor + (n - 1);
                    let root = square(inv_floor + 3)?.sqrt(inv_floor + 2)?;
                    power_to(&root.parametrix(inv_floor)?, n as u32, floor)
                }
            }
        }
    }
}

fn check_fn_dim(d: usize, f: &TrigPoly) -> Result<()> {
    if !f.is_zero() && f.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: f.dim(),
        });
    }
    Ok(())
}

/// `P^k` where the partial product of `j` factors is kept down to the floor
/// still needed for the remaining `k − j`.
fn power_to(p: &SymbolExpansion, k: u32, floor: i32) -> Result<SymbolExpansion> {
    let t = p.top();
    let mut acc = SymbolExpansion::identity(p.dim());
    for j in 1..=k as i32 {
        acc = acc.mul_to(p, Some(floor - (k as i32 - j) * t))?;
    }
    Ok(acc)
}

/// `σ(D) = γ^j ξ_j`, exact.
pub fn dirac_symbol(d: usize) -> SymbolExpansion {
    let mut p = XiPoly::zero();
    for j in 0..d {
        p.add_term(XiMonomial::xi(d, j), CliffordElement::generator(d, j, TrigPoly::one(d)));
    }
    SymbolExpansion::exact(d, 1, [(1, p)])
}

/// `α(b) = D b D^{−1}`, truncated at `floor`.
pub fn alpha(b: &TrigPoly, d: usize, floor: i32) -> Result<SymbolExpansion> {
    Operator::Composite(vec![
        Operator::Dirac,
        Operator::Multiplication(b.clone()),
        Operator::dirac_power(-1),
    ])
    .symbol(d, floor)
}

/// JSON form of an operator: a `kind` tag plus parameters, with the
/// dimension and optional floor on the outermost object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub dim: usize,
    #[serde(flatten)]
    pub kind: SpecKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<i32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecKind {
    Dirac,
    Grading,
    Multiplication {
        f: Vec<TrigEntry>,
    },
    Oneform {
        a: Vec<Vec<TrigEntry>>,
    },
    Power {
        base: Box<SpecKind>,
        k: i32,
    },
    AbsPower {
        k: i32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Box<SpecKind>>,
    },
    Composite {
        factors: Vec<SpecKind>,
    },
    Sum {
        terms: Vec<SpecKind>,
    },
}

impl SpecKind {
    pub fn to_operator(&self, d: usize) -> Result<Operator> {
        Ok(match self {
            SpecKind::Dirac => Operator::Dirac,
            SpecKind::Grading => Operator::Grading,
            SpecKind::Multiplication { f } => Operator::Multiplication(TrigPoly::from_entries(d, f)?),
            SpecKind::Oneform { a } => Operator::OneForm(OneForm::from_entries(d, a)?),
            SpecKind::Power { base, k } => Operator::Power(Box::new(base.to_operator(d)?), *k),
            SpecKind::AbsPower { k, base } => {
                let b = match base {
                    Some(b) => b.to_operator(d)?,
                    None => Operator::Dirac,
                };
                Operator::AbsPower(Box::new(b), *k)
            }
            SpecKind::Composite { factors } => {
                if factors.is_empty() {
                    return Err(Error::InvalidSpec("composite with no factors".into()));
                }
                Operator::Composite(factors.iter().map(|f| f.to_operator(d)).collect::<Result<_>>()?)
            }
            SpecKind::Sum { terms } => {
                if terms.is_empty() {
                    return Err(Error::InvalidSpec("sum with no terms".into()));
                }
                Operator::Sum(terms.iter().map(|t| t.to_operator(d)).collect::<Result<_>>()?)
            }
        })
    }

    pub fn from_operator(op: &Operator) -> Self {
        match op {
            Operator::Dirac => SpecKind::Dirac,
            Operator::Grading => SpecKind::Grading,
            Operator::Multiplication(f) => SpecKind::Multiplication { f: f.to_entries() },
            Operator::OneForm(a) => SpecKind::Oneform { a: a.to_entries() },
            Operator::Power(b, k) => SpecKind::Power {
                base: Box::new(Self::from_operator(b)),
                k: *k,
            },
            Operator::AbsPower(b, k) => SpecKind::AbsPower {
                k: *k,
                base: match b.as_ref() {
                    Operator::Dirac => None,
                    other => Some(Box::new(Self::from_operator(other))),
                },
            },
            Operator::Composite(fs) => SpecKind::Composite {
                factors: fs.iter().map(Self::from_operator).collect(),
            },
            Operator::Sum(ts) => SpecKind::Sum {
                terms: ts.iter().map(Self::from_operator).collect(),
            },
        }
    }
}

impl OperatorSpec {
    pub fn new(dim: usize, op: &Operator) -> Self {
        Self {
            dim,
            kind: SpecKind::from_operator(op),
            floor: None,
        }
    }

    pub fn operator(&self) -> Result<Operator> {
        if self.dim < 2 {
            return Err(Error::UnsupportedDimension(self.dim, "the torus dimension must be at least 2"));
        }
        self.kind.to_operator(self.dim)
    }

    pub fn floor(&self) -> i32 {
        self.floor.unwrap_or_else(|| default_floor(self.dim))
    }
}

/// Symbol of a spec, known down to its floor (default `−d − 4`).
pub fn realize(spec: &OperatorSpec) -> Result<SymbolExpansion> {
    spec.operator()?.symbol(spec.dim, spec.floor())
}

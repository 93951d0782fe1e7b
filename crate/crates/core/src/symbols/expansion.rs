use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::poly::{Coeff, HomoTerm, XiMonomial, XiPoly};
use crate::coefficients::{GaussianRational, TrigPoly};
use crate::error::{Error, Result};
use crate::par;

/// Largest span `top − floor` any single operation may produce.
pub const DEPTH_LIMIT: i32 = 24;

/// Truncated asymptotic sum `σ_top + σ_{top−1} + ⋯` of homogeneous symbols.
///
/// `floor: None` marks an exact symbol: every component not stored is zero.
/// Otherwise components of degree below `floor` are unknown, and asking for
/// them is an error rather than a silent zero.
#[derive(Clone, PartialEq)]
pub struct SymbolExpansion {
    dim: usize,
    top: i32,
    floor: Option<i32>,
    components: BTreeMap<i32, XiPoly>,
}

fn max_floor(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) | (None, x) => x,
    }
}

/// All multi-indices of length `d` and order `n`.
pub fn multi_indices(d: usize, n: u32) -> Vec<Vec<u32>> {
    fn go(d: usize, n: u32, at: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if at + 1 == d {
            cur[at] = n;
            out.push(cur.clone());
            return;
        }
        for k in (0..=n).rev() {
            cur[at] = k;
            go(d, n - k, at + 1, cur, out);
        }
        cur[at] = 0;
    }
    let mut out = Vec::new();
    if d == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(d, n, 0, &mut vec![0; d], &mut out);
    out
}

/// `(−i)^{|α|} / α!`, the weight of each term of the composition formula.
fn alpha_weight(alpha: &[u32]) -> GaussianRational {
    let order: u32 = alpha.iter().sum();
    let fact: i64 = alpha.iter().map(|&a| (1..=a as i64).product::<i64>()).product();
    &GaussianRational::i_pow(-(order as i64)) * &GaussianRational::ratio(1, fact)
}

/// Lazily filled table of `∂^α` of one component.
struct Derivatives {
    base: XiPoly,
    xi: bool,
    cache: HashMap<Vec<u32>, XiPoly>,
}

impl Derivatives {
    fn new(base: XiPoly, xi: bool) -> Self {
        Self {
            base,
            xi,
            cache: HashMap::new(),
        }
    }

    /// Fills every multi-index up to `order`.
    fn fill(&mut self, order: u32) {
        let d = match self.base.terms().next() {
            Some((m, _)) => m.exps.len(),
            None => return,
        };
        let x_constant = !self.xi && self.base.is_x_constant();
        for n in 0..=order {
            for alpha in multi_indices(d, n) {
                if self.cache.contains_key(&alpha) {
                    continue;
                }
                let value = if n == 0 {
                    self.base.clone()
                } else if x_constant {
                    XiPoly::zero()
                } else {
                    let i = alpha.iter().rposition(|&a| a > 0).unwrap();
                    let mut parent = alpha.clone();
                    parent[i] -= 1;
                    let p = &self.cache[&parent];
                    if p.is_zero() {
                        XiPoly::zero()
                    } else if self.xi {
                        p.xi_derivative(i)
                    } else {
                        let mut e = vec![0; d];
                        e[i] = 1;
                        p.x_derivative_multi(&e)
                    }
                };
                self.cache.insert(alpha, value);
            }
        }
    }

    fn get(&self, alpha: &[u32]) -> Option<&XiPoly> {
        if self.base.is_zero() {
            return None;
        }
        self.cache.get(alpha).filter(|p| !p.is_zero())
    }
}

/// `Σ_{|α| = n} (−i)^n/α! ∂_ξ^α a · ∂_x^α b` from prepared tables.
fn composition_term(d: usize, n: u32, a: &Derivatives, b: &Derivatives) -> XiPoly {
    let mut out = XiPoly::zero();
    for alpha in multi_indices(d, n) {
        let (Some(da), Some(db)) = (a.get(&alpha), b.get(&alpha)) else {
            continue;
        };
        out.add_assign(&da.mul(db).scale(&alpha_weight(&alpha)));
    }
    out
}

impl SymbolExpansion {
    /// Exact symbol with the given components.
    pub fn exact(dim: usize, top: i32, components: impl IntoIterator<Item = (i32, XiPoly)>) -> Self {
        let mut out = Self {
            dim,
            top,
            floor: None,
            components: BTreeMap::new(),
        };
        for (k, p) in components {
            assert!(k <= top, "component above declared top degree");
            out.add_component(k, p);
        }
        out
    }

    /// Known-truncated symbol with the given components.
    pub fn truncated(
        dim: usize,
        top: i32,
        floor: i32,
        components: impl IntoIterator<Item = (i32, XiPoly)>,
    ) -> Self {
        let mut out = Self::exact(dim, top, components);
        out.floor = Some(floor);
        out.components.retain(|k, _| *k >= floor);
        out
    }

    pub fn zero(dim: usize) -> Self {
        Self::exact(dim, 0, [])
    }

    /// The identity operator.
    pub fn identity(dim: usize) -> Self {
        Self::multiplication(dim, &TrigPoly::one(dim))
    }

    /// Multiplication by a function, `σ_0 = f · Id`.
    pub fn multiplication(dim: usize, f: &TrigPoly) -> Self {
        Self::exact(dim, 0, [(0, XiPoly::term(XiMonomial::one(dim), Coeff::scalar(dim, f.clone())))])
    }

    /// Multiplication by a matrix-valued function.
    pub fn matrix(dim: usize, c: Coeff) -> Self {
        Self::exact(dim, 0, [(0, XiPoly::term(XiMonomial::one(dim), c))])
    }

    /// `|ξ|^p · Id` as an exact homogeneous symbol of degree `p`.
    pub fn norm_power(dim: usize, p: i32) -> Self {
        Self::exact(
            dim,
            p,
            [(p, XiPoly::term(XiMonomial::norm_pow(dim, p), Coeff::scalar(dim, TrigPoly::one(dim))))],
        )
    }

    fn add_component(&mut self, k: i32, p: XiPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.components.entry(k).or_default();
        slot.add_assign(&p);
        if slot.is_zero() {
            self.components.remove(&k);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn top(&self) -> i32 {
        self.top
    }

    pub fn floor(&self) -> Option<i32> {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    /// Nonzero components, highest degree first.
    pub fn components(&self) -> impl Iterator<Item = (i32, &XiPoly)> {
        self.components.iter().rev().map(|(k, p)| (*k, p))
    }

    /// The degree-`k` component. Fails when `k` lies below the floor.
    pub fn component(&self, k: i32) -> Result<XiPoly> {
        self.check_known(k, "component")?;
        Ok(self.components.get(&k).cloned().unwrap_or_default())
    }

    fn check_known(&self, k: i32, operation: &str) -> Result<()> {
        match self.floor {
            Some(f) if k < f => Err(Error::FloorTooHigh {
                operation: operation.to_string(),
                degree: k,
                floor: f,
            }),
            _ => Ok(()),
        }
    }

    /// Zero in every known degree.
    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Lowest degree that is known (the floor, or the lowest stored component
    /// of an exact symbol).
    pub fn lowest(&self) -> i32 {
        self.floor
            .unwrap_or_else(|| self.components.keys().next().copied().unwrap_or(self.top))
    }

    /// Drops everything below `floor`.
    pub fn truncate(&self, floor: i32) -> Self {
        let mut out = self.clone();
        out.components.retain(|k, _| *k >= floor);
        out.floor = max_floor(self.floor, Some(floor));
        out
    }

    /// Redeclares the top degree; components above it must vanish.
    pub fn with_top(mut self, top: i32) -> Self {
        assert!(self.components.keys().all(|&k| k <= top));
        self.top = top;
        self
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let floor = max_floor(self.floor, other.floor);
        let mut out = Self {
            dim: self.dim,
            top: self.top.max(other.top),
            floor,
            components: self.components.clone(),
        };
        for (k, p) in &other.components {
            out.add_component(*k, p.clone());
        }
        if let Some(f) = floor {
            out.components.retain(|k, _| *k >= f);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_components(|p| p.neg())
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        self.map_components(|p| p.scale(s))
    }

    fn map_components(&self, f: impl Fn(&XiPoly) -> XiPoly) -> Self {
        let mut out = Self {
            components: BTreeMap::new(),
            ..self.clone()
        };
        for (k, p) in &self.components {
            out.add_component(*k, f(p));
        }
        out
    }

    /// `∂_ξ^α`: every degree drops by `|α|`.
    pub fn xi_derivative(&self, alpha: &[u32]) -> Self {
        let n: i32 = alpha.iter().sum::<u32>() as i32;
        let mut out = Self {
            dim: self.dim,
            top: self.top - n,
            floor: self.floor.map(|f| f - n),
            components: BTreeMap::new(),
        };
        for (k, p) in &self.components {
            out.add_component(k - n, p.xi_derivative_multi(alpha));
        }
        out
    }

    /// `∂_x^α`: degrees are preserved.
    pub fn x_derivative(&self, alpha: &[u32]) -> Self {
        self.map_components(|p| p.x_derivative_multi(alpha))
    }

    /// True when every component is polynomial in `ξ` (a differential
    /// operator symbol); returns the maximal ξ-order.
    fn polynomial_order(&self) -> Option<u32> {
        if !self.is_exact() {
            return None;
        }
        self.components
            .values()
            .map(XiPoly::max_poly_order)
            .try_fold(0u32, |acc, o| o.map(|o| acc.max(o)))
    }

    fn depth_guard(&self, operation: &str, top: i32, floor: i32) -> Result<()> {
        if top - floor > DEPTH_LIMIT {
            return Err(Error::DepthGuard {
                operation: operation.to_string(),
                top,
                floor,
                limit: DEPTH_LIMIT,
            });
        }
        Ok(())
    }

    /// Composition with the natural floor.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_to(other, None)
    }

    /// Composition `σ^{PQ}`, computed down to `max(requested, natural floor)`.
    ///
    /// The natural floor is `max(P.floor + Q.top, Q.floor + P.top)`. A product
    /// of two exact symbols stays exact when the left factor is polynomial in
    /// `ξ`, since the composition series then terminates.
    pub fn mul_to(&self, other: &Self, requested: Option<i32>) -> Result<Self> {
        self.check_dim(other)?;
        let d = self.dim;
        let top = self.top + other.top;
        let natural = match (self.floor, other.floor) {
            (None, None) => None,
            (Some(f), None) => Some(f + other.top),
            (None, Some(g)) => Some(g + self.top),
            (Some(f), Some(g)) => Some((f + other.top).max(g + self.top)),
        };
        let (floor, low) = match (natural, self.polynomial_order()) {
            (None, Some(order)) => (None, self.lowest() + other.lowest() - order as i32),
            _ => match max_floor(natural, requested) {
                Some(f) => (Some(f), f),
                None => {
                    return Err(Error::InvalidSpec(
                        "product of exact symbols with a non-polynomial left factor needs a floor".into(),
                    ))
                }
            },
        };
        self.depth_guard("symbol_product", top, low)?;

        let max_order = |k_low: i32, i: i32, j_top: i32| (i + j_top - k_low).max(0) as u32;
        let left: Vec<(i32, Derivatives)> = par::map(&self.components.iter().collect::<Vec<_>>(), |(i, p)| {
            let mut t = Derivatives::new((*p).clone(), true);
            t.fill(max_order(low, **i, other.top));
            (**i, t)
        });
        let right: Vec<(i32, Derivatives)> = par::map(&other.components.iter().collect::<Vec<_>>(), |(j, q)| {
            let mut t = Derivatives::new((*q).clone(), false);
            t.fill(max_order(low, **j, self.top));
            (**j, t)
        });

        let degrees: Vec<i32> = (low..=top).rev().collect();
        let parts = par::map(&degrees, |&k| {
            let mut acc = XiPoly::zero();
            for (i, a) in &left {
                for (j, b) in &right {
                    let n = i + j - k;
                    if n < 0 {
                        continue;
                    }
                    acc.add_assign(&composition_term(d, n as u32, a, b));
                }
            }
            (k, acc)
        });
        Ok(Self {
            dim: d,
            top,
            floor,
            components: parts.into_iter().filter(|(_, p)| !p.is_zero()).collect(),
        })
    }

    /// `P^k` for `k ≥ 0`, truncated at `floor`.
    pub fn pow(&self, k: u32, floor: Option<i32>) -> Result<Self> {
        let mut acc = Self::identity(self.dim);
        for _ in 0..k {
            acc = acc.mul_to(self, floor)?;
        }
        Ok(acc)
    }

    /// Inverse of the leading component when its square is `c |ξ|^{2p} Id`
    /// for a nonzero constant `c`: then `σ_p^{−1} = σ_p / (c |ξ|^{2p})`.
    fn leading_inverse(&self) -> Result<XiPoly> {
        let p = self.top;
        let lead = self.component(p)?;
        let sq = lead.mul(&lead);
        let not_inv = || Error::NotInvertible(format!("σ_{p} squared is not a constant multiple of |ξ|^{} Id", 2 * p));
        let mut terms = sq.terms();
        let (m, c) = terms.next().ok_or_else(not_inv)?;
        if terms.next().is_some() || *m != XiMonomial::norm_pow(self.dim, 2 * p) || !c.is_scalar() {
            return Err(not_inv());
        }
        let f = c.scalar_part();
        if !f.is_constant() || f.is_zero() {
            return Err(not_inv());
        }
        let inv_c = f.mean().inv()?;
        let inv_norm = XiPoly::term(
            XiMonomial::norm_pow(self.dim, -2 * p),
            Coeff::scalar(self.dim, TrigPoly::constant(self.dim, inv_c)),
        );
        Ok(lead.mul(&inv_norm))
    }

    /// Right parametrix `Q` with `σ(PQ) = 1` in every degree `≥ floor`.
    ///
    /// Uses the recursion `q_{−p} = σ_p^{−1}`,
    /// `q_{−p−m} = −σ_p^{−1} Σ (−i)^{|α|}/α! ∂_ξ^α σ_{p−a} ∂_x^α q_{−p−b}`
    /// over `a + b + |α| = m`, `b < m`.
    pub fn parametrix(&self, floor: i32) -> Result<Self> {
        let p = self.top;
        let floor = match self.floor {
            Some(f) => floor.max(f - 2 * p),
            None => floor,
        };
        self.depth_guard("parametrix", -p, floor)?;
        let d = self.dim;
        let inv = self.leading_inverse()?;
        let depth = (-p - floor).max(-1);

        let mut left: BTreeMap<i32, Derivatives> = BTreeMap::new();
        for a in 0..=depth.max(0) {
            let mut t = Derivatives::new(self.components.get(&(p - a)).cloned().unwrap_or_default(), true);
            t.fill((depth - a).max(0) as u32);
            left.insert(a, t);
        }

        let mut qs: Vec<Derivatives> = Vec::new();
        let mut components = BTreeMap::new();
        for m in 0..=depth {
            let q = if m == 0 {
                inv.clone()
            } else {
                let pairs: Vec<(i32, i32)> = (0..=m)
                    .flat_map(|a| (0..m).map(move |b| (a, b)))
                    .filter(|(a, b)| a + b <= m)
                    .collect();
                let parts = par::map(&pairs, |&(a, b)| {
                    composition_term(d, (m - a - b) as u32, &left[&a], &qs[b as usize])
                });
                let mut s = XiPoly::zero();
                for part in parts {
                    s.add_assign(&part);
                }
                inv.mul(&s).neg()
            };
            let mut t = Derivatives::new(q.clone(), false);
            t.fill((depth - m) as u32);
            qs.push(t);
            if !q.is_zero() {
                components.insert(-p - m, q);
            }
        }
        Ok(Self {
            dim: d,
            top: -p,
            floor: Some(floor),
            components,
        })
    }

    /// Square root `R` of an order-two symbol with leading part `c |ξ|² Id`,
    /// `c` a positive rational square: `r_1 = √c |ξ|` and
    /// `r_{1−j} = (σ_{2−j} − Σ') / (2√c |ξ|)`, where `Σ'` runs over the
    /// composition terms of `R·R` at degree `2 − j` not involving `r_{1−j}`.
    pub fn sqrt(&self, floor: i32) -> Result<Self> {
        let d = self.dim;
        let bad = |why: &str| Error::NotInvertible(format!("sqrt_symbol: {why}"));
        if self.top != 2 {
            return Err(bad("symbol is not of order 2"));
        }
        let lead = self.component(2)?;
        let mut terms = lead.terms();
        let (m, c) = terms.next().ok_or_else(|| bad("leading symbol vanishes"))?;
        if terms.next().is_some() || *m != XiMonomial::norm_pow(d, 2) || !c.is_scalar() {
            return Err(bad("leading symbol is not a multiple of |ξ|² Id"));
        }
        let f = c.scalar_part();
        if !f.is_constant() {
            return Err(bad("leading coefficient depends on x"));
        }
        let root = rational_sqrt(&f.mean()).ok_or_else(|| bad("leading coefficient is not a positive rational square"))?;

        let floor = match self.floor {
            Some(f) => floor.max(f - 1),
            None => floor,
        };
        self.depth_guard("sqrt_symbol", 1, floor)?;
        let depth = (1 - floor).max(0);
        let half_inv = XiPoly::term(
            XiMonomial::norm_pow(d, -1),
            Coeff::scalar(d, TrigPoly::constant(d, (&root * &GaussianRational::from_int(2)).inv()?)),
        );

        let r1 = XiPoly::term(XiMonomial::norm_pow(d, 1), Coeff::scalar(d, TrigPoly::constant(d, root)));
        let mut xi_tabs: Vec<Derivatives> = Vec::new();
        let mut x_tabs: Vec<Derivatives> = Vec::new();
        let mut components = BTreeMap::new();
        for j in 0..=depth {
            let r = if j == 0 {
                r1.clone()
            } else {
                let mut triples = Vec::new();
                for a in 0..j {
                    for b in 0..j {
                        if a + b <= j {
                            triples.push((a, b));
                        }
                    }
                }
                let parts = par::map(&triples, |&(a, b)| {
                    composition_term(d, (j - a - b) as u32, &xi_tabs[a as usize], &x_tabs[b as usize])
                });
                let mut s = self.components.get(&(2 - j)).cloned().unwrap_or_default();
                for part in parts {
                    s = s.sub(&part);
                }
                half_inv.mul(&s)
            };
            let mut tx = Derivatives::new(r.clone(), true);
            tx.fill((depth - j) as u32);
            let mut tq = Derivatives::new(r.clone(), false);
            tq.fill((depth - j) as u32);
            xi_tabs.push(tx);
            x_tabs.push(tq);
            if !r.is_zero() {
                components.insert(1 - j, r);
            }
        }
        Ok(Self {
            dim: d,
            top: 1,
            floor: Some(floor),
            components,
        })
    }

    /// Symbol of the formal adjoint,
    /// `σ^{P*} ∼ Σ_α (−i)^{|α|}/α! ∂_ξ^α ∂_x^α (σ^P)^*`.
    pub fn adjoint(&self) -> Result<Self> {
        let low = match self.floor {
            Some(f) => f,
            None => {
                let order = self.polynomial_order().ok_or_else(|| {
                    Error::InvalidSpec("adjoint of an exact non-polynomial symbol needs a floor".into())
                })?;
                self.lowest() - order as i32
            }
        };
        let mut out = Self {
            dim: self.dim,
            top: self.top,
            floor: self.floor,
            components: BTreeMap::new(),
        };
        for (k, p) in &self.components {
            let star = p.map_coeffs(|c| c.adjoint());
            for n in 0..=(k - low).max(0) as u32 {
                for alpha in multi_indices(self.dim, n) {
                    let term = star.x_derivative_multi(&alpha).xi_derivative_multi(&alpha);
                    if !term.is_zero() {
                        out.add_component(k - n as i32, term.scale(&alpha_weight(&alpha)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// True when `self − other` vanishes in every degree known for both.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    /// Common-denominator view of one component.
    pub fn homo_terms(&self, k: i32) -> Result<Vec<HomoTerm>> {
        Ok(self.component(k)?.homo_terms())
    }
}

/// Square root of a positive rational square, as a Gaussian rational.
fn rational_sqrt(q: &GaussianRational) -> Option<GaussianRational> {
    if !q.is_real() || !q.re().is_positive() {
        return None;
    }
    let num = q.re().numer();
    let den = q.re().denom();
    let (rn, rd): (BigInt, BigInt) = (num.sqrt(), den.sqrt());
    if &rn * &rn != num || &rd * &rd != den {
        return None;
    }
    Some(GaussianRational::from_big(num_rational::BigRational::new(rn, rd)))
}

/// Free-function form of [`SymbolExpansion::mul`].
pub fn symbol_product(p: &SymbolExpansion, q: &SymbolExpansion) -> Result<SymbolExpansion> {
    p.mul(q)
}

/// Free-function form of [`SymbolExpansion::parametrix`].
pub fn parametrix(p: &SymbolExpansion, floor: i32) -> Result<SymbolExpansion> {
    p.parametrix(floor)
}

/// Free-function form of [`SymbolExpansion::sqrt`].
pub fn sqrt_symbol(p2: &SymbolExpansion, floor: i32) -> Result<SymbolExpansion> {
    p2.sqrt(floor)
}

impl fmt::Display for SymbolExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "symbol on T^{} of order {}", self.dim, self.top)?;
        match self.floor {
            Some(fl) => writeln!(f, ", known down to degree {fl}")?,
            None => writeln!(f, ", exact")?,
        }
        for (k, p) in self.components() {
            for t in p.homo_terms() {
                writeln!(f, "  σ_{k}: {t}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SymbolExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SymbolExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Component {
            degree: i32,
            terms: Vec<HomoTerm>,
        }
        #[derive(Serialize)]
        struct Dump {
            dim: usize,
            top: i32,
            floor: Option<i32>,
            components: Vec<Component>,
        }
        Dump {
            dim: self.dim,
            top: self.top,
            floor: self.floor,
            components: self
                .components()
                .map(|(degree, p)| Component {
                    degree,
                    terms: p.homo_terms(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::clifford::CliffordElement;
use crate::coefficients::{GaussianRational, TrigPoly};

/// Matrix-valued coefficient function of a symbol: a Clifford element whose
/// coefficients are trigonometric polynomials in `x`.
pub type Coeff = CliffordElement<TrigPoly>;

/// `ξ^β |ξ|^r` in reduced form: `β_1 ∈ {0, 1}` (higher powers of `ξ_1` are
/// rewritten through `ξ_1² = |ξ|² − Σ_{i≥2} ξ_i²`).
///
/// Reduced monomials form a basis of the ring generated by `ξ_1, …, ξ_d` and
/// `|ξ|^{±1}`, so a polynomial in them is zero exactly when its map is empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct XiMonomial {
    pub exps: Vec<u32>,
    pub norm: i32,
}

impl XiMonomial {
    pub fn one(dim: usize) -> Self {
        Self {
            exps: vec![0; dim],
            norm: 0,
        }
    }

    pub fn xi(dim: usize, i: usize) -> Self {
        let mut m = Self::one(dim);
        m.exps[i] = 1;
        m
    }

    pub fn norm_pow(dim: usize, r: i32) -> Self {
        Self {
            exps: vec![0; dim],
            norm: r,
        }
    }

    /// Homogeneity degree `|β| + r`.
    pub fn degree(&self) -> i32 {
        self.exps.iter().sum::<u32>() as i32 + self.norm
    }

    pub fn is_reduced(&self) -> bool {
        self.exps.first().is_none_or(|&e| e < 2)
    }

    /// Expands an arbitrary `ξ^β |ξ|^r` into reduced monomials with integer
    /// weights.
    pub fn reduce(exps: Vec<u32>, norm: i32) -> Vec<(XiMonomial, i64)> {
        let d = exps.len();
        if d == 0 || exps[0] < 2 {
            return vec![(XiMonomial { exps, norm }, 1)];
        }
        // ξ_1^{2m+ε} = ξ_1^ε (|ξ|² − Σ_{i≥2} ξ_i²)^m, expanded multinomially.
        let m = exps[0] / 2;
        let eps = exps[0] % 2;
        let mut out = Vec::new();
        let mut ks = vec![0u32; d];
        compositions(m, d, 0, &mut ks, &mut |ks| {
            // ks[0] counts |ξ|² factors, ks[i] the −ξ_i² factors
            let mut coeff = multinomial(m, ks);
            let minus: u32 = ks[1..].iter().sum();
            if minus % 2 == 1 {
                coeff = -coeff;
            }
            let mut e = exps.clone();
            e[0] = eps;
            for i in 1..d {
                e[i] += 2 * ks[i];
            }
            out.push((
                XiMonomial {
                    exps: e,
                    norm: norm + 2 * ks[0] as i32,
                },
                coeff,
            ));
        });
        out
    }

    pub fn mul(&self, other: &Self) -> Vec<(XiMonomial, i64)> {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Self::reduce(exps, self.norm + other.norm)
    }

    /// `∂_{ξ_i}` of the monomial, as a reduced polynomial with integer weights.
    pub fn derivative(&self, i: usize) -> Vec<(XiMonomial, i64)> {
        let mut out = Vec::new();
        if self.exps[i] > 0 {
            let mut e = self.exps.clone();
            e[i] -= 1;
            out.extend(
                Self::reduce(e, self.norm)
                    .into_iter()
                    .map(|(m, c)| (m, c * self.exps[i] as i64)),
            );
        }
        if self.norm != 0 {
            // ∂_i |ξ|^r = r ξ_i |ξ|^{r−2}
            let mut e = self.exps.clone();
            e[i] += 1;
            out.extend(
                Self::reduce(e, self.norm - 2)
                    .into_iter()
                    .map(|(m, c)| (m, c * self.norm as i64)),
            );
        }
        out
    }
}

fn compositions(total: u32, parts: usize, at: usize, ks: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if at + 1 == parts {
        ks[at] = total;
        f(ks);
        return;
    }
    for k in 0..=total {
        ks[at] = k;
        compositions(total - k, parts, at + 1, ks, f);
    }
}

fn multinomial(n: u32, ks: &[u32]) -> i64 {
    let mut out: i64 = 1;
    let mut rest = n as i64;
    for &k in ks {
        out *= binomial(rest, k as i64);
        rest -= k as i64;
    }
    out
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

/// Polynomial in reduced ξ-monomials with matrix-valued coefficients.
#[derive(Clone, PartialEq, Default)]
pub struct XiPoly {
    terms: BTreeMap<XiMonomial, Coeff>,
}

impl XiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(m: XiMonomial, c: Coeff) -> Self {
        let mut out = Self::zero();
        for (mm, w) in XiMonomial::reduce(m.exps, m.norm) {
            out.add_term(mm, c.scale(&GaussianRational::from_int(w)));
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XiMonomial, &Coeff)> {
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

    /// Adds `c · m` for an already reduced monomial.
    pub fn add_term(&mut self, m: XiMonomial, c: Coeff) {
        debug_assert!(m.is_reduced());
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                v.add_assign(&c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        self.map_coeffs(|c| c.scale(s))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Coeff) -> Coeff) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Product; coefficients are multiplied in the given order.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1.mul(c2);
                if c.is_zero() {
                    continue;
                }
                for (m, w) in m1.mul(m2) {
                    out.add_term(m, c.scale(&GaussianRational::from_int(w)));
                }
            }
        }
        out
    }

    pub fn xi_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (mm, w) in m.derivative(i) {
                out.add_term(mm, c.scale(&GaussianRational::from_int(w)));
            }
        }
        out
    }

    pub fn xi_derivative_multi(&self, alpha: &[u32]) -> Self {
        let mut out = self.clone();
        for (i, &n) in alpha.iter().enumerate() {
            for _ in 0..n {
                if out.is_zero() {
                    return out;
                }
                out = out.xi_derivative(i);
            }
        }
        out
    }

    pub fn x_derivative_multi(&self, alpha: &[u32]) -> Self {
        if alpha.iter().all(|&a| a == 0) {
            return self.clone();
        }
        self.map_coeffs(|c| c.map_coeffs(|f| f.derivative_multi(alpha)))
    }

    /// True when no coefficient depends on `x`.
    pub fn is_x_constant(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.coeffs().all(|(_, f)| f.is_constant()))
    }

    /// Largest `|β| + r` over terms; the order beyond which ξ-derivatives of a
    /// polynomial symbol vanish.
    pub fn max_poly_order(&self) -> Option<u32> {
        let mut best = 0u32;
        for m in self.terms.keys() {
            if m.norm < 0 || m.norm % 2 != 0 {
                return None;
            }
            best = best.max(m.degree() as u32);
        }
        Some(best)
    }

    /// Common-denominator view grouped by the parity of the `|ξ|` exponent.
    pub fn homo_terms(&self) -> Vec<HomoTerm> {
        let mut out = Vec::new();
        for parity in [0, 1] {
            let group: Vec<_> = self
                .terms
                .iter()
                .filter(|(m, _)| m.norm.rem_euclid(2) == parity)
                .collect();
            if group.is_empty() {
                continue;
            }
            let n = -group.iter().map(|(m, _)| m.norm).min().unwrap_or(0);
            let mut numerator: BTreeMap<Vec<u32>, Coeff> = BTreeMap::new();
            for (m, c) in group {
                // |ξ|^{r+n} with r+n even and nonnegative becomes (Σ ξ_i²)^{(r+n)/2}
                let half = ((m.norm + n) / 2) as u32;
                let mut acc: Vec<(Vec<u32>, i64)> = vec![(m.exps.clone(), 1)];
                for _ in 0..half {
                    let mut next = Vec::new();
                    for (e, w) in &acc {
                        for i in 0..e.len() {
                            let mut e2 = e.clone();
                            e2[i] += 2;
                            next.push((e2, *w));
                        }
                    }
                    acc = next;
                }
                for (e, w) in acc {
                    let entry = numerator.entry(e).or_insert_with(|| Coeff::zero(c.dim()));
                    entry.add_assign(&c.scale(&GaussianRational::from_int(w)));
                }
            }
            numerator.retain(|_, c| !c.is_zero());
            out.push(HomoTerm {
                norm_power: n,
                numerator,
            });
        }
        out
    }
}

/// `numerator(ξ) / |ξ|^norm_power` with a polynomial numerator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomoTerm {
    pub norm_power: i32,
    #[serde(serialize_with = "serialize_numerator")]
    pub numerator: BTreeMap<Vec<u32>, Coeff>,
}

fn serialize_numerator<S: serde::Serializer>(
    numerator: &BTreeMap<Vec<u32>, Coeff>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        xi: &'a [u32],
        coeff: &'a Coeff,
    }
    s.collect_seq(numerator.iter().map(|(xi, coeff)| Entry { xi, coeff }))
}

fn xi_label(exps: &[u32]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("ξ{}", i + 1)
            } else {
                format!("ξ{}^{e}", i + 1)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("·")
    }
}

impl fmt::Display for XiMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", xi_label(&self.exps))?;
        match self.norm {
            0 => Ok(()),
            r if r < 0 => write!(f, "/|ξ|^{}", -r),
            r => write!(f, "·|ξ|^{r}"),
        }
    }
}

impl fmt::Display for HomoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .numerator
            .iter()
            .map(|(e, c)| format!("[{c}]·{}", xi_label(e)))
            .collect();
        write!(f, "({}) / |ξ|^{}", parts.join(" + "), self.norm_power)
    }
}

impl fmt::Debug for XiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(m, c)| (m.to_string(), c)))
            .finish()
    }
}

impl fmt::Display for XiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("[{c}]·{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

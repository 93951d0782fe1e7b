//! Clifford algebra on `d` anticommuting selfadjoint generators.
//!
//! Generators satisfy `γ_i γ_j + γ_j γ_i = 2 δ_ij`. Elements are stored on the
//! basis of ordered products `γ_S = γ_{s_1} ⋯ γ_{s_k}` with `s_1 < ⋯ < s_k`,
//! encoded as a bitmask `S`. Generator indices are zero-based in the API.
//!
//! The trace is defined algebraically: `Tr(x) = 2^{⌊d/2⌋} · x_∅`, exact in
//! every dimension and over every coefficient ring.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::coefficients::{Conjugate, GaussianRational, Ring};
use crate::error::{Error, Result};

/// Basis word encoded as a bitmask of generator indices.
pub type Blade = u32;

#[derive(Clone, PartialEq, Default)]
pub struct CliffordElement<R> {
    dim: usize,
    coeffs: BTreeMap<Blade, R>,
}

/// Sign of `γ_A γ_B = sign · γ_{A xor B}`.
pub fn blade_sign(a: Blade, b: Blade) -> i64 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        // generators of `a` strictly above `bit` must hop over it
        swaps += (a >> (bit + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Spinor dimension `2^{⌊d/2⌋}`.
pub fn spinor_dim(d: usize) -> i64 {
    1i64 << (d / 2)
}

impl<R: Ring> CliffordElement<R> {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, c: R) -> Self {
        Self::from_blade(dim, 0, c)
    }

    pub fn from_blade(dim: usize, blade: Blade, c: R) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(blade, c);
        }
        Self { dim, coeffs }
    }

    /// `c · γ_i`.
    pub fn generator(dim: usize, i: usize, c: R) -> Self {
        assert!(i < dim, "generator index {i} out of range for d = {dim}");
        Self::from_blade(dim, 1 << i, c)
    }

    /// `c · γ_{i_1} γ_{i_2} ⋯` for an arbitrary index word (repeats allowed).
    pub fn word(dim: usize, indices: &[usize], c: R) -> Self {
        let mut blade: Blade = 0;
        let mut sign = 1;
        for &i in indices {
            assert!(i < dim, "generator index {i} out of range for d = {dim}");
            sign *= blade_sign(blade, 1 << i);
            blade ^= 1 << i;
        }
        Self::from_blade(dim, blade, c.scale(&GaussianRational::from_int(sign)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (Blade, &R)> {
        self.coeffs.iter().map(|(b, c)| (*b, c))
    }

    pub fn coefficient(&self, blade: Blade) -> Option<&R> {
        self.coeffs.get(&blade)
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

    /// True when only the empty word carries a coefficient.
    pub fn is_scalar(&self) -> bool {
        self.coeffs.keys().all(|&b| b == 0)
    }

    pub fn scalar_part(&self) -> R {
        self.coeffs.get(&0).cloned().unwrap_or_default()
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

    pub fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (b, c) in &other.coeffs {
            match self.coeffs.get_mut(b) {
                Some(v) => {
                    v.add_assign_ref(c);
                    if v.is_zero() {
                        self.coeffs.remove(b);
                    }
                }
                None => {
                    self.coeffs.insert(*b, c.clone());
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg_ref())
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.dim);
        }
        self.map_coeffs(|c| c.scale(s))
    }

    /// Multiplies every coefficient by a ring element.
    pub fn scale_ring(&self, s: &R) -> Self {
        self.map_coeffs(|c| c.mul_ref(s))
    }

    pub fn map_coeffs(&self, f: impl Fn(&R) -> R) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(b, c)| (*b, f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self { dim: self.dim, coeffs }
    }

    /// Changes the coefficient ring.
    pub fn map_ring<S: Ring>(&self, f: impl Fn(&R) -> S) -> CliffordElement<S> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(b, c)| (*b, f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        CliffordElement { dim: self.dim, coeffs }
    }

    /// Clifford product. Panics on dimension mismatch; see [`Self::try_mul`].
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("Clifford dimensions differ")
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut coeffs: BTreeMap<Blade, R> = BTreeMap::new();
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let mut term = x.mul_ref(y);
                if blade_sign(*a, *b) < 0 {
                    term = term.neg_ref();
                }
                match coeffs.get_mut(&(a ^ b)) {
                    Some(v) => v.add_assign_ref(&term),
                    None => {
                        coeffs.insert(a ^ b, term);
                    }
                }
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        Ok(Self { dim: self.dim, coeffs })
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    /// `Tr(x) = 2^{⌊d/2⌋} · x_∅`.
    pub fn trace(&self) -> R {
        self.scalar_part()
            .scale(&GaussianRational::from_int(spinor_dim(self.dim)))
    }

    pub fn pow(&self, k: u32, one: R) -> Self {
        let mut acc = Self::scalar(self.dim, one);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl<R: Ring + Conjugate> CliffordElement<R> {
    /// Antilinear antihomomorphism: reverses every word and conjugates the
    /// coefficients. Generators are selfadjoint.
    pub fn adjoint(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(b, c)| {
                let k = b.count_ones() as i64;
                // reversing a word of k distinct generators costs k(k-1)/2 swaps
                let sign = if (k * (k - 1) / 2) % 2 == 0 { 1 } else { -1 };
                (*b, c.conj().scale(&GaussianRational::from_int(sign)))
            })
            .collect();
        Self { dim: self.dim, coeffs }
    }
}

impl CliffordElement<GaussianRational> {
    /// Identity element over the Gaussian rationals.
    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, GaussianRational::one())
    }

    pub fn gamma(dim: usize, i: usize) -> Self {
        Self::generator(dim, i, GaussianRational::one())
    }
}

/// Grading operator `χ = (−i)^{d/2} γ_1 γ_2 ⋯ γ_d`, for even `d`.
pub fn chirality<R: Ring>(d: usize, one: R) -> Result<CliffordElement<R>> {
    if d % 2 != 0 {
        return Err(Error::UnsupportedDimension(d, "chirality needs an even dimension"));
    }
    let phase = GaussianRational::i_pow(-((d / 2) as i64));
    let all: Vec<usize> = (0..d).collect();
    Ok(CliffordElement::word(d, &all, one.scale(&phase)))
}

/// Boundary chirality `χ = (−i)^{d/2−1} γ_1 ⋯ γ_{d−1}`, for even `d`.
///
/// Commutes with `γ_a` for `a < d` and anticommutes with the normal generator
/// `γ_d`.
pub fn boundary_chirality<R: Ring>(d: usize, one: R) -> Result<CliffordElement<R>> {
    if d % 2 != 0 || d < 2 {
        return Err(Error::UnsupportedDimension(
            d,
            "boundary chirality needs an even dimension",
        ));
    }
    let phase = GaussianRational::i_pow(-((d / 2) as i64 - 1));
    let tangential: Vec<usize> = (0..d - 1).collect();
    Ok(CliffordElement::word(d, &tangential, one.scale(&phase)))
}

/// Spectral projections `Π_± = ½(1 ± χ)` of an involution `χ`.
pub fn projections<R: Ring>(
    chi: &CliffordElement<R>,
    one: R,
) -> (CliffordElement<R>, CliffordElement<R>) {
    let half = GaussianRational::ratio(1, 2);
    let id = CliffordElement::scalar(chi.dim(), one);
    (id.add(chi).scale(&half), id.sub(chi).scale(&half))
}

fn blade_label(b: Blade) -> String {
    if b == 0 {
        return "1".to_string();
    }
    let idx: Vec<String> = (0..32)
        .filter(|i| b & (1 << i) != 0)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("g[{}]", idx.join(","))
}

impl<R: Ring + fmt::Display> fmt::Display for CliffordElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(b, c)| format!("({c}) {}", blade_label(*b)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<R: Ring> fmt::Debug for CliffordElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.coeffs.iter().map(|(b, c)| (blade_label(*b), c)))
            .finish()
    }
}

/// JSON debug dump: `{"dim": d, "coeffs": {"g[1,2]": ..}}`.
impl<R: Ring + Serialize> Serialize for CliffordElement<R> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dump<'a, R> {
            dim: usize,
            coeffs: BTreeMap<String, &'a R>,
        }
        Dump {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(b, c)| (blade_label(*b), c)).collect(),
        }
        .serialize(s)
    }
}

impl<R: Ring> Ring for CliffordElement<R> {
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        if self.dim == 0 {
            self.dim = other.dim;
        }
        self.add_assign(other);
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        CliffordElement::scale(self, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::GaussianRational as Q;
    use proptest::prelude::*;

    type Cl = CliffordElement<Q>;

    fn g(d: usize, i: usize) -> Cl {
        Cl::gamma(d, i)
    }

    // Dense complex matrices for the brute-force representation oracle.
    type Mat = Vec<Vec<(f64, f64)>>;

    fn mat_mul(a: &Mat, b: &Mat) -> Mat {
        let n = a.len();
        let mut out = vec![vec![(0.0, 0.0); n]; n];
        for i in 0..n {
            for k in 0..n {
                let (ar, ai) = a[i][k];
                if ar == 0.0 && ai == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let (br, bi) = b[k][j];
                    out[i][j].0 += ar * br - ai * bi;
                    out[i][j].1 += ar * bi + ai * br;
                }
            }
        }
        out
    }

    fn kron(a: &Mat, b: &Mat) -> Mat {
        let (n, m) = (a.len(), b.len());
        let mut out = vec![vec![(0.0, 0.0); n * m]; n * m];
        for i in 0..n {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..m {
                        let (ar, ai) = a[i][j];
                        let (br, bi) = b[k][l];
                        out[i * m + k][j * m + l] = (ar * br - ai * bi, ar * bi + ai * br);
                    }
                }
            }
        }
        out
    }

    fn pauli() -> [Mat; 4] {
        let z = (0.0, 0.0);
        let one = (1.0, 0.0);
        [
            vec![vec![one, z], vec![z, one]],
            vec![vec![z, one], vec![one, z]],
            vec![vec![z, (0.0, -1.0)], vec![(0.0, 1.0), z]],
            vec![vec![one, z], vec![z, (-1.0, 0.0)]],
        ]
    }

    /// Irreducible representation: d = 2, 3 on C², d = 4 on C⁴.
    fn gamma_matrices(d: usize) -> Vec<Mat> {
        let [id, x, y, z] = pauli();
        match d {
            2 => vec![x, y],
            3 => vec![x, y, z],
            4 => vec![kron(&x, &id), kron(&y, &id), kron(&z, &x), kron(&z, &y)],
            _ => unreachable!(),
        }
    }

    fn represent(x: &Cl) -> Mat {
        let d = x.dim();
        let gs = gamma_matrices(d);
        let n = gs[0].len();
        let mut out = vec![vec![(0.0, 0.0); n]; n];
        for (b, c) in x.coeffs() {
            let mut m: Mat = (0..n)
                .map(|i| (0..n).map(|j| if i == j { (1.0, 0.0) } else { (0.0, 0.0) }).collect())
                .collect();
            for (i, gm) in gs.iter().enumerate() {
                if b & (1 << i) != 0 {
                    m = mat_mul(&m, gm);
                }
            }
            let (cr, ci) = c.to_f64_pair();
            for i in 0..n {
                for j in 0..n {
                    let (mr, mi) = m[i][j];
                    out[i][j].0 += cr * mr - ci * mi;
                    out[i][j].1 += cr * mi + ci * mr;
                }
            }
        }
        out
    }

    fn mat_close(a: &Mat, b: &Mat) -> bool {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .all(|(x, y)| (x.0 - y.0).abs() < 1e-12 && (x.1 - y.1).abs() < 1e-12)
    }

    #[test]
    fn generator_square_and_anticommutation() {
        assert_eq!(g(3, 0).mul(&g(3, 0)), Cl::one(3));
        let g12 = Cl::word(3, &[0, 1], Q::one());
        assert_eq!(g(3, 0).mul(&g(3, 1)), g12);
        assert_eq!(g(3, 1).mul(&g(3, 0)), g12.neg());
    }

    #[test]
    fn word_product_matches_matrices() {
        for d in 2..=4 {
            let a = Cl::word(d, &[0, 1], Q::one());
            let b = Cl::word(d, &[1, d - 1], Q::one());
            let ab = a.mul(&b);
            assert!(mat_close(&represent(&ab), &mat_mul(&represent(&a), &represent(&b))));
        }
        // (γ1γ2)(γ2γ3) = γ1γ3
        let lhs = Cl::word(4, &[0, 1], Q::one()).mul(&Cl::word(4, &[1, 2], Q::one()));
        assert_eq!(lhs, Cl::word(4, &[0, 2], Q::one()));
    }

    #[test]
    fn trace_values() {
        assert!(Cl::word(4, &[0, 1, 2], Q::one()).trace().is_zero());
        for i in 0..4 {
            for j in 0..4 {
                let t = g(4, i).mul(&g(4, j)).trace();
                let expected = if i == j { Q::from_int(4) } else { Q::zero() };
                assert_eq!(t, expected);
            }
        }
    }

    #[test]
    fn commutator_trace_formula() {
        let d = 4;
        let delta = |a: usize, b: usize| if a == b { 1 } else { 0 };
        for mu in 0..d {
            for nu in 0..d {
                for rho in 0..d {
                    for sigma in 0..d {
                        let lhs = g(d, mu)
                            .commutator(&g(d, nu))
                            .mul(&g(d, rho).commutator(&g(d, sigma)))
                            .trace();
                        let rhs = 4 * spinor_dim(d)
                            * (delta(mu, sigma) * delta(nu, rho) - delta(mu, rho) * delta(nu, sigma));
                        assert_eq!(lhs, Q::from_int(rhs));
                    }
                }
            }
        }
    }

    #[test]
    fn chirality_properties() {
        let chi2 = chirality(2, Q::one()).unwrap();
        assert_eq!(chi2, Cl::word(2, &[0, 1], Q::complex((0, 1), (-1, 1))));
        assert_eq!(chi2.mul(&chi2), Cl::one(2));
        let chi4 = chirality(4, Q::one()).unwrap();
        assert!(chi4.anticommutator(&g(4, 0)).is_zero());
        assert!(chirality(3, Q::one()).is_err());
    }

    #[test]
    fn chirality_trace_against_pauli() {
        let chi = chirality(2, Q::one()).unwrap();
        let x = chi.mul(&Cl::word(2, &[0, 1], Q::one()));
        let m = represent(&x);
        let tr = (m[0][0].0 + m[1][1].0, m[0][0].1 + m[1][1].1);
        let (re, im) = x.trace().to_f64_pair();
        assert!((re - tr.0).abs() < 1e-12 && (im - tr.1).abs() < 1e-12);
        // Tr(χ γ1γ2) = -i Tr(γ1γ2γ1γ2) = 2i
        assert_eq!(x.trace(), Q::complex((0, 1), (2, 1)));
    }

    #[test]
    fn boundary_chirality_relations() {
        for d in [2, 4, 6] {
            let chi = boundary_chirality(d, Q::one()).unwrap();
            assert_eq!(chi.mul(&chi), Cl::one(d));
            assert!(chi.anticommutator(&g(d, d - 1)).is_zero());
            for a in 0..d - 1 {
                assert!(chi.commutator(&g(d, a)).is_zero());
            }
            assert!(chi.trace().is_zero());
            let (p, m) = projections(&chi, Q::one());
            assert_eq!(p.trace(), Q::from_int(spinor_dim(d) / 2));
            assert_eq!(m.trace(), Q::from_int(spinor_dim(d) / 2));
            assert!(p.mul(&p).sub(&p).is_zero());
            assert!(p.mul(&m).is_zero());
        }
    }

    #[test]
    fn adjoint_examples() {
        let g12 = Cl::word(2, &[0, 1], Q::one());
        assert_eq!(g12.adjoint(), g(2, 1).mul(&g(2, 0)));
        assert_eq!(g12.adjoint(), g12.neg());
        assert_eq!(Cl::scalar(2, Q::i()).adjoint(), Cl::scalar(2, -Q::i()));
        assert_eq!(g(3, 2).adjoint(), g(3, 2));
    }

    #[test]
    fn contracted_gamma_identity() {
        for d in [2usize, 4, 6, 8] {
            for mu in 0..d {
                for tau in 0..d {
                    let mut lhs = Cl::zero(d);
                    for nu in 0..d {
                        lhs.add_assign(&g(d, mu).mul(&g(d, nu)).mul(&g(d, tau)).mul(&g(d, nu)));
                    }
                    let rhs = g(d, mu).mul(&g(d, tau)).trace().scale(&Q::from_int(2 - d as i64));
                    assert_eq!(lhs.trace(), rhs);
                }
            }
        }
    }

    fn arb_element(d: usize) -> impl Strategy<Value = Cl> {
        prop::collection::vec((0u32..(1 << d), -3i64..=3, -3i64..=3), 0..6).prop_map(move |ts| {
            let mut x = Cl::zero(d);
            for (b, re, im) in ts {
                x.add_assign(&Cl::from_blade(d, b, Q::complex((re, 1), (im, 2))));
            }
            x
        })
    }

    proptest! {
        #[test]
        fn associative(x in arb_element(4), y in arb_element(4), z in arb_element(4)) {
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }

        #[test]
        fn trace_cyclic(x in arb_element(5), y in arb_element(5)) {
            prop_assert_eq!(x.mul(&y).trace(), y.mul(&x).trace());
        }

        #[test]
        fn adjoint_is_involutive_antihomomorphism(x in arb_element(4), y in arb_element(4)) {
            prop_assert_eq!(x.adjoint().adjoint(), x.clone());
            prop_assert_eq!(x.mul(&y).adjoint(), y.adjoint().mul(&x.adjoint()));
        }

        #[test]
        fn matches_matrix_representation(x in arb_element(4), y in arb_element(4)) {
            prop_assert!(mat_close(&represent(&x.mul(&y)), &mat_mul(&represent(&x), &represent(&y))));
            let m = represent(&x);
            let tr: (f64, f64) = (0..4).fold((0.0, 0.0), |acc, i| (acc.0 + m[i][i].0, acc.1 + m[i][i].1));
            let (re, im) = x.trace().to_f64_pair();
            prop_assert!((re - tr.0).abs() < 1e-12 && (im - tr.1).abs() < 1e-12);
        }

        #[test]
        fn odd_words_traceless(word in prop::collection::vec(0usize..5, 1..8)) {
            prop_assume!(word.len() % 2 == 1);
            prop_assert!(Cl::word(5, &word, Q::one()).trace().is_zero());
        }

        #[test]
        fn chirality_kills_incomplete_words(b in 0u32..(1 << 4)) {
            prop_assume!(b != 0b1111);
            let chi = chirality(4, Q::one()).unwrap();
            prop_assert!(chi.mul(&Cl::from_blade(4, b, Q::one())).trace().is_zero());
        }
    }
}

//! Floating-point oracles shared by the integration tests.
//!
//! Everything here is independent of the exact engine: gamma matrices are
//! explicit Kronecker products of Pauli matrices, symbols are evaluated
//! pointwise and integrals use ordinary quadrature.

#![allow(dead_code)]

pub use num_complex::Complex64 as C;
use wodzicki::clifford::Blade;
use wodzicki::coefficients::{GaussianRational, TrigPoly};
use wodzicki::symbols::{Coeff, SymbolExpansion, XiPoly};

pub const I: C = C::new(0.0, 1.0);

pub fn c(q: &GaussianRational) -> C {
    let (re, im) = q.to_f64_pair();
    C::new(re, im)
}

/// Dense square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<C>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            a: vec![C::new(0.0, 0.0); n * n],
        }
    }

    pub fn eye(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = C::new(1.0, 0.0);
        }
        m
    }

    fn from_rows(rows: [[C; 2]; 2]) -> Self {
        Self {
            n: 2,
            a: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> C {
        self.a[i * self.n + j]
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.at(i, k);
                if x == C::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += x * o.at(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat {
            n: self.n,
            a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        self.add(&o.scale(C::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C) -> Mat {
        Mat {
            n: self.n,
            a: self.a.iter().map(|x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> C {
        (0..self.n).map(|i| self.at(i, i)).sum()
    }

    pub fn kron(&self, o: &Mat) -> Mat {
        let n = self.n * o.n;
        let mut out = Mat::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..o.n {
                    for l in 0..o.n {
                        out.a[(i * o.n + k) * n + j * o.n + l] = self.at(i, j) * o.at(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

fn pauli() -> [Mat; 3] {
    let o = C::new(0.0, 0.0);
    let e = C::new(1.0, 0.0);
    [
        Mat::from_rows([[o, e], [e, o]]),
        Mat::from_rows([[o, -I], [I, o]]),
        Mat::from_rows([[e, o], [o, -e]]),
    ]
}

/// Hermitian gamma matrices of size `2^{d/2}` with `γ_i γ_j + γ_j γ_i = 2δ_ij`,
/// for even `d`.
pub fn gammas(d: usize) -> Vec<Mat> {
    assert!(d % 2 == 0 && d >= 2, "explicit gamma matrices are built for even d");
    let [s1, s2, s3] = pauli();
    let m = d / 2;
    let mut out = Vec::with_capacity(d);
    for k in 0..m {
        for s in [&s1, &s2] {
            let mut g = Mat::eye(1);
            for j in 0..m {
                let f = match j.cmp(&k) {
                    std::cmp::Ordering::Less => s3.clone(),
                    std::cmp::Ordering::Equal => s.clone(),
                    std::cmp::Ordering::Greater => Mat::eye(2),
                };
                g = g.kron(&f);
            }
            out.push(g);
        }
    }
    out
}

/// `γ_{s_1} ⋯ γ_{s_k}` for the bits of `blade`, in increasing order.
pub fn blade_matrix(g: &[Mat], blade: Blade) -> Mat {
    let mut m = Mat::eye(g[0].n);
    for (i, gi) in g.iter().enumerate() {
        if blade & (1 << i) != 0 {
            m = m.mul(gi);
        }
    }
    m
}

pub fn eval_trig(f: &TrigPoly, x: &[f64]) -> C {
    f.modes()
        .map(|(l, q)| {
            let phase: f64 = l.iter().zip(x).map(|(&li, xi)| li as f64 * xi).sum();
            c(q) * C::from_polar(1.0, phase)
        })
        .sum()
}

pub fn eval_coeff(g: &[Mat], co: &Coeff, x: &[f64]) -> Mat {
    let mut out = Mat::zeros(g[0].n);
    for (b, f) in co.coeffs() {
        out = out.add(&blade_matrix(g, b).scale(eval_trig(f, x)));
    }
    out
}

pub fn eval_xipoly(g: &[Mat], p: &XiPoly, x: &[f64], xi: &[f64]) -> Mat {
    let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut out = Mat::zeros(g[0].n);
    for (m, co) in p.terms() {
        let mono: f64 = m.exps.iter().zip(xi).map(|(&e, v)| v.powi(e as i32)).product::<f64>() * r.powi(m.norm);
        out = out.add(&eval_coeff(g, co, x).scale(C::new(mono, 0.0)));
    }
    out
}

/// Sum of all known components at `(x, ξ)`.
pub fn eval_symbol(g: &[Mat], s: &SymbolExpansion, x: &[f64], xi: &[f64]) -> Mat {
    let mut out = Mat::zeros(g[0].n);
    for (_, p) in s.components() {
        out = out.add(&eval_xipoly(g, p, x, xi));
    }
    out
}

/// `γ·η = Σ γ_j η_j`.
pub fn slash(g: &[Mat], eta: &[f64]) -> Mat {
    let mut out = Mat::zeros(g[0].n);
    for (gj, e) in g.iter().zip(eta) {
        out = out.add(&gj.scale(C::new(*e, 0.0)));
    }
    out
}

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        out.push((0.5 * (b - a) * z + 0.5 * (a + b), 0.5 * (b - a) * w));
    }
    out
}

/// Quadrature rule `(ξ, w)` for the unit sphere `S^{d−1}` with `d ∈ {2, 3, 4}`,
/// exact for polynomials of moderate degree.
pub fn sphere_rule(d: usize, n: usize) -> Vec<(Vec<f64>, f64)> {
    use std::f64::consts::PI;
    let ring = |m: usize| (0..m).map(move |k| (2.0 * PI * k as f64 / m as f64, 2.0 * PI / m as f64));
    match d {
        2 => ring(2 * n).map(|(t, w)| (vec![t.cos(), t.sin()], w)).collect(),
        3 => {
            let mut out = Vec::new();
            for (z, wz) in gauss_legendre(n, -1.0, 1.0) {
                let rho = (1.0 - z * z).sqrt();
                for (t, wt) in ring(2 * n) {
                    out.push((vec![rho * t.cos(), rho * t.sin(), z], wz * wt));
                }
            }
            out
        }
        4 => {
            // Hopf coordinates with u = sin²η, measure ½ du dθ₁ dθ₂
            let mut out = Vec::new();
            for (u, wu) in gauss_legendre(n, 0.0, 1.0) {
                let (s, co) = (u.sqrt(), (1.0 - u).sqrt());
                for (t1, w1) in ring(2 * n) {
                    for (t2, w2) in ring(2 * n) {
                        out.push((
                            vec![co * t1.cos(), co * t1.sin(), s * t2.cos(), s * t2.sin()],
                            0.5 * wu * w1 * w2,
                        ));
                    }
                }
            }
            out
        }
        _ => panic!("no sphere rule for d = {d}"),
    }
}

/// Relative distance `|a − b| / max(|b|, floor)`.
pub fn rel(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor)
}

/// `q(η) = γ·η / (η·η)` for complex `η` (no conjugation, so it is analytic).
pub fn q_complex(g: &[Mat], eta: &[C]) -> Mat {
    let mut s = Mat::zeros(g[0].n);
    let mut n2 = C::new(0.0, 0.0);
    for (gj, e) in g.iter().zip(eta) {
        s = s.add(&gj.scale(*e));
        n2 += e * e;
    }
    s.scale(1.0 / n2)
}

/// Taylor coefficient `(1/j!) (m·∂)^j q(ξ)` by a Cauchy integral in `z`
/// over `|z| = 1/(2|m|)`, well inside the singularities at `|z| = |ξ|/|m|`.
pub fn q_taylor(g: &[Mat], xi: &[f64], m: &[i32], j: u32) -> Mat {
    let mf: Vec<f64> = m.iter().map(|&v| v as f64).collect();
    let mn = mf.iter().map(|v| v * v).sum::<f64>().sqrt();
    let xr: Vec<C> = xi.iter().map(|&v| C::new(v, 0.0)).collect();
    if mn == 0.0 {
        return if j == 0 { q_complex(g, &xr) } else { Mat::zeros(g[0].n) };
    }
    let rho = 0.5 / mn;
    let n = 64;
    let mut out = Mat::zeros(g[0].n);
    for k in 0..n {
        let z = C::from_polar(rho, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
        let eta: Vec<C> = xi.iter().zip(&mf).map(|(&a, &b)| a + z * b).collect();
        out = out.add(&q_complex(g, &eta).scale(z.powi(-(j as i32)) / n as f64));
    }
    out
}

/// Matrix coefficient `−i Σ_k a_{k,l} γ^k` of the mode `l` of a one-form.
pub fn one_form_mode(g: &[Mat], a: &wodzicki::psido::OneForm, l: &[i32]) -> Mat {
    let mut out = Mat::zeros(g[0].n);
    for (k, f) in a.components().iter().enumerate() {
        out = out.add(&g[k].scale(-I * c(&f.coefficient(l))));
    }
    out
}

/// `∮ A D^{−1} B D^{−1}` on `T^d` (even `d ≥ 2`) from plane waves: the
/// operator sends `e^{ikx}` to `Σ_{m,n} A_m q(k+n) B_n q(k) e^{i(k+m+n)x}`,
/// the torus integral keeps `m = −n`, and the degree `−d` part of
/// `q(ξ+n) q(ξ)` is the Taylor term of order `d − 2`.
pub fn ncint_a_dinv_b_dinv(a: &wodzicki::psido::OneForm, b: &wodzicki::psido::OneForm, quad: usize) -> C {
    let d = a.dim();
    let g = gammas(d);
    let rule = sphere_rule(d, quad);
    let mut total = C::new(0.0, 0.0);
    let freqs: std::collections::BTreeSet<Vec<i32>> =
        b.components().iter().flat_map(|f| f.modes().map(|(l, _)| l.clone())).collect();
    for n in freqs {
        let neg: Vec<i32> = n.iter().map(|v| -v).collect();
        let am = one_form_mode(&g, a, &neg);
        let bn = one_form_mode(&g, b, &n);
        if am.max_abs() == 0.0 || bn.max_abs() == 0.0 {
            continue;
        }
        for (xi, w) in &rule {
            let t = q_taylor(&g, xi, &n, d as u32 - 2);
            let xr: Vec<C> = xi.iter().map(|&v| C::new(v, 0.0)).collect();
            total += am.mul(&t).mul(&bn).mul(&q_complex(&g, &xr)).trace() * *w;
        }
    }
    total
}

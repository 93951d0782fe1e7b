//! Floating-point spectral oracle for the flat torus `T^d = R^d / 2πZ^d`.
//!
//! The spectrum of `D = 𝒟 + P` is `{|k| : k ∈ Z^d}` with multiplicity
//! `2^{⌊d/2⌋}` per lattice point, the kernel (`k = 0`) being replaced by the
//! eigenvalue 1. Hence `ζ_D(s) = 2^{⌊d/2⌋}(1 + Z_d(s))` with the Epstein sum
//! `Z_d(s) = Σ'_{k} |k|^{−s}`, which is evaluated by the theta splitting
//!
//! ```text
//! π^{−s/2}Γ(s/2) Z_d(s) = Σ'_k [(π|k|²)^{−s/2} Γ(s/2, π|k|²)
//!                              + (π|k|²)^{(s−d)/2} Γ((d−s)/2, π|k|²)]
//!                         + 2/(s−d) − 2/s,
//! ```
//!
//! whose terms decay like `e^{−π|k|²}`. This is the only module that uses
//! floating point; exact values enter through [`to_float`].

use serde::Serialize;
use statrs::function::exponential;
use statrs::function::gamma::{gamma, gamma_ui};

use crate::clifford::spinor_dim;
use crate::coefficients::ExactScalar;
use crate::error::{Error, Result};
use crate::ncint::{c_d, wres, wres_abs_dirac_top};
use crate::par;
use crate::psido::Operator;
use crate::report::{ReportValue, VerificationReport};

/// Finest Richardson step is `2^{−RICHARDSON_STEPS}`.
pub const RICHARDSON_STEPS: u32 = 8;
/// Number of Richardson elimination orders.
pub const RICHARDSON_ORDERS: usize = 4;
/// Relative tolerance of the calibration.
pub const CALIBRATION_TOL: f64 = 1e-6;
/// Shells `|k|² ≤ EPSTEIN_SHELLS` are kept in the accelerated sum;
/// the first dropped term is below `e^{−π·40}`.
const EPSTEIN_SHELLS: usize = 40;

pub mod anchors {
    pub const CALIBRATION: &str = "calibration: ∮X = c_d Wres(X), c_d = (2π)^-d, ∮|D|^-d = Res_{s=d} ζ_D(s)";
    pub const SIMPLE_POLES: &str = "dimension-spectrum: poles of ζ_D are simple";
    pub const HEAT: &str = "heat-trace: t^{d/2} Tr e^{-tD²} → 2^{⌊d/2⌋} π^{d/2}";
}

/// The single conversion from exact values to floats. Fails on a nonzero
/// imaginary part.
pub fn to_float(x: &ExactScalar) -> Result<f64> {
    if !x.is_real() {
        return Err(Error::Oracle(format!("{x} is not real")));
    }
    Ok(x.to_complex_f64().0)
}

fn require_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::UnsupportedDimension(d, "the spectral oracle needs d ≥ 2"));
    }
    Ok(())
}

/// `r_d(n)`, the number of `k ∈ Z^d` with `|k|² = n`, for `n ≤ max`.
pub fn shell_counts(d: usize, max: usize) -> Vec<u64> {
    let mut one = vec![0u64; max + 1];
    one[0] = 1;
    let mut j = 1;
    while j * j <= max {
        one[j * j] = 2;
        j += 1;
    }
    let mut acc = one.clone();
    for _ in 1..d {
        let prev = acc;
        acc = par::map_range(0..max + 1, |n| {
            let mut s = 0u64;
            let mut j = 0;
            while j * j <= n {
                s += one[j * j] * prev[n - j * j];
                j += 1;
            }
            s
        });
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralEntry {
    pub eigenvalue: f64,
    pub multiplicity: u64,
}

/// Eigenvalues of `|D|` up to a cutoff, sorted, with multiplicities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumSlice {
    pub d: usize,
    pub cutoff: f64,
    pub entries: Vec<SpectralEntry>,
}

impl SpectrumSlice {
    pub fn new(d: usize, cutoff: f64) -> Result<Self> {
        require_dim(d)?;
        if !(cutoff >= 1.0) {
            return Err(Error::Oracle(format!("cutoff {cutoff} below the first eigenvalue")));
        }
        let max = (cutoff * cutoff).floor() as usize;
        let counts = shell_counts(d, max);
        let dim_v = spinor_dim(d) as u64;
        let mut entries: Vec<SpectralEntry> = counts
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| c > 0)
            .map(|(n, &c)| SpectralEntry {
                eigenvalue: (n as f64).sqrt(),
                multiplicity: c * dim_v,
            })
            .collect();
        // the kernel is shifted onto the eigenvalue 1
        entries[0].multiplicity += dim_v;
        Ok(Self { d, cutoff, entries })
    }

    /// `Σ m λ^{−s}` over the slice.
    pub fn zeta_partial(&self, s: f64) -> f64 {
        self.entries
            .iter()
            .rev()
            .map(|e| e.multiplicity as f64 * e.eigenvalue.powf(-s))
            .sum()
    }

    /// `Σ m e^{−tλ²}` over the slice.
    pub fn heat_trace(&self, t: f64) -> f64 {
        self.entries
            .iter()
            .rev()
            .map(|e| e.multiplicity as f64 * (-t * e.eigenvalue * e.eigenvalue).exp())
            .sum()
    }
}

/// `Γ(a, x)` for any real `a` and `x > 0`, lifting `a < 0` by
/// `Γ(a, x) = (Γ(a+1, x) − x^a e^{−x}) / a`; `Γ(0, x) = E₁(x)`.
fn upper_gamma(a: f64, x: f64) -> f64 {
    if a > 0.0 {
        return gamma_ui(a, x);
    }
    if a == 0.0 {
        return exponential::integral(x, 1).unwrap_or(f64::NAN);
    }
    (upper_gamma(a + 1.0, x) - x.powf(a) * (-x).exp()) / a
}

/// Epstein sum `Z_d(s) = Σ'_{k ∈ Z^d} |k|^{−s}`, analytically continued;
/// valid for `s > 0`, `s ≠ d`.
pub fn epstein(d: usize, s: f64) -> Result<f64> {
    require_dim(d)?;
    if !(s > 0.0) || s == d as f64 {
        return Err(Error::Oracle(format!("Epstein sum requested at s = {s} for d = {d}")));
    }
    let counts = shell_counts(d, EPSTEIN_SHELLS);
    let pi = std::f64::consts::PI;
    let (a, b) = (s / 2.0, (d as f64 - s) / 2.0);
    let mut sum = 0.0;
    for (n, &c) in counts.iter().enumerate().skip(1).rev() {
        if c == 0 {
            continue;
        }
        let x = pi * n as f64;
        sum += c as f64 * (x.powf(-a) * upper_gamma(a, x) + x.powf(-b) * upper_gamma(b, x));
    }
    let lambda = sum + 2.0 / (s - d as f64) - 2.0 / s;
    Ok(lambda * pi.powf(a) / gamma(a))
}

/// `ζ_D(s) = Tr |D|^{−s}` for `s > d`.
pub fn zeta_value(d: usize, s: f64) -> Result<f64> {
    require_dim(d)?;
    if !(s > d as f64) {
        return Err(Error::Oracle(format!("ζ_D({s}) diverges for d = {d}; use residue_at_pole")));
    }
    Ok(spinor_dim(d) as f64 * (1.0 + epstein(d, s)?))
}

/// Richardson extrapolation to `h → 0` of samples at `h = 2^{−1}, …,
/// 2^{−RICHARDSON_STEPS}`, assuming an expansion in integer powers of `h`.
/// Returns the estimate and the spread of the last two diagonal entries.
pub fn richardson(f: impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let samples: Vec<f64> = (1..=RICHARDSON_STEPS)
        .map(|m| f(0.5f64.powi(m as i32)))
        .collect::<Result<_>>()?;
    let mut table = vec![samples];
    for j in 1..=RICHARDSON_ORDERS {
        let prev = &table[j - 1];
        let factor = (1u64 << j) as f64 - 1.0;
        let next: Vec<f64> = prev.windows(2).map(|w| w[1] + (w[1] - w[0]) / factor).collect();
        table.push(next);
    }
    let last = &table[RICHARDSON_ORDERS];
    let below = &table[RICHARDSON_ORDERS - 1];
    let est = last[last.len() - 1];
    let spread = (est - last[last.len() - 2]).abs().max((est - below[below.len() - 1]).abs());
    Ok((est, spread))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueEstimate {
    pub pole: f64,
    pub estimate: f64,
    pub uncertainty: f64,
    pub converged: bool,
}

/// `Res_{s=d} ζ_D(s)` estimated as `lim_{h→0} h ζ_D(d + h)`.
pub fn residue_at_pole(d: usize, pole: usize) -> Result<ResidueEstimate> {
    require_dim(d)?;
    if pole != d {
        return Err(Error::Oracle(format!("only the pole at s = d = {d} is estimated, not {pole}")));
    }
    let (estimate, uncertainty) = richardson(|h| Ok(h * zeta_value(d, d as f64 + h)?))?;
    let converged = estimate.is_finite() && uncertainty <= 1e-8 * estimate.abs();
    Ok(ResidueEstimate {
        pole: pole as f64,
        estimate,
        uncertainty,
        converged,
    })
}

/// `lim_{h→0} h² ζ_D(d + h)`, which vanishes when the pole is simple.
pub fn second_order_limit(d: usize) -> Result<(f64, f64)> {
    require_dim(d)?;
    richardson(|h| Ok(h * h * zeta_value(d, d as f64 + h)?))
}

/// Leading heat coefficient `lim_{t→0} t^{d/2} Tr e^{−tD²}`, fitted as
/// `c₀ + c₁ t^{d/2+1}` through two small times.
pub fn heat_leading_coefficient(d: usize) -> Result<f64> {
    require_dim(d)?;
    let (t1, t2) = (0.01f64, 0.02f64);
    let slice = SpectrumSlice::new(d, (40.0f64 / t1).sqrt())?;
    let half = d as f64 / 2.0;
    let f = |t: f64| t.powf(half) * slice.heat_trace(t);
    let (u1, u2) = (t1.powf(half + 1.0), t2.powf(half + 1.0));
    let (f1, f2) = (f(t1), f(t2));
    Ok(f1 - (f2 - f1) / (u2 - u1) * u1)
}

/// Outcome of calibrating `c_d` against the spectral residue.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub d: usize,
    pub exact: ExactScalar,
    pub exact_float: f64,
    pub residue: ResidueEstimate,
    pub relative_error: f64,
    pub pass: bool,
}

/// Compares `c_d · Wres(|D|^{−d})`, computed by the symbol engine, with the
/// numerical residue of `ζ_D` at `s = d`.
pub fn calibrate_cd(d: usize) -> Result<Calibration> {
    if !(2..=4).contains(&d) {
        return Err(Error::UnsupportedDimension(d, "calibration is run for d ∈ {2, 3, 4}"));
    }
    let symbol = Operator::abs_dirac_power(-(d as i32)).symbol(d, -(d as i32))?;
    let w = wres(&symbol)?.value;
    if w != wres_abs_dirac_top(d)? {
        return Err(Error::Oracle(format!("engine Wres(|D|^-{d}) = {w} disagrees with the closed form")));
    }
    let exact = c_d(d).mul(&w);
    let exact_float = to_float(&exact)?;
    let residue = residue_at_pole(d, d)?;
    let relative_error = (residue.estimate - exact_float).abs() / exact_float.abs();
    Ok(Calibration {
        d,
        exact,
        exact_float,
        pass: residue.converged && relative_error < CALIBRATION_TOL,
        residue,
        relative_error,
    })
}

/// Calibration plus the simplicity and heat-trace checks, as one report.
pub fn calibration_report(d: usize) -> Result<VerificationReport> {
    let cal = calibrate_cd(d)?;
    let (second, second_unc) = second_order_limit(d)?;
    let simple = second.abs() <= 10.0 * second_unc + 1e-10 * cal.exact_float;
    let heat = heat_leading_coefficient(d)?;
    let heat_expected = spinor_dim(d) as f64 * std::f64::consts::PI.powf(d as f64 / 2.0);
    let heat_ok = ((heat - heat_expected) / heat_expected).abs() < 1e-4;
    Ok(VerificationReport::new(
        format!("calibration d={d}"),
        "|c_d Wres(|D|^-d) - Res ζ_D| < 1e-6 relative; lim h²ζ_D(d+h) = 0",
    )
    .anchor(anchors::CALIBRATION)
    .anchor(anchors::SIMPLE_POLES)
    .anchor(anchors::HEAT)
    .inputs(&(d, RICHARDSON_STEPS, RICHARDSON_ORDERS))
    .check(cal.pass)
    .check(simple)
    .check(heat_ok)
    .value(ReportValue::exact("c_d Wres(|D|^-d)", cal.exact.clone()))
    .value(ReportValue::oracle("Res_{s=d} ζ_D", cal.residue.estimate, cal.residue.uncertainty))
    .value(ReportValue::oracle("lim h² ζ_D(d+h)", second, second_unc))
    .value(ReportValue::oracle("t^{d/2} Tr e^{-tD²} at t → 0", heat, (heat - heat_expected).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_counts_small() {
        assert_eq!(shell_counts(2, 5), vec![1, 4, 4, 0, 4, 8]);
        assert_eq!(shell_counts(3, 3), vec![1, 6, 12, 8]);
    }

    #[test]
    fn slice_invariants() {
        let s = SpectrumSlice::new(2, 10.0).unwrap();
        assert!(s.entries.windows(2).all(|w| w[0].eigenvalue < w[1].eigenvalue));
        assert!(s.entries.iter().all(|e| e.multiplicity > 0));
        // kernel (2) + four unit vectors (4 · 2)
        assert_eq!(s.entries[0].multiplicity, 10);
        assert!(SpectrumSlice::new(1, 10.0).is_err());
    }

    #[test]
    fn lifted_incomplete_gamma() {
        // Γ(0, x) = E₁(x); E₁(1) = 0.21938393439552...
        let e1 = upper_gamma(1e-12, 1.0);
        assert!((e1 - 0.219_383_934_395_520_3).abs() < 1e-9);
        // Γ(−½, x) from Γ(½, x) = √π erfc(√x)
        let x = 2.0f64;
        let lhs = upper_gamma(-0.5, x);
        let rhs = -2.0 * (gamma_ui(0.5, x) - x.powf(-0.5) * (-x).exp());
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(zeta_value(2, 2.0).is_err());
        assert!(zeta_value(1, 3.0).is_err());
        assert!(residue_at_pole(2, 1).is_err());
        assert!(calibrate_cd(5).is_err());
    }

    #[test]
    fn to_float_rejects_complex() {
        use crate::coefficients::GaussianRational;
        assert!(to_float(&ExactScalar::from_gaussian(GaussianRational::i())).is_err());
        assert_eq!(to_float(&ExactScalar::from_int(3)).unwrap(), 3.0);
    }
}

//! Wodzicki residue and the noncommutative integral `∮ = c_d · Wres`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::clifford::spinor_dim;
use crate::coefficients::{ExactScalar, GaussianRational};
use crate::error::{Error, Result};
use crate::psido::Operator;
use crate::symbols::SymbolExpansion;

/// An exact residue together with a note on what was integrated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueValue {
    pub value: ExactScalar,
    pub provenance: String,
}

impl ResidueValue {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// `Γ(n/2)` for a positive integer `n`, as `q · π^{pi_half/2}`.
fn gamma_half(n: u32) -> (BigRational, i32) {
    assert!(n > 0);
    if n % 2 == 0 {
        (BigRational::from_integer(factorial(n / 2 - 1)), 0)
    } else {
        // Γ(k + ½) = (2k)! / (4^k k!) · √π
        let k = (n - 1) / 2;
        let den = BigInt::from(4).pow(k) * factorial(k);
        (BigRational::new(factorial(2 * k), den), 1)
    }
}

/// `∫_{S^{d−1}} ξ^β dξ` for the unnormalized surface measure:
/// `2 ∏ Γ((β_i+1)/2) / Γ((|β|+d)/2)`, and 0 if some `β_i` is odd.
pub fn sphere_monomial_integral(beta: &[u32], d: usize) -> Result<ExactScalar> {
    if d < 2 {
        return Err(Error::UnsupportedDimension(d, "the cosphere needs d ≥ 2"));
    }
    if beta.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: beta.len(),
        });
    }
    if beta.iter().any(|b| b % 2 == 1) {
        return Ok(ExactScalar::zero());
    }
    let mut q = BigRational::from_integer(2.into());
    let mut pi_half = 0;
    for &b in beta {
        let (g, p) = gamma_half(b + 1);
        q *= g;
        pi_half += p;
    }
    let total: u32 = beta.iter().sum::<u32>() + d as u32;
    let (g, p) = gamma_half(total);
    q /= g;
    pi_half -= p;
    Ok(ExactScalar::monomial(GaussianRational::from_big(q), pi_half))
}

/// `Wres(X) = ∫_{T^d} ∫_{|ξ|=1} Tr σ_{−d}(x, ξ) dξ dx`.
pub fn wres(s: &SymbolExpansion) -> Result<ResidueValue> {
    let d = s.dim();
    let target = -(d as i32);
    if let Some(f) = s.floor() {
        if f > target {
            return Err(Error::FloorTooHigh {
                operation: "wres".into(),
                degree: target,
                floor: f,
            });
        }
    }
    let component = s.component(target)?;
    let mut value = ExactScalar::zero();
    let mut monomials = 0usize;
    for (m, c) in component.terms() {
        let sphere = sphere_monomial_integral(&m.exps, d)?;
        if sphere.is_zero() {
            continue;
        }
        monomials += 1;
        let space = c.trace().integral();
        value.add_assign(&sphere.mul(&space));
    }
    Ok(ResidueValue {
        value,
        provenance: format!(
            "σ_{target} of an order-{} symbol on T^{d}: {} ξ-monomials, {} even",
            s.top(),
            component.len(),
            monomials
        ),
    })
}

/// Normalization `c_d = (2π)^{−d}` of `∮ = c_d · Wres`.
pub fn c_d(d: usize) -> ExactScalar {
    ExactScalar::pi_pow(-(d as i32)).scale(&GaussianRational::ratio(1, 1i64 << d))
}

/// `∮X = c_d · Wres(X)`.
pub fn ncintegral(s: &SymbolExpansion) -> Result<ResidueValue> {
    let w = wres(s)?;
    Ok(ResidueValue {
        value: c_d(s.dim()).mul(&w.value),
        provenance: w.provenance,
    })
}

/// `∮` of an operator, realized just deep enough to reach degree `−d`.
/// Operators of order below `−d` are trace class and integrate to zero.
pub fn ncint_operator(op: &Operator, d: usize) -> Result<ResidueValue> {
    let order = op.order();
    if order < -(d as i32) {
        return Ok(ResidueValue {
            value: ExactScalar::zero(),
            provenance: format!("order {order} below −{d}"),
        });
    }
    ncintegral(&op.symbol(d, -(d as i32))?)
}

/// `Wres(|D|^{−d}) = 2^{⌊d/2⌋} · Vol(S^{d−1}) · (2π)^d`, used for calibration.
pub fn wres_abs_dirac_top(d: usize) -> Result<ExactScalar> {
    let vol = sphere_monomial_integral(&vec![0; d], d)?;
    Ok(vol
        .mul(&ExactScalar::pi_pow(d as i32))
        .scale(&GaussianRational::from_int(spinor_dim(d) << d)))
}

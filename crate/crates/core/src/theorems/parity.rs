//! Reality and vanishing of low-order residues.

use std::time::Instant;

use serde::Serialize;

use super::anchors;
use crate::coefficients::ExactScalar;
use crate::error::{Error, Result};
use crate::ncint::ncintegral;
use crate::par;
use crate::psido::{OneForm, Operator};
use crate::report::{ReportValue, VerificationReport};
use crate::symbols::{is_even_class, is_odd_class};

/// What a computed value is required to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Real,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteEntry {
    pub integrand: String,
    pub value: ExactScalar,
    pub claims: Vec<(Claim, &'static str)>,
    pub holds: bool,
}

/// Sign `ε` in `J D = ε D J` for the torus of dimension `d`.
pub fn j_sign(d: usize) -> i32 {
    match d % 8 {
        1 | 5 => -1,
        _ => 1,
    }
}

fn sign_pow(e: i32, k: u32) -> i32 {
    if e == 1 || k % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone)]
struct Case {
    name: String,
    op: Operator,
    claims: Vec<(Claim, &'static str)>,
}

fn ops(a: &OneForm, l: u32) -> Vec<Operator> {
    (0..l).map(|_| Operator::OneForm(a.clone())).collect()
}

fn composite(mut fs: Vec<Operator>, tail: impl IntoIterator<Item = Operator>) -> Operator {
    fs.extend(tail);
    Operator::Composite(fs)
}

fn dirac_neg(k: u32) -> Option<Operator> {
    (k > 0).then(|| Operator::dirac_power(-(k as i32)))
}

fn abs_neg(k: u32) -> Option<Operator> {
    (k > 0).then(|| Operator::abs_dirac_power(-(k as i32)))
}

fn cases(a: &OneForm, k: u32, l: u32) -> Vec<Case> {
    let d = a.dim();
    let eps = j_sign(d);
    let even = d % 2 == 0;
    let odd_codim = (d as i64 - k as i64).rem_euclid(2) == 1;
    // (-ε)^l = -1
    let j_flips_l = eps == 1 && l % 2 == 1;
    // -ε^{k+1} = -1
    let j_flips_k = sign_pow(eps, k + 1) == 1;
    let gamma_parity = !matches!(d % 8, 1 | 5);

    let mut out = Vec::new();
    let mut claims = vec![(Claim::Real, anchors::REALITY)];
    if l == 1 && j_flips_k {
        claims.push((Claim::Zero, anchors::J_SYMMETRY));
    }
    out.push(Case {
        name: format!("A^{l} D^-{k}"),
        op: composite(ops(a, l), dirac_neg(k)),
        claims,
    });

    if k > 0 {
        let mut claims = vec![(Claim::Real, anchors::REALITY)];
        if k % 2 == 1 {
            claims.push((Claim::Zero, anchors::ODD_POWER));
        }
        out.push(Case {
            name: format!("(A D^-1)^{k}"),
            op: super::a_dinv_power(a, k),
            claims,
        });
    }

    let mut claims = vec![(Claim::Real, anchors::REALITY)];
    if j_flips_l {
        claims.push((Claim::Zero, anchors::J_SYMMETRY));
    }
    if l == 1 && gamma_parity {
        claims.push((Claim::Zero, anchors::GAMMA_PARITY));
    }
    if odd_codim {
        claims.push((Claim::Zero, anchors::ODD_CODIM));
    }
    out.push(Case {
        name: format!("A^{l} |D|^-{k}"),
        op: composite(ops(a, l), abs_neg(k)),
        claims,
    });

    let mut claims = vec![(Claim::Real, anchors::REALITY)];
    if odd_codim {
        claims.push((Claim::Zero, anchors::XI_PARITY));
    }
    out.push(Case {
        name: format!("A^{l} D |D|^-{k}"),
        op: composite(ops(a, l), [Operator::Dirac].into_iter().chain(abs_neg(k))),
        claims,
    });

    // F = D|D|^{-1}
    let mut claims = Vec::new();
    if odd_codim {
        claims.push((Claim::Zero, anchors::ODD_CODIM));
    }
    out.push(Case {
        name: format!("A^{l} F |D|^-{k}"),
        op: composite(ops(a, l), [Operator::Dirac, Operator::abs_dirac_power(-(k as i32) - 1)]),
        claims,
    });

    if even {
        let mut claims = vec![(Claim::Real, anchors::REALITY)];
        if j_flips_l {
            claims.push((Claim::Zero, anchors::J_SYMMETRY));
        }
        out.push(Case {
            name: format!("χ A^{l} |D|^-{k}"),
            op: composite(
                std::iter::once(Operator::Grading).chain(ops(a, l)).collect(),
                abs_neg(k),
            ),
            claims,
        });
        let mut claims = Vec::new();
        if j_flips_k {
            claims.push((Claim::Zero, anchors::J_SYMMETRY));
        }
        out.push(Case {
            name: format!("χ A D^-{k}"),
            op: composite(vec![Operator::Grading, Operator::OneForm(a.clone())], dirac_neg(k)),
            claims,
        });
    }
    out
}

fn evaluate(case: Case, d: usize) -> Result<SuiteEntry> {
    if case.op.order() < -(d as i32) {
        let value = ExactScalar::zero();
        return Ok(SuiteEntry {
            integrand: case.name,
            holds: true,
            value,
            claims: case.claims,
        });
    }
    let s = case.op.symbol(d, -(d as i32))?;
    let mut claims = case.claims;
    let by_parity = if d % 2 == 1 { is_even_class(&s) } else { is_odd_class(&s) };
    if by_parity {
        claims.push((Claim::Zero, anchors::XI_PARITY));
    }
    let value = ncintegral(&s)?.value;
    let holds = claims.iter().all(|(c, _)| match c {
        Claim::Real => value.is_real(),
        Claim::Zero => value.is_zero(),
    });
    Ok(SuiteEntry {
        integrand: case.name,
        value,
        claims,
        holds,
    })
}

/// Every integrand of the suite for powers `k` (of `D` or `|D|`) and `l`
/// (of `A`), with the reality and vanishing claims that apply.
pub fn parity_reality_entries(a: &OneForm, k: u32, l: u32) -> Result<Vec<SuiteEntry>> {
    a.require_selfadjoint()?;
    if l == 0 {
        return Err(Error::InvalidSpec("the power of A must be at least 1".into()));
    }
    let d = a.dim();
    par::map(&cases(a, k, l), |c| evaluate(c.clone(), d)).into_iter().collect()
}

pub fn parity_reality_suite(a: &OneForm, k: u32, l: u32) -> Result<VerificationReport> {
    let start = Instant::now();
    let entries = parity_reality_entries(a, k, l)?;
    let mut rep = VerificationReport::new("parity-reality", "each integral is real or zero as claimed")
        .inputs(&(a.to_entries(), k, l));
    for anchor in [
        anchors::REALITY,
        anchors::J_SYMMETRY,
        anchors::ODD_CODIM,
        anchors::GAMMA_PARITY,
        anchors::XI_PARITY,
    ] {
        rep = rep.anchor(anchor);
    }
    for e in entries {
        let claims: Vec<&str> = e
            .claims
            .iter()
            .map(|(c, _)| match c {
                Claim::Real => "real",
                Claim::Zero => "zero",
            })
            .collect();
        rep = rep
            .check(e.holds)
            .value(ReportValue::exact(format!("∮{} [{}]", e.integrand, claims.join(",")), e.value));
    }
    rep.runtime_ms = Some(start.elapsed().as_millis());
    Ok(rep)
}

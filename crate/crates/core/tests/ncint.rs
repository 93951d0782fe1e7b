//! Cosphere integrals against quadrature, and the trace property of `∮`.

mod common;

use std::f64::consts::PI;

use common::{rel, sphere_rule};
use wodzicki::coefficients::{ExactScalar, GaussianRational as Q};
use wodzicki::ncint::{c_d, ncint_operator, ncintegral, sphere_monomial_integral, wres, wres_abs_dirac_top};
use wodzicki::psido::Operator;
use wodzicki::theorems::{random_function, random_one_form, CorpusConfig};
use wodzicki::zeta_oracle::to_float;

fn quad_monomial(beta: &[u32]) -> f64 {
    sphere_rule(beta.len(), 12)
        .iter()
        .map(|(xi, w)| w * xi.iter().zip(beta).map(|(x, &b)| x.powi(b as i32)).product::<f64>())
        .sum()
}

#[test]
fn sphere_monomials_match_quadrature() {
    let betas: Vec<Vec<u32>> = vec![
        vec![0, 0],
        vec![2, 0],
        vec![4, 2],
        vec![1, 3],
        vec![0, 0, 0],
        vec![2, 2, 0],
        vec![0, 4, 2],
        vec![1, 0, 2],
        vec![0, 0, 0, 0],
        vec![2, 2, 0, 0],
        vec![4, 0, 2, 2],
        vec![0, 0, 0, 6],
        vec![2, 1, 0, 0],
    ];
    for beta in betas {
        let exact = to_float(&sphere_monomial_integral(&beta, beta.len()).unwrap()).unwrap();
        let q = quad_monomial(&beta);
        assert!((exact - q).abs() < 1e-12 * exact.abs().max(1.0), "{beta:?}: {exact} vs {q}");
    }
}

#[test]
fn sphere_volumes() {
    let vol = |d: usize| to_float(&sphere_monomial_integral(&vec![0; d], d).unwrap()).unwrap();
    assert!(rel(vol(2), 2.0 * PI, 1.0) < 1e-15);
    assert!(rel(vol(3), 4.0 * PI, 1.0) < 1e-15);
    assert!(rel(vol(4), 2.0 * PI * PI, 1.0) < 1e-15);
    assert!(rel(vol(5), 8.0 * PI * PI / 3.0, 1.0) < 1e-15);
}

#[test]
fn rejects_bad_multi_indices() {
    assert!(sphere_monomial_integral(&[0, 0], 3).is_err());
    assert!(sphere_monomial_integral(&[0], 1).is_err());
}

#[test]
fn normalization_and_top_residue() {
    for d in 2..=6 {
        let c = to_float(&c_d(d)).unwrap();
        assert!(rel(c, (2.0 * PI).powi(-(d as i32)), 1.0) < 1e-15);
        let s = Operator::abs_dirac_power(-(d as i32)).symbol(d, -(d as i32)).unwrap();
        assert_eq!(wres(&s).unwrap().value, wres_abs_dirac_top(d).unwrap());
    }
    // ∮|D|^{-2} = 2 · 2π / (2π)² · (2π)² on T²
    let v = ncint_operator(&Operator::abs_dirac_power(-2), 2).unwrap().value;
    assert_eq!(v, ExactScalar::monomial(Q::from_int(4), 2));
}

#[test]
fn trace_class_orders_integrate_to_zero() {
    let v = ncint_operator(&Operator::abs_dirac_power(-5), 4).unwrap();
    assert!(v.is_zero());
}

/// Operators built from `f` and `a`; pairing a pool for `f` with one for
/// `f̄` makes zero modes, hence nonzero residues, likely.
fn pool(d: usize, i: usize, conj: bool) -> Vec<Operator> {
    let cfg = CorpusConfig { max_freq: 1, modes: 2 };
    let a = random_one_form(d, 11, i, cfg);
    let f = random_function(d, 11, i, cfg);
    let f = if conj { f.conj() } else { f };
    let mut ops = vec![
        Operator::Multiplication(f.clone()),
        Operator::OneForm(a.clone()),
        Operator::Composite(vec![Operator::Multiplication(f), Operator::dirac_power(-1)]),
        Operator::Composite(vec![Operator::OneForm(a.clone()), Operator::abs_dirac_power(-1)]),
        Operator::perturbed(&a),
        Operator::dirac_power(-2),
    ];
    if d % 2 == 0 {
        ops.push(Operator::Composite(vec![Operator::Grading, Operator::OneForm(a)]));
    }
    ops
}

/// `∮PQ = ∮QP` for random pairs, with `|D|` powers appended so the product
/// has order exactly `−d`.
#[test]
fn ncint_is_a_trace() {
    let mut nonzero = 0;
    for i in 0..100 {
        let d = 2 + i % 2;
        let (left, right) = (pool(d, i, false), pool(d, i, true));
        let p = left[(i / 2) % left.len()].clone();
        let mut q = right[(i / 2 / left.len() + i) % right.len()].clone();
        let target = -(d as i32);
        let order = p.order() + q.order();
        if order != target {
            q = Operator::Composite(vec![q, Operator::abs_dirac_power(target - order)]);
        }
        let pq = ncint_operator(&Operator::Composite(vec![p.clone(), q.clone()]), d).unwrap().value;
        let qp = ncint_operator(&Operator::Composite(vec![q, p]), d).unwrap().value;
        assert_eq!(pq, qp, "instance {i}");
        nonzero += usize::from(!pq.is_zero());
    }
    assert!(nonzero >= 10, "only {nonzero} nonzero residues in the sample");
}

#[test]
fn residue_is_linear() {
    let d = 2;
    let s1 = Operator::Composite(vec![
        Operator::Multiplication(random_function(d, 3, 0, CorpusConfig::default())),
        Operator::dirac_power(-2),
    ])
    .symbol(d, -2)
    .unwrap();
    let s2 = Operator::abs_dirac_power(-2).symbol(d, -2).unwrap();
    let sum = ncintegral(&s1.add(&s2).unwrap()).unwrap().value;
    assert_eq!(sum, ncintegral(&s1).unwrap().value.add(&ncintegral(&s2).unwrap().value));
}

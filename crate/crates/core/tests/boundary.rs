//! Boundary cancellations: the symbolic identities, and their numeric
//! content re-derived with explicit gamma matrices.

mod common;

use std::f64::consts::PI;

use common::{gammas, Mat, C, I};
use wodzicki::boundary::{
    assemble_coefficients, boundary_reports, chiral_s_identities, perturbation_identities, trace_identities,
    BoundaryContext,
};
use wodzicki::zeta_oracle::to_float;

/// A fixed antisymmetric field strength with no special structure.
fn field(d: usize) -> Vec<Vec<f64>> {
    let mut f = vec![vec![0.0; d]; d];
    for mu in 0..d {
        for nu in mu + 1..d {
            let v = ((mu * 7 + nu * 3) as f64 * 0.61).sin() + 0.1 * nu as f64;
            f[mu][nu] = v;
            f[nu][mu] = -v;
        }
    }
    f
}

fn f_square(f: &[Vec<f64>]) -> f64 {
    f.iter().flatten().map(|x| x * x).sum()
}

/// `E^A − E = ¼ Σ_{μν} [γ^μ, γ^ν] F_{μν}`.
fn field_endomorphism(g: &[Mat], f: &[Vec<f64>]) -> Mat {
    let d = g.len();
    let mut x = Mat::zeros(g[0].n);
    for mu in 0..d {
        for nu in 0..d {
            let comm = g[mu].mul(&g[nu]).sub(&g[nu].mul(&g[mu]));
            x = x.add(&comm.scale(C::new(0.25 * f[mu][nu], 0.0)));
        }
    }
    x
}

/// `(−i)^{d/2−1} γ^1 ⋯ γ^{d−1}`.
fn boundary_chi(g: &[Mat]) -> Mat {
    let d = g.len();
    let mut chi = Mat::eye(g[0].n);
    for gi in &g[..d - 1] {
        chi = chi.mul(gi);
    }
    chi.scale((-I).powi(d as i32 / 2 - 1))
}

#[test]
fn every_report_passes_in_dimensions_2_4_6() {
    let reports = boundary_reports(&[2, 4, 6]).unwrap();
    assert_eq!(reports.len(), 9);
    for r in &reports {
        assert!(r.pass, "{}: {:?}", r.statement, r.values);
    }
}

#[test]
fn identities_are_individually_zero() {
    for d in [2, 4, 6] {
        let ctx = BoundaryContext::new(d).unwrap();
        let ids = perturbation_identities(&ctx)
            .into_iter()
            .chain(chiral_s_identities(&ctx))
            .chain(trace_identities(&ctx));
        for id in ids {
            assert!(id.holds && id.residual.is_zero(), "d={d} {}: {}", id.name, id.residual);
        }
    }
}

#[test]
fn five_trace_identities_are_present() {
    let ctx = BoundaryContext::new(4).unwrap();
    let names: Vec<String> = trace_identities(&ctx).into_iter().map(|i| i.name).collect();
    for needle in ["Tr χ(E^A - E)", "Tr((E^A)² - E²)", "Σ Tr((Ω^A_ij)² - Ω_ij²)", "Tr(χχ_:1)", "Tr χ(E^A_;d - E_:d)"] {
        assert!(names.iter().any(|n| n.starts_with(needle)), "missing {needle}: {names:?}");
    }
}

#[test]
fn quadratic_prefactor_is_exact() {
    for d in [2, 4, 6] {
        let asm = assemble_coefficients(&BoundaryContext::new(d).unwrap());
        assert_eq!(asm.quadratic_prefactor, asm.expected_prefactor);
        let v = to_float(&asm.quadratic_prefactor).unwrap();
        let want = -(2.0 * PI).powf(-(d as f64) / 2.0) / 6.0;
        assert!(((v - want) / want).abs() < 1e-14, "d={d}: {v} vs {want}");
        for id in &asm.identities {
            assert!(id.holds, "d={d} {}: {}", id.name, id.residual);
        }
    }
}

/// The `F²` part of `c_{d−4}`: `(4π)^{−d/2}/360 · (180 Tr X² + 30 Σ_ij Tr F_ij²)`
/// with `X = E^A − E`, evaluated with explicit matrices and compared with the
/// engine's prefactor times `F_{μν}F^{μν}`.
#[test]
fn prefactor_from_explicit_matrices() {
    for d in [2, 4, 6] {
        let g = gammas(d);
        let f = field(d);
        let x = field_endomorphism(&g, &f);
        let n = g[0].n as f64;
        let quad = (4.0 * PI).powf(-(d as f64) / 2.0) / 360.0 * (180.0 * x.mul(&x).trace().re + 30.0 * n * f_square(&f));
        let asm = assemble_coefficients(&BoundaryContext::new(d).unwrap());
        let engine = to_float(&asm.quadratic_prefactor).unwrap() * f_square(&f);
        assert!((quad - engine).abs() < 1e-13 * engine.abs(), "d={d}: {quad} vs {engine}");
    }
}

#[test]
fn field_traces_with_explicit_matrices() {
    for d in [2, 4, 6] {
        let g = gammas(d);
        let f = field(d);
        let x = field_endomorphism(&g, &f);
        let n = g[0].n as f64;
        // Tr X = 0, Tr X² = −2^{d/2−1} F²
        assert!(x.trace().norm() < 1e-13);
        let want = -n / 2.0 * f_square(&f);
        assert!((x.mul(&x).trace() - want).norm() < 1e-12 * want.abs());
        // Tr χ X = 0 with the boundary chirality
        let chi = boundary_chi(&g);
        assert!(chi.mul(&chi).sub(&Mat::eye(g[0].n)).max_abs() < 1e-14);
        assert!(chi.mul(&x).trace().norm() < 1e-13);
        // the projections split the spinor space in half
        let half = Mat::eye(g[0].n).scale(C::new(0.5, 0.0));
        let pp = half.add(&chi.scale(C::new(0.5, 0.0)));
        let pm = half.sub(&chi.scale(C::new(0.5, 0.0)));
        assert!(pp.mul(&pm).max_abs() < 1e-14);
        assert!((pp.trace().re - n / 2.0).abs() < 1e-14);
        // χ anticommutes with the normal gamma and commutes with the rest
        let gn = &g[d - 1];
        assert!(chi.mul(gn).add(&gn.mul(&chi)).max_abs() < 1e-14);
        for ga in &g[..d - 1] {
            assert!(chi.mul(ga).sub(&ga.mul(&chi)).max_abs() < 1e-14);
        }
    }
}

#[test]
fn odd_dimensions_are_rejected() {
    assert!(BoundaryContext::new(3).is_err());
    assert!(boundary_reports(&[4, 5]).is_err());
}

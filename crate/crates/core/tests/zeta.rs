//! The spectral zeta function of the flat Dirac operator against closed
//! forms, a Bessel-series reduction and brute-force lattice sums.

mod common;

use std::f64::consts::PI;

use common::rel;
use statrs::function::gamma::gamma;
use wodzicki::zeta_oracle::{
    calibrate_cd, calibration_report, epstein, heat_leading_coefficient, residue_at_pole, second_order_limit,
    shell_counts, zeta_value, SpectrumSlice,
};

/// Hurwitz zeta `ζ(s, a)` by Euler–Maclaurin with `N = 30` and eight
/// Bernoulli corrections.
fn hurwitz(s: f64, a: f64) -> f64 {
    const B: [f64; 8] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    let n = 30;
    let head: f64 = (0..n).map(|k| (k as f64 + a).powf(-s)).sum();
    let x = n as f64 + a;
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // rising factorial s (s+1) ⋯ (s+2k−2) / (2k)!
    let mut rise = s;
    let mut fact = 2.0;
    for (k, b) in B.iter().enumerate() {
        let k = k + 1;
        tail += b / fact * rise * x.powf(-s - 2.0 * k as f64 + 1.0);
        rise *= (s + 2.0 * k as f64 - 1.0) * (s + 2.0 * k as f64);
        fact *= (2 * k + 1) as f64 * (2 * k + 2) as f64;
    }
    head + tail
}

fn riemann(s: f64) -> f64 {
    hurwitz(s, 1.0)
}

/// `Σ' |k|^{−s}` over `Z²`: `4 ζ(s/2) β(s/2)`.
fn z2_closed(s: f64) -> f64 {
    let w = s / 2.0;
    let beta = 4f64.powf(-w) * (hurwitz(w, 0.25) - hurwitz(w, 0.75));
    4.0 * riemann(w) * beta
}

/// `Σ' |k|^{−s}` over `Z⁴`: `8 (1 − 4^{1−s/2}) ζ(s/2) ζ(s/2 − 1)`.
fn z4_closed(s: f64) -> f64 {
    let w = s / 2.0;
    8.0 * (1.0 - 4f64.powf(1.0 - w)) * riemann(w) * riemann(w - 1.0)
}

/// `K_ν(z) = ∫_0^∞ e^{−z cosh t} cosh(νt) dt` by the trapezoid rule, which
/// converges geometrically for this integrand.
fn bessel_k(nu: f64, z: f64) -> f64 {
    let h = 0.02;
    let mut sum = 0.5 * (-z).exp();
    let mut t: f64 = h;
    loop {
        let term = (-z * t.cosh()).exp() * (nu * t).cosh();
        sum += term;
        if term < 1e-300 || t > 40.0 {
            break;
        }
        t += h;
    }
    sum * h
}

/// `Σ' |k|^{−s}` over `Z³` by summing the last coordinate with Poisson:
/// `2ζ(s) + √π Γ((s−1)/2)/Γ(s/2) Z₂(s−1) + (4π^{s/2}/Γ(s/2)) Σ_{k'≠0} Σ_m
/// (m/|k'|)^{(s−1)/2} K_{(s−1)/2}(2π m |k'|)`.
fn z3_bessel(s: f64) -> f64 {
    let nu = (s - 1.0) / 2.0;
    let mut bessel = 0.0;
    for a in -8i32..=8 {
        for b in -8i32..=8 {
            if a == 0 && b == 0 {
                continue;
            }
            let r = ((a * a + b * b) as f64).sqrt();
            for m in 1..=5 {
                bessel += (m as f64 / r).powf(nu) * bessel_k(nu, 2.0 * PI * m as f64 * r);
            }
        }
    }
    2.0 * riemann(s)
        + PI.sqrt() * gamma(nu) / gamma(s / 2.0) * z2_closed(s - 1.0)
        + 4.0 * PI.powf(s / 2.0) / gamma(s / 2.0) * bessel
}

fn epstein_oracle(d: usize, s: f64) -> f64 {
    match d {
        2 => z2_closed(s),
        3 => z3_bessel(s),
        4 => z4_closed(s),
        _ => unreachable!(),
    }
}

#[test]
fn oracle_sanity() {
    assert!(rel(riemann(2.0), PI * PI / 6.0, 1.0) < 1e-14);
    assert!(rel(riemann(4.0), PI.powi(4) / 90.0, 1.0) < 1e-14);
    // Catalan's constant
    assert!(rel(4f64.powf(-2.0) * (hurwitz(2.0, 0.25) - hurwitz(2.0, 0.75)), 0.915_965_594_177_219, 1.0) < 1e-14);
    assert!(rel(bessel_k(0.5, 1.3), (PI / 2.6).sqrt() * (-1.3f64).exp(), 1.0) < 1e-13);
}

#[test]
fn epstein_matches_independent_forms() {
    for d in [2usize, 3, 4] {
        for s in [d as f64 + 1.0, d as f64 + 1.5, d as f64 + 2.0, d as f64 + 3.0] {
            let got = epstein(d, s).unwrap();
            let want = epstein_oracle(d, s);
            assert!(rel(got, want, 1.0) < 1e-10, "d={d} s={s}: {got} vs {want}");
            let zeta = zeta_value(d, s).unwrap();
            let dim_v = (1u32 << (d / 2)) as f64;
            assert!(rel(zeta, dim_v * (1.0 + want), 1.0) < 1e-10);
        }
    }
}

/// Brute force over `|k| ≤ 200` with the tail replaced by its integral
/// `2π R^{2−s}/(s−2)`.
#[test]
fn lattice_sum_d2_s4() {
    let r = 200i64;
    let mut direct = 0.0;
    for a in -r..=r {
        for b in -r..=r {
            let n = a * a + b * b;
            if n > 0 && n <= r * r {
                direct += (n as f64).powi(-2);
            }
        }
    }
    let tail = 2.0 * PI / 2.0 * (r as f64).powi(-2);
    let got = epstein(2, 4.0).unwrap();
    assert!(rel(direct + tail, got, 1.0) < 1e-8, "{} vs {got}", direct + tail);
    // without the tail the brute-force sum is visibly short
    assert!(rel(direct, got, 1.0) > 1e-6);
}

#[test]
fn truncated_slice_approaches_zeta_from_below() {
    for d in [2usize, 3] {
        let s = d as f64 + 2.0;
        let slice = SpectrumSlice::new(d, 60.0).unwrap();
        let part = slice.zeta_partial(s);
        let full = zeta_value(d, s).unwrap();
        assert!(part < full && rel(part, full, 1.0) < 1e-2);
    }
}

#[test]
fn monotone_decreasing_in_s() {
    for d in [2usize, 3, 4] {
        let vals: Vec<f64> = (1..=12).map(|k| zeta_value(d, d as f64 + 0.25 * k as f64).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] > w[1]), "d={d}: {vals:?}");
    }
}

#[test]
fn shell_counts_match_enumeration() {
    for d in [2usize, 3, 4] {
        let max = 30;
        let counts = shell_counts(d, max);
        let mut brute = vec![0u64; max + 1];
        let r = 6i64;
        let mut k = vec![-r; d];
        loop {
            let n: i64 = k.iter().map(|x| x * x).sum();
            if n as usize <= max {
                brute[n as usize] += 1;
            }
            let mut i = 0;
            while i < d && k[i] == r {
                k[i] = -r;
                i += 1;
            }
            if i == d {
                break;
            }
            k[i] += 1;
        }
        assert_eq!(counts, brute, "d={d}");
    }
}

#[test]
fn residues_at_the_dimension() {
    for (d, want) in [(2usize, 4.0 * PI), (3, 8.0 * PI), (4, 8.0 * PI * PI)] {
        let r = residue_at_pole(d, d).unwrap();
        assert!(r.converged, "{r:?}");
        assert!(rel(r.estimate, want, 1.0) < 1e-6, "d={d}: {r:?}");
        assert!(r.uncertainty < 1e-6 * want);
    }
    assert!(residue_at_pole(2, 1).is_err());
}

#[test]
fn pole_is_simple() {
    for d in [2usize, 3, 4] {
        let (v, unc) = second_order_limit(d).unwrap();
        assert!(v.abs() < 1e-8 && v.abs() <= 10.0 * unc + 1e-10, "d={d}: {v} ± {unc}");
    }
}

#[test]
fn heat_trace_leading_term() {
    for d in [2usize, 3, 4] {
        let want = (1u32 << (d / 2)) as f64 * PI.powf(d as f64 / 2.0);
        let got = heat_leading_coefficient(d).unwrap();
        assert!(rel(got, want, 1.0) < 1e-4, "d={d}: {got} vs {want}");
    }
}

#[test]
fn calibration_passes_and_rejects_other_dimensions() {
    for d in [2usize, 3, 4] {
        let cal = calibrate_cd(d).unwrap();
        assert!(cal.pass, "{cal:?}");
        assert!(calibration_report(d).unwrap().pass);
    }
    assert!(calibrate_cd(5).is_err());
    assert!(calibrate_cd(1).is_err());
}

#[test]
fn rejects_divergent_and_degenerate_inputs() {
    assert!(zeta_value(2, 2.0).is_err());
    assert!(zeta_value(3, 1.5).is_err());
    assert!(zeta_value(1, 4.0).is_err());
    assert!(epstein(2, 2.0).is_err());
    assert!(SpectrumSlice::new(2, 0.5).is_err());
}

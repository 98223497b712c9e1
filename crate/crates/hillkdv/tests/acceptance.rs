//! End-to-end acceptance gate at desk scale (N=64 Galerkin, product cutoff
//! clamped to n_max, n_cut=32).  One printed pass/fail line per criterion;
//! run with `--nocapture` to see the lines for passing criteria too.

use std::f64::consts::PI;

use hillkdv::actions::{
    action_in, f4_asymptotics, f4_default_samples, f_of, hamiltonian_report, GapContour, PathSpec,
};
use hillkdv::analysis::{concavity_probe, decay_check, ExperimentConfig};
use hillkdv::discriminant::{zero_delta, zero_f, zero_psi, DiscriminantModel};
use hillkdv::potential::{FourierPotential, SeqWeight};
use hillkdv::reduction::{
    default_window, hilbert_sum, locate_roots, winding_count, xi_separation_bound, StripDisc,
};
use hillkdv::spectrum::{compute_spectra, GalerkinConfig, HillSpectra};
use num_complex::Complex64;
use rayon::prelude::*;

const DESK_N: usize = 64;
const DESK_M: usize = 64; // clamped to n_max = 32 inside the model
const DESK_NCUT: usize = 32;

fn verdict(id: usize, desc: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} [{tag}] {desc}: {detail}");
    assert!(pass, "criterion {id} ({desc}) failed: {detail}");
}

fn desk_spectra(pot: &FourierPotential) -> HillSpectra {
    compute_spectra(pot, &GalerkinConfig::with_n(DESK_N)).unwrap()
}

fn desk_model(pot: &FourierPotential) -> DiscriminantModel {
    let spec = desk_spectra(pot);
    DiscriminantModel::new(pot, &spec, DESK_M).unwrap()
}

fn two_mode() -> FourierPotential {
    FourierPotential::new(
        [
            (1, Complex64::new(0.08, 0.0)),
            (-1, Complex64::new(0.08, 0.0)),
            (2, Complex64::new(0.04, 0.0)),
            (-2, Complex64::new(0.04, 0.0)),
        ],
        true,
    )
    .unwrap()
}

fn desk_cfg_json(amp: f64) -> String {
    format!(
        r#"{{
            "potential": {{"modes": [{{"k": 1, "re": {h}, "im": 0.0}},
                                     {{"k": -1, "re": {h}, "im": 0.0}}],
                          "real": true}},
            "galerkin_n": {DESK_N},
            "product_m": {DESK_M},
            "n_cut": {DESK_NCUT}
        }}"#,
        h = amp / 2.0
    )
}

#[test]
fn criterion_01_zero_potential_exactness() {
    let zero = FourierPotential::zero();
    let spec = desk_spectra(&zero);
    let mut worst = 0.0_f64;
    for n in 1..=16 {
        let exact = (n as f64 * PI).powi(2);
        let (lo, hi) = spec.pair_n(n);
        worst = worst
            .max((lo - exact).norm())
            .max((hi - exact).norm());
    }

    let dm = DiscriminantModel::new(&zero, &spec, DESK_M).unwrap();
    for j in 0..50 {
        let z = Complex64::new(2.0 + 2.1 * j as f64, 0.4 + 0.09 * j as f64);
        worst = worst.max((dm.delta(z) - zero_delta(z)).norm());
        worst = worst.max((dm.psi(z).unwrap() - zero_psi(z)).norm());
        worst = worst.max((f_of(&dm, z, &PathSpec::Auto).unwrap() - zero_f(z)).norm());
    }
    verdict(
        1,
        "zero-potential exactness (eigenvalues, Delta, psi, F)",
        worst <= 1e-9,
        &format!("max abs err {worst:.2e}"),
    );
}

fn residual_at(pot: &FourierPotential, n: usize, m: usize, n_cut: usize) -> f64 {
    let spec = compute_spectra(pot, &GalerkinConfig::with_n(n)).unwrap();
    let dm = DiscriminantModel::new(pot, &spec, m).unwrap();
    hamiltonian_report(&dm, n_cut).unwrap().residual
}

#[test]
fn criterion_02_hamiltonian_identity() {
    let mut detail = String::new();
    let mut pass = true;
    // the residual floor (ODE discriminant accuracy) is ~1e-8 and does not
    // shrink with the discretization; above it, doubling must help
    const FLOOR: f64 = 2e-8;
    for a in [0.05, 0.1, 0.2] {
        let pot = FourierPotential::cosine(1, a);
        let half = residual_at(&pot, DESK_N / 2, DESK_M / 2, DESK_NCUT / 2);
        let desk = residual_at(&pot, DESK_N, DESK_M, DESK_NCUT);
        let tol = if a == 0.05 { 1e-4 } else { 1e-3 };
        pass &= desk <= tol;
        pass &= desk <= half.max(FLOOR);
        detail.push_str(&format!("a={a}: {desk:.1e} (half {half:.1e})  "));
    }
    let two = two_mode();
    // n_cut=2 drops the whole n>=3 tail, so truncation dominates there and
    // the doubling sequence must genuinely descend before hitting the floor
    let coarse = residual_at(&two, DESK_N / 4, DESK_M / 4, 2);
    let half = residual_at(&two, DESK_N / 2, DESK_M / 2, DESK_NCUT / 2);
    let desk = residual_at(&two, DESK_N, DESK_M, DESK_NCUT);
    pass &= desk <= 1e-3 && desk < coarse && desk <= half.max(FLOOR);
    detail.push_str(&format!("two-mode: {desk:.1e} (half {half:.1e}, coarse {coarse:.1e})"));
    verdict(2, "Hamiltonian identity residuals", pass, &detail);
}

#[test]
fn criterion_03_f4_asymptotics() {
    let pot = FourierPotential::cosine(1, 0.1);
    let dm = desk_model(&pot);
    let rep = hamiltonian_report(&dm, DESK_NCUT).unwrap();
    let (h0, hkdv) = f4_asymptotics(&dm, &f4_default_samples()).unwrap();
    let h0_err = (h0 - 0.01).abs() / 0.01;
    let h_err = (hkdv - rep.h_kdv_direct.re).abs() / rep.h_kdv_direct.re.abs();
    verdict(
        3,
        "F^4 asymptotic fit of (H0, H)",
        h0_err <= 1e-3 && h_err <= 1e-2,
        &format!("H0 rel err {h0_err:.1e}, H rel err {h_err:.1e}"),
    );
}

#[test]
fn criterion_04_concavity_constants() {
    let cfg = ExperimentConfig::from_json(&desk_cfg_json(0.1)).unwrap();
    let rep = concavity_probe(&cfg).unwrap();
    let pass = (rep.hstar_ratio + 3.0).abs() <= 0.06
        && (rep.omega_ratio + 6.0).abs() <= 0.3
        && rep.mixed_hessian.abs() <= 0.2;
    verdict(
        4,
        "H*/I^2 -> -3, omega*/I -> -6, mixed Hessian -> 0",
        pass,
        &format!(
            "H*/I^2 = {:.5}, omega*/I = {:.5}, mixed = {:+.3e}",
            rep.hstar_ratio, rep.omega_ratio, rep.mixed_hessian
        ),
    );
}

#[test]
fn criterion_05_action_gap_ratio() {
    let pot = FourierPotential::random(11, 1.0, 16, 0.05);
    let dm = desk_model(&pot);
    let mut worst = 0.0_f64;
    let mut checked = 0;
    for n in 4..=dm.m {
        if dm.spectra.gap_collapsed(n) {
            continue;
        }
        let g = dm.spectra.gamma_n(n).norm();
        let c = GapContour::for_gap(&dm, n).unwrap();
        let i_n = action_in(&dm, n, &c).unwrap().re;
        worst = worst.max((8.0 * n as f64 * PI * i_n / (g * g) - 1.0).abs());
        checked += 1;
    }
    verdict(
        5,
        "|8npi I_n / gamma_n^2 - 1| <= 0.1 on open gaps n >= 4",
        checked > 0 && worst <= 0.1,
        &format!("{checked} open gaps, worst deviation {worst:.2e}"),
    );
}

#[test]
fn criterion_06_reduction_matches_galerkin() {
    let pot = FourierPotential::cosine(1, 0.05);
    let spec = desk_spectra(&pot);
    let q_norm = pot.norm(SeqWeight::l2());
    let mut pass = true;
    let mut worst = 0.0_f64;
    for n in 1..=8 {
        let window = default_window(&pot, n);
        let disc = StripDisc::new(n, q_norm);
        let w = winding_count(&pot, n, window, &disc).unwrap();
        pass &= w == 2;
        let (xi1, xi2) = locate_roots(&pot, n, window).unwrap();
        let (lo, hi) = spec.pair_n(n);
        // match as sets
        let direct = (xi1 - lo).norm().max((xi2 - hi).norm());
        let swapped = (xi1 - hi).norm().max((xi2 - lo).norm());
        let err = direct.min(swapped) / (n * n) as f64;
        worst = worst.max(err);
        pass &= err <= 1e-6;
    }
    verdict(
        6,
        "2x2 reduction roots match Galerkin pairs, winding = 2",
        pass,
        &format!("worst err/n^2 = {worst:.2e}"),
    );
}

#[test]
fn criterion_07_gap_estimate_inequality() {
    let pot = FourierPotential::random(5, 1.0, 12, 0.05);
    let spec = desk_spectra(&pot);
    let mut pass = true;
    let mut detail = String::new();
    for n in 1..=8 {
        let window = default_window(&pot, n);
        let bound = xi_separation_bound(&pot, n, window).unwrap();
        let gamma = spec.gamma_n(n).norm();
        pass &= gamma <= bound * (1.0 + 1e-6);
        detail.push_str(&format!("n={n}: {gamma:.1e}<={bound:.1e}  "));
    }
    verdict(7, "|gamma_n| <= sqrt(6) sup |b_n b_-n|^(1/2)", pass, &detail);
}

#[test]
fn criterion_08_sign_properties_random_suite() {
    let results: Vec<(u64, f64, f64, f64)> = (1..=20u64)
        .into_par_iter()
        .map(|seed| {
            let pot = FourierPotential::random(seed, 1.0, 12, 0.04);
            let spec = compute_spectra(&pot, &GalerkinConfig::with_n(32)).unwrap();
            let dm = DiscriminantModel::new(&pot, &spec, 12).unwrap();
            let rep = hamiltonian_report(&dm, 12).unwrap();
            let min_i = rep.i.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
            let max_r = rep.r.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
            (seed, min_i, max_r, rep.h_star.re)
        })
        .collect();
    let min_i = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let max_r = results.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
    let max_h = results.iter().map(|r| r.3).fold(f64::NEG_INFINITY, f64::max);
    verdict(
        8,
        "I_n >= 0, R_n <= 0, H* <= 0 over 20 random seeds",
        min_i >= -1e-9 && max_r <= 1e-9 && max_h <= 1e-9,
        &format!("min I {min_i:+.1e}, max R {max_r:+.1e}, max H* {max_h:+.1e}"),
    );
}

#[test]
fn criterion_09_decay_tails() {
    let w = SeqWeight::new(-0.5, 4.0).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    for alpha in [0.75, 1.0, 1.5] {
        let pot = FourierPotential::random(7, alpha, 16, 0.05);
        let spec = desk_spectra(&pot);
        let rep = decay_check(&pot, &spec, &[w]).unwrap();
        let e = &rep.tails[0].entries;
        let mono_g = e.windows(2).all(|p| p[1].gamma_tail <= p[0].gamma_tail * (1.0 + 1e-12));
        let mono_d =
            e.windows(2).all(|p| p[1].dirichlet_tail <= p[0].dirichlet_tail * (1.0 + 1e-12));
        let bounded = e.iter().all(|t| t.gamma_tail <= t.gamma_bound * (1.0 + 1e-9));
        pass &= mono_g && mono_d && bounded;
        detail.push_str(&format!(
            "alpha={alpha}: mono_g={mono_g} mono_mu={mono_d} bound={bounded}  "
        ));
    }
    verdict(9, "weighted tails nonincreasing and inside the fitted bound", pass, &detail);
}

fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    num / den
}

#[test]
fn criterion_10_hilbert_sum_scaling() {
    let ns: Vec<usize> = vec![16, 32, 64, 128, 256, 512, 1024];
    let mut pass = true;
    let mut detail = String::new();
    for sigma in [0.75, 1.0, 1.5] {
        let measured: Vec<(f64, f64)> =
            ns.iter().map(|&n| (n as f64, hilbert_sum(n, sigma))).collect();
        // model functions for the three regimes, fitted over the same grid so
        // finite-n curvature (the log factor at sigma = 1) cancels
        let model = |n: f64| -> f64 {
            if sigma < 1.0 {
                n.powf(1.0 - 2.0 * sigma)
            } else if sigma == 1.0 {
                n.ln() / n
            } else {
                n.powf(-sigma)
            }
        };
        let reference: Vec<(f64, f64)> = ns.iter().map(|&n| (n as f64, model(n as f64))).collect();
        let diff = (loglog_slope(&measured) - loglog_slope(&reference)).abs();
        pass &= diff <= 0.15;
        detail.push_str(&format!("sigma={sigma}: slope gap {diff:.3}  "));
    }
    verdict(10, "hilbert-sum slopes match the three-regime prediction", pass, &detail);
}

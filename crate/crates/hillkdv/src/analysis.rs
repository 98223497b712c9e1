//! End-to-end experiments: gap and Dirichlet decay checks, the concavity
//! probe for H* along single-mode amplitude ladders, and renormalized
//! frequency estimates by finite differences in action space.


use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::{action_in, hamiltonian_report, GapContour, HamiltonianReport};
use crate::discriminant::DiscriminantModel;
use crate::error::{Error, Result};
use crate::potential::{FourierPotential, PotentialSpec, SeqWeight};
use crate::spectrum::{compute_spectra, GalerkinConfig, HillSpectra};

fn default_galerkin_n() -> usize {
    64
}
fn default_product_m() -> usize {
    64
}
fn default_n_cut() -> usize {
    32
}
fn default_weights() -> Vec<SeqWeight> {
    vec![SeqWeight { s: -0.5, p: 4.0 }]
}
fn default_ladder() -> Vec<f64> {
    vec![0.2, 0.1, 0.05, 0.025]
}
fn default_probe_mode() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub potential: PotentialSpec,
    #[serde(default = "default_galerkin_n")]
    pub galerkin_n: usize,
    #[serde(default = "default_product_m")]
    pub product_m: usize,
    #[serde(default = "default_n_cut")]
    pub n_cut: usize,
    #[serde(default = "default_weights")]
    pub weights: Vec<SeqWeight>,
    #[serde(default = "default_ladder")]
    pub ladder: Vec<f64>,
    #[serde(default = "default_probe_mode")]
    pub probe_mode: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.galerkin_n < 8 {
            return Err(Error::InvalidConfig(format!("galerkin_n={} < 8", self.galerkin_n)));
        }
        if self.n_cut == 0 || self.product_m == 0 {
            return Err(Error::InvalidConfig("n_cut and product_m must be positive".into()));
        }
        if self.probe_mode == 0 {
            return Err(Error::InvalidConfig("probe_mode must be positive".into()));
        }
        for w in &self.weights {
            SeqWeight::new(w.s, w.p)?;
        }
        if self.ladder.len() < 3 {
            return Err(Error::InvalidConfig("amplitude ladder needs at least 3 entries".into()));
        }
        if !self.ladder.windows(2).all(|w| w[0] > w[1]) || self.ladder.iter().any(|&a| a <= 0.0) {
            return Err(Error::InvalidConfig("amplitude ladder must be positive and strictly decreasing".into()));
        }
        // "one decade" read as a factor of 8: three halvings, matching the
        // default ladder 0.2 .. 0.025
        let span = self.ladder[0] / self.ladder[self.ladder.len() - 1];
        if span < 8.0 {
            return Err(Error::InvalidConfig(format!("amplitude ladder spans only a factor {span:.2}, need 8")));
        }
        self.potential.build()?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Builds the full pipeline for a potential at the config's scale.
pub fn build_model(pot: &FourierPotential, cfg: &ExperimentConfig) -> Result<DiscriminantModel> {
    let spec = compute_spectra(pot, &GalerkinConfig::with_n(cfg.galerkin_n))?;
    DiscriminantModel::new(pot, &spec, cfg.product_m)
}

// ---------------------------------------------------------------------------
// decay

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayRow {
    pub n: usize,
    pub gamma: Complex64,
    pub tau_minus_mu: Complex64,
    pub q_2n_abs: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailEntry {
    pub start: usize,
    pub gamma_tail: f64,
    pub gamma_bound: f64,
    pub dirichlet_tail: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightTails {
    pub s: f64,
    pub p: f64,
    pub entries: Vec<TailEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    pub tails: Vec<WeightTails>,
    /// Fitted log-log slope of |γ_n| against |q̂_{2n}|.
    pub gamma_slope: f64,
}

fn tail_starts(n_max: usize) -> Vec<usize> {
    let mut out = vec![1];
    let mut n = 2;
    while n <= n_max / 2 {
        out.push(n);
        n *= 2;
    }
    out
}

fn log_slope(points: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Gap and Dirichlet decay: weighted tail norms T(N) = Σ_{n≥N}⟨n⟩^{sp}|γ_n|^p
/// for a ladder of N, with the one-sided tail bound
/// T(N) ≤ (6^p/2)‖R_{2N}q‖^p + C‖q‖^{2p}/N, C fitted at the smallest N.
pub fn decay_check(pot: &FourierPotential, spectra: &HillSpectra, weights: &[SeqWeight]) -> Result<DecayReport> {
    let n_max = spectra.n_max;
    let rows: Vec<DecayRow> = (1..=n_max)
        .map(|n| DecayRow {
            n,
            gamma: spectra.gamma_n(n),
            tau_minus_mu: spectra.tau_n(n) - spectra.mu_n(n),
            q_2n_abs: pot.coeff_doubled(2 * n as i64).norm(),
        })
        .collect();

    let starts = tail_starts(n_max);
    let mut tails = Vec::new();
    for w in weights {
        let tail_of = |start: usize, f: &dyn Fn(&DecayRow) -> f64| -> f64 {
            rows[start - 1..]
                .iter()
                .map(|r| w.weight(r.n as i64).powf(w.p) * f(r).powf(w.p))
                .sum()
        };
        // ‖R_{2N}q‖^p in the doubled-index convention
        let rest_norm_p = |start: usize| -> f64 {
            pot.coeffs()
                .filter(|(k, _)| k.unsigned_abs() as usize >= start)
                .map(|(k, v)| w.weight(2 * k).powf(w.p) * v.norm().powf(w.p))
                .sum()
        };
        let q_norm = pot.norm(*w);
        let lead = 6.0_f64.powf(w.p) / 2.0;
        let n0 = starts[0];
        let t0 = tail_of(n0, &|r| r.gamma.norm());
        let c_fit = ((t0 - lead * rest_norm_p(n0)) * n0 as f64 / q_norm.powf(2.0 * w.p)).max(0.0);
        let entries = starts
            .iter()
            .map(|&start| TailEntry {
                start,
                gamma_tail: tail_of(start, &|r| r.gamma.norm()),
                gamma_bound: lead * rest_norm_p(start) + c_fit * q_norm.powf(2.0 * w.p) / start as f64,
                dirichlet_tail: tail_of(start, &|r| r.tau_minus_mu.norm()),
            })
            .collect();
        tails.push(WeightTails { s: w.s, p: w.p, entries });
    }

    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.q_2n_abs > 1e-13 && r.gamma.norm() > 1e-13)
        .map(|r| (r.q_2n_abs, r.gamma.norm()))
        .collect();
    let gamma_slope = if pts.len() >= 3 { log_slope(&pts) } else { f64::NAN };

    Ok(DecayReport { rows, tails, gamma_slope })
}

// ---------------------------------------------------------------------------
// concavity probe

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Rung {
    pub amplitude: f64,
    pub action: f64,
    pub h_star: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConcavityReport {
    pub rungs: Vec<Rung>,
    /// Extrapolated limit of H*/I_n², expected −3.
    pub hstar_ratio: f64,
    pub hstar_ratio_uncertainty: f64,
    /// Extrapolated limit of ω*_n/I_n, expected −6.
    pub omega_ratio: f64,
    pub omega_ratio_uncertainty: f64,
    /// Mixed finite-difference Hessian entry ∂²H*/∂I_n∂I_m, expected 0.
    pub mixed_hessian: f64,
}

fn probe_point(cfg: &ExperimentConfig, pot: &FourierPotential) -> Result<(HamiltonianReport, DiscriminantModel)> {
    let dm = build_model(pot, cfg)?;
    let rep = hamiltonian_report(&dm, cfg.n_cut)?;
    Ok((rep, dm))
}

/// Richardson extrapolation to I = 0 assuming a leading error linear in I.
/// Returns (limit, uncertainty) from the two finest pairs.
fn extrapolate(points: &[(f64, f64)]) -> (f64, f64) {
    let k = points.len();
    let pair = |i: usize, j: usize| -> f64 {
        let (xi, yi) = points[i];
        let (xj, yj) = points[j];
        yj + (yj - yi) * xj / (xi - xj)
    };
    let best = pair(k - 2, k - 1);
    let alt = pair(k - 3, k - 2);
    (best, (best - alt).abs())
}

/// Single-mode amplitude ladder: H*/I_n² → −3 and ω*_n/I_n → −6 at I = 0,
/// plus the mixed Hessian entry from a two-mode family.
pub fn concavity_probe(cfg: &ExperimentConfig) -> Result<ConcavityReport> {
    let n = cfg.probe_mode;
    let rungs: Vec<Rung> = cfg
        .ladder
        .par_iter()
        .map(|&a| {
            let pot = FourierPotential::cosine(n as i64, a);
            let (rep, _) = probe_point(cfg, &pot)?;
            Ok(Rung {
                amplitude: a,
                action: rep.i[n - 1].re,
                h_star: rep.h_star.re,
            })
        })
        .collect::<Result<_>>()?;

    let ratio_pts: Vec<(f64, f64)> = rungs
        .iter()
        .map(|r| (r.action, r.h_star / (r.action * r.action)))
        .collect();
    let (hstar_ratio, hstar_unc) = extrapolate(&ratio_pts);

    // centered frequency differences between consecutive rungs
    let omega_pts: Vec<(f64, f64)> = rungs
        .windows(2)
        .map(|w| {
            let omega = (w[0].h_star - w[1].h_star) / (w[0].action - w[1].action);
            let i_mid = 0.5 * (w[0].action + w[1].action);
            (i_mid, omega / i_mid)
        })
        .collect();
    let (omega_ratio, omega_unc) = extrapolate(&omega_pts);

    for (limit, unc) in [(hstar_ratio, hstar_unc), (omega_ratio, omega_unc)] {
        let rel = 100.0 * unc / limit.abs().max(1e-300);
        if rel > 10.0 {
            return Err(Error::LadderTooShallow(rel));
        }
    }

    let mixed_hessian = mixed_hessian(cfg)?;

    Ok(ConcavityReport {
        rungs,
        hstar_ratio,
        hstar_ratio_uncertainty: hstar_unc,
        omega_ratio,
        omega_ratio_uncertainty: omega_unc,
        mixed_hessian,
    })
}

/// ∂²H*/∂I_n∂I_m for the two-mode family (n, m) = (probe_mode, probe_mode+1)
/// by a mixed second difference over amplitude corners.
fn mixed_hessian(cfg: &ExperimentConfig) -> Result<f64> {
    let n = cfg.probe_mode;
    let m = n + 1;
    let a = cfg.ladder[cfg.ladder.len() - 2];
    let eps = 0.5;
    let corners: Vec<(f64, f64)> = vec![
        (a * (1.0 + eps), a * (1.0 + eps)),
        (a * (1.0 + eps), a * (1.0 - eps)),
        (a * (1.0 - eps), a * (1.0 + eps)),
        (a * (1.0 - eps), a * (1.0 - eps)),
    ];
    let evals: Vec<(f64, f64, f64)> = corners
        .par_iter()
        .map(|&(an, am)| {
            let pot = FourierPotential::cosine(n as i64, an).add(&FourierPotential::cosine(m as i64, am));
            let (rep, _) = probe_point(cfg, &pot)?;
            Ok((rep.i[n - 1].re, rep.i[m - 1].re, rep.h_star.re))
        })
        .collect::<Result<_>>()?;
    let (i_pp, i_pm, i_mp, i_mm) = (evals[0], evals[1], evals[2], evals[3]);
    let d_h = i_pp.2 - i_pm.2 - i_mp.2 + i_mm.2;
    let d_in = 0.5 * ((i_pp.0 + i_pm.0) - (i_mp.0 + i_mm.0));
    let d_im = 0.5 * ((i_pp.1 + i_mp.1) - (i_pm.1 + i_mm.1));
    Ok(d_h / (d_in * d_im))
}

// ---------------------------------------------------------------------------
// frequencies

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrequencyReport {
    /// ω*_n by finite differences of H* under amplitude perturbation of mode n.
    pub omega: Vec<f64>,
    /// midpoint action (I_n^+ + I_n^−)/2 of the two probes; the difference
    /// quotient equals ∂H*/∂I_n there, not at the base potential
    pub i_mid: Vec<f64>,
    pub omega_max_abs: f64,
}

/// Renormalized frequencies of the potential in `cfg` for n ≤ n_top.
pub fn frequency_check(cfg: &ExperimentConfig, n_top: usize) -> Result<FrequencyReport> {
    let base = cfg.potential.build()?;
    let rows: Vec<(f64, f64)> = (1..=n_top)
        .into_par_iter()
        .map(|n| {
            let delta = 0.02 * (1.0 + base.coeff(n as i64).norm());
            let bump = FourierPotential::cosine(n as i64, delta);
            let plus = base.add(&bump);
            let minus = base.add(&bump.scaled(-1.0));
            let (rp, dmp) = probe_point(cfg, &plus)?;
            let (rm, dmm) = probe_point(cfg, &minus)?;
            // I_n at both endpoints, from whatever route the gap size selects
            let ip = if n <= dmp.m {
                rp.i[n - 1].re
            } else {
                let c = GapContour::for_gap(&dmp, n)?;
                action_in(&dmp, n, &c)?.re
            };
            let im = if n <= dmm.m {
                rm.i[n - 1].re
            } else {
                let c = GapContour::for_gap(&dmm, n)?;
                action_in(&dmm, n, &c)?.re
            };
            let mid = 0.5 * (ip + im);
            if (ip - im).abs() < 1e-14 {
                return Ok((0.0, mid));
            }
            Ok(((rp.h_star.re - rm.h_star.re) / (ip - im), mid))
        })
        .collect::<Result<_>>()?;
    let (omega, i_mid): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    let omega_max_abs = omega.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
    Ok(FrequencyReport { omega, i_mid, omega_max_abs })
}

/// ω* at I = 0 is 0 by convention.
pub fn omega_at_zero() -> f64 {
    0.0
}

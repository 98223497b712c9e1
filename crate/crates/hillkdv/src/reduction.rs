//! Lyapunov–Schmidt reduction of the eigenvalue problem near gap n: the
//! off-resonance operator T_n(λ), the reduced resolvent K_n = (Id−T_n)^{−1},
//! the 2×2 block B_n with coefficients a_n, b_{±n}, and root localization
//! for λ_n^± independent of the Galerkin solver.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{FourierPotential, SeqWeight};
use crate::spectrum::{compute_spectra, GalerkinConfig};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionBlock {
    pub n: usize,
    pub lambda: Complex64,
    pub a_n: Complex64,
    pub b_plus: Complex64,
    pub b_minus: Complex64,
    pub det: Complex64,
    pub truncation: usize,
    /// Neumann term count, or None for the dense direct solve.
    pub neumann_terms: Option<usize>,
}

/// Resolution strategy for K_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Direct,
    Neumann,
}

/// Strip and root disc of gap n.
#[derive(Debug, Clone, Copy)]
pub struct StripDisc {
    pub n: usize,
    pub disc_radius: f64,
}

impl StripDisc {
    pub fn new(n: usize, q_norm: f64) -> Self {
        Self { n, disc_radius: 4.0 * (n as f64).sqrt() * q_norm }
    }

    pub fn center(&self) -> f64 {
        (self.n as f64 * PI).powi(2)
    }

    pub fn in_strip(&self, lambda: Complex64) -> bool {
        (lambda.re - self.center()).abs() <= 12.0 * self.n as f64
    }

    pub fn in_disc(&self, lambda: Complex64) -> bool {
        (lambda - Complex64::new(self.center(), 0.0)).norm() < self.disc_radius
    }

    /// D_n ⊂ S_n as soon as the disc radius is below the strip half-width.
    pub fn disc_inside_strip(&self) -> bool {
        self.disc_radius <= 12.0 * self.n as f64
    }
}

/// Default coefficient window: covers the convolution range of q around ±n.
pub fn default_window(pot: &FourierPotential, n: usize) -> usize {
    let span = 4 * pot.max_index().unsigned_abs() as usize;
    (4 * n).max(span + 2 * n)
}

fn check_window(window: usize, n: usize) -> Result<()> {
    if window < 2 * n {
        return Err(Error::WindowTooSmall { got: window, n, need: 2 * n });
    }
    Ok(())
}

/// Matrix of T_n(λ) on the index window [−w, w] in the [0,2] convention:
/// (T_n f)_m = Σ_{|k|≠n} q̂_{m−k} f_k / (λ − k²π²).
pub fn tn_matrix(pot: &FourierPotential, n: usize, lambda: Complex64, window: usize) -> Result<DMatrix<Complex64>> {
    check_window(window, n)?;
    let dim = 2 * window + 1;
    let w = window as i64;
    let nn = n as i64;
    Ok(DMatrix::from_fn(dim, dim, |row, col| {
        let k = col as i64 - w;
        if k.abs() == nn {
            return Complex64::new(0.0, 0.0);
        }
        let m = row as i64 - w;
        let denom = lambda - (k as f64 * PI).powi(2);
        pot.coeff_doubled(m - k) / denom
    }))
}

/// T_n(λ) applied to a coefficient vector over the same window.
pub fn tn_apply(
    pot: &FourierPotential,
    n: usize,
    lambda: Complex64,
    window: usize,
    f: &DVector<Complex64>,
) -> Result<DVector<Complex64>> {
    let mat = tn_matrix(pot, n, lambda, window)?;
    Ok(&mat * f)
}

fn basis_vector(window: usize, index: i64) -> DVector<Complex64> {
    let mut v = DVector::from_element(2 * window + 1, Complex64::new(0.0, 0.0));
    v[(index + window as i64) as usize] = Complex64::new(1.0, 0.0);
    v
}

fn v_apply(pot: &FourierPotential, window: usize, f: &DVector<Complex64>) -> DVector<Complex64> {
    let dim = 2 * window + 1;
    let w = window as i64;
    DVector::from_fn(dim, |row, _| {
        let m = row as i64 - w;
        (0..dim)
            .map(|col| pot.coeff_doubled(m - (col as i64 - w)) * f[col])
            .sum()
    })
}

fn solve_kn(
    pot: &FourierPotential,
    n: usize,
    lambda: Complex64,
    window: usize,
    rhs: &DVector<Complex64>,
    mode: SolveMode,
) -> Result<(DVector<Complex64>, Option<usize>)> {
    let t = tn_matrix(pot, n, lambda, window)?;
    match mode {
        SolveMode::Direct => {
            let dim = 2 * window + 1;
            let a = DMatrix::identity(dim, dim) - &t;
            let x = a.lu().solve(rhs).ok_or(Error::ConvergenceFailure)?;
            Ok((x, None))
        }
        SolveMode::Neumann => {
            let mut x = rhs.clone();
            let mut term = rhs.clone();
            for it in 1..=200 {
                term = &t * &term;
                let inc = term.norm();
                x += &term;
                if inc < 1e-14 * (1.0 + x.norm()) {
                    return Ok((x, Some(it)));
                }
                if inc > 1e6 * (1.0 + rhs.norm()) {
                    return Err(Error::NeumannDivergence(n));
                }
            }
            Err(Error::NeumannDivergence(n))
        }
    }
}

/// The reduced 2×2 block at (n, λ): a_n = ⟨K_nVe_n, e_n⟩, b_n and b_{−n},
/// det B_n = (λ − n²π² − a_n)² − b_n b_{−n}.
pub fn reduction_block(
    pot: &FourierPotential,
    n: usize,
    lambda: Complex64,
    window: usize,
    mode: SolveMode,
) -> Result<ReductionBlock> {
    check_window(window, n)?;
    let nn = n as i64;
    let ve_plus = v_apply(pot, window, &basis_vector(window, nn));
    let ve_minus = v_apply(pot, window, &basis_vector(window, -nn));
    let (k_plus, terms) = solve_kn(pot, n, lambda, window, &ve_plus, mode)?;
    let (k_minus, _) = solve_kn(pot, n, lambda, window, &ve_minus, mode)?;
    let at = |v: &DVector<Complex64>, idx: i64| v[(idx + window as i64) as usize];
    let a_n = at(&k_plus, nn);
    let b_plus = at(&k_minus, nn);
    let b_minus = at(&k_plus, -nn);
    let shift = lambda - (n as f64 * PI).powi(2);
    let det = (shift - a_n) * (shift - a_n) - b_plus * b_minus;
    Ok(ReductionBlock {
        n,
        lambda,
        a_n,
        b_plus,
        b_minus,
        det,
        truncation: window,
        neumann_terms: terms,
    })
}

/// The mirrored diagonal coefficient ⟨K_nVe_{−n}, e_{−n}⟩; equals a_n.
pub fn a_minus(pot: &FourierPotential, n: usize, lambda: Complex64, window: usize, mode: SolveMode) -> Result<Complex64> {
    let ve_minus = v_apply(pot, window, &basis_vector(window, -(n as i64)));
    let (k_minus, _) = solve_kn(pot, n, lambda, window, &ve_minus, mode)?;
    Ok(k_minus[(window as i64 - n as i64) as usize])
}

/// Upper estimate of the shifted operator norm ‖T_n(λ)‖_{s,p;±n} on the
/// truncation window, by interpolation between the weighted row-sum and
/// column-sum norms. Exact only for the truncation, and an upper bound
/// for p between 1 and ∞; reported as an estimate.
pub fn shifted_norm_estimate(
    pot: &FourierPotential,
    n: usize,
    lambda: Complex64,
    window: usize,
    w: &SeqWeight,
) -> Result<f64> {
    let t = tn_matrix(pot, n, lambda, window)?;
    let dim = 2 * window + 1;
    let wi = window as i64;
    let mut worst = 0.0_f64;
    for shift in [n as i64, -(n as i64)] {
        let wgt = |i: usize| w.weight(i as i64 - wi + shift);
        let mut row_sum = 0.0_f64;
        let mut col_sum = 0.0_f64;
        for i in 0..dim {
            let mut rs = 0.0;
            let mut cs = 0.0;
            for j in 0..dim {
                rs += t[(i, j)].norm() * wgt(i) / wgt(j);
                cs += t[(j, i)].norm() * wgt(j) / wgt(i);
            }
            row_sum = row_sum.max(rs);
            col_sum = col_sum.max(cs);
        }
        // ‖A‖_p ≤ ‖A‖_1^{1/p} ‖A‖_∞^{1−1/p}
        let est = col_sum.powf(1.0 / w.p) * row_sum.powf(1.0 - 1.0 / w.p);
        worst = worst.max(est);
    }
    Ok(worst)
}

fn det_at(pot: &FourierPotential, n: usize, lambda: Complex64, window: usize) -> Result<Complex64> {
    Ok(reduction_block(pot, n, lambda, window, SolveMode::Direct)?.det)
}

/// Winding number of det B_n around ∂D_n by the argument principle.
pub fn winding_count(pot: &FourierPotential, n: usize, window: usize, disc: &StripDisc) -> Result<i64> {
    let nodes = 256;
    let center = Complex64::new(disc.center(), 0.0);
    let r = disc.disc_radius;
    let h = 1e-6 * (1.0 + r);
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let th = 2.0 * PI * j as f64 / nodes as f64;
        let z = center + r * Complex64::new(th.cos(), th.sin());
        let dz = Complex64::new(0.0, 1.0) * (z - center) * (2.0 * PI / nodes as f64);
        let d = det_at(pot, n, z, window)?;
        let dp = (det_at(pot, n, z + h, window)? - det_at(pot, n, z - h, window)?) / (2.0 * h);
        total += dp / d * dz;
    }
    Ok((total / (2.0 * PI * Complex64::new(0.0, 1.0))).re.round() as i64)
}

/// The two roots of det B_n in D_n, Newton-started from n²π² ± γ_n/2 with
/// γ_n taken from a small internal Galerkin solve, guarded by the
/// argument-principle count over ∂D_n.
pub fn locate_roots(pot: &FourierPotential, n: usize, window: usize) -> Result<(Complex64, Complex64)> {
    let gal_n = (2 * n + 8).max(24);
    let spec = compute_spectra(pot, &GalerkinConfig::with_n(gal_n))?;
    let half_gap = spec.gamma_n(n) / 2.0;
    let center = Complex64::new((n as f64 * PI).powi(2), 0.0);
    locate_roots_from(pot, n, window, (center - half_gap, center + half_gap))
}

/// Root location with explicit Newton starting points.
pub fn locate_roots_from(
    pot: &FourierPotential,
    n: usize,
    window: usize,
    starts: (Complex64, Complex64),
) -> Result<(Complex64, Complex64)> {
    check_window(window, n)?;
    let q_norm = pot.norm(SeqWeight::l2());
    let disc = StripDisc::new(n, q_norm);
    let count = winding_count(pot, n, window, &disc)?;
    if count != 2 {
        return Err(Error::RootCountMismatch { n, count });
    }
    let newton = |mut lam: Complex64| -> Result<Complex64> {
        let center = Complex64::new(disc.center(), 0.0);
        for _ in 0..60 {
            let h = 1e-7 * (1.0 + lam.norm());
            let d = det_at(pot, n, lam, window)?;
            let dp = (det_at(pot, n, lam + h, window)? - det_at(pot, n, lam - h, window)?) / (2.0 * h);
            let step = d / dp;
            lam -= step;
            if (lam - center).norm() > 2.0 * disc.disc_radius.max(1.0) {
                return Err(Error::NewtonDivergence(n));
            }
            if step.norm() < 1e-12 * (1.0 + lam.norm()) {
                return Ok(lam);
            }
        }
        Err(Error::NewtonDivergence(n))
    };
    Ok((newton(starts.0)?, newton(starts.1)?))
}

/// √6 · max over a sample set (∂D_n plus strip points) of |b_n b_{−n}|^{1/2};
/// the right-hand side of the root separation estimate.
pub fn xi_separation_bound(pot: &FourierPotential, n: usize, window: usize) -> Result<f64> {
    let q_norm = pot.norm(SeqWeight::l2());
    let disc = StripDisc::new(n, q_norm);
    let center = Complex64::new(disc.center(), 0.0);
    let mut samples: Vec<Complex64> = (0..16)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / 16.0;
            center + disc.disc_radius * Complex64::new(th.cos(), th.sin())
        })
        .collect();
    for j in 0..8 {
        let x = -12.0 * n as f64 + 24.0 * n as f64 * (j as f64 + 0.5) / 8.0;
        samples.push(center + Complex64::new(x, 0.0));
    }
    let mut best = 0.0_f64;
    for lam in samples {
        let blk = reduction_block(pot, n, lam, window, SolveMode::Direct)?;
        best = best.max((blk.b_plus * blk.b_minus).norm().sqrt());
    }
    Ok(6.0_f64.sqrt() * best)
}

/// Σ_{|m|≠n} |m² − n²|^{−σ} over the integers, direct sum with an
/// integral tail correction.
pub fn hilbert_sum(n: usize, sigma: f64) -> f64 {
    let nf = n as f64;
    let n2 = nf * nf;
    let cutoff: usize = 100_000.max(10 * n);
    let mut sum = n2.powf(-sigma); // m = 0
    for m in 1..=cutoff {
        if m == n {
            continue;
        }
        let mf = m as f64;
        sum += 2.0 * (mf * mf - n2).abs().powf(-sigma);
    }
    // ∫_M^∞ (x²−n²)^{−σ} dx ≈ M^{1−2σ}/(2σ−1) + σ n² M^{−1−2σ}/(2σ+1)
    let mf = cutoff as f64;
    let tail = mf.powf(1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0)
        + sigma * n2 * mf.powf(-1.0 - 2.0 * sigma) / (2.0 * sigma + 1.0);
    sum + 2.0 * tail
}

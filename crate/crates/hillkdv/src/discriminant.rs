//! Floquet discriminant Δ(λ) of −∂² + q, its λ-derivatives, and the
//! truncated product representations of Δ̇, Δ² − 4, the canonical root
//! √c(Δ² − 4), and ψ = Δ̇ / √c with zero-potential tail factors.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potential::FourierPotential;
use crate::spectrum::{HillSpectra, TIE_BAND};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Entire function sin(√λ)/√λ.
pub fn sinc_sqrt(lambda: Complex64) -> Complex64 {
    let z2 = lambda;
    if z2.norm() < 1e-6 {
        // series in λ, accurate to machine precision here
        Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        let z = z2.sqrt();
        z.sin() / z
    }
}

/// Discriminant of the zero potential, 2 cos √λ.
pub fn zero_delta(lambda: Complex64) -> Complex64 {
    2.0 * lambda.sqrt().cos()
}

/// d/dλ of 2 cos √λ, equal to −sin(√λ)/√λ.
pub fn zero_delta_dot(lambda: Complex64) -> Complex64 {
    -sinc_sqrt(lambda)
}

/// ψ of the zero potential, 1/(2i√λ).
pub fn zero_psi(lambda: Complex64) -> Complex64 {
    1.0 / (2.0 * I * lambda.sqrt())
}

/// F of the zero potential, −i√λ (principal branch).
pub fn zero_f(lambda: Complex64) -> Complex64 {
    -I * lambda.sqrt()
}

/// One RK4 integration of the fundamental system together with its first
/// and second λ-variations. Returns (Δ, Δ̇, Δ̈).
fn floquet_traces(pot: &FourierPotential, lambda: Complex64, steps: usize) -> (Complex64, Complex64, Complex64) {
    // state: (y1 y1' y2 y2' z1 z1' z2 z2' w1 w1' w2 w2')
    // y'' = (q − λ) y, z'' = (q − λ) z − y, w'' = (q − λ) w − 2z
    let h = 1.0 / steps as f64;
    // q sampled at the RK4 stage abscissae
    let q: Vec<Complex64> = (0..=2 * steps).map(|j| pot.evaluate(0.5 * h * j as f64)).collect();

    let deriv = |s: &[Complex64; 12], qv: Complex64| -> [Complex64; 12] {
        let c = qv - lambda;
        [
            s[1], c * s[0],
            s[3], c * s[2],
            s[5], c * s[4] - s[0],
            s[7], c * s[6] - s[2],
            s[9], c * s[8] - 2.0 * s[4],
            s[11], c * s[10] - 2.0 * s[6],
        ]
    };

    let mut s = [Complex64::new(0.0, 0.0); 12];
    s[0] = Complex64::new(1.0, 0.0);
    s[3] = Complex64::new(1.0, 0.0);

    for j in 0..steps {
        let (q0, qm, q1) = (q[2 * j], q[2 * j + 1], q[2 * j + 2]);
        let k1 = deriv(&s, q0);
        let mut t = s;
        for i in 0..12 {
            t[i] = s[i] + 0.5 * h * k1[i];
        }
        let k2 = deriv(&t, qm);
        for i in 0..12 {
            t[i] = s[i] + 0.5 * h * k2[i];
        }
        let k3 = deriv(&t, qm);
        for i in 0..12 {
            t[i] = s[i] + h * k3[i];
        }
        let k4 = deriv(&t, q1);
        for i in 0..12 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }

    (s[0] + s[3], s[4] + s[7], s[8] + s[11])
}

/// Step count targeting ~1e−10 global RK4 error at frequency k = √|λ|.
fn step_count(lambda: Complex64, floor: usize) -> usize {
    let k = lambda.norm().sqrt().max(1.0);
    let s = (316.0 * k.powf(1.25)).ceil() as usize;
    s.max(floor)
}

/// Discriminant model: ODE evaluation plus product forms truncated at M
/// gaps with closed-form zero-potential tails.
pub struct DiscriminantModel {
    pot: FourierPotential,
    pub spectra: HillSpectra,
    /// Product truncation, clamped to the reliable spectral range.
    pub m: usize,
    ode_floor: usize,
}

impl DiscriminantModel {
    /// Builds the model and locates the critical points λ_n^• of Δ̇ for
    /// n = 1..=M by Newton iteration started at the gap midpoints.
    pub fn new(pot: &FourierPotential, spectra: &HillSpectra, m: usize) -> Result<Self> {
        let m = m.min(spectra.n_max);
        let mut model = Self {
            pot: pot.clone(),
            spectra: spectra.clone(),
            m,
            ode_floor: 512 + 64 * pot.max_index().unsigned_abs() as usize,
        };
        let mut crit = Vec::with_capacity(m);
        for n in 1..=m {
            crit.push(model.critical_point(n)?);
        }
        model.spectra.crit = crit;
        Ok(model)
    }

    pub fn potential(&self) -> &FourierPotential {
        &self.pot
    }

    /// Δ(λ) by direct integration of the fundamental system over one period.
    pub fn delta(&self, lambda: Complex64) -> Complex64 {
        self.traces(lambda).0
    }

    pub fn delta_dot(&self, lambda: Complex64) -> Complex64 {
        self.traces(lambda).1
    }

    pub fn delta_ddot(&self, lambda: Complex64) -> Complex64 {
        self.traces(lambda).2
    }

    pub fn traces(&self, lambda: Complex64) -> (Complex64, Complex64, Complex64) {
        floquet_traces(&self.pot, lambda, step_count(lambda, self.ode_floor))
    }

    /// Newton iteration for the root of Δ̇ in the isolating neighborhood of
    /// gap n, started at the midpoint τ_n. Collapsed gaps short-circuit to τ_n.
    fn critical_point(&self, n: usize) -> Result<Complex64> {
        let tau = self.spectra.tau_n(n);
        if self.spectra.gap_collapsed(n) {
            return Ok(tau);
        }
        let radius = n as f64 / 2.0 + self.spectra.gamma_n(n).norm();
        let mut lam = tau;
        for _ in 0..30 {
            let (_, dot, ddot) = self.traces(lam);
            let step = dot / ddot;
            lam -= step;
            if (lam - tau).norm() > radius {
                return Err(Error::NewtonDivergence(n));
            }
            if step.norm() < 1e-12 * (1.0 + lam.norm()) {
                return Ok(lam);
            }
        }
        Err(Error::NewtonDivergence(n))
    }

    /// Δ̇(λ) from the M-term product over critical points with the
    /// zero-potential tail.
    pub fn delta_dot_product(&self, lambda: Complex64) -> Complex64 {
        let mut prod = Complex64::new(1.0, 0.0);
        let mut free = Complex64::new(1.0, 0.0);
        for m in 1..=self.m {
            let m2p2 = (m as f64 * PI).powi(2);
            prod *= (self.spectra.crit_n(m) - lambda) / m2p2;
            free *= (m2p2 - lambda) / m2p2;
        }
        -prod * sinc_sqrt(lambda) / free
    }

    /// Δ²(λ) − 4 from the truncated eigenvalue product with the
    /// zero-potential tail. Also returns a crude relative tail defect.
    pub fn delta_sq_minus4_product(&self, lambda: Complex64) -> (Complex64, f64) {
        let mut prod = 4.0 * (self.spectra.lambda0_plus - lambda);
        let mut free = -4.0 * lambda;
        for n in 1..=self.m {
            let n4p4 = (n as f64 * PI).powi(4);
            let (lo, hi) = self.spectra.pair_n(n);
            prod *= (hi - lambda) * (lo - lambda) / n4p4;
            free *= ((n as f64 * PI).powi(2) - lambda).powi(2) / n4p4;
        }
        let s = sinc_sqrt(lambda);
        let tail = -4.0 * lambda * s * s / free;
        let defect = if self.m < self.spectra.gamma.len() {
            let g = self.spectra.gamma_n(self.m + 1).norm();
            g / (self.spectra.tau_n(self.m + 1) - lambda).norm().max(1.0)
        } else {
            0.0
        };
        (prod * tail, defect)
    }

    /// Standard root ς_n(λ) = (τ_n − λ) √+(1 − γ_n²/(4(τ_n − λ)²)),
    /// analytic off the gap segment.
    pub fn standard_root(&self, n: usize, lambda: Complex64) -> Result<Complex64> {
        let tau = self.spectra.tau_n(n);
        let gamma = self.spectra.gamma_n(n);
        if gamma.norm() < TIE_BAND * (1.0 + tau.norm()) {
            return Ok(tau - lambda);
        }
        let (lo, hi) = self.spectra.pair_n(n);
        let guard = 1e-12 * (1.0 + tau.norm());
        if segment_distance(lambda, lo, hi) < guard {
            return Err(Error::OnCut(n));
        }
        let d = tau - lambda;
        Ok(d * (Complex64::new(1.0, 0.0) - gamma * gamma / (4.0 * d * d)).sqrt())
    }

    /// Canonical root √c(Δ² − 4), branch fixed by i√c > 0 on (λ_0^+, λ_1^−),
    /// from standard roots with the zero-potential tail.
    pub fn canonical_root(&self, lambda: Complex64) -> Result<Complex64> {
        let mut prod = -2.0 * I * sqrt_plus(lambda - self.spectra.lambda0_plus);
        let mut free = Complex64::new(1.0, 0.0);
        for m in 1..=self.m {
            let m2p2 = (m as f64 * PI).powi(2);
            prod *= self.standard_root(m, lambda)? / m2p2;
            free *= (m2p2 - lambda) / m2p2;
        }
        Ok(prod * sinc_sqrt(lambda) / free)
    }

    /// ψ(λ) = Δ̇/√c; the zero-potential tails cancel and each gap
    /// contributes (λ_m^• − λ)/ς_m(λ).
    pub fn psi(&self, lambda: Complex64) -> Result<Complex64> {
        let mut val = 1.0 / (2.0 * I * sqrt_plus(lambda - self.spectra.lambda0_plus));
        for m in 1..=self.m {
            val *= (self.spectra.crit_n(m) - lambda) / self.standard_root(m, lambda)?;
        }
        Ok(val)
    }
}

/// Principal branch √+ with the cut along the negative real axis.
pub fn sqrt_plus(z: Complex64) -> Complex64 {
    z.sqrt()
}

/// Distance from p to the segment [a, b].
pub fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + t * ab)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{compute_spectra, GalerkinConfig};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn model(pot: &FourierPotential, n: usize, m: usize) -> DiscriminantModel {
        let spec = compute_spectra(pot, &GalerkinConfig::with_n(n)).unwrap();
        DiscriminantModel::new(pot, &spec, m).unwrap()
    }

    #[test]
    fn zero_potential_closed_forms() {
        let md = model(&FourierPotential::zero(), 32, 12);
        for lam in [c(0.3, 0.0), c(7.5, 2.0), c(-4.0, 1.0), c(55.0, -9.0), c(200.0, 30.0)] {
            let (d, dot, _) = md.traces(lam);
            assert!((d - zero_delta(lam)).norm() < 1e-9 * (1.0 + d.norm()), "delta at {lam}");
            assert!((dot - zero_delta_dot(lam)).norm() < 1e-9, "delta_dot at {lam}");
            let psi = md.psi(lam).unwrap();
            assert!((psi - zero_psi(lam)).norm() < 1e-9 * psi.norm(), "psi at {lam}");
        }
    }

    #[test]
    fn delta_is_two_at_periodic_eigenvalues() {
        let pot = FourierPotential::cosine(1, 0.1);
        let md = model(&pot, 48, 8);
        let d0 = md.delta(md.spectra.lambda0_plus);
        assert!((d0 - 2.0).norm() < 1e-7, "lambda0: {d0}");
        for n in 1..=6 {
            let sign = if n % 2 == 0 { 2.0 } else { -2.0 };
            let (lo, hi) = md.spectra.pair_n(n);
            for lam in [lo, hi] {
                let d = md.delta(lam);
                let tol = 1e-7 * (1.0 + lam.norm());
                assert!((d - sign).norm() < tol, "n={n}, delta={d}");
            }
        }
    }

    #[test]
    fn critical_points_kill_delta_dot() {
        let pot = FourierPotential::random(3, 1.0, 6, 0.15);
        let md = model(&pot, 48, 6);
        for n in 1..=6 {
            let dot = md.delta_dot(md.spectra.crit_n(n));
            assert!(dot.norm() < 1e-9 * (1.0 + md.spectra.crit_n(n).norm()), "n={n}: {dot}");
            // the root stays in the gap closure for real potentials
            let crit = md.spectra.crit_n(n);
            assert!(crit.im.abs() < 1e-8);
            let (lo, hi) = md.spectra.pair_n(n);
            assert!(crit.re > lo.re - 1e-6 && crit.re < hi.re + 1e-6);
        }
    }

    #[test]
    fn products_match_ode_values() {
        let pot = FourierPotential::cosine(1, 0.12);
        let md = model(&pot, 64, 24);
        // off-axis and between-gap points
        for lam in [c(3.0, 1.5), c(12.0, -2.0), c(30.0, 4.0), c(-2.0, 0.5)] {
            let (d, dot, _) = md.traces(lam);
            let dp = md.delta_dot_product(lam);
            assert!((dp - dot).norm() < 1e-5 * (1.0 + dot.norm()), "dot at {lam}: {dp} vs {dot}");
            let (sq, _) = md.delta_sq_minus4_product(lam);
            let direct = d * d - 4.0;
            assert!((sq - direct).norm() < 1e-5 * (1.0 + direct.norm()), "sq at {lam}");
        }
    }

    #[test]
    fn canonical_root_squares_to_delta_sq_minus4() {
        let pot = FourierPotential::random(11, 1.0, 6, 0.1);
        let md = model(&pot, 48, 16);
        for lam in [c(5.0, 1.0), c(20.0, -3.0), c(60.0, 2.0)] {
            let root = md.canonical_root(lam).unwrap();
            let (sq, _) = md.delta_sq_minus4_product(lam);
            assert!((root * root - sq).norm() < 1e-8 * (1.0 + sq.norm()), "at {lam}");
        }
    }

    #[test]
    fn canonical_root_sign_in_first_band_gap() {
        let pot = FourierPotential::cosine(1, 0.1);
        let md = model(&pot, 48, 16);
        let (lo1, _) = md.spectra.pair_n(1);
        let lam = c(0.5 * (md.spectra.lambda0_plus.re + lo1.re), 0.0);
        let root = md.canonical_root(lam).unwrap();
        assert!((I * root).re > 0.0, "i sqrt_c = {}", I * root);
        assert!((I * root).im.abs() < 1e-9 * root.norm());
    }

    #[test]
    fn psi_times_root_is_delta_dot() {
        let pot = FourierPotential::random(7, 1.2, 5, 0.12);
        let md = model(&pot, 48, 20);
        for lam in [c(4.0, 2.0), c(25.0, -1.0)] {
            let lhs = md.psi(lam).unwrap() * md.canonical_root(lam).unwrap();
            let rhs = md.delta_dot_product(lam);
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()), "at {lam}");
        }
    }

    #[test]
    fn standard_root_rejects_points_on_cut() {
        let pot = FourierPotential::cosine(1, 0.2);
        let md = model(&pot, 48, 4);
        let tau = md.spectra.tau_n(1);
        assert!(matches!(md.standard_root(1, tau), Err(Error::OnCut(1))));
        let off = tau + c(0.0, 1e-3);
        assert!(md.standard_root(1, off).is_ok());
    }
}

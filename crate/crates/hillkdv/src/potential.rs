//! Zero-mean periodic potentials given by finite Fourier coefficient tables,
//! weighted sequence norms, and the direct (grid-quadrature) Hamiltonian.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight exponents for the sequence norms `(Σ ⟨n⟩^{ps} |z_n|^p)^{1/p}`,
/// with `⟨n⟩ = 1 + |n|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeqWeight {
    pub s: f64,
    pub p: f64,
}

impl SeqWeight {
    pub fn new(s: f64, p: f64) -> Result<Self> {
        if !(-0.5..=0.0).contains(&s) {
            return Err(Error::InvalidConfig(format!("weight s={s} outside [-1/2, 0]")));
        }
        if !(2.0..f64::INFINITY).contains(&p) {
            return Err(Error::InvalidConfig(format!("weight p={p} outside [2, inf)")));
        }
        Ok(Self { s, p })
    }

    /// Plain ℓ² (s = 0, p = 2).
    pub fn l2() -> Self {
        Self { s: 0.0, p: 2.0 }
    }

    /// `⟨n⟩^s`
    pub fn weight(&self, n: i64) -> f64 {
        (1.0 + n.unsigned_abs() as f64).powf(self.s)
    }
}

/// Weighted norm of a finite indexed sequence.
pub fn seq_norm<I>(values: I, w: SeqWeight) -> f64
where
    I: IntoIterator<Item = (i64, Complex64)>,
{
    let sum: f64 = values
        .into_iter()
        .map(|(n, z)| w.weight(n).powf(w.p) * z.norm().powf(w.p))
        .sum();
    sum.powf(1.0 / w.p)
}

/// A zero-mean trigonometric polynomial `q(x) = Σ_k q_k e^{2πikx}` on [0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct FourierPotential {
    coeffs: BTreeMap<i64, Complex64>,
    real: bool,
}

impl FourierPotential {
    /// Validate and build a potential from a coefficient table.
    pub fn new<I>(coeffs: I, real: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut table = BTreeMap::new();
        for (k, v) in coeffs {
            if k == 0 {
                return Err(Error::NonZeroMean);
            }
            if v != Complex64::new(0.0, 0.0) {
                table.insert(k, v);
            }
        }
        if real {
            for (&k, &v) in &table {
                let conj = table.get(&-k).copied().unwrap_or_default();
                if (conj - v.conj()).norm() > 1e-12 * (1.0 + v.norm()) {
                    return Err(Error::NotReal(k));
                }
            }
        }
        Ok(Self { coeffs: table, real })
    }

    pub fn zero() -> Self {
        Self { coeffs: BTreeMap::new(), real: true }
    }

    /// `2a·cos(2πnx)`, the single-mode family used throughout the probes.
    pub fn cosine(n: i64, a: f64) -> Self {
        assert!(n != 0);
        let mut coeffs = BTreeMap::new();
        if a != 0.0 {
            coeffs.insert(n, Complex64::new(a, 0.0));
            coeffs.insert(-n, Complex64::new(a, 0.0));
        }
        Self { coeffs, real: true }
    }

    /// Random real potential with `|q_k| = amplitude·⟨k⟩^{−α}·u_k`,
    /// `u_k` uniform in [1/2, 1], uniform phases; deterministic in the seed.
    pub fn random(seed: u64, alpha: f64, mode_count: usize, amplitude: f64) -> Self {
        assert!(mode_count >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs = BTreeMap::new();
        for k in 1..=mode_count as i64 {
            let u: f64 = rng.gen_range(0.5..1.0);
            let phase: f64 = rng.gen_range(0.0..(2.0 * PI));
            let magnitude = amplitude * (1.0 + k as f64).powf(-alpha) * u;
            let q = Complex64::from_polar(magnitude, phase);
            if q != Complex64::new(0.0, 0.0) {
                coeffs.insert(k, q);
                coeffs.insert(-k, q.conj());
            }
        }
        Self { coeffs, real: true }
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    /// Coefficient in the period-2 embedding: `q̂_{2k} = q_k`, odd indices zero.
    pub fn coeff_doubled(&self, j: i64) -> Complex64 {
        if j % 2 == 0 {
            self.coeff(j / 2)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn max_index(&self) -> i64 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Weighted norm of the coefficient table in the [0,1] convention.
    pub fn norm(&self, w: SeqWeight) -> f64 {
        seq_norm(self.coeffs(), w)
    }

    /// Weighted norm of the period-2 embedded coefficients (indices 2k).
    pub fn norm_doubled(&self, w: SeqWeight) -> f64 {
        seq_norm(self.coeffs().map(|(k, v)| (2 * k, v)), w)
    }

    /// `q(x) = Σ q_k e^{2πikx}`
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let w = Complex64::from_polar(1.0, 2.0 * PI * x);
        let mut sum = Complex64::new(0.0, 0.0);
        for (&k, &q) in &self.coeffs {
            sum += q * w.powi(k as i32);
        }
        sum
    }

    /// Potential scaled by a real factor.
    pub fn scaled(&self, c: f64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&k, &v)| (k, v * c)).collect();
        Self { coeffs, real: self.real }
    }

    /// Sum of two potentials (real only if both are).
    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&k, &v) in &other.coeffs {
            let e = coeffs.entry(k).or_default();
            *e += v;
            if *e == Complex64::new(0.0, 0.0) {
                coeffs.remove(&k);
            }
        }
        Self { coeffs, real: self.real && other.real }
    }

    /// Shifted potential `q(x + θ)`.
    pub fn translate(&self, theta: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, &v)| (k, v * Complex64::from_polar(1.0, 2.0 * PI * k as f64 * theta)))
            .collect();
        Self { coeffs, real: false }
    }

    /// `⟨q, cos(kπx)⟩` on [0,1], evaluated analytically from the table.
    /// The `−cos(πx)` correction for odd k cancels in the Dirichlet matrix
    /// differences and is therefore omitted here.
    pub fn cos_coeff(&self, k: i64) -> Complex64 {
        let k = k.abs();
        if k == 0 {
            return Complex64::new(0.0, 0.0); // zero mean
        }
        if k % 2 == 0 {
            (self.coeff(k / 2) + self.coeff(-k / 2)) * 0.5
        } else {
            let kp = k as f64 * PI;
            let i = Complex64::new(0.0, 1.0);
            self.coeffs
                .iter()
                .map(|(&j, &q)| {
                    let tj = 2.0 * PI * j as f64;
                    q * (i / (tj + kp) + i / (tj - kp))
                })
                .sum()
        }
    }

    /// `(H^kdv, H_0) = (∫ ½ q_x² + q³ dx, ½ ∫ q² dx)` by uniform trapezoid
    /// quadrature, which is exact for trigonometric polynomials once
    /// `grid_size ≥ 3·max index + 1`.
    pub fn direct_hamiltonian(&self, grid_size: usize) -> Result<(Complex64, Complex64)> {
        let max_index = self.max_index();
        let need = (3 * max_index + 1).max(4) as usize;
        if grid_size < need {
            return Err(Error::GridTooCoarse { got: grid_size, max_index, need });
        }
        let mut h_kdv = Complex64::new(0.0, 0.0);
        let mut h0 = Complex64::new(0.0, 0.0);
        for j in 0..grid_size {
            let x = j as f64 / grid_size as f64;
            let w = Complex64::from_polar(1.0, 2.0 * PI * x);
            let mut q = Complex64::new(0.0, 0.0);
            let mut dq = Complex64::new(0.0, 0.0);
            for (&k, &c) in &self.coeffs {
                let term = c * w.powi(k as i32);
                q += term;
                dq += term * Complex64::new(0.0, 2.0 * PI * k as f64);
            }
            h_kdv += 0.5 * dq * dq + q * q * q;
            h0 += 0.5 * q * q;
        }
        let inv = 1.0 / grid_size as f64;
        Ok((h_kdv * inv, h0 * inv))
    }
}

/// On-disk potential description (`modes`/`real` or `random` form).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PotentialSpec {
    Explicit { modes: Vec<ModeSpec>, real: bool },
    Random { random: RandomSpec },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeSpec {
    pub k: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomSpec {
    pub seed: u64,
    pub alpha: f64,
    pub count: usize,
    pub amplitude: f64,
}

impl PotentialSpec {
    pub fn build(&self) -> Result<FourierPotential> {
        match self {
            PotentialSpec::Explicit { modes, real } => FourierPotential::new(
                modes.iter().map(|m| (m.k, Complex64::new(m.re, m.im))),
                *real,
            ),
            PotentialSpec::Random { random } => Ok(FourierPotential::random(
                random.seed,
                random.alpha,
                random.count,
                random.amplitude,
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_mean_mode() {
        let err = FourierPotential::new([(0, c(1.0, 0.0))], false).unwrap_err();
        assert!(matches!(err, Error::NonZeroMean));
    }

    #[test]
    fn rejects_broken_symmetry() {
        // {1: i, -1: i} claims to be real but conj symmetry fails
        let err = FourierPotential::new([(1, c(0.0, 1.0)), (-1, c(0.0, 1.0))], true).unwrap_err();
        assert!(matches!(err, Error::NotReal(_)));
    }

    #[test]
    fn cosine_evaluates() {
        let a = 0.3;
        let q = FourierPotential::cosine(1, a);
        assert!((q.evaluate(0.0) - c(2.0 * a, 0.0)).norm() < 1e-14);
        let x = 0.37;
        let expect = 2.0 * a * (2.0 * PI * x).cos();
        assert!((q.evaluate(x) - c(expect, 0.0)).norm() < 1e-13);
        assert!(FourierPotential::zero().evaluate(0.123).norm() == 0.0);
    }

    #[test]
    fn evaluate_matches_termwise_sum() {
        let q = FourierPotential::random(11, 0.5, 8, 0.2);
        let x = 0.3;
        let direct: Complex64 = q
            .coeffs()
            .map(|(k, v)| v * Complex64::from_polar(1.0, 2.0 * PI * k as f64 * x))
            .sum();
        assert!((q.evaluate(x) - direct).norm() < 1e-13);
    }

    #[test]
    fn seq_norm_hand_summed() {
        // z_n = 1/n for n=1..4, s=-1/2, p=4
        let w = SeqWeight::new(-0.5, 4.0).unwrap();
        let vals: Vec<(i64, Complex64)> =
            (1..=4).map(|n| (n, c(1.0 / n as f64, 0.0))).collect();
        let mut sum = 0.0;
        for n in 1..=4u32 {
            let weight = 1.0 / (1.0 + n as f64).sqrt();
            sum += weight.powi(4) * (1.0 / n as f64).powi(4);
        }
        let expect = sum.powf(0.25);
        assert!((seq_norm(vals, w) - expect).abs() < 1e-14);

        assert_eq!(seq_norm(std::iter::empty(), w), 0.0);
        let w2 = SeqWeight::new(0.0, 2.0).unwrap();
        assert!((seq_norm([(1, c(1.0, 0.0))], w2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn direct_hamiltonian_cosine() {
        let a = 0.17;
        let q = FourierPotential::cosine(1, a);
        let (h, h0) = q.direct_hamiltonian(64).unwrap();
        // ½∫(∂q)² = 4π²a², ∫q³ = 0, ½∫q² = a²
        assert!((h.re - 4.0 * PI * PI * a * a).abs() < 1e-12);
        assert!(h.im.abs() < 1e-14);
        assert!((h0.re - a * a).abs() < 1e-14);

        let (hz, h0z) = FourierPotential::zero().direct_hamiltonian(8).unwrap();
        assert_eq!(hz, c(0.0, 0.0));
        assert_eq!(h0z, c(0.0, 0.0));
    }

    #[test]
    fn direct_hamiltonian_two_mode_convolution_oracle() {
        let (a, b) = (0.11, 0.07);
        let q = FourierPotential::cosine(1, a).add(&FourierPotential::cosine(2, b));
        let (h, h0) = q.direct_hamiltonian(128).unwrap();
        // Parseval for the quadratic parts; brute-force coefficient
        // convolution for the cubic term.
        let quad: f64 = q
            .coeffs()
            .map(|(k, v)| 0.5 * (2.0 * PI * k as f64).powi(2) * v.norm_sqr())
            .sum();
        let mut cubic = Complex64::new(0.0, 0.0);
        for (k1, v1) in q.coeffs() {
            for (k2, v2) in q.coeffs() {
                for (k3, v3) in q.coeffs() {
                    if k1 + k2 + k3 == 0 {
                        cubic += v1 * v2 * v3;
                    }
                }
            }
        }
        assert!((h - (Complex64::new(quad, 0.0) + cubic)).norm() < 1e-11);
        let parseval: f64 = q.coeffs().map(|(_, v)| 0.5 * v.norm_sqr()).sum();
        assert!((h0.re - parseval).abs() < 1e-13);
    }

    #[test]
    fn grid_too_coarse_detected() {
        let q = FourierPotential::cosine(4, 0.1);
        assert!(matches!(
            q.direct_hamiltonian(10),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn random_potential_is_deterministic() {
        let a = FourierPotential::random(7, 1.0, 16, 0.1);
        let b = FourierPotential::random(7, 1.0, 16, 0.1);
        assert_eq!(a, b);
        assert!(a.is_real());
        let w = SeqWeight::new(-0.5, 4.0).unwrap();
        assert!(a.norm(w).is_finite());
        let zero = FourierPotential::random(3, 0.0, 4, 0.0);
        assert!(zero.is_zero());
    }

    #[test]
    fn translate_preserves_hamiltonian() {
        let q = FourierPotential::cosine(1, 0.1).add(&FourierPotential::cosine(3, 0.05));
        let (h, _) = q.direct_hamiltonian(64).unwrap();
        for j in 0..8 {
            let theta = j as f64 / 8.0 + 0.013;
            let (ht, _) = q.translate(theta).direct_hamiltonian(64).unwrap();
            assert!((ht - h).norm() <= 1e-10 * h.norm());
            assert!(ht.im.abs() < 1e-12);
        }
    }

    #[test]
    fn h0_is_parseval_norm_squared() {
        let q = FourierPotential::random(21, 1.0, 8, 0.3);
        let (_, h0) = q.direct_hamiltonian(64).unwrap();
        let w = SeqWeight::new(0.0, 2.0).unwrap();
        let n2 = 0.5 * q.norm(w).powi(2);
        assert!((h0.re - n2).abs() <= 1e-12 * n2.max(1.0));
    }
}

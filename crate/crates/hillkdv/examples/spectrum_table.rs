//! Band/gap table for a two-mode potential: periodic pairs, Dirichlet
//! eigenvalues, gap lengths, and how fast the gaps close.

use hillkdv::potential::FourierPotential;
use hillkdv::spectrum::{compute_spectra, GalerkinConfig};
use num_complex::Complex64;

fn main() {
    let pot = FourierPotential::new(
        [
            (1, Complex64::new(0.1, 0.0)),
            (-1, Complex64::new(0.1, 0.0)),
            (2, Complex64::new(0.03, 0.0)),
            (-2, Complex64::new(0.03, 0.0)),
        ],
        true,
    )
    .unwrap();
    let spec = compute_spectra(&pot, &GalerkinConfig::with_n(64)).unwrap();

    println!("lambda_0^+ = {:.10}", spec.lambda0_plus.re);
    println!(
        "{:>3} {:>16} {:>16} {:>16} {:>12} {:>10}",
        "n", "lambda_n^-", "lambda_n^+", "mu_n", "gamma_n", "tau-mu"
    );
    for n in 1..=12 {
        let (lo, hi) = spec.pair_n(n);
        let mu = spec.mu_n(n);
        println!(
            "{:>3} {:>16.10} {:>16.10} {:>16.10} {:>12.4e} {:>10.2e}",
            n,
            lo.re,
            hi.re,
            mu.re,
            spec.gamma_n(n).re,
            (spec.tau_n(n) - mu).norm()
        );
    }
}

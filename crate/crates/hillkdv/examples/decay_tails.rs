//! Weighted tail norms of the gap and Dirichlet sequences of a random
//! potential with prescribed coefficient decay, against the one-sided
//! tail bound in the remainder norm.

use hillkdv::analysis::decay_check;
use hillkdv::potential::{FourierPotential, SeqWeight};
use hillkdv::spectrum::{compute_spectra, GalerkinConfig};

fn main() {
    for alpha in [0.75, 1.0, 1.5] {
        let pot = FourierPotential::random(7, alpha, 16, 0.05);
        let spec = compute_spectra(&pot, &GalerkinConfig::with_n(64)).unwrap();
        let w = SeqWeight::new(-0.5, 4.0).unwrap();
        let rep = decay_check(&pot, &spec, &[w]).unwrap();

        println!("alpha = {alpha}, gamma-vs-q slope = {:.3}", rep.gamma_slope);
        println!(
            "  {:>5} {:>14} {:>14} {:>14}",
            "N", "T(N) gaps", "bound", "T(N) dirichlet"
        );
        for e in &rep.tails[0].entries {
            println!(
                "  {:>5} {:>14.6e} {:>14.6e} {:>14.6e}",
                e.start, e.gamma_tail, e.gamma_bound, e.dirichlet_tail
            );
        }
    }
}

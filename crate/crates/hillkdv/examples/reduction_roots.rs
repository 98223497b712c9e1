//! Two-dimensional reduction near each gap: the winding number of det B_n
//! counts two roots, Newton localizes them, and they match the Galerkin
//! periodic pairs; the gap length obeys |γ_n| ≤ √6 · sup |b_n b_{−n}|^{1/2}.

use hillkdv::potential::{FourierPotential, SeqWeight};
use hillkdv::reduction::{
    default_window, locate_roots, reduction_block, winding_count, xi_separation_bound, SolveMode,
    StripDisc,
};
use hillkdv::spectrum::{compute_spectra, GalerkinConfig};

fn main() {
    let pot = FourierPotential::cosine(1, 0.05);
    let spec = compute_spectra(&pot, &GalerkinConfig::with_n(64)).unwrap();
    let q_norm = pot.norm(SeqWeight::l2());

    println!(
        "{:>3} {:>8} {:>12} {:>12} {:>12} {:>12}",
        "n", "winding", "xi err -", "xi err +", "|gamma_n|", "sqrt6 bound"
    );
    for n in 1..=8 {
        let window = default_window(&pot, n);
        let disc = StripDisc::new(n, q_norm);
        let w = winding_count(&pot, n, window, &disc).unwrap();
        let (xi1, xi2) = locate_roots(&pot, n, window).unwrap();
        let (lo, hi) = spec.pair_n(n);
        let bound = xi_separation_bound(&pot, n, window).unwrap();
        println!(
            "{:>3} {:>8} {:>12.3e} {:>12.3e} {:>12.4e} {:>12.4e}",
            n,
            w,
            (xi1 - lo).norm(),
            (xi2 - hi).norm(),
            spec.gamma_n(n).norm(),
            bound
        );
    }

    let n = 1;
    let window = default_window(&pot, n);
    let (xi1, _) = locate_roots(&pot, n, window).unwrap();
    let block = reduction_block(&pot, n, xi1, window, SolveMode::Direct).unwrap();
    println!(
        "\nblock at xi_1: a_n={:.4e}, b_n={:.4e}, b_-n={:.4e}, det={:.2e}",
        block.a_n.norm(),
        block.b_plus.norm(),
        block.b_minus.norm(),
        block.det.norm()
    );
}

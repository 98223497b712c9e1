//! The three independent routes to the action variables — ∮λψ, ∮F_n, and
//! the arccosh quadrature over the gap — agree, and I_n tracks γ_n²/8nπ.

use std::f64::consts::PI;

use hillkdv::actions::{
    action_in_f_contour, action_in_gap, action_in_lambda_psi, r_n_gap, r_n_of, GapContour,
};
use hillkdv::discriminant::DiscriminantModel;
use hillkdv::potential::FourierPotential;
use hillkdv::spectrum::{compute_spectra, GalerkinConfig};

fn main() {
    let pot = FourierPotential::cosine(1, 0.1);
    let spec = compute_spectra(&pot, &GalerkinConfig::with_n(48)).unwrap();
    let dm = DiscriminantModel::new(&pot, &spec, 16).unwrap();

    println!(
        "{:>3} {:>14} {:>14} {:>14} {:>10} {:>14}",
        "n", "lambda psi", "F contour", "gap arccosh", "8npi*I/g^2", "R_n"
    );
    for n in 1..=4 {
        if dm.spectra.gap_collapsed(n) {
            println!("{n:>3}   (collapsed)");
            continue;
        }
        let c = GapContour::for_gap(&dm, n).unwrap();
        let a = action_in_lambda_psi(&dm, &c).unwrap();
        let b = action_in_f_contour(&dm, &c).unwrap();
        let g = action_in_gap(&dm, n, 96).unwrap();
        let gap = dm.spectra.gamma_n(n).norm();
        let r = r_n_of(&dm, n, &c).unwrap();
        let rq = r_n_gap(&dm, n, 96).unwrap();
        println!(
            "{:>3} {:>14.6e} {:>14.6e} {:>14.6e} {:>10.5} {:>14.6e} (gap form {:.2e} off)",
            n,
            a.re,
            b.re,
            g.re,
            8.0 * n as f64 * PI * g.re / (gap * gap),
            r.re,
            (r - rq).norm()
        );
    }
}

//! The spectral reconstruction H = Σ 8n³π³ I_n + Σ 8nπ R_n against direct
//! quadrature of ½∫q′² + ∫q³, plus the F⁴ large-λ fit of (H₀, H).

use hillkdv::actions::{f4_asymptotics, f4_default_samples, hamiltonian_report};
use hillkdv::discriminant::DiscriminantModel;
use hillkdv::potential::FourierPotential;
use hillkdv::spectrum::{compute_spectra, GalerkinConfig};

fn main() {
    for a in [0.05, 0.1, 0.2] {
        let pot = FourierPotential::cosine(1, a);
        let spec = compute_spectra(&pot, &GalerkinConfig::with_n(64)).unwrap();
        let dm = DiscriminantModel::new(&pot, &spec, 24).unwrap();
        let rep = hamiltonian_report(&dm, 16).unwrap();
        println!(
            "a={a:<5} H_spectral={:+.10e}  H_direct={:+.10e}  residual={:.2e}  H*={:+.3e}",
            rep.h_kdv_spectral.re, rep.h_kdv_direct.re, rep.residual, rep.h_star.re
        );
        let (h0, hkdv) = f4_asymptotics(&dm, &f4_default_samples()).unwrap();
        println!(
            "        F^4 fit: H0={h0:.6e} (exact {:.6e}), H={hkdv:+.6e}",
            a * a
        );
    }
}

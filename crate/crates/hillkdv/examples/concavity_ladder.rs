//! H* along a single-mode amplitude ladder: the ratios H*/I₁² and ω*₁/I₁
//! extrapolate to −3 and −6, and the mixed Hessian entry vanishes.

use hillkdv::analysis::{concavity_probe, frequency_check, ExperimentConfig};

fn main() {
    let cfg_json = r#"{
        "potential": {"modes": [{"k": 1, "re": 0.05, "im": 0.0},
                                {"k": -1, "re": 0.05, "im": 0.0}],
                      "real": true},
        "galerkin_n": 48,
        "product_m": 16,
        "n_cut": 8,
        "ladder": [0.2, 0.1, 0.05, 0.025],
        "probe_mode": 1
    }"#;
    let cfg = ExperimentConfig::from_json(cfg_json).unwrap();

    let rep = concavity_probe(&cfg).unwrap();
    println!("{:>9} {:>14} {:>14} {:>12}", "a", "I_1", "H*", "H*/I_1^2");
    for r in &rep.rungs {
        println!(
            "{:>9.4} {:>14.6e} {:>14.6e} {:>12.6}",
            r.amplitude,
            r.action,
            r.h_star,
            r.h_star / (r.action * r.action)
        );
    }
    println!(
        "\nextrapolated H*/I^2 = {:.6} (+- {:.1e}), omega*/I = {:.6} (+- {:.1e})",
        rep.hstar_ratio, rep.hstar_ratio_uncertainty, rep.omega_ratio, rep.omega_ratio_uncertainty
    );
    println!("mixed Hessian (1,2) entry = {:+.4e}", rep.mixed_hessian);

    let freq = frequency_check(&cfg, 6).unwrap();
    println!("\nrenormalized frequencies (bounded over n):");
    for (n, (w, i)) in freq.omega.iter().zip(&freq.i_mid).enumerate() {
        println!("  omega*_{} = {:+.4e}   omega*/I = {:+.3}", n + 1, w, w / i);
    }
}

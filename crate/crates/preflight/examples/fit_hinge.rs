//! Fits one torsional stiffness, shared by every hinge, so that the first
//! elastic frequency of the configured panel chain hits a target.
//!
//! ```text
//! cargo run --release --example fit_hinge -- configs/hokushin1.toml 9.16
//! ```
//!
//! The result is diagnostic: hinge spring rates and the exact support
//! geometry of the reference panels are not published, so the fitted value
//! only shows what a 1D chain needs to reproduce the quoted frequency.

use std::path::PathBuf;
use std::process::ExitCode;

use cubesat_preflight::load_model;
use cubesat_preflight_core::structural::{build_chain, fit_hinge_stiffness, modal_frequencies};

fn main() -> ExitCode {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| "configs/hokushin1.toml".into()));
    let target: f64 = match args.next().map(|s| s.parse()) {
        None => 9.16,
        Some(Ok(v)) => v,
        Some(Err(e)) => {
            eprintln!("bad target frequency: {e}");
            return ExitCode::FAILURE;
        }
    };
    let model = match load_model(&path) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::FAILURE;
        }
    };
    let fit = match fit_hinge_stiffness(&model.panels, &model.materials, &model.chain, target, 1e-4, 1e4) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("fit failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!(
        "k = {:.6} N·m/rad -> f1 = {:.6} Hz ({} bisections)",
        fit.stiffness, fit.frequency, fit.iterations
    );

    let mut layout = model.chain.clone();
    for h in &mut layout.hinges {
        h.stiffness = cubesat_preflight_core::model::HingeStiffness::Spring(fit.stiffness);
    }
    if let Ok(modal) = build_chain(&model.panels, &model.materials, &layout).and_then(|c| modal_frequencies(&c, 2)) {
        println!(
            "first two elastic modes: {:.3} Hz, {:.3} Hz",
            modal.frequencies[0], modal.frequencies[1]
        );
    }
    println!(
        "paste into [[chain.hinges]]: stiffness_nm_per_rad = {:.6}",
        fit.stiffness
    );
    ExitCode::SUCCESS
}

//! Closed-form cooling limits: Shannon bound, PPA limit and the spin
//! temperatures they imply, for each preset and a generic register.

use hbac::cli::cmd_limits;
use hbac::presets;
use hbac::spin_model::{ppa_limit, spin_temperature, AMBIENT_TEMPERATURE_K};

fn main() -> hbac::Result<()> {
    for p in [presets::glycine(), presets::formamide()] {
        println!("{}", cmd_limits(&p.system)?);
    }

    println!("PPA limit for a bath bias of 0.01:");
    for n in 2..=8 {
        let e = ppa_limit(n, 0.01)?;
        println!("  n = {n}: {e:.6} ({:.1}x)", e / 0.01);
    }

    println!("\nreported spin temperatures at {AMBIENT_TEMPERATURE_K} K:");
    for r in presets::GLYCINE_REPORTED.iter().chain(&presets::FORMAMIDE_REPORTED) {
        let t = spin_temperature(AMBIENT_TEMPERATURE_K, r.eps_initial, r.eps_final)?;
        println!("  {:>3}: {} -> {}: {t}", r.label, r.eps_initial, r.eps_final);
    }
    Ok(())
}

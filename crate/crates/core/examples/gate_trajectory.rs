//! Spin polarizations after each of the eight gates of the 3-qubit
//! compression circuit, in the high-temperature engine and exactly.

use hbac::compression::{apply_circuit_traced, tsac_circuit3};
use hbac::presets;
use hbac::spin_model::physical_scale;
use hbac::{DiagState, HighTempState};

fn print_table(title: &str, labels: &[&str], initial: &[f64], rows: &[Vec<f64>]) {
    println!("{title}");
    println!("  {:<18} {}", "gate", labels.iter().map(|l| format!("{l:>9}")).collect::<String>());
    let fmt = |r: &[f64]| r.iter().map(|e| format!("{e:>9.4}")).collect::<String>();
    println!("  {:<18} {}", "initial", fmt(initial));
    for (g, r) in tsac_circuit3().gates().iter().zip(rows) {
        println!("  {:<18} {}", g.to_string(), fmt(r));
    }
}

fn main() -> hbac::Result<()> {
    let circuit = tsac_circuit3();
    for p in [presets::glycine(), presets::formamide()] {
        let sys = &p.system;
        let eps = sys.eps_eq();
        let lin = HighTempState::product(&eps, physical_scale(sys)?)?;
        let (_, rows) = apply_circuit_traced(&lin, &circuit)?;
        print_table(&format!("{} (high temperature)", sys.name()), &sys.labels(), &eps, &rows);
        let (_, exact) = apply_circuit_traced(&DiagState::product(&eps)?, &circuit)?;
        print_table(&format!("{} (exact, reset spin fully polarized)", sys.name()), &sys.labels(), &eps, &exact);
        println!();
    }
    Ok(())
}

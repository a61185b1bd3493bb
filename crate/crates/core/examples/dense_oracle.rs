//! Cross-check the diagonal engine against the dense density-matrix oracle
//! through compression, reset and relaxation.

use hbac::compression::{build_uts, build_uts_prime3};
use hbac::presets;
use hbac::{DiagState, FullState, PopulationState};

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn main() -> hbac::Result<()> {
    let sys = presets::glycine().system;
    let eps = sys.eps_eq();
    let (eq, t1) = (sys.eps_eq(), sys.t1());

    let diag = DiagState::product(&eps)?;
    let dense = FullState::product(&eps)?;

    let d = diag.apply(&build_uts(3)?)?;
    let f = dense.apply(&build_uts_prime3())?;
    println!("after compression: target {:.6}", d.polarization_of(0)?);
    println!("  population difference {:.2e}", max_diff(d.pops(), f.diagonal()?.pops()));
    println!("  largest coherence {:.2e}", f.max_coherence());

    let d = d.with_replaced(&sys.reset_indices(), 1.0)?;
    let f = f.replace_qubits(&sys.reset_indices(), 1.0)?;
    println!("after reset: difference {:.2e}", max_diff(d.pops(), f.diagonal()?.pops()));

    let d = d.relaxed(&eq, &t1, presets::GLYCINE_RESET_DELAY_S)?;
    let f = f.relax(&eq, &t1, presets::GLYCINE_RESET_DELAY_S)?;
    println!("after the reset delay: difference {:.2e}", max_diff(d.pops(), f.diagonal()?.pops()));
    println!("  spectrum {:?}", f.eigenvalues().iter().map(|x| (x * 1e6).round() / 1e6).collect::<Vec<_>>());

    let r = d.reduce(&[0, 1])?;
    let fr = f.partial_trace(&[0, 1])?;
    println!("carbon marginal difference {:.2e}", max_diff(r.pops(), fr.diagonal()?.pops()));
    println!("entropy {:.9} bits (dense {:.9})", d.entropy(), f.entropy());
    Ok(())
}

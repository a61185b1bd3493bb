//! Cycle-by-cycle cooling of both presets at their optimal reset delays,
//! compared against the steady state.

use hbac::presets;
use hbac::protocol::{run_protocol, steady_state, ProtocolConfig, STEADY_STATE_TOL};
use hbac::relaxation::ResetModel;

fn main() -> hbac::Result<()> {
    for p in [presets::glycine(), presets::formamide()] {
        let sys = &p.system;
        let reset = ResetModel::T1Exponential { delay_s: p.reset_delay };
        let trace = run_protocol(sys, &ProtocolConfig::tsac(p.cycles, reset))?;
        let steady = steady_state(sys, &ProtocolConfig::tsac(0, reset), STEADY_STATE_TOL)?;
        let target = sys.target_index();
        println!("{} at reset delay {:.2} s", sys.name(), p.reset_delay);
        for row in &trace.rows {
            let gap = 100.0 * (steady.eps[target] - row.eps[target]) / steady.eps[target];
            println!(
                "  cycle {:2}  eps {:?}  {:5.2}% below steady",
                row.cycle,
                row.eps.iter().map(|e| (e * 1e4).round() / 1e4).collect::<Vec<_>>(),
                gap
            );
        }
        print!("{}", trace.summary(sys));
        println!("  reported final polarizations:");
        for r in p.reported {
            println!("    {:>3}: {} -> {} ({} K)", r.label, r.eps_initial, r.eps_final, r.temperature_k);
        }
        println!();
    }
    Ok(())
}

//! Steady-state target polarization against the T1 reset delay for both
//! presets, on a 50-point grid from 0.2 to 5 reset-spin T1s.

use hbac::presets;
use hbac::protocol::{linspace, sweep_reset_delay, ProtocolConfig, SweepLength, STEADY_STATE_TOL};
use hbac::relaxation::ResetModel;

fn main() -> hbac::Result<()> {
    for p in [presets::glycine(), presets::formamide()] {
        let sys = &p.system;
        let t1r = sys.reset_t1()?;
        let delays = linspace(0.2 * t1r, 5.0 * t1r, 50);
        let template = ProtocolConfig::tsac(0, ResetModel::T1Exponential { delay_s: 0.0 });
        let sweep = sweep_reset_delay(sys, &template, &delays, SweepLength::SteadyState(STEADY_STATE_TOL))?;
        println!("{} (T1R = {t1r} s)", sys.name());
        for pt in sweep.points.iter().step_by(5) {
            println!("  delay {:7.3} s  eps_target {:.5}", pt.delay_s, pt.eps_target);
        }
        let last = sweep.points.last().unwrap();
        println!("  delay {:7.3} s  eps_target {:.5}", last.delay_s, last.eps_target);
        println!(
            "  optimum {:.3} s = {:.2} T1R, eps_target {:.5} (eq {:.4})\n",
            sweep.argmax.delay_s,
            sweep.argmax.delay_s / t1r,
            sweep.argmax.eps_target,
            sys.spins()[sys.target_index()].eps_eq
        );
    }
    Ok(())
}

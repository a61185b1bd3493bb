//! Fixed points of TSAC and PPA with ideal bath contact on a homogeneous
//! 3-spin register, against the PPA closed-form limit.

use hbac::protocol::{steady_state, ProtocolConfig};
use hbac::relaxation::ResetModel;
use hbac::spin_model::{ppa_limit, Role, SpinConfig, SystemConfig};
use hbac::SpinSystem;

fn register(eps: f64) -> hbac::Result<SpinSystem> {
    let spin = |label: &str, role| SpinConfig {
        label: label.into(),
        species: None,
        gamma_rel: 1.0,
        eps_eq: Some(eps),
        t1_s: 1.0,
        t2_s: 1.0,
        role,
    };
    SpinSystem::from_config(&SystemConfig {
        name: format!("homogeneous-{eps}"),
        bath_temperature_k: 303.0,
        compression_time_s: 0.0,
        spins: vec![spin("A", Role::Target), spin("B", Role::Compute), spin("R", Role::Reset)],
        j_couplings_hz: vec![],
    })
}

fn main() -> hbac::Result<()> {
    println!("{:>8} {:>12} {:>12} {:>12} {:>8}", "bath", "TSAC", "PPA", "limit", "cycles");
    for eps in [0.01, 0.05, 0.1, 0.25, 0.5] {
        let sys = register(eps)?;
        let reset = ResetModel::IdealReplace { bath_eps: eps };
        let tsac = steady_state(&sys, &ProtocolConfig::tsac(0, reset), 1e-12)?;
        let ppa = steady_state(&sys, &ProtocolConfig::ppa(0, reset), 1e-12)?;
        println!(
            "{eps:>8} {:>12.8} {:>12.8} {:>12.8} {:>8}",
            tsac.eps[0],
            ppa.eps[0],
            ppa_limit(3, eps)?,
            tsac.cycles
        );
    }
    Ok(())
}

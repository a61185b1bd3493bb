//! Recover the wire assignment of the 8-gate compression circuit by
//! exhaustive search and print it in the text circuit format.

use hbac::compression::{build_uts, cyclic_shift, search_tsac_wiring, tsac_circuit3, Circuit};
use hbac::state::basis_label;

fn main() -> hbac::Result<()> {
    let found = search_tsac_wiring();
    println!("{} wire assignment(s) satisfy the constraints", found.len());
    for c in &found {
        print!("{c}");
        println!("matches the built-in circuit: {}", *c == tsac_circuit3());
    }

    let c = tsac_circuit3();
    let shift = c.truncated(3).permutation();
    println!("\nfirst three gates shift b -> b - 1: {}", shift == cyclic_shift(3, -1)?);
    let u = c.permutation();
    println!("full circuit equals U_TS(3): {}", u == build_uts(3)?);
    for (b, &p) in u.perm().iter().enumerate() {
        println!("  |{}> -> |{}>", basis_label(b, 3), basis_label(p, 3));
    }

    let seven: Circuit = c.truncated(7);
    println!(
        "\ntruncated after gate 7 still equals U_TS(3): {}",
        seven.permutation().perm() == build_uts(3)?.perm()
    );

    let parsed = Circuit::parse(&c.to_string(), 3)?;
    println!("text format round-trips: {}", parsed == c);
    Ok(())
}

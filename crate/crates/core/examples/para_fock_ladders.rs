//! Green's paraboson and parafermion ladders, the trilinear relations, and how
//! fast the deformed ladder approaches the ordinary oscillator.

use std::error::Error;

use paragrade::linalg::max_abs;
use paragrade::para_fock::{
    bosonic_limit_error, build_deformed_ladder, build_green_paraboson, build_parafermion, commutator_audit,
    commutator_audit_table, trilinear_residual,
};

pub fn run() -> Result<(), Box<dyn Error>> {
    println!("Green paraboson, cutoff 30");
    for p in [1, 2, 3, 5] {
        let rep = build_green_paraboson(p, 30)?;
        println!("  p = {p}: trilinear residual {:.2e}", trilinear_residual(&rep));
    }

    println!("parafermion (spin p/2)");
    for p in 1..=8u64 {
        let rep = build_parafermion(p)?;
        let nil = max_abs(&rep.raise.pow(p as u32 + 1));
        println!("  p = {p}: residual {:.2e}, |(f^dag)^(p+1)| = {nil}", trilinear_residual(&rep));
    }

    println!("deformed ladder vs sqrt(n+1), n <= 20");
    let mut prev: Option<f64> = None;
    for p in [100.0, 200.0, 400.0, 800.0] {
        let e = bosonic_limit_error(p, 20);
        let ratio = prev.map_or(String::new(), |q| format!("  (x{:.2} smaller)", q / e));
        println!("  p = {p:>4}: {e:.4e}{ratio}");
        prev = Some(e);
    }

    let lad = build_deformed_ladder(4, 12)?;
    println!("\n[b, b^dag] on the deformed ladder, p = {}", lad.p);
    print!("{}", commutator_audit_table(&commutator_audit(4, 12)?));
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

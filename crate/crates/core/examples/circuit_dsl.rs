//! The circuit language: parse, report diagnostics, pretty-print, execute.

use std::error::Error;

use paragrade::circuit::{execute, parse, ExecOptions};
use paragrade::ququart::GradeMode;

const PROGRAM: &str = "\
# prepare a Bell-like pair across the two photon qubits
ququart q;
param t = 0.3;
gate Ha q;
qplate pi q;
gate Rzb(t) q;
declare-interface Xb;
gate Xb q;
measure q;
";

pub fn run() -> Result<(), Box<dyn Error>> {
    let prog = parse(PROGRAM).map_err(|d| format!("{} diagnostics", d.len()))?;
    print!("{prog}");
    let report = execute(&prog, ExecOptions { mode: GradeMode::Strict, seed: 3 })?;
    let q = report.register("q").ok_or("no register")?;
    println!("status {:?}, measured {:?}", q.status, q.measurements.iter().map(|m| m.outcome.to_string()).collect::<Vec<_>>());
    print!("{}", report.ledger_csv());

    let broken = "ququart q;\ngate Hb r;\ngate Foo q;\nassert-grade q (2,0);\n";
    println!();
    for d in parse(broken).err().unwrap_or_default() {
        println!("{d}");
    }

    let strict = parse("ququart q;\ngate Xa q;\n").map_err(|_| "parse")?;
    if let Err(e) = execute(&strict, ExecOptions::default()) {
        println!("\nstrict: {e}");
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

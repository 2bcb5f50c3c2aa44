//! The spin-orbit ququart: clock and shift, the gate set, and the grade
//! ledger in strict and permissive mode.

use std::error::Error;

use paragrade::ququart::{
    apply_circuit, clock_shift, gate, gate_set_unitarity, grading_ops, shift_decomposition_audit, GradeMode,
    QuquartError, QuquartState,
};

pub fn run() -> Result<(), Box<dyn Error>> {
    let cs = clock_shift();
    println!("sigma^4 - 1: {:.1e}, tau^4 - 1: {:.1e}", cs.sigma4_residual, cs.tau4_residual);
    println!("tau sigma - i sigma tau: {:.1e}", cs.commutation_residual);
    let go = grading_ops();
    println!("sigma^2 = Q: {:.1e}; sigma = P Q literally? off by {:.3}", go.sigma_sq_is_q, go.literal_pq_residual);
    let sh = shift_decomposition_audit();
    println!("tau = CNOT_ba X_b: {:.1e}", sh.circuit_residual);
    println!("gate set unitarity: {:.1e}", gate_set_unitarity());

    let psi0 = QuquartState::basis(0);
    let circuit = [gate("Ha")?, gate("CNOTba")?, gate("Hb")?];
    let (psi, ledger) = apply_circuit(&circuit, &psi0, GradeMode::Strict)?;
    println!("\nH_a, CNOT_ba, H_b on |00>:\n  {psi}\n  status {:?}", ledger.status());

    let lone_flip = [gate("Hb")?, gate("Xa")?];
    match apply_circuit(&lone_flip, &psi0, GradeMode::Strict) {
        Err(QuquartError::UndeclaredGradeChange { index, gate, delta }) => {
            println!("strict mode rejects gate {index} ({gate}), delta {delta}")
        }
        other => println!("unexpected: {other:?}"),
    }
    let (_, ledger) = apply_circuit(&lone_flip, &psi0, GradeMode::Permissive)?;
    println!("permissive mode records charge {}", ledger.charge);
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

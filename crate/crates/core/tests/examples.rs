//! Runs every crate example's body so the walkthroughs stay correct.

#[allow(dead_code)]
#[path = "../examples/circuit_dsl.rs"]
mod circuit_dsl;
#[allow(dead_code)]
#[path = "../examples/fbm_hurst.rs"]
mod fbm_hurst;
#[allow(dead_code)]
#[path = "../examples/graded_clifford.rs"]
mod graded_clifford;
#[allow(dead_code)]
#[path = "../examples/grading_tables.rs"]
mod grading_tables;
#[allow(dead_code)]
#[path = "../examples/para_fock_ladders.rs"]
mod para_fock_ladders;
#[allow(dead_code)]
#[path = "../examples/quantum_potential.rs"]
mod quantum_potential;
#[allow(dead_code)]
#[path = "../examples/ququart_gates.rs"]
mod ququart_gates;
#[allow(dead_code)]
#[path = "../examples/su4_synthesis.rs"]
mod su4_synthesis;
#[allow(dead_code)]
#[path = "../examples/xy_entropy.rs"]
mod xy_entropy;
#[allow(dead_code)]
#[path = "../examples/yang_baxter.rs"]
mod yang_baxter;

#[test]
fn circuit_dsl_runs() {
    circuit_dsl::run().unwrap();
}

#[test]
fn fbm_hurst_runs() {
    fbm_hurst::run().unwrap();
}

#[test]
fn graded_clifford_runs() {
    graded_clifford::run().unwrap();
}

#[test]
fn grading_tables_runs() {
    grading_tables::run().unwrap();
}

#[test]
fn para_fock_ladders_runs() {
    para_fock_ladders::run().unwrap();
}

#[test]
fn quantum_potential_runs() {
    quantum_potential::run().unwrap();
}

#[test]
fn ququart_gates_runs() {
    ququart_gates::run().unwrap();
}

#[test]
fn su4_synthesis_runs() {
    su4_synthesis::run().unwrap();
}

#[test]
fn xy_entropy_runs() {
    xy_entropy::run().unwrap();
}

#[test]
fn yang_baxter_runs() {
    yang_baxter::run().unwrap();
}

//! Cartan coordinates and CNOT-count synthesis of random two-qubit gates.

use std::error::Error;

use paragrade::circuit::circuit_to_dsl;
use paragrade::linalg::haar_unitary;
use paragrade::ququart::cartan::{cartan_coords, cnot_class, pauli_x2, pauli_z2, su2_closure, synthesize_su4};
use paragrade::ququart::{hadamard, Gate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run() -> Result<(), Box<dyn Error>> {
    let v = cartan_coords(&Gate::CnotBA.matrix())?;
    println!("CNOT coordinates ({:.6}, {:.6}, {:.6})", v.c1, v.c2, v.c3);
    println!("closure of {{H, Z}}: {}, of {{H, X}}: {}", su2_closure(&[hadamard(), pauli_z2()]), su2_closure(&[hadamard(), pauli_x2()]));

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let s = synthesize_su4(&haar_unitary(4, &mut rng))?;
        worst = worst.max(s.error);
    }
    println!("20 Haar gates: worst reconstruction error {worst:.2e}");

    // a gate one CNOT away from local
    let u = Gate::Rza(0.4).matrix() * Gate::CnotBA.matrix() * Gate::Rxb(1.1).matrix();
    let s = synthesize_su4(&u)?;
    let class = cnot_class([s.coords.c1 / 2.0, s.coords.c2 / 2.0, s.coords.c3 / 2.0]);
    println!("\nlocal-CNOT-local: {} CNOT(s) (class {class}), error {:.1e}", s.cnots, s.error);
    print!("{}", circuit_to_dsl("q", &s.gates));
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

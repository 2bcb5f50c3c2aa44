//! Fractional quantum potential of a Gaussian density, the closed form at
//! H = 1, and the diagnostic that turns a deviation into a phase correction.

use std::error::Error;

use paragrade::fracnoise::{diagnostic_and_correct, gaussian_quantum_potential, quantum_potential, QuantumUnits, DEFAULT_GAIN};
use paragrade::grading::Grade;

pub fn run() -> Result<(), Box<dyn Error>> {
    let n = 1024;
    let (lo, hi) = (-8.0, 8.0);
    let dx = (hi - lo) / n as f64;
    let sigma = 1.0;
    let units = QuantumUnits::default();
    let x: Vec<f64> = (0..n).map(|i| lo + i as f64 * dx).collect();
    let rho: Vec<f64> = x.iter().map(|v| (-v * v / (2.0 * sigma * sigma)).exp()).collect();

    let q1 = quantum_potential(&rho, 1.0, dx, units)?;
    let exact: Vec<f64> = x.iter().map(|&v| gaussian_quantum_potential(v, sigma, units)).collect();
    let (a, b) = (n / 10, n - n / 10);
    let err = (a..b).map(|i| (q1[i] - exact[i]).abs()).fold(0.0, f64::max);
    println!("H = 1: max deviation from closed form on the interior 80%: {err:.2e}");

    for h in [0.25, 0.5, 0.75] {
        let q = quantum_potential(&rho, h, dx, units)?;
        println!("H = {h}: Q(0) = {:.5}", q[n / 2]);
    }

    // compare a slightly rough (H = 0.9) potential with the smooth one over |x| < 2;
    // further out the nonlocal tail of the fractional operator dominates
    let core: Vec<usize> = (0..n).filter(|&i| x[i].abs() < 2.0).collect();
    let q_rough = quantum_potential(&rho, 0.9, dx, units)?;
    let meas: Vec<f64> = core.iter().map(|&i| q_rough[i]).collect();
    let expected: Vec<f64> = core.iter().map(|&i| q1[i]).collect();
    let rep = diagnostic_and_correct(&meas, &expected, 0.01, Grade::new(1, 0), DEFAULT_GAIN, dx)?;
    println!("diagnostic: |dQ| = {:.4}, triggered {}, theta = {:.4}", rep.norm, rep.triggered, rep.theta);
    let u = rep.correction_unitary(4);
    println!("correction phases: {:?}", (0..4).map(|k| format!("{:.3}", u[(k, k)].arg())).collect::<Vec<_>>());
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

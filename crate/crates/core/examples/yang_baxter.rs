//! Braiding on the graded space: the signed swap solves Yang-Baxter, so do
//! bicharacter twists of it; a one-entry nudge does not.

use std::error::Error;

use paragrade::braiding::{
    cocycle_residual, dot_phases, r_operator, random_bicharacter, yang_baxter_residual, BraidOperator, BraidParams,
};
use paragrade::grading::GradeBasis;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run() -> Result<(), Box<dyn Error>> {
    let basis = GradeBasis::default();
    let r = r_operator(&BraidParams::undeformed(), &basis);
    println!("signed swap: residual {:.2e}", yang_baxter_residual(&r));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let worst = (0..100)
        .map(|_| yang_baxter_residual(&BraidOperator::phase_deformed(&random_bicharacter(&mut rng), basis)))
        .fold(0.0, f64::max);
    println!("100 bicharacter twists: worst residual {worst:.2e}");

    let mut phi = dot_phases();
    phi[1][3] += 0.05;
    println!(
        "nudged phase table: cocycle defect {:.3}, Yang-Baxter residual {:.3}",
        cocycle_residual(&phi),
        yang_baxter_residual(&BraidOperator::phase_deformed(&phi, basis))
    );

    for phase in [0.25, 1.0] {
        let rq = r_operator(&BraidParams::from_phase(phase), &basis);
        println!("q = exp({phase} i): residual {:.3}", yang_baxter_residual(&rq));
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

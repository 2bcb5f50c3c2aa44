//! Sector-resolved Dirac matrices: Clifford closure, Lorentz generators and the
//! mass-shell condition for each tower level.

use std::error::Error;

use paragrade::graded_clifford::{dirac_gammas, dispersion_residual, graded_gammas, lorentz_generators, tower_level};
use paragrade::grading::{grade_of_spin, GradeBasis, Spin};

pub fn run() -> Result<(), Box<dyn Error>> {
    let gg = graded_gammas(&dirac_gammas(), &GradeBasis::default());
    println!("{}x{} graded gammas", gg.total_dim(), gg.total_dim());
    println!("  Clifford residual      {:.2e}", gg.clifford_residual());
    println!("  cross-grade residual   {:.2e}", gg.cross_grade_residual());
    let lg = lorentz_generators(&gg);
    println!("  Lorentz closure        {:.2e} ({} generators)", lg.closure_residual(), lg.independent().len());

    let m = 1.0;
    for twice in 0..4 {
        let s = Spin::from_twice(twice);
        let lvl = tower_level(s, m)?;
        let p = [(lvl.mass * lvl.mass + 0.09_f64).sqrt(), 0.3, 0.0, 0.0];
        let on = dispersion_residual(&gg, &p, s, m, grade_of_spin(s))?;
        let off = dispersion_residual(&gg, &[p[0] * 1.1, 0.3, 0.0, 0.0], s, m, grade_of_spin(s))?;
        println!("spin {s}: mass {:.4}, on shell {on:.1e}, off shell {off:.3}", lvl.mass);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

//! Exchange signs and the spin-to-grade map, with the cells where the
//! printed sign table disagrees with `(-1)^{g.h}`.

use std::error::Error;

use paragrade::grading::{
    braid_table_audit, exchange_matrix, exchange_matrix_audit, grade_of_spin, sign_matrix_csv, GradeBasis, Spin,
};

pub fn run() -> Result<(), Box<dyn Error>> {
    let basis = GradeBasis::default();
    print!("{}", sign_matrix_csv(&exchange_matrix(&basis), &basis));

    let bad = exchange_matrix_audit();
    println!("\n{} cells differ from the printed table:", bad.len());
    for c in &bad {
        println!("  ({}, {}): printed {:+}, formula {:+}", c.row, c.col, c.printed, c.formula);
    }

    println!("\nspin -> grade");
    for twice in 0..8 {
        let s = Spin::from_twice(twice);
        println!("  {s:>4} -> {}", grade_of_spin(s));
    }

    for row in braid_table_audit().iter().filter(|r| !r.agrees) {
        println!("braid row ({}, {}) printed dot {} but the grades give {}", row.s, row.s2, row.printed_dot, row.formula_dot);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

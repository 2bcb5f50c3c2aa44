//! Exhaustive identity checks behind `audit-algebra`.
//!
//! Every suite can be run with a deliberate perturbation of one of the
//! matrices (or tables) it checks, so the audit itself can be tested: a
//! perturbed suite must report a breach.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::braiding::{
    coproduct_covariance_residual, cocycle_residual, dot_phases, r_operator, random_bicharacter, yang_baxter_residual,
    BraidOperator, BraidParams, GradedOps,
};
use crate::fracnoise::fractional_laplacian_complex;
use crate::graded_clifford::{dirac_gammas, graded_gammas, lorentz_generators};
use crate::grading::{exchange_matrix, grade_add, projector, Grade, GradeBasis};
use crate::linalg::{c, eye, haar_unitary, max_abs, r, unitarity_residual, CMat, C64, I};
use crate::para_fock::{build_green_paraboson, build_parafermion, number_raise_residual, trilinear_residual};
use crate::ququart::cartan::{cartan_coords, makhlin_invariants, pauli_x2, pauli_z2, su2_closure, synthesize_su4};
use crate::ququart::{
    clock, graded_cnot_matrix, graded_toffoli_matrix, hadamard, printed_sigma_tau, printed_tau_sigma, shift,
    truth_table_audit_of, Gate, TruthKind, GATE_NAMES,
};
use crate::spin_chain::{
    correlations_from_hopping, entanglement_entropy, exact_ground_state, ground_state_energy, jw_hopping_matrix, XYChain,
};

/// Size of the injected error.
pub const PERTURBATION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Suite {
    Grading,
    Paraboson,
    Parafermion,
    YangBaxter,
    Cocycle,
    Clifford,
    ClockShift,
    Gates,
    Cartan,
    TruthTables,
    JordanWigner,
    FractionalLaplacian,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Grading,
        Suite::Paraboson,
        Suite::Parafermion,
        Suite::YangBaxter,
        Suite::Cocycle,
        Suite::Clifford,
        Suite::ClockShift,
        Suite::Gates,
        Suite::Cartan,
        Suite::TruthTables,
        Suite::JordanWigner,
        Suite::FractionalLaplacian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Grading => "grading",
            Suite::Paraboson => "paraboson",
            Suite::Parafermion => "parafermion",
            Suite::YangBaxter => "yang-baxter",
            Suite::Cocycle => "cocycle",
            Suite::Clifford => "clifford",
            Suite::ClockShift => "clock-shift",
            Suite::Gates => "gates",
            Suite::Cartan => "cartan",
            Suite::TruthTables => "truth-tables",
            Suite::JordanWigner => "jordan-wigner",
            Suite::FractionalLaplacian => "fractional-laplacian",
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            Suite::Grading | Suite::TruthTables => 0.0,
            Suite::Cartan => 1e-9,
            Suite::JordanWigner => 1e-8,
            Suite::FractionalLaplacian => 1e-10,
            _ => 1e-12,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite `{s}` (one of: {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: Suite,
    /// Number of individual identities evaluated.
    pub checks: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub perturbed: bool,
}

struct Acc {
    checks: usize,
    worst: f64,
}

impl Acc {
    fn new() -> Self {
        Acc { checks: 0, worst: 0.0 }
    }

    fn add(&mut self, x: f64) {
        self.checks += 1;
        // NaN counts as a breach
        self.worst = if x.is_nan() { f64::INFINITY } else { self.worst.max(x) };
    }
}

fn bump(m: &mut CMat, i: usize, j: usize) {
    m[(i, j)] += r(PERTURBATION);
}

fn grading(perturb: bool) -> Acc {
    let mut acc = Acc::new();
    let basis = GradeBasis::default();
    let mut m = exchange_matrix(&basis);
    if perturb {
        m[1][2] = -m[1][2];
    }
    let eps = |g: Grade, h: Grade| m[g.index()][h.index()] as f64;
    for g in Grade::ALL {
        for h in Grade::ALL {
            acc.add((eps(g, h) - eps(h, g)).abs());
            for k in Grade::ALL {
                acc.add((eps(grade_add(g, h), k) - eps(g, k) * eps(h, k)).abs());
            }
        }
    }
    let mut total = CMat::zeros(4, 4);
    for g in Grade::ALL {
        let pg = projector(g, &basis).to_cmat();
        for h in Grade::ALL {
            let ph = projector(h, &basis).to_cmat();
            let want = if g == h { pg.clone() } else { CMat::zeros(4, 4) };
            acc.add(max_abs(&(&pg * &ph - want)));
        }
        total += pg;
    }
    acc.add(max_abs(&(total - eye(4))));
    acc
}

fn paraboson(perturb: bool) -> Acc {
    let mut acc = Acc::new();
    for p in [1, 2, 3, 5] {
        let mut rep = build_green_paraboson(p, 30).expect("valid order");
        if perturb && p == 2 {
            bump(&mut rep.lower, 3, 4);
            rep.raise = rep.lower.adjoint();
        }
        acc.add(trilinear_residual(&rep));
        acc.add(number_raise_residual(&rep));
    }
    acc
}

fn parafermion(perturb: bool) -> Acc {
    let mut acc = Acc::new();
    for p in 1..=8 {
        let mut rep = build_parafermion(p).expect("valid order");
        if perturb && p == 3 {
            bump(&mut rep.lower, 1, 2);
            rep.raise = rep.lower.adjoint();
        }
        acc.add(trilinear_residual(&rep));
        acc.add(max_abs(&rep.raise.pow(p as u32 + 1)));
        // (f^dag)^p must survive
        acc.add(if max_abs(&rep.raise.pow(p as u32)) > 0.5 { 0.0 } else { 1.0 });
    }
    acc
}

fn yang_baxter(perturb: bool) -> Acc {
    let mut acc = Acc::new();
    let basis = GradeBasis::default();
    acc.add(yang_baxter_residual(&r_operator(&BraidParams::undeformed(), &basis)));
    let mut phi = dot_phases();
    if perturb {
        phi[1][2] += PERTURBATION;
    }
    acc.add(yang_baxter_residual(&BraidOperator::phase_deformed(&phi, basis)));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        acc.add(yang_baxter_residual(&BraidOperator::phase_deformed(&random_bicharacter(&mut rng), basis)));
    }
    acc
}

fn cocycle(perturb: bool) -> Acc {
    let mut acc = Acc::new();
    let mut phi = dot_phases();
    if perturb {
        phi[2][3] += PERTURBATION;
    }
    acc.add(cocycle_residual(&phi));
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0c);
    for _ in 0..20 {
        acc.add(cocycle_residual(&random_bicharacter(&mut rng)));
    }
    let rop = r_operator(&BraidParams::undeformed(), &GradeBasis::default());
    let ops = GradedOps::grade_shifts();
    for g in Grade::ALL {
        acc.add(coproduct_covariance_residual(g, &rop, &ops).unwrap_or(f64::INFINITY));
    }
    acc
}

fn clifford(perturb: bool) -> Acc {
    let mut acc = Acc::new();
    let mut gs = dirac_gammas();
    if perturb {
        bump(&mut gs.gammas[2], 0, 3);
    }
    acc.add(gs.clifford_residual());
    let gg = graded_gammas(&gs, &GradeBasis::default());
    acc.add(gg.clifford_residual());
    acc.add(gg.cross_grade_residual());
    acc.add(gg.intra_grade_residual());
    acc.add(gg.hermiticity_residual());
    acc.add(lorentz_generators(&gg).closure_residual());
    acc
}

fn clock_shift(perturb: bool) -> Acc {
    let mut acc = Acc::new();
    let mut s = clock();
    if perturb {
        bump(&mut s, 1, 1);
    }
    let t = shift();
    let id = eye(4);
    acc.add(max_abs(&(s.pow(4) - &id)));
    acc.add(max_abs(&(t.pow(4) - &id)));
    acc.add(max_abs(&(&t * &s - &s * &t * I)));
    acc.add(max_abs(&(&t * &s - printed_tau_sigma())));
    acc.add(max_abs(&(&s * &t - printed_sigma_tau())));
    acc.add(unitarity_residual(&s));
    acc
}

fn gates(perturb: bool) -> Acc {
    let mut acc = Acc::new();
    for (name, angled) in GATE_NAMES {
        for angle in [0.37, -2.1, 45.0] {
            let g = Gate::parse(name, angled.then_some(angle)).expect("listed gate");
            let mut m = g.matrix();
            if perturb && g == Gate::Xb {
                bump(&mut m, 0, 1);
            }
            acc.add(unitarity_residual(&m));
            if !angled {
                break;
            }
        }
    }
    let tau = crate::ququart::circuit_unitary(&[Gate::Xb, Gate::CnotBA]);
    acc.add(max_abs(&(tau - shift())));
    acc
}

fn cartan(perturb: bool) -> Acc {
    let mut acc = Acc::new();
    let mut cnot = Gate::CnotAB.matrix();
    if perturb {
        cnot[(3, 3)] = C64::from_polar(1.0, PERTURBATION);
    }
    match cartan_coords(&cnot) {
        Ok(v) => {
            acc.add((v.c1 - FRAC_PI_2).abs());
            acc.add(v.c2.abs());
            acc.add(v.c3.abs());
        }
        Err(_) => acc.add(f64::INFINITY),
    }
    match makhlin_invariants(&cnot) {
        Ok((g1, g2)) => {
            acc.add(g1.norm());
            acc.add((g2 - 1.0).abs());
        }
        Err(_) => acc.add(f64::INFINITY),
    }
    let h = hadamard();
    let rank_gap = |gens: &[CMat]| (su2_closure(gens) as f64 - 3.0).abs();
    acc.add(rank_gap(&[h.clone(), pauli_z2()]));
    acc.add(rank_gap(&[h, pauli_x2()]));
    let mut rng = ChaCha8Rng::seed_from_u64(0xca27a);
    for _ in 0..10 {
        let u = haar_unitary(4, &mut rng);
        match synthesize_su4(&u) {
            Ok(s) => {
                acc.add(s.error);
                acc.add(s.cnots.saturating_sub(3) as f64);
            }
            Err(_) => acc.add(f64::INFINITY),
        }
    }
    acc
}

fn truth_tables(perturb: bool) -> Acc {
    let mut acc = Acc::new();
    let mut cn = graded_cnot_matrix();
    if perturb {
        cn.swap_columns(2, 3);
    }
    acc.add(truth_table_audit_of(TruthKind::Cnot, &cn).mismatched_rows.len() as f64);
    acc.add(truth_table_audit_of(TruthKind::Toffoli, &graded_toffoli_matrix()).mismatched_rows.len() as f64);
    acc
}

fn jordan_wigner(perturb: bool) -> Acc {
    let mut acc = Acc::new();
    let chain = XYChain::periodic(8).expect("even chain");
    let mut t = jw_hopping_matrix(&chain);
    if perturb {
        t[(2, 3)] += PERTURBATION;
        t[(3, 2)] += PERTURBATION;
    }
    let (cm, ed) = match (correlations_from_hopping(&t), exact_ground_state(&chain)) {
        (Ok(cm), Ok(ed)) => (cm, ed),
        _ => {
            acc.add(f64::INFINITY);
            return acc;
        }
    };
    acc.add((ground_state_energy(&chain) - ed.energy).abs());
    let ced: DMatrix<f64> = ed.correlations();
    acc.add((&cm - &ced).abs().max());
    for l in 1..chain.n {
        let s = entanglement_entropy(&cm, l).unwrap_or(f64::INFINITY);
        acc.add((s - ed.entropy(l)).abs());
    }
    acc
}

fn fractional_laplacian(perturb: bool) -> Acc {
    let mut acc = Acc::new();
    let n = 256;
    let len = 2.0 * PI;
    let dx = len / n as f64;
    for h in [0.25, 0.5, 0.7, 1.0] {
        for mode in [1, 5, 17, -9] {
            let k = 2.0 * PI * mode as f64 / len;
            let mut f: Vec<C64> = (0..n).map(|j| c(0.0, k * j as f64 * dx).exp()).collect();
            if perturb && mode == 5 {
                f[7] += r(PERTURBATION);
            }
            let lam = k.abs().powf(2.0 * h);
            let out = fractional_laplacian_complex(&f, h, dx).expect("power of two");
            let worst = out.iter().zip(&f).map(|(o, x)| (o - x * lam).norm()).fold(0.0, f64::max);
            acc.add(worst / lam);
        }
    }
    acc
}

pub fn run_suite(suite: Suite, perturb: bool) -> SuiteResult {
    let acc = match suite {
        Suite::Grading => grading(perturb),
        Suite::Paraboson => paraboson(perturb),
        Suite::Parafermion => parafermion(perturb),
        Suite::YangBaxter => yang_baxter(perturb),
        Suite::Cocycle => cocycle(perturb),
        Suite::Clifford => clifford(perturb),
        Suite::ClockShift => clock_shift(perturb),
        Suite::Gates => gates(perturb),
        Suite::Cartan => cartan(perturb),
        Suite::TruthTables => truth_tables(perturb),
        Suite::JordanWigner => jordan_wigner(perturb),
        Suite::FractionalLaplacian => fractional_laplacian(perturb),
    };
    let tolerance = suite.tolerance();
    SuiteResult { suite, checks: acc.checks, residual: acc.worst, tolerance, passed: acc.worst <= tolerance, perturbed: perturb }
}

/// All twelve suites, perturbing at most one.
pub fn audit_all(perturb: Option<Suite>) -> Vec<SuiteResult> {
    Suite::ALL.iter().map(|&s| run_suite(s, perturb == Some(s))).collect()
}

pub fn results_csv(results: &[SuiteResult]) -> String {
    let mut out = String::from("suite,checks,residual,tolerance,passed,perturbed\n");
    for r in results {
        out.push_str(&format!("{},{},{:e},{:e},{},{}\n", r.suite, r.checks, r.residual, r.tolerance, r.passed, r.perturbed));
    }
    out
}

pub fn summary_table(results: &[SuiteResult]) -> String {
    let mut out = format!("{:<22}{:>8}{:>14}{:>12}  status\n", "suite", "checks", "residual", "tolerance");
    for r in results {
        let status = if r.passed { "ok" } else { "BREACH" };
        let mark = if r.perturbed { " (perturbed)" } else { "" };
        out.push_str(&format!(
            "{:<22}{:>8}{:>14.3e}{:>12.0e}  {status}{mark}\n",
            r.suite.name(),
            r.checks,
            r.residual,
            r.tolerance
        ));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    out.push_str(&format!("{} of {} suites passed\n", results.len() - failed, results.len()));
    out
}

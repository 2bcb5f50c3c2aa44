//! Truncated single-mode Fock representations for parabosons and parafermions.
//!
//! Three representations live here:
//! - [`DeformedLadder`], the interpolating ladder built from `[n]!_p`;
//! - [`GreenParabosonRep`], the exact Green representation (oracle for the
//!   trilinear relations);
//! - [`ParafermionRep`], spin `p/2` angular momentum lowering/raising.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{anticomm, comm, r, CMat};

pub const DEFAULT_CUTOFF: usize = 32;
/// Rows at the top of a truncated bosonic ladder excluded from residuals.
pub const EDGE_WINDOW: usize = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FockError {
    #[error("order p must be positive")]
    ZeroOrder,
    #[error("cutoff must be at least 2, got {0}")]
    CutoffTooSmall(usize),
    #[error("n_max {n_max} exceeds cutoff {cutoff}")]
    NMaxBeyondCutoff { n_max: usize, cutoff: usize },
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `[n]!_p = prod_{k=1..n} (k + k(k-1)/p)`, exact.
pub fn deformed_factorial(n: u64, p: u64) -> Result<BigRational, FockError> {
    if p == 0 {
        return Err(FockError::ZeroOrder);
    }
    let mut acc = BigRational::one();
    for k in 1..=n {
        acc *= rat(k) + BigRational::new(BigInt::from(k * (k - 1)), BigInt::from(p));
    }
    Ok(acc)
}

/// Squared raise coefficient `[n+1]!_p / [n]!_p = n+1 + n(n+1)/p`, exact.
pub fn raise_coeff_sq(n: u64, p: u64) -> Result<BigRational, FockError> {
    Ok(deformed_factorial(n + 1, p)? / deformed_factorial(n, p)?)
}

/// `(raise(n), lower(n))` with `lower(n) = raise(n-1)` and `lower(0) = 0`.
pub fn ladder_coefficients(n: u64, p: u64) -> Result<(f64, f64), FockError> {
    let up = raise_coeff_sq(n, p)?.to_f64().unwrap_or(f64::INFINITY).sqrt();
    let down = if n == 0 { 0.0 } else { raise_coeff_sq(n - 1, p)?.to_f64().unwrap_or(f64::INFINITY).sqrt() };
    Ok((up, down))
}

/// Floating-point raise coefficient, used where p is too large for a useful
/// rational (the limit checks).
pub fn raise_coeff_f64(n: u64, p: f64) -> f64 {
    let n = n as f64;
    (n + 1.0 + n * (n + 1.0) / p).sqrt()
}

/// `prod_{m=1..k-1} (1 - m/p)`, the relative weight of k quanta sharing one mode.
pub fn occupancy_weight(k: u64, p: f64) -> f64 {
    (1..k).map(|m| 1.0 - m as f64 / p).product()
}

/// `max_{n <= n_max} |raise(n,p) - sqrt(n+1)|`.
pub fn bosonic_limit_error(p: f64, n_max: u64) -> f64 {
    (0..=n_max)
        .map(|n| (raise_coeff_f64(n, p) - ((n + 1) as f64).sqrt()).abs())
        .fold(0.0, f64::max)
}

/// Which trilinear relation a representation obeys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Statistics {
    /// `[x, {x^dag, x}] = 2x`
    Paraboson,
    /// `[x, [x^dag, x]] = 2x`
    Parafermion,
}

pub trait LadderRep {
    fn order(&self) -> u64;
    fn lower(&self) -> &CMat;
    fn raise(&self) -> &CMat;
    fn statistics(&self) -> Statistics;
    /// Rows on which the algebra is not affected by truncation.
    fn interior_rows(&self) -> usize;
    /// The operator counting quanta, `N|n> = n|n>`.
    fn number_operator(&self) -> CMat {
        let d = self.lower().nrows();
        CMat::from_fn(d, d, |i, j| if i == j { r(i as f64) } else { r(0.0) })
    }
    fn dim(&self) -> usize {
        self.lower().nrows()
    }
}

fn sub_diagonal(coeffs: &[f64]) -> CMat {
    // coeffs[n] = <n-1|lower|n>
    let d = coeffs.len();
    let mut m = CMat::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = r(coeffs[n]);
    }
    m
}

#[derive(Debug, Clone)]
pub struct DeformedLadder {
    pub p: u64,
    pub cutoff: usize,
    pub lower: CMat,
    pub raise: CMat,
}

pub fn build_deformed_ladder(p: u64, cutoff: usize) -> Result<DeformedLadder, FockError> {
    if p == 0 {
        return Err(FockError::ZeroOrder);
    }
    if cutoff < 2 {
        return Err(FockError::CutoffTooSmall(cutoff));
    }
    let mut coeffs = vec![0.0; cutoff + 1];
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = ladder_coefficients(n as u64, p)?.1;
    }
    let lower = sub_diagonal(&coeffs);
    let raise = lower.adjoint();
    Ok(DeformedLadder { p, cutoff, lower, raise })
}

impl LadderRep for DeformedLadder {
    fn order(&self) -> u64 {
        self.p
    }
    fn lower(&self) -> &CMat {
        &self.lower
    }
    fn raise(&self) -> &CMat {
        &self.raise
    }
    fn statistics(&self) -> Statistics {
        Statistics::Paraboson
    }
    fn interior_rows(&self) -> usize {
        self.cutoff + 1 - EDGE_WINDOW
    }
}

/// Green's single-mode paraboson: `b|n> = sqrt(n)|n-1>` for even n and
/// `sqrt(n+p-1)|n-1>` for odd n.
#[derive(Debug, Clone)]
pub struct GreenParabosonRep {
    pub p: u64,
    pub cutoff: usize,
    pub lower: CMat,
    pub raise: CMat,
}

pub fn build_green_paraboson(p: u64, cutoff: usize) -> Result<GreenParabosonRep, FockError> {
    if p == 0 {
        return Err(FockError::ZeroOrder);
    }
    if cutoff < 2 {
        return Err(FockError::CutoffTooSmall(cutoff));
    }
    let coeffs: Vec<f64> = (0..=cutoff)
        .map(|n| {
            let n = n as f64;
            if n == 0.0 {
                0.0
            } else if (n as u64).is_multiple_of(2) {
                n.sqrt()
            } else {
                (n + p as f64 - 1.0).sqrt()
            }
        })
        .collect();
    let lower = sub_diagonal(&coeffs);
    let raise = lower.adjoint();
    Ok(GreenParabosonRep { p, cutoff, lower, raise })
}

impl LadderRep for GreenParabosonRep {
    fn order(&self) -> u64 {
        self.p
    }
    fn lower(&self) -> &CMat {
        &self.lower
    }
    fn raise(&self) -> &CMat {
        &self.raise
    }
    fn statistics(&self) -> Statistics {
        Statistics::Paraboson
    }
    fn interior_rows(&self) -> usize {
        self.cutoff + 1 - EDGE_WINDOW
    }
    fn number_operator(&self) -> CMat {
        // ({b^dag, b} - p)/2
        let d = self.dim();
        (anticomm(&self.raise, &self.lower) - CMat::identity(d, d) * r(self.p as f64)) * r(0.5)
    }
}

/// Order-p parafermion as spin `p/2`: `f = J_-`, basis `n = m + p/2`.
#[derive(Debug, Clone)]
pub struct ParafermionRep {
    pub p: u64,
    pub lower: CMat,
    pub raise: CMat,
}

pub fn build_parafermion(p: u64) -> Result<ParafermionRep, FockError> {
    if p == 0 {
        return Err(FockError::ZeroOrder);
    }
    let d = p as usize + 1;
    let coeffs: Vec<f64> = (0..d).map(|n| ((n as f64) * (p as f64 - n as f64 + 1.0)).sqrt()).collect();
    let lower = sub_diagonal(&coeffs);
    let raise = lower.adjoint();
    Ok(ParafermionRep { p, lower, raise })
}

impl LadderRep for ParafermionRep {
    fn order(&self) -> u64 {
        self.p
    }
    fn lower(&self) -> &CMat {
        &self.lower
    }
    fn raise(&self) -> &CMat {
        &self.raise
    }
    fn statistics(&self) -> Statistics {
        Statistics::Parafermion
    }
    fn interior_rows(&self) -> usize {
        self.dim()
    }
    fn number_operator(&self) -> CMat {
        // J_z + j = ([f^dag, f] + p)/2
        let d = self.dim();
        (comm(&self.raise, &self.lower) + CMat::identity(d, d) * r(self.p as f64)) * r(0.5)
    }
}

/// The trilinear defect matrix `[x, {x^dag,x}] - 2x` (or with the inner
/// commutator for parafermions), before any edge exclusion.
pub fn trilinear_defect<R: LadderRep + ?Sized>(rep: &R) -> CMat {
    let x = rep.lower();
    let xd = rep.raise();
    let inner = match rep.statistics() {
        Statistics::Paraboson => anticomm(xd, x),
        Statistics::Parafermion => comm(xd, x),
    };
    comm(x, &inner) - x * r(2.0)
}

/// Largest defect entry in each interior row.
pub fn trilinear_row_residuals<R: LadderRep + ?Sized>(rep: &R) -> Vec<f64> {
    let d = trilinear_defect(rep);
    (0..rep.interior_rows())
        .map(|i| d.row(i).iter().fold(0.0_f64, |a, z| a.max(z.norm())))
        .collect()
}

pub fn trilinear_residual<R: LadderRep + ?Sized>(rep: &R) -> f64 {
    trilinear_row_residuals(rep).into_iter().fold(0.0, f64::max)
}

/// `max |[N, x^dag] - x^dag|` over interior rows.
pub fn number_raise_residual<R: LadderRep + ?Sized>(rep: &R) -> f64 {
    let n = rep.number_operator();
    let d = comm(&n, rep.raise()) - rep.raise();
    let rows = rep.interior_rows();
    (0..rows).flat_map(|i| d.row(i).iter().map(|z| z.norm()).collect::<Vec<_>>()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutatorRow {
    pub n: usize,
    pub computed: f64,
    pub printed_prediction: f64,
    pub diff: f64,
    pub flagged: bool,
}

/// Diagonal of `[b, b^dag]` for the deformed ladder next to the closed form
/// `1 + (2/p)(2n+1)` that accompanies it in print.
pub fn commutator_audit(p: u64, cutoff: usize) -> Result<Vec<CommutatorRow>, FockError> {
    let lad = build_deformed_ladder(p, cutoff)?;
    let cm = comm(&lad.lower, &lad.raise);
    Ok((0..lad.interior_rows())
        .map(|n| {
            let computed = cm[(n, n)].re;
            let pred = 1.0 + 2.0 / p as f64 * (2.0 * n as f64 + 1.0);
            let diff = (computed - pred).abs();
            CommutatorRow { n, computed, printed_prediction: pred, diff, flagged: diff > 1e-12 }
        })
        .collect())
}

pub fn commutator_audit_table(rows: &[CommutatorRow]) -> String {
    let mut s = format!("{:>4} {:>22} {:>22} {:>12}\n", "n", "computed", "printed_prediction", "|diff|");
    for row in rows {
        s.push_str(&format!(
            "{:>4} {:>22.15} {:>22.15} {:>12.3e}{}\n",
            row.n,
            row.computed,
            row.printed_prediction,
            row.diff,
            if row.flagged { "  MISMATCH" } else { "" }
        ));
    }
    s
}

/// Dense real export of a representation matrix.
pub fn matrix_csv(m: &CMat) -> String {
    let re: DMatrix<f64> = m.map(|z| z.re);
    let mut w = csv::Writer::from_writer(Vec::new());
    let head: Vec<String> = (0..re.ncols()).map(|j| format!("n{j}")).collect();
    w.write_record(&head).expect("in-memory csv");
    for i in 0..re.nrows() {
        w.write_record(re.row(i).iter().map(|v| format!("{v:.17e}"))).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

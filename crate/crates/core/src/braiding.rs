//! Grade-space braiding: the q-deformation theta, the signed-swap operator R,
//! Yang-Baxter and 2-cocycle residuals, and the two-site braided coproduct.
//!
//! A [`BraidOperator`] acts on `V (x) V` with `V = C^4` spanned by one vector
//! per grade, index `4*pos(g) + pos(h)` for `|g>|h>`.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::grading::{exchange_sign, grade_add, grade_dot, grade_of_spin, tower_spin_of_grade, Grade, GradeBasis, Spin};
use crate::linalg::{kron, max_abs, r, C64, CMat, ONE, ZERO};

pub const UNIT_TOL: f64 = 1e-12;
pub const COCYCLE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BraidError {
    #[error("|q| must be 1, got {0}")]
    NotUnitModulus(f64),
    #[error("no single-site operator supplied for grade {0}")]
    MissingOperator(Grade),
    #[error("operator supplied for grade {0} is not homogeneous of that grade")]
    NotHomogeneous(Grade),
    #[error("single-site operators must be 4x4")]
    BadShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BraidParams {
    pub q: C64,
    /// Sets epsilon to zero, switching the deformation off (Green limit).
    pub green_limit: bool,
}

impl BraidParams {
    pub fn new(q: C64) -> Result<Self, BraidError> {
        if (q.norm() - 1.0).abs() > UNIT_TOL {
            return Err(BraidError::NotUnitModulus(q.norm()));
        }
        Ok(BraidParams { q, green_limit: false })
    }

    /// `q = exp(i phase)`.
    pub fn from_phase(phase: f64) -> Self {
        BraidParams { q: C64::from_polar(1.0, phase), green_limit: false }
    }

    pub fn undeformed() -> Self {
        Self::from_phase(0.0)
    }
}

/// `theta_{ss'} = eps (q^{s+s'} - 1)` with `eps = (-1)^{2s 2s'}`.
/// Half-integer powers use the principal argument of q.
pub fn theta(s: Spin, s2: Spin, params: &BraidParams) -> C64 {
    if params.green_limit {
        return ZERO;
    }
    let eps = if (s.twice * s2.twice).is_multiple_of(2) { 1.0 } else { -1.0 };
    let expo = (s.twice + s2.twice) as f64 / 2.0;
    let qp = C64::from_polar(1.0, params.q.arg() * expo);
    (qp - ONE) * eps
}

/// `R^{s'}_s = (-1)^{g(s).g(s')} + theta_{ss'}`.
pub fn braid_coeff(s: Spin, s2: Spin, params: &BraidParams) -> C64 {
    let sign = exchange_sign(grade_of_spin(s), grade_of_spin(s2)) as f64;
    r(sign) + theta(s, s2, params)
}

#[derive(Debug, Clone)]
pub struct BraidOperator {
    pub basis: GradeBasis,
    pub matrix: CMat,
    /// `coeff[i][j]`: |basis[i]>|basis[j]> -> coeff |basis[j]>|basis[i]>.
    pub coeff: [[C64; 4]; 4],
    /// Deformation part of each coefficient.
    pub theta: [[C64; 4]; 4],
}

impl BraidOperator {
    /// Monomial swap operator with the given coefficients.
    pub fn from_coeffs(coeff: [[C64; 4]; 4], theta: [[C64; 4]; 4], basis: GradeBasis) -> Self {
        let mut m = CMat::zeros(16, 16);
        for i in 0..4 {
            for j in 0..4 {
                m[(4 * j + i, 4 * i + j)] = coeff[i][j];
            }
        }
        BraidOperator { basis, matrix: m, coeff, theta }
    }

    /// Unsigned swap.
    pub fn plain_swap(basis: GradeBasis) -> Self {
        Self::from_coeffs([[ONE; 4]; 4], [[ZERO; 4]; 4], basis)
    }

    /// An arbitrary 16x16 matrix with no swap structure (e.g. the identity).
    pub fn from_matrix(matrix: CMat, basis: GradeBasis) -> Self {
        let mut coeff = [[ZERO; 4]; 4];
        for (i, row) in coeff.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = matrix[(4 * j + i, 4 * i + j)];
            }
        }
        BraidOperator { basis, matrix, coeff, theta: [[ZERO; 4]; 4] }
    }

    /// Signed swap multiplied by the phases `exp(i phi(g,h))`.
    pub fn phase_deformed(phi: &[[f64; 4]; 4], basis: GradeBasis) -> Self {
        let mut coeff = [[ZERO; 4]; 4];
        let mut th = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let s = exchange_sign(basis.ordering[i], basis.ordering[j]) as f64;
                coeff[i][j] = C64::from_polar(s, phi[i][j]);
                th[i][j] = coeff[i][j] - r(s);
            }
        }
        Self::from_coeffs(coeff, th, basis)
    }

    /// Is this a monomial swap with all coefficients nonzero?
    pub fn is_swap_form(&self) -> bool {
        let reb = BraidOperator::from_coeffs(self.coeff, self.theta, self.basis);
        self.coeff.iter().flatten().all(|z| z.norm() > 1e-14) && max_abs(&(&reb.matrix - &self.matrix)) == 0.0
    }

    pub fn coeff_of(&self, g: Grade, h: Grade) -> C64 {
        self.coeff[self.basis.position(g)][self.basis.position(h)]
    }

    pub fn to_csv(&self) -> String {
        let hdr: Vec<String> = self
            .basis
            .ordering
            .iter()
            .flat_map(|g| self.basis.ordering.iter().map(move |h| format!("{g}{h}")))
            .collect();
        crate::linalg::complex_matrix_csv(&self.matrix, &hdr)
    }
}

pub fn r_operator(params: &BraidParams, basis: &GradeBasis) -> BraidOperator {
    let mut coeff = [[ZERO; 4]; 4];
    let mut th = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let (s, s2) = (tower_spin_of_grade(basis.ordering[i]), tower_spin_of_grade(basis.ordering[j]));
            th[i][j] = theta(s, s2, params);
            coeff[i][j] = braid_coeff(s, s2, params);
        }
    }
    BraidOperator::from_coeffs(coeff, th, *basis)
}

/// Embed a two-slot operator into three slots acting on slots `(i, j)`,
/// `i < j`, by explicit index bookkeeping.
pub fn embed_pair(m: &CMat, i: usize, j: usize) -> CMat {
    assert!(i < j && j < 3);
    let mut out = CMat::zeros(64, 64);
    for col in 0..64 {
        let digits = [col / 16, (col / 4) % 4, col % 4];
        let pair_in = 4 * digits[i] + digits[j];
        for pair_out in 0..16 {
            let v = m[(pair_out, pair_in)];
            if v == ZERO {
                continue;
            }
            let mut d = digits;
            d[i] = pair_out / 4;
            d[j] = pair_out % 4;
            out[(16 * d[0] + 4 * d[1] + d[2], col)] += v;
        }
    }
    out
}

fn plain_swap_matrix() -> CMat {
    BraidOperator::plain_swap(GradeBasis::default()).matrix
}

/// `R12 R13 R23 - R23 R13 R12` for the swap-stripped operator `P R`.
pub fn ybe_defect(rop: &BraidOperator) -> CMat {
    let rt = plain_swap_matrix() * &rop.matrix;
    let r12 = embed_pair(&rt, 0, 1);
    let r13 = embed_pair(&rt, 0, 2);
    let r23 = embed_pair(&rt, 1, 2);
    &r12 * &r13 * &r23 - &r23 * &r13 * &r12
}

/// `(R x 1)(1 x R)(R x 1) - (1 x R)(R x 1)(1 x R)` on the triple space.
pub fn braid_relation_defect(rop: &BraidOperator) -> CMat {
    let id = CMat::identity(4, 4);
    let a = kron(&rop.matrix, &id);
    let b = kron(&id, &rop.matrix);
    &a * &b * &a - &b * &a * &b
}

/// Fusion compatibility of a swap-form braiding, per triple `(x,y,z)`:
/// `c(x+y, z) - c(x,z) c(y,z)` and `c(x, y+z) - c(x,y) c(x,z)`.
/// Zero exactly when the coefficients form a bicharacter.
pub fn bicharacter_defects(rop: &BraidOperator) -> Vec<((Grade, Grade, Grade), f64)> {
    let mut out = Vec::with_capacity(64);
    for x in rop.basis.ordering {
        for y in rop.basis.ordering {
            for z in rop.basis.ordering {
                let cc = |g, h| rop.coeff_of(g, h);
                let d1 = (cc(grade_add(x, y), z) - cc(x, z) * cc(y, z)).norm();
                let d2 = (cc(x, grade_add(y, z)) - cc(x, y) * cc(x, z)).norm();
                out.push(((x, y, z), d1.max(d2)));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct TripleResidual {
    pub x: Grade,
    pub y: Grade,
    pub z: Grade,
    pub ybe: f64,
    pub braid: f64,
    pub bicharacter: Option<f64>,
}

/// Per-triple audit, 64 rows.
pub fn yang_baxter_table(rop: &BraidOperator) -> Vec<TripleResidual> {
    let ybe = ybe_defect(rop);
    let br = braid_relation_defect(rop);
    let bich = if rop.is_swap_form() { Some(bicharacter_defects(rop)) } else { None };
    let b = rop.basis.ordering;
    let mut rows = Vec::with_capacity(64);
    for col in 0..64 {
        let (x, y, z) = (b[col / 16], b[(col / 4) % 4], b[col % 4]);
        let colmax = |m: &CMat| m.column(col).iter().fold(0.0_f64, |a, v| a.max(v.norm()));
        rows.push(TripleResidual {
            x,
            y,
            z,
            ybe: colmax(&ybe),
            braid: colmax(&br),
            bicharacter: bich.as_ref().map(|v| v[col].1),
        });
    }
    rows
}

/// Max over all 64 triples of the Yang-Baxter defect, the braid-relation
/// defect and, for swap-form operators, the fusion (bicharacter) defect.
pub fn yang_baxter_residual(rop: &BraidOperator) -> f64 {
    yang_baxter_table(rop)
        .iter()
        .map(|t| t.ybe.max(t.braid).max(t.bicharacter.unwrap_or(0.0)))
        .fold(0.0, f64::max)
}

fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    // fold -pi onto pi so that both count as distance pi
    if y <= -PI {
        y + 2.0 * PI
    } else {
        y
    }
}

/// `max |theta(g1,g2) + theta(g1 g2, g3) - theta(g2,g3) - theta(g1, g2 g3)|`
/// over 64 triples, compared mod 2 pi.
pub fn cocycle_residual(theta_table: &[[f64; 4]; 4]) -> f64 {
    let t = |g: Grade, h: Grade| theta_table[g.index()][h.index()];
    let mut worst = 0.0_f64;
    for g1 in Grade::ALL {
        for g2 in Grade::ALL {
            for g3 in Grade::ALL {
                let d = t(g1, g2) + t(grade_add(g1, g2), g3) - t(g2, g3) - t(g1, grade_add(g2, g3));
                worst = worst.max(wrap_angle(d).abs());
            }
        }
    }
    worst
}

/// `theta(g,h) = pi g^T B h` for a 2x2 bit matrix `B`: the bicharacters of Z2 x Z2.
pub fn bicharacter_phases(bmat: [[u8; 2]; 2]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for g in Grade::ALL {
        for h in Grade::ALL {
            let gv = [g.a, g.b];
            let hv = [h.a, h.b];
            let mut s = 0u8;
            for i in 0..2 {
                for j in 0..2 {
                    s ^= gv[i] & bmat[i][j] & hv[j];
                }
            }
            out[g.index()][h.index()] = PI * s as f64;
        }
    }
    out
}

pub fn random_bicharacter<R: Rng + ?Sized>(rng: &mut R) -> [[f64; 4]; 4] {
    let mut b = [[0u8; 2]; 2];
    for row in b.iter_mut() {
        for cell in row.iter_mut() {
            *cell = rng.random_range(0..2);
        }
    }
    bicharacter_phases(b)
}

/// `pi * grade_dot`, the phase of the undeformed signed swap.
pub fn dot_phases() -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for g in Grade::ALL {
        for h in Grade::ALL {
            out[g.index()][h.index()] = PI * grade_dot(g, h) as f64;
        }
    }
    out
}

/// One single-site operator per grade on the 4-dim grade space.
#[derive(Debug, Clone, Default)]
pub struct GradedOps {
    ops: [Option<CMat>; 4],
}

impl GradedOps {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, g: Grade, m: CMat) -> Result<(), BraidError> {
        if m.nrows() != 4 || m.ncols() != 4 {
            return Err(BraidError::BadShape);
        }
        for i in 0..4 {
            for j in 0..4 {
                if m[(i, j)].norm() > 0.0 && Grade::from_index(i) != grade_add(Grade::from_index(j), g) {
                    return Err(BraidError::NotHomogeneous(g));
                }
            }
        }
        self.ops[g.index()] = Some(m);
        Ok(())
    }

    pub fn get(&self, g: Grade) -> Option<&CMat> {
        self.ops[g.index()].as_ref()
    }

    /// `psi_g |h> = w_h |h + g>` with weights `1 + index(h)`.
    pub fn grade_shifts() -> Self {
        let mut ops = Self::new();
        for g in Grade::ALL {
            let m = CMat::from_fn(4, 4, |i, j| {
                if Grade::from_index(i) == grade_add(Grade::from_index(j), g) {
                    r(1.0 + j as f64)
                } else {
                    ZERO
                }
            });
            ops.insert(g, m).expect("homogeneous by construction");
        }
        ops
    }
}

/// Coefficient multiplying `1 (x) psi_h` in the coproduct of `psi_g`:
/// the sign term on the diagonal plus theta everywhere.
pub fn coproduct_coeff(rop: &BraidOperator, g: Grade, h: Grade) -> C64 {
    let (i, j) = (rop.basis.position(g), rop.basis.position(h));
    let th = rop.theta[i][j];
    if g == h {
        rop.coeff[i][i]
    } else {
        th
    }
}

/// `Delta(psi_g) = psi_g (x) 1 + sum_h C^h_g (1 (x) psi_h)` on `C^4 (x) C^4`.
pub fn braided_coproduct(op_grade: Grade, rop: &BraidOperator, ops: &GradedOps) -> Result<CMat, BraidError> {
    let id = CMat::identity(4, 4);
    let psi = ops.get(op_grade).ok_or(BraidError::MissingOperator(op_grade))?;
    let mut out = kron(psi, &id);
    for h in Grade::ALL {
        let cf = coproduct_coeff(rop, op_grade, h);
        if cf.norm() == 0.0 {
            continue;
        }
        let ph = ops.get(h).ok_or(BraidError::MissingOperator(h))?;
        out += kron(&id, ph) * cf;
    }
    Ok(out)
}

/// Parity string `Z_g |h> = (-1)^{g.h} |h>`.
pub fn parity_string(g: Grade) -> CMat {
    CMat::from_fn(4, 4, |i, j| if i == j { r(exchange_sign(g, Grade::from_index(i)) as f64) } else { ZERO })
}

/// `|| R Delta R^{-1} - SW (psi (x) Z_g + c Z_g (x) psi) SW ||` with `SW` the
/// plain swap and `c` the diagonal coproduct coefficient. Meaningful for the
/// undeformed signed swap.
pub fn coproduct_covariance_residual(op_grade: Grade, rop: &BraidOperator, ops: &GradedOps) -> Result<f64, BraidError> {
    let delta = braided_coproduct(op_grade, rop, ops)?;
    let rinv = rop.matrix.clone().try_inverse().expect("monomial with nonzero coefficients");
    let lhs = &rop.matrix * delta * rinv;
    let psi = ops.get(op_grade).ok_or(BraidError::MissingOperator(op_grade))?;
    let z = parity_string(op_grade);
    let cf = coproduct_coeff(rop, op_grade, op_grade);
    let sw = plain_swap_matrix();
    let rhs = &sw * (kron(psi, &z) + kron(&z, psi) * cf) * &sw;
    Ok(max_abs(&(lhs - rhs)))
}

/// Project slot 2 onto the `(0,0)` sector.
pub fn project_slot2_vacuum(two_site: &CMat) -> CMat {
    let mut p = CMat::zeros(4, 4);
    p[(0, 0)] = ONE;
    let proj = kron(&CMat::identity(4, 4), &p);
    &proj * two_site * &proj
}

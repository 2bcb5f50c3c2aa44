//! Graded gamma matrices on the 16-dimensional space `C^4(grade) (x) C^4(spinor)`,
//! their Lorentz generators, the spin tower mass map and the block Dirac
//! dispersion check.

use thiserror::Error;

use crate::grading::{grade_of_spin, projector, Grade, GradeBasis, Spin};
use crate::linalg::{anticomm, c, comm, eye, from_rows, kron, max_abs, r, CMat, I, ONE, ZERO};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliffordError {
    #[error("spin {spin} belongs to grade {expected}, not {given}")]
    GradeSpinMismatch { spin: Spin, expected: Grade, given: Grade },
    #[error("mass scale must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("momentum has {got} components, gamma set has {want}")]
    Dimension { got: usize, want: usize },
}

/// A set of gamma matrices with a diagonal metric.
#[derive(Debug, Clone)]
pub struct GammaSet {
    pub gammas: Vec<CMat>,
    pub metric: Vec<f64>,
}

impl GammaSet {
    pub fn dim(&self) -> usize {
        self.gammas.len()
    }

    pub fn spinor_dim(&self) -> usize {
        self.gammas[0].nrows()
    }

    /// `max ||{g^mu, g^nu} - 2 eta^{mu nu} 1||` over all pairs.
    pub fn clifford_residual(&self) -> f64 {
        clifford_residual(&self.gammas, &self.metric, &eye(self.spinor_dim()))
    }

    /// `max ||(g^mu)^dagger - g^0 g^mu g^0||`.
    pub fn hermiticity_residual(&self) -> f64 {
        let g0 = &self.gammas[0];
        self.gammas
            .iter()
            .map(|g| max_abs(&(g.adjoint() - g0 * g * g0)))
            .fold(0.0, f64::max)
    }
}

fn clifford_residual(gs: &[CMat], metric: &[f64], unit: &CMat) -> f64 {
    let mut worst = 0.0_f64;
    for mu in 0..gs.len() {
        for nu in mu..gs.len() {
            let eta = if mu == nu { metric[mu] } else { 0.0 };
            let d = anticomm(&gs[mu], &gs[nu]) - unit * r(2.0 * eta);
            worst = worst.max(max_abs(&d));
        }
    }
    worst
}

fn pauli() -> [CMat; 3] {
    [
        from_rows(2, 2, &[ZERO, ONE, ONE, ZERO]),
        from_rows(2, 2, &[ZERO, -I, I, ZERO]),
        from_rows(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// Dirac representation, `gamma^0 = diag(1, 1, -1, -1)`.
pub fn dirac_gammas() -> GammaSet {
    let [sx, sy, sz] = pauli();
    let off = from_rows(2, 2, &[ZERO, ONE, -ONE, ZERO]);
    let g0 = kron(&sz, &eye(2));
    let gammas = vec![g0, kron(&off, &sx), kron(&off, &sy), kron(&off, &sz)];
    GammaSet { gammas, metric: vec![1.0, -1.0, -1.0, -1.0] }
}

/// The 1+1 dimensional pair `gamma^0 = sigma_z`, `gamma^1 = i sigma_y`.
pub fn gammas_2d() -> GammaSet {
    let [_, sy, sz] = pauli();
    GammaSet { gammas: vec![sz, sy * I], metric: vec![1.0, -1.0] }
}

#[derive(Debug, Clone)]
pub struct GradedGammaSet {
    pub basis: GradeBasis,
    pub base: GammaSet,
    /// `per_grade[k][mu] = P_g (x) gamma^mu` for `g = basis.ordering[k]`.
    pub per_grade: Vec<Vec<CMat>>,
    pub summed: Vec<CMat>,
}

pub fn graded_gammas(gammas: &GammaSet, basis: &GradeBasis) -> GradedGammaSet {
    let per_grade: Vec<Vec<CMat>> = basis
        .ordering
        .iter()
        .map(|&g| {
            let p = projector(g, basis).to_cmat();
            gammas.gammas.iter().map(|gm| kron(&p, gm)).collect()
        })
        .collect();
    let n = 4 * gammas.spinor_dim();
    let summed = (0..gammas.dim())
        .map(|mu| per_grade.iter().fold(CMat::zeros(n, n), |acc, blk| acc + &blk[mu]))
        .collect();
    GradedGammaSet { basis: *basis, base: gammas.clone(), per_grade, summed }
}

impl GradedGammaSet {
    pub fn total_dim(&self) -> usize {
        self.summed[0].nrows()
    }

    pub fn block(&self, g: Grade) -> &[CMat] {
        &self.per_grade[self.basis.position(g)]
    }

    pub fn clifford_residual(&self) -> f64 {
        clifford_residual(&self.summed, &self.base.metric, &eye(self.total_dim()))
    }

    /// Largest entry of any cross-grade anticommutator `{G^mu_g, G^nu_h}`, `g != h`.
    pub fn cross_grade_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, a) in self.per_grade.iter().enumerate() {
            for (j, b) in self.per_grade.iter().enumerate() {
                if i == j {
                    continue;
                }
                for ga in a {
                    for gb in b {
                        worst = worst.max(max_abs(&anticomm(ga, gb)));
                    }
                }
            }
        }
        worst
    }

    /// `{G^mu_g, G^nu_g} - 2 eta^{mu nu} P_g (x) 1` over every grade and pair.
    pub fn intra_grade_residual(&self) -> f64 {
        let s = self.base.spinor_dim();
        self.basis
            .ordering
            .iter()
            .map(|&g| {
                let unit = kron(&projector(g, &self.basis).to_cmat(), &eye(s));
                clifford_residual(self.block(g), &self.base.metric, &unit)
            })
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let g0 = &self.summed[0];
        self.summed
            .iter()
            .map(|g| max_abs(&(g.adjoint() - g0 * g * g0)))
            .fold(0.0, f64::max)
    }
}

/// `(i/4) [a, b]`.
fn sigma(a: &CMat, b: &CMat) -> CMat {
    comm(a, b) * c(0.0, 0.25)
}

/// Lorentz generators `Sigma^{mu nu}` indexed by `(mu, nu)`, full antisymmetric table.
pub struct LorentzGenerators {
    pub dim: usize,
    pub metric: Vec<f64>,
    table: Vec<CMat>,
}

impl LorentzGenerators {
    pub fn get(&self, mu: usize, nu: usize) -> &CMat {
        &self.table[mu * self.dim + nu]
    }

    /// The independent generators, `mu < nu`.
    pub fn independent(&self) -> Vec<((usize, usize), &CMat)> {
        let mut out = Vec::new();
        for mu in 0..self.dim {
            for nu in mu + 1..self.dim {
                out.push(((mu, nu), self.get(mu, nu)));
            }
        }
        out
    }

    /// Largest defect of
    /// `[S^{mn}, S^{rs}] = i (e^{nr} S^{ms} - e^{mr} S^{ns} - e^{ns} S^{mr} + e^{ms} S^{nr})`.
    pub fn closure_residual(&self) -> f64 {
        let d = self.dim;
        let eta = |a: usize, b: usize| if a == b { self.metric[a] } else { 0.0 };
        let mut worst = 0.0_f64;
        for m in 0..d {
            for n in 0..d {
                for rr in 0..d {
                    for s in 0..d {
                        let lhs = comm(self.get(m, n), self.get(rr, s));
                        let rhs = (self.get(m, s) * r(eta(n, rr))
                            - self.get(n, s) * r(eta(m, rr))
                            - self.get(m, rr) * r(eta(n, s))
                            + self.get(n, rr) * r(eta(m, s)))
                            * I;
                        worst = worst.max(max_abs(&(lhs - rhs)));
                    }
                }
            }
        }
        worst
    }
}

pub fn lorentz_generators(gg: &GradedGammaSet) -> LorentzGenerators {
    let d = gg.summed.len();
    let mut table = Vec::with_capacity(d * d);
    for mu in 0..d {
        for nu in 0..d {
            table.push(sigma(&gg.summed[mu], &gg.summed[nu]));
        }
    }
    LorentzGenerators { dim: d, metric: gg.base.metric.clone(), table }
}

/// Spinor-space generators `(i/4)[gamma^mu, gamma^nu]` for comparison with the
/// graded blocks.
pub fn spinor_generator(gs: &GammaSet, mu: usize, nu: usize) -> CMat {
    sigma(&gs.gammas[mu], &gs.gammas[nu])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TowerLevel {
    pub spin: Spin,
    pub grade: Grade,
    pub mass: f64,
}

/// `M = m / (s + 1/2)`.
pub fn tower_mass(s: Spin, m: f64) -> f64 {
    m / (s.value() + 0.5)
}

pub fn tower_level(s: Spin, m: f64) -> Result<TowerLevel, CliffordError> {
    if !(m > 0.0) {
        return Err(CliffordError::NonPositiveScale(m));
    }
    Ok(TowerLevel { spin: s, grade: grade_of_spin(s), mass: tower_mass(s, m) })
}

/// Smallest singular value of `G^mu_g p_mu - M(s) (P_g (x) 1)` restricted to the
/// grade block. `p4` carries upper indices.
pub fn dispersion_residual(
    gg: &GradedGammaSet,
    p4: &[f64],
    s: Spin,
    m: f64,
    grade: Grade,
) -> Result<f64, CliffordError> {
    let lvl = tower_level(s, m)?;
    if lvl.grade != grade {
        return Err(CliffordError::GradeSpinMismatch { spin: s, expected: lvl.grade, given: grade });
    }
    if p4.len() != gg.base.dim() {
        return Err(CliffordError::Dimension { got: p4.len(), want: gg.base.dim() });
    }
    let sd = gg.base.spinor_dim();
    let k = gg.basis.position(grade);
    let blk = gg.block(grade);
    let n = gg.total_dim();
    let mut d = CMat::zeros(n, n);
    for (mu, g) in blk.iter().enumerate() {
        d += g * r(gg.base.metric[mu] * p4[mu]);
    }
    d -= kron(&projector(grade, &gg.basis).to_cmat(), &eye(sd)) * r(lvl.mass);
    let sub = d.view((k * sd, k * sd), (sd, sd)).into_owned();
    let sv = sub.singular_values();
    Ok(sv.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Minkowski square `p.p` with the set's metric.
pub fn minkowski_sq(metric: &[f64], p4: &[f64]) -> f64 {
    metric.iter().zip(p4).map(|(e, p)| e * p * p).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    fn det4(m: &CMat) -> C64 {
        // cofactor expansion, independent of the SVD route
        fn det(m: &[Vec<C64>]) -> C64 {
            if m.len() == 1 {
                return m[0][0];
            }
            let mut acc = ZERO;
            for j in 0..m.len() {
                let minor: Vec<Vec<C64>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| *v).collect()).collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += m[0][j] * det(&minor) * sign;
            }
            acc
        }
        let rows: Vec<Vec<C64>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect();
        det(&rows)
    }

    #[test]
    fn dirac_clifford() {
        let g = dirac_gammas();
        assert!(g.clifford_residual() <= 1e-12);
        assert!(g.hermiticity_residual() <= 1e-12);
        assert_eq!(anticomm(&g.gammas[0], &g.gammas[0]), eye(4) * r(2.0));
        assert_eq!(max_abs(&anticomm(&g.gammas[1], &g.gammas[2])), 0.0);
        let g1 = &g.gammas[1];
        assert!(max_abs(&(g1.adjoint() - &g.gammas[0] * g1 * &g.gammas[0])) == 0.0);
    }

    #[test]
    fn two_dim_set() {
        let g = gammas_2d();
        assert!(g.clifford_residual() <= 1e-15);
        let gg = graded_gammas(&g, &GradeBasis::default());
        assert!(gg.clifford_residual() <= 1e-15);
        assert_eq!(gg.total_dim(), 8);
    }

    #[test]
    fn graded_relations() {
        let gg = graded_gammas(&dirac_gammas(), &GradeBasis::default());
        assert!(gg.clifford_residual() <= 1e-12);
        assert_eq!(gg.cross_grade_residual(), 0.0);
        assert!(gg.intra_grade_residual() <= 1e-12);
        assert!(gg.hermiticity_residual() <= 1e-12);
    }

    #[test]
    fn lorentz_blocks_and_closure() {
        let base = dirac_gammas();
        let gg = graded_gammas(&base, &GradeBasis::default());
        let lg = lorentz_generators(&gg);
        let want = kron(&eye(4), &spinor_generator(&base, 0, 1));
        assert!(max_abs(&(lg.get(0, 1) - want)) <= 1e-15);
        assert_eq!(max_abs(lg.get(2, 2)), 0.0);
        assert_eq!(lg.independent().len(), 6);
        assert!(lg.closure_residual() <= 1e-12);
        // [S12, S23] = +-i S13 with the metric sign
        let lhs = comm(lg.get(1, 2), lg.get(2, 3));
        let d = max_abs(&(&lhs - lg.get(1, 3) * I)).min(max_abs(&(&lhs + lg.get(1, 3) * I)));
        assert!(d <= 1e-12);
    }

    #[test]
    fn tower_masses() {
        let m = |s: &str| tower_mass(s.parse().unwrap(), 1.0);
        assert_eq!(m("1/2"), 1.0);
        assert_eq!(m("0"), 2.0);
        assert_eq!(m("3/2"), 0.5);
        assert!(tower_level("1".parse().unwrap(), 0.0).is_err());
    }

    #[test]
    fn dispersion_on_and_off_shell() {
        let base = dirac_gammas();
        let gg = graded_gammas(&base, &GradeBasis::default());
        let s: Spin = "3/2".parse().unwrap();
        let g = grade_of_spin(s);
        let mass = tower_mass(s, 1.0);
        assert!(dispersion_residual(&gg, &[mass, 0.0, 0.0, 0.0], s, 1.0, g).unwrap() <= 1e-10);
        let off = dispersion_residual(&gg, &[0.0, 1.0, 0.0, 0.0], s, 1.0, g).unwrap();
        assert!(off >= 0.1 * mass);
        let two = tower_mass(s, 2.0);
        assert!(dispersion_residual(&gg, &[two, 0.0, 0.0, 0.0], s, 2.0, g).unwrap() <= 1e-10);
        assert!((two - 2.0 * mass).abs() < 1e-15);
        let wrong = grade_of_spin("1/2".parse().unwrap());
        assert!(wrong == g || dispersion_residual(&gg, &[mass, 0.0, 0.0, 0.0], s, 1.0, wrong).is_err());
    }

    #[test]
    fn determinant_oracle() {
        // det(gamma.p - M) = (p.p - M^2)^2
        let g = dirac_gammas();
        let p = [1.3, 0.2, -0.7, 0.4];
        let mass = 0.9;
        let mut d = -eye(4) * r(mass);
        for mu in 0..4 {
            d += &g.gammas[mu] * r(g.metric[mu] * p[mu]);
        }
        let want = (minkowski_sq(&g.metric, &p) - mass * mass).powi(2);
        assert!((det4(&d) - r(want)).norm() < 1e-12);
    }
}

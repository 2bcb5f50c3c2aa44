//! Free-fermion tools: the Jordan-Wigner image of the XY chain, ground-state
//! correlation matrices and entanglement entropy, central-charge fits, bilinear
//! mode Hamiltonians and the four-mode cyclic chain.
//!
//! Jordan-Wigner convention: `c_n = (prod_{m<n} sigma^z_m) sigma^-_n` with spin up
//! counted as occupied. Under it `H = -J sum (XX + YY)` becomes
//! `sum_{mn} h_mn c+_m c_n` with `h = 2 t`, where `t` is the hopping matrix below.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{hermiticity_residual, CMat, C64};

pub const DEGENERACY_TOL: f64 = 1e-9;
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("chain needs at least 4 sites, got {0}")]
    TooShort(usize),
    #[error("coupling J must be nonzero")]
    ZeroCoupling,
    #[error("odd site count {0}: half filling is degenerate")]
    OddSites(usize),
    #[error("Fermi level is degenerate (gap {0:.3e}); choose the other parity sector")]
    DegenerateFermiLevel(f64),
    #[error("interval length {l} outside 1..{n}")]
    BadInterval { l: usize, n: usize },
    #[error("fit needs at least 5 points, got {0}")]
    TooFewPoints(usize),
    #[error("entropy has zero variance over the fit window; no logarithmic growth to fit")]
    ZeroVariance,
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("{0} terms are not quadratic in number-conserving form and cannot be diagonalized here")]
    Unsupported(&'static str),
    #[error("exact diagonalization limited to N <= {max}, got {n}")]
    TooLargeForExact { n: usize, max: usize },
    #[error("exact ground state is degenerate (gap {0:.3e})")]
    DegenerateGroundState(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Boundary {
    Open,
    Periodic,
}

/// Fermion parity sector for a periodic chain. The corner hopping is
/// `-P J` with `P = (-1)^{N_f}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParitySector {
    /// `P = (-1)^{N/2}`, the sector holding the half-filled ground state.
    HalfFilling,
    /// `P = +1`: anti-periodic fermions.
    Even,
    /// `P = -1`: periodic fermions.
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XYChain {
    pub n: usize,
    pub j: f64,
    pub boundary: Boundary,
    pub sector: ParitySector,
}

impl XYChain {
    pub fn new(n: usize, j: f64, boundary: Boundary) -> Result<Self, ChainError> {
        if n < 4 {
            return Err(ChainError::TooShort(n));
        }
        if j == 0.0 {
            return Err(ChainError::ZeroCoupling);
        }
        Ok(XYChain { n, j, boundary, sector: ParitySector::HalfFilling })
    }

    pub fn periodic(n: usize) -> Result<Self, ChainError> {
        Self::new(n, 1.0, Boundary::Periodic)
    }

    pub fn with_sector(mut self, sector: ParitySector) -> Self {
        self.sector = sector;
        self
    }

    /// `(-1)^{N_f}` used for the corner term.
    pub fn parity(&self) -> f64 {
        match self.sector {
            ParitySector::Even => 1.0,
            ParitySector::Odd => -1.0,
            ParitySector::HalfFilling => {
                if (self.n / 2).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// `t_mn = J` for nearest neighbours; periodic chains add the corner `-P J`.
pub fn jw_hopping_matrix(chain: &XYChain) -> DMatrix<f64> {
    let n = chain.n;
    let mut t = DMatrix::zeros(n, n);
    for m in 0..n - 1 {
        t[(m, m + 1)] = chain.j;
        t[(m + 1, m)] = chain.j;
    }
    if chain.boundary == Boundary::Periodic {
        let corner = -chain.parity() * chain.j;
        t[(0, n - 1)] = corner;
        t[(n - 1, 0)] = corner;
    }
    t
}

fn sorted_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let mut idx: Vec<usize> = (0..m.nrows()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| eig.eigenvectors[(i, idx[j])]);
    (vals, vecs)
}

/// `C_mn = <c+_m c_n>` in the half-filled ground state.
pub fn ground_state_correlations(chain: &XYChain) -> Result<DMatrix<f64>, ChainError> {
    correlations_from_hopping(&jw_hopping_matrix(chain))
}

/// Fill the lower half of the single-particle modes of a real symmetric hopping matrix.
pub fn correlations_from_hopping(t: &DMatrix<f64>) -> Result<DMatrix<f64>, ChainError> {
    let n = t.nrows();
    if n % 2 == 1 {
        return Err(ChainError::OddSites(n));
    }
    let (vals, vecs) = sorted_eigen(t);
    let gap = vals[n / 2] - vals[n / 2 - 1];
    if gap < DEGENERACY_TOL {
        return Err(ChainError::DegenerateFermiLevel(gap));
    }
    let filled = vecs.columns(0, n / 2);
    Ok(filled * filled.transpose())
}

/// Ground-state energy of the spin Hamiltonian from the free-fermion solution.
pub fn ground_state_energy(chain: &XYChain) -> f64 {
    let (vals, _) = sorted_eigen(&jw_hopping_matrix(chain));
    2.0 * vals[..chain.n / 2].iter().sum::<f64>()
}

/// Infinite-chain kernel `sin(pi (m - n) / 2) / (pi (m - n))`, diagonal 1/2.
pub fn infinite_chain_kernel(d: i64) -> f64 {
    if d == 0 {
        0.5
    } else {
        let x = PI * d as f64;
        (x / 2.0).sin() / x
    }
}

fn binary_entropy(nu: f64) -> f64 {
    let nu = nu.clamp(1e-15, 1.0 - 1e-15);
    -(nu * nu.ln() + (1.0 - nu) * (1.0 - nu).ln())
}

/// Entropy of the first `l` sites from the restricted correlation matrix.
pub fn entanglement_entropy(c: &DMatrix<f64>, l: usize) -> Result<f64, ChainError> {
    let n = c.nrows();
    if l == 0 || l >= n {
        return Err(ChainError::BadInterval { l, n });
    }
    let sub = c.view((0, 0), (l, l)).into_owned();
    let nu = SymmetricEigen::new(sub).eigenvalues;
    Ok(nu.iter().map(|&v| binary_entropy(v)).sum())
}

/// Eigenvalues of `C` outside `[0, 1]` by more than `tol` indicate a bug.
pub fn correlation_spectrum_ok(c: &DMatrix<f64>, tol: f64) -> bool {
    SymmetricEigen::new(c.clone()).eigenvalues.iter().all(|&v| v >= -tol && v <= 1.0 + tol)
}

/// Chord length `(N / pi) sin(pi l / N)`.
pub fn chord(n: usize, l: usize) -> f64 {
    n as f64 / PI * (PI * l as f64 / n as f64).sin()
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyPoint {
    pub l: usize,
    pub chord: f64,
    pub entropy: f64,
}

pub fn entropy_curve(chain: &XYChain, lmin: usize, lmax: usize) -> Result<Vec<EntropyPoint>, ChainError> {
    let c = ground_state_correlations(chain)?;
    (lmin..=lmax)
        .map(|l| Ok(EntropyPoint { l, chord: chord(chain.n, l), entropy: entanglement_entropy(&c, l)? }))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub rms_residual: f64,
}

fn least_squares(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let dof = (n - 2.0).max(1.0);
    LineFit { slope, intercept, slope_se: (ss / dof / sxx).sqrt(), rms_residual: (ss / n).sqrt() }
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralChargeFit {
    /// Slope of S against `(1/3) ln chord`.
    pub c: f64,
    pub c_se: f64,
    pub chord_fit: LineFit,
    /// Slope of S against `(1/3) ln l`, for comparison.
    pub raw_c: f64,
    pub raw_fit: LineFit,
    pub points: Vec<EntropyPoint>,
}

/// Fit `S = (c/3) ln chord + const` over given points.
pub fn fit_central_charge(points: Vec<EntropyPoint>) -> Result<CentralChargeFit, ChainError> {
    if points.len() < 5 {
        return Err(ChainError::TooFewPoints(points.len()));
    }
    let s: Vec<f64> = points.iter().map(|p| p.entropy).collect();
    let mean = s.iter().sum::<f64>() / s.len() as f64;
    if s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() < 1e-24 {
        return Err(ChainError::ZeroVariance);
    }
    let xc: Vec<f64> = points.iter().map(|p| p.chord.ln() / 3.0).collect();
    let xr: Vec<f64> = points.iter().map(|p| (p.l as f64).ln() / 3.0).collect();
    let chord_fit = least_squares(&xc, &s);
    let raw_fit = least_squares(&xr, &s);
    Ok(CentralChargeFit { c: chord_fit.slope, c_se: chord_fit.slope_se, chord_fit, raw_c: raw_fit.slope, raw_fit, points })
}

/// Periodic XX chain of `n` sites, intervals `lmin..=lmax` (within `[4, n/2]`).
pub fn central_charge_fit(n: usize, lmin: usize, lmax: usize) -> Result<CentralChargeFit, ChainError> {
    let chain = XYChain::periodic(n)?;
    if lmin < 1 || lmax >= n || lmin > lmax {
        return Err(ChainError::BadInterval { l: lmax, n });
    }
    fit_central_charge(entropy_curve(&chain, lmin, lmax)?)
}

pub fn entropy_csv(points: &[EntropyPoint]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["l", "chord", "entropy"]).expect("in-memory csv");
    for p in points {
        w.write_record([p.l.to_string(), format!("{:.12}", p.chord), format!("{:.12}", p.entropy)])
            .expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

/// Exact diagonalization of the spin chain in the half-filled magnetization
/// sector, without any fermion mapping. Site `n` is bit `n`, up = 1.
pub struct ExactGroundState {
    pub n: usize,
    pub energy: f64,
    pub gap: f64,
    /// Amplitudes on the full `2^N` basis.
    pub psi: Vec<f64>,
}

pub const EXACT_MAX_SITES: usize = 12;

pub fn exact_ground_state(chain: &XYChain) -> Result<ExactGroundState, ChainError> {
    let n = chain.n;
    if n > EXACT_MAX_SITES {
        return Err(ChainError::TooLargeForExact { n, max: EXACT_MAX_SITES });
    }
    if n % 2 == 1 {
        return Err(ChainError::OddSites(n));
    }
    let states: Vec<usize> = (0..1usize << n).filter(|s| s.count_ones() as usize == n / 2).collect();
    let pos = |s: usize| states.binary_search(&s).expect("state in sector");
    let mut bonds: Vec<(usize, usize)> = (0..n - 1).map(|m| (m, m + 1)).collect();
    if chain.boundary == Boundary::Periodic {
        bonds.push((n - 1, 0));
    }
    let d = states.len();
    let mut h = DMatrix::zeros(d, d);
    // -J (XX + YY) = -2J (S+S- + S-S+): moves one up spin across the bond
    for (i, &s) in states.iter().enumerate() {
        for &(a, b) in &bonds {
            if (s >> a & 1) != (s >> b & 1) {
                let s2 = s ^ (1 << a) ^ (1 << b);
                h[(pos(s2), i)] += -2.0 * chain.j;
            }
        }
    }
    let (vals, vecs) = sorted_eigen(&h);
    let gap = vals[1] - vals[0];
    if gap < DEGENERACY_TOL {
        return Err(ChainError::DegenerateGroundState(gap));
    }
    let mut psi = vec![0.0; 1 << n];
    for (i, &s) in states.iter().enumerate() {
        psi[s] = vecs[(i, 0)];
    }
    Ok(ExactGroundState { n, energy: vals[0], gap, psi })
}

impl ExactGroundState {
    /// `<c+_m c_n>` with the string `prod_{k<n} sigma^z_k`.
    pub fn correlations(&self) -> DMatrix<f64> {
        let n = self.n;
        // string sign: (-1)^{number of down spins below site k}
        let string = |s: usize, k: usize| -> f64 {
            let below = (k - (s & ((1 << k) - 1)).count_ones() as usize) % 2;
            if below == 0 {
                1.0
            } else {
                -1.0
            }
        };
        let mut c = DMatrix::zeros(n, n);
        for (s, &amp) in self.psi.iter().enumerate() {
            if amp == 0.0 {
                continue;
            }
            for q in 0..n {
                if s >> q & 1 == 0 {
                    continue;
                }
                let s1 = s ^ (1 << q);
                let sign1 = string(s, q);
                for p in 0..n {
                    if s1 >> p & 1 == 1 {
                        continue;
                    }
                    let s2 = s1 | (1 << p);
                    let sign2 = string(s1, p);
                    c[(p, q)] += self.psi[s2] * amp * sign1 * sign2;
                }
            }
        }
        c
    }

    /// Von Neumann entropy of the first `l` sites (the low `l` bits).
    pub fn entropy(&self, l: usize) -> f64 {
        let lo = 1usize << l;
        let hi = 1usize << (self.n - l);
        let m = DMatrix::from_fn(hi, lo, |i, j| self.psi[i * lo + j]);
        m.singular_values().iter().map(|&s| s * s).filter(|&p| p > 1e-300).map(|p| -p * p.ln()).sum()
    }
}

/// `H = sum_ij h_ij a+_i a_j`, optionally carrying terms that are recorded but
/// not solvable by a single-particle diagonalization.
#[derive(Debug, Clone)]
pub struct BilinearHamiltonian {
    pub h: CMat,
    /// `sum Delta_ij a_i a_j + h.c.`
    pub pairing: Option<CMat>,
    /// `U (a+ a)^k` on-site nonlinearity as `(U, k)`.
    pub nonlinear: Option<(f64, u32)>,
}

impl BilinearHamiltonian {
    pub fn new(h: CMat) -> Self {
        BilinearHamiltonian { h, pairing: None, nonlinear: None }
    }

    /// Mode frequencies on the diagonal and hoppings `J_ij` off it.
    pub fn from_modes(omega: &[f64], hopping: &CMat) -> Self {
        let mut h = hopping.clone();
        for (i, w) in omega.iter().enumerate() {
            h[(i, i)] += C64::new(*w, 0.0);
        }
        Self::new(h)
    }

    /// Adds a spin-orbit term `lambda_jk`; any Hermitian matrix is accepted.
    pub fn with_spin_orbit(mut self, lambda: &CMat) -> Result<Self, ChainError> {
        let res = hermiticity_residual(lambda);
        if res > HERMITIAN_TOL {
            return Err(ChainError::NotHermitian(res));
        }
        self.h += lambda;
        Ok(self)
    }
}

#[derive(Debug, Clone)]
pub struct ModeSpectrum {
    pub energies: Vec<f64>,
    /// Columns are the normal modes.
    pub transform: CMat,
}

pub fn diagonalize_bilinear(ham: &BilinearHamiltonian) -> Result<ModeSpectrum, ChainError> {
    if ham.pairing.is_some() {
        return Err(ChainError::Unsupported("pairing"));
    }
    if ham.nonlinear.is_some() {
        return Err(ChainError::Unsupported("nonlinear"));
    }
    let res = hermiticity_residual(&ham.h);
    if res > HERMITIAN_TOL {
        return Err(ChainError::NotHermitian(res));
    }
    let eig = SymmetricEigen::new(ham.h.clone());
    let n = ham.h.nrows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    Ok(ModeSpectrum {
        energies: idx.iter().map(|&k| eig.eigenvalues[k]).collect(),
        transform: CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, idx[j])]),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerReport {
    /// `max |e_k - M (s_k + 1/2)|`.
    pub product_residual: f64,
    /// `max |e_k - M / (s_k + 1/2)|`.
    pub quotient_residual: f64,
}

/// Compare a spectrum with both mass-spin conventions; `spins` pair with the
/// sorted energies.
pub fn tower_consistency(energies: &[f64], spins: &[f64], mass: f64) -> TowerReport {
    let worst = |f: &dyn Fn(f64) -> f64| energies.iter().zip(spins).map(|(e, &s)| (e - f(s)).abs()).fold(0.0, f64::max);
    TowerReport {
        product_residual: worst(&|s| mass * (s + 0.5)),
        quotient_residual: worst(&|s| mass / (s + 0.5)),
    }
}

/// `omega 1 + g (S + S^T)` on four cyclic modes, plus `diag(phi_k)` with
/// `phi_k = pi k / 2` when `with_phase`.
pub fn cyclic_matrix(omega: f64, g: f64, with_phase: bool) -> DMatrix<f64> {
    DMatrix::from_fn(4, 4, |i, j| {
        let mut v = 0.0;
        if i == j {
            v += omega;
            if with_phase {
                v += PI * i as f64 / 2.0;
            }
        }
        if (i + 1) % 4 == j || (j + 1) % 4 == i {
            v += g;
        }
        v
    })
}

/// Sorted eigenvalues of the cyclic chain, `omega + 2 g cos(pi k / 2)`.
pub fn cyclic_spectrum(omega: f64, g: f64) -> [f64; 4] {
    let mut e: [f64; 4] = std::array::from_fn(|k| omega + 2.0 * g * (PI * k as f64 / 2.0).cos());
    e.sort_by(f64::total_cmp);
    e
}

/// Sorted eigenvalues of the cyclic chain with the clock phase pattern added.
pub fn cyclic_phase_spectrum(omega: f64, g: f64) -> Vec<f64> {
    sorted_eigen(&cyclic_matrix(omega, g, true)).0
}

pub fn real_spectrum(m: &DMatrix<f64>) -> Vec<f64> {
    sorted_eigen(m).0
}

/// Entropy from a list of occupation eigenvalues.
pub fn entropy_of_occupations(nu: &DVector<f64>) -> f64 {
    nu.iter().map(|&v| binary_entropy(v)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, unitarity_residual};

    #[test]
    fn hopping_examples() {
        let t = jw_hopping_matrix(&XYChain::new(4, 1.0, Boundary::Open).unwrap());
        assert_eq!(t[(0, 1)], 1.0);
        assert_eq!(t[(0, 2)], 0.0);
        assert_eq!(t, t.transpose());
        let t6 = jw_hopping_matrix(&XYChain::periodic(6).unwrap());
        assert_eq!(t6[(0, 5)], 1.0);
        let t8 = jw_hopping_matrix(&XYChain::periodic(8).unwrap());
        assert_eq!(t8[(0, 7)], -1.0);
        assert!(XYChain::new(3, 1.0, Boundary::Open).is_err());
        assert!(XYChain::new(6, 0.0, Boundary::Open).is_err());
    }

    #[test]
    fn correlations_match_exact_diagonalization() {
        for n in [4, 6, 8, 10] {
            for boundary in [Boundary::Periodic, Boundary::Open] {
                for j in [1.0, -0.7] {
                    let chain = XYChain::new(n, j, boundary).unwrap();
                    let ed = exact_ground_state(&chain).unwrap();
                    assert!((ed.energy - ground_state_energy(&chain)).abs() < 1e-10, "N={n} {boundary:?}");
                    let cf = ground_state_correlations(&chain).unwrap();
                    assert!((ed.correlations() - &cf).abs().max() < 1e-10, "N={n} {boundary:?} J={j}");
                    for l in 1..n {
                        assert!((ed.entropy(l) - entanglement_entropy(&cf, l).unwrap()).abs() < 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn wrong_sector_is_not_the_ground_state() {
        let chain = XYChain::periodic(8).unwrap();
        let wrong = chain.with_sector(ParitySector::Odd);
        // the other sector has a degenerate Fermi level at half filling
        assert!(matches!(ground_state_correlations(&wrong), Err(ChainError::DegenerateFermiLevel(_))));
    }

    #[test]
    fn half_filling_and_single_site() {
        let chain = XYChain::periodic(16).unwrap();
        let c = ground_state_correlations(&chain).unwrap();
        for k in 0..16 {
            assert!((c[(k, k)] - 0.5).abs() < 1e-12);
        }
        assert!((c.trace() - 8.0).abs() < 1e-10);
        assert!((entanglement_entropy(&c, 1).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!(correlation_spectrum_ok(&c, 1e-10));
        for l in 1..16 {
            let a = entanglement_entropy(&c, l).unwrap();
            let b = entanglement_entropy(&c, 16 - l).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
        let s: Vec<f64> = (1..=8).map(|l| entanglement_entropy(&c, l).unwrap()).collect();
        assert!(s.windows(2).all(|w| w[1] > w[0] - 1e-12));
    }

    #[test]
    fn approaches_infinite_kernel() {
        let chain = XYChain::periodic(400).unwrap();
        let c = ground_state_correlations(&chain).unwrap();
        for d in 0..6 {
            // the JW string used here differs from the standard one by (-1)^(m+n)
            let gauge = if d % 2 == 0 { 1.0 } else { -1.0 };
            assert!((c[(100, 100 + d)] * gauge - infinite_chain_kernel(d as i64)).abs() < 1e-3);
        }
    }

    #[test]
    fn central_charge_close_to_one() {
        let fit = central_charge_fit(128, 8, 64).unwrap();
        assert!((fit.c - 1.0).abs() < 0.05, "c = {}", fit.c);
        assert!(matches!(central_charge_fit(64, 4, 7), Err(ChainError::TooFewPoints(4))));
        let flat: Vec<EntropyPoint> = (4..12).map(|l| EntropyPoint { l, chord: chord(64, l), entropy: 0.0 }).collect();
        assert!(matches!(fit_central_charge(flat), Err(ChainError::ZeroVariance)));
    }

    #[test]
    fn bilinear_examples() {
        let h = CMat::from_fn(2, 2, |i, j| if i == j { c(0.0, 0.0) } else { c(1.0, 0.0) });
        let s = diagonalize_bilinear(&BilinearHamiltonian::new(h)).unwrap();
        assert!((s.energies[0] + 1.0).abs() < 1e-15 && (s.energies[1] - 1.0).abs() < 1e-15);
        let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.5, 0.0), c(-2.0, 0.0), c(3.0, 0.0)]));
        let s = diagonalize_bilinear(&BilinearHamiltonian::new(d)).unwrap();
        assert_eq!(s.energies, vec![-2.0, 0.5, 3.0]);
        assert!(unitarity_residual(&s.transform) < 1e-15);
        let bad = CMat::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, 0.0));
        assert!(matches!(diagonalize_bilinear(&BilinearHamiltonian::new(bad)), Err(ChainError::NotHermitian(_))));
        let mut p = BilinearHamiltonian::new(CMat::identity(2, 2));
        p.pairing = Some(CMat::identity(2, 2));
        assert!(matches!(diagonalize_bilinear(&p), Err(ChainError::Unsupported("pairing"))));
    }

    #[test]
    fn tower_report_sees_both_conventions() {
        let spins = [0.0, 0.5, 1.0, 1.5];
        let e: Vec<f64> = spins.iter().map(|s| 2.0 * (s + 0.5)).collect();
        let r = tower_consistency(&e, &spins, 2.0);
        assert!(r.product_residual < 1e-15 && r.quotient_residual > 1.0);
    }

    #[test]
    fn cyclic_examples() {
        assert_eq!(cyclic_spectrum(0.0, 1.0).map(|v| (v * 1e12).round() / 1e12), [-2.0, 0.0, 0.0, 2.0]);
        assert_eq!(cyclic_spectrum(0.7, 0.0), [0.7; 4]);
        let direct = real_spectrum(&cyclic_matrix(1.0, 0.5, false));
        let want = [0.0, 1.0, 1.0, 2.0];
        for k in 0..4 {
            assert!((direct[k] - want[k]).abs() < 1e-12);
            assert!((cyclic_spectrum(1.0, 0.5)[k] - want[k]).abs() < 1e-12);
        }
        let ph = cyclic_phase_spectrum(0.0, 0.0);
        assert!((ph[3] - 1.5 * PI).abs() < 1e-12);
    }
}

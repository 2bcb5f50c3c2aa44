//! Two-qubit Cartan (KAK) analysis in the magic basis, Makhlin invariants,
//! 3-CNOT synthesis over the ququart gate set, and the su(2) closure test.
//!
//! Internal coordinates `(x, y, z)` parametrize `A = exp(i(x XX + y YY + z ZZ))`.
//! Reported [`CartanCoords`] are doubled, so CNOT sits at `(pi/2, 0, 0)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::{cnot_ba, hadamard, kron, on_b, rx, rz, Gate, QuquartError};
use crate::linalg::{c, diag, eye, from_rows, phase_distance, r, unitarity_residual, CMat, C64, ONE, ZERO};

pub const UNITARY_TOL: f64 = 1e-9;
/// Tolerance for deciding the CNOT class from canonical coordinates.
pub const CLASS_TOL: f64 = 1e-9;

/// Sign of `XX`, `YY`, `ZZ` on each magic-basis vector.
const SIGNS: [[f64; 4]; 3] = [[1.0, -1.0, 1.0, -1.0], [-1.0, 1.0, 1.0, -1.0], [1.0, 1.0, -1.0, -1.0]];

pub fn magic_basis() -> CMat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (o, i, z) = (r(h), c(0.0, h), ZERO);
    from_rows(4, 4, &[o, i, z, z, z, z, i, o, z, z, i, -o, o, -i, z, z])
}

/// `exp(i(x XX + y YY + z ZZ))`, built from its magic-basis diagonal.
pub fn canonical_gate(x: f64, y: f64, z: f64) -> CMat {
    let d: Vec<C64> = (0..4)
        .map(|j| C64::from_polar(1.0, x * SIGNS[0][j] + y * SIGNS[1][j] + z * SIGNS[2][j]))
        .collect();
    let b = magic_basis();
    &b * diag(&d) * b.adjoint()
}

fn check_unitary(u: &CMat) -> Result<(), QuquartError> {
    if u.nrows() != 4 || u.ncols() != 4 {
        return Err(QuquartError::BadShape(4));
    }
    let res = unitarity_residual(u);
    if res > UNITARY_TOL {
        return Err(QuquartError::NotUnitary(res));
    }
    Ok(())
}

fn det4(u: &CMat) -> C64 {
    u.determinant()
}

/// One decomposition `U = phase * K1 * A(x, y, z) * K2` with `K1`, `K2` local.
#[derive(Debug, Clone)]
pub struct KakCandidate {
    pub phase: C64,
    pub k1: CMat,
    pub coords: [f64; 3],
    pub k2: CMat,
}

impl KakCandidate {
    pub fn reconstruct(&self) -> CMat {
        &self.k1 * canonical_gate(self.coords[0], self.coords[1], self.coords[2]) * &self.k2 * self.phase
    }
}

fn wrap(t: f64) -> f64 {
    (t + PI).rem_euclid(2.0 * PI) - PI
}

/// Simultaneously diagonalize the commuting real symmetric parts of `m`.
fn real_eigenbasis(m: &CMat) -> Result<Matrix4<f64>, QuquartError> {
    let re = Matrix4::from_fn(|i, j| m[(i, j)].re);
    let im = Matrix4::from_fn(|i, j| m[(i, j)].im);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6b616b);
    for _ in 0..100 {
        let (c1, c2): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let p = (re * c1 + im * c2).symmetric_eigen().eigenvectors;
        let dr = p.transpose() * re * p;
        let di = p.transpose() * im * p;
        let off = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| dr[(i, j)].abs().max(di[(i, j)].abs()))
            .fold(0.0, f64::max);
        if off < 1e-12 {
            return Ok(p);
        }
    }
    Err(QuquartError::Numerical("magic-basis eigendecomposition did not converge".into()))
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|k| p.contains(&k)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Every KAK decomposition reachable by permuting the magic-basis eigenvectors
/// and shifting an even number of half-angles by pi (192 in total).
pub fn kak_candidates(u: &CMat) -> Result<Vec<KakCandidate>, QuquartError> {
    check_unitary(u)?;
    let ph = det4(u).powf(0.25);
    let v = u / ph;
    let b = magic_basis();
    let vb = b.adjoint() * &v * &b;
    let m = vb.transpose() * &vb;
    let mut p = real_eigenbasis(&m)?;
    if p.determinant() < 0.0 {
        p.column_mut(0).neg_mut();
    }
    let pc = CMat::from_fn(4, 4, |i, j| r(p[(i, j)]));
    let dm = pc.transpose() * &m * &pc;
    let mut lam: [f64; 4] = std::array::from_fn(|j| dm[(j, j)].arg() / 2.0);
    if wrap(lam.iter().sum::<f64>()).abs() > 1.0 {
        lam[0] += PI;
    }
    let solve = Matrix4::from_fn(|j, k| if k == 0 { 1.0 } else { SIGNS[k - 1][j] })
        .try_inverse()
        .expect("sign matrix is invertible");

    let mut out = Vec::with_capacity(192);
    for perm in permutations4() {
        for mask in 0u8..16 {
            if mask.count_ones() % 2 == 1 {
                continue;
            }
            let mut pp = CMat::from_fn(4, 4, |i, j| pc[(i, perm[j])]);
            let l: [f64; 4] = std::array::from_fn(|j| lam[perm[j]] + if mask >> j & 1 == 1 { PI } else { 0.0 });
            if pp.map(|z| z.re).determinant() < 0.0 {
                for i in 0..4 {
                    pp[(i, 0)] = -pp[(i, 0)];
                }
            }
            let o1 = &vb * &pp * diag(&l.map(|t| C64::from_polar(1.0, -t)));
            let sol = solve * Vector4::from(l);
            let k1 = &b * o1 * b.adjoint();
            let k2 = &b * pp.transpose() * b.adjoint();
            out.push(KakCandidate {
                phase: ph * C64::from_polar(1.0, sol[0]),
                k1,
                coords: [sol[1], sol[2], sol[3]],
                k2,
            });
        }
    }
    Ok(out)
}

/// Reduce `(x, y, z)` to the chamber `pi/4 >= x >= y >= |z|`, sign carried by z.
pub fn canonicalize(v: [f64; 3]) -> [f64; 3] {
    let mut w = v.map(|t| {
        let s = (t + FRAC_PI_4).rem_euclid(FRAC_PI_2) - FRAC_PI_4;
        // land boundary values on +pi/4
        if (s + FRAC_PI_4).abs() < 1e-12 {
            FRAC_PI_4
        } else {
            s
        }
    });
    w.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).expect("finite coordinates"));
    if w[0] < 0.0 {
        w[0] = -w[0];
        w[2] = -w[2];
    }
    if w[1] < 0.0 {
        w[1] = -w[1];
        w[2] = -w[2];
    }
    if (w[0] - FRAC_PI_4).abs() < 1e-12 {
        w[2] = w[2].abs();
    }
    w
}

/// Signed internal chamber coordinates of `u`.
pub fn chamber_coords(u: &CMat) -> Result<[f64; 3], QuquartError> {
    let cand = kak_candidates(u)?;
    Ok(canonicalize(cand[0].coords))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CartanCoords {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl CartanCoords {
    pub fn is_local(&self, tol: f64) -> bool {
        self.c1.abs() <= tol && self.c2.abs() <= tol && self.c3.abs() <= tol
    }

    pub fn max_diff(&self, o: &CartanCoords) -> f64 {
        (self.c1 - o.c1).abs().max((self.c2 - o.c2).abs()).max((self.c3 - o.c3).abs())
    }
}

/// Doubled chamber coordinates in `[0, pi/2]^3`, ordered `c1 >= c2 >= c3`.
pub fn cartan_coords(u: &CMat) -> Result<CartanCoords, QuquartError> {
    let [x, y, z] = chamber_coords(u)?;
    Ok(CartanCoords { c1: 2.0 * x, c2: 2.0 * y, c3: 2.0 * z.abs() })
}

/// Makhlin invariants `G1 = tr^2(m) / (16 det U)` and
/// `G2 = (tr^2(m) - tr(m^2)) / (4 det U)` with `m = U_B^T U_B`.
pub fn makhlin_invariants(u: &CMat) -> Result<(C64, f64), QuquartError> {
    check_unitary(u)?;
    let b = magic_basis();
    let ub = b.adjoint() * u * &b;
    let m = ub.transpose() * &ub;
    let d = det4(u);
    let t = m.trace();
    let t2 = (&m * &m).trace();
    Ok((t * t / (d * 16.0), ((t * t - t2) / (d * 4.0)).re))
}

/// Number of CNOTs needed for the class of canonical coordinates `v`.
pub fn cnot_class(v: [f64; 3]) -> usize {
    let [x, y, z] = v;
    if x.abs() < CLASS_TOL && y.abs() < CLASS_TOL && z.abs() < CLASS_TOL {
        0
    } else if (x - FRAC_PI_4).abs() < CLASS_TOL && y.abs() < CLASS_TOL && z.abs() < CLASS_TOL {
        1
    } else if z.abs() < CLASS_TOL {
        2
    } else {
        3
    }
}

/// Alternating layers `L0, C, L1, C, ..., Ln`; the product applies `L0` first.
struct Template {
    locals: Vec<CMat>,
}

impl Template {
    fn unitary(&self) -> CMat {
        let c = cnot_ba();
        let mut u = self.locals[0].clone();
        for l in &self.locals[1..] {
            u = l * &c * u;
        }
        u
    }
}

fn ry(t: f64) -> CMat {
    let (s, co) = (t / 2.0).sin_cos();
    from_rows(2, 2, &[r(co), r(-s), r(s), r(co)])
}

fn template_for(v: [f64; 3]) -> Template {
    let [x, y, z] = v;
    let id = eye(4);
    match cnot_class(v) {
        0 => Template { locals: vec![id] },
        1 => Template { locals: vec![id.clone(), id] },
        // C (e^{iyZ} (x) e^{ixX}) C = exp(i y ZZ) exp(i x XX)
        2 => {
            let mid = kron(&rz(-2.0 * y), &rx(-2.0 * x));
            Template { locals: vec![id.clone(), mid, id] }
        }
        _ => {
            let hh = kron(&hadamard(), &hadamard());
            let (a, b, cc) = (x, y, -z);
            let first = on_b(&ry(2.0 * b - FRAC_PI_2));
            let second = kron(&rz(2.0 * cc - FRAC_PI_2), &ry(FRAC_PI_2 - 2.0 * a));
            Template { locals: vec![id.clone(), &hh * first, second * &hh, id] }
        }
    }
}

/// Split a local 4x4 unitary into `k (x) k'` (phase shared arbitrarily).
pub fn factor_local(l: &CMat) -> (CMat, CMat) {
    let block = |i: usize, j: usize| l.view((2 * i, 2 * j), (2, 2)).into_owned();
    let (bi, bj) = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .max_by(|&(i, j), &(k, m)| block(i, j).norm().partial_cmp(&block(k, m).norm()).expect("finite"))
        .expect("four blocks");
    let bm = block(bi, bj);
    let d = bm[(0, 0)] * bm[(1, 1)] - bm[(0, 1)] * bm[(1, 0)];
    let kb = bm / d.sqrt();
    let ka = CMat::from_fn(2, 2, |i, j| (kb.adjoint() * block(i, j)).trace() / 2.0);
    (ka, kb)
}

/// `k = phase * Rz(alpha) Rx(beta) Rz(gamma)`; returns `(alpha, beta, gamma)`.
pub fn euler_zxz(k: &CMat) -> (f64, f64, f64) {
    let d = k[(0, 0)] * k[(1, 1)] - k[(0, 1)] * k[(1, 0)];
    let v = k / d.sqrt();
    let (u00, u01) = (v[(0, 0)], v[(0, 1)]);
    let beta = 2.0 * u01.norm().atan2(u00.norm());
    let sum = if u00.norm() > 1e-12 { -2.0 * u00.arg() } else { 0.0 };
    let diff = if u01.norm() > 1e-12 { -2.0 * (u01 * c(0.0, 1.0)).arg() } else { 0.0 };
    ((sum + diff) / 2.0, beta, (sum - diff) / 2.0)
}

fn local_gates(l: &CMat) -> Vec<Gate> {
    let (ka, kb) = factor_local(l);
    let (a1, a2, a3) = euler_zxz(&ka);
    // Q_b uses X-Z-X: H kb H = Rz Rx Rz
    let h = hadamard();
    let (b1, b2, b3) = euler_zxz(&(&h * kb * &h));
    vec![Gate::Rza(a3), Gate::Rxa(a2), Gate::Rza(a1), Gate::Rxb(b3), Gate::Rzb(b2), Gate::Rxb(b1)]
}

#[derive(Debug, Clone, Serialize)]
pub struct Synthesis {
    pub gates: Vec<Gate>,
    pub cnots: usize,
    pub rotations: usize,
    pub coords: CartanCoords,
    /// Frobenius distance between U and the circuit after the best global phase.
    pub error: f64,
}

fn congruent(u: [f64; 3], t: [f64; 3], tol: f64) -> bool {
    (0..3).all(|k| {
        let d = (u[k] - t[k]).rem_euclid(FRAC_PI_2);
        d.min(FRAC_PI_2 - d) < tol
    })
}

/// At most three `CNOT_ba` with Euler-decomposed single-qubit layers:
/// `Rz`/`Rx` on `Q_a` and `Rx`/`Rz` on `Q_b`, where `Rx_a = H_a Rz_a H_a`
/// and `Rz_b = H_b Rx_b H_b`.
pub fn synthesize_su4(u: &CMat) -> Result<Synthesis, QuquartError> {
    let cu = kak_candidates(u)?;
    let uc = &cu[0];
    let v = canonicalize(uc.coords);
    let tpl = template_for(v);
    let t = tpl.unitary();
    let ct = kak_candidates(&t)?;
    let tc = ct
        .iter()
        .find(|c| congruent(uc.coords, c.coords, 1e-6))
        .ok_or_else(|| QuquartError::Numerical("no template decomposition matches the target class".into()))?;
    // A(u) = A(t) * delta with delta a product of (i XX), (i YY), (i ZZ): local.
    let delta = canonical_gate(uc.coords[0] - tc.coords[0], uc.coords[1] - tc.coords[1], uc.coords[2] - tc.coords[2]);
    let left = &uc.k1 * tc.k1.adjoint();
    let right = tc.k2.adjoint() * delta * &uc.k2;

    let n = tpl.locals.len();
    let mut layers = tpl.locals.clone();
    layers[0] = &layers[0] * right;
    layers[n - 1] = left * &layers[n - 1];

    let mut gates = Vec::new();
    for (i, l) in layers.iter().enumerate() {
        if i > 0 {
            gates.push(Gate::CnotBA);
        }
        gates.extend(local_gates(l));
    }
    let w = super::circuit_unitary(&gates);
    let error = phase_distance(u, &w);
    let cnots = n - 1;
    let [x, y, z] = v;
    Ok(Synthesis {
        rotations: gates.len() - cnots,
        gates,
        cnots,
        coords: CartanCoords { c1: 2.0 * x, c2: 2.0 * y, c3: 2.0 * z.abs() },
        error,
    })
}

/// Traceless part of the principal log of a 2x2 unitary as a real 3-vector `w`,
/// `log U = i phi - i (w . sigma)`.
fn su2_vector(u: &CMat) -> [f64; 3] {
    let d = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let v = u / d.sqrt();
    let cos_t = (v.trace() / 2.0).re.clamp(-1.0, 1.0);
    let t = cos_t.acos();
    let s = t.sin();
    if s.abs() < 1e-12 {
        return [0.0; 3];
    }
    // v = cos t - i sin t (n . sigma): n_x = i tr(v X) / (2 sin t), etc.
    let x = (v[(0, 1)] + v[(1, 0)]) * c(0.0, 0.5);
    let y = (v[(0, 1)] - v[(1, 0)]) * c(0.5, 0.0);
    let z = (v[(0, 0)] - v[(1, 1)]) * c(0.0, 0.5);
    [x.re * t / s, y.re * t / s, z.re * t / s]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Dimension of the real Lie algebra generated by the logarithms of the given
/// 2x2 unitaries (modulo the centre). 3 means the set generates SU(2).
pub fn su2_closure(generators: &[CMat]) -> usize {
    let mut span: Vec<[f64; 3]> = Vec::new();
    let add = |span: &mut Vec<[f64; 3]>, w: [f64; 3]| -> bool {
        let mut w = w;
        for b in span.iter() {
            let p: f64 = (0..3).map(|k| w[k] * b[k]).sum();
            for k in 0..3 {
                w[k] -= p * b[k];
            }
        }
        let n = w.iter().map(|t| t * t).sum::<f64>().sqrt();
        if n > 1e-9 {
            span.push(w.map(|t| t / n));
            true
        } else {
            false
        }
    };
    for g in generators {
        add(&mut span, su2_vector(g));
    }
    loop {
        let cur = span.clone();
        let mut grew = false;
        for i in 0..cur.len() {
            for j in i + 1..cur.len() {
                grew |= add(&mut span, cross(cur[i], cur[j]));
            }
        }
        if !grew {
            return span.len();
        }
    }
}

/// Pauli X as a 2x2 matrix, for closure checks.
pub fn pauli_x2() -> CMat {
    from_rows(2, 2, &[ZERO, ONE, ONE, ZERO])
}

/// Pauli Z as a 2x2 matrix, for closure checks.
pub fn pauli_z2() -> CMat {
    from_rows(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Locality test used by the property tests: is `u` a tensor product?
pub fn local_residual(u: &CMat) -> f64 {
    let (ka, kb) = factor_local(u);
    (u - kron(&ka, &kb)).norm()
}

/// The full local group used for invariance checks.
pub fn random_local<R: Rng + ?Sized>(rng: &mut R) -> CMat {
    kron(&crate::linalg::haar_unitary(2, rng), &crate::linalg::haar_unitary(2, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_unitary, max_abs};

    fn swap() -> CMat {
        let mut m = CMat::zeros(4, 4);
        for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            m[(i, j)] = ONE;
        }
        m
    }

    #[test]
    fn magic_basis_diagonalizes_pauli_pairs() {
        let b = magic_basis();
        assert!(unitarity_residual(&b) < 1e-15);
        let x = pauli_x2();
        let z = pauli_z2();
        let y = from_rows(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]);
        for (k, p) in [&x, &y, &z].into_iter().enumerate() {
            let d = b.adjoint() * kron(p, p) * &b;
            for i in 0..4 {
                for j in 0..4 {
                    let want = if i == j { SIGNS[k][i] } else { 0.0 };
                    assert!((d[(i, j)] - r(want)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn all_candidates_reconstruct() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..3 {
            let u = haar_unitary(4, &mut rng);
            let cand = kak_candidates(&u).unwrap();
            assert_eq!(cand.len(), 192);
            for k in &cand {
                assert!(max_abs(&(k.reconstruct() - &u)) < 1e-12);
                assert!(local_residual(&k.k1) < 1e-12 && local_residual(&k.k2) < 1e-12);
            }
        }
    }

    #[test]
    fn coordinates_of_named_gates() {
        let cn = cartan_coords(&cnot_ba()).unwrap();
        assert!(cn.max_diff(&CartanCoords { c1: FRAC_PI_2, c2: 0.0, c3: 0.0 }) < 1e-9);
        assert!(cartan_coords(&eye(4)).unwrap().is_local(1e-12));
        let sw = cartan_coords(&swap()).unwrap();
        assert!(sw.max_diff(&CartanCoords { c1: FRAC_PI_2, c2: FRAC_PI_2, c3: FRAC_PI_2 }) < 1e-9);
    }

    #[test]
    fn makhlin_of_named_gates() {
        let (g1, g2) = makhlin_invariants(&swap()).unwrap();
        assert!((g1 - r(-1.0)).norm() < 1e-12 && (g2 + 3.0).abs() < 1e-12);
        let (g1, g2) = makhlin_invariants(&cnot_ba()).unwrap();
        assert!(g1.norm() < 1e-12 && (g2 - 1.0).abs() < 1e-12);
        let (g1, g2) = makhlin_invariants(&eye(4)).unwrap();
        assert!((g1 - ONE).norm() < 1e-12 && (g2 - 3.0).abs() < 1e-12);
    }

    /// Invariants from chamber coordinates, a route independent of the traces.
    fn makhlin_from_coords(v: [f64; 3]) -> (C64, f64) {
        let [a, b, cc] = v.map(|t| 2.0 * t);
        let cos2 = (a.cos() * b.cos() * cc.cos()).powi(2);
        let sin2 = (a.sin() * b.sin() * cc.sin()).powi(2);
        let g1 = c(cos2 - sin2, 0.25 * (2.0 * a).sin() * (2.0 * b).sin() * (2.0 * cc).sin());
        let g2 = 4.0 * cos2 - 4.0 * sin2 - (2.0 * a).cos() * (2.0 * b).cos() * (2.0 * cc).cos();
        (g1, g2)
    }

    #[test]
    fn makhlin_matches_coordinate_formula() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let u = haar_unitary(4, &mut rng);
            let (g1, g2) = makhlin_invariants(&u).unwrap();
            let (h1, h2) = makhlin_from_coords(chamber_coords(&u).unwrap());
            assert!((g1 - h1).norm() < 1e-10 && (g2 - h2).abs() < 1e-10);
            let w = random_local(&mut rng) * &u * random_local(&mut rng);
            let (w1, w2) = makhlin_invariants(&w).unwrap();
            assert!((g1 - w1).norm() < 1e-10 && (g2 - w2).abs() < 1e-10);
        }
    }

    #[test]
    fn template_has_requested_class() {
        for v in [[0.3, 0.2, 0.1], [0.7, 0.5, -0.2], [0.1, 0.05, 0.02], [0.6, 0.3, 0.0]] {
            let want = canonicalize(v);
            let got = chamber_coords(&template_for(want).unitary()).unwrap();
            for k in 0..3 {
                assert!((got[k] - want[k]).abs() < 1e-9, "{v:?}: {got:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn euler_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let k = haar_unitary(2, &mut rng);
            let (a, b, g) = euler_zxz(&k);
            assert!(phase_distance(&k, &(rz(a) * rx(b) * rz(g))) < 1e-12);
        }
        let (a, b, g) = euler_zxz(&hadamard());
        assert!(phase_distance(&hadamard(), &(rz(a) * rx(b) * rz(g))) < 1e-12);
    }

    #[test]
    fn synthesis_examples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let local = random_local(&mut rng);
        let s = synthesize_su4(&local).unwrap();
        assert_eq!(s.cnots, 0);
        assert!(s.error < 1e-9);
        let s = synthesize_su4(&cnot_ba()).unwrap();
        assert_eq!(s.cnots, 1);
        assert!(s.error < 1e-9);
        let two = random_local(&mut rng) * canonical_gate(0.5, 0.2, 0.0) * random_local(&mut rng);
        let s = synthesize_su4(&two).unwrap();
        assert_eq!(s.cnots, 2);
        assert!(s.error < 1e-9);
        let s = synthesize_su4(&swap()).unwrap();
        assert_eq!(s.cnots, 3);
        assert!(s.error < 1e-9);
        for _ in 0..10 {
            let u = haar_unitary(4, &mut rng);
            let s = synthesize_su4(&u).unwrap();
            assert_eq!(s.cnots, 3);
            assert_eq!(s.rotations, 24);
            assert!(s.error < 1e-9, "error {}", s.error);
        }
        assert!(synthesize_su4(&(eye(4) * r(2.0))).is_err());
    }

    #[test]
    fn closure_ranks() {
        let h = hadamard();
        assert_eq!(su2_closure(&[h.clone(), pauli_z2()]), 3);
        assert_eq!(su2_closure(&[pauli_z2()]), 1);
        assert_eq!(su2_closure(&[h, pauli_x2()]), 3);
        assert_eq!(su2_closure(&[eye(2)]), 0);
        assert_eq!(su2_closure(&[rz(0.3), rz(1.1)]), 1);
    }
}

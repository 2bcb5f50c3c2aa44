//! Small dense complex-matrix helpers shared by every module.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Build a matrix from real row-major data.
pub fn from_real_rows(n: usize, m: usize, data: &[f64]) -> CMat {
    assert_eq!(data.len(), n * m);
    CMat::from_fn(n, m, |i, j| r(data[i * m + j]))
}

pub fn from_rows(n: usize, m: usize, data: &[C64]) -> CMat {
    assert_eq!(data.len(), n * m);
    CMat::from_fn(n, m, |i, j| data[i * m + j])
}

pub fn diag(d: &[C64]) -> CMat {
    let n = d.len();
    CMat::from_fn(n, n, |i, j| if i == j { d[i] } else { ZERO })
}

/// Kronecker product, `a` acting on the high (first) tensor factor.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn comm(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticomm(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn unitarity_residual(u: &CMat) -> f64 {
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - eye(n)))
}

pub fn hermiticity_residual(h: &CMat) -> f64 {
    max_abs(&(h - h.adjoint()))
}

/// Frobenius distance between `u` and `v` after removing the best global phase.
pub fn phase_distance(u: &CMat, v: &CMat) -> f64 {
    let ov: C64 = (v.adjoint() * u).trace();
    let ph = if ov.norm() > 1e-300 { ov / ov.norm() } else { ONE };
    (u - v * ph).norm()
}

/// Is `m` a monomial matrix (exactly one nonzero per row and column)?
/// Returns the column -> row map when it is.
pub fn monomial_map(m: &CMat, tol: f64) -> Option<Vec<usize>> {
    let n = m.ncols();
    let mut map = Vec::with_capacity(n);
    let mut seen = vec![false; m.nrows()];
    for j in 0..n {
        let rows: Vec<usize> = (0..m.nrows()).filter(|&i| m[(i, j)].norm() > tol).collect();
        if rows.len() != 1 || seen[rows[0]] {
            return None;
        }
        seen[rows[0]] = true;
        map.push(rows[0]);
    }
    Some(map)
}

/// Haar-distributed unitary from QR of a complex Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let z = CMat::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) / 2f64.sqrt()
    });
    let qr = z.qr();
    let mut q = qr.q();
    let rr = qr.r();
    for j in 0..n {
        let d = rr[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Render a complex matrix as CSV: a header line naming the basis, then rows of
/// `re,im` pairs.
pub fn complex_matrix_csv(m: &CMat, header: &[String]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut head = Vec::new();
    for h in header {
        head.push(format!("{h}.re"));
        head.push(format!("{h}.im"));
    }
    w.write_record(&head).expect("in-memory csv");
    for i in 0..m.nrows() {
        let mut row = Vec::new();
        for j in 0..m.ncols() {
            row.push(format!("{:.17e}", m[(i, j)].re));
            row.push(format!("{:.17e}", m[(i, j)].im));
        }
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

/// Parse a 4x4 (or any square) complex matrix from row-major `re,im` pairs.
/// Lines starting with a letter are treated as a header.
pub fn parse_complex_matrix_csv(text: &str) -> Result<CMat, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        if rec.iter().next().is_some_and(|f| f.chars().next().is_some_and(|ch| ch.is_alphabetic())) {
            continue;
        }
        let vals: Result<Vec<f64>, _> = rec.iter().map(|f| f.parse::<f64>()).collect();
        let vals = vals.map_err(|e| e.to_string())?;
        if vals.len() % 2 != 0 {
            return Err("row has an odd number of values; expected re,im pairs".into());
        }
        rows.push(vals.chunks(2).map(|p| c(p[0], p[1])).collect());
    }
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(format!("expected a square matrix, got {n} rows"));
    }
    Ok(CMat::from_fn(n, n, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn haar_is_unitary() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary(4, &mut rng);
        assert!(unitarity_residual(&u) < 1e-13);
    }

    #[test]
    fn csv_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let u = haar_unitary(3, &mut rng);
        let hdr: Vec<String> = (0..3).map(|k| format!("k{k}")).collect();
        let back = parse_complex_matrix_csv(&complex_matrix_csv(&u, &hdr)).unwrap();
        assert!(max_abs(&(back - u)) < 1e-15);
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let a = eye(2) * c(0.0, 1.0);
        assert!(phase_distance(&a, &eye(2)) < 1e-15);
    }
}

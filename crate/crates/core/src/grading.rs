//! The Klein four-group of grades, exchange signs and sector projectors.
//!
//! Everything here is exact bit arithmetic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradeError {
    #[error("unknown mode label `{0}` (expected L, R, A, B, +1 or -1)")]
    UnknownLabel(String),
    #[error("spin must be non-negative, got {0}")]
    NegativeSpin(String),
    #[error("spin must be a multiple of 1/2, got {0}")]
    NotHalfInteger(String),
    #[error("malformed grade literal `{0}`")]
    BadGrade(String),
    #[error("basis ordering must list all four grades exactly once")]
    BadBasis,
}

/// A grade `(a, b)` in Z2 x Z2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Grade {
    pub a: u8,
    pub b: u8,
}

impl Grade {
    pub const ZERO: Grade = Grade { a: 0, b: 0 };
    pub const ALL: [Grade; 4] = [
        Grade { a: 0, b: 0 },
        Grade { a: 0, b: 1 },
        Grade { a: 1, b: 0 },
        Grade { a: 1, b: 1 },
    ];

    /// Bits are reduced mod 2.
    pub const fn new(a: u8, b: u8) -> Grade {
        Grade { a: a & 1, b: b & 1 }
    }

    /// Index `2a + b`, the ququart label of this sector.
    pub const fn index(self) -> usize {
        (2 * self.a + self.b) as usize
    }

    pub const fn from_index(k: usize) -> Grade {
        Grade::new(((k >> 1) & 1) as u8, (k & 1) as u8)
    }

    pub const fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl std::ops::Add for Grade {
    type Output = Grade;
    fn add(self, o: Grade) -> Grade {
        grade_add(self, o)
    }
}

impl std::ops::AddAssign for Grade {
    fn add_assign(&mut self, o: Grade) {
        *self = grade_add(*self, o);
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.a, self.b)
    }
}

impl FromStr for Grade {
    type Err = GradeError;
    /// Accepts `"ab"` and `"(a,b)"`.
    fn from_str(s: &str) -> Result<Grade, GradeError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t.strip_prefix('(').and_then(|x| x.strip_suffix(')'));
        let bits: Vec<char> = match inner {
            Some(x) => {
                let parts: Vec<&str> = x.split(',').collect();
                if parts.len() != 2 || parts.iter().any(|p| p.len() != 1) {
                    return Err(GradeError::BadGrade(s.to_string()));
                }
                parts.iter().map(|p| p.chars().next().unwrap()).collect()
            }
            None => t.chars().collect(),
        };
        match bits.as_slice() {
            [x, y] if "01".contains(*x) && "01".contains(*y) => {
                Ok(Grade::new((*x == '1') as u8, (*y == '1') as u8))
            }
            _ => Err(GradeError::BadGrade(s.to_string())),
        }
    }
}

pub fn grade_add(g: Grade, h: Grade) -> Grade {
    Grade::new(g.a ^ h.a, g.b ^ h.b)
}

pub fn grade_dot(g: Grade, h: Grade) -> u8 {
    (g.a & h.a) ^ (g.b & h.b)
}

pub fn exchange_sign(g: Grade, h: Grade) -> i8 {
    if grade_dot(g, h) == 0 {
        1
    } else {
        -1
    }
}

/// Ordering of the four grades used to index every 4x4 output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeBasis {
    pub ordering: [Grade; 4],
}

impl Default for GradeBasis {
    fn default() -> Self {
        GradeBasis { ordering: Grade::ALL }
    }
}

impl GradeBasis {
    pub fn new(ordering: [Grade; 4]) -> Result<Self, GradeError> {
        let mut seen = [false; 4];
        for g in ordering {
            seen[g.index()] = true;
        }
        if seen.iter().all(|&s| s) {
            Ok(GradeBasis { ordering })
        } else {
            Err(GradeError::BadBasis)
        }
    }

    pub fn position(&self, g: Grade) -> usize {
        self.ordering.iter().position(|&h| h == g).expect("basis is a permutation")
    }

    pub fn header(&self) -> Vec<String> {
        self.ordering.iter().map(|g| g.to_string()).collect()
    }
}

pub type SignMatrix = [[i8; 4]; 4];

pub fn exchange_matrix(basis: &GradeBasis) -> SignMatrix {
    let mut m = [[0i8; 4]; 4];
    for (i, &g) in basis.ordering.iter().enumerate() {
        for (j, &h) in basis.ordering.iter().enumerate() {
            m[i][j] = exchange_sign(g, h);
        }
    }
    m
}

/// The 4x4 sign table as it appears in print, rows and columns in the
/// default ordering.
pub const PRINTED_EXCHANGE_MATRIX: SignMatrix = [
    [1, 1, 1, 1],
    [1, -1, -1, 1],
    [1, -1, -1, 1],
    [1, 1, 1, 1],
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellMismatch {
    pub row: Grade,
    pub col: Grade,
    pub printed: i8,
    pub formula: i8,
}

/// Cells where the printed table disagrees with `(-1)^{g.h}`.
pub fn exchange_matrix_audit() -> Vec<CellMismatch> {
    let basis = GradeBasis::default();
    let f = exchange_matrix(&basis);
    let mut out = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if f[i][j] != PRINTED_EXCHANGE_MATRIX[i][j] {
                out.push(CellMismatch {
                    row: basis.ordering[i],
                    col: basis.ordering[j],
                    printed: PRINTED_EXCHANGE_MATRIX[i][j],
                    formula: f[i][j],
                });
            }
        }
    }
    out
}

pub fn sign_matrix_csv(m: &SignMatrix, basis: &GradeBasis) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["grade".to_string()];
    head.extend(basis.header());
    w.write_record(&head).expect("in-memory csv");
    for (i, g) in basis.ordering.iter().enumerate() {
        let mut row = vec![g.to_string()];
        row.extend(m[i].iter().map(|v| v.to_string()));
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

/// Mode label: circular polarization (L = +1, R = -1) or waveguide family (A, B).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModeLabel {
    L,
    R,
    A,
    B,
}

impl ModeLabel {
    pub fn b_bit(self) -> u8 {
        match self {
            ModeLabel::L | ModeLabel::A => 0,
            ModeLabel::R | ModeLabel::B => 1,
        }
    }
}

impl FromStr for ModeLabel {
    type Err = GradeError;
    fn from_str(s: &str) -> Result<Self, GradeError> {
        match s.trim() {
            "L" | "l" | "+1" | "1" | "+" => Ok(ModeLabel::L),
            "R" | "r" | "-1" | "-" => Ok(ModeLabel::R),
            "A" | "a" => Ok(ModeLabel::A),
            "B" | "b" => Ok(ModeLabel::B),
            other => Err(GradeError::UnknownLabel(other.to_string())),
        }
    }
}

pub fn grade_of_mode(l: i64, sigma: ModeLabel) -> Grade {
    Grade::new(l.rem_euclid(2) as u8, sigma.b_bit())
}

/// Convenience wrapper taking the label as text.
pub fn grade_of_mode_str(l: i64, sigma: &str) -> Result<Grade, GradeError> {
    Ok(grade_of_mode(l, sigma.parse()?))
}

/// A non-negative half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Spin {
    pub twice: u32,
}

impl Spin {
    pub const fn from_twice(twice: u32) -> Spin {
        Spin { twice }
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_multiple_of(2) {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for Spin {
    type Err = GradeError;
    fn from_str(s: &str) -> Result<Spin, GradeError> {
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| GradeError::NotHalfInteger(s.into()))?;
            let d: i64 = d.trim().parse().map_err(|_| GradeError::NotHalfInteger(s.into()))?;
            if n < 0 {
                return Err(GradeError::NegativeSpin(s.into()));
            }
            return match d {
                1 => Ok(Spin { twice: 2 * n as u32 }),
                2 => Ok(Spin { twice: n as u32 }),
                _ => Err(GradeError::NotHalfInteger(s.into())),
            };
        }
        if t.starts_with('-') {
            return Err(GradeError::NegativeSpin(s.into()));
        }
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        let n: u32 = int.parse().map_err(|_| GradeError::NotHalfInteger(s.into()))?;
        let half = match frac.trim_end_matches('0') {
            "" => 0,
            "5" => 1,
            _ => return Err(GradeError::NotHalfInteger(s.into())),
        };
        Ok(Spin { twice: 2 * n + half })
    }
}

/// Spin to grade: 0 -> 00, 1/2 -> 10, 1 -> 01, 3/2 -> 11, repeating with period 2.
pub fn grade_of_spin(s: Spin) -> Grade {
    match s.twice % 4 {
        0 => Grade::new(0, 0),
        1 => Grade::new(1, 0),
        2 => Grade::new(0, 1),
        _ => Grade::new(1, 1),
    }
}

/// Lowest spin in the truncated four-level tower carrying grade `g`.
pub fn tower_spin_of_grade(g: Grade) -> Spin {
    (0..4)
        .map(Spin::from_twice)
        .find(|&s| grade_of_spin(s) == g)
        .expect("grade map is onto")
}

/// Diagonal 0/1 indicator for `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Projector {
    pub grade: Grade,
    pub matrix: [[u8; 4]; 4],
}

impl Projector {
    pub fn mul(&self, o: &Projector) -> [[u8; 4]; 4] {
        let mut m = [[0u8; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).map(|k| self.matrix[i][k] * o.matrix[k][j]).sum();
            }
        }
        m
    }

    pub fn to_cmat(&self) -> crate::linalg::CMat {
        crate::linalg::CMat::from_fn(4, 4, |i, j| crate::linalg::r(self.matrix[i][j] as f64))
    }
}

pub fn projector(g: Grade, basis: &GradeBasis) -> Projector {
    let mut m = [[0u8; 4]; 4];
    let k = basis.position(g);
    m[k][k] = 1;
    Projector { grade: g, matrix: m }
}

/// One printed row of the spin-pair braiding table: spins, the printed dot
/// product and the printed sign in front of theta.
#[derive(Debug, Clone, Copy)]
pub struct PrintedBraidRow {
    pub s: Spin,
    pub s2: Spin,
    pub dot: u8,
    pub sign: i8,
}

pub const PRINTED_BRAID_TABLE: [PrintedBraidRow; 5] = [
    PrintedBraidRow { s: Spin::from_twice(0), s2: Spin::from_twice(0), dot: 0, sign: 1 },
    PrintedBraidRow { s: Spin::from_twice(0), s2: Spin::from_twice(1), dot: 0, sign: 1 },
    PrintedBraidRow { s: Spin::from_twice(1), s2: Spin::from_twice(1), dot: 1, sign: -1 },
    PrintedBraidRow { s: Spin::from_twice(2), s2: Spin::from_twice(0), dot: 0, sign: 1 },
    PrintedBraidRow { s: Spin::from_twice(1), s2: Spin::from_twice(2), dot: 1, sign: -1 },
];

#[derive(Debug, Clone, Serialize)]
pub struct BraidRowAudit {
    pub s: String,
    pub s2: String,
    pub printed_dot: u8,
    pub formula_dot: u8,
    pub printed_sign: i8,
    pub formula_sign: i8,
    pub agrees: bool,
}

pub fn braid_table_audit() -> Vec<BraidRowAudit> {
    PRINTED_BRAID_TABLE
        .iter()
        .map(|row| {
            let d = grade_dot(grade_of_spin(row.s), grade_of_spin(row.s2));
            let sign = if d == 0 { 1 } else { -1 };
            BraidRowAudit {
                s: row.s.to_string(),
                s2: row.s2.to_string(),
                printed_dot: row.dot,
                formula_dot: d,
                printed_sign: row.sign,
                formula_sign: sign,
                agrees: d == row.dot && sign == row.sign,
            }
        })
        .collect()
}

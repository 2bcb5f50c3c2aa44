//! The spin-orbit ququart: one photon carrying an OAM-parity qubit `Q_a` (high
//! tensor factor) and a helicity qubit `Q_b` (low factor), index `k = 2a + b`.
//!
//! | k | mode          | grade |
//! |---|---------------|-------|
//! | 0 | l = 0, A      | 00    |
//! | 1 | l = 0, B      | 01    |
//! | 2 | l = +1, s = +1 | 10   |
//! | 3 | l = -1, s = -1 | 11   |

pub mod cartan;
pub mod jones;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::grading::Grade;
use crate::linalg::{c, diag, eye, from_real_rows, from_rows, kron, max_abs, monomial_map, r, unitarity_residual, CMat, C64, I, ONE, ZERO};

pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuquartError {
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("gate `{0}` takes an angle parameter")]
    MissingAngle(String),
    #[error("gate `{0}` takes no parameter")]
    UnexpectedAngle(String),
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix must be {0}x{0}")]
    BadShape(usize),
    #[error("gate {index} (`{gate}`) changes the grade by {delta} and is not declared an interface")]
    UndeclaredGradeChange { index: usize, gate: String, delta: Grade },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuquartState {
    pub amps: [C64; 4],
}

impl QuquartState {
    pub fn new(amps: [C64; 4]) -> Result<Self, QuquartError> {
        let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(QuquartError::NotNormalized(n));
        }
        Ok(QuquartState { amps })
    }

    pub fn basis(k: usize) -> Self {
        let mut amps = [ZERO; 4];
        amps[k] = ONE;
        QuquartState { amps }
    }

    pub fn from_grade(g: Grade) -> Self {
        Self::basis(g.index())
    }

    pub fn apply(&self, u: &CMat) -> Self {
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| u[(i, j)] * self.amps[j]).sum();
        }
        QuquartState { amps: out }
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.amps.map(|z| z.norm_sqr())
    }

    /// The grade if the state lies in one sector (up to `tol`).
    pub fn definite_grade(&self, tol: f64) -> Option<Grade> {
        let p = self.probabilities();
        let k = (0..4).find(|&k| (p[k] - 1.0).abs() <= tol)?;
        Some(Grade::from_index(k))
    }
}

impl fmt::Display for QuquartState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .amps
            .iter()
            .enumerate()
            .map(|(k, z)| format!("{:+.6}{:+.6}i|{}>", z.re, z.im, Grade::from_index(k)))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

fn pauli_x() -> CMat {
    from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

fn pauli_z() -> CMat {
    from_real_rows(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn hadamard() -> CMat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    from_real_rows(2, 2, &[h, h, h, -h])
}

pub fn rz(theta: f64) -> CMat {
    diag(&[C64::from_polar(1.0, -theta / 2.0), C64::from_polar(1.0, theta / 2.0)])
}

pub fn rx(theta: f64) -> CMat {
    let (s, co) = (theta / 2.0).sin_cos();
    from_rows(2, 2, &[r(co), c(0.0, -s), c(0.0, -s), r(co)])
}

pub fn on_a(m: &CMat) -> CMat {
    kron(m, &eye(2))
}

pub fn on_b(m: &CMat) -> CMat {
    kron(&eye(2), m)
}

/// `|a, b> -> |a xor b, b>`.
pub fn cnot_ba() -> CMat {
    let mut m = CMat::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            m[(2 * (a ^ b) + b, 2 * a + b)] = ONE;
        }
    }
    m
}

/// `|a, b> -> |a, a xor b>`.
pub fn cnot_ab() -> CMat {
    let hh = kron(&hadamard(), &hadamard());
    &hh * cnot_ba() * &hh
}

/// Clock `sigma_c = diag(1, i, -1, -i)`.
pub fn clock() -> CMat {
    diag(&[ONE, I, -ONE, -I])
}

/// Shift as printed: ones on the superdiagonal and in the bottom-left corner,
/// so `tau |k> = |k - 1>`.
pub fn shift() -> CMat {
    from_real_rows(4, 4, &[0., 1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 1., 1., 0., 0., 0.])
}

/// A named gate of the ququart model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Gate {
    Xb,
    Hb,
    Za,
    Ha,
    CnotBA,
    QplatePi,
    CnotAB,
    Xa,
    Zb,
    Sb,
    SigmaFlip,
    Tau,
    Clock,
    Rza(f64),
    Rxa(f64),
    Rzb(f64),
    Rxb(f64),
    /// Half-wave plate on `Q_b`, fast axis in degrees.
    Hwp(f64),
    /// Quarter-wave plate on `Q_b`, fast axis in degrees.
    Qwp(f64),
}

/// Names accepted by [`Gate::parse`], with whether they take an angle.
pub const GATE_NAMES: [(&str, bool); 19] = [
    ("Xb", false),
    ("Hb", false),
    ("Za", false),
    ("Ha", false),
    ("CNOTba", false),
    ("qplate_pi", false),
    ("CNOTab", false),
    ("Xa", false),
    ("Zb", false),
    ("Sb", false),
    ("SigmaFlip", false),
    ("Tau", false),
    ("Clock", false),
    ("Rza", true),
    ("Rxa", true),
    ("Rzb", true),
    ("Rxb", true),
    ("HWP", true),
    ("QWP", true),
];

impl Gate {
    /// The set `{X_b, H_b, Z_a, H_a, CNOT_ba}`.
    pub const DETERMINISTIC: [Gate; 5] = [Gate::Xb, Gate::Hb, Gate::Za, Gate::Ha, Gate::CnotBA];

    pub fn parse(name: &str, angle: Option<f64>) -> Result<Gate, QuquartError> {
        let plain = |g: Gate| match angle {
            None => Ok(g),
            Some(_) => Err(QuquartError::UnexpectedAngle(name.to_string())),
        };
        let angled = |f: fn(f64) -> Gate| match angle {
            Some(t) => Ok(f(t)),
            None => Err(QuquartError::MissingAngle(name.to_string())),
        };
        match name {
            "Xb" => plain(Gate::Xb),
            "Hb" => plain(Gate::Hb),
            "Za" => plain(Gate::Za),
            "Ha" => plain(Gate::Ha),
            "CNOTba" | "CNOT_ba" | "CNOT" => plain(Gate::CnotBA),
            "qplate_pi" | "qplate" => plain(Gate::QplatePi),
            "CNOTab" | "CNOT_ab" => plain(Gate::CnotAB),
            "Xa" => plain(Gate::Xa),
            "Zb" => plain(Gate::Zb),
            "Sb" => plain(Gate::Sb),
            "SigmaFlip" => plain(Gate::SigmaFlip),
            "Tau" => plain(Gate::Tau),
            "Clock" => plain(Gate::Clock),
            "Rza" => angled(Gate::Rza),
            "Rxa" => angled(Gate::Rxa),
            "Rzb" => angled(Gate::Rzb),
            "Rxb" => angled(Gate::Rxb),
            "HWP" => angled(Gate::Hwp),
            "QWP" => angled(Gate::Qwp),
            _ => Err(QuquartError::UnknownGate(name.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::Xb => "Xb",
            Gate::Hb => "Hb",
            Gate::Za => "Za",
            Gate::Ha => "Ha",
            Gate::CnotBA => "CNOTba",
            Gate::QplatePi => "qplate_pi",
            Gate::CnotAB => "CNOTab",
            Gate::Xa => "Xa",
            Gate::Zb => "Zb",
            Gate::Sb => "Sb",
            Gate::SigmaFlip => "SigmaFlip",
            Gate::Tau => "Tau",
            Gate::Clock => "Clock",
            Gate::Rza(_) => "Rza",
            Gate::Rxa(_) => "Rxa",
            Gate::Rzb(_) => "Rzb",
            Gate::Rxb(_) => "Rxb",
            Gate::Hwp(_) => "HWP",
            Gate::Qwp(_) => "QWP",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rza(t) | Gate::Rxa(t) | Gate::Rzb(t) | Gate::Rxb(t) | Gate::Hwp(t) | Gate::Qwp(t) => Some(t),
            _ => None,
        }
    }

    pub fn matrix(&self) -> CMat {
        match *self {
            Gate::Xb => on_b(&pauli_x()),
            Gate::Hb => on_b(&hadamard()),
            Gate::Za => on_a(&pauli_z()),
            Gate::Ha => on_a(&hadamard()),
            Gate::CnotBA | Gate::QplatePi => cnot_ba(),
            Gate::CnotAB => cnot_ab(),
            Gate::Xa => on_a(&pauli_x()),
            Gate::Zb => on_b(&pauli_z()),
            Gate::Sb => on_b(&diag(&[ONE, I])),
            Gate::SigmaFlip => on_b(&jones::compensated_flip()),
            Gate::Tau => shift(),
            Gate::Clock => clock(),
            Gate::Rza(t) => on_a(&rz(t)),
            Gate::Rxa(t) => on_a(&rx(t)),
            Gate::Rzb(t) => on_b(&rz(t)),
            Gate::Rxb(t) => on_b(&rx(t)),
            Gate::Hwp(t) => on_b(&jones::hwp(t)),
            Gate::Qwp(t) => on_b(&jones::qwp(t)),
        }
    }

    /// Grade-changing gates whose flip is conditional; their delta is declared.
    fn declared_interface(&self) -> Option<Grade> {
        match self {
            Gate::CnotBA | Gate::QplatePi => Some(Grade::new(1, 0)),
            Gate::CnotAB => Some(Grade::new(0, 1)),
            Gate::Tau => Some(Grade::new(1, 1)),
            _ => None,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.angle() {
            Some(t) => write!(f, "{}({})", self.name(), t),
            None => f.write_str(self.name()),
        }
    }
}

impl FromStr for Gate {
    type Err = QuquartError;

    /// `Name` or `Name(angle)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.split_once('(') {
            Some((name, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| QuquartError::UnknownGate(s.to_string()))?;
                let t: f64 = inner.trim().parse().map_err(|_| QuquartError::UnknownGate(s.to_string()))?;
                Gate::parse(name.trim(), Some(t))
            }
            None => Gate::parse(s, None),
        }
    }
}

/// If `u` permutes the grade sectors by XOR with one fixed grade, that grade.
pub fn uniform_grade_shift(u: &CMat, tol: f64) -> Option<Grade> {
    let map = monomial_map(u, tol)?;
    let d = Grade::from_index(map[0]);
    (0..4).all(|k| map[k] ^ k == d.index()).then_some(d)
}

#[derive(Debug, Clone)]
pub struct GateOp {
    pub gate: Gate,
    pub matrix: CMat,
    pub grade_delta: Grade,
    /// Declared interface: allowed to change the grade in strict mode.
    pub interface: bool,
}

impl GateOp {
    pub fn new(gate: Gate) -> Self {
        let matrix = gate.matrix();
        let (grade_delta, interface) = match gate.declared_interface() {
            Some(d) => (d, true),
            // Superposing gates (H, x-rotations, QWP) have no definite shift and count as zero.
            None => (uniform_grade_shift(&matrix, 1e-12).unwrap_or(Grade::ZERO), false),
        };
        GateOp { gate, matrix, grade_delta, interface }
    }

    pub fn name(&self) -> String {
        self.gate.to_string()
    }

    pub fn declared(mut self) -> Self {
        self.interface = true;
        self
    }

    pub fn changes_grade(&self) -> bool {
        !self.grade_delta.is_zero()
    }
}

/// Look a gate up by name, e.g. `"Hb"` or `"Rza(0.5)"`.
pub fn gate(name: &str) -> Result<GateOp, QuquartError> {
    Ok(GateOp::new(name.parse()?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GradeMode {
    Strict,
    Permissive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub index: usize,
    pub gate: String,
    pub delta: Grade,
    pub interface: bool,
    pub cumulative: Grade,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LedgerStatus {
    /// No gate changed the grade.
    Conserving,
    /// Every undeclared flip is undone by a later one.
    Compensated,
    /// Undeclared flips are compensated; the remaining change goes through interfaces.
    ViaInterfaces,
    /// An undeclared flip is left standing; names the first such gate.
    Violated { gate: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradeLedger {
    pub entries: Vec<LedgerEntry>,
    pub charge: Grade,
    /// Per bit `(a, b)`: the uncompensated undeclared flip, if any.
    pub pending: [Option<usize>; 2],
}

impl Default for GradeLedger {
    fn default() -> Self {
        GradeLedger { entries: Vec::new(), charge: Grade::ZERO, pending: [None, None] }
    }
}

impl GradeLedger {
    pub fn record(&mut self, op: &GateOp) {
        let index = self.entries.len();
        self.charge += op.grade_delta;
        if !op.interface {
            for (bit, flips) in [op.grade_delta.a, op.grade_delta.b].into_iter().enumerate() {
                if flips == 1 {
                    self.pending[bit] = match self.pending[bit] {
                        Some(_) => None,
                        None => Some(index),
                    };
                }
            }
        }
        self.entries.push(LedgerEntry {
            index,
            gate: op.name(),
            delta: op.grade_delta,
            interface: op.interface,
            cumulative: self.charge,
        });
    }

    pub fn is_conserving(&self) -> bool {
        self.charge.is_zero()
    }

    pub fn interfaces(&self) -> Vec<usize> {
        self.entries.iter().filter(|e| e.interface && !e.delta.is_zero()).map(|e| e.index).collect()
    }

    pub fn status(&self) -> LedgerStatus {
        if let Some(gate) = self.pending.iter().flatten().min() {
            return LedgerStatus::Violated { gate: *gate };
        }
        if !self.interfaces().is_empty() {
            LedgerStatus::ViaInterfaces
        } else if self.entries.iter().any(|e| !e.delta.is_zero()) {
            LedgerStatus::Compensated
        } else {
            LedgerStatus::Conserving
        }
    }
}

/// Apply gates in order, tracking the grade ledger. Strict mode rejects a circuit
/// that leaves an undeclared flip uncompensated.
pub fn apply_circuit(
    ops: &[GateOp],
    state: &QuquartState,
    mode: GradeMode,
) -> Result<(QuquartState, GradeLedger), QuquartError> {
    let mut ledger = GradeLedger::default();
    let mut psi = state.clone();
    for op in ops {
        psi = psi.apply(&op.matrix);
        ledger.record(op);
    }
    if mode == GradeMode::Strict {
        if let LedgerStatus::Violated { gate } = ledger.status() {
            return Err(QuquartError::UndeclaredGradeChange {
                index: gate,
                gate: ops[gate].name(),
                delta: ops[gate].grade_delta,
            });
        }
    }
    Ok((psi, ledger))
}

/// Product of the gate matrices, first gate rightmost.
pub fn circuit_unitary(gates: &[Gate]) -> CMat {
    gates.iter().fold(eye(4), |acc, g| g.matrix() * acc)
}

#[derive(Debug, Clone)]
pub struct ClockShiftReport {
    pub sigma: CMat,
    pub tau: CMat,
    pub sigma4_residual: f64,
    pub tau4_residual: f64,
    pub commutation_residual: f64,
    pub tau_sigma_printed_residual: f64,
    pub sigma_tau_printed_residual: f64,
}

pub fn printed_tau_sigma() -> CMat {
    from_rows(4, 4, &[ZERO, I, ZERO, ZERO, ZERO, ZERO, -ONE, ZERO, ZERO, ZERO, ZERO, -I, ONE, ZERO, ZERO, ZERO])
}

pub fn printed_sigma_tau() -> CMat {
    from_rows(4, 4, &[ZERO, ONE, ZERO, ZERO, ZERO, ZERO, I, ZERO, ZERO, ZERO, ZERO, -ONE, -I, ZERO, ZERO, ZERO])
}

pub fn clock_shift() -> ClockShiftReport {
    let s = clock();
    let t = shift();
    let id = eye(4);
    let s4 = s.pow(4);
    let t4 = t.pow(4);
    ClockShiftReport {
        sigma4_residual: max_abs(&(s4 - &id)),
        tau4_residual: max_abs(&(t4 - &id)),
        commutation_residual: max_abs(&(&t * &s - &s * &t * I)),
        tau_sigma_printed_residual: max_abs(&(&t * &s - printed_tau_sigma())),
        sigma_tau_printed_residual: max_abs(&(&s * &t - printed_sigma_tau())),
        sigma: s,
        tau: t,
    }
}

#[derive(Debug, Clone)]
pub struct GradingOpsReport {
    pub p: CMat,
    pub q: CMat,
    /// `||sigma_c^2 - Q||`.
    pub sigma_sq_is_q: f64,
    /// `||sigma_c - P (1 (x) S)||`.
    pub sigma_is_p_s: f64,
    /// `||sigma_c - P Q||`; nonzero, the literal product is not the clock.
    pub literal_pq_residual: f64,
    /// Eigenvalue of P on each basis state.
    pub p_eigen: [f64; 4],
}

pub fn grading_ops() -> GradingOpsReport {
    let p = on_a(&pauli_z());
    let q = on_b(&pauli_z());
    let s = clock();
    let phase_s = on_b(&diag(&[ONE, I]));
    let p_eigen = [0, 1, 2, 3].map(|k| p[(k, k)].re);
    GradingOpsReport {
        sigma_sq_is_q: max_abs(&(&s * &s - &q)),
        sigma_is_p_s: max_abs(&(&s - &p * phase_s)),
        literal_pq_residual: max_abs(&(&s - &p * &q)),
        p_eigen,
        p,
        q,
    }
}

#[derive(Debug, Clone)]
pub struct ShiftAudit {
    /// `||CNOT_{a->b} H_a S_b - tau||` entrywise.
    pub claimed_residual: f64,
    pub claimed_is_permutation: bool,
    /// The verified circuit: X on `Q_b`, then `CNOT_ba`.
    pub circuit: Vec<Gate>,
    pub circuit_residual: f64,
    /// `||(circuit)^4 - 1||`.
    pub order_four_residual: f64,
}

pub fn shift_decomposition_audit() -> ShiftAudit {
    let claimed = cnot_ab() * on_a(&hadamard()) * on_b(&diag(&[ONE, I]));
    let circuit = vec![Gate::Xb, Gate::CnotBA];
    let u = circuit_unitary(&circuit);
    let four: Vec<Gate> = circuit.iter().cycle().take(8).copied().collect();
    ShiftAudit {
        claimed_residual: max_abs(&(&claimed - shift())),
        claimed_is_permutation: monomial_map(&claimed, 1e-12).is_some(),
        circuit_residual: max_abs(&(&u - shift())),
        order_four_residual: max_abs(&(circuit_unitary(&four) - eye(4))),
        circuit,
    }
}

/// Checks that every named gate is unitary; returns the worst residual.
pub fn gate_set_unitarity() -> f64 {
    let mut worst = 0.0_f64;
    for (name, angled) in GATE_NAMES {
        let g = Gate::parse(name, angled.then_some(0.37)).expect("listed gate parses");
        worst = worst.max(unitarity_residual(&g.matrix()));
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TruthKind {
    Cnot,
    Toffoli,
}

impl FromStr for TruthKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cnot" | "graded-cnot" => Ok(TruthKind::Cnot),
            "toffoli" | "ccnot" | "graded-toffoli" => Ok(TruthKind::Toffoli),
            _ => Err(format!("unknown truth table `{s}` (expected cnot or toffoli)")),
        }
    }
}

/// A truth-table row. `None` on the target columns means "any t, unchanged".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthRow {
    pub controls: Vec<Grade>,
    pub input: Option<u8>,
    pub output: Option<u8>,
    pub flip: bool,
}

fn row(controls: &[(u8, u8)], input: Option<u8>, output: Option<u8>, flip: bool) -> TruthRow {
    TruthRow { controls: controls.iter().map(|&(a, b)| Grade::new(a, b)).collect(), input, output, flip }
}

pub fn printed_cnot_table() -> Vec<TruthRow> {
    vec![
        row(&[(0, 0)], None, None, false),
        row(&[(0, 1)], Some(0), Some(1), true),
        row(&[(0, 1)], Some(1), Some(0), true),
        row(&[(1, 0)], None, None, false),
        row(&[(1, 1)], Some(0), Some(1), true),
        row(&[(1, 1)], Some(1), Some(0), true),
    ]
}

/// Target 0 is path `A_p`, 1 is `B_p`.
pub fn printed_toffoli_table() -> Vec<TruthRow> {
    let a = Some(0);
    let b = Some(1);
    vec![
        row(&[(0, 0), (1, 0)], a, a, false),
        row(&[(0, 0), (1, 1)], a, a, false),
        row(&[(0, 1), (1, 0)], a, a, false),
        row(&[(0, 1), (1, 1)], a, b, true),
        row(&[(0, 1), (1, 1)], b, a, true),
        row(&[(0, 0), (1, 0)], b, b, false),
        row(&[(0, 0), (1, 1)], b, b, false),
        row(&[(0, 1), (1, 0)], b, b, false),
    ]
}

/// Graded CNOT on `C^4 (x) C^2`: `sum_g P_g (x) X^{b(g)}`.
pub fn graded_cnot_matrix() -> CMat {
    let mut m = CMat::zeros(8, 8);
    for g in Grade::ALL {
        let p = CMat::from_fn(4, 4, |i, j| if i == g.index() && j == i { ONE } else { ZERO });
        let t = if g.b == 1 { pauli_x() } else { eye(2) };
        m += kron(&p, &t);
    }
    m
}

/// Toffoli on `(c1 bit, c2 bit, path)`, each control carried by its `b` grade bit.
pub fn graded_toffoli_matrix() -> CMat {
    let mut m = CMat::zeros(8, 8);
    for k in 0..8 {
        let out = if k >> 1 == 0b11 { k ^ 1 } else { k };
        m[(out, k)] = ONE;
    }
    m
}

/// Row holding the largest entry of column `col`.
fn read_basis_output(m: &CMat, col: usize) -> usize {
    (0..m.nrows()).max_by(|&i, &j| m[(i, col)].norm().total_cmp(&m[(j, col)].norm())).unwrap_or(0)
}

/// Evaluate the gate on the same inputs as the printed table, row by row.
/// Rows with `None` targets are expanded over both target values and must agree.
pub fn truth_table(kind: TruthKind) -> Vec<TruthRow> {
    let m = match kind {
        TruthKind::Cnot => graded_cnot_matrix(),
        TruthKind::Toffoli => graded_toffoli_matrix(),
    };
    truth_table_of(kind, &m)
}

fn printed_table(kind: TruthKind) -> Vec<TruthRow> {
    match kind {
        TruthKind::Cnot => printed_cnot_table(),
        TruthKind::Toffoli => printed_toffoli_table(),
    }
}

/// Same as [`truth_table`] for an arbitrary 8x8 permutation `m`.
pub fn truth_table_of(kind: TruthKind, m: &CMat) -> Vec<TruthRow> {
    let printed = printed_table(kind);
    let index = |controls: &[Grade], t: u8| -> usize {
        match kind {
            TruthKind::Cnot => 2 * controls[0].index() + t as usize,
            TruthKind::Toffoli => 4 * controls[0].b as usize + 2 * controls[1].b as usize + t as usize,
        }
    };
    printed
        .into_iter()
        .map(|p| {
            let ins: Vec<u8> = match p.input {
                Some(t) => vec![t],
                None => vec![0, 1],
            };
            let outs: Vec<u8> = ins.iter().map(|&t| (read_basis_output(m, index(&p.controls, t)) & 1) as u8).collect();
            let flips: Vec<bool> = ins.iter().zip(&outs).map(|(i, o)| i != o).collect();
            let uniform = flips.iter().all(|&f| f == flips[0]);
            let (input, output) = match p.input {
                Some(t) => (Some(t), Some(outs[0])),
                None if uniform && !flips[0] => (None, None),
                None => (Some(0), Some(outs[0])),
            };
            TruthRow { controls: p.controls, input, output, flip: flips[0] }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruthAudit {
    pub kind: TruthKind,
    pub rows: usize,
    pub mismatched_rows: Vec<usize>,
}

pub fn truth_table_audit(kind: TruthKind) -> TruthAudit {
    audit_rows(kind, truth_table(kind))
}

pub fn truth_table_audit_of(kind: TruthKind, m: &CMat) -> TruthAudit {
    audit_rows(kind, truth_table_of(kind, m))
}

fn audit_rows(kind: TruthKind, got: Vec<TruthRow>) -> TruthAudit {
    let printed = printed_table(kind);
    let mismatched_rows = (0..printed.len()).filter(|&i| printed[i] != got[i]).collect();
    TruthAudit { kind, rows: printed.len(), mismatched_rows }
}

fn target_label(kind: TruthKind, t: Option<u8>) -> String {
    match (kind, t) {
        (_, None) => "t".into(),
        (TruthKind::Cnot, Some(v)) => v.to_string(),
        (TruthKind::Toffoli, Some(0)) => "A_p".into(),
        (TruthKind::Toffoli, Some(_)) => "B_p".into(),
    }
}

fn cells(kind: TruthKind, rows: &[TruthRow]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut head: Vec<String> = match kind {
        TruthKind::Cnot => vec!["control".into()],
        TruthKind::Toffoli => vec!["control1".into(), "control2".into()],
    };
    head.extend(["target_in".into(), "target_out".into(), "operation".into()]);
    let body = rows
        .iter()
        .map(|r| {
            let mut v: Vec<String> = r.controls.iter().map(|g| format!("({},{})", g.a, g.b)).collect();
            v.push(target_label(kind, r.input));
            v.push(target_label(kind, r.output));
            v.push(if r.flip { "Flip".into() } else { "No Flip".into() });
            v
        })
        .collect();
    (head, body)
}

pub fn truth_table_text(kind: TruthKind, rows: &[TruthRow]) -> String {
    let (head, body) = cells(kind, rows);
    let widths: Vec<usize> =
        (0..head.len()).map(|j| body.iter().map(|r| r[j].len()).chain([head[j].len()]).max().unwrap_or(0)).collect();
    let line = |v: &[String]| -> String {
        v.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
    };
    let mut out = line(&head);
    out.push('\n');
    for r in &body {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}

pub fn truth_table_csv(kind: TruthKind, rows: &[TruthRow]) -> String {
    let (head, body) = cells(kind, rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&head).expect("in-memory csv");
    for r in &body {
        w.write_record(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::phase_distance;

    #[test]
    fn clock_shift_identities() {
        let rep = clock_shift();
        assert_eq!(rep.sigma4_residual, 0.0);
        assert_eq!(rep.tau4_residual, 0.0);
        assert_eq!(rep.commutation_residual, 0.0);
        assert_eq!(rep.tau_sigma_printed_residual, 0.0);
        assert_eq!(rep.sigma_tau_printed_residual, 0.0);
    }

    #[test]
    fn grading_operators() {
        let rep = grading_ops();
        assert_eq!(rep.sigma_sq_is_q, 0.0);
        assert_eq!(rep.sigma_is_p_s, 0.0);
        assert!(rep.literal_pq_residual > 0.5);
        assert_eq!(rep.p_eigen, [1.0, 1.0, -1.0, -1.0]);
        assert_eq!(rep.p[(2, 2)], -ONE);
    }

    #[test]
    fn shift_audit() {
        let a = shift_decomposition_audit();
        assert!(a.claimed_residual > 0.1);
        assert!(!a.claimed_is_permutation);
        assert_eq!(a.circuit_residual, 0.0);
        assert_eq!(a.order_four_residual, 0.0);
    }

    #[test]
    fn qplate_is_cnot() {
        let u = gate("qplate_pi").unwrap().matrix;
        assert_eq!(u, gate("CNOTba").unwrap().matrix);
        let out = QuquartState::from_grade(Grade::new(0, 1)).apply(&u);
        assert_eq!(out.definite_grade(0.0), Some(Grade::new(1, 1)));
    }

    #[test]
    fn hadamard_involution_and_unitarity() {
        let h = gate("Hb").unwrap().matrix;
        assert!(max_abs(&(&h * &h - eye(4))) < 1e-15);
        assert!(gate_set_unitarity() <= 1e-12);
    }

    #[test]
    fn gate_names_round_trip() {
        for (name, angled) in GATE_NAMES {
            let g = Gate::parse(name, angled.then_some(1.25)).unwrap();
            assert_eq!(g.to_string().parse::<Gate>().unwrap(), g);
        }
        assert!(gate("Foo").is_err());
        assert_eq!(gate("Rza").unwrap_err(), QuquartError::MissingAngle("Rza".into()));
    }

    #[test]
    fn grade_deltas() {
        assert_eq!(gate("Xb").unwrap().grade_delta, Grade::new(0, 1));
        assert_eq!(gate("Xa").unwrap().grade_delta, Grade::new(1, 0));
        assert_eq!(gate("SigmaFlip").unwrap().grade_delta, Grade::new(0, 1));
        assert_eq!(gate("HWP(30)").unwrap().grade_delta, Grade::new(0, 1));
        assert_eq!(gate("Hb").unwrap().grade_delta, Grade::ZERO);
        let c = gate("CNOTba").unwrap();
        assert!(c.interface && c.grade_delta == Grade::new(1, 0));
    }

    #[test]
    fn compensated_flip_pair_restores_grade() {
        let ops = vec![gate("SigmaFlip").unwrap(), gate("SigmaFlip").unwrap()];
        let (psi, led) = apply_circuit(&ops, &QuquartState::basis(0), GradeMode::Strict).unwrap();
        assert!(phase_distance(&CMat::from_column_slice(4, 1, &psi.amps), &CMat::from_column_slice(4, 1, &QuquartState::basis(0).amps)) < 1e-14);
        assert_eq!(led.status(), LedgerStatus::Compensated);
    }

    #[test]
    fn ledger_examples() {
        let xx = vec![gate("Xb").unwrap(), gate("Xb").unwrap()];
        let (psi, led) = apply_circuit(&xx, &QuquartState::basis(0), GradeMode::Strict).unwrap();
        assert_eq!(psi, QuquartState::basis(0));
        assert_eq!(led.charge, Grade::ZERO);

        let err = apply_circuit(&[gate("Xb").unwrap()], &QuquartState::basis(0), GradeMode::Strict).unwrap_err();
        assert!(matches!(err, QuquartError::UndeclaredGradeChange { index: 0, .. }));
        assert!(apply_circuit(&[gate("Xb").unwrap()], &QuquartState::basis(0), GradeMode::Permissive).is_ok());

        let bell = vec![gate("Hb").unwrap(), gate("CNOTba").unwrap()];
        let (psi, led) = apply_circuit(&bell, &QuquartState::basis(0), GradeMode::Strict).unwrap();
        let p = psi.probabilities();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[3] - 0.5).abs() < 1e-15);
        assert_eq!(led.interfaces(), vec![1]);
        assert_eq!(led.status(), LedgerStatus::ViaInterfaces);
    }

    #[test]
    fn truth_tables_match_print() {
        for kind in [TruthKind::Cnot, TruthKind::Toffoli] {
            let a = truth_table_audit(kind);
            assert!(a.mismatched_rows.is_empty(), "{kind:?}: {:?}", a.mismatched_rows);
        }
        let t = truth_table(TruthKind::Cnot);
        assert_eq!(t[1], row(&[(0, 1)], Some(0), Some(1), true));
        assert_eq!(t[3], row(&[(1, 0)], None, None, false));
        let tof = truth_table(TruthKind::Toffoli);
        assert_eq!(tof[3], row(&[(0, 1), (1, 1)], Some(0), Some(1), true));
    }

    #[test]
    fn truth_table_rendering() {
        let txt = truth_table_text(TruthKind::Cnot, &truth_table(TruthKind::Cnot));
        assert!(txt.lines().nth(2).unwrap().starts_with("(0,1)"));
        let csv = truth_table_csv(TruthKind::Toffoli, &truth_table(TruthKind::Toffoli));
        assert_eq!(csv.lines().count(), 9);
        assert!(csv.contains("A_p,B_p,Flip"));
    }
}

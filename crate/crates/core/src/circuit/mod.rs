//! A small job language for ququart circuits.
//!
//! ```text
//! ququart q;                 # declare a register, starts in |0> (grade 00)
//! param t = 0.25;
//! gate Rza(t) q;
//! qplate pi q;               # same as `gate qplate_pi q;`
//! declare-interface Xb;      # later Xb gates may change the grade in strict mode
//! gate Xb q;
//! assert-grade q (1,1);
//! measure q;
//! ```

pub mod ast;
pub mod diag;
pub mod exec;
pub mod lexer;
pub mod parser;

pub use ast::{Angle, Program, Stmt, StmtKind};
pub use diag::{Code, Diagnostic, Severity, Span};
pub use exec::{circuit_to_dsl, execute, ExecError, ExecOptions, ExecReport, RegisterReport};
pub use parser::{parse, parse_bytes};

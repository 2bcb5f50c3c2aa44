use std::fmt;

use serde::Serialize;

use super::diag::Span;
use crate::grading::Grade;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Angle {
    Value(f64),
    Param(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum StmtKind {
    Ququart { name: String },
    Param { name: String, value: f64 },
    Gate { name: String, angle: Option<Angle>, target: String },
    Qplate { target: String },
    DeclareInterface { gate: String },
    AssertGrade { target: String, grade: Grade },
    Measure { target: String },
}

impl StmtKind {
    pub fn is_declaration(&self) -> bool {
        matches!(self, StmtKind::Ququart { .. } | StmtKind::Param { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stmt {
    pub kind: StmtKind,
    /// Position of the statement's leading keyword.
    pub span: Span,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Program {
    /// In source order; declarations must precede their uses.
    pub stmts: Vec<Stmt>,
}

impl Program {
    pub fn registers(&self) -> Vec<&str> {
        self.stmts
            .iter()
            .filter_map(|s| match &s.kind {
                StmtKind::Ququart { name } => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn params(&self) -> Vec<(&str, f64)> {
        self.stmts
            .iter()
            .filter_map(|s| match &s.kind {
                StmtKind::Param { name, value } => Some((name.as_str(), *value)),
                _ => None,
            })
            .collect()
    }

    pub fn declarations(&self) -> impl Iterator<Item = &Stmt> {
        self.stmts.iter().filter(|s| s.kind.is_declaration())
    }

    pub fn statements(&self) -> impl Iterator<Item = &Stmt> {
        self.stmts.iter().filter(|s| !s.kind.is_declaration())
    }

    /// Equality of everything except source spans.
    pub fn same_structure(&self, other: &Program) -> bool {
        self.stmts.len() == other.stmts.len() && self.stmts.iter().zip(&other.stmts).all(|(x, y)| x.kind == y.kind)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{}` on f64 prints the shortest string that reads back exactly
            Angle::Value(x) => write!(f, "{x}"),
            Angle::Param(p) => f.write_str(p),
        }
    }
}

impl fmt::Display for StmtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Ququart { name } => write!(f, "ququart {name};"),
            StmtKind::Param { name, value } => write!(f, "param {name} = {value};"),
            StmtKind::Gate { name, angle: Some(a), target } => write!(f, "gate {name}({a}) {target};"),
            StmtKind::Gate { name, angle: None, target } => write!(f, "gate {name} {target};"),
            StmtKind::Qplate { target } => write!(f, "qplate pi {target};"),
            StmtKind::DeclareInterface { gate } => write!(f, "declare-interface {gate};"),
            StmtKind::AssertGrade { target, grade } => write!(f, "assert-grade {target} ({},{});", grade.a, grade.b),
            StmtKind::Measure { target } => write!(f, "measure {target};"),
        }
    }
}

/// One statement per line.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{}", s.kind)?;
        }
        Ok(())
    }
}

//! Recursive descent over the token stream with one token of lookahead.
//! Name resolution happens inline: registers, parameters and gate names must be
//! known at the point of use.

use std::collections::HashMap;

use super::ast::{Angle, Program, Stmt, StmtKind};
use super::diag::{Code, Diagnostic, Span};
use super::lexer::{lex, Tok, Token};
use crate::grading::Grade;
use crate::ququart::{Gate, QuquartError, GATE_NAMES};

pub const KEYWORDS: [&str; 7] = ["ququart", "param", "gate", "qplate", "declare-interface", "assert-grade", "measure"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
    registers: HashMap<String, Span>,
    params: HashMap<String, Span>,
}

type PResult<T> = Result<T, Diagnostic>;

fn gate_list() -> String {
    GATE_NAMES.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, want: &str) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error(Code::UnexpectedToken, format!("expected {want}, found {}", t.tok.describe()), t.span)
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            let mut d = self.unexpected(&tok.describe());
            if tok == Tok::Semi {
                d = d.with_hint("statements end with `;`");
            }
            Err(d)
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                let span = self.next().span;
                Ok((s, span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    /// Register reference; an unknown name is reported but parsing goes on.
    fn register_ref(&mut self) -> PResult<String> {
        let (name, span) = self.ident("a register name")?;
        if !self.registers.contains_key(&name) {
            self.diags.push(
                Diagnostic::error(Code::UndeclaredRegister, format!("undeclared register {name}"), span)
                    .with_hint(format!("declare it first with `ququart {name};`")),
            );
        }
        Ok(name)
    }

    fn declare(&mut self, map_is_reg: bool, name: &str, span: Span) {
        let map = if map_is_reg { &mut self.registers } else { &mut self.params };
        if let Some(prev) = map.get(name) {
            let d = Diagnostic::error(Code::DuplicateDeclaration, format!("`{name}` is already declared"), span)
                .with_hint(format!("first declared at {prev}"));
            self.diags.push(d);
        } else {
            map.insert(name.to_string(), span);
        }
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let (kw, span) = self.ident("a statement keyword")?;
        let kind = match kw.as_str() {
            "ququart" => {
                let (name, nspan) = self.ident("a register name")?;
                self.declare(true, &name, nspan);
                StmtKind::Ququart { name }
            }
            "param" => {
                let (name, nspan) = self.ident("a parameter name")?;
                self.expect(Tok::Eq)?;
                let value = self.number()?;
                self.declare(false, &name, nspan);
                StmtKind::Param { name, value }
            }
            "gate" => self.gate_stmt()?,
            "qplate" => {
                match self.ident("`pi`")? {
                    (p, _) if p == "pi" => {}
                    (_, s) => {
                        return Err(Diagnostic::error(Code::UnexpectedToken, "only the pi q-plate is available", s)
                            .with_hint("write `qplate pi <register>;`"))
                    }
                }
                StmtKind::Qplate { target: self.register_ref()? }
            }
            "declare-interface" => {
                let (gate, gspan) = self.ident("a gate name")?;
                if !GATE_NAMES.iter().any(|(n, _)| *n == gate) && Gate::parse(&gate, None).is_err() {
                    self.diags.push(
                        Diagnostic::error(Code::UnknownGate, format!("unknown gate {gate}"), gspan)
                            .with_hint(format!("known gates: {}", gate_list())),
                    );
                }
                StmtKind::DeclareInterface { gate }
            }
            "assert-grade" => {
                let target = self.register_ref()?;
                let grade = self.grade_literal()?;
                StmtKind::AssertGrade { target, grade }
            }
            "measure" => StmtKind::Measure { target: self.register_ref()? },
            _ => {
                return Err(Diagnostic::error(Code::UnexpectedToken, format!("unknown statement `{kw}`"), span)
                    .with_hint(format!("statements start with one of: {}", KEYWORDS.join(", "))))
            }
        };
        self.expect(Tok::Semi)?;
        Ok(Stmt { kind, span })
    }

    fn number(&mut self) -> PResult<f64> {
        match self.peek().tok {
            Tok::Number(x) => {
                self.next();
                Ok(x)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn gate_stmt(&mut self) -> PResult<StmtKind> {
        let (name, nspan) = self.ident("a gate name")?;
        let angle = if self.peek().tok == Tok::LParen {
            self.next();
            let a = match self.peek().tok.clone() {
                Tok::Number(x) => {
                    self.next();
                    Angle::Value(x)
                }
                Tok::Ident(p) => {
                    let pspan = self.next().span;
                    if !self.params.contains_key(&p) {
                        self.diags.push(
                            Diagnostic::error(Code::UndefinedParameter, format!("undefined parameter {p}"), pspan)
                                .with_hint(format!("define it first with `param {p} = <number>;`")),
                        );
                    }
                    Angle::Param(p)
                }
                _ => return Err(self.unexpected("an angle or parameter name")),
            };
            self.expect(Tok::RParen)?;
            Some(a)
        } else {
            None
        };
        match Gate::parse(&name, angle.as_ref().map(|_| 0.0)) {
            Ok(_) => {}
            Err(QuquartError::UnknownGate(_)) => self.diags.push(
                Diagnostic::error(Code::UnknownGate, format!("unknown gate {name}"), nspan)
                    .with_hint(format!("known gates: {}", gate_list())),
            ),
            Err(QuquartError::MissingAngle(_)) => self.diags.push(
                Diagnostic::error(Code::GateParameter, format!("gate {name} needs an angle"), nspan)
                    .with_hint(format!("write `gate {name}(<angle>) <register>;`")),
            ),
            Err(_) => self.diags.push(
                Diagnostic::error(Code::GateParameter, format!("gate {name} takes no angle"), nspan)
                    .with_hint(format!("write `gate {name} <register>;`")),
            ),
        }
        let target = self.register_ref()?;
        Ok(StmtKind::Gate { name, angle, target })
    }

    fn grade_literal(&mut self) -> PResult<Grade> {
        let start = self.peek().span;
        let malformed = |p: &Parser| {
            Diagnostic::error(
                Code::MalformedGrade,
                format!("malformed grade literal near {}", p.peek().tok.describe()),
                start,
            )
            .with_hint("a grade is written `(a,b)` with a, b in {0, 1}")
        };
        if self.peek().tok != Tok::LParen {
            return Err(malformed(self));
        }
        self.next();
        let mut bits = [0u8; 2];
        for (i, bit) in bits.iter_mut().enumerate() {
            if i == 1 {
                if self.peek().tok != Tok::Comma {
                    return Err(malformed(self));
                }
                self.next();
            }
            let t = self.peek().clone();
            *bit = match (&t.tok, t.text.as_str()) {
                (Tok::Number(_), "0") => 0,
                (Tok::Number(_), "1") => 1,
                _ => return Err(malformed(self)),
            };
            self.next();
        }
        if self.peek().tok != Tok::RParen {
            return Err(malformed(self));
        }
        self.next();
        Ok(Grade::new(bits[0], bits[1]))
    }

    /// Skip past the next `;` (or to the end).
    fn recover(&mut self) {
        loop {
            match self.next().tok {
                Tok::Semi | Tok::Eof => return,
                _ => {}
            }
        }
    }

    fn program(&mut self) -> Program {
        let mut stmts = Vec::new();
        while self.peek().tok != Tok::Eof {
            let before = self.pos;
            match self.statement() {
                Ok(s) => stmts.push(s),
                Err(d) => {
                    self.diags.push(d);
                    // don't eat the `;` twice when the error sat on it
                    if self.pos > before && self.toks[self.pos - 1].tok == Tok::Semi {
                        continue;
                    }
                    self.recover();
                }
            }
        }
        Program { stmts }
    }
}

/// Parse DSL source. Any error-level diagnostic means no program.
pub fn parse(src: &str) -> Result<Program, Vec<Diagnostic>> {
    let (toks, mut diags) = lex(src);
    let mut p = Parser { toks, pos: 0, diags: Vec::new(), registers: HashMap::new(), params: HashMap::new() };
    let prog = p.program();
    diags.append(&mut p.diags);
    diags.sort_by_key(|d| d.span);
    if diags.iter().any(|d| d.severity == super::diag::Severity::Error) {
        Err(diags)
    } else {
        Ok(prog)
    }
}

/// Parse raw bytes, reporting invalid UTF-8 at its position.
pub fn parse_bytes(bytes: &[u8]) -> Result<Program, Vec<Diagnostic>> {
    match std::str::from_utf8(bytes) {
        Ok(s) => parse(s),
        Err(e) => {
            let good = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
            let line = good.matches('\n').count() as u32 + 1;
            let col = good.rsplit('\n').next().map_or(0, |l| l.chars().count()) as u32 + 1;
            Err(vec![Diagnostic::error(
                Code::InvalidUtf8,
                format!("invalid UTF-8 at byte {}", e.valid_up_to()),
                Span::new(line, col),
            )])
        }
    }
}

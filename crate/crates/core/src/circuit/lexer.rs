use super::diag::{Code, Diagnostic, Span};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    /// Words, keywords included; may contain `-` after the first char.
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(x) => format!("number {x}"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
    /// Raw source text, kept for number diagnostics.
    pub text: String,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let ch = self.chars.next()?;
        if ch == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(ch)
    }

    fn take_while(&mut self, buf: &mut String, f: impl Fn(char) -> bool) {
        while let Some(ch) = self.peek() {
            if !f(ch) {
                break;
            }
            buf.push(ch);
            self.bump();
        }
    }
}

fn is_ident_start(ch: char) -> bool {
    ch.is_ascii_alphabetic() || ch == '_'
}

fn is_ident_char(ch: char) -> bool {
    ch.is_ascii_alphanumeric() || ch == '_' || ch == '-'
}

/// Tokenize, always ending in `Eof`. Bad characters and numbers become
/// diagnostics and are skipped.
pub fn lex(src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor { chars: src.chars().peekable(), line: 1, col: 1 };
    let mut toks = Vec::new();
    let mut diags = Vec::new();
    loop {
        let span = Span::new(cur.line, cur.col);
        let Some(ch) = cur.peek() else {
            toks.push(Token { tok: Tok::Eof, span, text: String::new() });
            break;
        };
        if ch.is_whitespace() {
            cur.bump();
            continue;
        }
        if ch == '#' {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        let single = match ch {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            cur.bump();
            toks.push(Token { tok, span, text: ch.to_string() });
            continue;
        }
        if is_ident_start(ch) {
            let mut s = String::new();
            cur.take_while(&mut s, is_ident_char);
            toks.push(Token { tok: Tok::Ident(s.clone()), span, text: s });
            continue;
        }
        if ch.is_ascii_digit() || ch == '-' || ch == '+' || ch == '.' {
            let mut s = String::new();
            s.push(ch);
            cur.bump();
            // exponent signs are only allowed right after `e`
            let mut prev = ch;
            while let Some(c) = cur.peek() {
                let ok = c.is_ascii_alphanumeric() || c == '.' || c == '_' || ((c == '-' || c == '+') && matches!(prev, 'e' | 'E'));
                if !ok {
                    break;
                }
                s.push(c);
                prev = c;
                cur.bump();
            }
            match parse_number(&s) {
                Some(x) => toks.push(Token { tok: Tok::Number(x), span, text: s }),
                None => diags.push(
                    Diagnostic::error(Code::BadNumber, format!("malformed number `{s}`"), span)
                        .with_hint("numbers look like 1, -0.25 or 3e-2"),
                ),
            }
            continue;
        }
        cur.bump();
        diags.push(Diagnostic::error(Code::UnexpectedChar, format!("unexpected character {ch:?}"), span));
    }
    (toks, diags)
}

/// Plain decimal literals only; `inf`, `nan` and overflow are rejected.
fn parse_number(s: &str) -> Option<f64> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    let first = body.chars().next()?;
    if !(first.is_ascii_digit() || first == '.') {
        return None;
    }
    if !body.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '-' | '+')) {
        return None;
    }
    let x: f64 = s.parse().ok()?;
    x.is_finite().then_some(x)
}

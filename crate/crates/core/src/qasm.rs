//! OpenQASM 2.0 subset frontend.
//!
//! Accepted: the `OPENQASM 2.0;` header, `include "qelib1.inc";`, `qreg`,
//! `creg` (ignored with a warning), gate applications from the built-in
//! table with register broadcasting, `measure a -> b;`, `barrier` and `//`
//! line comments. Custom gate definitions, `opaque`, `if`, `reset` and loops
//! are rejected with a diagnostic naming the construct.
//!
//! Qubit indices in the resulting [`Circuit`] are register offsets flattened
//! in declaration order. Gate names are kept exactly as written.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};

/// The only include file the frontend knows.
pub const STANDARD_INCLUDE: &str = "qelib1.inc";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.line, self.column, self.message)
    }
}

/// Diagnostics of a failed parse, in source order. At least one is an error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", render(.diagnostics))]
pub struct ParseErrors {
    pub diagnostics: Vec<ParseDiagnostic>,
}

fn render(diags: &[ParseDiagnostic]) -> String {
    diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}

impl ParseErrors {
    pub fn errors(&self) -> impl Iterator<Item = &ParseDiagnostic> {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Error)
    }
}

/// A successful parse and any warnings raised along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub circuit: Circuit,
    pub warnings: Vec<ParseDiagnostic>,
}

pub fn parse(text: &str) -> Result<Circuit, ParseErrors> {
    parse_with_warnings(text).map(|p| p.circuit)
}

pub fn parse_with_warnings(text: &str) -> Result<Parsed, ParseErrors> {
    let (tokens, mut diagnostics) = lex(text);
    let mut parser = Parser::new(tokens);
    parser.program();
    diagnostics.append(&mut parser.diagnostics);
    diagnostics.sort_by_key(|d| (d.line, d.column));
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(ParseErrors { diagnostics });
    }
    Ok(Parsed {
        circuit: Circuit::from_gates(parser.num_qubits, parser.gates),
        warnings: diagnostics,
    })
}

/// Parameter and qubit counts of the built-in gates.
pub fn gate_signature(name: &str) -> Option<(usize, usize)> {
    Some(match name {
        "U" | "u3" | "u" => (3, 1),
        "u2" => (2, 1),
        "u1" | "u0" | "p" | "rx" | "ry" | "rz" => (1, 1),
        "id" | "x" | "y" | "z" | "h" | "s" | "sdg" | "t" | "tdg" | "sx" | "sxdg" => (0, 1),
        "CX" | "cx" | "cy" | "cz" | "ch" | "swap" | "ecr" | "csx" => (0, 2),
        "crx" | "cry" | "crz" | "cu1" | "cp" | "rxx" | "rzz" => (1, 2),
        "cu3" => (3, 2),
        "cu" => (4, 2),
        "ccx" | "cswap" | "rccx" => (0, 3),
        "c3x" | "c3sqrtx" | "rc3x" => (0, 4),
        "c4x" => (0, 5),
        _ => return None,
    })
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Real(String),
    Str(String),
    Semi,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    EqEq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(s) | Tok::Real(s) => write!(f, "number `{s}`"),
            Tok::Str(s) => write!(f, "string \"{s}\""),
            Tok::Semi => f.write_str("`;`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::EqEq => f.write_str("`==`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn error_at(line: usize, column: usize, message: impl Into<String>) -> ParseDiagnostic {
    ParseDiagnostic {
        line,
        column,
        message: message.into(),
        severity: Severity::Error,
    }
}

struct Cursor {
    chars: Vec<char>,
    i: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.i + ahead).copied()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek(0) {
            self.i += 1;
            if c == '\n' {
                self.line += 1;
                self.column = 1;
            } else {
                self.column += 1;
            }
        }
    }

    fn bump_while(&mut self, pred: impl Fn(char) -> bool) {
        while self.peek(0).is_some_and(&pred) {
            self.bump();
        }
    }

    fn slice(&self, start: usize) -> String {
        self.chars[start..self.i].iter().collect()
    }
}

fn lex(text: &str) -> (Vec<Token>, Vec<ParseDiagnostic>) {
    let mut cur = Cursor {
        chars: text.chars().collect(),
        i: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();

    while let Some(c) = cur.peek(0) {
        let (line, column) = (cur.line, cur.column);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' && cur.peek(1) == Some('/') {
            cur.bump_while(|c| c != '\n');
            continue;
        }
        let simple = match c {
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        let tok = if let Some(tok) = simple {
            cur.bump();
            tok
        } else if c == '-' {
            cur.bump();
            if cur.peek(0) == Some('>') {
                cur.bump();
                Tok::Arrow
            } else {
                Tok::Minus
            }
        } else if c == '=' && cur.peek(1) == Some('=') {
            cur.bump();
            cur.bump();
            Tok::EqEq
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = cur.i;
            cur.bump_while(|c| c.is_ascii_alphanumeric() || c == '_');
            Tok::Ident(cur.slice(start))
        } else if c.is_ascii_digit() || (c == '.' && cur.peek(1).is_some_and(|d| d.is_ascii_digit())) {
            let start = cur.i;
            let mut real = false;
            cur.bump_while(|c| c.is_ascii_digit());
            if cur.peek(0) == Some('.') {
                real = true;
                cur.bump();
                cur.bump_while(|c| c.is_ascii_digit());
            }
            if matches!(cur.peek(0), Some('e' | 'E')) {
                let sign = usize::from(matches!(cur.peek(1), Some('+' | '-')));
                if cur.peek(1 + sign).is_some_and(|d| d.is_ascii_digit()) {
                    real = true;
                    for _ in 0..=sign {
                        cur.bump();
                    }
                    cur.bump_while(|c| c.is_ascii_digit());
                }
            }
            let s = cur.slice(start);
            if real {
                Tok::Real(s)
            } else {
                Tok::Int(s)
            }
        } else if c == '"' {
            cur.bump();
            let start = cur.i;
            cur.bump_while(|c| c != '"' && c != '\n');
            if cur.peek(0) == Some('"') {
                let s = cur.slice(start);
                cur.bump();
                Tok::Str(s)
            } else {
                diags.push(error_at(line, column, "unterminated string literal"));
                continue;
            }
        } else {
            diags.push(error_at(line, column, format!("unexpected character `{c}`")));
            cur.bump();
            continue;
        };
        tokens.push(Token { tok, line, column });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line: cur.line,
        column: cur.column,
    });
    (tokens, diags)
}

// ---------------------------------------------------------------------------
// Parser

/// Marker for a statement that already produced its diagnostic.
struct Reported;

type PResult<T> = Result<T, Reported>;

#[derive(Debug, Clone)]
struct Register {
    name: String,
    offset: usize,
    size: usize,
}

#[derive(Debug, Clone, Copy)]
enum Operand {
    Qubit(usize),
    Register { offset: usize, size: usize },
}

impl Operand {
    fn at(self, i: usize) -> usize {
        match self {
            Operand::Qubit(q) => q,
            Operand::Register { offset, .. } => offset + i,
        }
    }

    fn width(self) -> Option<usize> {
        match self {
            Operand::Qubit(_) => None,
            Operand::Register { size, .. } => Some(size),
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    diagnostics: Vec<ParseDiagnostic>,
    qregs: Vec<Register>,
    cregs: Vec<Register>,
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Self {
            tokens,
            pos: 0,
            diagnostics: Vec::new(),
            qregs: Vec::new(),
            cregs: Vec::new(),
            num_qubits: 0,
            gates: Vec::new(),
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn next(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn at(&self, tok: &Tok) -> bool {
        &self.peek().tok == tok
    }

    fn error(&mut self, token: &Token, message: impl Into<String>) -> Reported {
        self.diagnostics.push(error_at(token.line, token.column, message));
        Reported
    }

    fn warn(&mut self, token: &Token, message: impl Into<String>) {
        self.diagnostics.push(ParseDiagnostic {
            line: token.line,
            column: token.column,
            message: message.into(),
            severity: Severity::Warning,
        });
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            let msg = format!("expected {tok}, found {}", t.tok);
            Err(self.error(&t, msg))
        }
    }

    fn ident(&mut self) -> PResult<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => {
                let msg = format!("expected an identifier, found {other}");
                Err(self.error(&t, msg))
            }
        }
    }

    fn integer(&mut self) -> PResult<usize> {
        let t = self.next();
        match &t.tok {
            Tok::Int(s) => match s.parse() {
                Ok(v) => Ok(v),
                Err(_) => Err(self.error(&t, format!("integer `{s}` is too large"))),
            },
            other => {
                let msg = format!("expected an integer, found {other}");
                Err(self.error(&t, msg))
            }
        }
    }

    /// True if the tokens consumed since `start` end with the statement's `;`.
    fn finished_statement_since(&self, start: usize) -> bool {
        self.pos > start && self.tokens[self.pos - 1].tok == Tok::Semi
    }

    /// Skips past the next `;`, or past a balanced `{ ... }` block if one
    /// opens first.
    fn recover(&mut self) {
        let mut depth = 0usize;
        loop {
            let t = self.next();
            match t.tok {
                Tok::Eof => return,
                Tok::LBrace => depth += 1,
                Tok::RBrace if depth > 0 => {
                    depth -= 1;
                    if depth == 0 {
                        return;
                    }
                }
                Tok::Semi if depth == 0 => return,
                _ => {}
            }
        }
    }

    fn program(&mut self) {
        if self.header().is_err() {
            self.recover();
        }
        while !self.at(&Tok::Eof) {
            let start = self.pos;
            if self.statement().is_err() && !self.finished_statement_since(start) {
                self.recover();
            }
        }
    }

    fn header(&mut self) -> PResult<()> {
        let t = self.peek().clone();
        if t.tok != Tok::Ident("OPENQASM".into()) {
            return Err(self.error(&t, "expected `OPENQASM 2.0;` header"));
        }
        self.next();
        let v = self.next();
        match &v.tok {
            Tok::Real(s) | Tok::Int(s) if s.parse::<f64>() == Ok(2.0) => {}
            Tok::Real(s) | Tok::Int(s) => {
                let msg = format!("unsupported OpenQASM version {s} (only 2.0 is accepted)");
                return Err(self.error(&v, msg));
            }
            other => {
                let msg = format!("expected a version number, found {other}");
                return Err(self.error(&v, msg));
            }
        }
        self.expect(Tok::Semi)?;
        Ok(())
    }

    fn statement(&mut self) -> PResult<()> {
        let t = self.peek().clone();
        let word = match &t.tok {
            Tok::Ident(w) => w.clone(),
            other => {
                let msg = format!("expected a statement, found {other}");
                self.next();
                return Err(self.error(&t, msg));
            }
        };
        match word.as_str() {
            "include" => self.include(),
            "qreg" => self.register(true),
            "creg" => self.register(false),
            "measure" => self.measure(),
            "barrier" => self.barrier(),
            "OPENQASM" => Err(self.error(&t, "duplicate `OPENQASM` header")),
            "gate" => Err(self.error(&t, "custom gate definitions unsupported")),
            "opaque" => Err(self.error(&t, "opaque gate declarations unsupported")),
            "if" => Err(self.error(&t, "classical control (`if`) unsupported")),
            "for" | "while" => Err(self.error(&t, format!("loops (`{word}`) unsupported"))),
            "reset" => Err(self.error(&t, "`reset` unsupported")),
            _ => self.application(),
        }
    }

    fn include(&mut self) -> PResult<()> {
        self.next();
        let t = self.next();
        match &t.tok {
            Tok::Str(s) if s == STANDARD_INCLUDE => {}
            Tok::Str(s) => {
                let msg = format!("unknown include file \"{s}\" (only \"{STANDARD_INCLUDE}\" is supported)");
                return Err(self.error(&t, msg));
            }
            other => {
                let msg = format!("expected a file name string, found {other}");
                return Err(self.error(&t, msg));
            }
        }
        self.expect(Tok::Semi)?;
        Ok(())
    }

    fn register(&mut self, quantum: bool) -> PResult<()> {
        let keyword = self.next();
        let (name, name_tok) = self.ident()?;
        self.expect(Tok::LBracket)?;
        let size_tok = self.peek().clone();
        let size = self.integer()?;
        self.expect(Tok::RBracket)?;
        self.expect(Tok::Semi)?;
        if self.qregs.iter().chain(&self.cregs).any(|r| r.name == name) {
            return Err(self.error(&name_tok, format!("register `{name}` already declared")));
        }
        if size == 0 {
            return Err(self.error(&size_tok, "register size must be positive"));
        }
        if quantum {
            self.qregs.push(Register {
                name,
                offset: self.num_qubits,
                size,
            });
            self.num_qubits += size;
        } else {
            self.warn(&keyword, format!("classical register `{name}` ignored"));
            self.cregs.push(Register { name, offset: 0, size });
        }
        Ok(())
    }

    /// `name` or `name[index]` against the quantum (or classical) registers.
    fn operand(&mut self, quantum: bool) -> PResult<Operand> {
        let (name, tok) = self.ident()?;
        let found = if quantum { &self.qregs } else { &self.cregs };
        let reg = match found.iter().find(|r| r.name == name) {
            Some(r) => r.clone(),
            None => {
                let other = if quantum { &self.cregs } else { &self.qregs };
                let msg = if other.iter().any(|r| r.name == name) {
                    let kind = if quantum { "classical" } else { "quantum" };
                    format!("`{name}` is a {kind} register")
                } else {
                    format!("undeclared register `{name}`")
                };
                return Err(self.error(&tok, msg));
            }
        };
        if !self.at(&Tok::LBracket) {
            return Ok(Operand::Register {
                offset: reg.offset,
                size: reg.size,
            });
        }
        self.next();
        let idx_tok = self.peek().clone();
        let idx = self.integer()?;
        self.expect(Tok::RBracket)?;
        if idx >= reg.size {
            let msg = format!("index {idx} out of range for register {}[{}]", reg.name, reg.size);
            return Err(self.error(&idx_tok, msg));
        }
        Ok(Operand::Qubit(reg.offset + idx))
    }

    fn operand_list(&mut self) -> PResult<Vec<Operand>> {
        let mut ops = vec![self.operand(true)?];
        while self.at(&Tok::Comma) {
            self.next();
            ops.push(self.operand(true)?);
        }
        Ok(ops)
    }

    /// Common width of the register operands, if any.
    fn broadcast_width(&mut self, ops: &[Operand], at: &Token) -> PResult<usize> {
        let mut width = None;
        for w in ops.iter().filter_map(|o| o.width()) {
            match width {
                None => width = Some(w),
                Some(prev) if prev != w => {
                    return Err(self.error(at, "registers of different sizes in one broadcast"));
                }
                _ => {}
            }
        }
        Ok(width.unwrap_or(1))
    }

    fn measure(&mut self) -> PResult<()> {
        let t = self.next();
        let q = self.operand(true)?;
        self.expect(Tok::Arrow)?;
        let c = self.operand(false)?;
        self.expect(Tok::Semi)?;
        match (q.width(), c.width()) {
            (None, None) => self.gates.push(Gate::measure(q.at(0))),
            (Some(a), Some(b)) if a == b => {
                for i in 0..a {
                    self.gates.push(Gate::measure(q.at(i)));
                }
            }
            _ => return Err(self.error(&t, "measure operands must both be bits or equal-size registers")),
        }
        Ok(())
    }

    fn barrier(&mut self) -> PResult<()> {
        self.next();
        let ops = self.operand_list()?;
        self.expect(Tok::Semi)?;
        let mut qubits = Vec::new();
        for op in ops {
            for i in 0..op.width().unwrap_or(1) {
                let q = op.at(i);
                if !qubits.contains(&q) {
                    qubits.push(q);
                }
            }
        }
        self.gates.push(Gate::barrier(qubits));
        Ok(())
    }

    fn application(&mut self) -> PResult<()> {
        let (name, name_tok) = self.ident()?;
        let mut params = Vec::new();
        if self.at(&Tok::LParen) {
            self.next();
            if !self.at(&Tok::RParen) {
                params.push(self.expr()?);
                while self.at(&Tok::Comma) {
                    self.next();
                    params.push(self.expr()?);
                }
            }
            self.expect(Tok::RParen)?;
        }
        let ops = self.operand_list()?;
        self.expect(Tok::Semi)?;

        let (kind, param_ok, arity) = if name == "delay" {
            (GateKind::Delay, params.len() <= 1, 1)
        } else {
            match gate_signature(&name) {
                Some((np, nq)) => (GateKind::Unitary, params.len() == np, nq),
                None => return Err(self.error(&name_tok, format!("unknown gate `{name}`"))),
            }
        };
        if !param_ok {
            let expected = match gate_signature(&name) {
                Some((np, _)) => np.to_string(),
                None => "at most 1".to_owned(),
            };
            let msg = format!("gate `{name}` takes {expected} parameter(s), got {}", params.len());
            return Err(self.error(&name_tok, msg));
        }
        if ops.len() != arity {
            let msg = format!("gate `{name}` acts on {arity} qubit(s), got {}", ops.len());
            return Err(self.error(&name_tok, msg));
        }

        let width = self.broadcast_width(&ops, &name_tok)?;
        for i in 0..width {
            let qubits: Vec<usize> = ops.iter().map(|o| o.at(i)).collect();
            if qubits.iter().enumerate().any(|(k, q)| qubits[..k].contains(q)) {
                return Err(self.error(&name_tok, format!("duplicate qubit operand in `{name}`")));
            }
            self.gates.push(Gate {
                name: name.clone(),
                qubits,
                params: params.clone(),
                kind,
            });
        }
        Ok(())
    }

    // Parameter expressions: + - * / ^, unary minus, pi, numbers and the
    // usual one-argument functions.

    fn expr(&mut self) -> PResult<f64> {
        let mut v = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    v += self.term()?;
                }
                Tok::Minus => {
                    self.next();
                    v -= self.term()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn term(&mut self) -> PResult<f64> {
        let mut v = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    v *= self.unary()?;
                }
                Tok::Slash => {
                    self.next();
                    v /= self.unary()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn unary(&mut self) -> PResult<f64> {
        match self.peek().tok {
            Tok::Minus => {
                self.next();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.next();
                self.unary()
            }
            _ => {
                let base = self.atom()?;
                if self.at(&Tok::Caret) {
                    self.next();
                    Ok(base.powf(self.unary()?))
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> PResult<f64> {
        let t = self.next();
        match &t.tok {
            Tok::Int(s) | Tok::Real(s) => s
                .parse::<f64>()
                .map_err(|_| self.error(&t, format!("malformed number `{s}`"))),
            Tok::Ident(w) if w == "pi" => Ok(std::f64::consts::PI),
            Tok::Ident(w) => {
                let f: fn(f64) -> f64 = match w.as_str() {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => return Err(self.error(&t, format!("unknown identifier `{w}` in expression"))),
                };
                self.expect(Tok::LParen)?;
                let v = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(f(v))
            }
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            other => {
                let msg = format!("expected an expression, found {other}");
                Err(self.error(&t, msg))
            }
        }
    }
}

/// Writes a circuit back out as OpenQASM 2.0 over a single register `q`
/// (and `c` for measurement results).
pub fn unparse(circuit: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if circuit.num_qubits() > 0 {
        out.push_str(&format!("qreg q[{}];\n", circuit.num_qubits()));
    }
    let measures = circuit.gates().iter().any(|g| g.kind == GateKind::Measure);
    if measures && circuit.num_qubits() > 0 {
        out.push_str(&format!("creg c[{}];\n", circuit.num_qubits()));
    }
    for g in circuit.gates() {
        let operands = g.qubits.iter().map(|q| format!("q[{q}]")).collect::<Vec<_>>().join(",");
        match g.kind {
            GateKind::Measure => out.push_str(&format!("measure q[{0}] -> c[{0}];\n", g.qubits[0])),
            GateKind::Barrier => out.push_str(&format!("barrier {operands};\n")),
            GateKind::Unitary | GateKind::Delay => {
                out.push_str(&g.name);
                if !g.params.is_empty() {
                    let params = g.params.iter().map(|p| format!("{p:?}")).collect::<Vec<_>>();
                    out.push_str(&format!("({})", params.join(",")));
                }
                out.push_str(&format!(" {operands};\n"));
            }
        }
    }
    out
}

//! Expression grammar: rationals, names, `+ - * / ^`, parentheses, jet
//! coordinates `u[2,1]`, ι-symbols `I(u[2,1])` and monotone symbols
//! `M(u[2,1];1,0)`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::kernel::{Coord, Indet, MultiIndex, Names, RatExpr, Q};

/// Exponents above this are rejected.
pub const MAX_EXPONENT: u32 = 64;
const MAX_DEPTH: usize = 128;

/// Extra name and function bindings visible to the parser.
pub trait Scope {
    fn name(&self, _name: &str) -> Option<RatExpr> {
        None
    }

    fn call(&self, _func: &str, _args: &[RatExpr]) -> Option<Result<RatExpr>> {
        None
    }
}

pub struct NoScope;

impl Scope for NoScope {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    Arrow,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub col: usize,
}

pub fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        let col = col0 + text[..pos].chars().count();
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            let end = chars.get(k).map_or(text.len(), |p| p.0);
            let digits = &text[chars[start].0..end];
            if digits.len() > 200 {
                return Err(Error::Parse { line, col, msg: "numeric literal too long".into() });
            }
            out.push(Token { tok: Tok::Num(digits.parse().expect("digits")), col });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].1.is_ascii_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            let end = chars.get(k).map_or(text.len(), |p| p.0);
            out.push(Token { tok: Tok::Ident(text[chars[start].0..end].to_string()), col });
        } else if c == '-' && chars.get(k + 1).is_some_and(|p| p.1 == '>') {
            out.push(Token { tok: Tok::Arrow, col });
            k += 2;
        } else if "+-*/^()[],;|=".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col });
            k += 1;
        } else {
            return Err(Error::Parse { line, col, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

pub struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    end_col: usize,
    names: &'a Names,
    scope: &'a dyn Scope,
    depth: usize,
}

impl<'a> Parser<'a> {
    pub fn new(text: &str, line: usize, col0: usize, names: &'a Names, scope: &'a dyn Scope) -> Result<Self> {
        let toks = tokenize(text, line, col0)?;
        let end_col = col0 + text.chars().count();
        Ok(Parser { toks, pos: 0, line, end_col, names, scope, depth: 0 })
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    pub fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line, col: self.col(), msg: msg.into() })
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    pub fn expect_arrow(&mut self) -> Result<()> {
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            Ok(())
        } else {
            self.err("expected `->`")
        }
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    pub fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a name"),
        }
    }

    pub fn uint(&mut self) -> Result<u32> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let v = u32::try_from(n).ok();
                match v {
                    Some(v) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    None => self.err("integer out of range"),
                }
            }
            _ => self.err("expected a non-negative integer"),
        }
    }

    pub fn expr(&mut self) -> Result<RatExpr> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("expression nested too deeply");
        }
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatExpr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let col = self.col();
                self.pos += 1;
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::Parse { line: self.line, col, msg: "division by zero".into() });
                }
                acc = acc.div(&d)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatExpr> {
        let mut negate = false;
        loop {
            if self.eat('-') {
                negate = !negate;
            } else if !self.eat('+') {
                break;
            }
        }
        let e = self.power()?;
        Ok(if negate { -e } else { e })
    }

    fn power(&mut self) -> Result<RatExpr> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.uint()?;
            if e > MAX_EXPONENT {
                return self.err(format!("exponent above {MAX_EXPONENT}"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatExpr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatExpr::constant(Q::from_integer(n)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                let col = self.col();
                self.pos += 1;
                self.named(&name, col)
            }
            _ => self.err("expected an expression"),
        }
    }

    fn named(&mut self, name: &str, col: usize) -> Result<RatExpr> {
        if (name == "I" || name == "M") && self.peek() == Some(&Tok::Sym('(')) {
            self.pos += 1;
            let c = self.coord()?;
            let beta = if name == "M" {
                self.expect(';')?;
                self.multi_index(self.names.indep.len())?
            } else {
                MultiIndex::zeros(self.names.indep.len())
            };
            self.expect(')')?;
            return Ok(RatExpr::var(Indet::mono(c, beta)));
        }
        if self.peek() == Some(&Tok::Sym('(')) {
            self.pos += 1;
            let mut args = vec![self.expr()?];
            while self.eat(',') {
                args.push(self.expr()?);
            }
            self.expect(')')?;
            return match self.scope.call(name, &args) {
                Some(r) => r,
                None => Err(Error::UnknownName { name: name.to_string(), line: self.line, col }),
            };
        }
        if let Some(c) = self.coord_named(name)? {
            return Ok(RatExpr::var(Indet::Coord(c)));
        }
        match self.scope.name(name) {
            Some(e) => Ok(e),
            None => Err(Error::UnknownName { name: name.to_string(), line: self.line, col }),
        }
    }

    fn coord_named(&mut self, name: &str) -> Result<Option<Coord>> {
        let m = self.names.indep.len();
        if let Some(i) = self.names.indep.iter().position(|x| x == name) {
            return Ok(Some(Coord::x(i)));
        }
        if let Some(j) = self.names.dep.iter().position(|x| x == name) {
            let alpha = if self.eat('[') {
                let a = self.multi_index(m)?;
                self.expect(']')?;
                a
            } else {
                MultiIndex::zeros(m)
            };
            return Ok(Some(Coord::u(j, alpha)));
        }
        Ok(None)
    }

    pub fn coord(&mut self) -> Result<Coord> {
        let col = self.col();
        let name = self.ident()?;
        match self.coord_named(&name)? {
            Some(c) => Ok(c),
            None => Err(Error::UnknownName { name, line: self.line, col }),
        }
    }

    /// `m` comma-separated integers; a lone `0` stands for the zero index.
    fn multi_index(&mut self, m: usize) -> Result<MultiIndex> {
        let mut parts = vec![self.uint()?];
        while self.eat(',') {
            parts.push(self.uint()?);
        }
        if parts.len() == 1 && parts[0] == 0 {
            return Ok(MultiIndex::zeros(m));
        }
        if parts.len() != m {
            return self.err(format!("multi-index needs {m} components, got {}", parts.len()));
        }
        if parts.iter().any(|&p| p > 255) {
            return self.err("multi-index component too large");
        }
        Ok(MultiIndex::from_slice(&parts))
    }
}

/// Parses a whole string as one expression.
pub fn parse_expr(text: &str, names: &Names, scope: &dyn Scope) -> Result<RatExpr> {
    let mut p = Parser::new(text, 1, 1, names, scope)?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

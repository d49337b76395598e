//! Expression language for lattices and codes.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := 'sqrt2' '*' term | INT '*'? term | factor
//! factor := '(' expr ')' | atom
//! atom   := A<n> | D<n> | E8 | Z<n> | Gamma16 | gram(row; row; ...)
//!         | zero(n) | rep(n) | hamming8 | rm14 | code(n; word, ...)
//!         | B(expr)
//! ```
//!
//! `+` is the orthogonal direct sum (for codes, the direct sum of codes).
//! `sqrt2*` doubles the Gram matrix and `k*` multiplies it by `k^2`, so
//! `2A1` is the lattice with Gram matrix `[[8]]`.

use num_bigint::BigInt;

use crate::code::{parse_word, BinaryCode};
use crate::construction_b::build_construction_b;
use crate::error::{Error, Result};
use crate::lattice::{matrix, Lattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Lattice(Lattice),
    Code(BinaryCode),
}

impl Value {
    pub fn into_lattice(self) -> Result<Lattice> {
        match self {
            Value::Lattice(l) => Ok(l),
            Value::Code(_) => Err(Error::Input("expected a lattice, found a code".into())),
        }
    }

    pub fn into_code(self) -> Result<BinaryCode> {
        match self {
            Value::Code(c) => Ok(c),
            Value::Lattice(_) => Err(Error::Input("expected a code, found a lattice".into())),
        }
    }

    /// Canonical expression that evaluates back to this value.
    pub fn to_expr(&self) -> String {
        match self {
            Value::Lattice(l) => l.to_expr(),
            Value::Code(c) => c.to_expr(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Num(s[st..i].to_string())));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
        } else if "()+*,;-".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

fn add(a: Value, b: Value, pos: usize) -> Result<Value> {
    match (a, b) {
        (Value::Lattice(x), Value::Lattice(y)) => Ok(Value::Lattice(x.direct_sum(&y))),
        (Value::Code(x), Value::Code(y)) => Ok(Value::Code(x.direct_sum(&y)?)),
        _ => Err(Error::Parse { pos, msg: "cannot add a lattice and a code".into() }),
    }
}

fn scale(v: Value, k: i64, pos: usize) -> Result<Value> {
    match v {
        Value::Lattice(l) => Ok(Value::Lattice(l.rescale(k)?)),
        Value::Code(_) => Err(Error::Parse { pos, msg: "cannot rescale a code".into() }),
    }
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.len, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn number(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                let v: i64 = match s.parse() {
                    Ok(v) => v,
                    Err(_) => return self.err("number out of range"),
                };
                self.at += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected a number"),
        }
    }

    fn count(&mut self) -> Result<usize> {
        let p = self.pos();
        let v = self.number()?;
        usize::try_from(v).map_err(|_| Error::Parse { pos: p, msg: "expected a non-negative number".into() })
    }

    fn expr(&mut self) -> Result<Value> {
        let mut v = self.term()?;
        loop {
            let p = self.pos();
            if !self.eat('+') {
                return Ok(v);
            }
            let rhs = self.term()?;
            v = add(v, rhs, p)?;
        }
    }

    fn term(&mut self) -> Result<Value> {
        let p = self.pos();
        match self.peek().cloned() {
            Some(Tok::Ident(id)) if id == "sqrt2" => {
                self.at += 1;
                self.expect('*')?;
                let v = self.term()?;
                scale(v, 2, p)
            }
            Some(Tok::Num(_)) => {
                let k = self.number()?;
                if k <= 0 {
                    return Err(Error::Parse { pos: p, msg: "scale factor must be positive".into() });
                }
                self.eat('*');
                let v = self.term()?;
                let k2 = k
                    .checked_mul(k)
                    .ok_or(Error::Parse { pos: p, msg: "scale factor too large".into() })?;
                scale(v, k2, p)
            }
            _ => self.factor(),
        }
    }

    fn factor(&mut self) -> Result<Value> {
        if self.eat('(') {
            let v = self.expr()?;
            self.expect(')')?;
            return Ok(v);
        }
        let p = self.pos();
        let id = match self.peek().cloned() {
            Some(Tok::Ident(id)) => id,
            Some(_) => return self.err("expected a name or '('"),
            None => return self.err("unexpected end of input"),
        };
        self.at += 1;
        self.atom(&id, p)
    }

    fn atom(&mut self, id: &str, p: usize) -> Result<Value> {
        let wrap = |r: Result<Lattice>| r.map(Value::Lattice);
        match id {
            "E8" => return wrap(e8()),
            "Gamma16" => return wrap(gamma16()),
            "hamming8" => return Ok(Value::Code(BinaryCode::hamming8())),
            "rm14" => return Ok(Value::Code(BinaryCode::rm14())),
            "gram" => return self.gram(),
            "zero" | "rep" => {
                self.expect('(')?;
                let n = self.count()?;
                self.expect(')')?;
                let c = if id == "zero" {
                    BinaryCode::zero(n)?
                } else {
                    BinaryCode::repetition(n)?
                };
                return Ok(Value::Code(c));
            }
            "code" => return self.code(),
            "B" => {
                self.expect('(')?;
                let c = self.expr()?;
                self.expect(')')?;
                let code = match c {
                    Value::Code(c) => c,
                    Value::Lattice(_) => {
                        return Err(Error::Parse { pos: p, msg: "B expects a code".into() })
                    }
                };
                return Ok(Value::Lattice(build_construction_b(&code, None)?.lattice));
            }
            _ => {}
        }
        let split = id.find(|c: char| c.is_ascii_digit()).unwrap_or(id.len());
        let (head, digits) = id.split_at(split);
        let n: usize = match digits.parse() {
            Ok(n) if n > 0 => n,
            _ => return Err(Error::UnknownName(id.to_string())),
        };
        match head {
            "A" => wrap(a_n(n)),
            "D" if n >= 2 => wrap(d_n(n)),
            "Z" => wrap(z_n(n)),
            _ => Err(Error::UnknownName(id.to_string())),
        }
    }

    fn gram(&mut self) -> Result<Value> {
        self.expect('(')?;
        let mut rows = vec![vec![self.number()?]];
        loop {
            if self.eat(',') {
                let v = self.number()?;
                rows.last_mut().expect("nonempty").push(v);
            } else if self.eat(';') {
                rows.push(vec![self.number()?]);
            } else {
                self.expect(')')?;
                break;
            }
        }
        Ok(Value::Lattice(Lattice::new(rows)?))
    }

    fn code(&mut self) -> Result<Value> {
        self.expect('(')?;
        let n = self.count()?;
        let mut words = Vec::new();
        if self.eat(';') {
            loop {
                let p = self.pos();
                match self.peek().cloned() {
                    Some(Tok::Num(s)) => {
                        self.at += 1;
                        let (len, w) = parse_word(&s).map_err(|_| Error::Parse {
                            pos: p,
                            msg: format!("bad codeword '{s}'"),
                        })?;
                        if len != n {
                            return Err(Error::Parse {
                                pos: p,
                                msg: format!("codeword '{s}' has length {len}, expected {n}"),
                            });
                        }
                        words.push(w);
                    }
                    _ => return self.err("expected a codeword"),
                }
                if !self.eat(',') {
                    break;
                }
            }
        }
        self.expect(')')?;
        Ok(Value::Code(BinaryCode::new(n, &words)?))
    }
}

/// Evaluates an expression.
pub fn parse_spec(expr: &str) -> Result<Value> {
    let toks = lex(expr)?;
    let mut p = Parser { toks, at: 0, len: expr.len() };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

pub fn parse_lattice(expr: &str) -> Result<Lattice> {
    parse_spec(expr)?.into_lattice()
}

pub fn parse_code(expr: &str) -> Result<BinaryCode> {
    parse_spec(expr)?.into_code()
}

pub fn a_n(n: usize) -> Result<Lattice> {
    let g = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    Lattice::new(g)
}

pub fn z_n(n: usize) -> Result<Lattice> {
    Lattice::new((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect())
}

/// Basis `e_i - e_{i+1}` and `e_{n-1} + e_n` of the even-sum vectors of `Z^n`.
fn d_basis(n: usize) -> Vec<Vec<i64>> {
    let mut b: Vec<Vec<i64>> = (0..n - 1)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v[i + 1] = -1;
            v
        })
        .collect();
    let mut last = vec![0; n];
    last[n - 2] = 1;
    last[n - 1] = 1;
    b.push(last);
    b
}

pub fn d_n(n: usize) -> Result<Lattice> {
    from_ambient(&d_basis(n), 1)
}

/// Lattice spanned by `gens / denom` in the standard Euclidean `Z^n`.
fn from_ambient(gens: &[Vec<i64>], denom: i64) -> Result<Lattice> {
    let h = matrix::to_i64(&matrix::hnf(&matrix::to_big(gens)));
    let d2 = denom * denom;
    let mut g = vec![vec![0i64; h.len()]; h.len()];
    for (i, x) in h.iter().enumerate() {
        for (j, y) in h.iter().enumerate() {
            let s: i64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
            if s % d2 != 0 {
                return Err(Error::NotIntegral {
                    row: i,
                    col: j,
                    value: format!("{}/{}", BigInt::from(s), d2),
                });
            }
            g[i][j] = s / d2;
        }
    }
    let red = matrix::lll_gram(&g);
    Lattice::new(red.reduced)
}

/// `D_n` together with the glue vector `(1/2, …, 1/2)`.
fn d_plus(n: usize) -> Result<Lattice> {
    let mut gens: Vec<Vec<i64>> = d_basis(n)
        .into_iter()
        .map(|v| v.into_iter().map(|x| 2 * x).collect())
        .collect();
    gens.push(vec![1; n]);
    from_ambient(&gens, 2)
}

pub fn e8() -> Result<Lattice> {
    d_plus(8)
}

pub fn gamma16() -> Result<Lattice> {
    d_plus(16)
}

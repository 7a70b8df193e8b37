//! Recursive-descent parser for algebra expressions.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)*
//! atom   := rational | generator | '(' expr ')' | '[' expr ',' expr ']'
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Algebra;
use crate::error::{Error, Result};
use crate::scalar::{add_scaled, scaled, SparseVec, Q};

/// A value in the unitization: `scalar * 1 + vec`. Lets nonunital algebras accept
/// literals like `2*x` while still rejecting a bare constant.
#[derive(Clone)]
struct Val {
    s: Q,
    v: SparseVec,
}

impl Val {
    fn scalar(s: Q) -> Self {
        Val {
            s,
            v: SparseVec::new(),
        }
    }

    fn add(mut self, o: &Val, sign: &Q) -> Val {
        self.s += &o.s * sign;
        add_scaled(&mut self.v, &o.v, sign);
        self
    }

    fn mul(&self, o: &Val, alg: &Algebra) -> Val {
        let mut v = alg.mul(&self.v, &o.v);
        add_scaled(&mut v, &o.v, &self.s);
        add_scaled(&mut v, &self.v, &o.s);
        Val {
            s: &self.s * &o.s,
            v,
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alg: &'a Algebra,
}

pub fn parse_vec(alg: &Algebra, text: &str) -> Result<SparseVec> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        alg,
    };
    let val = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    if val.s.is_zero() {
        return Ok(val.v);
    }
    let unit = alg.unit().ok_or(Error::UnitInNonunital)?;
    let mut v = val.v;
    add_scaled(&mut v, &unit, &val.s);
    Ok(v)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Val> {
        let neg = self.eat(b'-');
        let mut acc = self.term()?;
        if neg {
            acc = Val::scalar(Q::zero()).add(&acc, &-Q::one());
        }
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = acc.add(&t, &Q::one());
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = acc.add(&t, &-Q::one());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Val> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = acc.mul(&f, self.alg);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Val> {
        let base = self.atom()?;
        let mut acc = base;
        while self.eat(b'^') {
            let e = self.natural()?;
            let b = acc.clone();
            acc = Val::scalar(Q::one());
            for _ in 0..e {
                acc = acc.mul(&b, self.alg);
            }
        }
        Ok(acc)
    }

    fn natural(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number too large"))
    }

    fn atom(&mut self) -> Result<Val> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b']')?;
                let ab = a.mul(&b, self.alg);
                let ba = b.mul(&a, self.alg);
                Ok(ab.add(&ba, &-Q::one()))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let num: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                let mut val = Q::from_integer(num);
                // a '/' directly after an integer is part of the literal
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let dstart = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let den: BigInt = std::str::from_utf8(&self.src[dstart..self.pos])
                        .unwrap()
                        .parse()
                        .map_err(|_| self.err("expected a denominator"))?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    val /= Q::from_integer(den);
                }
                Ok(Val::scalar(val))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let idx = self
                    .alg
                    .names()
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::UnknownGenerator(name.into()))?;
                let v = match self.alg {
                    Algebra::Free(f) => f
                        .word_index(&[idx])
                        .map(crate::scalar::unit_vec)
                        .unwrap_or_default(),
                    Algebra::Structure(_) => crate::scalar::unit_vec(idx),
                };
                Ok(Val {
                    s: Q::zero(),
                    v: scaled(&v, &Q::one()),
                })
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

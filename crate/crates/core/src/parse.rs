//! Expression parser.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*'? factor)*
//! factor := base ('^' uint)?
//! base   := rational | var | macro | '(' expr ')'
//! var    := 'x' uint                      (1-based)
//! macro  := ('e'|'h'|'p'|'m'|'s') shape   shape := uint | '{' uint (',' uint)* '}'
//! ```
//!
//! Rationals are `a` or `a/b`; any other `/` is rejected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::Polynomial;
use crate::symfun::{self, BasisKind, Partition};

pub fn parse(expr: &str, nvars: usize, field: FieldSpec) -> Result<Polynomial> {
    let mut p = Parser {
        src: expr.as_bytes(),
        pos: 0,
        nvars,
        field,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err(format!("unexpected character '{}'", p.src[p.pos] as char)));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
    field: FieldSpec,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
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

    fn expr(&mut self) -> Result<Polynomial> {
        let negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'/') => return Err(self.err("division is only allowed inside a rational literal")),
                Some(c) if starts_base(c) => acc = &acc * &self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.uint()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint_big()?;
                let value = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                        return Err(self.err("division is only allowed inside a rational literal"));
                    }
                    let den = self.uint_big()?;
                    if den.is_zero() {
                        return Err(Error::Parse {
                            pos: start,
                            msg: "zero denominator".into(),
                        });
                    }
                    BigRational::new(num, den)
                } else {
                    BigRational::from_integer(num)
                };
                let c = self.field.from_rational(&value).map_err(|_| Error::Parse {
                    pos: start,
                    msg: format!("denominator vanishes in {}", self.field),
                })?;
                Ok(Polynomial::constant(self.nvars, c))
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.uint()?;
                if i == 0 || i as usize > self.nvars {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("unknown variable x{i} (have x1..x{})", self.nvars),
                    });
                }
                Ok(Polynomial::var(self.nvars, self.field, i as usize - 1))
            }
            Some(c @ (b'e' | b'h' | b'p' | b'm' | b's')) => {
                self.pos += 1;
                let kind = match c {
                    b'e' => BasisKind::Elementary,
                    b'h' => BasisKind::Homogeneous,
                    b'p' => BasisKind::PowerSum,
                    b'm' => BasisKind::Monomial,
                    _ => BasisKind::Schur,
                };
                let parts = self.shape()?;
                let shape = Partition::new(parts).map_err(|e| Error::Parse {
                    pos: start,
                    msg: e.to_string(),
                })?;
                symfun::basis_poly(kind, &shape, self.nvars, self.field)
            }
            Some(c) => Err(self.err(format!("unexpected character '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn shape(&mut self) -> Result<Vec<u32>> {
        if self.src.get(self.pos) == Some(&b'{') {
            self.pos += 1;
            let mut parts = Vec::new();
            loop {
                self.skip_ws();
                let v = self.uint()?;
                parts.push(u32::try_from(v).map_err(|_| self.err("part too large"))?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b'}') => {
                        self.pos += 1;
                        return Ok(parts);
                    }
                    _ => return Err(self.err("expected ',' or '}' in shape")),
                }
            }
        }
        let v = self.uint()?;
        Ok(vec![u32::try_from(v).map_err(|_| self.err("part too large"))?])
    }

    fn digits(&mut self) -> Result<&str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an unsigned integer"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "integer too large".into(),
        })
    }

    fn uint_big(&mut self) -> Result<BigInt> {
        let d = self.digits()?;
        Ok(d.parse().expect("digit string"))
    }
}

fn starts_base(c: u8) -> bool {
    c.is_ascii_digit() || matches!(c, b'x' | b'(' | b'e' | b'h' | b'p' | b'm' | b's')
}

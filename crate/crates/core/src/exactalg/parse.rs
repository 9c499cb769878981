//! Expression parser for rational functions.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' signed_integer)?
//! atom   := integer | identifier | '(' expr ')' | '-' factor
//! ```
//!
//! Integers are arbitrary precision; identifiers match
//! `[A-Za-z_][A-Za-z0-9_]*`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ratfunc::RatFunc;
use super::vars::Vars;
use super::Error;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

/// Parse `text` into a canonical rational function over `vars`.
pub fn parse(text: &str, vars: &Vars) -> Result<RatFunc, Error> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc, Error> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = &acc + &t;
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = &acc - &t;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, Error> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                let t = self.factor()?;
                acc = &acc * &t;
            } else if self.eat(b'/') {
                let dpos = self.pos;
                let t = self.factor()?;
                acc = (&acc / &t).map_err(|_| Error::Parse {
                    pos: dpos,
                    msg: "division by the zero function".to_string(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc, Error> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let epos = self.pos;
            let e = self.signed_integer()?;
            let e: i64 = e
                .try_into()
                .map_err(|_| Error::Parse { pos: epos, msg: "exponent too large".into() })?;
            base.pow(e).map_err(|_| Error::Parse {
                pos: epos,
                msg: "negative power of the zero function".to_string(),
            })
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RatFunc, Error> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                self.skip_ws();
                let f = self.factor()?;
                Ok(-&f)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                self.skip_ws();
                Ok(RatFunc::constant(self.vars, BigRational::from_integer(n)))
            }
            Some(c) if c == b'_' || c.is_ascii_alphabetic() => {
                let name = self.identifier();
                self.skip_ws();
                RatFunc::var(self.vars, &name)
            }
            _ => Err(self.err("expected integer, identifier, '(' or '-'")),
        }
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c == b'_' || c.is_ascii_alphanumeric())
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn integer(&mut self) -> Result<BigInt, Error> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }

    fn signed_integer(&mut self) -> Result<BigInt, Error> {
        let neg = self.eat(b'-');
        let n = self.integer()?;
        self.skip_ws();
        Ok(if neg { -n } else { n })
    }
}

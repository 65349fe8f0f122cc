//! Shared text syntax for polynomials, rational functions and matrix rows.
//!
//! Polynomials are sums of terms `c`, `cD`, `cD^k` (also bare `D`, `D^k`),
//! e.g. `5+3D+19D^2+9D^3`. Printing uses ascending powers with coefficients
//! reduced to `[0, p^r)`. Rational functions are `num/den` with either side
//! optionally parenthesized, e.g. `D/(2+D)`.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::RationalFn;
use crate::ring::RingCtx;

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src.get(self.pos).map(|&b| b as char)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse { line: 1, col: self.pos + 1, msg: msg.to_string() }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| self.err("number out of range"))
    }

    /// term := number | number 'D' power? | 'D' power?   (power := '^' number)
    fn term(&mut self, ring: RingCtx) -> Result<(u64, usize)> {
        let mut coeff = 1u64;
        let mut saw_number = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            coeff = self.number()? % ring.modulus();
            saw_number = true;
        }
        if self.peek() == Some('D') {
            self.bump();
            let mut power = 1usize;
            if self.peek() == Some('^') {
                self.bump();
                power = self.number()? as usize;
                if power > 10_000 {
                    return Err(self.err("exponent too large"));
                }
            }
            Ok((coeff, power))
        } else if saw_number {
            Ok((coeff, 0))
        } else {
            Err(self.err("expected a term like `c`, `cD` or `cD^k`"))
        }
    }

    fn poly(&mut self, ring: RingCtx) -> Result<Poly> {
        let mut acc = Poly::zero(ring);
        let mut negate = false;
        if self.peek() == Some('-') {
            self.bump();
            negate = true;
        }
        loop {
            let (c, k) = self.term(ring)?;
            let c = if negate { ring.neg(c) } else { c };
            acc = acc.add(&Poly::monomial(ring, c, k));
            match self.peek() {
                Some('+') => {
                    self.bump();
                    negate = false;
                }
                Some('-') => {
                    self.bump();
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// operand := '(' poly ')' | poly
    fn operand(&mut self, ring: RingCtx) -> Result<Poly> {
        if self.peek() == Some('(') {
            self.bump();
            let p = self.poly(ring)?;
            if self.bump() != Some(')') {
                return Err(self.err("expected `)`"));
            }
            Ok(p)
        } else {
            self.poly(ring)
        }
    }

    fn rational(&mut self, ring: RingCtx) -> Result<RationalFn> {
        let num = self.operand(ring)?;
        if self.peek() == Some('/') {
            self.bump();
            let den = self.operand(ring)?;
            RationalFn::new(num, den)
        } else {
            Ok(RationalFn::from_poly(num))
        }
    }

    fn end(&mut self) -> Result<()> {
        if self.peek().is_some() {
            Err(self.err("unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

pub fn parse_poly(ring: RingCtx, s: &str) -> Result<Poly> {
    let mut sc = Scanner::new(s);
    let p = sc.poly(ring)?;
    sc.end()?;
    Ok(p)
}

pub fn parse_rational(ring: RingCtx, s: &str) -> Result<RationalFn> {
    let mut sc = Scanner::new(s);
    let r = sc.rational(ring)?;
    sc.end()?;
    Ok(r)
}

/// Parses a bracketed row `[e1, e2, ...]` of polynomials.
pub fn parse_row(ring: RingCtx, s: &str) -> Result<Vec<Poly>> {
    let mut sc = Scanner::new(s);
    if sc.bump() != Some('[') {
        return Err(sc.err("expected `[`"));
    }
    let mut row = Vec::new();
    if sc.peek() == Some(']') {
        sc.bump();
        sc.end()?;
        return Ok(row);
    }
    loop {
        row.push(sc.poly(ring)?);
        match sc.bump() {
            Some(',') => continue,
            Some(']') => break,
            _ => return Err(sc.err("expected `,` or `]`")),
        }
    }
    sc.end()?;
    Ok(row)
}

pub fn poly_to_string(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (k, &c) in p.coeffs().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let part = match (c, k) {
            (c, 0) => format!("{c}"),
            (1, 1) => "D".to_string(),
            (c, 1) => format!("{c}D"),
            (1, k) => format!("D^{k}"),
            (c, k) => format!("{c}D^{k}"),
        };
        parts.push(part);
    }
    parts.join("+")
}

pub fn rational_to_string(r: &RationalFn) -> String {
    if r.den().is_one() {
        poly_to_string(r.num())
    } else {
        format!("({})/({})", poly_to_string(r.num()), poly_to_string(r.den()))
    }
}

pub fn row_to_string(row: &[Poly]) -> String {
    let cells: Vec<String> = row.iter().map(poly_to_string).collect();
    format!("[{}]", cells.join(", "))
}

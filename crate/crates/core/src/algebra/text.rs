//! Text forms: `poly: 3*x0^2*x1 + 1/2` and `alghom: x0 -> x1^2; x1 -> x0`.

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, Rational};
use crate::QPoly;

use super::ring::{Algebra, AlgebraMorphism};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
    /// Column of the first byte, for error positions inside a larger line.
    offset: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { line: 1, column: self.offset + self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
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

    fn digits(&mut self) -> Option<u64> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn sum(&mut self) -> Result<QPoly> {
        let mut acc = if self.eat(b'-') { self.product()?.neg() } else { self.product()? };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.product()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<QPoly> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat(b'/') {
                self.skip_ws();
                let d = self.digits().ok_or_else(|| self.error("expected an integer denominator"))?;
                if d == 0 {
                    return Err(Error::DivisionByZero);
                }
                acc = acc.scale(&Rational::new(1.into(), d.into()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<QPoly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.digits().and_then(|e| e.to_u32()).ok_or_else(|| self.error("expected an exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.digits().ok_or_else(|| self.error("expected a variable index"))? as usize;
                if i >= self.nvars {
                    return Err(Error::UnboundVariable { index: i, dim: self.nvars });
                }
                Ok(QPoly::var(self.nvars, i))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits().ok_or_else(|| self.error("integer too large"))?;
                Ok(QPoly::constant(self.nvars, int(n as i64)))
            }
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn parse_in(src: &str, nvars: usize, offset: usize) -> Result<QPoly> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, nvars, offset };
    let out = p.sum()?;
    if p.peek().is_some() {
        return Err(p.error("trailing input"));
    }
    Ok(out)
}

fn strip_tag<'a>(src: &'a str, tag: &str) -> (&'a str, usize) {
    let trimmed = src.trim_start();
    let lead = src.len() - trimmed.len();
    match trimmed.strip_prefix(tag) {
        Some(rest) => (rest, lead + tag.len()),
        None => (src, 0),
    }
}

/// Largest `x<k>` index plus one.
fn infer_nvars(src: &str) -> usize {
    let b = src.as_bytes();
    let mut n = 0;
    for (i, &c) in b.iter().enumerate() {
        if c == b'x' {
            let digits: String = b[i + 1..].iter().take_while(|d| d.is_ascii_digit()).map(|&d| d as char).collect();
            if let Ok(k) = digits.parse::<usize>() {
                n = n.max(k + 1);
            }
        }
    }
    n
}

/// A polynomial in `nvars` variables, or as many as it mentions.
pub fn parse_poly(src: &str, nvars: Option<usize>) -> Result<QPoly> {
    let (body, offset) = strip_tag(src, "poly:");
    parse_in(body, nvars.unwrap_or_else(|| infer_nvars(body)), offset)
}

/// A morphism `source → target`; every source generator gets exactly one
/// clause `x<i> -> image`.
pub fn parse_alghom(src: &str, source: &Algebra, target: &Algebra) -> Result<AlgebraMorphism> {
    let (body, offset) = strip_tag(src, "alghom:");
    let mut images: Vec<Option<QPoly>> = vec![None; source.gens()];
    let mut at = offset;
    for clause in body.split(';') {
        let here = at;
        at += clause.len() + 1;
        if clause.trim().is_empty() {
            continue;
        }
        let syntax = |message: String| Error::Syntax { line: 1, column: here + 1, message };
        let (lhs, rhs) = clause.split_once("->").ok_or_else(|| syntax("expected 'x<i> -> image'".into()))?;
        let i: usize = lhs
            .trim()
            .strip_prefix('x')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| syntax(format!("expected a generator, found '{}'", lhs.trim())))?;
        let slot = images.get_mut(i).ok_or(Error::UnboundVariable { index: i, dim: source.gens() })?;
        if slot.is_some() {
            return Err(syntax(format!("x{i} is assigned twice")));
        }
        *slot = Some(parse_in(rhs, target.gens(), here + lhs.len() + 2)?);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| Error::Syntax { line: 1, column: 1, message: format!("no image for x{i}") }))
        .collect::<Result<Vec<_>>>()?;
    AlgebraMorphism::new(source.clone(), target.clone(), images)
}

/// Print a polynomial back in the text form.
pub fn format_poly(p: &QPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let negative = *c < Rational::zero();
        let mag = if negative { -c.clone() } else { c.clone() };
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mut factors: Vec<String> = Vec::new();
        let unit = mag == int(1);
        if !unit || m.iter().all(|&e| e == 0) {
            factors.push(if mag.is_integer() { mag.numer().to_string() } else { format!("{}/{}", mag.numer(), mag.denom()) });
        }
        for (i, &e) in m.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(format!("x{i}")),
                _ => factors.push(format!("x{i}^{e}")),
            }
        }
        // a fractional coefficient needs the variables first so `/d` binds to it
        if !unit && !mag.is_integer() && factors.len() > 1 {
            let coef = factors.remove(0);
            let (num, den) = coef.split_once('/').unwrap();
            factors.insert(0, num.to_string());
            out.push_str(&factors.join("*"));
            out.push('/');
            out.push_str(den);
        } else {
            out.push_str(&factors.join("*"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn polynomial_text() {
        let p = parse_poly("poly: 3*x0^2*x1 + 1/2", None).unwrap();
        let x = |i| QPoly::var(2, i);
        assert_eq!(p, x(0).pow(2).mul(&x(1)).scale(&int(3)).add(&QPoly::constant(2, rat(1, 2))));
        assert_eq!(parse_poly(&format_poly(&p), Some(2)).unwrap(), p);
        assert!(matches!(parse_poly("x0 +", None), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x3", Some(2)), Err(Error::UnboundVariable { .. })));
    }

    #[test]
    fn morphism_text() {
        let r = Algebra::polynomial(2);
        let f = parse_alghom("alghom: x0 -> x1^2; x1 -> x0", &r, &r).unwrap();
        assert_eq!(f.images()[0], QPoly::var(2, 1).pow(2));
        assert!(parse_alghom("x0 -> x1", &r, &r).is_err());
        let sq = Algebra::quotient(vec![int(0), int(0), int(1)]).unwrap();
        assert!(parse_alghom("x0 -> 1", &sq, &sq).is_err());
    }
}

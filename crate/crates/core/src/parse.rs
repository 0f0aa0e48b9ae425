//! Text syntax for words, relations and complex numbers.
//!
//! Words are written with one-based letters; `~` separates the preamble
//! from the period, so `13~2` is `1 3 2 2 2 ..` and `~2` is `2 2 2 ..`.
//! When an alphabet has ten or more letters the symbols are separated by
//! dots: `1.12~3`. A relation is two words joined by `=`.
//!
//! Complex literals accept the usual arithmetic over real numbers and `i`:
//! `0.5`, `-i/2`, `1.5+0.5i`, `(-1+i*sqrt(7))/4`.

use num_complex::Complex64;

use crate::tree::{Alphabet, EpWord, FiniteWord, Relation};
use crate::{Error, Result};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_symbols(text: &str, dotted: bool) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let letter = |s: &str| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(0) => Err(perr("letters are numbered from 1")),
            Ok(l) => Ok(l),
            Err(_) => Err(perr(format!("bad letter {s:?}"))),
        }
    };
    if dotted {
        // a leading dot marks dotted notation for one-letter words like `.10`
        let text = text.strip_prefix('.').unwrap_or(text);
        if text.is_empty() {
            return Ok(Vec::new());
        }
        text.split('.').map(letter).collect()
    } else {
        text.chars()
            .map(|ch| match ch.to_digit(10) {
                Some(0) => Err(perr("letters are numbered from 1")),
                Some(d) => Ok(d as usize),
                None => Err(perr(format!("bad letter {ch:?}"))),
            })
            .collect()
    }
}

/// Parses a finite word such as `1322` (or `1.12.3`, and `.10` for the
/// single letter 10).
pub fn parse_finite_word(text: &str) -> Result<FiniteWord> {
    if text.contains('~') {
        return Err(perr("finite words have no period"));
    }
    FiniteWord::from_one_based(&parse_symbols(text, text.contains('.'))?)
}

/// Parses an eventually periodic word such as `13~2`.
pub fn parse_ep_word(text: &str) -> Result<EpWord> {
    let (pre, per) = text
        .split_once('~')
        .ok_or_else(|| perr(format!("missing '~' before the period in {text:?}")))?;
    let dotted = text.contains('.');
    let pre = parse_symbols(pre, dotted)?;
    let per = parse_symbols(per, dotted)?;
    if per.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    EpWord::from_one_based(&pre, &per)
}

/// Parses a relation such as `13~2=21~2`.
pub fn parse_relation(text: &str) -> Result<Relation> {
    let (a, b) = text
        .split_once('=')
        .ok_or_else(|| perr(format!("a relation needs '=' in {text:?}")))?;
    Relation::new(parse_ep_word(a)?, parse_ep_word(b)?)
}

/// Parses a comma- or semicolon-separated list of relations.
pub fn parse_relations(text: &str) -> Result<Vec<Relation>> {
    text.split([',', ';'])
        .filter(|s| !s.trim().is_empty())
        .map(parse_relation)
        .collect()
}

/// Splits at top-level commas, leaving commas inside parentheses alone.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' | ';' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

/// Parses a list of complex letters such as `i/2,1/2,-i/2`.
pub fn parse_alphabet(text: &str) -> Result<Alphabet> {
    let letters = split_top_level(text)
        .into_iter()
        .map(parse_complex)
        .collect::<Result<Vec<_>>>()?;
    Alphabet::new(letters)
}

/// Parses a complex literal or small arithmetic expression.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let mut p = ExprParser {
        src: text.as_bytes(),
        pos: 0,
        depth: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(perr(format!("unexpected input at offset {} in {text:?}", p.pos)));
    }
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(perr(format!("{text:?} is not a finite number")));
    }
    Ok(v)
}

/// Formats a complex number the way [`parse_complex`] reads it back.
pub fn format_complex(z: Complex64) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    if im.is_sign_negative() {
        format!("{}-{}i", format_real(re), format_real(-im))
    } else {
        format!("{}+{}i", format_real(re), format_real(im))
    }
}

/// Shortest round-trip decimal, switching to exponent notation for very
/// small or very large magnitudes.
pub fn format_real(x: f64) -> String {
    if x != 0.0 && x.is_finite() && !(1e-5..1e16).contains(&x.abs()) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

const MAX_NESTING: usize = 64;

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl<'a> ExprParser<'a> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Complex64> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc += self.term()?;
            } else if self.eat(b'-') {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Complex64> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc *= self.unary()?;
            } else if self.eat(b'/') {
                acc /= self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Complex64> {
        if self.eat(b'-') {
            return Ok(-self.nested(Self::unary)?);
        }
        if self.eat(b'+') {
            return self.nested(Self::unary);
        }
        let base = self.primary()?;
        if self.eat(b'^') {
            let negative = self.eat(b'-');
            let e = self.integer()?;
            let p = base.powi(e);
            return Ok(if negative { 1.0 / p } else { p });
        }
        Ok(base)
    }

    fn nested(&mut self, f: fn(&mut Self) -> Result<Complex64>) -> Result<Complex64> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(perr("expression nested too deeply"));
        }
        let v = f(self);
        self.depth -= 1;
        v
    }

    fn integer(&mut self) -> Result<i32> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<i32>().ok())
            .filter(|e| *e <= 1024)
            .ok_or_else(|| perr("expected a small integer exponent"))
    }

    fn primary(&mut self) -> Result<Complex64> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.nested(Self::expr)?;
                if !self.eat(b')') {
                    return Err(perr("missing ')'"));
                }
                Ok(v)
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => {
                let x = self.number()?;
                // `0.5i` (or `0.5j`) is shorthand for `0.5*i`
                if matches!(self.src.get(self.pos), Some(b'i' | b'j')) && !self.ident_follows(self.pos + 1) {
                    self.pos += 1;
                    Ok(Complex64::new(0.0, x))
                } else {
                    Ok(Complex64::new(x, 0.0))
                }
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let name = self.ident();
                match name {
                    "i" | "j" => Ok(Complex64::i()),
                    "pi" => Ok(Complex64::new(std::f64::consts::PI, 0.0)),
                    "sqrt" | "exp" => {
                        if !self.eat(b'(') {
                            return Err(perr(format!("{name} needs '('")));
                        }
                        let arg = self.nested(Self::expr)?;
                        if !self.eat(b')') {
                            return Err(perr("missing ')'"));
                        }
                        Ok(if name == "sqrt" { arg.sqrt() } else { arg.exp() })
                    }
                    other => Err(perr(format!("unknown name {other:?}"))),
                }
            }
            Some(b) => Err(perr(format!("unexpected {:?}", b as char))),
            None => Err(perr("unexpected end of input")),
        }
    }

    fn ident_follows(&self, pos: usize) -> bool {
        self.src.get(pos).is_some_and(|b| b.is_ascii_alphanumeric())
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_alphabetic) {
            self.pos += 1;
        }
        let src: &'a [u8] = self.src;
        std::str::from_utf8(&src[start..self.pos]).unwrap_or("")
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.src.get(p.pos).is_some_and(u8::is_ascii_digit) {
                p.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E'))
            && self
                .src
                .get(self.pos + 1)
                .is_some_and(|b| b.is_ascii_digit() || *b == b'-' || *b == b'+')
        {
            self.pos += 2;
            digits(self);
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .ok_or_else(|| perr("malformed number"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_literals() {
        for (text, want) in [
            ("i/2", c(0.0, 0.5)),
            ("-i/2", c(0.0, -0.5)),
            ("1/2", c(0.5, 0.0)),
            ("0+0.5i", c(0.0, 0.5)),
            ("1.5+0.5i", c(1.5, 0.5)),
            ("1.5-0.5i", c(1.5, -0.5)),
            ("(-1+i)/2", c(-0.5, 0.5)),
            ("2.5e-1", c(0.25, 0.0)),
            ("-1e2i", c(0.0, -100.0)),
            ("2*i^2", c(-2.0, 0.0)),
            (" 3 ", c(3.0, 0.0)),
        ] {
            let got = parse_complex(text).unwrap();
            assert!((got - want).norm() < 1e-15, "{text}: {got}");
        }
        let z = parse_complex("(-1+i*sqrt(7))/4").unwrap();
        assert!((z - c(-0.25, 7f64.sqrt() / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn bad_literals() {
        for text in ["", "1+", "(1", "1/0", "foo", "1 2", "i i", "1e", "2^x", "--"] {
            assert!(parse_complex(text).is_err(), "{text:?}");
        }
        let deep = "(".repeat(1000) + "1" + &")".repeat(1000);
        assert!(parse_complex(&deep).is_err());
    }

    #[test]
    fn format_round_trip() {
        for z in [c(1.5, 0.5), c(-0.25, -1e-20), c(0.0, -0.0), c(3.0, 0.0)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
        assert_eq!(format_complex(c(1.5, 0.5)), "1.5+0.5i");
    }

    #[test]
    fn words() {
        let w = parse_ep_word("13~2").unwrap();
        assert_eq!(w, EpWord::from_one_based(&[1, 3], &[2]).unwrap());
        assert_eq!(w.to_string(), "13~2");
        let p = parse_ep_word("~2").unwrap();
        assert!(p.preamble().is_empty());
        assert_eq!(
            parse_ep_word("1.12~3").unwrap(),
            EpWord::from_one_based(&[1, 12], &[3]).unwrap()
        );
        assert_eq!(parse_ep_word("13~"), Err(Error::EmptyPeriod));
        assert!(parse_ep_word("132").is_err());
        assert!(parse_ep_word("10~2").is_err());
        assert!(parse_finite_word("1x").is_err());
        assert_eq!(parse_finite_word("1112").unwrap().len(), 4);
        assert!(parse_finite_word("").unwrap().is_empty());
    }

    #[test]
    fn relations_and_alphabets() {
        let r = parse_relation("13~2=21~2").unwrap();
        assert_eq!(r.to_string(), "13~2=21~2");
        assert_eq!(parse_relation("13~2=12~2"), Err(Error::SameFirstLetter));
        assert_eq!(parse_relations("13~2=21~2; 31~2=23~2").unwrap().len(), 2);
        let a = parse_alphabet("i/2,1/2,-i/2").unwrap();
        assert_eq!(a.letters(), &[c(0.0, 0.5), c(0.5, 0.0), c(0.0, -0.5)]);
        assert!(parse_alphabet("sqrt(0.1),(1,2)").is_err());
    }
}

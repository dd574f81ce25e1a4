//! Text syntax for expressions.
//!
//! ```text
//! expr     := [sign] term { ("+" | "-") term }
//! term     := [rational] mono
//! mono     := { mode } "vac"
//! mode     := vector "_(" int ")"
//! vector   := "[" int { "," int } "]" | "a"        ("a" means "[1]")
//! rational := int [ "/" posint ]
//! ```
//!
//! Only ASCII is accepted; in particular the Unicode minus sign is rejected.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::fockspace::{Heisenberg, Partition};
use crate::rational::{self, Rational};
use crate::rewrite::{Canonicalizer, Expression, Mode, Word};
use crate::{Error, Result};

struct Parser<'s> {
    src: &'s str,
    pos: usize,
}

impl<'s> Parser<'s> {
    fn error(&self, expected: &str) -> Error {
        Error::Parse {
            position: self.pos,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("'{token}'")))
        }
    }

    fn digits(&mut self) -> Option<&'s str> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn natural(&mut self) -> Result<BigInt> {
        let d = self.digits().ok_or_else(|| self.error("digits"))?;
        Ok(d.parse().expect("ASCII digits"))
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        let start = self.pos;
        let n = self.natural()?;
        let n = if neg { -n } else { n };
        i64::try_from(n).map_err(|_| Error::Parse {
            position: start,
            expected: "an integer that fits in 64 bits".into(),
        })
    }

    fn part(&mut self) -> Result<u32> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let n = self.natural()?;
        match u32::try_from(n) {
            Ok(p) if p > 0 => Ok(p),
            _ => Err(Error::Parse {
                position: start,
                expected: "a positive part".into(),
            }),
        }
    }

    fn vector(&mut self) -> Result<Option<Partition>> {
        self.skip_ws();
        if self.src[self.pos..].starts_with('a') {
            self.pos += 1;
            return Ok(Some(Partition::from_parts(&[1])));
        }
        if !self.eat("[") {
            return Ok(None);
        }
        let mut parts = vec![self.part()?];
        while self.eat(",") {
            parts.push(self.part()?);
        }
        self.expect("]")?;
        Ok(Some(Partition::new(parts).expect("parts are positive")))
    }

    fn mono(&mut self) -> Result<Word<Partition>> {
        let mut modes = Vec::new();
        loop {
            if self.eat("vac") {
                return Ok(modes);
            }
            match self.vector()? {
                Some(label) => {
                    self.expect("_(")?;
                    let index = self.signed_int()?;
                    self.expect(")")?;
                    modes.push(Mode::new(label, index));
                }
                None => return Err(self.error("a vector, 'a' or 'vac'")),
            }
        }
    }

    fn coefficient(&mut self) -> Result<Rational> {
        let Some(d) = self.digits() else {
            return Ok(Rational::one());
        };
        let numer: BigInt = d.parse().expect("ASCII digits");
        if !self.eat("/") {
            return Ok(Rational::from_integer(numer));
        }
        let start = {
            self.skip_ws();
            self.pos
        };
        let denom = self.natural()?;
        if denom.is_zero() || denom.is_negative() {
            return Err(Error::Parse {
                position: start,
                expected: "a positive denominator".into(),
            });
        }
        Ok(Rational::new(numer, denom))
    }

    fn term(&mut self) -> Result<(Rational, Word<Partition>)> {
        let c = self.coefficient()?;
        Ok((c, self.mono()?))
    }
}

/// Parses `text` into a canonical expression: vacuum modes are resolved and
/// structurally zero words dropped.
pub fn parse_expression(text: &str) -> Result<Expression<Partition>> {
    let mut p = Parser { src: text, pos: 0 };
    let alg = Heisenberg::new();
    let canon = Canonicalizer::new(&alg);
    let mut out = Expression::zero();

    let mut negative = if p.eat("-") {
        true
    } else {
        p.eat("+");
        false
    };
    loop {
        let (c, w) = p.term()?;
        canon.add(&mut out, w, if negative { -c } else { c });
        if p.eat("+") {
            negative = false;
        } else if p.eat("-") {
            negative = true;
        } else {
            break;
        }
    }
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("'+', '-' or end of input"));
    }
    Ok(out)
}

fn render_mode(m: &Mode<Partition>) -> String {
    let v = if m.label.parts() == [1] {
        "a".to_string()
    } else {
        m.label.to_string()
    };
    format!("{v}_({})", m.index)
}

/// Renders in the syntax accepted by [`parse_expression`]; `0` for the empty
/// expression (which does not parse back).
pub fn render(e: &Expression<Partition>) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (w, c)) in e.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if !mag.is_one() {
            out.push_str(&rational::to_string(&mag));
            out.push(' ');
        }
        for m in w {
            out.push_str(&render_mode(m));
            out.push(' ');
        }
        out.push_str("vac");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(parts: &[u32], index: i64) -> Mode<Partition> {
        Mode::new(Partition::from_parts(parts), index)
    }

    #[test]
    fn grammar_examples() {
        let e = parse_expression("a_(-1) a_(-1) vac").unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.coeff(&vec![m(&[1], -1), m(&[1], -1)]), int(1));

        let e = parse_expression("3/2 [2,1]_(-4) vac - vac").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.coeff(&vec![m(&[2, 1], -4)]), ratio(3, 2));
        assert_eq!(e.coeff(&vec![]), int(-1));

        let e = parse_expression("-2 vac + [1,2]_(-3)vac").unwrap();
        assert_eq!(e.coeff(&vec![]), int(-2));
        assert_eq!(e.coeff(&vec![m(&[2, 1], -3)]), int(1));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expression("a_(-1") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("{other:?}"),
        }
        match parse_expression("a_(\u{2212}1) vac") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expression("[0]_(-1) vac"), Err(Error::Parse { .. })));
        assert!(matches!(parse_expression("1/0 vac"), Err(Error::Parse { .. })));
        assert!(matches!(parse_expression("vac vac"), Err(Error::Parse { .. })));
        assert!(matches!(parse_expression(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn render_round_trip() {
        let e = parse_expression("3/2 [2,1]_(-4) a_(-1) vac - vac + 7 [3]_(-2) vac").unwrap();
        let text = render(&e);
        assert_eq!(parse_expression(&text).unwrap(), e);
    }
}

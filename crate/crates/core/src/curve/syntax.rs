//! Text form of curves.
//!
//! ```text
//! curve   := ("poly:" coeffs | "implicit:" expr | "pow:" INT) ["@" domain]
//! coeffs  := number ("," number)*
//! domain  := ("[" | "(") number "," number ("]" | ")")
//! expr    := ["+" | "-"] term (("+" | "-") term)*
//! term    := factor ("*" factor)*
//! factor  := atom ["^" INT]
//! atom    := number | "x" | "y" | "(" expr ")"
//! number  := ["-"] INT ["/" INT]        (sign only outside expr)
//! ```
//!
//! Whitespace is ignored everywhere. A missing domain means `[0,1]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{BiPoly, Curve, CurveKind};
use crate::arith::{IntervalQ, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

pub fn parse_curve(src: &str) -> Result<Curve, ParseError> {
    let mut p = Parser::new(src);
    let curve = p.curve()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error(format!("unexpected '{c}'")));
    }
    Ok(curve)
}

impl FromStr for Curve {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_curve(s)
    }
}

/// Canonical form; `parse_curve` reads it back to an equal curve.
impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            CurveKind::PolyGraph(c) => {
                let body: Vec<String> = c.iter().map(Rational::to_string).collect();
                write!(f, "poly:{}", body.join(","))?;
            }
            CurveKind::Implicit(p) => write!(f, "implicit:{p}")?,
            CurveKind::PowGraph(b) => write!(f, "pow:{b}")?,
        }
        write!(f, "@{}", self.domain())
    }
}

impl serde::Serialize for Curve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Curve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_curve(&text).map_err(serde::de::Error::custom)
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    idx: usize,
    len: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Parser { chars: src.char_indices().collect(), idx: 0, len: src.len() }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.idx).map_or(self.len, |&(p, _)| p)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos(), message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.idx).is_some_and(|(_, c)| c.is_whitespace()) {
            self.idx += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let message = match self.peek() {
                Some(found) => format!("expected '{c}', found '{found}'"),
                None => format!("expected '{c}', found end of input"),
            };
            Err(self.error(message))
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let mut out = String::new();
        while let Some(&(_, c)) = self.chars.get(self.idx) {
            if !c.is_ascii_alphabetic() {
                break;
            }
            out.push(c);
            self.idx += 1;
        }
        out
    }

    fn curve(&mut self) -> Result<Curve, ParseError> {
        let start = self.pos();
        let kind = self.word();
        self.expect(':')?;
        let body_pos = self.pos();
        let kind = match kind.as_str() {
            "poly" => {
                let mut coeffs = vec![self.number()?];
                while self.eat(',') {
                    coeffs.push(self.number()?);
                }
                CurveKind::PolyGraph(coeffs)
            }
            "implicit" => CurveKind::Implicit(self.expr()?),
            "pow" => {
                let base = self.uint()?;
                let base = u64::try_from(&base).map_err(|_| ParseError { pos: body_pos, message: "base too large".into() })?;
                CurveKind::PowGraph(base)
            }
            other => {
                return Err(ParseError { pos: start, message: format!("unknown curve kind '{other}', expected poly, implicit or pow") })
            }
        };
        let domain_pos = self.pos();
        let domain = if self.eat('@') { self.domain()? } else { IntervalQ::unit() };
        let built = match kind {
            CurveKind::PolyGraph(c) => Ok(Curve::poly_graph(c, domain)),
            CurveKind::Implicit(f) => Curve::implicit(f, domain),
            CurveKind::PowGraph(b) => Curve::pow_graph(b, domain),
        };
        built.map_err(|e| ParseError { pos: if matches!(e, super::CurveError::Arith(_)) { domain_pos } else { body_pos }, message: e.to_string() })
    }

    fn domain(&mut self) -> Result<IntervalQ, ParseError> {
        let pos = self.pos();
        let closed_lo = if self.eat('[') {
            true
        } else if self.eat('(') {
            false
        } else {
            return Err(self.error("expected '[' or '('"));
        };
        let lo = self.number()?;
        self.expect(',')?;
        let hi = self.number()?;
        let closed_hi = if self.eat(']') {
            true
        } else if self.eat(')') {
            false
        } else {
            return Err(self.error("expected ']' or ')'"));
        };
        IntervalQ::new(lo, hi, closed_lo, closed_hi).map_err(|e| ParseError { pos, message: e.to_string() })
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let mut digits = String::new();
        while let Some(&(_, c)) = self.chars.get(self.idx) {
            if !c.is_ascii_digit() {
                break;
            }
            digits.push(c);
            self.idx += 1;
        }
        if digits.is_empty() {
            return Err(self.error("expected a number"));
        }
        Ok(digits.parse().expect("ascii digits"))
    }

    fn fraction(&mut self) -> Result<Rational, ParseError> {
        let num = self.uint()?;
        if self.eat('/') {
            let pos = self.pos();
            let den = self.uint()?;
            Rational::new(num, den).map_err(|e| ParseError { pos, message: e.to_string() })
        } else {
            Ok(Rational::from(num))
        }
    }

    fn number(&mut self) -> Result<Rational, ParseError> {
        if self.eat('-') {
            Ok(-self.fraction()?)
        } else {
            self.eat('+');
            self.fraction()
        }
    }

    fn expr(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = if self.eat('-') {
            -&self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BiPoly, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let pos = self.pos();
            let e = self.uint()?;
            let e = u32::try_from(&e).ok().filter(|&e| e <= 1024).ok_or(ParseError { pos, message: "exponent too large".into() })?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<BiPoly, ParseError> {
        match self.peek() {
            Some('x') => {
                self.idx += 1;
                Ok(BiPoly::x())
            }
            Some('y') => {
                self.idx += 1;
                Ok(BiPoly::y())
            }
            Some('(') => {
                self.idx += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(BiPoly::constant(self.fraction()?)),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn parses_examples() {
        let c = parse_curve("poly:0,0,1@[0,1]").unwrap();
        assert_eq!(c, Curve::poly_graph(vec![q(0, 1), q(0, 1), q(1, 1)], IntervalQ::unit()));
        let h = parse_curve("implicit:x*y-1@[1/3,3]").unwrap();
        let f = &(&BiPoly::x() * &BiPoly::y()) - &BiPoly::constant(q(1, 1));
        assert_eq!(h, Curve::implicit(f, IntervalQ::closed(q(1, 3), q(3, 1)).unwrap()).unwrap());
        assert_eq!(parse_curve("pow:2@[0,1]").unwrap(), Curve::pow_graph(2, IntervalQ::unit()).unwrap());
    }

    #[test]
    fn whitespace_defaults_and_open_ends() {
        let c = parse_curve("  poly : 1/2 , -3 @ ( -1 , 5/2 ]").unwrap();
        assert_eq!(c.domain(), &IntervalQ::new(q(-1, 1), q(5, 2), false, true).unwrap());
        assert_eq!(c.kind(), &CurveKind::PolyGraph(vec![q(1, 2), q(-3, 1)]));
        assert_eq!(parse_curve("pow:3").unwrap().domain(), &IntervalQ::unit());
        let e = parse_curve("implicit: (x - y)^2 - 2*(x+1)").unwrap();
        let CurveKind::Implicit(f) = e.kind() else { panic!() };
        assert_eq!(f.to_string(), "x^2 - 2*x*y + y^2 - 2*x - 2");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_curve("poly:1,,2").unwrap_err();
        assert_eq!(e.pos, 7);
        let e = parse_curve("circle:1").unwrap_err();
        assert_eq!(e.pos, 0);
        let e = parse_curve("implicit:x*+y").unwrap_err();
        assert_eq!(e.pos, 11);
        let e = parse_curve("pow:2@[1,0]").unwrap_err();
        assert_eq!(e.pos, 6);
        assert!(parse_curve("pow:1").is_err());
        assert!(parse_curve("implicit:x-x").is_err());
        assert!(parse_curve("poly:1/0").is_err());
        assert!(parse_curve("poly:1@[0,1] junk").is_err());
    }

    fn rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::frac(n, d))
    }

    fn domain() -> impl Strategy<Value = IntervalQ> {
        (rational(), rational(), any::<bool>(), any::<bool>()).prop_filter_map("valid", |(a, b, cl, ch)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            IntervalQ::new(lo, hi, cl, ch).ok()
        })
    }

    fn curve() -> impl Strategy<Value = Curve> {
        let poly = (prop::collection::vec(rational(), 1..6), domain()).prop_map(|(c, d)| Curve::poly_graph(c, d));
        let pow = (2u64..100, domain()).prop_map(|(b, d)| Curve::pow_graph(b, d).unwrap());
        let implicit = (prop::collection::vec(((0u32..4, 0u32..4), rational()), 1..6), domain())
            .prop_filter_map("nonconstant", |(terms, d)| Curve::implicit(BiPoly::from_terms(terms), d).ok());
        prop_oneof![poly, pow, implicit]
    }

    proptest! {
        #[test]
        fn display_round_trips(c in curve()) {
            let text = c.to_string();
            prop_assert_eq!(parse_curve(&text).unwrap(), c);
        }
    }
}

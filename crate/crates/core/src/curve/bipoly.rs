use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::Rational;

/// Sparse bivariate polynomial with rational coefficients, keyed by `(deg_x, deg_y)`.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BiPoly { terms }
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut p = BiPoly::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, &c);
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|(i, _)| *i).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|(_, j)| *j).max()
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = BiPoly::constant(Rational::one());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BiPoly::from_terms(self.terms.iter().map(|(k, v)| (*k, v * c)))
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * x.pow(i) * y.pow(j))
            .sum()
    }

    /// Coefficients of `F(x, Y)` as a polynomial in `Y`, ascending.
    pub fn fiber_at_x(&self, x: &Rational) -> Vec<Rational> {
        let len = self.deg_y().map_or(0, |d| d as usize + 1);
        let mut out = vec![Rational::zero(); len];
        for (&(i, j), c) in &self.terms {
            out[j as usize] += &(c * x.pow(i));
        }
        out
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self + &(-rhs)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect() }
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, &(c1 * c2));
            }
        }
        out
    }
}

/// Canonical text form, re-readable by the curve parser: terms by descending
/// total degree, then descending power of `x`.
impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        for (n, key) in keys.into_iter().enumerate() {
            let c = &self.terms[key];
            let neg = c.is_negative();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            let is_one = mag == Rational::one();
            if !is_one || *key == (0, 0) {
                factors.push(mag.to_string());
            }
            for (var, e) in [("x", key.0), ("y", key.1)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        let f = &(&BiPoly::x() * &BiPoly::y()) - &BiPoly::constant(Rational::one());
        assert_eq!(f.eval(&Rational::from(2), &Rational::frac(1, 2)), Rational::zero());
        assert_eq!(f.total_degree(), Some(2));
        let sq = f.pow(2);
        assert_eq!(sq.coeff(2, 2), Rational::one());
        assert_eq!(sq.coeff(1, 1), Rational::from(-2));
        assert_eq!(sq.coeff(0, 0), Rational::one());
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn fiber_coefficients() {
        // y^2 - x at x = 4 is y^2 - 4.
        let f = &BiPoly::y().pow(2) - &BiPoly::x();
        assert_eq!(f.fiber_at_x(&Rational::from(4)), vec![Rational::from(-4), Rational::zero(), Rational::one()]);
    }

    #[test]
    fn display_is_canonical() {
        let f = &(&BiPoly::x() * &BiPoly::y()) - &BiPoly::constant(Rational::one());
        assert_eq!(f.to_string(), "x*y - 1");
        let g = BiPoly::from_terms([((2, 0), Rational::frac(-3, 2)), ((0, 1), Rational::one()), ((0, 0), Rational::frac(1, 3))]);
        assert_eq!(g.to_string(), "-3/2*x^2 + y + 1/3");
    }
}

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{monomials, DetError};
use crate::arith::Rational;
use crate::curve::{BiPoly, PointQ};

/// `P(x, y) = sum_{i<d, j<e} c_ij x^i y^j`, not identically zero.
///
/// Constructors normalize so that the first nonzero coefficient in monomial
/// order (`1, x, .., x^(d-1), y, x y, ..`) is 1. Deserialized values are only
/// checked for shape and non-vanishing; see [`DECurve::is_normalized`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDECurve")]
pub struct DECurve {
    d: u32,
    e: u32,
    /// `coeffs[i][j]` multiplies `x^i y^j`.
    coeffs: Vec<Vec<Rational>>,
}

#[derive(Deserialize)]
struct RawDECurve {
    d: u32,
    e: u32,
    coeffs: Vec<Vec<Rational>>,
}

impl TryFrom<RawDECurve> for DECurve {
    type Error = DetError;
    fn try_from(raw: RawDECurve) -> Result<Self, DetError> {
        DECurve::from_raw(raw.d, raw.e, raw.coeffs)
    }
}

fn check_shape(d: u32, e: u32, coeffs: &[Vec<Rational>]) -> Result<(), DetError> {
    if d == 0 || e == 0 {
        return Err(DetError::Shape("d and e must be at least 1".into()));
    }
    if coeffs.len() != d as usize || coeffs.iter().any(|r| r.len() != e as usize) {
        return Err(DetError::Shape(format!("coefficient grid must be {d}x{e}")));
    }
    if coeffs.iter().flatten().all(Rational::is_zero) {
        return Err(DetError::Shape("all coefficients vanish".into()));
    }
    Ok(())
}

impl DECurve {
    /// From a `d x e` grid, normalized.
    pub fn new(d: u32, e: u32, coeffs: Vec<Vec<Rational>>) -> Result<Self, DetError> {
        check_shape(d, e, &coeffs)?;
        let mut c = DECurve { d, e, coeffs };
        c.normalize();
        Ok(c)
    }

    /// From a `d x e` grid as given; only shape and non-vanishing are checked.
    pub fn from_raw(d: u32, e: u32, coeffs: Vec<Vec<Rational>>) -> Result<Self, DetError> {
        check_shape(d, e, &coeffs)?;
        Ok(DECurve { d, e, coeffs })
    }

    /// From a coefficient vector in monomial order, normalized.
    pub fn from_monomial_vector(d: u32, e: u32, v: &[Rational]) -> Result<Self, DetError> {
        if v.len() != (d * e) as usize {
            return Err(DetError::Shape(format!("{} coefficients for d = {d}, e = {e}", v.len())));
        }
        let mut grid = vec![vec![Rational::zero(); e as usize]; d as usize];
        for ((i, j), c) in monomials(d, e).zip(v) {
            grid[i as usize][j as usize] = c.clone();
        }
        Self::new(d, e, grid)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn coeffs(&self) -> &[Vec<Rational>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: u32, j: u32) -> &Rational {
        &self.coeffs[i as usize][j as usize]
    }

    fn leading(&self) -> &Rational {
        monomials(self.d, self.e)
            .map(|(i, j)| self.coeff(i, j))
            .find(|c| !c.is_zero())
            .expect("nonzero curve")
    }

    fn normalize(&mut self) {
        let lead = self.leading().clone();
        for c in self.coeffs.iter_mut().flatten() {
            *c = &*c / &lead;
        }
    }

    pub fn is_normalized(&self) -> bool {
        *self.leading() == Rational::one()
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut total = Rational::zero();
        let mut xi = Rational::one();
        for row in &self.coeffs {
            // Horner in y for each power of x.
            let inner = row.iter().rev().fold(Rational::zero(), |acc, c| acc * y + c);
            total += &(&inner * &xi);
            xi = &xi * x;
        }
        total
    }

    pub fn vanishes_at(&self, p: &PointQ) -> bool {
        self.eval(&p.x, &p.y).is_zero()
    }

    pub fn to_bipoly(&self) -> BiPoly {
        BiPoly::from_terms(monomials(self.d, self.e).map(|(i, j)| ((i, j), self.coeff(i, j).clone())))
    }
}

impl fmt::Display for DECurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.to_bipoly())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn normalization_and_eval() {
        // -2 x + 2 y, leading monomial x.
        let c = DECurve::new(2, 2, vec![vec![q(0, 1), q(2, 1)], vec![q(-2, 1), q(0, 1)]]).unwrap();
        assert!(c.is_normalized());
        assert_eq!(c.coeff(1, 0), &q(1, 1));
        assert_eq!(c.coeff(0, 1), &q(-1, 1));
        assert_eq!(c.eval(&q(3, 1), &q(3, 1)), q(0, 1));
        assert_eq!(c.to_string(), "x - y = 0");
        assert!(DECurve::new(2, 2, vec![vec![q(0, 1); 2]; 2]).is_err());
        assert!(DECurve::new(2, 2, vec![vec![q(1, 1)]]).is_err());
    }

    #[test]
    fn serde_round_trip_keeps_raw_coefficients() {
        let c = DECurve::new(2, 3, vec![vec![q(1, 1), q(0, 1), q(1, 2)], vec![q(0, 1), q(-3, 1), q(0, 1)]]).unwrap();
        let js = serde_json::to_string(&c).unwrap();
        assert_eq!(js, r#"{"d":2,"e":3,"coeffs":[["1/1","0/1","1/2"],["0/1","-3/1","0/1"]]}"#);
        assert_eq!(serde_json::from_str::<DECurve>(&js).unwrap(), c);
        let raw: DECurve = serde_json::from_str(r#"{"d":1,"e":2,"coeffs":[["2/1","1/1"]]}"#).unwrap();
        assert!(!raw.is_normalized());
        assert!(serde_json::from_str::<DECurve>(r#"{"d":1,"e":2,"coeffs":[["0/1","0/1"]]}"#).is_err());
    }
}

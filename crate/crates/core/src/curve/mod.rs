//! Plane curve models with exact point membership, and enumeration of their
//! lattice points and points of bounded height.

mod bipoly;
mod enumerate;
mod roots;
mod syntax;

pub use bipoly::BiPoly;
pub use enumerate::{enumerate_height_points, enumerate_lattice_points, enumerate_points};
pub use roots::rational_roots;
pub use syntax::{parse_curve, ParseError};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{ArithError, IntervalQ, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("x = {x} lies outside the curve domain {domain}")]
    OutsideDomain { x: Rational, domain: Box<IntervalQ> },
    #[error("the vertical line x = {0} lies on the curve")]
    DegenerateFiber(Rational),
    #[error("invalid curve: {0}")]
    Invalid(String),
    #[error("operation not supported for {0} curves")]
    Unsupported(&'static str),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Which target set is being counted: `Γ ∩ (1/N)Z²` or `Γ(Q, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Lattice,
    Height,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Lattice => "lattice",
            Mode::Height => "height",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lattice" => Ok(Mode::Lattice),
            "height" => Ok(Mode::Height),
            other => Err(format!("unknown mode {other:?} (expected lattice or height)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "(Rational, Rational)", from = "(Rational, Rational)")]
pub struct PointQ {
    pub x: Rational,
    pub y: Rational,
}

impl PointQ {
    pub fn new(x: Rational, y: Rational) -> Self {
        PointQ { x, y }
    }
}

impl From<PointQ> for (Rational, Rational) {
    fn from(p: PointQ) -> Self {
        (p.x, p.y)
    }
}

impl From<(Rational, Rational)> for PointQ {
    fn from((x, y): (Rational, Rational)) -> Self {
        PointQ { x, y }
    }
}

impl fmt::Display for PointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Upper bound for `sup |f^(order)|` over a curve's domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivativeBound {
    pub order: u32,
    pub bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    /// `y = sum c_i x^i`.
    PolyGraph(Vec<Rational>),
    /// `F(x, y) = 0`.
    Implicit(BiPoly),
    /// `y = base^x`.
    PowGraph(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve {
    kind: CurveKind,
    domain: IntervalQ,
}

/// Result of evaluating a graph curve at a rational abscissa.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eval {
    Value(Rational),
    NotRational,
}

impl Curve {
    pub fn poly_graph(mut coeffs: Vec<Rational>, domain: IntervalQ) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        Curve { kind: CurveKind::PolyGraph(coeffs), domain }
    }

    pub fn implicit(f: BiPoly, domain: IntervalQ) -> Result<Self, CurveError> {
        match f.total_degree() {
            None => Err(CurveError::Invalid("implicit equation is identically zero".into())),
            Some(0) => Err(CurveError::Invalid("implicit equation is a nonzero constant".into())),
            Some(_) => Ok(Curve { kind: CurveKind::Implicit(f), domain }),
        }
    }

    pub fn pow_graph(base: u64, domain: IntervalQ) -> Result<Self, CurveError> {
        if base < 2 {
            return Err(CurveError::Invalid(format!("exponential base must be at least 2, got {base}")));
        }
        Ok(Curve { kind: CurveKind::PowGraph(base), domain })
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn domain(&self) -> &IntervalQ {
        &self.domain
    }

    pub fn with_domain(&self, domain: IntervalQ) -> Self {
        Curve { kind: self.kind.clone(), domain }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            CurveKind::PolyGraph(_) => "poly",
            CurveKind::Implicit(_) => "implicit",
            CurveKind::PowGraph(_) => "pow",
        }
    }

    /// Exact `f(x)` for graph curves.
    ///
    /// For `base^(p/q)` in lowest terms the value is rational exactly when
    /// `t^q = base^p` has an integer solution `t`, which is tested directly.
    pub fn eval_exact(&self, x: &Rational) -> Result<Eval, CurveError> {
        if !self.domain.contains(x) {
            return Err(CurveError::OutsideDomain { x: x.clone(), domain: Box::new(self.domain.clone()) });
        }
        match &self.kind {
            CurveKind::PolyGraph(c) => Ok(Eval::Value(horner(c, x))),
            CurveKind::PowGraph(base) => Ok(pow_exact(*base, x)),
            CurveKind::Implicit(_) => Err(CurveError::Unsupported("implicit")),
        }
    }

    /// Rational `y` with `(x, y)` on the curve, ascending.
    pub fn fiber(&self, x: &Rational) -> Result<Vec<Rational>, CurveError> {
        match &self.kind {
            CurveKind::Implicit(f) => {
                if !self.domain.contains(x) {
                    return Err(CurveError::OutsideDomain { x: x.clone(), domain: Box::new(self.domain.clone()) });
                }
                fibers_implicit(f, x)
            }
            _ => Ok(match self.eval_exact(x)? {
                Eval::Value(y) => vec![y],
                Eval::NotRational => vec![],
            }),
        }
    }

    /// Exact membership: `x` in the domain and the defining equation holds.
    pub fn contains_point(&self, p: &PointQ) -> bool {
        if !self.domain.contains(&p.x) {
            return false;
        }
        match &self.kind {
            CurveKind::Implicit(f) => f.eval(&p.x, &p.y).is_zero(),
            _ => matches!(self.eval_exact(&p.x), Ok(Eval::Value(y)) if y == p.y),
        }
    }

    /// Bounds for `sup |f^(k)|`, `k = 0..=max_order`, over the domain.
    ///
    /// Polynomials use `sum_{i>=k} |c_i| i!/(i-k)! B^(i-k)` with
    /// `B = max(|lo|, |hi|)`; `base^x` uses `(ln base)^k base^ceil(hi)` with a
    /// certified rational upper bound for `ln base`.
    pub fn derivative_bounds(&self, max_order: u32) -> Result<Vec<DerivativeBound>, CurveError> {
        match &self.kind {
            CurveKind::PolyGraph(c) => {
                let b = self.domain.lo().abs().max(self.domain.hi().abs());
                Ok((0..=max_order)
                    .map(|k| {
                        let bound = c
                            .iter()
                            .enumerate()
                            .skip(k as usize)
                            .map(|(i, ci)| {
                                let falling: u64 = ((i as u64 - k as u64 + 1)..=i as u64).product();
                                ci.abs() * Rational::from(falling) * b.pow(i as u32 - k)
                            })
                            .sum();
                        DerivativeBound { order: k, bound }
                    })
                    .collect())
            }
            CurveKind::PowGraph(base) => {
                let ln = ln_upper_bound(*base);
                let top = pow_int(*base, &self.domain.hi().ceil());
                Ok((0..=max_order)
                    .map(|k| DerivativeBound { order: k, bound: ln.pow(k) * &top })
                    .collect())
            }
            CurveKind::Implicit(_) => Err(CurveError::Unsupported("implicit")),
        }
    }
}

/// Rational roots `y` of `F(x, y)` at a fixed `x`.
pub fn fibers_implicit(f: &BiPoly, x: &Rational) -> Result<Vec<Rational>, CurveError> {
    rational_roots(&f.fiber_at_x(x)).ok_or_else(|| CurveError::DegenerateFiber(x.clone()))
}

pub(crate) fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// `base^e` for an integer exponent of either sign.
fn pow_int(base: u64, e: &BigInt) -> Rational {
    let mag = e.abs().to_u32().expect("exponent fits in u32");
    let v = Rational::from(num_traits::pow(BigInt::from(base), mag as usize));
    if e.is_negative() {
        v.recip().expect("base >= 2")
    } else {
        v
    }
}

fn pow_exact(base: u64, x: &Rational) -> Eval {
    let p = x.numer();
    let q = x.denom().to_u32().expect("denominator fits in u32");
    let power = num_traits::pow(BigInt::from(base), p.abs().to_usize().expect("exponent fits"));
    match roots::exact_root(&power, q) {
        Some(t) => {
            let t = Rational::from(t);
            Eval::Value(if p.is_negative() { t.recip().expect("nonzero") } else { t })
        }
        None => Eval::NotRational,
    }
}

/// Integer `r` with `r^q = base`, if any.
pub(crate) fn perfect_root(base: u64, q: u64) -> Option<u64> {
    if q == 1 {
        return Some(base);
    }
    if q >= 64 {
        return None;
    }
    roots::exact_root(&BigInt::from(base), q as u32).and_then(|r| r.to_u64())
}

/// Rational upper bound for `ln(base)`, within `1e-12` of the true value.
///
/// Writes `base = 2^k m` with `m` in `[1, 2)` and sums
/// `ln t = 2 artanh((t-1)/(t+1))` for `t = 2` and `t = m`, so the series
/// argument never exceeds `1/3`.
fn ln_upper_bound(base: u64) -> Rational {
    let k = 63 - base.leading_zeros();
    let m = Rational::new(BigInt::from(base), BigInt::from(1u64 << k)).expect("nonzero");
    let exact = Rational::from(k) * ln_series_upper(&Rational::from(2)) + ln_series_upper(&m);
    round_up(&exact, 1_000_000_000_000)
}

/// Upper bound for `ln t`, `t >= 1`; the tail after `K` terms is at most
/// `2 z^(2K+1) / ((2K+1)(1 - z^2))`.
fn ln_series_upper(t: &Rational) -> Rational {
    let z = (t - Rational::one()) / (t + Rational::one());
    let z2 = &z * &z;
    let mut term = z.clone();
    let mut sum = Rational::zero();
    let tol = Rational::new(1, BigInt::from(10u64).pow(16)).expect("nonzero");
    let mut k = 0u32;
    loop {
        sum += &(&term / Rational::from(2 * k + 1));
        term *= &z2;
        k += 1;
        let tail = Rational::from(2) * &term / (Rational::from(2 * k + 1) * (Rational::one() - &z2));
        if tail < tol {
            return Rational::from(2) * sum + tail;
        }
    }
}

fn round_up(v: &Rational, den: u64) -> Rational {
    let scaled = v * Rational::from(den);
    Rational::new(scaled.ceil(), BigInt::from(den)).expect("nonzero")
}

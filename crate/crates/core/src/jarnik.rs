//! Jarník's extremal convex chains in `(1/N)Z²` and the collinearity window
//! statement for `C²` graphs.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{enumerate_s, s_count_and_sum, PrimVec, Rational};
use crate::curve::{enumerate_lattice_points, Curve, CurveError, CurveKind, PointQ};

/// Rational enclosure of pi, 50 decimals.
const PI_LO: &str = "314159265358979323846264338327950288419716939937510";
const PI_HI: &str = "314159265358979323846264338327950288419716939937511";
const PI_SCALE: u32 = 50;

/// Decimal digits kept by the cube-root enclosures.
const ROOT_DIGITS: u32 = 30;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JarnikError {
    #[error("N must be at least 1")]
    ZeroN,
    #[error("collinearity windows need a polynomial graph of degree at least 2")]
    NotPolynomial,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalChain {
    pub n: u64,
    /// The `X` with `S_X` the step set.
    pub x_max: u64,
    pub vertices: Vec<PointQ>,
    pub steps: Vec<PrimVec>,
}

impl ExtremalChain {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Largest `X` with `sum_{S_X} x <= n`.
fn largest_x(n: u64) -> u64 {
    let fits = |x: u64| s_count_and_sum(x).sum_x <= n as u128;
    let mut hi = 2;
    while fits(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    // fits(lo) holds and fits(hi) fails.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// The convex chain from `(0,0)` whose steps, scaled by `N`, are all of `S_X`
/// in increasing slope, for the largest `X` that keeps it inside `[0,1]²`.
pub fn jarnik_extremal(n: u64) -> Result<ExtremalChain, JarnikError> {
    if n == 0 {
        return Err(JarnikError::ZeroN);
    }
    let x_max = largest_x(n);
    let steps = enumerate_s(x_max);
    let den = n as i64;
    let mut vertices = Vec::with_capacity(steps.len() + 1);
    let (mut cx, mut cy) = (0i64, 0i64);
    vertices.push(PointQ::new(Rational::zero(), Rational::zero()));
    for s in &steps {
        cx += s.x() as i64;
        cy += s.y() as i64;
        vertices.push(PointQ::new(Rational::frac(cx, den), Rational::frac(cy, den)));
    }
    Ok(ExtremalChain { n, x_max, vertices, steps })
}

/// `|vertices|` of the extremal chain, a lower bound for the largest number of
/// points of `(1/N)Z²` on a strictly convex curve in the unit square.
pub fn mu_lower_bound(n: u64) -> Result<u64, JarnikError> {
    if n == 0 {
        return Err(JarnikError::ZeroN);
    }
    Ok(s_count_and_sum(largest_x(n)).count + 1)
}

fn pi_bracket() -> (Rational, Rational) {
    let scale = num_traits::pow(BigInt::from(10), PI_SCALE as usize);
    let lo = Rational::new(PI_LO.parse::<BigInt>().expect("digits"), scale.clone()).expect("nonzero");
    let hi = Rational::new(PI_HI.parse::<BigInt>().expect("digits"), scale).expect("nonzero");
    (lo, hi)
}

/// `floor(v^(1/3) 10^k) / 10^k`, a lower bound for the cube root of `v >= 0`.
fn cbrt_floor(v: &Rational, k: u32) -> Rational {
    let scale = num_traits::pow(BigInt::from(10), k as usize);
    let cube = num_traits::pow(scale.clone(), 3);
    let scaled = (v * Rational::from(cube)).floor();
    Rational::new(scaled.cbrt(), scale).expect("nonzero")
}

/// An upper bound for the cube root of `v >= 0`, within `10^-k`.
fn cbrt_ceil(v: &Rational, k: u32) -> Rational {
    let lo = cbrt_floor(v, k);
    let step = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), k as usize)).expect("nonzero");
    let up = &lo + &step;
    debug_assert!(&up.pow(3) >= v);
    up
}

/// Rational enclosure `(lo, hi)` of `3 pi^(-2/3) = (27 / pi^2)^(1/3)`.
pub fn jarnik_constant_bracket() -> (Rational, Rational) {
    let (pi_lo, pi_hi) = pi_bracket();
    let k27 = Rational::from(27);
    let lo = cbrt_floor(&(&k27 / pi_hi.pow(2)), ROOT_DIGITS);
    let hi = cbrt_ceil(&(&k27 / pi_lo.pow(2)), ROOT_DIGITS);
    (lo, hi)
}

/// A lower bound for `N^(2/3)`.
pub fn n_two_thirds_lower(n: u64) -> Rational {
    cbrt_floor(&Rational::from(n).pow(2), ROOT_DIGITS)
}

/// Certifies `mu_lower_bound(N) <= (3 pi^(-2/3) + slack) N^(2/3)` using lower
/// bounds for both factors on the right.
pub fn jarnik_upper_check(n: u64, slack: &Rational) -> Result<bool, JarnikError> {
    let mu = Rational::from(mu_lower_bound(n)?);
    let (k_lo, _) = jarnik_constant_bracket();
    Ok(mu <= (k_lo + slack) * n_two_thirds_lower(n))
}

fn collinear(a: &PointQ, b: &PointQ, c: &PointQ) -> bool {
    let lhs = (&b.x - &a.x) * (&c.y - &a.y);
    let rhs = (&b.y - &a.y) * (&c.x - &a.x);
    lhs == rhs
}

/// `spread < w N^(-2/3)`, exactly: `spread^3 N^2 < w^3`.
fn within_window(spread: &Rational, n: u64, w: &Rational) -> bool {
    spread.pow(3) * Rational::from(n).pow(2) < w.pow(3)
}

fn graph_points(c: &Curve, n: u64) -> Result<Vec<PointQ>, JarnikError> {
    match c.kind() {
        CurveKind::PolyGraph(coeffs) if coeffs.len() >= 3 => {}
        _ => return Err(JarnikError::NotPolynomial),
    }
    if n == 0 {
        return Err(JarnikError::ZeroN);
    }
    Ok(enumerate_lattice_points(c, n)?)
}

/// All triples of lattice points on the graph whose abscissae spread less
/// than `window_const N^(-2/3)` and which are not collinear.
pub fn collinearity_window_check(c: &Curve, n: u64, window_const: &Rational) -> Result<Vec<[PointQ; 3]>, JarnikError> {
    let pts = graph_points(c, n)?;
    if !window_const.is_positive() {
        return Ok(Vec::new());
    }
    let bad: Vec<Vec<[PointQ; 3]>> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let end = (i + 1..pts.len())
                .find(|&k| !within_window(&(&pts[k].x - &pts[i].x), n, window_const))
                .unwrap_or(pts.len());
            for k in i + 2..end {
                for j in i + 1..k {
                    if !collinear(&pts[i], &pts[j], &pts[k]) {
                        out.push([pts[i].clone(), pts[j].clone(), pts[k].clone()]);
                    }
                }
            }
            out
        })
        .collect();
    Ok(bad.into_iter().flatten().collect())
}

/// Greedy left-to-right grouping of the lattice points into windows of
/// spread below `window_const N^(-2/3)`. Window starts are at least that far
/// apart, so a domain of width `L` yields at most `L N^(2/3) / window_const + 1`
/// windows.
pub fn collinear_windows(c: &Curve, n: u64, window_const: &Rational) -> Result<Vec<Vec<PointQ>>, JarnikError> {
    let pts = graph_points(c, n)?;
    let mut windows: Vec<Vec<PointQ>> = Vec::new();
    for p in pts {
        match windows.last_mut() {
            Some(w) if within_window(&(&p.x - &w[0].x), n, window_const) => w.push(p),
            _ => windows.push(vec![p]),
        }
    }
    Ok(windows)
}

pub fn is_collinear(pts: &[PointQ]) -> bool {
    pts.len() < 3 || pts[2..].iter().all(|p| collinear(&pts[0], &pts[1], p))
}

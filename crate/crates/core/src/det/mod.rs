//! Exact determinant tools: Vandermonde, the monomial determinant of `de`
//! points, `(d, e)`-curve membership and interpolation, and mean-value checks.

mod decurve;
mod matrix;

pub use decurve::DECurve;
pub use matrix::QMatrix;

use num_bigint::BigInt;

use crate::arith::Rational;
use crate::curve::{Curve, CurveError, CurveKind, DerivativeBound, Mode, PointQ};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DetError {
    #[error("expected {expected} points, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("nodes must be distinct")]
    RepeatedNodes,
    #[error("no derivative bound supplied for order {0}")]
    MissingBound(u32),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Monomials `x^i y^j`, `i < d`, `j < e`, in the order used for matrix rows and
/// coefficient vectors: `1, x, .., x^(d-1), y, x y, ..`.
pub fn monomials(d: u32, e: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..e).flat_map(move |j| (0..d).map(move |i| (i, j)))
}

/// `prod_{i<j} (x_j - x_i)`.
pub fn vandermonde(xs: &[Rational]) -> Rational {
    let mut v = Rational::one();
    for j in 0..xs.len() {
        for i in 0..j {
            v = v * (&xs[j] - &xs[i]);
        }
    }
    v
}

fn powers(x: &Rational, n: u32) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n as usize);
    let mut acc = Rational::one();
    for _ in 0..n {
        out.push(acc.clone());
        acc = &acc * x;
    }
    out
}

/// Column of `x^i y^j` values for one point, in monomial order.
fn monomial_column(p: &PointQ, d: u32, e: u32) -> Vec<Rational> {
    let xp = powers(&p.x, d);
    let yp = powers(&p.y, e);
    monomials(d, e).map(|(i, j)| &xp[i as usize] * &yp[j as usize]).collect()
}

/// The `de x |pts|` matrix `[x_k^i y_k^j]`, rows in monomial order.
pub fn monomial_matrix(pts: &[PointQ], d: u32, e: u32) -> QMatrix {
    let cols: Vec<Vec<Rational>> = pts.iter().map(|p| monomial_column(p, d, e)).collect();
    let rows = (d * e) as usize;
    let mut m = QMatrix::zeros(rows, pts.len());
    for (k, col) in cols.into_iter().enumerate() {
        for (r, v) in col.into_iter().enumerate() {
            m.set(r, k, v);
        }
    }
    m
}

/// `Δ`, the determinant of the monomial matrix of exactly `de` points.
pub fn de_determinant(pts: &[PointQ], d: u32, e: u32) -> Result<Rational, DetError> {
    let de = (d * e) as usize;
    if pts.len() != de {
        return Err(DetError::Arity { expected: de, got: pts.len() });
    }
    monomial_matrix(pts, d, e).det()
}

/// Whether some nonzero `P` with `deg_x P < d`, `deg_y P < e` vanishes on all points.
pub fn lies_on_de_curve(pts: &[PointQ], d: u32, e: u32) -> bool {
    let de = (d * e) as usize;
    pts.len() < de || monomial_matrix(pts, d, e).rank() < de
}

/// A normalized `(d, e)`-curve through all points, if one exists. The
/// coefficient vector is the nullspace vector of the first free column.
pub fn interpolate_de_curve(pts: &[PointQ], d: u32, e: u32) -> Option<DECurve> {
    let v = monomial_matrix(pts, d, e).transpose().first_null_vector()?;
    Some(DECurve::from_monomial_vector(d, e, &v).expect("nullspace vector is nonzero"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    Independent(Vec<PointQ>),
    AllOnCurve,
}

/// Greedily, in input order, `de` points whose monomial columns are
/// independent, or `AllOnCurve` when the columns have rank below `de`.
pub fn select_independent(pts: &[PointQ], d: u32, e: u32) -> Selection {
    let de = (d * e) as usize;
    let mut basis: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut chosen = Vec::new();
    for p in pts {
        let mut v = monomial_column(p, d, e);
        for (pivot, b) in &basis {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = &v[*pivot] / &b[*pivot];
            for (vk, bk) in v.iter_mut().zip(b) {
                if !bk.is_zero() {
                    *vk = &*vk - &(&f * bk);
                }
            }
        }
        if let Some(pivot) = v.iter().position(|c| !c.is_zero()) {
            basis.push((pivot, v));
            chosen.push(p.clone());
            if chosen.len() == de {
                return Selection::Independent(chosen);
            }
        }
    }
    Selection::AllOnCurve
}

/// A bound `D` with `|Δ| >= 1/D` whenever `Δ != 0`: `N^(de(d+e-2)/2)` for
/// points of `(1/N)Z²` and `N^(de(d+e-2))` for points of height at most `N`.
pub fn denominator_bound(d: u32, e: u32, n: u64, mode: Mode) -> BigInt {
    let full = d * e * (d + e - 2);
    let exp = match mode {
        Mode::Lattice => full / 2,
        Mode::Height => full,
    };
    num_traits::pow(BigInt::from(n), exp as usize)
}

/// Checks `det[1, x, .., x^(n-1), f(x)] = a_n V(nodes)` over `n + 1` nodes for
/// a polynomial `f` of degree `n`.
pub fn schwarz_poly_identity_check(coeffs: &[Rational], nodes: &[Rational]) -> Result<bool, DetError> {
    let n = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    if nodes.len() != n + 1 {
        return Err(DetError::Arity { expected: n + 1, got: nodes.len() });
    }
    let mut sorted = nodes.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(DetError::RepeatedNodes);
    }
    let rows = nodes
        .iter()
        .map(|x| {
            let mut row = powers(x, n as u32);
            row.push(crate::curve::horner(coeffs, x));
            row
        })
        .collect();
    let det = QMatrix::from_rows(rows)?.det()?;
    Ok(det == &coeffs[n] * vandermonde(nodes))
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut c = Rational::one();
    for t in 0..k {
        c = c * Rational::from((n - t) as u64) / Rational::from((t + 1) as u64);
    }
    c
}

/// Leibniz product of two bound sequences: bounds for `(gh)^(m)` from bounds for
/// the derivatives of `g` and `h`.
fn leibniz(g: &[Rational], h: &[Rational]) -> Vec<Rational> {
    (0..g.len())
        .map(|m| (0..=m).map(|k| binomial(m, k) * &g[k] * &h[m - k]).sum())
        .collect()
}

/// The constant `C` in `|Δ| <= C |V(x_1, .., x_de)|` for points on the graph
/// of `f`: the product over the functions `g_ij = x^i f^j` of
/// `sum_{m<de} sup|g_ij^(m)| / m!`, each supremum bounded through the Leibniz
/// rule from the table for `f` and exact bounds for `x^i` on the domain.
pub fn schwarz_constant(c: &Curve, bounds: &[DerivativeBound], d: u32, e: u32) -> Result<Rational, DetError> {
    if matches!(c.kind(), CurveKind::Implicit(_)) {
        return Err(CurveError::Unsupported("implicit").into());
    }
    let de = (d * e) as usize;
    let f: Vec<Rational> = (0..de as u32)
        .map(|k| {
            bounds
                .iter()
                .find(|b| b.order == k)
                .map(|b| b.bound.abs())
                .ok_or(DetError::MissingBound(k))
        })
        .collect::<Result<_, _>>()?;
    let big = c.domain().lo().abs().max(c.domain().hi().abs());
    let x_pow = |i: usize| -> Vec<Rational> {
        (0..de)
            .map(|k| {
                if k > i {
                    return Rational::zero();
                }
                let falling: u64 = ((i - k + 1) as u64..=i as u64).product();
                Rational::from(falling) * big.pow((i - k) as u32)
            })
            .collect()
    };
    let mut f_pow = vec![{
        let mut one = vec![Rational::zero(); de];
        one[0] = Rational::one();
        one
    }];
    for j in 1..e as usize {
        let next = leibniz(&f_pow[j - 1], &f);
        f_pow.push(next);
    }
    let inv_fact: Vec<Rational> = (0..de)
        .scan(Rational::one(), |acc, m| {
            if m > 0 {
                *acc = &*acc / Rational::from(m as u64);
            }
            Some(acc.clone())
        })
        .collect();
    let mut total = Rational::one();
    for (i, j) in monomials(d, e) {
        let g = leibniz(&x_pow(i as usize), &f_pow[j as usize]);
        let row: Rational = g.iter().zip(&inv_fact).map(|(b, w)| b * w).sum();
        total = total * row;
    }
    Ok(total)
}

/// One-sided sanity check of the generalized mean value bound:
/// `|Δ(pts)| <= C |V(xs)|` with `C` from [`schwarz_constant`]. Since
/// `|V| <= w^(de(de-1)/2)` for the window width `w`, this also implies the
/// window form of the bound.
pub fn schwarz_bound_check(c: &Curve, bounds: &[DerivativeBound], pts: &[PointQ], d: u32, e: u32) -> Result<bool, DetError> {
    let constant = schwarz_constant(c, bounds, d, e)?;
    let delta = de_determinant(pts, d, e)?;
    if delta.is_zero() {
        return Ok(true);
    }
    let xs: Vec<Rational> = pts.iter().map(|p| p.x.clone()).collect();
    Ok(delta.abs() <= constant * vandermonde(&xs).abs())
}

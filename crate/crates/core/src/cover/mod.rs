//! Covering the target set of a curve by `(d, e)`-curves over a partition of
//! its domain, and independent verification of such covers.

mod certificate;
mod verify;

pub use certificate::{CoverCertificate, CoverMeta, Piece, PieceCover};
pub use verify::{verify_cover, VerifyReport};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{IntervalQ, Rational};
use crate::curve::{enumerate_points, Curve, CurveError, Mode, PointQ};
use crate::det::interpolate_de_curve;

/// Bisection levels below a top-level piece before giving up.
pub const MAX_DEPTH: u32 = 64;
/// Largest warm-start partition accepted.
pub const MAX_INITIAL_PIECES: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("d = e = 1 gives no exponent")]
    Degenerate,
    #[error("no degrees reach exponent below {0}")]
    Infeasible(Rational),
    #[error("bisection depth {MAX_DEPTH} exceeded on {interval} with {points} points")]
    DepthExceeded { interval: IntervalQ, points: usize },
    #[error("warm start of {0} pieces exceeds the limit")]
    TooManyPieces(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentReport {
    pub d: u32,
    pub e: u32,
    pub mode: Mode,
    pub delta: Rational,
}

/// `(d+e-2)/(de-1)` for lattice points, twice that for bounded height.
pub fn delta_exponent(d: u32, e: u32, mode: Mode) -> Result<Rational, CoverError> {
    if d == 0 || e == 0 || d * e == 1 {
        return Err(CoverError::Degenerate);
    }
    let base = Rational::frac((d + e - 2) as i64, (d * e - 1) as i64);
    Ok(match mode {
        Mode::Lattice => base,
        Mode::Height => base * Rational::from(2),
    })
}

pub fn exponent_report(d: u32, e: u32, mode: Mode) -> Result<ExponentReport, CoverError> {
    Ok(ExponentReport { d, e, mode, delta: delta_exponent(d, e, mode)? })
}

/// Least degrees whose exponent is strictly below `target`: the least `e` for
/// a fixed `d`, or the least `d = e` otherwise.
///
/// With `t` the target in lattice units (halved for height), `d` fixed and
/// `td > 1`, the condition `(d+e-2)/(de-1) < t` reads `e > (d+t-2)/(td-1)`.
/// For `d = e` the exponent is `2/(d+1)`.
pub fn choose_degrees(target: &Rational, mode: Mode, d_fixed: Option<u32>) -> Result<(u32, u32), CoverError> {
    let infeasible = || CoverError::Infeasible(target.clone());
    let t = match mode {
        Mode::Lattice => target.clone(),
        Mode::Height => target / Rational::from(2),
    };
    if !t.is_positive() {
        return Err(infeasible());
    }
    let one = Rational::one();
    let (d, e) = match d_fixed {
        Some(0) => return Err(infeasible()),
        Some(d) => {
            let dq = Rational::from(d);
            let denom = &t * &dq - &one;
            if !denom.is_positive() {
                return Err(infeasible());
            }
            let bound = (&dq + &t - Rational::from(2)) / denom;
            let e = (bound.floor() + BigInt::from(1)).max(BigInt::from(1));
            let mut e = e.to_u32().ok_or_else(infeasible)?;
            if d * e == 1 {
                e = 2;
            }
            (d, e)
        }
        None => {
            let bound = Rational::from(2) / &t - &one;
            let d = (bound.floor() + BigInt::from(1)).max(BigInt::from(2));
            let d = d.to_u32().ok_or_else(infeasible)?;
            (d, d)
        }
    };
    debug_assert!(&delta_exponent(d, e, mode)? < target);
    Ok((d, e))
}

/// `ceil(N^delta)`, exactly.
pub fn default_initial_pieces(n: u64, delta: &Rational) -> Result<usize, CoverError> {
    let too_many = || CoverError::TooManyPieces(format!("{n}^{delta}"));
    let a = delta.numer().to_u32().ok_or_else(too_many)?;
    let b = delta.denom().to_u32().ok_or_else(too_many)?;
    let target = num_traits::pow(BigInt::from(n), a as usize);
    let mut r = target.nth_root(b);
    if num_traits::pow(r.clone(), b as usize) < target {
        r += 1;
    }
    let k = r.to_usize().filter(|&k| k <= MAX_INITIAL_PIECES).ok_or_else(too_many)?;
    Ok(k.max(1))
}

#[derive(Default)]
struct Stats {
    bisections: usize,
    max_depth: u32,
}

fn cover_piece(interval: IntervalQ, points: Vec<PointQ>, d: u32, e: u32, depth: u32, stats: &mut Stats, out: &mut Vec<Piece>) -> Result<(), CoverError> {
    stats.max_depth = stats.max_depth.max(depth);
    let cover = match points.len() {
        0 => Some(PieceCover::Empty),
        1 => Some(PieceCover::Singleton(points[0].clone())),
        _ => interpolate_de_curve(&points, d, e).map(PieceCover::Curve),
    };
    if let Some(cover) = cover {
        out.push(Piece { interval, cover, points });
        return Ok(());
    }
    debug_assert!(points.len() >= (d * e) as usize, "fewer than de points always lie on a curve");
    let split = if depth < MAX_DEPTH { interval.bisect() } else { None };
    let Some((left, right)) = split else {
        return Err(CoverError::DepthExceeded { points: points.len(), interval });
    };
    stats.bisections += 1;
    let (lp, rp): (Vec<PointQ>, Vec<PointQ>) = points.into_iter().partition(|p| left.contains(&p.x));
    cover_piece(left, lp, d, e, depth + 1, stats, out)?;
    cover_piece(right, rp, d, e, depth + 1, stats, out)
}

/// Builds a certificate: enumerate the target set, split the domain into
/// `initial_pieces` equal parts (default `ceil(N^delta)`), and bisect every
/// part whose points lie on no common `(d, e)`-curve.
pub fn build_cover(c: &Curve, n: u64, d: u32, e: u32, mode: Mode, initial_pieces: Option<usize>) -> Result<CoverCertificate, CoverError> {
    let delta = delta_exponent(d, e, mode)?;
    let k = match initial_pieces {
        Some(k) if k > MAX_INITIAL_PIECES => return Err(CoverError::TooManyPieces(k.to_string())),
        Some(k) => k.max(1),
        None => default_initial_pieces(n, &delta)?,
    };
    let points = enumerate_points(c, n, mode)?;
    let parts = c.domain().uniform_partition(k);
    let mut buckets: Vec<Vec<PointQ>> = vec![Vec::new(); parts.len()];
    let mut idx = 0;
    for p in points {
        while !parts[idx].contains(&p.x) {
            idx += 1;
        }
        buckets[idx].push(p);
    }
    let results: Vec<(Vec<Piece>, Stats)> = parts
        .into_par_iter()
        .zip(buckets)
        .map(|(part, pts)| {
            let mut stats = Stats::default();
            let mut out = Vec::new();
            cover_piece(part, pts, d, e, 0, &mut stats, &mut out)?;
            Ok((out, stats))
        })
        .collect::<Result<_, CoverError>>()?;
    let mut meta = CoverMeta { initial_pieces: k, ..CoverMeta::default() };
    let mut pieces = Vec::new();
    for (ps, stats) in results {
        meta.bisections += stats.bisections;
        meta.max_depth = meta.max_depth.max(stats.max_depth);
        pieces.extend(ps);
    }
    Ok(CoverCertificate { curve: c.clone(), n, d, e, mode, pieces, meta })
}

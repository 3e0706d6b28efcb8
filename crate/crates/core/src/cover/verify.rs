use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::{CoverCertificate, PieceCover};
use crate::arith::Rational;
use crate::curve::{Curve, CurveError, Mode, PointQ};

const MAX_REPORTED: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub pieces: usize,
    pub points_expected: usize,
    pub points_listed: usize,
    pub failures: Vec<String>,
}

struct Failures(Vec<String>, usize);

impl Failures {
    fn push(&mut self, msg: String) {
        if self.0.len() < MAX_REPORTED {
            self.0.push(msg);
        }
        self.1 += 1;
    }
}

/// The target set by direct scan: every `a/N` (or every `p/q` with
/// `max(|p|, q) <= N`) in the domain, with its fiber from exact evaluation.
fn scan_targets(c: &Curve, n: u64, mode: Mode) -> Result<Vec<PointQ>, CurveError> {
    let dom = c.domain();
    let mut out = Vec::new();
    let nb = BigInt::from(n);
    let visit = |x: Rational, out: &mut Vec<PointQ>| -> Result<(), CurveError> {
        if !dom.contains(&x) {
            return Ok(());
        }
        for y in c.fiber(&x)? {
            let keep = match mode {
                Mode::Lattice => (&nb % y.denom()).is_zero(),
                Mode::Height => y.height() <= nb,
            };
            if keep {
                out.push(PointQ::new(x.clone(), y));
            }
        }
        Ok(())
    };
    let span = |den: &BigInt| -> (BigInt, BigInt) {
        let d = Rational::from(den.clone());
        ((dom.lo() * &d).ceil(), (dom.hi() * &d).floor())
    };
    match mode {
        Mode::Lattice => {
            let (lo, hi) = span(&nb);
            let mut a = lo;
            while a <= hi {
                visit(Rational::new(a.clone(), nb.clone()).expect("n >= 1"), &mut out)?;
                a += 1;
            }
        }
        Mode::Height => {
            for q in 1..=n {
                let qb = BigInt::from(q);
                let (lo, hi) = span(&qb);
                let mut p = lo.max(-&nb);
                let hi = hi.min(nb.clone());
                while p <= hi {
                    if p.gcd(&qb) == BigInt::from(1) {
                        visit(Rational::new(p.clone(), qb.clone()).expect("q >= 1"), &mut out)?;
                    }
                    p += 1;
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Re-checks a certificate from scratch: the pieces partition the domain, the
/// listed points of each piece are exactly the target points in it, and each
/// cover has the right shape, is normalized, and vanishes on its points.
pub fn verify_cover(cert: &CoverCertificate) -> VerifyReport {
    let mut f = Failures(Vec::new(), 0);
    let listed: usize = cert.pieces.iter().map(|p| p.points.len()).sum();
    let report = |f: Failures, expected: usize| {
        let mut failures = f.0;
        if f.1 > failures.len() {
            failures.push(format!("... and {} more", f.1 - failures.len()));
        }
        VerifyReport { ok: f.1 == 0, pieces: cert.pieces.len(), points_expected: expected, points_listed: listed, failures }
    };
    if cert.n == 0 || cert.d == 0 || cert.e == 0 {
        f.push("N, d and e must be at least 1".into());
        return report(f, 0);
    }
    check_partition(cert, &mut f);

    let targets = match scan_targets(&cert.curve, cert.n, cert.mode) {
        Ok(t) => t,
        Err(e) => {
            f.push(format!("target enumeration failed: {e}"));
            return report(f, 0);
        }
    };
    for t in &targets {
        let hits = cert.pieces.iter().filter(|p| p.interval.contains(&t.x)).count();
        if hits != 1 {
            f.push(format!("target point {t} lies in {hits} pieces"));
        }
    }
    for (k, piece) in cert.pieces.iter().enumerate() {
        let mut mine: Vec<&PointQ> = piece.points.iter().collect();
        mine.sort();
        if mine.windows(2).any(|w| w[0] == w[1]) {
            f.push(format!("piece {k} lists a point twice"));
        }
        mine.dedup();
        let want: Vec<&PointQ> = targets.iter().filter(|t| piece.interval.contains(&t.x)).collect();
        if mine != want {
            let extra = mine.iter().filter(|p| !want.contains(p)).count();
            let missing = want.iter().filter(|p| !mine.contains(p)).count();
            f.push(format!("piece {k} on {}: {extra} listed points are not target points here, {missing} target points are missing", piece.interval));
        }
        match &piece.cover {
            PieceCover::Empty => {
                if !piece.points.is_empty() {
                    f.push(format!("piece {k} is marked empty but lists {} points", piece.points.len()));
                }
            }
            PieceCover::Singleton(p) => {
                if piece.points.len() != 1 || &piece.points[0] != p {
                    f.push(format!("piece {k} singleton {p} does not match its points"));
                }
            }
            PieceCover::Curve(c) => {
                if c.d() != cert.d || c.e() != cert.e {
                    f.push(format!("piece {k} curve has shape {}x{}, expected {}x{}", c.d(), c.e(), cert.d, cert.e));
                    continue;
                }
                if !c.is_normalized() {
                    f.push(format!("piece {k} curve is not normalized"));
                }
                for p in &piece.points {
                    let r = c.eval(&p.x, &p.y);
                    if !r.is_zero() {
                        f.push(format!("piece {k} curve has residual {r} at {p}"));
                    }
                }
            }
        }
    }
    report(f, targets.len())
}

fn check_partition(cert: &CoverCertificate, f: &mut Failures) {
    let dom = cert.curve.domain();
    let Some(first) = cert.pieces.first() else {
        f.push("certificate has no pieces".into());
        return;
    };
    let last = cert.pieces.last().expect("nonempty");
    for (k, p) in cert.pieces.iter().enumerate() {
        let i = &p.interval;
        if i.lo() > i.hi() || (i.lo() == i.hi() && !(i.closed_lo() && i.closed_hi())) {
            f.push(format!("piece {k} has an invalid interval {i}"));
        }
    }
    if first.interval.lo() != dom.lo() || first.interval.closed_lo() != dom.closed_lo() {
        f.push(format!("first piece {} does not start the domain {dom}", first.interval));
    }
    if last.interval.hi() != dom.hi() || last.interval.closed_hi() != dom.closed_hi() {
        f.push(format!("last piece {} does not end the domain {dom}", last.interval));
    }
    for (k, w) in cert.pieces.windows(2).enumerate() {
        let (a, b) = (&w[0].interval, &w[1].interval);
        if a.hi() != b.lo() || a.closed_hi() == b.closed_lo() {
            f.push(format!("pieces {k} and {} do not tile: {a} then {b}", k + 1));
        }
    }
}

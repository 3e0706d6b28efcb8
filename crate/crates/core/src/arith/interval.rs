use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ArithError, Rational};

/// Interval with rational endpoints; each end is open or closed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntervalQ {
    lo: Rational,
    hi: Rational,
    closed_lo: bool,
    closed_hi: bool,
}

impl IntervalQ {
    pub fn new(lo: Rational, hi: Rational, closed_lo: bool, closed_hi: bool) -> Result<Self, ArithError> {
        if lo > hi {
            return Err(ArithError::Domain(format!("interval endpoints out of order: {lo} > {hi}")));
        }
        if lo == hi && !(closed_lo && closed_hi) {
            return Err(ArithError::Domain(format!("degenerate interval at {lo} must be closed")));
        }
        Ok(IntervalQ { lo, hi, closed_lo, closed_hi })
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self, ArithError> {
        Self::new(lo, hi, true, true)
    }

    /// `[lo, hi)`.
    pub fn half_open(lo: Rational, hi: Rational) -> Result<Self, ArithError> {
        Self::new(lo, hi, true, false)
    }

    pub fn unit() -> Self {
        IntervalQ { lo: Rational::zero(), hi: Rational::one(), closed_lo: true, closed_hi: true }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn closed_lo(&self) -> bool {
        self.closed_lo
    }

    pub fn closed_hi(&self) -> bool {
        self.closed_hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.closed_lo { x >= &self.lo } else { x > &self.lo };
        let below = if self.closed_hi { x <= &self.hi } else { x < &self.hi };
        above && below
    }

    /// Splits at an interior point `m` into `[lo, m)` and `[m, hi]`, the right
    /// half keeping this interval's upper closedness.
    pub fn split_at(&self, m: &Rational) -> Option<(IntervalQ, IntervalQ)> {
        if m <= &self.lo || m >= &self.hi {
            return None;
        }
        let left = IntervalQ { lo: self.lo.clone(), hi: m.clone(), closed_lo: self.closed_lo, closed_hi: false };
        let right = IntervalQ { lo: m.clone(), hi: self.hi.clone(), closed_lo: true, closed_hi: self.closed_hi };
        Some((left, right))
    }

    pub fn bisect(&self) -> Option<(IntervalQ, IntervalQ)> {
        let mid = (&self.lo + &self.hi) / Rational::from(2);
        self.split_at(&mid)
    }

    /// Cuts into `pieces` equal-width parts, half-open except possibly the last.
    pub fn uniform_partition(&self, pieces: usize) -> Vec<IntervalQ> {
        let pieces = pieces.max(1);
        if pieces == 1 || self.lo == self.hi {
            return vec![self.clone()];
        }
        let step = self.width() / Rational::from(pieces as u64);
        let cuts: Vec<Rational> = (1..pieces).map(|k| &self.lo + &step * Rational::from(k as u64)).collect();
        let mut out = Vec::with_capacity(pieces);
        let mut lo = self.lo.clone();
        let mut closed_lo = self.closed_lo;
        for c in cuts {
            out.push(IntervalQ { lo: lo.clone(), hi: c.clone(), closed_lo, closed_hi: false });
            lo = c;
            closed_lo = true;
        }
        out.push(IntervalQ { lo, hi: self.hi.clone(), closed_lo, closed_hi: self.closed_hi });
        out
    }
}

impl fmt::Display for IntervalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.closed_lo { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.closed_hi { ']' } else { ')' }
        )
    }
}

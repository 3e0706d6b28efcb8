//! Enumeration of `a/N` lattice abscissae and of rationals of bounded height.
//!
//! Height-bounded rationals on the whole line are reduced to the Farey sequence
//! `F_N` on `[0, 1]`: `x -> -x` and `x -> 1/x` both preserve the height, so
//! `(-inf, -1]`, `(-1, 0)`, `[0, 1]` and `(1, inf)` are each images of a
//! stretch of `F_N` walked forwards or backwards.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{IntervalQ, Rational};

/// Numerators `a` with `a/n` in `interval`, as an inclusive range (possibly empty).
pub(crate) fn lattice_numerators(n: u64, interval: &IntervalQ) -> std::ops::RangeInclusive<i64> {
    if n == 0 {
        return std::ops::RangeInclusive::new(1, 0);
    }
    let nn = Rational::from(n);
    let lo = interval.lo() * &nn;
    let hi = interval.hi() * &nn;
    let mut a_lo = lo.ceil();
    if !interval.closed_lo() && lo.is_integer() {
        a_lo += 1;
    }
    let mut a_hi = hi.floor();
    if !interval.closed_hi() && hi.is_integer() {
        a_hi -= 1;
    }
    let clamp = |v: BigInt| v.to_i64().unwrap_or(if v.sign() == num_bigint::Sign::Minus { i64::MIN } else { i64::MAX });
    clamp(a_lo)..=clamp(a_hi)
}

/// Every `a/n` in `interval`, increasing, in lowest terms.
pub fn lattice_x_values(n: u64, interval: &IntervalQ) -> impl Iterator<Item = Rational> {
    let den = n as i64;
    lattice_numerators(n, interval).map(move |a| Rational::frac(a, den))
}

/// Every rational of height at most `n` in `interval`, increasing, each once.
pub fn rationals_of_height(n: u64, interval: &IntervalQ) -> impl Iterator<Item = Rational> {
    HeightFractions::new(n, interval).map(|(p, q)| Rational::frac(p, q as i64))
}

type Frac = (u64, u64);

fn less(a: Frac, b: Frac) -> bool {
    (a.0 as u128) * (b.1 as u128) < (b.0 as u128) * (a.1 as u128)
}

/// Consecutive terms `l <= x < r` of `F_n`, for `0 <= x < 1`.
///
/// Stern–Brocot descent with runs of equal moves taken in one step, so the
/// cost is logarithmic in `n`.
pub fn farey_neighbors(n: u64, x: &Rational) -> (Frac, Frac) {
    assert!(n >= 1, "Farey order must be positive");
    assert!(!x.is_negative() && x < &Rational::one(), "farey_neighbors needs 0 <= x < 1");
    let p = x.numer().clone();
    let q = x.denom().clone();
    let big = |v: u64| BigInt::from(v);
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, 1u64);
    while b + d <= n {
        let mediant_le = big(a + c) * &q <= &p * big(b + d);
        if mediant_le {
            // Largest k with (a + kc)/(b + kd) <= x.
            let num = &p * big(b) - &q * big(a);
            let den = &q * big(c) - &p * big(d);
            let k = (num / den).to_u64().unwrap_or(u64::MAX).min((n - b) / d);
            a += k * c;
            b += k * d;
        } else {
            // Largest k with (c + ka)/(d + kb) > x.
            let num = &q * big(c) - &p * big(d);
            let den = &p * big(b) - &q * big(a);
            let by_value = if den.is_zero() {
                u64::MAX
            } else {
                ((num - 1u32) / den).to_u64().unwrap_or(u64::MAX)
            };
            let k = by_value.min((n - d) / b);
            c += k * a;
            d += k * b;
        }
    }
    ((a, b), (c, d))
}

/// Largest term of `F_n` that is `<= x`, for `0 <= x`.
fn floor_term(n: u64, x: &Rational) -> Frac {
    if x >= &Rational::one() {
        (1, 1)
    } else {
        farey_neighbors(n, x).0
    }
}

/// Ascending walk through `F_n` restricted to `[lo, hi]`.
#[derive(Clone, Debug)]
struct FareyAsc {
    n: u64,
    cur: Option<Frac>,
    nxt: Option<Frac>,
    last: Frac,
}

impl FareyAsc {
    fn new(n: u64, lo: &Rational, hi: &Rational) -> Self {
        let empty = FareyAsc { n, cur: None, nxt: None, last: (0, 1) };
        if n == 0 || lo > hi || hi.is_negative() || lo > &Rational::one() {
            return empty;
        }
        let lo = if lo.is_negative() { Rational::zero() } else { lo.clone() };
        let last = floor_term(n, hi);
        let (cur, nxt) = if lo >= Rational::one() {
            ((1, 1), None)
        } else {
            let (l, r) = farey_neighbors(n, &lo);
            if lo.cmp_frac(l.0 as i64, l.1) == std::cmp::Ordering::Equal {
                (l, Some(r))
            } else {
                (r, Some(next_term(n, l, r)))
            }
        };
        if less(last, cur) {
            return empty;
        }
        FareyAsc { n, cur: Some(cur), nxt, last }
    }
}

fn next_term(n: u64, (a, b): Frac, (c, d): Frac) -> Frac {
    let k = (n + b) / d;
    (k * c - a, k * d - b)
}

impl Iterator for FareyAsc {
    type Item = Frac;

    fn next(&mut self) -> Option<Frac> {
        let cur = self.cur?;
        if cur == self.last {
            self.cur = None;
        } else {
            let nxt = self.nxt.expect("successor present before the last term");
            self.nxt = Some(next_term(self.n, cur, nxt));
            self.cur = Some(nxt);
        }
        Some(cur)
    }
}

#[derive(Clone, Copy, Debug)]
enum Segment {
    /// `x = -1/u`, u ascending in `(0, 1]`.
    NegRecip,
    /// `x = -u`, u descending in `(0, 1)`.
    Neg,
    /// `x = u`, u ascending in `[0, 1]`.
    Ident,
    /// `x = 1/u`, u descending in `(0, 1)`.
    Recip,
}

/// Increasing stream of `(p, q)` with `gcd = 1`, `q > 0`, `max(|p|, q) <= n`
/// and `p/q` in a given interval.
#[derive(Clone, Debug)]
pub struct HeightFractions {
    parts: Vec<(Segment, FareyAsc)>,
    idx: usize,
    open_lo: Option<(i64, u64)>,
    open_hi: Option<(i64, u64)>,
}

impl HeightFractions {
    pub fn new(n: u64, interval: &IntervalQ) -> Self {
        let nn = Rational::from(n);
        let one = Rational::one();
        let lo = interval.lo().clone().max(-&nn);
        let hi = interval.hi().clone().min(nn.clone());
        let mut parts = Vec::new();
        if n >= 1 && lo <= hi {
            let clip = |a: Rational, b: Rational| -> Option<(Rational, Rational)> {
                let l = lo.clone().max(a);
                let h = hi.clone().min(b);
                (l <= h).then_some((l, h))
            };
            let recip = |x: &Rational| x.recip().expect("nonzero by clipping");
            if let Some((l, h)) = clip(-&nn, -&one) {
                let (ul, uh) = (-recip(&l), -recip(&h));
                parts.push((Segment::NegRecip, FareyAsc::new(n, &ul, &uh)));
            }
            if let Some((l, h)) = clip(-&one, Rational::zero()) {
                // u = -x in [-h, -l], walked downwards via w = 1 - u.
                let (wl, wh) = (&one + &l, &one + &h);
                parts.push((Segment::Neg, FareyAsc::new(n, &wl, &wh)));
            }
            if let Some((l, h)) = clip(Rational::zero(), one.clone()) {
                parts.push((Segment::Ident, FareyAsc::new(n, &l, &h)));
            }
            if let Some((l, h)) = clip(one.clone(), nn.clone()) {
                let (ul, uh) = (recip(&h), recip(&l));
                parts.push((Segment::Recip, FareyAsc::new(n, &(&one - &uh), &(&one - &ul))));
            }
        }
        let open_end = |closed: bool, v: &Rational| if closed { None } else { v.to_small() };
        HeightFractions {
            parts,
            idx: 0,
            open_lo: open_end(interval.closed_lo(), interval.lo()),
            open_hi: open_end(interval.closed_hi(), interval.hi()),
        }
    }
}

impl Iterator for HeightFractions {
    type Item = (i64, u64);

    fn next(&mut self) -> Option<(i64, u64)> {
        while self.idx < self.parts.len() {
            let (seg, it) = &mut self.parts[self.idx];
            let Some((p, q)) = it.next() else {
                self.idx += 1;
                continue;
            };
            let x = match seg {
                Segment::NegRecip => {
                    if p == 0 {
                        continue;
                    }
                    (-(q as i64), p)
                }
                Segment::Neg => {
                    let u = q - p;
                    if u == 0 || u == q {
                        continue;
                    }
                    (-(u as i64), q)
                }
                Segment::Ident => (p as i64, q),
                Segment::Recip => {
                    let u = q - p;
                    if u == 0 || u == q {
                        continue;
                    }
                    (q as i64, u)
                }
            };
            if Some(x) == self.open_lo || Some(x) == self.open_hi {
                continue;
            }
            return Some(x);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn iv(lo: Rational, hi: Rational, cl: bool, ch: bool) -> IntervalQ {
        IntervalQ::new(lo, hi, cl, ch).unwrap()
    }

    /// Oracle: scan every q <= n and every |p| <= n.
    fn brute_height(n: u64, i: &IntervalQ) -> Vec<Rational> {
        let mut out = Vec::new();
        let n = n as i64;
        for den in 1..=n {
            for num in -n..=n {
                if num.gcd(&den) == 1 {
                    let r = q(num, den);
                    if i.contains(&r) {
                        out.push(r);
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn lattice_examples() {
        let half_open = iv(q(0, 1), q(1, 1), true, false);
        let v: Vec<String> = lattice_x_values(2, &half_open).map(|r| r.to_string()).collect();
        assert_eq!(v, ["0", "1/2"]);
        let v: Vec<String> = lattice_x_values(4, &half_open).map(|r| r.to_string()).collect();
        assert_eq!(v, ["0", "1/4", "1/2", "3/4"]);
        let mid = iv(q(1, 3), q(2, 3), true, true);
        let v: Vec<String> = lattice_x_values(3, &mid).map(|r| r.to_string()).collect();
        assert_eq!(v, ["1/3", "2/3"]);
        let open = iv(q(1, 3), q(2, 3), false, false);
        assert_eq!(lattice_x_values(3, &open).count(), 0);
    }

    #[test]
    fn farey_examples() {
        let unit = IntervalQ::unit();
        let f2: Vec<String> = rationals_of_height(2, &unit).map(|r| r.to_string()).collect();
        assert_eq!(f2, ["0", "1/2", "1"]);
        let f3: Vec<String> = rationals_of_height(3, &unit).map(|r| r.to_string()).collect();
        assert_eq!(f3, ["0", "1/3", "1/2", "2/3", "1"]);
        assert_eq!(rationals_of_height(5, &unit).count(), 11);
        assert_eq!(brute_height(5, &unit).len(), 11);
    }

    #[test]
    fn neighbors_bracket() {
        assert_eq!(farey_neighbors(3, &q(0, 1)), ((0, 1), (1, 3)));
        assert_eq!(farey_neighbors(3, &q(2, 5)), ((1, 3), (1, 2)));
        assert_eq!(farey_neighbors(3, &q(1, 2)), ((1, 2), (2, 3)));
        assert_eq!(farey_neighbors(1000, &q(1, 1_000_000)), ((0, 1), (1, 1000)));
        assert_eq!(farey_neighbors(7, &q(999, 1000)), ((6, 7), (1, 1)));
    }

    #[test]
    fn whole_line_matches_brute_force() {
        let cases = [
            iv(q(-7, 1), q(7, 1), true, true),
            iv(q(-3, 2), q(5, 2), false, true),
            iv(q(1, 3), q(3, 1), true, true),
            iv(q(-1, 1), q(0, 1), false, false),
            iv(q(2, 7), q(2, 7), true, true),
            iv(q(1, 100), q(1, 50), true, true),
            iv(q(-100, 1), q(-1, 1), true, false),
        ];
        for n in 1..=7 {
            for i in &cases {
                let got: Vec<Rational> = rationals_of_height(n, i).collect();
                assert_eq!(got, brute_height(n, i), "n = {n}, I = {i}");
            }
        }
    }

    #[test]
    fn count_is_one_plus_totient_sum() {
        let unit = IntervalQ::unit();
        let mut phi: Vec<u64> = (0..=1000).collect();
        for p in 2..=1000usize {
            if phi[p] == p as u64 {
                for k in (p..=1000).step_by(p) {
                    phi[k] -= phi[k] / p as u64;
                }
            }
        }
        let mut acc = 1u64;
        for n in 1..=1000usize {
            acc += phi[n];
            if n % 97 == 0 || n <= 20 || n == 1000 {
                assert_eq!(HeightFractions::new(n as u64, &unit).count() as u64, acc, "n = {n}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn height_sets_nested(n in 1u64..40, extra in 0u64..20, a in -30i64..30, b in 1i64..8, w in 0i64..40) {
            let lo = q(a, b);
            let hi = &lo + &q(w, 4);
            let i = IntervalQ::closed(lo, hi).unwrap();
            let small: Vec<Rational> = rationals_of_height(n, &i).collect();
            let large: std::collections::BTreeSet<Rational> = rationals_of_height(n + extra, &i).collect();
            for r in &small {
                prop_assert!(large.contains(r));
                prop_assert!(r.height() <= BigInt::from(n));
                prop_assert!(i.contains(r));
            }
            for pair in small.windows(2) {
                prop_assert!(pair[0] < pair[1]);
            }
        }

        #[test]
        fn lattice_sets_nested(n in 1u64..50, k in 1u64..6, a in -20i64..20, w in 0i64..30, cl: bool, ch: bool) {
            let lo = q(a, 7);
            let hi = &lo + &q(w, 5);
            prop_assume!(w > 0 || (cl && ch));
            let i = IntervalQ::new(lo, hi, cl, ch).unwrap();
            let coarse: Vec<Rational> = lattice_x_values(n, &i).collect();
            let fine: std::collections::BTreeSet<Rational> = lattice_x_values(n * k, &i).collect();
            for r in &coarse {
                prop_assert!(fine.contains(r));
                prop_assert!(i.contains(r));
            }
        }
    }
}

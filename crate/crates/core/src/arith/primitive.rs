use std::cmp::Ordering;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::ArithError;

/// Primitive vector with positive coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimVec {
    x: u64,
    y: u64,
}

impl PrimVec {
    pub fn new(x: u64, y: u64) -> Result<Self, ArithError> {
        if x == 0 || y == 0 {
            return Err(ArithError::Domain(format!("primitive vector needs positive coordinates, got ({x}, {y})")));
        }
        if x.gcd(&y) != 1 {
            return Err(ArithError::Domain(format!("({x}, {y}) is not primitive")));
        }
        Ok(PrimVec { x, y })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    /// Orders by slope `y/x`.
    pub fn cmp_slope(&self, other: &PrimVec) -> Ordering {
        (self.y as u128 * other.x as u128).cmp(&(other.y as u128 * self.x as u128))
    }
}

/// Divides out `gcd(x, y)`.
pub fn primitivize(x: i64, y: i64) -> Result<PrimVec, ArithError> {
    if x <= 0 || y <= 0 {
        return Err(ArithError::Domain(format!("primitivize needs positive coordinates, got ({x}, {y})")));
    }
    let (x, y) = (x as u64, y as u64);
    let g = x.gcd(&y);
    Ok(PrimVec { x: x / g, y: y / g })
}

/// All primitive `(x, y)` with `x, y > 0` and `x + y <= x_max`, by increasing slope.
pub fn enumerate_s(x_max: u64) -> Vec<PrimVec> {
    if x_max < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for x in 1..x_max {
        for y in 1..=(x_max - x) {
            if x.gcd(&y) == 1 {
                out.push(PrimVec { x, y });
            }
        }
    }
    out.sort_unstable_by(PrimVec::cmp_slope);
    out
}

/// Cardinality of `S_X` and the sum of first coordinates over it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SxStats {
    pub count: u64,
    pub sum_x: u128,
}

/// Streaming `|S_X|` and `sum x` via Möbius inversion over the gcd.
///
/// Pairs with `x + y <= m` number `m(m-1)/2` and their first coordinates sum to
/// `(m+1)m(m-1)/6`; pairs with gcd divisible by `k` are `k` times the pairs
/// with `x + y <= X/k`.
pub fn s_count_and_sum(x_max: u64) -> SxStats {
    if x_max < 2 {
        return SxStats { count: 0, sum_x: 0 };
    }
    let mu = mobius_table(x_max as usize);
    let mut count: i128 = 0;
    let mut sum_x: i128 = 0;
    for k in 1..=x_max {
        let m = mu[k as usize];
        if m == 0 {
            continue;
        }
        let q = (x_max / k) as i128;
        let pairs = q * (q - 1) / 2;
        let firsts = (q + 1) * q * (q - 1) / 6;
        count += m as i128 * pairs;
        sum_x += m as i128 * k as i128 * firsts;
    }
    SxStats { count: count as u64, sum_x: sum_x as u128 }
}

fn mobius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    mu[0] = 0;
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(x_max: u64) -> (u64, u128) {
        let mut count = 0;
        let mut sum = 0u128;
        for x in 1..x_max.max(1) {
            for y in 1..=(x_max - x) {
                if x.gcd(&y) == 1 {
                    count += 1;
                    sum += x as u128;
                }
            }
        }
        (count, sum)
    }

    #[test]
    fn primitivize_examples() {
        assert_eq!(primitivize(4, 6).unwrap(), PrimVec::new(2, 3).unwrap());
        assert_eq!(primitivize(1, 1).unwrap(), PrimVec::new(1, 1).unwrap());
        assert_eq!(primitivize(12, 12).unwrap(), PrimVec::new(1, 1).unwrap());
        assert!(primitivize(0, 3).is_err());
        assert!(primitivize(-2, 3).is_err());
        assert!(PrimVec::new(2, 4).is_err());
    }

    #[test]
    fn enumerate_small() {
        assert_eq!(enumerate_s(1), vec![]);
        assert_eq!(enumerate_s(2), vec![PrimVec { x: 1, y: 1 }]);
        let s3: Vec<(u64, u64)> = enumerate_s(3).iter().map(|v| (v.x, v.y)).collect();
        assert_eq!(s3, vec![(2, 1), (1, 1), (1, 2)]);
        assert_eq!(enumerate_s(10).len() as u64, brute(10).0);
    }

    #[test]
    fn count_and_sum_small() {
        assert_eq!(s_count_and_sum(2), SxStats { count: 1, sum_x: 1 });
        assert_eq!(s_count_and_sum(3), SxStats { count: 3, sum_x: 4 });
        for x in 0..60 {
            let (c, s) = brute(x);
            assert_eq!(s_count_and_sum(x), SxStats { count: c, sum_x: s }, "X = {x}");
        }
    }

    #[test]
    fn count_matches_totient_sum() {
        // |S_X| = sum_{s=2}^{X} phi(s): gcd(x, s - x) = gcd(x, s).
        let x_max = 3000u64;
        let mut phi: Vec<u64> = (0..=x_max).collect();
        for p in 2..=x_max as usize {
            if phi[p] == p as u64 {
                for k in (p..=x_max as usize).step_by(p) {
                    phi[k] -= phi[k] / p as u64;
                }
            }
        }
        let total: u64 = phi[2..].iter().sum();
        assert_eq!(s_count_and_sum(x_max).count, total);
    }

    #[test]
    fn asymptotics_at_one_thousand() {
        let s = s_count_and_sum(1000);
        let pi2 = std::f64::consts::PI.powi(2);
        let ratio = s.count as f64 * pi2 / (3.0 * 1e6);
        assert!((0.98..=1.02).contains(&ratio), "{ratio}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn count_within_error_term(x in 10u64..=5000) {
            let s = s_count_and_sum(x);
            let xf = x as f64;
            let main = 3.0 * xf * xf / std::f64::consts::PI.powi(2);
            prop_assert!((s.count as f64 - main).abs() <= 10.0 * xf * xf.ln());
        }

        #[test]
        fn sum_within_error_term(x in 10u64..=2000) {
            let s = s_count_and_sum(x);
            let xf = x as f64;
            let main = xf.powi(3) / std::f64::consts::PI.powi(2);
            prop_assert!((s.sum_x as f64 - main).abs() <= 10.0 * xf * xf * xf.ln());
        }

        #[test]
        fn enumeration_is_slope_sorted_and_primitive(x in 2u64..=80) {
            let s = enumerate_s(x);
            prop_assert_eq!(s.len() as u64, s_count_and_sum(x).count);
            for w in s.windows(2) {
                prop_assert_eq!(w[0].cmp_slope(&w[1]), Ordering::Less);
            }
            for v in &s {
                prop_assert_eq!(v.x.gcd(&v.y), 1);
                prop_assert!(v.x + v.y <= x);
            }
        }
    }
}

//! Enumeration of `Γ ∩ (1/N)Z²` and `Γ(Q, N)` restricted to a curve's domain.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{fibers_implicit, horner, perfect_root, BiPoly, Curve, CurveError, CurveKind, Mode, PointQ};
use crate::arith::{lattice_x_values, HeightFractions, IntervalQ, Rational};

/// Abscissa count above which the domain is split across worker threads.
const PARALLEL_THRESHOLD: u64 = 512;

pub fn enumerate_points(curve: &Curve, n: u64, mode: Mode) -> Result<Vec<PointQ>, CurveError> {
    if n == 0 {
        return Err(CurveError::Invalid("N must be at least 1".into()));
    }
    let chunks = match curve.kind() {
        CurveKind::PowGraph(_) => 1,
        _ if n >= PARALLEL_THRESHOLD => rayon::current_num_threads() * 4,
        _ => 1,
    };
    let parts = curve.domain().uniform_partition(chunks);
    let found: Vec<Vec<PointQ>> = parts
        .par_iter()
        .map(|part| enumerate_in(curve.kind(), n, mode, part))
        .collect::<Result<_, _>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Points of the curve whose coordinates both lie in `(1/N)Z`, ordered by x then y.
pub fn enumerate_lattice_points(curve: &Curve, n: u64) -> Result<Vec<PointQ>, CurveError> {
    enumerate_points(curve, n, Mode::Lattice)
}

/// Points of the curve with both coordinate heights at most `N`, ordered by x then y.
pub fn enumerate_height_points(curve: &Curve, n: u64) -> Result<Vec<PointQ>, CurveError> {
    enumerate_points(curve, n, Mode::Height)
}

fn enumerate_in(kind: &CurveKind, n: u64, mode: Mode, domain: &IntervalQ) -> Result<Vec<PointQ>, CurveError> {
    match (kind, mode) {
        (CurveKind::PolyGraph(c), Mode::Lattice) => Ok(poly_lattice(c, n, domain)),
        (CurveKind::PolyGraph(c), Mode::Height) => Ok(poly_height(c, n, domain)),
        (CurveKind::PowGraph(b), Mode::Lattice) => Ok(pow_lattice(*b, n, domain)),
        (CurveKind::PowGraph(b), Mode::Height) => Ok(pow_height(*b, n, domain)),
        (CurveKind::Implicit(f), Mode::Lattice) => implicit_points(f, domain, lattice_x_values(n, domain), |y| {
            divides(y.denom(), n)
        }),
        (CurveKind::Implicit(f), Mode::Height) => {
            let xs = HeightFractions::new(n, domain).map(|(p, q)| Rational::frac(p, q as i64));
            implicit_points(f, domain, xs, |y| y.height() <= BigInt::from(n))
        }
    }
}

fn divides(d: &BigInt, n: u64) -> bool {
    d.to_u64().is_some_and(|d| n % d == 0)
}

/// `y(p/q)` for a polynomial with rational coefficients, in machine integers.
///
/// With `L` the lcm of the coefficient denominators and `A_i = c_i L`,
/// `y = (sum A_i p^i q^(k-i)) / (L q^k)`.
struct PolyKernel {
    ints: Vec<i128>,
    lcm: i128,
}

impl PolyKernel {
    fn new(coeffs: &[Rational]) -> Option<Self> {
        let lcm = coeffs.iter().try_fold(1i128, |acc, c| {
            let d = c.denom().to_i128()?;
            acc.checked_mul(d / acc.gcd(&d))
        })?;
        let ints = coeffs
            .iter()
            .map(|c| c.numer().to_i128()?.checked_mul(lcm / c.denom().to_i128()?))
            .collect::<Option<Vec<_>>>()?;
        Some(PolyKernel { ints, lcm })
    }

    /// Reduced `(num, den)`, or `None` on overflow.
    fn eval(&self, p: i64, q: u64) -> Option<(i128, i128)> {
        let (p, q) = (p as i128, q as i128);
        let k = self.ints.len() - 1;
        let mut acc = self.ints[k];
        let mut q_pow = 1i128;
        for i in (0..k).rev() {
            q_pow = q_pow.checked_mul(q)?;
            acc = acc.checked_mul(p)?.checked_add(self.ints[i].checked_mul(q_pow)?)?;
        }
        let den = self.lcm.checked_mul(q_pow)?;
        let g = acc.gcd(&den);
        Some((acc / g, den / g))
    }
}

fn poly_lattice(c: &[Rational], n: u64, domain: &IntervalQ) -> Vec<PointQ> {
    let kernel = PolyKernel::new(c);
    let range = crate::arith::lattice_numerators(n, domain);
    let mut out = Vec::new();
    for a in range {
        let g = (a.unsigned_abs()).gcd(&n);
        let (p, q) = (a / g as i64, n / g);
        let hit = match kernel.as_ref().and_then(|k| k.eval(p, q)) {
            Some((_, den)) => n % den as u64 == 0 && den <= n as i128,
            None => divides(horner(c, &Rational::frac(p, q as i64)).denom(), n),
        };
        if hit {
            let x = Rational::frac(p, q as i64);
            let y = horner(c, &x);
            out.push(PointQ::new(x, y));
        }
    }
    out
}

fn poly_height(c: &[Rational], n: u64, domain: &IntervalQ) -> Vec<PointQ> {
    let kernel = PolyKernel::new(c);
    let bound = n as i128;
    let mut out = Vec::new();
    for (p, q) in HeightFractions::new(n, domain) {
        let hit = match kernel.as_ref().and_then(|k| k.eval(p, q)) {
            Some((num, den)) => num.abs() <= bound && den <= bound,
            None => horner(c, &Rational::frac(p, q as i64)).height() <= BigInt::from(n),
        };
        if hit {
            let x = Rational::frac(p, q as i64);
            let y = horner(c, &x);
            out.push(PointQ::new(x, y));
        }
    }
    out
}

/// `r^p` for `r >= 2` and an exponent of either sign.
fn signed_power(r: u64, p: i64) -> Rational {
    let v = Rational::from(num_traits::pow(BigInt::from(r), p.unsigned_abs() as usize));
    if p < 0 {
        v.recip().expect("r >= 2")
    } else {
        v
    }
}

// base^(p/q) with gcd(p, q) = 1 is rational iff base = r^q for an integer r, and
// then equals r^p. `Curve::eval_exact` does the full root test instead; the
// two are cross-checked in the tests below.
fn pow_lattice(base: u64, n: u64, domain: &IntervalQ) -> Vec<PointQ> {
    let mut roots: HashMap<u64, Option<u64>> = HashMap::new();
    let mut out = Vec::new();
    for a in crate::arith::lattice_numerators(n, domain) {
        let g = a.unsigned_abs().gcd(&n);
        let (p, q) = (a / g as i64, n / g);
        let Some(r) = *roots.entry(q).or_insert_with(|| perfect_root(base, q)) else {
            continue;
        };
        let y = signed_power(r, p);
        if divides(y.denom(), n) {
            out.push(PointQ::new(Rational::frac(p, q as i64), y));
        }
    }
    out
}

fn pow_height(base: u64, n: u64, domain: &IntervalQ) -> Vec<PointQ> {
    let mut out = Vec::new();
    for q in 1..=n.min(64) {
        let Some(r) = perfect_root(base, q) else {
            continue;
        };
        // r^|p| <= n bounds the exponent.
        let mut p_max = 0i64;
        let mut acc = r as u128;
        while acc <= n as u128 {
            p_max += 1;
            acc *= r as u128;
        }
        let p_max = p_max.min(n as i64);
        for p in -p_max..=p_max {
            if p.unsigned_abs().gcd(&q) != 1 {
                continue;
            }
            let x = Rational::frac(p, q as i64);
            if domain.contains(&x) {
                out.push(PointQ::new(x, signed_power(r, p)));
            }
        }
    }
    out.sort();
    out
}

fn implicit_points(
    f: &BiPoly,
    domain: &IntervalQ,
    xs: impl Iterator<Item = Rational>,
    keep: impl Fn(&Rational) -> bool,
) -> Result<Vec<PointQ>, CurveError> {
    let mut out = Vec::new();
    for x in xs {
        debug_assert!(domain.contains(&x));
        for y in fibers_implicit(f, &x)? {
            if keep(&y) {
                out.push(PointQ::new(x.clone(), y));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Eval;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn parabola(domain: IntervalQ) -> Curve {
        Curve::poly_graph(vec![q(0, 1), q(0, 1), q(1, 1)], domain)
    }

    fn half_open_unit() -> IntervalQ {
        IntervalQ::half_open(q(0, 1), q(1, 1)).unwrap()
    }

    /// Oracle: every a/n in the domain, evaluated through `eval_exact`.
    fn brute_lattice(c: &Curve, n: u64) -> Vec<PointQ> {
        let mut out = Vec::new();
        for x in lattice_x_values(n, c.domain()) {
            for y in c.fiber(&x).unwrap() {
                if divides(y.denom(), n) {
                    out.push(PointQ::new(x.clone(), y));
                }
            }
        }
        out
    }

    /// Oracle: scan all p/q with q <= n, |p| <= n.
    fn brute_height(c: &Curve, n: u64) -> Vec<PointQ> {
        let mut out = Vec::new();
        let n_i = n as i64;
        for den in 1..=n_i {
            for num in -n_i..=n_i {
                if num.gcd(&den) != 1 {
                    continue;
                }
                let x = q(num, den);
                if !c.domain().contains(&x) {
                    continue;
                }
                for y in c.fiber(&x).unwrap() {
                    if y.height() <= BigInt::from(n) {
                        out.push(PointQ::new(x.clone(), y));
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn parabola_lattice_examples() {
        let c = parabola(half_open_unit());
        let pts = enumerate_lattice_points(&c, 4).unwrap();
        assert_eq!(pts, vec![PointQ::new(q(0, 1), q(0, 1)), PointQ::new(q(1, 2), q(1, 4))]);
        for m in 1..=12u64 {
            assert_eq!(enumerate_lattice_points(&c, m * m).unwrap().len() as u64, m, "M = {m}");
        }
    }

    #[test]
    fn parabola_height_example() {
        let c = parabola(IntervalQ::unit());
        let pts = enumerate_height_points(&c, 4).unwrap();
        assert_eq!(
            pts,
            vec![
                PointQ::new(q(0, 1), q(0, 1)),
                PointQ::new(q(1, 2), q(1, 4)),
                PointQ::new(q(1, 1), q(1, 1))
            ]
        );
    }

    #[test]
    fn hyperbola_height_example() {
        let f = &(&BiPoly::x() * &BiPoly::y()) - &BiPoly::constant(q(1, 1));
        let c = Curve::implicit(f, IntervalQ::closed(q(1, 3), q(3, 1)).unwrap()).unwrap();
        let pts = enumerate_height_points(&c, 3).unwrap();
        let xs: Vec<String> = pts.iter().map(|p| p.x.to_string()).collect();
        assert_eq!(xs, ["1/3", "1/2", "2/3", "1", "3/2", "2", "3"]);
        assert!(pts.iter().all(|p| p.x.clone() * p.y.clone() == q(1, 1)));
        assert_eq!(pts, brute_height(&c, 3));
    }

    #[test]
    fn pow_examples() {
        let c = Curve::pow_graph(2, IntervalQ::unit()).unwrap();
        assert_eq!(
            enumerate_lattice_points(&c, 6).unwrap(),
            vec![PointQ::new(q(0, 1), q(1, 1)), PointQ::new(q(1, 1), q(2, 1))]
        );
        assert_eq!(enumerate_height_points(&c, 10).unwrap().len(), 2);
        for n in 2..200 {
            assert_eq!(enumerate_height_points(&c, n).unwrap().len(), 2);
        }
        assert_eq!(enumerate_height_points(&c, 1).unwrap().len(), 1);
    }

    #[test]
    fn shifted_parabola_has_no_lattice_points() {
        // a^2/9 + 1/3 = (a^2 + 3)/9 lies in (1/3)Z iff 3 | a^2 + 3 iff 3 | a,
        // i.e. a = 0 or 3, giving y = 1/3 or 4/3: those are lattice points.
        // So use N = 3 on (0, 1): a in {1, 2} gives (1 + 3)/9, (4 + 3)/9.
        let c = Curve::poly_graph(vec![q(1, 3), q(0, 1), q(1, 1)], IntervalQ::new(q(0, 1), q(1, 1), false, false).unwrap());
        assert!(enumerate_lattice_points(&c, 3).unwrap().is_empty());
        assert!(brute_lattice(&c, 3).is_empty());
    }

    #[test]
    fn kernels_agree_with_brute_force() {
        let doms = [
            IntervalQ::unit(),
            IntervalQ::closed(q(-2, 1), q(3, 2)).unwrap(),
            IntervalQ::new(q(-1, 3), q(5, 2), false, true).unwrap(),
        ];
        let f = &(&BiPoly::y().pow(2) - &BiPoly::x()) - &BiPoly::constant(q(0, 1));
        let hyper = &(&BiPoly::x() * &BiPoly::y()) - &BiPoly::constant(q(2, 1));
        for dom in doms {
            let mut curves = vec![
                Curve::poly_graph(vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)], dom.clone()),
                Curve::poly_graph(vec![q(1, 2), q(-2, 3), q(3, 4)], dom.clone()),
                Curve::pow_graph(2, dom.clone()).unwrap(),
                Curve::pow_graph(8, dom.clone()).unwrap(),
                Curve::implicit(f.clone(), dom.clone()).unwrap(),
            ];
            if !dom.contains(&q(0, 1)) {
                curves.push(Curve::implicit(hyper.clone(), dom.clone()).unwrap());
            }
            for c in &curves {
                for n in [1u64, 2, 3, 4, 6, 8, 9, 12, 16] {
                    assert_eq!(enumerate_lattice_points(c, n).unwrap(), brute_lattice(c, n), "{c:?} lattice N={n}");
                    assert_eq!(enumerate_height_points(c, n).unwrap(), brute_height(c, n), "{c:?} height N={n}");
                }
            }
        }
    }

    #[test]
    fn parallel_split_matches_serial() {
        let c = Curve::poly_graph(vec![q(0, 1), q(1, 2), q(1, 2)], IntervalQ::unit());
        let n = 2048;
        let serial = poly_height(&[q(0, 1), q(1, 2), q(1, 2)], n, c.domain());
        assert_eq!(enumerate_height_points(&c, n).unwrap(), serial);
        let serial = poly_lattice(&[q(0, 1), q(1, 2), q(1, 2)], n, c.domain());
        assert_eq!(enumerate_lattice_points(&c, n).unwrap(), serial);
    }

    #[test]
    fn pow_shortcut_matches_exact_root_test() {
        let dom = IntervalQ::closed(q(-6, 1), q(6, 1)).unwrap();
        for base in 2..=32u64 {
            let c = Curve::pow_graph(base, dom.clone()).unwrap();
            for den in 1..=12i64 {
                for num in -6 * den..=6 * den {
                    if num.gcd(&den) != 1 {
                        continue;
                    }
                    let x = q(num, den);
                    let exact = c.eval_exact(&x).unwrap();
                    let fast = perfect_root(base, den as u64).map(|r| signed_power(r, num));
                    match (exact, fast) {
                        (Eval::Value(a), Some(b)) => assert_eq!(a, b),
                        (Eval::NotRational, None) => {}
                        other => panic!("base {base}, x = {x}: {other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn power_curve_height_counts_follow_root_rule() {
        // For y = x^d on [0,1] the height of x^d is H(x)^d.
        for d in [2u32, 3] {
            let mut coeffs = vec![q(0, 1); d as usize + 1];
            coeffs[d as usize] = q(1, 1);
            let c = Curve::poly_graph(coeffs, IntervalQ::unit());
            for n in [1u64, 7, 50, 343, 1000, 4096, 10_000] {
                let root = (1..).take_while(|k: &u64| k.pow(d) <= n).last().unwrap_or(0).max(1);
                let expected = crate::arith::rationals_of_height(root, &IntervalQ::unit()).count();
                assert_eq!(enumerate_height_points(&c, n).unwrap().len(), expected, "d={d} N={n}");
            }
        }
    }
}

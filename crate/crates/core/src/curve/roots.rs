//! Rational roots of univariate polynomials over Q.
//!
//! Denominators are cleared first; a root `r/s` of the primitive integer
//! polynomial then has `r | a_0` and `s | a_n`. Degrees one and two are solved
//! directly, higher degrees by divisor enumeration.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{common_denominator, Rational};

/// Distinct rational roots of `sum coeffs[k] y^k`, ascending.
/// Returns `None` when the polynomial is identically zero.
pub fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut ints = to_primitive_integers(coeffs)?;
    let mut roots = Vec::new();
    let zeros = ints.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.push(Rational::zero());
        ints.drain(..zeros);
    }
    match ints.len() {
        0 | 1 => {}
        2 => roots.push(Rational::new(-&ints[0], ints[1].clone()).expect("leading coefficient nonzero")),
        3 => roots.extend(quadratic_roots(&ints[0], &ints[1], &ints[2])),
        _ => roots.extend(divisor_search(&ints)),
    }
    roots.sort();
    roots.dedup();
    Some(roots)
}

fn to_primitive_integers(coeffs: &[Rational]) -> Option<Vec<BigInt>> {
    let end = coeffs.iter().rposition(|c| !c.is_zero())? + 1;
    let coeffs = &coeffs[..end];
    let den = common_denominator(coeffs);
    let mut ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    for c in &mut ints {
        *c /= &content;
    }
    Some(ints)
}

fn quadratic_roots(c: &BigInt, b: &BigInt, a: &BigInt) -> Vec<Rational> {
    let disc = b * b - BigInt::from(4) * a * c;
    if disc.is_negative() {
        return Vec::new();
    }
    let s = disc.sqrt();
    if &s * &s != disc {
        return Vec::new();
    }
    let two_a = BigInt::from(2) * a;
    vec![
        Rational::new(-b - &s, two_a.clone()).expect("a != 0"),
        Rational::new(-b + &s, two_a).expect("a != 0"),
    ]
}

fn divisor_search(ints: &[BigInt]) -> Vec<Rational> {
    let n = ints.len() - 1;
    let nums = divisors(&ints[0].magnitude().clone());
    let dens = divisors(&ints[n].magnitude().clone());
    let mut out = Vec::new();
    for s in &dens {
        for r in &nums {
            if r.gcd(s) != BigUint::one() {
                continue;
            }
            for sign in [Sign::Minus, Sign::Plus] {
                let r = BigInt::from_biguint(sign, r.clone());
                let s = BigInt::from(s.clone());
                if homogeneous_eval(ints, &r, &s).is_zero() {
                    out.push(Rational::new(r, s).expect("divisor is nonzero"));
                }
            }
        }
    }
    out
}

/// `s^n * P(r/s)` for `P` of degree `n`.
fn homogeneous_eval(ints: &[BigInt], r: &BigInt, s: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let mut s_pow = BigInt::one();
    // Horner in r with the matching power of s on each coefficient.
    for (k, c) in ints.iter().enumerate().rev() {
        if k + 1 < ints.len() {
            s_pow *= s;
        }
        acc = acc * r + c * &s_pow;
    }
    acc
}

/// All positive divisors of `n` (`n > 0`), unsorted.
pub(crate) fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = d.clone();
            next.push(pk.clone());
            for _ in 0..e {
                pk *= &p;
                next.push(pk.clone());
            }
        }
        divs = next;
    }
    divs
}

/// Prime factorization as `(prime, exponent)` pairs, ascending by prime.
pub(crate) fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut primes: Vec<BigUint> = Vec::new();
    let mut rest = n.clone();
    if rest.is_zero() {
        return Vec::new();
    }
    let mut p = 2u32;
    while p < 1 << 12 {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        while (&rest % &bp).is_zero() {
            primes.push(bp.clone());
            rest /= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = Vec::new();
    if rest > BigUint::one() {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            primes.push(m);
            continue;
        }
        if let Some(r) = perfect_square_root(&m) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let f = pollard_brent(&m);
        stack.push(&m / &f);
        stack.push(f);
    }
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn perfect_square_root(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

const WITNESSES: [u32; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];

/// Miller–Rabin with the first twenty prime bases; deterministic below 3.3e24.
fn is_probable_prime(n: &BigUint) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &w in &WITNESSES {
        let w = BigUint::from(w);
        if *n == w {
            return true;
        }
        if (n % &w).is_zero() {
            return false;
        }
    }
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for &w in &WITNESSES {
        let mut x = BigUint::from(w).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of the odd composite `n`.
fn pollard_brent(n: &BigUint) -> BigUint {
    if (n % 2u32).is_zero() {
        return BigUint::from(2u32);
    }
    let one = BigUint::one();
    for seed in 1u32.. {
        let c = BigUint::from(seed);
        let mut y = BigUint::from(seed + 1) % n;
        let m = 64u32;
        let mut g = one.clone();
        let mut r = 1u64;
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let f = |v: &BigUint| (v * v + &c) % n;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min((r - k) as u32) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m as u64;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
    }
    unreachable!("some polynomial seed splits every composite")
}

/// Exact integer `k`-th root of `n >= 0`, if one exists.
pub(crate) fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

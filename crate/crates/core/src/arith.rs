//! Small integer and rational helpers shared by all modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a.lcm(&b)
}

/// Canonical representative of `a` modulo `m` in `[0, m)`.
pub fn modp(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, if it exists. For `m == 1` the answer is `0`.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let (g, x, _) = ext_gcd(modp(a, m), m);
    (g == 1).then(|| modp(x, m))
}

/// Prime factorization as `(p, exponent)` pairs in increasing order of `p`.
pub fn factorize(mut n: i64) -> Vec<(i64, u32)> {
    assert!(n > 0, "factorize needs a positive integer");
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: i64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

/// Exponent of the prime `p` in `n` (`n > 0`).
pub fn valuation(mut n: i64, p: i64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn is_squarefree(n: i64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn euler_phi(n: i64) -> i64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `(numerator, denominator)` of a rational known to fit in `i64`.
pub fn rat_parts(r: &Rational) -> (i64, i64) {
    let n = i64::try_from(r.numer()).expect("numerator out of range");
    let d = i64::try_from(r.denom()).expect("denominator out of range");
    (n, d)
}

/// Second Bernoulli polynomial evaluated at the fractional part of `x`.
pub fn bernoulli2(x: &Rational) -> Rational {
    let frac = x - x.floor();
    &frac * &frac - &frac + rat(1, 6)
}

/// Gcd of two rationals: the positive generator of `aZ + bZ`.
pub fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    let den = a.denom().lcm(b.denom());
    let an = a.numer() * (&den / a.denom());
    let bn = b.numer() * (&den / b.denom());
    Rational::new(an.gcd(&bn), den)
}

/// Formats a rational as the `"p/q"` wire string (denominator always present).
pub fn rat_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn abs_rat(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_identity() {
        for a in -20..20 {
            for b in -20..20 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g, gcd(a, b));
            }
        }
    }

    #[test]
    fn bernoulli_distribution_relation() {
        for m in 1..12 {
            let s: Rational = (0..m).map(|k| bernoulli2(&rat(k, m))).sum();
            assert_eq!(s, rat(1, 6 * m));
        }
        assert_eq!(bernoulli2(&rat(1, 2)), rat(-1, 12));
    }

    #[test]
    fn rational_gcd_examples() {
        assert_eq!(rational_gcd(&rat(1, 2), &rat(1, 3)), rat(1, 6));
        assert_eq!(rational_gcd(&rat(4, 1), &rat(0, 1)), rat(4, 1));
        assert_eq!(rational_gcd(&rat(-3, 2), &rat(1, 1)), rat(1, 2));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-2"), Some(rat_int(-2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(rat_to_string(&rat_int(2)), "2/1");
    }
}

//! Exact arithmetic in cyclotomic fields `Q(ζ_m) = Q[x] / Φ_m(x)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{self, modp, Rational};
use crate::fqm::RationalMod1;
use crate::linalg::{ExactMatrix, Scalar};

/// The field `Q(ζ_m)` with its power basis `1, ζ, ..., ζ^{φ(m)-1}`.
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u64,
    degree: usize,
    /// `ζ^k` in the power basis, for `0 <= k < m`; integer coefficients.
    powers: Vec<Vec<i64>>,
}

impl CyclotomicField {
    /// Shared instance for conductor `m`.
    pub fn get(m: u64) -> Arc<CyclotomicField> {
        assert!(m >= 1, "conductor must be positive");
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("cyclotomic cache poisoned");
        guard.entry(m).or_insert_with(|| Arc::new(Self::build(m))).clone()
    }

    fn build(m: u64) -> Self {
        let phi = cyclotomic_polynomial(m);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x and reduce with the monic Φ_m
            let top = cur[degree - 1];
            for j in (1..degree).rev() {
                cur[j] = cur[j - 1] - top * phi[j];
            }
            cur[0] = -top * phi[0];
        }
        Self {
            conductor: m,
            degree,
            powers,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// Integer coefficients of `Φ_m`, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    // x^m - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            num = exact_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd]; // den is monic
        q[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact polynomial division");
    q
}

/// An element of `Q(ζ_m)` in the power basis.
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero(m: u64) -> Self {
        let field = CyclotomicField::get(m);
        let coeffs = vec![Rational::zero(); field.degree];
        Self { field, coeffs }
    }

    pub fn one(m: u64) -> Self {
        Self::from_rational(m, Rational::one())
    }

    pub fn from_rational(m: u64, r: Rational) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = r;
        z
    }

    /// `ζ_m^k`.
    pub fn root_of_unity(m: u64, k: i64) -> Self {
        let field = CyclotomicField::get(m);
        let idx = modp(k, m as i64) as usize;
        let coeffs = field.powers[idx].iter().map(|&c| arith::rat_int(c)).collect();
        Self { field, coeffs }
    }

    /// `e(x) = exp(2πi x)` for `x` in `Q/Z`; the denominator of `x` must divide `m`.
    pub fn e(m: u64, x: RationalMod1) -> Self {
        let d = x.denominator() as u64;
        assert!(m % d == 0, "e({x}) does not lie in Q(ζ_{m})");
        Self::root_of_unity(m, x.numerator() * (m / d) as i64)
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn from_coefficients(m: u64, coeffs: Vec<Rational>) -> Self {
        let field = CyclotomicField::get(m);
        assert_eq!(coeffs.len(), field.degree, "wrong number of coefficients");
        Self { field, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.field.conductor, other.field.conductor,
            "cyclotomic operands from different fields"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Self {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| a * r).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let d = self.field.degree;
        let m = self.field.conductor as usize;
        if let Some(r) = self.as_rational() {
            return other.scale(&r);
        }
        if let Some(r) = other.as_rational() {
            return self.scale(&r);
        }
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut out = prod[..d].to_vec();
        for (k, c) in prod.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (j, &t) in self.field.powers[k % m].iter().enumerate() {
                if t != 0 {
                    out[j] += c * Rational::from_integer(BigInt::from(t));
                }
            }
        }
        Self {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    /// Multiplicative inverse, by solving `self * y = 1` in the power basis.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if let Some(r) = self.as_rational() {
            return Self::from_rational(self.conductor(), r.recip());
        }
        let d = self.field.degree;
        let m = self.conductor();
        let basis: Vec<Self> = (0..d).map(|j| self.mul(&Self::root_of_unity(m, j as i64))).collect();
        let a = ExactMatrix::from_fn(d, d, Rational::zero(), |r, c| basis[c].coeffs[r].clone());
        let mut rhs = vec![Rational::zero(); d];
        rhs[0] = Rational::one();
        let y = a.solve(&rhs).expect("nonzero element of a field is invertible");
        Self::from_coefficients(m, y)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.conductor());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Image under `Q(ζ_m) -> Q(ζ_M)`, `ζ_m -> ζ_M^{M/m}`, for `m | M`.
    pub fn embed(&self, target: u64) -> Self {
        let m = self.conductor();
        if m == target {
            return self.clone();
        }
        assert!(target % m == 0, "cannot embed Q(ζ_{m}) into Q(ζ_{target})");
        let step = (target / m) as i64;
        let mut out = Self::zero(target);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&Self::root_of_unity(target, i as i64 * step).scale(c));
            }
        }
        out
    }

    /// If the element is a root of unity `e(x)`, returns `x`.
    pub fn root_of_unity_exponent(&self) -> Option<RationalMod1> {
        let m = self.conductor() as i64;
        (0..m)
            .find(|&k| *self == Self::root_of_unity(m as u64, k))
            .map(|k| RationalMod1::new(k, m))
    }

    /// Coefficients as `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(arith::rat_to_string).collect()
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.coeffs == other.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{i}"),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} [ζ_{}]", terms.join(" + "), self.field.conductor)
    }
}

impl Scalar for CyclotomicNumber {
    fn zero_like(&self) -> Self {
        Self::zero(self.conductor())
    }
    fn one_like(&self) -> Self {
        Self::one(self.conductor())
    }
    fn vanishes(&self) -> bool {
        CyclotomicNumber::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn inverse(&self) -> Self {
        self.inv()
    }
}

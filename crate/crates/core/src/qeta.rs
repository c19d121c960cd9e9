//! Truncated Puiseux series over cyclotomic fields, eta quotients and their orders at cusps.
//!
//! `eta(alpha z + beta) = e(beta/24) q^{alpha/24} sum_k (-1)^k e(beta g_k) q^{alpha g_k}`
//! with the generalized pentagonal numbers `g_k = k(3k-1)/2`, `k` in `Z`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, rat, rat_int, rat_parts, rational_gcd, Rational};
use crate::cusps::{self, CuspLabel, Star};
use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::fqm::{DiscriminantForm, FqmSubgroup, RationalMod1};
use crate::guard::Guard;

/// A series `sum c_j q^{j/m}` with coefficients in `Q(zeta_k)`, known for `j <= precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuiseuxSeries {
    denominator: i64,
    conductor: u64,
    terms: BTreeMap<i64, CyclotomicNumber>,
    precision: i64,
}

impl PuiseuxSeries {
    /// The zero series known up to `q^{precision/m}`.
    pub fn zero(denominator: i64, conductor: u64, precision: i64) -> Self {
        assert!(denominator > 0 && conductor > 0);
        Self {
            denominator,
            conductor,
            terms: BTreeMap::new(),
            precision,
        }
    }

    /// `1 + O(q^{(precision+1)/m})`.
    pub fn one(denominator: i64, conductor: u64, precision: i64) -> Self {
        let mut s = Self::zero(denominator, conductor, precision);
        if precision >= 0 {
            s.terms.insert(0, CyclotomicNumber::one(conductor));
        }
        s
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Largest exponent whose coefficient is known.
    pub fn precision(&self) -> Rational {
        rat(self.precision, self.denominator)
    }

    fn insert(&mut self, j: i64, c: CyclotomicNumber) {
        if j > self.precision {
            return;
        }
        let sum = match self.terms.remove(&j) {
            Some(prev) => prev.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(j, sum);
        }
    }

    /// Non-zero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &CyclotomicNumber)> {
        self.terms.iter().map(move |(j, c)| (rat(*j, self.denominator), c))
    }

    /// Coefficient of `q^e`, or `None` beyond the precision.
    pub fn coefficient(&self, e: &Rational) -> Option<CyclotomicNumber> {
        let scaled = e * rat_int(self.denominator);
        if !scaled.is_integer() || scaled > rat_int(self.precision) {
            return if scaled.is_integer() { None } else { Some(CyclotomicNumber::zero(self.conductor)) };
        }
        let j = rat_parts(&scaled).0;
        Some(self.terms.get(&j).cloned().unwrap_or_else(|| CyclotomicNumber::zero(self.conductor)))
    }

    pub fn leading(&self) -> Option<(Rational, &CyclotomicNumber)> {
        self.terms.iter().next().map(|(j, c)| (rat(*j, self.denominator), c))
    }

    fn valuation_numerator(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.precision + 1)
    }

    /// Same series over the finer exponent grid `1/m`, `self.m | m`.
    pub fn with_denominator(&self, m: i64) -> Self {
        assert_eq!(m % self.denominator, 0, "grid must refine");
        let f = m / self.denominator;
        Self {
            denominator: m,
            conductor: self.conductor,
            terms: self.terms.iter().map(|(j, c)| (j * f, c.clone())).collect(),
            precision: self.precision * f + (f - 1),
        }
    }

    /// Same series with coefficients embedded in `Q(zeta_k)`, `self.k | k`.
    pub fn with_conductor(&self, k: u64) -> Self {
        Self {
            denominator: self.denominator,
            conductor: k,
            terms: self.terms.iter().map(|(j, c)| (*j, c.embed(k))).collect(),
            precision: self.precision,
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let m = self.denominator.lcm(&other.denominator);
        let k = self.conductor.lcm(&other.conductor);
        (self.with_denominator(m).with_conductor(k), other.with_denominator(m).with_conductor(k))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let mut out = Self::zero(a.denominator, a.conductor, a.precision.min(b.precision));
        for (j, c) in a.terms.iter().chain(b.terms.iter()) {
            out.insert(*j, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(j, c)| (*j, c.neg())).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product, known up to `min(T_a + v_b, T_b + v_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let precision = (a.precision + b.valuation_numerator()).min(b.precision + a.valuation_numerator());
        let mut out = Self::zero(a.denominator, a.conductor, precision);
        for (i, x) in &a.terms {
            for (j, y) in &b.terms {
                if i + j > precision {
                    break;
                }
                out.insert(i + j, x.mul(y));
            }
        }
        out
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Self {
        let k = self.conductor.lcm(&c.conductor());
        let c = c.embed(k);
        let s = self.with_conductor(k);
        let mut out = Self::zero(s.denominator, k, s.precision);
        for (j, x) in &s.terms {
            out.insert(*j, x.mul(&c));
        }
        out
    }

    /// Multiplication by `q^e`.
    pub fn shift(&self, e: &Rational) -> Self {
        let m = self.denominator.lcm(&denom_i64(e));
        let s = self.with_denominator(m);
        let d = rat_parts(&(e * rat_int(m))).0;
        Self {
            terms: s.terms.iter().map(|(j, c)| (j + d, c.clone())).collect(),
            precision: s.precision + d,
            ..s
        }
    }

    /// Multiplicative inverse; the precision drops to `T - 2v`.
    pub fn inverse(&self) -> Result<Self> {
        let (&v, lead) = self
            .terms
            .iter()
            .next()
            .ok_or_else(|| Error::param("series has no known non-zero term"))?;
        let lead_inv = lead.inv();
        let rel = self.precision - v;
        // normalized series a = 1 + a_1 x + ..., x = q^{1/m}
        let a: Vec<CyclotomicNumber> = (0..=rel)
            .map(|i| match self.terms.get(&(v + i)) {
                Some(c) => c.mul(&lead_inv),
                None => CyclotomicNumber::zero(self.conductor),
            })
            .collect();
        let mut b: Vec<CyclotomicNumber> = Vec::with_capacity(a.len());
        b.push(CyclotomicNumber::one(self.conductor));
        for n in 1..a.len() {
            let mut s = CyclotomicNumber::zero(self.conductor);
            for i in 1..=n {
                if !a[i].is_zero() && !b[n - i].is_zero() {
                    s = s.add(&a[i].mul(&b[n - i]));
                }
            }
            b.push(s.neg());
        }
        let mut out = Self::zero(self.denominator, self.conductor, rel - v);
        for (i, c) in b.into_iter().enumerate() {
            if !c.is_zero() {
                out.insert(i as i64 - v, c.mul(&lead_inv));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = Self::one(self.denominator, self.conductor, i64::MAX / 4);
        let mut acc = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&acc);
            }
            k >>= 1;
            if k > 0 {
                acc = acc.mul(&acc);
            }
        }
        if e == 0 {
            out.precision = self.precision - self.valuation_numerator();
        }
        Ok(out)
    }

    /// Drops terms beyond `q^e`.
    pub fn truncate(&self, e: &Rational) -> Self {
        let cap = (e * rat_int(self.denominator)).floor();
        let cap = rat_parts(&cap).0.min(self.precision);
        Self {
            terms: self.terms.range(..=cap).map(|(j, c)| (*j, c.clone())).collect(),
            precision: cap,
            ..self.clone()
        }
    }

    /// Whether both series have the same precision and coefficients, over a common field.
    pub fn same_terms(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.precision == b.precision && a.terms == b.terms
    }

    /// Whether both series agree on every coefficient up to `q^e`.
    pub fn agrees_up_to(&self, other: &Self, e: &Rational) -> bool {
        let (a, b) = self.aligned(other);
        let cap = rat_parts(&(e * rat_int(a.denominator)).floor()).0;
        if cap > a.precision || cap > b.precision {
            return false;
        }
        a.terms.range(..=cap).eq(b.terms.range(..=cap))
    }
}

/// The factor `eta(alpha z + beta)^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaFactor {
    pub alpha: Rational,
    pub beta: Rational,
    pub exponent: i64,
}

impl EtaFactor {
    pub fn new(alpha: Rational, beta: Rational, exponent: i64) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::param(format!("alpha = {alpha} must be positive")));
        }
        Ok(Self { alpha, beta, exponent })
    }
}

fn denom_i64(r: &Rational) -> i64 {
    rat_parts(r).1
}

/// `k`-th generalized pentagonal numbers in increasing order, up to `limit`.
fn pentagonal_up_to(limit: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(0, 0)];
    let mut k: i64 = 1;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        if g1 > limit {
            break;
        }
        out.push((k, g1));
        let g2 = k * (3 * k + 1) / 2;
        if g2 <= limit {
            out.push((-k, g2));
        }
        k += 1;
    }
    out
}

/// `sum_k (-1)^k e(beta g_k) q^{alpha g_k}` on the grid `1/m`, known up to `precision/m`.
fn normalized_eta(alpha: &Rational, beta: &Rational, m: i64, conductor: u64, precision: i64) -> PuiseuxSeries {
    let step = rat_parts(&(alpha * rat_int(m))).0;
    let mut s = PuiseuxSeries::zero(m, conductor, precision);
    for (k, g) in pentagonal_up_to(precision / step) {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let phase = RationalMod1::from_rational(&(beta * rat_int(g)));
        let c = CyclotomicNumber::e(conductor, phase).scale(&rat_int(sign));
        s.insert(g * step, c);
    }
    s
}

/// `eta(alpha z + beta)` as a series in `q = e(z)`, known up to `q^truncation`.
pub fn eta_expansion(alpha: &Rational, beta: &Rational, truncation: &Rational) -> Result<PuiseuxSeries> {
    let f = EtaFactor::new(alpha.clone(), beta.clone(), 1)?;
    let lead = &f.alpha / rat_int(24);
    if *truncation < lead {
        return Err(Error::param("truncation below the leading exponent"));
    }
    let m = denom_i64(&lead);
    let constant = &f.beta / rat_int(24);
    let conductor = denom_i64(&constant) as u64;
    let rel = rat_parts(&((truncation - &lead) * rat_int(m)).floor()).0;
    let body = normalized_eta(&f.alpha, &f.beta, m, conductor, rel);
    let c = CyclotomicNumber::e(conductor, RationalMod1::from_rational(&constant));
    Ok(body.scale(&c).shift(&lead))
}

/// `e(constant) q^{leading_exponent} series`, with `series = 1 + ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotient {
    pub constant: RationalMod1,
    pub leading_exponent: Rational,
    pub series: PuiseuxSeries,
}

/// Expands a product of eta factors; `terms` coefficients of the normalized series on the
/// common exponent grid are computed exactly.
pub fn eta_quotient(factors: &[EtaFactor], terms: u64) -> Result<EtaQuotient> {
    let mut m: i64 = 1;
    let mut conductor: u64 = 1;
    for f in factors {
        if !f.alpha.is_positive() {
            return Err(Error::UnsupportedFactor(format!("alpha = {}", f.alpha)));
        }
        m = m.lcm(&denom_i64(&f.alpha));
        conductor = conductor.lcm(&(denom_i64(&f.beta) as u64));
    }
    let precision = terms as i64 - 1;
    let mut series = PuiseuxSeries::one(m, conductor, precision);
    let mut constant = Rational::zero();
    let mut leading = Rational::zero();
    for f in factors.iter().filter(|f| f.exponent != 0) {
        let body = normalized_eta(&f.alpha, &f.beta, m, conductor, precision);
        series = series.mul(&body.pow(f.exponent)?);
        constant += &f.beta * rat_int(f.exponent) / rat_int(24);
        leading += &f.alpha * rat_int(f.exponent) / rat_int(24);
    }
    Ok(EtaQuotient {
        constant: RationalMod1::from_rational(&constant),
        leading_exponent: leading,
        series: series.truncate(&rat(precision, m)),
    })
}

/// Which label the closed form for `Psi` is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PsiConvention {
    /// At the image of the label under `(0 -1; N/N' 0)`, so that the boundary divisor is `Z(type(label))`.
    #[default]
    Consistent,
    /// At the label itself.
    AsPrinted,
}

/// Image of `a/c` under `(0 -1; N/N' 0)`, an involution on cusp labels up to equivalence.
pub fn fricke_partner(form: &DiscriminantForm, label: &CuspLabel) -> CuspLabel {
    let k = form.n() / form.nprime();
    let (num, den) = (-label.c, k * label.a);
    let g = arith::gcd(num, den);
    CuspLabel::normalized(label.star, num / g, den / g).expect("primitive after division by the gcd")
}

/// Eta factors of `Psi` for the type of `label`, as `(factors in z1, factors in z2)`.
pub fn psi_factors(form: &DiscriminantForm, label: &CuspLabel, convention: PsiConvention) -> (Vec<EtaFactor>, Vec<EtaFactor>) {
    let label = match convention {
        PsiConvention::Consistent => fricke_partner(form, label),
        PsiConvention::AsPrinted => *label,
    };
    let (n, np) = (form.n(), form.nprime());
    let p = cusps::cusp_parameters(form, &label);
    let scaling = rat(n, np * p.m);
    let first = EtaFactor {
        alpha: &scaling * rat(p.d1 * p.d1, np),
        beta: rat(p.u * p.d2 * p.d1, np),
        exponent: 1,
    };
    let second = EtaFactor {
        alpha: scaling,
        beta: Rational::zero(),
        exponent: 1,
    };
    match label.star {
        Star::One => (vec![first], vec![second]),
        Star::Two => (vec![second], vec![first]),
    }
}

/// `Psi` for the type of `label` as series in `q1` and `q2`, up to `q^truncation`.
pub fn psi_expansion(
    form: &DiscriminantForm,
    label: &CuspLabel,
    truncation: &Rational,
    convention: PsiConvention,
) -> Result<(PuiseuxSeries, PuiseuxSeries)> {
    let (f1, f2) = psi_factors(form, label, convention);
    let expand = |f: &EtaFactor| eta_expansion(&f.alpha, &f.beta, truncation);
    Ok((expand(&f1[0])?, expand(&f2[0])?))
}

/// Vanishing order at `a/c` of the quotient, measured in `e(z)` after moving `a/c` to infinity.
///
/// `eta(alpha z + beta)` composed with `(a b; c d)` is `eta(x z' + y)/w` up to an
/// automorphy factor, where `x = gcd(alpha a + beta c, c)` and `x w = alpha`.
pub fn order_at_cusp(factors: &[EtaFactor], a: i64, c: i64) -> Result<Rational> {
    if arith::gcd(a, c) != 1 {
        return Err(Error::param(format!("{a}/{c} is not primitive")));
    }
    let mut total = Rational::zero();
    for f in factors {
        if !f.alpha.is_positive() {
            return Err(Error::UnsupportedFactor(format!("alpha = {}", f.alpha)));
        }
        let x = rational_gcd(&(&f.alpha * rat_int(a) + &f.beta * rat_int(c)), &rat_int(c));
        total += rat_int(f.exponent) * &x * &x / (rat_int(24) * &f.alpha);
    }
    Ok(total)
}

/// Result of comparing the two sides of the prime-power eta identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaIdentityReport {
    pub holds: bool,
    pub leading_exponents: (Rational, Rational),
    /// Ratio of leading coefficients, in the field of conductor `lcm(48, 24 p^r)`.
    pub constant: CyclotomicNumber,
    /// `e((p^r - p^{r-1})/48)`.
    pub expected_constant: CyclotomicNumber,
}

/// `prod_{u unit} eta((z+u)/p^r)` against `eta(z)^{phi+2} / (eta(z/p^r) eta(p^r z))`.
pub fn eta_identity_check(p: i64, r: u32, terms: u64) -> Result<EtaIdentityReport> {
    if !arith::is_prime(p) || r == 0 {
        return Err(Error::param("need a prime p and r >= 1"));
    }
    let pr = p.pow(r);
    if pr > 16 {
        return Err(Error::GuardExceeded {
            what: "eta identity",
            needed: pr as u64,
            limit: 16,
        });
    }
    let phi = arith::euler_phi(pr);
    let lhs: Vec<EtaFactor> = (1..=pr)
        .filter(|u| u % p != 0)
        .map(|u| EtaFactor::new(rat(1, pr), rat(u, pr), 1))
        .collect::<Result<_>>()?;
    let rhs = vec![
        EtaFactor::new(rat_int(1), Rational::zero(), phi + 2)?,
        EtaFactor::new(rat(1, pr), Rational::zero(), -1)?,
        EtaFactor::new(rat_int(pr), Rational::zero(), -1)?,
    ];
    let l = eta_quotient(&lhs, terms)?;
    let r_ = eta_quotient(&rhs, terms)?;
    let field = (48u64).lcm(&(24 * pr as u64));
    let holds = l.leading_exponent == r_.leading_exponent && l.series.same_terms(&r_.series);
    Ok(EtaIdentityReport {
        holds,
        leading_exponents: (l.leading_exponent, r_.leading_exponent),
        constant: CyclotomicNumber::e(field, l.constant - r_.constant),
        expected_constant: CyclotomicNumber::e(field, RationalMod1::new(phi, 48)),
    })
}

/// `prod eta((a z + b)/d)` over primitive `(a b; 0 d)` with `ad = p^r`, `b mod d`,
/// against `eta(z)^{p^r + p^{r-1}}`; returns whether the quotient is a constant to `terms` terms.
///
/// This is the identity obtained by lifting the relation among the types with
/// [`relation_quotient`]; at `r = 1` it is [`eta_identity_check`] times `eta(z/p) eta(pz)`.
pub fn lifted_eta_identity_check(p: i64, r: u32, terms: u64) -> Result<bool> {
    if !arith::is_prime(p) || r == 0 {
        return Err(Error::param("need a prime p and r >= 1"));
    }
    let pr = p.pow(r);
    if pr > 16 {
        return Err(Error::GuardExceeded {
            what: "eta identity",
            needed: pr as u64,
            limit: 16,
        });
    }
    let mut factors = Vec::new();
    for k in 0..=r {
        let (a, d) = (p.pow(k), p.pow(r - k));
        for b in (0..d).filter(|&b| arith::gcd(arith::gcd(a, b), d) == 1) {
            factors.push(EtaFactor::new(rat(a, d), rat(b, d), 1)?);
        }
    }
    factors.push(EtaFactor::new(rat_int(1), Rational::zero(), -(pr + pr / p))?);
    let q = eta_quotient(&factors, terms)?;
    let one = PuiseuxSeries::one(q.series.denominator(), q.series.conductor(), terms as i64 - 1);
    Ok(q.leading_exponent.is_zero() && q.series.same_terms(&one))
}

/// The eta quotient `prod_H Psi_H^{k_H}` over a rational relation `k` among the types,
/// as `(factors in z1, factors in z2)` with integer exponents.
pub fn relation_quotient(
    form: &DiscriminantForm,
    types: &[(FqmSubgroup, CuspLabel)],
    relation: &[Rational],
    convention: PsiConvention,
) -> Result<(Vec<EtaFactor>, Vec<EtaFactor>)> {
    let scale = relation.iter().fold(Rational::one(), |acc, k| rat_int(arith::lcm(denom_i64(&acc), denom_i64(k))));
    let mut out = (Vec::new(), Vec::new());
    for ((_, label), k) in types.iter().zip(relation) {
        let e = rat_parts(&(k * &scale)).0;
        if e == 0 {
            continue;
        }
        let (f1, f2) = psi_factors(form, label, convention);
        out.0.extend(f1.into_iter().map(|f| EtaFactor { exponent: f.exponent * e, ..f }));
        out.1.extend(f2.into_iter().map(|f| EtaFactor { exponent: f.exponent * e, ..f }));
    }
    Ok(out)
}

/// Whether the unique relation among the types lifts to a constant eta quotient in both variables.
pub fn relation_lift_check(p: i64, r: u32, rprime: u32, terms: u64, convention: PsiConvention) -> Result<bool> {
    if !arith::is_prime(p) || rprime < 1 || rprime > r {
        return Err(Error::param("need a prime p and 1 <= r' <= r"));
    }
    if p.pow(r) > 9 {
        return Err(Error::GuardExceeded {
            what: "relation lift",
            needed: p.pow(r) as u64,
            limit: 9,
        });
    }
    let form = DiscriminantForm::new(p.pow(r), p.pow(rprime))?;
    let span = crate::invariants::types_span(&form)?;
    if span.relations.len() != 1 {
        return Ok(false);
    }
    let (q1, q2) = relation_quotient(&form, &span.types, &span.relations[0], convention)?;
    for side in [q1, q2] {
        let e = eta_quotient(&side, terms)?;
        let one = PuiseuxSeries::one(e.series.denominator(), e.series.conductor(), rat_parts(&(e.series.precision() * rat_int(e.series.denominator()))).0);
        if !e.leading_exponent.is_zero() || !e.series.same_terms(&one) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Order of `Psi_H` and `#(H ∩ type(S))` on one cusp class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryComparison {
    pub class: CuspLabel,
    /// Order in the local equation `e(z/h)` of the boundary curve, `h` from [`cusps::boundary_width`].
    pub order: Rational,
    pub intersection: u64,
    pub ratio: Rational,
}

/// Orders of `Psi_H` against the multiplicities of `Z(H)` on every cusp class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossValidation {
    pub rows: Vec<BoundaryComparison>,
    /// The common ratio, when all rows agree.
    pub constant: Option<Rational>,
}

pub fn cross_validate_boundary(
    form: &DiscriminantForm,
    h: &FqmSubgroup,
    guard: &Guard,
    convention: PsiConvention,
) -> Result<CrossValidation> {
    let witness = cusps::enumerate_types(form)
        .into_iter()
        .find(|(t, _)| t == h)
        .map(|(_, w)| w)
        .ok_or_else(|| Error::param(format!("{h} is not a type")))?;
    let factors = psi_factors(form, &witness, convention);
    compare_with_boundary(form, h, &factors, guard)
}

/// Orders of the quotient `(factors in z1, factors in z2)` against the multiplicities of `Z(H)`.
pub fn compare_with_boundary(
    form: &DiscriminantForm,
    h: &FqmSubgroup,
    factors: &(Vec<EtaFactor>, Vec<EtaFactor>),
    guard: &Guard,
) -> Result<CrossValidation> {
    let mut rows = Vec::new();
    for class in cusps::cusp_classes(form, guard)? {
        let rep = class.representative;
        let side = match class.star {
            Star::One => &factors.0,
            Star::Two => &factors.1,
        };
        let width = cusps::boundary_width(form, &rep);
        let order = rat_int(width) * order_at_cusp(side, rep.a, rep.c)?;
        let intersection = h.intersection_count(&class.cusp_type)?;
        let ratio = &order / rat_int(intersection as i64);
        rows.push(BoundaryComparison {
            class: rep,
            order,
            intersection,
            ratio,
        });
    }
    let constant = match rows.first() {
        Some(first) if rows.iter().all(|r| r.ratio == first.ratio) => Some(first.ratio.clone()),
        _ => None,
    };
    Ok(CrossValidation { rows, constant })
}

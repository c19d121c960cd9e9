//! The discriminant form `(Z/N)^2 + (Z/N')^2` of `U(N) + U(N')` and its subgroups.
//!
//! Elements are stored as canonical residues `(w, x, y, z)`; the quadratic form is
//! `q(w, x, y, z) = wx/N + yz/N'` taken modulo one. Subgroups are kept in a
//! canonical Hermite normal form of the lattice they generate together with the
//! relation lattice `N Z + N Z + N' Z + N' Z`, so equal subgroups compare equal
//! no matter which generators produced them.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, gcd, inv_mod, modp, Rational};
use crate::error::{Error, Result};
use crate::guard::Guard;

/// A value of `Q/Z`, normalized to `numerator / denominator` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalMod1 {
    numerator: i64,
    denominator: i64,
}

impl RationalMod1 {
    pub fn new(numerator: i64, denominator: i64) -> Self {
        assert!(denominator != 0, "zero denominator");
        let (mut n, mut d) = (numerator, denominator);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let n = modp(n, d);
        if n == 0 {
            return Self::zero();
        }
        let g = gcd(n, d);
        Self {
            numerator: n / g,
            denominator: d / g,
        }
    }

    pub fn zero() -> Self {
        Self {
            numerator: 0,
            denominator: 1,
        }
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    pub fn to_rational(&self) -> Rational {
        arith::rat(self.numerator, self.denominator)
    }

    pub fn from_rational(r: &Rational) -> Self {
        let (n, d) = arith::rat_parts(r);
        Self::new(n, d)
    }
}

impl std::ops::Add for RationalMod1 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let d = arith::lcm(self.denominator, rhs.denominator);
        Self::new(
            self.numerator * (d / self.denominator) + rhs.numerator * (d / rhs.denominator),
            d,
        )
    }
}

impl std::ops::Neg for RationalMod1 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.numerator, self.denominator)
    }
}

impl std::ops::Sub for RationalMod1 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl fmt::Display for RationalMod1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// The discriminant form of `L_{N,N'} = U(N) + U(N')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiscriminantForm {
    n: i64,
    nprime: i64,
}

impl DiscriminantForm {
    pub fn new(n: i64, nprime: i64) -> Result<Self> {
        if n < 1 || nprime < 1 {
            return Err(Error::param(format!("N={n}, N'={nprime} must be positive")));
        }
        if n % nprime != 0 {
            return Err(Error::param(format!("N'={nprime} does not divide N={n}")));
        }
        Ok(Self { n, nprime })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn nprime(&self) -> i64 {
        self.nprime
    }

    /// Component moduli `(N, N, N', N')`.
    pub fn moduli(&self) -> [i64; 4] {
        [self.n, self.n, self.nprime, self.nprime]
    }

    pub fn order(&self) -> u64 {
        (self.n * self.n * self.nprime * self.nprime) as u64
    }

    pub fn zero(&self) -> FqmElement {
        FqmElement([0; 4])
    }

    /// Reduces arbitrary integers into an element.
    pub fn element(&self, w: i64, x: i64, y: i64, z: i64) -> FqmElement {
        self.reduce([w, x, y, z])
    }

    pub fn reduce(&self, v: [i64; 4]) -> FqmElement {
        let m = self.moduli();
        FqmElement([modp(v[0], m[0]), modp(v[1], m[1]), modp(v[2], m[2]), modp(v[3], m[3])])
    }

    pub fn contains(&self, e: &FqmElement) -> bool {
        e.0.iter().zip(self.moduli()).all(|(&c, m)| (0..m).contains(&c))
    }

    pub fn add(&self, a: &FqmElement, b: &FqmElement) -> FqmElement {
        self.reduce([a.0[0] + b.0[0], a.0[1] + b.0[1], a.0[2] + b.0[2], a.0[3] + b.0[3]])
    }

    pub fn neg(&self, a: &FqmElement) -> FqmElement {
        self.reduce([-a.0[0], -a.0[1], -a.0[2], -a.0[3]])
    }

    pub fn scale(&self, k: i64, a: &FqmElement) -> FqmElement {
        self.reduce([k * a.0[0], k * a.0[1], k * a.0[2], k * a.0[3]])
    }

    /// Position of `e` in the lexicographic order on `(w, x, y, z)`.
    pub fn index(&self, e: &FqmElement) -> usize {
        let [w, x, y, z] = e.0;
        (((w * self.n + x) * self.nprime + y) * self.nprime + z) as usize
    }

    pub fn element_at(&self, mut idx: usize) -> FqmElement {
        let np = self.nprime as usize;
        let n = self.n as usize;
        let z = idx % np;
        idx /= np;
        let y = idx % np;
        idx /= np;
        let x = idx % n;
        let w = idx / n;
        FqmElement([w as i64, x as i64, y as i64, z as i64])
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = FqmElement> + '_ {
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }

    /// Maps a matrix `(a' b'; c' d')` of the dual lattice to its class in `L'/L`.
    ///
    /// The image is `(N b', N' c', N' a', -N' d')`; this is the isometry for
    /// `q(X) = -N' det X` on the model `{X : N/N' | c}`.
    pub fn element_from_matrix(&self, entries: [&Rational; 4]) -> Result<FqmElement> {
        let [a, b, c, d] = entries;
        let scaled = [
            b * arith::rat_int(self.n),
            c * arith::rat_int(self.nprime),
            a * arith::rat_int(self.nprime),
            -(d * arith::rat_int(self.nprime)),
        ];
        let mut out = [0i64; 4];
        for (slot, (value, name)) in out.iter_mut().zip(scaled.iter().zip(["N b'", "N' c'", "N' a'", "N' d'"])) {
            if !arith::is_integer(value) {
                return Err(Error::NotDualLattice(format!("{name} = {value} is not an integer")));
            }
            *slot = i64::try_from(value.numer()).map_err(|_| Error::param("entry too large"))?;
        }
        Ok(self.reduce(out))
    }

    pub fn q_value(&self, e: &FqmElement) -> RationalMod1 {
        let [w, x, y, z] = e.0;
        // wx/N + yz/N' over the common denominator N
        RationalMod1::new(w * x + (self.n / self.nprime) * y * z, self.n)
    }

    pub fn bilinear(&self, a: &FqmElement, b: &FqmElement) -> RationalMod1 {
        let [w1, x1, y1, z1] = a.0;
        let [w2, x2, y2, z2] = b.0;
        RationalMod1::new(w1 * x2 + w2 * x1 + (self.n / self.nprime) * (y1 * z2 + y2 * z1), self.n)
    }

    /// Numerator of the bilinear form over the fixed denominator `N`, reduced mod `N`.
    pub(crate) fn bilinear_numerator(&self, a: &FqmElement, b: &FqmElement) -> i64 {
        let [w1, x1, y1, z1] = a.0;
        let [w2, x2, y2, z2] = b.0;
        modp(w1 * x2 + w2 * x1 + (self.n / self.nprime) * (y1 * z2 + y2 * z1), self.n)
    }

    /// Numerator of `q` over the fixed denominator `N`, reduced mod `N`.
    pub(crate) fn q_numerator(&self, e: &FqmElement) -> i64 {
        let [w, x, y, z] = e.0;
        modp(w * x + (self.n / self.nprime) * y * z, self.n)
    }

    /// Elements with `q = 0`, in lexicographic order.
    pub fn isotropic_elements(&self) -> Vec<FqmElement> {
        self.elements().filter(|e| self.q_numerator(e) == 0).collect()
    }

    /// The radical of the bilinear form, by exhaustion.
    pub fn radical(&self) -> FqmSubgroup {
        let gens: Vec<FqmElement> = self.generators_of_group();
        let rad: Vec<FqmElement> = self
            .elements()
            .filter(|e| gens.iter().all(|g| self.bilinear_numerator(e, g) == 0))
            .collect();
        FqmSubgroup::from_generators(*self, &rad)
    }

    fn generators_of_group(&self) -> Vec<FqmElement> {
        vec![
            self.element(1, 0, 0, 0),
            self.element(0, 1, 0, 0),
            self.element(0, 0, 1, 0),
            self.element(0, 0, 0, 1),
        ]
    }

    pub fn trivial_subgroup(&self) -> FqmSubgroup {
        FqmSubgroup::from_generators(*self, &[])
    }

    pub fn whole_group(&self) -> FqmSubgroup {
        FqmSubgroup::from_generators(*self, &self.generators_of_group())
    }

    /// Idempotent integer `e` with `e = 1 mod p^a` and `e = 0 mod N/p^a`, `p^a || N`.
    pub(crate) fn primary_idempotent(&self, p: i64) -> Result<i64> {
        if p < 2 || !arith::is_prime(p) || self.n % p != 0 {
            return Err(Error::param(format!("{p} is not a prime divisor of N={}", self.n)));
        }
        let pa = p.pow(arith::valuation(self.n, p));
        let m = self.n / pa;
        let inv = inv_mod(m, pa).expect("coprime cofactor");
        Ok(modp(m * inv, self.n))
    }

    /// The `p`-component `D_p` as a subgroup.
    pub fn p_component(&self, p: i64) -> Result<FqmSubgroup> {
        self.whole_group().p_primary_part(p)
    }

    /// Prime divisors of `N` (these are all primes dividing the group order).
    pub fn primes(&self) -> Vec<i64> {
        arith::factorize(self.n).into_iter().map(|(p, _)| p).collect()
    }

    /// All self-dual isotropic subgroups, deterministically ordered.
    pub fn enumerate_self_dual_isotropic(&self, guard: &Guard) -> Result<Vec<FqmSubgroup>> {
        guard.check("self-dual isotropic enumeration", self.order())?;
        let target = (self.n * self.nprime) as u64;
        let iso: Vec<FqmElement> = self.isotropic_elements().into_iter().filter(|e| !e.is_zero()).collect();
        let start = self.trivial_subgroup();
        let mut seen: HashSet<FqmSubgroup> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        let mut found = BTreeSet::new();
        while let Some(s) = queue.pop_front() {
            if s.order() == target {
                found.insert(s);
                continue;
            }
            let gens = s.generators();
            for g in &iso {
                if s.contains(g) || gens.iter().any(|h| self.bilinear_numerator(g, h) != 0) {
                    continue;
                }
                let mut next = gens.clone();
                next.push(*g);
                let t = FqmSubgroup::from_generators(*self, &next);
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        Ok(found.into_iter().collect())
    }
}

impl fmt::Display for DiscriminantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L_{{{},{}}}", self.n, self.nprime)
    }
}

/// An element `(w, x, y, z)` of the discriminant form, with canonical residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FqmElement(pub(crate) [i64; 4]);

impl FqmElement {
    pub fn components(&self) -> [i64; 4] {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }
}

impl fmt::Display for FqmElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [w, x, y, z] = self.0;
        write!(f, "({w},{x},{y},{z})")
    }
}

/// A subgroup of a discriminant form in Hermite normal form.
///
/// `hnf` is the upper triangular basis (rows) of the preimage lattice in `Z^4`,
/// with positive diagonal entries dividing the moduli and off-diagonal entries
/// reduced modulo the diagonal entry below them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqmSubgroup {
    form: DiscriminantForm,
    hnf: [[i64; 4]; 4],
}

impl FqmSubgroup {
    pub fn from_generators(form: DiscriminantForm, gens: &[FqmElement]) -> Self {
        let m = form.moduli();
        let mut rows: Vec<[i128; 4]> = gens
            .iter()
            .map(|g| {
                let r = form.reduce(g.0).0;
                [r[0] as i128, r[1] as i128, r[2] as i128, r[3] as i128]
            })
            .filter(|r| r.iter().any(|&c| c != 0))
            .collect();
        for (i, &mi) in m.iter().enumerate() {
            let mut r = [0i128; 4];
            r[i] = mi as i128;
            rows.push(r);
        }
        let hnf = hermite_normal_form(rows);
        Self { form, hnf }
    }

    pub fn form(&self) -> DiscriminantForm {
        self.form
    }

    /// The canonical basis rows (over `Z^4`) of the preimage lattice.
    pub fn echelon(&self) -> [[i64; 4]; 4] {
        self.hnf
    }

    pub fn order(&self) -> u64 {
        let m = self.form.moduli();
        (0..4).map(|i| (m[i] / self.hnf[i][i]) as u64).product()
    }

    /// Canonical generators: the echelon rows reduced into the group, zero rows dropped.
    pub fn generators(&self) -> Vec<FqmElement> {
        let mut out: Vec<FqmElement> = Vec::new();
        for row in &self.hnf {
            let e = self.form.reduce(*row);
            if !e.is_zero() && !out.contains(&e) {
                out.push(e);
            }
        }
        out
    }

    pub fn contains(&self, e: &FqmElement) -> bool {
        let mut v = e.0;
        for i in 0..4 {
            let d = self.hnf[i][i];
            if v[i] % d != 0 {
                return false;
            }
            let k = v[i] / d;
            for j in i..4 {
                v[j] -= k * self.hnf[i][j];
            }
        }
        let m = self.form.moduli();
        v.iter().zip(m).all(|(&c, mi)| c % mi == 0)
    }

    /// Least element of the coset `e + H`: component `i` reduced below the `i`-th pivot.
    pub fn coset_representative(&self, e: &FqmElement) -> FqmElement {
        let mut v = e.0;
        for i in 0..4 {
            let k = v[i].div_euclid(self.hnf[i][i]);
            for j in i..4 {
                v[j] -= k * self.hnf[i][j];
            }
        }
        self.form.reduce(v)
    }

    /// All elements, sorted lexicographically.
    pub fn elements(&self) -> Vec<FqmElement> {
        let m = self.form.moduli();
        let counts: Vec<i64> = (0..4).map(|i| m[i] / self.hnf[i][i]).collect();
        let mut out = Vec::with_capacity(self.order() as usize);
        for k0 in 0..counts[0] {
            for k1 in 0..counts[1] {
                for k2 in 0..counts[2] {
                    for k3 in 0..counts[3] {
                        let ks = [k0, k1, k2, k3];
                        let mut v = [0i64; 4];
                        for (i, &k) in ks.iter().enumerate() {
                            for j in 0..4 {
                                v[j] += k * self.hnf[i][j];
                            }
                        }
                        out.push(self.form.reduce(v));
                    }
                }
            }
        }
        out.sort();
        out
    }

    fn same_form(&self, other: &Self) -> Result<()> {
        if self.form == other.form {
            Ok(())
        } else {
            Err(Error::MismatchedForms)
        }
    }

    /// `#(self ∩ other)`.
    pub fn intersection_count(&self, other: &Self) -> Result<u64> {
        self.same_form(other)?;
        let (small, large) = if self.order() <= other.order() { (self, other) } else { (other, self) };
        Ok(small.elements().iter().filter(|e| large.contains(e)).count() as u64)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.same_form(other)?;
        let common: Vec<FqmElement> = self.elements().into_iter().filter(|e| other.contains(e)).collect();
        Ok(Self::from_generators(self.form, &common))
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.same_form(other)?;
        let mut gens = self.generators();
        gens.extend(other.generators());
        Ok(Self::from_generators(self.form, &gens))
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.form == other.form && self.generators().iter().all(|g| other.contains(g))
    }

    /// `{γ : B(γ, δ) = 0 for all δ in self}`, by exhaustion over the form.
    pub fn orthogonal_complement(&self) -> Self {
        let gens = self.generators();
        let perp: Vec<FqmElement> = self
            .form
            .elements()
            .filter(|e| gens.iter().all(|g| self.form.bilinear_numerator(e, g) == 0))
            .collect();
        Self::from_generators(self.form, &perp)
    }

    /// `q` vanishes on the subgroup.
    pub fn is_isotropic(&self) -> bool {
        let gens = self.generators();
        gens.iter().all(|g| self.form.q_numerator(g) == 0)
            && gens
                .iter()
                .enumerate()
                .all(|(i, g)| gens[i + 1..].iter().all(|h| self.form.bilinear_numerator(g, h) == 0))
    }

    /// Isotropic with `H = H^⊥`. Uses `|H| |H^⊥| = |D|` for the non-degenerate form.
    pub fn is_self_dual_isotropic(&self) -> bool {
        self.is_isotropic() && self.order() * self.order() == self.form.order()
    }

    /// Image of the subgroup under the projection onto the `p`-component.
    pub fn p_primary_part(&self, p: i64) -> Result<Self> {
        let e = self.form.primary_idempotent(p)?;
        let gens: Vec<FqmElement> = self.generators().iter().map(|g| self.form.scale(e, g)).collect();
        Ok(Self::from_generators(self.form, &gens))
    }
}

impl fmt::Display for FqmSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators().iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

/// Row-style Hermite normal form of a full-rank integer lattice in `Z^4`.
fn hermite_normal_form(mut rows: Vec<[i128; 4]>) -> [[i64; 4]; 4] {
    let mut pivot_row = 0;
    for col in 0..4 {
        loop {
            let best = (pivot_row..rows.len())
                .filter(|&r| rows[r][col] != 0)
                .min_by_key(|&r| rows[r][col].abs());
            let Some(best) = best else {
                panic!("relation lattice guarantees a pivot in every column");
            };
            rows.swap(pivot_row, best);
            let piv = rows[pivot_row];
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if rows[r][col] != 0 {
                    let q = rows[r][col].div_euclid(piv[col]);
                    for j in col..4 {
                        rows[r][j] -= q * piv[j];
                    }
                    if rows[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col] < 0 {
            for j in col..4 {
                rows[pivot_row][j] = -rows[pivot_row][j];
            }
        }
        rows.retain(|r| r.iter().any(|&c| c != 0));
        pivot_row += 1;
    }
    let mut h = [[0i128; 4]; 4];
    h.copy_from_slice(&rows[..4]);
    // reduce entries above each pivot
    for col in 0..4 {
        let piv = h[col];
        for r in 0..col {
            let q = h[r][col].div_euclid(piv[col]);
            for j in col..4 {
                h[r][j] -= q * piv[j];
            }
        }
    }
    let mut out = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = i64::try_from(h[i][j]).expect("hnf entry fits");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn f(n: i64, np: i64) -> DiscriminantForm {
        DiscriminantForm::new(n, np).unwrap()
    }

    #[test]
    fn form_validation() {
        assert!(DiscriminantForm::new(4, 3).is_err());
        assert!(DiscriminantForm::new(0, 1).is_err());
        assert_eq!(f(6, 2).order(), 144);
    }

    #[test]
    fn element_from_matrix_examples() {
        let zero = rat(0, 1);
        let half = rat(1, 2);
        assert_eq!(f(3, 1).element_from_matrix([&zero, &zero, &zero, &zero]).unwrap(), f(3, 1).zero());
        assert_eq!(
            f(2, 1).element_from_matrix([&zero, &half, &zero, &zero]).unwrap(),
            f(2, 1).element(1, 0, 0, 0)
        );
        assert_eq!(
            f(4, 2).element_from_matrix([&half, &zero, &zero, &zero]).unwrap(),
            f(4, 2).element(0, 0, 1, 0)
        );
        let third = rat(1, 3);
        assert!(matches!(
            f(2, 1).element_from_matrix([&third, &zero, &zero, &zero]),
            Err(Error::NotDualLattice(_))
        ));
    }

    #[test]
    fn element_from_matrix_preserves_q() {
        // q(X) = -N' det X on the dual lattice must agree with q on the image
        let form = f(6, 2);
        for a in 0..2 {
            for b in 0..6 {
                for c in 0..6 {
                    for d in 0..2 {
                        let (a, b, c, d) = (rat(a, 2), rat(b, 6), rat(c, 2), rat(d, 2));
                        let e = form.element_from_matrix([&a, &b, &c, &d]).unwrap();
                        let det = &a * &d - &b * &c;
                        let q = RationalMod1::from_rational(&(-(det * rat(2, 1))));
                        assert_eq!(form.q_value(&e), q);
                    }
                }
            }
        }
    }

    #[test]
    fn q_and_bilinear_examples() {
        assert!(f(4, 1).q_value(&f(4, 1).element(1, 0, 0, 0)).is_zero());
        assert_eq!(f(4, 1).q_value(&f(4, 1).element(1, 1, 0, 0)), RationalMod1::new(1, 4));
        assert_eq!(f(4, 2).q_value(&f(4, 2).element(0, 0, 1, 1)), RationalMod1::new(1, 2));
        let g = f(4, 1);
        assert_eq!(g.bilinear(&g.element(1, 0, 0, 0), &g.element(0, 1, 0, 0)), RationalMod1::new(1, 4));
        let h = f(2, 2);
        for a in h.elements() {
            assert!(h.bilinear(&a, &h.zero()).is_zero());
            for b in h.elements() {
                assert_eq!(h.bilinear(&a, &b), h.bilinear(&b, &a));
                let pol = h.q_value(&h.add(&a, &b)) - h.q_value(&a) - h.q_value(&b);
                assert_eq!(h.bilinear(&a, &b), pol);
            }
        }
    }

    #[test]
    fn nondegenerate_small_forms() {
        for (n, np) in [(1, 1), (2, 1), (2, 2), (4, 2), (6, 3), (12, 1)] {
            assert_eq!(f(n, np).radical().order(), 1, "N={n} N'={np}");
        }
    }

    #[test]
    fn subgroup_examples() {
        let g = f(2, 1);
        assert_eq!(g.trivial_subgroup().order(), 1);
        let a = FqmSubgroup::from_generators(g, &[g.element(1, 0, 0, 0), g.element(1, 0, 0, 0)]);
        let b = FqmSubgroup::from_generators(g, &[g.element(1, 0, 0, 0)]);
        assert_eq!(a, b);
        assert_eq!(a.order(), 2);
        let w = FqmSubgroup::from_generators(g, &[g.element(1, 0, 0, 0), g.element(0, 1, 0, 0)]);
        assert_eq!(w.order(), 4);
        assert_eq!(w, g.whole_group());
        let c = FqmSubgroup::from_generators(g, &[g.element(0, 1, 0, 0)]);
        assert_eq!(b.intersection_count(&c).unwrap(), 1);
        assert_eq!(b.intersection_count(&b).unwrap(), 2);
        assert_eq!(b.intersection_count(&g.trivial_subgroup()).unwrap(), 1);
        let other = f(3, 1).trivial_subgroup();
        assert_eq!(b.intersection_count(&other), Err(Error::MismatchedForms));
    }

    #[test]
    fn complement_examples() {
        let g = f(2, 1);
        assert_eq!(g.trivial_subgroup().orthogonal_complement(), g.whole_group());
        assert_eq!(f(2, 2).whole_group().orthogonal_complement(), f(2, 2).trivial_subgroup());
        let b = FqmSubgroup::from_generators(g, &[g.element(1, 0, 0, 0)]);
        assert_eq!(b.orthogonal_complement(), b);
    }

    #[test]
    fn self_dual_examples() {
        assert!(f(1, 1).trivial_subgroup().is_self_dual_isotropic());
        let g = f(2, 1);
        assert!(FqmSubgroup::from_generators(g, &[g.element(1, 0, 0, 0)]).is_self_dual_isotropic());
        assert!(!FqmSubgroup::from_generators(g, &[g.element(1, 1, 0, 0)]).is_self_dual_isotropic());
    }

    #[test]
    fn enumerate_self_dual_examples() {
        let guard = Guard::default();
        assert_eq!(f(1, 1).enumerate_self_dual_isotropic(&guard).unwrap().len(), 1);
        let two = f(2, 1).enumerate_self_dual_isotropic(&guard).unwrap();
        let g = f(2, 1);
        assert_eq!(
            two,
            vec![
                FqmSubgroup::from_generators(g, &[g.element(0, 1, 0, 0)]),
                FqmSubgroup::from_generators(g, &[g.element(1, 0, 0, 0)]),
            ]
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect::<Vec<_>>()
        );
        assert_eq!(f(2, 2).enumerate_self_dual_isotropic(&guard).unwrap().len(), 6);
        let small = Guard::new(10);
        assert!(matches!(
            f(2, 2).enumerate_self_dual_isotropic(&small),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn p_primary_examples() {
        let g = f(6, 1);
        assert_eq!(g.trivial_subgroup().p_primary_part(2).unwrap(), g.trivial_subgroup());
        assert!(g.trivial_subgroup().p_primary_part(5).is_err());
        for h in g.enumerate_self_dual_isotropic(&Guard::default()).unwrap() {
            let h2 = h.p_primary_part(2).unwrap();
            let h3 = h.p_primary_part(3).unwrap();
            assert_eq!(h2.order(), 2);
            assert_eq!(h3.order(), 3);
            assert_eq!(h2.join(&h3).unwrap(), h);
        }
    }
}

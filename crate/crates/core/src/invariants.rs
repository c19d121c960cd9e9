//! The group algebra of the discriminant form, the Weil representation and its invariants.
//!
//! `rho(T) e_g = e(q(g)) e_g` and `rho(S) e_g = (N N')^{-1} sum_d e(-B(g, d)) e_d`.
//! The signature factor is trivial for signature `(2, 2)`; [`gauss_sum`] confirms this.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::{self, rat_int, Rational};
use crate::cusps::{self, CuspLabel, Star};
use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::fqm::{DiscriminantForm, FqmElement, FqmSubgroup};
use crate::guard::Guard;
use crate::linalg::{ExactMatrix, RowEchelon};

/// A rational vector in `Q[D]`, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebraVector {
    form: DiscriminantForm,
    coefficients: BTreeMap<FqmElement, Rational>,
}

impl GroupAlgebraVector {
    pub fn zero(form: DiscriminantForm) -> Self {
        Self {
            form,
            coefficients: BTreeMap::new(),
        }
    }

    /// The basis vector `e_g`.
    pub fn basis(form: DiscriminantForm, g: FqmElement) -> Self {
        let mut v = Self::zero(form);
        v.set(g, Rational::one());
        v
    }

    pub fn from_coefficients(form: DiscriminantForm, entries: impl IntoIterator<Item = (FqmElement, Rational)>) -> Result<Self> {
        let mut v = Self::zero(form);
        for (g, c) in entries {
            if !form.contains(&g) {
                return Err(Error::param(format!("{g} is not an element of {form}")));
            }
            let sum = v.coefficient(&g) + c;
            v.set(g, sum);
        }
        Ok(v)
    }

    pub fn form(&self) -> DiscriminantForm {
        self.form
    }

    pub fn coefficient(&self, g: &FqmElement) -> Rational {
        self.coefficients.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, g: FqmElement, c: Rational) {
        if c.is_zero() {
            self.coefficients.remove(&g);
        } else {
            self.coefficients.insert(g, c);
        }
    }

    /// Non-zero entries in element order.
    pub fn entries(&self) -> impl Iterator<Item = (&FqmElement, &Rational)> {
        self.coefficients.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    fn check_form(&self, other: &Self) -> Result<()> {
        if self.form == other.form {
            Ok(())
        } else {
            Err(Error::MismatchedForms)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_form(other)?;
        let mut out = self.clone();
        for (g, c) in &other.coefficients {
            let s = out.coefficient(g) + c;
            out.set(*g, s);
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.form);
        if !r.is_zero() {
            for (g, c) in &self.coefficients {
                out.coefficients.insert(*g, c * r);
            }
        }
        out
    }

    /// Standard inner product making the `e_g` orthonormal.
    pub fn inner_product(&self, other: &Self) -> Result<Rational> {
        self.check_form(other)?;
        Ok(self
            .coefficients
            .iter()
            .filter_map(|(g, c)| other.coefficients.get(g).map(|d| c * d))
            .fold(Rational::zero(), |a, b| a + b))
    }
}

/// A vector in `Q[H^perp / H]`, indexed by canonical coset representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetVector {
    subgroup: FqmSubgroup,
    coefficients: BTreeMap<FqmElement, Rational>,
}

impl CosetVector {
    pub fn zero(subgroup: FqmSubgroup) -> Self {
        Self {
            subgroup,
            coefficients: BTreeMap::new(),
        }
    }

    /// `e_{g + H}` for `g` in `H^perp`.
    pub fn basis(subgroup: FqmSubgroup, g: &FqmElement) -> Result<Self> {
        let mut w = Self::zero(subgroup);
        w.add_to(g, Rational::one())?;
        Ok(w)
    }

    /// Sums `c e_{g + H}`; every `g` must lie in `H^perp`.
    pub fn from_coefficients(subgroup: FqmSubgroup, entries: impl IntoIterator<Item = (FqmElement, Rational)>) -> Result<Self> {
        let mut w = Self::zero(subgroup);
        for (g, c) in entries {
            w.add_to(&g, c)?;
        }
        Ok(w)
    }

    pub fn subgroup(&self) -> &FqmSubgroup {
        &self.subgroup
    }

    fn add_to(&mut self, g: &FqmElement, c: Rational) -> Result<()> {
        let form = self.subgroup.form();
        if self.subgroup.generators().iter().any(|h| form.bilinear_numerator(g, h) != 0) {
            return Err(Error::param(format!("{g} is not orthogonal to {}", self.subgroup)));
        }
        let key = self.subgroup.coset_representative(g);
        let s = self.coefficients.get(&key).cloned().unwrap_or_else(Rational::zero) + c;
        if s.is_zero() {
            self.coefficients.remove(&key);
        } else {
            self.coefficients.insert(key, s);
        }
        Ok(())
    }

    pub fn coefficient(&self, g: &FqmElement) -> Rational {
        let key = self.subgroup.coset_representative(g);
        self.coefficients.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the zero coset.
    pub fn zero_component(&self) -> Rational {
        self.coefficient(&self.subgroup.form().zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&FqmElement, &Rational)> {
        self.coefficients.iter()
    }

    pub fn inner_product(&self, other: &Self) -> Result<Rational> {
        if self.subgroup != other.subgroup {
            return Err(Error::MismatchedForms);
        }
        Ok(self
            .coefficients
            .iter()
            .filter_map(|(g, c)| other.coefficients.get(g).map(|d| c * d))
            .fold(Rational::zero(), |a, b| a + b))
    }
}

/// The characteristic function of a subgroup.
pub fn char_vector(h: &FqmSubgroup) -> GroupAlgebraVector {
    let mut v = GroupAlgebraVector::zero(h.form());
    for g in h.elements() {
        v.coefficients.insert(g, Rational::one());
    }
    v
}

fn require_isotropic(h: &FqmSubgroup) -> Result<()> {
    if h.is_isotropic() {
        Ok(())
    } else {
        Err(Error::NotIsotropic)
    }
}

/// Isotropic descent: `e_g -> e_{g + H}` for `g` in `H^perp`, zero otherwise.
pub fn descent(h: &FqmSubgroup, v: &GroupAlgebraVector) -> Result<CosetVector> {
    require_isotropic(h)?;
    if h.form() != v.form() {
        return Err(Error::MismatchedForms);
    }
    let form = h.form();
    let gens = h.generators();
    let mut w = CosetVector::zero(h.clone());
    for (g, c) in v.entries() {
        if gens.iter().all(|x| form.bilinear_numerator(g, x) == 0) {
            w.add_to(g, c.clone())?;
        }
    }
    Ok(w)
}

/// Isotropic induction: `e_{g + H} -> sum_{h in H} e_{g + h}`.
pub fn induction(h: &FqmSubgroup, w: &CosetVector) -> Result<GroupAlgebraVector> {
    require_isotropic(h)?;
    if w.subgroup() != h {
        return Err(Error::MismatchedForms);
    }
    let form = h.form();
    let elems = h.elements();
    let mut v = GroupAlgebraVector::zero(form);
    for (g, c) in w.entries() {
        for x in &elems {
            let y = form.add(g, x);
            let s = v.coefficient(&y) + c;
            v.set(y, s);
        }
    }
    Ok(v)
}

/// `sum_k c_k zeta_m^k`.
fn from_exponent_sums(m: u64, sums: &[Rational]) -> CyclotomicNumber {
    let mut out = CyclotomicNumber::zero(m);
    for (k, c) in sums.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&CyclotomicNumber::root_of_unity(m, k as i64).scale(c));
        }
    }
    out
}

/// `sum_g e(q(g))`, which equals `N N'` exactly when the signature factor is trivial.
pub fn gauss_sum(form: &DiscriminantForm) -> CyclotomicNumber {
    let n = form.n();
    let mut sums = vec![Rational::zero(); n as usize];
    for g in form.elements() {
        let k = arith::modp(form.q_numerator(&g), n) as usize;
        sums[k] += Rational::one();
    }
    from_exponent_sums(n as u64, &sums)
}

fn check_signature(form: &DiscriminantForm) -> Result<()> {
    let expected = CyclotomicNumber::from_rational(form.n() as u64, rat_int(form.n() * form.nprime()));
    if gauss_sum(form) == expected {
        Ok(())
    } else {
        Err(Error::internal(format!("Gauss sum of {form} is not N N'")))
    }
}

/// `rho(T)` over the cyclotomic field of conductor `N`.
pub fn weil_t(form: &DiscriminantForm, guard: &Guard) -> Result<ExactMatrix<CyclotomicNumber>> {
    guard.check("Weil matrix", form.order())?;
    check_signature(form)?;
    let m = form.n() as u64;
    let elems: Vec<FqmElement> = form.elements().collect();
    let zero = CyclotomicNumber::zero(m);
    Ok(ExactMatrix::from_fn(elems.len(), elems.len(), zero.clone(), |r, c| {
        if r == c {
            CyclotomicNumber::e(m, form.q_value(&elems[r]))
        } else {
            zero.clone()
        }
    }))
}

/// `rho(S)` over the cyclotomic field of conductor `N`.
pub fn weil_s(form: &DiscriminantForm, guard: &Guard) -> Result<ExactMatrix<CyclotomicNumber>> {
    guard.check("Weil matrix", form.order())?;
    check_signature(form)?;
    let m = form.n() as u64;
    let elems: Vec<FqmElement> = form.elements().collect();
    let scale = Rational::new(1.into(), (form.n() * form.nprime()).into());
    Ok(ExactMatrix::from_fn(elems.len(), elems.len(), CyclotomicNumber::zero(m), |r, c| {
        CyclotomicNumber::e(m, -form.bilinear(&elems[r], &elems[c])).scale(&scale)
    }))
}

/// Whether `rho(T) v = v` and `rho(S) v = v`.
pub fn is_invariant(v: &GroupAlgebraVector) -> bool {
    let form = v.form();
    if v.entries().any(|(g, _)| form.q_numerator(g) != 0) {
        return false;
    }
    let n = form.n();
    let nn = rat_int(n * form.nprime());
    let m = n as u64;
    let invariant = form.elements().all(|g| {
        let mut sums = vec![Rational::zero(); n as usize];
        for (d, c) in v.entries() {
            let k = arith::modp(-form.bilinear_numerator(&g, d), n) as usize;
            sums[k] += c;
        }
        let lhs = from_exponent_sums(m, &sums);
        lhs == CyclotomicNumber::from_rational(m, &nn * v.coefficient(&g))
    });
    invariant
}

/// Dimension of the invariants and whether the reduced echelon form was rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantSpace {
    pub dimension: usize,
    pub rational: bool,
}

/// Joint kernel of `rho(T) - 1` and `rho(S) - 1` by elimination over `Q(zeta_N)`.
///
/// Invariant vectors are supported on isotropic elements and are even, so the
/// unknowns are the `+-` orbits of isotropic elements.
pub fn invariant_space_direct(form: &DiscriminantForm, guard: &Guard) -> Result<InvariantSpace> {
    guard.check("Weil invariants", form.order())?;
    check_signature(form)?;
    let n = form.n();
    let m = n as u64;
    let orbit_reps: Vec<FqmElement> = form.elements().filter(|g| *g <= form.neg(g)).collect();
    let columns: Vec<FqmElement> = orbit_reps.iter().copied().filter(|g| form.q_numerator(g) == 0).collect();
    let nn = rat_int(n * form.nprime());
    let mut echelon = RowEchelon::new(columns.len(), CyclotomicNumber::zero(m));
    for g in &orbit_reps {
        let row: Vec<CyclotomicNumber> = columns
            .iter()
            .map(|d| {
                let mut sums = vec![Rational::zero(); n as usize];
                sums[arith::modp(-form.bilinear_numerator(g, d), n) as usize] += Rational::one();
                let nd = form.neg(d);
                if nd != *d {
                    sums[arith::modp(-form.bilinear_numerator(g, &nd), n) as usize] += Rational::one();
                }
                let mut entry = from_exponent_sums(m, &sums);
                if g == d {
                    entry = entry.sub(&CyclotomicNumber::from_rational(m, nn.clone()));
                }
                entry
            })
            .collect();
        echelon.insert(row);
        if echelon.is_full() {
            break;
        }
    }
    let rref = echelon.into_rref();
    let rational = rref.entries().all(|x| x.as_rational().is_some());
    Ok(InvariantSpace {
        dimension: columns.len() - rref.rank(),
        rational,
    })
}

/// Invariant dimension as the product over the `p`-components.
///
/// `D_p` is isometric to the discriminant form of `L_{p^r, p^r'}`, and the Weil
/// representation of `D` is the tensor product of those of its `p`-components.
pub fn invariant_space(form: &DiscriminantForm, guard: &Guard) -> Result<InvariantSpace> {
    guard.check("Weil invariants", form.order())?;
    let mut out = InvariantSpace {
        dimension: 1,
        rational: true,
    };
    for (p, r) in arith::factorize(form.n()) {
        let rp = arith::valuation(form.nprime(), p);
        let local = DiscriminantForm::new(p.pow(r), p.pow(rp))?;
        let part = invariant_space_direct(&local, guard)?;
        out.dimension *= part.dimension;
        out.rational &= part.rational;
    }
    Ok(out)
}

pub fn invariant_space_dim(form: &DiscriminantForm, guard: &Guard) -> Result<usize> {
    Ok(invariant_space(form, guard)?.dimension)
}

/// Gram matrix `(|H_i ∩ H_j|)` of the characteristic functions.
pub fn gram_matrix(subgroups: &[FqmSubgroup]) -> Result<ExactMatrix<Rational>> {
    let k = subgroups.len();
    let mut g = ExactMatrix::new(k, k, Rational::zero());
    for i in 0..k {
        for j in i..k {
            let c = rat_int(subgroups[i].intersection_count(&subgroups[j])? as i64);
            g.set(i, j, c.clone());
            g.set(j, i, c);
        }
    }
    Ok(g)
}

/// The span of the characteristic functions of all types.
#[derive(Debug, Clone)]
pub struct TypesSpan {
    /// Types with their least witness, in witness order.
    pub types: Vec<(FqmSubgroup, CuspLabel)>,
    pub dimension: usize,
    /// Basis of the linear relations among the characteristic functions.
    pub relations: Vec<Vec<Rational>>,
}

/// Rank and relations of the characteristic functions of types.
///
/// The Gram matrix of real vectors has the same kernel as the matrix of the vectors.
pub fn types_span(form: &DiscriminantForm) -> Result<TypesSpan> {
    let types = cusps::enumerate_types(form);
    let subgroups: Vec<FqmSubgroup> = types.iter().map(|(h, _)| h.clone()).collect();
    let rref = gram_matrix(&subgroups)?.echelon().into_rref();
    Ok(TypesSpan {
        dimension: rref.rank(),
        relations: rref.kernel_basis(),
        types,
    })
}

/// Closed-form dimension of the span of types.
pub fn types_span_dimension_formula(n: i64, nprime: i64) -> Result<u64> {
    let _ = DiscriminantForm::new(n, nprime)?;
    let mut total: i64 = 1;
    for (p, r) in arith::factorize(n) {
        let rp = arith::valuation(nprime, p) as i64;
        let r = r as i64;
        total *= if rp >= 1 {
            2 * ((r - rp + 1) * p.pow(rp as u32) - (r - rp - 1) * p.pow(rp as u32 - 1)) - 1
        } else {
            r + 1
        };
    }
    Ok(total as u64)
}

/// How the displayed prime-power relation compares with the computed relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub kernel_dimension: usize,
    /// Summation ranges as printed; labels met twice accumulate coefficient 2.
    pub literal_in_kernel: bool,
    /// Every listed type exactly once on each side.
    pub distinct_in_kernel: bool,
}

fn relation_labels_literal(p: i64, r: u32, rprime: u32, star: Star) -> Result<Vec<CuspLabel>> {
    let mut out = Vec::new();
    for k in 0..p.pow(rprime - 1) {
        out.push(CuspLabel::normalized(star, p * k, 1)?);
    }
    for k in 0..p.pow(rprime) {
        out.push(CuspLabel::normalized(star, 1, k * p.pow(r - rprime))?);
    }
    for s in 0..=(r - rprime) {
        for u in (1..=p.pow(rprime)).filter(|u| u % p != 0) {
            out.push(CuspLabel::normalized(star, 1, u * p.pow(s))?);
        }
    }
    Ok(out)
}

fn relation_vector(form: &DiscriminantForm, span: &TypesSpan, labels: &[(CuspLabel, i64)]) -> Result<Vec<Rational>> {
    let mut v = vec![Rational::zero(); span.types.len()];
    for (label, sign) in labels {
        let t = cusps::type_of_cusp(form, label);
        let i = span
            .types
            .iter()
            .position(|(h, _)| *h == t)
            .ok_or_else(|| Error::internal(format!("type of {label} missing from enumeration")))?;
        v[i] += rat_int(*sign);
    }
    Ok(v)
}

fn in_kernel(span: &TypesSpan, v: &[Rational]) -> Result<bool> {
    let subgroups: Vec<FqmSubgroup> = span.types.iter().map(|(h, _)| h.clone()).collect();
    let g = gram_matrix(&subgroups)?;
    Ok(v.iter().any(|x| !x.is_zero()) && g.mul_vec(v).iter().all(|x| x.is_zero()))
}

/// Checks both readings of the displayed relation for `N = p^r`, `N' = p^r'`.
pub fn relation_report(p: i64, r: u32, rprime: u32) -> Result<RelationReport> {
    if !arith::is_prime(p) || rprime < 1 || rprime > r {
        return Err(Error::param("need a prime p and 1 <= r' <= r"));
    }
    let form = DiscriminantForm::new(p.pow(r), p.pow(rprime))?;
    let span = types_span(&form)?;
    let signed = |labels: Vec<CuspLabel>, sign: i64| labels.into_iter().map(move |l| (l, sign));
    let mut literal = Vec::new();
    let mut distinct = Vec::new();
    for (star, sign) in [(Star::One, 1), (Star::Two, -1)] {
        literal.extend(signed(relation_labels_literal(p, r, rprime, star)?, sign));
        distinct.extend(signed(cusps::prime_power_type_witnesses(p, r, rprime, star)?, sign));
    }
    let literal = relation_vector(&form, &span, &literal)?;
    let distinct = relation_vector(&form, &span, &distinct)?;
    Ok(RelationReport {
        kernel_dimension: span.relations.len(),
        literal_in_kernel: in_kernel(&span, &literal)?,
        distinct_in_kernel: in_kernel(&span, &distinct)?,
    })
}

/// Whether the relation, read with the printed summation ranges, is a relation.
pub fn printed_relation_holds(p: i64, r: u32, rprime: u32) -> Result<bool> {
    Ok(relation_report(p, r, rprime)?.literal_in_kernel)
}

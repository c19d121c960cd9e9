//! Boundary divisors supported on one-dimensional cusps, special divisors `Z(H)`,
//! the specialness decision and Weyl vector components.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::arith::{self, gcd, inv_mod, modp, rat, rat_int, Rational};
use crate::cusps::{self, class_index, CuspClass, CuspLabel, Star};
use crate::error::{Error, Result};
use crate::fqm::{DiscriminantForm, FqmSubgroup};
use crate::guard::Guard;
use crate::invariants::{self, char_vector, descent, GroupAlgebraVector};
use crate::linalg::ExactMatrix;

/// Rational multiplicities on cusp classes, keyed by class representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryDivisor {
    form: DiscriminantForm,
    multiplicities: BTreeMap<CuspLabel, Rational>,
}

impl BoundaryDivisor {
    pub fn zero(form: DiscriminantForm) -> Self {
        Self {
            form,
            multiplicities: BTreeMap::new(),
        }
    }

    /// Builds a divisor from labels, mapping each label to its class.
    pub fn from_entries(
        form: DiscriminantForm,
        classes: &[CuspClass],
        entries: impl IntoIterator<Item = (CuspLabel, Rational)>,
    ) -> Result<Self> {
        let mut d = Self::zero(form);
        for (label, m) in entries {
            let i = class_index(&form, classes, &label)
                .ok_or_else(|| Error::param(format!("{label} is not in the cusp class list")))?;
            let rep = classes[i].representative;
            let s = d.multiplicity(&rep) + m;
            d.set(rep, s);
        }
        Ok(d)
    }

    pub fn form(&self) -> DiscriminantForm {
        self.form
    }

    fn set(&mut self, rep: CuspLabel, m: Rational) {
        if m.is_zero() {
            self.multiplicities.remove(&rep);
        } else {
            self.multiplicities.insert(rep, m);
        }
    }

    /// Multiplicity on the class with this representative.
    pub fn multiplicity(&self, rep: &CuspLabel) -> Rational {
        self.multiplicities.get(rep).cloned().unwrap_or_else(Rational::zero)
    }

    /// Non-zero multiplicities by class representative.
    pub fn entries(&self) -> impl Iterator<Item = (&CuspLabel, &Rational)> {
        self.multiplicities.iter()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.form != other.form {
            return Err(Error::MismatchedForms);
        }
        let mut out = self.clone();
        for (rep, m) in &other.multiplicities {
            let s = out.multiplicity(rep) + m;
            out.set(*rep, s);
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.form);
        for (rep, m) in &self.multiplicities {
            out.set(*rep, m * r);
        }
        out
    }

    fn check_support(&self, classes: &[CuspClass]) -> Result<()> {
        for rep in self.multiplicities.keys() {
            if !classes.iter().any(|c| c.representative == *rep) {
                return Err(Error::param(format!("{rep} is not a class representative")));
            }
        }
        Ok(())
    }
}

/// Rational values on the types of the form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeMultiplicityFunction {
    form: DiscriminantForm,
    values: BTreeMap<FqmSubgroup, Rational>,
}

impl TypeMultiplicityFunction {
    pub fn form(&self) -> DiscriminantForm {
        self.form
    }

    pub fn value(&self, t: &FqmSubgroup) -> Rational {
        self.values.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&FqmSubgroup, &Rational)> {
        self.values.iter()
    }

    fn from_values(form: DiscriminantForm, values: impl IntoIterator<Item = (FqmSubgroup, Rational)>) -> Self {
        Self {
            form,
            values: values.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }
}

fn require_self_dual(h: &FqmSubgroup) -> Result<()> {
    if h.is_self_dual_isotropic() {
        Ok(())
    } else {
        Err(Error::NotSelfDualIsotropic)
    }
}

/// `Z(H) = sum_S #(H ∩ type(S)) [S]`.
pub fn special_divisor(form: &DiscriminantForm, classes: &[CuspClass], h: &FqmSubgroup) -> Result<BoundaryDivisor> {
    require_self_dual(h)?;
    let mut d = BoundaryDivisor::zero(*form);
    for class in classes {
        d.set(class.representative, rat_int(h.intersection_count(&class.cusp_type)? as i64));
    }
    Ok(d)
}

/// `T -> #(H ∩ T)` on the given types.
pub fn special_type_function(h: &FqmSubgroup, types: &[FqmSubgroup]) -> Result<TypeMultiplicityFunction> {
    require_self_dual(h)?;
    let values = types
        .iter()
        .map(|t| Ok((t.clone(), rat_int(h.intersection_count(t)? as i64))))
        .collect::<Result<Vec<_>>>()?;
    Ok(TypeMultiplicityFunction::from_values(h.form(), values))
}

/// `T -> (descent_T v)_0` for an invariant vector `v`.
pub fn boundary_divisor_of_invariant(v: &GroupAlgebraVector, types: &[FqmSubgroup]) -> Result<TypeMultiplicityFunction> {
    if !invariants::is_invariant(v) {
        return Err(Error::NotInvariant);
    }
    let values = types
        .iter()
        .map(|t| Ok((t.clone(), descent(t, v)?.zero_component())))
        .collect::<Result<Vec<_>>>()?;
    Ok(TypeMultiplicityFunction::from_values(v.form(), values))
}

/// The type view of a divisor, or `None` when it is not constant on classes of equal type.
pub fn type_view(d: &BoundaryDivisor, classes: &[CuspClass]) -> Result<Option<TypeMultiplicityFunction>> {
    d.check_support(classes)?;
    let mut values: BTreeMap<FqmSubgroup, Rational> = BTreeMap::new();
    for class in classes {
        let m = d.multiplicity(&class.representative);
        match values.get(&class.cusp_type) {
            Some(prev) if *prev != m => return Ok(None),
            Some(_) => {}
            None => {
                values.insert(class.cusp_type.clone(), m);
            }
        }
    }
    Ok(Some(TypeMultiplicityFunction::from_values(d.form, values)))
}

/// Coefficients `c_H` over the types with `d = sum c_H Z(H)`, and the invariant vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialCertificate {
    /// In the order of [`cusps::enumerate_types`].
    pub coefficients: Vec<(FqmSubgroup, Rational)>,
    pub invariant_vector: GroupAlgebraVector,
}

/// Solves `sum_H c_H #(H ∩ T) = m(T)` over the types; free coefficients are zero.
pub fn is_special_type_function(f: &TypeMultiplicityFunction) -> Result<Option<SpecialCertificate>> {
    let form = f.form();
    let types: Vec<FqmSubgroup> = cusps::enumerate_types(&form).into_iter().map(|(h, _)| h).collect();
    if f.entries().any(|(t, _)| !types.contains(t)) {
        return Err(Error::param("function is keyed by a subgroup that is not a type"));
    }
    let gram = invariants::gram_matrix(&types)?;
    let rhs: Vec<Rational> = types.iter().map(|t| f.value(t)).collect();
    let Some(c) = gram.solve(&rhs) else {
        return Ok(None);
    };
    let mut v = GroupAlgebraVector::zero(form);
    for (h, ch) in types.iter().zip(&c) {
        if !ch.is_zero() {
            v = v.add(&char_vector(h).scale(ch))?;
        }
    }
    Ok(Some(SpecialCertificate {
        coefficients: types.into_iter().zip(c).collect(),
        invariant_vector: v,
    }))
}

/// Decides whether a divisor on the cusp classes is a combination of the `Z(H)`.
pub fn is_special(d: &BoundaryDivisor, classes: &[CuspClass]) -> Result<Option<SpecialCertificate>> {
    match type_view(d, classes)? {
        Some(f) => is_special_type_function(&f),
        None => Ok(None),
    }
}

/// Rank of `{Z(H)}`: over cusp classes when they are enumerable, otherwise over types.
pub fn spbdiv_dimension(form: &DiscriminantForm, guard: &Guard) -> Result<usize> {
    let types: Vec<FqmSubgroup> = cusps::enumerate_types(form).into_iter().map(|(h, _)| h).collect();
    let columns: Vec<FqmSubgroup> = if form.order() <= guard.max_form_order() {
        cusps::cusp_classes(form, guard)?.into_iter().map(|c| c.cusp_type).collect()
    } else {
        types.clone()
    };
    let mut m = ExactMatrix::new(types.len(), columns.len(), Rational::zero());
    for (i, h) in types.iter().enumerate() {
        for (j, t) in columns.iter().enumerate() {
            m.set(i, j, rat_int(h.intersection_count(t)? as i64));
        }
    }
    Ok(m.rank())
}

/// `(N_z, N_z~)` for the plane of a cusp label.
pub fn levels_of_cusp(form: &DiscriminantForm, label: &CuspLabel) -> Result<(i64, i64)> {
    let (n, np) = (form.n(), form.nprime());
    let (a, c) = (label.a, label.c);
    let z = match label.star {
        Star::One => [[0, a], [0, c]],
        Star::Two => [[c, a], [0, 0]],
    };
    // pairings with the basis E11, E12, (N/N') E21, E22 of the lattice
    let nz = np * gcd(gcd(z[0][0], z[1][0]), gcd(z[1][1], (n / np) * z[0][1]));
    let order = cusps::type_of_cusp(form, label).order() as i64;
    if order % nz != 0 {
        return Err(Error::internal(format!("level {nz} does not divide |type| = {order}")));
    }
    let nzt = order / nz;
    if nz * nzt != n * np {
        return Err(Error::internal(format!("N_z N_z~ = {} but |type| = {}", nz * nzt, n * np)));
    }
    Ok((nz, nzt))
}

/// Constant term of the descended vector times `E_2 / 24`.
pub fn weyl_component_constant(form: &DiscriminantForm, h: &FqmSubgroup, label: &CuspLabel) -> Result<Rational> {
    require_self_dual(h)?;
    let t = cusps::type_of_cusp(form, label);
    Ok(rat(h.intersection_count(&t)? as i64, 24))
}

/// `1/2 sum_{b1, b2} 1_H(b1 g_z + b2 g_z~) B_2(b2 / N_z~)`.
pub fn weyl_component_b2(form: &DiscriminantForm, h: &FqmSubgroup, label: &CuspLabel) -> Result<Rational> {
    require_self_dual(h)?;
    let (nz, nzt) = levels_of_cusp(form, label)?;
    let (gz, gzt) = cusps::isotropic_generators(form, label);
    let mut total = Rational::zero();
    for b2 in 0..nzt {
        let mut hits = 0i64;
        for b1 in 0..nz {
            let x = form.add(&form.scale(b1, &gz), &form.scale(b2, &gzt));
            if h.contains(&x) {
                hits += 1;
            }
        }
        if hits != 0 {
            total += rat_int(hits) * arith::bernoulli2(&rat(b2, nzt));
        }
    }
    Ok(total / rat_int(2))
}

/// Outcome of the explicit characterizations of special divisors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharacterizationReport {
    /// `N' = 1`.
    LevelOne { symmetric: bool, gcd_dependent: bool },
    /// `N = N' = p^r`.
    PrimePower {
        star_one_condition: bool,
        star_two_condition: bool,
        balanced: bool,
    },
}

impl CharacterizationReport {
    pub fn holds(&self) -> bool {
        match self {
            Self::LevelOne { symmetric, gcd_dependent } => *symmetric && *gcd_dependent,
            Self::PrimePower {
                star_one_condition,
                star_two_condition,
                balanced,
            } => *star_one_condition && *star_two_condition && *balanced,
        }
    }
}

fn constant_on_keys<K: Ord>(pairs: impl IntoIterator<Item = (K, Rational)>) -> bool {
    let mut seen: BTreeMap<K, Rational> = BTreeMap::new();
    for (k, m) in pairs {
        match seen.get(&k) {
            Some(prev) if *prev != m => return false,
            Some(_) => {}
            None => {
                seen.insert(k, m);
            }
        }
    }
    true
}

/// Checks the conditions characterizing special divisors for `N' = 1` or `N = N' = p^r`.
pub fn characterization_check(d: &BoundaryDivisor, classes: &[CuspClass]) -> Result<CharacterizationReport> {
    d.check_support(classes)?;
    let form = d.form();
    let (n, np) = (form.n(), form.nprime());
    if np == 1 {
        let symmetric = classes.iter().filter(|c| c.star == Star::One).all(|c| {
            let mirror = CuspLabel {
                star: Star::Two,
                ..c.representative
            };
            class_index(&form, classes, &mirror)
                .map(|j| d.multiplicity(&classes[j].representative) == d.multiplicity(&c.representative))
                .unwrap_or(false)
        });
        let gcd_dependent = constant_on_keys(
            classes
                .iter()
                .map(|c| (gcd(c.representative.c, n), d.multiplicity(&c.representative))),
        );
        return Ok(CharacterizationReport::LevelOne { symmetric, gcd_dependent });
    }
    let factors = arith::factorize(n);
    if n != np || factors.len() != 1 {
        return Err(Error::param("characterization needs N' = 1 or N = N' a prime power"));
    }
    let p = factors[0].0;
    let key = |l: &CuspLabel| -> (bool, i64) {
        if l.a % p == 0 {
            (true, modp(l.a * inv_mod(l.c, n).expect("c is a unit when p | a"), n))
        } else {
            (false, modp(inv_mod(l.a, n).expect("a is a unit") * l.c, n))
        }
    };
    let condition = |star: Star| {
        constant_on_keys(
            classes
                .iter()
                .filter(|c| c.star == star)
                .map(|c| (key(&c.representative), d.multiplicity(&c.representative))),
        )
    };
    let mut sums = [Rational::zero(), Rational::zero()];
    let mut counted: Vec<&FqmSubgroup> = Vec::new();
    for c in classes {
        if !counted.contains(&&c.cusp_type) {
            counted.push(&c.cusp_type);
            sums[(c.star.index() - 1) as usize] += d.multiplicity(&c.representative);
        }
    }
    Ok(CharacterizationReport::PrimePower {
        star_one_condition: condition(Star::One),
        star_two_condition: condition(Star::Two),
        balanced: sums[0] == sums[1],
    })
}

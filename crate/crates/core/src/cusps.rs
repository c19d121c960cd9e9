//! One-dimensional cusps of the modular surface of `L_{N,N'}`.
//!
//! A boundary curve is either `{a/c} x H` (star 1) or `H x {a/c}` (star 2). Its
//! type is the self-dual isotropic subgroup generated by the classes of the two
//! primitive isotropic lattice vectors spanning the corresponding plane.
//!
//! The projection of the discriminant kernel to either factor is
//! `{(a b; c d) in SL2(Z) : N | c, N' | b, a^2 = 1 mod N'}`: given such a matrix,
//! `(d b; c a)` is a partner, and the congruences force `a^2 = 1 mod N'`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, ext_gcd, gcd, modp};
use crate::error::{Error, Result};
use crate::fqm::{DiscriminantForm, FqmElement, FqmSubgroup};
use crate::guard::Guard;

/// Which family a boundary curve belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Star {
    /// `{a/c} x H`
    One,
    /// `H x {a/c}`
    Two,
}

impl Star {
    pub const BOTH: [Star; 2] = [Star::One, Star::Two];

    pub fn index(self) -> u8 {
        match self {
            Star::One => 1,
            Star::Two => 2,
        }
    }

    pub fn other(self) -> Star {
        match self {
            Star::One => Star::Two,
            Star::Two => Star::One,
        }
    }
}

impl TryFrom<u8> for Star {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Star::One),
            2 => Ok(Star::Two),
            _ => Err(Error::param(format!("star must be 1 or 2, got {v}"))),
        }
    }
}

impl From<Star> for u8 {
    fn from(s: Star) -> u8 {
        s.index()
    }
}

/// The cusp `a/c` in one of the two families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CuspLabel {
    pub star: Star,
    pub a: i64,
    pub c: i64,
}

impl CuspLabel {
    /// Validates `gcd(a, c) = 1`, `c >= 0` and `c = 0 => a = 1`.
    pub fn new(star: Star, a: i64, c: i64) -> Result<Self> {
        if c < 0 {
            return Err(Error::param(format!("cusp {a}/{c}: c must be non-negative")));
        }
        if gcd(a, c) != 1 {
            return Err(Error::param(format!("cusp {a}/{c}: gcd(a, c) must be 1")));
        }
        if c == 0 && a != 1 {
            return Err(Error::param("the cusp at infinity is written 1/0"));
        }
        Ok(Self { star, a, c })
    }

    /// Normalizes a primitive pair up to sign.
    pub fn normalized(star: Star, a: i64, c: i64) -> Result<Self> {
        let (a, c) = if c < 0 || (c == 0 && a < 0) { (-a, -c) } else { (a, c) };
        Self::new(star, a, c)
    }

    pub fn infinity(star: Star) -> Self {
        Self { star, a: 1, c: 0 }
    }
}

impl fmt::Display for CuspLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}/{}", self.star.index(), self.a, self.c)
    }
}

/// The invariants `M, d1, d2, u` attached to a cusp label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspParameters {
    pub m: i64,
    pub d1: i64,
    pub d2: i64,
    /// Unit modulo `N'`, as its least positive representative.
    pub u: i64,
}

/// `M = gcd(N/N', c)`.
fn m_of(form: &DiscriminantForm, c: i64) -> i64 {
    gcd(form.n() / form.nprime(), c)
}

pub fn cusp_parameters(form: &DiscriminantForm, label: &CuspLabel) -> CuspParameters {
    let (n, np) = (form.n(), form.nprime());
    let (a, c) = (label.a, label.c);
    let m = m_of(form, c);
    let d1 = gcd(a, np);
    let d2 = gcd(c / m, np);
    let base = n / (np * m);
    // (N a/(N'M), -c/M) must be k * (N d1/(N'M), -u d2) for some k
    let u = (1..=np)
        .filter(|&u| gcd(u, np) == 1)
        .find(|&u| {
            (0..n).any(|k| {
                modp(k * base * d1 - base * a, n) == 0 && modp(k * u * d2 - c / m, np) == 0
            })
        })
        .expect("a matching unit exists for every primitive pair");
    CuspParameters { m, d1, d2, u }
}

/// Images of `z / N_z` and `z~ / N_z~` in the discriminant form.
pub fn isotropic_generators(form: &DiscriminantForm, label: &CuspLabel) -> (FqmElement, FqmElement) {
    let (n, np) = (form.n(), form.nprime());
    let (a, c) = (label.a, label.c);
    let m = m_of(form, c);
    match label.star {
        Star::One => (form.element(n * a / (np * m), 0, 0, -c / m), form.element(0, c, a, 0)),
        Star::Two => (form.element(n * a / (np * m), 0, c / m, 0), form.element(0, c, 0, -a)),
    }
}

/// The type `H^*_{a,c}` of the boundary curve.
pub fn type_of_cusp(form: &DiscriminantForm, label: &CuspLabel) -> FqmSubgroup {
    let (g1, g2) = isotropic_generators(form, label);
    FqmSubgroup::from_generators(*form, &[g1, g2])
}

pub type Mat2 = [[i64; 2]; 2];

fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

fn det(x: &Mat2) -> i64 {
    x[0][0] * x[1][1] - x[0][1] * x[1][0]
}

/// Completes the column `(a, c)` to a matrix in `SL2(Z)`.
fn completion(a: i64, c: i64) -> Mat2 {
    let (g, x, y) = ext_gcd(a, c);
    debug_assert_eq!(g, 1);
    // a*x + c*y = 1  =>  det (a -y; c x) = 1
    [[a, -y], [c, x]]
}

fn inverse(x: &Mat2) -> Mat2 {
    [[x[1][1], -x[0][1]], [-x[1][0], x[0][0]]]
}

fn member_unchecked(form: &DiscriminantForm, m: &Mat2) -> bool {
    let (n, np) = (form.n(), form.nprime());
    modp(m[1][0], n) == 0 && modp(m[0][1], np) == 0 && modp(m[0][0] * m[0][0] - 1, np) == 0
}

/// Whether the matrix is the `star`-component of an element of the discriminant kernel.
///
/// Both projections coincide, so `star` only names the factor being asked about.
pub fn projected_group_member(form: &DiscriminantForm, _star: Star, matrix: &Mat2) -> Result<bool> {
    if det(matrix) != 1 {
        return Err(Error::param(format!("determinant {} is not 1", det(matrix))));
    }
    Ok(member_unchecked(form, matrix))
}

/// Whether two boundary curves of the same family are identified in the quotient.
pub fn cusps_equivalent(form: &DiscriminantForm, star: Star, l1: &CuspLabel, l2: &CuspLabel) -> bool {
    if l1.star != star || l2.star != star {
        return false;
    }
    let a1 = completion(l1.a, l1.c);
    let a2 = completion(l2.a, l2.c);
    let a1_inv = inverse(&a1);
    let period = form.n() * form.nprime();
    (0..period).any(|n| {
        let g = mat_mul(&mat_mul(&a2, &[[1, n], [0, 1]]), &a1_inv);
        let neg = [[-g[0][0], -g[0][1]], [-g[1][0], -g[1][1]]];
        member_unchecked(form, &g) || member_unchecked(form, &neg)
    })
}

/// Width of the cusp `a/c` for the projected group.
pub fn cusp_width(form: &DiscriminantForm, label: &CuspLabel) -> i64 {
    let a = completion(label.a, label.c);
    let a_inv = inverse(&a);
    (1..=form.n() * form.nprime())
        .find(|&h| member_unchecked(form, &mat_mul(&mat_mul(&a, &[[1, h], [0, 1]]), &a_inv)))
        .expect("the principal congruence subgroup of level N*N' is contained")
}

/// Whether `(g, 1)` lies in the discriminant kernel.
fn acts_on_first_factor(form: &DiscriminantForm, g: &Mat2) -> bool {
    let (n, np) = (form.n(), form.nprime());
    modp(g[0][0] - 1, n) == 0 && modp(g[1][1] - 1, n) == 0 && modp(g[1][0], n) == 0 && modp(g[0][1], np) == 0
}

/// Period of the unipotent translations at `a/c` that act trivially on the other factor.
///
/// The order of a product expansion along the boundary curve `{a/c} x H` (or `H x {a/c}`
/// for star 2) is measured in `e(z/h)` for this `h`. Sign changes are not translations of
/// the lattice, so `-1` is not absorbed as it is for [`cusp_width`].
pub fn boundary_width(form: &DiscriminantForm, label: &CuspLabel) -> i64 {
    let a = completion(label.a, label.c);
    let a_inv = inverse(&a);
    (1..=form.n() * form.nprime())
        .find(|&h| acts_on_first_factor(form, &mat_mul(&mat_mul(&a, &[[1, h], [0, 1]]), &a_inv)))
        .expect("the principal congruence subgroup of level N*N' is contained")
}

/// A cusp class of the quotient together with its type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspClass {
    pub star: Star,
    /// Least member found during enumeration.
    pub representative: CuspLabel,
    pub members: Vec<CuspLabel>,
    pub cusp_type: FqmSubgroup,
}

/// Lifts `(a, c)` mod `modulus` (with `gcd(a, c, modulus) = 1`) to a primitive label.
fn lift_residue(star: Star, a: i64, c: i64, modulus: i64) -> CuspLabel {
    let (a, c) = (modp(a, modulus), modp(c, modulus));
    if c == 0 && (modp(a - 1, modulus) == 0 || modp(a + 1, modulus) == 0) {
        return CuspLabel::infinity(star);
    }
    let c_lift = if c == 0 { modulus } else { c };
    let a_lift = (0..=c_lift)
        .map(|j| a + j * modulus)
        .find(|&x| gcd(x, c_lift) == 1)
        .expect("a coprime lift exists when gcd(a, c, modulus) = 1");
    CuspLabel { star, a: a_lift, c: c_lift }
}

/// Primitive representatives of the cusps of the principal congruence subgroup of level `modulus`.
fn principal_level_representatives(star: Star, modulus: i64) -> Vec<CuspLabel> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c in 0..modulus {
        for a in 0..modulus {
            if gcd(gcd(a, c), modulus) != 1 {
                continue;
            }
            let key = (a, c).min((modp(-a, modulus), modp(-c, modulus)));
            if seen.insert(key) {
                out.push(lift_residue(star, a, c, modulus));
            }
        }
    }
    out
}

/// All cusp classes of both families, ordered by `(star, representative)`.
pub fn cusp_classes(form: &DiscriminantForm, guard: &Guard) -> Result<Vec<CuspClass>> {
    guard.check("cusp class enumeration", form.order())?;
    let modulus = form.n() * form.nprime();
    let mut classes = Vec::new();
    for star in Star::BOTH {
        let mut groups: Vec<Vec<CuspLabel>> = Vec::new();
        for label in principal_level_representatives(star, modulus) {
            match groups.iter_mut().find(|g| cusps_equivalent(form, star, &g[0], &label)) {
                Some(g) => g.push(label),
                None => groups.push(vec![label]),
            }
        }
        for mut members in groups {
            members.sort();
            let representative = members[0];
            let cusp_type = type_of_cusp(form, &representative);
            for m in &members[1..] {
                if type_of_cusp(form, m) != cusp_type {
                    return Err(Error::internal(format!("equivalent cusps {representative} and {m} differ in type")));
                }
            }
            classes.push(CuspClass {
                star,
                representative,
                members,
                cusp_type,
            });
        }
    }
    classes.sort_by_key(|c| (c.star, c.representative));
    Ok(classes)
}

/// Index of the class containing `label`.
pub fn class_index(form: &DiscriminantForm, classes: &[CuspClass], label: &CuspLabel) -> Option<usize> {
    classes
        .iter()
        .position(|cl| cl.members.contains(label))
        .or_else(|| classes.iter().position(|cl| cusps_equivalent(form, label.star, &cl.representative, label)))
}

/// All distinct types with their least witness label, ordered by witness.
///
/// A type depends on `(a, c)` only modulo `N`, so residues modulo `N` are enough.
pub fn enumerate_types(form: &DiscriminantForm) -> Vec<(FqmSubgroup, CuspLabel)> {
    let n = form.n();
    let mut best: BTreeMap<FqmSubgroup, CuspLabel> = BTreeMap::new();
    for star in Star::BOTH {
        for c in 0..n {
            for a in 0..n {
                if gcd(gcd(a, c), n) != 1 {
                    continue;
                }
                let label = lift_residue(star, a, c, n);
                let t = type_of_cusp(form, &label);
                best.entry(t)
                    .and_modify(|w| {
                        if label < *w {
                            *w = label
                        }
                    })
                    .or_insert(label);
            }
        }
    }
    let mut out: Vec<(FqmSubgroup, CuspLabel)> = best.into_iter().collect();
    out.sort_by_key(|(_, w)| *w);
    out
}

/// Closed-form count of types.
pub fn types_count_formula(n: i64, nprime: i64) -> Result<u64> {
    let _ = DiscriminantForm::new(n, nprime)?;
    let mut total: i64 = 1;
    for (p, r) in arith::factorize(n) {
        let rp = arith::valuation(nprime, p) as i64;
        let r = r as i64;
        let factor = if rp >= 1 {
            2 * ((r - rp + 1) * p.pow(rp as u32) - (r - rp - 1) * p.pow(rp as u32 - 1))
        } else {
            r + 1
        };
        total *= factor;
    }
    Ok(total as u64)
}

/// Compares `|Types(L)|` with the product of the numbers of distinct `p`-primary parts.
pub fn type_factorization_check(n: i64, nprime: i64) -> Result<bool> {
    let form = DiscriminantForm::new(n, nprime)?;
    let types = enumerate_types(&form);
    let mut product = 1usize;
    for p in form.primes() {
        let parts: BTreeSet<FqmSubgroup> = types
            .iter()
            .map(|(t, _)| t.p_primary_part(p))
            .collect::<Result<_>>()?;
        product *= parts.len();
    }
    Ok(product == types.len())
}

/// The witness labels listed for prime-power `N = p^r`, `N' = p^{r'}`, `r' >= 1`, one star.
pub fn prime_power_type_witnesses(p: i64, r: u32, rprime: u32, star: Star) -> Result<Vec<CuspLabel>> {
    if !arith::is_prime(p) || rprime < 1 || rprime > r {
        return Err(Error::param("need a prime p and 1 <= r' <= r"));
    }
    let mut out = Vec::new();
    for a in 0..p.pow(rprime - 1) {
        out.push(CuspLabel::normalized(star, p * a, 1)?);
    }
    for c in 0..p.pow(rprime - 1) {
        out.push(CuspLabel::normalized(star, 1, c * p.pow(r - rprime + 1))?);
    }
    for s in 0..=(r - rprime) {
        for u in (1..=p.pow(rprime)).filter(|u| u % p != 0) {
            out.push(CuspLabel::normalized(star, 1, u * p.pow(s))?);
        }
    }
    Ok(out)
}

//! Exact computations around modular units on two copies of the upper half-plane.
//!
//! The lattice is `L = U(N) + U(N')` with `N' | N`. The crate provides
//!
//! - [`fqm`]: the discriminant form `(Z/N)^2 + (Z/N')^2` and its subgroups,
//! - [`cusps`]: one-dimensional cusps, their types and cusp classes,
//! - [`invariants`]: the Weil representation, invariant vectors and the span of types,
//! - [`divisors`]: special boundary divisors and the specialness decision,
//! - [`qeta`]: exact eta-quotient expansions and identity checks.
//!
//! Everything is exact: rationals are `BigRational`, roots of unity live in
//! cyclotomic fields represented modulo the cyclotomic polynomial.

pub mod arith;
pub mod cusps;
pub mod cyclotomic;
pub mod divisors;
pub mod error;
pub mod fqm;
pub mod guard;
pub mod invariants;
pub mod json;
pub mod linalg;
pub mod qeta;

pub use arith::Rational;
pub use cusps::{CuspClass, CuspLabel, CuspParameters, Star};
pub use cyclotomic::{CyclotomicField, CyclotomicNumber};
pub use divisors::{BoundaryDivisor, SpecialCertificate, TypeMultiplicityFunction};
pub use error::{Error, Result};
pub use fqm::{DiscriminantForm, FqmElement, FqmSubgroup, RationalMod1};
pub use guard::Guard;
pub use invariants::GroupAlgebraVector;
pub use linalg::ExactMatrix;
pub use qeta::{EtaFactor, PsiConvention, PuiseuxSeries};

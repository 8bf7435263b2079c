//! Exact computer algebra for Ore extensions over finite-dimensional algebras.
//!
//! The engine is organised bottom-up:
//!
//! * [`scalar`] and [`linalg`]: the field trait and dense matrices over it.
//! * [`algebra`]: finite-dimensional algebras by structure constants, their
//!   morphisms, twisted derivations, right modules, radicals and simples.
//! * [`ore`]: skew polynomial arithmetic `R[t; α, δ]`, Laurent and opposite
//!   extensions, and finite-dimensional modules over them.
//! * [`differentials`]: the bimodule `A_α ⊗_R A` standing in for relative
//!   differential 1-forms, with the derivation `D` and the split sequence
//!   `0 → A_α ⊗_R A → A ⊗_R A → A → 0`.
//! * [`homology`]: free resolutions, Ext, homological dimensions, induced and
//!   mapping-cone resolutions over Ore extensions.
//! * [`topology`]: weighted ℓ¹ seminorms, truncated holomorphic elements and
//!   the smooth crossed product by ℤ.
//!
//! Everything is generic over a [`scalar::Field`]; the exact pipeline runs over
//! [`Rational`] and the aliases below fix that choice.

pub mod algebra;
pub mod catalogue;
pub mod differentials;
pub mod error;
pub mod homology;
pub mod linalg;
pub mod ore;
pub mod random;
pub mod report;
pub mod scalar;
pub mod topology;
pub mod verify;

pub use error::{Error, Result};
pub use report::CheckReport;
pub use scalar::Field;

/// Arbitrary precision rationals, the base field of every exact computation.
pub type Rational = num_rational::BigRational;

pub type QMatrix = linalg::Matrix<Rational>;
pub type QAlgebra = algebra::FdAlgebra<Rational>;
pub type QMorphism = algebra::AlgebraMorphism<Rational>;
pub type QDerivation = algebra::SigmaDerivation<Rational>;
pub type QModule = algebra::RightModule<Rational>;
pub type QModuleMap = algebra::ModuleMap<Rational>;
pub type QSignature = ore::OreSignature<Rational>;
pub type QOrePoly = ore::OrePoly<Rational>;
pub type QOreModule = ore::OreModule<Rational>;
pub type QTensor = differentials::TensorElement<Rational>;
pub type QInduced = differentials::InducedElement<Rational>;
pub type QSeminorm = topology::Seminorm<Rational>;
pub type QCrossed = topology::CrossedElement<Rational>;

//! The verification catalogue: four base algebras, five Ore signatures over
//! them, and the finite-dimensional test modules used by the suites.

use std::sync::Arc;

use crate::algebra::{simple_modules, AlgebraMorphism, FdAlgebra, RightModule, SigmaDerivation};
use crate::linalg::Matrix;
use crate::ore::{compatible_t_actions, OreModule, OreSignature};
use crate::{QAlgebra, QModule, QOreModule, QSignature, Rational};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn rationals() -> Arc<QAlgebra> {
    Arc::new(FdAlgebra::product_of_fields(1))
}

pub fn q_times_q() -> Arc<QAlgebra> {
    Arc::new(FdAlgebra::product_of_fields(2))
}

/// Upper triangular 2×2 matrices, basis `e11, e12, e22`.
pub fn t2() -> Arc<QAlgebra> {
    Arc::new(FdAlgebra::upper_triangular(2))
}

/// `ℚ[ε]/(ε²)`, basis `1, ε`.
pub fn dual_numbers() -> Arc<QAlgebra> {
    Arc::new(FdAlgebra::truncated_polynomial(2))
}

pub fn base_algebras() -> Vec<Arc<QAlgebra>> {
    vec![rationals(), q_times_q(), t2(), dual_numbers()]
}

/// `ℚ[t]`.
pub fn q_polynomial() -> Arc<QSignature> {
    let id = AlgebraMorphism::identity(rationals());
    OreSignature::polynomial("Q[t]", id.clone(), SigmaDerivation::zero(id)).expect("valid")
}

fn swap(r: Arc<QAlgebra>) -> AlgebraMorphism<Rational> {
    AlgebraMorphism::endo(r, Matrix::from_ints(2, 2, &[0, 1, 1, 0])).expect("2x2")
}

/// `(ℚ×ℚ)[t; swap]`.
pub fn qq_swap() -> Arc<QSignature> {
    let s = swap(q_times_q());
    OreSignature::polynomial("QxQ[t;swap]", s.clone(), SigmaDerivation::zero(s)).expect("valid")
}

/// `T₂[t; α, δ]` with `α` conjugation by `e11 + e12 + 2e22` and `δ` the inner
/// α-derivation `a ↦ e12 a − α(a) e12`.
pub fn t2_inner() -> Arc<QSignature> {
    let alpha = AlgebraMorphism::inner(t2(), &[q(1), q(1), q(2)]).expect("invertible");
    let delta = SigmaDerivation::inner(alpha.clone(), &[q(0), q(1), q(0)]);
    OreSignature::polynomial("T2[t;inner]", alpha, delta).expect("valid")
}

/// `ℚ[ε][t; α]` with `α(ε) = −ε`.
pub fn dual_negation() -> Arc<QSignature> {
    let alpha = AlgebraMorphism::endo(dual_numbers(), Matrix::from_ints(2, 2, &[1, 0, 0, -1])).expect("2x2");
    OreSignature::polynomial("Q[eps][t;-eps]", alpha.clone(), SigmaDerivation::zero(alpha)).expect("valid")
}

/// `(ℚ×ℚ)[t, t⁻¹; swap]`.
pub fn qq_swap_laurent() -> Arc<QSignature> {
    OreSignature::laurent("QxQ[t,t^-1;swap]", swap(q_times_q())).expect("valid")
}

pub fn signatures() -> Vec<Arc<QSignature>> {
    vec![q_polynomial(), qq_swap(), t2_inner(), dual_negation(), qq_swap_laurent()]
}

/// Right modules over `r` used as test objects: the regular module, the
/// simples, and (when nonzero) the radical of the regular module and the
/// direct sum of the simples.
pub fn test_modules(r: &Arc<QAlgebra>) -> Vec<QModule> {
    let reg = RightModule::regular(r.clone());
    let mut out = vec![reg.clone()];
    let simples = simple_modules(r).expect("catalogue algebras are split");
    out.extend(simples.iter().cloned());
    let rad = crate::algebra::radical(r);
    if rad.cols() > 0 {
        if let Ok((sub, _)) = reg.submodule(&rad) {
            out.push(sub.with_name("rad"));
        }
    }
    if simples.len() > 1 {
        let sum = simples[1..].iter().fold(simples[0].clone(), |acc, s| acc.direct_sum(s));
        out.push(sum.with_name("top"));
    }
    out
}

/// Finite-dimensional modules over the extension: every test module of the
/// base that admits a compatible `t`-action, with the particular solution and
/// (when different) the particular solution plus all homogeneous solutions.
pub fn fixture_modules(sig: &Arc<QSignature>) -> Vec<QOreModule> {
    let mut out = Vec::new();
    for base in test_modules(sig.base()) {
        let Ok(Some((t0, hom))) = compatible_t_actions(sig, &base) else { continue };
        let mut candidates = vec![t0.clone()];
        if !hom.is_empty() {
            candidates.push(hom.iter().fold(t0.clone(), |acc, h| acc.add(h)));
        }
        for t in candidates {
            if let Ok(m) = OreModule::new(sig.clone(), base.clone(), t) {
                out.push(m);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_is_valid() {
        for a in base_algebras() {
            assert!(a.check().passed(), "{}", a.name());
        }
        assert_eq!(signatures().len(), 5);
        let t2 = t2_inner();
        assert!(!t2.delta().is_zero());
        for sig in signatures() {
            let fixtures = fixture_modules(&sig);
            assert!(!fixtures.is_empty(), "{}", sig.name());
            for m in &fixtures {
                assert!(m.check().passed(), "{} / {}", sig.name(), m.base().name());
            }
        }
    }
}

//! Seminorm layer: weighted ℓ¹ norms on the base algebra, truncated
//! holomorphic Ore elements, finitely supported crossed products by ℤ, and
//! exact checks of the continuity estimates for the derivation `D`.
//!
//! Projective tensor seminorms are never computed exactly. `γ` is evaluated
//! on explicit representations `Σ xᵢ ⊗ yᵢ` as `Σ ‖xᵢ‖‖yᵢ‖`, which bounds the
//! true infimum from above. Two representations are tried per normal-form
//! term and the cheaper one is kept: the term itself, and its refinement
//! along a frame of orthogonal basis idempotents `f ⊗ y = Σᵢ f∘eᵢ ⊗ eᵢ y`.
//! The refinement removes the factor `‖1‖` when the unit is not a basis
//! vector (for instance `ℚ×ℚ`).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::algebra::{AlgebraMorphism, FdAlgebra};
use crate::differentials::{d_poly, TensorElement};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ore::{OrePoly, OreSignature};
use crate::random::Rng;
use crate::report::CheckReport;
use crate::scalar::{max_of, powi, Field};

fn is_zero_vec<F: Field>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_zero())
}

fn add_into<F: Field>(acc: &mut Vec<F>, v: &[F]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a = a.clone() + b.clone();
    }
}

/// `(|n|+1)^k` as a field element.
fn weight<F: Field>(n: i64, k: u32) -> F {
    powi(&F::from_int(n.abs() + 1), k as i64)
}

/// A weighted ℓ¹ norm `‖Σ cᵢeᵢ‖ = Σ |cᵢ| wᵢ` on a finite-dimensional algebra.
#[derive(Clone)]
pub struct Seminorm<F> {
    algebra: Arc<FdAlgebra<F>>,
    weights: Vec<F>,
    label: String,
}

impl<F: Field> Seminorm<F> {
    pub fn new(algebra: Arc<FdAlgebra<F>>, weights: Vec<F>, label: impl Into<String>) -> Result<Self> {
        if weights.len() != algebra.dim() {
            return Err(Error::Dimension(format!("{} weights for an algebra of dimension {}", weights.len(), algebra.dim())));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::Invalid(format!("seminorm weight {w} is not positive")));
        }
        Ok(Seminorm { algebra, weights, label: label.into() })
    }

    /// All weights equal to one.
    pub fn uniform(algebra: Arc<FdAlgebra<F>>) -> Self {
        let weights = vec![F::one(); algebra.dim()];
        Seminorm { algebra, weights, label: "l1".into() }
    }

    /// Weight one on idempotent basis vectors and two on the others.
    pub fn idempotent_weighted(algebra: Arc<FdAlgebra<F>>) -> Self {
        let weights = (0..algebra.dim())
            .map(|i| {
                let e = algebra.basis(i);
                if algebra.mul(&e, &e) == e {
                    F::one()
                } else {
                    F::from_int(2)
                }
            })
            .collect();
        Seminorm { algebra, weights, label: "idem".into() }
    }

    /// The family registered for an algebra in the verification suites.
    pub fn family(algebra: &Arc<FdAlgebra<F>>) -> Vec<Self> {
        vec![Self::uniform(algebra.clone()), Self::idempotent_weighted(algebra.clone())]
    }

    pub fn algebra(&self) -> &Arc<FdAlgebra<F>> {
        &self.algebra
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn norm(&self, x: &[F]) -> F {
        x.iter().zip(&self.weights).fold(F::zero(), |acc, (c, w)| acc + c.abs() * w.clone())
    }

    /// `‖f‖_{λ,ρ} = Σ_k ‖a_k‖ ρ^{|k|}`.
    pub fn holo_norm(&self, f: &OrePoly<F>, rho: &F) -> F {
        f.terms().fold(F::zero(), |acc, (k, a)| acc + self.norm(a) * powi(rho, k.abs()))
    }

    /// `‖f‖_{λ,k} = Σ_n ‖f⁽ⁿ⁾‖ (|n|+1)^k`.
    pub fn crossed_norm(&self, f: &CrossedElement<F>, k: u32) -> F {
        f.terms().fold(F::zero(), |acc, (n, r)| acc + self.norm(r) * weight::<F>(n, k))
    }

    /// Exact submultiplicativity test. For a weighted ℓ¹ norm it suffices to
    /// check `‖eᵢeⱼ‖ ≤ wᵢwⱼ` on basis pairs.
    pub fn submultiplicativity_audit(&self) -> CheckReport {
        let mut report = CheckReport::new(format!("submultiplicative {} on {}", self.label, self.algebra.name()));
        let n = self.algebra.dim();
        for i in 0..n {
            for j in 0..n {
                let prod = self.algebra.mul(&self.algebra.basis(i), &self.algebra.basis(j));
                let lhs = self.norm(&prod);
                let rhs = self.weights[i].clone() * self.weights[j].clone();
                report.record(lhs <= rhs, || {
                    format!("‖{} · {}‖ = {lhs} > {rhs}", self.algebra.labels()[i], self.algebra.labels()[j])
                });
            }
        }
        report
    }

    /// Seminorm axioms on random samples: triangle inequality, absolute
    /// homogeneity, positivity.
    pub fn axiom_audit(&self, rng: &mut Rng, trials: usize) -> CheckReport {
        let mut report = CheckReport::new(format!("seminorm axioms {} on {}", self.label, self.algebra.name()));
        for _ in 0..trials {
            let x = rng.element(&self.algebra);
            let y = rng.element(&self.algebra);
            let c: F = rng.scalar();
            let sum = self.algebra.add(&x, &y);
            report.record(self.norm(&sum) <= self.norm(&x) + self.norm(&y), || format!("triangle fails at {x:?}, {y:?}"));
            let scaled: Vec<F> = x.iter().map(|v| c.clone() * v.clone()).collect();
            report.record(self.norm(&scaled) == c.abs() * self.norm(&x), || format!("homogeneity fails at {c}, {x:?}"));
            report.record(is_zero_vec(&x) || self.norm(&x).is_positive(), || format!("positivity fails at {x:?}"));
        }
        report
    }

    /// Submultiplicativity on random pairs.
    pub fn product_audit(&self, rng: &mut Rng, trials: usize) -> CheckReport {
        let mut report = CheckReport::new(format!("random products {} on {}", self.label, self.algebra.name()));
        for _ in 0..trials {
            let x = rng.element(&self.algebra);
            let y = rng.element(&self.algebra);
            let lhs = self.norm(&self.algebra.mul(&x, &y));
            let rhs = self.norm(&x) * self.norm(&y);
            report.record(lhs <= rhs, || format!("‖xy‖ = {lhs} > {rhs} at x = {x:?}, y = {y:?}"));
        }
        report
    }
}

impl<F: Field> fmt::Debug for Seminorm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Seminorm")
            .field("algebra", &self.algebra.name())
            .field("label", &self.label)
            .field("weights", &self.weights)
            .finish()
    }
}

/// Basis indices forming orthogonal idempotents that sum to the unit, when
/// there are at least two of them.
pub fn idempotent_frame<F: Field>(algebra: &FdAlgebra<F>) -> Option<Vec<usize>> {
    let idem: Vec<usize> = (0..algebra.dim())
        .filter(|&i| {
            let e = algebra.basis(i);
            algebra.mul(&e, &e) == e
        })
        .collect();
    if idem.len() < 2 {
        return None;
    }
    for &i in &idem {
        for &j in &idem {
            if i != j && !is_zero_vec(&algebra.mul(&algebra.basis(i), &algebra.basis(j))) {
                return None;
            }
        }
    }
    let mut sum = algebra.zero();
    for &i in &idem {
        add_into(&mut sum, &algebra.basis(i));
    }
    (sum == algebra.unit()).then_some(idem)
}

/// `‖C‖` for the operator norm induced by `s`: the largest `‖op(eᵢ)‖/‖eᵢ‖`.
/// This is exact for weighted ℓ¹ norms.
pub fn localizability_constant<F: Field>(op: &Matrix<F>, s: &Seminorm<F>) -> Result<F> {
    let n = s.algebra.dim();
    if op.shape() != (n, n) {
        return Err(Error::Dimension(format!("operator of shape {:?} on an algebra of dimension {n}", op.shape())));
    }
    Ok((0..n).fold(F::zero(), |acc, i| max_of(&acc, &(s.norm(&op.column(i)) / s.weights[i].clone()))))
}

/// One side-by-side comparison `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate<F> {
    pub case: String,
    /// The degree or support index of the term, `None` for whole elements.
    pub index: Option<i64>,
    pub lhs: F,
    pub rhs: F,
}

impl<F: Field> Estimate<F> {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

impl<F: Field> fmt::Display for Estimate<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(n) => write!(f, "{} [n={n}]: {} <= {}", self.case, self.lhs, self.rhs),
            None => write!(f, "{}: {} <= {}", self.case, self.lhs, self.rhs),
        }
    }
}

pub fn estimates_report<F: Field>(name: impl Into<String>, estimates: &[Estimate<F>]) -> CheckReport {
    let mut report = CheckReport::new(name);
    for e in estimates {
        report.record(e.holds(), || format!("violated: {e}"));
    }
    report
}

/// A skew polynomial truncated at degree `d` (and `-d` in the Laurent case),
/// standing in for an element of the holomorphic completion.
#[derive(Clone, Debug, PartialEq)]
pub struct HoloElement<F: Field> {
    poly: OrePoly<F>,
    truncation: i64,
}

impl<F: Field> HoloElement<F> {
    pub fn new(poly: OrePoly<F>, truncation: i64) -> Result<Self> {
        let lo = if poly.signature().kind().is_laurent() { -truncation } else { 0 };
        if let Some(k) = poly.terms().map(|(k, _)| k).find(|&k| k < lo || k > truncation) {
            return Err(Error::Invalid(format!("degree {k} outside the truncation window [{lo}, {truncation}]")));
        }
        Ok(HoloElement { poly, truncation })
    }

    pub fn random(rng: &mut Rng, sig: &Arc<OreSignature<F>>, truncation: i64) -> Self {
        let poly = if sig.kind().is_laurent() {
            rng.ore_poly_in(sig, -truncation, truncation)
        } else {
            rng.ore_poly(sig, truncation)
        };
        HoloElement { poly, truncation }
    }

    pub fn poly(&self) -> &OrePoly<F> {
        &self.poly
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn norm(&self, s: &Seminorm<F>, rho: &F) -> F {
        s.holo_norm(&self.poly, rho)
    }
}

/// `D(f)` in normal form. Degrees stay inside the truncation window.
pub fn holo_d<F: Field>(f: &HoloElement<F>) -> Result<TensorElement<F>> {
    d_poly(&f.poly)
}

/// The pieces of a tensor needed to bound `γ`: each normal-form term
/// `f_j ⊗ t^j` together with the left factors `f_j∘eᵢ` of its idempotent
/// refinement. They do not depend on the seminorms, so one table serves a
/// whole grid of `(λ, ρ)`.
#[derive(Clone, Debug)]
pub struct GammaTable<F: Field> {
    rows: Vec<(i64, OrePoly<F>, Vec<(usize, OrePoly<F>)>)>,
}

impl<F: Field> GammaTable<F> {
    pub fn new(x: &TensorElement<F>) -> Result<Self> {
        let sig = x.signature();
        let r = sig.base();
        let frame = idempotent_frame(r).unwrap_or_default();
        let mut rows = Vec::new();
        for (&j, f) in x.coeffs() {
            let mut refined = Vec::new();
            for &i in &frame {
                let e = r.basis(i);
                let moved = if x.is_twisted() { sig.alpha().apply(&e) } else { e };
                refined.push((i, f.mul(&OrePoly::constant(sig, &moved))?));
            }
            rows.push((j, f.clone(), refined));
        }
        Ok(GammaTable { rows })
    }

    /// Termwise minimum over the two representations.
    pub fn eval(&self, s1: &Seminorm<F>, rho1: &F, s2: &Seminorm<F>, rho2: &F) -> F {
        let unit_norm = s2.norm(s2.algebra.unit());
        let mut total = F::zero();
        for (j, f, refined) in &self.rows {
            let mut cost = s1.holo_norm(f, rho1) * unit_norm.clone();
            if !refined.is_empty() {
                let alt = refined
                    .iter()
                    .fold(F::zero(), |acc, (i, fe)| acc + s1.holo_norm(fe, rho1) * s2.weights[*i].clone());
                if alt < cost {
                    cost = alt;
                }
            }
            total = total + cost * powi(rho2, j.abs());
        }
        total
    }
}

/// Upper bound for `γ_{λ₁,ρ₁;λ₂,ρ₂}(x)` from the normal form of `x` and its
/// idempotent refinement, chosen termwise.
pub fn holo_gamma<F: Field>(x: &TensorElement<F>, s1: &Seminorm<F>, rho1: &F, s2: &Seminorm<F>, rho2: &F) -> Result<F> {
    Ok(GammaTable::new(x)?.eval(s1, rho1, s2, rho2))
}

/// The radius on the right-hand side: `2max{ρ₁,ρ₂,1}` for polynomial kinds
/// and `2(ρ₁+ρ₂+1)` for Laurent kinds.
pub fn holo_radius<F: Field>(laurent: bool, rho1: &F, rho2: &F) -> F {
    let two = F::from_int(2);
    if laurent {
        two * (rho1.clone() + rho2.clone() + F::one())
    } else {
        two * max_of(&max_of(rho1, rho2), &F::one())
    }
}

/// Precomputed data for checking the estimates of one element over a grid
/// of seminorms and radii.
#[derive(Clone, Debug)]
pub struct HoloEstimator<F: Field> {
    element: HoloElement<F>,
    terms: Vec<(i64, OrePoly<F>, GammaTable<F>)>,
    total: GammaTable<F>,
}

impl<F: Field> HoloEstimator<F> {
    pub fn new(f: &HoloElement<F>) -> Result<Self> {
        let sig = f.poly.signature();
        let mut terms = Vec::new();
        for (k, a) in f.poly.terms() {
            let term = OrePoly::monomial(sig, a, k)?;
            let table = GammaTable::new(&d_poly(&term)?)?;
            terms.push((k, term, table));
        }
        Ok(HoloEstimator { element: f.clone(), terms, total: GammaTable::new(&holo_d(f)?)? })
    }

    /// Checks `γ(D(a_k t^k)) ≤ ‖a_k t^k‖_{λ₁,R}` for every term and
    /// `γ(D(f)) ≤ ‖f‖_{λ₁,R}` for the whole element.
    pub fn estimates(&self, s1: &Seminorm<F>, s2: &Seminorm<F>, rho1: &F, rho2: &F) -> Vec<Estimate<F>> {
        let sig = self.element.poly.signature();
        let radius = holo_radius(sig.kind().is_laurent(), rho1, rho2);
        let case = format!("{} {}/{} rho=({rho1},{rho2})", sig.name(), s1.label, s2.label);
        let mut out: Vec<Estimate<F>> = self
            .terms
            .iter()
            .map(|(k, term, table)| Estimate {
                case: case.clone(),
                index: Some(*k),
                lhs: table.eval(s1, rho1, s2, rho2),
                rhs: s1.holo_norm(term, &radius),
            })
            .collect();
        out.push(Estimate {
            case,
            index: None,
            lhs: self.total.eval(s1, rho1, s2, rho2),
            rhs: self.element.norm(s1, &radius),
        });
        out
    }
}

/// Checks `γ(D(a_k t^k)) ≤ ‖a_k t^k‖_{λ₁,R}` for every term and
/// `γ(D(f)) ≤ ‖f‖_{λ₁,R}` for the whole element.
pub fn verify_holo_estimate<F: Field>(f: &HoloElement<F>, s1: &Seminorm<F>, s2: &Seminorm<F>, rho1: &F, rho2: &F) -> Result<Vec<Estimate<F>>> {
    Ok(HoloEstimator::new(f)?.estimates(s1, s2, rho1, rho2))
}

/// A `ℤ`-action on `R` given by its generator, with a bound `p` to test
/// temperedness against. Powers are memoized behind a lock, so concurrent
/// readers always see complete entries.
pub struct TemperedAction<F> {
    alpha1: AlgebraMorphism<F>,
    inverse: Matrix<F>,
    poly: Vec<F>,
    check_range: usize,
    powers: Mutex<BTreeMap<i64, Arc<Matrix<F>>>>,
}

pub const DEFAULT_CHECK_RANGE: usize = 32;

impl<F: Field> TemperedAction<F> {
    pub fn new(alpha1: AlgebraMorphism<F>, poly: Vec<F>, check_range: usize) -> Result<Self> {
        if alpha1.source().dim() != alpha1.target().dim() {
            return Err(Error::Invalid("the generator must be an endomorphism".into()));
        }
        let inverse = alpha1.matrix().inverse().ok_or(Error::NotInvertible)?;
        let n = alpha1.source().dim();
        let mut powers = BTreeMap::new();
        powers.insert(0, Arc::new(Matrix::identity(n)));
        Ok(TemperedAction { alpha1, inverse, poly, check_range, powers: Mutex::new(powers) })
    }

    pub fn algebra(&self) -> &Arc<FdAlgebra<F>> {
        self.alpha1.source()
    }

    pub fn generator(&self) -> &AlgebraMorphism<F> {
        &self.alpha1
    }

    pub fn poly(&self) -> &[F] {
        &self.poly
    }

    pub fn check_range(&self) -> usize {
        self.check_range
    }

    /// The matrix of `α_n = α₁ⁿ`.
    pub fn power(&self, n: i64) -> Arc<Matrix<F>> {
        let mut memo = self.powers.lock().expect("power memo poisoned");
        if let Some(m) = memo.get(&n) {
            return m.clone();
        }
        let step = n.signum();
        let gen = if step > 0 { self.alpha1.matrix() } else { &self.inverse };
        let mut k = step;
        let mut current = memo[&0].clone();
        while k.abs() <= n.abs() {
            current = match memo.get(&k) {
                Some(m) => m.clone(),
                None => {
                    let next = Arc::new(gen.mul(&current));
                    memo.insert(k, next.clone());
                    next
                }
            };
            k += step;
        }
        current
    }

    pub fn apply(&self, n: i64, r: &[F]) -> Vec<F> {
        self.power(n).mul_vec(r)
    }

    /// `|p(n)|`.
    pub fn bound(&self, n: i64) -> F {
        let x = F::from_int(n);
        self.poly.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone()).abs()
    }
}

impl<F: Field> Clone for TemperedAction<F> {
    fn clone(&self) -> Self {
        let powers = self.powers.lock().expect("power memo poisoned").clone();
        TemperedAction {
            alpha1: self.alpha1.clone(),
            inverse: self.inverse.clone(),
            poly: self.poly.clone(),
            check_range: self.check_range,
            powers: Mutex::new(powers),
        }
    }
}

impl<F: Field> fmt::Debug for TemperedAction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TemperedAction")
            .field("algebra", &self.algebra().name())
            .field("alpha1", self.alpha1.matrix())
            .field("poly", &self.poly)
            .field("check_range", &self.check_range)
            .finish()
    }
}

/// Largest monomial degree tried when suggesting a bound.
pub const MAX_SUGGESTED_DEGREE: u32 = 4;

#[derive(Clone, Debug)]
pub struct TemperedReport<F> {
    pub report: CheckReport,
    /// `(m, C)` with `C` the least constant such that
    /// `‖α_n(eᵢ)‖ ≤ C(|n|+1)^m ‖eᵢ‖` on the checked range.
    pub constants: Vec<(u32, F)>,
    /// The first `(m, C)` whose constant is already attained on the first
    /// half of the range. Exponential growth never stabilizes this way.
    pub suggestion: Option<(u32, F)>,
}

/// Verifies `‖α_n(eᵢ)‖_λ ≤ |p(n)| ‖eᵢ‖_λ` for `|n| ≤ check_range`.
pub fn check_tempered<F: Field>(act: &TemperedAction<F>, family: &[Seminorm<F>]) -> TemperedReport<F> {
    let mut report = CheckReport::new(format!("tempered action on {}", act.algebra().name()));
    let range = act.check_range as i64;
    let half = range / 2;
    let mut full = vec![F::zero(); MAX_SUGGESTED_DEGREE as usize + 1];
    let mut early = full.clone();
    for s in family {
        for n in -range..=range {
            let p = act.bound(n);
            for i in 0..act.algebra().dim() {
                let e = act.algebra().basis(i);
                let lhs = s.norm(&act.apply(n, &e));
                let norm = s.weights[i].clone();
                report.record(lhs <= p.clone() * norm.clone(), || {
                    format!("{}: ‖α_{n}({})‖ = {lhs} > |p({n})|·{norm}", s.label, act.algebra().labels()[i])
                });
                for m in 0..=MAX_SUGGESTED_DEGREE {
                    let ratio = lhs.clone() / (norm.clone() * weight::<F>(n, m));
                    full[m as usize] = max_of(&full[m as usize], &ratio);
                    if n.abs() <= half {
                        early[m as usize] = max_of(&early[m as usize], &ratio);
                    }
                }
            }
        }
    }
    let constants: Vec<(u32, F)> = (0..=MAX_SUGGESTED_DEGREE).zip(full.iter().cloned()).collect();
    let suggestion = constants.iter().find(|(m, c)| *c == early[*m as usize]).cloned();
    TemperedReport { report, constants, suggestion }
}

/// A finitely supported function `ℤ → R`, written `Σ f⁽ⁿ⁾ eₙ`.
#[derive(Clone, PartialEq)]
pub struct CrossedElement<F> {
    base: Arc<FdAlgebra<F>>,
    support: BTreeMap<i64, Vec<F>>,
}

impl<F: Field> CrossedElement<F> {
    pub fn new(base: Arc<FdAlgebra<F>>, support: BTreeMap<i64, Vec<F>>) -> Result<Self> {
        if let Some((n, v)) = support.iter().find(|(_, v)| v.len() != base.dim()) {
            return Err(Error::Dimension(format!("coefficient at e_{n} has length {}, expected {}", v.len(), base.dim())));
        }
        let support = support.into_iter().filter(|(_, v)| !is_zero_vec(v)).collect();
        Ok(CrossedElement { base, support })
    }

    pub fn zero(base: &Arc<FdAlgebra<F>>) -> Self {
        CrossedElement { base: base.clone(), support: BTreeMap::new() }
    }

    pub fn monomial(base: &Arc<FdAlgebra<F>>, r: &[F], n: i64) -> Self {
        let mut out = Self::zero(base);
        out.push(n, r);
        out
    }

    pub fn one(base: &Arc<FdAlgebra<F>>) -> Self {
        Self::monomial(base, base.unit(), 0)
    }

    /// Random coefficients on a random subset of `[-radius, radius]`.
    pub fn random(rng: &mut Rng, base: &Arc<FdAlgebra<F>>, radius: i64) -> Self {
        let mut out = Self::zero(base);
        for n in -radius..=radius {
            if rng.coin() {
                out.push(n, &rng.element(base));
            }
        }
        out
    }

    fn push(&mut self, n: i64, r: &[F]) {
        let entry = self.support.entry(n).or_insert_with(|| vec![F::zero(); r.len()]);
        add_into(entry, r);
        if is_zero_vec(entry) {
            self.support.remove(&n);
        }
    }

    pub fn base(&self) -> &Arc<FdAlgebra<F>> {
        &self.base
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Vec<F>)> {
        self.support.iter().map(|(n, v)| (*n, v))
    }

    pub fn coeff(&self, n: i64) -> Vec<F> {
        self.support.get(&n).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, r) in other.terms() {
            out.push(n, r);
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(&self.base);
        for (n, r) in self.terms() {
            out.push(n, &r.iter().map(|x| c.clone() * x.clone()).collect::<Vec<_>>());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }
}

impl<F: Field> fmt::Display for CrossedElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms().map(|(n, r)| format!("({}) e_{n}", self.base.format_element(r))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Field> fmt::Debug for CrossedElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CrossedElement({self})")
    }
}

/// `(f * g)(x) = Σ_y f(y) α_y(g(x − y))`.
pub fn convolve<F: Field>(f: &CrossedElement<F>, g: &CrossedElement<F>, act: &TemperedAction<F>) -> CrossedElement<F> {
    let r = &f.base;
    let mut out = CrossedElement::zero(r);
    for (m, a) in f.terms() {
        for (n, b) in g.terms() {
            out.push(m + n, &r.mul(a, &act.apply(m, b)));
        }
    }
    out
}

/// `(f *′ g)(x) = Σ_y α_{−y}(f(x − y)) g(y)`.
pub fn convolve_opposite<F: Field>(f: &CrossedElement<F>, g: &CrossedElement<F>, act: &TemperedAction<F>) -> CrossedElement<F> {
    let r = &f.base;
    let mut out = CrossedElement::zero(r);
    for (m, a) in f.terms() {
        for (n, b) in g.terms() {
            out.push(m + n, &r.mul(&act.apply(-n, a), b));
        }
    }
    out
}

/// `i(f)⁽ⁿ⁾ = α_{−n}(f⁽ⁿ⁾)`.
pub fn iso_i<F: Field>(f: &CrossedElement<F>, act: &TemperedAction<F>) -> CrossedElement<F> {
    let mut out = CrossedElement::zero(&f.base);
    for (n, r) in f.terms() {
        out.push(n, &act.apply(-n, r));
    }
    out
}

/// `i⁻¹(f)⁽ⁿ⁾ = α_n(f⁽ⁿ⁾)`.
pub fn iso_i_inverse<F: Field>(f: &CrossedElement<F>, act: &TemperedAction<F>) -> CrossedElement<F> {
    let mut out = CrossedElement::zero(&f.base);
    for (n, r) in f.terms() {
        out.push(n, &act.apply(n, r));
    }
    out
}

/// `Σ r_{k,m} e_k ⊗ e_m`, keyed by `(k, m)`.
pub type CrossedTensor<F> = BTreeMap<(i64, i64), Vec<F>>;

/// `D(reₙ) = Σ_{k<n} re_k ⊗ e_{n−k−1}` for `n ≥ 0` and
/// `−Σ_{k=1}^{|n|} re_{−k} ⊗ e_{n+k−1}` for `n < 0`.
pub fn crossed_d<F: Field>(f: &CrossedElement<F>) -> CrossedTensor<F> {
    let mut out: CrossedTensor<F> = BTreeMap::new();
    let mut push = |key: (i64, i64), r: Vec<F>| {
        let entry = out.entry(key).or_insert_with(|| vec![F::zero(); r.len()]);
        add_into(entry, &r);
        if is_zero_vec(entry) {
            out.remove(&key);
        }
    };
    for (n, r) in f.terms() {
        if n > 0 {
            for k in 0..n {
                push((k, n - k - 1), r.clone());
            }
        } else {
            for k in 1..=-n {
                push((-k, n + k - 1), r.iter().map(|x| -x.clone()).collect());
            }
        }
    }
    out
}

/// Upper bound for `γ_{λ₁,k₁;λ₂,k₂}(x)`, refining along idempotents as in
/// [`holo_gamma`]. The right action on the left factor is twisted by `α₁`,
/// so `re_k ∘ e = r α_{k+1}(e) e_k`.
pub fn crossed_gamma<F: Field>(x: &CrossedTensor<F>, act: &TemperedAction<F>, s1: &Seminorm<F>, k1: u32, s2: &Seminorm<F>, k2: u32) -> F {
    let r = act.algebra();
    let unit_norm = s2.norm(r.unit());
    let frame = idempotent_frame(r);
    let mut total = F::zero();
    for (&(k, m), coeff) in x {
        let mut cost = s1.norm(coeff) * unit_norm.clone();
        if let Some(frame) = &frame {
            let refined = frame.iter().fold(F::zero(), |acc, &i| {
                acc + s1.norm(&r.mul(coeff, &act.apply(k + 1, &r.basis(i)))) * s2.weights[i].clone()
            });
            if refined < cost {
                cost = refined;
            }
        }
        total = total + cost * weight::<F>(k, k1) * weight::<F>(m, k2);
    }
    total
}

/// Per term: `γ(D(reₙ)) ≤ ‖reₙ‖_{λ₁,2K+1}` for `n ≥ 1` and
/// `≤ 2‖reₙ‖_{λ₁,4K+1}` for `n < 0`, with `K = max{k₁,k₂}`. For the whole
/// element: `γ(Df) ≤ 2‖f‖_{λ₁,4K+1}`.
pub fn verify_crossed_estimate<F: Field>(
    f: &CrossedElement<F>,
    act: &TemperedAction<F>,
    s1: &Seminorm<F>,
    s2: &Seminorm<F>,
    k1: u32,
    k2: u32,
) -> Vec<Estimate<F>> {
    let big = k1.max(k2);
    let two = F::from_int(2);
    let case = format!("{} {}/{} k=({k1},{k2})", f.base.name(), s1.label, s2.label);
    let mut out = Vec::new();
    for (n, r) in f.terms() {
        let term = CrossedElement::monomial(&f.base, r, n);
        let lhs = crossed_gamma(&crossed_d(&term), act, s1, k1, s2, k2);
        let rhs = if n >= 0 {
            s1.crossed_norm(&term, 2 * big + 1)
        } else {
            two.clone() * s1.crossed_norm(&term, 4 * big + 1)
        };
        out.push(Estimate { case: case.clone(), index: Some(n), lhs, rhs });
    }
    out.push(Estimate {
        case,
        index: None,
        lhs: crossed_gamma(&crossed_d(f), act, s1, k1, s2, k2),
        rhs: two * s1.crossed_norm(f, 4 * big + 1),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;
    use crate::{QAlgebra, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn qi(n: i64) -> Rational {
        q(n, 1)
    }

    fn rho_grid() -> Vec<Rational> {
        vec![q(1, 2), qi(1), qi(2)]
    }

    fn swap_action(range: usize) -> TemperedAction<Rational> {
        let r = catalogue::q_times_q();
        let alpha = AlgebraMorphism::endo(r, Matrix::from_ints(2, 2, &[0, 1, 1, 0])).unwrap();
        TemperedAction::new(alpha, vec![qi(1)], range).unwrap()
    }

    fn dual_action(eigen: i64, poly: Vec<Rational>) -> TemperedAction<Rational> {
        let r = catalogue::dual_numbers();
        let alpha = AlgebraMorphism::endo(r, Matrix::from_ints(2, 2, &[1, 0, 0, eigen])).unwrap();
        TemperedAction::new(alpha, poly, DEFAULT_CHECK_RANGE).unwrap()
    }

    fn identity_action(r: Arc<QAlgebra>) -> TemperedAction<Rational> {
        TemperedAction::new(AlgebraMorphism::identity(r), vec![qi(1)], DEFAULT_CHECK_RANGE).unwrap()
    }

    fn crossed_actions() -> Vec<TemperedAction<Rational>> {
        vec![identity_action(catalogue::rationals()), swap_action(DEFAULT_CHECK_RANGE), dual_action(-1, vec![qi(1)])]
    }

    #[test]
    fn rejects_nonpositive_weights() {
        assert!(Seminorm::new(catalogue::q_times_q(), vec![qi(1), qi(0)], "bad").is_err());
        assert!(Seminorm::new(catalogue::q_times_q(), vec![qi(1)], "bad").is_err());
    }

    #[test]
    fn localizability_examples() {
        let r = catalogue::q_times_q();
        let s = Seminorm::uniform(r.clone());
        assert_eq!(localizability_constant(&Matrix::identity(2), &s).unwrap(), qi(1));
        assert_eq!(localizability_constant(&Matrix::from_ints(2, 2, &[0, 1, 1, 0]), &s).unwrap(), qi(1));
        assert_eq!(localizability_constant(&Matrix::from_ints(2, 2, &[2, 0, 0, 1]), &s).unwrap(), qi(2));
        // Unequal weights: swap sends e1 (weight 1) to e2 (weight 3).
        let w = Seminorm::new(r, vec![qi(1), qi(3)], "w").unwrap();
        assert_eq!(localizability_constant(&Matrix::from_ints(2, 2, &[0, 1, 1, 0]), &w).unwrap(), qi(3));
    }

    #[test]
    fn catalogue_families_are_submultiplicative() {
        let mut rng = Rng::new(11);
        for r in catalogue::base_algebras() {
            for s in Seminorm::family(&r) {
                assert!(s.submultiplicativity_audit().passed(), "{s:?}");
                assert!(s.product_audit(&mut rng, 50).passed());
                assert!(s.axiom_audit(&mut rng, 50).passed());
            }
        }
    }

    #[test]
    fn audit_reports_violations() {
        let s = Seminorm::new(catalogue::rationals(), vec![q(1, 2)], "half").unwrap();
        let report = s.submultiplicativity_audit();
        assert!(!report.passed());
        assert!(report.first_witness().unwrap().contains("1/2 > 1/4"));
    }

    #[test]
    fn idempotent_frames() {
        assert_eq!(idempotent_frame(&catalogue::rationals()), None);
        assert_eq!(idempotent_frame(&catalogue::q_times_q()), Some(vec![0, 1]));
        assert_eq!(idempotent_frame(&catalogue::t2()), Some(vec![0, 2]));
        assert_eq!(idempotent_frame(&catalogue::dual_numbers()), None);
    }

    #[test]
    fn holo_d_inherits_d_poly_examples() {
        let sig = catalogue::q_polynomial();
        let one = HoloElement::new(OrePoly::one(&sig), 6).unwrap();
        assert!(holo_d(&one).unwrap().is_zero());
        let t = HoloElement::new(OrePoly::t(&sig), 6).unwrap();
        assert_eq!(holo_d(&t).unwrap(), TensorElement::simple(OrePoly::one(&sig), 0, true));
        let t6 = HoloElement::new(OrePoly::t_power(&sig, 6).unwrap(), 6).unwrap();
        let d = holo_d(&t6).unwrap();
        assert_eq!(d.coeffs().len(), 6);
        for (j, f) in d.coeffs() {
            assert_eq!(*f, OrePoly::t_power(&sig, 5 - j).unwrap());
        }
        assert!(HoloElement::new(OrePoly::t_power(&sig, 7).unwrap(), 6).is_err());
    }

    #[test]
    fn gamma_of_d_t_power_matches_closed_sum() {
        let sig = catalogue::q_polynomial();
        let s = Seminorm::uniform(sig.base().clone());
        for rho1 in rho_grid() {
            for rho2 in rho_grid() {
                for n in 1..=8 {
                    let f = HoloElement::new(OrePoly::t_power(&sig, n).unwrap(), 12).unwrap();
                    let gamma = holo_gamma(&holo_d(&f).unwrap(), &s, &rho1, &s, &rho2).unwrap();
                    let closed = (0..n).fold(qi(0), |acc, l| acc + powi(&rho1, l) * powi(&rho2, n - l - 1));
                    assert_eq!(gamma, closed);
                    let radius = holo_radius(false, &rho1, &rho2);
                    assert!(closed <= powi(&radius, n));
                }
            }
        }
    }

    #[test]
    fn refinement_removes_the_unit_norm() {
        // In ℚ×ℚ, ‖1‖ = 2 but e1 ⊗ 1 = e1∘e1 ⊗ e1 + e1∘e2 ⊗ e2 costs 1.
        let sig = catalogue::qq_swap();
        let s = Seminorm::uniform(sig.base().clone());
        let x = TensorElement::simple(OrePoly::constant(&sig, &[qi(1), qi(0)]), 0, true);
        assert_eq!(holo_gamma(&x, &s, &qi(1), &s, &qi(1)).unwrap(), qi(1));
    }

    #[test]
    fn holo_estimates_hold_on_random_samples() {
        let mut rng = Rng::new(7);
        for sig in catalogue::signatures() {
            let family = Seminorm::family(sig.base());
            for _ in 0..4 {
                let f = HoloElement::random(&mut rng, &sig, 12);
                let est = HoloEstimator::new(&f).unwrap();
                for s1 in &family {
                    for s2 in &family {
                        for rho1 in rho_grid() {
                            for rho2 in rho_grid() {
                                for e in est.estimates(s1, s2, &rho1, &rho2) {
                                    assert!(e.holds(), "{e}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn laurent_negative_term() {
        // D(t^{-1}) = -t^{-1} ⊗ t^{-1}: γ = ‖1‖ρ₁ρ₂ with the |k| convention.
        let sig = catalogue::qq_swap_laurent();
        let s = Seminorm::uniform(sig.base().clone());
        let f = HoloElement::new(OrePoly::t_power(&sig, -1).unwrap(), 3).unwrap();
        let gamma = holo_gamma(&holo_d(&f).unwrap(), &s, &q(1, 2), &s, &qi(2)).unwrap();
        assert_eq!(gamma, qi(2));
        let rows = verify_holo_estimate(&f, &s, &s, &q(1, 2), &qi(2)).unwrap();
        assert!(rows.iter().all(Estimate::holds));
        // ‖t^{-1}‖ = ‖1‖·R = 2·7.
        assert_eq!(rows.last().unwrap().rhs, qi(14));
    }

    #[test]
    fn single_term_products() {
        let act = swap_action(8);
        let r = act.algebra().clone();
        let a = vec![qi(2), qi(3)];
        let b = vec![qi(5), qi(-1)];
        for (m, n) in [(0, 0), (1, 2), (-3, 1), (2, -5)] {
            let f = CrossedElement::monomial(&r, &a, m);
            let g = CrossedElement::monomial(&r, &b, n);
            // α_m(s) swaps coordinates when m is odd.
            let am = if m % 2 == 0 { b.clone() } else { vec![b[1].clone(), b[0].clone()] };
            let expected = CrossedElement::monomial(&r, &r.mul(&a, &am), m + n);
            assert_eq!(convolve(&f, &g, &act), expected);
            let an = if n % 2 == 0 { a.clone() } else { vec![a[1].clone(), a[0].clone()] };
            let expected = CrossedElement::monomial(&r, &r.mul(&an, &b), m + n);
            assert_eq!(convolve_opposite(&f, &g, &act), expected);
        }
    }

    /// `((f*g)*h)(x) = Σ_{a+b+c=x} f(a) α_a(g(b)) α_{a+b}(h(c))`.
    fn triple_product(f: &CrossedElement<Rational>, g: &CrossedElement<Rational>, h: &CrossedElement<Rational>, act: &TemperedAction<Rational>) -> CrossedElement<Rational> {
        let r = f.base();
        let mut out = CrossedElement::zero(r);
        for (a, x) in f.terms() {
            for (b, y) in g.terms() {
                for (c, z) in h.terms() {
                    let v = r.mul(&r.mul(x, &act.apply(a, y)), &act.apply(a + b, z));
                    out = out.add(&CrossedElement::monomial(r, &v, a + b + c));
                }
            }
        }
        out
    }

    /// `((f*′g)*′h)(x) = Σ α_{−b−c}(f(a)) α_{−c}(g(b)) h(c)`.
    fn triple_opposite(f: &CrossedElement<Rational>, g: &CrossedElement<Rational>, h: &CrossedElement<Rational>, act: &TemperedAction<Rational>) -> CrossedElement<Rational> {
        let r = f.base();
        let mut out = CrossedElement::zero(r);
        for (a, x) in f.terms() {
            for (b, y) in g.terms() {
                for (c, z) in h.terms() {
                    let v = r.mul(&r.mul(&act.apply(-b - c, x), &act.apply(-c, y)), z);
                    out = out.add(&CrossedElement::monomial(r, &v, a + b + c));
                }
            }
        }
        out
    }

    #[test]
    fn convolution_associative_with_unit() {
        let mut rng = Rng::new(3);
        let t2 = catalogue::t2();
        let inner = AlgebraMorphism::inner(t2, &[qi(1), qi(1), qi(2)]).unwrap();
        let mut actions = crossed_actions();
        actions.push(TemperedAction::new(inner, vec![qi(1)], 8).unwrap());
        for act in &actions {
            let r = act.algebra().clone();
            let one = CrossedElement::one(&r);
            for _ in 0..5 {
                let f = CrossedElement::random(&mut rng, &r, 3);
                let g = CrossedElement::random(&mut rng, &r, 3);
                let h = CrossedElement::random(&mut rng, &r, 3);
                assert_eq!(convolve(&f, &one, act), f);
                assert_eq!(convolve(&one, &f, act), f);
                assert_eq!(convolve_opposite(&f, &one, act), f);
                assert_eq!(convolve_opposite(&one, &f, act), f);
                let fg = convolve(&f, &g, act);
                assert_eq!(convolve(&fg, &h, act), triple_product(&f, &g, &h, act));
                assert_eq!(convolve(&f, &convolve(&g, &h, act), act), convolve(&fg, &h, act));
                let fg = convolve_opposite(&f, &g, act);
                assert_eq!(convolve_opposite(&fg, &h, act), triple_opposite(&f, &g, &h, act));
                assert_eq!(convolve_opposite(&f, &convolve_opposite(&g, &h, act), act), convolve_opposite(&fg, &h, act));
                let i = iso_i(&f, act);
                assert_eq!(iso_i_inverse(&i, act), f);
                assert_eq!(iso_i(&convolve(&f, &g, act), act), convolve_opposite(&i, &iso_i(&g, act), act));
            }
        }
    }

    #[test]
    fn iso_i_examples() {
        let act = swap_action(8);
        let r = act.algebra().clone();
        let a = vec![qi(2), qi(3)];
        let f0 = CrossedElement::monomial(&r, &a, 0);
        assert_eq!(iso_i(&f0, &act), f0);
        let f = CrossedElement::monomial(&r, &a, -3);
        assert_eq!(iso_i(&f, &act), CrossedElement::monomial(&r, &[qi(3), qi(2)], -3));
    }

    #[test]
    fn crossed_d_examples() {
        let r = catalogue::q_times_q();
        let a = vec![qi(2), qi(3)];
        assert!(crossed_d(&CrossedElement::one(&r)).is_empty());
        let d2 = crossed_d(&CrossedElement::monomial(&r, &a, 2));
        assert_eq!(d2, BTreeMap::from([((0, 1), a.clone()), ((1, 0), a.clone())]));
        let dm1 = crossed_d(&CrossedElement::monomial(&r, &a, -1));
        assert_eq!(dm1, BTreeMap::from([((-1, -1), vec![qi(-2), qi(-3)])]));
    }

    #[test]
    fn crossed_unit_term() {
        // γ(D(re₁)) = γ(r e₀ ⊗ e₀) = ‖r‖ against ‖r‖·2^{2K+1}.
        let act = swap_action(8);
        let r = act.algebra().clone();
        let s = Seminorm::uniform(r.clone());
        let f = CrossedElement::monomial(&r, &[qi(2), qi(-3)], 1);
        for k in 0..4 {
            let rows = verify_crossed_estimate(&f, &act, &s, &s, k, k);
            assert_eq!(rows[0].lhs, qi(5));
            assert_eq!(rows[0].rhs, qi(5) * powi(&qi(2), 2 * k as i64 + 1));
        }
    }

    #[test]
    fn crossed_estimates_hold_on_random_samples() {
        let mut rng = Rng::new(5);
        for act in crossed_actions() {
            let r = act.algebra().clone();
            let family = Seminorm::family(&r);
            for _ in 0..4 {
                let f = CrossedElement::random(&mut rng, &r, 8);
                for s1 in &family {
                    for s2 in &family {
                        for k1 in 0..4 {
                            for k2 in 0..4 {
                                for e in verify_crossed_estimate(&f, &act, s1, s2, k1, k2) {
                                    assert!(e.holds(), "{e}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tempered_identity_and_finite_order() {
        let id = identity_action(catalogue::t2());
        let rep = check_tempered(&id, &Seminorm::family(id.algebra()));
        assert!(rep.report.passed());
        assert_eq!(rep.suggestion, Some((0, qi(1))));

        let swap = swap_action(DEFAULT_CHECK_RANGE);
        let w = Seminorm::new(swap.algebra().clone(), vec![qi(1), qi(3)], "w").unwrap();
        let family = vec![Seminorm::uniform(swap.algebra().clone()), w];
        assert!(check_tempered(&swap, &family[..1]).report.passed());
        // With p = 1 the weighted norm fails; the orbit maximum is 3.
        let rep = check_tempered(&swap, &family);
        assert!(!rep.report.passed());
        assert_eq!(rep.suggestion, Some((0, qi(3))));
        let fixed = TemperedAction::new(swap.generator().clone(), vec![qi(3)], DEFAULT_CHECK_RANGE).unwrap();
        assert!(check_tempered(&fixed, &family).report.passed());
    }

    #[test]
    fn eigenvalue_two_is_not_tempered() {
        let act = dual_action(2, vec![qi(1), qi(0), qi(1)]);
        let rep = check_tempered(&act, &Seminorm::family(act.algebra()));
        assert!(!rep.report.passed());
        assert_eq!(rep.suggestion, None);
        assert_eq!(rep.constants[0].1, powi(&qi(2), DEFAULT_CHECK_RANGE as i64));
    }

    #[test]
    fn powers_are_consistent() {
        let act = dual_action(2, vec![qi(1)]);
        let e = vec![qi(0), qi(1)];
        assert_eq!(act.apply(5, &e), vec![qi(0), qi(32)]);
        assert_eq!(act.apply(-3, &e), vec![qi(0), q(1, 8)]);
        assert_eq!(act.apply(2, &e), vec![qi(0), qi(4)]);
        let shared = Arc::new(act);
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let a = shared.clone();
                std::thread::spawn(move || a.apply(6 - t, &[qi(0), qi(1)]))
            })
            .collect();
        for (t, h) in handles.into_iter().enumerate() {
            assert_eq!(h.join().unwrap(), vec![qi(0), powi(&qi(2), 6 - t as i64)]);
        }
    }
}

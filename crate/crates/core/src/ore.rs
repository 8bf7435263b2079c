//! Skew polynomial rings `R[t; α, δ]`, their Laurent and opposite variants, and
//! finite-dimensional modules over them.
//!
//! Polynomial and Laurent elements use left coefficients `Σ a_k t^k` and the
//! rule `t a = α(a) t + δ(a)`. Opposite extensions use right coefficients
//! `Σ t^k a_k` and the rule `a t = t α̃(a) + δ̃(a)`. Either way, moving a
//! coefficient across `t^n` is the operator family `N[n][k]`:
//! `N[0][0] = id`, `N[n][k] = α∘N[n−1][k−1] + δ∘N[n−1][k]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{AlgebraMorphism, DerivationFlavor, FdAlgebra, RightModule, SigmaDerivation};
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, vec_add, Matrix};
use crate::report::CheckReport;
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OreKind {
    Polynomial,
    Laurent,
    OppositePolynomial,
    OppositeLaurent,
}

impl OreKind {
    pub fn is_laurent(self) -> bool {
        matches!(self, OreKind::Laurent | OreKind::OppositeLaurent)
    }

    pub fn is_opposite(self) -> bool {
        matches!(self, OreKind::OppositePolynomial | OreKind::OppositeLaurent)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OreKind::Polynomial => "polynomial",
            OreKind::Laurent => "laurent",
            OreKind::OppositePolynomial => "opposite-polynomial",
            OreKind::OppositeLaurent => "opposite-laurent",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        [OreKind::Polynomial, OreKind::Laurent, OreKind::OppositePolynomial, OreKind::OppositeLaurent]
            .into_iter()
            .find(|k| k.as_str() == text)
    }
}

/// The data `(R, α, δ, kind)` of an Ore extension.
///
/// Holds a lazily grown cache of the rewrite operators behind a mutex, so a
/// signature can be shared between threads.
pub struct OreSignature<F> {
    name: String,
    alpha: AlgebraMorphism<F>,
    delta: SigmaDerivation<F>,
    kind: OreKind,
    alpha_inv: Option<AlgebraMorphism<F>>,
    ops: Mutex<Vec<Arc<Vec<Matrix<F>>>>>,
    powers: Mutex<BTreeMap<i64, Arc<Matrix<F>>>>,
    opposite: OnceLock<Arc<OreSignature<F>>>,
}

impl<F: Field> OreSignature<F> {
    pub fn new(name: impl Into<String>, alpha: AlgebraMorphism<F>, delta: SigmaDerivation<F>, kind: OreKind) -> Result<Self> {
        let name = name.into();
        if !Arc::ptr_eq(alpha.source(), alpha.target()) && alpha.source() != alpha.target() {
            return Err(Error::Invalid(format!("{name}: α must be an endomorphism")));
        }
        let check = alpha.check();
        if !check.passed() {
            return Err(Error::Invalid(format!("{name}: α is not an algebra endomorphism ({})", check.first_witness().unwrap_or(""))));
        }
        if delta.alpha().matrix() != alpha.matrix() || delta.algebra().dim() != alpha.source().dim() {
            return Err(Error::Invalid(format!("{name}: δ is twisted by a different α")));
        }
        let want = if kind.is_opposite() { DerivationFlavor::Opposite } else { DerivationFlavor::Standard };
        if delta.flavor() != want && !delta.is_zero() {
            return Err(Error::Invalid(format!("{name}: {} extensions need a {:?} derivation", kind.as_str(), want)));
        }
        let check = delta.check();
        if !check.passed() {
            return Err(Error::Invalid(format!("{name}: {}", check.first_witness().unwrap_or("δ fails Leibniz"))));
        }
        let alpha_inv = alpha.inverse().ok();
        if kind.is_laurent() {
            if !delta.is_zero() {
                return Err(Error::Invalid(format!("{name}: Laurent extensions need δ = 0")));
            }
            if alpha_inv.is_none() {
                return Err(Error::Invalid(format!("{name}: Laurent extensions need invertible α")));
            }
        }
        let n = alpha.source().dim();
        Ok(OreSignature {
            name,
            alpha,
            delta,
            kind,
            alpha_inv,
            ops: Mutex::new(vec![Arc::new(vec![Matrix::identity(n)])]),
            powers: Mutex::new(BTreeMap::new()),
            opposite: OnceLock::new(),
        })
    }

    /// `R[t; α, δ]`.
    pub fn polynomial(name: impl Into<String>, alpha: AlgebraMorphism<F>, delta: SigmaDerivation<F>) -> Result<Arc<Self>> {
        Self::new(name, alpha, delta, OreKind::Polynomial).map(Arc::new)
    }

    /// `R[t, t⁻¹; α]`.
    pub fn laurent(name: impl Into<String>, alpha: AlgebraMorphism<F>) -> Result<Arc<Self>> {
        let delta = SigmaDerivation::zero(alpha.clone());
        Self::new(name, alpha, delta, OreKind::Laurent).map(Arc::new)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Arc<FdAlgebra<F>> {
        self.alpha.source()
    }

    pub fn alpha(&self) -> &AlgebraMorphism<F> {
        &self.alpha
    }

    pub fn delta(&self) -> &SigmaDerivation<F> {
        &self.delta
    }

    pub fn kind(&self) -> OreKind {
        self.kind
    }

    pub fn alpha_inverse(&self) -> Result<&AlgebraMorphism<F>> {
        self.alpha_inv.as_ref().ok_or(Error::NotInvertible)
    }

    /// Structural equality, ignoring names and caches.
    pub fn same_as(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.kind == other.kind
                && self.base() == other.base()
                && self.alpha.matrix() == other.alpha.matrix()
                && self.delta.matrix() == other.delta.matrix())
    }

    /// `N[n][0..=n]`.
    pub fn rewrite_ops(&self, n: usize) -> Arc<Vec<Matrix<F>>> {
        let mut ops = self.ops.lock().expect("operator cache poisoned");
        while ops.len() <= n {
            let prev = ops.last().expect("seeded").clone();
            let m = prev.len();
            let dim = self.base().dim();
            let next: Vec<Matrix<F>> = (0..=m)
                .map(|k| {
                    let mut acc = Matrix::zeros(dim, dim);
                    if k >= 1 {
                        acc = acc.add(&self.alpha.matrix().mul(&prev[k - 1]));
                    }
                    if k < m && !self.delta.is_zero() {
                        acc = acc.add(&self.delta.matrix().mul(&prev[k]));
                    }
                    acc
                })
                .collect();
            ops.push(Arc::new(next));
        }
        ops[n].clone()
    }

    /// `α^n` for any integer `n` (negative powers need invertible α).
    pub fn alpha_power(&self, n: i64) -> Result<Arc<Matrix<F>>> {
        if let Some(m) = self.powers.lock().expect("power cache poisoned").get(&n) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.alpha.power(n)?.matrix().clone());
        self.powers.lock().expect("power cache poisoned").insert(n, m.clone());
        Ok(m)
    }

    /// `t^n a = Σ_k N[n][k](a) t^k` (or `a t^n = Σ_k t^k N[n][k](a)` for
    /// opposite kinds), as the list of nonzero `(k, N[n][k](a))`.
    pub fn move_across(&self, n: i64, a: &[F]) -> Result<Vec<(i64, Vec<F>)>> {
        if self.kind.is_laurent() {
            let v = self.alpha_power(n)?.mul_vec(a);
            return Ok(if is_zero_vec(&v) { vec![] } else { vec![(n, v)] });
        }
        if n < 0 {
            return Err(Error::NegativePower);
        }
        let ops = self.rewrite_ops(n as usize);
        Ok(ops
            .iter()
            .enumerate()
            .map(|(k, op)| (k as i64, op.mul_vec(a)))
            .filter(|(_, v)| !is_zero_vec(v))
            .collect())
    }

    /// The opposite presentation `R[t; α⁻¹, −δα⁻¹]` with right coefficients.
    pub fn opposite(&self) -> Result<Arc<Self>> {
        if let Some(op) = self.opposite.get() {
            return Ok(op.clone());
        }
        if self.kind.is_opposite() {
            return Err(Error::Invalid("already an opposite presentation".into()));
        }
        let inv = self.alpha_inverse()?.clone();
        let delta = SigmaDerivation::new(inv.clone(), self.delta.matrix().mul(inv.matrix()).scale(&-F::one()), DerivationFlavor::Opposite)?;
        let kind = if self.kind.is_laurent() { OreKind::OppositeLaurent } else { OreKind::OppositePolynomial };
        let op = Arc::new(Self::new(format!("{}^op", self.name), inv, delta, kind)?);
        Ok(self.opposite.get_or_init(|| op).clone())
    }
}

impl<F: Field> fmt::Debug for OreSignature<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OreSignature").field("name", &self.name).field("kind", &self.kind).field("base", &self.base().name()).finish()
    }
}

/// Free-function form of [`OreSignature::rewrite_ops`].
pub fn rewrite_ops<F: Field>(sig: &OreSignature<F>, n: usize) -> Arc<Vec<Matrix<F>>> {
    sig.rewrite_ops(n)
}

/// Finitely supported element of an Ore extension; see the module docs for
/// which side the coefficients sit on.
#[derive(Clone)]
pub struct OrePoly<F> {
    sig: Arc<OreSignature<F>>,
    coeffs: BTreeMap<i64, Vec<F>>,
}

impl<F: Field> OrePoly<F> {
    pub fn new(sig: Arc<OreSignature<F>>, coeffs: BTreeMap<i64, Vec<F>>) -> Result<Self> {
        let n = sig.base().dim();
        for (&k, v) in &coeffs {
            if v.len() != n {
                return Err(Error::Dimension(format!("coefficient of t^{k} has {} entries, base has dimension {n}", v.len())));
            }
            if k < 0 && !sig.kind().is_laurent() {
                return Err(Error::NegativePower);
            }
        }
        Ok(Self::from_map(sig, coeffs))
    }

    fn from_map(sig: Arc<OreSignature<F>>, mut coeffs: BTreeMap<i64, Vec<F>>) -> Self {
        coeffs.retain(|_, v| !is_zero_vec(v));
        OrePoly { sig, coeffs }
    }

    pub fn zero(sig: &Arc<OreSignature<F>>) -> Self {
        OrePoly { sig: sig.clone(), coeffs: BTreeMap::new() }
    }

    pub fn one(sig: &Arc<OreSignature<F>>) -> Self {
        Self::constant(sig, sig.base().unit())
    }

    pub fn constant(sig: &Arc<OreSignature<F>>, a: &[F]) -> Self {
        Self::from_map(sig.clone(), BTreeMap::from([(0, a.to_vec())]))
    }

    /// `a t^k` (or `t^k a` in opposite kinds).
    pub fn monomial(sig: &Arc<OreSignature<F>>, a: &[F], k: i64) -> Result<Self> {
        Self::new(sig.clone(), BTreeMap::from([(k, a.to_vec())]))
    }

    pub fn t_power(sig: &Arc<OreSignature<F>>, k: i64) -> Result<Self> {
        Self::monomial(sig, sig.base().unit(), k)
    }

    pub fn t(sig: &Arc<OreSignature<F>>) -> Self {
        Self::t_power(sig, 1).expect("t has degree 1")
    }

    pub fn signature(&self) -> &Arc<OreSignature<F>> {
        &self.sig
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Vec<F>> {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Vec<F> {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| self.sig.base().zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Vec<F>)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn low_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn ensure_same(&self, other: &Self) -> Result<()> {
        if self.sig.same_as(&other.sig) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!("{} vs {}", self.sig.name(), other.sig.name())))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&k, v) in &other.coeffs {
            let e = coeffs.entry(k).or_insert_with(|| self.sig.base().zero());
            *e = vec_add(e, v);
        }
        Self::from_map(self.sig.clone(), coeffs)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        let coeffs = self.coeffs.iter().map(|(&k, v)| (k, crate::linalg::vec_scale(v, c))).collect();
        Self::from_map(self.sig.clone(), coeffs)
    }

    /// Product under the rewriting rule of the signature.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ensure_same(other)?;
        let base = self.sig.base();
        let mut out: BTreeMap<i64, Vec<F>> = BTreeMap::new();
        let mut push = |k: i64, v: Vec<F>| {
            let e = out.entry(k).or_insert_with(|| base.zero());
            *e = vec_add(e, &v);
        };
        if self.sig.kind().is_opposite() {
            // t^i a · t^j b = Σ_k t^{i+k} N[j][k](a) b
            for (&i, a) in &self.coeffs {
                for (&j, b) in &other.coeffs {
                    for (k, na) in self.sig.move_across(j, a)? {
                        push(i + k, base.mul(&na, b));
                    }
                }
            }
        } else {
            // a t^i · b t^j = Σ_k a N[i][k](b) t^{k+j}
            for (&i, a) in &self.coeffs {
                for (&j, b) in &other.coeffs {
                    for (k, nb) in self.sig.move_across(i, b)? {
                        push(k + j, base.mul(a, &nb));
                    }
                }
            }
        }
        Ok(Self::from_map(self.sig.clone(), out))
    }

    pub fn pow(&self, n: usize) -> Result<Self> {
        (0..n).try_fold(Self::one(&self.sig), |acc, _| acc.mul(self))
    }

    pub fn to_opposite(&self) -> Result<Self> {
        to_opposite(self)
    }
}

impl<F: Field> PartialEq for OrePoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.sig.same_as(&other.sig) && self.coeffs == other.coeffs
    }
}

impl<F: Field> fmt::Display for OrePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let base = self.sig.base();
        let opposite = self.sig.kind().is_opposite();
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&k, v)| {
                let c = format!("({})", base.format_element(v));
                match (k, opposite) {
                    (0, _) => c,
                    (1, false) => format!("{c}t"),
                    (1, true) => format!("t{c}"),
                    (k, false) => format!("{c}t^{k}"),
                    (k, true) => format!("t^{k}{c}"),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<F: Field> fmt::Debug for OrePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrePoly[{}]({self})", self.sig.name())
    }
}

pub fn ore_mul<F: Field>(f: &OrePoly<F>, g: &OrePoly<F>) -> Result<OrePoly<F>> {
    f.mul(g)
}

/// Product in a Laurent extension; other kinds are rejected.
pub fn laurent_mul<F: Field>(f: &OrePoly<F>, g: &OrePoly<F>) -> Result<OrePoly<F>> {
    if !f.sig.kind().is_laurent() {
        return Err(Error::SignatureMismatch(format!("{} is not a Laurent signature", f.sig.name())));
    }
    f.mul(g)
}

/// `R[t; α, δ] ≅ R[t; α⁻¹, −δα⁻¹]` (right coefficients): rewrites
/// `a t^k = Σ_j t^j Ñ[k][j](a)` in the opposite presentation.
pub fn to_opposite<F: Field>(f: &OrePoly<F>) -> Result<OrePoly<F>> {
    let op = f.sig.opposite()?;
    let mut out = OrePoly::zero(&op);
    for (&k, a) in &f.coeffs {
        for (j, v) in op.move_across(k, a)? {
            out = out.add(&OrePoly::monomial(&op, &v, j)?);
        }
    }
    Ok(out)
}

/// Inverse of [`to_opposite`]: `t^k b = Σ_j N[k][j](b) t^j` in `original`.
pub fn from_opposite<F: Field>(g: &OrePoly<F>, original: &Arc<OreSignature<F>>) -> Result<OrePoly<F>> {
    let op = original.opposite()?;
    if !g.sig.same_as(&op) {
        return Err(Error::SignatureMismatch(format!("{} is not the opposite of {}", g.sig.name(), original.name())));
    }
    let mut out = OrePoly::zero(original);
    for (&k, b) in &g.coeffs {
        for (j, v) in original.move_across(k, b)? {
            out = out.add(&OrePoly::monomial(original, &v, j)?);
        }
    }
    Ok(out)
}

/// A finite-dimensional right module over `R[t; α, δ]` (or the Laurent ring):
/// a right `R`-module with the action `T` of `t`, subject to
/// `ρ(a) T = T ρ(α(a)) + ρ(δ(a))`.
#[derive(Clone)]
pub struct OreModule<F> {
    sig: Arc<OreSignature<F>>,
    base: RightModule<F>,
    t: Matrix<F>,
    t_inv: Option<Matrix<F>>,
}

impl<F: Field> OreModule<F> {
    pub fn new(sig: Arc<OreSignature<F>>, base: RightModule<F>, t: Matrix<F>) -> Result<Self> {
        if sig.kind().is_opposite() {
            return Err(Error::Invalid("modules are defined over left-coefficient presentations".into()));
        }
        if base.algebra().as_ref() != sig.base().as_ref() {
            return Err(Error::SignatureMismatch(format!("module over {} used with {}", base.algebra().name(), sig.name())));
        }
        if t.shape() != (base.dim(), base.dim()) {
            return Err(Error::Dimension(format!("t acts by a {}x{} matrix on a {}-dimensional module", t.rows(), t.cols(), base.dim())));
        }
        let t_inv = if sig.kind().is_laurent() { Some(t.inverse().ok_or(Error::NotInvertible)?) } else { None };
        Ok(OreModule { sig, base, t, t_inv })
    }

    /// Module with `t` acting by zero; valid whenever `δ = 0` (polynomial kind only).
    pub fn with_zero_t(sig: Arc<OreSignature<F>>, base: RightModule<F>) -> Result<Self> {
        let n = base.dim();
        Self::new(sig, base, Matrix::zeros(n, n))
    }

    /// First `t`-action found by [`compatible_t_actions`], preferring an
    /// invertible one for Laurent signatures.
    pub fn find(sig: Arc<OreSignature<F>>, base: RightModule<F>) -> Result<Self> {
        let (t0, hom) = compatible_t_actions(&sig, &base)?
            .ok_or_else(|| Error::Invalid(format!("no compatible t-action on {}", base.name())))?;
        let mut candidates = vec![t0.clone()];
        candidates.extend(hom.iter().map(|h| t0.add(h)));
        if !hom.is_empty() {
            candidates.push(hom.iter().fold(t0.clone(), |acc, h| acc.add(h)));
        }
        for t in candidates {
            if !sig.kind().is_laurent() || t.inverse().is_some() {
                return Self::new(sig, base, t);
            }
        }
        Err(Error::Invalid(format!("no invertible t-action found on {}", base.name())))
    }

    pub fn signature(&self) -> &Arc<OreSignature<F>> {
        &self.sig
    }

    /// The restriction `M|_R`.
    pub fn base(&self) -> &RightModule<F> {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn t_matrix(&self) -> &Matrix<F> {
        &self.t
    }

    /// `T^k`, using `T⁻¹` for negative `k`.
    pub fn t_power(&self, k: i64) -> Result<Matrix<F>> {
        if k >= 0 {
            Ok(self.t.pow(k as usize))
        } else {
            Ok(self.t_inv.as_ref().ok_or(Error::NegativePower)?.pow(k.unsigned_abs() as usize))
        }
    }

    /// `v·f = Σ_k T^k ρ(a_k) v`.
    pub fn act(&self, v: &[F], f: &OrePoly<F>) -> Result<Vec<F>> {
        if !f.signature().same_as(&self.sig) {
            return Err(Error::SignatureMismatch(format!("{} acting on a module over {}", f.signature().name(), self.sig.name())));
        }
        let mut acc = vec![F::zero(); self.dim()];
        for (k, a) in f.terms() {
            acc = vec_add(&acc, &self.t_power(k)?.mul_vec(&self.base.act(v, a)));
        }
        Ok(acc)
    }

    /// The compatibility identity on every basis element, and `T T⁻¹ = 1`.
    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::new(format!("ore module {}", self.base.name()));
        let r = self.sig.base();
        for i in 0..r.dim() {
            let a = r.basis(i);
            let lhs = self.base.rho(&a).mul(&self.t);
            let rhs = self.t.mul(&self.base.rho(&self.sig.alpha().apply(&a))).add(&self.base.rho(&self.sig.delta().apply(&a)));
            report.record(lhs == rhs, || format!("ρ({0})T ≠ Tρ(α({0})) + ρ(δ({0}))", r.labels()[i]));
        }
        if let Some(inv) = &self.t_inv {
            report.record(self.t.mul(inv) == Matrix::identity(self.dim()), || "T T⁻¹ ≠ 1".into());
        }
        report
    }
}

impl<F: Field> fmt::Debug for OreModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OreModule").field("signature", &self.sig.name()).field("base", &self.base).field("t", &self.t).finish()
    }
}

/// All `T` with `ρ(a) T − T ρ(α(a)) = ρ(δ(a))` for every basis `a`: a
/// particular solution and a basis of the homogeneous solutions, or `None`.
#[allow(clippy::type_complexity)]
pub fn compatible_t_actions<F: Field>(sig: &OreSignature<F>, base: &RightModule<F>) -> Result<Option<(Matrix<F>, Vec<Matrix<F>>)>> {
    let m = base.dim();
    let r = sig.base();
    let id = Matrix::identity(m);
    let mut system = Matrix::zeros(0, m * m);
    let mut rhs: Vec<F> = Vec::new();
    for i in 0..r.dim() {
        let a = r.basis(i);
        // vec(ρ(a) T) = (I ⊗ ρ(a)) vec T and vec(T ρ(α a)) = (ρ(α a)ᵀ ⊗ I) vec T
        let block = id.kron(&base.rho(&a)).sub(&base.rho(&sig.alpha().apply(&a)).transpose().kron(&id));
        system = system.vstack(&block);
        rhs.extend(base.rho(&sig.delta().apply(&a)).vectorize());
    }
    let unvec = |v: &[F]| Matrix::from_fn(m, m, |i, j| v[j * m + i].clone());
    let Some(x) = system.solve(&rhs)? else { return Ok(None) };
    let hom = system.kernel_basis().columns().iter().map(|v| unvec(v)).collect();
    Ok(Some((unvec(&x), hom)))
}

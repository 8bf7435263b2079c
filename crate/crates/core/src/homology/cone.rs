//! Ext over `A = R[t; α, δ]` for finite-dimensional right `A`-modules.
//!
//! For an `A`-module `M` the sequence
//! `0 → M_α ⊗_R A --j′--> M ⊗_R A --mult--> M → 0` is exact. Resolving `M|_R`
//! by `P` and `M_α|_R` by `Q`, inducing up and lifting `j′` to a chain map
//! `u : Q ⊗_R A → P ⊗_R A` gives the mapping cone
//! `C_n = P_n ⊗_R A ⊕ Q_{n−1} ⊗_R A`, a free resolution of `M` over `A`.
//!
//! Elements of `R^k ⊗_R A` are stored as `Σ_j v_j ⊗ t^j` with `v_j ∈ R^k` in
//! block coordinates; `A`-linear maps out of a free module are stored by the
//! images of the generators.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::resolution::{ext_dims_with, resolve, resolve_free, CoverStrategy, Resolution};
use crate::algebra::RightModule;
use crate::catalogue;
use crate::differentials::{induced_inclusion, induced_retraction, InducedElement};
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, span_rank, unit_vec, vec_add, vec_scale, Matrix};
use crate::ore::{OreModule, OrePoly, OreSignature};
use crate::report::CheckReport;
use crate::scalar::Field;

/// `Σ_j v_j ⊗ t^j` in `R^k ⊗_R A`.
pub type InducedVector<F> = BTreeMap<i64, Vec<F>>;

fn push<F: Field>(x: &mut InducedVector<F>, j: i64, v: Vec<F>) {
    let sum = match x.remove(&j) {
        Some(w) => vec_add(&w, &v),
        None => v,
    };
    if !is_zero_vec(&sum) {
        x.insert(j, sum);
    }
}

/// `v · b` in `R^k`, blockwise right multiplication.
fn free_right_mult<F: Field>(sig: &OreSignature<F>, v: &[F], b: &[F]) -> Vec<F> {
    let r = sig.base();
    v.chunks(r.dim()).flat_map(|block| r.mul(block, b)).collect()
}

/// `x · r` for `r ∈ R`: `(v ⊗ t^j)·r = Σ_l v·N[j][l](r) ⊗ t^l`.
pub fn induced_right_act<F: Field>(sig: &OreSignature<F>, x: &InducedVector<F>, r: &[F]) -> Result<InducedVector<F>> {
    let mut out = BTreeMap::new();
    for (&j, v) in x {
        for (l, b) in sig.move_across(j, r)? {
            push(&mut out, l, free_right_mult(sig, v, &b));
        }
    }
    Ok(out)
}

/// Image of `x = Σ_j v_j ⊗ t^j` under the `A`-linear map sending generator
/// `g` to `images[g]`.
pub fn apply_induced_map<F: Field>(sig: &OreSignature<F>, images: &[InducedVector<F>], x: &InducedVector<F>) -> Result<InducedVector<F>> {
    let n = sig.base().dim();
    let mut out = BTreeMap::new();
    for (&j, v) in x {
        for (g, block) in v.chunks(n).enumerate() {
            if is_zero_vec(block) {
                continue;
            }
            for (l, w) in induced_right_act(sig, &images[g], block)? {
                push(&mut out, l + j, w);
            }
        }
    }
    Ok(out)
}

fn degree_zero<F: Field>(v: Vec<F>) -> InducedVector<F> {
    let mut out = BTreeMap::new();
    if !is_zero_vec(&v) {
        out.insert(0, v);
    }
    out
}

/// Generator `g` of `R^rank`: the unit of `R` in block `g`.
pub(crate) fn generator<F: Field>(r: &crate::algebra::FdAlgebra<F>, rank: usize, g: usize) -> Vec<F> {
    let n = r.dim();
    let mut v = vec![F::zero(); n * rank];
    v[g * n..(g + 1) * n].clone_from_slice(r.unit());
    v
}

/// A free resolution of a finite-dimensional `A`-module as a mapping cone.
#[derive(Clone)]
pub struct ConeResolution<F> {
    sig: Arc<OreSignature<F>>,
    module: OreModule<F>,
    p: Resolution<F>,
    q: Resolution<F>,
    /// `u_n : Q_n ⊗ A → P_n ⊗ A` by generator images, `n = 0..=top−1`.
    lifts: Vec<Vec<InducedVector<F>>>,
    /// Highest cone degree built.
    top: usize,
}

impl<F: Field> ConeResolution<F> {
    /// Cone terms `C_0 … C_{max_k+1}`, enough for `Ext^k` with `k ≤ max_k`.
    pub fn new(module: &OreModule<F>, max_k: usize, strategy: CoverStrategy) -> Result<Self> {
        let sig = module.signature().clone();
        let m = module.base();
        let top = max_k + 1;
        let p = resolve_free(m, top + 1, strategy)?;
        let q = resolve_free(&m.twist(sig.alpha()), top, strategy)?;
        let t = module.t_matrix();
        let mut lifts: Vec<Vec<InducedVector<F>>> = Vec::new();
        for deg in 0..top {
            let mut images = Vec::with_capacity(q.rank(deg));
            for h in 0..q.rank(deg) {
                let gen = generator(sig.base(), q.rank(deg), h);
                // target in P_{deg−1} ⊗ A (or M ⊗ A when deg = 0) and the map to lift through
                let (target, through): (InducedVector<F>, Matrix<F>) = if deg == 0 {
                    let mv = q.augmentation().mul_vec(&gen);
                    let mut y = BTreeMap::new();
                    push(&mut y, 1, mv.clone());
                    push(&mut y, 0, vec_scale(&t.mul_vec(&mv), &-F::one()));
                    (y, p.augmentation().clone())
                } else {
                    let w = q.differential(deg - 1).mul_vec(&gen);
                    (apply_induced_map(&sig, &lifts[deg - 1], &degree_zero(w))?, p.differential(deg - 1))
                };
                let mut x = BTreeMap::new();
                for (&j, y) in &target {
                    let sol = if through.cols() == 0 { None } else { through.solve(y)? };
                    let sol = sol.ok_or_else(|| Error::LiftFailed { degree: deg, detail: format!("t^{j} component has no preimage") })?;
                    push(&mut x, j, sol);
                }
                images.push(x);
            }
            lifts.push(images);
        }
        Ok(ConeResolution { sig, module: module.clone(), p, q, lifts, top })
    }

    pub fn signature(&self) -> &Arc<OreSignature<F>> {
        &self.sig
    }

    pub fn base_resolutions(&self) -> (&Resolution<F>, &Resolution<F>) {
        (&self.p, &self.q)
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Rank of `C_n = P_n ⊕ Q_{n−1}` over `A`.
    pub fn rank(&self, n: usize) -> usize {
        self.p.rank(n) + if n == 0 { 0 } else { self.q.rank(n - 1) }
    }

    /// Ranks of `C_0 … C_top`.
    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.top).map(|n| self.rank(n)).collect()
    }

    /// Length of the cone when both base resolutions stopped.
    pub fn length(&self) -> Option<usize> {
        let (lp, lq) = (self.p.length()?, self.q.length()?);
        let l = (0..=self.top).rev().find(|&n| self.rank(n) > 0).unwrap_or(0);
        (lp.max(lq + 1) <= self.top).then_some(l)
    }

    /// Generator images of `d_n : C_{n+1} → C_n`, `d(p, q) = (d p + u q, −d q)`.
    pub fn differential_images(&self, n: usize) -> Vec<InducedVector<F>> {
        let rdim = self.sig.base().dim();
        let (pn, qn1) = (self.p.rank(n), if n == 0 { 0 } else { self.q.rank(n - 1) });
        let width = (pn + qn1) * rdim;
        let embed = |x: &InducedVector<F>, offset: usize| -> InducedVector<F> {
            x.iter()
                .map(|(&j, v)| {
                    let mut w = vec![F::zero(); width];
                    w[offset..offset + v.len()].clone_from_slice(v);
                    (j, w)
                })
                .collect()
        };
        let mut out = Vec::with_capacity(self.rank(n + 1));
        let dp = self.p.differential(n);
        for g in 0..self.p.rank(n + 1) {
            out.push(embed(&degree_zero(dp.mul_vec(&generator(self.sig.base(), self.p.rank(n + 1), g))), 0));
        }
        for h in 0..self.q.rank(n) {
            let mut img = embed(&self.lifts[n][h], 0);
            if n > 0 {
                let dq = self.q.differential(n - 1).mul_vec(&generator(self.sig.base(), self.q.rank(n), h));
                for (j, v) in embed(&degree_zero(vec_scale(&dq, &-F::one())), pn * rdim) {
                    push(&mut img, j, v);
                }
            }
            out.push(img);
        }
        out
    }

    /// `C_0 → M`, `v ⊗ t^j ↦ T^j ε(v)`.
    fn augment(&self, x: &InducedVector<F>) -> Result<Vec<F>> {
        let mut acc = vec![F::zero(); self.module.dim()];
        for (&j, v) in x {
            acc = vec_add(&acc, &self.module.t_power(j)?.mul_vec(&self.p.augmentation().mul_vec(v)));
        }
        Ok(acc)
    }

    /// `d∘d = 0` and `ε∘d_0 = 0` on generators, which for the cone is the
    /// chain-map identity `d u = u d` of the lift.
    pub fn check_complex(&self) -> Result<CheckReport> {
        let mut report = CheckReport::new("cone complex");
        for (g, img) in self.differential_images(0).iter().enumerate() {
            report.record(is_zero_vec(&self.augment(img)?), || format!("ε ∘ d_0 ≠ 0 on generator {g}"));
        }
        for n in 0..self.top.saturating_sub(1) {
            let lower = self.differential_images(n);
            for (g, img) in self.differential_images(n + 1).iter().enumerate() {
                let dd = apply_induced_map(&self.sig, &lower, img)?;
                report.record(dd.is_empty(), || format!("d_{n} ∘ d_{} ≠ 0 on generator {g}", n + 1));
            }
        }
        Ok(report)
    }

    /// Default `t`-degree window for exactness certificates.
    pub fn default_window(&self) -> (i64, i64) {
        if self.sig.kind().is_laurent() {
            (-2, 2)
        } else {
            (0, 4)
        }
    }

    /// Exactness of the subcomplex spanned by `P_n ⊗ t^j` for `lo ≤ j ≤ hi`
    /// and `Q_{n−1} ⊗ t^j` for `lo ≤ j < hi`, checked by rank arithmetic at
    /// `C_0 … C_{top−1}`. Weighting `Q ⊗ t^j` by `j + 1`, the associated
    /// graded pieces are acyclic above the lowest weight, so this subcomplex
    /// resolves `M` just as the full cone does.
    pub fn truncation_certificate(&self, lo: i64, hi: i64) -> Result<CheckReport> {
        let mut report = CheckReport::new(format!("cone exactness on t-degrees [{lo}, {hi}]"));
        if !self.sig.kind().is_laurent() && lo < 0 {
            return Err(Error::NegativePower);
        }
        let rdim = self.sig.base().dim();
        // segment layout of the truncated C_n: (degree, offset in C_n coordinates, length)
        let layout = |n: usize| -> Vec<(i64, usize, usize)> {
            let pn = self.p.rank(n) * rdim;
            let qn = if n == 0 { 0 } else { self.q.rank(n - 1) * rdim };
            let mut segs: Vec<(i64, usize, usize)> = (lo..=hi).map(|j| (j, 0, pn)).collect();
            segs.extend((lo..hi).map(|j| (j, pn, qn)));
            segs.retain(|s| s.2 > 0);
            segs
        };
        let dim_of = |segs: &[(i64, usize, usize)]| segs.iter().map(|s| s.2).sum::<usize>();
        // locate (degree, coordinate) in a truncated layout
        let locate = |segs: &[(i64, usize, usize)], j: i64, c: usize| -> Option<usize> {
            let mut base = 0;
            for &(d, off, len) in segs {
                if d == j && c >= off && c < off + len {
                    return Some(base + c - off);
                }
                base += len;
            }
            None
        };
        let mut ranks_in: Vec<usize> = Vec::new();
        for n in 0..self.top {
            let (src, dst) = (layout(n + 1), layout(n));
            let images = self.differential_images(n);
            let mut columns = Vec::with_capacity(dim_of(&src));
            for &(j, off, len) in &src {
                for c in off..off + len {
                    let (g, p) = (c / rdim, c % rdim);
                    let mut col = vec![F::zero(); dim_of(&dst)];
                    for (l, w) in induced_right_act(&self.sig, &images[g], &unit_vec(rdim, p))? {
                        for (idx, x) in w.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                            match locate(&dst, l + j, idx) {
                                Some(pos) => col[pos] = col[pos].clone() + x.clone(),
                                None => report.fail(format!("d_{n} leaves the window at degree {}", l + j)),
                            }
                        }
                    }
                    columns.push(col);
                }
            }
            ranks_in.push(span_rank(&columns, dim_of(&dst)));
        }
        let dst0 = layout(0);
        let mut aug_cols = Vec::new();
        for &(j, off, len) in &dst0 {
            for c in off..off + len {
                aug_cols.push(self.augment(&BTreeMap::from([(j, unit_vec(len, c - off))]))?);
            }
        }
        let aug_rank = span_rank(&aug_cols, self.module.dim());
        report.record(aug_rank == self.module.dim(), || format!("augmentation has rank {aug_rank} < {}", self.module.dim()));
        for n in 0..self.top {
            let dim = dim_of(&layout(n));
            let out = if n == 0 { aug_rank } else { ranks_in[n - 1] };
            report.record(dim == out + ranks_in[n], || format!("not exact at C_{n}: dim {dim} ≠ {out} + {}", ranks_in[n]));
        }
        Ok(report)
    }

    /// `dim Ext_A^k(M, N)` for `k = 0..=top−1`, via `Hom_A(C_n, N) ≅ N^{rank C_n}`
    /// with `ψ(v ⊗ t^j) = T_N^j Σ_i ρ_N(v_i) ψ_i`.
    pub fn ext_dims(&self, target: &OreModule<F>) -> Result<Vec<usize>> {
        if !target.signature().same_as(&self.sig) {
            return Err(Error::SignatureMismatch(format!("{} vs {}", target.signature().name(), self.sig.name())));
        }
        let dn = target.dim();
        let rdim = self.sig.base().dim();
        let mut t_powers: BTreeMap<i64, Matrix<F>> = BTreeMap::new();
        let mut ranks = Vec::with_capacity(self.top);
        for n in 0..self.top {
            let (rows, cols) = (self.rank(n + 1) * dn, self.rank(n) * dn);
            let mut delta = Matrix::zeros(rows, cols);
            for (g, img) in self.differential_images(n).iter().enumerate() {
                for (&j, v) in img {
                    if !t_powers.contains_key(&j) {
                        t_powers.insert(j, target.t_power(j)?);
                    }
                    let tj = &t_powers[&j];
                    for (i, block) in v.chunks(rdim).enumerate() {
                        if is_zero_vec(block) {
                            continue;
                        }
                        let piece = tj.mul(&target.base().rho(block));
                        let mut acc = delta.submatrix(g * dn..(g + 1) * dn, i * dn..(i + 1) * dn);
                        acc = acc.add(&piece);
                        delta.set_block(g * dn, i * dn, &acc);
                    }
                }
            }
            ranks.push(delta.rank());
        }
        Ok((0..self.top)
            .map(|k| self.rank(k) * dn - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] })
            .collect())
    }
}

impl<F: Field> std::fmt::Debug for ConeResolution<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConeResolution").field("signature", &self.sig.name()).field("ranks", &self.ranks()).finish()
    }
}

/// `dim Ext_A^k(M, N)` for `k = 0..=max_k` through the cone resolution.
pub fn cone_ext<F: Field>(m: &OreModule<F>, n: &OreModule<F>, max_k: usize) -> Result<Vec<usize>> {
    ConeResolution::new(m, max_k, CoverStrategy::Greedy)?.ext_dims(n)
}

/// `dim Ext_A^k(M ⊗_R A, N)`: the induced resolution `P ⊗_R A` gives
/// `Hom_A(P_i ⊗_R A, N) ≅ Hom_R(P_i, N|_R) ≅ N^{rank P_i}`, with coboundary
/// blocks `ρ_N` of the entries of `d_i`.
pub fn induced_ext<F: Field>(m: &RightModule<F>, n: &OreModule<F>, max_k: usize) -> Result<Vec<usize>> {
    if m.algebra().as_ref() != n.signature().base().as_ref() {
        return Err(Error::SignatureMismatch(format!("module over {} with {}", m.algebra().name(), n.signature().name())));
    }
    let res = resolve_free(m, max_k + 1, CoverStrategy::Greedy)?;
    let (rdim, dn) = (m.algebra().dim(), n.dim());
    let ranks: Vec<usize> = (0..=max_k)
        .map(|i| {
            let d = res.differential(i);
            let (src, dst) = (res.rank(i + 1), res.rank(i));
            let mut delta = Matrix::zeros(src * dn, dst * dn);
            for g in 0..src {
                let col = d.mul_vec(&generator(m.algebra(), src, g));
                for (b, block) in col.chunks(rdim).enumerate() {
                    if !is_zero_vec(block) {
                        delta.set_block(g * dn, b * dn, &n.base().rho(block));
                    }
                }
            }
            delta.rank()
        })
        .collect();
    Ok((0..=max_k).map(|k| res.rank(k) * dn - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] }).collect())
}

/// Same dimensions as [`induced_ext`], computed over `R` from intertwiner
/// spaces; the adjunction says they agree.
pub fn restricted_ext<F: Field>(m: &RightModule<F>, n: &OreModule<F>, max_k: usize) -> Result<Vec<usize>> {
    ext_dims_with(&resolve(m, max_k + 1, CoverStrategy::Greedy)?, n.base(), max_k)
}

/// `i : M → M ⊗_R A`, `m ↦ m ⊗ 1`, and the coordinate retraction
/// `r(Σ m_j ⊗ t^j) = m_0`.
pub fn retraction_check<F: Field>(m: &RightModule<F>, sig: &Arc<OreSignature<F>>) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("retraction for {} over {}", m.name(), sig.name()));
    let module = Arc::new(m.clone());
    let r = sig.base();
    let images: Vec<Vec<F>> = (0..m.dim())
        .map(|b| {
            let e = unit_vec(m.dim(), b);
            let x = induced_inclusion(sig, &module, &e);
            report.record(induced_retraction(&x) == e, || format!("r(i(e_{b})) ≠ e_{b}"));
            x.coeffs().get(&0).cloned().unwrap_or_else(|| vec![F::zero(); m.dim()])
        })
        .collect();
    report.record(span_rank(&images, m.dim()) == m.dim(), || "i is not injective".into());
    let shifts: Vec<i64> = if sig.kind().is_laurent() { vec![-3, -2, -1, 1, 2, 3] } else { vec![1, 2, 3] };
    for b in 0..m.dim() {
        let e = unit_vec(m.dim(), b);
        for &j in &shifts {
            let x = InducedElement::simple(sig, &module, &e, j, false);
            report.record(is_zero_vec(&induced_retraction(&x)), || format!("r(e_{b} ⊗ t^{j}) ≠ 0"));
        }
        for a in 0..r.dim() {
            let ra = r.basis(a);
            let lhs = induced_inclusion(sig, &module, &m.act(&e, &ra));
            let rhs = induced_inclusion(sig, &module, &e).right_act(&OrePoly::constant(sig, &ra))?;
            report.record(lhs == rhs, || format!("i(e_{b}·{}) ≠ i(e_{b})·{}", r.labels()[a], r.labels()[a]));
        }
    }
    Ok(report)
}

/// A pair `(M, N)` with `Ext^g_A(M ⊗_R A, N) ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundWitness {
    pub module: String,
    pub target: String,
    pub degree: usize,
    pub ext: Vec<usize>,
}

/// Searches the catalogue test modules of the base and the fixture modules
/// of `sig` for a nonzero `Ext^g` of an induced module.
pub fn lower_bound_witness(sig: &Arc<OreSignature<crate::Rational>>, g: usize) -> Result<Option<LowerBoundWitness>> {
    let targets = catalogue::fixture_modules(sig);
    for m in catalogue::test_modules(sig.base()) {
        for n in &targets {
            let ext = induced_ext(&m, n, g)?;
            if ext[g] != 0 {
                return Ok(Some(LowerBoundWitness { module: m.name().to_string(), target: n.base().name().to_string(), degree: g, ext }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::simple_modules;
    use crate::homology::gldim;
    use crate::Rational;

    fn s0() -> OreModule<Rational> {
        let sig = catalogue::q_polynomial();
        OreModule::with_zero_t(sig.clone(), RightModule::regular(sig.base().clone())).unwrap()
    }

    #[test]
    fn koszul_resolution_of_s0() {
        let s = s0();
        let cone = ConeResolution::new(&s, 4, CoverStrategy::Greedy).unwrap();
        assert_eq!(cone.ranks(), vec![1, 1, 0, 0, 0, 0]);
        assert_eq!(cone.ext_dims(&s).unwrap(), vec![1, 1, 0, 0, 0]);
        assert!(cone.check_complex().unwrap().passed());
        assert!(cone.truncation_certificate(0, 4).unwrap().passed());
    }

    /// Over `R = ℚ`, `Ext^0` and `Ext^1` over `ℚ[t]` are the kernel and
    /// cokernel of `φ ↦ T_N φ − φ T_M`.
    #[test]
    fn sylvester_oracle_over_q() {
        let sig = catalogue::q_polynomial();
        let q = sig.base().clone();
        let ts: Vec<Matrix<Rational>> = vec![
            Matrix::from_ints(1, 1, &[0]),
            Matrix::from_ints(1, 1, &[3]),
            Matrix::from_ints(2, 2, &[0, 1, 0, 0]),
            Matrix::from_ints(2, 2, &[1, 0, 0, 2]),
            Matrix::from_ints(2, 2, &[2, 1, 0, 2]),
        ];
        let modules: Vec<OreModule<Rational>> =
            ts.iter().map(|t| OreModule::new(sig.clone(), RightModule::free(q.clone(), t.rows()), t.clone()).unwrap()).collect();
        for m in &modules {
            for n in &modules {
                let (a, b) = (m.dim(), n.dim());
                let sylvester = Matrix::identity(a).kron(n.t_matrix()).sub(&m.t_matrix().transpose().kron(&Matrix::identity(b)));
                let r = sylvester.rank();
                assert_eq!(cone_ext(m, n, 3).unwrap(), vec![a * b - r, a * b - r, 0, 0]);
            }
        }
    }

    #[test]
    fn induced_ext_matches_restricted_ext() {
        for sig in catalogue::signatures() {
            let targets = catalogue::fixture_modules(&sig);
            for m in catalogue::test_modules(sig.base()) {
                for n in &targets {
                    assert_eq!(induced_ext(&m, n, 3).unwrap(), restricted_ext(&m, n, 3).unwrap(), "{} / {} over {}", m.name(), n.base().name(), sig.name());
                }
            }
        }
    }

    #[test]
    fn induced_ext_of_regular_is_hom() {
        let s = s0();
        let q = RightModule::regular(catalogue::rationals());
        assert_eq!(induced_ext(&q, &s, 3).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn cone_is_a_certified_resolution_on_fixtures() {
        for sig in catalogue::signatures() {
            let fixtures = catalogue::fixture_modules(&sig);
            for m in &fixtures {
                let cone = ConeResolution::new(m, 3, CoverStrategy::Greedy).unwrap();
                assert!(cone.check_complex().unwrap().passed(), "{}", sig.name());
                let (lo, hi) = cone.default_window();
                let cert = cone.truncation_certificate(lo, hi).unwrap();
                assert!(cert.passed(), "{} {}: {cert}", sig.name(), m.base().name());
            }
        }
    }

    #[test]
    fn cone_ext_vanishes_above_base_dimension_plus_one() {
        for sig in catalogue::signatures() {
            let Ok(crate::homology::HomDim::Finite(g)) = gldim(sig.base(), 4) else { continue };
            let fixtures = catalogue::fixture_modules(&sig);
            for m in &fixtures {
                for n in &fixtures {
                    let e = cone_ext(m, n, g + 2).unwrap();
                    assert!(e[g + 2..].iter().all(|&d| d == 0), "{}: {e:?}", sig.name());
                }
            }
        }
    }

    #[test]
    fn padded_cone_agrees() {
        for sig in catalogue::signatures() {
            let fixtures = catalogue::fixture_modules(&sig);
            for m in &fixtures {
                let a = ConeResolution::new(m, 2, CoverStrategy::Greedy).unwrap();
                let b = ConeResolution::new(m, 2, CoverStrategy::Padded).unwrap();
                for n in &fixtures {
                    assert_eq!(a.ext_dims(n).unwrap(), b.ext_dims(n).unwrap());
                }
            }
        }
    }

    #[test]
    fn retraction_on_test_modules() {
        for sig in catalogue::signatures() {
            for m in catalogue::test_modules(sig.base()) {
                assert!(retraction_check(&m, &sig).unwrap().passed());
            }
        }
    }

    #[test]
    fn lower_bound_witnesses_exist() {
        for sig in catalogue::signatures() {
            let g = gldim(sig.base(), 4).unwrap();
            if let crate::homology::HomDim::Finite(g) = g {
                let w = lower_bound_witness(&sig, g).unwrap();
                assert!(w.is_some(), "no witness for {}", sig.name());
            }
        }
        let t2 = catalogue::t2_inner();
        let w = lower_bound_witness(&t2, 1).unwrap().unwrap();
        assert!(w.ext[1] > 0);
        assert!(simple_modules(t2.base()).unwrap().iter().any(|s| s.name() == w.module));
    }
}

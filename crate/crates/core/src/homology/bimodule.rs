//! The two-sided resolution of `A = R[t; α, δ]` built from a bimodule
//! resolution of `R`.
//!
//! Start from `0 → K → P_0 → R → 0` over `R ⊗ R^op`, with `P_0` free and
//! `K` projective. Inducing on both sides gives resolutions
//! `X_• = A ⊗_R P_• ⊗_R A` of `A ⊗_R A` and `Y_• = A_α ⊗_R P_• ⊗_R A` of
//! `A_α ⊗_R A`. Lifting `j : A_α ⊗_R A → A ⊗_R A` to `φ : Y → X` and taking
//! the cone gives a projective resolution of `A` of length one more:
//!
//! `C_0 = X_0`, `C_1 = X_1 ⊕ Y_0`, `C_2 = Y_1`,
//! `d_1(x, y) = x + φ(y)`, `d_2(z) = (φ(z), −z)`.
//!
//! `X_0` and `Y_0` are `(A ⊗ A)^k` with ℚ-basis `e_p t^i ⊗ e_q t^j` per
//! block; `X_1` and `Y_1` are the subspaces spanned by `t^i κ t^j` for a
//! ℚ-basis `κ` of `K`. Everything is checked on the subcomplex of total
//! `t`-weight at most `W`, where `Y` is shifted by one.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::resolution::{dh, free_cover, regular_bimodule, CoverStrategy};
use super::HomDim;
use crate::differentials::{map_j, tensor_normalize, TensorElement};
use crate::error::{Error, Result};
use crate::linalg::{span_rank, Matrix};
use crate::ore::{OrePoly, OreSignature};
use crate::report::CheckReport;
use crate::scalar::Field;

/// `(block, i, p, j, q)` for `e_p t^i ⊗ e_q t^j` in block `block`.
type Key = (usize, i64, usize, i64, usize);

/// Element of `(A ⊗ A)^k`.
type BiTensor<F> = BTreeMap<Key, F>;

fn add_term<F: Field>(x: &mut BiTensor<F>, key: Key, c: F) {
    let sum = match x.remove(&key) {
        Some(v) => v + c,
        None => c,
    };
    if !sum.is_zero() {
        x.insert(key, sum);
    }
}

/// Adds `c · (u ⊗ v)` in block `block`.
fn add_pure<F: Field>(x: &mut BiTensor<F>, block: usize, u: &OrePoly<F>, v: &OrePoly<F>, c: &F) {
    for (i, a) in u.terms() {
        for (p, ap) in a.iter().enumerate().filter(|(_, z)| !z.is_zero()) {
            for (j, b) in v.terms() {
                for (q, bq) in b.iter().enumerate().filter(|(_, z)| !z.is_zero()) {
                    add_term(x, (block, i, p, j, q), c.clone() * ap.clone() * bq.clone());
                }
            }
        }
    }
}

fn mono<F: Field>(sig: &Arc<OreSignature<F>>, p: usize, i: i64) -> Result<OrePoly<F>> {
    OrePoly::monomial(sig, &sig.base().basis(p), i)
}

/// `u · x · v` for the outer bimodule structure of `(A ⊗ A)^k`.
fn sandwich<F: Field>(sig: &Arc<OreSignature<F>>, u: &OrePoly<F>, x: &BiTensor<F>, v: &OrePoly<F>) -> Result<BiTensor<F>> {
    let mut out = BTreeMap::new();
    for (&(block, i, p, j, q), c) in x {
        let left = u.mul(&mono(sig, p, i)?)?;
        let right = mono(sig, q, j)?.mul(v)?;
        add_pure(&mut out, block, &left, &right, c);
    }
    Ok(out)
}

fn tensor_coords<F: Field>(x: &TensorElement<F>) -> BTreeMap<(i64, i64, usize), F> {
    let mut out = BTreeMap::new();
    for (&j, f) in x.coeffs() {
        for (k, a) in f.terms() {
            for (p, c) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                out.insert((j, k, p), c.clone());
            }
        }
    }
    out
}

/// The data of the construction; see the module documentation.
#[derive(Clone)]
pub struct BimoduleResolution<F> {
    sig: Arc<OreSignature<F>>,
    /// `ε(generator c) = r_c`.
    generator_images: Vec<Vec<F>>,
    /// ℚ-basis of `K ⊂ (R ⊗ R)^k` as `(block, a, b, λ)` terms of `e_a ⊗ e_b`.
    kernel: Vec<Vec<(usize, usize, usize, F)>>,
    /// `φ_0(1 ⊗ generator c ⊗ 1) ∈ X_0`.
    lift: Vec<BiTensor<F>>,
    kernel_dh: HomDim,
}

/// Builds the construction for a polynomial-kind signature whose base has
/// bidimension at most one (so that `K` is projective).
pub fn bimodule_resolution<F: Field>(sig: &Arc<OreSignature<F>>) -> Result<BimoduleResolution<F>> {
    if sig.kind() != crate::ore::OreKind::Polynomial {
        return Err(Error::Invalid("the bimodule resolution is built for polynomial signatures".into()));
    }
    let r = sig.base().clone();
    let n = r.dim();
    let bimodule = regular_bimodule(&r);
    let env = bimodule.algebra().clone();
    let cover = free_cover(&bimodule, CoverStrategy::Greedy)?;
    let k = cover.rank;
    let generator_images: Vec<Vec<F>> = (0..k).map(|c| cover.map.mul_vec(&super::cone::generator(&env, k, c))).collect();
    let kernel_basis = cover.map.kernel_basis();
    let kernel_dh = if kernel_basis.cols() == 0 {
        HomDim::Finite(0)
    } else {
        let free = crate::algebra::RightModule::free(env.clone(), k);
        let (sub, _) = free.submodule(&kernel_basis)?;
        dh(&sub, 2)?
    };
    if kernel_dh != HomDim::Finite(0) {
        return Err(Error::Invalid(format!("kernel of the cover has dh {kernel_dh}; the base needs bidimension ≤ 1")));
    }
    // enveloping index i·n + j is e_i ⊗ e_j in R ⊗ R^op, which is e_j ⊗ e_i in R ⊗ R
    let kernel = kernel_basis
        .columns()
        .into_iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(idx, c)| {
                    let (block, e) = (idx / (n * n), idx % (n * n));
                    (block, e % n, e / n, c.clone())
                })
                .collect()
        })
        .collect();
    let mut out = BimoduleResolution { sig: sig.clone(), generator_images, kernel, lift: Vec::new(), kernel_dh };
    out.lift = out.solve_lift()?;
    Ok(out)
}

impl<F: Field> std::fmt::Debug for BimoduleResolution<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BimoduleResolution")
            .field("signature", &self.sig.name())
            .field("rank", &self.rank())
            .field("kernel_dimension", &self.kernel_dimension())
            .finish()
    }
}

impl<F: Field> BimoduleResolution<F> {
    pub fn kernel_dimension(&self) -> usize {
        self.kernel.len()
    }

    pub fn rank(&self) -> usize {
        self.generator_images.len()
    }

    /// Length of the cone: two when `K ≠ 0`.
    pub fn length(&self) -> usize {
        if self.kernel.is_empty() {
            1
        } else {
            2
        }
    }

    /// Keys of `(A ⊗ A)^k` with `i + j ≤ w`.
    fn keys(&self, w: i64) -> Vec<Key> {
        let n = self.sig.base().dim();
        let mut out = Vec::new();
        for block in 0..self.rank() {
            for i in 0..=w {
                for j in 0..=(w - i) {
                    for p in 0..n {
                        for q in 0..n {
                            out.push((block, i, p, j, q));
                        }
                    }
                }
            }
        }
        out
    }

    /// `X_0 → A ⊗_R A`, `a ⊗ c ⊗ b ↦ a r_c ⊗ b`.
    fn aug_x(&self, key: &Key) -> Result<TensorElement<F>> {
        let &(block, i, p, j, q) = key;
        let left = mono(&self.sig, p, i)?.mul(&OrePoly::constant(&self.sig, &self.generator_images[block]))?;
        tensor_normalize(&self.sig, &[(left, mono(&self.sig, q, j)?)], false)
    }

    /// Solves `aug_X(φ_0(c)) = j(aug_Y(1 ⊗ c ⊗ 1)) = j(1 ⊗ r_c)` with `φ_0(c)`
    /// of weight at most one; free variables are zero.
    fn solve_lift(&self) -> Result<Vec<BiTensor<F>>> {
        let keys = self.keys(1);
        let columns: Vec<BTreeMap<(i64, i64, usize), F>> = keys.iter().map(|k| self.aug_x(k).map(|t| tensor_coords(&t))).collect::<Result<_>>()?;
        let mut lifts = Vec::with_capacity(self.rank());
        for c in 0..self.rank() {
            let target = tensor_coords(&self.target(c)?);
            let mut index: BTreeMap<(i64, i64, usize), usize> = BTreeMap::new();
            for key in columns.iter().flat_map(|m| m.keys()).chain(target.keys()) {
                let len = index.len();
                index.entry(*key).or_insert(len);
            }
            let mut system = Matrix::zeros(index.len(), keys.len());
            for (col, m) in columns.iter().enumerate() {
                for (key, v) in m {
                    system[(index[key], col)] = v.clone();
                }
            }
            let mut rhs = vec![F::zero(); index.len()];
            for (key, v) in &target {
                rhs[index[key]] = v.clone();
            }
            let x = system.solve(&rhs)?.ok_or_else(|| Error::LiftFailed { degree: 0, detail: format!("no weight-one lift for generator {c}") })?;
            let mut lift = BTreeMap::new();
            for (key, v) in keys.iter().zip(x) {
                add_term(&mut lift, *key, v);
            }
            lifts.push(lift);
        }
        Ok(lifts)
    }

    fn target(&self, c: usize) -> Result<TensorElement<F>> {
        let y = tensor_normalize(&self.sig, &[(OrePoly::one(&self.sig), OrePoly::constant(&self.sig, &self.generator_images[c]))], true)?;
        map_j(&y)
    }

    /// `φ_0` on a basis element of `Y_0`.
    fn phi(&self, key: &Key) -> Result<BiTensor<F>> {
        let &(block, i, p, j, q) = key;
        sandwich(&self.sig, &mono(&self.sig, p, i)?, &self.lift[block], &mono(&self.sig, q, j)?)
    }

    /// `t^i κ t^j` inside `X_0` (`twisted = false`) or `Y_0` (`twisted = true`).
    fn kernel_element(&self, kappa: usize, i: i64, j: i64, twisted: bool) -> Result<BiTensor<F>> {
        let r = self.sig.base();
        let mut out = BTreeMap::new();
        let (ti, tj) = (OrePoly::t_power(&self.sig, i)?, OrePoly::t_power(&self.sig, j)?);
        for (block, a, b, lambda) in &self.kernel[kappa] {
            let ea = if twisted { self.sig.alpha().apply(&r.basis(*a)) } else { r.basis(*a) };
            let u = ti.mul(&OrePoly::constant(&self.sig, &ea))?;
            let v = OrePoly::constant(&self.sig, &r.basis(*b)).mul(&tj)?;
            add_pure(&mut out, *block, &u, &v, lambda);
        }
        Ok(out)
    }

    /// Certifies the cone on total weight `≤ w`: the lift, `d∘d = 0`,
    /// surjectivity of the augmentation onto `t`-degrees `≤ w`, and exactness
    /// at `C_0`, `C_1`, `C_2` by rank arithmetic.
    pub fn certificate(&self, w: i64) -> Result<CheckReport> {
        let mut report = CheckReport::new(format!("bimodule resolution of {} on weights ≤ {w}", self.sig.name()));
        let rdim = self.sig.base().dim();
        report.record(self.kernel_dh == HomDim::Finite(0), || "kernel is not projective".into());
        for c in 0..self.rank() {
            let mut image = TensorElement::zero(&self.sig, false);
            for (key, v) in &self.lift[c] {
                image = image.add(&self.aug_x(key)?.scale(v))?;
            }
            report.record(image == self.target(c)?, || format!("φ_0 does not lift j on generator {c}"));
        }
        let x0 = self.keys(w);
        let y0 = self.keys(w - 1);
        let x_index: HashMap<Key, usize> = x0.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let y_index: HashMap<Key, usize> = y0.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut outside = 0usize;
        let mut vectorize = |x: &BiTensor<F>, index: &HashMap<Key, usize>| -> Vec<F> {
            let mut v = vec![F::zero(); index.len()];
            for (key, c) in x {
                match index.get(key) {
                    Some(&pos) => v[pos] = c.clone(),
                    None => outside += 1,
                }
            }
            v
        };
        let mut x1 = Vec::new();
        let mut y1 = Vec::new();
        for kappa in 0..self.kernel.len() {
            for i in 0..=w {
                for j in 0..=(w - i) {
                    x1.push(vectorize(&self.kernel_element(kappa, i, j, false)?, &x_index));
                    if i + j < w {
                        y1.push(self.kernel_element(kappa, i, j, true)?);
                    }
                }
            }
        }
        let phi_y0: Vec<Vec<F>> = y0.iter().map(|k| self.phi(k).map(|p| vectorize(&p, &x_index))).collect::<Result<_>>()?;
        // d_2 in the ambient coordinates X_0 ⊕ Y_0 of C_1
        let mut d2 = Vec::with_capacity(y1.len());
        let mut phi_y1 = Vec::with_capacity(y1.len());
        for z in &y1 {
            let mut phi = BTreeMap::new();
            for (key, c) in z {
                for (k2, v) in self.phi(key)? {
                    add_term(&mut phi, k2, v * c.clone());
                }
            }
            let phi_v = vectorize(&phi, &x_index);
            let z_v = vectorize(z, &y_index);
            phi_y1.push(phi_v.clone());
            d2.push([phi_v, z_v.iter().map(|c| -c.clone()).collect()].concat());
        }
        report.record(outside == 0, || format!("{outside} coordinates fall outside the weight window"));
        let (dim_x0, dim_x1, dim_y0, dim_y1) = (x0.len(), x1.len(), y0.len(), y1.len());
        let x1_rank = span_rank(&x1, dim_x0);
        report.record(x1_rank == dim_x1, || format!("X_1 spanning set has rank {x1_rank} < {dim_x1}"));
        let y1_amb: Vec<Vec<F>> = y1.iter().map(|z| z.iter().fold(vec![F::zero(); dim_y0], |mut acc, (key, c)| {
            if let Some(&pos) = y_index.get(key) {
                acc[pos] = c.clone();
            }
            acc
        })).collect();
        report.record(span_rank(&y1_amb, dim_y0) == dim_y1, || "Y_1 spanning set is dependent".into());
        // φ maps Y_1 into X_1
        let x1_basis = Matrix::from_columns(&x1, dim_x0);
        for (idx, v) in phi_y1.iter().enumerate() {
            report.record(crate::linalg::in_span(&x1_basis, v), || format!("φ(Y_1 element {idx}) is not in X_1"));
        }
        // augmentation C_0 → A, coordinates (k, p) of e_p t^k with k ≤ w
        let mut aug_cols = Vec::with_capacity(dim_x0);
        for key in &x0 {
            let &(block, i, p, j, q) = key;
            let prod = mono(&self.sig, p, i)?.mul(&OrePoly::constant(&self.sig, &self.generator_images[block]))?.mul(&mono(&self.sig, q, j)?)?;
            let mut col = vec![F::zero(); (w as usize + 1) * rdim];
            for (k, a) in prod.terms() {
                for (pp, c) in a.iter().enumerate() {
                    col[k as usize * rdim + pp] = c.clone();
                }
            }
            aug_cols.push(col);
        }
        let aug = Matrix::from_columns(&aug_cols, (w as usize + 1) * rdim);
        let d1_cols: Vec<Vec<F>> = x1.iter().chain(&phi_y0).cloned().collect();
        let d1 = Matrix::from_columns(&d1_cols, dim_x0);
        let d1_amb = Matrix::identity(dim_x0).hstack(&Matrix::from_columns(&phi_y0, dim_x0));
        let d2m = Matrix::from_columns(&d2, dim_x0 + dim_y0);
        report.record(aug.mul(&d1).is_zero(), || "ε ∘ d_1 ≠ 0".into());
        report.record(d1_amb.mul(&d2m).is_zero(), || "d_1 ∘ d_2 ≠ 0".into());
        let (ra, r1, r2) = (aug.rank(), d1.rank(), d2m.rank());
        report.record(ra == aug.rows(), || format!("augmentation has rank {ra} < {}", aug.rows()));
        report.record(dim_x0 == ra + r1, || format!("not exact at C_0: {dim_x0} ≠ {ra} + {r1}"));
        let dim_c1 = dim_x1 + dim_y0;
        report.record(dim_c1 == r1 + r2, || format!("not exact at C_1: {dim_c1} ≠ {r1} + {r2}"));
        report.record(dim_y1 == r2, || format!("not exact at C_2: {dim_y1} ≠ {r2}"));
        Ok(report)
    }
}

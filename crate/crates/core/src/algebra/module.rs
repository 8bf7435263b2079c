//! Finite-dimensional right modules.
//!
//! Convention: a module element is a coordinate column `v`, and `v·a` is
//! `ρ(a) v`. Right modules satisfy `(v·a)·b = v·(ab)`, so the stored matrices
//! form an anti-representation: `ρ(b) ρ(a) = ρ(ab)`.

use std::sync::Arc;

use super::{AlgebraMorphism, FdAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{unit_vec, Matrix};
use crate::report::CheckReport;
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct RightModule<F> {
    algebra: Arc<FdAlgebra<F>>,
    dim: usize,
    action: Vec<Matrix<F>>,
    name: String,
}

impl<F: Field> RightModule<F> {
    pub fn new(algebra: Arc<FdAlgebra<F>>, dim: usize, action: Vec<Matrix<F>>) -> Result<Self> {
        if action.len() != algebra.dim() {
            return Err(Error::Dimension(format!("need {} action matrices, got {}", algebra.dim(), action.len())));
        }
        if let Some(m) = action.iter().find(|m| m.shape() != (dim, dim)) {
            return Err(Error::Dimension(format!("action matrix is {}x{}, module has dimension {dim}", m.rows(), m.cols())));
        }
        Ok(RightModule { algebra, dim, action, name: String::new() })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn zero_module(algebra: Arc<FdAlgebra<F>>) -> Self {
        let action = vec![Matrix::zeros(0, 0); algebra.dim()];
        RightModule { algebra, dim: 0, action, name: "0".into() }
    }

    /// The algebra acting on itself by right multiplication.
    pub fn regular(algebra: Arc<FdAlgebra<F>>) -> Self {
        let n = algebra.dim();
        let action = (0..n).map(|i| algebra.right_mult(&algebra.basis(i))).collect();
        RightModule { algebra, dim: n, action, name: "regular".into() }
    }

    /// `k` copies of the regular module.
    pub fn free(algebra: Arc<FdAlgebra<F>>, rank: usize) -> Self {
        let reg = Self::regular(algebra.clone());
        (0..rank).fold(Self::zero_module(algebra), |acc, _| acc.direct_sum(&reg)).with_name(format!("free rank {rank}"))
    }

    pub fn algebra(&self) -> &Arc<FdAlgebra<F>> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix<F>] {
        &self.action
    }

    /// `ρ(a)` for an arbitrary algebra element.
    pub fn rho(&self, a: &[F]) -> Matrix<F> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (c, r) in a.iter().zip(&self.action) {
            if !c.is_zero() {
                m = m.add(&r.scale(c));
            }
        }
        m
    }

    pub fn act(&self, v: &[F], a: &[F]) -> Vec<F> {
        self.rho(a).mul_vec(v)
    }

    /// `ρ(1) = I` and `ρ(e_j)ρ(e_i) = ρ(e_i e_j)` on all basis pairs.
    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::new("right module");
        let alg = &self.algebra;
        report.record(self.rho(alg.unit()) == Matrix::identity(self.dim), || "ρ(1) ≠ I".into());
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = self.action[j].mul(&self.action[i]);
                let rhs = self.rho(&alg.mul(&alg.basis(i), &alg.basis(j)));
                report.record(lhs == rhs, || format!("(m·{})·{} ≠ m·({}{})", alg.labels()[i], alg.labels()[j], alg.labels()[i], alg.labels()[j]));
            }
        }
        report
    }

    /// `M_α`: same space, `m ∘ a = m·α(a)`.
    pub fn twist(&self, alpha: &AlgebraMorphism<F>) -> Self {
        let action = (0..self.algebra.dim()).map(|i| self.rho(&alpha.apply(&self.algebra.basis(i)))).collect();
        RightModule { algebra: self.algebra.clone(), dim: self.dim, action, name: format!("{}_twisted", self.name) }
    }

    /// Restriction of scalars along `φ : B → A` where `self` is an `A`-module.
    pub fn restrict(&self, phi: &AlgebraMorphism<F>) -> Self {
        let b = phi.source().clone();
        let action = (0..b.dim()).map(|i| self.rho(&phi.apply(&b.basis(i)))).collect();
        RightModule { algebra: b, dim: self.dim, action, name: self.name.clone() }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let action = self.action.iter().zip(&other.action).map(|(a, b)| a.block_diag(b)).collect();
        RightModule { algebra: self.algebra.clone(), dim: self.dim + other.dim, action, name: format!("{}⊕{}", self.name, other.name) }
    }

    /// Smallest submodule containing the given vectors, as basis columns.
    pub fn generated_submodule(&self, vectors: &[Vec<F>]) -> Matrix<F> {
        let mut span: Vec<Vec<F>> = Vec::new();
        let mut basis = Matrix::zeros(self.dim, 0);
        let mut queue: Vec<Vec<F>> = vectors.to_vec();
        while let Some(v) = queue.pop() {
            if crate::linalg::in_span(&basis, &v) {
                continue;
            }
            span.push(v.clone());
            basis = Matrix::from_columns(&span, self.dim);
            for r in &self.action {
                queue.push(r.mul_vec(&v));
            }
        }
        basis
    }

    /// Whether the column span of `basis` is stable under the action.
    pub fn is_submodule(&self, basis: &Matrix<F>) -> bool {
        basis.columns().iter().all(|v| self.action.iter().all(|r| crate::linalg::in_span(basis, &r.mul_vec(v))))
    }

    /// The submodule spanned by the (independent) columns of `basis`, with the inclusion.
    pub fn submodule(&self, basis: &Matrix<F>) -> Result<(Self, ModuleMap<F>)> {
        if !self.is_submodule(basis) {
            return Err(Error::Invalid("span is not a submodule".into()));
        }
        let k = basis.cols();
        let mut action = Vec::with_capacity(self.action.len());
        for r in &self.action {
            let img = r.mul(basis);
            let coords = basis.solve_matrix(&img)?.ok_or_else(|| Error::Invalid("submodule coordinates".into()))?;
            action.push(coords);
        }
        let sub = RightModule { algebra: self.algebra.clone(), dim: k, action, name: format!("sub({})", self.name) };
        let incl = ModuleMap::new(sub.clone(), self.clone(), basis.clone())?;
        Ok((sub, incl))
    }

    /// Quotient by the submodule spanned by `basis`, with the projection.
    pub fn quotient(&self, basis: &Matrix<F>) -> Result<(Self, ModuleMap<F>)> {
        if !self.is_submodule(basis) {
            return Err(Error::Invalid("span is not a submodule".into()));
        }
        let n = self.dim;
        let sub_cols = basis.column_space();
        let k = sub_cols.cols();
        let (_, pivots) = sub_cols.hstack(&Matrix::identity(n)).rref();
        let complement: Vec<usize> = pivots.iter().filter(|&&p| p >= k).map(|&p| p - k).collect();
        let full = sub_cols.hstack(&Matrix::from_columns(&complement.iter().map(|&i| unit_vec(n, i)).collect::<Vec<_>>(), n));
        let inv = full.inverse().ok_or_else(|| Error::Invalid("quotient basis".into()))?;
        let proj = inv.submatrix(k..n, 0..n);
        let section = full.submatrix(0..n, k..n);
        let action = self.action.iter().map(|r| proj.mul(r).mul(&section)).collect();
        let quot = RightModule { algebra: self.algebra.clone(), dim: n - k, action, name: format!("quot({})", self.name) };
        let map = ModuleMap::new(self.clone(), quot.clone(), proj)?;
        Ok((quot, map))
    }

    /// Basis of `Hom(self, other)` as `other.dim × self.dim` matrices.
    pub fn hom_basis(&self, other: &Self) -> Vec<Matrix<F>> {
        let (m, n) = (self.dim, other.dim);
        if m == 0 || n == 0 {
            return Vec::new();
        }
        // unknown H (n×m) vectorised column-major: vec(H)[j*n + i] = H[i][j]
        // constraint H ρ_M(e) − ρ_N(e) H = 0
        let mut rows: Vec<Vec<F>> = Vec::new();
        for (rm, rn) in self.action.iter().zip(&other.action) {
            let lhs = rm.transpose().kron(&Matrix::identity(n));
            let rhs = Matrix::identity(m).kron(rn);
            let c = lhs.sub(&rhs);
            for i in 0..c.rows() {
                let row = c.row(i).to_vec();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let system = Matrix::from_rows(rows, m * n).expect("consistent rows");
        let k = if system.rows() == 0 { Matrix::identity(m * n) } else { system.kernel_basis() };
        k.columns().into_iter().map(|v| Matrix::from_fn(n, m, |i, j| v[j * n + i].clone())).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap<F> {
    source: RightModule<F>,
    target: RightModule<F>,
    matrix: Matrix<F>,
}

impl<F: Field> ModuleMap<F> {
    pub fn new(source: RightModule<F>, target: RightModule<F>, matrix: Matrix<F>) -> Result<Self> {
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(Error::Dimension(format!("module map is {}x{}, expected {}x{}", matrix.rows(), matrix.cols(), target.dim(), source.dim())));
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn source(&self) -> &RightModule<F> {
        &self.source
    }

    pub fn target(&self) -> &RightModule<F> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::new("module map");
        for (i, (rs, rt)) in self.source.action().iter().zip(self.target.action()).enumerate() {
            report.record(self.matrix.mul(rs) == rt.mul(&self.matrix), || format!("does not intertwine the action of basis element {i}"));
        }
        report
    }

    pub fn compose(&self, first: &Self) -> Result<Self> {
        Self::new(first.source.clone(), self.target.clone(), self.matrix.try_mul(&first.matrix)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn regular_module_examples() {
        let k = Arc::new(FdAlgebra::<Rational>::product_of_fields(1));
        let reg = RightModule::regular(k);
        assert_eq!(reg.dim(), 1);
        assert!(reg.check().passed());
        let t = Arc::new(FdAlgebra::<Rational>::upper_triangular(2));
        let reg = RightModule::regular(t.clone());
        assert_eq!(reg.dim(), 3);
        assert!(reg.check().passed());
        assert_eq!(reg.rho(t.unit()), Matrix::identity(3));
        // right multiplication by e12: e11 ↦ e12, e12 ↦ 0, e22 ↦ 0
        assert_eq!(reg.action()[1], Matrix::from_ints(3, 3, &[0, 0, 0, 1, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn twisting_examples() {
        let qq = Arc::new(FdAlgebra::<Rational>::product_of_fields(2));
        let swap = AlgebraMorphism::endo(qq.clone(), Matrix::from_ints(2, 2, &[0, 1, 1, 0])).unwrap();
        let s1 = RightModule::new(qq.clone(), 1, vec![Matrix::from_ints(1, 1, &[1]), Matrix::from_ints(1, 1, &[0])]).unwrap();
        let s2 = RightModule::new(qq.clone(), 1, vec![Matrix::from_ints(1, 1, &[0]), Matrix::from_ints(1, 1, &[1])]).unwrap();
        assert_eq!(s1.twist(&swap).action(), s2.action());
        assert_eq!(s1.twist(&AlgebraMorphism::identity(qq)).action(), s1.action());
        assert_eq!(s1.twist(&swap).twist(&swap.inverse().unwrap()).action(), s1.action());
    }

    #[test]
    fn hom_spaces() {
        let t = Arc::new(FdAlgebra::<Rational>::upper_triangular(2));
        let reg = RightModule::regular(t.clone());
        // End(T2_T2) ≅ T2
        assert_eq!(reg.hom_basis(&reg).len(), 3);
        let sub = reg.generated_submodule(&[t.basis(1)]);
        assert_eq!(sub.cols(), 1);
        let (quot, proj) = reg.quotient(&sub).unwrap();
        assert_eq!(quot.dim(), 2);
        assert!(quot.check().passed());
        assert!(proj.check().passed());
        let (s, incl) = reg.submodule(&sub).unwrap();
        assert!(s.check().passed() && incl.check().passed());
        assert_eq!(s.rho(&[q(0), q(0), q(1)]), Matrix::identity(1));
    }
}

//! Finite-dimensional unital associative algebras given by structure constants.
//!
//! An element is a coordinate column in the chosen basis `e_0, …, e_{n-1}`.
//! The product is `e_i · e_j = Σ_k c[i][j][k] e_k`; it is stored as the left
//! multiplication matrices `L_{e_i}` (column `j` of `L_{e_i}` is `e_i e_j`).

mod module;
mod structure;

use std::sync::Arc;

pub use module::{ModuleMap, RightModule};
pub use structure::{center, enveloping, is_two_sided_ideal, opposite, quotient_algebra, radical, simple_modules, Quotient};

use crate::error::{Error, Result};
use crate::linalg::{unit_vec, vec_add, Matrix};
use crate::report::CheckReport;
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct FdAlgebra<F> {
    name: String,
    labels: Vec<String>,
    left_mult: Vec<Matrix<F>>,
    unit: Vec<F>,
}

impl<F: Field> FdAlgebra<F> {
    /// `structure[i][j]` is the coordinate column of `e_i e_j`.
    pub fn new(name: impl Into<String>, labels: Vec<String>, structure: Vec<Vec<Vec<F>>>, unit: Vec<F>) -> Result<Self> {
        let n = labels.len();
        if structure.len() != n || unit.len() != n {
            return Err(Error::Dimension(format!("algebra of dimension {n} needs {n} structure rows and a unit of length {n}")));
        }
        let mut left_mult = Vec::with_capacity(n);
        for (i, row) in structure.into_iter().enumerate() {
            if row.len() != n || row.iter().any(|c| c.len() != n) {
                return Err(Error::Dimension(format!("structure constants for e_{i} have the wrong shape")));
            }
            left_mult.push(Matrix::from_columns(&row, n));
        }
        Ok(FdAlgebra { name: name.into(), labels, left_mult, unit })
    }

    /// The span of the given `k × k` matrices, which must be closed under
    /// multiplication and contain the identity.
    pub fn from_matrix_basis(name: impl Into<String>, labels: Vec<String>, basis: &[Matrix<F>]) -> Result<Self> {
        let n = basis.len();
        let vec_basis = Matrix::from_columns(&basis.iter().map(Matrix::vectorize).collect::<Vec<_>>(), basis[0].rows() * basis[0].cols());
        let coords = |m: &Matrix<F>| -> Result<Vec<F>> {
            vec_basis.solve(&m.vectorize())?.ok_or_else(|| Error::Invalid("matrix span is not closed under products".into()))
        };
        let structure = basis
            .iter()
            .map(|a| basis.iter().map(|b| coords(&a.mul(b))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let unit = coords(&Matrix::identity(basis[0].rows()))?;
        debug_assert_eq!(unit.len(), n);
        Self::new(name, labels, structure, unit)
    }

    /// `F^k` with componentwise multiplication.
    pub fn product_of_fields(k: usize) -> Self {
        let labels = (1..=k).map(|i| format!("e{i}")).collect();
        let structure = (0..k)
            .map(|i| (0..k).map(|j| if i == j { unit_vec(k, i) } else { vec![F::zero(); k] }).collect())
            .collect();
        let name = if k == 1 { "Q".to_string() } else { format!("Q^{k}") };
        Self::new(name, labels, structure, vec![F::one(); k]).expect("well-formed")
    }

    /// `F[x]/(x^k)` in the basis `1, x, …, x^{k-1}`.
    pub fn truncated_polynomial(k: usize) -> Self {
        let labels = (0..k).map(|i| match i {
            0 => "1".to_string(),
            1 => "eps".to_string(),
            _ => format!("eps^{i}"),
        }).collect();
        let structure = (0..k)
            .map(|i| (0..k).map(|j| if i + j < k { unit_vec(k, i + j) } else { vec![F::zero(); k] }).collect())
            .collect();
        Self::new(format!("Q[eps]/(eps^{k})"), labels, structure, unit_vec(k, 0)).expect("well-formed")
    }

    /// Upper triangular `k × k` matrices with matrix-unit basis `e_ij`, `i ≤ j`.
    pub fn upper_triangular(k: usize) -> Self {
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        for i in 0..k {
            for j in i..k {
                let mut m = Matrix::zeros(k, k);
                m[(i, j)] = F::one();
                basis.push(m);
                labels.push(format!("e{}{}", i + 1, j + 1));
            }
        }
        Self::from_matrix_basis(format!("T{k}"), labels, &basis).expect("triangular matrices form an algebra")
    }

    /// Full matrix algebra `M_k(F)` with matrix units.
    pub fn full_matrix(k: usize) -> Self {
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        for i in 0..k {
            for j in 0..k {
                let mut m = Matrix::zeros(k, k);
                m[(i, j)] = F::one();
                basis.push(m);
                labels.push(format!("e{}{}", i + 1, j + 1));
            }
        }
        Self::from_matrix_basis(format!("M{k}"), labels, &basis).expect("matrix algebra")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[F] {
        &self.unit
    }

    pub fn one(&self) -> Vec<F> {
        self.unit.clone()
    }

    pub fn zero(&self) -> Vec<F> {
        vec![F::zero(); self.dim()]
    }

    pub fn basis(&self, i: usize) -> Vec<F> {
        unit_vec(self.dim(), i)
    }

    /// Structure constant `c[i][j][k]`.
    pub fn structure(&self, i: usize, j: usize, k: usize) -> &F {
        &self.left_mult[i][(k, j)]
    }

    pub fn basis_left_mult(&self, i: usize) -> &Matrix<F> {
        &self.left_mult[i]
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_mult(&self, x: &[F]) -> Matrix<F> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.left_mult[i].scale(c));
            }
        }
        m
    }

    /// Matrix of `y ↦ y x`.
    pub fn right_mult(&self, x: &[F]) -> Matrix<F> {
        let n = self.dim();
        Matrix::from_columns(&(0..n).map(|j| self.mul(&self.basis(j), x)).collect::<Vec<_>>(), n)
    }

    pub fn mul(&self, x: &[F], y: &[F]) -> Vec<F> {
        let n = self.dim();
        let mut out = vec![F::zero(); n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let col = self.left_mult[i].mul_vec(y);
            for (o, v) in out.iter_mut().zip(col) {
                if !v.is_zero() {
                    *o = o.clone() + a.clone() * v;
                }
            }
        }
        out
    }

    pub fn add(&self, x: &[F], y: &[F]) -> Vec<F> {
        vec_add(x, y)
    }

    pub fn pow(&self, x: &[F], k: usize) -> Vec<F> {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    pub fn format_element(&self, x: &[F]) -> String {
        let terms: Vec<String> = x
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| if c.is_one() { l.clone() } else { format!("({c})·{l}") })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Associativity on all basis triples and two-sided unitality.
    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::new(format!("algebra {}", self.name));
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let eij = self.mul(&self.basis(i), &self.basis(j));
                for k in 0..n {
                    let lhs = self.mul(&eij, &self.basis(k));
                    let rhs = self.mul(&self.basis(i), &self.mul(&self.basis(j), &self.basis(k)));
                    report.record(lhs == rhs, || format!("associativity fails on ({}, {}, {})", self.labels[i], self.labels[j], self.labels[k]));
                }
            }
        }
        for i in 0..n {
            let e = self.basis(i);
            report.record(self.mul(&self.unit, &e) == e, || format!("u·{} ≠ {}", self.labels[i], self.labels[i]));
            report.record(self.mul(&e, &self.unit) == e, || format!("{}·u ≠ {}", self.labels[i], self.labels[i]));
        }
        report
    }
}

/// An algebra homomorphism in coordinates: column `i` is the image of `e_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraMorphism<F> {
    source: Arc<FdAlgebra<F>>,
    target: Arc<FdAlgebra<F>>,
    matrix: Matrix<F>,
}

impl<F: Field> AlgebraMorphism<F> {
    pub fn new(source: Arc<FdAlgebra<F>>, target: Arc<FdAlgebra<F>>, matrix: Matrix<F>) -> Result<Self> {
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(Error::Dimension(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        Ok(AlgebraMorphism { source, target, matrix })
    }

    pub fn endo(algebra: Arc<FdAlgebra<F>>, matrix: Matrix<F>) -> Result<Self> {
        Self::new(algebra.clone(), algebra, matrix)
    }

    pub fn identity(algebra: Arc<FdAlgebra<F>>) -> Self {
        let n = algebra.dim();
        AlgebraMorphism { source: algebra.clone(), target: algebra, matrix: Matrix::identity(n) }
    }

    /// Conjugation `a ↦ w a w⁻¹` by an invertible element `w`.
    pub fn inner(algebra: Arc<FdAlgebra<F>>, w: &[F]) -> Result<Self> {
        let w_inv = inverse_element(&algebra, w).ok_or(Error::NotInvertible)?;
        let n = algebra.dim();
        let cols: Vec<Vec<F>> = (0..n).map(|i| algebra.mul(&algebra.mul(w, &algebra.basis(i)), &w_inv)).collect();
        Self::endo(algebra, Matrix::from_columns(&cols, n))
    }

    pub fn source(&self) -> &Arc<FdAlgebra<F>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FdAlgebra<F>> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn apply(&self, x: &[F]) -> Vec<F> {
        self.matrix.mul_vec(x)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_square() && self.matrix == Matrix::identity(self.matrix.rows())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        AlgebraMorphism { source: other.source.clone(), target: self.target.clone(), matrix: self.matrix.mul(&other.matrix) }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.matrix.inverse().ok_or(Error::NotInvertible)?;
        Ok(AlgebraMorphism { source: self.target.clone(), target: self.source.clone(), matrix: inv })
    }

    pub fn is_invertible(&self) -> bool {
        self.matrix.is_square() && self.matrix.rank() == self.matrix.rows()
    }

    /// `n`-th power of an endomorphism; negative powers use the inverse.
    pub fn power(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::identity(self.source.clone());
        for _ in 0..n.unsigned_abs() {
            acc = base.compose(&acc);
        }
        Ok(acc)
    }

    /// Multiplicativity on basis pairs and `φ(1) = 1`.
    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::new("algebra morphism");
        let (s, t) = (&self.source, &self.target);
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let lhs = self.apply(&s.mul(&s.basis(i), &s.basis(j)));
                let rhs = t.mul(&self.apply(&s.basis(i)), &self.apply(&s.basis(j)));
                report.record(lhs == rhs, || format!("φ({}·{}) ≠ φ({})φ({})", s.labels()[i], s.labels()[j], s.labels()[i], s.labels()[j]));
            }
        }
        report.record(self.apply(s.unit()) == t.unit(), || "φ(1) ≠ 1".into());
        report
    }
}

/// Inverse of an algebra element, if it exists.
pub fn inverse_element<F: Field>(algebra: &FdAlgebra<F>, w: &[F]) -> Option<Vec<F>> {
    let x = algebra.left_mult(w).solve(algebra.unit()).ok()??;
    (algebra.mul(&x, w) == algebra.unit()).then_some(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivationFlavor {
    /// `δ(ab) = δ(a)b + α(a)δ(b)`.
    Standard,
    /// `δ(ab) = δ(a)α(b) + aδ(b)`.
    Opposite,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaDerivation<F> {
    alpha: AlgebraMorphism<F>,
    matrix: Matrix<F>,
    flavor: DerivationFlavor,
}

impl<F: Field> SigmaDerivation<F> {
    pub fn new(alpha: AlgebraMorphism<F>, matrix: Matrix<F>, flavor: DerivationFlavor) -> Result<Self> {
        let n = alpha.source().dim();
        if matrix.shape() != (n, n) {
            return Err(Error::Dimension(format!("derivation matrix must be {n}x{n}")));
        }
        Ok(SigmaDerivation { alpha, matrix, flavor })
    }

    pub fn zero(alpha: AlgebraMorphism<F>) -> Self {
        let n = alpha.source().dim();
        SigmaDerivation { alpha, matrix: Matrix::zeros(n, n), flavor: DerivationFlavor::Standard }
    }

    /// Inner α-derivation `a ↦ c a − α(a) c`.
    pub fn inner(alpha: AlgebraMorphism<F>, c: &[F]) -> Self {
        let alg = alpha.source().clone();
        let n = alg.dim();
        let cols: Vec<Vec<F>> = (0..n)
            .map(|i| {
                let a = alg.basis(i);
                crate::linalg::vec_sub(&alg.mul(c, &a), &alg.mul(&alpha.apply(&a), c))
            })
            .collect();
        SigmaDerivation { alpha, matrix: Matrix::from_columns(&cols, n), flavor: DerivationFlavor::Standard }
    }

    pub fn algebra(&self) -> &Arc<FdAlgebra<F>> {
        self.alpha.source()
    }

    pub fn alpha(&self) -> &AlgebraMorphism<F> {
        &self.alpha
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn flavor(&self) -> DerivationFlavor {
        self.flavor
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, x: &[F]) -> Vec<F> {
        self.matrix.mul_vec(x)
    }

    /// The twisted Leibniz rule of the flavor on all basis pairs, plus `δ(1) = 0`.
    pub fn check(&self) -> CheckReport {
        let alg = self.algebra().clone();
        let mut report = CheckReport::new(match self.flavor {
            DerivationFlavor::Standard => "alpha-derivation",
            DerivationFlavor::Opposite => "opposite alpha-derivation",
        });
        let n = alg.dim();
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (alg.basis(i), alg.basis(j));
                let lhs = self.apply(&alg.mul(&a, &b));
                let rhs = match self.flavor {
                    DerivationFlavor::Standard => vec_add(&alg.mul(&self.apply(&a), &b), &alg.mul(&self.alpha.apply(&a), &self.apply(&b))),
                    DerivationFlavor::Opposite => vec_add(&alg.mul(&self.apply(&a), &self.alpha.apply(&b)), &alg.mul(&a, &self.apply(&b))),
                };
                report.record(lhs == rhs, || {
                    format!(
                        "Leibniz fails on ({}, {}): δ(ab) = {} but rule gives {}",
                        alg.labels()[i],
                        alg.labels()[j],
                        alg.format_element(&lhs),
                        alg.format_element(&rhs)
                    )
                });
            }
        }
        let d1 = self.apply(alg.unit());
        report.record(d1.iter().all(|x| x.is_zero()), || format!("δ(1) = {} ≠ 0", alg.format_element(&d1)));
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type A = FdAlgebra<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn catalogue_algebras_are_valid() {
        for a in [A::product_of_fields(1), A::product_of_fields(2), A::upper_triangular(2), A::truncated_polynomial(2), A::full_matrix(2)] {
            let r = a.check();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn non_unital_tensor_fails() {
        let a = A::new("bad", vec!["e".into()], vec![vec![vec![q(1)]]], vec![q(0)]).unwrap();
        let r = a.check();
        assert!(!r.passed());
        assert!(r.first_witness().unwrap().contains("u·"));
    }

    #[test]
    fn triangular_structure_constants() {
        let t = A::upper_triangular(2);
        assert_eq!(t.labels(), &["e11", "e12", "e22"]);
        // e11·e12 = e12, e12·e22 = e12, e12·e11 = 0
        assert_eq!(t.mul(&t.basis(0), &t.basis(1)), t.basis(1));
        assert_eq!(t.mul(&t.basis(1), &t.basis(2)), t.basis(1));
        assert_eq!(t.mul(&t.basis(1), &t.basis(0)), t.zero());
        assert_eq!(t.unit(), &[q(1), q(0), q(1)]);
    }

    #[test]
    fn derivation_examples() {
        let dual = Arc::new(A::truncated_polynomial(2));
        let id = AlgebraMorphism::identity(dual.clone());
        assert!(SigmaDerivation::zero(id.clone()).check().passed());
        // δ(1) = 0, δ(ε) = 1: δ(ε²) = 0 but δ(ε)ε + εδ(ε) = 2ε
        let bad = SigmaDerivation::new(id, Matrix::from_ints(2, 2, &[0, 1, 0, 0]), DerivationFlavor::Standard).unwrap();
        assert!(!bad.check().passed());
        let qq = Arc::new(A::product_of_fields(2));
        let swap = AlgebraMorphism::endo(qq, Matrix::from_ints(2, 2, &[0, 1, 1, 0])).unwrap();
        assert!(swap.check().passed());
        assert!(SigmaDerivation::zero(swap).check().passed());
    }

    #[test]
    fn inner_automorphisms_and_derivations() {
        let t = Arc::new(A::upper_triangular(2));
        let w = vec![q(1), q(1), q(2)];
        let alpha = AlgebraMorphism::inner(t.clone(), &w).unwrap();
        assert!(alpha.check().passed());
        assert!(alpha.is_invertible());
        let delta = SigmaDerivation::inner(alpha.clone(), &t.basis(1));
        assert!(delta.check().passed());
        assert!(!delta.is_zero());
        assert!(alpha.compose(&alpha.inverse().unwrap()).is_identity());
        assert_eq!(alpha.power(-2).unwrap().compose(&alpha.power(2).unwrap()).matrix(), &Matrix::identity(3));
    }
}

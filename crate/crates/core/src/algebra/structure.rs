//! Opposite and enveloping algebras, radical, semisimple quotient and simples.

use std::sync::Arc;

use super::{FdAlgebra, RightModule};
use crate::error::{Error, Result};
use crate::linalg::{in_span, unit_vec, vec_scale, vec_sub, Matrix};
use crate::scalar::Field;

/// `A^op` with `c^op[i][j][k] = c[j][i][k]` and the same unit.
pub fn opposite<F: Field>(a: &FdAlgebra<F>) -> FdAlgebra<F> {
    let n = a.dim();
    let structure = (0..n).map(|i| (0..n).map(|j| a.mul(&a.basis(j), &a.basis(i))).collect()).collect();
    FdAlgebra::new(format!("{}^op", a.name()), a.labels().to_vec(), structure, a.one()).expect("same shape")
}

/// `A ⊗ A^op` in the basis `e_i ⊗ e_j` (index `i·n + j`).
///
/// `(e_i ⊗ e_j)(e_k ⊗ e_l) = e_i e_k ⊗ e_l e_j`, so the left multiplication
/// matrix of `e_i ⊗ e_j` is `L_{e_i} ⊗ R_{e_j}`.
pub fn enveloping<F: Field>(a: &FdAlgebra<F>) -> FdAlgebra<F> {
    let n = a.dim();
    let rights: Vec<Matrix<F>> = (0..n).map(|j| a.right_mult(&a.basis(j))).collect();
    let mut structure = Vec::with_capacity(n * n);
    let mut labels = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let l = a.basis_left_mult(i).kron(&rights[j]);
            structure.push(l.columns());
            labels.push(format!("{}⊗{}", a.labels()[i], a.labels()[j]));
        }
    }
    let unit = Matrix::from_columns(&[a.one()], n).kron(&Matrix::from_columns(&[a.one()], n)).column(0);
    FdAlgebra::new(format!("{}^e", a.name()), labels, structure, unit).expect("kronecker structure")
}

/// Basis (columns) of `{x : tr(L_{x e_j}) = 0 for all j}`, the Jacobson radical
/// in characteristic zero.
pub fn radical<F: Field>(a: &FdAlgebra<F>) -> Matrix<F> {
    let n = a.dim();
    let traces: Vec<F> = (0..n).map(|k| {
        let l = a.basis_left_mult(k);
        (0..n).fold(F::zero(), |acc, i| acc + l[(i, i)].clone())
    }).collect();
    let form = Matrix::from_fn(n, n, |j, i| {
        let prod = a.mul(&a.basis(i), &a.basis(j));
        prod.iter().zip(&traces).fold(F::zero(), |acc, (c, t)| acc + c.clone() * t.clone())
    });
    form.kernel_basis()
}

pub fn is_two_sided_ideal<F: Field>(a: &FdAlgebra<F>, basis: &Matrix<F>) -> bool {
    basis.columns().iter().all(|v| {
        (0..a.dim()).all(|i| {
            let e = a.basis(i);
            in_span(basis, &a.mul(&e, v)) && in_span(basis, &a.mul(v, &e))
        })
    })
}

/// Basis (columns) of the center.
pub fn center<F: Field>(a: &FdAlgebra<F>) -> Matrix<F> {
    let n = a.dim();
    let mut system = Matrix::zeros(0, n);
    for i in 0..n {
        let e = a.basis(i);
        system = system.vstack(&a.left_mult(&e).sub(&a.right_mult(&e)));
    }
    system.kernel_basis()
}

/// `B = A/I` with projection `π : A → B` and a linear section `s : B → A`.
#[derive(Clone, Debug)]
pub struct Quotient<F> {
    pub algebra: FdAlgebra<F>,
    pub projection: Matrix<F>,
    pub section: Matrix<F>,
}

pub fn quotient_algebra<F: Field>(a: &FdAlgebra<F>, ideal: &Matrix<F>) -> Result<Quotient<F>> {
    if !is_two_sided_ideal(a, ideal) {
        return Err(Error::Invalid("quotient by a subspace that is not a two-sided ideal".into()));
    }
    let n = a.dim();
    let ideal = if ideal.cols() == 0 { Matrix::zeros(n, 0) } else { ideal.column_space() };
    let k = ideal.cols();
    let (_, pivots) = ideal.hstack(&Matrix::identity(n)).rref();
    let complement: Vec<usize> = pivots.iter().filter(|&&p| p >= k).map(|&p| p - k).collect();
    let section = Matrix::from_columns(&complement.iter().map(|&i| unit_vec(n, i)).collect::<Vec<_>>(), n);
    let inv = ideal.hstack(&section).inverse().ok_or_else(|| Error::Invalid("quotient basis".into()))?;
    let projection = inv.submatrix(k..n, 0..n);
    let m = n - k;
    let structure = (0..m)
        .map(|i| (0..m).map(|j| projection.mul_vec(&a.mul(&section.column(i), &section.column(j)))).collect())
        .collect();
    let labels = complement.iter().map(|&i| a.labels()[i].clone()).collect();
    let algebra = FdAlgebra::new(format!("{}/I", a.name()), labels, structure, projection.mul_vec(a.unit()))?;
    Ok(Quotient { algebra, projection, section })
}

/// Minimal polynomial of `x` (ascending coefficients, monic).
fn minimal_polynomial<F: Field>(a: &FdAlgebra<F>, x: &[F]) -> Vec<F> {
    let n = a.dim();
    let mut powers = vec![a.one()];
    loop {
        let next = a.mul(powers.last().unwrap(), x);
        let basis = Matrix::from_columns(&powers, n);
        if let Ok(Some(c)) = basis.solve(&next) {
            let mut poly: Vec<F> = c.into_iter().map(|v| -v).collect();
            poly.push(F::one());
            return poly;
        }
        powers.push(next);
    }
}

fn eval_poly_at<F: Field>(a: &FdAlgebra<F>, poly_roots_except: &[F], x: &[F]) -> Vec<F> {
    poly_roots_except.iter().fold(a.one(), |acc, mu| a.mul(&acc, &vec_sub(x, &vec_scale(a.unit(), mu))))
}

/// Primitive central idempotents of a split semisimple algebra.
fn central_idempotents<F: Field>(b: &FdAlgebra<F>) -> Result<Vec<Vec<F>>> {
    let z = center(b);
    let s = z.cols();
    if s <= 1 {
        return Ok(vec![b.one()]);
    }
    for attempt in 1..=8i64 {
        let mut elem = b.zero();
        for k in 0..s {
            let c = F::from_int((k as i64 + 1).pow(attempt as u32 % 3 + 1) + attempt * (k as i64));
            elem = crate::linalg::vec_add(&elem, &vec_scale(&z.column(k), &c));
        }
        let mp = minimal_polynomial(b, &elem);
        let roots = F::split_roots(&mp)
            .ok_or_else(|| Error::NotSplit(format!("central element has minimal polynomial with an irreducible factor of degree > 1 in {}", b.name())))?;
        if roots.len() != s {
            continue;
        }
        let mut idempotents = Vec::with_capacity(s);
        for (i, lambda) in roots.iter().enumerate() {
            let others: Vec<F> = roots.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, m)| m.clone()).collect();
            let denom = others.iter().fold(F::one(), |acc, mu| acc * (lambda.clone() - mu.clone()));
            idempotents.push(vec_scale(&eval_poly_at(b, &others, &elem), &(F::one() / denom)));
        }
        return Ok(idempotents);
    }
    Err(Error::NotSplit(format!("could not separate the center of {}", b.name())))
}

fn isqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

/// An element `x` of the block `eB` whose right ideal `xB` has dimension `d`.
fn minimal_right_ideal_generator<F: Field>(b: &FdAlgebra<F>, e: &[F], d: usize) -> Result<Vec<F>> {
    let n = b.dim();
    let ideal_dim = |x: &[F]| b.left_mult(x).rank();
    let mut candidates: Vec<Vec<F>> = Vec::new();
    for i in 0..n {
        candidates.push(b.mul(e, &b.basis(i)));
        for j in 0..n {
            candidates.push(b.mul(&b.mul(e, &b.basis(i)), &b.basis(j)));
        }
    }
    for _round in 0..3 {
        let mut best: Option<(usize, Vec<F>)> = None;
        for x in &candidates {
            let r = ideal_dim(x);
            if r == d {
                return Ok(x.clone());
            }
            if r > d && best.as_ref().is_none_or(|(br, _)| r < *br) {
                best = Some((r, x.clone()));
            }
        }
        let Some((_, x)) = best else { break };
        let mp = minimal_polynomial(b, &x);
        let Some(roots) = F::split_roots(&mp) else { break };
        let mut next = Vec::new();
        for lambda in roots {
            let y = vec_sub(&x, &vec_scale(e, &lambda));
            if y.iter().any(|c| !c.is_zero()) {
                for i in 0..n {
                    next.push(b.mul(&y, &b.basis(i)));
                }
                next.push(y);
            }
        }
        candidates = next;
    }
    Err(Error::NotSplit(format!("no minimal right ideal found in a simple block of {}", b.name())))
}

/// One simple right module per block of the semisimple quotient `A/rad(A)`.
pub fn simple_modules<F: Field>(a: &Arc<FdAlgebra<F>>) -> Result<Vec<RightModule<F>>> {
    let rad = radical(a);
    let quot = quotient_algebra(a, &rad)?;
    let b = &quot.algebra;
    let mut simples = Vec::new();
    for (idx, e) in central_idempotents(b)?.into_iter().enumerate() {
        let block_dim = b.left_mult(&e).rank();
        let d = isqrt(block_dim).ok_or_else(|| Error::NotSplit(format!("block of dimension {block_dim} is not a full matrix algebra")))?;
        let x = minimal_right_ideal_generator(b, &e, d)?;
        let ideal = b.left_mult(&x).column_space();
        let mut action = Vec::with_capacity(a.dim());
        for i in 0..a.dim() {
            let image = quot.projection.mul_vec(&a.basis(i));
            let moved = b.right_mult(&image).mul(&ideal);
            action.push(ideal.solve_matrix(&moved)?.expect("right ideal is stable"));
        }
        simples.push(RightModule::new(a.clone(), d, action)?.with_name(format!("S{}", idx + 1)));
    }
    Ok(simples)
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
    fn opposite_examples() {
        let qq = A::product_of_fields(2);
        assert!(opposite(&qq).check().passed());
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(opposite(&qq).mul(&qq.basis(i), &qq.basis(j)), qq.mul(&qq.basis(i), &qq.basis(j)));
            }
        }
        let t = A::upper_triangular(2);
        let top = opposite(&t);
        assert!(top.check().passed());
        // e12 ·op e11 = e11 · e12 = e12
        assert_eq!(top.mul(&t.basis(1), &t.basis(0)), t.basis(1));
        let back = opposite(&top);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(back.mul(&t.basis(i), &t.basis(j)), t.mul(&t.basis(i), &t.basis(j)));
            }
        }
    }

    #[test]
    fn enveloping_examples() {
        let k = A::product_of_fields(1);
        assert_eq!(enveloping(&k).dim(), 1);
        let qq = A::product_of_fields(2);
        let e = enveloping(&qq);
        assert_eq!(e.dim(), 4);
        assert!(e.check().passed());
        assert_eq!(e.unit(), &[q(1), q(1), q(1), q(1)]);
        assert_eq!(center(&e).cols(), 4);
        let t = enveloping(&A::upper_triangular(2));
        assert_eq!(t.dim(), 9);
        assert!(t.check().passed());
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(&A::product_of_fields(2)).cols(), 0);
        let r = radical(&A::truncated_polynomial(2));
        assert_eq!(r, Matrix::from_ints(2, 1, &[0, 1]));
        let t = A::upper_triangular(2);
        let r = radical(&t);
        assert_eq!(r.cols(), 1);
        assert!(in_span(&r, &t.basis(1)));
        assert!(is_two_sided_ideal(&t, &r));
    }

    #[test]
    fn simple_module_examples() {
        let qq = Arc::new(A::product_of_fields(2));
        let s = simple_modules(&qq).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].action()[0], Matrix::from_ints(1, 1, &[1]));
        assert_eq!(s[0].action()[1], Matrix::from_ints(1, 1, &[0]));
        assert_eq!(s[1].action()[1], Matrix::from_ints(1, 1, &[1]));

        let t = Arc::new(A::upper_triangular(2));
        let s = simple_modules(&t).unwrap();
        assert_eq!(s.len(), 2);
        for m in &s {
            assert_eq!(m.dim(), 1);
            assert!(m.check().passed());
            assert!(m.action()[1].is_zero());
        }
        let e11: Vec<_> = s.iter().map(|m| m.action()[0][(0, 0)].clone()).collect();
        assert!(e11.contains(&q(1)) && e11.contains(&q(0)));

        let d = Arc::new(A::truncated_polynomial(2));
        let s = simple_modules(&d).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].action()[1].is_zero());
    }

    #[test]
    fn matrix_algebra_has_two_dimensional_simple() {
        let m2 = Arc::new(A::full_matrix(2));
        let s = simple_modules(&m2).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].dim(), 2);
        assert!(s[0].check().passed());
        let sub = s[0].generated_submodule(&[unit_vec(2, 0)]);
        assert_eq!(sub.cols(), 2);
    }

    #[test]
    fn gaussian_rationals_are_not_split() {
        // Q(i) = Q[x]/(x^2 + 1)
        let structure = vec![
            vec![vec![q(1), q(0)], vec![q(0), q(1)]],
            vec![vec![q(0), q(1)], vec![q(-1), q(0)]],
        ];
        let qi = Arc::new(A::new("Q(i)", vec!["1".into(), "i".into()], structure, vec![q(1), q(0)]).unwrap());
        assert!(qi.check().passed());
        // center is 2-dimensional, its generic element has minimal polynomial x^2 + c
        assert!(matches!(simple_modules(&qi), Err(Error::NotSplit(_))));
    }
}

use rayon::prelude::*;
use serde::Serialize;

use super::{sparse, AlgebraPresentation, Arrow, Matrix, Quiver, SubspaceBasis};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Dimension up to which [`radical`] re-verifies its output.
pub const RADICAL_CHECK_BOUND: usize = 256;

/// `T_{ij} = tr(L_{e_i e_j})`, with `L` the left regular representation.
pub fn trace_form<F: Field>(a: &AlgebraPresentation<F>) -> Matrix<F> {
    let d = a.dim();
    let traces: Vec<F> = (0..d).into_par_iter().map(|k| a.left_trace(k)).collect();
    let rows: Vec<Vec<F>> = (0..d)
        .into_par_iter()
        .map(|i| {
            (0..d)
                .map(|j| {
                    let mut t = F::zero();
                    for (k, c) in a.basis_product(i, j) {
                        if !traces[*k as usize].is_zero() {
                            t.mul_add_assign(c, &traces[*k as usize]);
                        }
                    }
                    t
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(d, rows)
}

/// `dim A / rad A`, the rank of the trace form. Repeated rows are dropped
/// before elimination, which matters for monomial algebras whose trace form
/// has far fewer distinct rows than the dimension.
pub fn semisimple_rank<F: Field>(a: &AlgebraPresentation<F>) -> usize {
    let t = trace_form(a);
    let mut rows = t.row_vecs();
    rows.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    rows.dedup();
    Matrix::from_rows(a.dim(), rows).rank()
}

/// The Jacobson radical as the kernel of the trace form, valid in
/// characteristic zero. For `dim A ≤ 256` the result is re-checked to be a
/// nilpotent two-sided ideal with semisimple quotient.
pub fn radical<F: Field>(a: &AlgebraPresentation<F>) -> Result<SubspaceBasis<F>> {
    let rad = radical_unchecked(a);
    if a.dim() <= RADICAL_CHECK_BOUND {
        check_radical(a, &rad)?;
    }
    Ok(rad)
}

pub fn radical_unchecked<F: Field>(a: &AlgebraPresentation<F>) -> SubspaceBasis<F> {
    SubspaceBasis::from_spanning(a.dim(), trace_form(a).nullspace())
}

/// Checks that `rad` is a nilpotent two-sided ideal and that `A / rad` has
/// a nondegenerate trace form.
pub fn check_radical<F: Field>(a: &AlgebraPresentation<F>, rad: &SubspaceBasis<F>) -> Result<()> {
    let d = a.dim();
    let closed = rad.rows().par_iter().all(|r| {
        let rs = sparse(r);
        (0..d).all(|i| {
            let e = [(i as u32, F::one())];
            rad.contains(&a.mul_sparse(&e, &rs)) && rad.contains(&a.mul_sparse(&rs, &e))
        })
    });
    if !closed {
        return Err(Error::MalformedAlgebra("trace-form radical is not a two-sided ideal".into()));
    }
    let powers = radical_powers(a, rad);
    if powers.last().is_some_and(|p| !p.is_zero()) {
        return Err(Error::MalformedAlgebra("trace-form radical is not nilpotent".into()));
    }
    let q = a.quotient(rad);
    if semisimple_rank(&q) != q.dim() {
        return Err(Error::MalformedAlgebra("quotient by the trace-form radical is not semisimple".into()));
    }
    Ok(())
}

/// Span of all products `u v` with `u` from `left` and `v` from `right`.
pub fn product_span<F: Field>(a: &AlgebraPresentation<F>, left: &[Vec<F>], right: &[Vec<F>]) -> SubspaceBasis<F> {
    let rs: Vec<Vec<(u32, F)>> = right.iter().map(|v| sparse(v)).collect();
    let products: Vec<Vec<Vec<F>>> = left
        .par_iter()
        .map(|u| {
            let us = sparse(u);
            rs.iter().map(|v| a.mul_sparse(&us, v)).collect()
        })
        .collect();
    let mut span = SubspaceBasis::zero(a.dim());
    for p in products.into_iter().flatten() {
        span.insert(p);
    }
    span
}

/// `[rad, rad², …, rad^l = 0]`; the list always ends with the zero space.
///
/// `rad^{k+1}` is computed as `rad^k · G` for a complement `G` of `rad²` in
/// `rad`: products of at least `k + 1` generators span `rad^{k+1}`.
pub fn radical_powers<F: Field>(a: &AlgebraPresentation<F>, rad: &SubspaceBasis<F>) -> Vec<SubspaceBasis<F>> {
    let mut powers = vec![rad.clone()];
    if rad.is_zero() {
        return powers;
    }
    let square = product_span(a, rad.rows(), rad.rows());
    let mut generators = Vec::new();
    let mut probe = square.clone();
    for r in rad.rows() {
        if probe.insert(r.clone()) {
            generators.push(r.clone());
        }
    }
    let mut current = square;
    while !current.is_zero() {
        let next = product_span(a, current.rows(), &generators);
        powers.push(current);
        current = next;
    }
    powers.push(current);
    powers
}

/// Least `l` with `(rad A)^l = 0`; semisimple algebras have length 1.
pub fn loewy_length<F: Field>(a: &AlgebraPresentation<F>) -> Result<usize> {
    let rad = radical(a)?;
    Ok(loewy_length_from_powers(&radical_powers(a, &rad)))
}

pub fn loewy_length_from_powers<F: Field>(powers: &[SubspaceBasis<F>]) -> usize {
    powers.iter().position(|p| p.is_zero()).expect("power list ends at zero") + 1
}

/// Outcome of checking a proposed complete system of primitive orthogonal
/// idempotents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompleteSystemReport {
    pub count: usize,
    pub semisimple_rank: usize,
    pub failures: Vec<String>,
}

impl CompleteSystemReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `e_i² = e_i`, `e_i e_j = 0` for `i ≠ j`, `Σ e_i = 1` and that the
/// number of idempotents equals `dim A / rad A` (primitivity by count).
pub fn verify_complete_system<F: Field>(a: &AlgebraPresentation<F>, idempotents: &[Vec<F>]) -> CompleteSystemReport {
    verify_complete_system_with_rank(a, idempotents, semisimple_rank(a))
}

/// As [`verify_complete_system`] with a known value of `dim A / rad A`.
pub fn verify_complete_system_with_rank<F: Field>(
    a: &AlgebraPresentation<F>,
    idempotents: &[Vec<F>],
    semisimple_rank: usize,
) -> CompleteSystemReport {
    let sparse_e: Vec<Vec<(u32, F)>> = idempotents.iter().map(|e| sparse(e)).collect();
    let n = idempotents.len();
    let mut failures: Vec<String> = (0..n * n)
        .into_par_iter()
        .filter_map(|ij| {
            let (i, j) = (ij / n, ij % n);
            let p = a.mul_sparse(&sparse_e[i], &sparse_e[j]);
            if i == j && p != idempotents[i] {
                Some(format!("e_{i}^2 != e_{i}"))
            } else if i != j && p.iter().any(|x| !x.is_zero()) {
                Some(format!("e_{i} e_{j} != 0"))
            } else {
                None
            }
        })
        .collect();
    let mut total = vec![F::zero(); a.dim()];
    for e in idempotents {
        for (t, x) in total.iter_mut().zip(e) {
            *t += x.clone();
        }
    }
    if total != a.identity() {
        failures.push("sum of idempotents != 1".into());
    }
    if n != semisimple_rank {
        failures.push(format!("{n} idempotents but dim A/rad A = {semisimple_rank}"));
    }
    CompleteSystemReport {
        count: n,
        semisimple_rank,
        failures,
    }
}

/// Peirce components `e_y R e_x` of the radical, indexed `[y][x]`.
pub fn peirce_blocks<F: Field>(
    a: &AlgebraPresentation<F>,
    idempotents: &[Vec<F>],
    rad: &SubspaceBasis<F>,
) -> Vec<Vec<SubspaceBasis<F>>> {
    let n = idempotents.len();
    let right: Vec<SubspaceBasis<F>> = idempotents
        .par_iter()
        .map(|e| product_span(a, rad.rows(), std::slice::from_ref(e)))
        .collect();
    (0..n)
        .into_par_iter()
        .map(|y| {
            (0..n)
                .map(|x| product_span(a, std::slice::from_ref(&idempotents[y]), right[x].rows()))
                .collect()
        })
        .collect()
}

/// Quiver of a split basic algebra: one vertex per idempotent and
/// `dim e_y (rad / rad²) e_x` arrows `x → y`.
pub fn quiver_of_algebra<F: Field>(
    a: &AlgebraPresentation<F>,
    idempotents: &[Vec<F>],
    labels: Vec<String>,
) -> Result<Quiver> {
    let rad = radical_unchecked(a);
    let quotient_dim = a.dim() - rad.dim();
    if quotient_dim != idempotents.len() {
        return Err(Error::NotSplitBasic {
            quotient_dim,
            idempotents: idempotents.len(),
        });
    }
    let report = verify_complete_system_with_rank(a, idempotents, quotient_dim);
    if !report.passed() {
        return Err(Error::IncompleteSystem(report.failures.join("; ")));
    }
    quiver_from_radical(a, idempotents, &rad, labels)
}

/// As [`quiver_of_algebra`] for a verified system and a known radical.
pub fn quiver_from_radical<F: Field>(
    a: &AlgebraPresentation<F>,
    idempotents: &[Vec<F>],
    rad: &SubspaceBasis<F>,
    labels: Vec<String>,
) -> Result<Quiver> {
    let blocks = peirce_blocks(a, idempotents, rad);
    let n = idempotents.len();
    let total: usize = blocks.iter().flatten().map(|b| b.dim()).sum();
    if total != rad.dim() {
        return Err(Error::IncompleteSystem(format!(
            "Peirce components of the radical have total dimension {total}, expected {}",
            rad.dim()
        )));
    }
    let arrows: Vec<Arrow> = (0..n * n)
        .into_par_iter()
        .filter_map(|yx| {
            let (y, x) = (yx / n, yx % n);
            let r = &blocks[y][x];
            if r.is_zero() {
                return None;
            }
            let mut square = SubspaceBasis::zero(a.dim());
            for (yz, row) in blocks[y].iter().zip(&blocks) {
                let zx = &row[x];
                if yz.is_zero() || zx.is_zero() {
                    continue;
                }
                square = square.sum(&product_span(a, yz.rows(), zx.rows()));
            }
            let multiplicity = r.dim() - square.dim();
            (multiplicity > 0).then_some(Arrow {
                source: x,
                target: y,
                multiplicity,
            })
        })
        .collect();
    Ok(Quiver::new(labels, arrows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn truncated(n: usize) -> AlgebraPresentation<Rational> {
        let labels = (0..n).map(|i| format!("t^{i}")).collect();
        let mut one = vec![q(0); n];
        one[0] = q(1);
        AlgebraPresentation::new(labels, one, |i, j| if i + j < n { vec![(i + j, q(1))] } else { vec![] }).unwrap()
    }

    fn two_fields() -> AlgebraPresentation<Rational> {
        AlgebraPresentation::new(vec!["e".into(), "f".into()], vec![q(1), q(1)], |i, j| {
            if i == j {
                vec![(i, q(1))]
            } else {
                vec![]
            }
        })
        .unwrap()
    }

    #[test]
    fn radicals_of_small_algebras() {
        assert!(radical(&two_fields()).unwrap().is_zero());
        let t2 = truncated(2);
        let r = radical(&t2).unwrap();
        assert_eq!(r.dim(), 1);
        assert!(r.contains(&t2.basis_vector(1)));
    }

    #[test]
    fn loewy_lengths() {
        assert_eq!(loewy_length(&two_fields()).unwrap(), 1);
        assert_eq!(loewy_length(&truncated(3)).unwrap(), 3);
        assert_eq!(loewy_length(&truncated(5)).unwrap(), 5);
    }

    #[test]
    fn complete_systems_and_quivers() {
        let t2 = truncated(2);
        let one = vec![t2.identity().to_vec()];
        assert!(verify_complete_system(&t2, &one).passed());
        let loop_quiver = quiver_of_algebra(&t2, &one, vec!["1".into()]).unwrap();
        assert_eq!(loop_quiver.multiplicity(0, 0), 1);

        let ff = two_fields();
        let es = vec![ff.basis_vector(0), ff.basis_vector(1)];
        let qv = quiver_of_algebra(&ff, &es, vec!["e".into(), "f".into()]).unwrap();
        assert_eq!(qv.arrow_count(), 0);
        let bad = vec![ff.basis_vector(0)];
        assert!(!verify_complete_system(&ff, &bad).passed());
        assert!(matches!(
            quiver_of_algebra(&ff, &bad, vec!["e".into()]),
            Err(Error::NotSplitBasic { .. })
        ));
    }

    #[test]
    fn upper_triangular_matrices_have_one_arrow() {
        // basis e11, e12, e22
        let a = AlgebraPresentation::new(vec!["e11".into(), "e12".into(), "e22".into()], vec![q(1), q(0), q(1)], |i, j| {
            match (i, j) {
                (0, 0) => vec![(0, q(1))],
                (0, 1) => vec![(1, q(1))],
                (1, 2) => vec![(1, q(1))],
                (2, 2) => vec![(2, q(1))],
                _ => vec![],
            }
        })
        .unwrap();
        let es = vec![a.basis_vector(0), a.basis_vector(2)];
        let qv = quiver_of_algebra(&a, &es, vec!["1".into(), "2".into()]).unwrap();
        // e11 · e12 · e22 = e12, so the arrow runs from the vertex of e22 to that of e11
        assert_eq!(qv.arrows, vec![Arrow { source: 1, target: 0, multiplicity: 1 }]);
        assert_eq!(loewy_length(&a).unwrap(), 2);
    }
}

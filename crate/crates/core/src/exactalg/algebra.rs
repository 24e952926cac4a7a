use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::SubspaceBasis;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Dimension up to which associativity is checked on every basis triple.
pub const FULL_ASSOCIATIVITY_BOUND: usize = 256;

/// Number of seeded random basis triples checked above the bound.
pub const SAMPLED_TRIPLES: usize = 1000;

const SAMPLE_SEED: u64 = 0x5eed_a55c;

/// A finite-dimensional algebra given by a labeled basis and sparse
/// structure constants `e_i e_j = Σ_k c_{ij}^k e_k`.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation<F> {
    labels: Vec<String>,
    offsets: Vec<usize>,
    terms: Vec<(u32, F)>,
    identity: Vec<F>,
}

/// Nonzero entries of a dense vector.
pub fn sparse<F: Field>(v: &[F]) -> Vec<(u32, F)> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i as u32, x.clone()))
        .collect()
}

impl<F: Field> AlgebraPresentation<F> {
    /// Assembles a presentation without validating it.
    pub fn from_products<P>(labels: Vec<String>, identity: Vec<F>, product: P) -> Self
    where
        P: Fn(usize, usize) -> Vec<(usize, F)> + Sync,
    {
        let d = labels.len();
        let rows: Vec<Vec<(u32, F)>> = (0..d * d)
            .into_par_iter()
            .map(|ij| {
                let mut t: Vec<(u32, F)> = product(ij / d, ij % d)
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k as u32, c))
                    .collect();
                t.sort_by_key(|(k, _)| *k);
                t
            })
            .collect();
        let mut offsets = Vec::with_capacity(d * d + 1);
        let mut terms = Vec::new();
        offsets.push(0);
        for r in rows {
            terms.extend(r);
            offsets.push(terms.len());
        }
        AlgebraPresentation {
            labels,
            offsets,
            terms,
            identity,
        }
    }

    /// Assembles a presentation and checks the identity and associativity.
    pub fn new<P>(labels: Vec<String>, identity: Vec<F>, product: P) -> Result<Self>
    where
        P: Fn(usize, usize) -> Vec<(usize, F)> + Sync,
    {
        let a = Self::from_products(labels, identity, product);
        a.check_identity()?;
        a.check_associativity()?;
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn identity(&self) -> &[F] {
        &self.identity
    }

    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> &[(u32, F)] {
        let ij = i * self.dim() + j;
        &self.terms[self.offsets[ij]..self.offsets[ij + 1]]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> F {
        self.basis_product(i, j)
            .iter()
            .find(|(m, _)| *m as usize == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(F::zero)
    }

    /// Number of stored nonzero structure constants.
    pub fn nonzero_constants(&self) -> usize {
        self.terms.len()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        v[i] = F::one();
        v
    }

    pub fn mul_sparse(&self, u: &[(u32, F)], v: &[(u32, F)]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim()];
        F::accumulate_bilinear(&mut out, u, v, |i, j| self.basis_product(i as usize, j as usize));
        out
    }

    pub fn mul(&self, u: &[F], v: &[F]) -> Vec<F> {
        self.mul_sparse(&sparse(u), &sparse(v))
    }

    /// The product with the multiplication order reversed.
    pub fn opposite(&self) -> Self {
        Self::from_products(self.labels.clone(), self.identity.clone(), |i, j| {
            self.basis_product(j, i)
                .iter()
                .map(|(k, c)| (*k as usize, c.clone()))
                .collect()
        })
    }

    pub fn check_identity(&self) -> Result<()> {
        if self.identity.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: self.identity.len(),
            });
        }
        let one = sparse(&self.identity);
        for i in 0..self.dim() {
            let e = [(i as u32, F::one())];
            let target = self.basis_vector(i);
            if self.mul_sparse(&one, &e) != target || self.mul_sparse(&e, &one) != target {
                return Err(Error::MalformedAlgebra(format!(
                    "identity does not act trivially on basis element {}",
                    self.labels[i]
                )));
            }
        }
        Ok(())
    }

    fn triple_associates(&self, i: usize, j: usize, k: usize) -> bool {
        let to_sparse = |t: &[(u32, F)]| t.to_vec();
        let ij = to_sparse(self.basis_product(i, j));
        let jk = to_sparse(self.basis_product(j, k));
        let left = self.mul_sparse(&ij, &[(k as u32, F::one())]);
        let right = self.mul_sparse(&[(i as u32, F::one())], &jk);
        left == right
    }

    /// Associativity on every basis triple when `dim ≤ 256`, otherwise on
    /// 1000 seeded random triples.
    pub fn check_associativity(&self) -> Result<()> {
        let d = self.dim();
        let failure = if d <= FULL_ASSOCIATIVITY_BOUND {
            (0..d * d).into_par_iter().find_map_first(|ij| {
                let (i, j) = (ij / d, ij % d);
                (0..d).find(|&k| !self.triple_associates(i, j, k)).map(|k| (i, j, k))
            })
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
            let triples: Vec<(usize, usize, usize)> = (0..SAMPLED_TRIPLES)
                .map(|_| (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d)))
                .collect();
            triples
                .into_par_iter()
                .find_map_first(|(i, j, k)| (!self.triple_associates(i, j, k)).then_some((i, j, k)))
        };
        match failure {
            None => Ok(()),
            Some((i, j, k)) => Err(Error::MalformedAlgebra(format!(
                "associativity fails on ({}, {}, {})",
                self.labels[i], self.labels[j], self.labels[k]
            ))),
        }
    }

    /// Trace of left multiplication by basis element `i`.
    pub fn left_trace(&self, i: usize) -> F {
        let mut t = F::zero();
        for j in 0..self.dim() {
            for (k, c) in self.basis_product(i, j) {
                if *k as usize == j {
                    t += c.clone();
                }
            }
        }
        t
    }

    /// `A / I` for a two-sided ideal `I`, on the basis of standard vectors
    /// at the non-pivot columns of the echelon basis of `I`.
    pub fn quotient(&self, ideal: &SubspaceBasis<F>) -> Self {
        let mut is_pivot = vec![false; self.dim()];
        for &p in ideal.pivots() {
            is_pivot[p] = true;
        }
        let keep: Vec<usize> = (0..self.dim()).filter(|&i| !is_pivot[i]).collect();
        let mut position = vec![usize::MAX; self.dim()];
        for (new, &old) in keep.iter().enumerate() {
            position[old] = new;
        }
        let project = |v: Vec<F>| -> Vec<(usize, F)> {
            ideal
                .reduce(v)
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (position[i], x))
                .collect()
        };
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let identity_full = ideal.reduce(self.identity.clone());
        let identity = keep.iter().map(|&i| identity_full[i].clone()).collect();
        Self::from_products(labels, identity, |i, j| {
            let mut v = vec![F::zero(); self.dim()];
            for (k, c) in self.basis_product(keep[i], keep[j]) {
                v[*k as usize] = c.clone();
            }
            project(v)
        })
    }

    /// Applies `f` to every structure constant (for instance to change
    /// the scalar type).
    pub fn map_scalars<G: Field>(&self, f: impl Fn(&F) -> G + Sync) -> AlgebraPresentation<G> {
        AlgebraPresentation::from_products(
            self.labels.clone(),
            self.identity.iter().map(&f).collect(),
            |i, j| {
                self.basis_product(i, j)
                    .iter()
                    .map(|(k, c)| (*k as usize, f(c)))
                    .collect()
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::Rational;

    fn truncated(n: usize) -> AlgebraPresentation<Rational> {
        let labels = (0..n).map(|i| format!("t^{i}")).collect();
        let mut one = vec![Rational::from_integer(0); n];
        one[0] = Rational::from_integer(1);
        AlgebraPresentation::new(labels, one, |i, j| {
            if i + j < n {
                vec![(i + j, Rational::from_integer(1))]
            } else {
                vec![]
            }
        })
        .unwrap()
    }

    #[test]
    fn truncated_polynomials_multiply() {
        let a = truncated(3);
        let t = a.basis_vector(1);
        assert_eq!(a.mul(&t, &t), a.basis_vector(2));
        assert!(a.mul(&a.basis_vector(2), &t).iter().all(|x| x.is_zero()));
        assert_eq!(a.opposite().basis_product(1, 1), a.basis_product(1, 1));
    }

    #[test]
    fn non_associative_input_is_rejected() {
        let one = vec![Rational::from_integer(1), Rational::from_integer(0), Rational::from_integer(0)];
        let labels = vec!["1".into(), "a".into(), "b".into()];
        // a*a = b, a*b = 0, b*a = a: (aa)a = a but a(aa) = 0
        let r = AlgebraPresentation::new(labels, one, |i, j| match (i, j) {
            (0, k) | (k, 0) => vec![(k, Rational::from_integer(1))],
            (1, 1) => vec![(2, Rational::from_integer(1))],
            (2, 1) => vec![(1, Rational::from_integer(1))],
            _ => vec![],
        });
        assert!(matches!(r, Err(Error::MalformedAlgebra(_))));
    }

    #[test]
    fn quotient_by_an_ideal() {
        let a = truncated(3);
        let ideal = SubspaceBasis::from_spanning(3, vec![a.basis_vector(2)]);
        let q = a.quotient(&ideal);
        assert_eq!(q.dim(), 2);
        assert!(q.mul(&q.basis_vector(1), &q.basis_vector(1)).iter().all(|x| x.is_zero()));
        q.check_identity().unwrap();
    }
}

//! The face semigroup algebra `kF`, the complete system of idempotents
//! built from the averaging elements `ℓ(X)`, and the invariant subalgebra
//! `(kF)^W` in its orbit-sum basis.

use std::ops::{AddAssign, SubAssign};

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::arrangement::{Arrangement, FaceSet, Geometry, IntersectionLattice, SignVector};
use crate::coxeter::{dot, subset_label, CoxeterSystem, ParabolicPoset, SubsetJ};
use crate::error::{Error, Result};
use crate::exactalg::{sparse, AlgebraPresentation, CompleteSystemReport};
use crate::scalar::Field;

/// Face sets up to this size get a precomputed product table.
pub const PRODUCT_TABLE_BOUND: usize = 4096;

/// A linear combination of faces, stored densely over the face indices of
/// one [`FaceSet`].
#[derive(Clone, Debug, PartialEq)]
pub struct FaceAlgebraElement<F> {
    coeffs: Vec<F>,
}

impl<F: Field> FaceAlgebraElement<F> {
    pub fn zero(len: usize) -> Self {
        FaceAlgebraElement {
            coeffs: vec![F::zero(); len],
        }
    }

    pub fn face(len: usize, i: usize) -> Self {
        let mut e = Self::zero(len);
        e.coeffs[i] = F::one();
        e
    }

    pub fn from_coefficients(coeffs: Vec<F>) -> Self {
        FaceAlgebraElement { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, i: usize) -> &F {
        &self.coeffs[i]
    }

    pub fn coefficients(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coefficients(self) -> Vec<F> {
        self.coeffs
    }

    /// Nonzero `(face, coefficient)` pairs in face order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &F)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn support(&self) -> Vec<usize> {
        self.terms().map(|(i, _)| i).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coefficient_sum(&self) -> F {
        let mut s = F::zero();
        for c in &self.coeffs {
            s += c.clone();
        }
        s
    }

    pub fn scaled(&self, c: &F) -> Self {
        FaceAlgebraElement {
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// `s_k(Σ c_x x) = Σ c_x s_k(x)`.
    pub fn act_generator(&self, faces: &FaceSet, k: usize) -> Self {
        let mut out = Self::zero(self.len());
        for (i, c) in self.terms() {
            out.coeffs[faces.act_generator(k, i)] = c.clone();
        }
        out
    }

    /// Whether every generator fixes the element.
    pub fn is_invariant(&self, faces: &FaceSet) -> bool {
        (0..faces.generator_count()).all(|k| self.act_generator(faces, k) == *self)
    }
}

impl<F: Field> AddAssign<&FaceAlgebraElement<F>> for FaceAlgebraElement<F> {
    fn add_assign(&mut self, rhs: &FaceAlgebraElement<F>) {
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a += b.clone();
            }
        }
    }
}

impl<F: Field> SubAssign<&FaceAlgebraElement<F>> for FaceAlgebraElement<F> {
    fn sub_assign(&mut self, rhs: &FaceAlgebraElement<F>) {
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a -= b.clone();
            }
        }
    }
}

/// Multiplication in `kF`.
#[derive(Debug)]
pub struct FaceAlgebra<'a> {
    faces: &'a FaceSet,
    table: Option<Vec<u32>>,
}

impl<'a> FaceAlgebra<'a> {
    pub fn new(faces: &'a FaceSet) -> Result<Self> {
        let n = faces.len();
        let table = if n <= PRODUCT_TABLE_BOUND {
            let t: Vec<u32> = (0..n * n)
                .into_par_iter()
                .map(|ij| faces.product(ij / n, ij % n).map(|k| k as u32))
                .collect::<Result<_>>()?;
            Some(t)
        } else {
            None
        };
        Ok(FaceAlgebra { faces, table })
    }

    pub fn faces(&self) -> &FaceSet {
        self.faces
    }

    pub fn dim(&self) -> usize {
        self.faces.len()
    }

    #[inline]
    pub fn product(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Some(t) => t[i * self.faces.len() + j] as usize,
            None => self.faces.product(i, j).expect("face set is closed under products"),
        }
    }

    pub fn one<F: Field>(&self) -> FaceAlgebraElement<F> {
        FaceAlgebraElement::face(self.dim(), self.faces.origin())
    }

    pub fn mul<F: Field>(&self, u: &FaceAlgebraElement<F>, v: &FaceAlgebraElement<F>) -> FaceAlgebraElement<F> {
        let vt: Vec<(usize, &F)> = v.terms().collect();
        let mut out: FaceAlgebraElement<F> = FaceAlgebraElement::zero(self.dim());
        for (i, a) in u.terms() {
            for &(j, b) in &vt {
                out.coeffs[self.product(i, j)].mul_add_assign(a, b);
            }
        }
        out
    }

    /// `kF` as an algebra presentation on the face basis.
    pub fn presentation<F: Field>(&self, arr: &Arrangement) -> AlgebraPresentation<F> {
        let labels = self.faces.all_signs().iter().map(|s| s.to_string_len(arr.len())).collect();
        let mut identity = vec![F::zero(); self.dim()];
        identity[self.faces.origin()] = F::one();
        AlgebraPresentation::from_products(labels, identity, |i, j| vec![(self.product(i, j), F::one())])
    }

    /// Checks `e² = e`, `e e' = 0`, `Σ e = 1` and the count against
    /// `quotient_dim = dim kF / rad kF`.
    pub fn verify_complete_system<F: Field>(
        &self,
        idempotents: &[FaceAlgebraElement<F>],
        quotient_dim: usize,
    ) -> CompleteSystemReport {
        let n = idempotents.len();
        let mut failures: Vec<String> = (0..n * n)
            .into_par_iter()
            .filter_map(|ij| {
                let (i, j) = (ij / n, ij % n);
                let p = self.mul(&idempotents[i], &idempotents[j]);
                if i == j && p != idempotents[i] {
                    Some(format!("e_{i}^2 != e_{i}"))
                } else if i != j && !p.is_zero() {
                    Some(format!("e_{i} e_{j} != 0"))
                } else {
                    None
                }
            })
            .collect();
        let mut total = FaceAlgebraElement::zero(self.dim());
        for e in idempotents {
            total += e;
        }
        if total != self.one() {
            failures.push("sum of idempotents != 1".into());
        }
        if n != quotient_dim {
            failures.push(format!("{n} idempotents but dim kF/rad kF = {quotient_dim}"));
        }
        CompleteSystemReport {
            count: n,
            semisimple_rank: quotient_dim,
            failures,
        }
    }
}

/// A face `f_O` for every lattice orbit `O`, with `supp(f_O) ∈ O`, and the
/// resulting counts `λ_O`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitChoice {
    faces: Vec<usize>,
    lambdas: Vec<usize>,
}

impl OrbitChoice {
    /// `f_O` is the lexicographically least sign vector among the faces
    /// whose support lies in `O`.
    pub fn canonical(faces: &FaceSet, lattice: &IntersectionLattice) -> Self {
        let mut best: Vec<Option<usize>> = vec![None; lattice.orbit_count()];
        for j in 0..faces.orbit_count() as SubsetJ {
            let f = faces.orbit(j).start;
            let o = lattice.orbit_of(lattice.support_of_face(f));
            let better = match best[o] {
                None => true,
                Some(g) => faces.signs(f).lex_cmp(&faces.signs(g)).is_lt(),
            };
            if better {
                best[o] = Some(f);
            }
        }
        let chosen = best.into_iter().map(|f| f.expect("every orbit supports a face")).collect();
        Self::from_faces(faces, lattice, chosen).expect("canonical choice is valid")
    }

    pub fn from_faces(faces: &FaceSet, lattice: &IntersectionLattice, chosen: Vec<usize>) -> Result<Self> {
        if chosen.len() != lattice.orbit_count() {
            return Err(Error::BrokenOrbitChoice);
        }
        let mut lambdas = Vec::with_capacity(chosen.len());
        for (o, &f) in chosen.iter().enumerate() {
            let x = lattice.support_of_face(f);
            if lattice.orbit_of(x) != o {
                return Err(Error::BrokenOrbitChoice);
            }
            let orbit = faces.orbit(faces.face_type(f));
            lambdas.push(orbit.filter(|&z| lattice.support_of_face(z) == x).count());
        }
        Ok(OrbitChoice { faces: chosen, lambdas })
    }

    pub fn face(&self, orbit: usize) -> usize {
        self.faces[orbit]
    }

    pub fn lambda(&self, orbit: usize) -> usize {
        self.lambdas[orbit]
    }

    /// Type `J` of the chosen face, so that its orbit is that of `F_J`.
    pub fn face_type(&self, faces: &FaceSet, orbit: usize) -> SubsetJ {
        faces.face_type(self.faces[orbit])
    }
}

/// Faces of the chosen orbit with support `x`.
fn averaged_faces(faces: &FaceSet, lattice: &IntersectionLattice, choice: &OrbitChoice, x: usize) -> Vec<usize> {
    let f = choice.face(lattice.orbit_of(x));
    faces
        .orbit(faces.face_type(f))
        .filter(|&z| lattice.support_of_face(z) == x)
        .collect()
}

/// `λ_X = |{z ∈ O_{f_X} : supp z = X}|`.
pub fn lambda(faces: &FaceSet, lattice: &IntersectionLattice, choice: &OrbitChoice, x: usize) -> Result<usize> {
    match averaged_faces(faces, lattice, choice, x).len() {
        0 => Err(Error::BrokenOrbitChoice),
        n => Ok(n),
    }
}

/// `ℓ(X) = (1/λ_X) Σ {z ∈ O_{f_X} : supp z = X}`.
pub fn ell<F: Field>(
    faces: &FaceSet,
    lattice: &IntersectionLattice,
    choice: &OrbitChoice,
    x: usize,
) -> Result<FaceAlgebraElement<F>> {
    let zs = averaged_faces(faces, lattice, choice, x);
    if zs.is_empty() {
        return Err(Error::BrokenOrbitChoice);
    }
    let c = F::from_ratio(1, zs.len() as i64);
    let mut e = FaceAlgebraElement::zero(faces.len());
    for z in zs {
        e.coeffs[z] = c.clone();
    }
    Ok(e)
}

/// `e_X = ℓ(X) − ℓ(X) Σ_{Y > X} e_Y`, indexed like the lattice and
/// evaluated from the top down.
pub fn idempotents_e<F: Field>(
    alg: &FaceAlgebra<'_>,
    lattice: &IntersectionLattice,
    choice: &OrbitChoice,
) -> Result<Vec<FaceAlgebraElement<F>>> {
    let order: Vec<usize> = (0..lattice.len()).collect();
    idempotents_e_in_order(alg, lattice, choice, &order)
}

/// As [`idempotents_e`], visiting lattice elements in `order`, which must
/// list every element after all elements above it.
pub fn idempotents_e_in_order<F: Field>(
    alg: &FaceAlgebra<'_>,
    lattice: &IntersectionLattice,
    choice: &OrbitChoice,
    order: &[usize],
) -> Result<Vec<FaceAlgebraElement<F>>> {
    let faces = alg.faces();
    let mut done: Vec<Option<FaceAlgebraElement<F>>> = vec![None; lattice.len()];
    for &x in order {
        let mut above = FaceAlgebraElement::zero(faces.len());
        for (y, ey) in done.iter().enumerate() {
            if y != x && lattice.le(x, y) {
                let ey = ey.as_ref().ok_or_else(|| {
                    Error::Verification(format!("evaluation order visits element {x} before {y} above it"))
                })?;
                above += ey;
            }
        }
        let l = ell::<F>(faces, lattice, choice, x)?;
        let mut e = l.clone();
        e -= &alg.mul(&l, &above);
        done[x] = Some(e);
    }
    done.into_iter()
        .enumerate()
        .map(|(x, e)| e.ok_or_else(|| Error::Verification(format!("element {x} missing from evaluation order"))))
        .collect()
}

/// `ε_O = Σ_{X ∈ O} e_X`, indexed like the lattice orbits.
pub fn invariant_idempotents<F: Field>(
    e: &[FaceAlgebraElement<F>],
    lattice: &IntersectionLattice,
) -> Vec<FaceAlgebraElement<F>> {
    lattice
        .orbits()
        .iter()
        .map(|members| {
            let mut s = FaceAlgebraElement::zero(e[0].len());
            for &x in members {
                s += &e[x];
            }
            s
        })
        .collect()
}

/// Coordinates of an invariant element in the basis `𝒙_J`, indexed by the
/// mask `J`. Fails if the element is not constant on face orbits.
pub fn invariant_coordinates<F: Field>(faces: &FaceSet, elem: &FaceAlgebraElement<F>) -> Result<Vec<F>> {
    (0..faces.orbit_count() as SubsetJ)
        .map(|j| {
            let mut orbit = faces.orbit(j);
            let c = elem.coefficient(orbit.next().expect("orbits are nonempty")).clone();
            if orbit.any(|i| *elem.coefficient(i) != c) {
                Err(Error::Verification(format!(
                    "element is not constant on the orbit of type {}",
                    subset_label(j)
                )))
            } else {
                Ok(c)
            }
        })
        .collect()
}

/// The invariant element `Σ_J c_J 𝒙_J` of `kF`.
pub fn from_invariant_coordinates<F: Field>(faces: &FaceSet, coords: &[F]) -> FaceAlgebraElement<F> {
    let mut e = FaceAlgebraElement::zero(faces.len());
    for (j, c) in coords.iter().enumerate() {
        for i in faces.orbit(j as SubsetJ) {
            e.coeffs[i] = c.clone();
        }
    }
    e
}

fn invariant_labels(rank: usize) -> Vec<String> {
    (0..1u32 << rank).map(|j| format!("x{}", subset_label(j))).collect()
}

fn point_orbit(sys: &CoxeterSystem, p: Vec<i64>) -> Vec<Vec<i64>> {
    let mut seen: FxHashSet<Vec<i64>> = FxHashSet::default();
    seen.insert(p.clone());
    let mut orbit = vec![p];
    let mut head = 0;
    while head < orbit.len() {
        for s in sys.generators() {
            let q = s.act_int(&orbit[head]);
            if !seen.contains(&q) {
                seen.insert(q.clone());
                orbit.push(q);
            }
        }
        head += 1;
    }
    orbit
}

fn point_orbit_size(sys: &CoxeterSystem, j: SubsetJ) -> usize {
    point_orbit(sys, sys.face_point(j)).len()
}

/// Integer structure constants of `(kF)^W` in the basis `𝒙_J`, indexed
/// `[J][K] → [(L, c)]`, computed from sample points without enumerating
/// faces.
///
/// For `y` running over the orbit of the sample point of `F_J` and the
/// fixed sample point `p` of `F_K`, the point `M y + p` lies in the face
/// `y F_K` once `M` exceeds every `|⟨α, p⟩|`. Counting the types `L` of
/// these products gives `Σ_{y ∈ O_J} y F_K`; spreading over the orbit of
/// `F_K` rescales the count by `|O_K| / |O_L|`.
pub fn invariant_structure_constants(sys: &CoxeterSystem) -> Result<crate::descent::StructureTable> {
    if sys.order() > sys.cap() as u64 {
        return Err(Error::GroupTooLarge {
            family: sys.family(),
            rank: sys.rank(),
            order: sys.order(),
            cap: sys.cap(),
        });
    }
    let d = 1usize << sys.rank();
    let sizes: Vec<usize> = (0..d).into_par_iter().map(|j| point_orbit_size(sys, j as SubsetJ)).collect();
    let points: Vec<Vec<i64>> = (0..d).map(|k| sys.face_point(k as SubsetJ)).collect();
    let scales: Vec<i64> = points
        .iter()
        .map(|p| 1 + sys.positive_roots().iter().map(|a| dot(a, p).abs()).max().unwrap_or(0))
        .collect();
    let mut table = Vec::with_capacity(d);
    for j in 0..d {
        let orbit = point_orbit(sys, points[j].clone());
        let row: Vec<Vec<(usize, i64)>> = (0..d)
            .into_par_iter()
            .map(|k| {
                let mut counts = vec![0u64; d];
                let mut q = vec![0i64; sys.degree()];
                for y in &orbit {
                    for ((qi, yi), pi) in q.iter_mut().zip(y).zip(&points[k]) {
                        *qi = scales[k] * yi + pi;
                    }
                    counts[sys.face_type_of_point(&q) as usize] += 1;
                }
                counts
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(l, &c)| {
                        let num = c as u128 * sizes[k] as u128;
                        if !num.is_multiple_of(sizes[l] as u128) {
                            return Err(Error::MalformedAlgebra(format!(
                                "non-integral orbit count for {} {} -> {}",
                                subset_label(j as SubsetJ),
                                subset_label(k as SubsetJ),
                                subset_label(l as SubsetJ)
                            )));
                        }
                        Ok((l, (num / sizes[l] as u128) as i64))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        table.push(row);
    }
    Ok(table)
}

/// `(kF)^W` on the basis `𝒙_J` (index `J` as a mask); the identity is
/// `𝒙_S`, the origin face.
pub fn invariant_algebra<F: Field>(sys: &CoxeterSystem) -> Result<AlgebraPresentation<F>> {
    let table = invariant_structure_constants(sys)?;
    Ok(invariant_presentation(sys.rank(), &table))
}

fn invariant_presentation<F: Field>(rank: usize, table: &[Vec<Vec<(usize, i64)>>]) -> AlgebraPresentation<F> {
    let d = 1usize << rank;
    let mut identity = vec![F::zero(); d];
    identity[d - 1] = F::one();
    AlgebraPresentation::from_products(invariant_labels(rank), identity, |j, k| {
        table[j][k].iter().map(|&(l, c)| (l, F::from_i64(c))).collect()
    })
}

/// Structure constants of `(kF)^W` by multiplying every pair of faces of
/// `O_J × O_K` and reading off the coefficient at the first face of each
/// orbit `O_L`.
pub fn invariant_structure_constants_from_faces(faces: &FaceSet) -> Result<crate::descent::StructureTable> {
    let d = faces.orbit_count();
    let first: FxHashMap<usize, usize> = (0..d).map(|l| (faces.orbit(l as SubsetJ).start, l)).collect();
    (0..d * d)
        .into_par_iter()
        .map(|jk| {
            let (j, k) = (jk / d, jk % d);
            let mut counts = vec![0i64; d];
            for y in faces.orbit(j as SubsetJ) {
                for z in faces.orbit(k as SubsetJ) {
                    if let Some(&l) = first.get(&faces.product(y, z)?) {
                        counts[l] += 1;
                    }
                }
            }
            Ok(counts.into_iter().enumerate().filter(|(_, c)| *c != 0).collect())
        })
        .collect::<Result<Vec<_>>>()
        .map(|flat| flat.chunks(d).map(|c| c.to_vec()).collect())
}

/// `(kF)^W` from exhaustive face products.
pub fn invariant_algebra_from_faces<F: Field>(geometry: &Geometry) -> Result<AlgebraPresentation<F>> {
    let table = invariant_structure_constants_from_faces(&geometry.faces)?;
    Ok(invariant_presentation(geometry.system.rank(), &table))
}

/// The data for the idempotent recursion inside `(kF)^W`: a type `J_O` per
/// class of `S/~` (the orbit of `F_{J_O}` has support in the class) and
/// `λ_O`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantOrbitData {
    pub poset: ParabolicPoset,
    pub types: Vec<SubsetJ>,
    pub lambdas: Vec<usize>,
}

impl InvariantOrbitData {
    /// For each class, the type whose orbit contains the lexicographically
    /// least sign vector among all faces with support in the class; this
    /// matches [`OrbitChoice::canonical`].
    pub fn canonical(sys: &CoxeterSystem, arr: &Arrangement) -> Result<Self> {
        let poset = sys.parabolic_orbit_poset()?;
        let least: Vec<SignVector> = (0..1u32 << sys.rank())
            .into_par_iter()
            .map(|j| {
                point_orbit(sys, sys.face_point(j))
                    .iter()
                    .map(|p| arr.sign_vector_int(p))
                    .min_by(|a, b| a.lex_cmp(b))
                    .expect("orbits are nonempty")
            })
            .collect();
        let types: Vec<SubsetJ> = (0..poset.len())
            .map(|c| {
                *poset
                    .members(c)
                    .iter()
                    .min_by(|&&a, &&b| least[a as usize].lex_cmp(&least[b as usize]))
                    .expect("classes are nonempty")
            })
            .collect();
        Self::with_types(sys, poset, types)
    }

    /// Uses the supplied type per class; `λ_O` is the number of points in
    /// the orbit of the sample point of `F_J` with the same zero set.
    pub fn with_types(sys: &CoxeterSystem, poset: ParabolicPoset, types: Vec<SubsetJ>) -> Result<Self> {
        let arr = Arrangement::new(sys);
        let mut lambdas = Vec::with_capacity(types.len());
        for (c, &j) in types.iter().enumerate() {
            if poset.class_of(j) != c {
                return Err(Error::BrokenOrbitChoice);
            }
            let p = sys.face_point(j);
            let zero = arr.sign_vector_int(&p).zero_set(arr.full_mask());
            let count = point_orbit(sys, p)
                .iter()
                .filter(|q| arr.sign_vector_int(q).zero_set(arr.full_mask()) == zero)
                .count();
            lambdas.push(count);
        }
        Ok(InvariantOrbitData { poset, types, lambdas })
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// Classes in an order that lists every class after all larger ones.
    pub fn top_down_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&c| (self.types[c].count_ones(), c));
        order
    }

    /// `O' > O` in the poset of classes.
    pub fn is_above(&self, upper: usize, lower: usize) -> bool {
        upper != lower && self.poset.leq(lower, upper)
    }
}

/// `ε_O = (1/λ_O) 𝒙_{J_O} (1 − Σ_{O' > O} ε_{O'})` inside `(kF)^W`, one per
/// class of `S/~` in class order.
///
/// Summing the recursion for `e_X` over `X ∈ O` gives this formula because
/// `ℓ(X) e_Y = 0` unless `X ⊆ Y`.
pub fn invariant_idempotents_recursive<F: Field>(
    alg: &AlgebraPresentation<F>,
    data: &InvariantOrbitData,
) -> Vec<Vec<F>> {
    let mut eps: Vec<Option<Vec<F>>> = vec![None; data.len()];
    for c in data.top_down_order() {
        let mut rest = alg.identity().to_vec();
        for (u, e) in eps.iter().enumerate() {
            if data.is_above(u, c) {
                let e = e.as_ref().expect("larger classes come first");
                for (r, x) in rest.iter_mut().zip(e) {
                    *r -= x.clone();
                }
            }
        }
        let x = [(data.types[c], F::from_ratio(1, data.lambdas[c] as i64))];
        eps[c] = Some(alg.mul_sparse(&x, &sparse(&rest)));
    }
    eps.into_iter().map(|e| e.expect("all classes visited")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::Family;
    use crate::exactalg::verify_complete_system;
    use crate::Rational;

    #[test]
    fn invariant_algebra_matches_face_products() {
        for (f, n) in [(Family::A, 2), (Family::B, 2), (Family::D, 3), (Family::B, 3), (Family::A, 3)] {
            let g = Geometry::build(f, n).unwrap();
            let a = invariant_structure_constants(&g.system).unwrap();
            let b = invariant_structure_constants_from_faces(&g.faces).unwrap();
            assert_eq!(a, b, "{f}{n}");
        }
    }

    #[test]
    fn chambers_absorb() {
        let g = Geometry::build(Family::D, 3).unwrap();
        let a: AlgebraPresentation<Rational> = invariant_algebra(&g.system).unwrap();
        for j in 0..8 {
            let size = g.faces.orbit(j).len() as i64;
            assert_eq!(a.basis_product(0, j as usize), &[(0u32, Rational::from_integer(size))]);
        }
    }

    #[test]
    fn recursion_in_invariant_algebra_matches_face_side() {
        for (f, n) in [(Family::B, 2), (Family::A, 3), (Family::D, 3)] {
            let g = Geometry::build(f, n).unwrap();
            let alg = FaceAlgebra::new(&g.faces).unwrap();
            let choice = OrbitChoice::canonical(&g.faces, &g.lattice);
            let e = idempotents_e::<Rational>(&alg, &g.lattice, &choice).unwrap();
            let eps = invariant_idempotents(&e, &g.lattice);
            let inv: AlgebraPresentation<Rational> = invariant_algebra(&g.system).unwrap();
            let data = InvariantOrbitData::canonical(&g.system, &g.arrangement).unwrap();
            let rec = invariant_idempotents_recursive(&inv, &data);
            assert!(verify_complete_system(&inv, &rec).passed());
            for (o, eo) in eps.iter().enumerate() {
                let j = choice.face_type(&g.faces, o);
                let c = data.poset.class_of(j);
                assert_eq!(data.types[c], j);
                assert_eq!(data.lambdas[c], choice.lambda(o));
                assert_eq!(invariant_coordinates(&g.faces, eo).unwrap(), rec[c]);
            }
        }
    }
}

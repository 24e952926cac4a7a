//! Solomon's descent algebra `Σ(W)` on the basis `x_J = Σ_{w ∈ X_J} w`,
//! its anti-isomorphism with `(kF)^W`, complete systems of idempotents and
//! Loewy lengths.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::coxeter::{subset_label, subset_lex_key, CoxeterSystem, Family, SignedPermutation, SubsetJ};
use crate::error::{Error, Result};
use crate::exactalg::{
    loewy_length_from_powers, radical, radical_powers, verify_complete_system, AlgebraPresentation,
    CompleteSystemReport,
};
use crate::facealg::invariant_structure_constants;
use crate::scalar::Field;

/// Sparse structure constants indexed `[J][K] → [(L, c)]`.
pub type StructureTable = Vec<Vec<Vec<(usize, i64)>>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Products of coset-representative sums in the group algebra.
    GroupDirect,
    /// Reversed products of the invariant subalgebra of `kF`.
    Pullback,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::GroupDirect => "group-direct",
            Method::Pullback => "pullback",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "group-direct" => Ok(Method::GroupDirect),
            "pullback" => Ok(Method::Pullback),
            other => Err(format!("unknown method `{other}` (expected group-direct or pullback)")),
        }
    }
}

/// An element of `Σ(W)` by its coordinates in the basis `x_J`, indexed by
/// the mask `J`.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentElement<F> {
    coords: Vec<F>,
}

impl<F: Field> DescentElement<F> {
    pub fn from_coordinates(coords: Vec<F>) -> Self {
        DescentElement { coords }
    }

    pub fn coordinate(&self, j: SubsetJ) -> &F {
        &self.coords[j as usize]
    }

    pub fn coordinates(&self) -> &[F] {
        &self.coords
    }

    pub fn terms(&self) -> impl Iterator<Item = (SubsetJ, &F)> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j as SubsetJ, c))
    }
}

fn labels(rank: usize) -> Vec<String> {
    (0..1u32 << rank).map(|j| format!("x{}", subset_label(j))).collect()
}

/// An element whose right descent set is exactly `d`: the longest element
/// of the parabolic subgroup `W_d`.
pub fn element_with_descents(sys: &CoxeterSystem, d: SubsetJ) -> SignedPermutation {
    let mut w = SignedPermutation::identity(sys.degree());
    loop {
        let missing = d & !sys.right_descents(&w);
        if missing == 0 {
            return w;
        }
        w = w.compose(&sys.generators()[missing.trailing_zeros() as usize]);
    }
}

/// `g(T) = Σ_{d ⊆ T} h(d)` in place.
fn subset_sums(h: &mut [i64], n: usize) {
    for k in 0..n {
        for t in 0..h.len() {
            if t >> k & 1 == 1 {
                h[t] += h[t ^ (1 << k)];
            }
        }
    }
}

/// Inverse of [`subset_sums`].
fn subset_differences(h: &mut [i64], n: usize) {
    for k in 0..n {
        for t in 0..h.len() {
            if t >> k & 1 == 1 {
                h[t] -= h[t ^ (1 << k)];
            }
        }
    }
}

/// Given `a(D)`, the coefficient on each descent class `D` of an element
/// that is constant on descent classes, returns its coordinates `c_L` in
/// the basis `x_L`, using `x_L = Σ_{D ∩ L = ∅} y_D`.
fn descent_classes_to_basis(a: &[i64], n: usize) -> Vec<i64> {
    let full = (1usize << n) - 1;
    let mut f: Vec<i64> = (0..=full).map(|u| a[full & !u]).collect();
    subset_differences(&mut f, n);
    f
}

/// Structure constants of `Σ(W)` from the group: the coefficient of `w` in
/// `x_J x_K` is `#{u ∈ X_J : Des(u⁻¹ w) ∩ K = ∅}`, evaluated at one `w` per
/// descent class.
pub fn descent_structure_constants(sys: &CoxeterSystem) -> Result<StructureTable> {
    let n = sys.rank();
    let d = 1usize << n;
    let g = sys.group()?;
    let witnesses: Vec<SignedPermutation> = (0..d).map(|s| element_with_descents(sys, s as SubsetJ)).collect();
    (0..d)
        .into_par_iter()
        .map(|j| {
            let reps: Vec<SignedPermutation> = sys
                .min_coset_rep_indices(j as SubsetJ)?
                .into_iter()
                .map(|i| g.elements()[i].inverse())
                .collect();
            // a[K][D]: coefficient of the class D in x_J x_K
            let mut a = vec![vec![0i64; d]; d];
            for (class, w) in witnesses.iter().enumerate() {
                let mut h = vec![0i64; d];
                for u_inv in &reps {
                    h[sys.right_descents(&u_inv.compose(w)) as usize] += 1;
                }
                subset_sums(&mut h, n);
                for (k, row) in a.iter_mut().enumerate() {
                    row[class] = h[(d - 1) & !k];
                }
            }
            Ok(a.iter()
                .map(|row| {
                    descent_classes_to_basis(row, n)
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| *c != 0)
                        .collect()
                })
                .collect())
        })
        .collect()
}

/// Multiplies `x_J x_K` in the group algebra for every pair, checks that
/// each product is constant on descent classes, and re-expresses it in the
/// basis. Cost grows with the square of the number of cosets; intended for
/// small ranks.
pub fn descent_structure_constants_by_convolution(sys: &CoxeterSystem) -> Result<StructureTable> {
    let n = sys.rank();
    let d = 1usize << n;
    let g = sys.group()?;
    let reps: Vec<Vec<SignedPermutation>> = (0..d)
        .map(|j| sys.min_coset_reps(j as SubsetJ))
        .collect::<Result<_>>()?;
    (0..d * d)
        .into_par_iter()
        .map(|jk| {
            let (j, k) = (jk / d, jk % d);
            let mut counts = vec![0i64; g.order()];
            for u in &reps[j] {
                for v in &reps[k] {
                    let i = g.index_of(&u.compose(v)).ok_or(Error::NotInGroup(format!("{u} {v}")))?;
                    counts[i] += 1;
                }
            }
            let mut a: Vec<Option<i64>> = vec![None; d];
            for (i, &c) in counts.iter().enumerate() {
                let slot = &mut a[g.descents(i) as usize];
                match slot {
                    None => *slot = Some(c),
                    Some(prev) if *prev != c => {
                        return Err(Error::BasisReexpression(format!(
                            "x{} x{} is not constant on the descent class {}",
                            subset_label(j as SubsetJ),
                            subset_label(k as SubsetJ),
                            subset_label(g.descents(i))
                        )))
                    }
                    _ => {}
                }
            }
            let a: Vec<i64> = a.into_iter().map(|c| c.unwrap_or(0)).collect();
            Ok(descent_classes_to_basis(&a, n)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0)
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()
        .map(|flat| flat.chunks(d).map(|c| c.to_vec()).collect())
}

/// Reverses the products of the invariant subalgebra: `x_J x_K` takes the
/// constants of `𝒙_K 𝒙_J`.
pub fn pullback_structure_constants(sys: &CoxeterSystem) -> Result<StructureTable> {
    let inv = invariant_structure_constants(sys)?;
    Ok(transpose(&inv))
}

fn transpose(t: &StructureTable) -> StructureTable {
    let d = t.len();
    (0..d).map(|j| (0..d).map(|k| t[k][j].clone()).collect()).collect()
}

pub fn presentation_from_table<F: Field>(rank: usize, table: &StructureTable) -> AlgebraPresentation<F> {
    let d = 1usize << rank;
    let mut identity = vec![F::zero(); d];
    identity[d - 1] = F::one();
    AlgebraPresentation::from_products(labels(rank), identity, |j, k| {
        table[j][k].iter().map(|&(l, c)| (l, F::from_i64(c))).collect()
    })
}

/// `Σ(W)` on the basis `x_J`, with identity `x_S`.
pub fn descent_algebra<F: Field>(sys: &CoxeterSystem, method: Method) -> Result<AlgebraPresentation<F>> {
    let table = match method {
        Method::GroupDirect => descent_structure_constants(sys)?,
        Method::Pullback => pullback_structure_constants(sys)?,
    };
    Ok(presentation_from_table(sys.rank(), &table))
}

/// Outcome of comparing `Θ(𝒙_J 𝒙_K)` with `x_K x_J` on all basis pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AntiIsomorphismReport {
    pub dimension: usize,
    pub pairs_checked: usize,
    pub identity_preserved: bool,
    /// Pairs `(J, K)` where `Θ(𝒙_J 𝒙_K) ≠ x_K x_J`.
    pub failures: Vec<(SubsetJ, SubsetJ)>,
}

impl AntiIsomorphismReport {
    pub fn passed(&self) -> bool {
        self.identity_preserved && self.failures.is_empty()
    }
}

/// Checks that `𝒙_J ↦ x_J` reverses products, using the group-direct
/// constants of `Σ(W)` and the sample-point constants of `(kF)^W`.
pub fn verify_anti_isomorphism(sys: &CoxeterSystem) -> Result<AntiIsomorphismReport> {
    let desc = descent_structure_constants(sys)?;
    let inv = invariant_structure_constants(sys)?;
    Ok(compare_reversed(&inv, &desc))
}

fn compare_reversed(inv: &StructureTable, desc: &StructureTable) -> AntiIsomorphismReport {
    let d = inv.len();
    let mut failures = Vec::new();
    for j in 0..d {
        for k in 0..d {
            if inv[j][k] != desc[k][j] {
                failures.push((j as SubsetJ, k as SubsetJ));
            }
        }
    }
    // both identities are the basis element of the full subset S
    let s = d - 1;
    let identity_preserved = (0..d).all(|j| {
        inv[s][j] == vec![(j, 1)] && inv[j][s] == vec![(j, 1)] && desc[s][j] == vec![(j, 1)] && desc[j][s] == vec![(j, 1)]
    });
    AntiIsomorphismReport {
        dimension: d,
        pairs_checked: d * d,
        identity_preserved,
        failures,
    }
}

/// The subset chosen for each class of `S/~`: its lexicographically least
/// member.
pub fn class_representatives(sys: &CoxeterSystem) -> Result<Vec<SubsetJ>> {
    let poset = sys.parabolic_orbit_poset()?;
    Ok((0..poset.len())
        .map(|c| {
            *poset
                .members(c)
                .iter()
                .min_by_key(|&&j| subset_lex_key(j))
                .expect("classes are nonempty")
        })
        .collect())
}

/// `ε_O = (1/λ_O) x_{J_O} − Σ_{O' > O} ε_{O'} (1/λ_O) x_{J_O}` with `λ_O` the
/// index of `W_{J_O}` in its normalizer, one element per class of `S/~` in
/// class order.
pub fn direct_descent_idempotents<F: Field>(
    sys: &CoxeterSystem,
    alg: &AlgebraPresentation<F>,
) -> Result<Vec<DescentElement<F>>> {
    let poset = sys.parabolic_orbit_poset()?;
    let reps = class_representatives(sys)?;
    let lambdas: Vec<usize> = reps.iter().map(|&j| sys.normalizer_index(j)).collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by_key(|&c| (reps[c].count_ones(), c));
    let mut eps: Vec<Option<Vec<F>>> = vec![None; reps.len()];
    for c in order {
        let mut rest = alg.identity().to_vec();
        for (u, e) in eps.iter().enumerate() {
            if u != c && poset.leq(c, u) {
                let e = e.as_ref().ok_or_else(|| Error::Verification("class order is not top-down".into()))?;
                for (r, x) in rest.iter_mut().zip(e) {
                    *r -= x.clone();
                }
            }
        }
        let x = [(reps[c], F::from_ratio(1, lambdas[c] as i64))];
        eps[c] = Some(alg.mul_sparse(&crate::exactalg::sparse(&rest), &x));
    }
    let eps: Vec<DescentElement<F>> = eps
        .into_iter()
        .map(|e| DescentElement::from_coordinates(e.expect("all classes visited")))
        .collect();
    let coords: Vec<Vec<F>> = eps.iter().map(|e| e.coordinates().to_vec()).collect();
    let report = verify_complete_system(alg, &coords);
    if !report.passed() {
        return Err(Error::IncompleteSystem(report.failures.join("; ")));
    }
    Ok(eps)
}

/// As [`direct_descent_idempotents`] but returning the completeness report
/// instead of failing.
pub fn direct_descent_idempotents_report<F: Field>(
    sys: &CoxeterSystem,
    alg: &AlgebraPresentation<F>,
) -> Result<CompleteSystemReport> {
    match direct_descent_idempotents(sys, alg) {
        Ok(eps) => {
            let coords: Vec<Vec<F>> = eps.iter().map(|e| e.coordinates().to_vec()).collect();
            Ok(verify_complete_system(alg, &coords))
        }
        Err(Error::IncompleteSystem(msg)) => Ok(CompleteSystemReport {
            count: sys.parabolic_orbit_poset()?.len(),
            semisimple_rank: crate::exactalg::semisimple_rank(alg),
            failures: vec![msg],
        }),
        Err(e) => Err(e),
    }
}

/// Loewy length together with the radical filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoewyReport {
    pub family: Family,
    pub rank: usize,
    pub method: Method,
    pub dimension: usize,
    pub loewy_length: usize,
    /// `dim rad^i` for `i = 1, 2, …` down to the first zero power.
    pub radical_dims: Vec<usize>,
}

pub fn loewy_report<F: Field>(sys: &CoxeterSystem, method: Method) -> Result<LoewyReport> {
    let alg: AlgebraPresentation<F> = descent_algebra(sys, method)?;
    let rad = radical(&alg)?;
    let powers = radical_powers(&alg, &rad);
    Ok(LoewyReport {
        family: sys.family(),
        rank: sys.rank(),
        method,
        dimension: alg.dim(),
        loewy_length: loewy_length_from_powers(&powers),
        radical_dims: powers.iter().map(|p| p.dim()).collect(),
    })
}

/// Loewy length of `Σ(W)` for the group of the given type, built by the
/// group-direct method.
pub fn loewy_length_descent(family: Family, rank: usize) -> Result<usize> {
    let sys = CoxeterSystem::build(family, rank)?;
    Ok(loewy_report::<crate::Rational>(&sys, Method::GroupDirect)?.loewy_length)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn witnesses_have_the_requested_descents() {
        let sys = CoxeterSystem::build(Family::D, 4).unwrap();
        for d in 0..16 {
            assert_eq!(sys.right_descents(&element_with_descents(&sys, d)), d);
        }
    }

    #[test]
    fn moebius_round_trip() {
        let n = 3;
        let c: Vec<i64> = vec![3, -1, 4, 1, -5, 9, 2, 6];
        // a(D) = Σ_{L ∩ D = ∅} c_L
        let a: Vec<i64> = (0..8)
            .map(|dd| (0..8).filter(|l| l & dd == 0).map(|l| c[l]).sum())
            .collect();
        assert_eq!(descent_classes_to_basis(&a, n), c);
    }

    #[test]
    fn a1_square() {
        let sys = CoxeterSystem::build(Family::A, 1).unwrap();
        let t = descent_structure_constants(&sys).unwrap();
        assert_eq!(t[0][0], vec![(0, 2)]);
        assert_eq!(t[1][1], vec![(1, 1)]);
    }

    #[test]
    fn routes_agree_at_small_rank() {
        for (f, n) in [(Family::A, 2), (Family::B, 2), (Family::A, 3), (Family::D, 3), (Family::B, 3)] {
            let sys = CoxeterSystem::build(f, n).unwrap();
            let hist = descent_structure_constants(&sys).unwrap();
            assert_eq!(hist, descent_structure_constants_by_convolution(&sys).unwrap(), "{f}{n}");
            assert_eq!(hist, pullback_structure_constants(&sys).unwrap(), "{f}{n}");
        }
    }

    #[test]
    fn direct_idempotents_in_d3() {
        let sys = CoxeterSystem::build(Family::D, 3).unwrap();
        let alg: AlgebraPresentation<Rational> = descent_algebra(&sys, Method::GroupDirect).unwrap();
        let eps = direct_descent_idempotents(&sys, &alg).unwrap();
        assert_eq!(eps.len(), sys.parabolic_orbit_poset().unwrap().len());
        assert_eq!(eps[0].terms().collect::<Vec<_>>(), vec![(0, &Rational::new(1, 24))]);
    }
}

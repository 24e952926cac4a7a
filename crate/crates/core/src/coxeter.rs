//! Finite Coxeter groups of types A, B and D realized as signed permutation
//! groups, with Coxeter length, minimal coset representatives and
//! conjugacy data for standard parabolic subgroups.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::Rational;

/// Default upper bound on the number of group elements held in memory.
pub const DEFAULT_GROUP_CAP: usize = 400_000;

/// Largest supported permutation degree.
pub const MAX_DEGREE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
            Family::D => "D",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "D" | "d" => Ok(Family::D),
            other => Err(format!("unknown family `{other}` (expected A, B or D)")),
        }
    }
}

/// A bitmask over the simple generators; bit `i` is the generator `s_{i+1}`.
pub type SubsetJ = u32;

/// Renders a generator subset as `{1,3}` using one-based generator indices.
pub fn subset_label(j: SubsetJ) -> String {
    let parts: Vec<String> = (0..32).filter(|i| j >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Sort key ordering subsets lexicographically as increasing index lists.
pub fn subset_lex_key(j: SubsetJ) -> Vec<u32> {
    (0..32).filter(|i| j >> i & 1 == 1).collect()
}

/// A bijection `w` of `{±1, …, ±n}` with `w(-i) = -w(i)`.
///
/// Stored as the images of `1..=n`; unused slots are zero so that derived
/// equality and hashing are structural.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    n: u8,
    img: [i8; MAX_DEGREE],
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DEGREE);
        let mut img = [0i8; MAX_DEGREE];
        for (i, slot) in img.iter_mut().enumerate().take(n) {
            *slot = (i + 1) as i8;
        }
        SignedPermutation { n: n as u8, img }
    }

    /// Builds an element from the signed images of `1..=n`.
    pub fn from_images(images: &[i8]) -> Result<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::NotInGroup(format!("degree {n} exceeds {MAX_DEGREE}")));
        }
        let mut seen = [false; MAX_DEGREE];
        for &v in images {
            let a = v.unsigned_abs() as usize;
            if a == 0 || a > n || seen[a - 1] {
                return Err(Error::NotInGroup(format!("{images:?} is not a signed permutation")));
            }
            seen[a - 1] = true;
        }
        let mut img = [0i8; MAX_DEGREE];
        img[..n].copy_from_slice(images);
        Ok(SignedPermutation { n: n as u8, img })
    }

    pub fn degree(&self) -> usize {
        self.n as usize
    }

    pub fn images(&self) -> &[i8] {
        &self.img[..self.n as usize]
    }

    /// `w(i)` for `i ∈ ±[n]`.
    #[inline]
    pub fn apply(&self, i: i8) -> i8 {
        let v = self.img[(i.unsigned_abs() - 1) as usize];
        if i < 0 {
            -v
        } else {
            v
        }
    }

    /// The composite `self ∘ other`, i.e. `(vw)(i) = v(w(i))`.
    #[inline]
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        debug_assert_eq!(self.n, other.n);
        let mut img = [0i8; MAX_DEGREE];
        for (i, slot) in img.iter_mut().enumerate().take(self.n as usize) {
            *slot = self.apply(other.img[i]);
        }
        SignedPermutation { n: self.n, img }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut img = [0i8; MAX_DEGREE];
        for i in 0..self.n as usize {
            let v = self.img[i];
            let a = (v.unsigned_abs() - 1) as usize;
            img[a] = if v < 0 { -((i + 1) as i8) } else { (i + 1) as i8 };
        }
        SignedPermutation { n: self.n, img }
    }

    pub fn negation_count(&self) -> usize {
        self.images().iter().filter(|&&v| v < 0).count()
    }

    pub fn is_identity(&self) -> bool {
        self.images().iter().enumerate().all(|(i, &v)| v == (i + 1) as i8)
    }

    /// Acts on a coordinate vector: `out_j = v_{w^{-1}(j)}` with
    /// `v_{-i} = -v_i`, equivalently `w(e_i) = e_{w(i)}`.
    pub fn act<F: Field>(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.degree(),
                got: v.len(),
            });
        }
        let mut out = vec![F::zero(); v.len()];
        for (i, x) in v.iter().enumerate() {
            let w = self.img[i];
            let j = (w.unsigned_abs() - 1) as usize;
            out[j] = if w < 0 { -x.clone() } else { x.clone() };
        }
        Ok(out)
    }

    /// Integer version of [`SignedPermutation::act`] for lattice points.
    #[inline]
    pub fn act_int(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; v.len()];
        for (i, &x) in v.iter().enumerate() {
            let w = self.img[i];
            out[(w.unsigned_abs() - 1) as usize] = if w < 0 { -x } else { x };
        }
        out
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images())
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images().iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// The enumerated group: elements in breadth-first order from the
/// identity, with Coxeter lengths and right descent sets.
#[derive(Debug)]
pub struct Group {
    elements: Vec<SignedPermutation>,
    index: FxHashMap<SignedPermutation, u32>,
    lengths: Vec<u32>,
    descents: Vec<SubsetJ>,
}

impl Group {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SignedPermutation] {
        &self.elements
    }

    pub fn index_of(&self, w: &SignedPermutation) -> Option<usize> {
        self.index.get(w).map(|&i| i as usize)
    }

    pub fn length(&self, idx: usize) -> usize {
        self.lengths[idx] as usize
    }

    pub fn descents(&self, idx: usize) -> SubsetJ {
        self.descents[idx]
    }
}

/// A Coxeter system of type A, B or D in its standard signed-permutation
/// realization.
#[derive(Debug)]
pub struct CoxeterSystem {
    family: Family,
    rank: usize,
    generators: Vec<SignedPermutation>,
    simple_roots: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    cap: usize,
    group: OnceLock<Group>,
}

impl CoxeterSystem {
    pub fn build(family: Family, rank: usize) -> Result<Self> {
        Self::with_cap(family, rank, DEFAULT_GROUP_CAP)
    }

    /// Builds the system with a custom bound on the enumerated group size.
    pub fn with_cap(family: Family, rank: usize, cap: usize) -> Result<Self> {
        let n = rank;
        let ok = match family {
            Family::A => (1..MAX_DEGREE).contains(&n),
            Family::B => (2..=11).contains(&n),
            Family::D => (2..=11).contains(&n),
        };
        if !ok {
            return Err(Error::RankOutOfRange { family, rank });
        }
        let degree = if family == Family::A { n + 1 } else { n };
        let unit = |i: usize| {
            let mut v = vec![0i64; degree];
            v[i] = 1;
            v
        };
        let diff = |i: usize, j: usize| {
            let mut v = unit(i);
            v[j] = -1;
            v
        };
        let plus = |i: usize, j: usize| {
            let mut v = unit(i);
            v[j] = 1;
            v
        };
        let swap = |i: usize| {
            let mut img: Vec<i8> = (1..=degree as i8).collect();
            img.swap(i, i + 1);
            SignedPermutation::from_images(&img).expect("transposition")
        };

        let mut generators = Vec::with_capacity(n);
        let mut simple_roots = Vec::with_capacity(n);
        let chain = if family == Family::A { n } else { n - 1 };
        for i in 0..chain {
            generators.push(swap(i));
            simple_roots.push(diff(i, i + 1));
        }
        match family {
            Family::A => {}
            Family::B => {
                let mut img: Vec<i8> = (1..=n as i8).collect();
                img[n - 1] = -(n as i8);
                generators.push(SignedPermutation::from_images(&img)?);
                simple_roots.push(unit(n - 1));
            }
            Family::D => {
                let mut img: Vec<i8> = (1..=n as i8).collect();
                img[n - 2] = -(n as i8);
                img[n - 1] = -((n - 1) as i8);
                generators.push(SignedPermutation::from_images(&img)?);
                simple_roots.push(plus(n - 2, n - 1));
            }
        }

        let mut positive_roots = Vec::new();
        for i in 0..degree {
            for j in i + 1..degree {
                positive_roots.push(diff(i, j));
                if family != Family::A {
                    positive_roots.push(plus(i, j));
                }
            }
        }
        if family == Family::B {
            for i in 0..n {
                positive_roots.push(unit(i));
            }
        }
        if positive_roots.len() > 128 {
            return Err(Error::TooManyHyperplanes(positive_roots.len()));
        }

        Ok(CoxeterSystem {
            family,
            rank,
            generators,
            simple_roots,
            positive_roots,
            cap,
            group: OnceLock::new(),
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Dimension of the ambient space (`n + 1` for type `A_n`).
    pub fn degree(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            _ => self.rank,
        }
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    pub fn generators(&self) -> &[SignedPermutation] {
        &self.generators
    }

    pub fn full_subset(&self) -> SubsetJ {
        ((1u64 << self.rank) - 1) as SubsetJ
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    /// Positive roots in the fixed hyperplane order.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Fundamental coweights `ω_k`, dual to the simple roots.
    pub fn coweights(&self) -> Vec<Vec<Rational>> {
        self.coweights_doubled()
            .into_iter()
            .map(|v| v.into_iter().map(|x| Rational::new(x, 2)).collect())
            .collect()
    }

    /// `2 ω_k`, which has integer coordinates in every family.
    pub fn coweights_doubled(&self) -> Vec<Vec<i64>> {
        let d = self.degree();
        let n = self.rank;
        (0..n)
            .map(|k| {
                let mut v = vec![0i64; d];
                match self.family {
                    Family::D if k == n - 2 => {
                        v.iter_mut().for_each(|x| *x = 1);
                        v[n - 1] = -1;
                    }
                    Family::D if k == n - 1 => v.iter_mut().for_each(|x| *x = 1),
                    _ => v.iter_mut().take(k + 1).for_each(|x| *x = 2),
                }
                v
            })
            .collect()
    }

    /// Integer point in the relative interior of the fundamental face fixed
    /// by `W_J`: twice the sum of the coweights of generators outside `J`.
    pub fn face_point(&self, j: SubsetJ) -> Vec<i64> {
        let mut p = vec![0i64; self.degree()];
        for (k, w) in self.coweights_doubled().iter().enumerate() {
            if j >> k & 1 == 0 {
                for (a, b) in p.iter_mut().zip(w) {
                    *a += b;
                }
            }
        }
        p
    }

    /// Generators whose simple root is orthogonal to `p`.
    pub fn zero_simple_roots(&self, p: &[i64]) -> SubsetJ {
        let mut m = 0;
        for (k, a) in self.simple_roots.iter().enumerate() {
            if dot(a, p) == 0 {
                m |= 1 << k;
            }
        }
        m
    }

    /// Moves `p` into the closed fundamental chamber by reflecting in simple
    /// roots that pair negatively, returning the dominant point.
    pub fn dominant(&self, p: &[i64]) -> Vec<i64> {
        let mut q = p.to_vec();
        loop {
            let Some(k) = self.simple_roots.iter().position(|a| dot(a, &q) < 0) else {
                return q;
            };
            q = self.generators[k].act_int(&q);
        }
    }

    /// The type `J` of the face containing `p`: the face lies in the orbit of
    /// the fundamental face `F_J`.
    pub fn face_type_of_point(&self, p: &[i64]) -> SubsetJ {
        let mut q: [i64; MAX_DEGREE] = [0; MAX_DEGREE];
        let d = p.len();
        q[..d].copy_from_slice(p);
        let q = &mut q[..d];
        match self.family {
            Family::A => {
                q.sort_unstable_by(|a, b| b.cmp(a));
                let mut m = 0;
                for k in 0..self.rank {
                    if q[k] == q[k + 1] {
                        m |= 1 << k;
                    }
                }
                m
            }
            Family::B | Family::D => {
                let n = self.rank;
                let negatives = q.iter().filter(|&&x| x < 0).count();
                let has_zero = q.contains(&0);
                for x in q.iter_mut() {
                    *x = x.abs();
                }
                q.sort_unstable_by(|a, b| b.cmp(a));
                if self.family == Family::D && negatives % 2 == 1 && !has_zero {
                    q[n - 1] = -q[n - 1];
                }
                let mut m = 0;
                for k in 0..n - 1 {
                    if q[k] == q[k + 1] {
                        m |= 1 << k;
                    }
                }
                let last = if self.family == Family::B {
                    q[n - 1] == 0
                } else {
                    q[n - 2] + q[n - 1] == 0
                };
                if last {
                    m |= 1 << (n - 1);
                }
                m
            }
        }
    }

    /// `|W|` from the closed-form order, without enumeration.
    pub fn order(&self) -> u64 {
        let n = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B => (1u64 << n) * fact(n),
            Family::D => (1u64 << (n - 1)) * fact(n),
        }
    }

    /// Whether `w` lies in the group (degree, sign and parity conditions).
    pub fn contains(&self, w: &SignedPermutation) -> bool {
        if w.degree() != self.degree() {
            return false;
        }
        match self.family {
            Family::A => w.negation_count() == 0,
            Family::B => true,
            Family::D => w.negation_count().is_multiple_of(2),
        }
    }

    fn check_member(&self, w: &SignedPermutation) -> Result<()> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(Error::NotInGroup(format!("{w} is not an element of {}", self.name())))
        }
    }

    /// Right descent set: `s ∈ Des(w)` iff `w(α_s)` is a negative root.
    #[inline]
    pub fn right_descents(&self, w: &SignedPermutation) -> SubsetJ {
        let mut m = 0;
        let chain = if self.family == Family::A { self.rank } else { self.rank - 1 };
        for k in 0..chain {
            let a = w.apply(k as i8 + 1);
            let b = w.apply(k as i8 + 2);
            // w(e_k - e_{k+1}) = sgn(a) e_|a| - sgn(b) e_|b|
            let negative = if a.unsigned_abs() < b.unsigned_abs() { a < 0 } else { b > 0 };
            if negative {
                m |= 1 << k;
            }
        }
        let n = self.rank;
        match self.family {
            Family::A => {}
            Family::B => {
                if w.apply(n as i8) < 0 {
                    m |= 1 << (n - 1);
                }
            }
            Family::D => {
                let a = w.apply(n as i8 - 1);
                let b = w.apply(n as i8);
                let negative = if a.unsigned_abs() < b.unsigned_abs() { a < 0 } else { b < 0 };
                if negative {
                    m |= 1 << (n - 1);
                }
            }
        }
        m
    }

    /// The enumerated group, built on first use.
    pub fn group(&self) -> Result<&Group> {
        let order = self.order();
        if order > self.cap as u64 {
            return Err(Error::GroupTooLarge {
                family: self.family,
                rank: self.rank,
                order,
                cap: self.cap,
            });
        }
        Ok(self.group.get_or_init(|| self.enumerate()))
    }

    fn enumerate(&self) -> Group {
        let id = SignedPermutation::identity(self.degree());
        let mut elements = vec![id];
        let mut lengths = vec![0u32];
        let mut index = FxHashMap::default();
        index.insert(id, 0u32);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let w = elements[i];
            for s in &self.generators {
                let ws = w.compose(s);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(ws) {
                    e.insert(elements.len() as u32);
                    elements.push(ws);
                    lengths.push(lengths[i] + 1);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        let descents = elements.iter().map(|w| self.right_descents(w)).collect();
        Group {
            elements,
            index,
            lengths,
            descents,
        }
    }

    /// Coxeter length of `w`: its distance from the identity in the Cayley
    /// graph. Uses the enumerated group when it fits under the cap and
    /// otherwise strips right descents one at a time.
    pub fn coxeter_length(&self, w: &SignedPermutation) -> Result<usize> {
        self.check_member(w)?;
        if let Ok(g) = self.group() {
            let idx = g.index_of(w).ok_or_else(|| Error::NotInGroup(w.to_string()))?;
            return Ok(g.length(idx));
        }
        let mut w = *w;
        let mut len = 0;
        loop {
            let d = self.right_descents(&w);
            if d == 0 {
                return Ok(len);
            }
            w = w.compose(&self.generators[d.trailing_zeros() as usize]);
            len += 1;
        }
    }

    /// Indices (into the enumerated group) of the minimal-length
    /// representatives of the left cosets `wW_J`.
    pub fn min_coset_rep_indices(&self, j: SubsetJ) -> Result<Vec<usize>> {
        let g = self.group()?;
        Ok((0..g.order()).filter(|&i| g.descents(i) & j == 0).collect())
    }

    /// `X_J`: the elements `w` with `ℓ(ws) > ℓ(w)` for every `s ∈ J`.
    pub fn min_coset_reps(&self, j: SubsetJ) -> Result<Vec<SignedPermutation>> {
        let g = self.group()?;
        Ok(self
            .min_coset_rep_indices(j)?
            .into_iter()
            .map(|i| g.elements()[i])
            .collect())
    }

    /// `|W_J|`, as `|W| / |X_J|`.
    pub fn parabolic_order(&self, j: SubsetJ) -> Result<usize> {
        let g = self.group()?;
        let reps = (0..g.order()).filter(|&i| g.descents(i) & j == 0).count();
        Ok(g.order() / reps)
    }

    /// For each `w`, the set of generators fixing `w^{-1}` applied to the
    /// sample point of `F_K`. `w W_J w^{-1} ⊆ W_K` iff `J` is contained in
    /// the set for `w`.
    fn conjugation_masks(&self, k: SubsetJ) -> Result<FxHashSet<SubsetJ>> {
        let g = self.group()?;
        let p = self.face_point(k);
        Ok(g.elements()
            .iter()
            .map(|w| self.zero_simple_roots(&w.inverse().act_int(&p)))
            .collect())
    }

    /// The poset `S/~` of conjugacy classes of standard parabolic subgroups,
    /// ordered by reverse inclusion.
    pub fn parabolic_orbit_poset(&self) -> Result<ParabolicPoset> {
        let subsets = 1usize << self.rank;
        let orders: Vec<usize> = (0..subsets)
            .map(|j| self.parabolic_order(j as SubsetJ))
            .collect::<Result<_>>()?;
        let masks: Vec<Vec<SubsetJ>> = (0..subsets)
            .map(|k| {
                let mut v: Vec<SubsetJ> = self.conjugation_masks(k as SubsetJ)?.into_iter().collect();
                v.sort_unstable();
                Ok(v)
            })
            .collect::<Result<_>>()?;
        // conj_into[k][j]: some conjugate of W_J lies in W_K.
        let conj_into = |j: usize, k: usize| masks[k].iter().any(|&m| j as SubsetJ & !m == 0);

        let mut class_of = vec![usize::MAX; subsets];
        let mut members: Vec<Vec<SubsetJ>> = Vec::new();
        let mut by_key: Vec<usize> = (0..subsets).collect();
        by_key.sort_by_key(|&j| subset_lex_key(j as SubsetJ));
        for &j in &by_key {
            if class_of[j] != usize::MAX {
                continue;
            }
            let c = members.len();
            let mut m = Vec::new();
            for &k in &by_key {
                if class_of[k] == usize::MAX
                    && (j as u32).count_ones() == (k as u32).count_ones()
                    && orders[j] == orders[k]
                    && conj_into(j, k)
                {
                    class_of[k] = c;
                    m.push(k as SubsetJ);
                }
            }
            members.push(m);
        }
        let reps: Vec<SubsetJ> = members.iter().map(|m| m[0]).collect();
        let nc = members.len();
        // class(J) <= class(K) iff some conjugate of W_K lies in W_J
        let leq = (0..nc)
            .map(|a| (0..nc).map(|b| conj_into(reps[b] as usize, reps[a] as usize)).collect())
            .collect();
        Ok(ParabolicPoset {
            class_of,
            members,
            leq,
        })
    }

    /// `[N_W(W_J) : W_J]`.
    pub fn normalizer_index(&self, j: SubsetJ) -> Result<usize> {
        let g = self.group()?;
        let p = self.face_point(j);
        let normalizing = g
            .elements()
            .iter()
            .filter(|w| j & !self.zero_simple_roots(&w.inverse().act_int(&p)) == 0)
            .count();
        Ok(normalizing / self.parabolic_order(j)?)
    }
}

#[inline]
pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conjugacy classes of standard parabolic subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicPoset {
    class_of: Vec<usize>,
    members: Vec<Vec<SubsetJ>>,
    leq: Vec<Vec<bool>>,
}

impl ParabolicPoset {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn class_of(&self, j: SubsetJ) -> usize {
        self.class_of[j as usize]
    }

    /// Members of a class, lexicographically minimal first.
    pub fn members(&self, class: usize) -> &[SubsetJ] {
        &self.members[class]
    }

    pub fn representative(&self, class: usize) -> SubsetJ {
        self.members[class][0]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Number of positive roots sent to negative roots.
    fn inversions(sys: &CoxeterSystem, w: &SignedPermutation) -> usize {
        sys.positive_roots()
            .iter()
            .filter(|a| {
                let img = w.act_int(a);
                img.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0)
            })
            .count()
    }

    #[test]
    fn group_orders() {
        for (f, n, order) in [(Family::A, 2, 6), (Family::B, 2, 8), (Family::D, 5, 1920), (Family::D, 4, 192)] {
            let sys = CoxeterSystem::build(f, n).unwrap();
            assert_eq!(sys.group().unwrap().order(), order);
            assert_eq!(sys.order(), order as u64);
        }
        let d5 = CoxeterSystem::build(Family::D, 5).unwrap();
        assert!(d5.group().unwrap().elements().iter().all(|w| w.negation_count() % 2 == 0));
    }

    #[test]
    fn action_on_vectors() {
        let q = |v: i64| Rational::from_integer(v);
        let v = vec![q(3), q(5), q(7)];
        assert_eq!(SignedPermutation::identity(3).act(&v).unwrap(), v);
        let t = SignedPermutation::from_images(&[2, 1, 3]).unwrap();
        assert_eq!(t.act(&v).unwrap(), vec![q(5), q(3), q(7)]);
        let neg = SignedPermutation::from_images(&[-1, -2, 3]).unwrap();
        assert_eq!(neg.act(&[q(1), q(2), q(3)]).unwrap(), vec![q(-1), q(-2), q(3)]);
        assert!(t.act(&v[..2]).is_err());
    }

    #[test]
    fn generators_match_simple_roots() {
        for (f, n) in [(Family::A, 3), (Family::B, 3), (Family::D, 4), (Family::D, 2)] {
            let sys = CoxeterSystem::build(f, n).unwrap();
            for (s, a) in sys.generators().iter().zip(sys.simple_roots()) {
                assert!(s.compose(s).is_identity());
                let neg: Vec<i64> = a.iter().map(|x| -x).collect();
                assert_eq!(s.act_int(a), neg);
            }
            let rho = sys.face_point(0);
            assert!(sys.positive_roots().iter().all(|a| dot(a, &rho) > 0));
            for (k, w) in sys.coweights_doubled().iter().enumerate() {
                for (l, a) in sys.simple_roots().iter().enumerate() {
                    assert_eq!(dot(a, w), if k == l { 2 } else { 0 });
                }
            }
        }
    }

    #[test]
    fn lengths_agree_with_inversion_counts() {
        for (f, n) in [(Family::A, 3), (Family::B, 3), (Family::D, 4)] {
            let sys = CoxeterSystem::build(f, n).unwrap();
            let g = sys.group().unwrap();
            for (i, w) in g.elements().iter().enumerate() {
                assert_eq!(g.length(i), inversions(&sys, w), "{w}");
                for (k, s) in sys.generators().iter().enumerate() {
                    let ws = g.index_of(&w.compose(s)).unwrap();
                    let down = g.descents(i) >> k & 1 == 1;
                    assert_eq!(g.length(ws) + 1 == g.length(i), down);
                    assert_eq!(g.length(ws).abs_diff(g.length(i)), 1);
                }
            }
            let longest = g.elements().iter().map(|w| inversions(&sys, w)).max().unwrap();
            assert_eq!(longest, sys.positive_roots().len());
        }
        let a2 = CoxeterSystem::build(Family::A, 2).unwrap();
        let w0 = SignedPermutation::from_images(&[3, 2, 1]).unwrap();
        assert_eq!(a2.coxeter_length(&w0).unwrap(), 3);
        let d3 = CoxeterSystem::build(Family::D, 3).unwrap();
        let odd = SignedPermutation::from_images(&[-1, 2, 3]).unwrap();
        assert!(d3.coxeter_length(&odd).is_err());
    }

    #[test]
    fn length_without_enumeration() {
        let d5 = CoxeterSystem::with_cap(Family::D, 5, 10).unwrap();
        assert!(d5.group().is_err());
        let w = SignedPermutation::from_images(&[-5, 4, -3, 2, 1]).unwrap();
        assert_eq!(d5.coxeter_length(&w).unwrap(), inversions(&d5, &w));
    }

    #[test]
    fn coset_representatives_partition_the_group() {
        let sys = CoxeterSystem::build(Family::D, 3).unwrap();
        let g = sys.group().unwrap();
        for j in 0..8 {
            let reps = sys.min_coset_reps(j).unwrap();
            let wj: Vec<usize> = (0..g.order()).filter(|&i| {
                // W_J = elements fixing the sample point of F_J
                let p = sys.face_point(j);
                g.elements()[i].act_int(&p) == p
            }).collect();
            assert_eq!(reps.len() * wj.len(), g.order());
            let mut covered = FxHashSet::default();
            for r in &reps {
                for &u in &wj {
                    assert!(covered.insert(r.compose(&g.elements()[u])));
                }
            }
            assert_eq!(covered.len(), g.order());
        }
        assert_eq!(sys.min_coset_reps(7).unwrap(), vec![SignedPermutation::identity(3)]);
        assert_eq!(sys.min_coset_reps(0).unwrap().len(), 24);
    }

    #[test]
    fn face_type_matches_dominant_walk() {
        for (f, n) in [(Family::A, 3), (Family::B, 3), (Family::D, 4), (Family::D, 3)] {
            let sys = CoxeterSystem::build(f, n).unwrap();
            let g = sys.group().unwrap();
            for j in 0..(1u32 << n) {
                let p = sys.face_point(j);
                for w in g.elements() {
                    let q = w.act_int(&p);
                    assert_eq!(sys.face_type_of_point(&q), j);
                    assert_eq!(sys.dominant(&q), p);
                }
            }
        }
    }

    #[test]
    fn parabolic_classes() {
        let a2 = CoxeterSystem::build(Family::A, 2).unwrap();
        let p = a2.parabolic_orbit_poset().unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.class_of(1), p.class_of(2));
        assert_eq!(p.members(p.class_of(0)), &[0]);
        let top = p.class_of(0);
        assert!((0..p.len()).all(|c| p.leq(c, top)));
        assert_eq!(a2.normalizer_index(3).unwrap(), 1);
        assert_eq!(a2.normalizer_index(0).unwrap(), 6);
        assert_eq!(a2.normalizer_index(1).unwrap(), 1);

        // D4: the three leaves of the fork are pairwise non-conjugate reflections
        // in rank one, but all single reflections are conjugate (one hyperplane orbit).
        let d4 = CoxeterSystem::build(Family::D, 4).unwrap();
        let p = d4.parabolic_orbit_poset().unwrap();
        let singles: FxHashSet<usize> = (0..4).map(|k| p.class_of(1 << k)).collect();
        assert_eq!(singles.len(), 1);
        assert_eq!(p.len(), 11);
        let pairs: FxHashSet<usize> = [0b0101u32, 0b1001, 0b1100].iter().map(|&j| p.class_of(j)).collect();
        assert_eq!(pairs.len(), 3);
    }
}

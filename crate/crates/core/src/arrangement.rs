//! Reflection arrangements: faces as sign vectors, the face product, the
//! support map, the intersection lattice with its orbits, and the
//! signed-partition description of type D lattice elements.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::coxeter::{dot, CoxeterSystem, Family, SignedPermutation, SubsetJ};
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, SubspaceBasis};
use crate::scalar::Field;
use crate::Rational;

/// Sign vector over an ordered list of at most 128 hyperplanes.
///
/// `nz` marks the hyperplanes not containing the face and `pos` marks those
/// with a `+` sign; `pos` is always a subset of `nz`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SignVector {
    nz: u128,
    pos: u128,
}

impl SignVector {
    /// The all-zero vector (the face `{0}` of an essential arrangement).
    pub const ORIGIN: SignVector = SignVector { nz: 0, pos: 0 };

    pub fn from_signs(signs: &[i8]) -> Self {
        let mut s = SignVector::ORIGIN;
        for (i, &v) in signs.iter().enumerate() {
            s.set(i, v);
        }
        s
    }

    #[inline]
    pub fn get(&self, i: usize) -> i8 {
        if self.nz >> i & 1 == 0 {
            0
        } else if self.pos >> i & 1 == 1 {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: i8) {
        let bit = 1u128 << i;
        self.nz &= !bit;
        self.pos &= !bit;
        if v != 0 {
            self.nz |= bit;
        }
        if v > 0 {
            self.pos |= bit;
        }
    }

    /// Face product: the sign of `self` where nonzero, else the sign of `y`.
    #[inline]
    pub fn product(&self, y: &SignVector) -> SignVector {
        SignVector {
            nz: self.nz | y.nz,
            pos: self.pos | (y.pos & !self.nz),
        }
    }

    /// Hyperplanes containing the face.
    #[inline]
    pub fn zero_set(&self, full: u128) -> u128 {
        !self.nz & full
    }

    pub fn nonzero_mask(&self) -> u128 {
        self.nz
    }

    pub fn positive_mask(&self) -> u128 {
        self.pos
    }

    /// Lexicographic order on symbols with `- < 0 < +`.
    pub fn lex_cmp(&self, other: &SignVector) -> Ordering {
        let diff = (self.nz ^ other.nz) | (self.pos ^ other.pos);
        if diff == 0 {
            return Ordering::Equal;
        }
        let i = diff.trailing_zeros() as usize;
        self.get(i).cmp(&other.get(i))
    }

    pub fn to_string_len(&self, len: usize) -> String {
        (0..len)
            .map(|i| match self.get(i) {
                1 => '+',
                -1 => '-',
                _ => '0',
            })
            .collect()
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = 128 - (self.nz.leading_zeros() as usize).min(128);
        write!(f, "SignVector({})", self.to_string_len(len))
    }
}

/// Sorted index list of a hyperplane mask; the order used for canonical
/// representatives of lattice elements.
pub fn mask_key(m: u128) -> Vec<u8> {
    (0..128u8).filter(|&i| m >> i & 1 == 1).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    pub index: usize,
    /// The positive root orthogonal to the hyperplane.
    pub normal: Vec<Rational>,
}

/// The action of a group element on hyperplane indices: hyperplane `j` of
/// the image is `sign * (hyperplane src of the original)`.
#[derive(Clone, Debug)]
struct HyperplaneMap {
    src: Vec<u8>,
    flip: u128,
}

/// The reflection arrangement of a Coxeter system.
#[derive(Clone, Debug)]
pub struct Arrangement {
    family: Family,
    degree: usize,
    normals: Vec<Vec<i64>>,
    full: u128,
    lookup: FxHashMap<Vec<i64>, (u8, bool)>,
    generator_maps: Vec<HyperplaneMap>,
}

impl Arrangement {
    pub fn new(sys: &CoxeterSystem) -> Self {
        let normals = sys.positive_roots().to_vec();
        let len = normals.len();
        let mut lookup = FxHashMap::default();
        for (i, a) in normals.iter().enumerate() {
            lookup.insert(a.clone(), (i as u8, false));
            lookup.insert(a.iter().map(|x| -x).collect(), (i as u8, true));
        }
        let mut arr = Arrangement {
            family: sys.family(),
            degree: sys.degree(),
            normals,
            full: if len == 128 { u128::MAX } else { (1u128 << len) - 1 },
            lookup,
            generator_maps: Vec::new(),
        };
        arr.generator_maps = sys.generators().iter().map(|s| arr.map_of(s)).collect();
        arr
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn full_mask(&self) -> u128 {
        self.full
    }

    pub fn normal(&self, i: usize) -> &[i64] {
        &self.normals[i]
    }

    pub fn hyperplanes(&self) -> Vec<Hyperplane> {
        self.normals
            .iter()
            .enumerate()
            .map(|(index, a)| Hyperplane {
                index,
                normal: a.iter().map(|&x| Rational::from_integer(x)).collect(),
            })
            .collect()
    }

    fn map_of(&self, w: &SignedPermutation) -> HyperplaneMap {
        // sigma_j(w x) = sign <a_j, w p> = sign <w^{-1} a_j, p>
        let winv = w.inverse();
        let mut src = Vec::with_capacity(self.len());
        let mut flip = 0u128;
        for (j, a) in self.normals.iter().enumerate() {
            let (i, neg) = self.lookup[&winv.act_int(a)];
            src.push(i);
            if neg {
                flip |= 1 << j;
            }
        }
        HyperplaneMap { src, flip }
    }

    fn apply_map(map: &HyperplaneMap, x: &SignVector) -> SignVector {
        let mut out = SignVector::ORIGIN;
        for (j, &i) in map.src.iter().enumerate() {
            let bit = 1u128 << j;
            if x.nz >> i & 1 == 1 {
                out.nz |= bit;
                let p = x.pos >> i & 1 == 1;
                if p != (map.flip & bit != 0) {
                    out.pos |= bit;
                }
            }
        }
        out
    }

    /// Image of a face under the `k`-th simple generator.
    pub fn act_generator(&self, k: usize, x: &SignVector) -> SignVector {
        Self::apply_map(&self.generator_maps[k], x)
    }

    /// Image of a face under an arbitrary group element.
    pub fn act(&self, w: &SignedPermutation, x: &SignVector) -> SignVector {
        Self::apply_map(&self.map_of(w), x)
    }

    /// Image of a set of hyperplanes (for instance a zero set).
    pub fn act_on_mask(&self, w: &SignedPermutation, m: u128) -> u128 {
        let map = self.map_of(w);
        let mut out = 0;
        for (j, &i) in map.src.iter().enumerate() {
            if m >> i & 1 == 1 {
                out |= 1 << j;
            }
        }
        out
    }

    fn act_generator_on_mask(&self, k: usize, m: u128) -> u128 {
        let map = &self.generator_maps[k];
        let mut out = 0;
        for (j, &i) in map.src.iter().enumerate() {
            if m >> i & 1 == 1 {
                out |= 1 << j;
            }
        }
        out
    }

    /// Signs of `<normal_H, point>` for every hyperplane.
    pub fn sign_vector<F: Field>(&self, point: &[F]) -> SignVector {
        let mut s = SignVector::ORIGIN;
        for (i, a) in self.normals.iter().enumerate() {
            let mut acc = F::zero();
            for (x, &c) in point.iter().zip(a) {
                if c != 0 {
                    acc += x.clone() * F::from_i64(c);
                }
            }
            s.set(i, acc.signum_i8());
        }
        s
    }

    pub fn sign_vector_int(&self, point: &[i64]) -> SignVector {
        let mut s = SignVector::ORIGIN;
        for (i, a) in self.normals.iter().enumerate() {
            s.set(i, dot(a, point).signum() as i8);
        }
        s
    }

    /// The intersection of the hyperplanes in `zero_set`, with its
    /// reduced-echelon basis.
    pub fn subspace(&self, zero_set: u128) -> IntersectionSubspace {
        let rows: Vec<Vec<Rational>> = mask_key(zero_set)
            .iter()
            .map(|&i| self.normals[i as usize].iter().map(|&x| Rational::from_integer(x)).collect())
            .collect();
        let m = Matrix::from_rows(self.degree, rows);
        let basis = SubspaceBasis::from_spanning(self.degree, m.nullspace());
        IntersectionSubspace {
            zero_set,
            dim: basis.dim(),
            basis,
        }
    }

    /// All hyperplanes containing the span of `vectors`.
    pub fn zero_set_of_span<F: Field>(&self, vectors: &[Vec<F>]) -> u128 {
        let mut m = 0u128;
        for (i, a) in self.normals.iter().enumerate() {
            let vanishes = vectors.iter().all(|v| {
                let mut acc = F::zero();
                for (x, &c) in v.iter().zip(a) {
                    if c != 0 {
                        acc += x.clone() * F::from_i64(c);
                    }
                }
                acc.is_zero()
            });
            if vanishes {
                m |= 1 << i;
            }
        }
        m
    }
}

/// A face with an exact point in its relative interior.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub signs: SignVector,
    pub sample: Vec<Rational>,
}

/// `F_J`: the face of the fundamental chamber fixed pointwise by `W_J`.
pub fn fundamental_face(sys: &CoxeterSystem, arr: &Arrangement, j: SubsetJ) -> Face {
    let sample: Vec<Rational> = sys.face_point(j).into_iter().map(|x| Rational::new(x, 2)).collect();
    Face {
        signs: arr.sign_vector(&sample),
        sample,
    }
}

fn abs_pairings(arr: &Arrangement, p: &[Rational]) -> Vec<Rational> {
    (0..arr.len())
        .map(|i| {
            let mut acc = Rational::from_integer(0);
            for (x, &c) in p.iter().zip(arr.normal(i)) {
                if c != 0 {
                    acc += x * &Rational::from_integer(c);
                }
            }
            acc.abs()
        })
        .collect()
}

/// The face product computed both ways: by the sign rule and geometrically
/// from `x.sample + ε y.sample`. Disagreement is reported as an error.
pub fn face_product(arr: &Arrangement, x: &Face, y: &Face) -> Result<Face> {
    let rule = x.signs.product(&y.signs);
    let ax = abs_pairings(arr, &x.sample);
    let ay = abs_pairings(arr, &y.sample);
    let min_x = ax.iter().filter(|v| !num_traits::Zero::is_zero(*v)).min().cloned();
    let max_y = ay.iter().max().cloned().unwrap_or_else(|| Rational::from_integer(0));
    let eps = match min_x {
        Some(m) => m / (Rational::from_integer(1) + max_y),
        None => Rational::from_integer(1),
    };
    let sample: Vec<Rational> = x.sample.iter().zip(&y.sample).map(|(a, b)| a + &(&eps * b)).collect();
    let geometric = arr.sign_vector(&sample);
    if geometric != rule {
        return Err(Error::Verification(format!(
            "face product sign rule {} disagrees with geometric product {}",
            rule.to_string_len(arr.len()),
            geometric.to_string_len(arr.len())
        )));
    }
    Ok(Face { signs: rule, sample })
}

/// All faces of the arrangement, grouped into `W`-orbits by type `J`.
///
/// Faces are ordered by type and, within a type, lexicographically by sign
/// vector, so the first face of each orbit is its canonical representative.
#[derive(Debug)]
pub struct FaceSet {
    signs: Vec<SignVector>,
    samples: Vec<Vec<i64>>,
    types: Vec<SubsetJ>,
    index: FxHashMap<SignVector, u32>,
    orbit_start: Vec<usize>,
    generator_perms: Vec<Vec<u32>>,
    hyperplanes: usize,
}

impl FaceSet {
    /// Enumerates faces as the union of the orbits of the `2^|S|`
    /// fundamental faces.
    pub fn enumerate(sys: &CoxeterSystem, arr: &Arrangement) -> Result<Self> {
        if sys.order() > sys.cap() as u64 {
            return Err(Error::GroupTooLarge {
                family: sys.family(),
                rank: sys.rank(),
                order: sys.order(),
                cap: sys.cap(),
            });
        }
        let n = sys.rank();
        let mut signs = Vec::new();
        let mut samples = Vec::new();
        let mut types = Vec::new();
        let mut orbit_start = Vec::with_capacity((1 << n) + 1);
        for j in 0..(1u32 << n) {
            let p = sys.face_point(j);
            let start = arr.sign_vector_int(&p);
            let mut seen: FxHashMap<SignVector, Vec<i64>> = FxHashMap::default();
            seen.insert(start, p);
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let px = seen[&x].clone();
                for (k, s) in sys.generators().iter().enumerate() {
                    let y = arr.act_generator(k, &x);
                    if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(y) {
                        e.insert(s.act_int(&px));
                        queue.push_back(y);
                    }
                }
            }
            let mut orbit: Vec<(SignVector, Vec<i64>)> = seen.into_iter().collect();
            orbit.sort_by(|a, b| a.0.lex_cmp(&b.0));
            orbit_start.push(signs.len());
            for (sv, pt) in orbit {
                signs.push(sv);
                samples.push(pt);
                types.push(j);
            }
        }
        orbit_start.push(signs.len());
        let index: FxHashMap<SignVector, u32> = signs.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        let generator_perms = (0..n)
            .map(|k| signs.iter().map(|x| index[&arr.act_generator(k, x)]).collect())
            .collect();
        Ok(FaceSet {
            signs,
            samples,
            types,
            index,
            orbit_start,
            generator_perms,
            hyperplanes: arr.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn hyperplane_count(&self) -> usize {
        self.hyperplanes
    }

    pub fn signs(&self, i: usize) -> SignVector {
        self.signs[i]
    }

    pub fn all_signs(&self) -> &[SignVector] {
        &self.signs
    }

    /// Sample point scaled by two (integer coordinates).
    pub fn sample_doubled(&self, i: usize) -> &[i64] {
        &self.samples[i]
    }

    pub fn face(&self, i: usize) -> Face {
        Face {
            signs: self.signs[i],
            sample: self.samples[i].iter().map(|&x| Rational::new(x, 2)).collect(),
        }
    }

    pub fn index_of(&self, s: &SignVector) -> Option<usize> {
        self.index.get(s).map(|&i| i as usize)
    }

    /// Orbit type `J` of a face.
    pub fn face_type(&self, i: usize) -> SubsetJ {
        self.types[i]
    }

    /// Indices of the faces in the orbit of `F_J`.
    pub fn orbit(&self, j: SubsetJ) -> std::ops::Range<usize> {
        self.orbit_start[j as usize]..self.orbit_start[j as usize + 1]
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_start.len() - 1
    }

    pub fn generator_count(&self) -> usize {
        self.generator_perms.len()
    }

    /// Face index of the image of face `i` under generator `k`.
    pub fn act_generator(&self, k: usize, i: usize) -> usize {
        self.generator_perms[k][i] as usize
    }

    /// Index of the product of faces `i` and `j`.
    pub fn product(&self, i: usize, j: usize) -> Result<usize> {
        let p = self.signs[i].product(&self.signs[j]);
        self.index_of(&p).ok_or(Error::MissingFace)
    }

    pub fn origin(&self) -> usize {
        self.index_of(&SignVector::ORIGIN).expect("origin face")
    }

    pub fn chambers(&self) -> std::ops::Range<usize> {
        self.orbit(0)
    }

    /// Zero set of face `i` (its support as a hyperplane mask).
    pub fn zero_set(&self, i: usize) -> u128 {
        let full = if self.hyperplanes == 128 { u128::MAX } else { (1u128 << self.hyperplanes) - 1 };
        self.signs[i].zero_set(full)
    }

    /// `y ≤ x` in the face order, i.e. `y x = x`.
    pub fn is_face_of(&self, y: usize, x: usize) -> bool {
        self.signs[y].product(&self.signs[x]) == self.signs[x]
    }
}

/// An element of the intersection lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionSubspace {
    pub zero_set: u128,
    /// Reduced-echelon basis; its row order is the fixed orientation.
    pub basis: SubspaceBasis<Rational>,
    pub dim: usize,
}

/// The support of a face: the intersection of the hyperplanes containing it.
pub fn support(arr: &Arrangement, x: &Face) -> IntersectionSubspace {
    arr.subspace(x.signs.zero_set(arr.full_mask()))
}

/// The intersection lattice with covers, `W`-orbits and the orbit order.
#[derive(Debug)]
pub struct IntersectionLattice {
    family: Family,
    degree: usize,
    elements: Vec<IntersectionSubspace>,
    index: FxHashMap<u128, u32>,
    lower_covers: Vec<Vec<usize>>,
    upper_covers: Vec<Vec<usize>>,
    generator_perms: Vec<Vec<u32>>,
    orbit_of: Vec<usize>,
    orbits: Vec<Vec<usize>>,
    orbit_leq: Vec<Vec<bool>>,
    face_support: Vec<u32>,
}

impl IntersectionLattice {
    pub fn build(sys: &CoxeterSystem, arr: &Arrangement, faces: &FaceSet) -> Self {
        let mut zero_sets: Vec<u128> = faces.all_signs().iter().map(|s| s.zero_set(arr.full_mask())).collect();
        zero_sets.sort_unstable();
        zero_sets.dedup();
        let mut elements: Vec<IntersectionSubspace> = zero_sets.iter().map(|&z| arr.subspace(z)).collect();
        elements.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| mask_key(a.zero_set).cmp(&mask_key(b.zero_set))));
        let index: FxHashMap<u128, u32> = elements.iter().enumerate().map(|(i, e)| (e.zero_set, i as u32)).collect();

        let len = elements.len();
        let mut lower_covers = vec![Vec::new(); len];
        let mut upper_covers = vec![Vec::new(); len];
        for (x, ex) in elements.iter().enumerate() {
            for (y, ey) in elements.iter().enumerate() {
                if ey.dim + 1 == ex.dim && ex.zero_set & !ey.zero_set == 0 {
                    lower_covers[x].push(y);
                    upper_covers[y].push(x);
                }
            }
        }

        let generator_perms: Vec<Vec<u32>> = (0..sys.rank())
            .map(|k| {
                elements
                    .iter()
                    .map(|e| index[&arr.act_generator_on_mask(k, e.zero_set)])
                    .collect()
            })
            .collect();

        let mut orbit_of = vec![usize::MAX; len];
        let mut orbits = Vec::new();
        for start in 0..len {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut members = vec![start];
            orbit_of[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for perm in &generator_perms {
                    let y = perm[x] as usize;
                    if orbit_of[y] == usize::MAX {
                        orbit_of[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            orbits.push(members);
        }

        let orbit_leq = (0..orbits.len())
            .map(|a| {
                (0..orbits.len())
                    .map(|b: usize| {
                        let y = &elements[orbits[b][0]];
                        orbits[a]
                            .iter()
                            .any(|&x| y.zero_set & !elements[x].zero_set == 0)
                    })
                    .collect()
            })
            .collect();

        let face_support = faces
            .all_signs()
            .iter()
            .map(|s| index[&s.zero_set(arr.full_mask())])
            .collect();

        IntersectionLattice {
            family: sys.family(),
            degree: sys.degree(),
            elements,
            index,
            lower_covers,
            upper_covers,
            generator_perms,
            orbit_of,
            orbits,
            orbit_leq,
            face_support,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn element(&self, i: usize) -> &IntersectionSubspace {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[IntersectionSubspace] {
        &self.elements
    }

    pub fn index_of(&self, zero_set: u128) -> Option<usize> {
        self.index.get(&zero_set).map(|&i| i as usize)
    }

    /// The whole space, which is always element 0.
    pub fn top(&self) -> usize {
        0
    }

    pub fn bottom(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn dim(&self, i: usize) -> usize {
        self.elements[i].dim
    }

    /// `X ⊆ Y`.
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.elements[y].zero_set & !self.elements[x].zero_set == 0
    }

    /// Elements covered by `x`.
    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower_covers[x]
    }

    /// Elements covering `x`.
    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper_covers[x]
    }

    pub fn cover_count(&self) -> usize {
        self.lower_covers.iter().map(|c| c.len()).sum()
    }

    /// Join `X ∨ Y`: the smallest lattice element containing both.
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.index[&(self.elements[x].zero_set & self.elements[y].zero_set)] as usize
    }

    pub fn act_generator(&self, k: usize, x: usize) -> usize {
        self.generator_perms[k][x] as usize
    }

    pub fn generator_count(&self) -> usize {
        self.generator_perms.len()
    }

    /// Image of `x` under an arbitrary group element.
    pub fn act(&self, arr: &Arrangement, w: &SignedPermutation, x: usize) -> usize {
        self.index[&arr.act_on_mask(w, self.elements[x].zero_set)] as usize
    }

    pub fn orbit_of(&self, x: usize) -> usize {
        self.orbit_of[x]
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    /// Canonical representative: the member with the minimal sorted zero set.
    pub fn orbit_representative(&self, o: usize) -> usize {
        self.orbits[o][0]
    }

    /// `O_a ≤ O_b` iff some `w(X) ⊆ Y` for `X ∈ O_a`, `Y ∈ O_b`.
    pub fn orbit_leq(&self, a: usize, b: usize) -> bool {
        self.orbit_leq[a][b]
    }

    pub fn orbit_dim(&self, o: usize) -> usize {
        self.elements[self.orbits[o][0]].dim
    }

    /// Lattice index of the support of face `i`.
    pub fn support_of_face(&self, i: usize) -> usize {
        self.face_support[i] as usize
    }

    /// Orbit of the support of the fundamental face `F_J`.
    pub fn orbit_of_type(&self, faces: &FaceSet, j: SubsetJ) -> usize {
        self.orbit_of(self.support_of_face(faces.orbit(j).start))
    }

    /// Zero-set label `{1,4}` with one-based hyperplane indices.
    pub fn zero_set_label(&self, x: usize) -> String {
        let parts: Vec<String> = mask_key(self.elements[x].zero_set).iter().map(|i| (i + 1).to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Vertex label for exports: signed-partition notation in type D and
    /// zero-set lists otherwise.
    pub fn label(&self, arr: &Arrangement, x: usize) -> String {
        if self.family == Family::D {
            signed_partition(arr, &self.elements[x]).map(|p| p.label()).unwrap_or_default()
        } else {
            self.zero_set_label(x)
        }
    }
}

/// A type D lattice element `{B_1, …, B_r; C}`.
///
/// Each paired block is stored as the member of `{B, -B}` containing the
/// smallest absolute value with a positive sign; blocks are sorted by that
/// value and their elements by absolute value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPartition {
    pub blocks: Vec<Vec<i8>>,
    /// The self-negative central block, listed by its positive elements.
    pub central: Vec<i8>,
}

impl SignedPartition {
    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    /// Image under a signed permutation, renormalized.
    pub fn act(&self, w: &SignedPermutation) -> SignedPartition {
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&i| w.apply(i)).collect()).collect();
        let central = self.central.iter().map(|&i| w.apply(i).abs()).collect();
        SignedPartition::normalized(blocks, central)
    }

    fn normalized(blocks: Vec<Vec<i8>>, mut central: Vec<i8>) -> SignedPartition {
        let mut blocks: Vec<Vec<i8>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_by_key(|x| x.abs());
                if b[0] < 0 {
                    b.iter_mut().for_each(|x| *x = -*x);
                }
                b
            })
            .collect();
        blocks.sort_by_key(|b| b[0]);
        central.sort_unstable();
        SignedPartition { blocks, central }
    }

    /// `{12|3|45;-}` style label; negative elements are written `-2` and an
    /// empty central block as `-`.
    pub fn label(&self) -> String {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<String>())
            .collect();
        let central = if self.central.is_empty() {
            "-".to_string()
        } else {
            self.central.iter().map(|x| x.to_string()).collect()
        };
        format!("{{{};{}}}", blocks.join("|"), central)
    }

    /// Numbers of even-sized and odd-sized paired blocks.
    pub fn even_odd(&self) -> (usize, usize) {
        let even = self.blocks.iter().filter(|b| b.len() % 2 == 0).count();
        (even, self.blocks.len() - even)
    }
}

fn require_d(arr: &Arrangement) -> Result<()> {
    if arr.family() == Family::D {
        Ok(())
    } else {
        Err(Error::NotTypeD(arr.family()))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// The signed partition `π(X)` of `±[n]` induced by a type D lattice element.
pub fn signed_partition(arr: &Arrangement, x: &IntersectionSubspace) -> Result<SignedPartition> {
    require_d(arr)?;
    let n = arr.degree();
    // slot of +i is i-1, slot of -i is n+i-1
    let slot = |v: i8| if v > 0 { v as usize - 1 } else { n + (-v) as usize - 1 };
    let mut uf = UnionFind((0..2 * n).collect());
    for h in mask_key(x.zero_set) {
        let a = arr.normal(h as usize);
        let nz: Vec<usize> = (0..n).filter(|&k| a[k] != 0).collect();
        let (i, j) = ((nz[0] + 1) as i8, (nz[1] + 1) as i8);
        // v_i = v_j for e_i - e_j, v_i = v_{-j} for e_i + e_j
        let j = if a[nz[1]] < 0 { j } else { -j };
        uf.union(slot(i), slot(j));
        uf.union(slot(-i), slot(-j));
    }
    let mut classes: FxHashMap<usize, Vec<i8>> = FxHashMap::default();
    for v in (1..=n as i8).flat_map(|i| [i, -i]) {
        let r = uf.find(slot(v));
        classes.entry(r).or_default().push(v);
    }
    let mut central = Vec::new();
    let mut blocks = Vec::new();
    for block in classes.into_values() {
        if block.contains(&-block[0]) {
            central.extend(block.iter().filter(|&&v| v > 0));
        } else {
            blocks.push(block);
        }
    }
    let mut p = SignedPartition::normalized(blocks, central);
    p.blocks.dedup();
    Ok(p)
}

/// `β_i = Σ_{j ∈ B_i} e_j` with `e_{-j} = -e_j`.
pub fn canonical_basis(arr: &Arrangement, x: &IntersectionSubspace) -> Result<Vec<Vec<Rational>>> {
    let p = signed_partition(arr, x)?;
    let n = arr.degree();
    Ok(p
        .blocks
        .iter()
        .map(|b| {
            let mut v = vec![Rational::from_integer(0); n];
            for &j in b {
                v[j.unsigned_abs() as usize - 1] = Rational::from_integer(if j > 0 { 1 } else { -1 });
            }
            v
        })
        .collect())
}

/// `(Even(X), Odd(X))`.
pub fn even_odd_counts(arr: &Arrangement, x: &IntersectionSubspace) -> Result<(usize, usize)> {
    Ok(signed_partition(arr, x)?.even_odd())
}

/// A Coxeter system together with its arrangement, faces and lattice.
#[derive(Debug)]
pub struct Geometry {
    pub system: CoxeterSystem,
    pub arrangement: Arrangement,
    pub faces: FaceSet,
    pub lattice: IntersectionLattice,
}

impl Geometry {
    pub fn build(family: Family, rank: usize) -> Result<Self> {
        Self::from_system(CoxeterSystem::build(family, rank)?)
    }

    pub fn from_system(system: CoxeterSystem) -> Result<Self> {
        let arrangement = Arrangement::new(&system);
        let faces = FaceSet::enumerate(&system, &arrangement)?;
        let lattice = IntersectionLattice::build(&system, &arrangement, &faces);
        Ok(Geometry {
            system,
            arrangement,
            faces,
            lattice,
        })
    }

    pub fn label(&self, x: usize) -> String {
        self.lattice.label(&self.arrangement, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(f: Family, n: usize) -> (CoxeterSystem, Arrangement, FaceSet) {
        let sys = CoxeterSystem::build(f, n).unwrap();
        let arr = Arrangement::new(&sys);
        let faces = FaceSet::enumerate(&sys, &arr).unwrap();
        (sys, arr, faces)
    }

    #[test]
    fn hyperplane_counts() {
        for (f, n, count) in [(Family::A, 2, 3), (Family::B, 2, 4), (Family::D, 3, 6), (Family::B, 4, 16), (Family::D, 5, 20)] {
            let sys = CoxeterSystem::build(f, n).unwrap();
            assert_eq!(Arrangement::new(&sys).len(), count);
        }
    }

    #[test]
    fn sign_vectors_of_special_points() {
        let sys = CoxeterSystem::build(Family::B, 3).unwrap();
        let arr = Arrangement::new(&sys);
        let rho: Vec<Rational> = sys.face_point(0).into_iter().map(Rational::from_integer).collect();
        let s = arr.sign_vector(&rho);
        assert!((0..arr.len()).all(|i| s.get(i) == 1));
        let neg: Vec<Rational> = rho.iter().map(|x| -x.clone()).collect();
        assert!((0..arr.len()).all(|i| arr.sign_vector(&neg).get(i) == -1));
        assert_eq!(arr.sign_vector(&vec![Rational::from_integer(0); 3]), SignVector::ORIGIN);
    }

    #[test]
    fn face_counts() {
        let (_, _, b2) = setup(Family::B, 2);
        assert_eq!(b2.len(), 17);
        assert_eq!(b2.chambers().len(), 8);
        assert_eq!(b2.orbit_count(), 4);
        let (_, _, d2) = setup(Family::D, 2);
        assert_eq!(d2.len(), 9);
        let (_, _, b3) = setup(Family::B, 3);
        assert_eq!(b3.len(), 147);
        let (_, _, d4) = setup(Family::D, 4);
        assert_eq!(d4.len(), 865);
    }

    #[test]
    fn fundamental_faces_are_fixed_by_their_parabolic() {
        let sys = CoxeterSystem::build(Family::D, 4).unwrap();
        let arr = Arrangement::new(&sys);
        for j in 0..16u32 {
            let f = fundamental_face(&sys, &arr, j);
            for k in 0..4 {
                if j >> k & 1 == 1 {
                    assert_eq!(sys.generators()[k].act(&f.sample).unwrap(), f.sample);
                    assert_eq!(arr.act_generator(k, &f.signs), f.signs);
                }
            }
        }
        assert!(fundamental_face(&sys, &arr, 0).signs.nonzero_mask() == arr.full_mask());
        assert_eq!(fundamental_face(&sys, &arr, 15).signs, SignVector::ORIGIN);
    }

    #[test]
    fn samples_realize_sign_vectors() {
        let (_, arr, faces) = setup(Family::B, 3);
        for i in 0..faces.len() {
            assert_eq!(arr.sign_vector_int(faces.sample_doubled(i)), faces.signs(i));
            assert_eq!(arr.sign_vector(&faces.face(i).sample), faces.signs(i));
        }
    }

    #[test]
    fn geometric_product_matches_sign_rule() {
        let (_, arr, faces) = setup(Family::B, 2);
        for i in 0..faces.len() {
            for j in 0..faces.len() {
                let p = face_product(&arr, &faces.face(i), &faces.face(j)).unwrap();
                assert_eq!(faces.index_of(&p.signs), Some(faces.product(i, j).unwrap()));
            }
        }
        let c = faces.chambers().start;
        let o = faces.origin();
        for y in 0..faces.len() {
            assert_eq!(faces.product(c, y).unwrap(), c);
            assert_eq!(faces.product(o, y).unwrap(), y);
        }
    }

    #[test]
    fn lattice_of_b2() {
        let (sys, arr, faces) = setup(Family::B, 2);
        let l = IntersectionLattice::build(&sys, &arr, &faces);
        assert_eq!(l.len(), 6);
        assert_eq!(l.dim(l.top()), 2);
        assert_eq!(l.dim(l.bottom()), 0);
        assert_eq!(l.cover_count(), 8);
        for i in 0..faces.len() {
            for j in 0..faces.len() {
                let xy = faces.product(i, j).unwrap();
                assert_eq!(
                    l.support_of_face(xy),
                    l.join(l.support_of_face(i), l.support_of_face(j))
                );
            }
        }
    }

    #[test]
    fn signed_partitions_in_d5() {
        let (sys, arr, faces) = setup(Family::D, 5);
        let l = IntersectionLattice::build(&sys, &arr, &faces);
        let top = signed_partition(&arr, l.element(l.top())).unwrap();
        assert_eq!(top.r(), 5);
        assert!(top.central.is_empty());
        assert_eq!(even_odd_counts(&arr, l.element(l.top())).unwrap(), (0, 5));
        let bottom = signed_partition(&arr, l.element(l.bottom())).unwrap();
        assert_eq!(bottom.r(), 0);
        assert_eq!(bottom.central, vec![1, 2, 3, 4, 5]);
        let h12 = l.index_of(1).unwrap();
        assert_eq!(signed_partition(&arr, l.element(h12)).unwrap().label(), "{12|3|4|5;-}");
        for x in 0..l.len() {
            let p = signed_partition(&arr, l.element(x)).unwrap();
            assert_eq!(p.r(), l.dim(x));
            assert!(p.central.is_empty() || p.central.len() >= 2);
            for (k, s) in sys.generators().iter().enumerate() {
                let img = signed_partition(&arr, l.element(l.act_generator(k, x))).unwrap();
                assert_eq!(img, p.act(s));
            }
        }
        let even_odd = SignedPartition::normalized(vec![vec![1, 2], vec![3, 4, 5]], vec![]).even_odd();
        assert_eq!(even_odd, (1, 1));
    }

    #[test]
    fn canonical_bases_span() {
        let (sys, arr, faces) = setup(Family::D, 4);
        let l = IntersectionLattice::build(&sys, &arr, &faces);
        for x in 0..l.len() {
            let b = canonical_basis(&arr, l.element(x)).unwrap();
            let span = SubspaceBasis::from_spanning(4, b.clone());
            assert_eq!(span.dim(), b.len());
            assert_eq!(span, l.element(x).basis);
            let (e, _) = even_odd_counts(&arr, l.element(x)).unwrap();
            for &y in &l.orbits()[l.orbit_of(x)] {
                assert_eq!(even_odd_counts(&arr, l.element(y)).unwrap().0, e);
            }
        }
        let sys3 = CoxeterSystem::build(Family::D, 3).unwrap();
        let arr3 = Arrangement::new(&sys3);
        let h12 = arr3.subspace(1);
        let q = Rational::from_integer;
        assert_eq!(canonical_basis(&arr3, &h12).unwrap(), vec![vec![q(1), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        let b = CoxeterSystem::build(Family::B, 3).unwrap();
        assert!(signed_partition(&Arrangement::new(&b), &h12).is_err());
    }

    #[test]
    fn lattice_orbit_counts_in_type_d() {
        for (n, count) in [(4, 11), (5, 14)] {
            let (sys, arr, faces) = setup(Family::D, n);
            let l = IntersectionLattice::build(&sys, &arr, &faces);
            assert_eq!(l.orbit_count(), count);
        }
    }
}

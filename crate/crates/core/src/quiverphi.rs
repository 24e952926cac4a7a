//! The quiver `Q` of `kF`, the signed action of `W` on its paths, the
//! equivariant surjection `φ: kQ → kF`, the quiver of `(kF)^W`, and the
//! combinatorial arrow exclusions for type D.

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::arrangement::{mask_key, signed_partition, Arrangement, Geometry};
use crate::coxeter::{CoxeterSystem, Family, SignedPermutation, SubsetJ};
use crate::error::{Error, Result};
use crate::exactalg::{
    loewy_length_from_powers, quiver_from_radical, quiver_of_algebra, radical, radical_powers, verify_complete_system, Arrow, Matrix,
    Quiver, SubspaceBasis,
};
use crate::facealg::{
    idempotents_e, invariant_algebra, invariant_idempotents_recursive, FaceAlgebra, FaceAlgebraElement,
    InvariantOrbitData, OrbitChoice,
};
use crate::scalar::Field;
use crate::Rational;

type Element = FaceAlgebraElement<Rational>;

/// `Q`: one vertex per lattice element and one arrow `X → Y` per cover
/// `Y ⋖ X`.
pub fn build_q(geometry: &Geometry) -> Quiver {
    let lattice = &geometry.lattice;
    let labels = (0..lattice.len()).map(|x| geometry.label(x)).collect();
    let arrows = (0..lattice.len()).flat_map(|x| {
        lattice.lower_covers(x).iter().map(move |&y| Arrow {
            source: x,
            target: y,
            multiplicity: 1,
        })
    });
    Quiver::new(labels, arrows)
}

/// The quiver of `kF` computed from its radical with the idempotents `e_X`:
/// `dim e_Y (rad / rad²) e_X` arrows `X → Y`. Vertex `X` is lattice element
/// `X`.
pub fn face_algebra_quiver(geometry: &Geometry) -> Result<Quiver> {
    let (faces, lattice) = (&geometry.faces, &geometry.lattice);
    let alg = FaceAlgebra::new(faces)?;
    let choice = OrbitChoice::canonical(faces, lattice);
    let e = idempotents_e::<Rational>(&alg, lattice, &choice)?;
    let pres = alg.presentation::<Rational>(&geometry.arrangement);
    let idems: Vec<Vec<Rational>> = e.into_iter().map(|x| x.into_coefficients()).collect();
    let labels = (0..lattice.len()).map(|x| geometry.label(x)).collect();
    quiver_of_algebra(&pres, &idems, labels)
}

/// An orientation of every lattice element. The reference basis of `X` is
/// its reduced-echelon basis; `flips[X] = -1` reverses it.
#[derive(Clone, Debug)]
pub struct Orientation {
    bases: Vec<SubspaceBasis<Rational>>,
    oriented: Vec<Vec<Vec<Rational>>>,
    flips: Vec<i8>,
}

fn sign_of_det(rows: Vec<Vec<Rational>>) -> i8 {
    if rows.is_empty() {
        return 1;
    }
    let n = rows.len();
    Matrix::from_rows(n, rows).determinant().signum_i8()
}

impl Orientation {
    pub fn canonical(geometry: &Geometry) -> Self {
        let bases: Vec<SubspaceBasis<Rational>> =
            geometry.lattice.elements().iter().map(|e| e.basis.clone()).collect();
        let oriented = bases.iter().map(|b| b.rows().to_vec()).collect();
        let flips = vec![1; bases.len()];
        Orientation { bases, oriented, flips }
    }

    /// A positively oriented ordered basis of `X`.
    pub fn basis(&self, x: usize) -> &[Vec<Rational>] {
        &self.oriented[x]
    }

    /// `ε_X` of an ordered list of `dim X` vectors of `X`: the sign of the
    /// determinant of their coordinates in the oriented basis, `0` if they
    /// are dependent or do not lie in `X`.
    pub fn sign(&self, x: usize, vectors: &[Vec<Rational>]) -> i8 {
        let basis = &self.bases[x];
        if vectors.len() != basis.dim() || vectors.iter().any(|v| !basis.contains(v)) {
            return 0;
        }
        let coords = vectors
            .iter()
            .map(|v| basis.coordinates(v).expect("vector lies in the subspace"))
            .collect();
        self.flips[x] * sign_of_det(coords)
    }

    /// The same orientation with the sign of element `x` reversed.
    pub fn flipped(&self, x: usize) -> Self {
        let mut o = self.clone();
        o.flips[x] = -o.flips[x];
        if let Some(r) = o.oriented[x].first_mut() {
            for c in r.iter_mut() {
                *c = -c.clone();
            }
        }
        o
    }
}

/// `σ_X(w)`: `+1` when `w` carries the orientation of `X` to that of `w(X)`.
pub fn orientation_sign(geometry: &Geometry, orient: &Orientation, w: &SignedPermutation, x: usize) -> i8 {
    let wx = geometry.lattice.act(&geometry.arrangement, w, x);
    let images: Vec<Vec<Rational>> = orient
        .basis(x)
        .iter()
        .map(|b| w.act(b).expect("degree matches"))
        .collect();
    let s = orient.sign(wx, &images);
    assert!(s != 0, "group elements map lattice elements onto lattice elements");
    s
}

/// A path `X_0 → X_1 → … → X_t` in `Q` (each `X_{i+1} ⋖ X_i`) with a sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub sign: i8,
}

impl Path {
    pub fn new(geometry: &Geometry, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::NotCoverRelated);
        }
        for w in vertices.windows(2) {
            if !geometry.lattice.lower_covers(w[0]).contains(&w[1]) {
                return Err(Error::NotCoverRelated);
            }
        }
        Ok(Path { vertices, sign: 1 })
    }

    pub fn trivial(x: usize) -> Self {
        Path {
            vertices: vec![x],
            sign: 1,
        }
    }

    /// Number of arrows.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn source(&self) -> usize {
        self.vertices[0]
    }

    pub fn target(&self) -> usize {
        *self.vertices.last().expect("paths are nonempty")
    }
}

/// `w · P = σ_{X_0}(w) σ_{X_t}(w) (w(X_0) → … → w(X_t))`.
pub fn act_on_path(geometry: &Geometry, orient: &Orientation, w: &SignedPermutation, p: &Path) -> Path {
    let lattice = &geometry.lattice;
    let vertices = p.vertices.iter().map(|&x| lattice.act(&geometry.arrangement, w, x)).collect();
    let sign = p.sign * orientation_sign(geometry, orient, w, p.source()) * orientation_sign(geometry, orient, w, p.target());
    Path { vertices, sign }
}

/// All maximal chains of the interval from `top` down to `bottom`, as
/// vertex lists starting at `top`.
pub fn paths_between(geometry: &Geometry, top: usize, bottom: usize) -> Vec<Vec<usize>> {
    let lattice = &geometry.lattice;
    if !lattice.le(bottom, top) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut stack = vec![vec![top]];
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("nonempty");
        if last == bottom {
            out.push(chain);
            continue;
        }
        for &z in lattice.lower_covers(last) {
            if lattice.le(bottom, z) {
                let mut c = chain.clone();
                c.push(z);
                stack.push(c);
            }
        }
    }
    out.sort();
    out
}

/// Every path of `Q`, trivial ones included.
pub fn all_paths(geometry: &Geometry) -> Vec<Path> {
    let lattice = &geometry.lattice;
    let mut out = Vec::new();
    for x in 0..lattice.len() {
        for y in 0..lattice.len() {
            for c in paths_between(geometry, x, y) {
                out.push(Path { vertices: c, sign: 1 });
            }
        }
    }
    out
}

fn rational_point(p: &[i64]) -> Vec<Rational> {
    p.iter().map(|&v| Rational::from_integer(v)).collect()
}

/// `[y:x]` for faces `y < x` whose supports form a cover, using the sample
/// point of `x` as the extra vector.
pub fn incidence_sign(geometry: &Geometry, orient: &Orientation, y: usize, x: usize) -> Result<i8> {
    let v = rational_point(geometry.faces.sample_doubled(x));
    incidence_sign_with_vector(geometry, orient, y, x, &v)
}

/// `[y:x] = ε_{supp y}(y_1, …, y_t) ε_{supp x}(y_1, …, y_t, v)` for a vector
/// `v` in the relative interior of `x`, taking the fixed basis of `supp y`.
pub fn incidence_sign_with_vector(
    geometry: &Geometry,
    orient: &Orientation,
    y: usize,
    x: usize,
    v: &[Rational],
) -> Result<i8> {
    let (faces, lattice) = (&geometry.faces, &geometry.lattice);
    let (sy, sx) = (lattice.support_of_face(y), lattice.support_of_face(x));
    if !faces.is_face_of(y, x) || lattice.dim(sx) != lattice.dim(sy) + 1 {
        return Err(Error::NotCoverRelated);
    }
    if geometry.arrangement.sign_vector(v) != faces.signs(x) {
        return Err(Error::Verification("vector does not lie in the face".into()));
    }
    let mut vectors = orient.basis(sy).to_vec();
    vectors.push(v.to_vec());
    Ok(orient.sign(sy, orient.basis(sy)) * orient.sign(sx, &vectors))
}

/// Faces grouped by support.
fn faces_by_support(geometry: &Geometry) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); geometry.lattice.len()];
    for i in 0..geometry.faces.len() {
        out[geometry.lattice.support_of_face(i)].push(i);
    }
    out
}

/// The face of support `y` with the lexicographically least sign vector.
fn canonical_face_of_support(geometry: &Geometry, by_support: &[Vec<usize>], y: usize) -> usize {
    *by_support[y]
        .iter()
        .min_by(|&&a, &&b| geometry.faces.signs(a).lex_cmp(&geometry.faces.signs(b)))
        .expect("every lattice element supports a face")
}

/// Scalar in front of the arrow images.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrowScaling {
    /// `φ(X → Y) = e_Y (Σ_{x ⋗ y} [y:x] x) e_X`. The length-two path sums
    /// lie in the kernel.
    #[default]
    Unscaled,
    /// The same element times `λ_Y`. Paths of length two through middle
    /// vertices with different `λ` are then weighted unequally, so the
    /// length-two relations fail once `λ` varies along an interval.
    TargetLambda,
}

/// The data of `φ`: `φ(X) = e_X` and
/// `φ(X → Y) = e_Y (Σ_{x ⋗ y} [y:x] x) e_X`, up to [`ArrowScaling`].
#[derive(Clone, Debug)]
pub struct PhiMap {
    pub scaling: ArrowScaling,
    pub vertex_images: Vec<Element>,
    /// Arrows `(X, Y)` in sorted order.
    pub arrows: Vec<(usize, usize)>,
    pub arrow_images: Vec<Element>,
}

impl PhiMap {
    pub fn arrow_image(&self, x: usize, y: usize) -> Option<&Element> {
        self.arrows.binary_search(&(x, y)).ok().map(|i| &self.arrow_images[i])
    }

    /// `φ(P) = φ(a_t) ⋯ φ(a_1)` for `P = a_1 ⋯ a_t`, times the sign of `P`.
    pub fn path_image(&self, alg: &FaceAlgebra<'_>, p: &Path) -> Result<Element> {
        let mut out = self.vertex_images[p.source()].clone();
        for w in p.vertices.windows(2) {
            let a = self.arrow_image(w[0], w[1]).ok_or(Error::NotCoverRelated)?;
            out = alg.mul(a, &out);
        }
        if p.sign < 0 {
            out = out.scaled(&-Rational::from_integer(1));
        }
        Ok(out)
    }
}

/// The element `e_Y (Σ_{x ⋗ y} [y:x] x) e_X` for a given face `y` of
/// support `Y`, scaled as requested.
#[allow(clippy::too_many_arguments)]
pub fn arrow_image_with_representative(
    geometry: &Geometry,
    alg: &FaceAlgebra<'_>,
    orient: &Orientation,
    e: &[Element],
    choice: &OrbitChoice,
    scaling: ArrowScaling,
    x: usize,
    y: usize,
    rep: usize,
) -> Result<Element> {
    let (faces, lattice) = (&geometry.faces, &geometry.lattice);
    if lattice.support_of_face(rep) != y || !lattice.lower_covers(x).contains(&y) {
        return Err(Error::NotCoverRelated);
    }
    let mut t = FaceAlgebraElement::zero(faces.len());
    for &z in lattice.upper_covers(y) {
        for f in 0..faces.len() {
            if lattice.support_of_face(f) == z && faces.is_face_of(rep, f) {
                let s = incidence_sign(geometry, orient, rep, f)?;
                t += &FaceAlgebraElement::face(faces.len(), f).scaled(&Rational::from_integer(s as i64));
            }
        }
    }
    let image = alg.mul(&alg.mul(&e[y], &t), &e[x]);
    Ok(match scaling {
        ArrowScaling::Unscaled => image,
        ArrowScaling::TargetLambda => {
            image.scaled(&Rational::from_integer(choice.lambda(lattice.orbit_of(y)) as i64))
        }
    })
}

/// Builds `φ` for the given orientation and orbit choice, using for each
/// arrow `X → Y` the canonical face of support `Y`.
pub fn phi(
    geometry: &Geometry,
    alg: &FaceAlgebra<'_>,
    orient: &Orientation,
    choice: &OrbitChoice,
    scaling: ArrowScaling,
) -> Result<PhiMap> {
    let lattice = &geometry.lattice;
    let e = idempotents_e::<Rational>(alg, lattice, choice)?;
    let by_support = faces_by_support(geometry);
    let arrows: Vec<(usize, usize)> = {
        let mut a: Vec<(usize, usize)> = (0..lattice.len())
            .flat_map(|x| lattice.lower_covers(x).iter().map(move |&y| (x, y)))
            .collect();
        a.sort_unstable();
        a
    };
    let arrow_images = arrows
        .par_iter()
        .map(|&(x, y)| {
            let rep = canonical_face_of_support(geometry, &by_support, y);
            arrow_image_with_representative(geometry, alg, orient, &e, choice, scaling, x, y, rep)
        })
        .collect::<Result<_>>()?;
    Ok(PhiMap {
        scaling,
        vertex_images: e,
        arrows,
        arrow_images,
    })
}

/// Outcome of the four checks on `φ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub family: Family,
    pub rank: usize,
    pub face_count: usize,
    /// Dimension of the image of `φ`.
    pub image_dim: usize,
    pub equivariant: bool,
    pub representative_independent: bool,
    /// `dim kQ`, the number of paths.
    pub path_count: usize,
    /// Dimension of the ideal generated by the sum of the length-two paths.
    pub ideal_dim: usize,
    pub length_two_sum_vanishes: bool,
    /// Whether the length-two sums also vanish with
    /// [`ArrowScaling::TargetLambda`]. Informational.
    pub target_lambda_relations_hold: bool,
    pub failures: Vec<String>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const RANK_PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % RANK_PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

/// Rank modulo a prime of sparse `0/1` rows over `cols` columns. It never
/// exceeds the rank over the rationals.
fn rank_mod_prime(rows: &[Vec<usize>], cols: usize) -> usize {
    let mut pivots: FxHashMap<usize, Vec<u64>> = FxHashMap::default();
    for r in rows {
        let mut v = vec![0u64; cols];
        for &c in r {
            v[c] = (v[c] + 1) % RANK_PRIME;
        }
        while let Some(lead) = v.iter().position(|&x| x != 0) {
            match pivots.get(&lead) {
                Some(p) => {
                    let f = v[lead];
                    for (a, b) in v.iter_mut().zip(p) {
                        if *b != 0 {
                            *a = (*a + RANK_PRIME - mulmod(f, *b)) % RANK_PRIME;
                        }
                    }
                }
                None => {
                    let inv = powmod(v[lead], RANK_PRIME - 2);
                    for a in v.iter_mut() {
                        *a = mulmod(*a, inv);
                    }
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn rank_over_rationals(rows: &[Vec<usize>], cols: usize) -> usize {
    let vecs = rows.iter().map(|r| {
        let mut v = vec![Rational::from_integer(0); cols];
        for &c in r {
            v[c] += Rational::from_integer(1);
        }
        v
    });
    SubspaceBasis::from_spanning(cols, vecs).dim()
}

/// Relation vectors of the ideal generated by the length-two path sum on
/// the chains from `top` to `bottom`: for each chain with one interior
/// vertex removed, the sum over the ways to fill the gap.
fn interval_relations(geometry: &Geometry, chains: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let lattice = &geometry.lattice;
    let index: FxHashMap<&[usize], usize> = chains.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let mut seen: FxHashSet<(Vec<usize>, usize)> = FxHashSet::default();
    let mut rows = Vec::new();
    for c in chains {
        for gap in 1..c.len().saturating_sub(1) {
            let mut key = c.clone();
            key.remove(gap);
            if !seen.insert((key.clone(), gap)) {
                continue;
            }
            let (upper, lower) = (c[gap - 1], c[gap + 1]);
            let row: Vec<usize> = lattice
                .lower_covers(upper)
                .iter()
                .filter(|&&z| lattice.lower_covers(z).contains(&lower))
                .map(|&z| {
                    let mut filled = c.clone();
                    filled[gap] = z;
                    index[filled.as_slice()]
                })
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// Checks on `φ` for a materialized `kF`:
/// (a) the image has dimension `dim kF`, computed blockwise in the Peirce
/// decomposition; (b) `φ(s a) = s φ(a)` on vertices and arrows for every
/// generator `s`; (c) every face of support `Y` gives the same arrow image;
/// (d) `φ` kills each `e_Y ρ e_X` for the length-two path sum `ρ`, and the
/// ideal generated by `ρ` has dimension `dim kQ − dim kF`.
pub fn verify_phi(geometry: &Geometry) -> Result<PhiReport> {
    let (faces, lattice) = (&geometry.faces, &geometry.lattice);
    let alg = FaceAlgebra::new(faces)?;
    let orient = Orientation::canonical(geometry);
    let choice = OrbitChoice::canonical(faces, lattice);
    let map = phi(geometry, &alg, &orient, &choice, ArrowScaling::Unscaled)?;
    let mut failures = Vec::new();
    let n = lattice.len();

    // (a) image blocks Im[X][Y] ⊆ e_Y kF e_X
    let image_dim: usize = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut blocks: FxHashMap<usize, SubspaceBasis<Rational>> = FxHashMap::default();
            blocks.insert(
                x,
                SubspaceBasis::from_spanning(faces.len(), [map.vertex_images[x].coefficients().to_vec()]),
            );
            let mut below: Vec<usize> = (0..n).filter(|&y| y != x && lattice.le(y, x)).collect();
            below.sort_by_key(|&y| std::cmp::Reverse(lattice.dim(y)));
            for y in below {
                let mut span = SubspaceBasis::zero(faces.len());
                for &z in lattice.upper_covers(y) {
                    let Some(bz) = blocks.get(&z) else { continue };
                    let a = map.arrow_image(z, y).expect("cover arrow");
                    for r in bz.rows() {
                        let v = alg.mul(a, &FaceAlgebraElement::from_coefficients(r.clone()));
                        span.insert(v.into_coefficients());
                    }
                }
                blocks.insert(y, span);
            }
            blocks.values().map(|b| b.dim()).sum::<usize>()
        })
        .sum();
    if image_dim != faces.len() {
        failures.push(format!("image of phi has dimension {image_dim}, expected {}", faces.len()));
    }

    // (b) equivariance under generators
    let mut equivariant = true;
    for (k, s) in geometry.system.generators().iter().enumerate() {
        for x in 0..n {
            let sx = lattice.act_generator(k, x);
            if map.vertex_images[x].act_generator(faces, k) != map.vertex_images[sx] {
                equivariant = false;
                failures.push(format!("s{} e_X != e_(s X) for X = {}", k + 1, geometry.label(x)));
            }
        }
        for (i, &(x, y)) in map.arrows.iter().enumerate() {
            let (sx, sy) = (lattice.act_generator(k, x), lattice.act_generator(k, y));
            let sign = orientation_sign(geometry, &orient, s, x) * orientation_sign(geometry, &orient, s, y);
            let lhs = map.arrow_images[i].act_generator(faces, k);
            let rhs = map
                .arrow_image(sx, sy)
                .expect("image arrow")
                .scaled(&Rational::from_integer(sign as i64));
            if lhs != rhs {
                equivariant = false;
                failures.push(format!(
                    "s{} phi({} -> {}) is not equivariant",
                    k + 1,
                    geometry.label(x),
                    geometry.label(y)
                ));
            }
        }
    }

    // (c) independence of the representative face
    let by_support = faces_by_support(geometry);
    let mismatches: Vec<String> = map
        .arrows
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &(x, y))| {
            let expected = &map.arrow_images[i];
            by_support[y]
                .iter()
                .filter_map(|&rep| {
                    match arrow_image_with_representative(
                        geometry,
                        &alg,
                        &orient,
                        &map.vertex_images,
                        &choice,
                        map.scaling,
                        x,
                        y,
                        rep,
                    ) {
                        Ok(img) if img == *expected => None,
                        _ => Some(format!(
                            "phi({} -> {}) changes with the representative face {}",
                            geometry.label(x),
                            geometry.label(y),
                            rep
                        )),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let representative_independent = mismatches.is_empty();
    failures.extend(mismatches);

    // (d) kernel
    let mut length_two_sum_vanishes = true;
    let mut target_lambda_relations_hold = true;
    let lam = |v: usize| Rational::from_integer(choice.lambda(lattice.orbit_of(v)) as i64);
    for x in 0..n {
        let mut targets: FxHashSet<usize> = FxHashSet::default();
        for &z in lattice.lower_covers(x) {
            targets.extend(lattice.lower_covers(z).iter().copied());
        }
        for y in targets {
            let mut s = FaceAlgebraElement::zero(faces.len());
            let mut scaled = FaceAlgebraElement::zero(faces.len());
            for &z in lattice.lower_covers(x) {
                if lattice.lower_covers(z).contains(&y) {
                    let p = alg.mul(map.arrow_image(z, y).expect("arrow"), map.arrow_image(x, z).expect("arrow"));
                    scaled += &p.scaled(&(lam(z) * lam(y)));
                    s += &p;
                }
            }
            if !scaled.is_zero() {
                target_lambda_relations_hold = false;
            }
            if !s.is_zero() {
                length_two_sum_vanishes = false;
                failures.push(format!(
                    "phi of the length-two sum from {} to {} is nonzero",
                    geometry.label(x),
                    geometry.label(y)
                ));
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| lattice.le(y, x)).map(move |y| (x, y)))
        .collect();
    let counts: Vec<(usize, usize)> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let chains = paths_between(geometry, x, y);
            let relations = interval_relations(geometry, &chains);
            let mut r = rank_mod_prime(&relations, chains.len());
            if r != chains.len().min(relations.len()) && chains.len() <= 64 {
                r = rank_over_rationals(&relations, chains.len());
            }
            (chains.len(), r)
        })
        .collect();
    let path_count: usize = counts.iter().map(|c| c.0).sum();
    let mut ideal_dim: usize = counts.iter().map(|c| c.1).sum();
    let expected = path_count.saturating_sub(faces.len());
    if ideal_dim != expected {
        // the modular rank is a lower bound; settle any shortfall exactly
        ideal_dim = pairs
            .par_iter()
            .map(|&(x, y)| {
                let chains = paths_between(geometry, x, y);
                rank_over_rationals(&interval_relations(geometry, &chains), chains.len())
            })
            .sum();
    }
    if ideal_dim != expected {
        failures.push(format!(
            "ideal generated by the length-two path sum has dimension {ideal_dim}, expected dim kQ - dim kF = {expected}"
        ));
    }

    Ok(PhiReport {
        family: geometry.system.family(),
        rank: geometry.system.rank(),
        face_count: faces.len(),
        image_dim,
        equivariant,
        representative_independent,
        path_count,
        ideal_dim,
        length_two_sum_vanishes,
        target_lambda_relations_hold,
        failures,
    })
}

/// Whether some `w` fixes every vertex of the path and reverses its sign,
/// searched over the stabilizer of the chain.
pub fn orbit_sign_vanishes(geometry: &Geometry, orient: &Orientation, p: &Path) -> Result<bool> {
    let g = geometry.system.group()?;
    let lattice = &geometry.lattice;
    let arr = &geometry.arrangement;
    Ok(g.elements().par_iter().any(|w| {
        p.vertices.iter().all(|&x| lattice.act(arr, w, x) == x)
            && orientation_sign(geometry, orient, w, p.source()) * orientation_sign(geometry, orient, w, p.target()) < 0
    }))
}

/// `Σ_{w ∈ W} w · P` as signed coefficients on vertex chains.
pub fn path_orbit_sum(geometry: &Geometry, orient: &Orientation, p: &Path) -> Result<Vec<(Vec<usize>, i64)>> {
    let g = geometry.system.group()?;
    let mut sum: FxHashMap<Vec<usize>, i64> = FxHashMap::default();
    for w in g.elements() {
        let q = act_on_path(geometry, orient, w, p);
        *sum.entry(q.vertices).or_default() += q.sign as i64;
    }
    let mut out: Vec<(Vec<usize>, i64)> = sum.into_iter().filter(|(_, c)| *c != 0).collect();
    out.sort();
    Ok(out)
}

/// `ν_O = Σ_{X ∈ O} X` as the list of vertices of `Q` in an orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitVertexSum {
    pub orbit: usize,
    pub vertices: Vec<usize>,
}

pub fn orbit_vertex_sums(geometry: &Geometry) -> Vec<OrbitVertexSum> {
    geometry
        .lattice
        .orbits()
        .iter()
        .enumerate()
        .map(|(o, v)| OrbitVertexSum {
            orbit: o,
            vertices: v.clone(),
        })
        .collect()
}

/// Label of the orbit of the support of `F_J`, taken at the member with the
/// least sorted zero set.
pub fn orbit_label(sys: &CoxeterSystem, arr: &Arrangement, j: SubsetJ) -> String {
    let start = arr.sign_vector_int(&sys.face_point(j)).zero_set(arr.full_mask());
    let mut seen: FxHashSet<u128> = FxHashSet::from_iter([start]);
    let mut queue = vec![start];
    while let Some(m) = queue.pop() {
        for s in sys.generators() {
            let t = arr.act_on_mask(s, m);
            if seen.insert(t) {
                queue.push(t);
            }
        }
    }
    let rep = seen.into_iter().min_by_key(|&m| mask_key(m)).expect("orbit is nonempty");
    if sys.family() == Family::D {
        if let Ok(p) = signed_partition(arr, &arr.subspace(rep)) {
            return p.label();
        }
    }
    let parts: Vec<String> = mask_key(rep).iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// The quiver of `(kF)^W` with one vertex per class of `S/~` (in class
/// order), computed from the radical of the invariant algebra and the
/// idempotents `ε_O`.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantQuiver {
    pub quiver: Quiver,
    /// `J_O` for each vertex.
    pub types: Vec<SubsetJ>,
    /// `dim supp F_{J_O}` for each vertex.
    pub dims: Vec<usize>,
    /// Vertex of the orbit `{V}`.
    pub top: usize,
    pub loewy_length: usize,
    pub radical_dims: Vec<usize>,
}

impl InvariantQuiver {
    /// Whether every arrow `O' → O` has `O < O'`.
    pub fn arrows_descend(&self, poset: &crate::coxeter::ParabolicPoset) -> bool {
        self.quiver
            .arrows
            .iter()
            .all(|a| a.source != a.target && poset.leq(a.target, a.source))
    }
}

pub fn invariant_quiver(sys: &CoxeterSystem) -> Result<InvariantQuiver> {
    let arr = Arrangement::new(sys);
    let alg = invariant_algebra::<Rational>(sys)?;
    let data = InvariantOrbitData::canonical(sys, &arr)?;
    let eps = invariant_idempotents_recursive(&alg, &data);
    let report = verify_complete_system(&alg, &eps);
    if !report.passed() {
        return Err(Error::IncompleteSystem(report.failures.join("; ")));
    }
    let rad = radical(&alg)?;
    let powers = radical_powers(&alg, &rad);
    let labels: Vec<String> = data.types.iter().map(|&j| orbit_label(sys, &arr, j)).collect();
    let quiver = quiver_from_radical(&alg, &eps, &rad, labels)?;
    let n = sys.rank();
    Ok(InvariantQuiver {
        quiver,
        types: data.types.clone(),
        dims: data.types.iter().map(|j| n - j.count_ones() as usize).collect(),
        top: data.poset.class_of(0),
        loewy_length: loewy_length_from_powers(&powers),
        radical_dims: powers.iter().map(|p| p.dim()).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exclusion {
    /// The target orbit is not strictly below the source.
    NotBelow,
    /// `Even` of the target exceeds `Even` of the source.
    EvenIncreases,
    /// The orbits contain a cover pair whose upper element has `Odd ≠ 1`.
    OddCover,
    /// Even rank with an odd dimension drop: the central reflection negates
    /// every such path.
    CentralReflection,
    /// The source is the orbit of the whole space.
    TopSource,
}

/// The certified arrow exclusions for the quiver of `(kF)^{D_n}`.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub rank: usize,
    /// Lattice orbits, labeled by signed partitions.
    pub orbit_labels: Vec<String>,
    pub orbit_dims: Vec<usize>,
    pub even_odd: Vec<(usize, usize)>,
    /// `(source, target, reasons)` for excluded ordered pairs in the order
    /// of the source orbit, with `source ≠ target`.
    pub excluded: Vec<(usize, usize, Vec<Exclusion>)>,
    pub surviving: Vec<(usize, usize)>,
    pub longest_surviving_path: usize,
    pub bound: usize,
    /// Arrows of a computed invariant quiver, as lattice orbit pairs, that
    /// fall on an excluded pair.
    pub contradictions: Vec<(usize, usize)>,
    pub cross_checked: bool,
}

impl Certificate {
    pub fn within_bound(&self) -> bool {
        self.longest_surviving_path <= self.bound
    }

    pub fn passed(&self) -> bool {
        self.within_bound() && self.contradictions.is_empty()
    }
}

/// Lattice orbit of the support of `F_J`.
pub fn lattice_orbit_of_type(geometry: &Geometry, j: SubsetJ) -> usize {
    geometry.lattice.orbit_of_type(&geometry.faces, j)
}

/// Marks each ordered orbit pair by the exclusion rules, finds the longest
/// path in the surviving relation and compares a computed invariant quiver
/// against it.
pub fn certify_type_d(geometry: &Geometry, computed: Option<&InvariantQuiver>) -> Result<Certificate> {
    let sys = &geometry.system;
    if sys.family() != Family::D {
        return Err(Error::NotTypeD(sys.family()));
    }
    let n = sys.rank();
    let lattice = &geometry.lattice;
    let arr = &geometry.arrangement;
    let k = lattice.orbit_count();
    let reps: Vec<usize> = (0..k).map(|o| lattice.orbit_representative(o)).collect();
    let even_odd: Vec<(usize, usize)> = reps
        .iter()
        .map(|&x| Ok(signed_partition(arr, lattice.element(x))?.even_odd()))
        .collect::<Result<_>>()?;
    let dims: Vec<usize> = (0..k).map(|o| lattice.orbit_dim(o)).collect();
    let labels: Vec<String> = reps.iter().map(|&x| geometry.label(x)).collect();
    let top = lattice.orbit_of(lattice.top());

    let mut cover = vec![vec![false; k]; k];
    for x in 0..lattice.len() {
        for &y in lattice.lower_covers(x) {
            cover[lattice.orbit_of(x)][lattice.orbit_of(y)] = true;
        }
    }

    let mut excluded = Vec::new();
    let mut surviving = Vec::new();
    for src in 0..k {
        for tgt in 0..k {
            if src == tgt {
                continue;
            }
            let mut why = Vec::new();
            if !lattice.orbit_leq(tgt, src) {
                why.push(Exclusion::NotBelow);
            }
            if even_odd[tgt].0 > even_odd[src].0 {
                why.push(Exclusion::EvenIncreases);
            }
            if cover[src][tgt] && even_odd[src].1 != 1 {
                why.push(Exclusion::OddCover);
            }
            if n.is_multiple_of(2) && dims[src].abs_diff(dims[tgt]) % 2 == 1 {
                why.push(Exclusion::CentralReflection);
            }
            if src == top {
                why.push(Exclusion::TopSource);
            }
            if why.is_empty() {
                surviving.push((src, tgt));
            } else {
                excluded.push((src, tgt, why));
            }
        }
    }

    // longest path by dynamic programming in order of decreasing dimension
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&o| std::cmp::Reverse(dims[o]));
    let mut best = vec![0usize; k];
    for &o in &order {
        for &(s, t) in &surviving {
            if s == o {
                best[t] = best[t].max(best[o] + 1);
            }
        }
    }
    let longest = best.into_iter().max().unwrap_or(0);
    let m = n / 2;
    let bound = if n % 2 == 1 { m + 1 } else { m.saturating_sub(1) };

    let mut contradictions = Vec::new();
    if let Some(q) = computed {
        let to_orbit: Vec<usize> = q.types.iter().map(|&j| lattice_orbit_of_type(geometry, j)).collect();
        let survive: FxHashSet<(usize, usize)> = surviving.iter().copied().collect();
        for a in &q.quiver.arrows {
            let pair = (to_orbit[a.source], to_orbit[a.target]);
            if !survive.contains(&pair) {
                contradictions.push(pair);
            }
        }
    }

    Ok(Certificate {
        rank: n,
        orbit_labels: labels,
        orbit_dims: dims,
        even_odd,
        excluded,
        surviving,
        longest_surviving_path: longest,
        bound,
        contradictions,
        cross_checked: computed.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometry(f: Family, n: usize) -> Geometry {
        Geometry::build(f, n).unwrap()
    }

    #[test]
    fn orientation_signs() {
        let g = geometry(Family::D, 4);
        let orient = Orientation::canonical(&g);
        let top = g.lattice.top();
        for s in g.system.generators() {
            assert_eq!(orientation_sign(&g, &orient, s, top), -1);
        }
        let w0 = SignedPermutation::from_images(&[-1, -2, -3, -4]).unwrap();
        for x in 0..g.lattice.len() {
            let expected = if g.lattice.dim(x).is_multiple_of(2) { 1 } else { -1 };
            assert_eq!(orientation_sign(&g, &orient, &w0, x), expected);
        }
        // a generator fixes its own mirror pointwise
        for (k, s) in g.system.generators().iter().enumerate() {
            let mirror = (0..g.lattice.len())
                .find(|&x| g.lattice.dim(x) == 3 && g.lattice.act_generator(k, x) == x
                    && g.lattice.element(x).basis.rows().iter().all(|r| s.act(r).unwrap() == *r))
                .unwrap();
            assert_eq!(orientation_sign(&g, &orient, s, mirror), 1);
        }
    }

    #[test]
    fn path_action_is_a_group_action() {
        let g = geometry(Family::B, 3);
        let orient = Orientation::canonical(&g);
        let paths = all_paths(&g);
        let gens = g.system.generators();
        for p in paths.iter().filter(|p| !p.is_empty()) {
            assert_eq!(act_on_path(&g, &orient, &SignedPermutation::identity(3), p), *p);
            for v in gens {
                for w in gens {
                    let vw = v.compose(w);
                    let lhs = act_on_path(&g, &orient, &vw, p);
                    let rhs = act_on_path(&g, &orient, v, &act_on_path(&g, &orient, w, p));
                    assert_eq!(lhs, rhs);
                    assert_eq!(lhs.len(), p.len());
                }
            }
        }
    }

    #[test]
    fn paths_from_the_top_reverse_under_a_reflection() {
        let g = geometry(Family::B, 3);
        let orient = Orientation::canonical(&g);
        let top = g.lattice.top();
        for p in all_paths(&g).into_iter().filter(|p| p.source() == top && !p.is_empty()) {
            let h = p.vertices[1];
            // a generator conjugate whose mirror is X_1: find one among the group
            let group = g.system.group().unwrap();
            let r = group
                .elements()
                .iter()
                .find(|w| {
                    !w.is_identity()
                        && w.compose(w).is_identity()
                        && g.lattice.element(h).basis.rows().iter().all(|r| w.act(r).unwrap() == *r)
                })
                .unwrap();
            assert!(p.vertices.iter().all(|&x| g.lattice.act(&g.arrangement, r, x) == x));
            let q = act_on_path(&g, &orient, r, &p);
            assert_eq!(q.vertices, p.vertices);
            assert_eq!(q.sign, -1);
        }
    }

    #[test]
    fn incidence_sign_is_independent_of_the_interior_vector() {
        let g = geometry(Family::B, 3);
        let orient = Orientation::canonical(&g);
        let faces = &g.faces;
        for x in 0..faces.len() {
            for y in 0..faces.len() {
                let Ok(s) = incidence_sign(&g, &orient, y, x) else { continue };
                let px = rational_point(faces.sample_doubled(x));
                for z in (0..faces.len()).filter(|&z| faces.is_face_of(z, x)).take(3) {
                    let pz = rational_point(faces.sample_doubled(z));
                    let v: Vec<Rational> = px.iter().zip(&pz).map(|(a, b)| a.clone() + b.clone()).collect();
                    assert_eq!(incidence_sign_with_vector(&g, &orient, y, x, &v).unwrap(), s);
                }
                let flipped = orient.flipped(g.lattice.support_of_face(x));
                assert_eq!(incidence_sign(&g, &flipped, y, x).unwrap(), -s);
            }
        }
        assert!(matches!(incidence_sign(&g, &orient, faces.origin(), faces.origin()), Err(Error::NotCoverRelated)));
    }

    #[test]
    fn phi_respects_composition() {
        let g = geometry(Family::B, 2);
        let alg = FaceAlgebra::new(&g.faces).unwrap();
        let orient = Orientation::canonical(&g);
        let choice = OrbitChoice::canonical(&g.faces, &g.lattice);
        let map = phi(&g, &alg, &orient, &choice, ArrowScaling::Unscaled).unwrap();
        for x in 0..g.lattice.len() {
            let e = &map.vertex_images[x];
            assert_eq!(alg.mul(e, e), *e);
        }
        for p in all_paths(&g).into_iter().filter(|p| p.len() == 2) {
            let a = map.arrow_image(p.vertices[0], p.vertices[1]).unwrap();
            let b = map.arrow_image(p.vertices[1], p.vertices[2]).unwrap();
            assert_eq!(map.path_image(&alg, &p).unwrap(), alg.mul(b, a));
        }
        for (i, &(x, y)) in map.arrows.iter().enumerate() {
            let a = &map.arrow_images[i];
            assert_eq!(alg.mul(&alg.mul(&map.vertex_images[y], a), &map.vertex_images[x]), *a);
        }
    }

    #[test]
    fn phi_checks_pass_in_rank_two_and_three() {
        for (f, n) in [(Family::B, 2), (Family::D, 3)] {
            let r = verify_phi(&geometry(f, n)).unwrap();
            assert!(r.passed(), "{f}{n}: {:?}", r.failures);
            assert_eq!(r.image_dim, r.face_count);
            assert_eq!(r.path_count - r.ideal_dim, r.face_count);
        }
    }

    #[test]
    fn literal_target_lambda_scaling_breaks_the_relations() {
        let r = verify_phi(&geometry(Family::D, 3)).unwrap();
        assert!(r.length_two_sum_vanishes);
        assert!(!r.target_lambda_relations_hold);
    }

    #[test]
    fn vanishing_matches_orbit_sums() {
        for (f, n) in [(Family::B, 2), (Family::D, 3)] {
            let g = geometry(f, n);
            let orient = Orientation::canonical(&g);
            for p in all_paths(&g) {
                let vanishes = orbit_sign_vanishes(&g, &orient, &p).unwrap();
                assert_eq!(vanishes, path_orbit_sum(&g, &orient, &p).unwrap().is_empty());
                if p.source() == g.lattice.top() && !p.is_empty() {
                    assert!(vanishes);
                }
            }
        }
    }

    #[test]
    fn odd_paths_vanish_in_even_rank_type_d() {
        let g = geometry(Family::D, 4);
        let orient = Orientation::canonical(&g);
        for p in all_paths(&g).into_iter().filter(|p| p.len() % 2 == 1) {
            assert!(orbit_sign_vanishes(&g, &orient, &p).unwrap());
        }
    }

    #[test]
    fn invariant_quiver_structure() {
        for n in 3..=5 {
            let sys = CoxeterSystem::build(Family::D, n).unwrap();
            let q = invariant_quiver(&sys).unwrap();
            let poset = sys.parabolic_orbit_poset().unwrap();
            assert_eq!(q.quiver.out_degree(q.top), 0);
            assert!(q.quiver.is_acyclic());
            assert!(q.arrows_descend(&poset));
            assert!(q.loewy_length <= 1 + q.quiver.longest_path().unwrap());
        }
    }

    #[test]
    fn certificate_bounds() {
        for (n, bound) in [(4, 1), (5, 3)] {
            let g = geometry(Family::D, n);
            let q = invariant_quiver(&g.system).unwrap();
            let c = certify_type_d(&g, Some(&q)).unwrap();
            assert_eq!(c.bound, bound);
            assert!(c.within_bound());
            assert!(c.contradictions.is_empty());
        }
        assert!(matches!(certify_type_d(&geometry(Family::B, 3), None), Err(Error::NotTypeD(_))));
    }
}

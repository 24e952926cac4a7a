//! Small algebras for oracle comparisons and a brute-force radical.
#![allow(dead_code)]

use descent_loewy::arrangement::Geometry;
use descent_loewy::coxeter::{CoxeterSystem, Family};
use descent_loewy::descent::{descent_algebra, Method};
use descent_loewy::exactalg::{AlgebraPresentation, SubspaceBasis};
use descent_loewy::facealg::FaceAlgebra;
use descent_loewy::Rational;

pub type Algebra = AlgebraPresentation<Rational>;

fn q(v: i64) -> Rational {
    Rational::from_integer(v)
}

fn unit(d: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![q(0); d];
    v[i] = q(1);
    v
}

pub fn product_of_fields(n: usize) -> Algebra {
    let labels = (0..n).map(|i| format!("e{i}")).collect();
    AlgebraPresentation::new(labels, vec![q(1); n], |i, j| if i == j { vec![(i, q(1))] } else { vec![] }).unwrap()
}

pub fn truncated_polynomials(n: usize) -> Algebra {
    let labels = (0..n).map(|i| format!("t^{i}")).collect();
    AlgebraPresentation::new(labels, unit(n, 0), |i, j| if i + j < n { vec![(i + j, q(1))] } else { vec![] }).unwrap()
}

/// Upper-triangular `n × n` matrices on the matrix units `E_ij`, `i ≤ j`.
pub fn upper_triangular(n: usize) -> Algebra {
    let units: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let labels = units.iter().map(|(i, j)| format!("E{}{}", i + 1, j + 1)).collect();
    let mut one = vec![q(0); units.len()];
    for (k, &(i, j)) in units.iter().enumerate() {
        if i == j {
            one[k] = q(1);
        }
    }
    let index = |p: (usize, usize)| units.iter().position(|&u| u == p).unwrap();
    AlgebraPresentation::new(labels, one, |a, b| {
        let ((i, j), (k, l)) = (units[a], units[b]);
        if j == k {
            vec![(index((i, l)), q(1))]
        } else {
            vec![]
        }
    })
    .unwrap()
}

pub fn cyclic_group_algebra(n: usize) -> Algebra {
    let labels = (0..n).map(|i| format!("g^{i}")).collect();
    AlgebraPresentation::new(labels, unit(n, 0), |i, j| vec![((i + j) % n, q(1))]).unwrap()
}

pub fn face_algebra(f: Family, n: usize) -> Algebra {
    let g = Geometry::build(f, n).unwrap();
    let alg = FaceAlgebra::new(&g.faces).unwrap();
    alg.presentation(&g.arrangement)
}

pub fn descent(f: Family, n: usize) -> Algebra {
    let sys = CoxeterSystem::build(f, n).unwrap();
    descent_algebra(&sys, Method::GroupDirect).unwrap()
}

/// Every algebra of the corpus with its name.
pub fn corpus() -> Vec<(String, Algebra)> {
    let mut out = vec![
        ("Q x Q x Q".to_string(), product_of_fields(3)),
        ("Q[t]/t^2".to_string(), truncated_polynomials(2)),
        ("Q[t]/t^3".to_string(), truncated_polynomials(3)),
        ("upper triangular 3x3".to_string(), upper_triangular(3)),
        ("kF(A1)".to_string(), face_algebra(Family::A, 1)),
        ("kF(D2)".to_string(), face_algebra(Family::D, 2)),
        ("Q[C3]".to_string(), cyclic_group_algebra(3)),
    ];
    for (f, n) in [(Family::A, 1), (Family::A, 2), (Family::B, 2), (Family::A, 3), (Family::B, 3), (Family::D, 3)] {
        out.push((format!("Sigma({f}{n})"), descent(f, n)));
    }
    out
}

fn span_products(a: &Algebra, left: &[Vec<Rational>], right: &[Vec<Rational>]) -> SubspaceBasis<Rational> {
    let mut s = SubspaceBasis::zero(a.dim());
    for u in left {
        for v in right {
            s.insert(a.mul(u, v));
        }
    }
    s
}

/// The two-sided ideal generated by `gens`.
pub fn ideal_closure(a: &Algebra, gens: &SubspaceBasis<Rational>) -> SubspaceBasis<Rational> {
    let d = a.dim();
    let mut ideal = gens.clone();
    let mut frontier: Vec<Vec<Rational>> = gens.rows().to_vec();
    while let Some(v) = frontier.pop() {
        for i in 0..d {
            let b = unit(d, i);
            for w in [a.mul(&b, &v), a.mul(&v, &b)] {
                if ideal.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
    }
    ideal
}

pub fn is_nilpotent_ideal(a: &Algebra, ideal: &SubspaceBasis<Rational>) -> bool {
    let mut power = ideal.clone();
    for _ in 0..=a.dim() {
        if power.is_zero() {
            return true;
        }
        power = span_products(a, power.rows(), ideal.rows());
    }
    power.is_zero()
}

fn is_nilpotent_element(a: &Algebra, v: &[Rational]) -> bool {
    let mut p = v.to_vec();
    for _ in 0..=a.dim() {
        if p.iter().all(|x| *x == q(0)) {
            return true;
        }
        p = a.mul(&p, v);
    }
    false
}

/// Vectors with at most three nonzero coordinates drawn from ±1, ±2, the
/// first of them positive.
fn candidates(d: usize) -> Vec<Vec<Rational>> {
    let coeffs = [1i64, -1, 2, -2];
    let mut out = Vec::new();
    for i in 0..d {
        for ci in [1i64, 2] {
            let mut v = vec![q(0); d];
            v[i] = q(ci);
            out.push(v.clone());
            for j in i + 1..d {
                for &cj in &coeffs {
                    let mut w = v.clone();
                    w[j] = q(cj);
                    out.push(w.clone());
                    for k in j + 1..d {
                        for &ck in &coeffs {
                            let mut x = w.clone();
                            x[k] = q(ck);
                            out.push(x);
                        }
                    }
                }
            }
        }
    }
    out
}

/// The largest nilpotent ideal reachable by repeatedly adjoining a
/// candidate vector and closing to an ideal, keeping the result only when
/// the closure is nilpotent.
pub fn radical_oracle(a: &Algebra) -> SubspaceBasis<Rational> {
    let d = a.dim();
    let cands = candidates(d);
    let mut rad = SubspaceBasis::zero(d);
    loop {
        let mut grew = false;
        for c in &cands {
            if rad.contains(c) || !is_nilpotent_element(a, c) {
                continue;
            }
            let mut gens = rad.clone();
            gens.insert(c.clone());
            let ideal = ideal_closure(a, &gens);
            if is_nilpotent_ideal(a, &ideal) {
                rad = ideal;
                grew = true;
            }
        }
        if !grew {
            return rad;
        }
    }
}

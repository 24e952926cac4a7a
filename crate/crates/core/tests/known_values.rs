use descent_loewy::arrangement::Geometry;
use descent_loewy::coxeter::{CoxeterSystem, Family};
use descent_loewy::descent::{loewy_length_descent, loewy_report, Method};
use descent_loewy::Rational;

/// Radical filtrations of the descent algebra, frozen after both
/// construction routes agreed on them.
const FILTRATIONS: [(Family, usize, &[usize]); 10] = [
    (Family::A, 1, &[0]),
    (Family::A, 2, &[1, 0]),
    (Family::A, 3, &[3, 1, 0]),
    (Family::A, 4, &[9, 4, 1, 0]),
    (Family::B, 2, &[0]),
    (Family::B, 3, &[1, 0]),
    (Family::B, 4, &[4, 0]),
    (Family::D, 3, &[3, 1, 0]),
    (Family::D, 4, &[5, 0]),
    (Family::D, 5, &[18, 8, 2, 0]),
];

#[test]
fn radical_filtrations() {
    for (f, n, dims) in FILTRATIONS {
        let sys = CoxeterSystem::build(f, n).unwrap();
        for method in [Method::GroupDirect, Method::Pullback] {
            let r = loewy_report::<Rational>(&sys, method).unwrap();
            assert_eq!(r.radical_dims, dims, "{f}{n} {method}");
            assert_eq!(r.loewy_length, dims.len(), "{f}{n} {method}");
        }
    }
}

#[test]
fn radical_codimension_counts_lattice_orbits() {
    for (f, n, dims) in FILTRATIONS {
        let g = Geometry::build(f, n).unwrap();
        assert_eq!((1usize << n) - dims[0], g.lattice.orbit_count(), "{f}{n}");
    }
}

#[test]
fn odd_and_even_rank_type_d() {
    assert_eq!(loewy_length_descent(Family::D, 4).unwrap(), 2);
    assert_eq!(loewy_length_descent(Family::D, 5).unwrap(), 4);
}

#[test]
fn type_b_ceiling() {
    for n in 2..=4 {
        assert_eq!(loewy_length_descent(Family::B, n).unwrap(), n.div_ceil(2));
    }
}

#[test]
fn type_a_grows_with_rank() {
    for n in 1..=4 {
        assert_eq!(loewy_length_descent(Family::A, n).unwrap(), n);
    }
}

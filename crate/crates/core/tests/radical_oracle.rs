mod support;

use descent_loewy::exactalg::{check_radical, radical};
use support::{corpus, ideal_closure, is_nilpotent_ideal, radical_oracle};

#[test]
fn trace_form_radical_matches_the_nilpotent_ideal_oracle() {
    for (name, a) in corpus() {
        assert!(a.dim() <= 12, "{name}");
        let rad = radical(&a).unwrap();
        assert_eq!(rad, radical_oracle(&a), "{name}");
    }
}

#[test]
fn radicals_are_nilpotent_ideals() {
    for (name, a) in corpus() {
        let rad = radical(&a).unwrap();
        assert_eq!(ideal_closure(&a, &rad), rad, "{name}: not an ideal");
        assert!(is_nilpotent_ideal(&a, &rad), "{name}: not nilpotent");
        check_radical(&a, &rad).unwrap();
    }
}

#[test]
fn quotient_by_the_radical_is_semisimple() {
    for (name, a) in corpus() {
        let rad = radical(&a).unwrap();
        let top = a.quotient(&rad);
        assert!(radical(&top).unwrap().is_zero(), "{name}");
    }
}

#[test]
fn known_radical_dimensions() {
    let dims: Vec<(String, usize)> = corpus().into_iter().map(|(n, a)| {
        let d = radical(&a).unwrap().dim();
        (n, d)
    }).collect();
    let get = |n: &str| dims.iter().find(|(m, _)| m == n).unwrap().1;
    assert_eq!(get("Q x Q x Q"), 0);
    assert_eq!(get("Q[t]/t^3"), 2);
    assert_eq!(get("upper triangular 3x3"), 3);
    assert_eq!(get("kF(A1)"), 1);
    assert_eq!(get("Q[C3]"), 0);
    assert_eq!(get("Sigma(A1)"), 0);
}

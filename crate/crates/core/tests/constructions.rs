use std::sync::Arc;

use tropmech::config::{cube_config, simplex_product_config, symmetry_group, GroupKind};
use tropmech::mechanism::{
    cardinality_certificate, cardinality_sensitivity, cardinality_slices, construct_cardinality_robust,
    construct_multiplayer_robust, hamming_sensitivity, multiplayer_cardinality_sensitivity, Mechanism,
};
use tropmech::scalar::{int, rat, Rational};
use tropmech::subdivision::{canonicalize, is_regular, refine_to_triangulation, Subdivision};

fn counter() -> Mechanism {
    let p = [int(0), rat(1, 4), rat(2, 3), rat(5, 6)];
    Mechanism::new(3, (0..8u32).map(|a| p[a.count_ones() as usize].clone()).collect()).unwrap()
}

#[test]
fn cardinality_cells_are_the_slices() {
    for m in 1..=5 {
        let sub = construct_cardinality_robust(m).unwrap().subdivision().unwrap();
        assert_eq!(sub.cells(), cardinality_slices(m).as_slice(), "m={m}");
    }
}

#[test]
fn slice_certificate_is_tight_exactly_on_its_slice() {
    for m in 1..=5 {
        let lambda = |a: usize| -int((a.count_ones() as i64).pow(2));
        for (cell, w) in cardinality_certificate(m) {
            for a in 0..1usize << m {
                let h: Rational = (0..m)
                    .map(|j| &w[j] * int(((a >> (m - 1 - j)) & 1) as i64))
                    .sum::<Rational>()
                    + &w[m];
                if cell.contains(a) {
                    assert_eq!(h, lambda(a));
                } else {
                    assert!(h > lambda(a));
                }
            }
        }
    }
}

#[test]
fn slices_refine_to_regular_triangulations() {
    for m in 2..=4 {
        let mech = construct_cardinality_robust(m).unwrap();
        let sub = mech.subdivision().unwrap();
        let witness = is_regular(&sub).unwrap().witness.unwrap();
        let config = Arc::new(cube_config(m).unwrap());
        let tri = refine_to_triangulation(&config, &sub, &witness).unwrap();
        assert!(tri.is_triangulation().unwrap());
        assert!(tri.cells().iter().all(|t| sub.cells().iter().any(|c| t.is_subset_of(c))));
        assert_eq!(cardinality_sensitivity(&tri), 1);
        assert!(is_regular(&tri).unwrap().regular);
    }
}

#[test]
fn counter_is_its_own_flip_up_to_symmetry() {
    let sub = counter().subdivision().unwrap();
    let group = symmetry_group(sub.config(), GroupKind::FullCube).unwrap();
    let flipped = Subdivision::new(sub.config().clone(), sub.cells().iter().map(|c| c.map(|a| a ^ 0b111)));
    assert_eq!(canonicalize(&flipped, &group).unwrap(), canonicalize(&sub, &group).unwrap());
    assert_eq!(hamming_sensitivity(&sub), 2);
}

#[test]
fn multiplayer_robust_beats_trivial_bias() {
    for m in 2..=3 {
        let am = construct_multiplayer_robust(2, m).unwrap();
        let mu = multiplayer_cardinality_sensitivity(&am.subdivision().unwrap()).unwrap();
        assert!(mu <= (m as u64).div_ceil(2), "m={m}: {mu}");
    }
    let config = simplex_product_config(2, 2).unwrap();
    assert_eq!(symmetry_group(&config, GroupKind::ProductAutomorphisms).unwrap().order(), 8);
}

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use tropmech::config::{box_lattice_config, cube_config, symmetry_group, GroupKind, PointConfiguration};
use tropmech::io::Json;
use tropmech::linalg::{rank, solve_unique};
use tropmech::lp::{lp_solve, Constraint, LinearProgram, LpOutcome, Sense};
use tropmech::mechanism::{cardinality_sensitivity, utility_polynomial, AffineMaximizer, Mechanism};
use tropmech::scalar::{format_rational, parse_rational, Rational};
use tropmech::subdivision::{canonicalize, is_regular, regular_subdivision, Lifting, Subdivision};
use tropmech::tropical::{Coefficient, TropicalPolynomial};

fn r(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=7).prop_map(|(n, d)| r(n, d))
}

/// Small integers produce many ties and hence coarse cells.
fn height() -> impl Strategy<Value = Rational> {
    prop_oneof![(-2i64..=2).prop_map(|n| r(n, 1)), rational()]
}

fn configuration() -> impl Strategy<Value = PointConfiguration> {
    prop_oneof![
        Just(cube_config(2).unwrap()),
        Just(cube_config(3).unwrap()),
        Just(box_lattice_config(&[2, 2]).unwrap()),
        Just(box_lattice_config(&[1, 3]).unwrap()),
    ]
}

fn lifted() -> impl Strategy<Value = (Arc<PointConfiguration>, Lifting)> {
    configuration().prop_flat_map(|c| {
        let n = c.len();
        (Just(Arc::new(c)), prop::collection::vec(height(), n).prop_map(Lifting::new))
    })
}

fn mechanism(items: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Mechanism> {
    items.prop_flat_map(|m| {
        prop::collection::vec(rational(), 1 << m).prop_map(move |p| Mechanism::new(m, p).unwrap())
    })
}

fn rats(p: &[i64]) -> Vec<Rational> {
    p.iter().map(|&v| r(v, 1)).collect()
}

/// Upper faces found by trying every affinely independent (d+1)-subset.
fn upper_cells_by_scan(config: &PointConfiguration, lifting: &Lifting) -> BTreeSet<Vec<usize>> {
    let d = config.dimension();
    let n = config.len();
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = rats(config.point(i));
            row.push(Rational::one());
            row
        })
        .collect();
    let mut cells = BTreeSet::new();
    let mut subset: Vec<usize> = (0..=d).collect();
    loop {
        let a: Vec<Vec<Rational>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let b: Vec<Rational> = subset.iter().map(|&i| lifting.heights[i].clone()).collect();
        if let Some(w) = solve_unique(&a, &b) {
            let f = |i: usize| rows[i].iter().zip(&w).map(|(x, y)| x * y).sum::<Rational>();
            if (0..n).all(|i| lifting.heights[i] <= f(i)) {
                let face: Vec<usize> = (0..n).filter(|&i| lifting.heights[i] == f(i)).collect();
                let face_rows: Vec<Vec<Rational>> = face.iter().map(|&i| rows[i].clone()).collect();
                if rank(&face_rows) == d + 1 {
                    cells.insert(face);
                }
            }
        }
        let Some(k) = (0..=d).rev().find(|&k| subset[k] < n - 1 - (d - k)) else { break };
        subset[k] += 1;
        for j in k + 1..=d {
            subset[j] = subset[j - 1] + 1;
        }
    }
    cells
}

fn cell_sets(s: &Subdivision) -> BTreeSet<Vec<usize>> {
    s.cells().iter().map(|c| c.indices().to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_min_is_negated_max(c in prop::collection::vec(rational(), 3), bounds in prop::collection::vec(1i64..5, 3)) {
        let mut min = LinearProgram::new(3, c.clone(), Sense::Minimize);
        let mut max = LinearProgram::new(3, c.iter().map(|v| -v).collect(), Sense::Maximize);
        for (j, &b) in bounds.iter().enumerate() {
            let mut e = vec![Rational::zero(); 3];
            e[j] = Rational::one();
            for lp in [&mut min, &mut max] {
                lp.push(Constraint::ge(e.clone(), r(-b, 1)));
                lp.push(Constraint::le(e.clone(), r(b, 1)));
            }
        }
        min.push(Constraint::ge(vec![Rational::one(); 3], r(-1, 1)));
        max.push(Constraint::ge(vec![Rational::one(); 3], r(-1, 1)));
        let lo = lp_solve(&min).unwrap();
        let hi = lp_solve(&max).unwrap();
        let (LpOutcome::Optimal { value: a, point }, LpOutcome::Optimal { value: b, .. }) = (lo, hi) else {
            panic!("bounded program not optimal");
        };
        prop_assert_eq!(&a, &-b);
        prop_assert!(min.constraints.iter().all(|k| k.is_satisfied_by(&point)));
    }

    #[test]
    fn subdivision_matches_subset_scan((config, lifting) in lifted()) {
        let sub = regular_subdivision(&config, &lifting).unwrap();
        prop_assert_eq!(cell_sets(&sub), upper_cells_by_scan(&config, &lifting));
    }

    #[test]
    fn cell_volumes_fill_the_hull((config, lifting) in lifted()) {
        let sub = regular_subdivision(&config, &lifting).unwrap();
        sub.validate().unwrap();
        let total: Rational = sub.cell_volumes().unwrap().into_iter().sum();
        let hull = Subdivision::trivial(config.clone()).cell_volumes().unwrap()[0].clone();
        prop_assert_eq!(total, hull);
    }

    #[test]
    fn regularity_witness_round_trips((config, lifting) in lifted()) {
        let sub = regular_subdivision(&config, &lifting).unwrap();
        let reg = is_regular(&sub).unwrap();
        prop_assert!(reg.regular);
        let again = regular_subdivision(&config, reg.witness.as_ref().unwrap()).unwrap();
        prop_assert_eq!(again, sub);
    }

    #[test]
    fn scaling_and_affine_shift_preserve_cells((config, lifting) in lifted(), s in 1i64..9, shift in prop::collection::vec(-3i64..=3, 4)) {
        let sub = regular_subdivision(&config, &lifting).unwrap();
        let d = config.dimension();
        let moved: Vec<Rational> = (0..config.len())
            .map(|i| {
                let lin: i64 = config.point(i).iter().zip(&shift).map(|(x, y)| x * y).sum();
                &lifting.heights[i] * r(s, 1) + r(lin + shift[d], 1)
            })
            .collect();
        prop_assert_eq!(regular_subdivision(&config, &Lifting::new(moved)).unwrap(), sub);
    }

    #[test]
    fn dual_vertices_attain_exactly_their_cell(mech in mechanism(1..=3)) {
        let poly = utility_polynomial(&mech);
        let sub = poly.dual_subdivision().unwrap();
        for cell in sub.cells() {
            let v = poly.dual_vertex(cell).unwrap();
            let (_, argmax) = poly.evaluate(&v).unwrap();
            prop_assert_eq!(argmax, cell.indices().to_vec());
        }
    }

    #[test]
    fn region_nonempty_iff_point_used(mech in mechanism(1..=3)) {
        let poly = utility_polynomial(&mech);
        let used = poly.dual_subdivision().unwrap().used_points();
        for i in 0..poly.support().len() {
            prop_assert_eq!(!poly.region_of(i).unwrap().is_empty().unwrap(), used.contains(&i));
        }
    }

    #[test]
    fn cardinality_sensitivity_at_least_one(mech in mechanism(1..=4)) {
        prop_assert!(cardinality_sensitivity(&mech.subdivision().unwrap()) >= 1);
    }

    #[test]
    fn canonical_form_is_orbit_invariant(mech in mechanism(2..=3), pick in 0usize..48) {
        let sub = mech.subdivision().unwrap();
        let group = symmetry_group(sub.config(), GroupKind::FullCube).unwrap();
        let g = &group.elements[pick % group.order()];
        let image = Subdivision::new(sub.config().clone(), sub.cells().iter().map(|c| c.map(|i| g.apply(i))));
        prop_assert_eq!(canonicalize(&image, &group).unwrap(), canonicalize(&sub, &group).unwrap());
    }

    #[test]
    fn rationals_round_trip(v in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&v)).unwrap(), v);
    }

    #[test]
    fn mechanisms_round_trip(mech in mechanism(1..=4)) {
        prop_assert_eq!(Mechanism::from_json_str(&mech.to_json_string()).unwrap(), mech);
    }

    #[test]
    fn subdivisions_and_liftings_round_trip((config, lifting) in lifted()) {
        prop_assert_eq!(Lifting::from_json_str(&lifting.to_json_string()).unwrap(), lifting.clone());
        let sub = regular_subdivision(&config, &lifting).unwrap();
        prop_assert_eq!(Subdivision::from_json_str(&sub.to_json_string()).unwrap(), sub);
    }

    #[test]
    fn polynomials_round_trip(coeffs in prop::collection::vec(prop::option::weighted(0.8, rational()), 1..6)) {
        let support: Vec<Vec<i64>> = (0..coeffs.len() as i64).map(|k| vec![k, k * k % 3]).collect();
        let coeffs: Vec<Coefficient> =
            coeffs.into_iter().map(|c| c.map_or(Coefficient::NegInfinity, Coefficient::Finite)).collect();
        if let Ok(p) = TropicalPolynomial::new(support, coeffs) {
            prop_assert_eq!(TropicalPolynomial::from_json_str(&p.to_json_string()).unwrap(), p);
        }
    }

    #[test]
    fn affine_maximizers_round_trip(w in prop::collection::vec(1i64..5, 2), b in prop::collection::vec(rational(), 4)) {
        let am = AffineMaximizer::new(2, 2, w.into_iter().map(|x| r(x, 1)).collect(), b).unwrap();
        prop_assert_eq!(AffineMaximizer::from_json_str(&am.to_json_string()).unwrap(), am);
    }
}

mod common;

use std::sync::Arc;

use chow_obstruct::abelian::{AbelianPresentation, GroupElement};
use chow_obstruct::chow::{monomial_basis, AmbientSpace, ChowClass};
use chow_obstruct::complement::{ComplementModel, PushforwardAssumption};
use chow_obstruct::linalg::{
    hermite_normal_form, is_divisibility_chain, lattice_contains, smith_normal_form, IntegerMatrix,
};
use chow_obstruct::obstruction::{decide, theta, ChernPair};
use chow_obstruct::steenrod::{sq2, Mod2ChowClass};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn matrix_strategy(max_dim: usize, bound: i64) -> impl Strategy<Value = (usize, Vec<Vec<i128>>)> {
    (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
        (
            Just(c),
            prop::collection::vec(prop::collection::vec((-bound..=bound).prop_map(i128::from), c), r),
        )
    })
}

fn square_strategy(max_dim: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i128>>> {
    (1..=max_dim).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec((-bound..=bound).prop_map(i128::from), n), n)
    })
}

fn to_matrix(cols: usize, a: &[Vec<i128>]) -> IntegerMatrix {
    IntegerMatrix::with_cols(cols, common::to_bigint_rows(a)).unwrap()
}

fn ambient_strategy() -> impl Strategy<Value = AmbientSpace> {
    prop::collection::vec(1u32..=3, 1..=3).prop_map(|d| AmbientSpace::new(d).unwrap())
}

fn class_strategy(ambient: AmbientSpace, degree: u32) -> impl Strategy<Value = ChowClass> {
    let n = monomial_basis(&ambient, degree).len();
    prop::collection::vec(-6i64..=6, n).prop_map(move |c| {
        let c: Vec<BigInt> = c.into_iter().map(BigInt::from).collect();
        ChowClass::from_coords(&ambient, degree, &c).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_decomposes_and_matches_determinantal_divisors((cols, a) in matrix_strategy(5, 30)) {
        let m = to_matrix(cols, &a);
        let d = smith_normal_form(&m);
        prop_assert!(d.verify(&m));
        prop_assert!(d.s.is_diagonal());
        prop_assert_eq!(d.u.determinant().unwrap().abs(), BigInt::one());
        prop_assert_eq!(d.v.determinant().unwrap().abs(), BigInt::one());
        prop_assert!(is_divisibility_chain(&d.diagonal()));
        prop_assert!(d.diagonal().iter().all(|x| !x.is_negative()));
        prop_assert_eq!(d.diagonal(), common::determinantal_diagonal(&a, cols));
        let g = AbelianPresentation::from_relations(m);
        prop_assert_eq!(g.invariant_factors(), common::determinantal_invariant_factors(&a, cols));
    }

    #[test]
    fn cokernel_matches_coset_census(a in square_strategy(4, 6)) {
        if let Some(census) = common::coset_census(&a, 1000) {
            let g = AbelianPresentation::from_relations(to_matrix(a.len(), &a));
            let factors = g.invariant_factors();
            prop_assert_eq!(g.order(), Some(BigInt::from(census.order)));
            for (k, count) in census.torsion_counts {
                prop_assert_eq!(common::predicted_torsion_count(&factors, k), count);
            }
        }
    }

    #[test]
    fn hnf_spans_the_same_lattice((cols, a) in matrix_strategy(5, 12), w in prop::collection::vec(-4i64..=4, 5)) {
        let m = to_matrix(cols, &a);
        let (h, u) = hermite_normal_form(&m);
        prop_assert_eq!(&(&u * &m), &h);
        if m.rows() > 0 {
            prop_assert_eq!(u.determinant().unwrap().abs(), BigInt::one());
        }
        let w: Vec<BigInt> = w.into_iter().take(m.rows()).map(BigInt::from).collect();
        if w.len() == m.rows() {
            let v = m.left_apply(&w);
            prop_assert!(lattice_contains(&m, &v));
            prop_assert!(lattice_contains(&h, &v));
        }
    }

    #[test]
    fn lattice_membership_matches_index_test(a in square_strategy(3, 5), v in prop::collection::vec(-20i64..=20, 3)) {
        let n = a.len();
        let d = common::det(&a);
        prop_assume!(d != 0);
        let v: Vec<i128> = v.into_iter().take(n).map(i128::from).collect();
        // appending v keeps the full-rank lattice iff the Smith diagonal is unchanged
        let mut e = a.clone();
        e.push(v.clone());
        let with_v = common::determinantal_diagonal(&e, n);
        let without = common::determinantal_diagonal(&a, n);
        let same_lattice = with_v == without;
        let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        prop_assert_eq!(lattice_contains(&to_matrix(n, &a), &vb), same_lattice);
    }

    #[test]
    fn element_arithmetic_is_a_group(a in square_strategy(3, 5), x in prop::collection::vec(-9i64..=9, 3), y in prop::collection::vec(-9i64..=9, 3)) {
        let n = a.len();
        let g = Arc::new(AbelianPresentation::from_relations(to_matrix(n, &a)));
        let ex = GroupElement::new(g.clone(), x.iter().take(n).map(|&c| BigInt::from(c)).collect()).unwrap();
        let ey = GroupElement::new(g.clone(), y.iter().take(n).map(|&c| BigInt::from(c)).collect()).unwrap();
        prop_assert_eq!(&(&ex + &ey), &(&ey + &ex));
        prop_assert!((&ex - &ex).is_zero());
        prop_assert_eq!(&(&ex + &(-&ex)), &GroupElement::zero(g.clone()));
        let ord = ex.order();
        if ord > BigInt::from(0) {
            prop_assert!(ex.scale(&ord).is_zero());
        }
    }

    #[test]
    fn sq2_is_additive_and_satisfies_cartan(
        (a, b, c) in ambient_strategy().prop_flat_map(|amb| {
            let top = amb.total_dim();
            (0..=top, 0..=top).prop_flat_map(move |(p, q)| {
                (class_strategy(amb.clone(), p), class_strategy(amb.clone(), p), class_strategy(amb.clone(), q))
            })
        })
    ) {
        let ma = Mod2ChowClass::from(&a);
        let mb = Mod2ChowClass::from(&b);
        let mc = Mod2ChowClass::from(&c);
        prop_assert_eq!(sq2(&ma.try_add(&mb).unwrap()), sq2(&ma).try_add(&sq2(&mb)).unwrap());
        let lhs = sq2(&ma.cup(&mc).unwrap());
        let rhs = sq2(&ma).cup(&mc).unwrap().try_add(&ma.cup(&sq2(&mc)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cup_is_commutative_and_associative(
        (a, b, c) in ambient_strategy().prop_flat_map(|amb| {
            (0..=2u32, 0..=2u32, 0..=2u32).prop_flat_map(move |(p, q, r)| {
                (class_strategy(amb.clone(), p), class_strategy(amb.clone(), q), class_strategy(amb.clone(), r))
            })
        })
    ) {
        prop_assert_eq!(a.cup(&b).unwrap(), b.cup(&a).unwrap());
        prop_assert_eq!(a.cup(&b).unwrap().cup(&c).unwrap(), a.cup(&b.cup(&c).unwrap()).unwrap());
    }

    #[test]
    fn parse_display_round_trip(c in ambient_strategy().prop_flat_map(|amb| {
        let top = amb.total_dim();
        (0..=top).prop_flat_map(move |d| class_strategy(amb.clone(), d))
    })) {
        let back = ChowClass::parse(&c.to_string(), c.ambient(), Some(c.degree())).unwrap();
        prop_assert_eq!(back, c);
    }
}

fn model_strategy() -> impl Strategy<Value = ComplementModel> {
    (0usize..common::FOURFOLDS.len()).prop_flat_map(|i| {
        let dims = common::FOURFOLDS[i];
        prop::collection::vec(1i64..=9, dims.len()).prop_map(move |d| {
            let amb = AmbientSpace::new(dims.to_vec()).unwrap();
            let d: Vec<BigInt> = d.into_iter().map(BigInt::from).collect();
            ComplementModel::from_multidegree(amb, &d).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn restrict_is_additive(
        (model, a, b, alpha) in model_strategy().prop_flat_map(|m| {
            let amb = m.ambient().clone();
            (1..=4u32).prop_flat_map(move |j| {
                (
                    Just(m.clone()),
                    class_strategy(amb.clone(), j),
                    class_strategy(amb.clone(), j),
                    class_strategy(amb.clone(), j - 1),
                )
            })
        })
    ) {
        let naive = PushforwardAssumption::NaiveDivisor;
        let ra = model.restrict(&a, &naive).unwrap();
        let rb = model.restrict(&b, &naive).unwrap();
        let rs = model.restrict(&a.try_add(&b).unwrap(), &naive).unwrap();
        prop_assert_eq!(rs, &ra + &rb);
        // [Z]·α restricts to zero
        let r = model.z_class().cup(&alpha).unwrap();
        prop_assert!(model.restrict(&r, &naive).unwrap().is_zero());
    }

    #[test]
    fn naive_zero_stays_zero_in_larger_quotients(
        (model, c, extra) in model_strategy().prop_flat_map(|m| {
            let amb = m.ambient().clone();
            (Just(m), class_strategy(amb.clone(), 3), prop::collection::vec(class_strategy(amb, 3), 0..3))
        })
    ) {
        let naive = PushforwardAssumption::NaiveDivisor;
        let mut generators = model.naive_generators(3);
        generators.extend(extra);
        let bigger = PushforwardAssumption::CustomSubgroup {
            degree: 3,
            generators,
            direction: chow_obstruct::complement::Containment::ContainsImage,
        };
        for mod2 in [false, true] {
            let (small, large) = if mod2 {
                (model.restrict_mod2(&c, &naive).unwrap(), model.restrict_mod2(&c, &bigger).unwrap())
            } else {
                (model.restrict(&c, &naive).unwrap(), model.restrict(&c, &bigger).unwrap())
            };
            if small.is_zero() {
                prop_assert!(large.is_zero());
            }
        }
        // a relation of the naive quotient is zero everywhere
        let r = model.naive_generators(3).into_iter().next().unwrap();
        prop_assert!(model.restrict(&r, &bigger).unwrap().is_zero());
    }

    #[test]
    fn theta_is_affine_in_c1(
        (c1, c1b, c2) in (0usize..common::FOURFOLDS.len()).prop_flat_map(|i| {
            let amb = AmbientSpace::new(common::FOURFOLDS[i].to_vec()).unwrap();
            (class_strategy(amb.clone(), 1), class_strategy(amb.clone(), 1), class_strategy(amb, 2))
        })
    ) {
        let amb = c1.ambient().clone();
        let t = |a: &ChowClass| theta(&ChernPair::new(a.clone(), c2.clone()).unwrap()).unwrap();
        let lhs = t(&c1.try_add(&c1b).unwrap()).try_add(&t(&ChowClass::zero(&amb, 1))).unwrap();
        let rhs = t(&c1).try_add(&t(&c1b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn decide_ignores_the_choice_of_lift(
        (model, c1, c2, k, alpha) in model_strategy().prop_flat_map(|m| {
            let amb = m.ambient().clone();
            (Just(m), class_strategy(amb.clone(), 1), class_strategy(amb.clone(), 2), -5i64..=5, class_strategy(amb, 1))
        })
    ) {
        let z = model.z_class().clone();
        let c1b = c1.try_add(&z.scale(&BigInt::from(k))).unwrap();
        let c2b = c2.try_add(&z.cup(&alpha).unwrap()).unwrap();
        for assumption in [PushforwardAssumption::NaiveDivisor, PushforwardAssumption::NoriExact] {
            let r = decide(&model, &ChernPair::new(c1.clone(), c2.clone()).unwrap(), &assumption).unwrap();
            let s = decide(&model, &ChernPair::new(c1b.clone(), c2b.clone()).unwrap(), &assumption).unwrap();
            prop_assert_eq!(r.verdict, s.verdict);
            prop_assert_eq!(&r.theta_image, &s.theta_image);
            prop_assert_eq!(&r.naive_image, &s.naive_image);
        }
    }

    #[test]
    fn verdicts_respect_soundness_order(
        (model, c1, c2) in model_strategy().prop_flat_map(|m| {
            let amb = m.ambient().clone();
            (Just(m), class_strategy(amb.clone(), 1), class_strategy(amb, 2))
        })
    ) {
        use chow_obstruct::obstruction::{DecisionBasis, Verdict};
        let pair = ChernPair::new(c1, c2).unwrap();
        let naive = decide(&model, &pair, &PushforwardAssumption::NaiveDivisor).unwrap();
        prop_assert_ne!(naive.verdict, Verdict::NotAlgebraizable);
        let contains = PushforwardAssumption::CustomSubgroup {
            degree: 3,
            generators: model.naive_generators(3),
            direction: chow_obstruct::complement::Containment::ContainsImage,
        };
        let r = decide(&model, &pair, &contains).unwrap();
        if r.verdict == Verdict::Algebraizable {
            prop_assert_eq!(r.justification.decided_by, Some(DecisionBasis::NaiveVanishing));
        }
    }
}

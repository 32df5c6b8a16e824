//! Property tests of filtrations, tame scaling and the Herbrand functions.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use ramfiltre::engine::t_nk_rec;
use ramfiltre::filtration::{build_filtration, enumerate_jump_families, step_directions, tower_sequence, Filtration};
use ramfiltre::herbrand::{different_valuation, phi_from_filtration, psi, psi_from_filtration, tower_different_check};
use ramfiltre::{Prime, RadicalSpec, TameFactor, VClass};

fn spec() -> impl Strategy<Value = RadicalSpec> {
    (prop_oneof![Just(3u32), Just(5), Just(7)], any::<bool>(), 1usize..=3, 1u32..=5)
        .prop_flat_map(|(p, div, n, r)| {
            let vclass = if div { VClass::Divisible } else { VClass::NonDivisible };
            (Just(p), Just(vclass), Just(r), proptest::collection::vec(1..=r, n))
        })
        .prop_map(|(p, vclass, r, mut s)| {
            let n = s.len();
            match vclass {
                VClass::Divisible => s.sort_unstable(),
                VClass::NonDivisible => s[..n - 1].sort_unstable(),
            }
            RadicalSpec::new(Prime::new(p).unwrap(), r, s, vclass)
        })
}

const INDEX_WALK_LIMIT: u32 = 100_000;

fn rational() -> impl Strategy<Value = (i64, i64)> {
    (0i64..=200_000, 1i64..=997)
}

fn filtration(s: &RadicalSpec) -> Filtration {
    build_filtration(s).unwrap()
}

/// `sum_{i >= 0} (|G_i| - 1)` by walking every integer index.
fn different_by_index(f: &Filtration) -> BigUint {
    let mut total = BigUint::zero();
    let last = f.levels.last().unwrap().jump.clone();
    let mut i = BigUint::zero();
    while i <= last {
        let order = &f.levels.iter().find(|l| l.jump >= i).unwrap().group_order;
        total += order - 1u32;
        i += 1u32;
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn levels_are_strict_and_telescoping(s in spec()) {
        let f = filtration(&s);
        let p = BigUint::from(s.p.to_u64().unwrap());
        prop_assert!(f.levels[0].jump.is_zero());
        prop_assert_eq!(&f.levels[0].group_order, &s.full_label().degree(&s.p));
        prop_assert_eq!(&f.g0_order, &(&f.g1_order * (&p - 1u32)));
        for w in f.levels.windows(2) {
            prop_assert!(w[0].jump < w[1].jump);
            prop_assert_eq!(&w[0].source, &w[1].fixed_field);
        }
        for w in f.levels[1..].windows(2) {
            let raised = step_directions(&w[0].fixed_field, &w[0].source).len() as u32;
            prop_assert_eq!(&w[0].group_order, &(&w[1].group_order * p.pow(raised)));
        }
        prop_assert_eq!(&f.levels.last().unwrap().source, &s.full_label());
    }

    #[test]
    fn families_enumerate_the_tower(s in spec()) {
        let f = filtration(&s);
        let mut from_families: Vec<BigUint> =
            enumerate_jump_families(&s).unwrap().iter().map(|(_, q)| t_nk_rec(q).unwrap()).collect();
        from_families.sort();
        prop_assert_eq!(from_families, f.nonzero_jumps());
        prop_assert_eq!(tower_sequence(&s).unwrap().len(), f.levels.len());
    }

    #[test]
    fn tame_factor_scales_jumps(s in spec(), q in prop_oneof![Just(2u32), Just(11), Just(13)], e in proptest::collection::vec(1u32..=2, 1..=2)) {
        let base = filtration(&s);
        let mut tamed = s.clone();
        tamed.tame = TameFactor { primes: vec![(Prime::new(q).unwrap(), e.clone())] };
        let f = filtration(&tamed);
        let d = BigUint::from(q).pow(e.iter().sum::<u32>());
        prop_assert_eq!(f.levels.len(), base.levels.len());
        prop_assert_eq!(&f.tame_degree, &d);
        prop_assert_eq!(f.nonzero_jumps(), base.nonzero_jumps().iter().map(|j| j * &d).collect::<Vec<_>>());
        prop_assert_eq!(&f.g0_order, &(&base.g0_order * &d));
        prop_assert_eq!(&f.g1_order, &base.g1_order);
    }

    #[test]
    fn herbrand_functions_are_inverse(s in spec(), samples in proptest::collection::vec(rational(), 8)) {
        let f = filtration(&s);
        let phi = phi_from_filtration(&f);
        let psi_f = psi_from_filtration(&f);
        prop_assert!(phi.is_concave());
        for (u, v) in &phi.breakpoints {
            prop_assert_eq!(&psi(&phi, v), u);
            prop_assert_eq!(&phi.eval(u), v);
        }
        for (num, den) in samples {
            let u = BigRational::new(BigInt::from(num), BigInt::from(den));
            prop_assert_eq!(psi(&phi, &phi.eval(&u)), u.clone());
            prop_assert_eq!(phi.eval(&psi_f.eval(&u)), u);
        }
        prop_assert_eq!(phi.eval(&-BigRational::one()), -BigRational::one());
    }

    #[test]
    fn different_matches_index_sum(s in spec()) {
        let f = filtration(&s);
        prop_assume!(f.levels.last().unwrap().jump <= BigUint::from(INDEX_WALK_LIMIT));
        prop_assert_eq!(different_valuation(&f), different_by_index(&f));
    }

    #[test]
    fn tower_differents_compose(s in spec(), pick in any::<prop::sample::Index>()) {
        let f = filtration(&s);
        let tower = tower_sequence(&s).unwrap();
        let mid = &tower[pick.index(tower.len())];
        prop_assert!(tower_different_check(&f, mid).unwrap());
    }
}

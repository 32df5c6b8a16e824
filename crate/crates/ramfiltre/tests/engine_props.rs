//! Property tests of the two jump evaluators.

use num_bigint::BigUint;
use proptest::prelude::*;
use ramfiltre::engine::{ClosedForms, JumpQuery, Lattice, LatticeOptions, Node, Pairing};
use ramfiltre::error::Error;
use ramfiltre::{FieldLabel, Prime, VClass};

fn prime(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

/// `(p, vclass, label, k)` with the label admissible for its class.
fn query() -> impl Strategy<Value = JumpQuery> {
    (prop_oneof![Just(3u32), Just(5), Just(7)], any::<bool>(), 1usize..=3, 1u32..=7)
        .prop_flat_map(|(p, div, n, r)| {
            let vclass = if div { VClass::Divisible } else { VClass::NonDivisible };
            (Just(p), Just(vclass), Just(r), proptest::collection::vec(1..=r, n), 1..=n + 1)
        })
        .prop_filter_map("k = 1 needs r >= 2", |(p, vclass, r, mut s, k)| {
            let n = s.len();
            match vclass {
                VClass::Divisible => s.sort_unstable(),
                VClass::NonDivisible => s[..n - 1].sort_unstable(),
            }
            (k >= 2 || r >= 2).then(|| JumpQuery::new(prime(p), vclass, FieldLabel::new(r, s), k))
        })
}

fn rec(q: &JumpQuery) -> BigUint {
    Lattice::new(q.p.clone()).jump(q.vclass, &q.label, q.k).unwrap()
}

fn with(q: &JumpQuery, options: LatticeOptions) -> BigUint {
    Lattice::with_options(q.p.clone(), options).jump(q.vclass, &q.label, q.k).unwrap()
}

fn lowered(q: &JumpQuery, dir: usize) -> Option<FieldLabel> {
    let l = q.label.shift_index(dir).ok()?;
    (l.r >= 1).then_some(l)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn every_square_partner_agrees(q in query()) {
        let lattice = Lattice::new(q.p.clone());
        let node = Node::from_query(q.vclass, &q.label, q.k).unwrap();
        let value = lattice.eval(&node).unwrap();
        for partner in node.partners() {
            prop_assert_eq!(lattice.eval_via(&node, partner).unwrap(), value.clone());
        }
    }

    #[test]
    fn options_do_not_change_values(q in query()) {
        let base = rec(&q);
        for options in [
            LatticeOptions { clamp: true, ..LatticeOptions::default() },
            LatticeOptions { memoize: false, ..LatticeOptions::default() },
            LatticeOptions { pairing: Pairing::LastRadical, ..LatticeOptions::default() },
        ] {
            prop_assert_eq!(with(&q, options), base.clone());
        }
    }

    #[test]
    fn closed_forms_agree_wherever_defined(q in query()) {
        match ClosedForms::new(q.p.clone()).jump(&q) {
            Ok(v) => prop_assert_eq!(v, rec(&q)),
            Err(Error::Domain(_)) => {}
            Err(e) => prop_assert!(false, "closed forms failed: {}", e),
        }
    }

    #[test]
    fn lowering_last_agrees_with_general_k1(q in query()) {
        let q = JumpQuery { k: 1, ..q };
        prop_assume!(q.label.r >= 2);
        let closed = ClosedForms::new(q.p.clone());
        if let (Ok(a), Ok(b)) = (closed.t_n1_lowering_last(&q), closed.t_n1(&q)) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn square_identity(q in query(), l in 1usize..=4) {
        let n = q.label.n();
        let (k, l) = (q.k, 1 + (l - 1) % (n + 1));
        prop_assume!(k != l);
        let (Some(down_k), Some(down_l)) = (lowered(&q, k), lowered(&q, l)) else { return Ok(()) };
        prop_assume!(l >= 2 || down_k.r >= 2);
        prop_assume!(k >= 2 || down_l.r >= 2);
        prop_assume!(l >= 2 || q.label.r >= 2);
        let lattice = Lattice::new(q.p.clone());
        let t = |label: &FieldLabel, dir: usize| lattice.jump(q.vclass, label, dir).unwrap();
        let p = BigUint::from(q.p.to_u64().unwrap());
        prop_assert_eq!(&p * t(&down_k, l) + t(&q.label, k), &p * t(&down_l, k) + t(&q.label, l));
    }

    #[test]
    fn jumps_never_decrease_in_r(q in query()) {
        let mut up = q.clone();
        up.label.r += 1;
        prop_assert!(rec(&up) >= rec(&q));
    }

    #[test]
    fn memo_is_reused(q in query()) {
        let lattice = Lattice::new(q.p.clone());
        let first = lattice.jump(q.vclass, &q.label, q.k).unwrap();
        let size = lattice.cache_len();
        prop_assert!(size >= 1);
        prop_assert_eq!(lattice.jump(q.vclass, &q.label, q.k).unwrap(), first);
        prop_assert_eq!(lattice.cache_len(), size);
    }
}

use orientalis_core::enumeration::enumerate_o;
use orientalis_core::pasting::{decompose_sum, fill, is_filler_shaped, paste};
use orientalis_core::{check_membership, Chain, Operator};
use proptest::prelude::*;

fn operator(m: usize, n: usize) -> impl Strategy<Value = Operator> {
    proptest::collection::vec(0..=n, m + 1).prop_map(move |mut v| {
        v.sort_unstable();
        Operator::new(&v, n).unwrap()
    })
}

fn op_any() -> impl Strategy<Value = Operator> {
    (0usize..6, 0usize..6).prop_flat_map(|(m, n)| operator(m, n))
}

fn chain(m: usize, n: usize) -> impl Strategy<Value = Chain> {
    proptest::collection::vec((-3i64..=3, operator(m, n)), 0..6)
        .prop_map(move |t| Chain::new(m, n, t).unwrap())
}

fn chain_any() -> impl Strategy<Value = Chain> {
    (1usize..5, 0usize..5).prop_flat_map(|(m, n)| chain(m, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn operator_action_is_associative(
        (a, b, c) in (0usize..5, 0usize..5, 0usize..5, 0usize..5)
            .prop_flat_map(|(p, q, m, n)| (operator(m, n), operator(q, m), operator(p, q)))
    ) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn chain_action_is_functorial(
        (x, b, c) in (0usize..4, 0usize..4, 0usize..5, 0usize..4)
            .prop_flat_map(|(p, q, m, n)| (chain(m, n), operator(q, m), operator(p, q)))
    ) {
        let left = x.act(&b).unwrap().act(&c).unwrap();
        let right = x.act(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let id = Operator::identity(x.dim()).unwrap();
        prop_assert_eq!(x.act(&id).unwrap(), x);
    }

    #[test]
    fn action_is_linear(
        (x, y, b) in (0usize..4, 0usize..5, 0usize..4)
            .prop_flat_map(|(p, m, n)| (chain(m, n), chain(m, n), operator(p, m)))
    ) {
        let sum = x.add(&y).unwrap().act(&b).unwrap();
        prop_assert_eq!(sum, x.act(&b).unwrap().add(&y.act(&b).unwrap()).unwrap());
    }

    #[test]
    fn simplicial_identities(x in (2usize..6, 0usize..5).prop_flat_map(|(m, n)| chain(m, n))) {
        let m = x.dim();
        for j in 0..=m {
            for i in 0..j {
                prop_assert_eq!(x.face(j).face(i), x.face(i).face(j - 1));
            }
        }
        for j in 0..=m {
            for i in 0..=j {
                prop_assert_eq!(x.degeneracy(j).degeneracy(i), x.degeneracy(i).degeneracy(j + 1));
            }
        }
        for j in 0..=m {
            for i in 0..=m + 1 {
                let lhs = x.degeneracy(j).face(i);
                if i < j {
                    prop_assert_eq!(lhs, x.face(i).degeneracy(j - 1));
                } else if i == j || i == j + 1 {
                    prop_assert_eq!(lhs, x.clone());
                } else {
                    prop_assert_eq!(lhs, x.face(i - 1).degeneracy(j));
                }
            }
        }
    }

    #[test]
    fn generators_agree_with_tuple_edits(a in op_any()) {
        let m = a.dim();
        for k in 0..=m {
            if m >= 1 {
                prop_assert_eq!(a.drop_index(k), a.compose(&Operator::face_map(k, m).unwrap()).unwrap());
            }
            prop_assert_eq!(a.repeat_index(k), a.compose(&Operator::degeneracy_map(k, m).unwrap()).unwrap());
        }
    }

    #[test]
    fn epi_mono_factorization(a in op_any()) {
        let (epi, mono) = a.factor();
        prop_assert!(epi.is_surjective());
        prop_assert!(mono.is_injective());
        prop_assert_eq!(mono.compose(&epi).unwrap(), a);
    }

    #[test]
    fn normalization(x in chain_any()) {
        prop_assume!(!x.is_zero());
        let (core, word) = x.degeneracy_normalize().unwrap();
        prop_assert!(!core.is_degenerate());
        prop_assert_eq!(core.apply_degeneracies(&word), x.clone());
        let (again, none) = core.degeneracy_normalize().unwrap();
        prop_assert_eq!(again, core.clone());
        prop_assert!(none.is_empty());
        prop_assert_eq!(x.nondegenerate_core(), core);
    }

    #[test]
    fn group_laws(
        (x, y, z) in (0usize..4, 0usize..4).prop_flat_map(|(m, n)| (chain(m, n), chain(m, n), chain(m, n)))
    ) {
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
        prop_assert!(x.sub(&x).unwrap().is_zero());
        prop_assert_eq!(x.neg().neg(), x.clone());
        prop_assert_eq!(x.scale(2), x.add(&x).unwrap());
        prop_assert!(x.terms().windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(x.terms().iter().all(|t| t.1 != 0));
    }

    #[test]
    fn decomposition_identities(
        (y, z, k) in (1usize..5, 0usize..5)
            .prop_flat_map(|(m, n)| (chain(m, n), chain(m, n), 1..=m))
    ) {
        let d = decompose_sum(&y, &z, k).unwrap();
        prop_assert_eq!(&d.witness, &y.degeneracy(k).add(&z.degeneracy(k - 1)).unwrap());
        prop_assert_eq!(paste(&d.u, &d.v, k).unwrap(), y.add(&z).unwrap());
        prop_assert_eq!(fill(&d.u, &d.v, k).unwrap(), d.witness);
    }

    #[test]
    fn filler_faces(
        (x, y, k) in (1usize..5, 0usize..5)
            .prop_flat_map(|(m, n)| (chain(m, n), chain(m, n), 1..=m))
    ) {
        // Force composability by replacing y's k-th face with x's (k-1)-th.
        let y = y.sub(&y.face(k).degeneracy(k - 1)).unwrap()
            .add(&x.face(k - 1).degeneracy(k - 1)).unwrap();
        prop_assume!(x.face(k - 1) == y.face(k));
        let w = fill(&x, &y, k).unwrap();
        prop_assert_eq!(w.face(k - 1), y.clone());
        prop_assert_eq!(w.face(k), paste(&x, &y, k).unwrap());
        prop_assert_eq!(w.face(k + 1), x.clone());
        prop_assert!(is_filler_shaped(&w, k).unwrap());
    }

    #[test]
    fn parse_display_round_trip(x in chain_any()) {
        prop_assume!(!x.is_zero());
        let text = x.to_string();
        prop_assert_eq!(orientalis_core::parse_chain(&text, x.target()).unwrap(), x);
    }
}

#[test]
fn members_are_closed_under_the_action() {
    for n in 0..=3 {
        let oracle = enumerate_o(3, n, 3).unwrap();
        for m in 0..=3 {
            for x in oracle.members(m) {
                for p in 0..=3 {
                    for beta in Operator::enumerate(p, m, false) {
                        let y = x.chain().act(&beta).unwrap();
                        assert!(check_membership(&y).is_ok(), "{x} along {beta}");
                        assert!(oracle.contains(&y));
                    }
                }
            }
        }
    }
}

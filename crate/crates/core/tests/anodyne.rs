use orientalis_core::anodyne::{
    generate_certificate, generate_certificate_with, parents, verify_a_join_structure,
};
use orientalis_core::certificate::{replay, replay_legality, Certificate, ComplexState, JoinOrder, StepKind};
use orientalis_core::enumeration::enumerate_o;
use orientalis_core::{parse_chain, Chain};

#[test]
fn join_structure_of_an_arrow() {
    let upper = enumerate_o(3, 1, 3).unwrap();
    let lower = enumerate_o(3, 0, 3).unwrap();
    let r = verify_a_join_structure(&upper, &lower).unwrap();
    assert!(r.ok(), "{:?}", r.failures);
    assert_eq!(r.total, vec![2, 1, 0, 0]);
    assert_eq!(r.base, vec![1, 0, 0, 0]);
    assert_eq!(r.cones, vec![1, 1, 0, 0]);
}

#[test]
fn join_structure_counts() {
    for n in 1..=3 {
        let upper = enumerate_o(5, n, 3).unwrap();
        let lower = enumerate_o(5, n - 1, 3).unwrap();
        let r = verify_a_join_structure(&upper, &lower).unwrap();
        assert!(r.ok(), "n = {n}: {:?}", r.failures);
    }
    // Nondegenerate simplices of A ⊂ O(-,2) through dimension 3: those of
    // O(-,1) through dimension 2, their cones, and the point.
    let upper = enumerate_o(3, 2, 3).unwrap();
    let lower = enumerate_o(3, 1, 3).unwrap();
    let r = verify_a_join_structure(&upper, &lower).unwrap();
    let low: usize = lower.nondegenerate_counts()[..3].iter().sum();
    assert_eq!(r.total.iter().sum::<usize>(), 2 * low + 1);
}

#[test]
fn first_parents_of_the_triangle() {
    let oracle = enumerate_o(3, 2, 3).unwrap();
    let found = parents(&oracle, 4).unwrap();
    let w = parse_chain("(0,1,1)-(1,1,1)+(1,1,2)", 2).unwrap();
    assert_eq!(found[0].1.chain(), &w);
    assert_eq!((found[0].0.m, found[0].0.corank, found[0].0.level), (2, 0, 1));
    assert_eq!(found.len(), 5);
    let cert = generate_certificate(2, 4).unwrap();
    let thin = cert.steps.iter().filter(|s| s.kind == StepKind::Thin).count();
    assert_eq!((cert.steps.len(), thin), (7, 2));
}

#[test]
fn both_join_orders_replay() {
    let cert = generate_certificate(3, 4).unwrap();
    assert_eq!(cert.join_order, JoinOrder::Interleaved);
    let n2 = generate_certificate(2, 4).unwrap();
    let mut originals = Vec::new();
    let mut cones = Vec::new();
    for s in &n2.steps {
        originals.push(orientalis_core::certificate::CertStep { w: s.w.retarget(3).unwrap(), ..s.clone() });
    }
    // Rebuild the cone stage by hand in the other order and check legality.
    let interleaved_len = cert.steps.len();
    for s in &cert.steps {
        if s.w.support().all(|a| a.preimage_of(3).len() == 1) && !originals.contains(s) {
            cones.push(s.clone());
        }
    }
    let rest: Vec<_> = cert.steps.iter().filter(|s| !originals.contains(s) && !cones.contains(s)).cloned().collect();
    let swapped = Certificate {
        steps: originals.into_iter().chain(cones).chain(rest).collect(),
        join_order: JoinOrder::OriginalsFirst,
        ..cert.clone()
    };
    assert_eq!(swapped.steps.len(), interleaved_len);
    replay_legality(&swapped).unwrap();
}

#[test]
fn replay_is_deterministic_and_monotone() {
    let cert = generate_certificate(3, 5).unwrap();
    let oracle = enumerate_o(4, 3, 3).unwrap();
    let (a, ra) = replay(&cert, &oracle).unwrap();
    let (b, rb) = replay(&cert, &oracle).unwrap();
    assert_eq!(a, b);
    assert_eq!(ra, rb);
    assert!(ra.complete());
    assert_eq!(ra.verified_through, Some(4));

    let mut state = ComplexState::simplex(3, 5);
    let mut size = state.len();
    for step in &cert.steps {
        state.replay_step(step).unwrap();
        assert!(state.len() >= size);
        if step.kind == StepKind::Horn {
            assert_eq!(state.len(), size + 2);
        }
        size = state.len();
    }
    assert_eq!(state, a);
}

#[test]
fn caller_supplied_oracles() {
    let oracles: Vec<_> = (0..=2).map(|t| enumerate_o(3, t, 3).unwrap()).collect();
    let a = generate_certificate_with(&oracles, 4).unwrap();
    assert_eq!(a, generate_certificate(2, 4).unwrap());
    assert!(generate_certificate_with(&oracles, 1).is_err());
    assert!(generate_certificate_with(&oracles[..1], 5).is_err());
}

#[test]
fn empty_certificate_generates_the_point() {
    let cert = generate_certificate(0, 2).unwrap();
    assert!(cert.steps.is_empty());
    let oracle = enumerate_o(1, 0, 3).unwrap();
    let (state, report) = replay(&cert, &oracle).unwrap();
    assert!(report.complete());
    assert_eq!(state.level(0).iter().cloned().collect::<Vec<Chain>>(), vec![parse_chain("(0)", 0).unwrap()]);
}

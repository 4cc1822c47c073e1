mod common;

use common::{circ, circuit, nonzero_pauli, pp};
use pauliconj::circuit::{Circuit, Gate};
use pauliconj::decision::*;
use pauliconj::exactnum::ExactScalar;
use pauliconj::f2core::SymplecticVec;
use pauliconj::oracle::dense_pc;
use pauliconj::reductions::commute_to_enic;
use proptest::prelude::*;

fn one_qubit_circuits(max_len: usize) -> Vec<Circuit> {
    let gates = [Gate::X(1), Gate::Z(1), Gate::H(1), Gate::S(1), Gate::T(1)];
    let mut out = vec![Circuit::new(1)];
    let mut frontier = vec![Vec::<Gate>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &frontier {
            for g in gates {
                let mut s = seq.clone();
                s.push(g);
                out.push(Circuit::from_gates(1, s.clone()).unwrap());
                next.push(s);
            }
        }
        frontier = next;
    }
    out
}

fn value(r: &DecisionResult) -> ExactScalar {
    match &r.answer {
        Answer::Value(v) => v.clone(),
        Answer::Bool(_) => panic!("expected a value"),
    }
}

#[test]
fn small_worked_examples() {
    let empty = Circuit::new(1);
    let r = decide_enic(&empty).unwrap();
    assert!(!r.truth());
    assert_eq!(r.method, Method::CliffordExact);
    assert!(decide_enic(&circ("qubits 1\nS 1")).unwrap().truth());
    assert!(decide_commute(&circ("qubits 1\nZ 1"), &pp("Z")).unwrap().truth());
    assert!(!decide_commute(&circ("qubits 1\nX 1"), &pp("Z")).unwrap().truth());
    assert!(decide_support(&empty, &pp("Z")).unwrap().truth());
    assert!(!decide_support(&circ("qubits 1\nH 1"), &pp("Z")).unwrap().truth());
    assert_eq!(value(&conjugate_value(&empty, &pp("X")).unwrap()), ExactScalar::one());
    let t = conjugate_value(&circ("qubits 1\nT 1"), &pp("X")).unwrap();
    assert_eq!(value(&t), ExactScalar::inv_sqrt2_pow(1));
    assert_eq!(t.method, Method::Depth1Encoding);
    assert!(decide_commute(&empty, &SymplecticVec::zero(1)).is_err());
    assert!(decide_commute(&empty, &pp("XX")).is_err());
}

#[test]
fn t_eight_times_is_identity() {
    let c = circ("qubits 1\nT 1\nT 1\nT 1\nT 1\nT 1\nT 1\nT 1\nT 1");
    assert!(!decide_enic(&c).unwrap().truth());
    let r = decide_enic(&circ("qubits 1\nT 1\nH 1\nT 1")).unwrap();
    assert!(r.truth());
    assert_eq!(r.method, Method::Depth2Peel);
}

#[test]
fn exhaustive_one_qubit_sweep() {
    for c in one_qubit_circuits(5) {
        let enic = decide_enic(&c).unwrap();
        assert_eq!(enic.truth(), decide_enic_by_oracle(&c).unwrap().truth(), "{}", c.to_text());
        if c.t_depth() <= 2 {
            assert!(enic.method <= Method::Depth2Peel);
        }
        for x in ["X", "Y", "Z"] {
            let x = pp(x);
            let com = decide_commute(&c, &x).unwrap();
            assert_eq!(com.truth(), decide_commute_by_oracle(&c, &x).unwrap().truth(), "{} {x:?}", c.to_text());
            let v = value(&conjugate_value_by_oracle(&c, &x).unwrap());
            if c.t_depth() <= 3 {
                assert_eq!(value(&conjugate_value(&c, &x).unwrap()), v);
                assert_eq!(decide_support(&c, &x).unwrap().truth(), !v.is_zero());
            }
        }
    }
}

#[test]
fn budget_is_reported() {
    let c = circ("qubits 2\nH 1\nH 2\nT 1\nT 2\nCZ 1 2\nH 1\nH 2\nT 1\nT 2\nCZ 1 2\nH 1\nH 2\nT 1\nT 2\nCZ 1 2\nH 1\nH 2\nT 1\nT 2");
    let tight = DecisionOptions { max_chains: 2 };
    assert!(matches!(conjugate_value_with(&c, &pp("XI"), &tight), Err(pauliconj::Error::Budget(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deciders_match_oracle((c, x) in (2usize..=3).prop_flat_map(|n| (circuit(n, 14), nonzero_pauli(n)))) {
        prop_assume!(c.t_depth() <= 3);
        let enic = decide_enic(&c).unwrap();
        prop_assert_eq!(enic.truth(), decide_enic_by_oracle(&c).unwrap().truth());
        let com = decide_commute(&c, &x).unwrap();
        prop_assert_eq!(com.truth(), decide_commute_by_oracle(&c, &x).unwrap().truth());
        let expected = match c.t_depth() {
            0 => Method::CliffordExact,
            1 => Method::Depth1Encoding,
            2 => Method::Depth2Peel,
            _ => Method::Enumerative,
        };
        prop_assert_eq!(com.method, expected);
        let v = dense_pc(&c, &x).unwrap().coefficient(&x);
        prop_assert_eq!(value(&conjugate_value(&c, &x).unwrap()), v.clone());
        prop_assert_eq!(decide_support(&c, &x).unwrap().truth(), !v.is_zero());
    }

    #[test]
    fn enic_and_commute_are_consistent((c, x) in (1usize..=2).prop_flat_map(|n| (circuit(n, 10), nonzero_pauli(n)))) {
        // COMMUTE(C, x) holds exactly when U = Z₁C'†Z₁C' is the identity and V = S₁C'†S₁C' is not.
        let r = commute_to_enic(&c, &x).unwrap();
        let u = decide_enic(&r.u).unwrap().truth();
        let v = decide_enic(&r.v).unwrap().truth();
        prop_assert_eq!(pauliconj::reductions::CommuteToEnic::decide(u, v), decide_commute(&c, &x).unwrap().truth());
    }
}

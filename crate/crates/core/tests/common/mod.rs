#![allow(dead_code)]

use pauliconj::circuit::{Circuit, Gate};
use pauliconj::f2core::{F2Vec, SymplecticVec};
use proptest::prelude::*;

pub fn gate(n: usize) -> impl Strategy<Value = Gate> {
    let w = 1..=n;
    (0u8..6, w.clone(), w).prop_map(move |(k, a, b)| match k {
        0 => Gate::X(a),
        1 => Gate::Z(a),
        2 => Gate::H(a),
        3 => Gate::S(a),
        4 => Gate::T(a),
        _ if a != b => Gate::CZ(a, b),
        _ => Gate::H(a),
    })
}

pub fn circuit(n: usize, max_len: usize) -> impl Strategy<Value = Circuit> {
    prop::collection::vec(gate(n), 0..=max_len).prop_map(move |gs| Circuit::from_gates(n, gs).unwrap())
}

pub fn clifford(n: usize, max_len: usize) -> impl Strategy<Value = Circuit> {
    circuit(n, max_len).prop_map(|c| {
        let gs = c.gates().iter().copied().filter(|g| !g.is_t()).collect();
        Circuit::from_gates(c.qubits(), gs).unwrap()
    })
}

pub fn pauli(n: usize) -> impl Strategy<Value = SymplecticVec> {
    (prop::collection::vec(any::<bool>(), n), prop::collection::vec(any::<bool>(), n))
        .prop_map(|(z, x)| SymplecticVec::new(F2Vec::from_bools(&z), F2Vec::from_bools(&x)).unwrap())
}

pub fn nonzero_pauli(n: usize) -> impl Strategy<Value = SymplecticVec> {
    pauli(n).prop_filter("nonzero", |v| !v.is_zero())
}

pub fn circ(text: &str) -> Circuit {
    Circuit::parse(text).unwrap()
}

pub fn pp(s: &str) -> SymplecticVec {
    pauliconj::pauli::PhasedPauli::parse(s, None).unwrap().v
}

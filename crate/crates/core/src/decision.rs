//! Deciders for ENIC, COMMUTE and SUPPORT, and exact CONJUGATE values.
//!
//! ENIC is decided up to global phase: the answer is true when C is not
//! e^{iθ}·I for any θ.

use std::fmt;

use crate::circuit::{Circuit, Gate};
use crate::error::{dim, invalid, Result};
use crate::exactnum::ExactScalar;
use crate::f2core::SymplecticVec;
use crate::oracle::{dense, dense_pc, equal_up_to_phase};
use crate::pauli::{conjugate_pauli, CliffordTableau, PhasedPauli};
use crate::presentation::{coefficient, coefficient_depth1_fast, encode, Presentation, DEFAULT_BUDGET};
use crate::reductions::{enic_to_commute, teleport_correction};

/// Which path produced an answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    CliffordExact,
    Depth1Encoding,
    Depth2Peel,
    Enumerative,
    Oracle,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::CliffordExact => "clifford-exact",
            Method::Depth1Encoding => "depth1-encoding",
            Method::Depth2Peel => "depth2-peel",
            Method::Enumerative => "enumerative",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Bool(bool),
    Value(ExactScalar),
}

impl Answer {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Answer::Bool(b) => Some(*b),
            Answer::Value(_) => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Resources {
    pub qubits: usize,
    pub t_depth: usize,
    /// Sub-decisions issued (COMMUTE queries for ENIC, coefficient evaluations otherwise).
    pub subqueries: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionResult {
    pub answer: Answer,
    pub method: Method,
    pub resources: Resources,
}

impl DecisionResult {
    fn new(answer: Answer, method: Method, c: &Circuit, subqueries: usize) -> Self {
        DecisionResult {
            answer,
            method,
            resources: Resources { qubits: c.qubits(), t_depth: c.t_depth(), subqueries },
        }
    }

    /// The boolean answer; panics on a CONJUGATE value.
    pub fn truth(&self) -> bool {
        self.answer.as_bool().expect("decision result holds a boolean")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionOptions {
    /// Cap on enumerated branches in the coefficient engine.
    pub max_chains: u64,
}

impl Default for DecisionOptions {
    fn default() -> Self {
        DecisionOptions { max_chains: DEFAULT_BUDGET }
    }
}

fn check_index(c: &Circuit, x: &SymplecticVec) -> Result<()> {
    if x.n() != c.qubits() {
        return dim("Pauli width differs from circuit");
    }
    if x.is_zero() {
        return invalid("the Pauli index must be nonzero");
    }
    Ok(())
}

/// (D₁, D₂) with D₁ then D₂ equal to C and each of T-depth at most 1.
fn split_depth2(c: &Circuit) -> (Circuit, Circuit) {
    let d = c.layer_decompose();
    let n = c.qubits();
    let mut parts = [Circuit::new(n), Circuit::new(n)];
    for (j, cl) in d.cliffords.iter().enumerate() {
        let part = &mut parts[usize::from(j >= 2)];
        if j > 0 {
            part.add_all(d.order[j - 1].iter().map(|&w| Gate::T(w)));
        }
        part.add_all(cl.iter().copied());
    }
    let [d1, d2] = parts;
    (d1, d2)
}

/// ±2^{−m/2} at the outer vector of a depth-≤1 presentation.
fn outer_coefficient(p: &Presentation) -> Result<ExactScalar> {
    coefficient_depth1_fast(p, p.outer().0)
}

/// D₁ P^x D₁† = D₂† P^x D₂ for T-depth-≤1 D₁, D₂, exactly.
fn depth1_conjugates_equal(d1: &Circuit, d2_dagger: &Circuit, x: &SymplecticVec) -> Result<bool> {
    let a = teleport_correction(d1, x)?;
    let b = teleport_correction(d2_dagger, x)?;
    if CliffordTableau::from_circuit(&a)? != CliffordTableau::from_circuit(&b)? {
        return Ok(false);
    }
    // Equal up to phase; both are Hermitian, so the phase is ±1 and one coefficient settles it.
    let pa = encode(d1, x)?;
    let pb = encode(d2_dagger, x)?;
    let y = pa.outer().0.clone();
    Ok(outer_coefficient(&pa)? == coefficient_depth1_fast(&pb, &y)?)
}

/// COMMUTE: C P^x C† = P^x.
pub fn decide_commute(c: &Circuit, x: &SymplecticVec) -> Result<DecisionResult> {
    decide_commute_with(c, x, &DecisionOptions::default())
}

pub fn decide_commute_with(c: &Circuit, x: &SymplecticVec, opts: &DecisionOptions) -> Result<DecisionResult> {
    check_index(c, x)?;
    match c.t_depth() {
        0 => {
            let img = conjugate_pauli(&CliffordTableau::from_circuit(c)?, &PhasedPauli::new(x.clone(), 0))?;
            Ok(DecisionResult::new(Answer::Bool(img == PhasedPauli::new(x.clone(), 0)), Method::CliffordExact, c, 0))
        }
        d @ (1 | 2) => {
            let (d1, d2) = split_depth2(c);
            let same = depth1_conjugates_equal(&d1, &d2.dagger(), x)?;
            let method = if d == 1 { Method::Depth1Encoding } else { Method::Depth2Peel };
            Ok(DecisionResult::new(Answer::Bool(same), method, c, 2))
        }
        _ => {
            let v = coefficient(&encode(c, x)?, x, opts.max_chains)?;
            Ok(DecisionResult::new(Answer::Bool(v.is_one()), Method::Enumerative, c, 1))
        }
    }
}

/// ENIC: true when C is not the identity up to global phase.
pub fn decide_enic(c: &Circuit) -> Result<DecisionResult> {
    decide_enic_with(c, &DecisionOptions::default())
}

pub fn decide_enic_with(c: &Circuit, opts: &DecisionOptions) -> Result<DecisionResult> {
    let depth = c.t_depth();
    if depth == 0 {
        let id = CliffordTableau::from_circuit(c)?.is_identity();
        return Ok(DecisionResult::new(Answer::Bool(!id), Method::CliffordExact, c, 0));
    }
    // C ≡ I exactly when C fixes every generator Z_j, X_j under conjugation.
    let queries = enic_to_commute(c);
    let mut method = Method::CliffordExact;
    let mut issued = 0;
    for (d, e) in &queries {
        let r = decide_commute_with(d, e, opts)?;
        method = method.max(r.method);
        issued += 1;
        if !r.truth() {
            return Ok(DecisionResult::new(Answer::Bool(true), method, c, issued));
        }
    }
    Ok(DecisionResult::new(Answer::Bool(false), method, c, issued))
}

/// SUPPORT: ⟨C P^x C†, P^x⟩ ≠ 0.
pub fn decide_support(c: &Circuit, x: &SymplecticVec) -> Result<DecisionResult> {
    decide_support_with(c, x, &DecisionOptions::default())
}

pub fn decide_support_with(c: &Circuit, x: &SymplecticVec, opts: &DecisionOptions) -> Result<DecisionResult> {
    let (v, method) = value_and_method(c, x, opts)?;
    Ok(DecisionResult::new(Answer::Bool(!v.is_zero()), method, c, 1))
}

/// CONJUGATE: the exact value ⟨C P^x C†, P^x⟩.
pub fn conjugate_value(c: &Circuit, x: &SymplecticVec) -> Result<DecisionResult> {
    conjugate_value_with(c, x, &DecisionOptions::default())
}

pub fn conjugate_value_with(c: &Circuit, x: &SymplecticVec, opts: &DecisionOptions) -> Result<DecisionResult> {
    let (v, method) = value_and_method(c, x, opts)?;
    Ok(DecisionResult::new(Answer::Value(v), method, c, 1))
}

fn value_and_method(c: &Circuit, x: &SymplecticVec, opts: &DecisionOptions) -> Result<(ExactScalar, Method)> {
    check_index(c, x)?;
    match c.t_depth() {
        0 => {
            let img = conjugate_pauli(&CliffordTableau::from_circuit(c)?, &PhasedPauli::new(x.clone(), 0))?;
            let v = if img.v != *x {
                ExactScalar::zero()
            } else if img.tau() {
                ExactScalar::from_int(-1)
            } else {
                ExactScalar::one()
            };
            Ok((v, Method::CliffordExact))
        }
        1 => Ok((coefficient_depth1_fast(&encode(c, x)?, x)?, Method::Depth1Encoding)),
        _ => Ok((coefficient(&encode(c, x)?, x, opts.max_chains)?, Method::Enumerative)),
    }
}

/// ENIC by the dense oracle (n ≤ 10).
pub fn decide_enic_by_oracle(c: &Circuit) -> Result<DecisionResult> {
    let u = dense(c)?;
    let id = dense(&Circuit::new(c.qubits()))?;
    let same = equal_up_to_phase(&u, &id)?.is_some();
    Ok(DecisionResult::new(Answer::Bool(!same), Method::Oracle, c, 0))
}

/// COMMUTE by the dense oracle (n ≤ 10).
pub fn decide_commute_by_oracle(c: &Circuit, x: &SymplecticVec) -> Result<DecisionResult> {
    check_index(c, x)?;
    let v = dense_pc(c, x)?.coefficient(x);
    Ok(DecisionResult::new(Answer::Bool(v.is_one()), Method::Oracle, c, 0))
}

/// CONJUGATE by the dense oracle (n ≤ 10).
pub fn conjugate_value_by_oracle(c: &Circuit, x: &SymplecticVec) -> Result<DecisionResult> {
    check_index(c, x)?;
    let v = dense_pc(c, x)?.coefficient(x);
    Ok(DecisionResult::new(Answer::Value(v), Method::Oracle, c, 0))
}

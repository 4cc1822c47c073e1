//! Compilers for the gadgets and reductions: coefficient arithmetic on PC-circuits,
//! SUPPORT → ENIC, ENIC ↔ COMMUTE, the code embedding and the BINARY-WEIGHT pipeline.
//!
//! Gadgets report their output through ⟨U Z₁ U†, Z₁⟩, written "the Z₁ coefficient".

use std::fmt::{self, Write as _};

use num_bigint::BigInt;

use crate::circuit::{clifford_shift, Circuit, Gate};
use crate::coding::{wt_eval_real, OneRemainderMatrix, DEFAULT_RANK_BOUND};
use crate::error::{dim, invalid, Error, Result};
use crate::exactnum::{gb_from_value, vandermonde_inverse, vandermonde_inverse_row, vandermonde_node, GBRoot2Expr, QSqrt2, RealRoot2};
use crate::f2core::{F2Matrix, F2Vec, OrderedBasis, SymplecticVec};
use crate::pauli::{
    pauli_mover, synthesize_tableau, transport_pair, CliffordTableau, PhasedPauli,
};
use crate::presentation::{
    branching_coeff_d3, decode, encode, presentation_to_branching, Layer, Presentation, RhoCheck,
};

/// Which reduction produced an artifact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Product,
    Average,
    LinearCombination,
    Power,
    GbValue,
    SupportToEnic,
    EnicToCommute,
    CommuteToEnic,
    CodeEmbedding,
    BinaryWeight,
    TeleportCorrection,
}

impl Relation {
    pub fn tag(&self) -> &'static str {
        match self {
            Relation::Product => "product",
            Relation::Average => "average",
            Relation::LinearCombination => "linear-combination",
            Relation::Power => "power",
            Relation::GbValue => "gb-value",
            Relation::SupportToEnic => "support-to-enic",
            Relation::EnicToCommute => "enic-to-commute",
            Relation::CommuteToEnic => "commute-to-enic",
            Relation::CodeEmbedding => "code-embedding",
            Relation::BinaryWeight => "binary-weight",
            Relation::TeleportCorrection => "teleport-correction",
        }
    }

    pub fn from_tag(s: &str) -> Option<Relation> {
        use Relation::*;
        [Product, Average, LinearCombination, Power, GbValue, SupportToEnic, EnicToCommute, CommuteToEnic, CodeEmbedding, BinaryWeight, TeleportCorrection]
            .into_iter()
            .find(|r| r.tag() == s)
    }
}

/// A named exact value asserted by a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub label: String,
    pub value: RealRoot2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCertificate {
    pub relation: Relation,
    pub source: String,
    pub qubits: usize,
    pub t_depth: usize,
    /// Predicted Z₁ coefficient of the emitted circuit, when the relation has one.
    pub predicted: Option<RealRoot2>,
    pub claims: Vec<Claim>,
    pub notes: Vec<String>,
}

fn fmt_value(r: &RealRoot2) -> String {
    format!("{} {} {}", r.a(), r.b(), r.denom_exp())
}

fn parse_value(t: &[&str]) -> Option<RealRoot2> {
    if t.len() != 3 {
        return None;
    }
    Some(RealRoot2::new(t[0].parse().ok()?, t[1].parse().ok()?, t[2].parse().ok()?))
}

impl ReductionCertificate {
    fn new(relation: Relation, source: impl Into<String>, target: &Circuit) -> Self {
        ReductionCertificate {
            relation,
            source: source.into(),
            qubits: target.qubits(),
            t_depth: target.t_depth(),
            predicted: None,
            claims: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn claim(&mut self, label: impl Into<String>, value: RealRoot2) {
        self.claims.push(Claim { label: label.into(), value });
    }

    /// Line-oriented text; values are written as "a b l" for (a + b√2)/2^l.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "certificate {}", self.relation.tag());
        let _ = writeln!(s, "source {}", self.source);
        let _ = writeln!(s, "qubits {}", self.qubits);
        let _ = writeln!(s, "t-depth {}", self.t_depth);
        if let Some(p) = &self.predicted {
            let _ = writeln!(s, "predicted {}", fmt_value(p));
        }
        for c in &self.claims {
            let _ = writeln!(s, "claim {} {}", c.label, fmt_value(&c.value));
        }
        for n in &self.notes {
            let _ = writeln!(s, "note {n}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let mut cert: Option<ReductionCertificate> = None;
        for (i, line) in text.lines().enumerate() {
            let ln = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            if key == "certificate" {
                let relation = Relation::from_tag(rest.trim()).ok_or_else(|| perr(ln, "unknown relation"))?;
                cert = Some(ReductionCertificate {
                    relation,
                    source: String::new(),
                    qubits: 0,
                    t_depth: 0,
                    predicted: None,
                    claims: Vec::new(),
                    notes: Vec::new(),
                });
                continue;
            }
            let c = cert.as_mut().ok_or_else(|| perr(ln, "expected \"certificate <relation>\" first"))?;
            let toks: Vec<&str> = rest.split_whitespace().collect();
            match key {
                "source" => c.source = rest.to_string(),
                "qubits" => c.qubits = rest.trim().parse().map_err(|_| perr(ln, "bad qubit count"))?,
                "t-depth" => c.t_depth = rest.trim().parse().map_err(|_| perr(ln, "bad T-depth"))?,
                "predicted" => c.predicted = Some(parse_value(&toks).ok_or_else(|| perr(ln, "bad value"))?),
                "claim" => {
                    let (label, v) = toks.split_first().ok_or_else(|| perr(ln, "missing label"))?;
                    let value = parse_value(v).ok_or_else(|| perr(ln, "bad value"))?;
                    c.claims.push(Claim { label: label.to_string(), value });
                }
                "note" => c.notes.push(rest.to_string()),
                _ => return Err(perr(ln, "unknown certificate field")),
            }
        }
        cert.ok_or_else(|| perr(0, "empty certificate"))
    }
}

impl fmt::Display for ReductionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn z1(n: usize) -> SymplecticVec {
    SymplecticVec::e_z(n, 1)
}

fn y1_with(n: usize, extra_z: Option<usize>) -> SymplecticVec {
    let mut v = SymplecticVec::e_z(n, 1).xor(&SymplecticVec::e_x(n, 1));
    if let Some(w) = extra_z {
        v.xor_assign(&SymplecticVec::e_z(n, w));
    }
    v
}

fn need_nonzero(x: &SymplecticVec, n: usize) -> Result<()> {
    if x.n() != n {
        return dim("Pauli width differs from circuit");
    }
    if x.is_zero() {
        return invalid("the Pauli index must be nonzero");
    }
    Ok(())
}

/// B with ⟨B Z₁ B†, Z₁⟩ = ⟨C P^x C†, P^x⟩.
pub fn shift_to_z1(c: &Circuit, x: &SymplecticVec) -> Result<Circuit> {
    let n = c.qubits();
    need_nonzero(x, n)?;
    clifford_shift(c, x, x, &z1(n), &z1(n))
}

/// 2n-qubit U′ with Z₁ coefficient αβ.
pub fn product_gadget(c: &Circuit, d: &Circuit, x: &SymplecticVec) -> Result<Circuit> {
    let n = c.qubits();
    if d.qubits() != n {
        return dim("product gadget needs equal widths");
    }
    let cs = shift_to_z1(c, x)?;
    let ds = shift_to_z1(d, x)?;
    let both = Circuit::tensor(&cs, &ds);
    let zz = z1(2 * n).xor(&SymplecticVec::e_z(2 * n, n + 1));
    clifford_shift(&both, &zz, &zz, &z1(2 * n), &z1(2 * n))
}

/// (2n+1)-qubit U with Z₁ coefficient (α+β)/2 and T-depth at most d+2.
pub fn average_gadget(c: &Circuit, d: &Circuit, x: &SymplecticVec) -> Result<Circuit> {
    let n = c.qubits();
    if d.qubits() != n {
        return dim("average gadget needs equal widths");
    }
    let cs = shift_to_z1(c, x)?;
    let ds = shift_to_z1(d, x)?;

    // Q = G (C ⊗ I) F on n+1 wires commutes with Y₁ and has ⟨Q X₁ Q†, Z₁⟩ = α.
    let m = n + 1;
    let x1 = SymplecticVec::e_x(m, 1);
    let z1x = z1(m).xor(&SymplecticVec::e_x(m, m));
    let zm = SymplecticVec::e_z(m, m);
    let f = transport_pair(&x1, &y1_with(m, None), &z1x, &zm)?;
    let g = transport_pair(&z1x, &zm, &z1(m), &y1_with(m, None))?;
    let mut q = f;
    q.append(&cs.widened(m))?;
    q.append(&g)?;

    let w = 2 * n + 1;
    let v = Circuit::tensor(&q, &ds);
    let a = transport_pair(&SymplecticVec::e_x(w, 1), &y1_with(w, None), &SymplecticVec::e_x(w, 1), &y1_with(w, Some(n + 2)))?;
    let b = transport_pair(&z1(w), &y1_with(w, Some(n + 2)), &SymplecticVec::e_x(w, 1), &y1_with(w, None))?;

    let mut u = Circuit::new(w);
    u.add_all([Gate::H(1), Gate::T(1)]);
    u.append(&a)?;
    u.append(&v)?;
    u.append(&b)?;
    // S† rather than S: with T X T† = (X+Y)/√2 the S version yields −(α+β)/2.
    u.add_all([Gate::T(1), Gate::S(1), Gate::Z(1), Gate::H(1)]);
    Ok(u)
}

fn ceil_log2(k: usize) -> u32 {
    k.next_power_of_two().trailing_zeros()
}

/// Z₁ coefficient 2^{−⌈log₂ k⌉} Σ_s ⟨C_s P^x C_s†, P^x⟩.
pub fn linear_combination_gadget(cs: &[Circuit], x: &SymplecticVec) -> Result<Circuit> {
    let first = cs.first().ok_or_else(|| Error::Invalid("empty circuit list".into()))?;
    let n = first.qubits();
    if cs.iter().any(|c| c.qubits() != n) {
        return dim("linear combination needs equal widths");
    }
    let mut level = cs.iter().map(|c| shift_to_z1(c, x)).collect::<Result<Vec<_>>>()?;
    let pad = Circuit::from_gates(n, vec![Gate::H(1)])?;
    level.resize(cs.len().next_power_of_two(), pad);
    while level.len() > 1 {
        let w = level[0].qubits();
        level = level
            .chunks(2)
            .map(|p| average_gadget(&p[0], &p[1], &z1(w)))
            .collect::<Result<_>>()?;
    }
    Ok(level.pop().expect("one circuit remains"))
}

/// n-qubit circuit with a single T layer and Z₁ coefficient (−1)^negative · 2^{−k/2}.
pub fn power_circuit(n: usize, k: usize, negative: bool) -> Result<Circuit> {
    if k == 0 || k > n {
        return invalid(format!("power circuit needs 1 <= k <= n, got k={k}, n={n}"));
    }
    let mut c = Circuit::new(n);
    if negative {
        c.add(Gate::X(1));
    }
    let mut layer = Circuit::new(n);
    layer.add_all((1..=k).map(Gate::T));
    let xs = SymplecticVec::new(F2Vec::zeros(n), F2Vec::from_fn(n, |i| i < k))?;
    c.append(&shift_to_z1(&layer, &xs)?)?;
    Ok(c)
}

/// Circuit with Z₁ coefficient gb_value(e)/2^ℓ, together with ℓ.
pub fn gb_circuit(e: &GBRoot2Expr) -> Result<(Circuit, u32)> {
    let terms: Vec<usize> = e.mask.iter_ones().collect();
    if terms.is_empty() {
        return Ok((Circuit::from_gates(1, vec![Gate::H(1)])?, 0));
    }
    let half = e.len().div_ceil(2);
    let width = 2 * half;
    let parts = terms
        .iter()
        .map(|&j| power_circuit(width, width - j, e.signs.get(j)))
        .collect::<Result<Vec<_>>>()?;
    let c = linear_combination_gadget(&parts, &z1(width))?;
    Ok((c, half as u32 + ceil_log2(parts.len())))
}

fn ccz(c: &mut Circuit, a: usize, b: usize, t: usize) {
    // (−1)^{abt} = ω^{a+b+t − (a⊕b) − (a⊕t) − (b⊕t) + (a⊕b⊕t)}
    let tdg = [Gate::T(0), Gate::S(0), Gate::Z(0)];
    let phase = |c: &mut Circuit, w: usize, inverse: bool| {
        if inverse {
            c.add_all(tdg.iter().map(|g| g.map_wires(|_| w)));
        } else {
            c.add(Gate::T(w));
        }
    };
    phase(c, a, false);
    phase(c, b, false);
    phase(c, t, false);
    for (x, y) in [(a, b), (a, t), (b, t)] {
        c.cnot(x, y);
        phase(c, y, true);
        c.cnot(x, y);
    }
    c.cnot(a, t);
    c.cnot(b, t);
    phase(c, t, false);
    c.cnot(b, t);
    c.cnot(a, t);
}

fn toffoli(c: &mut Circuit, a: usize, b: usize, t: usize) {
    c.add(Gate::H(t));
    ccz(c, a, b, t);
    c.add(Gate::H(t));
}

/// Multi-controlled Z on `controls ∪ {target}` using clean ancillas, which are
/// returned to |0⟩. Needs `controls.len() - 2` ancillas when there are more than two controls.
///
/// Controls are ANDed pairwise into ancillas, one tree level at a time with the
/// Toffolis of a level run in parallel, so the T-depth is
/// [`MCZ_STAGE_T_DEPTH`] · (2⌈log₂ m⌉ − 1) for m ≥ 2 controls.
pub fn append_mcz(c: &mut Circuit, controls: &[usize], target: usize, ancillas: &[usize]) -> Result<()> {
    let need = controls.len().saturating_sub(2);
    if ancillas.len() < need {
        return invalid(format!("{} controls need {need} ancillas", controls.len()));
    }
    let n = c.qubits();
    let mut live = controls.to_vec();
    let mut free = ancillas.iter().copied();
    let mut levels: Vec<Circuit> = Vec::new();
    while live.len() > 2 {
        let mut next = Vec::with_capacity(live.len().div_ceil(2));
        let mut parts = Vec::new();
        for pair in live.chunks(2) {
            match *pair {
                [a, b] => {
                    let t = free.next().expect("ancilla count checked above");
                    let mut part = Circuit::new(n);
                    toffoli(&mut part, a, b, t);
                    parts.push(part);
                    next.push(t);
                }
                [a] => next.push(a),
                _ => unreachable!(),
            }
        }
        let level = Circuit::parallel(n, &parts)?;
        c.append(&level)?;
        levels.push(level);
        live = next;
    }
    match *live.as_slice() {
        [] => c.add(Gate::Z(target)),
        [a] => c.add(Gate::CZ(a, target)),
        [a, b] => ccz(c, a, b, target),
        _ => unreachable!(),
    }
    // Toffoli layers are self-inverse, so replaying them in reverse order uncomputes.
    for level in levels.iter().rev() {
        c.append(level)?;
    }
    Ok(())
}

/// T-depth constant: each CCZ stage costs at most this many T layers.
pub const MCZ_STAGE_T_DEPTH: usize = 5;

/// Z on wire m+1 controlled by wires 1..m; ancillas are wires m+2.. .
pub fn mcz_log_depth(m: usize) -> Result<Circuit> {
    if m == 0 {
        return invalid("at least one control is required");
    }
    let anc = m.saturating_sub(2);
    let mut c = Circuit::new(m + 1 + anc);
    let controls: Vec<usize> = (1..=m).collect();
    let ancillas: Vec<usize> = (m + 2..m + 2 + anc).collect();
    append_mcz(&mut c, &controls, m + 1, &ancillas)?;
    Ok(c)
}

/// F on data wires 1..n followed by 2n register wires and the MCZ ancillas.
#[derive(Clone, Debug)]
pub struct SupportToEnic {
    pub circuit: Circuit,
    pub data: usize,
    /// D from the construction; F = D, M, D† in time order.
    pub entangler: Circuit,
}

impl SupportToEnic {
    pub fn ancillas(&self) -> usize {
        self.circuit.qubits() - self.data
    }
}

/// With ancillas in |0⟩, F acts as the identity on every data state exactly when
/// ⟨C, P^z⟩ = 0.
pub fn support_to_enic(c: &Circuit, z: &SymplecticVec) -> Result<SupportToEnic> {
    let n = c.qubits();
    need_nonzero(z, n)?;
    let g = pauli_mover(z, &SymplecticVec::all_x(n))?;
    let mut shifted = g.dagger();
    shifted.append(c)?;
    shifted.append(&g)?;

    let reg = 3 * n;
    let extra = (2 * n).saturating_sub(2);
    let total = reg + extra;
    let mut r = Circuit::new(total);
    for i in (1..=n).rev() {
        r.add(Gate::CZ(i, n + i));
    }
    for i in 1..=n {
        r.add_all([Gate::H(i), Gate::S(i), Gate::H(i)]);
    }
    for i in (1..=n).rev() {
        r.add(Gate::CZ(i, 2 * n + i));
    }
    r.add_all((n + 1..=reg).map(Gate::H));

    let mut d = r.dagger();
    d.append(&shifted.widened(total))?;
    d.append(&r)?;

    let mut f = d.clone();
    let controls: Vec<usize> = (n + 1..=reg).collect();
    let ancillas: Vec<usize> = (reg + 1..=total).collect();
    append_mcz(&mut f, &controls, 1, &ancillas)?;
    f.append(&d.dagger())?;
    Ok(SupportToEnic { circuit: f, data: n, entangler: d })
}

/// The 2n COMMUTE queries whose conjunction decides D ≡ I.
pub fn enic_to_commute(d: &Circuit) -> Vec<(Circuit, SymplecticVec)> {
    let n = d.qubits();
    (1..=n)
        .map(|j| SymplecticVec::e_z(n, j))
        .chain((1..=n).map(|j| SymplecticVec::e_x(n, j)))
        .map(|e| (d.clone(), e))
        .collect()
}

/// U = C Z₁ C† Z₁ and V = C S₁ C† S₁ after shifting x to Z₁.
#[derive(Clone, Debug)]
pub struct CommuteToEnic {
    pub u: Circuit,
    pub v: Circuit,
}

impl CommuteToEnic {
    /// C P^x C† = P^x from the two ENIC answers (true = not identity up to phase).
    pub fn decide(u_is_nonidentity: bool, v_is_nonidentity: bool) -> bool {
        !u_is_nonidentity && v_is_nonidentity
    }
}

pub fn commute_to_enic(c: &Circuit, x: &SymplecticVec) -> Result<CommuteToEnic> {
    let cs = shift_to_z1(c, x)?;
    let n = cs.qubits();
    let build = |g: Gate| -> Result<Circuit> {
        let mut u = Circuit::new(n);
        u.add(g);
        u.append(&cs.dagger())?;
        u.add(g);
        u.append(&cs)?;
        Ok(u)
    };
    Ok(CommuteToEnic { u: build(Gate::Z(1))?, v: build(Gate::S(1))? })
}

/// Λ = ((E_Z, 0), (E_X, 0), (u, 1), (X^{⊗n}, 0)) with u the rows of G as Z-type vectors.
///
/// With ZX = iY the support chains through W_u ⊕ y₀ pick up (−1)^{|v|}; setting every
/// sign on u to 1 adds (−1)^{|c|} for v = cG, and |v| ≡ |c| mod 2 for a 1-remainder G,
/// so the phase function vanishes.
pub fn code_to_presentation(g: &OneRemainderMatrix) -> Result<Presentation> {
    let gen = g.generator();
    let n = gen.ncols();
    let u: Vec<SymplecticVec> = gen.rows().iter().map(|r| SymplecticVec::new(r.clone(), F2Vec::zeros(n))).collect::<Result<_>>()?;
    let k = u.len();
    let layers = vec![
        Layer::new(OrderedBasis::new_isotropic(n, u)?, F2Vec::from_fn(k, |_| true))?,
        Layer::unsigned(OrderedBasis::standard_x(n, 1..=n))?,
        Layer::unsigned(OrderedBasis::standard_z(n, 1..=n))?,
    ];
    Presentation::new(n, layers, SymplecticVec::all_x(n), false)
}

/// wt_V(1/√2) / (2^{n/2} √|V|) from the weight distribution.
pub fn code_embedding_value(g: &OneRemainderMatrix) -> Result<RealRoot2> {
    let code = g.code();
    let dist = code.weight_distribution(DEFAULT_RANK_BOUND)?;
    let wt = wt_eval_real(&dist, &RealRoot2::inv_sqrt2());
    Ok(&wt * &RealRoot2::inv_sqrt2_pow((g.len() + code.rank()) as u32))
}

/// ⟨U^Λ, X^{⊗n}⟩ of the embedded code through the depth-3 branching formula.
pub fn code_embedding_coefficient(g: &OneRemainderMatrix) -> Result<RealRoot2> {
    code_embedding_coefficient_checked(g, RhoCheck::Trusted)
}

/// [`code_embedding_coefficient`] with a choice of how the phase function is verified.
pub fn code_embedding_coefficient_checked(g: &OneRemainderMatrix, check: RhoCheck) -> Result<RealRoot2> {
    let p = code_to_presentation(g)?;
    let b = presentation_to_branching(&p, check)?;
    let y = p.outer().0.to_f2();
    branching_coeff_d3(&b, &y, &y)
}

/// T-depth-3 circuit on n wires with Z₁ coefficient equal to [`code_embedding_value`].
pub fn code_embedding_circuit(g: &OneRemainderMatrix) -> Result<(Circuit, ReductionCertificate)> {
    let p = code_to_presentation(g)?;
    let y0 = p.outer().0.clone();
    let d = decode(&p, &y0)?;
    let n = d.qubits();
    let c = clifford_shift(&d, &y0, &y0, &z1(n), &z1(n))?;
    let mut cert = ReductionCertificate::new(Relation::CodeEmbedding, format!("1-remainder k={} r={} s={} n={}", g.k(), g.r(), g.s(), n), &c);
    let value = code_embedding_coefficient(g)?;
    cert.claim("z1-coefficient", value.clone());
    cert.predicted = Some(value);
    Ok((c, cert))
}

/// The evaluator interface used by [`recover_distribution_1mod4`]: wt_X(1/√2) for a 1-remainder code X.
pub type WtEvaluator<'a> = dyn FnMut(&OneRemainderMatrix) -> Result<RealRoot2> + 'a;

/// wt_X(1/√2) by enumeration.
pub fn evaluate_by_enumeration(g: &OneRemainderMatrix) -> Result<RealRoot2> {
    let dist = g.code().weight_distribution(DEFAULT_RANK_BOUND)?;
    Ok(wt_eval_real(&dist, &RealRoot2::inv_sqrt2()))
}

/// wt_X(1/√2) = κ · 2^{(n+k)/2} with κ from the code presentation.
pub fn evaluate_by_presentation(g: &OneRemainderMatrix) -> Result<RealRoot2> {
    let kappa = code_embedding_coefficient(g)?;
    Ok(&kappa * &RealRoot2::sqrt2_pow((g.len() + g.k()) as u32))
}

/// Weight distribution of the code generated by P from 1-remainder evaluations only.
pub fn recover_distribution_1mod4(p: &F2Matrix, evaluator: &mut WtEvaluator<'_>) -> Result<Vec<u64>> {
    let k = p.nrows();
    let n = p.ncols();
    if k == 0 {
        return dim("P needs at least one row");
    }
    let m = k / 4 + 1;
    let len = k + 4 * m * n;
    let mut gammas = Vec::with_capacity(len + 1);
    for i in 0..=len {
        let l = 4 * i + 1;
        let g = OneRemainderMatrix::build(p.clone(), l, 4 * m * l)?;
        gammas.push(evaluator(&g)?.to_qsqrt2());
    }
    let nodes: Vec<QSqrt2> = (0..=len).map(vandermonde_node).collect();
    let inv = vandermonde_inverse(&nodes)?;
    let mut a = Vec::with_capacity(len + 1);
    for row in &inv {
        let v = row.iter().zip(&gammas).fold(QSqrt2::zero(), |acc, (d, g)| acc.add(&d.mul(g)));
        let q = v.as_rational().filter(|q| q.is_integer()).ok_or_else(|| {
            Error::Internal("recovered weight count is not an integer; the evaluator is inconsistent".into())
        })?;
        let c: BigInt = q.to_integer();
        a.push(u64::try_from(c).map_err(|_| Error::Internal("negative weight count".into()))?);
    }
    let mult = 1u64 << (k - p.rank());
    (0..=n)
        .map(|i| {
            let s: u64 = (0..=k).map(|r| a[r + 4 * i * m]).sum();
            if !s.is_multiple_of(mult) {
                return Err(Error::Internal("weight count not divisible by the kernel size".into()));
            }
            Ok(s / mult)
        })
        .collect()
}

/// Precomputed code circuits for the BINARY-WEIGHT pipeline of one generator.
#[derive(Clone, Debug)]
pub struct BinaryWeightPipeline {
    g: OneRemainderMatrix,
    n: usize,
    k: usize,
    /// (circuit with Z₁ coefficient κ_j, κ_j, code length n_j) for the (4j+1)-fold repeat.
    parts: Vec<(Circuit, RealRoot2, usize)>,
}

impl BinaryWeightPipeline {
    pub fn new(g: &OneRemainderMatrix) -> Result<Self> {
        let n = g.len();
        let k = g.code().rank();
        let mut parts = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let gj = g.scaled(4 * j + 1)?;
            let (c, cert) = code_embedding_circuit(&gj)?;
            let kappa = cert.predicted.expect("code embedding predicts a value");
            parts.push((c, kappa, gj.len()));
        }
        Ok(BinaryWeightPipeline { g: g.clone(), n, k, parts })
    }

    /// γ_{4j+1} = wt_V(α^{4j+1}) recovered from κ_j.
    pub fn gamma(&self, j: usize) -> RealRoot2 {
        let (_, kappa, nj) = &self.parts[j];
        kappa * &RealRoot2::sqrt2_pow((nj + self.k) as u32)
    }

    /// F with Z₁ coefficient β·b_t / 2^L, and the certificate recording every step.
    pub fn circuit_for(&self, t: usize) -> Result<(Circuit, ReductionCertificate)> {
        let source = format!("binary-weight n={} k={} t={t}", self.n, self.k);
        if t > self.n {
            let c = Circuit::from_gates(1, vec![Gate::H(1)])?;
            let mut cert = ReductionCertificate::new(Relation::BinaryWeight, source, &c);
            cert.predicted = Some(RealRoot2::zero());
            cert.notes.push("t exceeds the code length".into());
            return Ok((c, cert));
        }
        let row = vandermonde_inverse_row(self.n, t)?;
        let mut scaled: Vec<(Circuit, i64)> = Vec::with_capacity(self.n + 1);
        let mut claims: Vec<Claim> = Vec::new();
        let mut sum_terms: Vec<RealRoot2> = Vec::new();
        for (j, coeff) in row.iter().enumerate() {
            let (code_c, kappa, nj) = &self.parts[j];
            claims.push(Claim { label: format!("kappa[{j}]"), value: kappa.clone() });
            claims.push(Claim { label: format!("beta-d[{t},{j}]"), value: coeff.clone() });
            let l = coeff.denom_exp() as i64;
            let integral = RealRoot2::new(coeff.a().clone(), coeff.b().clone(), 0);
            let (gbc, ell) = gb_circuit(&gb_from_value(&integral)?)?;
            let w = code_c.qubits().max(gbc.qubits());
            let prod = product_gadget(&code_c.widened(w), &gbc.widened(w), &z1(w))?;
            // Z₁ coefficient κ_j (a + b√2) 2^{−ℓ} = γ_j · coeff · 2^{−h/2}, h = n_j + k + 2ℓ − 2l.
            let h = (nj + self.k) as i64 + 2 * ell as i64 - 2 * l;
            sum_terms.push(&(kappa * &integral) * &RealRoot2::one().scale_pow2(-(ell as i64)));
            scaled.push((prod, h));
        }
        let top = scaled.iter().map(|(_, h)| *h).max().unwrap_or(0);
        let mut aligned = Vec::with_capacity(scaled.len());
        for (j, (c, h)) in scaled.into_iter().enumerate() {
            let gap = (top - h) as usize;
            let c = if gap == 0 {
                c
            } else {
                let w = c.qubits().max(gap);
                let pw = power_circuit(w, gap, false)?;
                sum_terms[j] = &sum_terms[j] * &RealRoot2::inv_sqrt2_pow(gap as u32);
                product_gadget(&c.widened(w), &pw, &z1(w))?
            };
            aligned.push(c);
        }
        let width = aligned.iter().map(Circuit::qubits).max().unwrap_or(1);
        let aligned: Vec<Circuit> = aligned.into_iter().map(|c| c.widened(width)).collect();
        let f = linear_combination_gadget(&aligned, &z1(width))?;
        let shrink = ceil_log2(aligned.len());
        let predicted = sum_terms
            .iter()
            .fold(RealRoot2::zero(), |acc, t| &acc + t)
            .scale_pow2(-(shrink as i64));
        let mut cert = ReductionCertificate::new(Relation::BinaryWeight, source, &f);
        cert.claims = claims;
        cert.claim("scale-exponent-half", RealRoot2::from_int(top + 2 * shrink as i64));
        cert.predicted = Some(predicted);
        cert.notes.push(format!("generator k={} r={} s={}", self.g.k(), self.g.r(), self.g.s()));
        Ok((f, cert))
    }
}

/// One-shot form of [`BinaryWeightPipeline`].
pub fn binary_weight_to_circuit(g: &OneRemainderMatrix, t: usize) -> Result<(Circuit, ReductionCertificate)> {
    if t > g.len() {
        let c = Circuit::from_gates(1, vec![Gate::H(1)])?;
        let mut cert = ReductionCertificate::new(Relation::BinaryWeight, format!("binary-weight n={} t={t}", g.len()), &c);
        cert.predicted = Some(RealRoot2::zero());
        return Ok((c, cert));
    }
    BinaryWeightPipeline::new(g)?.circuit_for(t)
}

/// C P^x C† as a circuit (C†, P^x, C in time order), up to global phase.
pub fn conjugation_circuit(c: &Circuit, x: &SymplecticVec) -> Result<Circuit> {
    let n = c.qubits();
    if x.n() != n {
        return dim("Pauli width differs from circuit");
    }
    let mut u = c.dagger();
    for w in 1..=n {
        if x.z.get(w - 1) {
            u.add(Gate::Z(w));
        }
        if x.x.get(w - 1) {
            u.add(Gate::X(w));
        }
    }
    u.append(c)?;
    Ok(u)
}

/// BINARY-WEIGHT through SUPPORT to ENIC: the data block of F is the identity
/// exactly when b_t = 0.
pub fn binary_weight_to_enic(g: &OneRemainderMatrix, t: usize) -> Result<(SupportToEnic, ReductionCertificate)> {
    let (f, bw) = binary_weight_to_circuit(g, t)?;
    let z = z1(f.qubits());
    let red = support_to_enic(&conjugation_circuit(&f, &z)?, &z)?;
    let mut cert = ReductionCertificate::new(Relation::SupportToEnic, bw.source.clone(), &red.circuit);
    cert.claims = bw.claims;
    cert.predicted = bw.predicted;
    cert.notes.push(format!("support instance: {} qubits, T-depth {}", f.qubits(), f.t_depth()));
    Ok((red, cert))
}

/// Canonical Clifford circuit of F P^x F† for F of T-depth at most 1.
pub fn teleport_correction(f: &Circuit, x: &SymplecticVec) -> Result<Circuit> {
    let n = f.qubits();
    if x.n() != n {
        return dim("Pauli width differs from circuit");
    }
    if f.t_depth() > 1 {
        return invalid("teleport correction needs T-depth at most 1");
    }
    let p = encode(f, x)?;
    let (y, tau) = p.outer();
    // U = Π_s (I − i(−1)^{σ_s} P^{x_s})/√2 · (−1)^τ P^y with x_s ranging over anticommuting basis vectors.
    let mut rotations: Vec<PhasedPauli> = Vec::new();
    if let Some(layer) = p.layers().first() {
        for (s, v) in layer.basis.vectors().iter().enumerate() {
            if crate::f2core::symplectic_form(v, y)? {
                rotations.push(PhasedPauli::signed(v.clone(), layer.signs.get(s)));
            }
        }
    }
    let conj = |q: &PhasedPauli| -> PhasedPauli {
        let mut q = q.clone();
        if crate::f2core::symplectic_form(&q.v, y).unwrap_or(false) {
            q = q.negated();
        }
        for r in &rotations {
            if crate::f2core::symplectic_form(&q.v, &r.v).unwrap_or(false) {
                // (I − i s R) Q (I + i s R) / 2 = −i s R Q
                q = r.mul(&q).mul(&PhasedPauli::new(SymplecticVec::zero(n), 3));
            }
        }
        q
    };
    let _ = tau;
    let zs = (1..=n).map(|j| conj(&PhasedPauli::new(SymplecticVec::e_z(n, j), 0))).collect();
    let xs = (1..=n).map(|j| conj(&PhasedPauli::new(SymplecticVec::e_x(n, j), 0))).collect();
    Ok(synthesize_tableau(&CliffordTableau::from_images(zs, xs)?))
}

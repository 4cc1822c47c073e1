//! Clifford+T circuits over {X, Z, H, S, CZ, T}, their text format and T-layering.

use std::fmt;

use crate::error::{dim, invalid, Error, Result};
use crate::f2core::{F2Vec, SymplecticVec};
use crate::pauli::{self, PhasedPauli};

/// A gate on 1-based wires.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Gate {
    X(usize),
    Z(usize),
    H(usize),
    S(usize),
    T(usize),
    CZ(usize, usize),
}

impl Gate {
    pub fn mnemonic(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::T(_) => "T",
            Gate::CZ(..) => "CZ",
        }
    }

    pub fn is_t(&self) -> bool {
        matches!(self, Gate::T(_))
    }

    pub fn wires(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::X(w) | Gate::Z(w) | Gate::H(w) | Gate::S(w) | Gate::T(w) => (w, None),
            Gate::CZ(a, b) => (a, Some(b)),
        }
    }

    pub fn touches(&self, w: usize) -> bool {
        let (a, b) = self.wires();
        a == w || b == Some(w)
    }

    /// Same gate with wires renamed by `f`.
    pub fn map_wires(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::X(w) => Gate::X(f(w)),
            Gate::Z(w) => Gate::Z(f(w)),
            Gate::H(w) => Gate::H(f(w)),
            Gate::S(w) => Gate::S(f(w)),
            Gate::T(w) => Gate::T(f(w)),
            Gate::CZ(a, b) => Gate::CZ(f(a), f(b)),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let (a, b) = self.wires();
        for w in std::iter::once(a).chain(b) {
            if w == 0 || w > n {
                return Err(Error::Wire { wire: w, qubits: n });
            }
        }
        if b == Some(a) {
            return Err(Error::Invalid(format!("CZ on a repeated wire {a}")));
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.wires() {
            (a, None) => write!(f, "{} {}", self.mnemonic(), a),
            (a, Some(b)) => write!(f, "{} {} {}", self.mnemonic(), a, b),
        }
    }
}

/// An n-qubit circuit; gates are listed in time order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit { n, gates: Vec::new() }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.check(n)?;
        }
        Ok(Circuit { n, gates })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.check(self.n)?;
        self.gates.push(g);
        Ok(())
    }

    /// Push without validation; wires are the caller's responsibility.
    pub(crate) fn add(&mut self, g: Gate) {
        debug_assert!(g.check(self.n).is_ok(), "{g} on {} qubits", self.n);
        self.gates.push(g);
    }

    pub(crate) fn add_all(&mut self, gs: impl IntoIterator<Item = Gate>) {
        for g in gs {
            self.add(g);
        }
    }

    /// CNOT realized as H_t · CZ · H_t.
    pub fn cnot(&mut self, c: usize, t: usize) {
        self.add(Gate::H(t));
        self.add(Gate::CZ(c, t));
        self.add(Gate::H(t));
    }

    /// Append `other` (same width) after this circuit.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n > self.n {
            return Err(Error::Dimension(format!("appending a {}-qubit circuit to {} qubits", other.n, self.n)));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// Append `other` with wire w mapped to `map[w-1]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) {
        for g in &other.gates {
            self.add(g.map_wires(|w| map[w - 1]));
        }
    }

    /// Append `other` with wires shifted by `offset`.
    pub fn append_shifted(&mut self, other: &Circuit, offset: usize) {
        for g in &other.gates {
            self.add(g.map_wires(|w| w + offset));
        }
    }

    /// Same gates on a wider register.
    pub fn widened(&self, n: usize) -> Circuit {
        assert!(n >= self.n);
        Circuit { n, gates: self.gates.clone() }
    }

    /// A on wires 1..n_A and B on the next n_B wires, with the T layers of
    /// both interleaved so the T-depth is the larger of the two.
    pub fn tensor(a: &Circuit, b: &Circuit) -> Circuit {
        let da = a.layer_decompose();
        let db = b.layer_decompose();
        let mut c = Circuit::new(a.n + b.n);
        for j in 0..=da.depth().max(db.depth()) {
            if j > 0 {
                if let Some(o) = da.order.get(j - 1) {
                    c.add_all(o.iter().map(|&w| Gate::T(w)));
                }
                if let Some(o) = db.order.get(j - 1) {
                    c.add_all(o.iter().map(|&w| Gate::T(w + a.n)));
                }
            }
            if let Some(g) = da.cliffords.get(j) {
                c.add_all(g.iter().copied());
            }
            if let Some(g) = db.cliffords.get(j) {
                c.add_all(g.iter().map(|g| g.map_wires(|w| w + a.n)));
            }
        }
        c
    }

    /// Circuits of equal width with pairwise disjoint supports, merged so that
    /// their T layers line up.
    pub fn parallel(n: usize, parts: &[Circuit]) -> Result<Circuit> {
        let mut used = vec![false; n];
        for p in parts {
            if p.n != n {
                return dim("parallel parts must share the register width");
            }
            let mut mine = vec![false; n];
            for g in &p.gates {
                let (a, b) = g.wires();
                for w in std::iter::once(a).chain(b) {
                    mine[w - 1] = true;
                }
            }
            if mine.iter().zip(&used).any(|(m, u)| *m && *u) {
                return invalid("parallel parts overlap");
            }
            for (u, m) in used.iter_mut().zip(mine) {
                *u |= m;
            }
        }
        let ds: Vec<LayerDecomposition> = parts.iter().map(Circuit::layer_decompose).collect();
        let depth = ds.iter().map(LayerDecomposition::depth).max().unwrap_or(0);
        let mut c = Circuit::new(n);
        for j in 0..=depth {
            if j > 0 {
                for d in &ds {
                    if let Some(o) = d.order.get(j - 1) {
                        c.add_all(o.iter().map(|&w| Gate::T(w)));
                    }
                }
            }
            for d in &ds {
                if let Some(g) = d.cliffords.get(j) {
                    c.add_all(g.iter().copied());
                }
            }
        }
        Ok(c)
    }

    pub fn then(&self, other: &Circuit) -> Circuit {
        let mut c = self.widened(self.n.max(other.n));
        c.gates.extend_from_slice(&other.gates);
        c
    }

    pub fn is_clifford(&self) -> bool {
        !self.gates.iter().any(Gate::is_t)
    }

    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_t()).count()
    }

    pub fn t_depth(&self) -> usize {
        self.layer_decompose().depth()
    }

    /// Greedy left packing of T gates into parallel layers.
    pub fn layer_decompose(&self) -> LayerDecomposition {
        let mut cliffords: Vec<Vec<Gate>> = vec![Vec::new()];
        let mut layers: Vec<F2Vec> = Vec::new();
        let mut order: Vec<Vec<usize>> = Vec::new();
        let mut dirty = F2Vec::zeros(self.n);
        for g in &self.gates {
            match *g {
                Gate::T(w) => {
                    let i = w - 1;
                    let joins = match layers.last() {
                        Some(l) => !l.get(i) && !dirty.get(i),
                        None => false,
                    };
                    if joins {
                        layers.last_mut().unwrap().set(i, true);
                        order.last_mut().unwrap().push(w);
                    } else {
                        layers.push(F2Vec::unit(self.n, i));
                        order.push(vec![w]);
                        cliffords.push(Vec::new());
                        dirty = F2Vec::zeros(self.n);
                    }
                }
                _ => {
                    let (a, b) = g.wires();
                    if !layers.is_empty() {
                        dirty.set(a - 1, true);
                        if let Some(b) = b {
                            dirty.set(b - 1, true);
                        }
                    }
                    cliffords.last_mut().unwrap().push(*g);
                }
            }
        }
        LayerDecomposition { n: self.n, cliffords, layers, order }
    }

    /// Exact inverse: S⁻¹ = S·Z, T⁻¹ = T·S·Z. Works layer by layer so the
    /// T-depth never grows.
    pub fn dagger(&self) -> Circuit {
        fn undo(c: &mut Circuit, seg: &[Gate]) {
            for g in seg.iter().rev() {
                match *g {
                    Gate::S(w) => c.add_all([Gate::S(w), Gate::Z(w)]),
                    other => c.add(other),
                }
            }
        }
        let d = self.layer_decompose();
        let mut c = Circuit::new(self.n);
        for j in (0..d.depth()).rev() {
            undo(&mut c, &d.cliffords[j + 1]);
            let wires = &d.order[j];
            c.add_all(wires.iter().rev().map(|&w| Gate::T(w)));
            c.add_all(wires.iter().rev().flat_map(|&w| [Gate::S(w), Gate::Z(w)]));
        }
        undo(&mut c, &d.cliffords[0]);
        c
    }

    pub fn parse(text: &str) -> Result<Circuit> {
        let mut n: Option<usize> = None;
        let mut gates = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            let num = |s: &str| s.parse::<usize>().map_err(|_| perr(format!("expected a number, found {s:?}")));
            let Some(q) = n else {
                if toks.len() != 2 || toks[0] != "qubits" {
                    return Err(perr("first line must be \"qubits <n>\"".into()));
                }
                n = Some(num(toks[1])?);
                continue;
            };
            let arity = if toks[0] == "CZ" { 3 } else { 2 };
            if toks.len() != arity {
                return Err(perr(format!("wrong number of operands for {}", toks[0])));
            }
            let w = num(toks[1])?;
            let g = match toks[0] {
                "X" => Gate::X(w),
                "Z" => Gate::Z(w),
                "H" => Gate::H(w),
                "S" => Gate::S(w),
                "T" => Gate::T(w),
                "CZ" => Gate::CZ(w, num(toks[2])?),
                other => return Err(perr(format!("unknown gate {other:?}"))),
            };
            g.check(q).map_err(|e| perr(e.to_string()))?;
            gates.push(g);
        }
        let n = n.ok_or(Error::Parse { line: 0, msg: "missing \"qubits <n>\" header".into() })?;
        Ok(Circuit { n, gates })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\n", self.n);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A_0, T_1, A_1, …, T_d, A_d in time order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerDecomposition {
    pub n: usize,
    /// Clifford segments A_0..A_d.
    pub cliffords: Vec<Vec<Gate>>,
    /// T layers as wire masks (0-based bits).
    pub layers: Vec<F2Vec>,
    /// Wires of each layer in the order the gates appeared.
    pub order: Vec<Vec<usize>>,
}

impl LayerDecomposition {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Reassemble into a single circuit (T layers in their original gate order).
    pub fn recompose(&self) -> Circuit {
        let mut c = Circuit::new(self.n);
        c.add_all(self.cliffords[0].iter().copied());
        for (j, o) in self.order.iter().enumerate() {
            c.add_all(o.iter().map(|&w| Gate::T(w)));
            c.add_all(self.cliffords[j + 1].iter().copied());
        }
        c
    }
}

/// B with ⟨B P^{x'} B†, P^{y'}⟩ = ⟨A P^x A†, P^y⟩, built as F ; A ; G in time order
/// where F P^{x'} F† = P^x and G P^y G† = P^{y'}.
pub fn clifford_shift(
    a: &Circuit,
    x: &SymplecticVec,
    y: &SymplecticVec,
    xp: &SymplecticVec,
    yp: &SymplecticVec,
) -> Result<Circuit> {
    let n = a.qubits();
    for v in [x, y, xp, yp] {
        if v.n() != n {
            return Err(Error::Dimension("shift vectors must match the circuit width".into()));
        }
    }
    if x.is_zero() != xp.is_zero() || y.is_zero() != yp.is_zero() {
        return Err(Error::Invalid("a shift cannot move between the zero vector and a nonzero one".into()));
    }
    let mut b = Circuit::new(n);
    if x != xp {
        b.append(&pauli::pauli_mover(xp, x)?)?;
    }
    b.append(a)?;
    if y != yp {
        b.append(&pauli::pauli_mover(y, yp)?)?;
    }
    Ok(b)
}

/// Conjugate a signed Pauli through every gate of a Clifford circuit.
pub fn conjugate_through(c: &Circuit, p: &PhasedPauli) -> Result<PhasedPauli> {
    let mut q = p.clone();
    for g in c.gates() {
        q.update_by_gate(g)?;
    }
    Ok(q)
}

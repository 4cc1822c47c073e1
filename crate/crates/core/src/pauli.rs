//! Phased Paulis i^k P^v, Clifford tableaux and Clifford synthesis.
//!
//! P^v for v = (a | b) is ⊗_j i^{a_j b_j} X^{b_j} Z^{a_j}, so (1|1) is Y.

use std::fmt;

use crate::circuit::{Circuit, Gate};
use crate::error::{dim, invalid, Error, Result};
use crate::f2core::{sform, F2Vec, OrderedBasis, SymplecticVec};

/// The product convention fixed against the dense oracle:
/// P^u P^v = i^{[u,v]} P^{u⊕v} whenever no wire pairs a Y in one factor with
/// an X or Z in the other. In general the exact exponent is [`product_phase`].
pub const BRACKET_MULTIPLIES_LEFT_TO_RIGHT: bool = true;

/// [u, v] = u_Z·v_X − v_Z·u_X over the integers.
pub fn bracket(u: &SymplecticVec, v: &SymplecticVec) -> Result<i64> {
    if u.n() != v.n() {
        return dim("bracket of vectors with different n");
    }
    Ok(u.z.and_count(&v.x) as i64 - v.z.and_count(&u.x) as i64)
}

/// e with P^u P^v = i^e P^{u⊕v}, reduced mod 4.
pub fn product_phase(u: &SymplecticVec, v: &SymplecticVec) -> u8 {
    let w = u.xor(v);
    let e = u.y_count() + v.y_count() + 3 * w.y_count() + 2 * u.z.and_count(&v.x);
    (e % 4) as u8
}

/// i^phase P^v.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PhasedPauli {
    pub v: SymplecticVec,
    pub phase: u8,
}

impl PhasedPauli {
    pub fn new(v: SymplecticVec, phase: u8) -> Self {
        PhasedPauli { v, phase: phase % 4 }
    }

    /// (−1)^tau P^v.
    pub fn signed(v: SymplecticVec, tau: bool) -> Self {
        PhasedPauli { v, phase: if tau { 2 } else { 0 } }
    }

    pub fn identity(n: usize) -> Self {
        PhasedPauli { v: SymplecticVec::zero(n), phase: 0 }
    }

    pub fn n(&self) -> usize {
        self.v.n()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// Sign bit of a Hermitian Pauli.
    pub fn tau(&self) -> bool {
        debug_assert!(self.is_hermitian());
        self.phase == 2
    }

    pub fn mul(&self, o: &PhasedPauli) -> PhasedPauli {
        let e = product_phase(&self.v, &o.v);
        PhasedPauli::new(self.v.xor(&o.v), self.phase + o.phase + e)
    }

    pub fn negated(&self) -> PhasedPauli {
        PhasedPauli::new(self.v.clone(), self.phase + 2)
    }

    /// In-place conjugation g p g† by a Clifford gate.
    pub fn update_by_gate(&mut self, g: &Gate) -> Result<()> {
        let n = self.n();
        let (a, b) = g.wires();
        if a == 0 || a > n || b.is_some_and(|b| b == 0 || b > n) {
            return Err(Error::Wire { wire: if a == 0 || a > n { a } else { b.unwrap() }, qubits: n });
        }
        self.apply(g)
    }

    #[inline]
    pub(crate) fn apply(&mut self, g: &Gate) -> Result<()> {
        let v = &mut self.v;
        match *g {
            Gate::H(w) => {
                let i = w - 1;
                let (za, xb) = (v.z.get(i), v.x.get(i));
                v.z.set(i, xb);
                v.x.set(i, za);
                if za && xb {
                    self.phase = (self.phase + 2) % 4;
                }
            }
            Gate::S(w) => {
                let i = w - 1;
                let (za, xb) = (v.z.get(i), v.x.get(i));
                v.z.set(i, za ^ xb);
                if za && xb {
                    self.phase = (self.phase + 2) % 4;
                }
            }
            Gate::Z(w) => {
                if v.x.get(w - 1) {
                    self.phase = (self.phase + 2) % 4;
                }
            }
            Gate::X(w) => {
                if v.z.get(w - 1) {
                    self.phase = (self.phase + 2) % 4;
                }
            }
            Gate::CZ(w1, w2) => {
                let (i, j) = (w1 - 1, w2 - 1);
                let (za, xb) = (v.z.get(i), v.x.get(i));
                let (zc, xd) = (v.z.get(j), v.x.get(j));
                v.z.set(i, za ^ xd);
                v.z.set(j, zc ^ xb);
                if xb && xd && (za ^ zc) {
                    self.phase = (self.phase + 2) % 4;
                }
            }
            Gate::T(_) => return Err(Error::NonClifford),
        }
        Ok(())
    }

    /// Parse "-ZXY", "+XI", "a|b" bit form, or sparse "X1Z3" (which needs `n`).
    pub fn parse(text: &str, n: Option<usize>) -> Result<PhasedPauli> {
        let t = text.trim();
        let perr = |m: &str| Error::Parse { line: 0, msg: format!("{m}: {text:?}") };
        let (phase, body) = if let Some(r) = t.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = t.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = t.strip_prefix('-') {
            (2, r)
        } else if let Some(r) = t.strip_prefix('+') {
            (0, r)
        } else {
            (0, t)
        };
        if let Some((a, b)) = body.split_once('|') {
            let z = F2Vec::parse(a).map_err(|_| perr("bad z bits"))?;
            let x = F2Vec::parse(b).map_err(|_| perr("bad x bits"))?;
            let v = SymplecticVec::new(z, x).map_err(|_| perr("parts differ in length"))?;
            if n.is_some_and(|n| n != v.n()) {
                return Err(perr("wrong number of qubits"));
            }
            return Ok(PhasedPauli::new(v, phase));
        }
        if body.chars().any(|c| c.is_ascii_digit()) {
            let n = n.ok_or_else(|| perr("sparse Pauli needs the qubit count"))?;
            let mut v = SymplecticVec::zero(n);
            let mut extra = 0u8;
            let chars: Vec<char> = body.chars().collect();
            let mut k = 0;
            while k < chars.len() {
                let letter = chars[k];
                k += 1;
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let w: usize = chars[start..k].iter().collect::<String>().parse().map_err(|_| perr("missing wire"))?;
                if w == 0 || w > n {
                    return Err(perr("wire out of range"));
                }
                let mut single = SymplecticVec::zero(n);
                single.set_letter(w - 1, letter_code(letter).ok_or_else(|| perr("bad letter"))?);
                extra = (extra + product_phase(&v, &single)) % 4;
                v.xor_assign(&single);
            }
            return Ok(PhasedPauli::new(v, phase + extra));
        }
        let letters: Vec<u8> = body.chars().map(letter_code).collect::<Option<_>>().ok_or_else(|| perr("bad letter"))?;
        if n.is_some_and(|n| n != letters.len()) {
            return Err(perr("wrong number of qubits"));
        }
        let mut v = SymplecticVec::zero(letters.len());
        for (i, l) in letters.into_iter().enumerate() {
            v.set_letter(i, l);
        }
        Ok(PhasedPauli::new(v, phase))
    }
}

fn letter_code(c: char) -> Option<u8> {
    match c {
        'I' => Some(0),
        'Z' => Some(1),
        'X' => Some(2),
        'Y' => Some(3),
        _ => None,
    }
}

impl fmt::Display for PhasedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{}{}", p, self.v.letters())
    }
}

impl fmt::Debug for PhasedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// (−1)^{θ_x(v)} P^v = Π_j P^{s_j x_j} in basis order, v = ⊕ s_j x_j.
pub fn theta(x: &OrderedBasis, v: &SymplecticVec) -> Result<bool> {
    let s = x.coordinates(v).ok_or(Error::NotInSpan)?;
    Ok(theta_of(x, &s))
}

/// θ from known coordinates.
pub(crate) fn theta_of(x: &OrderedBasis, s: &F2Vec) -> bool {
    let mut acc = PhasedPauli::identity(x.n());
    for j in s.iter_ones() {
        acc = acc.mul(&PhasedPauli::new(x.vectors()[j].clone(), 0));
    }
    debug_assert!(acc.phase.is_multiple_of(2), "isotropic products are Hermitian");
    acc.phase == 2
}

/// Signed images of Z_j and X_j under conjugation U · U†.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CliffordTableau {
    n: usize,
    z_images: Vec<PhasedPauli>,
    x_images: Vec<PhasedPauli>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        CliffordTableau {
            n,
            z_images: (1..=n).map(|j| PhasedPauli::new(SymplecticVec::e_z(n, j), 0)).collect(),
            x_images: (1..=n).map(|j| PhasedPauli::new(SymplecticVec::e_x(n, j), 0)).collect(),
        }
    }

    pub fn from_circuit(c: &Circuit) -> Result<Self> {
        let mut t = CliffordTableau::identity(c.qubits());
        for g in c.gates() {
            t.apply_gate(g)?;
        }
        Ok(t)
    }

    /// Conjugate every image by one more gate.
    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        for p in self.z_images.iter_mut().chain(self.x_images.iter_mut()) {
            p.update_by_gate(g)?;
        }
        Ok(())
    }

    /// Tableau from explicit images; they must satisfy the Pauli commutation relations.
    pub fn from_images(z_images: Vec<PhasedPauli>, x_images: Vec<PhasedPauli>) -> Result<Self> {
        let n = z_images.len();
        if x_images.len() != n || z_images.iter().chain(&x_images).any(|p| p.n() != n) {
            return dim("tableau images have inconsistent sizes");
        }
        if z_images.iter().chain(&x_images).any(|p| !p.is_hermitian()) {
            return invalid("tableau images must be Hermitian");
        }
        for i in 0..n {
            for j in 0..n {
                let ok = !sform(&z_images[i].v, &z_images[j].v)
                    && !sform(&x_images[i].v, &x_images[j].v)
                    && sform(&z_images[i].v, &x_images[j].v) == (i == j);
                if !ok {
                    return invalid("tableau images violate the commutation relations");
                }
            }
        }
        Ok(CliffordTableau { n, z_images, x_images })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn z_image(&self, j: usize) -> &PhasedPauli {
        &self.z_images[j - 1]
    }

    pub fn x_image(&self, j: usize) -> &PhasedPauli {
        &self.x_images[j - 1]
    }

    pub fn is_identity(&self) -> bool {
        *self == CliffordTableau::identity(self.n)
    }

    /// Tableau of "self, then other" in time order.
    pub fn then(&self, other: &CliffordTableau) -> Result<Self> {
        let z = self.z_images.iter().map(|p| conjugate_pauli(other, p)).collect::<Result<_>>()?;
        let x = self.x_images.iter().map(|p| conjugate_pauli(other, p)).collect::<Result<_>>()?;
        Ok(CliffordTableau { n: self.n, z_images: z, x_images: x })
    }
}

/// U P U† from the generator images of U.
pub fn conjugate_pauli(t: &CliffordTableau, p: &PhasedPauli) -> Result<PhasedPauli> {
    if p.n() != t.n {
        return dim("Pauli and tableau have different n");
    }
    conjugate_any(t, p)
}

/// Like [`conjugate_pauli`] but also for non-Hermitian inputs.
pub(crate) fn conjugate_any(t: &CliffordTableau, p: &PhasedPauli) -> Result<PhasedPauli> {
    let n = t.n;
    let mut acc = PhasedPauli::new(SymplecticVec::zero(n), p.phase + (p.v.y_count() % 4) as u8);
    for j in 0..n {
        if p.v.x.get(j) {
            acc = acc.mul(&t.x_images[j]);
        }
        if p.v.z.get(j) {
            acc = acc.mul(&t.z_images[j]);
        }
    }
    Ok(acc)
}

pub fn tableau_from_circuit(c: &Circuit) -> Result<CliffordTableau> {
    CliffordTableau::from_circuit(c)
}

/// Records gates while conjugating a working set of Paulis by them.
struct Reducer {
    n: usize,
    gates: Vec<Gate>,
    paulis: Vec<PhasedPauli>,
}

impl Reducer {
    fn new(n: usize, paulis: Vec<PhasedPauli>) -> Self {
        Reducer { n, gates: Vec::new(), paulis }
    }

    fn gate(&mut self, g: Gate) {
        for p in &mut self.paulis {
            p.apply(&g).expect("Clifford gate");
        }
        self.gates.push(g);
    }

    fn cnot(&mut self, c: usize, t: usize) {
        self.gate(Gate::H(t));
        self.gate(Gate::CZ(c, t));
        self.gate(Gate::H(t));
    }

    /// Make every non-identity letter of `paulis[k]` on wires ≥ `from` an X.
    fn make_x_letters(&mut self, k: usize, from: usize) -> Vec<usize> {
        let sup: Vec<usize> = self.paulis[k].v.support().into_iter().filter(|&i| i + 1 >= from).collect();
        for &i in &sup {
            match self.paulis[k].v.letter(i) {
                1 => self.gate(Gate::H(i + 1)),
                3 => self.gate(Gate::S(i + 1)),
                _ => {}
            }
        }
        sup.into_iter().map(|i| i + 1).collect()
    }

    /// Reduce the part of `paulis[k]` on wires ≥ j to ±Z_j.
    fn localize_z(&mut self, k: usize, j: usize) -> Result<()> {
        let sup = self.make_x_letters(k, j);
        if sup.is_empty() {
            return invalid("vectors are linearly dependent");
        }
        let p = if sup.contains(&j) { j } else { sup[0] };
        for &w in &sup {
            if w != p {
                self.cnot(p, w);
            }
        }
        if p != j {
            self.cnot(p, j);
            self.cnot(j, p);
        }
        self.gate(Gate::H(j));
        Ok(())
    }

    /// With paulis[kz] = ±Z_j, reduce paulis[kx] (anticommuting, trivial on wires < j) to ±X_j.
    fn localize_x(&mut self, kx: usize, j: usize) {
        if self.paulis[kx].v.letter(j - 1) == 3 {
            self.gate(Gate::S(j));
        }
        let sup = self.make_x_letters(kx, j + 1);
        for w in sup {
            self.cnot(j, w);
        }
    }

    fn into_circuit(self) -> Circuit {
        let mut c = Circuit::new(self.n);
        c.add_all(self.gates);
        c
    }
}

/// C with C Z_j C† = (−1)^{ξ_j} P^{x_j} for each listed pair (in order).
pub fn synthesize_from_images(n: usize, pairs: &[(SymplecticVec, bool)]) -> Result<Circuit> {
    if pairs.len() > n || pairs.iter().any(|(v, _)| v.n() != n) {
        return dim("image list does not fit the register");
    }
    for i in 0..pairs.len() {
        if pairs[i].0.is_zero() {
            return invalid("zero vector cannot be a generator image");
        }
        if !(pairs.iter().all(|p| p.0.x.is_zero()) || pairs.iter().all(|p| p.0.z.is_zero())) {
            for j in i + 1..pairs.len() {
                if sform(&pairs[i].0, &pairs[j].0) {
                    return invalid("images do not span an isotropic subspace");
                }
            }
        }
    }
    let mut r = Reducer::new(n, pairs.iter().map(|(v, _)| PhasedPauli::new(v.clone(), 0)).collect());
    for (k, (_, xi)) in pairs.iter().enumerate() {
        let j = k + 1;
        r.localize_z(k, j)?;
        let earlier: Vec<usize> = r.paulis[k].v.z.iter_ones().map(|i| i + 1).filter(|&w| w < j).collect();
        for i in earlier {
            r.cnot(i, j);
        }
        debug_assert_eq!(r.paulis[k].v, SymplecticVec::e_z(n, j));
        if r.paulis[k].tau() != *xi {
            r.gate(Gate::X(j));
        }
    }
    Ok(r.into_circuit().dagger())
}

/// Canonical circuit determined by the tableau alone.
pub fn synthesize_tableau(t: &CliffordTableau) -> Circuit {
    let n = t.n;
    let mut paulis = t.z_images.clone();
    paulis.extend(t.x_images.iter().cloned());
    let mut r = Reducer::new(n, paulis);
    for j in 1..=n {
        r.localize_z(j - 1, j).expect("tableau images are independent");
        r.localize_x(n + j - 1, j);
        if r.paulis[j - 1].tau() {
            r.gate(Gate::X(j));
        }
        if r.paulis[n + j - 1].tau() {
            r.gate(Gate::Z(j));
        }
    }
    r.into_circuit().dagger()
}

/// Deterministic normal form of a Clifford circuit, up to global phase.
pub fn canonical_clifford(c: &Circuit) -> Result<Circuit> {
    if !c.is_clifford() {
        return Err(Error::NonClifford);
    }
    Ok(synthesize_tableau(&CliffordTableau::from_circuit(c)?))
}

/// D with D P^x D† = Z_1 and D P^y D† = X_1 for an anticommuting pair.
fn pair_to_standard(x: &SymplecticVec, y: &SymplecticVec) -> Result<Circuit> {
    let n = x.n();
    if y.n() != n {
        return dim("pair vectors have different n");
    }
    if !sform(x, y) {
        return invalid("transport needs an anticommuting pair");
    }
    let mut r = Reducer::new(n, vec![PhasedPauli::new(x.clone(), 0), PhasedPauli::new(y.clone(), 0)]);
    r.localize_z(0, 1)?;
    r.localize_x(1, 1);
    if r.paulis[0].tau() {
        r.gate(Gate::X(1));
    }
    if r.paulis[1].tau() {
        r.gate(Gate::Z(1));
    }
    Ok(r.into_circuit())
}

/// F with F P^{x0} F† = P^{x1} and F P^{y0} F† = P^{y1}, signs included.
pub fn transport_pair(x0: &SymplecticVec, y0: &SymplecticVec, x1: &SymplecticVec, y1: &SymplecticVec) -> Result<Circuit> {
    let d0 = pair_to_standard(x0, y0)?;
    let d1 = pair_to_standard(x1, y1)?;
    let mut f = d0;
    f.append(&d1.dagger())?;
    Ok(f)
}

/// G with G P^from G† = P^to exactly, for nonzero vectors.
pub fn pauli_mover(from: &SymplecticVec, to: &SymplecticVec) -> Result<Circuit> {
    let n = from.n();
    let cf = synthesize_from_images(n, &[(from.clone(), false)])?;
    let ct = synthesize_from_images(n, &[(to.clone(), false)])?;
    let mut g = cf.dagger();
    g.append(&ct)?;
    Ok(g)
}

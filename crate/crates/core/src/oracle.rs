//! Dense exact unitaries and state vectors, the ground truth at small n.
//!
//! Wire 1 is the most significant bit of a basis index. Circuits read left to
//! right as time, so dense(C₁ then C₂) = dense(C₂)·dense(C₁).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::circuit::{Circuit, Gate};
use crate::error::{dim, Error, Result};
use crate::exactnum::ExactScalar;
use crate::f2core::SymplecticVec;
use crate::pauli::PhasedPauli;

pub const MAX_ORACLE_QUBITS: usize = 10;

type Amp = [BigInt; 4];

fn amp_zero() -> Amp {
    Default::default()
}

fn amp_is_zero(a: &Amp) -> bool {
    a.iter().all(|x| x.is_zero())
}

fn rot(a: &Amp, j: u32) -> Amp {
    let mut r = a.clone();
    for _ in 0..(j % 8) {
        r = [-r[3].clone(), r[0].clone(), r[1].clone(), r[2].clone()];
    }
    r
}


/// Amplitudes sharing one denominator √2^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    n: usize,
    k: u32,
    amps: Vec<Amp>,
}

impl StateVector {
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n > MAX_ORACLE_QUBITS {
            return Err(Error::OracleBound(n, MAX_ORACLE_QUBITS));
        }
        let mut amps = vec![amp_zero(); 1 << n];
        amps[index][0] = BigInt::from(1);
        Ok(StateVector { n, k: 0, amps })
    }

    /// From explicit amplitudes (normalization is the caller's concern).
    pub fn from_amplitudes(n: usize, amps: &[ExactScalar]) -> Result<Self> {
        if amps.len() != 1 << n {
            return dim("amplitude count is not 2^n");
        }
        let k = amps.iter().map(|a| a.denom_exp()).max().unwrap_or(0);
        let mut out = Vec::with_capacity(amps.len());
        for a in amps {
            let mut c = a.coeffs().clone();
            let mut d = k - a.denom_exp();
            while d > 0 {
                c = [&c[1] - &c[3], &c[0] + &c[2], &c[1] + &c[3], &c[2] - &c[0]];
                d -= 1;
            }
            out.push(c);
        }
        let mut s = StateVector { n, k, amps: out };
        s.reduce();
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitude(&self, i: usize) -> ExactScalar {
        ExactScalar::new(self.amps[i].clone(), self.k)
    }

    pub fn amplitudes(&self) -> Vec<ExactScalar> {
        (0..self.amps.len()).map(|i| self.amplitude(i)).collect()
    }

    fn bit(&self, w: usize) -> usize {
        1 << (self.n - w)
    }

    fn reduce(&mut self) {
        while self.k > 0
            && self.amps.iter().all(|c| (&c[0] - &c[2]) % 2 == BigInt::zero() && (&c[1] - &c[3]) % 2 == BigInt::zero())
        {
            let two = BigInt::from(2);
            for c in self.amps.iter_mut() {
                *c = [(&c[1] - &c[3]) / &two, (&c[0] + &c[2]) / &two, (&c[1] + &c[3]) / &two, (&c[2] - &c[0]) / &two];
            }
            self.k -= 1;
        }
        if self.amps.iter().all(amp_is_zero) {
            self.k = 0;
        }
    }

    pub fn apply_gate(&mut self, g: &Gate) {
        let dim = self.amps.len();
        match *g {
            Gate::X(w) => {
                let b = self.bit(w);
                for i in 0..dim {
                    if i & b == 0 {
                        self.amps.swap(i, i | b);
                    }
                }
            }
            Gate::Z(w) => self.phase_where(self.bit(w), 4),
            Gate::S(w) => self.phase_where(self.bit(w), 2),
            Gate::T(w) => self.phase_where(self.bit(w), 1),
            Gate::CZ(a, b) => self.phase_where(self.bit(a) | self.bit(b), 4),
            Gate::H(w) => {
                let b = self.bit(w);
                for i in 0..dim {
                    if i & b == 0 {
                        let x = self.amps[i].clone();
                        let y = self.amps[i | b].clone();
                        self.amps[i] = [&x[0] + &y[0], &x[1] + &y[1], &x[2] + &y[2], &x[3] + &y[3]];
                        self.amps[i | b] = [&x[0] - &y[0], &x[1] - &y[1], &x[2] - &y[2], &x[3] - &y[3]];
                    }
                }
                self.k += 1;
                self.reduce();
            }
        }
    }

    fn phase_where(&mut self, mask: usize, j: u32) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a = rot(a, j);
            }
        }
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.qubits() != self.n {
            return dim("circuit and state have different widths");
        }
        for g in c.gates() {
            self.apply_gate(g);
        }
        Ok(())
    }

    /// i^phase P^v applied exactly: P^v|c⟩ = i^{|a∧b|} (−1)^{a·c} |c ⊕ b⟩.
    pub fn apply_pauli(&mut self, p: &PhasedPauli) -> Result<()> {
        if p.n() != self.n {
            return dim("Pauli and state have different widths");
        }
        let (amask, bmask) = masks(&p.v);
        let base = (p.phase as u32 + p.v.y_count() as u32) % 4;
        let mut out = vec![amp_zero(); self.amps.len()];
        for (c, a) in self.amps.iter().enumerate() {
            let sign = ((c & amask).count_ones() % 2) * 2;
            out[c ^ bmask] = rot(a, 2 * (base + sign));
        }
        self.amps = out;
        Ok(())
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for i in 0..self.amps.len() {
            if amp_is_zero(&self.amps[i]) || amp_is_zero(&other.amps[i]) {
                continue;
            }
            acc = &acc + &(&self.amplitude(i).conj() * &other.amplitude(i));
        }
        acc
    }

    pub fn norm_sqr(&self) -> ExactScalar {
        self.inner(self)
    }

    /// self = λ·other for some λ; returns λ = ⟨other|self⟩ (both unit vectors).
    pub fn proportional_to(&self, other: &StateVector) -> Option<ExactScalar> {
        let i = (0..other.amps.len()).find(|&i| !amp_is_zero(&other.amps[i]))?;
        let (si, oi) = (self.amplitude(i), other.amplitude(i));
        for j in 0..self.amps.len() {
            if &self.amplitude(j) * &oi != &si * &other.amplitude(j) {
                return None;
            }
        }
        Some(other.inner(self))
    }

    /// s·|ψ⟩.
    pub fn scaled(&self, s: &ExactScalar) -> StateVector {
        let amps: Vec<ExactScalar> = (0..self.amps.len()).map(|i| &self.amplitude(i) * s).collect();
        StateVector::from_amplitudes(self.n, &amps).expect("same length")
    }

    pub fn sub(&self, other: &StateVector) -> Result<StateVector> {
        let amps: Vec<ExactScalar> = (0..self.amps.len()).map(|i| &self.amplitude(i) - &other.amplitude(i)).collect();
        StateVector::from_amplitudes(self.n, &amps)
    }
}

fn masks(v: &SymplecticVec) -> (usize, usize) {
    let n = v.n();
    let mut a = 0usize;
    let mut b = 0usize;
    for i in 0..n {
        if v.z.get(i) {
            a |= 1 << (n - 1 - i);
        }
        if v.x.get(i) {
            b |= 1 << (n - 1 - i);
        }
    }
    (a, b)
}

/// A unitary stored column by column: column c is U|c⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseUnitary {
    n: usize,
    cols: Vec<StateVector>,
}

impl DenseUnitary {
    pub fn identity(n: usize) -> Result<Self> {
        let cols = (0..1usize << n).map(|c| StateVector::basis(n, c)).collect::<Result<_>>()?;
        Ok(DenseUnitary { n, cols })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Entry ⟨r|U|c⟩.
    pub fn entry(&self, r: usize, c: usize) -> ExactScalar {
        self.cols[c].amplitude(r)
    }

    pub fn column(&self, c: usize) -> &StateVector {
        &self.cols[c]
    }

    /// Left-multiply by the circuit's unitary.
    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        for col in &mut self.cols {
            col.apply_circuit(c)?;
        }
        Ok(())
    }

    /// Left-multiply by i^phase P^v.
    pub fn apply_pauli(&mut self, p: &PhasedPauli) -> Result<()> {
        for col in &mut self.cols {
            col.apply_pauli(p)?;
        }
        Ok(())
    }

    pub fn from_pauli(p: &PhasedPauli) -> Result<Self> {
        let mut u = DenseUnitary::identity(p.n())?;
        u.apply_pauli(p)?;
        Ok(u)
    }

    /// Matrix product self·other.
    pub fn matmul(&self, other: &DenseUnitary) -> Result<DenseUnitary> {
        if self.n != other.n {
            return dim("matrix product of different sizes");
        }
        let d = self.dim();
        let mut cols = Vec::with_capacity(d);
        for c in 0..d {
            let mut col = vec![ExactScalar::zero(); d];
            for (k, ok) in other.cols[c].amplitudes().into_iter().enumerate() {
                if ok.is_zero() {
                    continue;
                }
                for (r, slot) in col.iter_mut().enumerate() {
                    let e = self.entry(r, k);
                    if !e.is_zero() {
                        *slot = &*slot + &(&e * &ok);
                    }
                }
            }
            cols.push(StateVector::from_amplitudes(self.n, &col)?);
        }
        Ok(DenseUnitary { n: self.n, cols })
    }

    pub fn adjoint(&self) -> Result<DenseUnitary> {
        let d = self.dim();
        let cols = (0..d)
            .map(|c| {
                let col: Vec<ExactScalar> = (0..d).map(|r| self.entry(c, r).conj()).collect();
                StateVector::from_amplitudes(self.n, &col)
            })
            .collect::<Result<_>>()?;
        Ok(DenseUnitary { n: self.n, cols })
    }

    pub fn is_unitary(&self) -> Result<bool> {
        let p = self.adjoint()?.matmul(self)?;
        Ok(p == DenseUnitary::identity(self.n)?)
    }

    /// ⟨U, P^z⟩ = tr(P^z† U)/2^n.
    pub fn coefficient(&self, z: &SymplecticVec) -> ExactScalar {
        let (amask, bmask) = masks(z);
        let yc = z.y_count() as u32;
        let mut acc = ExactScalar::zero();
        for c in 0..self.dim() {
            let e = self.entry(c ^ bmask, c);
            if e.is_zero() {
                continue;
            }
            // conj(i^{yc} (−1)^{a·c}) = i^{−yc} (−1)^{a·c}
            let sign = ((c & amask).count_ones() % 2) * 2;
            let j = (4 - yc % 4 + sign) % 4;
            acc = &acc + &e.mul_omega(2 * j);
        }
        acc.div_sqrt2_pow(2 * self.n as u32)
    }
}

/// dense(C) for n ≤ 10.
pub fn dense(c: &Circuit) -> Result<DenseUnitary> {
    if c.qubits() > MAX_ORACLE_QUBITS {
        return Err(Error::OracleBound(c.qubits(), MAX_ORACLE_QUBITS));
    }
    let mut u = DenseUnitary::identity(c.qubits())?;
    u.apply_circuit(c)?;
    Ok(u)
}

/// dense(C P^x C†).
pub fn dense_pc(c: &Circuit, x: &SymplecticVec) -> Result<DenseUnitary> {
    let mut u = dense(&c.dagger())?;
    u.apply_pauli(&PhasedPauli::new(x.clone(), 0))?;
    u.apply_circuit(c)?;
    Ok(u)
}

/// All nonzero coefficients, keyed by vector; n ≤ 7.
pub fn pauli_expansion(u: &DenseUnitary) -> Result<BTreeMap<SymplecticVec, ExactScalar>> {
    let n = u.n();
    if n > 7 {
        return Err(Error::OracleBound(n, 7));
    }
    let mut out = BTreeMap::new();
    for bits in 0..(1usize << (2 * n)) {
        let v = vec_from_index(n, bits);
        let c = u.coefficient(&v);
        if !c.is_zero() {
            out.insert(v, c);
        }
    }
    Ok(out)
}

/// Vector whose low n bits are the x part and high n bits the z part.
pub fn vec_from_index(n: usize, bits: usize) -> SymplecticVec {
    let mut v = SymplecticVec::zero(n);
    for i in 0..n {
        v.x.set(i, (bits >> i) & 1 == 1);
        v.z.set(i, (bits >> (n + i)) & 1 == 1);
    }
    v
}

/// Some(λ) with U = λ V when U·V† is scalar.
pub fn equal_up_to_phase(u: &DenseUnitary, v: &DenseUnitary) -> Result<Option<ExactScalar>> {
    let m = u.matmul(&v.adjoint()?)?;
    let d = m.dim();
    let lambda = m.entry(0, 0);
    for c in 0..d {
        for r in 0..d {
            let e = m.entry(r, c);
            if (r == c && e != lambda) || (r != c && !e.is_zero()) {
                return Ok(None);
            }
        }
    }
    Ok(Some(lambda))
}

/// F_corr · F · P^x |ψ⟩ ∝ F|ψ⟩ with F_corr = F P^x F†.
pub fn teleport_check(f: &Circuit, x: &SymplecticVec, psi: &StateVector) -> Result<bool> {
    if f.qubits() > 6 {
        return Err(Error::OracleBound(f.qubits(), 6));
    }
    let corr = dense_pc(f, x)?;
    teleport_check_with(f, x, psi, &corr)
}

/// Same check with an explicit correction unitary.
pub fn teleport_check_with(f: &Circuit, x: &SymplecticVec, psi: &StateVector, corr: &DenseUnitary) -> Result<bool> {
    let mut lhs = psi.clone();
    lhs.apply_pauli(&PhasedPauli::new(x.clone(), 0))?;
    lhs.apply_circuit(f)?;
    let lhs = apply_dense(corr, &lhs)?;
    let mut rhs = psi.clone();
    rhs.apply_circuit(f)?;
    Ok(lhs.proportional_to(&rhs).is_some())
}

/// U|ψ⟩ for a dense U.
pub fn apply_dense(u: &DenseUnitary, psi: &StateVector) -> Result<StateVector> {
    let d = u.dim();
    let mut out = vec![ExactScalar::zero(); d];
    for (c, a) in psi.amplitudes().into_iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (r, slot) in out.iter_mut().enumerate() {
            let e = u.entry(r, c);
            if !e.is_zero() {
                *slot = &*slot + &(&e * &a);
            }
        }
    }
    StateVector::from_amplitudes(u.n(), &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circ(s: &str) -> Circuit {
        Circuit::parse(s).unwrap()
    }

    #[test]
    fn hadamard_entries() {
        let u = dense(&circ("qubits 1\nH 1")).unwrap();
        let h = ExactScalar::inv_sqrt2_pow(1);
        assert_eq!(u.entry(0, 0), h);
        assert_eq!(u.entry(1, 1), -&h);
    }

    #[test]
    fn s_expansion() {
        let e = pauli_expansion(&dense(&circ("qubits 1\nS 1")).unwrap()).unwrap();
        let half = ExactScalar::inv_sqrt2_pow(2);
        let one_plus_i = &ExactScalar::one() + &ExactScalar::i_pow(1);
        let one_minus_i = &ExactScalar::one() - &ExactScalar::i_pow(1);
        assert_eq!(e[&SymplecticVec::zero(1)], &half * &one_plus_i);
        assert_eq!(e[&SymplecticVec::e_z(1, 1)], &half * &one_minus_i);
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn time_order_convention() {
        let th = dense(&circ("qubits 1\nT 1\nH 1")).unwrap();
        let t = dense(&circ("qubits 1\nT 1")).unwrap();
        let h = dense(&circ("qubits 1\nH 1")).unwrap();
        assert_eq!(th, h.matmul(&t).unwrap());
        assert_ne!(th, t.matmul(&h).unwrap());
    }

    #[test]
    fn t_conjugation_of_x_in_time_order() {
        // T₁ X₁ dagger(T₁) as a circuit is T† X T as a matrix.
        let mut u = dense(&circ("qubits 1\nT 1")).unwrap();
        u.apply_pauli(&PhasedPauli::parse("X", None).unwrap()).unwrap();
        u.apply_circuit(&circ("qubits 1\nT 1").dagger()).unwrap();
        let h = ExactScalar::inv_sqrt2_pow(1);
        assert_eq!(u.coefficient(&SymplecticVec::e_x(1, 1)), h);
        let y = SymplecticVec::e_x(1, 1).xor(&SymplecticVec::e_z(1, 1));
        assert_eq!(u.coefficient(&y), -&h);
    }

    #[test]
    fn phase_equality() {
        let i = dense(&circ("qubits 1")).unwrap();
        let mut m = i.clone();
        m.apply_pauli(&PhasedPauli::parse("-I", None).unwrap()).unwrap();
        assert_eq!(equal_up_to_phase(&i, &m).unwrap(), Some(ExactScalar::from_int(-1)));
        let z = dense(&circ("qubits 1\nZ 1")).unwrap();
        assert!(equal_up_to_phase(&i, &z).unwrap().is_none());
    }
}

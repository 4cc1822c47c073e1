//! Depth-d presentations Λ = ((x_d,σ_d),…,(x_1,σ_1),(y,τ)), the encoder and
//! decoder, branchings, and the exact coefficient engine.
//!
//! A layer (x, σ) contributes factors (I − i(−1)^{σ_s} P^{x_s})/√2, which is
//! what conjugation by T = diag(1, ω) produces: T Z T† = Z and
//! T X T† = (I − iZ)X/√2.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::circuit::{Circuit, Gate};
use crate::error::{dim, invalid, Error, Result};
use crate::exactnum::{ExactScalar, RealRoot2};
use crate::f2core::{
    affine_intersect, anticommutation_map, sform, AffineSpace, F2Matrix, F2Vec, OrderedBasis, SpanSolver, SymplecticVec,
};
use crate::pauli::{product_phase, synthesize_from_images, theta_of, PhasedPauli};

/// Default cap on enumerated branches.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

/// One layer: an isotropic ordered basis with a sign per basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub basis: OrderedBasis,
    pub signs: F2Vec,
}

impl Layer {
    pub fn new(basis: OrderedBasis, signs: F2Vec) -> Result<Self> {
        if signs.len() != basis.dim() {
            return dim("sign vector length differs from layer dimension");
        }
        if !basis.is_isotropic() {
            return invalid("layer basis is not isotropic");
        }
        Ok(Layer { basis, signs })
    }

    pub fn unsigned(basis: OrderedBasis) -> Result<Self> {
        let r = basis.dim();
        Layer::new(basis, F2Vec::zeros(r))
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn signed_paulis(&self) -> Vec<PhasedPauli> {
        self.basis
            .vectors()
            .iter()
            .enumerate()
            .map(|(i, v)| PhasedPauli::signed(v.clone(), self.signs.get(i)))
            .collect()
    }

    fn from_signed(n: usize, ps: Vec<PhasedPauli>) -> Result<Self> {
        let signs = F2Vec::from_fn(ps.len(), |i| ps[i].tau());
        let basis = OrderedBasis::new_isotropic(n, ps.into_iter().map(|p| p.v).collect())?;
        Layer::new(basis, signs)
    }
}

/// `layers[0]` is x_1, the layer adjacent to the outer Pauli; the last entry is x_d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    n: usize,
    layers: Vec<Layer>,
    y: SymplecticVec,
    tau: bool,
}

impl Presentation {
    pub fn new(n: usize, layers: Vec<Layer>, y: SymplecticVec, tau: bool) -> Result<Self> {
        if y.n() != n || layers.iter().any(|l| l.basis.n() != n) {
            return dim("presentation parts have different numbers of qubits");
        }
        if y.is_zero() && tau {
            return invalid("the outer pair (0, 1) is forbidden");
        }
        Ok(Presentation { n, layers, y, tau })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Layers innermost first.
    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn outer(&self) -> (&SymplecticVec, bool) {
        (&self.y, self.tau)
    }

    /// Drop layers of dimension zero.
    pub fn compacted(&self) -> Presentation {
        Presentation {
            n: self.n,
            layers: self.layers.iter().filter(|l| l.dim() > 0).cloned().collect(),
            y: self.y.clone(),
            tau: self.tau,
        }
    }

    /// Conjugate every signed Pauli by a Clifford circuit.
    pub fn conjugated(&self, c: &Circuit) -> Result<Presentation> {
        if c.qubits() != self.n {
            return dim("circuit width differs from presentation");
        }
        let mut layers = Vec::with_capacity(self.layers.len());
        for l in &self.layers {
            let mut ps = l.signed_paulis();
            for p in &mut ps {
                for g in c.gates() {
                    p.apply(g)?;
                }
            }
            layers.push(Layer::from_signed(self.n, ps)?);
        }
        let mut y = PhasedPauli::signed(self.y.clone(), self.tau);
        for g in c.gates() {
            y.apply(g)?;
        }
        Presentation::new(self.n, layers, y.v.clone(), y.tau())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("presentation n={} d={}\n", self.n, self.depth());
        for (j, l) in self.layers.iter().enumerate().rev() {
            let _ = writeln!(s, "layer {} dim={}", j + 1, l.dim());
            for (i, v) in l.basis.vectors().iter().enumerate() {
                let _ = writeln!(s, "{}{} {}", v.z, v.x, l.signs.get(i) as u8);
            }
        }
        let _ = writeln!(s, "outer {}{} {}", self.y.z, self.y.x, self.tau as u8);
        s
    }

    pub fn parse(text: &str) -> Result<Presentation> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let (ln, head) = lines.next().ok_or_else(|| perr(0, "empty presentation"))?;
        let kv = |tok: Option<&str>, key: &str, line: usize| -> Result<usize> {
            tok.and_then(|t| t.strip_prefix(key))
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| perr(line, &format!("expected {key}<number>")))
        };
        let mut toks = head.split_whitespace();
        if toks.next() != Some("presentation") {
            return Err(perr(ln, "expected \"presentation n=<n> d=<d>\""));
        }
        let n = kv(toks.next(), "n=", ln)?;
        let d = kv(toks.next(), "d=", ln)?;
        let row = |line: usize, s: &str| -> Result<PhasedPauli> {
            let mut t = s.split_whitespace();
            let bits = F2Vec::parse(t.next().unwrap_or("")).map_err(|_| perr(line, "bad bitstring"))?;
            if bits.len() != 2 * n {
                return Err(perr(line, "bitstring must have length 2n"));
            }
            let sign = match t.next() {
                Some("0") => false,
                Some("1") => true,
                _ => return Err(perr(line, "expected a sign bit")),
            };
            Ok(PhasedPauli::signed(SymplecticVec::from_f2(&bits)?, sign))
        };
        let mut layers = vec![None; d];
        for expect in (1..=d).rev() {
            let (ln, l) = lines.next().ok_or_else(|| perr(0, "missing layer"))?;
            let mut t = l.split_whitespace();
            if t.next() != Some("layer") || t.next().and_then(|j| j.parse::<usize>().ok()) != Some(expect) {
                return Err(perr(ln, &format!("expected \"layer {expect} dim=<r>\"")));
            }
            let r = kv(t.next(), "dim=", ln)?;
            let mut ps = Vec::with_capacity(r);
            for _ in 0..r {
                let (ln, l) = lines.next().ok_or_else(|| perr(0, "missing basis row"))?;
                ps.push(row(ln, l)?);
            }
            layers[expect - 1] = Some(Layer::from_signed(n, ps)?);
        }
        let (ln, l) = lines.next().ok_or_else(|| perr(0, "missing outer line"))?;
        let rest = l.strip_prefix("outer").ok_or_else(|| perr(ln, "expected \"outer <bits> <tau>\""))?;
        let y = row(ln, rest)?;
        if let Some((ln, _)) = lines.next() {
            return Err(perr(ln, "trailing content"));
        }
        Presentation::new(n, layers.into_iter().map(Option::unwrap).collect(), y.v.clone(), y.tau())
    }
}

/// Presentation of C P^x C†.
pub fn encode(c: &Circuit, x: &SymplecticVec) -> Result<Presentation> {
    let n = c.qubits();
    if x.n() != n {
        return dim("Pauli width differs from circuit");
    }
    let dec = c.layer_decompose();
    let mut y = PhasedPauli::new(x.clone(), 0);
    let mut layers: Vec<Vec<PhasedPauli>> = Vec::new();
    let apply = |g: &Gate, layers: &mut Vec<Vec<PhasedPauli>>, y: &mut PhasedPauli| -> Result<()> {
        for l in layers.iter_mut() {
            for p in l.iter_mut() {
                p.apply(g)?;
            }
        }
        y.apply(g)
    };
    for g in &dec.cliffords[0] {
        apply(g, &mut layers, &mut y)?;
    }
    for (j, mask) in dec.layers.iter().enumerate() {
        layers.push(mask.iter_ones().map(|i| PhasedPauli::new(SymplecticVec::e_z(n, i + 1), 0)).collect());
        for g in &dec.cliffords[j + 1] {
            apply(g, &mut layers, &mut y)?;
        }
    }
    let layers = layers.into_iter().map(|ps| Layer::from_signed(n, ps)).collect::<Result<_>>()?;
    Presentation::new(n, layers, y.v.clone(), y.tau())
}

/// A circuit C with C P^z C† = U^Λ. Layers of dimension zero are not
/// representable by gates and disappear from the circuit.
pub fn decode(p: &Presentation, z: &SymplecticVec) -> Result<Circuit> {
    let n = p.n;
    if z.n() != n {
        return dim("z has the wrong number of qubits");
    }
    if z.is_zero() != p.y.is_zero() {
        return invalid("z must be zero exactly when the outer vector is zero");
    }
    let mut cur = p.clone();
    let mut suffixes: Vec<Circuit> = Vec::new();
    for j in (0..p.depth()).rev() {
        let layer = cur.layers[j].clone();
        cur.layers.truncate(j);
        let r = layer.dim();
        if r == 0 {
            continue;
        }
        let pairs: Vec<(SymplecticVec, bool)> =
            layer.basis.vectors().iter().cloned().zip(layer.signs.to_bools()).collect();
        let a = synthesize_from_images(n, &pairs)?;
        cur = cur.conjugated(&a.dagger())?;
        let inner_has_t = cur.layers.iter().any(|l| l.dim() > 0);
        let mut s = Circuit::new(n);
        if inner_has_t {
            for w in 1..=r {
                s.add_all([Gate::H(w), Gate::H(w)]);
            }
        }
        s.add_all((1..=r).map(Gate::T));
        s.append(&a)?;
        suffixes.push(s);
    }
    let mut out = Circuit::new(n);
    if !cur.y.is_zero() {
        let cz = synthesize_from_images(n, &[(z.clone(), false)])?;
        let cy = synthesize_from_images(n, &[(cur.y.clone(), cur.tau)])?;
        out.append(&cz.dagger())?;
        out.append(&cy)?;
    }
    for s in suffixes.iter().rev() {
        out.append(s)?;
    }
    Ok(out)
}

/// Sparse linear combination of Paulis.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PauliSum {
    pub terms: BTreeMap<SymplecticVec, ExactScalar>,
}

impl PauliSum {
    pub fn pauli(v: SymplecticVec, c: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(v, c);
        }
        PauliSum { terms }
    }

    pub fn add_term(&mut self, v: SymplecticVec, c: &ExactScalar) {
        let e = self.terms.entry(v).or_default();
        *e = &*e + c;
        if e.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, o: &PauliSum) -> PauliSum {
        let mut r = self.clone();
        for (v, c) in &o.terms {
            r.add_term(v.clone(), c);
        }
        r
    }

    pub fn scale(&self, s: &ExactScalar) -> PauliSum {
        let mut r = PauliSum::default();
        for (v, c) in &self.terms {
            r.add_term(v.clone(), &(c * s));
        }
        r
    }

    pub fn mul(&self, o: &PauliSum) -> PauliSum {
        let mut r = PauliSum::default();
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                let e = product_phase(u, v) as u32;
                r.add_term(u.xor(v), &(a * b).mul_omega(2 * e));
            }
        }
        r
    }

    pub fn coefficient(&self, v: &SymplecticVec) -> ExactScalar {
        self.terms.get(v).cloned().unwrap_or_default()
    }
}

/// Nested product: `Layered` means Π (I − i·U^{factor})/√2 · U^{tail}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductForm {
    Pauli { v: SymplecticVec, tau: bool },
    Layered { factors: Vec<ProductForm>, tail: Box<ProductForm> },
}

impl ProductForm {
    /// Multiply the product out into a Pauli sum.
    pub fn expand(&self) -> PauliSum {
        match self {
            ProductForm::Pauli { v, tau } => PauliSum::pauli(v.clone(), ExactScalar::from_int(if *tau { -1 } else { 1 })),
            ProductForm::Layered { factors, tail } => {
                let n = tail_n(tail);
                let mut acc = PauliSum::pauli(SymplecticVec::zero(n), ExactScalar::one());
                for f in factors {
                    let mut g = f.expand().scale(&ExactScalar::i_pow(3));
                    g.add_term(SymplecticVec::zero(n), &ExactScalar::one());
                    acc = acc.mul(&g.scale(&ExactScalar::inv_sqrt2_pow(1)));
                }
                acc.mul(&tail.expand())
            }
        }
    }

    /// Number of (I − iU)/√2 factors at the top level.
    pub fn factor_count(&self) -> usize {
        match self {
            ProductForm::Pauli { .. } => 0,
            ProductForm::Layered { factors, .. } => factors.len(),
        }
    }
}

fn tail_n(p: &ProductForm) -> usize {
    match p {
        ProductForm::Pauli { v, .. } => v.n(),
        ProductForm::Layered { tail, .. } => tail_n(tail),
    }
}

/// Peel x_1 off Λ: anticommuting basis vectors of x_1 become factors.
pub fn product_form(p: &Presentation) -> ProductForm {
    if p.depth() == 0 {
        return ProductForm::Pauli { v: p.y.clone(), tau: p.tau };
    }
    let rest: Vec<Layer> = p.layers[1..].to_vec();
    let x1 = &p.layers[0];
    let mut factors = Vec::new();
    for (s, v) in x1.basis.vectors().iter().enumerate() {
        if sform(v, &p.y) {
            let sub = Presentation { n: p.n, layers: rest.clone(), y: v.clone(), tau: x1.signs.get(s) };
            factors.push(product_form(&sub));
        }
    }
    let star = Presentation { n: p.n, layers: rest, y: p.y.clone(), tau: p.tau };
    if factors.is_empty() {
        return product_form(&star);
    }
    ProductForm::Layered { factors, tail: Box::new(product_form(&star)) }
}

/// Outcome of peeling one layer at a fixed y: the successor, its sign bit, and
/// the exponent m of the 1/√2^m weight.
#[derive(Clone, Debug)]
pub struct PeelTerm {
    pub next: SymplecticVec,
    pub sign: bool,
    pub half_exp: u32,
}

/// Sign bit of a single step y → y ⊕ Δ with Δ = ⊕_{s∈coords} x_s.
fn step_sign(layer: &Layer, coords: &F2Vec, delta: &SymplecticVec, y: &SymplecticVec) -> Result<bool> {
    let sigma = coords.and_count(&layer.signs) % 2 == 1;
    let th = theta_of(&layer.basis, coords);
    let e = product_phase(delta, y) as i64;
    let w = coords.weight() as i64;
    let diff = (e - w).rem_euclid(4);
    if diff % 2 != 0 {
        return Err(Error::Internal("odd phase in a support chain step".into()));
    }
    Ok(sigma ^ th ^ (diff == 2))
}

/// All terms obtained by peeling `layer` at state y.
pub fn peel(layer: &Layer, y: &SymplecticVec, budget: &mut u64) -> Result<Vec<PeelTerm>> {
    let s = anticommutation_map(&layer.basis, y)?;
    let idx: Vec<usize> = s.iter_ones().collect();
    let m = idx.len();
    if m >= 63 || (1u64 << m) > *budget {
        return Err(Error::Budget(format!("a layer branches into 2^{m} terms")));
    }
    *budget -= 1u64 << m;
    let r = layer.dim();
    let mut out = Vec::with_capacity(1 << m);
    for mask in 0u64..(1u64 << m) {
        let coords = F2Vec::from_fn(r, |i| idx.iter().position(|&t| t == i).is_some_and(|p| (mask >> p) & 1 == 1));
        let delta = layer.basis.combine(&coords);
        let sign = step_sign(layer, &coords, &delta, y)?;
        out.push(PeelTerm { next: y.xor(&delta), sign, half_exp: m as u32 });
    }
    Ok(out)
}

/// Every nonzero coefficient ⟨U^Λ, P^c⟩, by dynamic programming over layers.
pub fn expand(p: &Presentation, budget: u64) -> Result<BTreeMap<SymplecticVec, ExactScalar>> {
    let mut budget = budget;
    let mut states: HashMap<SymplecticVec, ExactScalar> = HashMap::new();
    states.insert(p.y.clone(), ExactScalar::from_int(if p.tau { -1 } else { 1 }));
    for layer in &p.layers {
        let mut next: HashMap<SymplecticVec, ExactScalar> = HashMap::new();
        for (y, c) in states {
            for t in peel(layer, &y, &mut budget)? {
                let mut term = c.div_sqrt2_pow(t.half_exp);
                if t.sign {
                    term = -term;
                }
                let e = next.entry(t.next).or_default();
                *e = &*e + &term;
            }
        }
        next.retain(|_, c| !c.is_zero());
        states = next;
    }
    Ok(states.into_iter().collect())
}

/// Exact ⟨U^Λ, P^c⟩.
pub fn coefficient(p: &Presentation, c: &SymplecticVec, budget: u64) -> Result<ExactScalar> {
    if c.n() != p.n {
        return dim("coefficient index has the wrong number of qubits");
    }
    Ok(expand(p, budget)?.remove(c).unwrap_or_default())
}

/// A support chain (y_1, …, y_d); y_0 is the outer vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportChain(pub Vec<SymplecticVec>);

/// The phase bit of a chain, or an error if the chain is not in supp(Λ).
pub fn rho(p: &Presentation, chain: &SupportChain) -> Result<bool> {
    if chain.0.len() != p.depth() {
        return dim("chain length differs from depth");
    }
    let mut acc = p.tau;
    let mut prev = p.y.clone();
    for (layer, yj) in p.layers.iter().zip(&chain.0) {
        let delta = prev.xor(yj);
        let coords = layer.basis.coordinates(&delta).ok_or(Error::NotInSpan)?;
        let allowed = anticommutation_map(&layer.basis, &prev)?;
        if coords.and_count(&allowed) != coords.weight() {
            return invalid("chain step leaves the selected subspace");
        }
        acc ^= step_sign(layer, &coords, &delta, &prev)?;
        prev = yj.clone();
    }
    Ok(acc)
}

/// Σ over chains ending at c of (−1)^ρ / √2^{Σ|B_{x_j}(y_{j−1})|}, by explicit enumeration.
pub fn coefficient_by_chains(p: &Presentation, c: &SymplecticVec, budget: u64) -> Result<ExactScalar> {
    let mut count = 0u64;
    let mut acc = ExactScalar::zero();
    let mut stack: Vec<(Vec<SymplecticVec>, u32)> = vec![(Vec::new(), 0)];
    while let Some((chain, exp)) = stack.pop() {
        let j = chain.len();
        if j == p.depth() {
            count += 1;
            if count > budget {
                return Err(Error::Budget("too many support chains".into()));
            }
            if chain.last().unwrap_or(&p.y) == c {
                let r = rho(p, &SupportChain(chain))?;
                let t = ExactScalar::inv_sqrt2_pow(exp);
                acc = if r { &acc - &t } else { &acc + &t };
            }
            continue;
        }
        let prev = chain.last().unwrap_or(&p.y).clone();
        let layer = &p.layers[j];
        let s = anticommutation_map(&layer.basis, &prev)?;
        let sel: Vec<SymplecticVec> = s.iter_ones().map(|i| layer.basis.vectors()[i].clone()).collect();
        if sel.len() >= 63 {
            return Err(Error::Budget("layer branching too wide".into()));
        }
        for mask in 0u64..(1 << sel.len()) {
            let mut next = prev.clone();
            for (b, v) in sel.iter().enumerate() {
                if (mask >> b) & 1 == 1 {
                    next.xor_assign(v);
                }
            }
            let mut ch = chain.clone();
            ch.push(next);
            stack.push((ch, exp + sel.len() as u32));
        }
    }
    Ok(acc)
}

/// Depth ≤ 1 coefficient by affine membership.
pub fn coefficient_depth1_fast(p: &Presentation, c: &SymplecticVec) -> Result<ExactScalar> {
    if c.n() != p.n {
        return dim("coefficient index has the wrong number of qubits");
    }
    let sign = |b: bool| ExactScalar::from_int(if b { -1 } else { 1 });
    match p.depth() {
        0 => Ok(if *c == p.y { sign(p.tau) } else { ExactScalar::zero() }),
        1 => {
            let layer = &p.layers[0];
            let s = anticommutation_map(&layer.basis, &p.y)?;
            let delta = p.y.xor(c);
            let Some(coords) = layer.basis.coordinates(&delta) else { return Ok(ExactScalar::zero()) };
            if coords.and_count(&s) != coords.weight() {
                return Ok(ExactScalar::zero());
            }
            let b = p.tau ^ step_sign(layer, &coords, &delta, &p.y)?;
            Ok(sign(b).div_sqrt2_pow(s.weight() as u32))
        }
        _ => invalid("the fast path needs depth at most 1"),
    }
}

/// A (d, m)-branching: layers innermost first, each a basis of F2^m with a
/// linear map whose kernel contains the span.
#[derive(Clone, Debug)]
pub struct Branching {
    m: usize,
    layers: Vec<(Vec<F2Vec>, F2Matrix)>,
}

impl Branching {
    pub fn new(m: usize, layers: Vec<(Vec<F2Vec>, F2Matrix)>) -> Result<Self> {
        for (basis, q) in &layers {
            if q.ncols() != m || q.nrows() != basis.len() || basis.iter().any(|b| b.len() != m) {
                return dim("branching layer has inconsistent dimensions");
            }
            let mut solver = SpanSolver::new(m, basis.len());
            for b in basis {
                if solver.insert(b).is_some() {
                    return invalid("branching basis is dependent");
                }
                if !q.mul_vec(b)?.is_zero() {
                    return invalid("branching basis is not in the kernel of its map");
                }
            }
        }
        Ok(Branching { m, layers })
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn ambient(&self) -> usize {
        self.m
    }

    /// Layers innermost first: (basis, Q).
    pub fn layers(&self) -> &[(Vec<F2Vec>, F2Matrix)] {
        &self.layers
    }

    /// (z ⊕ W_{x_j}^{Q_j z}, |Q_j z|) for the layer with 0-based index j.
    fn step_space(&self, j: usize, z: &F2Vec) -> Result<(AffineSpace, u32)> {
        let (basis, q) = &self.layers[j];
        let sel = q.mul_vec(z)?;
        let gens: Vec<F2Vec> = sel.iter_ones().map(|i| basis[i].clone()).collect();
        Ok((AffineSpace::new(z.clone(), &gens)?, sel.weight() as u32))
    }

    /// Φ(y) expanded term by term.
    pub fn expand(&self, y: &F2Vec, budget: u64) -> Result<BTreeMap<F2Vec, RealRoot2>> {
        let mut budget = budget;
        let mut states: BTreeMap<F2Vec, RealRoot2> = BTreeMap::new();
        states.insert(y.clone(), RealRoot2::one());
        for j in 0..self.depth() {
            let mut next: BTreeMap<F2Vec, RealRoot2> = BTreeMap::new();
            for (z, w) in states {
                let (sp, h) = self.step_space(j, &z)?;
                let count = 1u64 << sp.dim().min(63);
                if sp.dim() >= 63 || count > budget {
                    return Err(Error::Budget("branching expansion too large".into()));
                }
                budget -= count;
                let t = &w * &RealRoot2::inv_sqrt2_pow(h);
                for p in sp.points() {
                    let e = next.entry(p).or_insert_with(RealRoot2::zero);
                    *e = &*e + &t;
                }
            }
            states = next;
        }
        Ok(states)
    }
}

/// co(Φ(y), q) for depth 2.
pub fn branching_coeff_d2(a: &Branching, y: &F2Vec, q: &F2Vec) -> Result<RealRoot2> {
    if a.depth() != 2 {
        return invalid("expected a depth-2 branching");
    }
    if y.len() != a.m || q.len() != a.m {
        return dim("branching vector length mismatch");
    }
    let (m1, h1) = a.step_space(0, y)?;
    let (n2, h2) = a.step_space(1, q)?;
    Ok(match affine_intersect(&m1, &n2)? {
        None => RealRoot2::zero(),
        Some(s) => RealRoot2::one().scale_pow2(s.dim() as i64) * RealRoot2::inv_sqrt2_pow(h1 + h2),
    })
}

/// Which route [`branching_coeff_d3`] took.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum D3Route {
    Simplified,
    General,
}

/// co(Φ(y), q) for depth 3 with the route taken.
pub fn branching_coeff_d3_route(a: &Branching, y: &F2Vec, q: &F2Vec, force_general: bool) -> Result<(RealRoot2, D3Route)> {
    if a.depth() != 3 {
        return invalid("expected a depth-3 branching");
    }
    if y.len() != a.m || q.len() != a.m {
        return dim("branching vector length mismatch");
    }
    let (mspace, h1) = a.step_space(0, y)?;
    let (nspace, h3) = a.step_space(2, q)?;
    if mspace.dim() >= 40 {
        return Err(Error::Budget("M is too large to enumerate".into()));
    }
    let scale = RealRoot2::inv_sqrt2_pow(h1 + h3);
    let simplified = !force_general && nspace.contains_space(&mspace) && {
        let (b2, _) = &a.layers[1];
        let (b3, _) = &a.layers[2];
        let mut solver = SpanSolver::new(a.m, b2.len() + b3.len());
        b3.iter().chain(b2).all(|v| solver.insert(v).is_none())
    };
    let mut acc = RealRoot2::zero();
    for z in mspace.points() {
        let (_, q2) = &a.layers[1];
        let h2 = q2.mul_vec(&z)?.weight() as u32;
        let count = if simplified {
            1
        } else {
            let (sp, _) = a.step_space(1, &z)?;
            match affine_intersect(&sp, &nspace)? {
                None => continue,
                Some(s) => {
                    if s.dim() >= 63 {
                        return Err(Error::Budget("intersection too large".into()));
                    }
                    1i64 << s.dim()
                }
            }
        };
        acc = &acc + &(RealRoot2::from_int(count) * RealRoot2::inv_sqrt2_pow(h2));
    }
    Ok((&acc * &scale, if simplified { D3Route::Simplified } else { D3Route::General }))
}

pub fn branching_coeff_d3(a: &Branching, y: &F2Vec, q: &F2Vec) -> Result<RealRoot2> {
    branching_coeff_d3_route(a, y, q, false).map(|r| r.0)
}

/// How [`presentation_to_branching`] should establish that ρ vanishes.
#[derive(Clone, Debug)]
pub enum RhoCheck {
    /// Enumerate every support chain under the given budget.
    Exhaustive(u64),
    /// Enumerate only the chains ending at the given vector; enough for the
    /// single coefficient at that vector.
    ExhaustiveAt(SymplecticVec, u64),
    /// The caller guarantees ρ ≡ 0 by construction.
    Trusted,
}

/// Every support chain, depth first.
pub fn support_chains(p: &Presentation, budget: u64) -> Result<Vec<SupportChain>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<SymplecticVec>> = vec![Vec::new()];
    while let Some(chain) = stack.pop() {
        let j = chain.len();
        if j == p.depth() {
            out.push(SupportChain(chain));
            if out.len() as u64 > budget {
                return Err(Error::Budget("too many support chains".into()));
            }
            continue;
        }
        let prev = chain.last().unwrap_or(&p.y).clone();
        let layer = &p.layers[j];
        let s = anticommutation_map(&layer.basis, &prev)?;
        let sel: Vec<usize> = s.iter_ones().collect();
        if sel.len() >= 40 {
            return Err(Error::Budget("layer branching too wide".into()));
        }
        for mask in 0u64..(1 << sel.len()) {
            let mut next = prev.clone();
            for (b, &i) in sel.iter().enumerate() {
                if (mask >> b) & 1 == 1 {
                    next.xor_assign(&layer.basis.vectors()[i]);
                }
            }
            let mut ch = chain.clone();
            ch.push(next);
            stack.push(ch);
        }
    }
    Ok(out)
}

/// The (2n, d)-branching ((x_j, B_{x_j}))_j of a presentation whose ρ vanishes.
pub fn presentation_to_branching(p: &Presentation, check: RhoCheck) -> Result<Branching> {
    if p.tau {
        return invalid("a branching cannot carry the outer sign");
    }
    match check {
        RhoCheck::Exhaustive(budget) => {
            for ch in support_chains(p, budget)? {
                if rho(p, &ch)? {
                    return invalid("the phase function is not identically zero");
                }
            }
        }
        RhoCheck::ExhaustiveAt(target, budget) => {
            for ch in support_chains(p, budget)? {
                if ch.0.last().unwrap_or(&p.y) == &target && rho(p, &ch)? {
                    return invalid("the phase function does not vanish on chains ending at the target");
                }
            }
        }
        RhoCheck::Trusted => {}
    }
    let m = 2 * p.n;
    let layers = p
        .layers
        .iter()
        .map(|l| {
            let basis: Vec<F2Vec> = l.basis.vectors().iter().map(SymplecticVec::to_f2).collect();
            let q = F2Matrix::new(l.basis.vectors().iter().map(SymplecticVec::form_row).collect(), m)?;
            Ok((basis, q))
        })
        .collect::<Result<_>>()?;
    Ok(Branching { m, layers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{dense_pc, pauli_expansion};

    fn pp(s: &str) -> SymplecticVec {
        PhasedPauli::parse(s, None).unwrap().v
    }

    #[test]
    fn t_on_x() {
        let c = Circuit::parse("qubits 1\nT 1").unwrap();
        let p = encode(&c, &pp("X")).unwrap();
        let e = expand(&p, DEFAULT_BUDGET).unwrap();
        let h = ExactScalar::inv_sqrt2_pow(1);
        assert_eq!(e[&pp("X")], h);
        assert_eq!(e[&pp("Y")], h);
        let o = pauli_expansion(&dense_pc(&c, &pp("X")).unwrap()).unwrap();
        assert_eq!(o, e);
    }

    #[test]
    fn depth_zero() {
        let p = Presentation::new(2, vec![], pp("XZ"), true).unwrap();
        assert_eq!(coefficient(&p, &pp("XZ"), 10).unwrap(), ExactScalar::from_int(-1));
        assert!(coefficient(&p, &pp("ZZ"), 10).unwrap().is_zero());
        assert!(Presentation::new(1, vec![], pp("I"), true).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let c = Circuit::parse("qubits 2\nH 1\nT 1\nCZ 1 2\nT 2\nH 2\nT 2").unwrap();
        let p = encode(&c, &pp("XZ")).unwrap();
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn stationary_chain_has_zero_phase() {
        let c = Circuit::parse("qubits 2\nT 1\nH 1\nT 1").unwrap();
        let p = encode(&c, &pp("ZZ")).unwrap();
        let ch = SupportChain(vec![p.outer().0.clone(); p.depth()]);
        assert!(!rho(&p, &ch).unwrap());
    }
}

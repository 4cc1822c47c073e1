//! Packed F2 linear algebra and the symplectic geometry of F2^{2n}.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{dim, Error, Result};

/// A fixed-length vector over F2, packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

fn nwords(len: usize) -> usize {
    len.div_ceil(64)
}

impl F2Vec {
    pub fn zeros(len: usize) -> Self {
        F2Vec { len, words: vec![0; nwords(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = F2Vec::zeros(len);
        for w in v.words.iter_mut() {
            *w = !0;
        }
        v.trim();
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = F2Vec::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = F2Vec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut v = F2Vec::zeros(len);
        for i in 0..len {
            if f(i) {
                v.set(i, true);
            }
        }
        v
    }

    /// Low `len` bits of `bits`, bit `i` of the integer is entry `i`.
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!(len <= 64);
        let mut v = F2Vec::zeros(len);
        if len > 0 {
            v.words[0] = bits;
            v.trim();
        }
        v
    }

    /// Parse a string of '0'/'1' characters.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = F2Vec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(Error::Parse { line: 0, msg: format!("bad bit character {c:?}") }),
            }
        }
        Ok(v)
    }

    fn trim(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        if b {
            self.words[i >> 6] |= 1 << (i & 63);
        } else {
            self.words[i >> 6] &= !(1 << (i & 63));
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1 << (i & 63);
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        assert_eq!(self.len, other.len, "F2Vec length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &F2Vec) -> F2Vec {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    pub fn and(&self, other: &F2Vec) -> F2Vec {
        assert_eq!(self.len, other.len, "F2Vec length mismatch");
        F2Vec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Number of positions where both vectors are 1.
    pub fn and_count(&self, other: &F2Vec) -> usize {
        assert_eq!(self.len, other.len, "F2Vec length mismatch");
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn dot(&self, other: &F2Vec) -> bool {
        self.and_count(other) & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    pub fn concat(&self, other: &F2Vec) -> F2Vec {
        let mut r = F2Vec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            r.set(i, true);
        }
        for i in other.iter_ones() {
            r.set(self.len + i, true);
        }
        r
    }

    pub fn slice(&self, start: usize, end: usize) -> F2Vec {
        assert!(start <= end && end <= self.len);
        let mut r = F2Vec::zeros(end - start);
        for i in self.iter_ones() {
            if i >= start && i < end {
                r.set(i - start, true);
            }
        }
        r
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl Ord for F2Vec {
    /// Lexicographic order on the bitstring, entry 0 first.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let d = a ^ b;
            if d != 0 {
                let t = d.trailing_zeros();
                return if (a >> t) & 1 == 0 { Ordering::Less } else { Ordering::Greater };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for F2Vec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vec({self})")
    }
}

/// A rectangular matrix over F2 stored as rows.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<F2Vec>,
}

impl F2Matrix {
    pub fn new(rows: Vec<F2Vec>, cols: usize) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return dim(format!("row of length {} in a matrix with {} columns", r.len(), cols));
        }
        Ok(F2Matrix { cols, rows })
    }

    pub fn from_rows(rows: Vec<F2Vec>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        F2Matrix::new(rows, cols)
    }

    pub fn zeros(nrows: usize, cols: usize) -> Self {
        F2Matrix { cols, rows: vec![F2Vec::zeros(cols); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix { cols: n, rows: (0..n).map(|i| F2Vec::unit(n, i)).collect() }
    }

    /// Parse one row per line; blank lines and '#' comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = F2Vec::parse(line).map_err(|_| Error::Parse { line: ln + 1, msg: "rows must contain only 0 and 1".into() })?;
            rows.push(row);
        }
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse { line: 0, msg: "rows have unequal lengths".into() });
        }
        Ok(F2Matrix { cols, rows })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[F2Vec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &F2Vec {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    /// M·v, entry i is row_i · v.
    pub fn mul_vec(&self, v: &F2Vec) -> Result<F2Vec> {
        if v.len() != self.cols {
            return dim(format!("vector of length {} against {} columns", v.len(), self.cols));
        }
        Ok(F2Vec::from_fn(self.rows.len(), |i| self.rows[i].dot(v)))
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Horizontal concatenation.
    pub fn hconcat(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.nrows() != other.nrows() {
            return dim("hconcat of matrices with different row counts");
        }
        Ok(F2Matrix {
            cols: self.cols + other.cols,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a.concat(b)).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        gauss_eliminate(self).rank
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }
}

/// Output of [`gauss_eliminate`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub rref: F2Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub kernel_basis: Vec<F2Vec>,
}

/// Reduced row-echelon form, pivots chosen leftmost column first and lowest row first.
pub fn gauss_eliminate(m: &F2Matrix) -> Rref {
    let mut rows = m.rows.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m.cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(col)) else { continue };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
    }
    let mut kernel_basis = Vec::new();
    let mut pi = 0;
    for f in 0..m.cols {
        if pi < pivots.len() && pivots[pi] == f {
            pi += 1;
            continue;
        }
        let mut k = F2Vec::unit(m.cols, f);
        for (i, &pc) in pivots.iter().enumerate() {
            if rows[i].get(f) {
                k.set(pc, true);
            }
        }
        kernel_basis.push(k);
    }
    let rank = pivots.len();
    Rref { rref: F2Matrix { cols: m.cols, rows }, rank, pivots, kernel_basis }
}

/// Incremental elimination that remembers how each reduced row was formed,
/// so vectors can be expressed in terms of the inserted generators.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    len: usize,
    len_comb: usize,
    count: usize,
    rows: Vec<(usize, F2Vec, F2Vec)>,
}

impl SpanSolver {
    /// `capacity` bounds the number of generators that will be inserted.
    pub fn new(len: usize, capacity: usize) -> Self {
        SpanSolver { len, len_comb: capacity, count: 0, rows: Vec::with_capacity(capacity) }
    }

    fn reduce(&self, v: &mut F2Vec, comb: &mut F2Vec) {
        for (p, row, c) in &self.rows {
            if v.get(*p) {
                v.xor_assign(row);
                comb.xor_assign(c);
            }
        }
    }

    /// Insert the next generator; returns `Some(combination)` with a nontrivial
    /// dependency if the generator lies in the span of the previous ones.
    pub fn insert(&mut self, v: &F2Vec) -> Option<F2Vec> {
        assert_eq!(v.len(), self.len);
        assert!(self.count < self.len_comb, "SpanSolver capacity exceeded");
        let mut w = v.clone();
        let mut comb = F2Vec::unit(self.len_comb, self.count);
        self.count += 1;
        self.reduce(&mut w, &mut comb);
        match w.first_one() {
            Some(p) => {
                self.rows.push((p, w, comb));
                None
            }
            None => Some(comb),
        }
    }

    /// Coefficients expressing `v` over the inserted generators, if possible.
    pub fn solve(&self, v: &F2Vec) -> Option<F2Vec> {
        if v.len() != self.len {
            return None;
        }
        let mut w = v.clone();
        let mut comb = F2Vec::zeros(self.len_comb);
        self.reduce(&mut w, &mut comb);
        if w.is_zero() {
            Some(comb)
        } else {
            None
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        let mut w = v.clone();
        for (p, row, _) in &self.rows {
            if w.get(*p) {
                w.xor_assign(row);
            }
        }
        w.is_zero()
    }
}

/// Element (a | b) of F2^{2n}: `z` holds a, `x` holds b.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymplecticVec {
    pub z: F2Vec,
    pub x: F2Vec,
}

impl SymplecticVec {
    pub fn new(z: F2Vec, x: F2Vec) -> Result<Self> {
        if z.len() != x.len() {
            return dim("z and x parts have different lengths");
        }
        Ok(SymplecticVec { z, x })
    }

    pub fn zero(n: usize) -> Self {
        SymplecticVec { z: F2Vec::zeros(n), x: F2Vec::zeros(n) }
    }

    /// Z on a 1-based wire.
    pub fn e_z(n: usize, wire: usize) -> Self {
        let mut v = SymplecticVec::zero(n);
        v.z.set(wire - 1, true);
        v
    }

    /// X on a 1-based wire.
    pub fn e_x(n: usize, wire: usize) -> Self {
        let mut v = SymplecticVec::zero(n);
        v.x.set(wire - 1, true);
        v
    }

    pub fn all_x(n: usize) -> Self {
        SymplecticVec { z: F2Vec::zeros(n), x: F2Vec::ones(n) }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn is_zero(&self) -> bool {
        self.z.is_zero() && self.x.is_zero()
    }

    pub fn xor(&self, o: &SymplecticVec) -> SymplecticVec {
        SymplecticVec { z: self.z.xor(&o.z), x: self.x.xor(&o.x) }
    }

    pub fn xor_assign(&mut self, o: &SymplecticVec) {
        self.z.xor_assign(&o.z);
        self.x.xor_assign(&o.x);
    }

    /// Concatenation (a | b) as a single vector of length 2n.
    pub fn to_f2(&self) -> F2Vec {
        self.z.concat(&self.x)
    }

    pub fn from_f2(v: &F2Vec) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return dim("odd length cannot split into z and x parts");
        }
        let n = v.len() / 2;
        Ok(SymplecticVec { z: v.slice(0, n), x: v.slice(n, 2 * n) })
    }

    /// Row vector r with r·w = B(self, w) for w in (z | x) layout.
    pub fn form_row(&self) -> F2Vec {
        self.x.concat(&self.z)
    }

    /// Letter on a 0-based wire: 0=I, 1=Z, 2=X, 3=Y.
    pub fn letter(&self, i: usize) -> u8 {
        (self.z.get(i) as u8) | ((self.x.get(i) as u8) << 1)
    }

    pub fn set_letter(&mut self, i: usize, l: u8) {
        self.z.set(i, l & 1 == 1);
        self.x.set(i, l & 2 == 2);
    }

    /// Wires (0-based) where the vector is not the identity.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.z.iter_ones().chain(self.x.iter_ones()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Number of wires carrying Y.
    pub fn y_count(&self) -> usize {
        self.z.and_count(&self.x)
    }

    /// Letters I/X/Y/Z, wire 1 first.
    pub fn letters(&self) -> String {
        (0..self.n())
            .map(|i| match self.letter(i) {
                0 => 'I',
                1 => 'Z',
                2 => 'X',
                _ => 'Y',
            })
            .collect()
    }
}

impl fmt::Display for SymplecticVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.z, self.x)
    }
}

impl fmt::Debug for SymplecticVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letters())
    }
}

/// B(u, v) = a·b' + a'·b mod 2.
pub fn symplectic_form(u: &SymplecticVec, v: &SymplecticVec) -> Result<bool> {
    if u.n() != v.n() {
        return dim("symplectic form of vectors with different n");
    }
    Ok(sform(u, v))
}

#[inline]
pub(crate) fn sform(u: &SymplecticVec, v: &SymplecticVec) -> bool {
    (u.z.and_count(&v.x) + u.x.and_count(&v.z)) & 1 == 1
}

/// Ordered, linearly independent list of vectors in F2^{2n}.
#[derive(Clone, Debug)]
pub struct OrderedBasis {
    n: usize,
    vectors: Vec<SymplecticVec>,
    isotropic: bool,
    solver: SpanSolver,
}

impl PartialEq for OrderedBasis {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.vectors == o.vectors
    }
}
impl Eq for OrderedBasis {}

impl OrderedBasis {
    /// Checks independence and records whether the span is isotropic.
    pub fn new(n: usize, vectors: Vec<SymplecticVec>) -> Result<Self> {
        if vectors.iter().any(|v| v.n() != n) {
            return dim("basis vector with the wrong number of qubits");
        }
        let solver = build_solver(n, &vectors)?;
        let isotropic = is_isotropic(&vectors);
        Ok(OrderedBasis { n, vectors, isotropic, solver })
    }

    /// Like [`OrderedBasis::new`] but rejects a non-isotropic span.
    pub fn new_isotropic(n: usize, vectors: Vec<SymplecticVec>) -> Result<Self> {
        let b = OrderedBasis::new(n, vectors)?;
        if !b.isotropic {
            return Err(Error::Invalid("basis is not isotropic".into()));
        }
        Ok(b)
    }

    pub fn empty(n: usize) -> Self {
        OrderedBasis { n, vectors: Vec::new(), isotropic: true, solver: SpanSolver::new(2 * n, 0) }
    }

    /// Z on the given 1-based wires, in order.
    pub fn standard_z(n: usize, wires: impl IntoIterator<Item = usize>) -> Self {
        let v: Vec<_> = wires.into_iter().map(|w| SymplecticVec::e_z(n, w)).collect();
        OrderedBasis::new(n, v).expect("distinct coordinate vectors")
    }

    /// X on the given 1-based wires, in order.
    pub fn standard_x(n: usize, wires: impl IntoIterator<Item = usize>) -> Self {
        let v: Vec<_> = wires.into_iter().map(|w| SymplecticVec::e_x(n, w)).collect();
        OrderedBasis::new(n, v).expect("distinct coordinate vectors")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[SymplecticVec] {
        &self.vectors
    }

    pub fn is_isotropic(&self) -> bool {
        self.isotropic
    }

    /// Coefficients of `v` in this basis.
    pub fn coordinates(&self, v: &SymplecticVec) -> Option<F2Vec> {
        if v.n() != self.n {
            return None;
        }
        self.solver.solve(&v.to_f2())
    }

    pub fn contains(&self, v: &SymplecticVec) -> bool {
        v.n() == self.n && self.solver.contains(&v.to_f2())
    }

    /// ⊕ of the selected basis vectors.
    pub fn combine(&self, s: &F2Vec) -> SymplecticVec {
        let mut r = SymplecticVec::zero(self.n);
        for j in s.iter_ones() {
            r.xor_assign(&self.vectors[j]);
        }
        r
    }

    /// Same vectors mapped by `f`, assumed to be a symplectic bijection so that
    /// independence and isotropy carry over.
    pub fn map_trusted(&self, f: impl FnMut(&SymplecticVec) -> SymplecticVec) -> Self {
        let vectors: Vec<_> = self.vectors.iter().map(f).collect();
        let solver = build_solver(self.n, &vectors).expect("bijection preserves independence");
        OrderedBasis { n: self.n, vectors, isotropic: self.isotropic, solver }
    }
}

fn build_solver(n: usize, vectors: &[SymplecticVec]) -> Result<SpanSolver> {
    let mut solver = SpanSolver::new(2 * n, vectors.len());
    for v in vectors {
        if solver.insert(&v.to_f2()).is_some() {
            return Err(Error::Invalid("basis vectors are linearly dependent".into()));
        }
    }
    Ok(solver)
}

fn is_isotropic(vectors: &[SymplecticVec]) -> bool {
    if vectors.iter().all(|v| v.x.is_zero()) || vectors.iter().all(|v| v.z.is_zero()) {
        return true;
    }
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            if sform(&vectors[i], &vectors[j]) {
                return false;
            }
        }
    }
    true
}

/// Component i is B(x_i, v).
pub fn anticommutation_map(x: &OrderedBasis, v: &SymplecticVec) -> Result<F2Vec> {
    if v.n() != x.n() {
        return dim("anticommutation map with mismatched n");
    }
    Ok(F2Vec::from_fn(x.dim(), |i| sform(&x.vectors[i], v)))
}

/// span{x_j : z_j = 1}, as an affine space through the origin in F2^{2n}.
pub fn selected_subspace(x: &OrderedBasis, z: &F2Vec) -> Result<AffineSpace> {
    if z.len() != x.dim() {
        return dim("selector length differs from basis dimension");
    }
    let gens: Vec<F2Vec> = z.iter_ones().map(|j| x.vectors[j].to_f2()).collect();
    AffineSpace::new(F2Vec::zeros(2 * x.n()), &gens)
}

/// Number of basis vectors in the expansion of `v`.
pub fn basis_weight(x: &OrderedBasis, v: &SymplecticVec) -> Result<usize> {
    x.coordinates(v).map(|c| c.weight()).ok_or(Error::NotInSpan)
}

/// offset ⊕ span(basis), with the basis in reduced row-echelon form and the
/// offset reduced against it, so equal spaces are structurally equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineSpace {
    offset: F2Vec,
    basis: Vec<F2Vec>,
    pivots: Vec<usize>,
}

impl AffineSpace {
    pub fn new(offset: F2Vec, generators: &[F2Vec]) -> Result<Self> {
        let m = offset.len();
        if generators.iter().any(|g| g.len() != m) {
            return dim("affine generator of the wrong length");
        }
        let rr = gauss_eliminate(&F2Matrix { cols: m, rows: generators.to_vec() });
        let basis: Vec<F2Vec> = rr.rref.rows.into_iter().take(rr.rank).collect();
        let mut a = AffineSpace { offset, basis, pivots: rr.pivots };
        a.offset = a.reduce(&a.offset);
        Ok(a)
    }

    pub fn point(p: F2Vec) -> Self {
        AffineSpace { offset: p, basis: Vec::new(), pivots: Vec::new() }
    }

    fn reduce(&self, v: &F2Vec) -> F2Vec {
        let mut w = v.clone();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if w.get(p) {
                w.xor_assign(row);
            }
        }
        w
    }

    pub fn ambient(&self) -> usize {
        self.offset.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn offset(&self) -> &F2Vec {
        &self.offset
    }

    pub fn basis(&self) -> &[F2Vec] {
        &self.basis
    }

    pub fn contains(&self, p: &F2Vec) -> bool {
        p.len() == self.ambient() && self.reduce(&p.xor(&self.offset)).is_zero()
    }

    /// Translate by `t`.
    pub fn shifted(&self, t: &F2Vec) -> AffineSpace {
        let mut a = self.clone();
        a.offset = a.reduce(&a.offset.xor(t));
        a
    }

    /// Every point, in an unspecified order; callers bound the dimension.
    pub fn points(&self) -> Vec<F2Vec> {
        let mut out = vec![self.offset.clone()];
        for b in &self.basis {
            let extra: Vec<F2Vec> = out.iter().map(|p| p.xor(b)).collect();
            out.extend(extra);
        }
        out
    }

    /// True when `other` is a subset of `self`.
    pub fn contains_space(&self, other: &AffineSpace) -> bool {
        self.contains(&other.offset) && other.basis.iter().all(|b| self.reduce(b).is_zero())
    }
}

/// Exact intersection; `None` when empty.
pub fn affine_intersect(a: &AffineSpace, b: &AffineSpace) -> Result<Option<AffineSpace>> {
    let m = a.ambient();
    if b.ambient() != m {
        return dim("affine spaces in different ambient dimensions");
    }
    let ra = a.dim();
    let total = ra + b.dim();
    let mut solver = SpanSolver::new(m, total);
    let mut common = Vec::new();
    for g in a.basis.iter().chain(&b.basis) {
        if let Some(comb) = solver.insert(g) {
            let mut w = F2Vec::zeros(m);
            for i in comb.iter_ones().filter(|&i| i < ra) {
                w.xor_assign(&a.basis[i]);
            }
            common.push(w);
        }
    }
    let Some(comb) = solver.solve(&a.offset.xor(&b.offset)) else { return Ok(None) };
    let mut p = a.offset.clone();
    for i in comb.iter_ones().filter(|&i| i < ra) {
        p.xor_assign(&a.basis[i]);
    }
    Ok(Some(AffineSpace::new(p, &common)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_trivial_kernel() {
        let r = gauss_eliminate(&F2Matrix::identity(3));
        assert_eq!(r.rank, 3);
        assert!(r.kernel_basis.is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let r = gauss_eliminate(&F2Matrix::zeros(2, 4));
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel_basis.len(), 4);
    }

    #[test]
    fn ordering_is_lexicographic() {
        let a = F2Vec::parse("0111").unwrap();
        let b = F2Vec::parse("1000").unwrap();
        assert!(a < b);
        let c = F2Vec::parse("0110").unwrap();
        assert!(c < a);
    }

    #[test]
    fn form_examples() {
        assert!(sform(&SymplecticVec::e_z(1, 1), &SymplecticVec::e_x(1, 1)));
        assert!(!sform(&SymplecticVec::e_z(2, 1), &SymplecticVec::e_z(2, 2)));
    }

    #[test]
    fn selected_subspace_extremes() {
        let x = OrderedBasis::standard_z(3, 1..=3);
        let s0 = selected_subspace(&x, &F2Vec::zeros(3)).unwrap();
        assert_eq!(s0.dim(), 0);
        let s1 = selected_subspace(&x, &F2Vec::ones(3)).unwrap();
        assert_eq!(s1.dim(), 3);
    }

    #[test]
    fn parallel_lines_do_not_meet() {
        let d = F2Vec::parse("10").unwrap();
        let a = AffineSpace::new(F2Vec::parse("00").unwrap(), std::slice::from_ref(&d)).unwrap();
        let b = AffineSpace::new(F2Vec::parse("01").unwrap(), &[d]).unwrap();
        assert!(affine_intersect(&a, &b).unwrap().is_none());
        assert_eq!(affine_intersect(&a, &a).unwrap().unwrap(), a);
    }

    #[test]
    fn basis_weight_of_pair() {
        let x = OrderedBasis::standard_z(3, 1..=3);
        let v = SymplecticVec::e_z(3, 1).xor(&SymplecticVec::e_z(3, 3));
        assert_eq!(basis_weight(&x, &v).unwrap(), 2);
        assert_eq!(basis_weight(&x, &SymplecticVec::zero(3)).unwrap(), 0);
        assert!(basis_weight(&x, &SymplecticVec::e_x(3, 1)).is_err());
    }
}

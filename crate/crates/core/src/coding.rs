//! Binary linear codes, weight enumerators and 1-remainder generator matrices.

use crate::error::{dim, invalid, Error, Result};
use crate::exactnum::{ExactScalar, RealRoot2};
use crate::f2core::{gauss_eliminate, F2Matrix, F2Vec};

/// Default cap on log2 of the number of enumerated codewords.
pub const DEFAULT_RANK_BOUND: usize = 22;

/// The row space of a generator matrix. Rows may be dependent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCode {
    generator: F2Matrix,
    basis: Vec<F2Vec>,
}

impl BinaryCode {
    pub fn new(generator: F2Matrix) -> Self {
        let r = gauss_eliminate(&generator);
        let basis = r.rref.rows()[..r.rank].to_vec();
        BinaryCode { generator, basis }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(BinaryCode::new(F2Matrix::parse(text)?))
    }

    pub fn generator(&self) -> &F2Matrix {
        &self.generator
    }

    /// Code length.
    pub fn len(&self) -> usize {
        self.generator.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Reduced basis of the code.
    pub fn basis(&self) -> &[F2Vec] {
        &self.basis
    }

    /// Every codeword, in Gray-code order.
    pub fn codewords(&self, rank_bound: usize) -> Result<Vec<F2Vec>> {
        let mut out = Vec::new();
        self.for_each_codeword(rank_bound, |v| out.push(v.clone()))?;
        Ok(out)
    }

    fn for_each_codeword(&self, rank_bound: usize, mut f: impl FnMut(&F2Vec)) -> Result<()> {
        let k = self.rank();
        if k > rank_bound || k >= 63 {
            return Err(Error::Budget(format!("code of rank {k} exceeds the enumeration bound 2^{rank_bound}")));
        }
        let mut v = F2Vec::zeros(self.len());
        f(&v);
        for i in 1u64..(1u64 << k) {
            v.xor_assign(&self.basis[i.trailing_zeros() as usize]);
            f(&v);
        }
        Ok(())
    }

    /// (a_0, …, a_n) with a_j the number of codewords of weight j.
    pub fn weight_distribution(&self, rank_bound: usize) -> Result<Vec<u64>> {
        let mut a = vec![0u64; self.len() + 1];
        self.for_each_codeword(rank_bound, |v| a[v.weight()] += 1)?;
        Ok(a)
    }

    /// Generator with every row repeated k times side by side.
    pub fn repeat(&self, k: usize) -> Result<BinaryCode> {
        if k == 0 {
            return invalid("repetition count must be at least 1");
        }
        let rows = self
            .generator
            .rows()
            .iter()
            .map(|r| (1..k).fold(r.clone(), |acc, _| acc.concat(r)))
            .collect();
        Ok(BinaryCode::new(F2Matrix::new(rows, self.len() * k)?))
    }
}

pub fn weight_distribution(v: &BinaryCode) -> Result<Vec<u64>> {
    v.weight_distribution(DEFAULT_RANK_BOUND)
}

pub fn repeat_code(v: &BinaryCode, k: usize) -> Result<BinaryCode> {
    v.repeat(k)
}

/// Σ_j a_j α^j for a real α.
pub fn wt_eval_real(dist: &[u64], alpha: &RealRoot2) -> RealRoot2 {
    dist.iter()
        .rev()
        .fold(RealRoot2::zero(), |acc, &a| &(&acc * alpha) + &RealRoot2::from_bigint(a.into()))
}

/// Σ_j a_j α^j over Z[ω, 1/√2].
pub fn wt_eval(dist: &[u64], alpha: &ExactScalar) -> ExactScalar {
    dist.iter()
        .rev()
        .fold(ExactScalar::zero(), |acc, &a| &(&acc * alpha) + &ExactScalar::from_int(a as i64))
}

pub fn binary_weight_decide(v: &BinaryCode, t: usize) -> Result<bool> {
    if t > v.len() {
        return Ok(false);
    }
    Ok(v.weight_distribution(DEFAULT_RANK_BOUND)?[t] > 0)
}

/// G = [I_k | … | I_k | P | … | P] with r identity blocks and s copies of P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneRemainderMatrix {
    k: usize,
    r: usize,
    s: usize,
    p: F2Matrix,
}

impl OneRemainderMatrix {
    pub fn build(p: F2Matrix, r: usize, s: usize) -> Result<Self> {
        if r % 4 != 1 {
            return invalid(format!("identity block count {r} is not 1 mod 4"));
        }
        if !s.is_multiple_of(4) {
            return invalid(format!("P block count {s} is not 0 mod 4"));
        }
        let k = p.nrows();
        if k == 0 {
            return dim("P needs at least one row");
        }
        Ok(OneRemainderMatrix { k, r, s, p })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn p(&self) -> &F2Matrix {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.r * self.k + self.s * self.p.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn generator(&self) -> F2Matrix {
        let rows = (0..self.k)
            .map(|i| {
                let e = F2Vec::unit(self.k, i);
                let mut row = F2Vec::zeros(0);
                for _ in 0..self.r {
                    row = row.concat(&e);
                }
                for _ in 0..self.s {
                    row = row.concat(self.p.row(i));
                }
                row
            })
            .collect();
        F2Matrix::new(rows, self.len()).expect("block widths are consistent")
    }

    pub fn code(&self) -> BinaryCode {
        BinaryCode::new(self.generator())
    }

    /// Same structure with every block count multiplied by m. For m ≡ 1 mod 4
    /// this is a column permutation of m side-by-side copies of the generator.
    pub fn scaled(&self, m: usize) -> Result<Self> {
        OneRemainderMatrix::build(self.p.clone(), self.r * m, self.s * m)
    }

    /// Recognize the block structure of G. P is taken as narrow as possible.
    pub fn validate(g: &F2Matrix) -> Option<Self> {
        let k = g.nrows();
        let n = g.ncols();
        if k == 0 || n < k {
            return None;
        }
        let block = |start: usize, width: usize| -> Vec<F2Vec> { g.rows().iter().map(|r| r.slice(start, start + width)).collect() };
        let ident: Vec<F2Vec> = (0..k).map(|i| F2Vec::unit(k, i)).collect();
        let mut max_r = 0;
        while (max_r + 1) * k <= n && block(max_r * k, k) == ident {
            max_r += 1;
        }
        for r in (1..=max_r).rev().filter(|r| r % 4 == 1) {
            let rest = n - r * k;
            if rest == 0 {
                let p = F2Matrix::zeros(k, 0);
                return OneRemainderMatrix::build(p, r, 0).ok();
            }
            for s in (1..=rest / 4).rev().map(|q| 4 * q) {
                if !rest.is_multiple_of(s) {
                    continue;
                }
                let w = rest / s;
                let first = block(r * k, w);
                if (1..s).all(|b| block(r * k + b * w, w) == first) {
                    let p = F2Matrix::new(first, w).ok()?;
                    return OneRemainderMatrix::build(p, r, s).ok();
                }
            }
        }
        None
    }
}

pub fn build_one_remainder(p: F2Matrix, r: usize, s: usize) -> Result<OneRemainderMatrix> {
    OneRemainderMatrix::build(p, r, s)
}

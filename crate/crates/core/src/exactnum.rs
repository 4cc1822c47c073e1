//! Exact arithmetic in Z[ω, 1/√2], Z[√2, 1/2] and Q(√2).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::f2core::F2Vec;

/// (c0 + c1 ω + c2 ω² + c3 ω³) / √2^k with ω = e^{iπ/4}, k minimal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    c: [BigInt; 4],
    k: u32,
}

/// z·√2 on coefficient arrays, using √2 = ω − ω³.
fn times_sqrt2(c: &[BigInt; 4]) -> [BigInt; 4] {
    [&c[1] - &c[3], &c[0] + &c[2], &c[1] + &c[3], &c[2] - &c[0]]
}

fn divisible_by_sqrt2(c: &[BigInt; 4]) -> bool {
    (&c[0] - &c[2]).is_even() && (&c[1] - &c[3]).is_even()
}

fn div_sqrt2(c: &[BigInt; 4]) -> [BigInt; 4] {
    let two = BigInt::from(2);
    [(&c[1] - &c[3]) / &two, (&c[0] + &c[2]) / &two, (&c[1] + &c[3]) / &two, (&c[2] - &c[0]) / &two]
}

fn mul_omega_arr(c: &[BigInt; 4], j: u32) -> [BigInt; 4] {
    let mut r = c.clone();
    for _ in 0..(j % 8) {
        r = [-r[3].clone(), r[0].clone(), r[1].clone(), r[2].clone()];
    }
    r
}

impl ExactScalar {
    /// Build from raw coefficients and denominator exponent, normalizing.
    pub fn new(c: [BigInt; 4], k: u32) -> Self {
        let mut s = ExactScalar { c, k };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.c.iter().all(|x| x.is_zero()) {
            self.k = 0;
            return;
        }
        while self.k > 0 && divisible_by_sqrt2(&self.c) {
            self.c = div_sqrt2(&self.c);
            self.k -= 1;
        }
    }

    pub fn zero() -> Self {
        ExactScalar { c: Default::default(), k: 0 }
    }

    pub fn one() -> Self {
        ExactScalar::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        ExactScalar { c: [BigInt::from(v), BigInt::zero(), BigInt::zero(), BigInt::zero()], k: 0 }
    }

    /// ω^j.
    pub fn omega_pow(j: u32) -> Self {
        let mut c: [BigInt; 4] = Default::default();
        let j = j % 8;
        if j < 4 {
            c[j as usize] = BigInt::one();
        } else {
            c[(j - 4) as usize] = -BigInt::one();
        }
        ExactScalar { c, k: 0 }
    }

    /// i^j.
    pub fn i_pow(j: u32) -> Self {
        ExactScalar::omega_pow(2 * (j % 4))
    }

    /// 1/√2^k.
    pub fn inv_sqrt2_pow(k: u32) -> Self {
        ExactScalar::new([BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::zero()], k)
    }

    pub fn sqrt2() -> Self {
        ExactScalar::new(times_sqrt2(&ExactScalar::one().c), 0)
    }

    pub fn coeffs(&self) -> &[BigInt; 4] {
        &self.c
    }

    pub fn denom_exp(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        *self == ExactScalar::one()
    }

    /// Multiply by ω^j.
    pub fn mul_omega(&self, j: u32) -> Self {
        ExactScalar { c: mul_omega_arr(&self.c, j), k: self.k }
    }

    /// Divide by √2^m.
    pub fn div_sqrt2_pow(&self, m: u32) -> Self {
        ExactScalar::new(self.c.clone(), self.k + m)
    }

    /// Complex conjugate: ω ↦ ω⁻¹ = −ω³.
    pub fn conj(&self) -> Self {
        ExactScalar { c: [self.c[0].clone(), -self.c[3].clone(), -self.c[2].clone(), -self.c[1].clone()], k: self.k }
    }

    /// |z|².
    pub fn norm_sqr(&self) -> Self {
        self * &self.conj()
    }

    /// True when the value is real.
    pub fn is_real(&self) -> bool {
        self.c[2].is_zero() && self.c[1] == -self.c[3].clone()
    }

    fn lift(&self, k: u32) -> [BigInt; 4] {
        let mut c = self.c.clone();
        let mut d = k - self.k;
        while d >= 2 {
            for x in c.iter_mut() {
                *x <<= 1;
            }
            d -= 2;
        }
        if d == 1 {
            c = times_sqrt2(&c);
        }
        c
    }

    /// (re, im) as floating point, for tests and display only.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f: Vec<f64> = self.c.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
        let s = (2f64).sqrt().powi(self.k as i32);
        ((f[0] + h * f[1] - h * f[3]) / s, (h * f[1] + f[2] + h * f[3]) / s)
    }

    /// Converts a real value to (a + b√2)/2^ℓ.
    pub fn to_real_root2(&self) -> Result<RealRoot2> {
        if !self.is_real() {
            return invalid("value is not real");
        }
        // c0 + c1(ω − ω³) = c0 + c1 √2 ... divided by √2^k
        let a = self.c[0].clone();
        let b = self.c[1].clone();
        let base = RealRoot2::new(a, b, 0);
        let half = self.k / 2;
        let mut r = RealRoot2::new(base.a.clone(), base.b.clone(), half);
        if self.k % 2 == 1 {
            r = &r * &RealRoot2::inv_sqrt2();
        }
        Ok(r)
    }

    pub fn from_real_root2(r: &RealRoot2) -> Self {
        let c = [r.a.clone(), r.b.clone(), BigInt::zero(), -r.b.clone()];
        ExactScalar::new(c, 2 * r.l)
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        ExactScalar::zero()
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        let k = self.k.max(o.k);
        let a = self.lift(k);
        let b = o.lift(k);
        ExactScalar::new([&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2], &a[3] + &b[3]], k)
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        self + &(-o)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]], k: self.k }
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        let mut r: [BigInt; 4] = Default::default();
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                let p = &self.c[i] * &o.c[j];
                if i + j < 4 {
                    r[i + j] += p;
                } else {
                    r[i + j - 4] -= p;
                }
            }
        }
        ExactScalar::new(r, self.k + o.k)
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
owned_ops!(ExactScalar);
owned_ops!(RealRoot2);

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})/sqrt2^{}", self.c[0], self.c[1], self.c[2], self.c[3], self.k)
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// (a + b√2) / 2^ℓ, with ℓ minimal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RealRoot2 {
    a: BigInt,
    b: BigInt,
    l: u32,
}

impl RealRoot2 {
    pub fn new(a: BigInt, b: BigInt, l: u32) -> Self {
        let mut r = RealRoot2 { a, b, l };
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        if self.a.is_zero() && self.b.is_zero() {
            self.l = 0;
            return;
        }
        while self.l > 0 && self.a.is_even() && self.b.is_even() {
            self.a >>= 1;
            self.b >>= 1;
            self.l -= 1;
        }
    }

    pub fn zero() -> Self {
        RealRoot2 { a: BigInt::zero(), b: BigInt::zero(), l: 0 }
    }

    pub fn one() -> Self {
        RealRoot2::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        RealRoot2 { a: BigInt::from(v), b: BigInt::zero(), l: 0 }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        RealRoot2 { a: v, b: BigInt::zero(), l: 0 }
    }

    pub fn sqrt2() -> Self {
        RealRoot2 { a: BigInt::zero(), b: BigInt::one(), l: 0 }
    }

    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        RealRoot2 { a: BigInt::zero(), b: BigInt::one(), l: 1 }
    }

    /// (1/√2)^m.
    pub fn inv_sqrt2_pow(m: u32) -> Self {
        if m.is_multiple_of(2) {
            RealRoot2::new(BigInt::one(), BigInt::zero(), m / 2)
        } else {
            RealRoot2::new(BigInt::zero(), BigInt::one(), m / 2 + 1)
        }
    }

    /// √2^m.
    pub fn sqrt2_pow(m: u32) -> Self {
        let p = BigInt::one() << (m / 2);
        if m.is_multiple_of(2) {
            RealRoot2::from_bigint(p)
        } else {
            RealRoot2 { a: BigInt::zero(), b: p, l: 0 }
        }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn denom_exp(&self) -> u32 {
        self.l
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Multiply by 2^e (e may be negative).
    pub fn scale_pow2(&self, e: i64) -> Self {
        if e >= 0 {
            let e = e as u32;
            let drop = e.min(self.l);
            let rest = e - drop;
            RealRoot2::new(&self.a << rest, &self.b << rest, self.l - drop)
        } else {
            RealRoot2::new(self.a.clone(), self.b.clone(), self.l + (-e) as u32)
        }
    }

    /// Sign of a + b√2 (−1, 0, 1), decided exactly.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // opposite signs: compare a² with 2b²
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * 2;
        match a2.cmp(&b2) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        (a + b * std::f64::consts::SQRT_2) / 2f64.powi(self.l as i32)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = RealRoot2::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        r
    }

    pub fn to_qsqrt2(&self) -> QSqrt2 {
        let d = BigInt::one() << self.l;
        QSqrt2 {
            a: BigRational::new(self.a.clone(), d.clone()),
            b: BigRational::new(self.b.clone(), d),
        }
    }
}

fn sign_of(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl Add for &RealRoot2 {
    type Output = RealRoot2;
    fn add(self, o: &RealRoot2) -> RealRoot2 {
        let l = self.l.max(o.l);
        let (sa, sb) = (&self.a << (l - self.l), &self.b << (l - self.l));
        let (oa, ob) = (&o.a << (l - o.l), &o.b << (l - o.l));
        RealRoot2::new(sa + oa, sb + ob, l)
    }
}

impl Sub for &RealRoot2 {
    type Output = RealRoot2;
    fn sub(self, o: &RealRoot2) -> RealRoot2 {
        self + &(-o)
    }
}

impl Neg for &RealRoot2 {
    type Output = RealRoot2;
    fn neg(self) -> RealRoot2 {
        RealRoot2 { a: -&self.a, b: -&self.b, l: self.l }
    }
}

impl Mul for &RealRoot2 {
    type Output = RealRoot2;
    fn mul(self, o: &RealRoot2) -> RealRoot2 {
        let a = &self.a * &o.a + (&self.b * &o.b) * 2;
        let b = &self.a * &o.b + &self.b * &o.a;
        RealRoot2::new(a, b, self.l + o.l)
    }
}

impl fmt::Display for RealRoot2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt2)/2^{}", self.a, self.b, self.l)
    }
}

impl fmt::Debug for RealRoot2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// a + b√2 with rational a, b.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSqrt2 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt2 {
    pub fn zero() -> Self {
        QSqrt2 { a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn one() -> Self {
        QSqrt2 { a: BigRational::one(), b: BigRational::zero() }
    }

    pub fn from_rational(a: BigRational) -> Self {
        QSqrt2 { a, b: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    pub fn neg(&self) -> QSqrt2 {
        QSqrt2 { a: -&self.a, b: -&self.b }
    }

    pub fn mul(&self, o: &QSqrt2) -> QSqrt2 {
        let two = BigRational::from_integer(BigInt::from(2));
        QSqrt2 { a: &self.a * &o.a + &self.b * &o.b * two, b: &self.a * &o.b + &self.b * &o.a }
    }

    /// Multiplicative inverse via the conjugate a − b√2.
    pub fn inv(&self) -> Result<QSqrt2> {
        let two = BigRational::from_integer(BigInt::from(2));
        let n = &self.a * &self.a - &self.b * &self.b * two;
        if n.is_zero() {
            return invalid("division by zero in Q(sqrt2)");
        }
        Ok(QSqrt2 { a: &self.a / &n, b: -&self.b / &n })
    }

    /// Exact conversion when both parts are dyadic.
    pub fn to_real_root2(&self) -> Result<RealRoot2> {
        let da = self.a.denom();
        let db = self.b.denom();
        let la = dyadic_exp(da).ok_or_else(|| Error::Invalid("non-dyadic rational".into()))?;
        let lb = dyadic_exp(db).ok_or_else(|| Error::Invalid("non-dyadic rational".into()))?;
        let l = la.max(lb);
        let a = self.a.numer() << (l - la);
        let b = self.b.numer() << (l - lb);
        Ok(RealRoot2::new(a, b, l))
    }

    /// Rational value when the √2 part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }
}

fn dyadic_exp(d: &BigInt) -> Option<u32> {
    let tz = d.trailing_zeros().unwrap_or(0);
    if (d >> tz) == BigInt::one() {
        Some(tz as u32)
    } else {
        None
    }
}

/// Σ_j (−1)^{signs_j} mask_j √2^j.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GBRoot2Expr {
    pub signs: F2Vec,
    pub mask: F2Vec,
}

impl GBRoot2Expr {
    pub fn new(signs: F2Vec, mask: F2Vec) -> Result<Self> {
        if signs.len() != mask.len() {
            return invalid("signs and mask have different lengths");
        }
        Ok(GBRoot2Expr { signs, mask })
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }
}

pub fn gb_value(e: &GBRoot2Expr) -> RealRoot2 {
    let mut r = RealRoot2::zero();
    for j in e.mask.iter_ones() {
        let t = RealRoot2::sqrt2_pow(j as u32);
        r = if e.signs.get(j) { &r - &t } else { &r + &t };
    }
    r
}

/// Even positions carry the bits of |a|, odd positions the bits of |b|.
pub fn gb_from_value(r: &RealRoot2) -> Result<GBRoot2Expr> {
    if r.l != 0 {
        return invalid("gb_from_value needs an element of Z[sqrt2]");
    }
    let ba = r.a.magnitude().bits() as usize;
    let bb = r.b.magnitude().bits() as usize;
    let len = (2 * ba).max(2 * bb);
    let mut mask = F2Vec::zeros(len);
    let mut signs = F2Vec::zeros(len);
    let ma = r.a.magnitude();
    let mb = r.b.magnitude();
    for i in 0..ba {
        if ma.bit(i as u64) {
            mask.set(2 * i, true);
            signs.set(2 * i, r.a.is_negative());
        }
    }
    for i in 0..bb {
        if mb.bit(i as u64) {
            mask.set(2 * i + 1, true);
            signs.set(2 * i + 1, r.b.is_negative());
        }
    }
    Ok(GBRoot2Expr { signs, mask })
}

/// Node x_j = α^{4j+1}, α = 1/√2.
pub fn vandermonde_node(j: usize) -> QSqrt2 {
    RealRoot2::inv_sqrt2_pow(4 * j as u32 + 1).to_qsqrt2()
}

/// β = Π_{j=1}^n (1 − α^{4j}).
pub fn vandermonde_beta(n: usize) -> BigRational {
    let mut b = BigRational::one();
    for j in 1..=n {
        let q = BigRational::new(BigInt::one(), BigInt::one() << (2 * j));
        b *= BigRational::one() - q;
    }
    b
}

/// Inverse of the Vandermonde matrix M_{ij} = x_i^j for arbitrary distinct nodes:
/// entry (t, j) is the coefficient of γ_j in the t-th unknown.
pub fn vandermonde_inverse(nodes: &[QSqrt2]) -> Result<Vec<Vec<QSqrt2>>> {
    let n1 = nodes.len();
    let mut inv = vec![vec![QSqrt2::zero(); n1]; n1];
    for j in 0..n1 {
        // Π_{m≠j}(y − x_m) as coefficients in y, then divide by Π_{m≠j}(x_j − x_m).
        let mut poly = vec![QSqrt2::one()];
        let mut den = QSqrt2::one();
        for (m, xm) in nodes.iter().enumerate() {
            if m == j {
                continue;
            }
            let mut next = vec![QSqrt2::zero(); poly.len() + 1];
            for (d, c) in poly.iter().enumerate() {
                next[d + 1] = next[d + 1].add(c);
                next[d] = next[d].sub(&c.mul(xm));
            }
            poly = next;
            den = den.mul(&nodes[j].sub(xm));
        }
        let dinv = den.inv()?;
        for (t, row) in inv.iter_mut().enumerate() {
            row[j] = poly[t].mul(&dinv);
        }
    }
    Ok(inv)
}

/// The entries β·d_tj for j = 0..n, where (d_tj) is the inverse of
/// M_{ij} = α^{(4i+1)j}, i.e. Σ_j d_tj x_j^i = [i = t].
pub fn vandermonde_inverse_row(n: usize, t: usize) -> Result<Vec<RealRoot2>> {
    if t > n {
        return invalid("row index exceeds n");
    }
    let nodes: Vec<QSqrt2> = (0..=n).map(vandermonde_node).collect();
    let inv = vandermonde_inverse(&nodes)?;
    let beta = QSqrt2::from_rational(vandermonde_beta(n));
    inv[t].iter().map(|d| beta.mul(d).to_real_root2()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_from_roots() {
        let h = ExactScalar::inv_sqrt2_pow(1);
        assert_eq!(&h * &h, ExactScalar::inv_sqrt2_pow(2));
        assert_eq!(ExactScalar::omega_pow(4), ExactScalar::from_int(-1));
    }

    #[test]
    fn sqrt2_normalizes() {
        let s = ExactScalar::sqrt2();
        assert_eq!(&s * &ExactScalar::inv_sqrt2_pow(1), ExactScalar::one());
        assert_eq!(&s * &s, ExactScalar::from_int(2));
        assert_eq!(s.to_string(), "(0,1,0,-1)/sqrt2^0");
    }

    #[test]
    fn gb_examples() {
        let e = GBRoot2Expr::new(F2Vec::parse("001").unwrap(), F2Vec::parse("101").unwrap()).unwrap();
        assert_eq!(gb_value(&e), RealRoot2::from_int(-1));
        let e = GBRoot2Expr::new(F2Vec::parse("000").unwrap(), F2Vec::parse("010").unwrap()).unwrap();
        assert_eq!(gb_value(&e), RealRoot2::sqrt2());
        assert!(gb_from_value(&RealRoot2::zero()).unwrap().mask.is_zero());
    }

    #[test]
    fn beta_for_one() {
        assert_eq!(vandermonde_beta(1), BigRational::new(BigInt::from(3), BigInt::from(4)));
    }

    #[test]
    fn real_root2_roundtrip_through_exact() {
        let r = RealRoot2::new(BigInt::from(3), BigInt::from(-5), 3);
        let e = ExactScalar::from_real_root2(&r);
        assert!(e.is_real());
        assert_eq!(e.to_real_root2().unwrap(), r);
    }

    #[test]
    fn signum_exact() {
        assert_eq!(RealRoot2::new(BigInt::from(-1), BigInt::from(1), 0).signum(), 1);
        assert_eq!(RealRoot2::new(BigInt::from(2), BigInt::from(-2), 0).signum(), -1);
    }
}

mod common;

use common::pauli;
use num_bigint::BigInt;
use num_rational::BigRational;
use pauliconj::coding::{wt_eval_real, BinaryCode};
use pauliconj::exactnum::*;
use pauliconj::f2core::*;
use proptest::prelude::*;

fn f2vec(len: usize) -> impl Strategy<Value = F2Vec> {
    prop::collection::vec(any::<bool>(), len).prop_map(|b| F2Vec::from_bools(&b))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = F2Matrix> {
    prop::collection::vec(f2vec(cols), rows).prop_map(move |r| F2Matrix::new(r, cols).unwrap())
}

fn scalar() -> impl Strategy<Value = ExactScalar> {
    (prop::array::uniform4(-6i64..=6), 0u32..4).prop_map(|(c, k)| ExactScalar::new(c.map(BigInt::from), k))
}

fn affine(m: usize) -> impl Strategy<Value = AffineSpace> {
    (f2vec(m), prop::collection::vec(f2vec(m), 0..4)).prop_map(|(o, g)| AffineSpace::new(o, &g).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn symplectic_form_is_bilinear_and_alternating(u in pauli(4), v in pauli(4), w in pauli(4)) {
        let b = |a: &SymplecticVec, c: &SymplecticVec| symplectic_form(a, c).unwrap();
        prop_assert_eq!(b(&u.xor(&w), &v), b(&u, &v) ^ b(&w, &v));
        prop_assert!(!b(&u, &u));
        prop_assert_eq!(b(&u, &v), b(&v, &u));
    }

    #[test]
    fn intersection_matches_scan(a in affine(6), b in affine(6)) {
        let meet = affine_intersect(&a, &b).unwrap();
        let mut scan: Vec<F2Vec> = (0..64u64).map(|i| F2Vec::from_u64(6, i)).filter(|p| a.contains(p) && b.contains(p)).collect();
        scan.sort();
        match meet {
            None => prop_assert!(scan.is_empty()),
            Some(s) => {
                let mut pts = s.points();
                pts.sort();
                prop_assert_eq!(pts, scan);
            }
        }
    }

    #[test]
    fn gauss_is_idempotent(m in matrix(5, 7)) {
        let r = gauss_eliminate(&m);
        let again = gauss_eliminate(&r.rref);
        prop_assert_eq!(&again.rref, &r.rref);
        prop_assert_eq!(r.rank, m.rank());
        for k in &r.kernel_basis {
            prop_assert!(m.mul_vec(k).unwrap().is_zero());
        }
        prop_assert_eq!(r.kernel_basis.len() + r.rank, 7);
    }

    #[test]
    fn isotropic_spans_commute(vs in prop::collection::vec(pauli(3), 1..4), sel in f2vec(3)) {
        // Keep a greedy isotropic, independent prefix.
        let mut kept: Vec<SymplecticVec> = Vec::new();
        for v in vs {
            if kept.iter().all(|k| !symplectic_form(k, &v).unwrap()) && !v.is_zero() {
                let mut trial = kept.clone();
                trial.push(v);
                if OrderedBasis::new_isotropic(3, trial.clone()).is_ok() {
                    kept = trial;
                }
            }
        }
        prop_assume!(!kept.is_empty());
        let x = OrderedBasis::new_isotropic(3, kept).unwrap();
        let s = F2Vec::from_fn(x.dim(), |i| sel.get(i % 3));
        let u = x.combine(&s);
        prop_assert!(anticommutation_map(&x, &u).unwrap().is_zero());
    }

    #[test]
    fn scalar_ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a - &a, ExactScalar::zero());
    }

    #[test]
    fn norm_is_real_and_nonnegative(a in scalar()) {
        let n = &a.conj() * &a;
        prop_assert!(n.is_real());
        prop_assert_eq!(n.coeffs()[1].clone(), -n.coeffs()[3].clone());
        prop_assert!(n.to_complex_f64().0 >= -1e-12);
        prop_assert_eq!(n, a.norm_sqr());
    }

    #[test]
    fn vandermonde_reconstructs_weights(m in (1usize..=4).prop_flat_map(|k| matrix(k, 7))) {
        let v = BinaryCode::new(m);
        let n = v.len();
        let dist = v.weight_distribution(22).unwrap();
        let beta = RealRoot2::from_bigint(vandermonde_beta(n).numer().clone());
        let beta_den = RealRoot2::from_bigint(vandermonde_beta(n).denom().clone());
        for t in 0..=n {
            let row = vandermonde_inverse_row(n, t).unwrap();
            let lhs = row.iter().enumerate().fold(RealRoot2::zero(), |acc, (j, d)| {
                let alpha = RealRoot2::inv_sqrt2().pow(4 * j as u32 + 1);
                &acc + &(d * &wt_eval_real(&dist, &alpha))
            });
            // β b_t with β = num/den.
            prop_assert_eq!(&lhs * &beta_den, &beta * &RealRoot2::from_int(dist[t] as i64));
        }
    }
}

#[test]
fn vandermonde_inverse_is_exact() {
    for n in 0..=6usize {
        let nodes: Vec<QSqrt2> = (0..=n).map(vandermonde_node).collect();
        let inv = vandermonde_inverse(&nodes).unwrap();
        for (t, row) in inv.iter().enumerate() {
            for s in 0..=n {
                let mut acc = QSqrt2::zero();
                for (j, d) in row.iter().enumerate() {
                    let mut p = QSqrt2::one();
                    for _ in 0..s {
                        p = p.mul(&nodes[j]);
                    }
                    acc = acc.add(&d.mul(&p));
                }
                let want = if s == t { QSqrt2::one() } else { QSqrt2::zero() };
                assert_eq!(acc, want, "n={n} t={t} s={s}");
            }
        }
    }
}

#[test]
fn beta_clears_denominators() {
    assert_eq!(vandermonde_beta(0), BigRational::from_integer(1.into()));
    for n in 0..=6 {
        for t in 0..=n {
            assert!(vandermonde_inverse_row(n, t).is_ok());
        }
    }
    assert!(vandermonde_inverse_row(2, 3).is_err());
}

#[test]
fn gb_values_roundtrip() {
    for a in -20i64..=20 {
        for b in -20i64..=20 {
            let r = RealRoot2::new(a.into(), b.into(), 0);
            let e = gb_from_value(&r).unwrap();
            assert_eq!(gb_value(&e), r);
        }
    }
}

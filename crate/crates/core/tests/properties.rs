mod common;

use common::corpus;
use heightbound::analytic::{faltings_height, log_modular_discriminant_bits, reduce_tau, Complex, ErrReal, TauPoint};
use heightbound::arith::rat;
use heightbound::bounds::{rank_bound, RankBoundInputs};
use heightbound::curve::{
    classify_reduction, conductor_norms, minimal_model, CurvePoint, MinimalModelResult, Transform,
};
use heightbound::heights::{canonical_height, height_pairing};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use std::sync::OnceLock;

type Entry = (String, MinimalModelResult, Vec<CurvePoint>, usize);

fn entries() -> &'static [Entry] {
    static C: OnceLock<Vec<Entry>> = OnceLock::new();
    C.get_or_init(corpus)
}

fn with_points() -> Vec<&'static Entry> {
    entries().iter().filter(|e| !e.2.is_empty()).collect()
}

/// x = u^2 x' + r, y = u^3 y' + s u^2 x' + t with u = 1/k, so the new
/// model is integral but not minimal when k > 1.
fn coordinate_change() -> impl Strategy<Value = Transform> {
    (
        prop::sample::select(vec![1i64, 2, 3, 6]),
        -5i64..=5,
        -5i64..=5,
        -5i64..=5,
    )
        .prop_map(|(k, r, s, t)| Transform {
            u: rat(1, k),
            r: rat(r, 1),
            s: rat(s, 1),
            t: rat(t, 1),
        })
}

fn radical(n: &BigInt) -> BigInt {
    let mut n = n.abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out *= &p;
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out *= n;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minimal_model_ignores_coordinates(i in 0usize..27, t in coordinate_change()) {
        let (label, min, _, _) = &entries()[i % entries().len()];
        let moved = min.curve.transform(&t);
        let again = minimal_model(&moved).unwrap();
        prop_assert_eq!(&again.disc_min, &min.disc_min, "{}", label);
        prop_assert_eq!(again.c4_min(), min.c4_min(), "{}", label);
        for p in min.bad_primes() {
            let a = classify_reduction(&again, &p).unwrap();
            let b = classify_reduction(min, &p).unwrap();
            prop_assert_eq!(a.kind, b.kind, "{} at {}", label, p);
        }
    }

    #[test]
    fn multiplication_is_additive(i in 0usize..16, m in -20i64..=20, n in -20i64..=20) {
        let pts = with_points();
        let (_, min, gens, _) = pts[i % pts.len()];
        let e = &min.curve;
        let p = &gens[0];
        prop_assert_eq!(e.mul(m + n, p), e.add(&e.mul(m, p), &e.mul(n, p)));
    }
}

#[test]
fn conductor_is_radical_of_discriminant() {
    for (label, min, _, _) in entries() {
        let norms = conductor_norms(min, 128).unwrap();
        let rad = radical(&min.disc_min);
        assert_eq!(BigInt::from(norms.n0()), rad, "{label}");
        let log_rad = ErrReal::from_bigint(&rad, 128).log().unwrap();
        assert!(norms.log_n0.overlaps(&log_rad), "{label}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn tau_reduction_is_recorded(re in -6.0f64..6.0, im in 0.02f64..4.0) {
        let tau = Complex::new(ErrReal::from_f64(re, 256), ErrReal::from_f64(im, 256));
        let t = reduce_tau(&tau).unwrap();
        let back = t.unimodular.act(&tau).unwrap();
        prop_assert!(back.re.overlaps(&t.re) && back.im.overlaps(&t.im));
        let half = ErrReal::from_f64(0.5, 256);
        prop_assert!(!t.re.abs().certainly_gt(&half));
        prop_assert!(!t.as_complex().norm_sqr().certainly_lt(&ErrReal::one(256)));
        prop_assert_eq!(t.unimodular.det(), BigInt::one());
    }

    #[test]
    fn modular_discriminant_is_periodic(re in -0.5f64..0.5, im in 0.87f64..3.0) {
        let p = 192;
        let tau = TauPoint {
            re: ErrReal::from_f64(re, p),
            im: ErrReal::from_f64(im, p),
            reduced: false,
            unimodular: heightbound::analytic::Unimodular::identity(),
        };
        let shifted = TauPoint { re: tau.re.add(&ErrReal::one(p)), ..tau.clone() };
        let a = log_modular_discriminant_bits(&tau, 150).unwrap();
        let b = log_modular_discriminant_bits(&shifted, 150).unwrap();
        prop_assert!(a.overlaps(&b));
        prop_assert!(a.err_f64() < 1e-40);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn faltings_height_ignores_non_minimal_models(i in 0usize..27, t in coordinate_change()) {
        let (label, min, _, _) = &entries()[i % entries().len()];
        let moved = minimal_model(&min.curve.transform(&t)).unwrap();
        let a = faltings_height(min, label, 1e-22, 4096).unwrap();
        let b = faltings_height(&moved, label, 1e-22, 4096).unwrap();
        prop_assert!(a.hf_plus.sub(&b.hf_plus).abs().abs_upper().to_f64_up() <= 1e-20, "{}", label);
        let rho = heightbound::analytic::injectivity_diameter(&a.tau).unwrap();
        let one = rho.sqr().mul(&a.tau.im);
        prop_assert!(one.overlaps(&ErrReal::one(128)));
    }
}

const TOL: f64 = 1e-15;

fn combos() -> impl Strategy<Value = (usize, Vec<i64>, Vec<i64>, Vec<i64>)> {
    let c = || prop::collection::vec(-2i64..=2, 3);
    (0usize..16, c(), c(), c())
}

fn point(e: &Entry, c: &[i64]) -> CurvePoint {
    let k = e.2.len();
    e.1.curve.combination(&c[..k], &e.2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pairing_is_symmetric_and_bilinear((i, a, b, c) in combos()) {
        let pts = with_points();
        let e = pts[i % pts.len()];
        let min = &e.1;
        let (p, q, r) = (point(e, &a), point(e, &b), point(e, &c));
        prop_assume!(!p.is_infinity() && !q.is_infinity() && !r.is_infinity());
        let pq = height_pairing(min, &p, &q, TOL);
        let qp = height_pairing(min, &q, &p, TOL);
        let (Ok(pq), Ok(qp)) = (pq, qp) else { return Ok(()) };
        prop_assert!(pq.sub(&qp).abs().abs_upper().to_f64_up() <= 2.0 * TOL);
        let s = min.curve.add(&p, &q);
        prop_assume!(!s.is_infinity());
        if let (Ok(sr), Ok(pr), Ok(qr)) = (
            height_pairing(min, &s, &r, TOL),
            height_pairing(min, &p, &r, TOL),
            height_pairing(min, &q, &r, TOL),
        ) {
            prop_assert!(sr.sub(&pr.add(&qr)).abs().abs_upper().to_f64_up() <= 6.0 * TOL);
        }
    }

    #[test]
    fn parallelogram_law((i, a, b, _c) in combos()) {
        let pts = with_points();
        let e = pts[i % pts.len()];
        let (min, curve) = (&e.1, &e.1.curve);
        let (p, q) = (point(e, &a), point(e, &b));
        let h = |x: &CurvePoint| -> ErrReal {
            if x.is_infinity() { ErrReal::zero(128) } else { canonical_height(min, x, TOL).unwrap().value }
        };
        let lhs = h(&curve.add(&p, &q)).add(&h(&curve.sub(&p, &q)));
        let rhs = h(&p).add(&h(&q)).mul_i64(2);
        prop_assert!(lhs.sub(&rhs).abs().abs_upper().to_f64_up() <= 6.0 * TOL);
    }

    #[test]
    fn quadratic_in_multiples(i in 0usize..16, n in prop::sample::select(vec![2i64, 3, 5])) {
        let pts = with_points();
        let (_, min, gens, _) = pts[i % pts.len()];
        let p = &gens[0];
        let h1 = canonical_height(min, p, TOL).unwrap().value;
        let hn = canonical_height(min, &min.curve.mul(n, p), TOL).unwrap().value;
        prop_assert!(hn.sub(&h1.mul_i64(n * n)).abs().abs_upper().to_f64_up() <= (n * n) as f64 * TOL);
    }

    #[test]
    fn rank_bound_is_monotone(a in 0.0f64..50.0, da in 0.0f64..10.0, k in 0.0f64..20.0, dk in 0.0f64..10.0, g in 1u32..4) {
        let p = 128;
        let at = |n0: f64, dk: f64| {
            let mut inp = RankBoundInputs::over_q(g, ErrReal::from_f64(n0, p));
            inp.log_abs_disc_k = ErrReal::from_f64(dk, p);
            rank_bound(&inp)
        };
        let base = at(a, k);
        prop_assert!(!at(a + da, k).certainly_lt(&base));
        prop_assert!(!at(a, k + dk).certainly_lt(&base));
    }
}

#![allow(dead_code)]

use heightbound::analytic::ErrReal;
use heightbound::curve::{minimal_model, MinimalModelResult, WeierstrassCurve};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::Rng;
use serde_json::Value;
use std::str::FromStr;

pub fn fixture(name: &str) -> Value {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// "p", "p/q" or a decimal with optional exponent, as an exact rational.
pub fn rational(s: &str) -> BigRational {
    if let Some((n, d)) = s.split_once('/') {
        return BigRational::new(BigInt::from_str(n).unwrap(), BigInt::from_str(d).unwrap());
    }
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().unwrap()),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = BigInt::from_str(&format!("{int}{frac}")).unwrap();
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    if scale >= 0 {
        BigRational::from_integer(digits * ten.pow(scale as u32))
    } else {
        BigRational::new(digits, ten.pow((-scale) as u32))
    }
}

/// A printed reference value as a ball covering its last digit.
pub fn decimal(s: &str, prec: u32) -> ErrReal {
    let q = rational(s);
    let mant = s.split(['e', 'E']).next().unwrap();
    let sig = mant
        .trim_start_matches('-')
        .replace('.', "")
        .trim_start_matches('0')
        .len() as i32;
    let mag = if q.is_zero() { 0 } else { magnitude(&q) };
    let ulp = if q.is_zero() {
        BigRational::new(BigInt::one(), BigInt::from(10).pow(40))
    } else {
        pow10(mag - sig + 1)
    };
    let r = ErrReal::from_rational(&q, prec);
    r.add_err(ErrReal::from_rational(&ulp, 64).abs_upper())
}

fn pow10(k: i32) -> BigRational {
    let t = BigInt::from(10);
    if k >= 0 {
        BigRational::from_integer(t.pow(k as u32))
    } else {
        BigRational::new(BigInt::one(), t.pow((-k) as u32))
    }
}

/// floor(log10 |q|) + 1 for q != 0, loosely: only used to size an ulp.
fn magnitude(q: &BigRational) -> i32 {
    let a = if q < &BigRational::zero() { -q } else { q.clone() };
    let mut k = 0;
    let mut x = a;
    let ten = BigRational::from_integer(10.into());
    while x >= ten {
        x /= &ten;
        k += 1;
    }
    while x < BigRational::one() {
        x *= &ten;
        k -= 1;
    }
    k
}

pub fn ainvs(v: &Value) -> [i64; 5] {
    let a: Vec<i64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().parse().unwrap())
        .collect();
    a.try_into().unwrap()
}

pub fn min_model(a: [i64; 5]) -> MinimalModelResult {
    minimal_model(&WeierstrassCurve::from_ints(a).unwrap()).unwrap()
}

/// Corpus entries as (label, ainvs, generators on the minimal model, rank).
pub fn corpus() -> Vec<(String, MinimalModelResult, Vec<heightbound::curve::CurvePoint>, usize)> {
    let path = format!("{}/fixtures/corpus.jsonl", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|line| {
            let v: Value = serde_json::from_str(line).unwrap();
            let a: Vec<BigRational> = v["ainvs"]
                .as_array()
                .unwrap()
                .iter()
                .map(|s| rational(s.as_str().unwrap()))
                .collect();
            let e = WeierstrassCurve::new(a.try_into().unwrap()).unwrap();
            let min = minimal_model(&e).unwrap();
            let gens = v["generators"]
                .as_array()
                .unwrap()
                .iter()
                .map(|g| {
                    let p = e
                        .point(rational(g[0].as_str().unwrap()), rational(g[1].as_str().unwrap()))
                        .unwrap();
                    min.map_point(&p)
                })
                .collect();
            (
                v["label"].as_str().unwrap().to_string(),
                min,
                gens,
                v["rank"].as_u64().unwrap() as usize,
            )
        })
        .collect()
}

/// A unimodular matrix with entries in [-3, 3], built from elementary moves.
pub fn random_unimodular(rng: &mut StdRng, m: usize) -> Vec<Vec<i64>> {
    loop {
        let mut u: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
        for _ in 0..3 * m {
            let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
            if i == j {
                u[i].iter_mut().for_each(|c| *c = -*c);
                continue;
            }
            let k = rng.gen_range(-2..=2);
            let row = u[j].clone();
            for (x, y) in u[i].iter_mut().zip(&row) {
                *x += k * y;
            }
        }
        if u.iter().flatten().all(|c| c.abs() <= 3) {
            return u;
        }
    }
}

/// Rank of integer vectors by exact elimination.
fn rank(vs: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = vs
        .iter()
        .map(|v| v.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
        .collect();
    let n = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Successive minima by sorting every nonzero vector of the box.
pub fn brute_force_minima(g: &[Vec<ErrReal>], bound: i64) -> Vec<f64> {
    let m = g.len();
    let gf: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|e| e.mid_f64()).collect()).collect();
    let mut all: Vec<(f64, Vec<i64>)> = Vec::new();
    let side = (2 * bound + 1) as usize;
    for idx in 1..side.pow(m as u32) {
        let mut k = idx;
        let n: Vec<i64> = (0..m)
            .map(|_| {
                let c = (k % side) as i64 - bound;
                k /= side;
                c
            })
            .collect();
        if n.iter().all(|&c| c == 0) {
            continue;
        }
        let q: f64 = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| (n[i] * n[j]) as f64 * gf[i][j])
            .sum();
        all.push((q, n));
    }
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut picked: Vec<Vec<i64>> = Vec::new();
    let mut out = Vec::new();
    for (q, n) in all {
        picked.push(n);
        if rank(&picked) == picked.len() {
            out.push(q);
            if out.len() == m {
                break;
            }
        } else {
            picked.pop();
        }
    }
    out
}

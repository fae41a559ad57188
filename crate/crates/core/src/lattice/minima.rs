//! Successive minima of a positive definite integral quadratic form given
//! by a ball Gram matrix.
//!
//! All vectors with Q(n) <= R satisfy |n_j|^2 <= R (G^-1)_jj, and
//! (G^-1)_jj is a ratio of determinants, so once R bounds the largest
//! minimum the box with those half-widths contains every minimizer.

use super::det::{det_ball, principal_minor};
use super::LatticeError;
use crate::analytic::{ErrReal, Mag};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::cmp::Ordering;

/// Above this many box points the enumeration is refused.
pub const MAX_BOX_POINTS: u128 = 400_000_000;

#[derive(Debug, Clone)]
pub struct Minima {
    /// lambda_i^2 in increasing order.
    pub values: Vec<ErrReal>,
    /// An integer vector attaining each value.
    pub vectors: Vec<Vec<i64>>,
}

/// Exact row echelon span used to test linear independence.
struct Span {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl Span {
    fn new() -> Span {
        Span { rows: Vec::new() }
    }

    fn try_add(&mut self, v: &[i64]) -> bool {
        let mut x: Vec<BigRational> = v.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        for (piv, row) in &self.rows {
            if x[*piv].is_zero() {
                continue;
            }
            let f = &x[*piv] / &row[*piv];
            for (xi, ri) in x.iter_mut().zip(row) {
                *xi -= &f * ri;
            }
        }
        match x.iter().position(|c| !c.is_zero()) {
            Some(p) => {
                self.rows.push((p, x));
                true
            }
            None => false,
        }
    }
}

pub(crate) struct FloatForm {
    g: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
}

impl FloatForm {
    pub(crate) fn new(g: &[Vec<ErrReal>]) -> FloatForm {
        FloatForm {
            g: g.iter().map(|row| row.iter().map(|e| e.mid_f64()).collect()).collect(),
            r: g.iter().map(|row| row.iter().map(|e| e.err_f64()).collect()).collect(),
        }
    }

    /// Float value of n^T G n and a bound on its distance to the true form
    /// value (rounding of the midpoints and the sum, plus the ball radii).
    pub(crate) fn eval(&self, n: &[i64]) -> (f64, f64) {
        let m = n.len();
        let (mut q, mut s, mut r) = (0.0, 0.0, 0.0);
        for i in 0..m {
            if n[i] == 0 {
                continue;
            }
            for j in 0..m {
                let c = (n[i] * n[j]) as f64;
                let t = c * self.g[i][j];
                q += t;
                s += t.abs();
                r += c.abs() * self.r[i][j];
            }
        }
        let rounding = s * (m * m + 4) as f64 * f64::EPSILON;
        (q, (r + rounding) * (1.0 + 1e-10) + f64::MIN_POSITIVE)
    }
}

/// n^T G n as a ball.
pub fn form_value(g: &[Vec<ErrReal>], n: &[i64]) -> ErrReal {
    bilinear(g, n, n)
}

fn first_nonzero_positive(n: &[i64]) -> bool {
    n.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

/// Calls `f` on every vector of the box with half-widths `b`, one
/// representative per sign pair.
pub(crate) fn for_each_in_box(b: &[i64], mut f: impl FnMut(&[i64])) {
    let m = b.len();
    let mut n: Vec<i64> = b.iter().map(|&w| -w).collect();
    loop {
        if first_nonzero_positive(&n) {
            f(&n);
        }
        let mut k = m;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if n[k] < b[k] {
                n[k] += 1;
                break;
            }
            n[k] = -b[k];
        }
    }
}

struct Candidate {
    n: Vec<i64>,
    q: f64,
    err: f64,
}

fn greedy(cands: &mut [Candidate], m: usize) -> Vec<usize> {
    cands.sort_by(|a, b| {
        a.q.partial_cmp(&b.q)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.n.cmp(&b.n))
    });
    let mut span = Span::new();
    let mut chosen = Vec::new();
    for (i, c) in cands.iter().enumerate() {
        if span.try_add(&c.n) {
            chosen.push(i);
            if chosen.len() == m {
                break;
            }
        }
    }
    chosen
}

/// LLL reduction (delta = 0.99) of the form with float Gram matrix `g`.
/// Returns the unimodular U whose rows are the reduced basis.
pub fn lll(g: &[Vec<f64>]) -> Vec<Vec<i64>> {
    let m = g.len();
    let mut u: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
    let gram = |u: &[Vec<i64>]| -> Vec<Vec<f64>> {
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let mut s = 0.0;
                        for k in 0..m {
                            for l in 0..m {
                                s += (u[i][k] * u[j][l]) as f64 * g[k][l];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    };
    let gso = |h: &[Vec<f64>]| -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut mu = vec![vec![0.0; m]; m];
        let mut b = vec![0.0; m];
        for i in 0..m {
            for j in 0..i {
                let mut v = h[i][j];
                for l in 0..j {
                    v -= mu[j][l] * mu[i][l] * b[l];
                }
                mu[i][j] = v / b[j];
            }
            b[i] = h[i][i] - (0..i).map(|l| mu[i][l] * mu[i][l] * b[l]).sum::<f64>();
        }
        (mu, b)
    };
    let mut k = 1;
    let mut steps = 0;
    while k < m && steps < 100_000 {
        steps += 1;
        for j in (0..k).rev() {
            let (mu, _) = gso(&gram(&u));
            let r = mu[k][j].round() as i64;
            if r != 0 {
                let row = u[j].clone();
                for (x, y) in u[k].iter_mut().zip(&row) {
                    *x -= r * y;
                }
            }
        }
        let (mu, b) = gso(&gram(&u));
        if b[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            u.swap(k, k - 1);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    u
}

/// U g U^T as balls.
pub(crate) fn transform(g: &[Vec<ErrReal>], u: &[Vec<i64>]) -> Vec<Vec<ErrReal>> {
    u.iter()
        .map(|ui| u.iter().map(|uj| bilinear(g, ui, uj)).collect())
        .collect()
}

fn bilinear(g: &[Vec<ErrReal>], a: &[i64], b: &[i64]) -> ErrReal {
    let prec = g.iter().flatten().map(|e| e.prec()).max().unwrap_or(64);
    let mut acc = ErrReal::zero(prec);
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            if ai * bj != 0 {
                acc = acc.add(&g[i][j].mul_i64(ai * bj));
            }
        }
    }
    acc
}

fn mag_ball(m: Mag, prec: u32) -> ErrReal {
    let (man, exp) = m.to_dyadic();
    ErrReal::from_dyadic(man, exp, prec)
}

/// Successive minima by enumeration inside a certified box, in an
/// LLL-reduced basis. Fails with BoundTooSmall when that box does not fit
/// in |n_j| <= search_bound. Vectors are returned in the input basis.
pub fn successive_minima_of(g: &[Vec<ErrReal>], search_bound: u32) -> Result<Minima, LatticeError> {
    let u = lll(&FloatForm::new(g).g);
    let reduced = transform(g, &u);
    let mut out = minima_in_box(&reduced, search_bound)?;
    for v in out.vectors.iter_mut() {
        *v = (0..v.len())
            .map(|c| v.iter().zip(&u).map(|(n, row)| n * row[c]).sum())
            .collect();
    }
    Ok(out)
}

fn minima_in_box(g: &[Vec<ErrReal>], search_bound: u32) -> Result<Minima, LatticeError> {
    let m = g.len();
    if m == 0 {
        return Ok(Minima {
            values: Vec::new(),
            vectors: Vec::new(),
        });
    }
    let det = det_ball(g);
    if !det.is_positive() {
        return Err(LatticeError::DegenerateLattice);
    }
    let prec = det.prec();
    let form = FloatForm::new(g);

    // Any m independent vectors give an upper bound for the last minimum.
    let mut small = Vec::new();
    for_each_in_box(&vec![1; m], |n| {
        let (q, err) = form.eval(n);
        small.push(Candidate { n: n.to_vec(), q, err });
    });
    let picked = greedy(&mut small, m);
    let r_up = picked
        .iter()
        .map(|&i| form_value(g, &small[i].n).abs_upper())
        .fold(Mag::ZERO, |a, b| Mag::max(&a, &b));
    let r_ball = mag_ball(r_up, prec);

    let mut widths = Vec::with_capacity(m);
    for j in 0..m {
        let t = r_ball
            .mul(&principal_minor(g, j))
            .div(&det)
            .map_err(|_| LatticeError::DegenerateLattice)?;
        let w = (t.abs_upper().to_f64_up().sqrt() * (1.0 + 1e-12)).floor();
        widths.push(w as i64);
    }
    let needed = widths.iter().copied().max().unwrap_or(0) as u64;
    if needed > search_bound as u64 {
        return Err(LatticeError::BoundTooSmall {
            bound: search_bound,
            needed,
        });
    }
    let points: u128 = widths.iter().map(|&w| (2 * w + 1) as u128).product();
    if points > MAX_BOX_POINTS {
        return Err(LatticeError::EnumerationTooLarge { points });
    }

    let r_f = r_up.to_f64_up();
    let mut cands = Vec::new();
    for_each_in_box(&widths, |n| {
        let (q, err) = form.eval(n);
        if q - err <= r_f {
            cands.push(Candidate { n: n.to_vec(), q, err });
        }
    });
    let delta = cands.iter().map(|c| c.err).fold(0.0, f64::max);
    let chosen = greedy(&mut cands, m);
    if chosen.len() < m {
        return Err(LatticeError::DegenerateLattice);
    }

    // Greedy on perturbed weights moves each bottleneck value by at most
    // delta, so the true minimum is attained by a candidate whose float
    // value lies within 2 delta of the chosen one.
    let mut values = Vec::with_capacity(m);
    let mut vectors = Vec::with_capacity(m);
    for &i in &chosen {
        let qi = cands[i].q;
        let mut hull = form_value(g, &cands[i].n);
        for c in cands.iter().filter(|c| (c.q - qi).abs() <= 2.0 * delta) {
            hull = hull.hull(&form_value(g, &c.n));
        }
        values.push(hull);
        vectors.push(cands[i].n.clone());
    }
    Ok(Minima { values, vectors })
}

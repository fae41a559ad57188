//! Mordell-Weil lattices under the canonical height: Gram matrices,
//! regulators, successive minima and the Minkowski and Hadamard checks.

mod det;
mod minima;

pub use det::{bareiss, det_ball};
pub use minima::{form_value, lll, successive_minima_of, Minima, MAX_BOX_POINTS};

use minima::transform;
pub(crate) use minima::{for_each_in_box, FloatForm};

use crate::analytic::ErrReal;
use crate::curve::{torsion_order, CurvePoint, MinimalModelResult, WeierstrassCurve};
use crate::heights::{canonical_height, HeightError};
use crate::verdict::Check;
use thiserror::Error;

pub const DEFAULT_SEARCH_BOUND: u32 = 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("generator {0} is a torsion point")]
    TorsionGenerator(usize),
    #[error("generators are dependent within the error radii")]
    DegenerateLattice,
    #[error("search bound {bound} is below the certified box half-width {needed}")]
    BoundTooSmall { bound: u32, needed: u64 },
    #[error("enumeration box has {points} points")]
    EnumerationTooLarge { points: u128 },
    #[error(transparent)]
    Height(#[from] HeightError),
}

/// An entry of the Gram matrix: <P_i, P_j> as a ball.
pub type PairingValue = ErrReal;

#[derive(Debug, Clone)]
pub struct HeightLattice {
    pub generators: Vec<CurvePoint>,
    pub gram: Vec<Vec<PairingValue>>,
    pub m: usize,
    curve: Option<WeierstrassCurve>,
}

impl HeightLattice {
    /// A lattice known only through its Gram matrix.
    pub fn from_gram(gram: Vec<Vec<PairingValue>>) -> Result<HeightLattice, LatticeError> {
        let lat = HeightLattice {
            generators: Vec::new(),
            m: gram.len(),
            gram,
            curve: None,
        };
        lat.certify_independent()?;
        Ok(lat)
    }

    fn certify_independent(&self) -> Result<(), LatticeError> {
        if self.m > 0 && !det_ball(&self.gram).is_positive() {
            return Err(LatticeError::DegenerateLattice);
        }
        Ok(())
    }

    /// The lattice in the basis given by the rows of `u`, which must be
    /// unimodular: gram' = U gram U^T.
    pub fn change_basis(&self, u: &[Vec<i64>]) -> HeightLattice {
        let gram = transform(&self.gram, u);
        let generators = match &self.curve {
            Some(c) if !self.generators.is_empty() => {
                u.iter().map(|row| c.combination(row, &self.generators)).collect()
            }
            _ => Vec::new(),
        };
        HeightLattice {
            generators,
            gram,
            m: self.m,
            curve: self.curve.clone(),
        }
    }
}

/// Gram matrix of the height pairing on `points`, each entry with radius
/// at most `tol`.
pub fn build_lattice(min: &MinimalModelResult, points: &[CurvePoint], tol: f64) -> Result<HeightLattice, LatticeError> {
    let e = &min.curve;
    for (i, p) in points.iter().enumerate() {
        if !e.contains(p) {
            return Err(HeightError::NotOnCurve.into());
        }
        if torsion_order(e, p).is_some() {
            return Err(LatticeError::TorsionGenerator(i));
        }
    }
    let t = tol / 4.0;
    let h: Vec<ErrReal> = points
        .iter()
        .map(|p| canonical_height(min, p, t).map(|c| c.value))
        .collect::<Result<_, _>>()?;
    let m = points.len();
    let mut gram: Vec<Vec<ErrReal>> = vec![Vec::with_capacity(m); m];
    for i in 0..m {
        for j in 0..m {
            let v = if i == j {
                h[i].clone()
            } else if j < i {
                gram[j][i].clone()
            } else {
                let s = canonical_height(min, &e.add(&points[i], &points[j]), t)?.value;
                s.sub(&h[i]).sub(&h[j]).mul_pow2(-1)
            };
            gram[i].push(v);
        }
    }
    let lat = HeightLattice {
        generators: points.to_vec(),
        gram,
        m,
        curve: Some(e.clone()),
    };
    lat.certify_independent()?;
    Ok(lat)
}

#[derive(Debug, Clone)]
pub struct RegulatorReport {
    /// |det <P_i, P_j>|, exactly 1 for m = 0.
    pub reg_l: ErrReal,
    /// Regulator for the Poincare pairing, 2^m reg_l.
    pub reg_poincare: ErrReal,
    pub minima_sq: Vec<ErrReal>,
    pub minima_vectors: Vec<Vec<i64>>,
    pub m: usize,
    /// Largest rank of a point group of a strict abelian subvariety; an
    /// elliptic curve has none besides 0.
    pub m0: usize,
    pub zariski_rank: usize,
}

/// Regulators with successive minima searched within |n_j| <= 25.
pub fn regulator(lat: &HeightLattice) -> Result<RegulatorReport, LatticeError> {
    regulator_with_bound(lat, DEFAULT_SEARCH_BOUND)
}

pub fn regulator_with_bound(lat: &HeightLattice, search_bound: u32) -> Result<RegulatorReport, LatticeError> {
    let m = lat.m;
    let reg_l = if m == 0 {
        ErrReal::one(64)
    } else {
        let d = det_ball(&lat.gram);
        if !d.is_positive() {
            return Err(LatticeError::DegenerateLattice);
        }
        d
    };
    let minima = successive_minima(lat, search_bound)?;
    Ok(RegulatorReport {
        reg_poincare: reg_l.mul_pow2(m as i64),
        reg_l,
        minima_sq: minima.values,
        minima_vectors: minima.vectors,
        m,
        m0: 0,
        zariski_rank: m,
    })
}

/// lambda_1^2 <= ... <= lambda_m^2 of the height lattice.
pub fn successive_minima(lat: &HeightLattice, search_bound: u32) -> Result<Minima, LatticeError> {
    successive_minima_of(&lat.gram, search_bound)
}

/// lambda_1^2 ... lambda_m^2 <= m^m reg_L.
pub fn minkowski_check(report: &RegulatorReport) -> Check {
    let m = report.m;
    if m == 0 {
        return Check::from_exact_slack(ErrReal::zero(64));
    }
    // For m = 1 with a primitive minimizer both sides are the same number.
    if m == 1 && report.minima_vectors[0].iter().all(|c| c.abs() == 1) {
        return Check::from_exact_slack(ErrReal::zero(report.reg_l.prec()));
    }
    let prec = report.reg_l.prec();
    let prod = report.minima_sq.iter().fold(ErrReal::one(prec), |a, b| a.mul(b));
    let mm = ErrReal::from_bigint(&num_bigint::BigInt::from(m).pow(m as u32), prec);
    Check::from_slack(mm.mul(&report.reg_l).sub(&prod))
}

/// reg_L <= prod gram_ii.
pub fn hadamard_check(lat: &HeightLattice) -> Check {
    let m = lat.m;
    if m == 0 {
        return Check::from_exact_slack(ErrReal::zero(64));
    }
    let diagonal =
        (0..m).all(|i| (0..m).all(|j| i == j || (lat.gram[i][j].is_exact() && lat.gram[i][j].mid_f64() == 0.0)));
    let prec = lat.gram[0][0].prec();
    if diagonal {
        return Check::from_exact_slack(ErrReal::zero(prec));
    }
    let prod = (0..m).fold(ErrReal::one(prec), |a, i| a.mul(&lat.gram[i][i]));
    Check::from_slack(prod.sub(&det_ball(&lat.gram).abs()))
}

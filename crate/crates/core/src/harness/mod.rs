//! Batch verification of a curve corpus: ingest, per-curve pipeline,
//! Lang-Silverman scan and report emission.

mod io;
mod report;
mod scan;

pub use io::{emit, emit_to_path, ingest, ingest_csv, ingest_jsonl, write_corpus, CorpusEntry, Format};
pub use report::{flatten, CurveReport, DecimalBall, StageReport, StageStatus};
pub use scan::{box_minimum, ls_scan, LsScan};

use crate::analytic::{faltings_height, injectivity_diameter, matrix_lemma_check, ErrReal, FaltingsReport};
use crate::arith::format_rational;
use crate::bounds::{
    cor12_constants, cor13_headline_constant, prop33_constants, prop36_constants, rank_bound, thm11_constants,
    RankBoundInputs, TowerMagnitude,
};
use crate::curve::{conductor_norms, minimal_model, ConductorNorms, CurvePoint, MinimalModelResult, WeierstrassCurve};
use crate::lattice::{
    build_lattice, hadamard_check, minkowski_check, regulator_with_bound, HeightLattice, LatticeError, RegulatorReport,
};
use crate::verdict::Check;
use rayon::prelude::*;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
    #[error("no generators to scan")]
    NoGenerators,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    HeightConductor,
    MatrixLemma,
    RankBound,
    Lattice,
    Minkowski,
    Hadamard,
    LsScan,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::HeightConductor,
        Stage::MatrixLemma,
        Stage::RankBound,
        Stage::Lattice,
        Stage::Minkowski,
        Stage::Hadamard,
        Stage::LsScan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::HeightConductor => "height_conductor",
            Stage::MatrixLemma => "matrix_lemma",
            Stage::RankBound => "rank_bound",
            Stage::Lattice => "lattice",
            Stage::Minkowski => "minkowski",
            Stage::Hadamard => "hadamard",
            Stage::LsScan => "ls_scan",
        }
    }
}

impl FromStr for Stage {
    type Err = String;
    fn from_str(s: &str) -> Result<Stage, String> {
        Stage::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

/// Parse a comma separated check list; "all" selects every stage.
pub fn parse_checks(s: &str) -> Result<Vec<Stage>, String> {
    if s.trim() == "all" {
        return Ok(Stage::ALL.to_vec());
    }
    let mut out: Vec<Stage> = s.split(',').map(|t| t.trim().parse()).collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Config {
    pub tol: f64,
    pub max_bits: u32,
    pub checks: Vec<Stage>,
    pub ls_box: u32,
    pub search_bound: u32,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            tol: 1e-12,
            max_bits: 4096,
            checks: Stage::ALL.to_vec(),
            ls_box: 10,
            search_bound: crate::lattice::DEFAULT_SEARCH_BOUND,
        }
    }
}

impl Config {
    fn wants(&self, s: Stage) -> bool {
        self.checks.contains(&s)
    }
}

fn blank(entry: &CorpusEntry) -> CurveReport {
    let skip = || StageReport::skipped("not selected");
    CurveReport {
        label: entry.label.clone(),
        curve: StageReport::ok(),
        min_ainvs: None,
        disc_min: None,
        n0: None,
        log_n0: DecimalBall::missing(),
        log_nst: DecimalBall::missing(),
        log_nuns: DecimalBall::missing(),
        analytic: StageReport::ok(),
        tau_re: DecimalBall::missing(),
        tau_im: DecimalBall::missing(),
        hf_plus: DecimalBall::missing(),
        hf_classical: DecimalBall::missing(),
        rho: DecimalBall::missing(),
        rho_sq_inv: DecimalBall::missing(),
        height_conductor: skip(),
        matrix_lemma: skip(),
        known_rank: entry.known_rank,
        rank_bound_value: DecimalBall::missing(),
        rank_bound: skip(),
        lattice: skip(),
        rank: None,
        reg_l: DecimalBall::missing(),
        reg_poincare: DecimalBall::missing(),
        minima_sq: Vec::new(),
        minkowski: skip(),
        hadamard: skip(),
        ls_scan: skip(),
        ls_ratio: DecimalBall::missing(),
        ls_minimizer: None,
        lambda1_ratio: DecimalBall::missing(),
        m0: None,
        zariski_rank: None,
        dimension_g: 1,
        zariski_dense: None,
    }
}

/// Marks every selected stage in `stages` as errored because `why` failed.
fn fail_downstream(r: &mut CurveReport, cfg: &Config, stages: &[Stage], why: &str) {
    for &s in stages {
        if cfg.wants(s) {
            *stage_mut(r, s) = StageReport::errored(format!("{why} unavailable"));
        }
    }
}

impl CurveReport {
    pub fn stage(&self, s: Stage) -> &StageReport {
        match s {
            Stage::HeightConductor => &self.height_conductor,
            Stage::MatrixLemma => &self.matrix_lemma,
            Stage::RankBound => &self.rank_bound,
            Stage::Lattice => &self.lattice,
            Stage::Minkowski => &self.minkowski,
            Stage::Hadamard => &self.hadamard,
            Stage::LsScan => &self.ls_scan,
        }
    }
}

fn stage_mut(r: &mut CurveReport, s: Stage) -> &mut StageReport {
    match s {
        Stage::HeightConductor => &mut r.height_conductor,
        Stage::MatrixLemma => &mut r.matrix_lemma,
        Stage::RankBound => &mut r.rank_bound,
        Stage::Lattice => &mut r.lattice,
        Stage::Minkowski => &mut r.minkowski,
        Stage::Hadamard => &mut r.hadamard,
        Stage::LsScan => &mut r.ls_scan,
    }
}

fn has_inconclusive(r: &CurveReport) -> bool {
    Stage::ALL
        .iter()
        .any(|&s| r.stage(s).status == StageStatus::Inconclusive)
}

/// Run every selected stage on one entry. Stage failures are recorded in
/// the report; the function itself never fails. An inconclusive verdict
/// triggers one rerun with the tolerance squared (twice the bits).
pub fn run_pipeline(entry: &CorpusEntry, cfg: &Config) -> CurveReport {
    let r = run_once(entry, cfg);
    if !has_inconclusive(&r) {
        return r;
    }
    let finer = Config {
        tol: cfg.tol * cfg.tol,
        max_bits: cfg.max_bits.saturating_mul(2),
        ..cfg.clone()
    };
    run_once(entry, &finer)
}

fn curve_stage(entry: &CorpusEntry, cfg: &Config) -> Result<(MinimalModelResult, ConductorNorms), String> {
    let e = WeierstrassCurve::new(entry.ainvs.clone()).map_err(|e| e.to_string())?;
    let min = minimal_model(&e).map_err(|e| e.to_string())?;
    let prec = crate::analytic::bits_for_tol(cfg.tol).max(64);
    let norms = conductor_norms(&min, prec).map_err(|e| e.to_string())?;
    Ok((min, norms))
}

fn run_once(entry: &CorpusEntry, cfg: &Config) -> CurveReport {
    let mut r = blank(entry);
    let (min, norms) = match curve_stage(entry, cfg) {
        Ok(v) => v,
        Err(e) => {
            r.curve = StageReport::errored(e);
            r.analytic = StageReport::errored("curve unavailable");
            fail_downstream(&mut r, cfg, &Stage::ALL, "curve");
            return r;
        }
    };
    r.min_ainvs = Some(min.curve.ainvs().clone().map(|a| format_rational(&a)));
    r.disc_min = Some(min.disc_min.to_string());
    r.n0 = Some(norms.n0().to_string());
    r.log_n0 = DecimalBall::of(&norms.log_n0);
    r.log_nst = DecimalBall::of(&norms.log_nst);
    r.log_nuns = DecimalBall::of(&norms.log_nuns);

    if cfg.wants(Stage::RankBound) {
        let bound = rank_bound(&RankBoundInputs::over_q(1, norms.log_n0.clone()));
        r.rank_bound_value = DecimalBall::of(&bound);
        r.rank_bound = match entry.known_rank {
            None => StageReport::skipped("no known rank"),
            Some(k) => {
                let slack = bound.sub(&ErrReal::from_bigint(&k.into(), bound.prec()));
                StageReport::check(&Check::from_slack(slack))
            }
        };
    }

    let faltings = analytic_stage(&mut r, entry, &min, &norms, cfg);
    lattice_stages(&mut r, entry, &min, faltings.as_ref(), cfg);
    r
}

fn analytic_stage(
    r: &mut CurveReport,
    entry: &CorpusEntry,
    min: &MinimalModelResult,
    norms: &ConductorNorms,
    cfg: &Config,
) -> Option<FaltingsReport> {
    let f = match faltings_height(min, &entry.label, cfg.tol, cfg.max_bits) {
        Ok(f) => f,
        Err(e) => {
            r.analytic = StageReport::errored(e);
            fail_downstream(r, cfg, &[Stage::HeightConductor, Stage::MatrixLemma], "Faltings height");
            return None;
        }
    };
    r.tau_re = DecimalBall::of(&f.tau.re);
    r.tau_im = DecimalBall::of(&f.tau.im);
    r.hf_plus = DecimalBall::of(&f.hf_plus);
    r.hf_classical = DecimalBall::of(&f.hf_classical());
    r.rho_sq_inv = DecimalBall::of(&f.rho_sq_inv);
    match injectivity_diameter(&f.tau) {
        Ok(rho) => r.rho = DecimalBall::of(&rho),
        Err(e) => r.analytic = StageReport::errored(e),
    }
    if cfg.wants(Stage::HeightConductor) {
        // hF+ >= (1/12d) log N0 with d = 1
        let slack = f.hf_plus.sub(&norms.log_n0.div_i64(12));
        r.height_conductor = StageReport::check(&Check::from_slack(slack));
    }
    if cfg.wants(Stage::MatrixLemma) {
        r.matrix_lemma = StageReport::check(&matrix_lemma_check(&f));
    }
    Some(f)
}

fn generators_on_minimal(entry: &CorpusEntry, min: &MinimalModelResult) -> Option<Result<Vec<CurvePoint>, String>> {
    let gens = match (&entry.generators, entry.known_rank) {
        (Some(g), _) => g.clone(),
        (None, Some(0)) => Vec::new(),
        (None, _) => return None,
    };
    let e = match WeierstrassCurve::new(entry.ainvs.clone()) {
        Ok(e) => e,
        Err(err) => return Some(Err(err.to_string())),
    };
    Some(
        gens.into_iter()
            .map(|(x, y)| e.point(x, y).map(|p| min.map_point(&p)).map_err(|err| err.to_string()))
            .collect(),
    )
}

fn lattice_stages(
    r: &mut CurveReport,
    entry: &CorpusEntry,
    min: &MinimalModelResult,
    faltings: Option<&FaltingsReport>,
    cfg: &Config,
) {
    let dependent = [Stage::Lattice, Stage::Minkowski, Stage::Hadamard, Stage::LsScan];
    if !dependent.iter().any(|&s| cfg.wants(s)) {
        return;
    }
    let points = match generators_on_minimal(entry, min) {
        None => {
            for s in dependent {
                if cfg.wants(s) {
                    *stage_mut(r, s) = StageReport::skipped("no generators");
                }
            }
            return;
        }
        Some(Err(e)) => {
            r.lattice = StageReport::errored(e);
            fail_downstream(r, cfg, &dependent[1..], "lattice");
            return;
        }
        Some(Ok(p)) => p,
    };
    let built: Result<(HeightLattice, RegulatorReport), LatticeError> = build_lattice(min, &points, cfg.tol)
        .and_then(|lat| regulator_with_bound(&lat, cfg.search_bound).map(|reg| (lat, reg)));
    let (lat, reg) = match built {
        Ok(v) => v,
        Err(e) => {
            r.lattice = StageReport::errored(e);
            fail_downstream(r, cfg, &dependent[1..], "lattice");
            return;
        }
    };
    r.lattice = StageReport::ok();
    r.rank = Some(reg.m);
    r.reg_l = DecimalBall::of(&reg.reg_l);
    r.reg_poincare = DecimalBall::of(&reg.reg_poincare);
    r.minima_sq = reg.minima_sq.iter().map(DecimalBall::of).collect();
    r.m0 = Some(reg.m0);
    r.zariski_rank = Some(reg.zariski_rank);
    r.zariski_dense = Some(reg.m > reg.m0);
    if cfg.wants(Stage::Minkowski) {
        r.minkowski = StageReport::check(&minkowski_check(&reg));
    }
    if cfg.wants(Stage::Hadamard) {
        r.hadamard = StageReport::check(&hadamard_check(&lat));
    }
    if !cfg.wants(Stage::LsScan) {
        return;
    }
    let Some(f) = faltings else {
        r.ls_scan = StageReport::errored("Faltings height unavailable");
        return;
    };
    if reg.m == 0 {
        r.ls_scan = StageReport::skipped("no generators");
        return;
    }
    match ls_scan(&lat, &f.hf_plus, cfg.ls_box) {
        Ok(s) => {
            let denom = f.hf_plus.max(&ErrReal::one(f.hf_plus.prec()));
            let l1 = reg.minima_sq[0].div(&denom).expect("denominator is at least one");
            r.ls_scan = StageReport::ok();
            r.ls_ratio = DecimalBall::of(&s.ratio);
            r.ls_minimizer = Some(s.minimizer);
            r.lambda1_ratio = DecimalBall::of(&l1);
        }
        Err(e) => r.ls_scan = StageReport::errored(e),
    }
}

/// Run the pipeline on every entry with `jobs` worker threads. The output
/// order is the input order whatever the number of threads.
pub fn run_corpus(entries: &[CorpusEntry], cfg: &Config, jobs: usize) -> Result<Vec<CurveReport>, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    Ok(pool.install(|| entries.par_iter().map(|e| run_pipeline(e, cfg)).collect()))
}

/// The named constants for dimension g, in the order printed by the CLI.
pub fn constants_table(g: u32) -> Vec<(&'static str, TowerMagnitude)> {
    let (c, c0) = thm11_constants(g);
    let (c1, c2, c3) = cor12_constants(g);
    let (c5, c6) = prop33_constants(g, false);
    let (c5j, c6j) = prop33_constants(g, true);
    let (c16, c17) = prop36_constants(g, false);
    let (c16j, c17j) = prop36_constants(g, true);
    vec![
        ("c", c),
        ("c0", c0),
        ("c1", c1),
        ("c2", c2),
        ("c3", c3),
        ("c4(d=1)", cor13_headline_constant(g, 1)),
        ("c5", c5),
        ("c6", c6),
        ("c5 jacobian", c5j),
        ("c6 jacobian", c6j),
        ("c16", c16),
        ("c17", c17),
        ("c16 jacobian", c16j),
        ("c17 jacobian", c17j),
    ]
}

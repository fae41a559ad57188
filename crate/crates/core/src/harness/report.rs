//! Per-curve report records and their flat column form.

use crate::analytic::ErrReal;
use crate::verdict::{Check, Verdict};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Significant digits printed for midpoints.
pub const VALUE_DIGITS: usize = 30;
/// Significant digits printed (rounded up) for radii.
pub const ERR_DIGITS: usize = 3;

/// A ball as decimal strings; all fields are null when the value is
/// missing so that every report has the same shape.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DecimalBall {
    pub value: Option<String>,
    pub err: Option<String>,
    pub bits: Option<u32>,
}

impl DecimalBall {
    pub fn of(x: &ErrReal) -> DecimalBall {
        DecimalBall {
            value: Some(x.mid_to_sci(VALUE_DIGITS)),
            err: Some(x.err_to_sci(ERR_DIGITS)),
            bits: Some(x.prec()),
        }
    }

    pub fn missing() -> DecimalBall {
        DecimalBall::default()
    }

    pub fn value_f64(&self) -> Option<f64> {
        self.value.as_ref().and_then(|s| s.parse().ok())
    }
}

impl From<Option<&ErrReal>> for DecimalBall {
    fn from(x: Option<&ErrReal>) -> DecimalBall {
        x.map(DecimalBall::of).unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageStatus {
    /// A stage that computes values rather than checking an inequality.
    Ok,
    Pass,
    Fail,
    Inconclusive,
    Skipped,
    Errored,
}

impl From<Verdict> for StageStatus {
    fn from(v: Verdict) -> StageStatus {
        match v {
            Verdict::Pass => StageStatus::Pass,
            Verdict::Fail => StageStatus::Fail,
            Verdict::Inconclusive => StageStatus::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub status: StageStatus,
    pub slack: DecimalBall,
    pub detail: Option<String>,
}

impl StageReport {
    pub fn ok() -> StageReport {
        StageReport {
            status: StageStatus::Ok,
            slack: DecimalBall::missing(),
            detail: None,
        }
    }

    pub fn check(c: &Check) -> StageReport {
        StageReport {
            status: c.verdict.into(),
            slack: DecimalBall::of(&c.slack),
            detail: None,
        }
    }

    pub fn skipped(why: &str) -> StageReport {
        StageReport {
            status: StageStatus::Skipped,
            slack: DecimalBall::missing(),
            detail: Some(why.to_string()),
        }
    }

    pub fn errored(why: impl ToString) -> StageReport {
        StageReport {
            status: StageStatus::Errored,
            slack: DecimalBall::missing(),
            detail: Some(why.to_string()),
        }
    }
}

/// Everything computed for one corpus entry. Field order is the column
/// order of both output formats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub label: String,
    /// Reading the curve and finding its minimal model.
    pub curve: StageReport,
    pub min_ainvs: Option<[String; 5]>,
    pub disc_min: Option<String>,
    pub n0: Option<String>,
    pub log_n0: DecimalBall,
    pub log_nst: DecimalBall,
    pub log_nuns: DecimalBall,
    /// Periods, reduced tau and the Faltings height.
    pub analytic: StageReport,
    pub tau_re: DecimalBall,
    pub tau_im: DecimalBall,
    pub hf_plus: DecimalBall,
    pub hf_classical: DecimalBall,
    pub rho: DecimalBall,
    pub rho_sq_inv: DecimalBall,
    /// hF+ >= (1/12) log N0
    pub height_conductor: StageReport,
    /// rho^-2 <= 16 hF+ + 39
    pub matrix_lemma: StageReport,
    pub known_rank: Option<u64>,
    pub rank_bound_value: DecimalBall,
    pub rank_bound: StageReport,
    /// Gram matrix and regulators of the given generators.
    pub lattice: StageReport,
    pub rank: Option<usize>,
    pub reg_l: DecimalBall,
    pub reg_poincare: DecimalBall,
    pub minima_sq: Vec<DecimalBall>,
    pub minkowski: StageReport,
    pub hadamard: StageReport,
    pub ls_scan: StageReport,
    pub ls_ratio: DecimalBall,
    pub ls_minimizer: Option<Vec<i64>>,
    pub lambda1_ratio: DecimalBall,
    pub m0: Option<usize>,
    pub zariski_rank: Option<usize>,
    /// Dictionary with number fields: dimension g in place of the degree.
    pub dimension_g: u32,
    /// m_K > m_0, the analogue of a non-CM field.
    pub zariski_dense: Option<bool>,
}

/// Flatten nested objects into dotted column names. Arrays become their
/// compact JSON text, null becomes the empty string.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk(v, String::new(), &mut out);
    out
}

fn walk(v: &Value, prefix: String, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                walk(x, key, out);
            }
        }
        Value::Null => out.push((prefix, String::new())),
        Value::String(s) => out.push((prefix, s.clone())),
        other => out.push((prefix, other.to_string())),
    }
}

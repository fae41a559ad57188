//! Tri-state outcomes of certified inequality checks.

use crate::analytic::ErrReal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// A verdict with the slack it was read from. Positive slack means the
/// inequality holds.
#[derive(Debug, Clone)]
pub struct Check {
    pub verdict: Verdict,
    pub slack: ErrReal,
}

impl Check {
    /// Pass if slack > err, Fail if slack < -err, otherwise Inconclusive.
    pub fn from_slack(slack: ErrReal) -> Check {
        let verdict = if slack.is_positive() {
            Verdict::Pass
        } else if slack.is_negative() {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        };
        Check { verdict, slack }
    }

    /// Slack of a non-strict inequality between exactly known quantities:
    /// zero slack passes.
    pub fn from_exact_slack(slack: ErrReal) -> Check {
        if slack.is_exact() && slack.mid_f64() == 0.0 {
            return Check {
                verdict: Verdict::Pass,
                slack,
            };
        }
        Check::from_slack(slack)
    }
}

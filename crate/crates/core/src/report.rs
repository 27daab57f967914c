use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "ID")]
    Id,
    #[serde(rename = "NOT_ID")]
    NotId,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_success(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Id)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Id => "ID",
            Verdict::NotId => "NOT_ID",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Distance sequence along a schedule of `theta` values, with its verdict.
///
/// `ks` holds Kolmogorov distances for simulation runs; deterministic
/// attraction checks reuse the same shape with `theta = 1/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub theta: Vec<f64>,
    pub ks: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub verdict: Verdict,
}

impl ConvergenceReport {
    /// PASS iff consecutive distances never rise by more than `slack` and
    /// the last one is below `final_threshold`.
    pub fn judge(theta: Vec<f64>, ks: Vec<f64>, samples: usize, seed: u64, final_threshold: f64, slack: f64) -> Self {
        let verdict = Verdict::from_bool(is_nonincreasing(&ks, slack) && ks.last().is_some_and(|&d| d < final_threshold));
        Self { theta, ks, samples, seed, verdict }
    }

    pub fn final_ks(&self) -> f64 {
        self.ks.last().copied().unwrap_or(f64::NAN)
    }

    pub fn is_nonincreasing(&self, slack: f64) -> bool {
        is_nonincreasing(&self.ks, slack)
    }

    /// `theta,ks` rows for external plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,ks\n");
        for (t, d) in self.theta.iter().zip(&self.ks) {
            out.push_str(&format!("{t},{d}\n"));
        }
        out
    }
}

pub fn is_nonincreasing(xs: &[f64], slack: f64) -> bool {
    xs.windows(2).all(|w| w[1] <= w[0] + slack)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn judge_requires_monotone_and_small_final() {
        let r = ConvergenceReport::judge(vec![0.5, 0.1], vec![0.2, 0.01], 10, 1, 0.02, 0.0);
        assert_eq!(r.verdict, Verdict::Pass);
        let r = ConvergenceReport::judge(vec![0.5, 0.1], vec![0.01, 0.015], 10, 1, 0.02, 0.001);
        assert_eq!(r.verdict, Verdict::Fail);
        let r = ConvergenceReport::judge(vec![0.5, 0.1], vec![0.2, 0.05], 10, 1, 0.02, 0.0);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn json_field_names() {
        let r = ConvergenceReport::judge(vec![0.5], vec![0.01], 100, 42, 0.02, 0.0);
        let js = serde_json::to_string(&r).unwrap();
        assert_eq!(js, r#"{"theta":[0.5],"ks":[0.01],"samples":100,"seed":42,"verdict":"PASS"}"#);
    }
}

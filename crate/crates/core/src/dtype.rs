//! Binomial thinning, D-types, discrete stable laws and discrete
//! self-decomposability.

use serde::{Deserialize, Serialize};

use crate::error::{check_param, Error, Result};
use crate::report::{ConvergenceReport, Verdict};
use crate::samplers::{self, EmpiricalDist, SeededStream};
use crate::series::{ProbSeq, Series};
use crate::tolerances::tolerances;
use crate::transforms::{LtSpec, PgfSpec};

/// Success probability `c` in `(0, 1]` of the thinning Bernoulli variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ThinningParam(f64);

impl ThinningParam {
    pub fn new(c: f64) -> Result<Self> {
        check_param("c", c, c > 0.0 && c <= 1.0, "must lie in (0, 1]")?;
        Ok(Self(c))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for ThinningParam {
    type Error = Error;
    fn try_from(c: f64) -> Result<Self> {
        Self::new(c)
    }
}

impl From<ThinningParam> for f64 {
    fn from(c: ThinningParam) -> f64 {
        c.0
    }
}

/// `c o X`: the PGF `Q(1 - c + c s)`, by composing with the Bernoulli PGF.
///
/// Thinning only moves mass downward, so the prefix is exact up to the
/// input's own tail mass.
pub fn thin(q: &ProbSeq, c: ThinningParam) -> Result<ProbSeq> {
    let c = c.get();
    let s = q.to_series();
    ProbSeq::from_series(&s.compose(&Series::linear(1.0 - c, c, s.order())))
}

/// Draws of `sum_{i <= Y} Z_i` with `Y ~ q` and `Z_i ~ Bernoulli(c)`.
///
/// `Y` is drawn from the prefix conditioned on `Y <= order`.
pub fn thin_sample(q: &ProbSeq, c: ThinningParam, n: usize, stream: SeededStream) -> Result<EmpiricalDist> {
    let cum: Vec<f64> = q
        .masses()
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let total = *cum.last().expect("nonempty pmf");
    let c = c.get();
    EmpiricalDist::new(stream.draw(n, |rng| {
        let u = samplers::open01(rng) * total;
        let y = cum.partition_point(|&f| f < u).min(cum.len() - 1);
        samplers::thin_count(y as u64, c, rng) as f64
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtypeComparison {
    pub same: bool,
    pub max_deviation: f64,
    pub threshold: f64,
    pub grid: Vec<f64>,
}

/// u-grid `{0.05, 0.10, ..., 0.95}`.
pub fn u_grid() -> Vec<f64> {
    (1..=19).map(|i| i as f64 * 0.05).collect()
}

/// Whether `Q_1(u) = Q_2(1 - c + c u)` on the u-grid, i.e. `X_1` has the law
/// of `c o X_2`.
pub fn same_dtype(q1: &ProbSeq, q2: &ProbSeq, c: ThinningParam) -> DtypeComparison {
    let c = c.get();
    let grid = u_grid();
    let max_deviation = grid.iter().map(|&u| (q1.pgf(u) - q2.pgf(1.0 - c + c * u)).abs()).fold(0.0, f64::max);
    let threshold = tolerances().same_dtype + q1.tail_bound() + q2.tail_bound();
    DtypeComparison { same: max_deviation < threshold, max_deviation, threshold, grid }
}

/// Discrete stable law with PGF `exp(-lambda (1 - s)^alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteStableSpec {
    pub alpha: f64,
    pub lambda: f64,
}

impl DiscreteStableSpec {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        check_param("alpha", alpha, alpha > 0.0 && alpha <= 1.0, "must lie in (0, 1]")?;
        check_param("lambda", lambda, lambda > 0.0, "must be > 0")?;
        Ok(Self { alpha, lambda })
    }

    pub fn pgf(&self, s: f64) -> f64 {
        (-self.lambda * (1.0 - s).powf(self.alpha)).exp()
    }

    pub fn to_pgf_spec(&self) -> Result<PgfSpec> {
        PgfSpec::discrete_stable(self.alpha, self.lambda)
    }
}

pub fn discrete_stable_pmf(spec: &DiscreteStableSpec, order: usize) -> Result<ProbSeq> {
    let spec = DiscreteStableSpec::new(spec.alpha, spec.lambda)?;
    spec.to_pgf_spec()?.probseq(order)
}

/// s-grid `{0, 0.01, ..., 1}`.
pub fn s_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

/// `sup_s |Q(1 - n^(-1/alpha) (1 - s))^n - Q(s)|` on the closed form.
pub fn stability_identity_check(spec: &DiscreteStableSpec, n: u32) -> Result<f64> {
    let spec = DiscreteStableSpec::new(spec.alpha, spec.lambda)?;
    check_param("n", n as f64, n >= 2, "must be >= 2")?;
    let a = (n as f64).powf(-1.0 / spec.alpha);
    Ok(s_grid()
        .into_iter()
        .map(|s| (spec.pgf(1.0 - a * (1.0 - s)).powi(n as i32) - spec.pgf(s)).abs())
        .fold(0.0, f64::max))
}

/// `d_n = sup_s |n * (-log phi((1 - s) / a_n)) - (1 - s)^alpha|` with
/// `a_n = n^(1/alpha)`, reported with `theta = 1/n`.
pub fn domain_of_attraction_check(phi: &LtSpec, alpha: f64, n_list: &[u64]) -> Result<ConvergenceReport> {
    domain_of_attraction_check_scaled(phi, alpha, 1.0, n_list)
}

/// As [`domain_of_attraction_check`] with norming `a_n = scale * n^(1/alpha)`.
pub fn domain_of_attraction_check_scaled(
    phi: &LtSpec,
    alpha: f64,
    scale: f64,
    n_list: &[u64],
) -> Result<ConvergenceReport> {
    let phi = phi.validate()?;
    check_param("alpha", alpha, alpha > 0.0 && alpha <= 1.0, "must lie in (0, 1]")?;
    check_param("scale", scale, scale > 0.0, "must be > 0")?;
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) || n_list[0] == 0 {
        return Err(Error::InvalidParameter { name: "n_list", value: n_list.len() as f64, reason: "must be a nonempty increasing list of positive integers" });
    }
    let grid = s_grid();
    let ks = n_list
        .iter()
        .map(|&n| {
            let n = n as f64;
            let a = scale * n.powf(1.0 / alpha);
            grid.iter()
                .map(|&s| (n * phi.neg_log((1.0 - s) / a) - (1.0 - s).powf(alpha)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let theta = n_list.iter().map(|&n| 1.0 / n as f64).collect();
    let tol = tolerances();
    Ok(ConvergenceReport::judge(theta, ks, 0, 0, tol.attraction_final, tol.attraction_slack))
}

/// Default thinning grid `{0.1, ..., 0.9}`.
pub fn c_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SdWitness {
    pub c: f64,
    pub index: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdReport {
    pub verdict: Verdict,
    pub c_grid: Vec<f64>,
    pub order: usize,
    /// Smallest ratio coefficient over the whole grid.
    pub worst: SdWitness,
    /// First failing `(c, index)` in grid order, if any.
    pub witness: Option<SdWitness>,
}

/// Checks that `Q(s) / Q(1 - c + c s)` is a PGF (nonnegative coefficients)
/// for each `c` in the grid.
pub fn discrete_selfdecomposable_check(q: &PgfSpec, c_grid: &[f64], order: usize) -> Result<SdReport> {
    let tol = tolerances();
    let p0 = q.p0();
    if p0 <= tol.zero_at_origin {
        return Err(Error::ZeroAtOrigin(p0));
    }
    for &c in c_grid {
        check_param("c", c, c > 0.0 && c < 1.0, "must lie in (0, 1)")?;
    }
    let num = q.series(order)?;
    let mut worst = SdWitness { c: f64::NAN, index: 0, value: f64::INFINITY };
    let mut witness = None;
    for &c in c_grid {
        let ratio = num.div(&q.thinned_series(c, order)?)?;
        for (index, &value) in ratio.coeffs().iter().enumerate() {
            if !(value >= worst.value) {
                worst = SdWitness { c, index, value };
            }
            if witness.is_none() && !(value >= -tol.sd_ratio_nonneg) {
                witness = Some(SdWitness { c, index, value });
            }
        }
    }
    Ok(SdReport { verdict: Verdict::from_bool(witness.is_none()), c_grid: c_grid.to_vec(), order, worst, witness })
}

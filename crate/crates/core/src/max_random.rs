//! Lattice max-types, extremes over geometric sample sizes, and limits of
//! maxima over `N_theta` observations.

use serde::{Deserialize, Serialize};

use crate::error::{check_param, Error, Result};
use crate::random_sums::PphiSpec;
use crate::report::{ConvergenceReport, Verdict};
use crate::samplers::{self, EmpiricalDist, SeededStream};
use crate::tolerances::tolerances;
use crate::transforms::LtSpec;

const REFERENCE_STREAMS: u64 = 1 << 32;

/// Geometric PGF on I_0, `(1 - q) / (1 - q s)`.
fn geometric_pgf(q: f64, s: f64) -> f64 {
    (1.0 - q) / (1.0 - q * s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Example2Row {
    pub s: f64,
    pub q_x: f64,
    pub q_y: f64,
    pub q_x_thinned: f64,
    pub q_y_thinned: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example2Report {
    pub q: f64,
    pub c: f64,
    pub rows: Vec<Example2Row>,
    /// `sup_s |Q_X(s) - Q_Y(1 - c + c s)|` over the grid.
    pub deviation_x_vs_thinned_y: f64,
    /// `sup_s |Q_Y(s) - Q_X(1 - c + c s)|` over the grid.
    pub deviation_y_vs_thinned_x: f64,
    /// `|Q_X(0) - Q_Y(1 - c)|`.
    pub deviation_at_zero: f64,
    pub verdict: Verdict,
}

/// Two geometric laws of the same lattice max-type (`G(k) = F(c k)`) that
/// are not related by thinning: `X` with `q = 1/4`, `Y` with `q^c = 1/2`.
/// PASS when both thinning relations are refuted by more than 0.01.
pub fn example2_report() -> Example2Report {
    let (q, c): (f64, f64) = (0.25, 0.5);
    let qy = q.powf(c);
    let rows: Vec<Example2Row> = [0.0, 0.25, 0.5, 0.75, 1.0]
        .into_iter()
        .map(|s| Example2Row {
            s,
            q_x: geometric_pgf(q, s),
            q_y: geometric_pgf(qy, s),
            q_x_thinned: geometric_pgf(q, 1.0 - c + c * s),
            q_y_thinned: geometric_pgf(qy, 1.0 - c + c * s),
        })
        .collect();
    let dev_x = rows.iter().map(|r| (r.q_x - r.q_y_thinned).abs()).fold(0.0, f64::max);
    let dev_y = rows.iter().map(|r| (r.q_y - r.q_x_thinned).abs()).fold(0.0, f64::max);
    let deviation_at_zero = (rows[0].q_x - rows[0].q_y_thinned).abs();
    Example2Report {
        q,
        c,
        verdict: Verdict::from_bool(dev_x > 0.01 && dev_y > 0.01),
        rows,
        deviation_x_vs_thinned_y: dev_x,
        deviation_y_vs_thinned_x: dev_y,
        deviation_at_zero,
    }
}

/// Lattice d.f. `F(k) = P{X < k} = 1 - m(scale * k)` with `m` a Laplace
/// transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeDf {
    pub m: LtSpec,
    pub scale: f64,
}

impl LatticeDf {
    pub fn new(m: LtSpec, scale: f64) -> Result<Self> {
        check_param("alpha", scale, scale > 0.0, "must be > 0")?;
        Ok(Self { m: m.validate()?, scale })
    }

    pub fn df(&self, k: usize) -> f64 {
        1.0 - self.m.value(self.scale * k as f64)
    }

    pub fn table(&self, kmax: usize) -> Vec<f64> {
        (0..=kmax).map(|k| self.df(k)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticePair {
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

/// `F(k) = 1 - m(k)` and `G(k) = 1 - m(alpha k)` for `k = 0..=kmax`.
pub fn lattice_dtype_pair(m: &LtSpec, alpha: f64, kmax: usize) -> Result<LatticePair> {
    let f = LatticeDf::new(*m, 1.0)?.table(kmax);
    let g = LatticeDf::new(*m, alpha)?.table(kmax);
    Ok(LatticePair { f, g })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum MaxStabilityCase {
    /// Survival `1/(1 + x^a)`; the minimum over `N` draws times `p^(-1/a)`.
    ParetoMin { a: f64 },
    /// D.f. `1/(1 + e^-x)`; the maximum over `N` draws plus `log p`.
    LogisticMax,
    /// Exp(1); the un-normed minimum over `N` draws. Not stable.
    ExponentialGeoMin,
}

impl MaxStabilityCase {
    fn validate(self) -> Result<Self> {
        if let Self::ParetoMin { a } = self {
            check_param("a", a, a > 0.0, "must be > 0")?;
        }
        Ok(self)
    }

    pub fn is_negative_control(&self) -> bool {
        matches!(self, Self::ExponentialGeoMin)
    }

    fn base_variate<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = samplers::open01(rng);
        match *self {
            Self::ParetoMin { a } => (1.0 / u - 1.0).powf(1.0 / a),
            Self::LogisticMax => (u / (1.0 - u)).ln(),
            Self::ExponentialGeoMin => -u.ln(),
        }
    }

    /// Normed extreme of `n >= 1` base draws.
    fn extreme<R: rand::Rng + ?Sized>(&self, n: u64, p: f64, rng: &mut R) -> f64 {
        let draws = (0..n).map(|_| self.base_variate(rng));
        match *self {
            Self::ParetoMin { a } => draws.fold(f64::INFINITY, f64::min) * p.powf(-1.0 / a),
            Self::LogisticMax => draws.fold(f64::NEG_INFINITY, f64::max) + p.ln(),
            Self::ExponentialGeoMin => draws.fold(f64::INFINITY, f64::min),
        }
    }

    /// `|law of the normed extreme - base law|` at `x`, in closed form.
    fn analytic_gap(&self, p: f64, x: f64) -> f64 {
        let q = 1.0 - p;
        match *self {
            Self::ParetoMin { a } => {
                let s = |y: f64| 1.0 / (1.0 + y.powf(a));
                (p * s(x) / (1.0 - q * s(x)) - s(x / p.powf(1.0 / a))).abs()
            }
            Self::LogisticMax => {
                let f = |y: f64| 1.0 / (1.0 + (-y).exp());
                (p * f(x) / (1.0 - q * f(x)) - f(x + p.ln())).abs()
            }
            Self::ExponentialGeoMin => {
                let s = (-x).exp();
                (p * s / (1.0 - q * s) - s).abs()
            }
        }
    }

    fn grid(&self) -> Vec<f64> {
        match self {
            Self::LogisticMax => (0..=400).map(|i| -10.0 + i as f64 * 0.05).collect(),
            _ => (0..=400).map(|i| i as f64 * 0.025).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremeReport {
    pub case: MaxStabilityCase,
    pub p: f64,
    /// Sup over a grid of the closed-form gap between the normed extreme's
    /// law and the base law (zero up to rounding for stable cases).
    pub grid_deviation: f64,
    /// Two-sample KS between simulated normed extremes and base draws.
    pub ks: f64,
    pub samples: usize,
    pub seed: u64,
    /// PASS iff the base law is reproduced; the negative control is expected
    /// to FAIL.
    pub verdict: Verdict,
}

/// Extremes over a geometric sample size on I_1.
pub fn geo_extreme_stability_check(case: MaxStabilityCase, p: f64, samples: usize, seed: u64) -> Result<ExtremeReport> {
    let case = case.validate()?;
    check_param("p", p, p > 0.0 && p < 1.0, "must lie in (0, 1)")?;
    let grid_deviation = case.grid().into_iter().map(|x| case.analytic_gap(p, x)).fold(0.0, f64::max);
    let sim = EmpiricalDist::new(SeededStream::new(seed, 0).draw(samples, |rng| {
        let n = samplers::geometric_i1(p, rng);
        case.extreme(n, p, rng)
    }))?;
    let base = EmpiricalDist::new(SeededStream::new(seed, REFERENCE_STREAMS).draw(samples, |rng| case.base_variate(rng)))?;
    let ks = samplers::ks_two_sample(&sim, &base);
    let tol = tolerances();
    let stable = grid_deviation < tol.extreme_identity && ks < tol.extreme_ks;
    Ok(ExtremeReport { case, p, grid_deviation, ks, samples, seed, verdict: Verdict::from_bool(stable) })
}

/// Max-stable limit `G` of classical maxima.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum MidTarget {
    /// `exp(-x^-a)`, `x > 0`.
    Frechet { a: f64 },
    /// `exp(-e^-x)`.
    Gumbel,
}

impl MidTarget {
    /// `-log G(x)`, infinite below the support.
    fn neg_log(&self, x: f64) -> f64 {
        match *self {
            Self::Frechet { a } if x > 0.0 => x.powf(-a),
            Self::Frechet { .. } => f64::INFINITY,
            Self::Gumbel => (-x).exp(),
        }
    }
}

/// `F(x) = phi(-log G(x))`.
pub fn phi_mid_df(phi: &LtSpec, g: MidTarget, x: f64) -> Result<f64> {
    let phi = phi.validate()?;
    if let MidTarget::Frechet { a } = g {
        check_param("a", a, a > 0.0, "must be > 0")?;
    }
    let inside = x.is_finite() && !matches!(g, MidTarget::Frechet { .. } if x <= 0.0);
    if !inside {
        return Err(Error::DomainError(x));
    }
    Ok(phi.value(g.neg_log(x)))
}

/// Base law `H` with closed-form max-norming toward its limit `G`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum MaxBase {
    /// Exp(1) toward Gumbel: `M - log(1/theta)`.
    Exponential,
    /// Survival `x^-a` on `[1, inf)` toward Frechet(a): `theta^(1/a) M`.
    Pareto { a: f64 },
}

impl MaxBase {
    fn validate(self) -> Result<Self> {
        if let Self::Pareto { a } = self {
            check_param("a", a, a > 0.0, "must be > 0")?;
        }
        Ok(self)
    }

    pub fn target(&self) -> MidTarget {
        match *self {
            Self::Exponential => MidTarget::Gumbel,
            Self::Pareto { a } => MidTarget::Frechet { a },
        }
    }

    fn variate<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = samplers::open01(rng);
        match *self {
            Self::Exponential => -u.ln(),
            Self::Pareto { a } => u.powf(-1.0 / a),
        }
    }

    fn norm(&self, m: f64, theta: f64) -> f64 {
        match *self {
            Self::Exponential => m - (1.0 / theta).ln(),
            Self::Pareto { a } => m * theta.powf(1.0 / a),
        }
    }
}

/// Normed maxima over `N_theta` draws (an empty maximum is `-inf`).
pub fn transfer_max_sample(phi: &LtSpec, base: MaxBase, theta: f64, n: usize, stream: SeededStream) -> Result<EmpiricalDist> {
    let spec = PphiSpec::new(*phi, 0, 1, theta)?;
    let base = base.validate()?;
    EmpiricalDist::new(stream.draw(n, |rng| {
        let count = spec.variate(rng);
        let m = (0..count).map(|_| base.variate(rng)).fold(f64::NEG_INFINITY, f64::max);
        base.norm(m, theta)
    }))
}

/// KS distances of normed `N_theta`-maxima to `phi(-log G)` along the schedule.
pub fn transfer_max_simulate(
    phi: &LtSpec,
    base: MaxBase,
    thetas: &[f64],
    samples: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    let ok = !thetas.is_empty() && thetas.iter().all(|t| *t > 0.0 && *t < 1.0) && thetas.windows(2).all(|w| w[1] < w[0]);
    if !ok {
        return Err(Error::InvalidParameter { name: "theta_list", value: thetas.len() as f64, reason: "must be a nonempty decreasing list in (0, 1)" });
    }
    let phi = phi.validate()?;
    let target = base.validate()?.target();
    let cdf = |x: f64| phi.value(target.neg_log(x));
    let mut ks = Vec::with_capacity(thetas.len());
    for (i, &theta) in thetas.iter().enumerate() {
        let sample = transfer_max_sample(&phi, base, theta, samples, SeededStream::new(seed, i as u64))?;
        ks.push(samplers::ks_one_sample(&sample, &cdf));
    }
    let tol = tolerances();
    Ok(ConvergenceReport::judge(thetas.to_vec(), ks, samples, seed, tol.transfer_final_ks, tol.monotone_slack))
}

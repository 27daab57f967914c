//! Random sample sizes `N_theta` with PGF `s^j phi((1 - s^k) / theta)`, their
//! limit `theta N_theta -> k U`, and limits of `N_theta`-sums.
//!
//! `N_theta` is drawn through its mixed-Poisson form `j + k Poisson(U / theta)`
//! with `U` having Laplace transform `phi`.

use serde::{Deserialize, Serialize};

use crate::error::{check_param, Error, Result};
use crate::report::ConvergenceReport;
use crate::samplers::{self, EmpiricalDist, KsReference, ScaledLtCdf, SeededStream};
use crate::series::{ProbSeq, Series};
use crate::tolerances::tolerances;
use crate::transforms::{checked_pmf, probe_complete_monotone, CmProbe, Exponent, LtSpec};

/// Stream ids at or above this offset hold reference (target) samples.
const REFERENCE_STREAMS: u64 = 1 << 32;

/// Default `theta` schedule for simulations.
pub const DEFAULT_THETAS: [f64; 4] = [0.5, 0.1, 0.02, 0.004];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PphiSpec {
    pub phi: LtSpec,
    pub j: usize,
    pub k: usize,
    pub theta: f64,
}

impl PphiSpec {
    pub fn new(phi: LtSpec, j: usize, k: usize, theta: f64) -> Result<Self> {
        let phi = phi.validate()?;
        check_param("k", k as f64, k >= 1, "must be >= 1")?;
        check_param("theta", theta, theta > 0.0, "must be > 0")?;
        Ok(Self { phi, j, k, theta })
    }

    fn validate(&self) -> Result<Self> {
        Self::new(self.phi, self.j, self.k, self.theta)
    }

    /// `P_theta(s)` for `s` in `[0, 1]`.
    pub fn pgf(&self, s: f64) -> f64 {
        s.powi(self.j as i32) * self.phi.value((1.0 - s.powi(self.k as i32)) / self.theta)
    }

    /// One draw of `N_theta`.
    pub fn variate<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u = samplers::lt_variate(&self.phi, rng);
        self.j as u64 + self.k as u64 * samplers::poisson(u / self.theta, rng) as u64
    }
}

/// Coefficient prefix of `s^j phi((1 - s^k) / theta)`. A negative
/// coefficient would contradict the PGF property and is reported as an
/// extraction failure.
pub fn pphi_pgf(spec: &PphiSpec, order: usize) -> Result<ProbSeq> {
    let spec = spec.validate()?;
    let mut u = Series::monomial(spec.k, order).scale(-1.0 / spec.theta);
    u = u.add_constant(1.0 / spec.theta);
    let q = spec.phi.compose_series(&u)?.shift(spec.j);
    checked_pmf(&q)
}

pub fn pphi_sample(spec: &PphiSpec, n: usize, stream: SeededStream) -> Result<EmpiricalDist> {
    let spec = spec.validate()?;
    EmpiricalDist::new(stream.draw(n, |rng| spec.variate(rng) as f64))
}

fn check_schedule(thetas: &[f64]) -> Result<()> {
    let ok = !thetas.is_empty()
        && thetas.iter().all(|t| t.is_finite() && *t > 0.0)
        && thetas.windows(2).all(|w| w[1] < w[0]);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "theta_list", value: thetas.len() as f64, reason: "must be a nonempty decreasing list of positive values" })
    }
}

/// KS distance of `sample` to the law of `scale * U`: exact when the family
/// has a closed-form CDF, otherwise against an independent sample.
fn ks_to_scaled(sample: &EmpiricalDist, phi: &LtSpec, scale: f64, n: usize, stream: SeededStream) -> Result<f64> {
    if let Some(cdf) = ScaledLtCdf::new(*phi, scale) {
        return Ok(samplers::ks_one_sample(sample, &cdf));
    }
    let reference = EmpiricalDist::new(stream.draw(n, |rng| scale * samplers::lt_variate(phi, rng)))?;
    Ok(samplers::ks_distance(sample, KsReference::Sample(&reference)))
}

/// KS distances of `theta N_theta` to `k U` along the schedule.
pub fn lemma3_convergence(
    phi: &LtSpec,
    j: usize,
    k: usize,
    thetas: &[f64],
    samples: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    check_schedule(thetas)?;
    let mut ks = Vec::with_capacity(thetas.len());
    for (i, &theta) in thetas.iter().enumerate() {
        let spec = PphiSpec::new(*phi, j, k, theta)?;
        let draws = SeededStream::new(seed, i as u64).draw(samples, |rng| theta * spec.variate(rng) as f64);
        let sample = EmpiricalDist::new(draws)?;
        ks.push(ks_to_scaled(&sample, phi, k as f64, samples, SeededStream::new(seed, REFERENCE_STREAMS + i as u64))?);
    }
    let tol = tolerances();
    Ok(ConvergenceReport::judge(thetas.to_vec(), ks, samples, seed, tol.scaled_count_final_ks, tol.monotone_slack))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiIdSpec {
    pub phi: LtSpec,
    pub psi: Exponent,
}

/// `phi(psi(s))`.
pub fn phi_id_lt(spec: &PhiIdSpec, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::NegativeArgument(s));
    }
    let phi = spec.phi.validate()?;
    Ok(phi.value(spec.psi.validate()?.eval(s)))
}

/// Classical norming of summands: `a_theta = scale * theta^(-1/index)`.
/// Finite-mean laws have index 1 and scale the mean; the stable and
/// Mittag-Leffler families with `alpha < 1` share the stable tail
/// `x^(-alpha) / Gamma(1 - alpha)`, so index `alpha` and scale 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norming {
    pub index: f64,
    pub scale: f64,
}

impl Norming {
    pub fn for_summand(x: &LtSpec) -> Self {
        match (x.mean(), *x) {
            (Some(m), _) => Self { index: 1.0, scale: m },
            (None, LtSpec::PositiveStable { alpha } | LtSpec::MittagLeffler { alpha }) => Self { index: alpha, scale: 1.0 },
            (None, _) => unreachable!("every other family has a finite mean"),
        }
    }

    /// `a_theta`.
    pub fn a(&self, theta: f64) -> f64 {
        self.scale * theta.powf(-1.0 / self.index)
    }
}

fn random_sum<R: rand::Rng + ?Sized>(n: u64, summand: &LtSpec, rng: &mut R) -> f64 {
    (0..n).map(|_| samplers::lt_variate(summand, rng)).sum()
}

/// Draws of `S = a_theta^{-1} sum_{i <= N_theta} X_i` with `N_theta` from the
/// `P_phi` class (`j = 0`, `k = 1`).
pub fn transfer_sum_sample(phi: &LtSpec, summand: &LtSpec, theta: f64, n: usize, stream: SeededStream) -> Result<EmpiricalDist> {
    let spec = PphiSpec::new(*phi, 0, 1, theta)?;
    let summand = summand.validate()?;
    let a = Norming::for_summand(&summand).a(theta);
    EmpiricalDist::new(stream.draw(n, |rng| random_sum(spec.variate(rng), &summand, rng) / a))
}

/// KS of a sample to the transfer limit with LT `phi(s^index)`, i.e. the law
/// of `U^(1/index) S_index`.
fn ks_to_transfer_limit(sample: &EmpiricalDist, phi: &LtSpec, index: f64, n: usize, stream: SeededStream) -> Result<f64> {
    if index == 1.0 {
        return ks_to_scaled(sample, phi, 1.0, n, stream);
    }
    let reference = match *phi {
        // Independent generator: the Mittag-Leffler sampler.
        LtSpec::Exponential { rate } => {
            let ml = samplers::sample_mittag_leffler(index, n, stream)?;
            let c = rate.powf(-1.0 / index);
            EmpiricalDist::new(ml.values().iter().map(|v| c * v).collect())?
        }
        _ => EmpiricalDist::new(stream.draw(n, |rng| {
            samplers::lt_variate(phi, rng).powf(1.0 / index) * samplers::positive_stable(index, rng)
        }))?,
    };
    Ok(samplers::ks_two_sample(sample, &reference))
}

/// Convergence of normalized `N_theta`-sums to their phi-ID limit.
pub fn transfer_sum_simulate(
    phi: &LtSpec,
    summand: &LtSpec,
    thetas: &[f64],
    samples: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    check_schedule(thetas)?;
    let index = Norming::for_summand(summand).index;
    let mut ks = Vec::with_capacity(thetas.len());
    for (i, &theta) in thetas.iter().enumerate() {
        let sample = transfer_sum_sample(phi, summand, theta, samples, SeededStream::new(seed, i as u64))?;
        ks.push(ks_to_transfer_limit(&sample, phi, index, samples, SeededStream::new(seed, REFERENCE_STREAMS + i as u64))?);
    }
    let tol = tolerances();
    Ok(ConvergenceReport::judge(thetas.to_vec(), ks, samples, seed, tol.transfer_final_ks, tol.monotone_slack))
}

/// `P{S = 0} >= P{N = 0}` for any `N`-sum: a positive value rules out an
/// absolutely continuous sum.
pub fn theorem7_atom_check(n_pmf: &ProbSeq) -> f64 {
    n_pmf.p0()
}

/// Exponent `E` of the operator norming `A_theta = theta^E`, as a 2x2 matrix.
pub type ExponentMatrix = [[f64; 2]; 2];

pub fn diagonal_exponent(alpha1: f64, alpha2: f64) -> ExponentMatrix {
    [[1.0 / alpha1, 0.0], [0.0, 1.0 / alpha2]]
}

/// Bivariate `N_theta`-sums normed by `A_theta = diag(theta^E_11, theta^E_22)`
/// (times the summands' scale). Both coordinates share `N_theta`; the
/// summand coordinates are independent. Returns one report per marginal.
pub fn operator_phi_sum_simulate_2d(
    phi: &LtSpec,
    exponent: ExponentMatrix,
    summands: [LtSpec; 2],
    thetas: &[f64],
    samples: usize,
    seed: u64,
) -> Result<[ConvergenceReport; 2]> {
    if exponent[0][1] != 0.0 || exponent[1][0] != 0.0 {
        return Err(Error::UnsupportedOffDiagonal);
    }
    check_schedule(thetas)?;
    let phi = phi.validate()?;
    let summands = [summands[0].validate()?, summands[1].validate()?];
    let normings = summands.map(|x| Norming::for_summand(&x));
    for (i, nm) in normings.iter().enumerate() {
        let e = exponent[i][i];
        if !((e - 1.0 / nm.index).abs() <= 1e-12) {
            return Err(Error::InvalidParameter { name: "exponent", value: e, reason: "diagonal entry must equal 1/alpha of the summand's stable index" });
        }
    }
    let mut ks = [Vec::new(), Vec::new()];
    for (i, &theta) in thetas.iter().enumerate() {
        let spec = PphiSpec::new(phi, 0, 1, theta)?;
        let a = normings.map(|nm| nm.a(theta));
        let pairs = SeededStream::new(seed, i as u64).draw_with(samples, |rng| {
            let n = spec.variate(rng);
            [random_sum(n, &summands[0], rng) / a[0], random_sum(n, &summands[1], rng) / a[1]]
        });
        for c in 0..2 {
            let marginal = EmpiricalDist::new(pairs.iter().map(|p| p[c]).collect())?;
            let stream = SeededStream::new(seed, REFERENCE_STREAMS + 2 * i as u64 + c as u64);
            ks[c].push(ks_to_transfer_limit(&marginal, &phi, normings[c].index, samples, stream)?);
        }
    }
    let tol = tolerances();
    let [k0, k1] = ks;
    Ok([k0, k1].map(|k| ConvergenceReport::judge(thetas.to_vec(), k, samples, seed, tol.transfer_final_ks, tol.monotone_slack)))
}

/// Probes `d/ds [-log f]` for the Mittag-Leffler transform
/// `f(s) = 1/(1 + s^alpha)`, namely `alpha s^(alpha-1) / (1 + s^alpha)`, for
/// complete monotonicity on `grid` (evidence, not proof, that `f` is ID).
pub fn mittag_leffler_id_probe(alpha: f64, grid: &[f64]) -> Result<CmProbe> {
    check_param("alpha", alpha, alpha > 0.0 && alpha <= 1.0, "must lie in (0, 1]")?;
    let values: Vec<f64> = grid.iter().map(|&s| alpha * s.powf(alpha - 1.0) / (1.0 + s.powf(alpha))).collect();
    let errors: Vec<f64> = values.iter().map(|v| 32.0 * f64::EPSILON * v.abs()).collect();
    Ok(probe_complete_monotone(grid, &values, &errors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws;
    use crate::report::Verdict;
    use approx::assert_abs_diff_eq;

    fn exp1() -> LtSpec {
        LtSpec::exponential(1.0).unwrap()
    }

    #[test]
    fn pphi_exponential_is_geometric() {
        let theta = 0.3;
        let q = pphi_pgf(&PphiSpec::new(exp1(), 0, 1, theta).unwrap(), 64).unwrap();
        for n in 0..=64 {
            let want = theta / (1.0 + theta) * (1.0 / (1.0 + theta)).powi(n as i32);
            assert_abs_diff_eq!(q.mass(n), want, epsilon = 1e-14);
        }
    }

    #[test]
    fn pphi_degenerate_is_shifted_poisson() {
        let q = pphi_pgf(&PphiSpec::new(LtSpec::degenerate(1.0).unwrap(), 1, 1, 0.5).unwrap(), 40).unwrap();
        let po = laws::poisson(2.0, 40).unwrap();
        assert_eq!(q.p0(), 0.0);
        for n in 1..=40 {
            assert_abs_diff_eq!(q.mass(n), po.mass(n - 1), epsilon = 1e-15);
        }
    }

    #[test]
    fn pphi_support_is_a_lattice() {
        let q = pphi_pgf(&PphiSpec::new(exp1(), 0, 2, 0.5).unwrap(), 40).unwrap();
        assert!((0..=40).filter(|n| n % 2 == 1).all(|n| q.mass(n) == 0.0));
        let s = pphi_sample(&PphiSpec::new(exp1(), 3, 2, 0.5).unwrap(), 1000, SeededStream::new(1, 0)).unwrap();
        assert!(s.values().iter().all(|&v| v as u64 % 2 == 1 && v >= 3.0));
    }

    #[test]
    fn pphi_sample_means() {
        let n = 100_000;
        let s = pphi_sample(&PphiSpec::new(LtSpec::degenerate(1.0).unwrap(), 0, 1, 0.5).unwrap(), n, SeededStream::new(42, 0)).unwrap();
        assert!((s.mean() - 2.0).abs() < 3.0 * (s.variance() / n as f64).sqrt());
        let s = pphi_sample(&PphiSpec::new(exp1(), 0, 1, 0.1).unwrap(), n, SeededStream::new(42, 1)).unwrap();
        assert!((s.mean() - 10.0).abs() < 3.0 * (s.variance() / n as f64).sqrt());
    }

    #[test]
    fn phi_id_examples() {
        let ml = PhiIdSpec { phi: exp1(), psi: Exponent::stable(0.5, 1.0).unwrap() };
        assert_eq!(phi_id_lt(&ml, 1.0).unwrap(), 0.5);
        let g = PhiIdSpec { phi: LtSpec::gamma(2.0, 1.0).unwrap(), psi: Exponent::identity() };
        assert_eq!(phi_id_lt(&g, 3.0).unwrap(), 0.0625);
        let d = PhiIdSpec { phi: LtSpec::degenerate(1.0).unwrap(), psi: Exponent::stable(0.3, 1.0).unwrap() };
        assert_abs_diff_eq!(phi_id_lt(&d, 2.0).unwrap(), (-(2f64.powf(0.3))).exp(), epsilon = 1e-15);
        assert!(matches!(phi_id_lt(&d, -1.0), Err(Error::NegativeArgument(_))));
    }

    #[test]
    fn atoms() {
        assert_eq!(theorem7_atom_check(&laws::geometric(0.5, 10).unwrap()), 0.5);
        assert_eq!(theorem7_atom_check(&laws::geometric_i1(0.5, 10).unwrap()), 0.0);
        assert_eq!(theorem7_atom_check(&laws::poisson(2.0, 10).unwrap()), (-2.0f64).exp());
    }

    #[test]
    fn off_diagonal_rejected() {
        let r = operator_phi_sum_simulate_2d(&exp1(), [[1.0, 0.5], [0.0, 1.0]], [exp1(), exp1()], &[0.5], 10, 1);
        assert_eq!(r.unwrap_err(), Error::UnsupportedOffDiagonal);
    }

    #[test]
    fn small_scaled_count_run() {
        let r = lemma3_convergence(&exp1(), 0, 1, &[0.5, 0.05], 20_000, 3).unwrap();
        assert!(r.ks[1] < r.ks[0]);
        assert!(r.final_ks() < 0.05);
    }

    #[test]
    fn ml_probe_passes() {
        let grid: Vec<f64> = (1..=16).map(|i| i as f64 * 0.25).collect();
        assert_eq!(mittag_leffler_id_probe(0.5, &grid).unwrap().verdict, Verdict::Pass);
    }
}

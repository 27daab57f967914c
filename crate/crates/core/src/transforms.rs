//! Laplace-transform families on `[0, inf)` and the bridge to PGFs:
//! `Q(s) = phi(1 - s)` is a PGF whenever `phi` is a Laplace transform.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma_lr;

use crate::error::{check_param, Error, Result};
use crate::report::Verdict;
use crate::series::{ProbSeq, Series};
use crate::tolerances::tolerances;

/// A member of one of the five supported Laplace-transform families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LtSpec {
    /// Point mass at `c`: `exp(-c s)`.
    Degenerate { c: f64 },
    /// `rate / (rate + s)`.
    Exponential { rate: f64 },
    /// `(rate / (rate + s))^shape`.
    Gamma { shape: f64, rate: f64 },
    /// One-sided stable: `exp(-s^alpha)`.
    PositiveStable { alpha: f64 },
    /// `1 / (1 + s^alpha)`.
    MittagLeffler { alpha: f64 },
}

fn check_alpha(alpha: f64) -> Result<()> {
    check_param("alpha", alpha, alpha > 0.0 && alpha <= 1.0, "must lie in (0, 1]")
}

impl LtSpec {
    pub fn degenerate(c: f64) -> Result<Self> {
        check_param("c", c, c > 0.0, "must be > 0")?;
        Ok(Self::Degenerate { c })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        check_param("rate", rate, rate > 0.0, "must be > 0")?;
        Ok(Self::Exponential { rate })
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        check_param("shape", shape, shape > 0.0, "must be > 0")?;
        check_param("rate", rate, rate > 0.0, "must be > 0")?;
        Ok(Self::Gamma { shape, rate })
    }

    pub fn positive_stable(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self::PositiveStable { alpha })
    }

    pub fn mittag_leffler(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self::MittagLeffler { alpha })
    }

    /// Re-run the constructor checks (for values built as enum literals).
    pub fn validate(self) -> Result<Self> {
        match self {
            Self::Degenerate { c } => Self::degenerate(c),
            Self::Exponential { rate } => Self::exponential(rate),
            Self::Gamma { shape, rate } => Self::gamma(shape, rate),
            Self::PositiveStable { alpha } => Self::positive_stable(alpha),
            Self::MittagLeffler { alpha } => Self::mittag_leffler(alpha),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::Degenerate { .. } => "degenerate",
            Self::Exponential { .. } => "exponential",
            Self::Gamma { .. } => "gamma",
            Self::PositiveStable { .. } => "positive-stable",
            Self::MittagLeffler { .. } => "mittag-leffler",
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let pairs: Vec<(&str, f64)> = match *self {
            Self::Degenerate { c } => vec![("c", c)],
            Self::Exponential { rate } => vec![("rate", rate)],
            Self::Gamma { shape, rate } => vec![("shape", shape), ("rate", rate)],
            Self::PositiveStable { alpha } | Self::MittagLeffler { alpha } => vec![("alpha", alpha)],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// Build from a family name and `key = value` pairs. Unknown and missing
    /// keys are rejected by name.
    pub fn from_params(family: &str, params: &BTreeMap<String, f64>) -> std::result::Result<Self, String> {
        let allowed: &[&str] = match family {
            "degenerate" => &["c"],
            "exponential" => &["rate"],
            "gamma" => &["shape", "rate"],
            "positive-stable" | "mittag-leffler" => &["alpha"],
            other => return Err(format!("unknown Laplace-transform family `{other}`")),
        };
        if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(format!("unknown key `{k}` for family `{family}` (expected {})", allowed.join(", ")));
        }
        let get = |k: &str| params.get(k).copied().ok_or_else(|| format!("missing key `{k}` for family `{family}`"));
        let built = match family {
            "degenerate" => Self::degenerate(get("c")?),
            "exponential" => Self::exponential(get("rate")?),
            "gamma" => Self::gamma(get("shape")?, get("rate")?),
            "positive-stable" => Self::positive_stable(get("alpha")?),
            _ => Self::mittag_leffler(get("alpha")?),
        };
        built.map_err(|e| e.to_string())
    }

    /// `phi(s)` for `s >= 0`.
    pub fn evaluate(&self, s: f64) -> Result<f64> {
        if s < 0.0 || s.is_nan() {
            return Err(Error::NegativeArgument(s));
        }
        Ok(self.value(s))
    }

    /// Unchecked closed form; `s = inf` gives the limit 0.
    pub(crate) fn value(&self, s: f64) -> f64 {
        match *self {
            Self::Degenerate { c } => (-c * s).exp(),
            Self::Exponential { rate } => rate / (rate + s),
            Self::Gamma { shape, rate } => (rate / (rate + s)).powf(shape),
            Self::PositiveStable { alpha } => (-s.powf(alpha)).exp(),
            Self::MittagLeffler { alpha } => 1.0 / (1.0 + s.powf(alpha)),
        }
    }

    /// `-log phi(s)`, computed without forming `phi` where that loses digits.
    pub fn neg_log(&self, s: f64) -> f64 {
        match *self {
            Self::Degenerate { c } => c * s,
            Self::Exponential { rate } => (s / rate).ln_1p(),
            Self::Gamma { shape, rate } => shape * (s / rate).ln_1p(),
            Self::PositiveStable { alpha } => s.powf(alpha),
            Self::MittagLeffler { alpha } => s.powf(alpha).ln_1p(),
        }
    }

    /// Power series of `phi(u(s))`. Needs `u_0 > 0` (the stable families take
    /// a real power of `u`).
    pub fn compose_series(&self, u: &Series) -> Result<Series> {
        let n = u.order();
        let out = match *self {
            Self::Degenerate { c } => u.scale(-c).exp(),
            Self::Exponential { rate } => u.add_constant(rate).recip()?.scale(rate),
            Self::Gamma { shape, rate } => u.scale(1.0 / rate).add_constant(1.0).pow(-shape)?,
            Self::PositiveStable { alpha } => power(u, alpha)?.scale(-1.0).exp(),
            Self::MittagLeffler { alpha } => power(u, alpha)?.add_constant(1.0).recip()?,
        };
        debug_assert_eq!(out.order(), n);
        Ok(out)
    }

    pub fn mean(&self) -> Option<f64> {
        match *self {
            Self::Degenerate { c } => Some(c),
            Self::Exponential { rate } => Some(1.0 / rate),
            Self::Gamma { shape, rate } => Some(shape / rate),
            Self::PositiveStable { alpha } | Self::MittagLeffler { alpha } => (alpha == 1.0).then_some(1.0),
        }
    }

    /// Closed-form CDF of the law, when one exists. The stable and
    /// Mittag-Leffler families return `None` unless `alpha = 1`.
    pub fn cdf(&self, x: f64) -> Option<f64> {
        if x.is_nan() {
            return None;
        }
        let pos = x.max(0.0);
        match *self {
            Self::Degenerate { c } => Some(if x >= c { 1.0 } else { 0.0 }),
            Self::Exponential { rate } => Some(-(-rate * pos).exp_m1()),
            Self::Gamma { shape, rate } => Some(if x <= 0.0 { 0.0 } else if x.is_infinite() { 1.0 } else { gamma_lr(shape, rate * x) }),
            Self::PositiveStable { alpha } if alpha == 1.0 => Some(if x >= 1.0 { 1.0 } else { 0.0 }),
            Self::MittagLeffler { alpha } if alpha == 1.0 => Some(-(-pos).exp_m1()),
            _ => None,
        }
    }

    /// Left limit of [`LtSpec::cdf`]; differs only at atoms.
    pub fn cdf_left(&self, x: f64) -> Option<f64> {
        match *self {
            Self::Degenerate { c } => Some(if x > c { 1.0 } else { 0.0 }),
            Self::PositiveStable { alpha } if alpha == 1.0 => Some(if x > 1.0 { 1.0 } else { 0.0 }),
            _ => self.cdf(x),
        }
    }
}

fn power(u: &Series, alpha: f64) -> Result<Series> {
    if alpha == 1.0 {
        Ok(u.clone())
    } else {
        u.pow(alpha)
    }
}

impl fmt::Display for LtSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}:{}", self.family(), params.join(","))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LtSpecJson {
    family: String,
    params: BTreeMap<String, f64>,
}

impl Serialize for LtSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LtSpecJson { family: self.family().to_string(), params: self.params() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LtSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LtSpecJson::deserialize(d)?;
        LtSpec::from_params(&raw.family, &raw.params).map_err(serde::de::Error::custom)
    }
}

/// Exponent `psi` with `exp(-psi)` an infinitely divisible Laplace transform
/// and `psi(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Exponent {
    /// `scale * s^alpha`, `alpha` in `(0, 1]`.
    Stable { alpha: f64, scale: f64 },
    /// `rate * (1 - exp(-s))`: compound Poisson with unit jumps.
    Poisson { rate: f64 },
}

impl Exponent {
    pub fn stable(alpha: f64, scale: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_param("scale", scale, scale > 0.0, "must be > 0")?;
        Ok(Self::Stable { alpha, scale })
    }

    pub fn poisson(rate: f64) -> Result<Self> {
        check_param("rate", rate, rate > 0.0, "must be > 0")?;
        Ok(Self::Poisson { rate })
    }

    /// The identity exponent `psi(s) = s`.
    pub fn identity() -> Self {
        Self::Stable { alpha: 1.0, scale: 1.0 }
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            Self::Stable { alpha, scale } => Self::stable(alpha, scale),
            Self::Poisson { rate } => Self::poisson(rate),
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            Self::Stable { alpha, scale } => scale * s.powf(alpha),
            Self::Poisson { rate } => -rate * (-s).exp_m1(),
        }
    }

    /// Power series of `psi(v(s))`; needs `v_0 > 0` unless `alpha = 1`.
    pub fn compose_series(&self, v: &Series) -> Result<Series> {
        match *self {
            Self::Stable { alpha, scale } => Ok(power(v, alpha)?.scale(scale)),
            Self::Poisson { rate } => Ok(v.scale(-1.0).exp().scale(-rate).add_constant(rate)),
        }
    }
}

/// A probability generating function: an explicit pmf prefix, or the closed
/// form `Q(s) = phi(psi(1 - s))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PgfSpec {
    Pmf { pmf: ProbSeq },
    Lt { phi: LtSpec, psi: Exponent },
}

impl PgfSpec {
    pub fn pmf(q: ProbSeq) -> Self {
        Self::Pmf { pmf: q }
    }

    /// `Q(s) = phi(1 - s)`.
    pub fn from_lt(phi: LtSpec) -> Self {
        Self::Lt { phi, psi: Exponent::identity() }
    }

    /// Geometric on I_0 with `P{X = n} = p q^n`, i.e. `p / (1 - q s)`.
    pub fn geometric(p: f64) -> Result<Self> {
        check_param("p", p, p > 0.0 && p < 1.0, "must lie in (0, 1)")?;
        Ok(Self::from_lt(LtSpec::exponential(p / (1.0 - p))?))
    }

    /// Discrete stable law `exp(-lambda (1 - s)^alpha)`.
    pub fn discrete_stable(alpha: f64, lambda: f64) -> Result<Self> {
        Ok(Self::Lt { phi: LtSpec::degenerate(lambda)?, psi: Exponent::stable(alpha, 1.0)? })
    }

    /// `phi(lambda (1 - s)^alpha)`: a phi-mixture of a discrete stable law.
    pub fn stable_mixture(phi: LtSpec, alpha: f64, lambda: f64) -> Result<Self> {
        Ok(Self::Lt { phi, psi: Exponent::stable(alpha, lambda)? })
    }

    /// `Q(s)` for `s` in `[0, 1]`.
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Self::Pmf { pmf } => pmf.pgf(s),
            Self::Lt { phi, psi } => phi.value(psi.eval(1.0 - s)),
        }
    }

    /// The candidate transform `s -> Q(1 - s)`. A pmf prefix is only
    /// evaluated inside its disc of convergence (`s <= 2`).
    pub fn lt_side(&self, s: f64) -> Option<f64> {
        match self {
            Self::Pmf { pmf } => (s <= 2.0).then(|| pmf.pgf(1.0 - s)),
            Self::Lt { phi, psi } => Some(phi.value(psi.eval(s))),
        }
    }

    /// Mass the representation leaves unaccounted for.
    pub fn tail_bound(&self) -> f64 {
        match self {
            Self::Pmf { pmf } => pmf.tail_bound(),
            Self::Lt { .. } => 0.0,
        }
    }

    pub fn p0(&self) -> f64 {
        self.eval(0.0)
    }

    /// Coefficient prefix of `Q`.
    pub fn series(&self, order: usize) -> Result<Series> {
        match self {
            Self::Pmf { pmf } => Ok(pmf.with_order(order).to_series()),
            Self::Lt { phi, psi } => phi.compose_series(&psi.compose_series(&Series::linear(1.0, -1.0, order))?),
        }
    }

    /// Coefficient prefix of the thinned PGF `Q(1 - c + c s)`.
    pub fn thinned_series(&self, c: f64, order: usize) -> Result<Series> {
        match self {
            Self::Pmf { pmf } => {
                let full = pmf.to_series();
                Ok(full.compose(&Series::linear(1.0 - c, c, full.order())).truncate(order))
            }
            Self::Lt { phi, psi } => phi.compose_series(&psi.compose_series(&Series::linear(c, -c, order))?),
        }
    }

    pub fn probseq(&self, order: usize) -> Result<ProbSeq> {
        match self {
            Self::Pmf { pmf } => Ok(pmf.with_order(order)),
            Self::Lt { .. } => checked_pmf(&self.series(order)?),
        }
    }
}

pub(crate) fn checked_pmf(s: &Series) -> Result<ProbSeq> {
    let floor = -tolerances().nonneg_coeff;
    if let Some((index, &value)) = s.coeffs().iter().enumerate().find(|(_, c)| !c.is_finite() || **c < floor) {
        return Err(Error::CoefficientExtractionFailure { index, value });
    }
    ProbSeq::from_series(s).map_err(|_| Error::CoefficientExtractionFailure { index: 0, value: s.coeffs().iter().sum() })
}

/// Coefficient prefix of `Q(s) = phi(1 - s)`.
pub fn pgf_from_lt(phi: &LtSpec, order: usize) -> Result<ProbSeq> {
    if order == 0 {
        return Err(Error::InvalidParameter { name: "order", value: 0.0, reason: "must be >= 1" });
    }
    checked_pmf(&PgfSpec::from_lt(phi.validate()?).series(order)?)
}

/// Divided-difference order used by the complete-monotonicity probe.
pub const CM_PROBE_DEPTH: usize = 6;

/// Violations smaller than this multiple of the propagated rounding bound are
/// treated as noise.
const NOISE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CmViolation {
    /// A value outside `[0, 1]` (or negative, for unbounded probes).
    Range { index: usize, value: f64 },
    /// `(-1)^order * f[x_i..x_{i+order}] < 0`.
    Alternation { order: usize, index: usize, value: f64 },
    /// Second divided difference of `ln f` is negative.
    LogConvexity { index: usize, value: f64 },
}

impl CmViolation {
    fn magnitude(&self) -> f64 {
        match *self {
            Self::Range { value, .. } => value.abs(),
            Self::Alternation { value, .. } | Self::LogConvexity { value, .. } => value.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmProbe {
    pub table: Vec<(f64, f64)>,
    pub verdict: Verdict,
    /// Highest divided-difference order actually examined.
    pub depth: usize,
    pub worst: Option<CmViolation>,
}

/// Finite-difference probe for complete monotonicity of sampled values.
///
/// Checks nonnegativity, sign alternation of divided differences up to
/// [`CM_PROBE_DEPTH`], and log-convexity (every completely monotone function
/// is log-convex). `errors[i]` bounds the absolute error in `values[i]`.
pub fn probe_complete_monotone(grid: &[f64], values: &[f64], errors: &[f64]) -> CmProbe {
    let table: Vec<(f64, f64)> = grid.iter().copied().zip(values.iter().copied()).collect();
    let inconclusive = |table| CmProbe { table, verdict: Verdict::Inconclusive, depth: 0, worst: None };
    let grid_ok = grid.len() >= 2
        && grid.len() == values.len()
        && grid.iter().all(|x| x.is_finite() && *x > 0.0)
        && grid.windows(2).all(|w| w[0] < w[1]);
    if !grid_ok || values.iter().chain(errors).any(|v| !v.is_finite()) {
        return inconclusive(table);
    }

    let mut worst: Option<CmViolation> = None;
    let mut note = |v: CmViolation| {
        if worst.is_none_or(|w| v.magnitude() > w.magnitude()) {
            worst = Some(v);
        }
    };

    for (i, (&f, &e)) in values.iter().zip(errors).enumerate() {
        if f < -NOISE_FACTOR * e {
            note(CmViolation::Range { index: i, value: f });
        }
    }

    let depth = CM_PROBE_DEPTH.min(grid.len() - 1);
    let mut diff = values.to_vec();
    let mut err = errors.to_vec();
    for order in 1..=depth {
        let next: Vec<(f64, f64)> = (0..diff.len() - 1)
            .map(|i| {
                let h = grid[i + order] - grid[i];
                ((diff[i + 1] - diff[i]) / h, (err[i + 1] + err[i]) / h)
            })
            .collect();
        let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
        for (i, &(d, e)) in next.iter().enumerate() {
            if sign * d < -NOISE_FACTOR * e {
                note(CmViolation::Alternation { order, index: i, value: d });
            }
        }
        diff = next.iter().map(|p| p.0).collect();
        err = next.iter().map(|p| p.1).collect();
    }

    for i in 0..grid.len().saturating_sub(2) {
        let (f0, f1, f2) = (values[i], values[i + 1], values[i + 2]);
        let (e0, e1, e2) = (errors[i], errors[i + 1], errors[i + 2]);
        if f0 <= NOISE_FACTOR * e0 || f1 <= NOISE_FACTOR * e1 || f2 <= NOISE_FACTOR * e2 {
            continue;
        }
        let (x0, x1, x2) = (grid[i], grid[i + 1], grid[i + 2]);
        let d01 = (f1.ln() - f0.ln()) / (x1 - x0);
        let d12 = (f2.ln() - f1.ln()) / (x2 - x1);
        let dd = (d12 - d01) / (x2 - x0);
        let noise = (e0 / f0 + e1 / f1) / (x1 - x0) + (e1 / f1 + e2 / f2) / (x2 - x1);
        if dd < -NOISE_FACTOR * noise / (x2 - x0) {
            note(CmViolation::LogConvexity { index: i, value: dd });
        }
    }

    let verdict = if worst.is_some() {
        Verdict::Fail
    } else if depth < CM_PROBE_DEPTH {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    CmProbe { table, verdict, depth, worst }
}

/// Default probe grid `{0.1, 0.2, ..., 1.9}`, inside the region where a
/// pmf prefix can be evaluated.
pub fn probe_grid() -> Vec<f64> {
    (1..=19).map(|i| i as f64 * 0.1).collect()
}

/// Tabulate `s -> Q(1 - s)` on `grid` and probe whether it can be a Laplace
/// transform (the converse direction of the PGF/LT bridge).
pub fn lt_candidate_from_pgf(q: &PgfSpec, grid: &[f64]) -> CmProbe {
    let values: Option<Vec<f64>> = grid.iter().map(|&s| q.lt_side(s)).collect();
    let Some(values) = values else {
        let table = grid.iter().map(|&s| (s, f64::NAN)).collect();
        return CmProbe { table, verdict: Verdict::Inconclusive, depth: 0, worst: None };
    };
    let eps = f64::EPSILON;
    let errors: Vec<f64> = match q {
        PgfSpec::Pmf { pmf } => {
            let n = pmf.order() as f64 + 1.0;
            values.iter().map(|f| 8.0 * eps * (f.abs() + n) + pmf.tail_bound()).collect()
        }
        PgfSpec::Lt { .. } => values.iter().map(|f| 32.0 * eps * f.abs().max(eps)).collect(),
    };
    let mut probe = probe_complete_monotone(grid, &values, &errors);
    if let Some((index, &value)) = values.iter().enumerate().find(|(i, f)| **f > 1.0 + NOISE_FACTOR * errors[*i]) {
        let v = CmViolation::Range { index, value };
        if probe.worst.is_none_or(|w| v.magnitude() > w.magnitude()) {
            probe.worst = Some(v);
        }
        probe.verdict = Verdict::Fail;
    }
    probe
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid() -> Vec<f64> {
        (1..=19).map(|i| i as f64 * 0.1).collect()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(LtSpec::exponential(1.0).unwrap().evaluate(1.0).unwrap(), 0.5);
        assert_abs_diff_eq!(LtSpec::positive_stable(1.0).unwrap().evaluate(2.0).unwrap(), (-2.0f64).exp());
        assert_eq!(LtSpec::gamma(2.0, 1.0).unwrap().evaluate(1.0).unwrap(), 0.25);
        assert_eq!(LtSpec::mittag_leffler(0.5).unwrap().evaluate(4.0).unwrap(), 1.0 / 3.0);
        assert!(matches!(LtSpec::exponential(1.0).unwrap().evaluate(-1.0), Err(Error::NegativeArgument(_))));
    }

    #[test]
    fn families_are_transforms_on_a_grid() {
        let specs = [
            LtSpec::degenerate(1.5).unwrap(),
            LtSpec::exponential(0.7).unwrap(),
            LtSpec::gamma(2.5, 3.0).unwrap(),
            LtSpec::positive_stable(0.4).unwrap(),
            LtSpec::mittag_leffler(0.8).unwrap(),
        ];
        for phi in specs {
            assert_eq!(phi.evaluate(0.0).unwrap(), 1.0);
            let vals: Vec<f64> = (0..200).map(|i| phi.evaluate(i as f64 * 0.05).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] <= w[0]), "{phi}");
            assert!(vals.iter().all(|v| *v > 0.0 && *v <= 1.0));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LtSpec::gamma(-1.0, 1.0).is_err());
        assert!(LtSpec::positive_stable(1.5).is_err());
        assert!(LtSpec::mittag_leffler(0.0).is_err());
        assert!(LtSpec::degenerate(f64::NAN).is_err());
    }

    #[test]
    fn json_form() {
        let g = LtSpec::gamma(2.0, 1.0).unwrap();
        let js = serde_json::to_string(&g).unwrap();
        assert_eq!(js, r#"{"family":"gamma","params":{"rate":1.0,"shape":2.0}}"#);
        assert_eq!(serde_json::from_str::<LtSpec>(&js).unwrap(), g);
        let bad = r#"{"family":"gamma","params":{"shape":-2.0,"rate":1.0}}"#;
        assert!(serde_json::from_str::<LtSpec>(bad).is_err());
        let unknown = r#"{"family":"gamma","params":{"shape":2.0,"rate":1.0,"loc":0}}"#;
        assert!(serde_json::from_str::<LtSpec>(unknown).is_err());
    }

    #[test]
    fn degenerate_gives_poisson() {
        let q = pgf_from_lt(&LtSpec::degenerate(1.0).unwrap(), 30).unwrap();
        let mut p = (-1.0f64).exp();
        for n in 0..=30 {
            assert_abs_diff_eq!(q.mass(n), p, epsilon = 1e-15);
            p /= (n + 1) as f64;
        }
    }

    #[test]
    fn exponential_gives_geometric_half() {
        let q = pgf_from_lt(&LtSpec::exponential(1.0).unwrap(), 40).unwrap();
        for n in 0..=40 {
            assert_abs_diff_eq!(q.mass(n), 0.5f64.powi(n as i32 + 1), epsilon = 1e-15);
        }
    }

    #[test]
    fn positive_stable_gives_discrete_stable() {
        let q = pgf_from_lt(&LtSpec::positive_stable(0.5).unwrap(), 64).unwrap();
        assert_abs_diff_eq!(q.p0(), (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(q.mass(1), (-1.0f64).exp() / 2.0, epsilon = 1e-15);
        assert!(q.masses().iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn pgf_prefix_matches_transform() {
        let specs = [
            LtSpec::degenerate(2.0).unwrap(),
            LtSpec::exponential(1.0).unwrap(),
            LtSpec::gamma(2.0, 1.5).unwrap(),
            LtSpec::positive_stable(0.6).unwrap(),
            LtSpec::mittag_leffler(0.7).unwrap(),
        ];
        for phi in specs {
            let q = pgf_from_lt(&phi, 64).unwrap();
            for i in 1..=9 {
                let s = i as f64 / 10.0;
                let diff = (q.pgf(s) - phi.evaluate(1.0 - s).unwrap()).abs();
                assert!(diff <= 1e-8 + q.tail_bound(), "{phi} at {s}: {diff}");
            }
        }
    }

    #[test]
    fn pgf_from_lt_rejects_order_zero() {
        assert!(pgf_from_lt(&LtSpec::exponential(1.0).unwrap(), 0).is_err());
    }

    #[test]
    fn geometric_candidate_passes_and_matches_exponential() {
        for p in [0.2, 0.5, 0.8] {
            let q = PgfSpec::geometric(p).unwrap();
            let probe = lt_candidate_from_pgf(&q, &grid());
            assert_eq!(probe.verdict, Verdict::Pass, "{probe:?}");
            let phi = LtSpec::exponential(p / (1.0 - p)).unwrap();
            for (s, v) in &probe.table {
                assert_abs_diff_eq!(*v, phi.evaluate(*s).unwrap(), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn geometric_pmf_prefix_candidate_passes() {
        let q = PgfSpec::pmf(crate::laws::geometric(0.5, 64).unwrap());
        assert_eq!(lt_candidate_from_pgf(&q, &grid()).verdict, Verdict::Pass);
    }

    #[test]
    fn bernoulli_candidate_fails() {
        let q = PgfSpec::pmf(ProbSeq::new(vec![0.5, 0.5], 0.0).unwrap());
        let probe = lt_candidate_from_pgf(&q, &grid());
        assert_eq!(probe.verdict, Verdict::Fail);
        assert!(matches!(probe.worst, Some(CmViolation::LogConvexity { .. })));
    }

    #[test]
    fn degenerate_at_zero_candidate_passes() {
        let q = PgfSpec::pmf(ProbSeq::degenerate(0, 4));
        let probe = lt_candidate_from_pgf(&q, &grid());
        assert_eq!(probe.verdict, Verdict::Pass);
        assert!(probe.table.iter().all(|(_, v)| *v == 1.0));
    }

    #[test]
    fn short_or_bad_grids_are_inconclusive() {
        let q = PgfSpec::geometric(0.5).unwrap();
        assert_eq!(lt_candidate_from_pgf(&q, &[0.1, 0.2, 0.3]).verdict, Verdict::Inconclusive);
        assert_eq!(lt_candidate_from_pgf(&q, &[0.3, 0.2, 0.1]).verdict, Verdict::Inconclusive);
        let pmf = PgfSpec::pmf(crate::laws::geometric(0.5, 64).unwrap());
        let wide: Vec<f64> = (1..=10).map(|i| i as f64 * 0.5).collect();
        assert_eq!(lt_candidate_from_pgf(&pmf, &wide).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn thinned_series_agrees_between_representations() {
        let closed = PgfSpec::geometric(0.5).unwrap();
        let table = PgfSpec::pmf(crate::laws::geometric(0.5, 200).unwrap());
        let a = closed.thinned_series(0.3, 30).unwrap();
        let b = table.thinned_series(0.3, 30).unwrap();
        for i in 0..=30 {
            assert_abs_diff_eq!(a.coeff(i), b.coeff(i), epsilon = 1e-13);
        }
    }
}

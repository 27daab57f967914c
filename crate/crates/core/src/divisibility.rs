//! Certifying and refuting infinite divisibility of laws on I_0.
//!
//! A law on I_0 with `p_0 > 0` is ID exactly when it is compound Poisson:
//! `log Q(s) = -lambda + lambda A(s)` with `A` a pmf on I_1. The certificate
//! is the normalized log-PGF; the refutation is its first negative
//! coefficient.

use serde::{Deserialize, Serialize};

use crate::error::{check_param, Error, Result};
use crate::report::Verdict;
use crate::series::{ProbSeq, Series};
use crate::tolerances::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecompositionVerdict {
    #[serde(rename = "ID")]
    Id,
    #[serde(rename = "NotID_ZeroAtOrigin")]
    NotIdZeroAtOrigin,
    #[serde(rename = "NotID_FiniteSupport")]
    NotIdFiniteSupport,
    #[serde(rename = "NotID_NegativeCoefficient")]
    NotIdNegativeCoefficient,
    #[serde(rename = "Inconclusive")]
    Inconclusive,
}

impl DecompositionVerdict {
    pub fn is_id(self) -> bool {
        self == Self::Id
    }

    pub fn is_not_id(self) -> bool {
        matches!(self, Self::NotIdZeroAtOrigin | Self::NotIdFiniteSupport | Self::NotIdNegativeCoefficient)
    }

    /// Collapsed to the shared report verdicts.
    pub fn verdict(self) -> Verdict {
        match self {
            Self::Id => Verdict::Id,
            Self::Inconclusive => Verdict::Inconclusive,
            _ => Verdict::NotId,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub verdict: DecompositionVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compounding: Option<ProbSeq>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_index: Option<usize>,
    /// The offending normalized coefficient `a_k = L_k / lambda`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_value: Option<f64>,
    /// `min_k a_k` over the window: distance from the ID boundary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

impl Decomposition {
    fn bare(verdict: DecompositionVerdict) -> Self {
        Self { verdict, rate: None, compounding: None, witness_index: None, witness_value: None, margin: None }
    }

    /// `exp(-lambda + lambda A(s))` at the compounding prefix's order.
    pub fn recombine(&self) -> Option<Series> {
        let rate = self.rate?;
        let a = self.compounding.as_ref()?.to_series();
        Some(a.scale(rate).add_constant(-rate).exp())
    }
}

/// Maximal run of indices missing between two support points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportProfile {
    pub support_indices: Vec<usize>,
    pub gaps: Vec<Gap>,
    pub finite: bool,
}

impl SupportProfile {
    pub fn max_gap(&self) -> usize {
        self.gaps.iter().map(|g| g.len).max().unwrap_or(0)
    }
}

/// Largest tail left by rounding when normalizing a finite pmf.
const TAIL_ROUNDING: f64 = 1e-15;

/// Classifies indices with `p_i > threshold` as support.
///
/// `finite` needs `tail_bound < threshold` and a visible end to the support:
/// either the prefix ends in exact zeros over a run longer than any internal
/// gap, or the tail is zero up to summation rounding and the last mass is
/// resolved.
pub fn support_profile(q: &ProbSeq, threshold: f64) -> SupportProfile {
    let p = q.masses();
    let support_indices: Vec<usize> = (0..p.len()).filter(|&i| p[i] > threshold).collect();
    let gaps: Vec<Gap> = support_indices
        .windows(2)
        .filter(|w| w[1] > w[0] + 1)
        .map(|w| Gap { start: w[0] + 1, len: w[1] - w[0] - 1 })
        .collect();
    let n = q.order();
    let longest = gaps.iter().map(|g| g.len).max().unwrap_or(0);
    let finite = match support_indices.last() {
        None => false,
        Some(_) if q.tail_bound() >= threshold => false,
        Some(&m) if m < n => p[m + 1..].iter().all(|&v| v == 0.0) && n - m > longest,
        Some(_) => q.tail_bound() <= TAIL_ROUNDING,
    };
    SupportProfile { support_indices, gaps, finite }
}

/// Compound-Poisson decomposition with verdict precedence ZeroAtOrigin,
/// FiniteSupport, NegativeCoefficient. A finite-support refutation still
/// carries the coefficient witness when one exists.
pub fn compound_poisson_decompose(q: &ProbSeq) -> Decomposition {
    let tol = tolerances();
    let p0 = q.p0();
    if p0 <= tol.zero_at_origin {
        return Decomposition::bare(DecompositionVerdict::NotIdZeroAtOrigin);
    }
    let Ok(log) = q.to_series().log() else {
        return Decomposition::bare(DecompositionVerdict::Inconclusive);
    };
    if !log.all_finite() {
        return Decomposition::bare(DecompositionVerdict::Inconclusive);
    }
    let rate = -log.coeff(0);
    if rate <= 0.0 {
        // Point mass at 0: Poisson with rate 0.
        let zero = vec![0.0; q.order() + 1];
        return Decomposition {
            verdict: DecompositionVerdict::Id,
            rate: Some(0.0),
            compounding: ProbSeq::new(zero, 1.0).ok(),
            witness_index: None,
            witness_value: None,
            margin: Some(0.0),
        };
    }
    let mut a: Vec<f64> = log.coeffs().iter().map(|l| l / rate).collect();
    a[0] = 0.0;
    let margin = a.iter().skip(1).copied().fold(f64::INFINITY, f64::min);
    let witness = a.iter().enumerate().skip(1).find(|(_, &v)| v < -tol.nonneg_coeff).map(|(i, &v)| (i, v));
    let mut d = Decomposition::bare(DecompositionVerdict::Id);
    d.margin = margin.is_finite().then_some(margin);
    if let Some((i, v)) = witness {
        d.witness_index = Some(i);
        d.witness_value = Some(v);
    }
    if support_profile(q, tol.support_threshold).finite {
        d.verdict = DecompositionVerdict::NotIdFiniteSupport;
        return d;
    }
    if witness.is_some() {
        d.verdict = DecompositionVerdict::NotIdNegativeCoefficient;
        return d;
    }
    match ProbSeq::from_masses(a) {
        Ok(c) => {
            d.rate = Some(rate);
            d.compounding = Some(c);
        }
        Err(_) => d.verdict = DecompositionVerdict::Inconclusive,
    }
    d
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RootOutcome {
    Component { pmf: ProbSeq },
    Refuted { index: usize, value: f64 },
}

/// The n-th convolution root `Q^(1/n)`, or the first negative coefficient
/// showing no integer-valued root exists.
pub fn nth_root_component(q: &ProbSeq, n: u32) -> Result<RootOutcome> {
    check_param("n", n as f64, n >= 2, "must be >= 2")?;
    let tol = tolerances();
    if q.p0() <= tol.zero_at_origin {
        return Err(Error::ZeroAtOrigin(q.p0()));
    }
    let root = q.to_series().pow(1.0 / n as f64)?;
    if let Some((index, &value)) = root.coeffs().iter().enumerate().find(|(_, &v)| !(v >= -tol.nonneg_coeff)) {
        return Ok(RootOutcome::Refuted { index, value });
    }
    let pmf = ProbSeq::from_series(&root).map_err(|e| Error::InvalidSeries(e.to_string()))?;
    Ok(RootOutcome::Component { pmf })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportCoincidence {
    pub n: u32,
    pub coincide: bool,
    pub threshold: f64,
    pub input_support: Vec<usize>,
    pub component_support: Vec<usize>,
    /// Indices where one side has mass above the threshold and the other is
    /// exactly zero. Masses in `(0, threshold]` are unresolved.
    pub mismatches: Vec<usize>,
}

/// Compares the support of an ID law with that of its n-th root component.
pub fn theorem1a_support_check(q: &ProbSeq, n: u32) -> Result<SupportCoincidence> {
    let d = compound_poisson_decompose(q);
    if !d.verdict.is_id() {
        return Err(Error::NotApplicable(format!("law is not certified ID ({:?})", d.verdict)));
    }
    let root = match nth_root_component(q, n)? {
        RootOutcome::Component { pmf } => pmf,
        RootOutcome::Refuted { index, value } => return Err(Error::CoefficientExtractionFailure { index, value }),
    };
    let threshold = 1e-12;
    let (a, b) = (q.masses(), root.masses());
    let mismatches: Vec<usize> = (0..a.len().min(b.len()))
        .filter(|&i| (a[i] > threshold && b[i] == 0.0) || (b[i] > threshold && a[i] == 0.0))
        .collect();
    Ok(SupportCoincidence {
        n,
        coincide: mismatches.is_empty(),
        threshold,
        input_support: support_profile(q, threshold).support_indices,
        component_support: support_profile(&root, threshold).support_indices,
        mismatches,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExampleKind {
    /// PGF `(p / (1 - q s^k))^t`.
    Ex1a,
    /// PGF `s (p / (1 - q s^k))^t`.
    Ex1b,
}

/// Exact prefix of the gapped negative-binomial laws; entries off the
/// lattice `kZ` (shifted by one for `Ex1b`) are exactly zero.
pub fn make_example_law(kind: ExampleKind, p: f64, k: usize, t: f64, order: usize) -> Result<ProbSeq> {
    check_param("p", p, p > 0.0 && p < 1.0, "must lie in (0, 1)")?;
    check_param("k", k as f64, k >= 2, "must be >= 2")?;
    check_param("t", t, t >= 0.0, "must be >= 0")?;
    let q = 1.0 - p;
    let offset = match kind {
        ExampleKind::Ex1a => 0,
        ExampleKind::Ex1b => 1,
    };
    let mut masses = vec![0.0; order + 1];
    let mut c = p.powf(t);
    let mut m = 0usize;
    while offset + k * m <= order {
        masses[offset + k * m] = c;
        m += 1;
        c *= (t + m as f64 - 1.0) / m as f64 * q;
    }
    ProbSeq::from_masses(masses)
}

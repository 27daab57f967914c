//! Seeded stochastic-representation samplers and Kolmogorov distances.
//!
//! All randomness flows from a [`SeededStream`]. Bulk draws are cut into
//! fixed-size blocks, block `b` drawing from its own derived ChaCha20 stream,
//! so the output depends only on `(seed, stream_id, n)` and never on how many
//! worker threads ran the blocks.

use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Exp1, Gamma, Geometric, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dtype::DiscreteStableSpec;
use crate::error::{check_param, Error, Result};
use crate::series::ProbSeq;
use crate::transforms::LtSpec;

/// Name of the generator recorded in reports.
pub const GENERATOR: &str = "ChaCha20Rng (rand_chacha 0.9, seed_from_u64, per-block stream ids)";

/// Draws per block; part of the reproducibility contract.
pub const BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeededStream {
    pub seed: u64,
    pub stream_id: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeededStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Deterministically derived child stream.
    pub fn substream(&self, k: u64) -> Self {
        Self { seed: self.seed, stream_id: splitmix64(self.stream_id ^ splitmix64(k.wrapping_add(1))) }
    }

    /// Draw `n` values from `f`, block-parallel.
    pub fn draw<F>(&self, n: usize, f: F) -> Vec<f64>
    where
        F: Fn(&mut ChaCha20Rng) -> f64 + Sync,
    {
        self.draw_with(n, f)
    }

    /// [`SeededStream::draw`] for arbitrary draw types.
    pub fn draw_with<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&mut ChaCha20Rng) -> T + Sync,
    {
        let blocks = n.div_ceil(BLOCK);
        let parts: Vec<Vec<T>> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = self.substream(b as u64).rng();
                let len = BLOCK.min(n - b * BLOCK);
                (0..len).map(|_| f(&mut rng)).collect()
            })
            .collect();
        parts.into_iter().flatten().collect()
    }
}

/// Sorted sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDist {
    values: Vec<f64>,
}

impl EmpiricalDist {
    /// Sorts the sample. `-inf` is allowed (an empty maximum); NaN is not.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(v) = values.iter().find(|v| v.is_nan()) {
            return Err(Error::InvalidParameter { name: "sample", value: *v, reason: "NaN in sample" });
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (self.len() as f64 - 1.0).max(1.0)
    }

    /// Fraction of the sample `<= x`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.values.partition_point(|v| *v <= x) as f64 / self.len() as f64
    }

    /// Fraction of the sample equal to `x`.
    pub fn frequency(&self, x: f64) -> f64 {
        let lo = self.values.partition_point(|v| *v < x);
        let hi = self.values.partition_point(|v| *v <= x);
        (hi - lo) as f64 / self.len() as f64
    }

    /// Sample mean of `g(X)` and its CLT standard error.
    pub fn mean_of(&self, g: impl Fn(f64) -> f64) -> (f64, f64) {
        let n = self.len() as f64;
        let vals: Vec<f64> = self.values.iter().map(|&x| g(x)).collect();
        let m = vals.iter().sum::<f64>() / n;
        let var = vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0).max(1.0);
        (m, (var / n).sqrt())
    }

    /// Empirical Laplace transform at `s` with its standard error.
    pub fn laplace(&self, s: f64) -> (f64, f64) {
        self.mean_of(|x| (-s * x).exp())
    }

    /// One value per line under a header naming the law and stream.
    pub fn to_csv(&self, law: &str, stream: SeededStream) -> String {
        let mut out = format!("# law={law} seed={} stream_id={}\n", stream.seed, stream.stream_id);
        for v in &self.values {
            out.push_str(&format!("{v}\n"));
        }
        out
    }

    /// `x,ecdf` points at every distinct value.
    pub fn ecdf_csv(&self) -> String {
        let mut out = String::from("x,ecdf\n");
        let n = self.len() as f64;
        let mut i = 0;
        while i < self.values.len() {
            let x = self.values[i];
            let j = self.values.partition_point(|v| *v <= x);
            out.push_str(&format!("{x},{}\n", j as f64 / n));
            i = j;
        }
        out
    }
}

/// A distribution function with an optional left limit (for atoms).
pub trait Cdf {
    fn cdf(&self, x: f64) -> f64;
    fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x)
    }
}

impl<F: Fn(f64) -> f64> Cdf for F {
    fn cdf(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Lattice CDF of a pmf prefix (tail mass treated as lying beyond the prefix).
impl Cdf for ProbSeq {
    fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let k = x.floor() as usize;
        self.masses().iter().take(k.saturating_add(1)).sum()
    }

    fn cdf_left(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let k = x.ceil() as usize;
        self.masses().iter().take(k).sum()
    }
}

/// The law of `scale * U` where `U` has Laplace transform `phi`; only
/// families with a closed-form CDF are representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledLtCdf {
    phi: LtSpec,
    scale: f64,
}

impl ScaledLtCdf {
    pub fn new(phi: LtSpec, scale: f64) -> Option<Self> {
        (phi.cdf(1.0).is_some() && scale > 0.0).then_some(Self { phi, scale })
    }
}

impl Cdf for ScaledLtCdf {
    fn cdf(&self, x: f64) -> f64 {
        self.phi.cdf(x / self.scale).unwrap_or(f64::NAN)
    }

    fn cdf_left(&self, x: f64) -> f64 {
        self.phi.cdf_left(x / self.scale).unwrap_or(f64::NAN)
    }
}

pub enum KsReference<'a> {
    Sample(&'a EmpiricalDist),
    Cdf(&'a dyn Cdf),
}

pub fn ks_distance(a: &EmpiricalDist, reference: KsReference<'_>) -> f64 {
    match reference {
        KsReference::Sample(b) => ks_two_sample(a, b),
        KsReference::Cdf(f) => ks_one_sample(a, f),
    }
}

/// Exact sup-distance between the empirical CDF of `a` and `f`, accounting
/// for ties in the sample and atoms in `f`.
pub fn ks_one_sample(a: &EmpiricalDist, f: &dyn Cdf) -> f64 {
    let xs = a.values();
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let j = xs.partition_point(|v| *v <= x);
        let below = i as f64 / n;
        let upto = j as f64 / n;
        d = d.max((upto - f.cdf(x)).abs()).max((below - f.cdf_left(x)).abs());
        i = j;
    }
    d
}

/// Exact two-sample sup-distance between empirical CDFs.
pub fn ks_two_sample(a: &EmpiricalDist, b: &EmpiricalDist) -> f64 {
    let (xa, xb) = (a.values(), b.values());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() || j < xb.len() {
        let x = match (xa.get(i), xb.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!(),
        };
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

pub fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

pub fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Open01.sample(rng)
}

/// Poisson variate for any finite rate >= 0. Rates beyond the range of the
/// exact sampler use the normal approximation (relative error < 1e-6).
pub fn poisson<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    if rate <= 0.0 {
        0.0
    } else if rate > 1e12 {
        let z: f64 = StandardNormal.sample(rng);
        (rate + rate.sqrt() * z).round().max(0.0)
    } else {
        Poisson::new(rate).expect("rate checked").sample(rng)
    }
}

pub fn gamma<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> f64 {
    Gamma::new(shape, 1.0 / rate).expect("validated gamma parameters").sample(rng)
}

/// Geometric on I_1 (number of trials to the first success).
pub fn geometric_i1<R: Rng + ?Sized>(p: f64, rng: &mut R) -> u64 {
    Geometric::new(p).expect("validated geometric parameter").sample(rng) + 1
}

/// Binomial thinning `c o n`: the number of successes among `n` Bernoulli(c).
pub fn thin_count<R: Rng + ?Sized>(n: u64, c: f64, rng: &mut R) -> u64 {
    Binomial::new(n, c).expect("validated thinning parameter").sample(rng)
}

/// One-sided stable variate with Laplace transform `exp(-s^alpha)`, by
/// Kanter's representation
/// `sin(a U) / sin(U)^(1/a) * (sin((1-a) U) / E)^((1-a)/a)`.
pub fn positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 1.0 {
        return 1.0;
    }
    let u = std::f64::consts::PI * open01(rng);
    let e = exp1(rng);
    let a = (alpha * u).sin() / u.sin().powf(1.0 / alpha);
    let b = ((1.0 - alpha) * u).sin() / e;
    a * b.powf((1.0 - alpha) / alpha)
}

/// Mittag-Leffler variate, LT `1/(1 + s^alpha)`: `E^(1/alpha) * S_alpha`.
pub fn mittag_leffler<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let e = exp1(rng);
    e.powf(1.0 / alpha) * positive_stable(alpha, rng)
}

/// A variate whose Laplace transform is `phi`.
pub fn lt_variate<R: Rng + ?Sized>(phi: &LtSpec, rng: &mut R) -> f64 {
    match *phi {
        LtSpec::Degenerate { c } => c,
        LtSpec::Exponential { rate } => exp1(rng) / rate,
        LtSpec::Gamma { shape, rate } => gamma(shape, rate, rng),
        LtSpec::PositiveStable { alpha } => positive_stable(alpha, rng),
        LtSpec::MittagLeffler { alpha } => mittag_leffler(alpha, rng),
    }
}

pub fn sample_positive_stable(alpha: f64, n: usize, stream: SeededStream) -> Result<EmpiricalDist> {
    check_param("alpha", alpha, alpha > 0.0 && alpha <= 1.0, "must lie in (0, 1]")?;
    EmpiricalDist::new(stream.draw(n, |rng| positive_stable(alpha, rng)))
}

pub fn sample_mittag_leffler(alpha: f64, n: usize, stream: SeededStream) -> Result<EmpiricalDist> {
    check_param("alpha", alpha, alpha > 0.0 && alpha <= 1.0, "must lie in (0, 1]")?;
    EmpiricalDist::new(stream.draw(n, |rng| mittag_leffler(alpha, rng)))
}

/// Any law in the supported LT families.
pub fn sample_lt(phi: &LtSpec, n: usize, stream: SeededStream) -> Result<EmpiricalDist> {
    let phi = phi.validate()?;
    EmpiricalDist::new(stream.draw(n, |rng| lt_variate(&phi, rng)))
}

/// Discrete stable variate: Poisson with a randomized rate
/// `lambda^(1/alpha) * S_alpha`.
pub fn discrete_stable<R: Rng + ?Sized>(spec: &DiscreteStableSpec, rng: &mut R) -> f64 {
    let rate = spec.lambda.powf(1.0 / spec.alpha) * positive_stable(spec.alpha, rng);
    poisson(rate, rng)
}

pub fn sample_discrete_stable(spec: &DiscreteStableSpec, n: usize, stream: SeededStream) -> Result<EmpiricalDist> {
    let spec = DiscreteStableSpec::new(spec.alpha, spec.lambda)?;
    EmpiricalDist::new(stream.draw(n, |rng| discrete_stable(&spec, rng)))
}

/// Exponential mixture `E / W` with `W` drawn from `mixing`; its survival
/// function is the Laplace transform of the mixing law.
pub fn sample_exponential_mixture(mixing: &LtSpec, n: usize, stream: SeededStream) -> Result<EmpiricalDist> {
    let mixing = mixing.validate()?;
    EmpiricalDist::new(stream.draw(n, |rng| exp1(rng) / lt_variate(&mixing, rng)))
}

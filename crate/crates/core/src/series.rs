//! Truncated real power series and truncated probability mass functions.
//!
//! Every generating-function manipulation in the crate goes through [`Series`]:
//! coefficients `c_0..c_N` of a power series in `s`, with all arithmetic
//! truncated at degree `N`. Binary operations truncate to the smaller order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::tolerances;

/// Truncation order used when callers do not pick one.
pub const DEFAULT_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    coeffs: Vec<f64>,
}

impl Series {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSeries("no coefficients".into()));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidSeries(format!("coefficient {i} is not finite")));
        }
        Ok(Self { coeffs })
    }

    pub(crate) fn from_vec_unchecked(coeffs: Vec<f64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![0.0; order + 1] }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(1.0, order)
    }

    /// `s^k`, truncated at `order` (zero if `k > order`).
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = 1.0;
        }
        s
    }

    /// `a + b s`.
    pub fn linear(a: f64, b: f64, order: usize) -> Self {
        let mut s = Self::constant(a, order);
        if order >= 1 {
            s.coeffs[1] = b;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, 0.0);
        Self { coeffs }
    }

    pub fn all_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn add(&self, other: &Series) -> Self {
        let n = self.order().min(other.order());
        Self { coeffs: (0..=n).map(|i| self.coeffs[i] + other.coeffs[i]).collect() }
    }

    pub fn sub(&self, other: &Series) -> Self {
        let n = self.order().min(other.order());
        Self { coeffs: (0..=n).map(|i| self.coeffs[i] - other.coeffs[i]).collect() }
    }

    pub fn add_constant(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Series) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = vec![0.0; n + 1];
        for (i, &a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self { coeffs }
    }

    /// Multiply by `s^j`, keeping the order.
    pub fn shift(&self, j: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![0.0; n + 1];
        for i in j..=n {
            coeffs[i] = self.coeffs[i - j];
        }
        Self { coeffs }
    }

    /// Logarithm via `n q_n = sum_{k=1..n} k L_k q_{n-k}`.
    pub fn log(&self) -> Result<Series> {
        let q = &self.coeffs;
        let q0 = q[0];
        if !(q0 > 0.0) {
            return Err(Error::ZeroConstantTerm(q0));
        }
        let n = self.order();
        let mut l = vec![0.0; n + 1];
        l[0] = q0.ln();
        for m in 1..=n {
            let mut acc = m as f64 * q[m];
            for k in 1..m {
                acc -= k as f64 * l[k] * q[m - k];
            }
            l[m] = acc / (m as f64 * q0);
        }
        Ok(Self { coeffs: l })
    }

    /// Exponential via `n E_n = sum_{k=1..n} k L_k E_{n-k}`.
    pub fn exp(&self) -> Series {
        let l = &self.coeffs;
        let n = self.order();
        let mut e = vec![0.0; n + 1];
        e[0] = l[0].exp();
        for m in 1..=n {
            let mut acc = 0.0;
            for k in 1..=m {
                acc += k as f64 * l[k] * e[m - k];
            }
            e[m] = acc / m as f64;
        }
        Self { coeffs: e }
    }

    /// `q^t = exp(t log q)` for real `t`.
    pub fn pow(&self, t: f64) -> Result<Series> {
        if t == 0.0 {
            if !(self.coeffs[0] > 0.0) {
                return Err(Error::ZeroConstantTerm(self.coeffs[0]));
            }
            return Ok(Self::one(self.order()));
        }
        Ok(self.log()?.scale(t).exp())
    }

    /// Multiplicative inverse; requires a non-zero constant term.
    pub fn recip(&self) -> Result<Series> {
        let q = &self.coeffs;
        let q0 = q[0];
        if q0 == 0.0 {
            return Err(Error::ZeroConstantTerm(q0));
        }
        let n = self.order();
        let mut r = vec![0.0; n + 1];
        r[0] = 1.0 / q0;
        for m in 1..=n {
            let mut acc = 0.0;
            for k in 1..=m {
                acc += q[k] * r[m - k];
            }
            r[m] = -acc / q0;
        }
        Ok(Self { coeffs: r })
    }

    pub fn div(&self, denom: &Series) -> Result<Series> {
        Ok(self.mul(&denom.recip()?))
    }

    /// `self(inner(s))` by truncated Horner. Meaningful for PGF prefixes when
    /// the inner constant term lies in `[0, 1]`.
    pub fn compose(&self, inner: &Series) -> Series {
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Series::zero(n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += c;
        }
        acc
    }
}

/// A truncated pmf on `{0, 1, ..., N}` together with the mass lying beyond `N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbSeq {
    p: Vec<f64>,
    tail_bound: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProbSeq {
    p: Vec<f64>,
    tail_bound: f64,
}

impl<'de> Deserialize<'de> for ProbSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawProbSeq::deserialize(d)?;
        ProbSeq::new(raw.p, raw.tail_bound).map_err(serde::de::Error::custom)
    }
}

const MASS_SLACK: f64 = 1e-12;

impl ProbSeq {
    /// Strict constructor: every mass nonnegative and finite, and
    /// `sum(p) + tail_bound` within `1e-12` of one.
    pub fn new(p: Vec<f64>, tail_bound: f64) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidPmf("empty mass vector".into()));
        }
        if let Some((i, v)) = p.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidPmf(format!("p[{i}] = {v} is not a nonnegative number")));
        }
        if !(tail_bound.is_finite() && (0.0..=1.0).contains(&tail_bound)) {
            return Err(Error::InvalidPmf(format!("tail_bound {tail_bound} is outside [0, 1]")));
        }
        let total: f64 = p.iter().sum::<f64>() + tail_bound;
        if (total - 1.0).abs() > MASS_SLACK {
            return Err(Error::InvalidPmf(format!("total mass {total} differs from 1")));
        }
        Ok(Self { p, tail_bound })
    }

    /// Build from computed masses: entries down to `-nonneg_coeff` are clamped
    /// to zero and the tail bound is set to the missing mass.
    pub fn from_masses(mut p: Vec<f64>) -> Result<Self> {
        let floor = -tolerances().nonneg_coeff;
        for (i, v) in p.iter_mut().enumerate() {
            if !v.is_finite() || *v < floor {
                return Err(Error::InvalidPmf(format!("p[{i}] = {v} is negative")));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let total: f64 = p.iter().sum();
        if total > 1.0 + MASS_SLACK {
            return Err(Error::InvalidPmf(format!("total mass {total} exceeds 1")));
        }
        let tail_bound = (1.0 - total).max(0.0);
        Self::new(p, tail_bound)
    }

    pub fn from_series(s: &Series) -> Result<Self> {
        Self::from_masses(s.coeffs().to_vec())
    }

    /// Point mass at `k`, padded with zeros to `order`.
    pub fn degenerate(k: usize, order: usize) -> Self {
        let mut p = vec![0.0; order.max(k) + 1];
        p[k] = 1.0;
        Self { p, tail_bound: 0.0 }
    }

    pub fn masses(&self) -> &[f64] {
        &self.p
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn order(&self) -> usize {
        self.p.len() - 1
    }

    pub fn p0(&self) -> f64 {
        self.p[0]
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.p.get(i).copied().unwrap_or(0.0)
    }

    pub fn to_series(&self) -> Series {
        Series::from_vec_unchecked(self.p.clone())
    }

    /// PGF of the prefix; differs from the full PGF by at most `tail_bound`
    /// for `|s| <= 1`.
    pub fn pgf(&self, s: f64) -> f64 {
        self.p.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    /// Zero-pad (or cut, moving cut mass into the tail) to the given order.
    pub fn with_order(&self, order: usize) -> Self {
        let mut p = self.p.clone();
        let cut: f64 = p.iter().skip(order + 1).sum();
        p.resize(order + 1, 0.0);
        Self { p, tail_bound: (self.tail_bound + cut).min(1.0) }
    }

    pub fn mean_prefix(&self) -> f64 {
        self.p.iter().enumerate().map(|(i, p)| i as f64 * p).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn poisson_prefix(rate: f64, order: usize) -> Vec<f64> {
        let mut p = vec![(-rate).exp()];
        for n in 1..=order {
            let prev = p[n - 1];
            p.push(prev * rate / n as f64);
        }
        p
    }

    #[test]
    fn log_of_poisson_pgf_is_linear() {
        let q = Series::new(poisson_prefix(2.0, 20)).unwrap();
        let l = q.log().unwrap();
        assert_abs_diff_eq!(l.coeff(0), -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l.coeff(1), 2.0, epsilon = 1e-12);
        for i in 2..=20 {
            assert_abs_diff_eq!(l.coeff(i), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn log_of_binomial_two_half() {
        // log(0.25 (1+s)^2) = ln 0.25 + 2 (s - s^2/2 + s^3/3 - ...)
        let q = Series::new(vec![0.25, 0.5, 0.25, 0.0, 0.0, 0.0]).unwrap();
        let l = q.log().unwrap();
        let expected = [0.25f64.ln(), 2.0, -1.0, 2.0 / 3.0, -0.5, 0.4];
        for (i, e) in expected.iter().enumerate() {
            assert_abs_diff_eq!(l.coeff(i), *e, epsilon = 1e-12);
        }
    }

    #[test]
    fn log_of_one_is_zero() {
        let l = Series::one(10).log().unwrap();
        assert!(l.coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn log_rejects_zero_constant() {
        let q = Series::new(vec![0.0, 0.5, 0.5]).unwrap();
        assert_eq!(q.log(), Err(Error::ZeroConstantTerm(0.0)));
        assert!(q.pow(0.5).is_err());
    }

    #[test]
    fn exp_examples() {
        assert_eq!(Series::zero(5).exp(), Series::one(5));
        let e = Series::linear(-2.0, 2.0, 30).exp();
        for (i, p) in poisson_prefix(2.0, 30).iter().enumerate() {
            assert_abs_diff_eq!(e.coeff(i), *p, epsilon = 1e-15);
        }
    }

    #[test]
    fn pow_of_geometric_is_negative_binomial() {
        let n = 30;
        let geo: Vec<f64> = (0..=n).map(|k| 0.5f64.powi(k as i32 + 1)).collect();
        let q = Series::new(geo.clone()).unwrap();
        let sq = q.pow(2.0).unwrap();
        for m in 0..=n {
            let direct: f64 = (0..=m).map(|i| geo[i] * geo[m - i]).sum();
            assert_abs_diff_eq!(sq.coeff(m), direct, epsilon = 1e-14);
        }
        let id = q.pow(1.0).unwrap();
        for m in 0..=n {
            assert_abs_diff_eq!(id.coeff(m), geo[m], epsilon = 1e-15);
        }
        assert_eq!(q.pow(0.0).unwrap(), Series::one(n));
    }

    #[test]
    fn compose_poisson_with_bernoulli_thins() {
        let (a, b) = (3.0, 0.4);
        let outer = Series::new(poisson_prefix(a, 64)).unwrap();
        let inner = Series::linear(1.0 - b, b, 64);
        let thinned = outer.compose(&inner);
        for (i, p) in poisson_prefix(a * b, 64).iter().enumerate().take(40) {
            assert_abs_diff_eq!(thinned.coeff(i), *p, epsilon = 1e-13);
        }
    }

    #[test]
    fn compose_with_identity_and_monomial() {
        let geo: Vec<f64> = (0..=20).map(|k| 0.5f64.powi(k + 1)).collect();
        let q = Series::new(geo.clone()).unwrap();
        assert_eq!(q.compose(&Series::monomial(1, 20)), q);
        let k3 = q.compose(&Series::monomial(3, 20));
        for i in 0..=20 {
            if i % 3 == 0 {
                assert_abs_diff_eq!(k3.coeff(i), geo[i / 3], epsilon = 1e-15);
            } else {
                assert_eq!(k3.coeff(i), 0.0);
            }
        }
    }

    #[test]
    fn recip_and_div() {
        // 1/(1 - s/2) = sum (s/2)^n
        let r = Series::linear(1.0, -0.5, 10).recip().unwrap();
        for i in 0..=10 {
            assert_abs_diff_eq!(r.coeff(i), 0.5f64.powi(i as i32), epsilon = 1e-15);
        }
        let back = Series::one(10).div(&r).unwrap();
        assert_abs_diff_eq!(back.coeff(1), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(back.coeff(2), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let a = Series::one(3);
        let b = Series::one(7);
        assert_eq!(a.mul(&b).order(), 3);
        assert_eq!(a.add(&b).order(), 3);
    }

    #[test]
    fn probseq_validation() {
        assert!(ProbSeq::new(vec![0.5, 0.5], 0.0).is_ok());
        assert!(ProbSeq::new(vec![0.5, 0.4], 0.0).is_err());
        assert!(ProbSeq::new(vec![0.5, -0.1], 0.6).is_err());
        assert!(ProbSeq::new(vec![], 1.0).is_err());
        let q = ProbSeq::from_masses(vec![0.5, 0.25, -1e-14]).unwrap();
        assert_eq!(q.mass(2), 0.0);
        assert_abs_diff_eq!(q.tail_bound(), 0.25, epsilon = 1e-15);
        assert!(ProbSeq::from_masses(vec![0.5, -1e-6]).is_err());
    }

    #[test]
    fn probseq_json_shape() {
        let q = ProbSeq::new(vec![0.25, 0.5, 0.25], 0.0).unwrap();
        let js = serde_json::to_string(&q).unwrap();
        assert_eq!(js, r#"{"p":[0.25,0.5,0.25],"tail_bound":0.0}"#);
        let back: ProbSeq = serde_json::from_str(&js).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<ProbSeq>(r#"{"p":[0.5],"tail_bound":0.0}"#).is_err());
        assert!(serde_json::from_str::<ProbSeq>(r#"{"p":[1.0],"tail_bound":0.0,"x":1}"#).is_err());
    }
}

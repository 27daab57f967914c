//! Exact pmf prefixes of the standard lattice laws used throughout.

use crate::error::{check_param, Result};
use crate::series::ProbSeq;

/// Poisson(`rate`) on `0..=order`.
pub fn poisson(rate: f64, order: usize) -> Result<ProbSeq> {
    check_param("rate", rate, rate >= 0.0, "must be >= 0")?;
    let mut p = Vec::with_capacity(order + 1);
    p.push((-rate).exp());
    for n in 1..=order {
        let prev = p[n - 1];
        p.push(prev * rate / n as f64);
    }
    ProbSeq::from_masses(p)
}

/// Geometric on I_0 with success probability `p`: `P{X = n} = p q^n`.
pub fn geometric(p: f64, order: usize) -> Result<ProbSeq> {
    negative_binomial(1.0, p, order)
}

/// Geometric on I_1: `P{X = n} = p q^(n-1)`, `n >= 1`.
pub fn geometric_i1(p: f64, order: usize) -> Result<ProbSeq> {
    check_param("p", p, p > 0.0 && p <= 1.0, "must lie in (0, 1]")?;
    let q = 1.0 - p;
    let mut masses = vec![0.0; order + 1];
    let mut m = p;
    for v in masses.iter_mut().skip(1) {
        *v = m;
        m *= q;
    }
    ProbSeq::from_masses(masses)
}

/// Negative binomial with PGF `(p / (1 - q s))^t`, real `t > 0`.
pub fn negative_binomial(t: f64, p: f64, order: usize) -> Result<ProbSeq> {
    check_param("t", t, t > 0.0, "must be > 0")?;
    check_param("p", p, p > 0.0 && p <= 1.0, "must lie in (0, 1]")?;
    let q = 1.0 - p;
    let mut masses = Vec::with_capacity(order + 1);
    masses.push(p.powf(t));
    for m in 1..=order {
        let prev = masses[m - 1];
        masses.push(prev * (t + m as f64 - 1.0) / m as f64 * q);
    }
    ProbSeq::from_masses(masses)
}

/// Binomial(`n`, `p`), zero-padded to `order` (at least `n`).
pub fn binomial(n: usize, p: f64, order: usize) -> Result<ProbSeq> {
    check_param("p", p, (0.0..=1.0).contains(&p), "must lie in [0, 1]")?;
    let order = order.max(n);
    let mut masses = vec![0.0; order + 1];
    let q = 1.0 - p;
    let mut choose = 1.0;
    for (k, v) in masses.iter_mut().enumerate().take(n + 1) {
        *v = choose * p.powi(k as i32) * q.powi((n - k) as i32);
        choose = choose * (n - k) as f64 / (k + 1) as f64;
    }
    let total: f64 = masses.iter().sum();
    // The masses sum to one up to rounding; the law has no tail.
    let masses = masses.into_iter().map(|v| v / total).collect();
    ProbSeq::new(masses, 0.0)
}

/// Bernoulli(`c`).
pub fn bernoulli(c: f64, order: usize) -> Result<ProbSeq> {
    binomial(1, c, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn masses_sum_to_one() {
        for q in [
            poisson(2.0, 64).unwrap(),
            geometric(0.5, 64).unwrap(),
            negative_binomial(2.5, 0.4, 64).unwrap(),
            binomial(5, 0.3, 64).unwrap(),
        ] {
            let s: f64 = q.masses().iter().sum::<f64>() + q.tail_bound();
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn geometric_closed_form() {
        let g = geometric(0.5, 40).unwrap();
        for n in 0..=40 {
            assert_abs_diff_eq!(g.mass(n), 0.5f64.powi(n as i32 + 1), epsilon = 1e-16);
        }
        let g1 = geometric_i1(0.5, 10).unwrap();
        assert_eq!(g1.p0(), 0.0);
        assert_abs_diff_eq!(g1.mass(1), 0.5, epsilon = 1e-16);
    }

    #[test]
    fn binomial_is_exactly_finite() {
        let b = binomial(2, 0.5, 2).unwrap();
        assert_eq!(b.masses(), &[0.25, 0.5, 0.25]);
        assert_eq!(b.tail_bound(), 0.0);
        assert_eq!(binomial(3, 0.2, 10).unwrap().order(), 10);
    }
}

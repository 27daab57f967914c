use idlab::divisibility::{self, DecompositionVerdict};
use idlab::dtype::{self, DiscreteStableSpec, ThinningParam};
use idlab::random_sums::{self, PphiSpec};
use idlab::samplers::{self, EmpiricalDist};
use idlab::{LtSpec, ProbSeq, Series};
use proptest::prelude::*;

const ORDER: usize = 32;

fn weights(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_filter("nonzero", |w| w.iter().sum::<f64>() > 1e-3)
}

fn normalized(mut w: Vec<f64>) -> Vec<f64> {
    let t: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= t);
    w
}

/// Compound Poisson prefix `exp(-rate + rate A(s))` with `A(0) = 0`.
fn compound_poisson(rate: f64, a: &[f64]) -> ProbSeq {
    let mut c = vec![0.0; ORDER + 1];
    c[1..=a.len()].copy_from_slice(a);
    let s = Series::new(c).unwrap().scale(rate).add_constant(-rate).exp();
    ProbSeq::from_series(&s).unwrap()
}

fn lt_family() -> impl Strategy<Value = LtSpec> {
    prop_oneof![
        (0.1f64..3.0).prop_map(|c| LtSpec::degenerate(c).unwrap()),
        (0.2f64..5.0).prop_map(|r| LtSpec::exponential(r).unwrap()),
        (0.2f64..4.0, 0.2f64..4.0).prop_map(|(a, b)| LtSpec::gamma(a, b).unwrap()),
        (0.1f64..1.0).prop_map(|a| LtSpec::positive_stable(a).unwrap()),
        (0.1f64..1.0).prop_map(|a| LtSpec::mittag_leffler(a).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn no_mass_at_zero_is_never_id(w in weights(1..ORDER)) {
        let mut p = vec![0.0];
        p.extend(normalized(w));
        let d = divisibility::compound_poisson_decompose(&ProbSeq::from_masses(p).unwrap());
        prop_assert_eq!(d.verdict, DecompositionVerdict::NotIdZeroAtOrigin);
    }

    #[test]
    fn nondegenerate_finite_support_is_never_id(p0 in 0.05f64..0.95, w in weights(1..10)) {
        let mut p = vec![p0];
        p.extend(normalized(w).into_iter().map(|v| v * (1.0 - p0)));
        let d = divisibility::compound_poisson_decompose(&ProbSeq::from_masses(p).unwrap());
        prop_assert!(d.verdict.is_not_id(), "{:?}", d.verdict);
    }

    #[test]
    fn compound_poisson_round_trip(rate in 0.05f64..4.0, w in weights(1..8)) {
        let a = normalized(w);
        let q = compound_poisson(rate, &a);
        let d = divisibility::compound_poisson_decompose(&q);
        prop_assert_eq!(d.verdict, DecompositionVerdict::Id);
        prop_assert!((d.rate.unwrap() - rate).abs() < 1e-9);
        let got = d.compounding.as_ref().unwrap();
        for (i, v) in a.iter().enumerate() {
            prop_assert!((got.mass(i + 1) - v).abs() < 1e-9);
        }
        let r = d.recombine().unwrap();
        for i in 0..=ORDER {
            prop_assert!((r.coeff(i) - q.mass(i)).abs() < 1e-9);
        }
    }

    #[test]
    fn id_support_has_no_gaps_when_one_is_charged(rate in 0.1f64..3.0, w in weights(1..6)) {
        let mut a = normalized(w);
        a[0] = a[0].max(0.05);
        let a = normalized(a);
        let q = compound_poisson(rate, &a);
        let profile = divisibility::support_profile(&q, 0.0);
        prop_assert!(profile.gaps.is_empty(), "{:?}", profile.gaps);
    }

    #[test]
    fn thinning_is_a_semigroup(rate in 0.1f64..3.0, c1 in 0.05f64..1.0, c2 in 0.05f64..1.0) {
        let q = idlab::laws::negative_binomial(rate, 0.6, ORDER).unwrap();
        let [t1, t2, t12] = [c1, c2, c1 * c2].map(|c| ThinningParam::new(c).unwrap());
        let twice = dtype::thin(&dtype::thin(&q, t1).unwrap(), t2).unwrap();
        let once = dtype::thin(&q, t12).unwrap();
        for i in 0..=ORDER {
            prop_assert!((twice.mass(i) - once.mass(i)).abs() < 1e-10);
        }
    }

    #[test]
    fn thinned_discrete_stable_stays_discrete_stable(alpha in 0.2f64..1.0, lambda in 0.1f64..3.0, c in 0.05f64..1.0) {
        let x = dtype::discrete_stable_pmf(&DiscreteStableSpec::new(alpha, lambda).unwrap(), ORDER).unwrap();
        let thinned = dtype::thin(&x, ThinningParam::new(c).unwrap()).unwrap();
        let want = dtype::discrete_stable_pmf(&DiscreteStableSpec::new(alpha, lambda * c.powf(alpha)).unwrap(), ORDER).unwrap();
        for i in 0..=ORDER {
            // Mass beyond the prefix is lost by thinning the truncated law.
            prop_assert!((thinned.mass(i) - want.mass(i)).abs() < 1e-10 + x.tail_bound());
        }
    }

    #[test]
    fn pphi_laws_are_pmfs(phi in lt_family(), j in 0usize..3, k in 1usize..4, theta in 0.05f64..2.0) {
        let q = random_sums::pphi_pgf(&PphiSpec::new(phi, j, k, theta).unwrap(), ORDER).unwrap();
        prop_assert!(q.masses().iter().all(|&v| v >= 0.0));
        for (n, &v) in q.masses().iter().enumerate() {
            if n < j || (n - j) % k != 0 {
                prop_assert_eq!(v, 0.0);
            }
        }
        prop_assert!((q.masses().iter().sum::<f64>() + q.tail_bound() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lt_bridge_gives_pmfs(phi in lt_family()) {
        let q = idlab::transforms::pgf_from_lt(&phi, ORDER).unwrap();
        prop_assert!(q.masses().iter().all(|&v| v >= 0.0));
        for s in [0.0, 0.3, 0.7] {
            prop_assert!((q.pgf(s) - phi.evaluate(1.0 - s).unwrap()).abs() < 1e-6 + q.tail_bound());
        }
    }

    #[test]
    fn ks_is_symmetric_and_bounded(a in prop::collection::vec(-5.0f64..5.0, 1..60), b in prop::collection::vec(-5.0f64..5.0, 1..60)) {
        let (ea, eb) = (EmpiricalDist::new(a).unwrap(), EmpiricalDist::new(b).unwrap());
        let d = samplers::ks_two_sample(&ea, &eb);
        prop_assert_eq!(d, samplers::ks_two_sample(&eb, &ea));
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(samplers::ks_two_sample(&ea, &ea), 0.0);
    }

    #[test]
    fn stability_identity_holds(alpha in 0.3f64..1.0, lambda in 0.1f64..3.0, n in 2u32..9) {
        let spec = DiscreteStableSpec::new(alpha, lambda).unwrap();
        prop_assert!(dtype::stability_identity_check(&spec, n).unwrap() < 1e-12);
    }
}

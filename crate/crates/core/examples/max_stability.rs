//! Extremes over geometric and P_phi sample sizes.
use idlab::max_random::{self, MaxBase, MaxStabilityCase, MidTarget};
use idlab::random_sums::DEFAULT_THETAS;
use idlab::LtSpec;

fn main() -> idlab::Result<()> {
    for (case, p) in [
        (MaxStabilityCase::ParetoMin { a: 2.0 }, 0.1),
        (MaxStabilityCase::LogisticMax, 0.2),
        (MaxStabilityCase::ExponentialGeoMin, 0.5),
    ] {
        let r = max_random::geo_extreme_stability_check(case, p, 50_000, 42)?;
        println!("{case:?} p={p}: grid deviation {:.2e}, KS {:.4} -> {}", r.grid_deviation, r.ks, r.verdict.as_str());
    }

    let phi = LtSpec::exponential(1.0)?;
    for x in [-1.0, 0.0, 1.0] {
        println!("phi(-log Gumbel)({x}) = {:.6} (logistic {:.6})", max_random::phi_mid_df(&phi, MidTarget::Gumbel, x)?, 1.0 / (1.0 + (-x as f64).exp()));
    }
    let r = max_random::transfer_max_simulate(&phi, MaxBase::Exponential, &DEFAULT_THETAS, 50_000, 42)?;
    println!("maxima of Exp(1) over N_theta: KS {:?} -> {}", r.ks, r.verdict.as_str());

    let pair = max_random::lattice_dtype_pair(&LtSpec::degenerate(4f64.ln())?, 0.5, 5)?;
    println!("lattice pair F = {:?}\n             G = {:?}", pair.f, pair.g);
    Ok(())
}

//! Seeded samplers and Kolmogorov-Smirnov distances.
use idlab::dtype::DiscreteStableSpec;
use idlab::samplers::{self, ScaledLtCdf, SeededStream};
use idlab::LtSpec;

fn main() -> idlab::Result<()> {
    let stream = SeededStream::new(42, 0);
    let ml = samplers::sample_mittag_leffler(0.5, 50_000, stream)?;
    let (lt, se) = ml.laplace(1.0);
    println!("mittag-leffler(1/2): E exp(-X) = {lt:.4} +- {se:.4} (exact 0.5)");

    let g = LtSpec::gamma(2.0, 1.0)?;
    let sample = samplers::sample_lt(&g, 50_000, stream.substream(1))?;
    let cdf = ScaledLtCdf::new(g, 1.0).expect("gamma has a closed-form cdf");
    println!("gamma(2,1) KS to its cdf: {:.4}", samplers::ks_one_sample(&sample, &cdf));

    let other = samplers::sample_lt(&g, 50_000, stream.substream(2))?;
    println!("two-sample KS between streams: {:.4}", samplers::ks_two_sample(&sample, &other));

    let ds = samplers::sample_discrete_stable(&DiscreteStableSpec::new(0.5, 1.0)?, 50_000, stream.substream(3))?;
    println!("discrete stable: P(0) ~ {:.4} (exact {:.4})", ds.frequency(0.0), (-1f64).exp());
    Ok(())
}

//! Discrete stable laws: pmf, the stability identity and a domain of attraction.
use idlab::dtype::{self, DiscreteStableSpec};
use idlab::LtSpec;

fn main() -> idlab::Result<()> {
    let spec = DiscreteStableSpec::new(0.5, 1.0)?;
    let pmf = dtype::discrete_stable_pmf(&spec, 10)?;
    println!("pmf[0..6] = {:?}", &pmf.masses()[..6]);
    for n in [2, 4, 7] {
        println!("n={n}: identity deviation {:.2e}", dtype::stability_identity_check(&spec, n)?);
    }
    // Thinned sums of Mittag-Leffler-mixed Poisson counts approach the discrete stable law.
    let r = dtype::domain_of_attraction_check(&LtSpec::mittag_leffler(0.5)?, 0.5, &[10, 100, 1000, 10_000])?;
    println!("attraction distances {:?} -> {}", r.ks, r.verdict.as_str());
    Ok(())
}

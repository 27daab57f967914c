//! Bivariate random sums with a diagonal operator norming.
use idlab::random_sums::{self, DEFAULT_THETAS};
use idlab::LtSpec;

fn main() -> idlab::Result<()> {
    let phi = LtSpec::exponential(1.0)?;
    let (a1, a2) = (0.5, 0.7);
    let summands = [LtSpec::positive_stable(a1)?, LtSpec::positive_stable(a2)?];
    let [r1, r2] = random_sums::operator_phi_sum_simulate_2d(&phi, random_sums::diagonal_exponent(a1, a2), summands, &DEFAULT_THETAS, 20_000, 42)?;
    println!("coordinate 1: KS {:?} -> {}", r1.ks, r1.verdict.as_str());
    println!("coordinate 2: KS {:?} -> {}", r2.ks, r2.verdict.as_str());

    let off = random_sums::operator_phi_sum_simulate_2d(&phi, [[2.0, 0.1], [0.0, 2.0]], summands, &DEFAULT_THETAS, 100, 42);
    println!("off-diagonal exponent: {}", off.unwrap_err());
    Ok(())
}

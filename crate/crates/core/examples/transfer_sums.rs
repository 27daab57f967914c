//! Normed random sums over N_theta and their phi-ID limits.
use idlab::random_sums::{self, PhiIdSpec, DEFAULT_THETAS};
use idlab::transforms::Exponent;
use idlab::LtSpec;

fn main() -> idlab::Result<()> {
    let exp1 = LtSpec::exponential(1.0)?;
    let cases = [
        ("geometric sum of Exp(1)", exp1, exp1),
        ("gamma-mixed sum of Exp(1)", LtSpec::gamma(2.0, 1.0)?, exp1),
        ("geometric sum of stable(1/2)", exp1, LtSpec::positive_stable(0.5)?),
    ];
    for (name, phi, summand) in cases {
        let r = random_sums::transfer_sum_simulate(&phi, &summand, &DEFAULT_THETAS, 50_000, 42)?;
        println!("{name:30} KS {:?} -> {}", r.ks, r.verdict.as_str());
    }
    // The limit of the last case: phi(psi(s)) with psi(s) = s^(1/2).
    let spec = PhiIdSpec { phi: exp1, psi: Exponent::stable(0.5, 1.0)? };
    println!("limit LT at s=1: {}", random_sums::phi_id_lt(&spec, 1.0)?);
    Ok(())
}

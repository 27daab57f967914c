//! Sample sizes s^j phi((1 - s^k)/theta): theta N_theta approaches k U.
use idlab::random_sums::{self, PphiSpec};
use idlab::LtSpec;

fn main() -> idlab::Result<()> {
    let phi = LtSpec::gamma(2.0, 1.0)?;
    let spec = PphiSpec::new(phi, 1, 2, 0.5)?;
    let pmf = random_sums::pphi_pgf(&spec, 9)?;
    println!("P_phi pmf (j=1, k=2, theta=1/2): {:?}", pmf.masses());

    let thetas = [0.5, 0.1, 0.02, 0.004, 0.001];
    for k in [1, 2] {
        let r = random_sums::lemma3_convergence(&phi, 0, k, &thetas, 50_000, 42)?;
        println!("k={k}: KS {:?} -> {}", r.ks, r.verdict.as_str());
    }
    Ok(())
}

//! Truncated power-series arithmetic: log, exp, powers and composition.
use idlab::Series;

fn main() -> idlab::Result<()> {
    let order = 8;
    // Q(s) = (1 + s) / 2, the Bernoulli(1/2) PGF.
    let q = Series::linear(0.5, 0.5, order);
    let log = q.log()?;
    println!("log Q   = {:?}", log.coeffs());
    println!("exp log = {:?}", log.exp().coeffs());
    println!("Q^(1/2) = {:?}", q.pow(0.5)?.coeffs());
    println!("1 / Q   = {:?}", q.recip()?.coeffs());
    // Thinning by c = 1/2 is composition with 1/2 + s/2.
    println!("Q(1/2 + s/2) = {:?}", q.compose(&Series::linear(0.5, 0.5, order)).coeffs());
    Ok(())
}

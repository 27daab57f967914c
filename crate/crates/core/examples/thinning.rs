//! Binomial thinning, the D-type comparison and discrete self-decomposability.
use idlab::dtype::{self, ThinningParam};
use idlab::{laws, PgfSpec};

fn main() -> idlab::Result<()> {
    let c = ThinningParam::new(0.5)?;
    let x = laws::poisson(2.0, 32)?;
    let thinned = dtype::thin(&x, c)?;
    println!("1/2 o poisson(2): p[0..4] = {:?}", &thinned.masses()[..4]);

    let y = laws::poisson(1.0, 32)?;
    let cmp = dtype::same_dtype(&y, &x, c);
    println!("poisson(1) = 1/2 o poisson(2)? {} (max deviation {:.2e})", cmp.same, cmp.max_deviation);

    // Thinned samples follow the thinned law.
    let sample = dtype::thin_sample(&x, c, 20_000, idlab::samplers::SeededStream::new(1, 0))?;
    println!("sample mean {:.4} (exact 1)", sample.mean());

    for (name, law) in [
        ("geometric(1/2)", PgfSpec::geometric(0.5)?),
        ("discrete-stable(0.6, 1)", PgfSpec::discrete_stable(0.6, 1.0)?),
        ("binomial(3, 1/2)", PgfSpec::pmf(laws::binomial(3, 0.5, 32)?)),
    ] {
        let r = dtype::discrete_selfdecomposable_check(&law, &dtype::c_grid(), 48)?;
        println!("{name:24} self-decomposable: {}", r.verdict.as_str());
    }
    Ok(())
}

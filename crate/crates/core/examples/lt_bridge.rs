//! From a Laplace transform phi to the mixed-Poisson PGF phi(1 - s), and back.
use idlab::transforms::{self, CM_PROBE_DEPTH};
use idlab::{laws, LtSpec, PgfSpec};

fn main() -> idlab::Result<()> {
    let q = transforms::pgf_from_lt(&LtSpec::exponential(1.0)?, 10)?;
    println!("exponential(1) -> {:?}", q.masses());
    let q = transforms::pgf_from_lt(&LtSpec::mittag_leffler(0.5)?, 10)?;
    println!("mittag-leffler(1/2) -> {:?}", &q.masses()[..5]);

    let grid = transforms::probe_grid();
    for (name, pgf) in [
        ("geometric(1/2)", PgfSpec::geometric(0.5)?),
        ("bernoulli(1/2)", PgfSpec::pmf(laws::bernoulli(0.5, 8)?)),
    ] {
        let probe = transforms::lt_candidate_from_pgf(&pgf, &grid);
        println!("{name}: Q(1 - s) looks like an LT? {} (depth {CM_PROBE_DEPTH})", probe.verdict.as_str());
    }
    Ok(())
}

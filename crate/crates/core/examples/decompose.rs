//! Compound-Poisson decomposition of laws on the nonnegative integers.
use idlab::divisibility::{self, ExampleKind, RootOutcome};
use idlab::laws;

fn main() -> idlab::Result<()> {
    let cases = [
        ("poisson(2)", laws::poisson(2.0, 64)?),
        ("geometric(1/2)", laws::geometric(0.5, 64)?),
        ("negbin(3, 0.4)", laws::negative_binomial(3.0, 0.4, 64)?),
        ("binomial(2, 1/2)", laws::binomial(2, 0.5, 64)?),
        ("ex1a(p=1/2, k=3, t=2)", divisibility::make_example_law(ExampleKind::Ex1a, 0.5, 3, 2.0, 64)?),
        ("ex1b(p=1/2, k=3, t=2)", divisibility::make_example_law(ExampleKind::Ex1b, 0.5, 3, 2.0, 64)?),
    ];
    for (name, q) in &cases {
        let d = divisibility::compound_poisson_decompose(q);
        let head: Vec<String> = d.compounding.iter().flat_map(|a| a.masses()[..5].iter().map(|v| format!("{v:.4}"))).collect();
        println!("{name:24} {:?} rate={:?} witness={:?} a[0..5]=[{}]", d.verdict, d.rate, d.witness_index, head.join(", "));
    }

    let q = laws::poisson(1.0, 16)?;
    if let RootOutcome::Component { pmf } = divisibility::nth_root_component(&q, 2)? {
        println!("square root of poisson(1): p[0..4] = {:?}", &pmf.masses()[..4]);
    }
    let check = divisibility::theorem1a_support_check(&q, 2)?;
    println!("supports coincide: {}", check.coincide);
    Ok(())
}

//! Two geometric laws of the same lattice max-type that thinning does not relate.
use idlab::max_random;

fn main() {
    let r = max_random::example2_report();
    println!("   s      Q_X      Q_Y   Q_X(1-c+cs)  Q_Y(1-c+cs)");
    for row in &r.rows {
        println!("{:4.2} {:8.5} {:8.5} {:12.5} {:12.5}", row.s, row.q_x, row.q_y, row.q_x_thinned, row.q_y_thinned);
    }
    println!("deviation at s=0: {} (1/12 = {})", r.deviation_at_zero, 1.0 / 12.0);
    println!("verdict: {}", r.verdict.as_str());
}

//! Exact joint moments of normalized cycle sums against their Gaussian limit.

use girko::ensemble::EntryDistribution;
use girko::momentcomb::{exact_trace_moment, wick_limit_moment, MomentQuery};

/// `|exact(n) - wick|` for each n in `sizes`.
pub fn run(query: &MomentQuery, dist: &EntryDistribution, sizes: &[usize]) -> girko::Result<Vec<f64>> {
    let wick = wick_limit_moment(query, dist.tau());
    println!("{} under {}: limit {wick:.6}", query, dist.id());
    sizes
        .iter()
        .map(|&n| {
            let exact = exact_trace_moment(query, n, dist)?;
            let err = (exact - wick).norm();
            println!("  n={n:<2} exact {exact:.6}  |error| {err:.6}  n*|error| {:.4}", err * n as f64);
            Ok(err)
        })
        .collect()
}

fn main() -> girko::Result<()> {
    for (ks, signs) in [("1,1", "p,c"), ("2,2", "p,c"), ("1,1,1,1", "p,p,p,p"), ("3,3", "p,c"), ("1,2", "p,p")] {
        let q = MomentQuery::parse(ks, signs)?;
        for dist in [EntryDistribution::rademacher(), EntryDistribution::complex_rademacher()] {
            run(&q, &dist, &[3, 4, 5, 6])?;
        }
    }
    Ok(())
}

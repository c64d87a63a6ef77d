//! The identity checks: normalization, addition, multistep totals, mixture and Bayes.

use gnedin_fisher::{
    verify_addition_rule, verify_bayes_identity, verify_mixture, verify_multistep_total, verify_normalization,
    GnedinFisherPsi, OccupancyCounts, Rational, Scalar,
};

fn main() -> gnedin_fisher::Result<()> {
    let exact = GnedinFisherPsi::new(Rational::new(6.into(), 5.into()), Rational::new(1.into(), 2.into()))?;
    for n in 1..=7 {
        let r = verify_normalization(&exact, n)?;
        println!("n = {n}: {:>4} partitions, total {}", r.partitions, r.total.render());
    }
    let counts = OccupancyCounts::new(vec![3, 1, 1])?;
    let add = verify_addition_rule(&exact, &counts)?;
    println!("addition at {counts}: {} = {} ({})", add.lhs.render(), add.rhs.render(), add.ok);
    for m in 1..=4 {
        let r = verify_multistep_total(&exact, &OccupancyCounts::new(vec![2, 1])?, m)?;
        println!("m = {m}: {} configurations, total {}", r.configurations, r.total.render());
    }

    let model = exact.to_f64();
    let mix = verify_mixture(&model, 4, 2, 100_000)?;
    println!(
        "mixture: partial {:.12} target {:.12} gap {:.2e}, tail bound {:.2e}, ok {}",
        mix.partial_sum,
        mix.target,
        (mix.partial_sum - mix.target).abs(),
        mix.tail_bound,
        mix.ok
    );
    let bayes = verify_bayes_identity(&model, 5, 3, 12)?;
    println!("bayes: {:.6e} vs {:.6e}, relative {:.1e}", bayes.lhs, bayes.rhs, bayes.relative_difference);
    Ok(())
}

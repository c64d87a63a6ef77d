//! Law of the number of blocks, exact for small n and in log space for large n.

use gnedin_fisher::laws::blocks_ln_pmf;
use gnedin_fisher::{blocks_pmf, prior_limit_tv, GnedinFisherPsi, Rational, Scalar};

fn main() -> gnedin_fisher::Result<()> {
    let exact = GnedinFisherPsi::new(Rational::new(4.into(), 5.into()), Rational::new(3.into(), 10.into()))?;
    for (i, p) in blocks_pmf(&exact, 6)?.iter().enumerate() {
        println!("P(K_6 = {}) = {}", i + 1, p.render());
    }

    let model = exact.to_f64();
    let ln = blocks_ln_pmf(&model, 2000)?;
    let mode = ln.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(k, _)| k + 1).unwrap();
    println!("n = 2000: mode of K_n at {mode}, P(K_n = 1) = {:.6}", ln[0].exp());
    for n in [10, 100, 1000, 2000] {
        println!("TV(K_{n}, prior of Xi) = {:.5}", prior_limit_tv(&model, n)?);
    }
    Ok(())
}

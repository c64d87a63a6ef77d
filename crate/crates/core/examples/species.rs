//! Prior and posterior of the number of species.

use gnedin_fisher::laws::posterior_waring;
use gnedin_fisher::{GnedinFisherPsi, Moment, XiPrior};

fn main() -> gnedin_fisher::Result<()> {
    let model = GnedinFisherPsi::new(0.8, 0.3)?;
    let prior = XiPrior::new(&model);
    println!("prior: P(Xi = 1..5) = {:?}", prior.iter().take(5).collect::<Vec<_>>());
    println!("prior tail ~ {:.5} xi^-1.8, mean {:?}", prior.tail_constant(), prior.waring().mean());
    println!("prior mass beyond 10^4 <= {:.3e}", prior.tail_bound(10_000, 0.0)?);

    for (n, k) in [(10, 3), (100, 12), (1000, 40)] {
        let post = posterior_waring(&model, n, k)?;
        let mean = match post.mean() {
            Moment::Finite(m) => format!("{:.2}", k as f64 + m),
            Moment::Nonexistent => "infinite".to_string(),
        };
        let p_k = post.pmf_shifted(k);
        println!("n = {n:>4}, k = {k:>2}: P(Xi = k | data) = {p_k:.4}, E(Xi | data) = {mean}");
    }
    Ok(())
}

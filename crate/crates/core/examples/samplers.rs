//! Sequential and two-stage sampling against the exact block-count law.

use gnedin_fisher::montecarlo::{chi_square_gof, replicate_rng};
use gnedin_fisher::{blocks_pmf, sample_sequential, GnedinFisherPsi, TwoStageSampler};

fn main() -> gnedin_fisher::Result<()> {
    let model = GnedinFisherPsi::new(0.8, 0.3)?;
    let (n, draws) = (6, 50_000u64);
    let law: Vec<f64> = blocks_pmf(&model, n as u64)?;
    let two_stage = TwoStageSampler::new(&model);

    let mut seq = vec![0u64; n];
    let mut two = vec![0u64; n];
    for i in 0..draws {
        let mut rng = replicate_rng(11, i);
        seq[sample_sequential(&model, n, &mut rng)?.k() - 1] += 1;
        two[two_stage.sample(n, &mut rng)?.k() - 1] += 1;
    }
    println!("k  exact     sequential two-stage");
    for k in 0..n {
        let f = |c: u64| c as f64 / draws as f64;
        println!("{}  {:.5}   {:.5}    {:.5}", k + 1, law[k], f(seq[k]), f(two[k]));
    }
    println!("chi-square p: {:.3} / {:.3}", chi_square_gof(&seq, &law)?.p_value, chi_square_gof(&two, &law)?.p_value);
    Ok(())
}

//! The structural distribution: atom at one plus a continuous density.

use gnedin_fisher::montecarlo::{ks_test, replicate_rng};
use gnedin_fisher::{structural_mixture_pdf_check, GnedinFisherPsi, StructuralLaw, StructuralSampler};

fn main() -> gnedin_fisher::Result<()> {
    let model = GnedinFisherPsi::new(0.8, 0.3)?;
    let law = StructuralLaw::new(&model);
    println!("atom {:.6}, total mass {:.12}", law.atom(), law.total_mass()?);
    for y in [0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
        let check = structural_mixture_pdf_check(&model, y, 20_000)?;
        println!("y = {y:<4}  density {:.8}  mixture {:.8}  cdf {:.6}", check.direct, check.partial_sum, law.cdf(y)?);
    }

    let sampler = StructuralSampler::new(&model);
    let mut rng = replicate_rng(5, 0);
    let ys: Vec<f64> = (0..20_000).map(|_| sampler.sample(&mut rng)).filter(|&y| y < 1.0).collect();
    // continuous part only, renormalized
    let scale = 1.0 - law.atom();
    let ks = ks_test(&ys, |y| law.continuous_cdf(y).unwrap() / scale)?;
    println!("{} continuous draws, KS statistic {:.4}, p = {:.3}", ys.len(), ks.statistic, ks.p_value);
    Ok(())
}

//! Exact EPPF values in both parametrizations.

use gnedin_fisher::{eppf, psi_to_zeta, GnedinFisherPsi, OccupancyCounts, Rational, Scalar};

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn main() -> gnedin_fisher::Result<()> {
    let model = GnedinFisherPsi::new(r(4, 5), r(3, 10))?;
    let zeta = psi_to_zeta(&model);
    println!("gamma = 4/5, psi = 3/10, zeta = {}", zeta.zeta().render());
    for counts in [vec![1], vec![2], vec![1, 1], vec![3, 1], vec![2, 2], vec![1, 1, 1, 1]] {
        let c = OccupancyCounts::new(counts)?;
        let p: Rational = eppf(&model, &c)?;
        let q: Rational = eppf(&zeta, &c)?;
        assert_eq!(p, q);
        println!("p({c}) = {:>12}  ~ {:.6}", p.render(), p.to_f64());
    }
    Ok(())
}

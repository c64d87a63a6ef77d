//! Moving between the (gamma, zeta) and (gamma, psi) forms.

use gnedin_fisher::{
    psi_to_zeta, validate_zeta, zeta_to_psi, GnedinFisherPsi, GnedinFisherZeta, Number, PsiRepresentation, Rational,
    Scalar,
};

fn show(gamma: &str, zeta: &str) -> gnedin_fisher::Result<()> {
    let (g, z) = (Number::parse_exact(gamma)?, Number::parse_exact(zeta)?);
    print!("gamma = {gamma}, zeta = {zeta}: {:?}", validate_zeta(&g, &z));
    match GnedinFisherZeta::new(g, z) {
        Err(e) => println!(" -> {e}"),
        Ok(m) => match zeta_to_psi(&m) {
            PsiRepresentation::Exact(p) => println!(" -> psi = {}", p.psi().render()),
            PsiRepresentation::Inexact(p) => println!(" -> psi ~ {}", p.psi()),
            PsiRepresentation::NotRepresentable { discriminant, reason } => {
                println!(" -> no psi form ({reason}, discriminant {})", discriminant.render())
            }
        },
    }
    Ok(())
}

fn main() -> gnedin_fisher::Result<()> {
    for (g, z) in [("0.8", "0.15"), ("1", "1/8"), ("0.5", "0.5"), ("3", "2"), ("5", "6"), ("1/2", "-1")] {
        show(g, z)?;
    }
    let m = GnedinFisherPsi::new(Rational::new(6.into(), 5.into()), Rational::new(1.into(), 2.into()))?;
    println!("gamma = 6/5, psi = 1/2 -> zeta = {}", psi_to_zeta(&m).zeta().render());
    Ok(())
}

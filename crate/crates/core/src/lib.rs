//! Exchangeable random partitions of the Gnedin-Fisher family.
//!
//! The crate evaluates EPPFs, block-count laws and allocation rules in exact
//! rational arithmetic, the laws of the latent number of species (shifted
//! generalized Waring distributions) in log space, and provides samplers and
//! brute-force oracles that cross-check every identity.
//!
//! ```
//! use gnedin_fisher::{eppf, GnedinFisherPsi, OccupancyCounts, Rational};
//!
//! let half = Rational::new(1.into(), 2.into());
//! let model = GnedinFisherPsi::new(half, Rational::from_integer(0.into())).unwrap();
//! let p: Rational = eppf(&model, &OccupancyCounts::new(vec![2]).unwrap()).unwrap();
//! assert_eq!(p, Rational::new(2.into(), 3.into()));
//! ```

pub mod allocation;
pub mod combinatorics;
pub mod error;
pub mod laws;
pub mod models;
pub mod montecarlo;
pub mod partition;
pub mod scalar;
pub mod structural;

pub use allocation::{
    grow_one, multistep_mixed_prob, multistep_new_prob, multistep_old_prob, sample_sequential,
    sample_two_stage, verify_multistep_total, GrowthState, TwoStageSampler,
};
pub use combinatorics::SetPartition;
pub use error::{Error, Result};
pub use laws::{
    blocks_pmf_two_param, new_blocks_posterior, prior_limit_tv, verify_bayes_identity,
    verify_mixture, waring_moment, waring_pmf, xi_posterior_pmf, xi_prior_pmf,
    xi_prior_tail_constant, GeneralizedWaring, Moment, XiPrior,
};
pub use models::{
    one_step_rules, psi_to_zeta, validate_zeta, weight_fisher, weight_psi, weight_zeta,
    zeta_to_psi, FisherExtreme, GnedinFisherPsi, GnedinFisherZeta, OneParameter, OneStepRules,
    PsiRepresentation, ZetaValidity,
};
pub use partition::{
    blocks_pmf, eppf, eppf_of_set_partition, verify_addition_rule, verify_normalization,
    GibbsWeights, OccupancyCounts,
};
pub use scalar::{LogScalar, Number, Rational, Scalar};
pub use structural::{
    structural_atom, structural_density, structural_mixture_pdf_check, StructuralLaw,
    StructuralSampler,
};

//! Factorial products, Lah numbers, the Gauss hypergeometric series and the
//! enumerators that back the exact verification oracles.

mod enumerate;
mod factorial;
mod hypergeometric;

pub use enumerate::{
    bell_number, enumerate_compositions, enumerate_set_partitions, Compositions, SetPartition,
    SetPartitions, MAX_ENUMERATION_N,
};
pub use factorial::{
    binomial, factorial, falling_factorial_step, lah_number, ln_gamma, noncentral_lah,
    recip_gamma, rising_factorial, rising_factorial_real_exponent,
};
pub use hypergeometric::{gauss_2f1_series, Hyp2F1, DEFAULT_2F1_TOLERANCE, MAX_2F1_TERMS};

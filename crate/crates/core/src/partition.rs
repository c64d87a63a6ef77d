//! Occupancy counts, the Gibbs-weight interface and EPPF evaluation for
//! partitions of genus -1, with brute-force normalization and consistency
//! oracles.

use std::fmt;

use crate::combinatorics::{enumerate_set_partitions, lah_number, SetPartition};
use crate::error::{domain, Error, Result};
use crate::scalar::{Rational, Scalar};

/// Ground-set cap for the enumeration oracles (`Bell(9) = 21147`).
pub const MAX_ORACLE_N: usize = 9;

/// Block sizes `(n_1, ..., n_k)` of a partition of `n` balls; every part is
/// positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupancyCounts(Vec<u64>);

impl OccupancyCounts {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return domain("occupancy counts need at least one block");
        }
        if counts.contains(&0) {
            return domain(format!("occupancy counts must be positive, got {counts:?}"));
        }
        Ok(OccupancyCounts(counts))
    }

    /// The single-ball state `(1)`.
    pub fn singleton() -> Self {
        OccupancyCounts(vec![1])
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn n(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn k(&self) -> u64 {
        self.0.len() as u64
    }

    /// One more ball in block `j` (0-based).
    pub fn with_increment(&self, j: usize) -> Self {
        let mut c = self.0.clone();
        c[j] += 1;
        OccupancyCounts(c)
    }

    /// One more ball in a new block.
    pub fn with_new_block(&self) -> Self {
        let mut c = self.0.clone();
        c.push(1);
        OccupancyCounts(c)
    }
}

impl fmt::Display for OccupancyCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<&SetPartition> for OccupancyCounts {
    fn from(p: &SetPartition) -> Self {
        OccupancyCounts(p.block_sizes())
    }
}

/// An exchangeable Gibbs partition of genus `α = -1`: its EPPF is
/// `V_{n,k} ∏ n_j!`.
///
/// Implementations satisfy `V_{1,1} = 1`, `V_{n,k} >= 0` and the backward
/// recursion `V_{n,k} = (n + k) V_{n+1,k} + V_{n+1,k+1}`.
pub trait GibbsWeights<T: Scalar> {
    /// `V_{n,k}` for `1 <= k <= n`.
    fn weight(&self, n: u64, k: u64) -> Result<T>;
}

pub(crate) fn check_nk(n: u64, k: u64) -> Result<()> {
    if k < 1 || k > n {
        return domain(format!("Gibbs weight V(n={n}, k={k}) needs 1 <= k <= n"));
    }
    Ok(())
}

/// `∏ n_j!` as a backend scalar.
pub(crate) fn factorial_product<T: Scalar>(counts: &[u64]) -> T {
    counts.iter().fold(T::one(), |acc, &c| {
        acc * (1..=c).fold(T::one(), |f, i| f * T::from_u64(i))
    })
}

/// Probability of any particular set partition with block sizes `counts`.
pub fn eppf<T: Scalar, M: GibbsWeights<T> + ?Sized>(model: &M, counts: &OccupancyCounts) -> Result<T> {
    let v = model.weight(counts.n(), counts.k())?;
    if v.is_zero() {
        return Ok(v);
    }
    Ok(v * factorial_product(counts.counts()))
}

pub fn eppf_of_set_partition<T: Scalar, M: GibbsWeights<T> + ?Sized>(
    model: &M,
    partition: &SetPartition,
) -> Result<T> {
    eppf(model, &OccupancyCounts::from(partition))
}

/// Outcome of summing the EPPF over every set partition of `{1..n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationReport<T> {
    pub n: usize,
    pub partitions: u64,
    pub total: T,
    /// `total - 1`.
    pub residual: T,
    pub ok: bool,
}

/// Sums the EPPF over all `Bell(n)` set partitions. Passes when the total is
/// exactly one (rational backend) or within `1e-10` (float backend).
pub fn verify_normalization<T: Scalar, M: GibbsWeights<T> + ?Sized>(
    model: &M,
    n: usize,
) -> Result<NormalizationReport<T>> {
    if n > MAX_ORACLE_N {
        return Err(Error::Size {
            what: "n",
            value: n as u64,
            limit: MAX_ORACLE_N as u64,
        });
    }
    let mut total = T::zero();
    let mut partitions = 0u64;
    for p in enumerate_set_partitions(n)? {
        total = total + eppf_of_set_partition(model, &p)?;
        partitions += 1;
    }
    let residual = total.clone() - T::one();
    let ok = within(&residual, 1e-10);
    Ok(NormalizationReport {
        n,
        partitions,
        total,
        residual,
        ok,
    })
}

pub(crate) fn within<T: Scalar>(residual: &T, float_tol: f64) -> bool {
    if T::EXACT {
        residual.is_zero()
    } else {
        residual.to_f64().abs() <= float_tol
    }
}

/// Consistency of the EPPF under one more ball.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditionReport<T> {
    pub counts: OccupancyCounts,
    /// `p(n_1, ..., n_k)`.
    pub lhs: T,
    /// `Σ_j p(.., n_j + 1, ..) + p(n_1, ..., n_k, 1)`.
    pub rhs: T,
    pub ok: bool,
}

pub fn verify_addition_rule<T: Scalar, M: GibbsWeights<T> + ?Sized>(
    model: &M,
    counts: &OccupancyCounts,
) -> Result<AdditionReport<T>> {
    let lhs = eppf(model, counts)?;
    let mut rhs = eppf(model, &counts.with_new_block())?;
    for j in 0..counts.counts().len() {
        rhs = rhs + eppf(model, &counts.with_increment(j))?;
    }
    let ok = within(&(lhs.clone() - rhs.clone()), 1e-12);
    Ok(AdditionReport {
        counts: counts.clone(),
        lhs,
        rhs,
        ok,
    })
}

/// Law of the number of blocks, `P(K_n = k) = V_{n,k} L(n,k)` with `L` the
/// Lah numbers; index `k - 1` holds `P(K_n = k)`.
pub fn blocks_pmf<T: Scalar, M: GibbsWeights<T> + ?Sized>(model: &M, n: u64) -> Result<Vec<T>> {
    if n == 0 {
        return domain("blocks law needs n >= 1");
    }
    (1..=n)
        .map(|k| {
            let lah = lah_number(n, k)?;
            Ok(model.weight(n, k)? * big_to_scalar(&lah))
        })
        .collect()
}

/// Exact integer into the backend (nearest double for floats).
pub(crate) fn big_to_scalar<T: Scalar>(v: &num_bigint::BigInt) -> T {
    let (sign, digits) = v.to_u32_digits();
    let base = T::from_u64(1u64 << 32);
    let acc = digits
        .iter()
        .rev()
        .fold(T::zero(), |acc, &d| acc * base.clone() + T::from_u64(d as u64));
    if sign == num_bigint::Sign::Minus {
        -acc
    } else {
        acc
    }
}

/// Exact rational into the backend (nearest double for floats).
pub fn scalar_from_rational<T: Scalar>(r: &Rational) -> T {
    if T::EXACT {
        big_to_scalar::<T>(r.numer()) / big_to_scalar::<T>(r.denom())
    } else {
        T::from_f64(Scalar::to_f64(r)).unwrap_or_else(T::zero)
    }
}

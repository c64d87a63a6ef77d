//! Sequential growth of partitions: the one-step sampler, the multistep
//! allocation rules for several new balls at once, and the two-stage sampler
//! that first draws the number of species and then a symmetric Dirichlet
//! frequency vector.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::combinatorics::{enumerate_compositions, factorial, rising_factorial, SetPartition};
use crate::error::{domain, Result};
use crate::laws::{GeneralizedWaring, XiPrior};
use crate::models::{one_step_rules, GnedinFisherPsi};
use crate::partition::{big_to_scalar, OccupancyCounts};
use crate::scalar::Scalar;

/// Occupancy of the boxes after `n` balls.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrowthState {
    counts: OccupancyCounts,
}

/// Where a ball went.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seat {
    /// Existing box, 0-based.
    Old(usize),
    New,
}

impl GrowthState {
    /// One ball in one box.
    pub fn new() -> Self {
        GrowthState {
            counts: OccupancyCounts::singleton(),
        }
    }

    pub fn from_counts(counts: OccupancyCounts) -> Self {
        GrowthState { counts }
    }

    pub fn counts(&self) -> &OccupancyCounts {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.counts.n()
    }

    pub fn k(&self) -> u64 {
        self.counts.k()
    }

    pub fn seat(&self, seat: Seat) -> Self {
        let counts = match seat {
            Seat::Old(j) => self.counts.with_increment(j),
            Seat::New => self.counts.with_new_block(),
        };
        GrowthState { counts }
    }
}

impl Default for GrowthState {
    fn default() -> Self {
        Self::new()
    }
}

/// Draws the seat of the next ball from the one-step rules.
pub fn draw_seat<R: Rng + ?Sized>(model: &GnedinFisherPsi<f64>, state: &GrowthState, rng: &mut R) -> Seat {
    let rules = one_step_rules(model, &state.counts);
    let mut u: f64 = rng.random::<f64>() * rules.total();
    for (j, p) in rules.p_old.iter().enumerate() {
        if u < *p {
            return Seat::Old(j);
        }
        u -= p;
    }
    Seat::New
}

/// One sequential step.
pub fn grow_one<R: Rng + ?Sized>(model: &GnedinFisherPsi<f64>, state: &GrowthState, rng: &mut R) -> GrowthState {
    state.seat(draw_seat(model, state, rng))
}

/// Seats balls `1..=n` one at a time and returns the resulting partition.
pub fn sample_sequential<R: Rng + ?Sized>(model: &GnedinFisherPsi<f64>, n: usize, rng: &mut R) -> Result<SetPartition> {
    if n == 0 {
        return domain("sampling needs n >= 1");
    }
    let mut labels = Vec::with_capacity(n);
    labels.push(0usize);
    let mut state = GrowthState::new();
    for _ in 1..n {
        let seat = draw_seat(model, &state, rng);
        labels.push(match seat {
            Seat::Old(j) => j,
            Seat::New => state.k() as usize,
        });
        state = state.seat(seat);
    }
    Ok(SetPartition::from_labels(&labels))
}

/// `(γ+n-k)_{m-k*} / ((ψ+n)_m (γ-ψ+n)_m)`, shared by the three rules, times
/// `(k-ψ)_{k*} (k-γ+ψ)_{k*}`.
fn prefactor<T: Scalar>(model: &GnedinFisherPsi<T>, n: u64, k: u64, m: u64, k_star: u64) -> T {
    let g = model.gamma().clone();
    let p = model.psi().clone();
    let (nt, kt) = (T::from_u64(n), T::from_u64(k));
    let num = rising_factorial(&(g.clone() + nt.clone() - kt.clone()), m - k_star)
        * rising_factorial(&(kt.clone() - p.clone()), k_star)
        * rising_factorial(&(kt - g.clone() + p.clone()), k_star);
    let den = rising_factorial(&(p.clone() + nt.clone()), m) * rising_factorial(&(g - p + nt), m);
    num / den
}

fn old_factor<T: Scalar>(state: &OccupancyCounts, m_vec: &[u64]) -> T {
    state
        .counts()
        .iter()
        .zip(m_vec)
        .fold(T::one(), |acc, (&nj, &mj)| acc * rising_factorial(&T::from_u64(nj + 1), mj))
}

fn check_old(state: &OccupancyCounts, m_vec: &[u64]) -> Result<()> {
    if m_vec.len() as u64 != state.k() {
        return domain(format!(
            "old-box configuration has {} entries for {} boxes",
            m_vec.len(),
            state.k()
        ));
    }
    Ok(())
}

fn check_new(s_vec: &[u64]) -> Result<()> {
    if s_vec.is_empty() || s_vec.contains(&0) {
        return domain(format!("new-box sizes must be positive and nonempty, got {s_vec:?}"));
    }
    Ok(())
}

/// Probability that the next `m = Σ m_j` balls fall, in one specified
/// labelled way, into the old boxes with `m_j` balls in box `j`.
pub fn multistep_old_prob<T: Scalar>(
    model: &GnedinFisherPsi<T>,
    state: &OccupancyCounts,
    m_vec: &[u64],
) -> Result<T> {
    check_old(state, m_vec)?;
    let m = m_vec.iter().sum();
    Ok(prefactor(model, state.n(), state.k(), m, 0) * old_factor(state, m_vec))
}

/// Probability of one specified labelled placement of `m = Σ s_j` balls into
/// `k* = len(s)` new boxes of sizes `s_j`.
pub fn multistep_new_prob<T: Scalar>(
    model: &GnedinFisherPsi<T>,
    state: &OccupancyCounts,
    s_vec: &[u64],
) -> Result<T> {
    check_new(s_vec)?;
    let m = s_vec.iter().sum();
    Ok(prefactor(model, state.n(), state.k(), m, s_vec.len() as u64) * new_factor(s_vec, true))
}

fn new_factor<T: Scalar>(s_vec: &[u64], factorial_sizes: bool) -> T {
    s_vec.iter().fold(T::one(), |acc, &s| {
        if factorial_sizes {
            acc * big_to_scalar(&factorial(s))
        } else {
            acc * T::from_u64(s)
        }
    })
}

/// Both old and new boxes receive balls: `m_j` into old box `j`, `s_j` into
/// new box `j`. The new boxes contribute `∏ s_j!`, as in the all-new rule.
pub fn multistep_mixed_prob<T: Scalar>(
    model: &GnedinFisherPsi<T>,
    state: &OccupancyCounts,
    m_vec: &[u64],
    s_vec: &[u64],
) -> Result<T> {
    mixed(model, state, m_vec, s_vec, true)
}

/// The mixed rule with a trailing `∏ s_j` in place of `∏ s_j!`. It departs
/// from the sequential law once a new box gets three or more balls; kept for
/// comparison only.
pub fn multistep_mixed_prob_plain_sizes<T: Scalar>(
    model: &GnedinFisherPsi<T>,
    state: &OccupancyCounts,
    m_vec: &[u64],
    s_vec: &[u64],
) -> Result<T> {
    mixed(model, state, m_vec, s_vec, false)
}

fn mixed<T: Scalar>(
    model: &GnedinFisherPsi<T>,
    state: &OccupancyCounts,
    m_vec: &[u64],
    s_vec: &[u64],
    factorial_sizes: bool,
) -> Result<T> {
    check_old(state, m_vec)?;
    check_new(s_vec)?;
    let m = m_vec.iter().sum::<u64>() + s_vec.iter().sum::<u64>();
    Ok(prefactor(model, state.n(), state.k(), m, s_vec.len() as u64)
        * old_factor(state, m_vec)
        * new_factor(s_vec, factorial_sizes))
}

/// Number of labellings of `m` new balls giving old-box counts `m_vec` and an
/// ordered list of new-box sizes `s_vec`, divided by `k*!` so that summing
/// over all orderings of the new boxes counts each set partition once:
/// `m! / (∏ m_j! ∏ s_j! k*!)`.
pub fn configuration_multiplicity(m_vec: &[u64], s_vec: &[u64]) -> num_rational::BigRational {
    let m: u64 = m_vec.iter().chain(s_vec).sum();
    let den = m_vec
        .iter()
        .chain(s_vec)
        .fold(factorial(s_vec.len() as u64), |acc, &c| acc * factorial(c));
    num_rational::BigRational::new(factorial(m), den)
}

/// Law of total probability over every multistep outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct MultistepReport<T> {
    pub state: OccupancyCounts,
    pub m: u64,
    pub configurations: u64,
    pub total: T,
    pub ok: bool,
}

/// Largest `m` and state size accepted by [`verify_multistep_total`].
pub const MAX_MULTISTEP: u64 = 6;

/// Sums rule values times [`configuration_multiplicity`] over all old-box
/// vectors and ordered new-box size lists.
pub fn verify_multistep_total<T: Scalar>(
    model: &GnedinFisherPsi<T>,
    state: &OccupancyCounts,
    m: u64,
) -> Result<MultistepReport<T>> {
    if m > MAX_MULTISTEP || state.n() > MAX_MULTISTEP {
        return Err(crate::Error::Size {
            what: "m or n",
            value: m.max(state.n()),
            limit: MAX_MULTISTEP,
        });
    }
    let k = state.k() as usize;
    let mut total = T::zero();
    let mut configurations = 0u64;
    for new_balls in 0..=m {
        for m_vec in enumerate_compositions(m - new_balls, k, 0) {
            if new_balls == 0 {
                total = total
                    + multistep_old_prob(model, state, &m_vec)?
                        * crate::partition::scalar_from_rational(&configuration_multiplicity(&m_vec, &[]));
                configurations += 1;
                continue;
            }
            for k_star in 1..=new_balls as usize {
                for s_vec in enumerate_compositions(new_balls, k_star, 1) {
                    total = total
                        + multistep_mixed_prob(model, state, &m_vec, &s_vec)?
                            * crate::partition::scalar_from_rational(&configuration_multiplicity(
                                &m_vec, &s_vec,
                            ));
                    configurations += 1;
                }
            }
        }
    }
    let ok = crate::partition::within(&(total.clone() - T::one()), 1e-12);
    Ok(MultistepReport {
        state: state.clone(),
        m,
        configurations,
        total,
        ok,
    })
}

/// Largest `ξ` handled by the cached inverse-cdf table.
pub const XI_TABLE_MAX: u64 = 10_000;

/// Above this many species the Dirichlet vector is replaced by the
/// equivalent Pólya urn.
pub const DIRICHLET_MAX: u64 = 100_000;

/// Draws `Ξ` from its prior and then a partition of `n` balls from the
/// symmetric Dirichlet model with `Ξ` species.
#[derive(Debug, Clone)]
pub struct TwoStageSampler {
    cdf: Vec<f64>,
    waring: GeneralizedWaring,
}

impl TwoStageSampler {
    pub fn new(model: &GnedinFisherPsi<f64>) -> Self {
        let prior = XiPrior::new(model);
        let cdf = prior
            .iter()
            .take(XI_TABLE_MAX as usize)
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        TwoStageSampler {
            cdf,
            waring: prior.waring(),
        }
    }

    /// Inverse cdf on `ξ <= 10^4`; beyond, generalized Waring draws rejected
    /// until they land above the table, which is exact for the conditional law.
    pub fn sample_xi<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        if u < *self.cdf.last().expect("nonempty table") {
            return self.cdf.partition_point(|&c| c <= u) as u64 + 1;
        }
        loop {
            let x = self.waring.sample(rng);
            if x > XI_TABLE_MAX {
                return x;
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<SetPartition> {
        if n == 0 {
            return domain("sampling needs n >= 1");
        }
        let xi = self.sample_xi(rng);
        Ok(SetPartition::from_labels(&sample_symmetric_dirichlet(xi, n, rng)))
    }
}

/// Species labels of `n` balls under the Fisher model with `xi` species.
pub fn sample_symmetric_dirichlet<R: Rng + ?Sized>(xi: u64, n: usize, rng: &mut R) -> Vec<usize> {
    if xi <= DIRICHLET_MAX {
        let mut acc = 0.0;
        let cum: Vec<f64> = (0..xi)
            .map(|_| {
                let e: f64 = rng.sample(Exp1);
                acc += e;
                acc
            })
            .collect();
        (0..n)
            .map(|_| {
                let u = rng.random::<f64>() * acc;
                cum.partition_point(|&c| c <= u).min(xi as usize - 1)
            })
            .collect()
    } else {
        // ball m+1 joins species s with probability (1 + c_s)/(xi + m)
        let mut sizes: Vec<u64> = Vec::new();
        let mut labels = Vec::with_capacity(n);
        for m in 0..n as u64 {
            let mut u = rng.random::<f64>() * (xi as f64 + m as f64);
            let mut seat = sizes.len();
            for (s, &c) in sizes.iter().enumerate() {
                let w = 1.0 + c as f64;
                if u < w {
                    seat = s;
                    break;
                }
                u -= w;
            }
            if seat == sizes.len() {
                sizes.push(0);
            }
            sizes[seat] += 1;
            labels.push(seat);
        }
        labels
    }
}

pub fn sample_two_stage<R: Rng + ?Sized>(model: &GnedinFisherPsi<f64>, n: usize, rng: &mut R) -> Result<SetPartition> {
    TwoStageSampler::new(model).sample(n, rng)
}

/// `Beta(2, b)` through two gamma draws.
pub(crate) fn beta_two<R: Rng + ?Sized>(b: f64, rng: &mut R) -> f64 {
    let x: f64 = Gamma::new(2.0, 1.0).expect("shape 2").sample(rng);
    let y: f64 = Gamma::new(b, 1.0).expect("positive shape").sample(rng);
    x / (x + y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn counts(v: &[u64]) -> OccupancyCounts {
        OccupancyCounts::new(v.to_vec()).unwrap()
    }

    #[test]
    fn first_step_new_box_probability() {
        let m = GnedinFisherPsi::new(q(4, 5), q(3, 10)).unwrap();
        let zeta = q(3, 10) * (q(4, 5) - q(3, 10));
        let expected = (q(1, 1) - q(4, 5) + zeta.clone()) / (q(1, 1) + q(4, 5) + zeta);
        let p = multistep_new_prob(&m, &counts(&[1]), &[1]).unwrap();
        assert_eq!(p, expected);
        assert_eq!(one_step_rules(&m, &counts(&[1])).p_new, expected);
    }

    #[test]
    fn reductions_to_one_step() {
        let m = GnedinFisherPsi::new(q(6, 5), q(1, 2)).unwrap();
        let state = counts(&[3, 1, 2]);
        let rules = one_step_rules(&m, &state);
        assert_eq!(rules.total(), q(1, 1));
        for j in 0..3 {
            let mut e = vec![0; 3];
            e[j] = 1;
            assert_eq!(multistep_old_prob(&m, &state, &e).unwrap(), rules.p_old[j]);
        }
        assert_eq!(multistep_new_prob(&m, &state, &[1]).unwrap(), rules.p_new);
        assert_eq!(multistep_old_prob(&m, &state, &[0, 0, 0]).unwrap(), q(1, 1));
        assert_eq!(
            multistep_mixed_prob(&m, &state, &[0, 0, 0], &[2, 1]).unwrap(),
            multistep_new_prob(&m, &state, &[2, 1]).unwrap()
        );
    }

    #[test]
    fn invalid_configurations() {
        let m = GnedinFisherPsi::new(q(1, 2), q(0, 1)).unwrap();
        assert!(multistep_old_prob(&m, &counts(&[1]), &[1, 1]).is_err());
        assert!(multistep_new_prob(&m, &counts(&[1]), &[0, 2]).is_err());
        assert!(multistep_new_prob(&m, &counts(&[1]), &[]).is_err());
        assert!(multistep_mixed_prob(&m, &counts(&[1]), &[1], &[]).is_err());
    }

    #[test]
    fn multiplicities() {
        assert_eq!(configuration_multiplicity(&[1, 1], &[]), q(2, 1));
        assert_eq!(configuration_multiplicity(&[], &[1, 1]), q(1, 1));
        assert_eq!(configuration_multiplicity(&[1], &[2]), q(3, 1));
    }

    #[test]
    fn total_probability_examples() {
        let m = GnedinFisherPsi::new(q(1, 2), q(0, 1)).unwrap();
        for mm in 1..=2 {
            let r = verify_multistep_total(&m, &counts(&[1]), mm).unwrap();
            assert!(r.ok, "{r:?}");
        }
        let m = GnedinFisherPsi::new(q(4, 5), q(3, 10)).unwrap();
        let r = verify_multistep_total(&m, &counts(&[2, 1]), 3).unwrap();
        assert_eq!(r.total, q(1, 1));
        let r = verify_multistep_total(&m.to_f64(), &counts(&[2, 1]), 3).unwrap();
        assert!(r.ok);
        assert!(verify_multistep_total(&m, &counts(&[2, 1]), 7).is_err());
    }

    #[test]
    fn sequential_sampler_is_deterministic() {
        let m = GnedinFisherPsi::new(0.8, 0.3).unwrap();
        let a = sample_sequential(&m, 20, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        let b = sample_sequential(&m, 20, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n(), 20);
        let one = sample_sequential(&m, 1, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(one.k(), 1);
    }

    #[test]
    fn grow_one_keeps_invariants() {
        let m = GnedinFisherPsi::new(0.8, 0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut s = GrowthState::new();
        for n in 2..50 {
            let next = grow_one(&m, &s, &mut rng);
            assert_eq!(next.n(), n);
            assert!(next.k() == s.k() || next.k() == s.k() + 1);
            s = next;
        }
    }

    #[test]
    fn two_stage_single_ball() {
        let m = GnedinFisherPsi::new(0.5, 0.0).unwrap();
        let sampler = TwoStageSampler::new(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            assert_eq!(sampler.sample(1, &mut rng).unwrap().k(), 1);
        }
    }

    #[test]
    fn xi_draws_reach_the_tail() {
        // γ = 0.2 puts about a sixth of the prior mass above the table
        let m = GnedinFisherPsi::new(0.2, 0.0).unwrap();
        let sampler = TwoStageSampler::new(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let draws: Vec<u64> = (0..20_000).map(|_| sampler.sample_xi(&mut rng)).collect();
        let above = draws.iter().filter(|&&x| x > XI_TABLE_MAX).count() as f64 / draws.len() as f64;
        let prior = XiPrior::new(&m);
        let expected = 1.0 - prior.iter().take(XI_TABLE_MAX as usize).sum::<f64>();
        let se = (expected * (1.0 - expected) / draws.len() as f64).sqrt();
        assert!((above - expected).abs() < 4.0 * se, "{above} vs {expected}");
        let ones = draws.iter().filter(|&&x| x == 1).count() as f64 / draws.len() as f64;
        assert!((ones - 0.2).abs() < 4.0 * (0.16f64 / draws.len() as f64).sqrt());
    }

    #[test]
    fn urn_and_dirichlet_agree_on_pairs() {
        // P(balls 1 and 2 share a species) = 2/(ξ+1) under both constructions
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let reps = 20_000;
        for &xi in &[3u64, DIRICHLET_MAX + 1] {
            let hits = (0..reps)
                .filter(|_| {
                    let l = sample_symmetric_dirichlet(xi, 2, &mut rng);
                    l[0] == l[1]
                })
                .count() as f64
                / reps as f64;
            let p = 2.0 / (xi as f64 + 1.0);
            assert!((hits - p).abs() < 4.0 * (p * (1.0 - p) / reps as f64).sqrt() + 1e-4, "xi={xi}");
        }
    }
}

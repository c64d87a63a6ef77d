#![allow(dead_code)]

use gnedin_fisher::{one_step_rules, GnedinFisherPsi, OccupancyCounts, Rational};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// The (γ, ψ) grid used throughout: (1/2, 0), (4/5, 3/10), (6/5, 1/2).
pub fn grid() -> Vec<GnedinFisherPsi<Rational>> {
    [(q(1, 2), q(0, 1)), (q(4, 5), q(3, 10)), (q(6, 5), q(1, 2))]
        .into_iter()
        .map(|(g, p)| GnedinFisherPsi::new(g, p).unwrap())
        .collect()
}

/// Integer partitions of `n` as nonincreasing part lists.
pub fn integer_partitions(n: u64) -> Vec<Vec<u64>> {
    fn go(rest: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn factorial(n: u64) -> Rational {
    (1..=n).fold(q(1, 1), |acc, i| acc * q(i as i64, 1))
}

/// One labelled way of seating `m` further balls, in seating order.
#[derive(Debug, Clone)]
pub struct Path {
    /// Balls added to each old box.
    pub m_vec: Vec<u64>,
    /// Sizes of the new boxes in order of creation.
    pub s_vec: Vec<u64>,
    pub prob: Rational,
}

/// Every sequence of `m` one-step moves from `state`, with its probability
/// as the product of the one-step rules along the way.
pub fn sequential_paths(model: &GnedinFisherPsi<Rational>, state: &OccupancyCounts, m: u64) -> Vec<Path> {
    let k0 = state.counts().len();
    let mut out = Vec::new();
    let start = Path {
        m_vec: vec![0; k0],
        s_vec: Vec::new(),
        prob: q(1, 1),
    };
    walk(model, state.clone(), k0, m, start, &mut out);
    out
}

fn walk(
    model: &GnedinFisherPsi<Rational>,
    current: OccupancyCounts,
    k0: usize,
    left: u64,
    path: Path,
    out: &mut Vec<Path>,
) {
    if left == 0 {
        out.push(path);
        return;
    }
    let rules = one_step_rules(model, &current);
    for (j, p) in rules.p_old.iter().enumerate() {
        let mut next = path.clone();
        if j < k0 {
            next.m_vec[j] += 1;
        } else {
            next.s_vec[j - k0] += 1;
        }
        next.prob *= p.clone();
        walk(model, current.with_increment(j), k0, left - 1, next, out);
    }
    let mut next = path;
    next.s_vec.push(1);
    next.prob *= rules.p_new.clone();
    walk(model, current.with_new_block(), k0, left - 1, next, out);
}

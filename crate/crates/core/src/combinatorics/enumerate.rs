use std::fmt;

use crate::error::{domain, Error, Result};

/// Largest ground set accepted by [`enumerate_set_partitions`].
pub const MAX_ENUMERATION_N: usize = 12;

/// A partition of `{1, ..., n}` into nonempty blocks, ordered by least
/// element, each block sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds a partition from arbitrary blocks, validating that they are
    /// disjoint, nonempty and cover `1..=n`.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n + 1];
        for block in &blocks {
            if block.is_empty() {
                return domain("set partition with an empty block");
            }
            for &e in block {
                if e == 0 || e > n || seen[e] {
                    return domain(format!("element {e} repeated or outside 1..={n}"));
                }
                seen[e] = true;
            }
        }
        let mut blocks = blocks;
        for block in &mut blocks {
            block.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { blocks })
    }

    /// From block labels `labels[i]` of ball `i + 1`. Labels are arbitrary;
    /// blocks are renumbered by first appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut index = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &label) in labels.iter().enumerate() {
            let b = *index.entry(label).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(i + 1);
        }
        SetPartition { blocks }
    }

    fn from_rgs(rgs: &[usize], k: usize) -> Self {
        let mut blocks = vec![Vec::new(); k];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        SetPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Size of the ground set.
    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Number of blocks.
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_sizes(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| b.len() as u64).collect()
    }

    /// Restricted growth string: block index (0-based) of each element.
    pub fn restricted_growth_string(&self) -> Vec<usize> {
        let mut rgs = vec![0; self.n()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &e in block {
                rgs[e - 1] = b;
            }
        }
        rgs
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, e) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// Iterator over the set partitions of `{1..n}` in restricted-growth-string
/// (lexicographic) order.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    rgs: Vec<usize>,
    // prefix maxima: max[i] = max(rgs[0..=i])
    max: Vec<usize>,
    done: bool,
}

impl Iterator for SetPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let n = self.rgs.len();
        let k = self.max.last().map_or(0, |m| m + 1);
        let current = SetPartition::from_rgs(&self.rgs, k);
        // advance: rightmost position that can grow
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.rgs[i] <= self.max[i - 1] {
                self.rgs[i] += 1;
                self.max[i] = self.max[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.max[j] = self.max[i];
                }
                break;
            }
        }
        Some(current)
    }
}

/// All `Bell(n)` set partitions of `{1..n}`, each exactly once.
pub fn enumerate_set_partitions(n: usize) -> Result<SetPartitions> {
    if n == 0 {
        return domain("set partitions need n >= 1");
    }
    if n > MAX_ENUMERATION_N {
        return Err(Error::Size {
            what: "n",
            value: n as u64,
            limit: MAX_ENUMERATION_N as u64,
        });
    }
    Ok(SetPartitions {
        rgs: vec![0; n],
        max: vec![0; n],
        done: false,
    })
}

/// Bell numbers from the Bell triangle.
pub fn bell_number(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("nonempty row")];
        for &v in &row {
            let last = *next.last().expect("nonempty row");
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

/// Iterator over integer vectors of a fixed length with entries at least
/// `min_part` summing to `total`, in lexicographic order.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u64>>,
    min_part: u64,
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.clone()?;
        let v = self.current.as_mut().expect("checked above");
        let len = v.len();
        // Find the rightmost position i < len-1 that can take one unit from
        // the tail, increment it, and push the remaining excess to the end.
        let mut advanced = false;
        for i in (0..len.saturating_sub(1)).rev() {
            let tail: u64 = v[i + 1..].iter().sum();
            let tail_min = self.min_part * (len - i - 1) as u64;
            if tail > tail_min {
                v[i] += 1;
                for x in v[i + 1..].iter_mut() {
                    *x = self.min_part;
                }
                v[len - 1] += tail - 1 - tail_min;
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.current = None;
        }
        Some(out)
    }
}

/// Every vector of length `parts` with entries `>= min_part` summing to `total`.
pub fn enumerate_compositions(total: u64, parts: usize, min_part: u64) -> Compositions {
    let feasible = parts >= 1 && min_part * parts as u64 <= total;
    let current = feasible.then(|| {
        let mut v = vec![min_part; parts];
        v[parts - 1] = total - min_part * (parts as u64 - 1);
        v
    });
    Compositions { current, min_part }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn small_cases() {
        let all: Vec<_> = enumerate_set_partitions(3).unwrap().collect();
        assert_eq!(all.len(), 5);
        assert_eq!(all[0].to_string(), "{{1,2,3}}");
        assert_eq!(all[4].to_string(), "{{1},{2},{3}}");
        let one: Vec<_> = enumerate_set_partitions(1).unwrap().collect();
        assert_eq!(one, vec![SetPartition::new(vec![vec![1]]).unwrap()]);
        assert_eq!(enumerate_set_partitions(5).unwrap().count(), 52);
    }

    #[test]
    fn counts_match_bell_triangle() {
        for n in 1..=8 {
            let distinct: HashSet<_> = enumerate_set_partitions(n).unwrap().collect();
            assert_eq!(distinct.len() as u64, bell_number(n), "n = {n}");
        }
        assert_eq!(bell_number(9), 21147);
    }

    #[test]
    fn rgs_order_is_lexicographic() {
        let rgs: Vec<_> = enumerate_set_partitions(5)
            .unwrap()
            .map(|p| p.restricted_growth_string())
            .collect();
        assert!(rgs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn size_guard() {
        assert!(matches!(enumerate_set_partitions(13), Err(Error::Size { .. })));
        assert!(enumerate_set_partitions(0).is_err());
    }

    #[test]
    fn labels_and_validation() {
        let p = SetPartition::from_labels(&[7, 3, 7, 9]);
        assert_eq!(p.to_string(), "{{1,3},{2},{4}}");
        assert_eq!(p.block_sizes(), vec![2, 1, 1]);
        let q = SetPartition::new(vec![vec![4], vec![3, 1], vec![2]]).unwrap();
        assert_eq!(q.to_string(), "{{1,3},{2},{4}}");
        assert!(SetPartition::new(vec![vec![1, 1]]).is_err());
        assert!(SetPartition::new(vec![vec![1], vec![]]).is_err());
        assert!(SetPartition::new(vec![vec![1, 3]]).is_err());
    }

    #[test]
    fn compositions() {
        let v: Vec<_> = enumerate_compositions(2, 2, 0).collect();
        assert_eq!(v, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(enumerate_compositions(3, 1, 1).collect::<Vec<_>>(), vec![vec![3]]);
        assert_eq!(enumerate_compositions(4, 2, 1).count(), 3);
        assert_eq!(enumerate_compositions(2, 3, 1).count(), 0);
        assert_eq!(enumerate_compositions(0, 3, 0).collect::<Vec<_>>(), vec![vec![0, 0, 0]]);
        // stars and bars
        assert_eq!(enumerate_compositions(6, 3, 0).count(), 28);
        assert_eq!(enumerate_compositions(7, 3, 1).count(), 15);
        assert!(enumerate_compositions(7, 3, 1).all(|c| c.iter().sum::<u64>() == 7));
    }
}

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered decomposition of `{0, .., n-1}` into contiguous blocks.
///
/// Indices are zero-based throughout the crate. The partition `{{1,2},{3}}`
/// of `{1,2,3}` is `Partition::new(3, &[2, 1])` and covers the index ranges
/// `0..2` and `2..3`.
///
/// Serializes as the JSON array of its block sizes, e.g. `[2,1]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    n: usize,
    sizes: Vec<usize>,
    starts: Vec<usize>,
    block_of: Vec<usize>,
}

impl Partition {
    /// Builds the contiguous partition with the given block sizes.
    ///
    /// At least two blocks are required: with a single block the unipotent
    /// radical is trivial and there is nothing to count.
    pub fn new(n: usize, block_sizes: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition("n must be positive".into()));
        }
        if block_sizes.contains(&0) {
            return Err(Error::InvalidPartition("blocks must be nonempty".into()));
        }
        let total: usize = block_sizes.iter().sum();
        if total != n {
            return Err(Error::InvalidPartition(format!(
                "block sizes {block_sizes:?} sum to {total}, expected {n}"
            )));
        }
        if block_sizes.len() < 2 {
            return Err(Error::InvalidPartition(
                "fewer than two blocks (degenerate horocycle)".into(),
            ));
        }
        Ok(Self::from_sizes_unchecked(block_sizes))
    }

    /// Partition into singletons, `{{1},..,{n}}`.
    pub fn finest(n: usize) -> Result<Self> {
        Self::new(n, &vec![1; n])
    }

    fn from_sizes_unchecked(block_sizes: &[usize]) -> Self {
        let n = block_sizes.iter().sum();
        let mut starts = Vec::with_capacity(block_sizes.len());
        let mut block_of = Vec::with_capacity(n);
        let mut acc = 0;
        for (k, &s) in block_sizes.iter().enumerate() {
            starts.push(acc);
            block_of.extend(std::iter::repeat_n(k, s));
            acc += s;
        }
        Self {
            n,
            sizes: block_sizes.to_vec(),
            starts,
            block_of,
        }
    }

    /// Coarsening used by the limit classifier. Unlike [`Partition::new`]
    /// this accepts a single block, since the coarsened partition of a
    /// translated measure may be trivial.
    pub(crate) fn coarse(block_sizes: &[usize]) -> Self {
        Self::from_sizes_unchecked(block_sizes)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn block(&self, k: usize) -> Range<usize> {
        self.starts[k]..self.starts[k] + self.sizes[k]
    }

    pub fn blocks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.num_blocks()).map(move |k| self.block(k))
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.block_of[i] == self.block_of[j]
    }

    /// Number of indices in `I_1 ∪ .. ∪ I_k` (the first `k` blocks).
    pub fn prefix_len(&self, k: usize) -> usize {
        self.sizes[..k].iter().sum()
    }

    /// `Σ_{k<l} |I_k|·|I_l|`, the number of cross-block pairs.
    pub fn cross_pairs(&self) -> usize {
        let n = self.n;
        (n * n - self.sizes.iter().map(|s| s * s).sum::<usize>()) / 2
    }

    /// `Σ_k |I_k|(|I_k|-1)/2`, the number of intra-block pairs.
    pub fn intra_pairs(&self) -> usize {
        self.sizes.iter().map(|s| s * (s - 1) / 2).sum()
    }

    pub fn is_finest(&self) -> bool {
        self.sizes.iter().all(|&s| s == 1)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(sizes: Vec<usize>) -> Result<Self> {
        Partition::new(sizes.iter().sum(), &sizes)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.sizes
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({:?})", self.sizes)
    }
}

impl fmt::Display for Partition {
    /// One-based set notation, e.g. `{{1,2},{3}}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, block) in self.blocks().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            let items: Vec<String> = block.map(|i| (i + 1).to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_paper_examples() {
        let p = Partition::new(3, &[1, 1, 1]).unwrap();
        assert_eq!(p.to_string(), "{{1},{2},{3}}");
        let p = Partition::new(3, &[2, 1]).unwrap();
        assert_eq!(p.to_string(), "{{1,2},{3}}");
        assert_eq!(p.block(0), 0..2);
        assert_eq!(p.block(1), 2..3);
        assert!(p.same_block(0, 1));
        assert!(!p.same_block(1, 2));
    }

    #[test]
    fn rejects_single_block() {
        assert!(matches!(
            Partition::new(3, &[3]),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn rejects_size_mismatch_and_empty_blocks() {
        assert!(Partition::new(3, &[1, 1]).is_err());
        assert!(Partition::new(3, &[2, 0, 1]).is_err());
        assert!(Partition::new(0, &[]).is_err());
    }

    #[test]
    fn pair_counts() {
        let p = Partition::new(3, &[1, 1, 1]).unwrap();
        assert_eq!(p.cross_pairs(), 3);
        assert_eq!(p.intra_pairs(), 0);
        let p = Partition::new(3, &[2, 1]).unwrap();
        assert_eq!(p.cross_pairs(), 2);
        assert_eq!(p.intra_pairs(), 1);
        let p = Partition::new(4, &[2, 2]).unwrap();
        assert_eq!(p.cross_pairs(), 4);
        assert_eq!(p.intra_pairs(), 2);
    }

    #[test]
    fn json_is_block_sizes() {
        let p = Partition::new(3, &[2, 1]).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[2,1]");
        let q: Partition = serde_json::from_str("[2,1]").unwrap();
        assert_eq!(p, q);
        assert!(serde_json::from_str::<Partition>("[3]").is_err());
    }
}

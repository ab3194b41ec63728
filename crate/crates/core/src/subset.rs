//! Index subsets `K` of `{0, ..., N-1}` and enumeration policies for
//! sweeping over them.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;

use crate::error::{FrameError, Result};
use crate::rng::{substream, Domain};

/// Cutoff up to which the default policy enumerates every subset.
pub const EXHAUSTIVE_LIMIT: usize = 12;
/// Sample size used by the default policy above the exhaustive cutoff.
pub const DEFAULT_SAMPLE: usize = 512;
/// Hard cap on exhaustive enumeration.
const MAX_EXHAUSTIVE_LEN: usize = 24;

/// Subset of frame indices, stored as a membership bit per index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    bits: Vec<bool>,
}

impl SubsetMask {
    /// Empty subset of `{0, ..., len-1}`.
    pub fn empty(len: usize) -> Self {
        assert!(len > 0, "index set must be non-empty");
        Self { bits: vec![false; len] }
    }

    /// Full subset `{0, ..., len-1}`.
    pub fn full(len: usize) -> Self {
        assert!(len > 0, "index set must be non-empty");
        Self { bits: vec![true; len] }
    }

    /// Singleton `{j}`.
    pub fn singleton(len: usize, j: usize) -> Self {
        let mut mask = Self::empty(len);
        assert!(j < len, "index {j} out of range for length {len}");
        mask.bits[j] = true;
        mask
    }

    /// Subset from explicit indices.
    pub fn from_indices(len: usize, indices: &[usize]) -> Result<Self> {
        let mut mask = Self::empty(len);
        for &j in indices {
            if j >= len {
                return Err(FrameError::InvalidParameter(format!(
                    "subset index {j} out of range for length {len}"
                )));
            }
            mask.bits[j] = true;
        }
        Ok(mask)
    }

    /// Subset whose membership bits are the low `len` bits of `word`
    /// (bit `j` selects index `j`). Requires `len <= 64`.
    pub fn from_word(len: usize, word: u64) -> Result<Self> {
        if len == 0 || len > 64 {
            return Err(FrameError::InvalidParameter(format!(
                "word-indexed subsets support lengths 1..=64, got {len}"
            )));
        }
        let bits = (0..len).map(|j| word >> j & 1 == 1).collect();
        Ok(Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// Number of selected indices.
    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.bits.get(j).copied().unwrap_or(false)
    }

    /// Complement within the same index set.
    pub fn complement(&self) -> Self {
        Self { bits: self.bits.iter().map(|b| !b).collect() }
    }

    /// Selected indices in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(j, &b)| b.then_some(j))
            .collect()
    }

    /// Membership iterator over all indices, in order.
    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }
}

impl fmt::Display for SubsetMask {
    /// Bit string with index 0 first, e.g. `0110`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// How a sweep walks the subsets of the index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetPolicy {
    /// Every subset, in word order.
    All,
    /// A seeded sample of the given size, plus the forced subsets: the
    /// empty set, the full set, the singleton `{0}`, and its complement.
    Random(usize),
}

impl SubsetPolicy {
    /// Exhaustive up to `EXHAUSTIVE_LIMIT` indices, sampled above it.
    pub fn default_for(len: usize) -> Self {
        if len <= EXHAUSTIVE_LIMIT {
            SubsetPolicy::All
        } else {
            SubsetPolicy::Random(DEFAULT_SAMPLE)
        }
    }

    /// Materialize the sweep order for an index set of size `len`.
    ///
    /// `All` yields `2^len` subsets; `Random(k)` yields exactly `k + 4`
    /// with the forced subsets first. The sample is drawn from a stream
    /// derived from `seed` only, so the order is reproducible.
    pub fn enumerate(&self, len: usize, seed: u64) -> Result<Vec<SubsetMask>> {
        assert!(len > 0, "index set must be non-empty");
        match *self {
            SubsetPolicy::All => {
                if len > MAX_EXHAUSTIVE_LEN {
                    return Err(FrameError::InvalidParameter(format!(
                        "exhaustive subset sweep over {len} indices is too large; \
                         use a random policy"
                    )));
                }
                (0..(1u64 << len))
                    .map(|word| SubsetMask::from_word(len, word))
                    .collect()
            }
            SubsetPolicy::Random(k) => {
                let mut out = Vec::with_capacity(k + 4);
                out.push(SubsetMask::empty(len));
                out.push(SubsetMask::full(len));
                out.push(SubsetMask::singleton(len, 0));
                out.push(SubsetMask::singleton(len, 0).complement());
                let mut rng = substream(seed, Domain::SubsetSample, 0, 0);
                let mut seen: HashSet<Vec<bool>> = HashSet::new();
                let mut attempts = 0usize;
                let attempt_cap = 64 * k.max(1);
                while out.len() < k + 4 {
                    let bits: Vec<bool> = (0..len).map(|_| rng.random::<bool>()).collect();
                    attempts += 1;
                    // Prefer distinct samples, but never loop forever on
                    // tiny index sets.
                    if seen.insert(bits.clone()) || attempts > attempt_cap {
                        out.push(SubsetMask { bits });
                    }
                }
                Ok(out)
            }
        }
    }
}

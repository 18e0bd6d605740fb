//! Sorted flat k-gram tables.
//!
//! Counts for one order are stored as lexicographically sorted deduplicated
//! grams (a flat id array) with occurrence counts, count prefix sums, and
//! continuation counts (number of distinct left extensions). Lookups are
//! binary searches; the successors of a context form a contiguous range, so
//! context totals are O(1) prefix-sum differences and weighted sampling is
//! a binary search over the prefix sums.

use std::ops::Range;

use crate::parallel;
use crate::textio::TokenId;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct GramTable {
    pub k: usize,
    /// Deduplicated grams, flat, sorted: gram i is keys[i*k..(i+1)*k].
    pub keys: Vec<TokenId>,
    /// Occurrence count per gram.
    pub counts: Vec<u32>,
    /// Prefix sums of counts (len n_grams + 1).
    pub count_prefix: Vec<u64>,
    /// Distinct left extensions per gram; zero until filled by
    /// [`fill_continuations`], and always zero for the top order.
    pub cont: Vec<u32>,
    pub cont_prefix: Vec<u64>,
    /// Prefix counts of grams with cont > 0.
    pub cont_nz_prefix: Vec<u64>,
}

impl GramTable {
    /// Collect and sort all k-grams of `tokens`.
    pub fn build(tokens: &[TokenId], k: usize) -> GramTable {
        assert!(k >= 1 && tokens.len() >= k);
        assert!(tokens.len() < u32::MAX as usize);
        let n_positions = tokens.len() + 1 - k;
        let mut idx: Vec<u32> = (0..n_positions as u32).collect();
        parallel::sort_unstable_by(&mut idx, |&a, &b| {
            let a = a as usize;
            let b = b as usize;
            tokens[a..a + k].cmp(&tokens[b..b + k])
        });
        let mut keys: Vec<TokenId> = Vec::new();
        let mut counts: Vec<u32> = Vec::new();
        for &i in &idx {
            let gram = &tokens[i as usize..i as usize + k];
            let n = keys.len();
            if n >= k && keys[n - k..] == *gram {
                *counts.last_mut().unwrap() += 1;
            } else {
                keys.extend_from_slice(gram);
                counts.push(1);
            }
        }
        let mut table = GramTable {
            k,
            keys,
            counts,
            count_prefix: Vec::new(),
            cont: Vec::new(),
            cont_prefix: Vec::new(),
            cont_nz_prefix: Vec::new(),
        };
        table.cont = vec![0; table.len()];
        table.rebuild_derived();
        table
    }

    /// Reassemble from serialized parts.
    pub fn from_parts(k: usize, keys: Vec<TokenId>, counts: Vec<u32>) -> GramTable {
        assert!(k >= 1 && keys.len() == counts.len() * k);
        let mut table = GramTable {
            k,
            keys,
            counts,
            count_prefix: Vec::new(),
            cont: Vec::new(),
            cont_prefix: Vec::new(),
            cont_nz_prefix: Vec::new(),
        };
        table.cont = vec![0; table.len()];
        table.rebuild_derived();
        table
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn gram(&self, i: usize) -> &[TokenId] {
        &self.keys[i * self.k..(i + 1) * self.k]
    }

    pub fn last_token(&self, i: usize) -> TokenId {
        self.keys[i * self.k + self.k - 1]
    }

    /// Recompute prefix sums after counts or cont changed.
    pub fn rebuild_derived(&mut self) {
        let n = self.len();
        let mut count_prefix = Vec::with_capacity(n + 1);
        let mut cont_prefix = Vec::with_capacity(n + 1);
        let mut cont_nz_prefix = Vec::with_capacity(n + 1);
        let (mut a, mut b, mut c) = (0u64, 0u64, 0u64);
        count_prefix.push(0);
        cont_prefix.push(0);
        cont_nz_prefix.push(0);
        for i in 0..n {
            a += self.counts[i] as u64;
            b += self.cont[i] as u64;
            c += (self.cont[i] > 0) as u64;
            count_prefix.push(a);
            cont_prefix.push(b);
            cont_nz_prefix.push(c);
        }
        self.count_prefix = count_prefix;
        self.cont_prefix = cont_prefix;
        self.cont_nz_prefix = cont_nz_prefix;
    }

    /// Binary search for an exact gram.
    pub fn find(&self, gram: &[TokenId]) -> Option<usize> {
        debug_assert_eq!(gram.len(), self.k);
        let i = self.lower_bound(gram, gram.len());
        (i < self.len() && self.gram(i) == gram).then_some(i)
    }

    /// Contiguous range of grams starting with `prefix` (empty prefix:
    /// the whole table).
    pub fn prefix_range(&self, prefix: &[TokenId]) -> Range<usize> {
        debug_assert!(prefix.len() <= self.k);
        if prefix.is_empty() {
            return 0..self.len();
        }
        let lo = self.lower_bound(prefix, prefix.len());
        let hi = self.upper_bound(prefix, prefix.len());
        lo..hi
    }

    /// Search the final token within a context's range (the range shares a
    /// prefix, so last tokens are sorted).
    pub fn find_in_range(&self, range: Range<usize>, token: TokenId) -> Option<usize> {
        let mut lo = range.start;
        let mut hi = range.end;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.last_token(mid) < token {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        (lo < range.end && self.last_token(lo) == token).then_some(lo)
    }

    pub fn count_sum(&self, range: Range<usize>) -> u64 {
        self.count_prefix[range.end] - self.count_prefix[range.start]
    }

    pub fn cont_sum(&self, range: Range<usize>) -> u64 {
        self.cont_prefix[range.end] - self.cont_prefix[range.start]
    }

    /// Number of grams in the range with cont > 0.
    pub fn cont_nonzero(&self, range: Range<usize>) -> u64 {
        self.cont_nz_prefix[range.end] - self.cont_nz_prefix[range.start]
    }

    /// First index where comparing the first `p` key tokens against
    /// `prefix` is not Less.
    fn lower_bound(&self, prefix: &[TokenId], p: usize) -> usize {
        let mut lo = 0;
        let mut hi = self.len();
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.gram(mid)[..p] < *prefix {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// First index where the first `p` key tokens exceed `prefix`.
    fn upper_bound(&self, prefix: &[TokenId], p: usize) -> usize {
        let mut lo = 0;
        let mut hi = self.len();
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.gram(mid)[..p] <= *prefix {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Count of count-of-counts: N_r for r = 1..=max_r (index 0 unused).
    pub fn count_of_counts(&self, max_r: u32) -> Vec<u64> {
        let mut n_r = vec![0u64; max_r as usize + 1];
        for &c in &self.counts {
            if c >= 1 && c <= max_r {
                n_r[c as usize] += 1;
            }
        }
        n_r
    }
}

/// Fill `lower.cont[g]` with the number of distinct (k+1)-grams in
/// `higher` whose length-k suffix is g.
pub(crate) fn fill_continuations(lower: &mut GramTable, higher: &GramTable) {
    debug_assert_eq!(lower.k + 1, higher.k);
    lower.cont.fill(0);
    for g in 0..higher.len() {
        let suffix = &higher.gram(g)[1..];
        let i = lower
            .find(suffix)
            .expect("suffix of an observed gram is itself observed");
        lower.cont[i] += 1;
    }
    lower.rebuild_derived();
}

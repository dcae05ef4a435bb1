//! Suffix-array index over a family of texts, used to enumerate the distinct
//! factors of each length without materializing them.

use crate::words::Letter;

/// A factor given by its first occurrence: `texts[text][start..start + len]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FactorRef {
    pub text: u32,
    pub start: u32,
}

/// Suffix array with LCP over texts joined by unique separators.
pub(crate) struct FactorIndex {
    sa: Vec<u32>,
    lcp: Vec<u32>,
    /// For each position of the joined string: owning text and letters left in it.
    owner: Vec<u32>,
    avail: Vec<u32>,
    offsets: Vec<usize>,
}

impl FactorIndex {
    pub(crate) fn build(texts: &[Vec<Letter>]) -> Self {
        let ntexts = texts.len();
        let total: usize = texts.iter().map(|t| t.len() + 1).sum();
        let mut joined = Vec::with_capacity(total);
        let mut owner = Vec::with_capacity(total);
        let mut avail = Vec::with_capacity(total);
        let mut offsets = Vec::with_capacity(ntexts);
        for (t, text) in texts.iter().enumerate() {
            offsets.push(joined.len());
            for (i, &a) in text.iter().enumerate() {
                joined.push(a + ntexts);
                owner.push(t as u32);
                avail.push((text.len() - i) as u32);
            }
            joined.push(t);
            owner.push(t as u32);
            avail.push(0);
        }
        let sa = suffix_array(&joined);
        let lcp = kasai(&joined, &sa);
        FactorIndex { sa, lcp, owner, avail, offsets }
    }

    fn factor_ref(&self, pos: u32) -> FactorRef {
        let t = self.owner[pos as usize];
        FactorRef { text: t, start: (pos as usize - self.offsets[t as usize]) as u32 }
    }

    /// Visits every distinct factor of length `1..=cap` exactly once, as
    /// `(length, first occurrence in suffix order, OR of the tags of all texts
    /// containing it)`. Within one length, factors arrive in increasing
    /// lexicographic order.
    pub(crate) fn for_each_class<F>(&self, cap: usize, tags: &[u64], mut visit: F)
    where
        F: FnMut(usize, FactorRef, u64),
    {
        let n = self.sa.len();
        if n == 0 || cap == 0 {
            return;
        }
        // Bottom-up traversal of the lcp-interval tree: (lcp, left bound, tag mask).
        let mut stack: Vec<(usize, usize, u64)> = vec![(0, 0, 0)];
        for i in 1..=n {
            let leaf = self.sa[i - 1];
            let left = self.lcp[i - 1] as usize;
            let right = if i < n { self.lcp[i] as usize } else { 0 };
            let leaf_tag = tags[self.owner[leaf as usize] as usize];
            let top = (self.avail[leaf as usize] as usize).min(cap);
            for len in left.max(right) + 1..=top {
                visit(len, self.factor_ref(leaf), leaf_tag);
            }
            let mut lb = i - 1;
            let mut carry = leaf_tag;
            while right < stack.last().expect("root").0 {
                let (depth, start, mask) = stack.pop().expect("interval");
                let mask = mask | carry;
                let parent = right.max(stack.last().expect("root").0);
                let rep = self.factor_ref(self.sa[start]);
                for len in parent + 1..=depth.min(cap) {
                    visit(len, rep, mask);
                }
                carry = mask;
                lb = start;
            }
            let last = stack.last_mut().expect("root");
            if right > last.0 {
                stack.push((right, lb, carry));
            } else {
                last.2 |= carry;
            }
        }
    }

    /// Number of distinct non-empty factors of length at most `cap`.
    pub(crate) fn count_distinct(&self, cap: usize) -> u64 {
        let mut total = 0u64;
        for j in 0..self.sa.len() {
            let avail = (self.avail[self.sa[j] as usize] as usize).min(cap);
            let shared = (self.lcp[j] as usize).min(cap);
            total += avail.saturating_sub(shared) as u64;
        }
        total
    }
}

/// Prefix-doubling suffix array with radix sorting, `O(n log n)`.
fn suffix_array(s: &[usize]) -> Vec<u32> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    let alpha = s.iter().copied().max().unwrap_or(0) + 1;
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut rank: Vec<u32> = s.iter().map(|&c| c as u32).collect();
    let mut tmp = vec![0u32; n];
    let mut count = vec![0usize; alpha.max(n) + 1];
    // Initial counting sort by first symbol.
    for &c in s {
        count[c] += 1;
    }
    let mut sum = 0;
    for c in count.iter_mut().take(alpha) {
        let here = *c;
        *c = sum;
        sum += here;
    }
    for i in 0..n {
        let c = s[i];
        sa[count[c]] = i as u32;
        count[c] += 1;
    }
    let mut classes = {
        let mut k = 0u32;
        tmp[sa[0] as usize] = 0;
        for j in 1..n {
            if s[sa[j] as usize] != s[sa[j - 1] as usize] {
                k += 1;
            }
            tmp[sa[j] as usize] = k;
        }
        std::mem::swap(&mut rank, &mut tmp);
        k as usize + 1
    };
    let mut second = vec![0u32; n];
    let mut h = 1;
    while classes < n {
        // Order by second key: suffixes without a second half come first.
        let mut p = 0;
        for i in n - h..n {
            second[p] = i as u32;
            p += 1;
        }
        for &j in &sa {
            if j as usize >= h {
                second[p] = j - h as u32;
                p += 1;
            }
        }
        // Stable counting sort by first key.
        count[..classes + 1].iter_mut().for_each(|c| *c = 0);
        for &r in &rank {
            count[r as usize + 1] += 1;
        }
        for c in 1..=classes {
            count[c] += count[c - 1];
        }
        for &j in &second {
            let r = rank[j as usize] as usize;
            sa[count[r]] = j;
            count[r] += 1;
        }
        let key = |i: usize, rank: &[u32]| (rank[i], if i + h < n { rank[i + h] as i64 } else { -1 });
        tmp[sa[0] as usize] = 0;
        let mut k = 0u32;
        for j in 1..n {
            if key(sa[j] as usize, &rank) != key(sa[j - 1] as usize, &rank) {
                k += 1;
            }
            tmp[sa[j] as usize] = k;
        }
        std::mem::swap(&mut rank, &mut tmp);
        classes = k as usize + 1;
        h *= 2;
    }
    sa
}

/// `lcp[j]` is the longest common prefix of suffixes `sa[j−1]` and `sa[j]`; `lcp[0] = 0`.
fn kasai(s: &[usize], sa: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut rank = vec![0usize; n];
    for (j, &i) in sa.iter().enumerate() {
        rank[i as usize] = j;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] > 0 {
            let j = sa[rank[i] - 1] as usize;
            while i + h < n && j + h < n && s[i + h] == s[j + h] {
                h += 1;
            }
            lcp[rank[i]] = h as u32;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

//! Recursive construction of overlapping training subsamples.
//!
//! A working set of sample indices is split into a head block and three
//! equal quarter blocks. Three recursive calls each keep the head as the
//! new working set and push two of the three quarters (plus everything
//! carried so far) into the tail that every deeper subsample must contain.
//! The recursion bottoms out once the working set has at most three
//! elements, emitting one subsample per leaf. The family is ordered by the
//! literal left-to-right order of the recursion.
//!
//! Everything here works on index sequences into a master sample, never on
//! the data itself, so families over a few thousand points stay cheap and
//! equality checks are exact.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubsampleError {
    #[error("index sequence must be strictly increasing (offending position {position})")]
    NotStrictlyIncreasing { position: usize },
    #[error("working set and tail must be disjoint (shared index {index})")]
    Overlap { index: usize },
    #[error("working set has {len} elements; splitting requires at least 4")]
    TooShortToSplit { len: usize },
    #[error("index {value} out of range for {what} (limit {limit})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        limit: usize,
    },
}

/// A strictly increasing sequence of positions into a master sample.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IndexSeq(Vec<usize>);

impl IndexSeq {
    /// Validates strict ascending order; duplicates are rejected.
    pub fn new(indices: Vec<usize>) -> Result<Self, SubsampleError> {
        for (pos, pair) in indices.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(SubsampleError::NotStrictlyIncreasing { position: pos + 1 });
            }
        }
        Ok(IndexSeq(indices))
    }

    pub fn empty() -> Self {
        IndexSeq(Vec::new())
    }

    /// The full index range `0..n`.
    pub fn range(n: usize) -> Self {
        IndexSeq((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    /// True if every element of `self` also occurs in `other`.
    pub fn is_subset_of(&self, other: &IndexSeq) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    fn slice(&self, start: usize, end: usize) -> IndexSeq {
        IndexSeq(self.0[start..end].to_vec())
    }

    /// Sorted merge of two disjoint sequences; errors on any shared index.
    pub fn merge_disjoint(&self, other: &IndexSeq) -> Result<IndexSeq, SubsampleError> {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    return Err(SubsampleError::Overlap { index: a[i] });
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(IndexSeq(out))
    }
}

impl<'a> IntoIterator for &'a IndexSeq {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// The ordered family of subsamples produced by one recursive build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsampleFamily {
    /// One past the largest index mentioned anywhere in the family.
    pub master_len: usize,
    /// The carried tail every subsample must contain.
    pub tail: IndexSeq,
    /// Subsamples in recursion order.
    pub subsamples: Vec<IndexSeq>,
}

impl SubsampleFamily {
    pub fn len(&self) -> usize {
        self.subsamples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsamples.is_empty()
    }
}

/// Splits a working set into the head block and three equal quarters.
///
/// The head keeps the first `|s| - 3*floor(|s|/4)` elements; the quarters
/// take `floor(|s|/4)` each, in order. Concatenating the four pieces gives
/// back `s`.
pub fn split_working_set(
    s: &IndexSeq,
) -> Result<(IndexSeq, IndexSeq, IndexSeq, IndexSeq), SubsampleError> {
    let len = s.len();
    if len < 4 {
        return Err(SubsampleError::TooShortToSplit { len });
    }
    let quarter = len / 4;
    let head = len - 3 * quarter;
    Ok((
        s.slice(0, head),
        s.slice(head, head + quarter),
        s.slice(head + quarter, head + 2 * quarter),
        s.slice(head + 2 * quarter, len),
    ))
}

/// Number of subsamples the recursion emits for a working set of size `m`.
///
/// Follows the recurrence `count(m) = 3 * count(m - 3*floor(m/4))` with
/// `count(m) = 1` for `m <= 3`; equals `3^l` when `m = 4^l`. Sublinear in
/// `m` for every `m >= 27`.
pub fn subsample_count(mut m: usize) -> usize {
    let mut count = 1usize;
    while m > 3 {
        count *= 3;
        m -= 3 * (m / 4);
    }
    count
}

/// Builds the full ordered subsample family for working set `s` and tail `t`.
///
/// Terminal case (`|s| <= 3`) emits the single subsample `s ∪ t`. Otherwise
/// the three recursive calls run in order, each excluding a different
/// quarter from the tail it passes down:
/// head with quarters 2+3, head with quarters 1+3, head with quarters 1+2.
pub fn build_subsamples(s: &IndexSeq, t: &IndexSeq) -> Result<SubsampleFamily, SubsampleError> {
    // Surfaces overlap violations before any recursion.
    let all = s.merge_disjoint(t)?;
    let master_len = all.as_slice().last().map_or(0, |&i| i + 1);
    let mut subsamples = Vec::with_capacity(subsample_count(s.len()));
    build_recursive(s, t, &mut subsamples)?;
    Ok(SubsampleFamily {
        master_len,
        tail: t.clone(),
        subsamples,
    })
}

fn build_recursive(
    s: &IndexSeq,
    t: &IndexSeq,
    out: &mut Vec<IndexSeq>,
) -> Result<(), SubsampleError> {
    if s.len() <= 3 {
        out.push(s.merge_disjoint(t)?);
        return Ok(());
    }
    let (head, q1, q2, q3) = split_working_set(s)?;
    let tail_without = |a: &IndexSeq, b: &IndexSeq| -> Result<IndexSeq, SubsampleError> {
        a.merge_disjoint(b)?.merge_disjoint(t)
    };
    build_recursive(&head, &tail_without(&q2, &q3)?, out)?;
    build_recursive(&head, &tail_without(&q1, &q3)?, out)?;
    build_recursive(&head, &tail_without(&q1, &q2)?, out)?;
    Ok(())
}

/// Closed-form membership test for the power-of-4 case with an empty tail.
///
/// Over master length `4^level` the family has `3^level` subsamples. Index
/// `0` belongs to every subsample. For `i > 0`, write `i` in base 4 and the
/// subsample id `j` in base 3, both with `level` digits; let `t` be the
/// most significant position where `i`'s digit `i_t` is nonzero. Then `i`
/// belongs to subsample `j` iff `i_t - 1 != j_t`. Digit positions count
/// from the least significant end, so the top digit of `j` names the
/// outermost recursion branch.
pub fn direct_member(i: usize, j: usize, level: u32) -> Result<bool, SubsampleError> {
    let m = 4usize.pow(level);
    let n = 3usize.pow(level);
    if i >= m {
        return Err(SubsampleError::OutOfRange {
            what: "sample index",
            value: i,
            limit: m,
        });
    }
    if j >= n {
        return Err(SubsampleError::OutOfRange {
            what: "subsample id",
            value: j,
            limit: n,
        });
    }
    if i == 0 {
        return Ok(true);
    }
    let top = (0..level).rev().find(|t| (i >> (2 * t)) & 3 != 0).unwrap();
    let i_digit = (i >> (2 * top)) & 3;
    let j_digit = (j / 3usize.pow(top)) % 3;
    Ok(i_digit - 1 != j_digit)
}

/// Materializes the whole family from [`direct_member`] alone.
///
/// Must agree, element for element and in order, with
/// `build_subsamples(range(4^level), empty)`.
pub fn enumerate_direct(level: u32) -> Result<SubsampleFamily, SubsampleError> {
    let m = 4usize.pow(level);
    let n = 3usize.pow(level);
    let mut subsamples = Vec::with_capacity(n);
    for j in 0..n {
        let mut members = Vec::new();
        for i in 0..m {
            if direct_member(i, j, level)? {
                members.push(i);
            }
        }
        subsamples.push(IndexSeq(members));
    }
    Ok(SubsampleFamily {
        master_len: m,
        tail: IndexSeq::empty(),
        subsamples,
    })
}

//! Meet-in-the-middle subset-sum join.
//!
//! Each half of the free indices is expanded into its full list of subset sums,
//! produced already sorted by repeatedly merging `L` with `L + w`. The sorted
//! list stands in for the associative map keyed by exact sum: equal keys are
//! adjacent, so a single two-pointer pass groups and joins both halves.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;

/// An exact subset-sum key. `u64` is used whenever the whole row fits in it.
pub(crate) trait SumKey: Ord + Clone + Send + Sync {
    fn zero() -> Self;
    fn plus(&self, w: &Self) -> Self;
    /// Rough in-memory size, for budget estimates.
    fn approx_bytes(bits: u64) -> u64;
}

impl SumKey for u64 {
    fn zero() -> Self {
        0
    }
    fn plus(&self, w: &Self) -> Self {
        self + w
    }
    fn approx_bytes(_bits: u64) -> u64 {
        8
    }
}

impl SumKey for BigUint {
    fn zero() -> Self {
        <BigUint as Zero>::zero()
    }
    fn plus(&self, w: &Self) -> Self {
        self + w
    }
    fn approx_bytes(bits: u64) -> u64 {
        24 + bits.div_ceil(64) * 8
    }
}

/// All `2^k` subset sums of `weights`, ascending.
pub(crate) fn sorted_sums<K: SumKey>(weights: &[K]) -> Vec<K> {
    let mut cur = vec![K::zero()];
    for w in weights {
        let mut next = Vec::with_capacity(cur.len() * 2);
        let (mut i, mut j) = (0, 0);
        let mut shifted = cur.first().map(|c| c.plus(w));
        while i < cur.len() {
            let s = shifted.as_ref().unwrap();
            if cur[i] <= *s {
                next.push(cur[i].clone());
                i += 1;
            } else {
                next.push(shifted.take().unwrap());
                j += 1;
                shifted = Some(cur[j].plus(w));
            }
        }
        while j < cur.len() {
            next.push(cur[j].plus(w));
            j += 1;
        }
        cur = next;
    }
    cur
}

/// Subset sums paired with the chosen items, as an OR of `tags[j]`.
pub(crate) fn sorted_sums_tagged<K: SumKey>(weights: &[K], tags: &[u64]) -> Vec<(K, u64)> {
    debug_assert_eq!(weights.len(), tags.len());
    let mut cur = vec![(K::zero(), 0u64)];
    for (w, &tag) in weights.iter().zip(tags) {
        let mut next = Vec::with_capacity(cur.len() * 2);
        let lift = |e: &(K, u64)| (e.0.plus(w), e.1 | tag);
        let (mut i, mut j) = (0, 0);
        let mut shifted = lift(&cur[0]);
        while i < cur.len() {
            if cur[i].0 <= shifted.0 {
                next.push(cur[i].clone());
                i += 1;
            } else {
                next.push(shifted.clone());
                j += 1;
                shifted = lift(&cur[j]);
            }
        }
        while j < cur.len() {
            next.push(lift(&cur[j]));
            j += 1;
        }
        cur = next;
    }
    cur
}

/// Walks both ascending lists and reports each pair of equal-key runs whose
/// keys add up to `target`, as `(left_run, right_run)` index ranges.
fn join_runs<T, K: SumKey>(
    left: &[T],
    right: &[T],
    key: impl Fn(&T) -> &K,
    target: &K,
    mut on_match: impl FnMut(std::ops::Range<usize>, std::ops::Range<usize>),
) {
    let mut i = 0;
    let mut j = right.len();
    while i < left.len() && j > 0 {
        let a = key(&left[i]);
        let mut i_end = i + 1;
        while i_end < left.len() && key(&left[i_end]) == a {
            i_end += 1;
        }
        while j > 0 && a.plus(key(&right[j - 1])) > *target {
            j -= 1;
        }
        if j == 0 {
            break;
        }
        let b = key(&right[j - 1]);
        if a.plus(b).cmp(target) == Ordering::Equal {
            let mut j_start = j - 1;
            while j_start > 0 && key(&right[j_start - 1]) == b {
                j_start -= 1;
            }
            on_match(i..i_end, j_start..j);
            j = j_start;
        }
        i = i_end;
    }
}

/// Number of subsets of `weights` summing to `target`.
pub(crate) fn count_subsets<K: SumKey>(weights: &[K], target: &K) -> u64 {
    let (lw, rw) = split(weights);
    let left = sorted_sums(lw);
    let right = sorted_sums(rw);
    let mut total = 0u64;
    join_runs(&left, &right, |k| k, target, |l, r| {
        total += (l.len() * r.len()) as u64;
    });
    total
}

/// Every subset summing to `target`, as the OR of the chosen tags.
pub(crate) fn matching_subsets<K: SumKey>(
    weights: &[K],
    tags: &[u64],
    target: &K,
    mut emit: impl FnMut(u64),
) {
    let mid = split_point(weights.len());
    let left = sorted_sums_tagged(&weights[..mid], &tags[..mid]);
    let right = sorted_sums_tagged(&weights[mid..], &tags[mid..]);
    join_runs(&left, &right, |e| &e.0, target, |l, r| {
        for a in &left[l] {
            for b in &right[r.clone()] {
                emit(a.1 | b.1);
            }
        }
    });
}

/// The larger half goes left; the smaller half is the one grouped into runs.
fn split_point(len: usize) -> usize {
    len.div_ceil(2)
}

fn split<K>(weights: &[K]) -> (&[K], &[K]) {
    weights.split_at(split_point(weights.len()))
}

/// Entries held at once by the join over `len` free weights (both halves).
pub(crate) fn table_entries(len: usize) -> u128 {
    let mid = split_point(len);
    (1u128 << mid) + (1u128 << (len - mid))
}

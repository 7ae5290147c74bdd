//! Exact order statistics under the `(key, id)` lexicographic order.

use std::cmp::Ordering;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyedItem {
    pub key: f64,
    pub id: usize,
}

impl KeyedItem {
    pub fn new(key: f64, id: usize) -> Self {
        KeyedItem { key, id }
    }
}

/// Total order on finite keys, ties broken by id.
pub fn cmp_items(a: &KeyedItem, b: &KeyedItem) -> Ordering {
    a.key
        .partial_cmp(&b.key)
        .unwrap_or(Ordering::Equal)
        .then(a.id.cmp(&b.id))
}

/// Rearranges `items` so that position `k` holds the rank-`k` item, everything
/// before it compares lower and everything after compares greater.
pub fn select_in_place(items: &mut [KeyedItem], k: usize) -> Result<KeyedItem> {
    if items.is_empty() {
        return Err(Error::Empty);
    }
    if k >= items.len() {
        return Err(Error::OutOfRange {
            index: k,
            len: items.len(),
        });
    }
    let (mut lo, mut hi) = (0usize, items.len() - 1);
    while lo < hi {
        let p = partition(items, lo, hi);
        match k.cmp(&p) {
            Ordering::Equal => return Ok(items[k]),
            Ordering::Less => hi = p - 1,
            Ordering::Greater => lo = p + 1,
        }
    }
    Ok(items[k])
}

/// Lomuto partition of `items[lo..=hi]` around a median-of-three pivot.
/// Returns the pivot's final index.
fn partition(items: &mut [KeyedItem], lo: usize, hi: usize) -> usize {
    let mid = lo + (hi - lo) / 2;
    if cmp_items(&items[mid], &items[lo]) == Ordering::Less {
        items.swap(mid, lo);
    }
    if cmp_items(&items[hi], &items[lo]) == Ordering::Less {
        items.swap(hi, lo);
    }
    if cmp_items(&items[hi], &items[mid]) == Ordering::Less {
        items.swap(hi, mid);
    }
    // median now sits at mid; park it at hi
    items.swap(mid, hi);
    let pivot = items[hi];
    let mut store = lo;
    for i in lo..hi {
        if cmp_items(&items[i], &pivot) == Ordering::Less {
            items.swap(i, store);
            store += 1;
        }
    }
    items.swap(store, hi);
    store
}

/// Item of rank `k` (0-based) under `(key, id)` order.
pub fn kth_smallest(items: &[KeyedItem], k: usize) -> Result<KeyedItem> {
    let mut work = items.to_vec();
    select_in_place(&mut work, k)
}

/// Median split: the `⌈N/2⌉` lowest items and the `⌊N/2⌋` highest.
#[derive(Debug, Clone, PartialEq)]
pub struct MedianSplit {
    pub median: KeyedItem,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

pub fn split_at_median(items: &[KeyedItem]) -> Result<MedianSplit> {
    if items.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: items.len(),
        });
    }
    let mut work = items.to_vec();
    let k = items.len().div_ceil(2) - 1;
    let median = select_in_place(&mut work, k)?;
    let left = work[..=k].iter().map(|it| it.id).collect();
    let right = work[k + 1..].iter().map(|it| it.id).collect();
    Ok(MedianSplit {
        median,
        left,
        right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn items(keys: &[f64]) -> Vec<KeyedItem> {
        keys.iter()
            .enumerate()
            .map(|(i, &k)| KeyedItem::new(k, i))
            .collect()
    }

    fn sorted(v: &[KeyedItem]) -> Vec<KeyedItem> {
        let mut s = v.to_vec();
        s.sort_by(cmp_items);
        s
    }

    #[test]
    fn kth_examples() {
        assert_eq!(
            kth_smallest(&items(&[3., 1., 4., 1., 5.]), 2).unwrap().key,
            3.0
        );
        assert_eq!(kth_smallest(&items(&[7.]), 0).unwrap().key, 7.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v: Vec<_> = (0..1000).map(|i| KeyedItem::new(rng.gen(), i)).collect();
        assert_eq!(kth_smallest(&v, 499).unwrap(), sorted(&v)[499]);
    }

    #[test]
    fn kth_errors() {
        assert!(matches!(kth_smallest(&[], 0), Err(Error::Empty)));
        assert!(matches!(
            kth_smallest(&items(&[1., 2.]), 2),
            Err(Error::OutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn split_examples() {
        let s = split_at_median(&items(&[1., 1., 1., 1.])).unwrap();
        assert_eq!((s.left.clone(), s.right.clone()), (vec![0, 1], vec![2, 3]));

        let mut s = split_at_median(&items(&[5., 2., 9.])).unwrap();
        s.left.sort();
        assert_eq!(s.left, vec![0, 1]);
        assert_eq!(s.right, vec![2]);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v: Vec<_> = (0..101).map(|i| KeyedItem::new(rng.gen(), i)).collect();
        let s = split_at_median(&v).unwrap();
        assert_eq!((s.left.len(), s.right.len()), (51, 50));
        let order = sorted(&v);
        let mut left = s.left;
        left.sort();
        let mut expect: Vec<_> = order[..51].iter().map(|it| it.id).collect();
        expect.sort();
        assert_eq!(left, expect);

        assert!(matches!(
            split_at_median(&items(&[1.])),
            Err(Error::TooFew { .. })
        ));
    }

    #[test]
    fn large_random_against_sort() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        // few distinct keys to stress the id tie-break
        let v: Vec<_> = (0..100_000)
            .map(|i| KeyedItem::new(rng.gen_range(0..50) as f64, i))
            .collect();
        let order = sorted(&v);
        for k in [0, 1, 777, 50_000, 99_998, 99_999] {
            assert_eq!(kth_smallest(&v, k).unwrap(), order[k]);
        }
    }

    proptest! {
        #[test]
        fn kth_matches_sort(keys in prop::collection::vec(-5i8..5, 1..200), seed in any::<u64>()) {
            let mut v = items(&keys.iter().map(|&k| k as f64).collect::<Vec<_>>());
            let order = sorted(&v);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // input order must not matter
            for i in (1..v.len()).rev() {
                v.swap(i, rng.gen_range(0..=i));
            }
            for (k, want) in order.iter().enumerate() {
                prop_assert_eq!(kth_smallest(&v, k).unwrap(), *want);
            }
            if v.len() >= 2 {
                let s = split_at_median(&v).unwrap();
                prop_assert_eq!(s.left.len(), v.len().div_ceil(2));
                prop_assert_eq!(s.right.len(), v.len() / 2);
                let lmax = s.left.iter().map(|&id| v.iter().find(|it| it.id == id).unwrap())
                    .max_by(|a, b| cmp_items(a, b)).unwrap();
                prop_assert_eq!(*lmax, s.median);
                for id in &s.right {
                    let it = v.iter().find(|it| it.id == *id).unwrap();
                    prop_assert_eq!(cmp_items(it, &s.median), Ordering::Greater);
                }
            }
        }
    }
}

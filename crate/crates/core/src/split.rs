//! Seeded train/test partitioning shared by the taggers and classifiers.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Shuffles `items` with `seed` and returns `(train, test)` where `train`
/// holds `round(fraction * n)` items, clamped so both sides are non-empty
/// whenever `n >= 2`.
pub fn split_train_test<T: Clone>(items: &[T], fraction: f64, seed: u64) -> (Vec<T>, Vec<T>) {
    let n = items.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut n_train = (fraction * n as f64).round() as usize;
    if n >= 2 {
        n_train = n_train.clamp(1, n - 1);
    } else {
        n_train = n;
    }
    let train = order[..n_train].iter().map(|&i| items[i].clone()).collect();
    let test = order[n_train..].iter().map(|&i| items[i].clone()).collect();
    (train, test)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn split_of_285_videos() {
        let ids: Vec<usize> = (0..285).collect();
        let (train, test) = split_train_test(&ids, 0.8, 1);
        assert_eq!((train.len(), test.len()), (228, 57));
    }

    proptest! {
        #[test]
        fn split_is_partition(n in 2usize..200, seed in any::<u64>()) {
            let ids: Vec<usize> = (0..n).collect();
            let (train, test) = split_train_test(&ids, 0.8, seed);
            let a: HashSet<_> = train.iter().collect();
            let b: HashSet<_> = test.iter().collect();
            prop_assert!(a.is_disjoint(&b));
            prop_assert_eq!(a.len() + b.len(), n);
            prop_assert!((train.len() as f64 - 0.8 * n as f64).abs() <= 1.0);
            prop_assert_eq!(split_train_test(&ids, 0.8, seed), (train, test));
        }
    }
}

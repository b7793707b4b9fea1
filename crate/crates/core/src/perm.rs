//! Ranking of temporal order patterns.
//!
//! The order pattern of a tuple `k` replaces each entry by its rank among
//! all entries. Patterns are numbered lexicographically from 1, so the
//! increasing pattern `(1, 2, .., M)` has rank 1 and the decreasing one has
//! rank `M!`. Ranks are computed through the Lehmer code: digit `i` counts
//! the later entries smaller than entry `i` and carries weight `(M - 1 - i)!`.

use alloc::vec::Vec;

use crate::{Error, Result};

/// `n!`, exact. Panics on overflow, which starts at `n = 21`.
pub fn factorial(n: usize) -> usize {
    (1..=n).fold(1usize, |acc, i| acc.checked_mul(i).expect("factorial overflow"))
}

/// Lexicographic rank in `[1, M!]` of the order pattern of `k`.
///
/// Only the relative order of the entries matters. Runs in `O(M^2)`.
pub fn perm_rank<T: Ord>(k: &[T]) -> Result<usize> {
    let m = k.len();
    if m == 0 {
        return Err(Error::InvalidConfig("cannot rank an empty assignment".into()));
    }
    let mut rank = 0usize;
    let mut weight = 1usize;
    // Walk right to left so the factorial weight can be built incrementally.
    for i in (0..m).rev() {
        let mut smaller_after = 0usize;
        for j in i + 1..m {
            match k[j].cmp(&k[i]) {
                core::cmp::Ordering::Less => smaller_after += 1,
                core::cmp::Ordering::Equal => return Err(Error::TiedLatentPositions),
                core::cmp::Ordering::Greater => {}
            }
        }
        rank += smaller_after * weight;
        weight *= m - i;
    }
    Ok(rank + 1)
}

/// Inverse of [`perm_rank`]: the order pattern with the given 1-based rank,
/// as 0-based values (`pattern[i]` is the position of entry `i` in sorted
/// order).
pub fn pattern_from_rank(m: usize, rank: usize) -> Result<Vec<usize>> {
    let total = factorial(m);
    if m == 0 || rank == 0 || rank > total {
        return Err(Error::InvalidConfig(alloc::format!("rank {rank} outside [1, {m}!]")));
    }
    let mut rest = rank - 1;
    let mut pool: Vec<usize> = (0..m).collect();
    let mut pattern = Vec::with_capacity(m);
    for i in 0..m {
        let weight = factorial(m - 1 - i);
        let digit = rest / weight;
        rest %= weight;
        pattern.push(pool.remove(digit));
    }
    Ok(pattern)
}

/// Inverse permutation: for a pattern mapping entry -> sorted position,
/// returns sorted position -> entry.
pub(crate) fn invert(pattern: &[usize]) -> Vec<usize> {
    let mut inv = alloc::vec![0; pattern.len()];
    for (i, &p) in pattern.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    // Independent oracle: list every permutation of 0..m in lexicographic
    // order by repeated next-permutation.
    fn all_patterns_lex(m: usize) -> Vec<Vec<usize>> {
        let mut cur: Vec<usize> = (0..m).collect();
        let mut out = vec![cur.clone()];
        while let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) {
            let j = (i + 1..m).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
            out.push(cur.clone());
        }
        out
    }

    #[test]
    fn four_event_examples() {
        // k1 < k2 < k3 < k4
        let (k1, k2, k3, k4) = (3, 8, 20, 41);
        assert_eq!(perm_rank(&[k1, k2, k3, k4]).unwrap(), 1);
        assert_eq!(perm_rank(&[k1, k2, k4, k3]).unwrap(), 2);
        assert_eq!(perm_rank(&[k1, k3, k2, k4]).unwrap(), 3);
    }

    #[test]
    fn single_and_reversed() {
        assert_eq!(perm_rank(&[7]).unwrap(), 1);
        assert_eq!(perm_rank(&[9, 5, 2]).unwrap(), 6);
    }

    #[test]
    fn duplicates_are_rejected() {
        assert_eq!(perm_rank(&[4, 1, 4]), Err(Error::TiedLatentPositions));
        assert!(perm_rank::<usize>(&[]).is_err());
    }

    #[test]
    fn matches_enumeration_oracle() {
        for m in 1..=6 {
            let patterns = all_patterns_lex(m);
            assert_eq!(patterns.len(), factorial(m));
            for (idx, p) in patterns.iter().enumerate() {
                assert_eq!(perm_rank(p).unwrap(), idx + 1, "m={m} pattern={p:?}");
                assert_eq!(&pattern_from_rank(m, idx + 1).unwrap(), p);
            }
        }
    }

    #[test]
    fn bijection_on_fixed_value_set() {
        for m in 1..=5 {
            let mut seen = vec![false; factorial(m)];
            for p in all_patterns_lex(m) {
                let k: Vec<usize> = p.iter().map(|&v| 10 * (v + 1)).collect();
                let r = perm_rank(&k).unwrap();
                assert!(!seen[r - 1]);
                seen[r - 1] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn invert_roundtrip() {
        let p = vec![2, 0, 3, 1];
        let inv = invert(&p);
        assert_eq!(inv, vec![1, 3, 0, 2]);
        assert_eq!(invert(&inv), p);
    }

    proptest! {
        #[test]
        fn rank_depends_only_on_order(
            k in proptest::collection::hash_set(0i64..1000, 1..7),
            a in 1i64..50,
            b in -500i64..500,
        ) {
            let k: Vec<i64> = k.into_iter().collect();
            let mapped: Vec<i64> = k.iter().map(|&x| a * x + b).collect();
            prop_assert_eq!(perm_rank(&k).unwrap(), perm_rank(&mapped).unwrap());
        }
    }
}

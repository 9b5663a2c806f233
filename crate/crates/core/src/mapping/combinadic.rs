//! Lexicographic ranking of k-subsets, used to turn index bits into an
//! activation pattern for the classical sub-block mapper.

use super::MappingError;

/// Binomial coefficient `C(n, k)`; `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at each step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `floor(log2(C(n, k)))`, the number of bits an activation pattern can carry.
pub fn index_bits(n: usize, k: usize) -> Result<u32, MappingError> {
    match binomial(n, k) {
        Some(0) | None => Err(MappingError::InvalidGroup { n, k }),
        Some(c) => Ok(127 - c.leading_zeros()),
    }
}

/// Maps `rank` to the `rank`-th k-subset of `{0..n-1}` in ascending
/// lexicographic order. Only ranks below `2^index_bits(n, k)` are legal.
pub fn unrank(rank: u64, n: usize, k: usize) -> Result<Vec<usize>, MappingError> {
    let p1 = index_bits(n, k)?;
    if p1 < 64 && rank >= (1u64 << p1) {
        return Err(MappingError::RankOutOfRange { rank, n, k });
    }
    let mut remaining = rank as u128;
    let mut subset = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let mut c = next;
        loop {
            // subsets whose `slot`-th element is `c`
            let count = binomial(n - c - 1, k - slot - 1).expect("fits since C(n,k) fits");
            if remaining < count {
                break;
            }
            remaining -= count;
            c += 1;
        }
        subset.push(c);
        next = c + 1;
    }
    Ok(subset)
}

/// Inverse of [`unrank`]. `subset` must be strictly ascending.
pub fn rank(subset: &[usize], n: usize) -> Result<u64, MappingError> {
    let k = subset.len();
    if subset.windows(2).any(|w| w[0] >= w[1]) || subset.last().is_some_and(|&x| x >= n) {
        return Err(MappingError::InvalidSubset);
    }
    let mut r: u128 = 0;
    let mut next = 0;
    for (slot, &c) in subset.iter().enumerate() {
        for skipped in next..c {
            r += binomial(n - skipped - 1, k - slot - 1)
                .ok_or(MappingError::InvalidGroup { n, k })?;
        }
        next = c + 1;
    }
    u64::try_from(r).map_err(|_| MappingError::InvalidGroup { n, k })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All k-subsets of 0..n in lexicographic order, by brute force.
    fn enumerate(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k {
                out.push((0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), Some(6));
        assert_eq!(binomial(64, 32), Some(1_832_624_140_942_590_534));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(index_bits(4, 2).unwrap(), 2);
        assert_eq!(index_bits(8, 4).unwrap(), 6);
    }

    #[test]
    fn unrank_examples() {
        assert_eq!(unrank(0, 4, 2).unwrap(), vec![0, 1]);
        assert_eq!(unrank(3, 4, 2).unwrap(), vec![1, 2]);
        for r in 0..4 {
            assert_eq!(rank(&unrank(r, 4, 2).unwrap(), 4).unwrap(), r);
        }
        assert!(matches!(
            unrank(4, 4, 2),
            Err(MappingError::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn matches_brute_force_order() {
        for n in 1..=8 {
            for k in 1..=n {
                let all = enumerate(n, k);
                let legal = 1usize << index_bits(n, k).unwrap();
                for (r, subset) in all.iter().enumerate() {
                    assert_eq!(rank(subset, n).unwrap(), r as u64);
                    if r < legal {
                        assert_eq!(&unrank(r as u64, n, k).unwrap(), subset);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_unsorted_subset() {
        assert!(rank(&[2, 1], 4).is_err());
        assert!(rank(&[1, 4], 4).is_err());
    }
}

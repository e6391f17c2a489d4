//! Enumeration of the set partitions that drive every summation formula.
//!
//! All sums in this crate run over ordered bipartitions `x̄ ⇒ {x̄_I, x̄_II}`
//! (every element goes to exactly one side, order within a side follows the
//! source order), sometimes with a cardinality constraint, and over ordered
//! singleton picks `x̄ ⇒ {x_0, x_1, …, x̄_rest}`.
//!
//! Enumeration works on index positions `0..n` so callers can apply one
//! partition to several parallel data sets; [`select`] materializes values.
//! The canonical bipartition order is the binary-counter order: subset masks
//! ascending, bit `j` set meaning "position `j` goes to part I".

/// Ordered bipartitions of `0..n` in canonical (mask-ascending) order.
/// Element `j` is in the left part iff bit `j` of the mask is set.
pub fn bipartition_indices(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    assert!(n < usize::BITS as usize - 1, "bipartition_indices: n too large");
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0usize..(1 << n) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for j in 0..n {
            if mask & (1 << j) != 0 {
                left.push(j);
            } else {
                right.push(j);
            }
        }
        out.push((left, right));
    }
    out
}

/// Bipartitions of `0..n` whose left part has exactly `k` elements,
/// in the same canonical order.
pub fn bipartitions_with_left_size(n: usize, k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    bipartition_indices(n)
        .into_iter()
        .filter(|(l, _)| l.len() == k)
        .collect()
}

/// Ordered picks of `k` distinct positions out of `0..n` (a `k`-permutation),
/// each with the remaining positions in source order. Used for sums over
/// `x̄ ⇒ {x_0, x̄_rest}` (`k = 1`) and `x̄ ⇒ {x_0, x_1, x̄_rest}` (`k = 2`).
pub fn ordered_picks(n: usize, k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let mut picked = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, picked: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Vec<usize>)>) {
        if picked.len() == k {
            let rest: Vec<usize> = (0..n).filter(|j| !picked.contains(j)).collect();
            out.push((picked.clone(), rest));
            return;
        }
        for j in 0..n {
            if !picked.contains(&j) {
                picked.push(j);
                rec(n, k, picked, out);
                picked.pop();
            }
        }
    }
    rec(n, k, &mut picked, &mut out);
    out
}

/// Materialize the values at `idx` positions of `items`, preserving order.
pub fn select<T: Clone>(items: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&j| items[j].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::int;

    #[test]
    fn bipartitions_of_two_elements_in_canonical_order() {
        let items = [int(5), int(7)];
        let got: Vec<(Vec<_>, Vec<_>)> = bipartition_indices(2)
            .iter()
            .map(|(l, r)| (select(&items, l), select(&items, r)))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec![], vec![int(5), int(7)]),
                (vec![int(5)], vec![int(7)]),
                (vec![int(7)], vec![int(5)]),
                (vec![int(5), int(7)], vec![]),
            ]
        );
    }

    #[test]
    fn counts_match_binomials() {
        assert_eq!(bipartition_indices(0).len(), 1);
        assert_eq!(bipartition_indices(5).len(), 32);
        assert_eq!(bipartitions_with_left_size(5, 2).len(), 10);
        assert_eq!(bipartitions_with_left_size(4, 0).len(), 1);
        // k-permutations: n! / (n-k)!
        assert_eq!(ordered_picks(4, 1).len(), 4);
        assert_eq!(ordered_picks(4, 2).len(), 12);
        assert_eq!(ordered_picks(2, 2).len(), 2);
        assert_eq!(ordered_picks(1, 2).len(), 0);
        assert_eq!(ordered_picks(0, 0).len(), 1);
    }

    #[test]
    fn every_bipartition_is_a_partition() {
        for (l, r) in bipartition_indices(4) {
            let mut all: Vec<usize> = l.iter().chain(r.iter()).copied().collect();
            all.sort_unstable();
            assert_eq!(all, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn ordered_picks_keep_rest_in_source_order() {
        for (picked, rest) in ordered_picks(5, 2) {
            assert!(rest.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(picked.len(), 2);
            assert_ne!(picked[0], picked[1]);
        }
    }
}

use crate::PsychError;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};

/// A chain of booklets: each one opens with the last `a` items of the one
/// before, then continues with fresh items. The final booklet may be short.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BookletPlan {
    pub booklets: Vec<Vec<String>>,
    #[serde(rename = "K")]
    pub k: usize,
    pub a: usize,
    #[serde(rename = "I")]
    pub i: usize,
}

impl BookletPlan {
    pub fn len(&self) -> usize {
        self.booklets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.booklets.is_empty()
    }

    pub fn overlap(&self, s: usize, t: usize) -> usize {
        let a: HashSet<&String> = self.booklets[s].iter().collect();
        self.booklets[t].iter().filter(|x| a.contains(x)).count()
    }

    pub fn covered(&self) -> BTreeSet<&str> {
        self.booklets.iter().flatten().map(String::as_str).collect()
    }

    /// Whether booklets sharing at least one item form a single component.
    pub fn anchors_connected(&self) -> bool {
        let n = self.booklets.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(s) = stack.pop() {
            for (t, reached) in seen.iter_mut().enumerate() {
                if !*reached && self.overlap(s, t) > 0 {
                    *reached = true;
                    stack.push(t);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }
}

/// Booklets needed to cover `i` items with `k` per booklet and `a` anchors.
pub fn booklet_count(i: usize, k: usize, a: usize) -> usize {
    if i <= k {
        1
    } else {
        (i - a).div_ceil(k - a)
    }
}

/// Anchors per booklet: `round(anchor_fraction · K)`, at least one so the
/// chain stays linked.
pub fn anchor_count(k: usize, anchor_fraction: f64) -> usize {
    ((anchor_fraction * k as f64).round() as usize).max(1)
}

/// Smallest booklet size whose chain covers `i` items in exactly `booklets`
/// booklets, with `a` from [`anchor_count`]. Returns `(K, a)`.
pub fn derive_booklet_size(i: usize, booklets: usize, anchor_fraction: f64) -> Option<(usize, usize)> {
    (2..=i).find_map(|k| {
        let a = anchor_count(k, anchor_fraction);
        (a < k && booklet_count(i, k, a) == booklets).then_some((k, a))
    })
}

pub fn make_booklets(item_ids: &[String], k: usize, anchor_fraction: f64, seed: u64) -> Result<BookletPlan, PsychError> {
    let i = item_ids.len();
    if i == 0 {
        return Err(PsychError::Empty);
    }
    if k == 0 || k > i {
        return Err(PsychError::Invalid(format!("booklet size {k} must be in 1..={i}")));
    }
    if !(anchor_fraction > 0.0 && anchor_fraction < 0.5) {
        return Err(PsychError::Invalid(format!("anchor fraction {anchor_fraction} must be in (0, 0.5)")));
    }
    let a = anchor_count(k, anchor_fraction);
    if k <= a && i > k {
        return Err(PsychError::Invalid(format!("K − a = {k} − {a} leaves no fresh items")));
    }
    let mut pool = item_ids.to_vec();
    pool.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut booklets: Vec<Vec<String>> = vec![pool[..k].to_vec()];
    let mut next = k;
    while next < i {
        let prev = booklets.last().expect("at least one booklet");
        let mut b: Vec<String> = prev[prev.len() - a..].to_vec();
        let end = (next + k - a).min(i);
        b.extend_from_slice(&pool[next..end]);
        next = end;
        booklets.push(b);
    }
    Ok(BookletPlan { booklets, k, a, i })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("item{i}")).collect()
    }

    #[test]
    fn nineteen_booklets_for_559_items() {
        // a = round(0.1 K); count = ceil((559 − a)/(K − a)) hits 19 first at K = 33, a = 3
        assert_eq!(derive_booklet_size(559, 19, 0.1), Some((33, 3)));
        assert_eq!(booklet_count(559, 32, 3), 20);
        let plan = make_booklets(&ids(559), 33, 0.1, 7).unwrap();
        assert_eq!(plan.len(), 19);
        assert_eq!(plan.covered().len(), 559);
        assert!(plan.anchors_connected());
        assert_eq!(plan.booklets.last().unwrap().len(), 559 - 33 - 17 * 30 + 3);
    }

    #[test]
    fn small_booklets_keep_one_anchor() {
        assert_eq!(anchor_count(2, 0.1), 1);
        let plan = make_booklets(&ids(4), 2, 0.1, 0).unwrap();
        assert_eq!(plan.len(), 3);
        assert!(plan.anchors_connected());
        assert_eq!(make_booklets(&ids(1), 1, 0.1, 0).unwrap().len(), 1);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(make_booklets(&ids(10), 11, 0.1, 0).is_err());
        assert!(make_booklets(&ids(10), 5, 0.5, 0).is_err());
        assert!(make_booklets(&[], 1, 0.1, 0).is_err());
    }

    proptest! {
        #[test]
        fn chain_properties(i in 20usize..400, k in 10usize..60, frac in 0.05f64..0.45, seed in any::<u64>()) {
            prop_assume!(k <= i);
            let a = anchor_count(k, frac);
            prop_assume!(a < k);
            let plan = make_booklets(&ids(i), k, frac, seed).unwrap();
            prop_assert_eq!(plan.len(), booklet_count(i, k, a));
            prop_assert_eq!(plan.covered().len(), i);
            for t in 0..plan.len() {
                prop_assert!(plan.booklets[t].len() <= k);
                for u in t + 1..plan.len() {
                    let expect = if u == t + 1 { a } else { 0 };
                    prop_assert_eq!(plan.overlap(t, u), expect);
                }
            }
            prop_assert!(plan.anchors_connected());
            prop_assert_eq!(plan, make_booklets(&ids(i), k, frac, seed).unwrap());
        }
    }
}

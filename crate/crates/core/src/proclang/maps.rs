//! Elementwise relations and operations on finite maps.

use std::collections::BTreeMap;

/// Whether `m1` and `m2` have the same keys and `r` holds at each key.
pub fn related_maps<K: Ord, A, B>(
    m1: &BTreeMap<K, A>,
    m2: &BTreeMap<K, B>,
    r: impl Fn(&A, &B) -> bool,
) -> bool {
    m1.len() == m2.len() && m1.iter().all(|(k, a)| m2.get(k).is_some_and(|b| r(a, b)))
}

/// Applies `f` to every value, keeping the keys.
pub fn map_vals<K: Ord + Clone, A, B>(f: impl Fn(&A) -> B, m: &BTreeMap<K, A>) -> BTreeMap<K, B> {
    m.iter().map(|(k, v)| (k.clone(), f(v))).collect()
}

/// `m - x`.
pub fn remove_key<K: Ord + Clone, V: Clone>(m: &BTreeMap<K, V>, x: &K) -> BTreeMap<K, V> {
    let mut out = m.clone();
    out.remove(x);
    out
}

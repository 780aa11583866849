//! Reference implementations used to check the fast paths.

use std::collections::BTreeMap;

use crate::space::Str;
use crate::trees::ExplicitTree;

/// `τ ∈ F(T)` straight from the definition: some `σ ∈ T` has `τ ⊆ F(σ)`.
/// Nodes missing from the table are skipped.
pub fn bruteforce_image_tree(table: &BTreeMap<Str, Str>, tree: &ExplicitTree, tau: &Str) -> bool {
    tree.nodes().any(|s| table.get(s).is_some_and(|img| tau.is_prefix_of(img)))
}

/// The least-coded `τ ⊇ root` with code below `cap` satisfying `accept`, by
/// scanning every code below `cap`.
pub fn bruteforce_least_extension(root: &Str, cap: u64, accept: impl Fn(&Str) -> bool) -> Option<Str> {
    (0..cap).map(crate::space::str_decode_u64).find(|t| root.is_prefix_of(t) && accept(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_tree_has_empty_image() {
        let t = ExplicitTree::new([]).unwrap();
        assert!(!bruteforce_image_tree(&BTreeMap::new(), &t, &Str::empty()));
    }

    #[test]
    fn identity_image_is_the_tree() {
        let t = ExplicitTree::closure([Str::from(vec![1, 2])]);
        let table: BTreeMap<Str, Str> = t.nodes().map(|s| (s.clone(), s.clone())).collect();
        assert!(bruteforce_image_tree(&table, &t, &Str::from(vec![1])));
        assert!(!bruteforce_image_tree(&table, &t, &Str::from(vec![2])));
    }
}

use std::collections::BTreeMap;

use super::{DecoratedTree, KTree};

/// Every sector assignment of `t`, grouped by canonical form, with the
/// number of raw assignments landing in each class.
pub fn promote_with_counts(t: &DecoratedTree) -> Vec<(KTree, u64)> {
    let mut classes: BTreeMap<String, (DecoratedTree, u64)> = BTreeMap::new();
    let mut cur = t.clone();
    assign(&mut cur, 0, &mut |u: &DecoratedTree| {
        classes.entry(u.canonical_form()).or_insert_with(|| (u.clone(), 0)).1 += 1;
    });
    classes.into_values().map(|(u, n)| (KTree::new(u), n)).collect()
}

fn assign(t: &mut DecoratedTree, i: usize, emit: &mut dyn FnMut(&DecoratedTree)) {
    if i == t.edges.len() {
        emit(t);
        return;
    }
    for s in 0..t.edges[i].degree {
        t.edges[i].sector = s;
        assign(t, i + 1, emit);
    }
    t.edges[i].sector = 0;
}

/// K-theoretic trees over `t`, sorted by canonical form.
pub fn promote(t: &DecoratedTree) -> Vec<KTree> {
    promote_with_counts(t).into_iter().map(|(k, _)| k).collect()
}

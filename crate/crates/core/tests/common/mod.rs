#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use xrat::{brute_force_closure, PermGroup, Permutation};

pub type Elements = BTreeSet<Permutation>;

pub fn all_perms(n: usize) -> Vec<Permutation> {
    brute_force_closure(n, PermGroup::symmetric(n).unwrap().generators())
        .into_iter()
        .collect()
}

/// Every subgroup, found by closing known subgroups under one more element
/// until nothing new appears.
pub fn oracle_subgroups(n: usize) -> BTreeSet<Elements> {
    let universe = all_perms(n);
    let trivial: Elements = [Permutation::identity(n).unwrap()].into();
    let mut found: BTreeSet<Elements> = [trivial.clone()].into();
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        for g in &universe {
            if h.contains(g) {
                continue;
            }
            let mut gens: Vec<Permutation> = h.iter().cloned().collect();
            gens.push(g.clone());
            let bigger = brute_force_closure(n, &gens);
            if found.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    found
}

pub fn conjugate_set(h: &Elements, g: &Permutation) -> Elements {
    let gi = g.inverse();
    h.iter()
        .map(|x| g.compose(x).unwrap().compose(&gi).unwrap())
        .collect()
}

/// Class canonical form: the least conjugate element set.
pub fn oracle_classes(n: usize, subgroups: &BTreeSet<Elements>) -> BTreeMap<Elements, usize> {
    let universe = all_perms(n);
    let mut classes = BTreeMap::new();
    for h in subgroups {
        let canon = universe.iter().map(|g| conjugate_set(h, g)).min().unwrap();
        *classes.entry(canon).or_insert(0) += 1;
    }
    classes
}

/// Sorted orbit sizes, read off the element set.
pub fn oracle_orbit_sizes(n: usize, h: &Elements) -> Vec<usize> {
    let mut seen = vec![false; n + 1];
    let mut sizes = Vec::new();
    for x in 1..=n {
        if seen[x] {
            continue;
        }
        let orbit: BTreeSet<usize> = h.iter().map(|g| g.apply(x).unwrap()).collect();
        for &y in &orbit {
            seen[y] = true;
        }
        sizes.push(orbit.len());
    }
    sizes.sort_unstable();
    sizes
}

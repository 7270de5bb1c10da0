//! Permutation groups given by generators, backed by a lazily built
//! base and strong generating set.
//!
//! The stabilizer chain is computed with the deterministic Schreier–Sims
//! algorithm: every Schreier generator at every level is sifted through the
//! levels below it, and any non-trivial residue is adjoined as a new strong
//! generator, until all Schreier generators sift to the identity.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits;
use crate::perm::{check_degree, Permutation};

#[derive(Clone, Debug)]
struct Level {
    /// Base point, 0-indexed.
    point: usize,
    /// Indices into `StabChain::strong` of the generators fixing every
    /// earlier base point.
    gens: Vec<usize>,
    orbit: Vec<usize>,
    /// `transversal[b]` maps the base point to `b`.
    transversal: Vec<Option<Permutation>>,
    inverse: Vec<Option<Permutation>>,
}

#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    degree: usize,
    base: Vec<usize>,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

impl StabChain {
    pub(crate) fn new(degree: usize) -> Self {
        Self::with_base_prefix(degree, &[])
    }

    /// A chain whose base starts with the given 0-indexed points.
    pub(crate) fn with_base_prefix(degree: usize, prefix: &[usize]) -> Self {
        let mut chain = StabChain {
            degree,
            base: prefix.to_vec(),
            strong: Vec::new(),
            levels: Vec::new(),
        };
        chain.rebuild_levels();
        chain
    }

    pub(crate) fn from_generators(degree: usize, gens: &[Permutation], prefix: &[usize]) -> Self {
        let mut chain = Self::with_base_prefix(degree, prefix);
        for g in gens {
            chain.add_generator(g);
        }
        chain
    }

    /// Adjoins `g`; returns false when it was already a member.
    pub(crate) fn add_generator(&mut self, g: &Permutation) -> bool {
        if self.contains(g) {
            return false;
        }
        self.push_strong(g.clone());
        self.complete();
        true
    }

    fn push_strong(&mut self, g: Permutation) {
        if self.base.iter().all(|&b| g.fixes(b)) {
            let moved = g.first_moved().expect("non-identity residue");
            self.base.push(moved);
        }
        self.strong.push(g);
    }

    fn complete(&mut self) {
        loop {
            self.rebuild_levels();
            match self.first_failing_schreier_generator() {
                None => break,
                Some(residue) => self.push_strong(residue),
            }
        }
    }

    fn rebuild_levels(&mut self) {
        let n = self.degree;
        self.levels = self
            .base
            .iter()
            .enumerate()
            .map(|(i, &point)| {
                let fixed = &self.base[..i];
                let gens: Vec<usize> = (0..self.strong.len())
                    .filter(|&k| fixed.iter().all(|&b| self.strong[k].fixes(b)))
                    .collect();
                let mut transversal: Vec<Option<Permutation>> = vec![None; n];
                transversal[point] = Some(Permutation::identity_unchecked(n));
                let mut orbit = vec![point];
                let mut head = 0;
                while head < orbit.len() {
                    let beta = orbit[head];
                    head += 1;
                    for &k in &gens {
                        let s = &self.strong[k];
                        let gamma = s.img(beta);
                        if transversal[gamma].is_none() {
                            let u = s.mul(transversal[beta].as_ref().unwrap());
                            transversal[gamma] = Some(u);
                            orbit.push(gamma);
                        }
                    }
                }
                let inverse = transversal
                    .iter()
                    .map(|u| u.as_ref().map(Permutation::inverse))
                    .collect();
                Level {
                    point,
                    gens,
                    orbit,
                    transversal,
                    inverse,
                }
            })
            .collect();
    }

    fn first_failing_schreier_generator(&self) -> Option<Permutation> {
        for (i, level) in self.levels.iter().enumerate().rev() {
            for &beta in &level.orbit {
                let u_beta = level.transversal[beta].as_ref().unwrap();
                for &k in &level.gens {
                    let s = &self.strong[k];
                    let gamma = s.img(beta);
                    let u_gamma_inv = level.inverse[gamma].as_ref().unwrap();
                    let schreier = u_gamma_inv.mul(&s.mul(u_beta));
                    let (residue, _) = self.sift(schreier, i + 1);
                    if !residue.is_identity() {
                        return Some(residue);
                    }
                }
            }
        }
        None
    }

    /// Strips `g` through the levels starting at `from`. Returns the residue
    /// and the level at which stripping stopped.
    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (j, level) in self.levels.iter().enumerate().skip(from) {
            let beta = g.img(level.point);
            match &level.inverse[beta] {
                Some(u_inv) => g = u_inv.mul(&g),
                None => return (g, j),
            }
        }
        (g, self.levels.len())
    }

    pub(crate) fn contains(&self, g: &Permutation) -> bool {
        self.sift(g.clone(), 0).0.is_identity()
    }

    pub(crate) fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    /// Strong generators fixing the first `depth` base points.
    fn strong_below(&self, depth: usize) -> Vec<Permutation> {
        let fixed = &self.base[..depth.min(self.base.len())];
        self.strong
            .iter()
            .filter(|s| fixed.iter().all(|&b| s.fixes(b)))
            .cloned()
            .collect()
    }

    /// The chain of the stabilizer of the first base point.
    fn tail(&self) -> StabChain {
        if self.base.is_empty() {
            return StabChain::new(self.degree);
        }
        let mut chain = StabChain {
            degree: self.degree,
            base: self.base[1..].to_vec(),
            strong: self.strong_below(1),
            levels: Vec::new(),
        };
        chain.rebuild_levels();
        chain
    }

    fn for_each_element(&self, f: &mut impl FnMut(Permutation)) {
        fn walk(levels: &[Level], acc: Permutation, f: &mut impl FnMut(Permutation)) {
            match levels.split_first() {
                None => f(acc),
                Some((level, rest)) => {
                    for &b in &level.orbit {
                        walk(rest, acc.mul(level.transversal[b].as_ref().unwrap()), f);
                    }
                }
            }
        }
        walk(&self.levels, Permutation::identity_unchecked(self.degree), f);
    }
}

/// A subgroup of the symmetric group of degree `n`, given by generators.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        check_degree(degree)?;
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn from_cycles<S: AsRef<str>>(degree: usize, generators: &[S]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|s| Permutation::parse_cycles(s.as_ref(), degree))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, gens)
    }

    pub fn trivial(degree: usize) -> Result<Self> {
        Self::new(degree, Vec::new())
    }

    /// The full symmetric group, generated by a transposition and an n-cycle.
    pub fn symmetric(degree: usize) -> Result<Self> {
        check_degree(degree)?;
        let mut gens = Vec::new();
        if degree >= 2 {
            let mut swap: Vec<u8> = (0..degree as u8).collect();
            swap.swap(0, 1);
            gens.push(Permutation::from_raw(swap));
        }
        if degree >= 3 {
            let cycle: Vec<u8> = (0..degree).map(|i| ((i + 1) % degree) as u8).collect();
            gens.push(Permutation::from_raw(cycle));
        }
        Self::new(degree, gens)
    }

    fn with_chain(degree: usize, generators: Vec<Permutation>, chain: StabChain) -> Self {
        let lock = OnceLock::new();
        let _ = lock.set(chain);
        PermGroup {
            degree,
            generators,
            chain: lock,
        }
    }

    fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::from_generators(self.degree, &self.generators, &[]))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Permutation::is_identity)
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        Ok(self.chain().contains(p))
    }

    /// Membership for a permutation already known to have the right degree.
    pub(crate) fn has(&self, p: &Permutation) -> bool {
        self.chain().contains(p)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.has(g))
    }

    /// Set equality of the generated groups.
    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.is_subgroup_of(other) && self.order() == other.order()
    }

    /// True when `other` normalizes this group.
    pub fn is_normalized_by(&self, other: &PermGroup) -> bool {
        other
            .generators
            .iter()
            .all(|x| self.generators.iter().all(|h| self.has(&h.conjugate_by(x))))
    }

    pub fn is_two_group(&self) -> bool {
        self.order().is_power_of_two()
    }

    /// Every element exactly once, sorted lexicographically by image table.
    /// Fails when the order exceeds the process-wide enumeration cap.
    pub fn elements(&self) -> Result<Vec<Permutation>> {
        limits::check_cap(self.order())?;
        Ok(self.elements_unchecked())
    }

    pub fn elements_with_cap(&self, cap: usize) -> Result<Vec<Permutation>> {
        let order = self.order();
        if order > cap as u128 {
            return Err(Error::CapExceeded { order, cap });
        }
        Ok(self.elements_unchecked())
    }

    fn elements_unchecked(&self) -> Vec<Permutation> {
        let mut out = Vec::with_capacity(self.order() as usize);
        self.chain().for_each_element(&mut |g| out.push(g));
        out.sort_unstable();
        out
    }

    /// Orbit of a 1-indexed point, sorted.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>> {
        self.check_point(point)?;
        let mut seen = vec![false; self.degree];
        seen[point - 1] = true;
        let mut queue = vec![point - 1];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for g in &self.generators {
                let y = g.img(x);
                if !std::mem::replace(&mut seen[y], true) {
                    queue.push(y);
                }
            }
        }
        let mut members: Vec<usize> = queue.into_iter().map(|x| x + 1).collect();
        members.sort_unstable();
        Ok(members)
    }

    /// Orbit decomposition with a stabilizer generating set for each
    /// representative. Orbits are listed by ascending least member.
    pub fn orbits(&self) -> OrbitDecomposition {
        let mut assigned = vec![false; self.degree];
        let mut orbits = Vec::new();
        for start in 1..=self.degree {
            if assigned[start - 1] {
                continue;
            }
            let members = self.orbit(start).expect("point in range");
            for &m in &members {
                assigned[m - 1] = true;
            }
            let stabilizer_generators = self.stabilizer_chain(start - 1).0;
            orbits.push(Orbit {
                representative: start,
                members,
                stabilizer_generators,
            });
        }
        OrbitDecomposition {
            degree: self.degree,
            orbits,
        }
    }

    fn stabilizer_chain(&self, point: usize) -> (Vec<Permutation>, StabChain) {
        let chain = StabChain::from_generators(self.degree, &self.generators, &[point]);
        let tail = chain.tail();
        let gens = tail.strong.clone();
        (gens, tail)
    }

    /// The subgroup fixing a 1-indexed point.
    pub fn stabilizer(&self, point: usize) -> Result<PermGroup> {
        self.check_point(point)?;
        let (gens, chain) = self.stabilizer_chain(point - 1);
        Ok(PermGroup::with_chain(self.degree, gens, chain))
    }

    /// Points fixed by every generator, 1-indexed and ascending.
    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree)
            .filter(|&i| self.generators.iter().all(|g| g.fixes(i)))
            .map(|i| i + 1)
            .collect()
    }

    /// The same group with a greedily pruned generating set: generators are
    /// kept in order only when they enlarge the group generated so far.
    pub fn reduced(&self) -> PermGroup {
        let mut chain = StabChain::new(self.degree);
        let mut gens = Vec::new();
        for g in &self.generators {
            if chain.add_generator(g) {
                gens.push(g.clone());
            }
        }
        PermGroup::with_chain(self.degree, gens, chain)
    }

    pub fn to_spec(&self) -> GroupSpec {
        GroupSpec {
            degree: self.degree,
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: GroupSpec =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("group JSON: {e}")))?;
        PermGroup::try_from(spec)
    }

    fn check_point(&self, point: usize) -> Result<()> {
        if point == 0 || point > self.degree {
            return Err(Error::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        Ok(())
    }
}

/// Builds a group generated by `gens` with its chain computed incrementally.
pub(crate) fn group_from_chain_gens(degree: usize, gens: Vec<Permutation>) -> PermGroup {
    let mut chain = StabChain::new(degree);
    let mut kept = Vec::new();
    for g in gens {
        if chain.add_generator(&g) {
            kept.push(g);
        }
    }
    PermGroup::with_chain(degree, kept, chain)
}

/// Incrementally grown subgroup, used where membership is queried between
/// generator insertions.
#[derive(Clone, Debug)]
pub(crate) struct GroupBuilder {
    degree: usize,
    gens: Vec<Permutation>,
    chain: StabChain,
}

impl GroupBuilder {
    pub(crate) fn new(degree: usize) -> Self {
        GroupBuilder {
            degree,
            gens: Vec::new(),
            chain: StabChain::new(degree),
        }
    }

    pub(crate) fn from_group(g: &PermGroup) -> Self {
        GroupBuilder {
            degree: g.degree,
            gens: g.generators.clone(),
            chain: g.chain().clone(),
        }
    }

    pub(crate) fn add(&mut self, g: &Permutation) -> bool {
        let added = self.chain.add_generator(g);
        if added {
            self.gens.push(g.clone());
        }
        added
    }

    pub(crate) fn order(&self) -> u128 {
        self.chain.order()
    }

    pub(crate) fn gens(&self) -> &[Permutation] {
        &self.gens
    }

    pub(crate) fn build(self) -> PermGroup {
        PermGroup::with_chain(self.degree, self.gens, self.chain)
    }
}

/// JSON form of a group: `{ "degree": n, "generators": ["(1 2)(3 4)", …] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<String>,
}

impl TryFrom<GroupSpec> for PermGroup {
    type Error = Error;

    fn try_from(spec: GroupSpec) -> Result<Self> {
        PermGroup::from_cycles(spec.degree, &spec.generators)
    }
}

impl Serialize for PermGroup {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(serializer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Least member of the orbit.
    pub representative: usize,
    /// Sorted, 1-indexed.
    pub members: Vec<usize>,
    pub stabilizer_generators: Vec<Permutation>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub degree: usize,
    pub orbits: Vec<Orbit>,
}

impl OrbitDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Orbit::len).collect()
    }

    /// The orbit sizes as a sorted multiset.
    pub fn sorted_sizes(&self) -> Vec<usize> {
        let mut sizes = self.sizes();
        sizes.sort_unstable();
        sizes
    }

    pub fn first_odd(&self) -> Option<&Orbit> {
        self.orbits.iter().find(|o| o.len() % 2 == 1)
    }
}

#[derive(Serialize)]
struct OrbitJson<'a> {
    representative: usize,
    members: &'a [usize],
    size: usize,
    stabilizer: Vec<String>,
}

impl Serialize for OrbitDecomposition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let orbits: Vec<OrbitJson<'_>> = self
            .orbits
            .iter()
            .map(|o| OrbitJson {
                representative: o.representative,
                members: &o.members,
                size: o.len(),
                stabilizer: o.stabilizer_generators.iter().map(|g| g.to_string()).collect(),
            })
            .collect();
        #[derive(Serialize)]
        struct Out<'a> {
            degree: usize,
            orbits: Vec<OrbitJson<'a>>,
        }
        Out {
            degree: self.degree,
            orbits,
        }
        .serialize(serializer)
    }
}

/// Whether some element of `ambient` conjugates `h1` onto `h2`.
///
/// Both groups must lie in `ambient`, whose elements are enumerated (subject
/// to the enumeration cap).
pub fn is_conjugate_subgroup(ambient: &PermGroup, h1: &PermGroup, h2: &PermGroup) -> Result<bool> {
    for h in [h1, h2] {
        if h.degree != ambient.degree {
            return Err(Error::DegreeMismatch {
                left: ambient.degree,
                right: h.degree,
            });
        }
        if let Some(g) = h.generators.iter().find(|g| !ambient.has(g)) {
            return Err(Error::NotSubgroup(g.to_string()));
        }
    }
    if h1.order() != h2.order() {
        return Ok(false);
    }
    let elements = ambient.elements()?;
    Ok(elements
        .iter()
        .any(|g| h1.generators.iter().all(|h| h2.has(&h.conjugate_by(g)))))
}

/// Closure of a generating set by breadth-first multiplication. Slow, but
/// independent of the stabilizer chain; used to cross-check it.
pub fn brute_force_closure(degree: usize, gens: &[Permutation]) -> BTreeSet<Permutation> {
    let mut set = BTreeSet::new();
    let id = Permutation::identity_unchecked(degree);
    set.insert(id.clone());
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = g.mul(&x);
            if set.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::from_cycles(n, gens).unwrap()
    }

    fn perm(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn orders_match_closure() {
        let s5 = group(5, &["(1 2)", "(1 2 3 4 5)"]);
        assert_eq!(s5.order(), 120);
        assert_eq!(brute_force_closure(5, s5.generators()).len(), 120);
        assert_eq!(group(5, &[]).order(), 1);
        let v4 = group(4, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        assert_eq!(v4.order(), 4);
        assert_eq!(PermGroup::symmetric(10).unwrap().order(), 3_628_800);
        assert_eq!(PermGroup::symmetric(1).unwrap().order(), 1);
        assert_eq!(PermGroup::symmetric(2).unwrap().order(), 2);
    }

    #[test]
    fn membership() {
        let c3 = group(3, &["(1 2 3)"]);
        assert!(c3.contains(&perm("(1 3 2)", 3)).unwrap());
        assert!(!c3.contains(&perm("(1 2)", 3)).unwrap());
        assert!(c3.contains(&perm("()", 3)).unwrap());
        assert!(group(3, &[]).contains(&perm("()", 3)).unwrap());
        assert_eq!(
            c3.contains(&perm("()", 4)),
            Err(Error::DegreeMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn orbit_examples() {
        let g = group(5, &["(1 2)(3 4)"]);
        let orbits = g.orbits();
        let members: Vec<Vec<usize>> = orbits.orbits.iter().map(|o| o.members.clone()).collect();
        assert_eq!(members, vec![vec![1, 2], vec![3, 4], vec![5]]);
        assert_eq!(group(4, &[]).orbits().sizes(), vec![1, 1, 1, 1]);
        assert_eq!(group(5, &["(1 2)", "(1 2 3 4 5)"]).orbits().sizes(), vec![5]);
    }

    #[test]
    fn stabilizer_examples() {
        let s3 = group(3, &["(1 2)", "(1 2 3)"]);
        let st = s3.stabilizer(3).unwrap();
        assert_eq!(st.order(), 2);
        assert!(st.contains(&perm("(1 2)", 3)).unwrap());
        assert_eq!(group(4, &[]).stabilizer(2).unwrap().order(), 1);
        assert_eq!(group(4, &["(1 2 3 4)"]).stabilizer(1).unwrap().order(), 1);
        assert_eq!(
            s3.stabilizer(4).unwrap_err(),
            Error::PointOutOfRange { point: 4, degree: 3 }
        );
    }

    #[test]
    fn elements_are_sorted_and_capped() {
        let triv = group(3, &[]);
        assert_eq!(triv.elements().unwrap(), vec![perm("()", 3)]);
        let c2 = group(3, &["(1 2)"]);
        assert_eq!(c2.elements().unwrap(), vec![perm("()", 3), perm("(1 2)", 3)]);
        let s3 = group(3, &["(1 2)", "(1 2 3)"]);
        let els = s3.elements().unwrap();
        assert_eq!(els.len(), 6);
        assert!(els.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(
            s3.elements_with_cap(5).unwrap_err(),
            Error::CapExceeded { order: 6, cap: 5 }
        );
    }

    #[test]
    fn conjugacy_examples() {
        let s3 = group(3, &["(1 2)", "(1 2 3)"]);
        let a = group(3, &["(1 2)"]);
        let b = group(3, &["(2 3)"]);
        let c = group(3, &["(1 2 3)"]);
        assert!(is_conjugate_subgroup(&s3, &a, &b).unwrap());
        assert!(!is_conjugate_subgroup(&s3, &a, &c).unwrap());
        assert!(is_conjugate_subgroup(&s3, &c, &c).unwrap());
        let outside = group(3, &["(1 2)"]);
        let small = group(3, &["(1 2 3)"]);
        assert!(matches!(
            is_conjugate_subgroup(&small, &outside, &small),
            Err(Error::NotSubgroup(_))
        ));
    }

    #[test]
    fn reduced_drops_redundant_generators() {
        let g = group(4, &["(1 2)", "(1 2)", "(3 4)", "(1 2)(3 4)"]);
        let r = g.reduced();
        assert_eq!(r.generators().len(), 2);
        assert_eq!(r.order(), 4);
    }

    #[test]
    fn json_round_trip() {
        let g = group(6, &["(1 2)", "(3 4)(5 6)"]);
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"degree":6,"generators":["(1 2)","(3 4)(5 6)"]}"#);
        let back = PermGroup::from_json(&text).unwrap();
        assert!(back.same_elements(&g));
        assert!(PermGroup::from_json(r#"{"degree":3,"generators":["(1 4)"]}"#).is_err());
        assert!(matches!(PermGroup::from_json("{"), Err(Error::Input(_))));
    }
}

//! 2-Sylow subgroups, Frattini subgroups of 2-groups, and index-2
//! subgroups containing a prescribed proper subgroup.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{group_from_chain_gens, GroupBuilder, PermGroup};
use crate::perm::Permutation;

/// Largest power of two dividing `n` (`n > 0`).
pub fn two_part(n: u128) -> u128 {
    debug_assert!(n > 0);
    1u128 << n.trailing_zeros()
}

/// A 2-Sylow subgroup together with its (odd) index in the parent group.
#[derive(Clone, Debug, Serialize)]
pub struct SylowWitness {
    pub sylow: PermGroup,
    pub index: u128,
    pub parent_order: u128,
}

impl SylowWitness {
    /// Re-checks the witness against the parent group from scratch.
    pub fn validate(&self, parent: &PermGroup) -> Result<()> {
        let order = parent.order();
        if order != self.parent_order {
            return Err(Error::Certificate(format!(
                "parent order is {order}, witness records {}",
                self.parent_order
            )));
        }
        let sylow_order = self.sylow.order();
        if sylow_order != two_part(order) {
            return Err(Error::Certificate(format!(
                "Sylow subgroup has order {sylow_order}, expected {}",
                two_part(order)
            )));
        }
        if self.index.is_multiple_of(2) || self.index * sylow_order != order {
            return Err(Error::Certificate(format!("bad Sylow index {}", self.index)));
        }
        if let Some(g) = self.sylow.generators().iter().find(|g| !parent.has(g)) {
            return Err(Error::Certificate(format!("Sylow generator {g} is not in the parent")));
        }
        Ok(())
    }
}

/// Computes a 2-Sylow subgroup deterministically.
///
/// The natural symmetric and alternating groups get an explicit iterated
/// wreath product. Every other group is enumerated (subject to the
/// enumeration cap) and a 2-subgroup is grown one factor of two at a time by
/// adjoining the lexicographically first element `x` outside it that
/// normalizes it and squares into it.
pub fn sylow_2(g: &PermGroup) -> Result<SylowWitness> {
    let order = g.order();
    let target = two_part(order);
    let sylow = if order == target {
        g.clone()
    } else if let Some(p) = natural_giant_sylow(g, order) {
        p
    } else {
        grow_sylow(g, target)?
    };
    debug_assert_eq!(sylow.order(), target);
    Ok(SylowWitness {
        sylow,
        index: order / target,
        parent_order: order,
    })
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn natural_giant_sylow(g: &PermGroup, order: u128) -> Option<PermGroup> {
    let n = g.degree();
    let full = factorial(n);
    if order == full {
        Some(symmetric_sylow(n))
    } else if n >= 3 && order == full / 2 {
        Some(even_part(&symmetric_sylow(n)))
    } else {
        None
    }
}

/// 2-Sylow subgroup of the symmetric group: one iterated wreath product of
/// cyclic groups of order 2 per binary digit of `n`.
pub(crate) fn symmetric_sylow(n: usize) -> PermGroup {
    let mut gens = Vec::new();
    let mut offset = 0;
    for k in (0..usize::BITS).rev() {
        let block = 1usize << k;
        if n & block == 0 {
            continue;
        }
        for j in 0..k {
            let half = 1usize << j;
            let mut images: Vec<u8> = (0..n as u8).collect();
            for t in 0..half {
                images.swap(offset + t, offset + half + t);
            }
            gens.push(Permutation::from_raw(images));
        }
        offset += block;
    }
    group_from_chain_gens(n, gens)
}

/// Kernel of the sign map restricted to `p`, via Schreier generators for the
/// transversal `{1, t}` with `t` an odd generator.
fn even_part(p: &PermGroup) -> PermGroup {
    let gens = p.generators();
    let Some(t) = gens.iter().find(|g| !g.is_even()) else {
        return p.clone();
    };
    let t_inv = t.inverse();
    let mut kernel_gens = Vec::new();
    for s in gens {
        if s.is_even() {
            kernel_gens.push(s.clone());
            kernel_gens.push(t.mul(s).mul(&t_inv));
        } else {
            kernel_gens.push(s.mul(&t_inv));
            kernel_gens.push(t.mul(s));
        }
    }
    kernel_gens.retain(|g| !g.is_identity());
    group_from_chain_gens(p.degree(), kernel_gens)
}

fn grow_sylow(g: &PermGroup, target: u128) -> Result<PermGroup> {
    let n = g.degree();
    let elements = g.elements()?;
    let candidates: Vec<&Permutation> = elements
        .iter()
        .filter(|x| !x.is_identity() && x.order().is_power_of_two())
        .collect();

    let mut p = GroupBuilder::new(n);
    let mut members: HashSet<Permutation> = HashSet::new();
    members.insert(Permutation::identity_unchecked(n));

    while p.order() < target {
        let x = candidates
            .iter()
            .find(|x| {
                !members.contains(**x)
                    && members.contains(&x.mul(x))
                    && p.gens().iter().all(|h| members.contains(&h.conjugate_by(x)))
            })
            .ok_or_else(|| {
                Error::Certificate("no normalizing 2-element found below the Sylow order".into())
            })?;
        // <P, x> = P ∪ P·x because x normalizes P and x² ∈ P.
        let coset: Vec<Permutation> = members.iter().map(|m| m.mul(x)).collect();
        members.extend(coset);
        p.add(x);
        debug_assert_eq!(p.order(), members.len() as u128);
    }
    Ok(p.build())
}

/// Points fixed by the whole group, ascending.
pub fn fixed_points(g: &PermGroup) -> Vec<usize> {
    g.fixed_points()
}

/// The Frattini subgroup of a 2-group.
///
/// For a 2-group it is generated by the squares of all elements; the
/// commutators are already in there since
/// `x⁻¹y⁻¹xy = x⁻²·(xy⁻¹)²·y²`.
pub fn frattini_2group(p: &PermGroup) -> Result<PermGroup> {
    let order = p.order();
    if !order.is_power_of_two() {
        return Err(Error::NotTwoGroup(order));
    }
    let mut phi = GroupBuilder::new(p.degree());
    for x in p.elements()? {
        phi.add(&x.mul(&x));
    }
    Ok(phi.build())
}

/// An index-2 subgroup `H` of a 2-group `P` containing a given subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Index2Witness {
    pub degree: usize,
    /// Generators of the subgroup that must lie in `H`.
    pub stabilizer: Vec<Permutation>,
    /// Generators of `H`.
    pub subgroup: Vec<Permutation>,
    pub parent_order: u128,
}

impl Index2Witness {
    pub fn subgroup_group(&self) -> PermGroup {
        PermGroup::new(self.degree, self.subgroup.clone()).expect("degrees checked at construction")
    }

    /// Re-checks `[P:H] = 2`, containment of the stabilizer, and normality.
    pub fn validate(&self, p: &PermGroup) -> Result<()> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: p.degree(),
                right: self.degree,
            });
        }
        let h = PermGroup::new(self.degree, self.subgroup.clone())?;
        let p_order = p.order();
        if p_order != self.parent_order {
            return Err(Error::Certificate(format!(
                "parent order is {p_order}, witness records {}",
                self.parent_order
            )));
        }
        if let Some(g) = self.subgroup.iter().find(|g| !p.has(g)) {
            return Err(Error::Certificate(format!("H generator {g} is not in P")));
        }
        if h.order() * 2 != p_order {
            return Err(Error::Certificate(format!(
                "[P:H] = {p_order}/{} is not 2",
                h.order()
            )));
        }
        if let Some(g) = self.stabilizer.iter().find(|g| !h.has(g)) {
            return Err(Error::Certificate(format!("stabilizer generator {g} is not in H")));
        }
        if !h.is_normalized_by(p) {
            return Err(Error::Certificate("H is not normal in P".into()));
        }
        Ok(())
    }
}

impl Serialize for Index2Witness {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            stabilizer: Vec<String>,
            #[serde(rename = "H")]
            subgroup: Vec<String>,
            index: u32,
            normal: bool,
            parent_order: u128,
        }
        Out {
            stabilizer: self.stabilizer.iter().map(|g| g.to_string()).collect(),
            subgroup: self.subgroup.iter().map(|g| g.to_string()).collect(),
            index: 2,
            normal: true,
            parent_order: self.parent_order,
        }
        .serialize(serializer)
    }
}

/// Parity of the GF(2) pairing between a functional and a vector.
fn pairing(f: u64, v: u64) -> bool {
    (f & v).count_ones() % 2 == 1
}

/// Intersects the span of `basis` with the annihilator of `v`. Returns
/// `None` when the intersection is the zero space.
fn restrict(basis: &[u64], v: u64) -> Option<Vec<u64>> {
    let Some(pivot) = basis.iter().position(|&f| pairing(f, v)) else {
        return Some(basis.to_vec());
    };
    let f0 = basis[pivot];
    let out: Vec<u64> = basis
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != pivot)
        .map(|(_, &f)| if pairing(f, v) { f ^ f0 } else { f })
        .collect();
    (!out.is_empty()).then_some(out)
}

/// Finds `H` with `s ⊆ H ⊊ p` and `[p:H] = 2`.
///
/// Works in the elementary abelian quotient `p/Φ(p)` viewed as a vector
/// space over GF(2): index-2 subgroups correspond to nonzero functionals, and
/// those containing `s` to functionals vanishing on its image. Among these
/// the one whose kernel has the lexicographically least sorted element list
/// is chosen, by accepting elements greedily in sorted order while some
/// nonzero functional still vanishes on everything accepted.
pub fn index2_over(p: &PermGroup, s: &PermGroup) -> Result<Index2Witness> {
    let n = p.degree();
    let p_order = p.order();
    if !p_order.is_power_of_two() {
        return Err(Error::NotTwoGroup(p_order));
    }
    if p_order == 1 {
        return Err(Error::TrivialGroup);
    }
    if s.degree() != n {
        return Err(Error::DegreeMismatch {
            left: n,
            right: s.degree(),
        });
    }
    if let Some(g) = s.generators().iter().find(|g| !p.has(g)) {
        return Err(Error::NotSubgroup(g.to_string()));
    }
    if s.order() >= p_order {
        return Err(Error::NotProperSubgroup);
    }

    let phi = frattini_2group(p)?;
    let mut span = GroupBuilder::from_group(&phi);
    let basis: Vec<Permutation> = p.generators().iter().filter(|g| span.add(g)).cloned().collect();
    let dim = basis.len();
    if dim > 64 {
        return Err(Error::Input(format!("Frattini quotient of rank {dim} is too large")));
    }

    let coords = quotient_coordinates(n, &phi, &basis);

    let mut functionals: Vec<u64> = (0..dim).map(|i| 1u64 << i).collect();
    for g in s.generators() {
        functionals = restrict(&functionals, coords[g]).ok_or_else(|| {
            Error::Certificate("subgroup maps onto the Frattini quotient".into())
        })?;
    }
    for x in p.elements()? {
        if let Some(next) = restrict(&functionals, coords[&x]) {
            functionals = next;
        }
    }
    debug_assert_eq!(functionals.len(), 1);
    let f = functionals[0];

    let mut gens: Vec<Permutation> = phi.generators().to_vec();
    let pivot = (0..dim).find(|&i| f >> i & 1 == 1).expect("nonzero functional");
    for (i, b) in basis.iter().enumerate() {
        if f >> i & 1 == 0 {
            gens.push(b.clone());
        } else if i != pivot {
            gens.push(b.mul(&basis[pivot]));
        }
    }
    let h = group_from_chain_gens(n, gens);
    debug_assert_eq!(h.order() * 2, p_order);

    Ok(Index2Witness {
        degree: n,
        stabilizer: s.generators().to_vec(),
        subgroup: h.generators().to_vec(),
        parent_order: p_order,
    })
}

/// Coordinates in `p/Φ(p)` of every element of `p = ⟨Φ, basis⟩`, by a
/// breadth-first walk using right multiplication.
fn quotient_coordinates(
    n: usize,
    phi: &PermGroup,
    basis: &[Permutation],
) -> HashMap<Permutation, u64> {
    let steps: Vec<(&Permutation, u64)> = phi
        .generators()
        .iter()
        .map(|g| (g, 0))
        .chain(basis.iter().enumerate().map(|(i, b)| (b, 1u64 << i)))
        .collect();
    let id = Permutation::identity_unchecked(n);
    let mut coords = HashMap::new();
    coords.insert(id.clone(), 0u64);
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        let cx = coords[&x];
        for &(g, v) in &steps {
            let y = x.mul(g);
            if !coords.contains_key(&y) {
                coords.insert(y.clone(), cx ^ v);
                queue.push(y);
            }
        }
    }
    coords
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::brute_force_closure;

    fn group(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::from_cycles(n, gens).unwrap()
    }

    #[test]
    fn two_part_values() {
        assert_eq!(two_part(6), 2);
        assert_eq!(two_part(24), 8);
        assert_eq!(two_part(120), 8);
        assert_eq!(two_part(1), 1);
        assert_eq!(two_part(3_628_800), 256);
    }

    #[test]
    fn sylow_examples() {
        let s3 = group(3, &["(1 2)", "(1 2 3)"]);
        let w = sylow_2(&s3).unwrap();
        assert_eq!(w.sylow.order(), 2);
        assert_eq!(w.index, 3);
        w.validate(&s3).unwrap();

        let c2 = group(5, &["(1 2)"]);
        let w = sylow_2(&c2).unwrap();
        assert_eq!(w.index, 1);
        assert!(w.sylow.same_elements(&c2));

        let s4 = group(4, &["(1 2)", "(1 2 3 4)"]);
        let w = sylow_2(&s4).unwrap();
        assert_eq!(w.sylow.order(), 8);
        assert_eq!(brute_force_closure(4, w.sylow.generators()).len(), 8);
        w.validate(&s4).unwrap();
    }

    #[test]
    fn giant_sylows_have_full_two_part() {
        for n in 2..=12 {
            let s = PermGroup::symmetric(n).unwrap();
            let w = sylow_2(&s).unwrap();
            w.validate(&s).unwrap();
            assert!(w.sylow.generators().iter().all(|g| g.order().is_power_of_two()));
            if n >= 3 {
                let three_cycles: Vec<String> = (3..=n).map(|k| format!("(1 2 {k})")).collect();
                let alt = PermGroup::from_cycles(n, &three_cycles).unwrap();
                assert_eq!(alt.order() * 2, s.order());
                let w = sylow_2(&alt).unwrap();
                w.validate(&alt).unwrap();
                assert!(w.sylow.generators().iter().all(Permutation::is_even));
            }
        }
    }

    #[test]
    fn sylow_of_non_giant_uses_enumeration() {
        // Σ3 × Σ3 acting on 6 points: order 36, Sylow order 4.
        let g = group(6, &["(1 2)", "(1 2 3)", "(4 5)", "(4 5 6)"]);
        let w = sylow_2(&g).unwrap();
        assert_eq!(w.sylow.order(), 4);
        assert_eq!(w.index, 9);
        w.validate(&g).unwrap();
        // deterministic
        let again = sylow_2(&g).unwrap();
        assert_eq!(again.sylow.generators(), w.sylow.generators());
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(fixed_points(&group(5, &[])), vec![1, 2, 3, 4, 5]);
        assert_eq!(fixed_points(&group(3, &["(1 2)"])), vec![3]);
        assert!(fixed_points(&group(4, &["(1 2)", "(3 4)"])).is_empty());
    }

    #[test]
    fn frattini_examples() {
        let v4 = group(4, &["(1 2)", "(3 4)"]);
        assert_eq!(frattini_2group(&v4).unwrap().order(), 1);
        let c4 = group(4, &["(1 2 3 4)"]);
        let phi = frattini_2group(&c4).unwrap();
        assert!(phi.same_elements(&group(4, &["(1 3)(2 4)"])));
        assert_eq!(frattini_2group(&group(4, &[])).unwrap().order(), 1);
        assert_eq!(
            frattini_2group(&group(3, &["(1 2 3)"])).unwrap_err(),
            Error::NotTwoGroup(3)
        );
    }

    #[test]
    fn frattini_matches_squares_and_commutators_by_brute_force() {
        // D4 and the Sylow of Σ6: compare with the closure of all squares
        // and all commutators.
        for p in [group(4, &["(1 2)", "(1 3)(2 4)"]), symmetric_sylow(6), symmetric_sylow(8)] {
            let els: Vec<Permutation> = brute_force_closure(p.degree(), p.generators()).into_iter().collect();
            let mut gens = Vec::new();
            for x in &els {
                gens.push(x.mul(x));
                for y in &els {
                    gens.push(x.inverse().mul(&y.inverse()).mul(x).mul(y));
                }
            }
            let oracle = brute_force_closure(p.degree(), &gens);
            let phi = frattini_2group(&p).unwrap();
            assert_eq!(phi.order(), oracle.len() as u128);
            assert!(oracle.iter().all(|x| phi.has(x)));
        }
    }

    #[test]
    fn index2_examples() {
        let v4 = group(4, &["(1 2)", "(3 4)"]);
        let s = group(4, &["(3 4)"]);
        let w = index2_over(&v4, &s).unwrap();
        w.validate(&v4).unwrap();
        assert!(w.subgroup_group().same_elements(&s));

        let c4 = group(4, &["(1 2 3 4)"]);
        let w = index2_over(&c4, &group(4, &[])).unwrap();
        w.validate(&c4).unwrap();
        assert!(w.subgroup_group().same_elements(&group(4, &["(1 3)(2 4)"])));

        let c2 = group(3, &["(1 2)"]);
        let w = index2_over(&c2, &group(3, &[])).unwrap();
        assert_eq!(w.subgroup_group().order(), 1);
        w.validate(&c2).unwrap();
    }

    #[test]
    fn index2_lex_tie_break() {
        // V4 over the trivial group: three candidates ⟨(1 2)⟩, ⟨(3 4)⟩,
        // ⟨(1 2)(3 4)⟩. Sorted element lists: [id,(3 4)] is least because
        // the image table [1,2,4,3] precedes [2,1,3,4] and [2,1,4,3].
        let v4 = group(4, &["(1 2)", "(3 4)"]);
        let w = index2_over(&v4, &group(4, &[])).unwrap();
        assert!(w.subgroup_group().same_elements(&group(4, &["(3 4)"])));
    }

    #[test]
    fn index2_errors() {
        let v4 = group(4, &["(1 2)", "(3 4)"]);
        assert_eq!(index2_over(&v4, &v4).unwrap_err(), Error::NotProperSubgroup);
        let s3 = group(3, &["(1 2)", "(1 2 3)"]);
        assert_eq!(index2_over(&s3, &group(3, &[])).unwrap_err(), Error::NotTwoGroup(6));
        assert_eq!(index2_over(&group(4, &[]), &group(4, &[])).unwrap_err(), Error::TrivialGroup);
        assert!(matches!(
            index2_over(&v4, &group(4, &["(1 3)"])),
            Err(Error::NotSubgroup(_))
        ));
    }

    #[test]
    fn index2_validation_rejects_bad_witness() {
        let v4 = group(4, &["(1 2)", "(3 4)"]);
        let mut w = index2_over(&v4, &group(4, &["(3 4)"])).unwrap();
        w.subgroup = vec![Permutation::parse_cycles("(1 2)", 4).unwrap()];
        assert!(matches!(w.validate(&v4), Err(Error::Certificate(_))));
        let d4 = group(4, &["(1 2)", "(1 3)(2 4)"]);
        let bad = Index2Witness {
            degree: 4,
            stabilizer: vec![],
            subgroup: vec![Permutation::parse_cycles("(1 2)", 4).unwrap()],
            parent_order: 8,
        };
        // order 2 inside order 8: index 4
        assert!(bad.validate(&d4).is_err());
    }
}

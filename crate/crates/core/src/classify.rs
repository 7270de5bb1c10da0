//! Subgroups of small symmetric groups up to conjugacy, and the verdict
//! table over all classes.
//!
//! Subgroups are found by cyclic extension: starting from the trivial group,
//! every subgroup found so far is extended by each cyclic subgroup of
//! prime-power order, and results are deduplicated by element set. Elements
//! of the symmetric group are indexed in lexicographic order, so sorted
//! index lists compare exactly like sorted element lists.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::rationality::{decide, VerdictKind, MIN_DEGREE};
use crate::two_group::sylow_2;

pub const DEFAULT_MAX_DEGREE: usize = 6;

/// Beyond this degree the multiplication table no longer fits comfortably
/// in memory.
const TABLE_LIMIT: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub max_degree: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

impl ClassifyOptions {
    fn check(&self, n: usize) -> Result<()> {
        let max = self.max_degree.min(TABLE_LIMIT);
        if n == 0 || n > max {
            return Err(Error::DegreeAboveCeiling { degree: n, max });
        }
        Ok(())
    }
}

type Bits = Vec<u64>;

fn has(bits: &Bits, i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn set(bits: &mut Bits, i: usize) -> bool {
    let was = has(bits, i);
    bits[i / 64] |= 1 << (i % 64);
    !was
}

/// The symmetric group as an indexed multiplication table.
struct SymTable {
    n: usize,
    elements: Vec<Permutation>,
    mul: Vec<u16>,
    inv: Vec<u16>,
}

impl SymTable {
    fn new(n: usize) -> Result<Self> {
        let elements = PermGroup::symmetric(n)?.elements_with_cap(usize::MAX)?;
        let index: HashMap<&Permutation, u16> =
            elements.iter().enumerate().map(|(i, p)| (p, i as u16)).collect();
        let size = elements.len();
        let mut mul = Vec::with_capacity(size * size);
        for a in &elements {
            for b in &elements {
                mul.push(index[&a.mul(b)]);
            }
        }
        let inv = elements.iter().map(|p| index[&p.inverse()]).collect();
        Ok(SymTable { n, elements, mul, inv })
    }

    fn size(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size() + b] as usize
    }

    fn empty_bits(&self) -> Bits {
        vec![0; self.size().div_ceil(64)]
    }

    /// Closure of `start ∪ gens`, given that `start` is already a group `H`.
    ///
    /// The result is grown as a union of right cosets `H·r`; it is closed
    /// under right multiplication by every generator as soon as `r·s` lies
    /// in it for every coset representative `r` and generator `s`.
    fn extend(&self, start: &Subgroup, gens: &[usize]) -> Subgroup {
        self.extend_bounded(start, gens, usize::MAX).expect("unbounded")
    }

    /// Like [`extend`](Self::extend), but gives up with `None` once the
    /// closure has more than `bound` elements.
    fn extend_bounded(&self, start: &Subgroup, gens: &[usize], bound: usize) -> Option<Subgroup> {
        let mut bits = start.bits.clone();
        let mut elements = start.elements.clone();
        let mut all_gens = start.gens.clone();
        all_gens.extend_from_slice(gens);
        let mut reps = vec![0usize];
        let mut head = 0;
        while head < reps.len() {
            let r = reps[head];
            head += 1;
            for &s in &all_gens {
                let t = self.mul(r, s);
                if has(&bits, t) {
                    continue;
                }
                reps.push(t);
                for &h in &start.elements {
                    let f = self.mul(h as usize, t);
                    set(&mut bits, f);
                    elements.push(f as u16);
                }
                if elements.len() > bound {
                    return None;
                }
            }
        }
        Some(Subgroup {
            bits,
            elements,
            gens: all_gens,
        })
    }

    fn trivial(&self) -> Subgroup {
        let mut bits = self.empty_bits();
        set(&mut bits, 0); // identity is lexicographically least
        Subgroup {
            bits,
            elements: vec![0],
            gens: Vec::new(),
        }
    }

    fn conjugate(&self, s: &Subgroup, g: usize) -> Bits {
        let g_inv = self.inv[g] as usize;
        let mut bits = self.empty_bits();
        for &e in &s.elements {
            set(&mut bits, self.mul(self.mul(g, e as usize), g_inv));
        }
        bits
    }

    /// Generators picked greedily from the sorted element list.
    fn small_generating_set(&self, s: &Subgroup) -> Vec<usize> {
        let mut acc = self.trivial();
        let mut gens = Vec::new();
        let mut sorted = s.elements.clone();
        sorted.sort_unstable();
        for &e in &sorted {
            if !has(&acc.bits, e as usize) {
                acc = self.extend(&acc, &[e as usize]);
                gens.push(e as usize);
            }
        }
        gens
    }

    fn to_group(&self, gens: &[usize]) -> PermGroup {
        PermGroup::new(self.n, gens.iter().map(|&g| self.elements[g].clone()).collect())
            .expect("degree matches")
    }
}

#[derive(Clone, Debug)]
struct Subgroup {
    bits: Bits,
    elements: Vec<u16>,
    gens: Vec<usize>,
}

fn is_prime_power(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let p = (2..=m).find(|d| m.is_multiple_of(*d)).unwrap();
    let mut r = m;
    while r.is_multiple_of(p) {
        r /= p;
    }
    r == 1
}

/// Every subgroup of the symmetric group, sorted by order and then by
/// sorted element set.
fn all_subgroups(table: &SymTable) -> Vec<Subgroup> {
    let mut seen_cyclic: HashMap<Bits, ()> = HashMap::new();
    let mut cyclic_gens = Vec::new();
    let trivial = table.trivial();
    for (i, p) in table.elements.iter().enumerate() {
        if is_prime_power(p.order()) {
            let c = table.extend(&trivial, &[i]);
            if seen_cyclic.insert(c.bits, ()).is_none() {
                cyclic_gens.push(i);
            }
        }
    }

    // A subgroup of more than half the order of the alternating (resp.
    // symmetric) group is the whole of it, so such closures stop early.
    let even: Vec<bool> = table.elements.iter().map(Permutation::is_even).collect();
    let full = table.size();
    let symmetric = table.extend(&trivial, &(0..full).collect::<Vec<_>>());
    let alternating = table.extend(&trivial, &(0..full).filter(|&i| even[i]).collect::<Vec<_>>());

    let mut index: HashMap<Bits, usize> = HashMap::new();
    index.insert(trivial.bits.clone(), 0);
    let mut found = vec![trivial];
    let mut head = 0;
    while head < found.len() {
        let h_even = found[head].gens.iter().all(|&g| even[g]);
        for &x in &cyclic_gens {
            if has(&found[head].bits, x) {
                continue;
            }
            let (bound, giant) = if h_even && even[x] {
                (full / 4, &alternating)
            } else {
                (full / 2, &symmetric)
            };
            let k = match table.extend_bounded(&found[head], &[x], bound) {
                Some(k) => k,
                None if index.contains_key(&giant.bits) => continue,
                None => giant.clone(),
            };
            if !index.contains_key(&k.bits) {
                index.insert(k.bits.clone(), found.len());
                found.push(k);
            }
        }
        head += 1;
    }

    for s in &mut found {
        s.elements.sort_unstable();
    }
    found.sort_by(|a, b| {
        a.elements
            .len()
            .cmp(&b.elements.len())
            .then_with(|| a.elements.cmp(&b.elements))
    });
    found
}

#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    /// The member with the lexicographically least element set.
    pub representative: PermGroup,
    pub order: u128,
    /// Number of subgroups in the class, i.e. the index of the normalizer.
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct SubgroupClasses {
    pub degree: usize,
    pub total_subgroups: usize,
    pub classes: Vec<ConjugacyClass>,
}

pub fn subgroup_classes(n: usize, options: &ClassifyOptions) -> Result<SubgroupClasses> {
    options.check(n)?;
    let table = SymTable::new(n)?;
    let subgroups = all_subgroups(&table);
    let lookup: HashMap<&Bits, usize> = subgroups.iter().enumerate().map(|(i, s)| (&s.bits, i)).collect();

    let mut assigned = vec![false; subgroups.len()];
    let mut classes = Vec::new();
    for (i, s) in subgroups.iter().enumerate() {
        if assigned[i] {
            continue;
        }
        let mut size = 0;
        for g in 0..table.size() {
            let j = lookup[&table.conjugate(s, g)];
            if !assigned[j] {
                assigned[j] = true;
                size += 1;
            }
        }
        let representative = table.to_group(&table.small_generating_set(s));
        classes.push(ConjugacyClass {
            order: s.elements.len() as u128,
            representative,
            size,
        });
    }
    Ok(SubgroupClasses {
        degree: n,
        total_subgroups: subgroups.len(),
        classes,
    })
}

/// One representative per conjugacy class of subgroups of the symmetric
/// group of degree `n`, ordered by group order, then by element set.
pub fn enumerate_subgroups(n: usize) -> Result<Vec<PermGroup>> {
    Ok(subgroup_classes(n, &ClassifyOptions::default())?
        .classes
        .into_iter()
        .map(|c| c.representative)
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RowVerdict {
    Rational,
    NotUnirational,
    /// Degree below 5, where the criterion is not established.
    OutOfScope,
}

impl fmt::Display for RowVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowVerdict::Rational => "Rational",
            RowVerdict::NotUnirational => "NotUnirational",
            RowVerdict::OutOfScope => "OutOfScope",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub class_id: usize,
    pub generators: Vec<String>,
    pub order: u128,
    pub orbit_sizes: Vec<usize>,
    pub sylow_order: u128,
    pub sylow_fixed_points: usize,
    pub verdict: RowVerdict,
}

impl ClassRow {
    pub fn has_odd_orbit(&self) -> bool {
        self.orbit_sizes.iter().any(|s| s % 2 == 1)
    }
}

fn row_for(class_id: usize, n: usize, g: &PermGroup) -> Result<ClassRow> {
    let orbit_sizes = g.orbits().sorted_sizes();
    let sylow = sylow_2(g)?;
    let sylow_fixed_points = sylow.sylow.fixed_points().len();
    let verdict = if n >= MIN_DEGREE {
        let v = decide(g)?;
        v.validate(g)?;
        match v.kind() {
            VerdictKind::Rational => RowVerdict::Rational,
            VerdictKind::NotUnirational => RowVerdict::NotUnirational,
        }
    } else {
        RowVerdict::OutOfScope
    };
    let row = ClassRow {
        class_id,
        generators: g.generators().iter().map(|p| p.to_string()).collect(),
        order: g.order(),
        orbit_sizes,
        sylow_order: sylow.sylow.order(),
        sylow_fixed_points,
        verdict,
    };

    if row.orbit_sizes.iter().sum::<usize>() != n {
        return Err(Error::Certificate(format!("class {class_id}: orbit sizes do not sum to {n}")));
    }
    if row.has_odd_orbit() != (row.sylow_fixed_points > 0) {
        return Err(Error::Certificate(format!(
            "class {class_id}: odd orbit and Sylow fixed point disagree"
        )));
    }
    if row.verdict != RowVerdict::OutOfScope && (row.verdict == RowVerdict::Rational) != row.has_odd_orbit() {
        return Err(Error::Certificate(format!("class {class_id}: verdict disagrees with orbit parity")));
    }
    Ok(row)
}

/// The verdict table over all conjugacy classes of subgroups.
pub fn tabulate(n: usize) -> Result<Vec<ClassRow>> {
    tabulate_with(n, &ClassifyOptions::default())
}

pub fn tabulate_with(n: usize, options: &ClassifyOptions) -> Result<Vec<ClassRow>> {
    let classes = subgroup_classes(n, options)?;
    classes
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| row_for(i + 1, n, &c.representative))
        .collect()
}

pub const CSV_HEADER: [&str; 7] = [
    "class_id",
    "generators",
    "order",
    "orbit_sizes",
    "sylow_order",
    "sylow_fixed_points",
    "verdict",
];

/// Writes rows as CSV. Generators are separated by `;`, orbit sizes by a
/// space.
pub fn write_csv<W: Write>(rows: &[ClassRow], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Input(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        let sizes: Vec<String> = r.orbit_sizes.iter().map(|s| s.to_string()).collect();
        w.write_record([
            r.class_id.to_string(),
            r.generators.join(";"),
            r.order.to_string(),
            sizes.join(" "),
            r.sylow_order.to_string(),
            r.sylow_fixed_points.to_string(),
            r.verdict.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Input(format!("csv: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_degree_class_counts() {
        let c1 = subgroup_classes(1, &ClassifyOptions::default()).unwrap();
        assert_eq!((c1.total_subgroups, c1.classes.len()), (1, 1));
        let c3 = subgroup_classes(3, &ClassifyOptions::default()).unwrap();
        assert_eq!((c3.total_subgroups, c3.classes.len()), (6, 4));
        let orders: Vec<u128> = c3.classes.iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn ceiling_is_enforced() {
        assert_eq!(
            subgroup_classes(7, &ClassifyOptions::default()).unwrap_err(),
            Error::DegreeAboveCeiling { degree: 7, max: 6 }
        );
        assert!(subgroup_classes(8, &ClassifyOptions { max_degree: 9 }).is_err());
    }

    #[test]
    fn prime_powers() {
        let pp: Vec<u64> = (1..=12).filter(|&m| is_prime_power(m)).collect();
        assert_eq!(pp, vec![2, 3, 4, 5, 7, 8, 9, 11]);
    }

    #[test]
    fn small_tables_mark_scope() {
        let rows = tabulate(4).unwrap();
        assert_eq!(rows.len(), 11);
        assert!(rows.iter().all(|r| r.verdict == RowVerdict::OutOfScope));
    }

    #[test]
    fn csv_layout() {
        let rows = tabulate(3).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "class_id,generators,order,orbit_sizes,sylow_order,sylow_fixed_points,verdict"
        );
        assert_eq!(lines.next().unwrap(), "1,,1,1 1 1,1,3,OutOfScope");
        assert_eq!(lines.count(), 3);
    }
}

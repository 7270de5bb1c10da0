//! Permutations of `{1, …, n}` and their cycle notation.
//!
//! All public interfaces are 1-indexed. Internally the image table is stored
//! 0-indexed in a `u8` slice, which bounds the degree by [`MAX_DEGREE`].
//!
//! Composition follows the "right factor acts first" convention everywhere:
//! `p.compose(&q)` maps `i` to `p(q(i))`, and the cycle string `"(1 2)(2 3)"`
//! denotes `(1 2) ∘ (2 3)`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported degree. `34!` is the largest factorial that fits in a
/// `u128`, so every group order of a supported degree is exact.
pub const MAX_DEGREE: usize = 34;

/// A bijection of `{1, …, n}` stored as an image table.
///
/// The derived ordering compares image tables lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u8]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Result<Self> {
        check_degree(degree)?;
        Ok(Self::identity_unchecked(degree))
    }

    pub(crate) fn identity_unchecked(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u8).collect(),
        }
    }

    /// Builds a permutation from a 1-indexed image table.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let degree = images.len();
        check_degree(degree)?;
        let mut seen = vec![false; degree];
        let mut table = Vec::with_capacity(degree);
        for &image in images {
            if image == 0 || image > degree {
                return Err(Error::PointOutOfRange {
                    point: image,
                    degree,
                });
            }
            if std::mem::replace(&mut seen[image - 1], true) {
                return Err(Error::NotBijection(degree));
            }
            table.push((image - 1) as u8);
        }
        Ok(Permutation {
            images: table.into_boxed_slice(),
        })
    }

    /// Builds a permutation from a 0-indexed table that is already known to
    /// be a bijection.
    pub(crate) fn from_raw(images: Vec<u8>) -> Self {
        debug_assert!({
            let mut sorted = images.clone();
            sorted.sort_unstable();
            sorted.iter().enumerate().all(|(i, &v)| i == v as usize)
        });
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    /// Parses cycle notation, e.g. `"(1 2)(3 4)"`. Overlapping cycles compose
    /// with the rightmost cycle applied first.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        parse_cycles(text, degree)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 1-indexed image table.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    /// Image of a 1-indexed point.
    pub fn apply(&self, point: usize) -> Result<usize> {
        if point == 0 || point > self.degree() {
            return Err(Error::PointOutOfRange {
                point,
                degree: self.degree(),
            });
        }
        Ok(self.images[point - 1] as usize + 1)
    }

    #[inline]
    pub(crate) fn img(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.mul(other))
    }

    /// Unchecked [`compose`](Self::compose); degrees must agree.
    #[inline]
    pub(crate) fn mul(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&j| self.images[j as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub(crate) fn conjugate_by(&self, g: &Permutation) -> Permutation {
        // (g p g⁻¹)(g(i)) = g(p(i))
        let mut out = vec![0u8; self.degree()];
        for i in 0..self.degree() {
            out[g.img(i)] = g.images[self.img(i)];
        }
        Permutation {
            images: out.into_boxed_slice(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// Tests whether the 0-indexed point is fixed.
    #[inline]
    pub(crate) fn fixes(&self, i: usize) -> bool {
        self.img(i) == i
    }

    /// First moved point, 0-indexed.
    pub(crate) fn first_moved(&self) -> Option<usize> {
        (0..self.degree()).find(|&i| !self.fixes(i))
    }

    pub fn pow(&self, mut exp: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Self::identity_unchecked(self.degree());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Nontrivial cycles, 1-indexed, each starting at its least point and
    /// listed by ascending least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.fixes(start) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.img(i);
            }
            out.push(cycle);
        }
        out
    }

    /// Element order: the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[n={}]", self.degree())
    }
}

pub(crate) fn check_degree(degree: usize) -> Result<()> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::InvalidDegree(degree));
    }
    Ok(())
}

/// Parses whitespace-tolerant cycle notation into a permutation of the given
/// degree. `""` and `"()"` both denote the identity.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
    check_degree(degree)?;
    let mut result = Permutation::identity_unchecked(degree);
    let mut current: Option<Vec<usize>> = None;
    let bytes = text.as_bytes();
    let mut pos = 0;

    while pos < bytes.len() {
        let c = bytes[pos];
        match c {
            b'(' => {
                if current.is_some() {
                    return Err(Error::parse(pos, "(", "nested parenthesis"));
                }
                current = Some(Vec::new());
                pos += 1;
            }
            b')' => {
                let cycle = current
                    .take()
                    .ok_or_else(|| Error::parse(pos, ")", "unmatched closing parenthesis"))?;
                let mut images: Vec<u8> = (0..degree as u8).collect();
                for (k, &p) in cycle.iter().enumerate() {
                    images[p] = cycle[(k + 1) % cycle.len()] as u8;
                }
                // Cycles read left to right; the rightmost acts first.
                result = result.mul(&Permutation::from_raw(images));
                pos += 1;
            }
            b'0'..=b'9' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let token = &text[start..pos];
                let cycle = current
                    .as_mut()
                    .ok_or_else(|| Error::parse(start, token, "point outside of a cycle"))?;
                let point: usize = token
                    .parse()
                    .map_err(|_| Error::parse(start, token, "integer too large"))?;
                if point == 0 || point > degree {
                    return Err(Error::PointOutOfRange { point, degree });
                }
                if cycle.contains(&(point - 1)) {
                    return Err(Error::RepeatedPoint(point));
                }
                cycle.push(point - 1);
            }
            c if c.is_ascii_whitespace() => pos += 1,
            _ => {
                let token: String = text[pos..].chars().take(1).collect();
                return Err(Error::parse(pos, token, "unexpected character"));
            }
        }
    }
    if current.is_some() {
        return Err(Error::parse(text.len(), "", "unclosed parenthesis"));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> Permutation {
        parse_cycles(text, n).unwrap()
    }

    #[test]
    fn parses_disjoint_cycles() {
        assert_eq!(p("(1 2)(3 4)", 5).images(), vec![2, 1, 4, 3, 5]);
        assert_eq!(p("(1 2 3)", 3).images(), vec![2, 3, 1]);
        assert_eq!(p("  ( 1  2 3 ) ", 3).images(), vec![2, 3, 1]);
    }

    #[test]
    fn parses_identity_forms() {
        assert_eq!(p("()", 3).images(), vec![1, 2, 3]);
        assert_eq!(p("", 3).images(), vec![1, 2, 3]);
        assert_eq!(p("(2)", 3).images(), vec![1, 2, 3]);
    }

    #[test]
    fn overlapping_cycles_apply_right_first() {
        // (1 2)∘(2 3): 1→1→2, 2→3→3, 3→2→1
        assert_eq!(p("(1 2)(2 3)", 3).images(), vec![2, 3, 1]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_cycles("(1 6)", 5),
            Err(Error::PointOutOfRange { point: 6, degree: 5 })
        );
        assert_eq!(parse_cycles("(0 1)", 5).unwrap_err(), Error::PointOutOfRange { point: 0, degree: 5 });
        assert_eq!(parse_cycles("(1 2 1)", 5), Err(Error::RepeatedPoint(1)));
        assert!(matches!(parse_cycles("(1 2", 5), Err(Error::Parse { .. })));
        assert!(matches!(parse_cycles("1 2)", 5), Err(Error::Parse { .. })));
        assert!(matches!(parse_cycles("((1 2))", 5), Err(Error::Parse { .. })));
        let err = parse_cycles("(1, 2)", 5).unwrap_err();
        assert!(matches!(&err, Error::Parse { token, .. } if token == ","));
        assert!(err.is_parse());
    }

    #[test]
    fn compose_convention_and_laws() {
        let a = p("(1 2)", 3);
        let b = p("(2 3)", 3);
        // hand-evaluated: i ↦ a(b(i)) gives 1→2, 2→3, 3→1
        assert_eq!(a.compose(&b).unwrap().images(), vec![2, 3, 1]);
        // and the other order: 1→3, 2→1, 3→2
        assert_eq!(b.compose(&a).unwrap().images(), vec![3, 1, 2]);
        let id = Permutation::identity(3).unwrap();
        assert_eq!(a.compose(&id).unwrap(), a);
        assert!(a.compose(&a.inverse()).unwrap().is_identity());
        assert_eq!(
            a.compose(&p("(1 2)", 4)),
            Err(Error::DegreeMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn display_round_trips() {
        let q = p("(3 1)(5 4 2)", 6);
        assert_eq!(q.to_string(), "(1 3)(2 5 4)");
        assert_eq!(p(&q.to_string(), 6), q);
        assert_eq!(Permutation::identity(4).unwrap().to_string(), "()");
    }

    #[test]
    fn from_images_validates() {
        assert!(Permutation::from_images(&[2, 1, 3]).is_ok());
        assert_eq!(Permutation::from_images(&[2, 2, 3]), Err(Error::NotBijection(3)));
        assert_eq!(Permutation::from_images(&[]), Err(Error::InvalidDegree(0)));
        assert!(Permutation::from_images(&[1, 4, 2]).is_err());
    }

    #[test]
    fn element_order_sign_and_conjugation() {
        assert_eq!(p("(1 2)(3 4 5)", 5).order(), 6);
        assert!(p("(1 2 3)", 3).is_even());
        assert!(!p("(1 2)", 3).is_even());
        let g = p("(1 3)", 3);
        let c = p("(1 2)", 3).conjugate_by(&g);
        assert_eq!(c, p("(2 3)", 3));
        let x = p("(1 2 3 4)", 4);
        assert_eq!(x.pow(2), p("(1 3)(2 4)", 4));
        assert!(x.pow(4).is_identity());
    }
}

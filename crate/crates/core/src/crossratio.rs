//! Exact arithmetic on the projective line over the rationals: points in
//! canonical homogeneous form, fractional linear transformations, and the
//! cross-ratio coordinates `[x1, x2, x3, xi]`, `i = 4..n`, of a point
//! configuration.
//!
//! Every difference `xi - xj` is evaluated as the 2×2 determinant of the
//! homogeneous pairs, so the point at infinity needs no special case.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A point `(num : den)` of the projective line, kept reduced with a
/// positive denominator; infinity is exactly `(1 : 0)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    num: BigInt,
    den: BigInt,
}

impl ProjPoint {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if num.is_zero() && den.is_zero() {
            return Err(Error::ZeroPoint);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: BigInt, den: BigInt) -> Self {
        if den.is_zero() {
            return Self::infinity();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        ProjPoint { num, den }
    }

    pub fn infinity() -> Self {
        ProjPoint {
            num: BigInt::one(),
            den: BigInt::zero(),
        }
    }

    pub fn from_integer(value: i64) -> Self {
        ProjPoint {
            num: value.into(),
            den: BigInt::one(),
        }
    }

    pub fn from_rational(value: &BigRational) -> Self {
        Self::canonical(value.numer().clone(), value.denom().clone())
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_infinity(&self) -> bool {
        self.den.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        (!self.is_infinity()).then(|| BigRational::new(self.num.clone(), self.den.clone()))
    }
}

/// `det(p, q) = p.num·q.den − q.num·p.den`, which equals `(p − q)` up to the
/// nonzero factor `p.den·q.den` for finite points.
fn det(p: &ProjPoint, q: &ProjPoint) -> BigInt {
    &p.num * &q.den - &q.num * &p.den
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            f.write_str("inf")
        } else if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjPoint({self})")
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Self::infinity());
        }
        let int = |t: &str, offset: usize| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::parse(offset, t, "expected an integer"))
        };
        match s.split_once('/') {
            None => Ok(ProjPoint::new(int(s, 0)?, 1)?),
            Some((n, d)) => ProjPoint::new(int(n, 0)?, int(d, n.len() + 1)?),
        }
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A fractional linear transformation `x ↦ (a x + b) / (c x + d)`.
///
/// Equality is equality in PGL₂: matrices that differ by a nonzero scalar
/// are equal.
#[derive(Clone, Debug)]
pub struct Mobius {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
}

impl Mobius {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn from_integers(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let r = |v: i64| BigRational::from_integer(v.into());
        Self::new(r(a), r(b), r(c), r(d))
    }

    pub fn identity() -> Self {
        Self::from_integers(1, 0, 0, 1).expect("nonsingular")
    }

    pub fn entries(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn scaled(&self, lambda: &BigRational) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Mobius {
            a: &self.a * lambda,
            b: &self.b * lambda,
            c: &self.c * lambda,
            d: &self.d * lambda,
        })
    }

    /// The matrix scaled to integer entries.
    fn integer_matrix(&self) -> [BigInt; 4] {
        let l = self
            .entries()
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        self.entries()
            .map(|e| e.numer() * (&l / e.denom()))
    }

    /// Homogeneous image `(a·num + b·den : c·num + d·den)`.
    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let [a, b, c, d] = self.integer_matrix();
        let num = &a * &p.num + &b * &p.den;
        let den = &c * &p.num + &d * &p.den;
        ProjPoint::new(num, den).expect("invertible matrix maps nonzero vectors to nonzero vectors")
    }

    /// The transformation sending `p1 ↦ 0`, `p2 ↦ ∞`, `p3 ↦ 1`, which is
    /// `x ↦ [p1, p2, p3, x]`.
    pub fn frame_map(p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> Result<Self> {
        ensure_distinct(&[p1, p2, p3])?;
        let k1 = det(p3, p2);
        let k2 = det(p3, p1);
        let r = |v: BigInt| BigRational::from_integer(v);
        Mobius::new(
            r(&k1 * &p1.den),
            r(-(&k1 * &p1.num)),
            r(&k2 * &p2.den),
            r(-(&k2 * &p2.num)),
        )
    }
}

impl PartialEq for Mobius {
    fn eq(&self, other: &Self) -> bool {
        let u = self.entries();
        let v = other.entries();
        (0..4).all(|i| (i + 1..4).all(|j| u[i] * v[j] == u[j] * v[i]))
    }
}

impl Eq for Mobius {}

fn ensure_distinct(points: &[&ProjPoint]) -> Result<()> {
    let mut seen = std::collections::HashSet::with_capacity(points.len());
    if points.iter().all(|p| seen.insert(*p)) {
        Ok(())
    } else {
        Err(Error::CoincidentPoints)
    }
}

/// `[p1, p2, p3, p4] = (x4 − x1)(x3 − x2) / ((x4 − x2)(x3 − x1))`.
pub fn cross_ratio(p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint, p4: &ProjPoint) -> Result<ProjPoint> {
    ensure_distinct(&[p1, p2, p3, p4])?;
    // The scale factors den1·den2·den3·den4 agree on top and bottom.
    let num = det(p4, p1) * det(p3, p2);
    let den = det(p4, p2) * det(p3, p1);
    Ok(ProjPoint::canonical(num, den))
}

/// The `n − 3` cross-ratios `[x1, x2, x3, xi]`, `i = 4..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossRatioTuple {
    pub degree: usize,
    pub values: Vec<ProjPoint>,
}

pub fn kn_coordinates(points: &[ProjPoint]) -> Result<CrossRatioTuple> {
    if points.len() < 4 {
        return Err(Error::TooFewPoints(points.len()));
    }
    ensure_distinct(&points.iter().collect::<Vec<_>>())?;
    let (x1, x2, x3) = (&points[0], &points[1], &points[2]);
    let values = points[3..]
        .iter()
        .map(|xi| cross_ratio(x1, x2, x3, xi))
        .collect::<Result<_>>()?;
    Ok(CrossRatioTuple {
        degree: points.len(),
        values,
    })
}

/// Whether the cross-ratio coordinates are unchanged by applying `m` to
/// every point.
pub fn check_invariance(points: &[ProjPoint], m: &Mobius) -> Result<bool> {
    let before = kn_coordinates(points)?;
    let moved: Vec<ProjPoint> = points.iter().map(|p| m.apply(p)).collect();
    Ok(kn_coordinates(&moved)? == before)
}

/// Point `i` of the result is point `sigma(i)` of the input.
pub fn permute_points(points: &[ProjPoint], sigma: &Permutation) -> Result<Vec<ProjPoint>> {
    if sigma.degree() != points.len() {
        return Err(Error::DegreeMismatch {
            left: points.len(),
            right: sigma.degree(),
        });
    }
    Ok((0..points.len()).map(|i| points[sigma.img(i)].clone()).collect())
}

/// Well-definedness of the permutation action on cross-ratio coordinates:
/// configurations with equal coordinates must still have equal coordinates
/// after both are permuted by `sigma`. Vacuously true when the coordinates
/// differ to begin with.
pub fn check_descended_action(a: &[ProjPoint], b: &[ProjPoint], sigma: &Permutation) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DegreeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if kn_coordinates(a)? != kn_coordinates(b)? {
        permute_points(a, sigma)?;
        return Ok(true);
    }
    Ok(kn_coordinates(&permute_points(a, sigma)?)? == kn_coordinates(&permute_points(b, sigma)?)?)
}

/// Bounds for random points: numerators in `-numerator..=numerator`,
/// denominators in `1..=denominator`, and infinity drawn with probability
/// `1 / infinity_one_in`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SamplingBounds {
    pub numerator: i64,
    pub denominator: i64,
    pub infinity_one_in: u32,
}

impl Default for SamplingBounds {
    fn default() -> Self {
        SamplingBounds {
            numerator: 50,
            denominator: 20,
            infinity_one_in: 20,
        }
    }
}

impl SamplingBounds {
    fn rational<R: Rng>(&self, rng: &mut R) -> BigRational {
        let n = rng.gen_range(-self.numerator..=self.numerator);
        let d = rng.gen_range(1..=self.denominator);
        BigRational::new(n.into(), d.into())
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> ProjPoint {
        if self.infinity_one_in > 0 && rng.gen_range(0..self.infinity_one_in) == 0 {
            return ProjPoint::infinity();
        }
        ProjPoint::from_rational(&self.rational(rng))
    }

    /// `n` pairwise distinct points; collisions are redrawn.
    pub fn random_configuration<R: Rng>(&self, rng: &mut R, n: usize) -> Vec<ProjPoint> {
        let mut out: Vec<ProjPoint> = Vec::with_capacity(n);
        while out.len() < n {
            let p = self.random_point(rng);
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    pub fn random_mobius<R: Rng>(&self, rng: &mut R) -> Mobius {
        loop {
            let [a, b, c, d] = [(); 4].map(|_| self.rational(rng));
            if let Ok(m) = Mobius::new(a, b, c, d) {
                return m;
            }
        }
    }
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut images: Vec<u8> = (0..n as u8).collect();
    images.shuffle(rng);
    Permutation::from_raw(images)
}

/// Seed used by sweeps when none is given.
pub const DEFAULT_SEED: u64 = 20_190_417;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub degree: usize,
    pub trials: usize,
    pub invariance_passed: usize,
    pub invariance_failed: usize,
    pub descended_passed: usize,
    pub descended_failed: usize,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.invariance_failed == 0 && self.descended_failed == 0
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {} degree {} trials {}", self.seed, self.degree, self.trials)?;
        writeln!(
            f,
            "invariance: {} passed, {} failed",
            self.invariance_passed, self.invariance_failed
        )?;
        write!(
            f,
            "descended action: {} passed, {} failed",
            self.descended_passed, self.descended_failed
        )
    }
}

/// Randomized exact checks of PGL₂-invariance and of the descended
/// permutation action. Each trial draws a configuration, a transformation
/// `m` and a permutation `sigma`, checks invariance under `m`, then checks
/// the descended action on the configuration and its image under `m`.
pub fn crossratio_sweep(seed: u64, trials: usize, degree: usize, bounds: &SamplingBounds) -> Result<SweepReport> {
    if degree < 4 {
        return Err(Error::TooFewPoints(degree));
    }
    crate::perm::check_degree(degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SweepReport {
        seed,
        degree,
        trials,
        invariance_passed: 0,
        invariance_failed: 0,
        descended_passed: 0,
        descended_failed: 0,
    };
    for _ in 0..trials {
        let points = bounds.random_configuration(&mut rng, degree);
        let m = bounds.random_mobius(&mut rng);
        let sigma = random_permutation(&mut rng, degree);
        if check_invariance(&points, &m)? {
            report.invariance_passed += 1;
        } else {
            report.invariance_failed += 1;
        }
        let image: Vec<ProjPoint> = points.iter().map(|p| m.apply(p)).collect();
        if check_descended_action(&points, &image, &sigma)? {
            report.descended_passed += 1;
        } else {
            report.descended_failed += 1;
        }
    }
    Ok(report)
}

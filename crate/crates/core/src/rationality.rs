//! The orbit-parity decision procedure.
//!
//! For a subgroup `S` of the symmetric group of degree `n ≥ 5`, the fixed
//! field `L_n^S` is rational over `K_n^S` exactly when `S` has an orbit of odd
//! size on `{1, …, n}`, and otherwise it is not even unirational. A verdict
//! carries a certificate for either outcome:
//!
//! * rational: an orbit of odd size;
//! * not unirational: a 2-Sylow subgroup `P` of `S` without fixed points,
//!   and for each orbit of `P` an index-2 subgroup `H_i ⊲ P` containing the
//!   stabilizer of the orbit's representative.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::two_group::{index2_over, sylow_2, Index2Witness, SylowWitness};

/// Smallest degree for which the criterion is established.
pub const MIN_DEGREE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictKind {
    Rational,
    NotUnirational,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictKind::Rational => "Rational",
            VerdictKind::NotUnirational => "NotUnirational",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddOrbitCertificate {
    /// Sorted, 1-indexed.
    pub orbit: Vec<usize>,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonRationalityCertificate {
    #[serde(flatten)]
    pub sylow: SylowWitness,
    /// Always empty for a valid certificate; recorded for auditing.
    pub fixed_points: Vec<usize>,
    pub witnesses: Vec<Index2Witness>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", content = "certificate")]
pub enum Verdict {
    Rational(OddOrbitCertificate),
    NotUnirational(NonRationalityCertificate),
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Rational(_) => VerdictKind::Rational,
            Verdict::NotUnirational(_) => VerdictKind::NotUnirational,
        }
    }

    /// Re-checks the certificate against `s` using only orbit, membership
    /// and order computations.
    pub fn validate(&self, s: &PermGroup) -> Result<()> {
        match self {
            Verdict::Rational(cert) => {
                if cert.size % 2 == 0 || cert.size != cert.orbit.len() {
                    return Err(Error::Certificate(format!("orbit size {} is not odd", cert.size)));
                }
                let first = *cert
                    .orbit
                    .first()
                    .ok_or_else(|| Error::Certificate("empty orbit".into()))?;
                if s.orbit(first)? != cert.orbit {
                    return Err(Error::Certificate("recorded set is not an orbit".into()));
                }
                Ok(())
            }
            Verdict::NotUnirational(cert) => {
                cert.sylow.validate(s)?;
                let p = &cert.sylow.sylow;
                if !p.fixed_points().is_empty() || !cert.fixed_points.is_empty() {
                    return Err(Error::Certificate("Sylow subgroup has a fixed point".into()));
                }
                let orbits = p.orbits();
                if orbits.orbits.len() != cert.witnesses.len() {
                    return Err(Error::Certificate(format!(
                        "{} witnesses for {} orbits",
                        cert.witnesses.len(),
                        orbits.orbits.len()
                    )));
                }
                for (orbit, witness) in orbits.orbits.iter().zip(&cert.witnesses) {
                    witness.validate(p)?;
                    // The recorded generators must generate the full stabilizer.
                    let recorded = PermGroup::new(p.degree(), witness.stabilizer.clone())?;
                    let actual = p.stabilizer(orbit.representative)?;
                    if !recorded.same_elements(&actual) {
                        return Err(Error::Certificate(format!(
                            "witness stabilizer is not the stabilizer of point {}",
                            orbit.representative
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n < MIN_DEGREE {
        return Err(Error::DegreeBelowFive(n));
    }
    Ok(())
}

/// Decides rationality of `L_n^S / K_n^S` for `S` of degree at least 5.
pub fn decide(s: &PermGroup) -> Result<Verdict> {
    check_degree(s.degree())?;
    let orbits = s.orbits();
    if let Some(odd) = orbits.first_odd() {
        return Ok(Verdict::Rational(OddOrbitCertificate {
            orbit: odd.members.clone(),
            size: odd.len(),
        }));
    }
    let sylow = sylow_2(s)?;
    let fixed_points = sylow.sylow.fixed_points();
    let witnesses = witness_nonrational(&sylow.sylow)?;
    Ok(Verdict::NotUnirational(NonRationalityCertificate {
        sylow,
        fixed_points,
        witnesses,
    }))
}

/// The 2-Sylow reduction: returns the Sylow witness and whether "`s` has an
/// odd orbit" agrees with "the Sylow subgroup has a fixed point".
pub fn reduce_to_sylow(s: &PermGroup) -> Result<(SylowWitness, bool)> {
    let sylow = sylow_2(s)?;
    let has_odd_orbit = s.orbits().first_odd().is_some();
    let has_fixed_point = !sylow.sylow.fixed_points().is_empty();
    Ok((sylow, has_odd_orbit == has_fixed_point))
}

/// One index-2 witness per orbit of a fixed-point-free 2-group.
pub fn witness_nonrational(p: &PermGroup) -> Result<Vec<Index2Witness>> {
    check_degree(p.degree())?;
    let order = p.order();
    if !order.is_power_of_two() {
        return Err(Error::NotTwoGroup(order));
    }
    if let Some(&fixed) = p.fixed_points().first() {
        return Err(Error::HasFixedPoint(fixed));
    }
    p.orbits()
        .orbits
        .iter()
        .map(|orbit| {
            let stabilizer = p.stabilizer(orbit.representative)?.reduced();
            index2_over(p, &stabilizer)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::from_cycles(n, gens).unwrap()
    }

    #[test]
    fn decide_examples() {
        let s5 = group(5, &["(1 2)", "(1 2 3 4 5)"]);
        let v = decide(&s5).unwrap();
        assert_eq!(v.kind(), VerdictKind::Rational);
        v.validate(&s5).unwrap();

        let e = group(6, &["(1 2)", "(3 4)", "(5 6)"]);
        let v = decide(&e).unwrap();
        assert_eq!(v.kind(), VerdictKind::NotUnirational);
        v.validate(&e).unwrap();
        let Verdict::NotUnirational(cert) = &v else { unreachable!() };
        assert_eq!(cert.witnesses.len(), 3);

        let g = group(5, &["(1 2)(3 4)"]);
        let v = decide(&g).unwrap();
        let Verdict::Rational(cert) = &v else { panic!("expected rational") };
        assert_eq!(cert.orbit, vec![5]);
    }

    #[test]
    fn trivial_group_is_rational() {
        let v = decide(&group(5, &[])).unwrap();
        let Verdict::Rational(cert) = v else { panic!() };
        assert_eq!(cert.orbit, vec![1]);
    }

    #[test]
    fn small_degree_refused() {
        assert_eq!(decide(&group(4, &["(1 2)"])).unwrap_err(), Error::DegreeBelowFive(4));
        assert!(decide(&group(4, &["(1 2)"])).unwrap_err().to_string().contains("n >= 5"));
    }

    #[test]
    fn reduce_examples() {
        let s5 = group(5, &["(1 2)", "(1 2 3 4 5)"]);
        let (w, agree) = reduce_to_sylow(&s5).unwrap();
        assert_eq!(w.sylow.order(), 8);
        assert_eq!(w.sylow.fixed_points().len(), 1);
        assert!(agree);

        let c2 = group(5, &["(1 2)"]);
        let (w, agree) = reduce_to_sylow(&c2).unwrap();
        assert!(w.sylow.same_elements(&c2));
        assert!(agree);

        let e = group(6, &["(1 2)", "(3 4)", "(5 6)"]);
        let (w, agree) = reduce_to_sylow(&e).unwrap();
        assert!(w.sylow.same_elements(&e));
        assert!(w.sylow.fixed_points().is_empty());
        assert!(agree);
    }

    #[test]
    fn witness_examples() {
        let e = group(6, &["(1 2)", "(3 4)", "(5 6)"]);
        let ws = witness_nonrational(&e).unwrap();
        assert_eq!(ws.len(), 3);
        for w in &ws {
            w.validate(&e).unwrap();
            assert_eq!(w.subgroup_group().order(), 4);
            assert_eq!(PermGroup::new(6, w.stabilizer.clone()).unwrap().order(), 4);
        }

        let p = group(6, &["(1 2)(3 4)(5 6)", "(1 3)(2 4)"]);
        assert!(p.is_two_group());
        let ws = witness_nonrational(&p).unwrap();
        assert_eq!(ws.len(), p.orbits().orbits.len());
        for w in &ws {
            w.validate(&p).unwrap();
        }

        assert_eq!(
            witness_nonrational(&group(5, &["(1 2)"])).unwrap_err(),
            Error::HasFixedPoint(3)
        );
        assert_eq!(
            witness_nonrational(&group(6, &["(1 2 3)(4 5 6)"])).unwrap_err(),
            Error::NotTwoGroup(3)
        );
    }

    #[test]
    fn tampered_certificates_fail() {
        let e = group(6, &["(1 2)", "(3 4)", "(5 6)"]);
        let v = decide(&e).unwrap();
        // A rational claim with an even "orbit".
        let fake = Verdict::Rational(OddOrbitCertificate { orbit: vec![1, 2, 3], size: 3 });
        assert!(fake.validate(&e).is_err());
        let Verdict::NotUnirational(mut cert) = v else { panic!() };
        cert.witnesses.pop();
        assert!(Verdict::NotUnirational(cert).validate(&e).is_err());
    }

    #[test]
    fn verdict_json_shape() {
        let g = group(5, &["(1 2)(3 4)"]);
        let json = serde_json::to_value(decide(&g).unwrap()).unwrap();
        assert_eq!(json["kind"], "Rational");
        assert_eq!(json["certificate"]["orbit"], serde_json::json!([5]));

        let e = group(6, &["(1 2)", "(3 4)", "(5 6)"]);
        let json = serde_json::to_value(decide(&e).unwrap()).unwrap();
        assert_eq!(json["kind"], "NotUnirational");
        assert_eq!(json["certificate"]["index"], 1);
        assert_eq!(json["certificate"]["sylow"]["degree"], 6);
        let w = &json["certificate"]["witnesses"][0];
        assert_eq!(w["index"], 2);
        assert_eq!(w["normal"], true);
        assert!(w["H"].is_array());
        assert!(w["stabilizer"].is_array());
    }
}

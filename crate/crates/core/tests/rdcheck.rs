use num_bigint::BigInt;
use num_rational::BigRational;
use qgrd::fusion::*;
use qgrd::length::*;
use qgrd::rdcheck::*;
use qgrd::QgrdError;

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn suq2(p: i64, q: i64) -> SUq2Dual {
    SUq2Dual::new(ratio(p, q)).unwrap()
}

fn lie(g: &str) -> CompactLieDual {
    CompactLieDual::new(RootData::named(g).unwrap())
}

fn words(ring: &dyn FusionRing, radius: u32) -> LengthSpec {
    word_length_table(ring, &ring.generators(), radius, 2_000_000).unwrap()
}

fn quick() -> DiagnoseOptions {
    DiagnoseOptions { tech_ao_max_sum: 2, ..Default::default() }
}

#[test]
fn modular_obstruction_follows_a_power_law() {
    let m = nonunimodular_obstruction(&suq2(1, 2), 6).unwrap();
    assert_eq!(m.rate, ratio(2, 1));
    assert!(m.exact_power_law);
    let want: Vec<String> = (0..=6).map(|n| (1u64 << n).to_string()).collect();
    assert_eq!(m.norms, want);
    assert!(!m.is_unimodular());

    let m = nonunimodular_obstruction(&suq2(3, 4), 4).unwrap();
    assert_eq!(m.rate, ratio(4, 3));
    assert_eq!(m.norms[3], "64/27");

    for ring in [&OrthogonalFree::new(3).unwrap() as &dyn FusionRing, &FreeGroupDual::new(2).unwrap(), &lie("SU(3)")] {
        let m = nonunimodular_obstruction(ring, 4).unwrap();
        assert!(m.is_unimodular(), "{}", ring.describe());
        assert_eq!(m.rate, ratio(1, 1));
    }
}

#[test]
fn growth_certificates() {
    let su2 = lie("SU(2)");
    let c = growth_certificate(&su2, &LengthSpec::natural(&su2, 16).unwrap(), 0.05).unwrap();
    assert_eq!(c.s, 1.0);
    assert_eq!(c.c, 1.0);

    let su3 = lie("SU(3)");
    let spec = LengthSpec::natural(&su3, 20).unwrap();
    let c = growth_certificate(&su3, &spec, 0.05).unwrap();
    assert!(c.s > 0.0 && c.c.is_finite());
    assert!(c.bound.holds(&growth_profile(&su3, &spec).unwrap()));

    let ao3 = OrthogonalFree::new(3).unwrap();
    let err = growth_certificate(&ao3, &words(&ao3, 16), 0.05).unwrap_err();
    assert_eq!(err, QgrdError::NotPolynomial);
    assert_eq!(err.to_string(), "classification not polynomial");
}

#[test]
fn au_factorizations_are_injective() {
    let au = UnitaryFree::new(2).unwrap();
    let count = verify_au_bijection(&au, 3).unwrap();
    assert!(count > 0);
}

#[test]
fn verdicts_of_the_examples() {
    let v = diagnose(&suq2(1, 2), &LengthSpec::natural(&suq2(1, 2), 12).unwrap(), &quick(), 0);
    assert_eq!((v.outcome, v.criterion), (Outcome::RefutedRD, Some(Criterion::NonUnimodular)));
    assert_eq!(v.evidence.modular.as_ref().unwrap().rate, ratio(2, 1));

    let su2 = lie("SU(2)");
    let v = diagnose(&su2, &LengthSpec::natural(&su2, 16).unwrap(), &quick(), 0);
    assert_eq!((v.outcome, v.criterion), (Outcome::CertifiedRD, Some(Criterion::PolynomialGrowth)));

    let z = FreeGroupDual::new(1).unwrap();
    let v = diagnose(&z, &words(&z, 14), &quick(), 0);
    assert_eq!((v.outcome, v.criterion), (Outcome::CertifiedRD, Some(Criterion::PolynomialGrowth)));

    let ao3 = OrthogonalFree::new(3).unwrap();
    let v = diagnose(&ao3, &words(&ao3, 14), &quick(), 0);
    assert_eq!((v.outcome, v.criterion), (Outcome::CertifiedRD, Some(Criterion::TheoremAO)));
    let grid = v.evidence.tech_ao.as_ref().unwrap();
    assert!(grid.complete && grid.max_ratio() <= 1.0 + 1e-6);
    assert!(v.evidence.certificate.is_none());

    let au = UnitaryFree::new(2).unwrap();
    let v = diagnose(&au, &words(&au, 12), &quick(), 0);
    assert_eq!((v.outcome, v.criterion), (Outcome::CertifiedRD, Some(Criterion::TheoremAU)));
    assert!(v.evidence.unitary.as_ref().unwrap().triangle_bounds_hold);

    let f2 = FreeGroupDual::new(2).unwrap();
    let v = diagnose(&f2, &words(&f2, 12), &quick(), 0);
    assert_eq!((v.outcome, v.criterion), (Outcome::Indeterminate, Some(Criterion::BlockNormEvidence)));
    assert!(!v.evidence.block_norms.is_empty());
    assert!(v.evidence.block_norms.iter().all(|r| r.max_ratio <= 1.0 + 1e-12));
}

#[test]
fn short_radius_leaves_growth_undecided() {
    let su2 = lie("SU(2)");
    let v = diagnose(&su2, &LengthSpec::natural(&su2, 6).unwrap(), &quick(), 0);
    assert_eq!(v.outcome, Outcome::Indeterminate);
    assert!(v.reasons.iter().any(|r| r.starts_with("growth")));
}

#[test]
fn verdicts_are_deterministic_and_round_trip() {
    let ao3 = OrthogonalFree::new(3).unwrap();
    let spec = words(&ao3, 14);
    let a = diagnose(&ao3, &spec, &quick(), 7);
    let b = diagnose(&ao3, &spec, &quick(), 7);
    let json = serde_json::to_string(&a).unwrap();
    assert_eq!(json, serde_json::to_string(&b).unwrap());
    let back: RdVerdict = serde_json::from_str(&json).unwrap();
    assert_eq!(back, a);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    for key in ["outcome", "criterion", "evidence", "tool_version", "seed", "schema_version"] {
        assert!(value.get(key).is_some(), "{key}");
    }
    assert_eq!(value["tool_version"], TOOL_VERSION);
}

#[test]
fn certificates_and_refutations_are_exclusive() {
    let rings: Vec<(Box<dyn FusionRing>, LengthSpec)> = vec![
        (Box::new(suq2(1, 2)), LengthSpec::natural(&suq2(1, 2), 12).unwrap()),
        (Box::new(suq2(3, 4)), LengthSpec::natural(&suq2(3, 4), 12).unwrap()),
        (Box::new(lie("SU(2)")), LengthSpec::natural(&lie("SU(2)"), 14).unwrap()),
        (Box::new(lie("SU(3)")), LengthSpec::natural(&lie("SU(3)"), 14).unwrap()),
    ];
    for (ring, spec) in &rings {
        let refuted = !nonunimodular_obstruction(ring.as_ref(), 6).unwrap().is_unimodular();
        let certified = growth_certificate(ring.as_ref(), spec, 0.05).is_ok();
        assert!(!(refuted && certified), "{}", ring.describe());
        let v = diagnose(ring.as_ref(), spec, &quick(), 1);
        // evidence re-validates
        if let Some(c) = &v.evidence.certificate {
            assert!(c.bound.holds(&v.evidence.growth.as_ref().unwrap().profile));
        }
        if let Some(m) = &v.evidence.modular {
            let fresh = nonunimodular_obstruction(ring.as_ref(), m.norms.len() as u32 - 1).unwrap();
            assert_eq!(&fresh, m);
        }
    }
}
